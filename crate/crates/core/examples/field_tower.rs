//! Builds towers over GF(2) and decomposes elements along the 2-basis.

use involab::expr::parse_element;
use involab::FieldTower;

fn main() -> involab::Result<()> {
    let f = FieldTower::parse("GF(2)", &["rat:s", "rat:t"])?;
    println!("F = {f}, 2-basis {:?}", f.two_basis_names());

    let x = parse_element(&f, "s^3*t + t^2 + s")?;
    let coords = f.frobenius_decompose(&x);
    for (c, b) in coords.iter().zip(f.two_basis_names()) {
        println!("  ({})^2 * {b}", f.format(c));
    }

    let k = f.extend_parsed("as:t")?.extend_parsed("odd:x^3+x+1")?;
    println!("K = {k}, [K:F] = {:?}, separable {}", k.degree_over(&f), k.is_separable_over(&f));
    println!("2-basis over K {:?}", k.two_basis_names());

    let l = f.extend_parsed("insep:t")?;
    println!("L = {l}, 2-basis {:?}", l.two_basis_names());
    let r = l.symbol_element(&l.symbols().last().unwrap().clone()).unwrap();
    println!("square of the new generator: {}", l.format(&l.square(&r)));
    Ok(())
}
