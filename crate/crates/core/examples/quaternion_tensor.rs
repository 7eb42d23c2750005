//! Orthogonal involutions on quaternion algebras over F2(s, t) and their tensor product.

use involab::expr::parse_element;
use involab::{alternator, AlgebraWithInvolution, FieldTower};

fn twisted(f: &FieldTower, a: &str, c: &str) -> involab::Result<AlgebraWithInvolution> {
    let q = AlgebraWithInvolution::quaternion(f, &parse_element(f, a)?, &parse_element(f, c)?)?;
    let v = q.parse_element("v")?;
    q.twist(&v)
}

fn main() -> involab::Result<()> {
    let f = FieldTower::rational(&["s", "t"])?;
    let q1 = twisted(&f, "t", "s")?;
    let q2 = twisted(&f, "s", "t")?;
    for (name, a) in [("Q1", &q1), ("Q2", &q2), ("Q1 (x) Q2", &q1.tensor(&q2)?)] {
        let r = alternator(a, 500, 1)?;
        let basis: Vec<String> = r.s().basis().iter().map(|x| a.format_element(x)).collect();
        let q: Vec<String> = r.q_values().iter().map(|x| f.format(x)).collect();
        println!("{name}: dim A {}, {}, dim S {}", a.dim(), a.classify_type(), r.dim_s);
        println!("  S = span {basis:?}");
        println!("  q = <{}>", q.join(", "));
        println!("  anisotropy {:?}, decomposable {:?}", r.anisotropy, r.decomposable);
    }
    Ok(())
}
