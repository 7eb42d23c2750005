//! The alternator subalgebra of `M_2(F2(t))` with the involution adjoint to `⟨1, t⟩`.

use involab::expr::parse_element;
use involab::forms::BilinearForm;
use involab::{alternator, AlgebraWithInvolution, FieldTower};

fn main() -> involab::Result<()> {
    let f = FieldTower::rational(&["t"])?;
    let b = BilinearForm::diagonal(&f, &[f.one(), parse_element(&f, "t")?]);
    let a = AlgebraWithInvolution::matrix_algebra_adjoint(&b)?;

    let (sym, alt) = a.sym_alt();
    println!("dim Sym = {}, dim Alt = {}, {}", sym.dim(), alt.dim(), a.classify_type());

    let report = alternator(&a, 0, 0)?;
    println!("dim S = {}", report.dim_s);
    for (x, q) in report.s().basis().iter().zip(report.q_values()) {
        println!("  q({}) = {}", a.format_element(x), f.format(q));
    }
    let x = a.parse_element("t*E12 + E21")?;
    println!("q(t*E12 + E21) = {}", f.format(&report.alternator.q(&a, &x).expect("x lies in S")));
    println!("direct {}, decomposable {:?}", report.direct, report.decomposable);
    Ok(())
}
