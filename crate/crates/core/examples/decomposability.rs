//! Total decomposability of split involutions in degree 4, with the
//! determinant of the adjoint form as an independent check.

use involab::alternator::totally_decomposable_anisotropic;
use involab::expr::parse_element;
use involab::forms::{determinant_is_square, is_similar_to_pfister, BilinearForm};
use involab::{AlgebraWithInvolution, FieldTower};

fn analyze(vars: &[&str], form: &[&str]) -> involab::Result<()> {
    let f = FieldTower::rational(vars)?;
    let values = form.iter().map(|x| parse_element(&f, x)).collect::<involab::Result<Vec<_>>>()?;
    let b = BilinearForm::diagonal(&f, &values);
    let a = AlgebraWithInvolution::matrix_algebra_adjoint(&b)?;
    let (verdict, certificates) = totally_decomposable_anisotropic(&a)?;
    println!("<{}> over {f}", form.join(", "));
    println!("  verdict {verdict:?}");
    for c in certificates {
        println!("  certificate {}: {}", c.name, c.passed);
    }
    println!("  det square {}, Pfister closure test {}", determinant_is_square(&b), is_similar_to_pfister(&b)?);
    Ok(())
}

fn main() -> involab::Result<()> {
    analyze(&["s", "t"], &["1", "s", "t", "s*t"])?;
    analyze(&["s", "t", "u"], &["1", "s", "t", "u"])?;
    // the closure test alone accepts this form; the determinant rules it out
    analyze(&["s", "t"], &["1", "s", "t", "s+t+s*t"])
}
