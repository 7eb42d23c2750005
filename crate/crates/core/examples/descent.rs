//! `S` is stable under separable extensions and can grow under inseparable ones.

use involab::alternator::{inseparable_jump, verify_separable_descent};
use involab::expr::parse_element;
use involab::forms::BilinearForm;
use involab::{AlgebraWithInvolution, FieldTower};

fn main() -> involab::Result<()> {
    let f = FieldTower::rational(&["t"])?;
    let b = BilinearForm::diagonal(&f, &[f.one(), parse_element(&f, "t")?]);
    let a = AlgebraWithInvolution::matrix_algebra_adjoint(&b)?;

    for layers in [&["as:t"][..], &["odd:x^3+x+1"], &["odd:x^5+x^2+1"], &["as:t", "odd:x^3+x+1"]] {
        let k = layers.iter().try_fold(f.clone(), |k, l| k.extend_parsed(l))?;
        let d = verify_separable_descent(&a, &k)?;
        println!("{:<24} dim S {} -> {}, equal {}, q agrees {}", layers.join(", "), d.dim_f, d.dim_k, d.equal, d.q_agree);
    }

    let k = f.extend_parsed("insep:t")?;
    let j = inseparable_jump(&a, &k)?;
    println!("{:<24} dim S {} -> {}, containment {}", "insep:t", j.dim_f, j.dim_k, j.containment);
    Ok(())
}
