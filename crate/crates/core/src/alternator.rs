//! The alternator subalgebra `S(A, σ) = {x : σ(x)·x ∈ F ⊕ Alt(A, σ)}` and
//! its totally singular form `q_σ`, where `σ(x)·x + q_σ(x) ∈ Alt(A, σ)`.
//!
//! The map `x ↦ σ(x)·x` is additive modulo `Alt` and scales by `λ²`, so
//! `S` is the kernel of a Frobenius-semilinear map into `A / (Alt + F·1)`
//! and is computed with [`semilinear_kernel`].

use rayon::prelude::*;
use serde::Serialize;

use crate::algebras::{AlgebraWithInvolution, InvolutionType, IsotropyOutcome};
use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldTower};
use crate::forms::{determinant_is_square, is_similar_to_pfister, TotallySingularForm};
use crate::linalg::{semilinear_kernel, Subspace, Vector};

/// Upper bound on `|A|` for exhaustive enumeration.
pub const ENUMERATION_CAP: u64 = 1 << 20;

/// Where the anisotropy of `σ` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Split algebra: decided exactly on the adjoint form.
    CertifiedSplit,
    /// `σ` is direct, hence anisotropic.
    CertifiedDirect,
    /// Randomized search found no isotropic vector.
    SearchedNoWitness,
    /// Taken as an input assumption.
    Asserted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Anisotropy {
    Anisotropic(Provenance),
    Isotropic { witness: Vector },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "reason")]
pub enum Verdict {
    Decomposable(bool),
    NotApplicable(String),
}

impl Verdict {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Verdict::Decomposable(b) => Some(*b),
            Verdict::NotApplicable(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
}

impl Certificate {
    fn new(name: &str, passed: bool) -> Self {
        Certificate { name: name.to_string(), passed }
    }
}

/// `S(A, σ)` with `q_σ` evaluated on its canonical basis.
#[derive(Clone, Debug)]
pub struct Alternator {
    sym: Subspace,
    alt: Subspace,
    s: Subspace,
    q_values: Vec<FieldElement>,
    unit_residue: Vector,
    unit_pivot: usize,
}

impl Alternator {
    /// Computes `S(A, σ)` and `q_σ`. Symplectic involutions are rejected,
    /// since `q_σ` is only well defined when `F ∩ Alt = 0`.
    pub fn compute(a: &AlgebraWithInvolution) -> Result<Self> {
        let f = a.field();
        let (sym, alt) = a.sym_alt();
        let unit_residue = alt.reduce(a.unit());
        let Some(unit_pivot) = unit_residue.iter().position(|x| !f.is_zero(x)) else {
            return Err(Error::Precondition("involution is symplectic".into()));
        };
        let u = alt.sum(&Subspace::span(f, a.dim(), &[a.unit().clone()])?)?;
        // the canonical section of A / U: the non-pivot coordinates of the reduced vector
        let free: Vec<usize> = (0..a.dim()).filter(|i| !u.pivots().contains(i)).collect();
        let images: Vec<Vector> = (0..a.dim())
            .map(|i| {
                let e = a.basis_vector(i);
                let r = u.reduce(&a.mul(&a.sigma(&e), &e));
                free.iter().map(|&k| r[k].clone()).collect()
            })
            .collect();
        let s = semilinear_kernel(f, &images)?;
        let mut alternator = Alternator { sym, alt, s, q_values: Vec::new(), unit_residue, unit_pivot };
        alternator.q_values = alternator
            .s
            .basis()
            .iter()
            .map(|x| alternator.q(a, x).ok_or_else(|| Error::InvalidAlgebra("q is undefined on a basis vector of S".into())))
            .collect::<Result<_>>()?;
        Ok(alternator)
    }

    pub fn s(&self) -> &Subspace {
        &self.s
    }

    pub fn sym(&self) -> &Subspace {
        &self.sym
    }

    pub fn alt(&self) -> &Subspace {
        &self.alt
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// `q_σ` on the canonical basis of `S`.
    pub fn q_values(&self) -> &[FieldElement] {
        &self.q_values
    }

    /// The unique `α` with `σ(x)·x + α ∈ Alt`, or `None` when `x ∉ S`.
    pub fn q(&self, a: &AlgebraWithInvolution, x: &[FieldElement]) -> Option<FieldElement> {
        let f = a.field();
        let r = self.alt.reduce(&a.mul(&a.sigma(x), x));
        let p = self.unit_pivot;
        let alpha = f.div(&r[p], &self.unit_residue[p]).expect("pivot entry is nonzero");
        let matches = r.iter().zip(&self.unit_residue).all(|(ri, ui)| *ri == f.mul(&alpha, ui));
        matches.then_some(alpha)
    }

    /// `q_σ` as a diagonal totally singular form on the canonical basis.
    pub fn form(&self) -> TotallySingularForm {
        TotallySingularForm::new(self.s.field(), self.q_values.clone())
    }

    pub fn contained_in_sym(&self) -> bool {
        self.s.is_subspace_of(&self.sym)
    }

    /// Direct means no nonzero `x` has `σ(x)·x ∈ Alt`, i.e. `q_σ` is anisotropic.
    pub fn is_direct(&self) -> bool {
        self.form().is_anisotropic()
    }

    /// `x ↦ σ(x)·x + q(x)` lands in `Alt` on the basis, `1 ∈ S` with
    /// `q(1) = 1`, and `S` is closed under multiplication.
    pub fn certificates(&self, a: &AlgebraWithInvolution) -> Vec<Certificate> {
        let f = a.field();
        let basis = self.s.basis();
        let in_alt = basis.iter().zip(&self.q_values).all(|(x, q)| {
            let v = a.add(&a.mul(&a.sigma(x), x), &a.scalar(q));
            self.alt.contains(&v)
        });
        let unit = self.s.contains(a.unit()) && self.q(a, a.unit()).is_some_and(|q| f.is_one(&q));
        let closed = basis.iter().all(|x| basis.iter().all(|y| self.s.contains(&a.mul(x, y))));
        vec![
            Certificate::new("q-certificate", in_alt),
            Certificate::new("unit-in-s", unit),
            Certificate::new("subalgebra", closed),
        ]
    }
}

/// Everything computed about `(A, σ)` in one pass.
#[derive(Clone, Debug)]
pub struct AlternatorReport {
    pub alternator: Alternator,
    pub involution_type: InvolutionType,
    pub dim_s: usize,
    pub contained_in_sym: bool,
    pub direct: bool,
    pub anisotropy: Anisotropy,
    pub decomposable: Verdict,
    pub certificates: Vec<Certificate>,
}

impl AlternatorReport {
    pub fn s(&self) -> &Subspace {
        self.alternator.s()
    }

    pub fn q_values(&self) -> &[FieldElement] {
        self.alternator.q_values()
    }

    pub fn all_certificates_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.passed)
    }
}

/// Computes the report with a randomized isotropy search of `budget`
/// candidates where anisotropy cannot be certified.
pub fn alternator(a: &AlgebraWithInvolution, budget: usize, seed: u64) -> Result<AlternatorReport> {
    let alt = Alternator::compute(a)?;
    let anisotropy = anisotropy(a, &alt, budget, seed);
    let mut certificates = alt.certificates(a);
    let decomposable = match &anisotropy {
        Anisotropy::Isotropic { .. } => Verdict::NotApplicable("involution is isotropic".into()),
        Anisotropy::Anisotropic(_) => {
            let (verdict, extra) = decomposability(a, &alt);
            certificates.extend(extra);
            verdict
        }
    };
    Ok(AlternatorReport {
        involution_type: InvolutionType::Orthogonal,
        dim_s: alt.dim(),
        contained_in_sym: alt.contained_in_sym(),
        direct: alt.is_direct(),
        alternator: alt,
        anisotropy,
        decomposable,
        certificates,
    })
}

/// Certifies or searches for anisotropy of `σ`.
pub fn anisotropy(a: &AlgebraWithInvolution, alt: &Alternator, budget: usize, seed: u64) -> Anisotropy {
    if a.adjoint_form().is_some() {
        return match a.isotropy_search(0, seed) {
            IsotropyOutcome::Witness(witness) => Anisotropy::Isotropic { witness },
            _ => Anisotropy::Anisotropic(Provenance::CertifiedSplit),
        };
    }
    if alt.is_direct() {
        return Anisotropy::Anisotropic(Provenance::CertifiedDirect);
    }
    if budget == 0 {
        return Anisotropy::Anisotropic(Provenance::Asserted);
    }
    match a.isotropy_search(budget, seed) {
        IsotropyOutcome::Witness(witness) => Anisotropy::Isotropic { witness },
        _ => Anisotropy::Anisotropic(Provenance::SearchedNoWitness),
    }
}

pub fn is_direct(a: &AlgebraWithInvolution) -> Result<bool> {
    Ok(Alternator::compute(a)?.is_direct())
}

/// Directness by its definition: enumerate `S` and look for a nonzero `x`
/// with `σ(x)·x ∈ Alt`. Only for finite base fields within the enumeration cap.
pub fn is_direct_by_enumeration(a: &AlgebraWithInvolution, alt: &Alternator) -> Result<bool> {
    let q = finite_order(a.field())?;
    let basis = alt.s().basis();
    let total = checked_power(q, basis.len())?;
    let f = a.field();
    let witness = (1..total).into_par_iter().any(|idx| {
        let digits = digits(idx, q, basis.len());
        let mut x = a.zero();
        for (d, b) in digits.iter().zip(basis) {
            if *d != 0 {
                x = a.add(&x, &a.scale(&f.embed_base(*d), b));
            }
        }
        alt.alt().contains(&a.mul(&a.sigma(&x), &x))
    });
    Ok(!witness)
}

/// Decides total decomposability of an anisotropic orthogonal involution:
/// true iff `S ⊆ Sym` and `dim S = deg A` (a power of two).
pub fn totally_decomposable_anisotropic(a: &AlgebraWithInvolution) -> Result<(Verdict, Vec<Certificate>)> {
    let alt = Alternator::compute(a)?;
    Ok(decomposability(a, &alt))
}

fn decomposability(a: &AlgebraWithInvolution, alt: &Alternator) -> (Verdict, Vec<Certificate>) {
    if !a.degree().is_power_of_two() {
        return (Verdict::NotApplicable(format!("degree {} is not a power of two", a.degree())), Vec::new());
    }
    let verdict = alt.contained_in_sym() && alt.dim() == a.degree();
    if !verdict {
        return (Verdict::Decomposable(false), Vec::new());
    }
    let f = a.field();
    let squares = alt
        .s()
        .basis()
        .iter()
        .zip(alt.q_values())
        .all(|(x, q)| a.mul(x, x) == a.scalar(q) && !f.is_zero(q));
    let certificates = vec![
        Certificate::new("square-is-q", squares),
        Certificate::new("self-centralizing", a.centralizer(alt.s()) == *alt.s()),
        Certificate::new("direct", alt.is_direct()),
    ];
    (Verdict::Decomposable(true), certificates)
}

/// `S(A, σ)` straight from the definition, by enumerating all of `A`.
///
/// Requires the base field `GF(2)` or `GF(4)` with no layers and `|A| ≤ 2^20`.
/// The member set is checked to be a subspace.
pub fn brute_force_s(a: &AlgebraWithInvolution) -> Result<Subspace> {
    let q = finite_order(a.field())?;
    if a.field().base().degree() > 2 {
        return Err(Error::Precondition("enumeration needs base field GF(2) or GF(4)".into()));
    }
    let n = a.dim();
    let total = checked_power(q, n)?;
    let f = a.field();
    let (_, alt) = a.sym_alt();
    let u = alt.sum(&Subspace::span(f, n, &[a.unit().clone()])?)?;
    let members: Vec<u64> = (0..total)
        .into_par_iter()
        .filter(|&idx| {
            let x: Vector = digits(idx, q, n).into_iter().map(|d| f.embed_base(d)).collect();
            u.contains(&a.mul(&a.sigma(&x), &x))
        })
        .collect();
    let vectors: Vec<Vector> =
        members.iter().map(|&idx| digits(idx, q, n).into_iter().map(|d| f.embed_base(d)).collect()).collect();
    let span = Subspace::span(f, n, &vectors)?;
    if checked_power(q, span.dim())? != members.len() as u64 {
        return Err(Error::InvalidAlgebra("the members of S do not form a subspace".into()));
    }
    Ok(span)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub dim_f: usize,
    pub dim_k: usize,
    /// `S(A_K) = S(A) ⊗ K`.
    pub equal: bool,
    /// `q_{σ_K}` agrees with `q_σ` on the embedded basis.
    pub q_agree: bool,
    /// `S(A) ⊗ K ⊆ S(A_K)`.
    pub containment: bool,
}

/// Checks `S(A_K, σ_K) = S(A, σ) ⊗ K` for a separable extension `K`,
/// computing both sides independently.
pub fn verify_separable_descent(a: &AlgebraWithInvolution, k: &FieldTower) -> Result<DescentReport> {
    if !k.is_extension_of(a.field()) {
        return Err(Error::TowerMismatch(format!("{k} does not extend {}", a.field())));
    }
    if !k.is_separable_over(a.field()) {
        return Err(Error::Precondition("descent requires separable layers".into()));
    }
    compare_over_extension(a, k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JumpReport {
    pub dim_f: usize,
    pub dim_k: usize,
    pub jumped: bool,
    pub containment: bool,
}

/// Compares `dim S(A, σ)` with `dim S(A_K, σ_K)` for any extension `K`; the
/// containment `S(A) ⊗ K ⊆ S(A_K)` is always checked.
pub fn inseparable_jump(a: &AlgebraWithInvolution, k: &FieldTower) -> Result<JumpReport> {
    if !k.is_extension_of(a.field()) {
        return Err(Error::TowerMismatch(format!("{k} does not extend {}", a.field())));
    }
    let d = compare_over_extension(a, k)?;
    Ok(JumpReport { dim_f: d.dim_f, dim_k: d.dim_k, jumped: d.dim_k > d.dim_f, containment: d.containment })
}

fn compare_over_extension(a: &AlgebraWithInvolution, k: &FieldTower) -> Result<DescentReport> {
    let over_f = Alternator::compute(a)?;
    let a_k = a.scalar_extend(k)?;
    let over_k = Alternator::compute(&a_k)?;
    let embedded = over_f.s().embed(k)?;
    let q_agree = embedded.basis().iter().zip(over_f.q_values()).all(|(x, q)| {
        let q = k.embed(a.field(), q).expect("k extends the base field");
        over_k.q(&a_k, x) == Some(q)
    });
    Ok(DescentReport {
        dim_f: over_f.dim(),
        dim_k: over_k.dim(),
        equal: embedded == *over_k.s(),
        q_agree,
        containment: embedded.is_subspace_of(over_k.s()),
    })
}

/// With `x = Σ x_i`, checks `σ(x)·x + Σ σ(x_i)·x_i ∈ Alt(A, σ)`.
pub fn lemma_alt_check(a: &AlgebraWithInvolution, alt: &Subspace, xs: &[Vector]) -> bool {
    let x = xs.iter().fold(a.zero(), |acc, xi| a.add(&acc, xi));
    let v = xs.iter().fold(a.mul(&a.sigma(&x), &x), |acc, xi| a.add(&acc, &a.mul(&a.sigma(xi), xi)));
    alt.contains(&v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeptdReport {
    pub verdict_f: Verdict,
    pub verdict_k: Verdict,
    pub agree: bool,
    pub provenance: Option<Provenance>,
    /// Similarity of the adjoint form to a Pfister form, for split algebras.
    pub pfister_oracle: Option<bool>,
    /// `None` when there is no oracle; `Some(false)` is a flagged finding.
    pub oracle_agrees: Option<bool>,
    /// Whether `det b` is a square, for split algebras. Forms similar to a
    /// Pfister form of dimension at least 4 have square determinant.
    pub determinant_square: Option<bool>,
}

/// Decomposability over `F` against decomposability over a separable `K`,
/// plus the Pfister-form oracle on split instances.
pub fn septd_suite(a: &AlgebraWithInvolution, k: &FieldTower, budget: usize, seed: u64) -> Result<SeptdReport> {
    if !k.is_extension_of(a.field()) {
        return Err(Error::TowerMismatch(format!("{k} does not extend {}", a.field())));
    }
    if !k.is_separable_over(a.field()) {
        return Err(Error::Precondition("septd requires separable layers".into()));
    }
    let over_f = alternator(a, budget, seed)?;
    let over_k = alternator(&a.scalar_extend(k)?, budget, seed)?;
    let provenance = match over_f.anisotropy {
        Anisotropy::Anisotropic(p) => Some(p),
        Anisotropy::Isotropic { .. } => None,
    };
    let pfister_oracle = match (a.adjoint_form(), provenance) {
        (Some(b), Some(_)) => Some(is_similar_to_pfister(b)?),
        _ => None,
    };
    let oracle_agrees = pfister_oracle.map(|p| over_f.decomposable.as_bool() == Some(p));
    let determinant_square = a.adjoint_form().map(determinant_is_square);
    Ok(SeptdReport {
        agree: over_f.decomposable == over_k.decomposable,
        verdict_f: over_f.decomposable,
        verdict_k: over_k.decomposable,
        provenance,
        pfister_oracle,
        oracle_agrees,
        determinant_square,
    })
}

fn finite_order(f: &FieldTower) -> Result<u64> {
    if !f.is_finite_base() {
        return Err(Error::Precondition(format!("enumeration needs a finite field without layers, got {f}")));
    }
    Ok(f.base().order() as u64)
}

fn checked_power(q: u64, n: usize) -> Result<u64> {
    let total = u32::try_from(n).ok().and_then(|n| q.checked_pow(n));
    match total {
        Some(t) if t <= ENUMERATION_CAP => Ok(t),
        _ => Err(Error::SizeCap(format!("{q}^{n} elements exceed the enumeration cap of {ENUMERATION_CAP}"))),
    }
}

fn digits(mut idx: u64, q: u64, n: usize) -> Vec<u8> {
    (0..n)
        .map(|_| {
            let d = (idx % q) as u8;
            idx /= q;
            d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::BilinearForm;

    #[test]
    fn transpose_on_m2_gf2() {
        let f = FieldTower::gf2();
        let a = AlgebraWithInvolution::matrix_algebra_adjoint(&BilinearForm::diagonal(&f, &[f.one(), f.one()])).unwrap();
        let alt = Alternator::compute(&a).unwrap();
        assert_eq!(alt.dim(), 3);
        assert!(!alt.is_direct());
        assert!(!is_direct_by_enumeration(&a, &alt).unwrap());
        assert_eq!(brute_force_s(&a).unwrap(), *alt.s());
        let x = a.parse_element("E11 + E21").unwrap();
        assert_eq!(alt.q(&a, &x), Some(f.zero()));
    }

    #[test]
    fn symplectic_is_rejected() {
        let f = FieldTower::rational(&["s", "t"]).unwrap();
        let q = AlgebraWithInvolution::quaternion(&f, &f.symbol_element("t").unwrap(), &f.symbol_element("s").unwrap()).unwrap();
        assert!(matches!(Alternator::compute(&q), Err(Error::Precondition(_))));
    }
}
