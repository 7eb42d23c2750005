//! Central simple algebras with orthogonal involution over fields of
//! characteristic 2.
//!
//! The central object is the alternator subalgebra
//! `S(A, σ) = {x ∈ A : σ(x)·x ∈ F ⊕ Alt(A, σ)}` together with the totally
//! singular quadratic form `q_σ` it carries. From these the crate decides
//! whether an anisotropic involution is totally decomposable, and checks how
//! `S` behaves under separable and inseparable scalar extension.
//!
//! ```
//! use involab::expr::parse_element;
//! use involab::forms::BilinearForm;
//! use involab::{alternator, AlgebraWithInvolution, FieldTower, Verdict};
//!
//! let f = FieldTower::rational(&["t"]).unwrap();
//! let b = BilinearForm::diagonal(&f, &[f.one(), parse_element(&f, "t").unwrap()]);
//! let a = AlgebraWithInvolution::matrix_algebra_adjoint(&b).unwrap();
//! let report = alternator(&a, 0, 0).unwrap();
//! assert_eq!(report.dim_s, 2);
//! assert_eq!(report.decomposable, Verdict::Decomposable(true));
//! ```

pub mod algebras;
pub mod alternator;
pub mod error;
pub mod expr;
pub mod fields;
pub mod forms;
pub mod linalg;
pub mod scenario;
pub mod suite;

pub use algebras::{AlgebraWithInvolution, InvolutionType, IsotropyOutcome};
pub use alternator::{alternator, Alternator, AlternatorReport, Anisotropy, Provenance, Verdict};
pub use error::{Error, Result};
pub use fields::{BaseField, FieldElement, FieldTower, Layer};
pub use forms::{BilinearForm, Diagonalization, TotallySingularForm};
pub use linalg::{Matrix, Subspace, Vector};
