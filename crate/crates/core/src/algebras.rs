//! Finite-dimensional algebras with involution, given by structure constants.
//!
//! Elements are coordinate vectors over the algebra's basis. Basis orderings
//! are fixed: `E_ij` row-major for split algebras, `1, u, v, uv` for
//! quaternions, and lexicographic pairs for tensor products.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::{Expr, ExprDomain};
use crate::fields::{FieldElement, FieldTower};
use crate::forms::{bilinear_isotropic_vector, BilinearForm};
use crate::linalg::{self, Matrix, Subspace, Vector};

/// Sparse product `e_i · e_j` as `(k, coefficient)` pairs.
type Product = Vec<(usize, FieldElement)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvolutionType {
    Orthogonal,
    Symplectic,
}

impl fmt::Display for InvolutionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvolutionType::Orthogonal => "orthogonal",
            InvolutionType::Symplectic => "symplectic",
        })
    }
}

#[derive(Clone, Debug)]
pub enum IsotropyOutcome {
    /// Exact answer for a split algebra with known adjoint form.
    Anisotropic,
    /// A nonzero `x` with `σ(x)·x = 0`, verified.
    Witness(Vector),
    /// The randomized search used its whole budget.
    NoneFound { tried: usize },
}

#[derive(Clone, Debug)]
pub struct AlgebraWithInvolution {
    field: FieldTower,
    labels: Vec<String>,
    table: Vec<Product>,
    unit: Vector,
    /// Column `j` holds `σ(e_j)`.
    involution: Matrix,
    degree: usize,
    adjoint_form: Option<BilinearForm>,
}

impl AlgebraWithInvolution {
    /// Builds an algebra from a dense multiplication table, where
    /// `products[i][j]` holds the coordinates of `e_i · e_j`, and checks
    /// associativity, the unit and the involution axioms on the basis.
    pub fn new(
        field: &FieldTower,
        labels: Vec<String>,
        products: Vec<Vec<Vector>>,
        unit: Vector,
        involution: Matrix,
    ) -> Result<Self> {
        let n = labels.len();
        let degree = integer_sqrt(n)
            .ok_or_else(|| Error::InvalidAlgebra(format!("dimension {n} is not a perfect square")))?;
        if products.len() != n || products.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::DimensionMismatch("multiplication table does not match the basis".into()));
        }
        if unit.len() != n || involution.rows() != n || involution.cols() != n {
            return Err(Error::DimensionMismatch("unit or involution does not match the basis".into()));
        }
        let table = products.iter().flatten().map(|v| sparse(field, v)).collect();
        let a = AlgebraWithInvolution { field: field.clone(), labels, table, unit, involution, degree, adjoint_form: None };
        a.check_associative()?;
        a.check_unit()?;
        a.check_involution()?;
        Ok(a)
    }

    /// `M_m(F)` with the involution `σ(x) = b⁻¹·xᵀ·b` adjoint to `b`.
    pub fn matrix_algebra_adjoint(b: &BilinearForm) -> Result<Self> {
        let f = b.field();
        let m = b.dim();
        if m == 0 {
            return Err(Error::InvalidForm("form has dimension 0".into()));
        }
        let b_inv = b
            .gram()
            .inverse()
            .map_err(|_| Error::InvalidForm("form is degenerate".into()))?;
        let n = m * m;
        let labels = (0..m)
            .flat_map(|i| (0..m).map(move |j| if m <= 9 { format!("E{}{}", i + 1, j + 1) } else { format!("E{}_{}", i + 1, j + 1) }))
            .collect();
        let mut table = vec![Vec::new(); n * n];
        for i in 0..m {
            for j in 0..m {
                for l in 0..m {
                    table[(i * m + j) * n + j * m + l] = vec![(i * m + l, f.one())];
                }
            }
        }
        let mut unit = vec![f.zero(); n];
        for i in 0..m {
            unit[i * m + i] = f.one();
        }
        // σ(E_ij) = b⁻¹·E_ji·b has (p, q) entry b⁻¹[p][j]·b[i][q]
        let involution = Matrix::from_fn(f, n, n, |row, col| {
            let (p, q) = (row / m, row % m);
            let (i, j) = (col / m, col % m);
            f.mul(b_inv.get(p, j), b.gram().get(i, q))
        });
        Ok(AlgebraWithInvolution {
            field: f.clone(),
            labels,
            table,
            unit,
            involution,
            degree: m,
            adjoint_form: Some(b.clone()),
        })
    }

    /// The quaternion algebra `u² + u = a`, `v² = c`, `vu = uv + v` on the
    /// basis `1, u, v, uv`, with its canonical (symplectic) involution.
    pub fn quaternion(field: &FieldTower, a: &FieldElement, c: &FieldElement) -> Result<Self> {
        if field.is_zero(c) {
            return Err(Error::InvalidAlgebra("quaternion parameter c must be nonzero".into()));
        }
        let f = field;
        let one = f.one();
        let (e, u, v, w) = (0, 1, 2, 3);
        let ac = f.mul(a, c);
        let mut table = vec![Vec::new(); 16];
        let mut put = |i: usize, j: usize, terms: Vec<(usize, FieldElement)>| {
            table[i * 4 + j] = terms.into_iter().filter(|(_, x)| !f.is_zero(x)).collect();
        };
        for i in 0..4 {
            put(e, i, vec![(i, one.clone())]);
            put(i, e, vec![(i, one.clone())]);
        }
        put(u, u, vec![(e, a.clone()), (u, one.clone())]);
        put(u, v, vec![(w, one.clone())]);
        put(u, w, vec![(v, a.clone()), (w, one.clone())]);
        put(v, u, vec![(v, one.clone()), (w, one.clone())]);
        put(v, v, vec![(e, c.clone())]);
        put(v, w, vec![(e, c.clone()), (u, c.clone())]);
        put(w, u, vec![(v, a.clone())]);
        put(w, v, vec![(u, c.clone())]);
        put(w, w, vec![(e, ac)]);
        let mut involution = Matrix::identity(f, 4);
        involution.set(e, u, one);
        let unit = vec![f.one(), f.zero(), f.zero(), f.zero()];
        Ok(AlgebraWithInvolution {
            field: f.clone(),
            labels: ["1", "u", "v", "uv"].map(String::from).to_vec(),
            table,
            unit,
            involution,
            degree: 2,
            adjoint_form: None,
        })
    }

    /// The involution `x ↦ s·σ(x)·s⁻¹` for a symmetric unit `s`.
    pub fn twist(&self, s: &[FieldElement]) -> Result<Self> {
        let f = &self.field;
        if self.sigma(s) != s {
            return Err(Error::Precondition("twisting element is not symmetric".into()));
        }
        let s_inv = self.inverse(s).ok_or_else(|| Error::Precondition("twisting element is not invertible".into()))?;
        let columns: Vec<Vector> = (0..self.dim())
            .map(|j| self.mul(&self.mul(s, &self.sigma(&self.basis_vector(j))), &s_inv))
            .collect();
        let involution = Matrix::from_columns(f, &columns)?;
        let twisted = AlgebraWithInvolution { involution, adjoint_form: None, ..self.clone() };
        twisted.check_involution()?;
        Ok(twisted)
    }

    /// `(A ⊗ B, σ ⊗ τ)` with basis `e_i ⊗ f_j` at index `i·dim B + j`.
    pub fn tensor(&self, other: &AlgebraWithInvolution) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::TowerMismatch(format!("{} versus {}", self.field, other.field)));
        }
        let f = &self.field;
        let (n1, n2) = (self.dim(), other.dim());
        let n = n1 * n2;
        let mut table = vec![Vec::new(); n * n];
        for i in 0..n1 {
            for k in 0..n1 {
                let left = &self.table[i * n1 + k];
                if left.is_empty() {
                    continue;
                }
                for j in 0..n2 {
                    for l in 0..n2 {
                        let right = &other.table[j * n2 + l];
                        let terms = &mut table[(i * n2 + j) * n + k * n2 + l];
                        for (p, x) in left {
                            for (q, y) in right {
                                terms.push((p * n2 + q, f.mul(x, y)));
                            }
                        }
                    }
                }
            }
        }
        let unit = kronecker(f, &self.unit, &other.unit);
        let involution = Matrix::from_fn(f, n, n, |r, c| {
            f.mul(self.involution.get(r / n2, c / n2), other.involution.get(r % n2, c % n2))
        });
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("{a}⊗{b}")))
            .collect();
        Ok(AlgebraWithInvolution {
            field: f.clone(),
            labels,
            table,
            unit,
            involution,
            degree: self.degree * other.degree,
            adjoint_form: None,
        })
    }

    /// `(A, σ)_K` for an extension `K` of the base field.
    pub fn scalar_extend(&self, k: &FieldTower) -> Result<Self> {
        if !k.is_extension_of(&self.field) {
            return Err(Error::TowerMismatch(format!("{k} does not extend {}", self.field)));
        }
        let embed = |x: &FieldElement| k.embed(&self.field, x);
        let table = self
            .table
            .iter()
            .map(|terms| terms.iter().map(|(i, x)| Ok((*i, embed(x)?))).collect::<Result<Product>>())
            .collect::<Result<_>>()?;
        Ok(AlgebraWithInvolution {
            field: k.clone(),
            labels: self.labels.clone(),
            table,
            unit: self.unit.iter().map(embed).collect::<Result<_>>()?,
            involution: self.involution.embed(k)?,
            degree: self.degree,
            adjoint_form: self.adjoint_form.as_ref().map(|b| b.embed(k)).transpose()?,
        })
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn involution_matrix(&self) -> &Matrix {
        &self.involution
    }

    /// The form `b` when this is `M_m(F)` with the involution adjoint to `b`.
    pub fn adjoint_form(&self) -> Option<&BilinearForm> {
        self.adjoint_form.as_ref()
    }

    /// Equal multiplication tables, units and involutions (labels are ignored).
    pub fn same_structure(&self, other: &AlgebraWithInvolution) -> bool {
        self.field == other.field
            && self.unit == other.unit
            && self.involution == other.involution
            && self.table.len() == other.table.len()
            && (0..self.dim()).all(|i| {
                (0..self.dim()).all(|j| {
                    let e = self.basis_vector(i);
                    let f = self.basis_vector(j);
                    self.mul(&e, &f) == other.mul(&e, &f)
                })
            })
    }

    pub fn zero(&self) -> Vector {
        vec![self.field.zero(); self.dim()]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    pub fn scalar(&self, c: &FieldElement) -> Vector {
        linalg::scale_vector(&self.field, c, &self.unit)
    }

    pub fn add(&self, x: &[FieldElement], y: &[FieldElement]) -> Vector {
        linalg::add_vectors(&self.field, x, y)
    }

    pub fn scale(&self, c: &FieldElement, x: &[FieldElement]) -> Vector {
        linalg::scale_vector(&self.field, c, x)
    }

    pub fn is_zero(&self, x: &[FieldElement]) -> bool {
        linalg::is_zero_vector(&self.field, x)
    }

    pub fn mul(&self, x: &[FieldElement], y: &[FieldElement]) -> Vector {
        let f = &self.field;
        let n = self.dim();
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if f.is_zero(yj) {
                    continue;
                }
                let terms = &self.table[i * n + j];
                if terms.is_empty() {
                    continue;
                }
                let c = f.mul(xi, yj);
                for (k, coef) in terms {
                    let term = if f.is_one(coef) { c.clone() } else { f.mul(&c, coef) };
                    out[*k] = f.add(&out[*k], &term);
                }
            }
        }
        out
    }

    pub fn sigma(&self, x: &[FieldElement]) -> Vector {
        self.involution.mul_vec(x).expect("element has the algebra dimension")
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_multiplication(&self, x: &[FieldElement]) -> Matrix {
        let columns: Vec<Vector> = (0..self.dim()).map(|j| self.mul(x, &self.basis_vector(j))).collect();
        Matrix::from_columns(&self.field, &columns).expect("columns have equal length")
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right_multiplication(&self, x: &[FieldElement]) -> Matrix {
        let columns: Vec<Vector> = (0..self.dim()).map(|j| self.mul(&self.basis_vector(j), x)).collect();
        Matrix::from_columns(&self.field, &columns).expect("columns have equal length")
    }

    /// Two-sided inverse, if `x` is a unit.
    pub fn inverse(&self, x: &[FieldElement]) -> Option<Vector> {
        let y = self.left_multiplication(x).solve(&self.unit).ok()??;
        (self.mul(&y, x) == self.unit).then_some(y)
    }

    /// `(Sym, Alt)`: the kernel and the image of `id + σ`.
    pub fn sym_alt(&self) -> (Subspace, Subspace) {
        let m = Matrix::identity(&self.field, self.dim()).add(&self.involution).expect("same shape");
        let columns: Vec<Vector> = (0..self.dim()).map(|j| m.column(j)).collect();
        let alt = Subspace::span(&self.field, self.dim(), &columns).expect("columns have the algebra dimension");
        (m.kernel(), alt)
    }

    pub fn sym(&self) -> Subspace {
        self.sym_alt().0
    }

    pub fn alt(&self) -> Subspace {
        self.sym_alt().1
    }

    /// Orthogonal exactly when `1 ∉ Alt(A, σ)`.
    pub fn classify_type(&self) -> InvolutionType {
        if self.alt().contains(&self.unit) {
            InvolutionType::Symplectic
        } else {
            InvolutionType::Orthogonal
        }
    }

    /// The span of `x·e_i` over the basis, i.e. the right ideal `x·A`.
    pub fn right_ideal(&self, x: &[FieldElement]) -> Subspace {
        let vectors: Vec<Vector> = (0..self.dim()).map(|i| self.mul(x, &self.basis_vector(i))).collect();
        Subspace::span(&self.field, self.dim(), &vectors).expect("vectors have the algebra dimension")
    }

    /// Whether the idempotent `e` satisfies `σ(e)·e = 0` and `dim e·A = dim A / 2`.
    pub fn metabolic_witness(&self, e: &[FieldElement]) -> Result<bool> {
        if self.mul(e, e) != e {
            return Err(Error::Precondition("element is not idempotent".into()));
        }
        let annihilated = self.is_zero(&self.mul(&self.sigma(e), e));
        Ok(annihilated && 2 * self.right_ideal(e).dim() == self.dim())
    }

    /// The algebra `e·A·e` with unit `e` and the restricted involution, for a
    /// symmetric idempotent `e`. Its basis is the canonical basis of the span
    /// of the `e·e_i·e`.
    pub fn part_by_idempotent(&self, e: &[FieldElement]) -> Result<Self> {
        if self.mul(e, e) != e {
            return Err(Error::Precondition("element is not idempotent".into()));
        }
        if self.sigma(e) != e {
            return Err(Error::Precondition("idempotent is not symmetric".into()));
        }
        let f = &self.field;
        let vectors: Vec<Vector> = (0..self.dim()).map(|i| self.mul(&self.mul(e, &self.basis_vector(i)), e)).collect();
        let part = Subspace::span(f, self.dim(), &vectors)?;
        let basis = part.basis();
        let k = basis.len();
        let degree = integer_sqrt(k).ok_or_else(|| Error::InvalidAlgebra(format!("part has dimension {k}")))?;
        let coords = |x: &Vector| part.coordinates(x).expect("e·A·e is closed under the operations");
        let mut table = Vec::with_capacity(k * k);
        for x in basis {
            for y in basis {
                table.push(sparse(f, &coords(&self.mul(x, y))));
            }
        }
        let columns: Vec<Vector> = basis.iter().map(|x| coords(&self.sigma(x))).collect();
        Ok(AlgebraWithInvolution {
            field: f.clone(),
            labels: basis.iter().map(|x| self.format_element(x)).collect(),
            table,
            unit: coords(&e.to_vec()),
            involution: Matrix::from_columns(f, &columns)?,
            degree,
            adjoint_form: None,
        })
    }

    /// Elements commuting with every vector of `u`.
    pub fn centralizer(&self, u: &Subspace) -> Subspace {
        let mut rows = Vec::new();
        for x in u.basis() {
            let l = self.left_multiplication(x);
            let r = self.right_multiplication(x);
            rows.extend(l.add(&r).expect("same shape").row_vectors());
        }
        if rows.is_empty() {
            return Subspace::full(&self.field, self.dim());
        }
        Matrix::from_rows(&self.field, rows).expect("rows have equal length").kernel()
    }

    /// Looks for a nonzero `x` with `σ(x)·x = 0`.
    ///
    /// Split algebras with a known adjoint form are decided exactly: an
    /// isotropic vector `w` of the form gives the witness `x = w·e_1ᵀ`.
    /// Otherwise `budget` seeded random candidates are tried.
    pub fn isotropy_search(&self, budget: usize, seed: u64) -> IsotropyOutcome {
        if let Some(b) = &self.adjoint_form {
            let Some(w) = bilinear_isotropic_vector(b) else {
                return IsotropyOutcome::Anisotropic;
            };
            let m = self.degree;
            let mut x = self.zero();
            for (i, wi) in w.into_iter().enumerate() {
                x[i * m] = wi;
            }
            debug_assert!(self.is_zero(&self.mul(&self.sigma(&x), &x)));
            return IsotropyOutcome::Witness(x);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..budget {
            let x: Vector = (0..self.dim())
                .map(|_| if rng.gen_bool(0.5) { self.field.zero() } else { self.field.random_element(&mut rng, 1) })
                .collect();
            if !self.is_zero(&x) && self.is_zero(&self.mul(&self.sigma(&x), &x)) {
                return IsotropyOutcome::Witness(x);
            }
        }
        IsotropyOutcome::NoneFound { tried: budget }
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, size: usize) -> Vector {
        (0..self.dim()).map(|_| self.field.random_element(rng, size)).collect()
    }

    /// Parses an element such as `v + t*uv`. Basis labels take precedence
    /// over field symbols of the same name.
    pub fn parse_element(&self, text: &str) -> Result<Vector> {
        Expr::parse(text)?.eval(&AlgebraDomain(self))
    }

    pub fn format_element(&self, x: &[FieldElement]) -> String {
        let f = &self.field;
        let terms: Vec<String> = x
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !f.is_zero(c))
            .map(|(c, label)| {
                let label = if label.contains('⊗') { format!("({label})") } else { label.clone() };
                if f.is_one(c) {
                    label
                } else {
                    let c = f.format(c);
                    let c = if c.contains(['+', '/']) { format!("({c})") } else { c };
                    if label == "1" { c } else { format!("{c}*{label}") }
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    pub fn check_associative(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            let ei = self.basis_vector(i);
            for j in 0..n {
                let ej = self.basis_vector(j);
                let ij = self.mul(&ei, &ej);
                for k in 0..n {
                    let ek = self.basis_vector(k);
                    if self.mul(&ij, &ek) != self.mul(&ei, &self.mul(&ej, &ek)) {
                        return Err(Error::InvalidAlgebra(format!(
                            "multiplication is not associative on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        for i in 0..self.dim() {
            let e = self.basis_vector(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::InvalidAlgebra(format!("unit does not act trivially on {}", self.labels[i])));
            }
        }
        Ok(())
    }

    /// `σ² = id`, `σ(1) = 1` and `σ(xy) = σ(y)σ(x)` on all basis pairs.
    pub fn check_involution(&self) -> Result<()> {
        if self.sigma(&self.unit) != self.unit {
            return Err(Error::InvalidAlgebra("involution does not fix the unit".into()));
        }
        let images: Vec<Vector> = (0..self.dim()).map(|j| self.sigma(&self.basis_vector(j))).collect();
        for (j, s) in images.iter().enumerate() {
            if self.sigma(s) != self.basis_vector(j) {
                return Err(Error::InvalidAlgebra(format!("involution is not of order 2 on {}", self.labels[j])));
            }
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let lhs = self.sigma(&self.mul(&self.basis_vector(i), &self.basis_vector(j)));
                if lhs != self.mul(&images[j], &images[i]) {
                    return Err(Error::InvalidAlgebra(format!(
                        "involution is not an anti-automorphism on ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

struct AlgebraDomain<'a>(&'a AlgebraWithInvolution);

impl ExprDomain for AlgebraDomain<'_> {
    type Value = Vector;

    fn integer(&self, n: u64) -> Vector {
        if n % 2 == 1 {
            self.0.unit.clone()
        } else {
            self.0.zero()
        }
    }

    fn atom(&self, name: &str) -> Option<Vector> {
        if let Some(i) = self.0.labels.iter().position(|l| l == name) {
            return Some(self.0.basis_vector(i));
        }
        self.0.field.symbol_element(name).map(|c| self.0.scalar(&c))
    }

    fn add(&self, a: &Vector, b: &Vector) -> Vector {
        self.0.add(a, b)
    }

    fn mul(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        Ok(self.0.mul(a, b))
    }

    fn div(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        let b_inv = self.0.inverse(b).ok_or(Error::DivisionByZero)?;
        Ok(self.0.mul(a, &b_inv))
    }
}

fn sparse(f: &FieldTower, v: &[FieldElement]) -> Product {
    v.iter().enumerate().filter(|(_, x)| !f.is_zero(x)).map(|(i, x)| (i, x.clone())).collect()
}

fn kronecker(f: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().flat_map(|x| b.iter().map(move |y| f.mul(x, y))).collect()
}

fn integer_sqrt(n: usize) -> Option<usize> {
    (0..=n).find(|d| d * d >= n).filter(|d| d * d == n)
}
