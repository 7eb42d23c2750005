//! Symmetric bilinear forms and totally singular quadratic forms in
//! characteristic 2.
//!
//! Every anisotropy question reduces to a rank computation on Frobenius
//! coordinates: `Σ λ_i² a_i = 0` if and only if `Σ λ_i c_ij = 0` for every
//! 2-basis index `j`, where `a_i = Σ_j c_ij² b_j`.

use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldTower};
use crate::linalg::{self, semilinear_kernel, Matrix, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    gram: Matrix,
}

impl BilinearForm {
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::InvalidForm("Gram matrix is not symmetric".into()));
        }
        Ok(BilinearForm { gram })
    }

    pub fn diagonal(field: &FieldTower, values: &[FieldElement]) -> Self {
        BilinearForm { gram: Matrix::diagonal(field, values) }
    }

    pub fn field(&self) -> &FieldTower {
        self.gram.field()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn eval(&self, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        let gv = self.gram.mul_vec(v).expect("vector length matches the form");
        linalg::dot(self.field(), u, &gv)
    }

    pub fn norm(&self, v: &[FieldElement]) -> FieldElement {
        self.eval(v, v)
    }

    pub fn det(&self) -> FieldElement {
        self.gram.det().expect("Gram matrix is square")
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.field().is_zero(&self.det())
    }

    pub fn diagonal_values(&self) -> Option<Vec<FieldElement>> {
        let f = self.field();
        let n = self.dim();
        let off_diagonal_zero = (0..n).all(|i| (0..n).all(|j| i == j || f.is_zero(self.gram.get(i, j))));
        off_diagonal_zero.then(|| (0..n).map(|i| self.gram.get(i, i).clone()).collect())
    }

    pub fn scale(&self, c: &FieldElement) -> BilinearForm {
        BilinearForm { gram: self.gram.scale(c) }
    }

    /// Kronecker product, with the basis ordered lexicographically.
    pub fn tensor(&self, other: &BilinearForm) -> Result<BilinearForm> {
        if self.field() != other.field() {
            return Err(Error::TowerMismatch(format!("{} versus {}", self.field(), other.field())));
        }
        let f = self.field();
        let m = other.dim();
        let gram = Matrix::from_fn(f, self.dim() * m, self.dim() * m, |r, c| {
            f.mul(self.gram.get(r / m, c / m), other.gram.get(r % m, c % m))
        });
        Ok(BilinearForm { gram })
    }

    pub fn embed(&self, k: &FieldTower) -> Result<BilinearForm> {
        Ok(BilinearForm { gram: self.gram.embed(k)? })
    }
}

/// `q(v) = Σ v_i² a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotallySingularForm {
    field: FieldTower,
    values: Vec<FieldElement>,
}

impl TotallySingularForm {
    pub fn new(field: &FieldTower, values: Vec<FieldElement>) -> Self {
        TotallySingularForm { field: field.clone(), values }
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn eval(&self, v: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        v.iter().zip(&self.values).fold(f.zero(), |acc, (x, a)| f.add(&acc, &f.mul(&f.square(x), a)))
    }

    pub fn is_anisotropic(&self) -> bool {
        ts_is_anisotropic(self)
    }

    /// A nonzero `v` with `q(v) = 0`, if one exists.
    pub fn isotropic_vector(&self) -> Option<Vector> {
        let images: Vec<Vector> = self.values.iter().map(|a| vec![a.clone()]).collect();
        // a kernel vector λ of the Frobenius system satisfies Σ λ_i² a_i = 0 directly
        let kernel = semilinear_kernel(&self.field, &images).expect("images have equal length");
        kernel.basis().first().cloned()
    }

    /// The `F²`-span of the values, as a subspace of Frobenius coordinate space.
    pub fn value_span(&self) -> Subspace {
        let rows: Vec<Vector> = self.values.iter().map(|a| self.field.frobenius_decompose(a)).collect();
        Subspace::span(&self.field, self.field.two_basis_len(), &rows).expect("coordinates have the 2-basis length")
    }

    pub fn embed(&self, k: &FieldTower) -> Result<TotallySingularForm> {
        let values = self.values.iter().map(|a| k.embed(&self.field, a)).collect::<Result<_>>()?;
        Ok(TotallySingularForm { field: k.clone(), values })
    }

    pub fn format_values(&self) -> Vec<String> {
        self.values.iter().map(|a| self.field.format(a)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagonalization {
    /// `Pᵀ·G·P = diag(values)` with `P` invertible; columns of `P` are the new basis.
    Diagonal { form: TotallySingularForm, change_of_basis: Matrix },
    /// `b(v, v) = 0` for every `v`.
    Alternating,
}

/// Diagonalizes a symmetric bilinear form over its field.
///
/// A form that is not alternating always diagonalizes in characteristic 2:
/// when the remaining block is alternating, a hyperbolic pair `x, y` is
/// absorbed into an already diagonal vector `v` of norm `a` via
/// `⟨a⟩ ⊥ H ≅ ⟨a, a, a⟩` with basis `v+x+y, v+a·x, v+(a+1)·x+y`.
pub fn diagonalize(b: &BilinearForm) -> Diagonalization {
    let f = b.field();
    let n = b.dim();
    let mut rest: Vec<Vector> = Matrix::identity(f, n).row_vectors();
    let mut diag: Vec<(Vector, FieldElement)> = Vec::new();

    while !rest.is_empty() {
        if let Some(idx) = rest.iter().position(|v| !f.is_zero(&b.norm(v))) {
            let v = rest.remove(idx);
            let a = b.norm(&v);
            let a_inv = f.inv(&a).expect("nonzero norm");
            for z in rest.iter_mut() {
                let c = f.mul(&b.eval(z, &v), &a_inv);
                linalg::axpy(f, z, &c, &v);
            }
            diag.push((v, a));
            continue;
        }
        let pair = (0..rest.len())
            .flat_map(|i| (i + 1..rest.len()).map(move |j| (i, j)))
            .find(|&(i, j)| !f.is_zero(&b.eval(&rest[i], &rest[j])));
        let Some((i, j)) = pair else {
            // the remaining vectors span the radical
            diag.extend(rest.drain(..).map(|v| (v, f.zero())));
            break;
        };
        let Some((v, a)) = diag.iter().rev().find(|(_, a)| !f.is_zero(a)).cloned() else {
            return Diagonalization::Alternating;
        };
        let y_raw = rest.remove(j);
        let x = rest.remove(i);
        let inv = f.inv(&b.eval(&x, &y_raw)).expect("nonzero pairing");
        let y = linalg::scale_vector(f, &inv, &y_raw);
        for z in rest.iter_mut() {
            let (zy, zx) = (b.eval(z, &y), b.eval(z, &x));
            linalg::axpy(f, z, &zy, &x);
            linalg::axpy(f, z, &zx, &y);
        }
        let pos = diag.iter().rposition(|(w, _)| *w == v).expect("v is diagonal");
        diag.remove(pos);
        let a1 = f.add(&a, &f.one());
        let v1 = linalg::add_vectors(f, &linalg::add_vectors(f, &v, &x), &y);
        let mut v2 = v.clone();
        linalg::axpy(f, &mut v2, &a, &x);
        let mut v3 = linalg::add_vectors(f, &v, &y);
        linalg::axpy(f, &mut v3, &a1, &x);
        diag.extend([(v1, a.clone()), (v2, a.clone()), (v3, a)]);
    }

    if diag.iter().all(|(_, a)| f.is_zero(a)) && n > 0 {
        return Diagonalization::Alternating;
    }
    let columns: Vec<Vector> = diag.iter().map(|(v, _)| v.clone()).collect();
    let values = diag.into_iter().map(|(_, a)| a).collect();
    let p = Matrix::from_columns(f, &columns).expect("columns have equal length");
    Diagonalization::Diagonal { form: TotallySingularForm::new(f, values), change_of_basis: p }
}

/// `⟨⟨a_1, …, a_n⟩⟩ = ⟨1, a_1⟩ ⊗ … ⊗ ⟨1, a_n⟩`; the value at index `k` is the
/// product of the `a_i` over the set bits of `k`.
pub fn pfister(field: &FieldTower, slots: &[FieldElement]) -> Result<BilinearForm> {
    if slots.iter().any(|a| field.is_zero(a)) {
        return Err(Error::InvalidForm("Pfister slots must be nonzero".into()));
    }
    let values: Vec<FieldElement> = (0..1usize << slots.len())
        .map(|k| {
            slots
                .iter()
                .enumerate()
                .filter(|(i, _)| k >> i & 1 == 1)
                .fold(field.one(), |acc, (_, a)| field.mul(&acc, a))
        })
        .collect();
    Ok(BilinearForm::diagonal(field, &values))
}

/// True iff the values are linearly independent over `F²`.
pub fn ts_is_anisotropic(q: &TotallySingularForm) -> bool {
    q.values.iter().all(|a| !q.field.is_zero(a)) && q.value_span().dim() == q.dim()
}

/// Totally singular forms with the same `F²`-span of values. For anisotropic
/// forms this is isometry.
pub fn ts_equivalent(p: &TotallySingularForm, q: &TotallySingularForm) -> bool {
    p.field == q.field && p.dim() == q.dim() && p.value_span() == q.value_span()
}

pub fn bilinear_is_isotropic(b: &BilinearForm) -> bool {
    bilinear_isotropic_vector(b).is_some()
}

/// A nonzero `w` with `b(w, w) = 0`, if one exists.
pub fn bilinear_isotropic_vector(b: &BilinearForm) -> Option<Vector> {
    if b.dim() == 0 {
        return None;
    }
    match diagonalize(b) {
        Diagonalization::Alternating => Some(Matrix::identity(b.field(), b.dim()).row(0)),
        Diagonalization::Diagonal { form, change_of_basis } => {
            let lambda = form.isotropic_vector()?;
            Some(change_of_basis.mul_vec(&lambda).expect("dimensions agree"))
        }
    }
}

/// Whether an anisotropic form is similar to a bilinear Pfister form.
///
/// After diagonalizing to `⟨c_1, …, c_m⟩`, the form is similar to a Pfister
/// form when `m` is a power of two and the `F²`-span of the `c_i / c_1` is
/// closed under multiplication.
pub fn is_similar_to_pfister(b: &BilinearForm) -> Result<bool> {
    let f = b.field();
    let Diagonalization::Diagonal { form, .. } = diagonalize(b) else {
        return Err(Error::Precondition("form is isotropic".into()));
    };
    if !form.is_anisotropic() {
        return Err(Error::Precondition("form is isotropic".into()));
    }
    let m = form.dim();
    if !m.is_power_of_two() {
        return Ok(false);
    }
    let c1_inv = f.inv(&form.values()[0])?;
    let normalized: Vec<FieldElement> = form.values().iter().map(|c| f.mul(c, &c1_inv)).collect();
    let span = TotallySingularForm::new(f, normalized.clone()).value_span();
    for (i, x) in normalized.iter().enumerate() {
        for y in &normalized[i..] {
            if !span.contains(&f.frobenius_decompose(&f.mul(x, y))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn determinant_is_square(b: &BilinearForm) -> bool {
    b.field().sqrt_exact(&b.det()).is_some()
}
