//! Dense exact linear algebra over a [`FieldTower`].
//!
//! Elimination always picks the first nonzero entry (in row order) of the
//! current column as pivot, so every result is reproducible. Subspaces are
//! stored in reduced row echelon form, which makes structural equality the
//! same as equality of subspaces.

use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldTower};

pub type Vector = Vec<FieldElement>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: FieldTower,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl Matrix {
    pub fn new(field: &FieldTower, rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix { field: field.clone(), rows, cols, entries })
    }

    pub fn zeros(field: &FieldTower, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &FieldTower, n: usize) -> Self {
        Self::diagonal(field, &vec![field.one(); n])
    }

    pub fn diagonal(field: &FieldTower, values: &[FieldElement]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(field, n, n);
        for (i, v) in values.iter().enumerate() {
            m.entries[i * n + i] = v.clone();
        }
        m
    }

    pub fn from_fn(field: &FieldTower, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, entries }
    }

    pub fn from_rows(field: &FieldTower, rows: Vec<Vector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        let n = rows.len();
        Ok(Matrix { field: field.clone(), rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_columns(field: &FieldTower, columns: &[Vector]) -> Result<Self> {
        Ok(Self::from_rows(field, columns.to_vec())?.transpose())
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: FieldElement) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| self.field.add(a, b)).collect();
        Ok(Matrix { entries, ..self.clone() })
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        let entries = self.entries.iter().map(|a| self.field.mul(a, c)).collect();
        Matrix { entries, ..self.clone() }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.check_same_field(other)?;
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = f.add(&out.entries[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows).map(|i| dot(&self.field, &self.entries[i * self.cols..(i + 1) * self.cols], v)).collect())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows = self.row_vectors();
        let pivots = rref_rows(&self.field, &mut rows, self.cols);
        rows.resize(self.rows, vec![self.field.zero(); self.cols]);
        let m = Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, entries: rows.concat() };
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn kernel(&self) -> Subspace {
        let f = &self.field;
        let mut rows = self.row_vectors();
        let pivots = rref_rows(f, &mut rows, self.cols);
        let mut basis = Vec::new();
        let mut next_pivot = 0;
        for free in 0..self.cols {
            if pivots.get(next_pivot) == Some(&free) {
                next_pivot += 1;
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = row[free].clone();
            }
            basis.push(v);
        }
        Subspace::from_vectors_unchecked(f, self.cols, basis)
    }

    /// Some solution of `self * x = b`, with free variables set to zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let f = &self.field;
        let mut rows: Vec<Vector> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i);
                r.push(b[i].clone());
                r
            })
            .collect();
        let pivots = rref_rows(f, &mut rows, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &p) in rows.iter().zip(&pivots) {
            x[p] = row[self.cols].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("only square matrices are invertible".into()));
        }
        let n = self.rows;
        let f = &self.field;
        let mut rows: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = self.row(i);
                r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
                r
            })
            .collect();
        let pivots = rref_rows(f, &mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Precondition("matrix is singular".into()));
        }
        let entries = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        Ok(Matrix { field: f.clone(), rows: n, cols: n, entries })
    }

    pub fn det(&self) -> Result<FieldElement> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let f = &self.field;
        let n = self.rows;
        let mut rows = self.row_vectors();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(&rows[i][c])) else {
                return Ok(f.zero());
            };
            // swaps do not change the sign in characteristic 2
            rows.swap(c, p);
            let pivot = rows[c][c].clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot)?;
            for i in c + 1..n {
                if f.is_zero(&rows[i][c]) {
                    continue;
                }
                let factor = f.mul(&rows[i][c], &inv);
                let (top, bottom) = rows.split_at_mut(i);
                for (x, p) in bottom[0].iter_mut().zip(&top[c]).skip(c) {
                    if !f.is_zero(p) {
                        *x = f.add(x, &f.mul(&factor, p));
                    }
                }
            }
        }
        Ok(det)
    }

    /// The same matrix with entries embedded in the extension `k`.
    pub fn embed(&self, k: &FieldTower) -> Result<Matrix> {
        let entries = self.entries.iter().map(|x| k.embed(&self.field, x)).collect::<Result<_>>()?;
        Ok(Matrix { field: k.clone(), rows: self.rows, cols: self.cols, entries })
    }

    /// Entries rendered with [`FieldTower::format`], row by row.
    pub fn format_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.field.format(self.get(i, j))).collect()).collect()
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        self.check_same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} versus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn check_same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::TowerMismatch(format!("{} versus {}", self.field, other.field)));
        }
        Ok(())
    }
}

/// A subspace of `F^n`, kept in canonical reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: FieldTower,
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: &FieldTower, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &FieldTower, ambient: usize) -> Self {
        Self::from_vectors_unchecked(field, ambient, Matrix::identity(field, ambient).row_vectors())
    }

    pub fn span(field: &FieldTower, ambient: usize, vectors: &[Vector]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!("vector of length {} in ambient dimension {ambient}", v.len())));
        }
        Ok(Self::from_vectors_unchecked(field, ambient, vectors.to_vec()))
    }

    fn from_vectors_unchecked(field: &FieldTower, ambient: usize, mut vectors: Vec<Vector>) -> Self {
        let pivots = rref_rows(field, &mut vectors, ambient);
        Subspace { field: field.clone(), ambient, basis: vectors, pivots }
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Canonical basis: leading entries are 1 and are the only nonzero entries in their columns.
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection along the canonical basis; zero exactly when `v` lies in the subspace.
    /// The result vanishes at every pivot column.
    pub fn reduce(&self, v: &[FieldElement]) -> Vector {
        let f = &self.field;
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if f.is_zero(&out[p]) {
                continue;
            }
            let c = out[p].clone();
            axpy(f, &mut out, &c, row);
        }
        out
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        v.len() == self.ambient && self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[FieldElement]) -> Option<Vector> {
        self.contains(v).then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn combination(&self, coeffs: &[FieldElement]) -> Vector {
        let mut out = vec![self.field.zero(); self.ambient];
        for (c, row) in coeffs.iter().zip(&self.basis) {
            axpy(&self.field, &mut out, c, row);
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let vectors = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Self::from_vectors_unchecked(&self.field, self.ambient, vectors))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(&self.field, self.ambient));
        }
        // a·U = b·V  <=>  (a, b) in the kernel of [U^T | V^T]
        let columns: Vec<Vector> = self.basis.iter().chain(&other.basis).cloned().collect();
        let kernel = Matrix::from_columns(&self.field, &columns)?.kernel();
        let k = self.dim();
        let vectors = kernel.basis.iter().map(|c| self.combination(&c[..k])).collect();
        Ok(Self::from_vectors_unchecked(&self.field, self.ambient, vectors))
    }

    pub fn embed(&self, k: &FieldTower) -> Result<Subspace> {
        let basis = self
            .basis
            .iter()
            .map(|v| v.iter().map(|x| k.embed(&self.field, x)).collect::<Result<Vector>>())
            .collect::<Result<Vec<_>>>()?;
        // embedding preserves reduced echelon form
        Ok(Subspace { field: k.clone(), ambient: self.ambient, basis, pivots: self.pivots.clone() })
    }

    pub fn format_basis(&self) -> Vec<Vec<String>> {
        self.basis.iter().map(|v| v.iter().map(|x| self.field.format(x)).collect()).collect()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::TowerMismatch(format!("{} versus {}", self.field, other.field)));
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!("ambient {} versus {}", self.ambient, other.ambient)));
        }
        Ok(())
    }
}

/// Solutions `α` of `Σ α_i² w_i = 0`, where `w_i = images[i]`.
///
/// Writing every coordinate as `w_ik = Σ_j c_ikj² b_j` over the 2-basis turns
/// the condition into the linear system `Σ_i α_i c_ikj = 0` for all `(k, j)`.
pub fn semilinear_kernel(field: &FieldTower, images: &[Vector]) -> Result<Subspace> {
    let n = images.len();
    let codim = images.first().map_or(0, Vec::len);
    if images.iter().any(|w| w.len() != codim) {
        return Err(Error::DimensionMismatch("images of unequal length".into()));
    }
    let r = field.two_basis_len();
    let mut m = Matrix::zeros(field, codim * r, n);
    for (i, w) in images.iter().enumerate() {
        for (k, x) in w.iter().enumerate() {
            if field.is_zero(x) {
                continue;
            }
            for (j, c) in field.frobenius_decompose(x).into_iter().enumerate() {
                m.set(k * r + j, i, c);
            }
        }
    }
    Ok(m.kernel())
}

pub fn dot(f: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !f.is_zero(x) && !f.is_zero(y) {
            acc = f.add(&acc, &f.mul(x, y));
        }
    }
    acc
}

/// `y += c·x`.
pub fn axpy(f: &FieldTower, y: &mut [FieldElement], c: &FieldElement, x: &[FieldElement]) {
    if f.is_zero(c) {
        return;
    }
    let one = f.is_one(c);
    for (yi, xi) in y.iter_mut().zip(x) {
        if f.is_zero(xi) {
            continue;
        }
        *yi = if one { f.add(yi, xi) } else { f.add(yi, &f.mul(c, xi)) };
    }
}

pub fn add_vectors(f: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn scale_vector(f: &FieldTower, c: &FieldElement, v: &[FieldElement]) -> Vector {
    v.iter().map(|x| f.mul(c, x)).collect()
}

pub fn is_zero_vector(f: &FieldTower, v: &[FieldElement]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

/// Brings `rows` to reduced row echelon form in place, dropping zero rows.
fn rref_rows(f: &FieldTower, rows: &mut Vec<Vector>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        if !f.is_one(&rows[r][c]) {
            let inv = f.inv(&rows[r][c]).expect("pivot is nonzero");
            for x in rows[r][c..].iter_mut() {
                if !f.is_zero(x) {
                    *x = f.mul(x, &inv);
                }
            }
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for j in c..cols {
                if !f.is_zero(&pivot_row[j]) {
                    row[j] = f.add(&row[j], &f.mul(&factor, &pivot_row[j]));
                }
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}
