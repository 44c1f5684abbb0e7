//! Dense row-major complex matrices.
//!
//! Operators on the Hilbert space and superoperators on operator space share
//! this one carrier. Vectorization is row-major throughout: the operator
//! basis element `E_{j,k} = |j><k|` sits at flat index `j*N + k`, so the data
//! buffer of an `N x N` matrix *is* its vectorization, and the superoperator
//! of `rho -> A rho B` is `kron(A, B^T)`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{re, Cplx, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Cplx::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cplx::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Cplx<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Cplx<T>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = re(d);
        }
        m
    }

    pub fn from_diag(diag: &[Cplx<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Column vector from a slice.
    pub fn column(v: &[Cplx<T>]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Side length of a square matrix.
    #[inline]
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn ensure_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Row-major entries; for a square operator this is `vec(rho)`.
    #[inline]
    pub fn as_slice(&self) -> &[Cplx<T>] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Cplx<T>] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Cplx<T>> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Cplx<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Cplx<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[Cplx<T>]) {
        assert_eq!(v.len(), self.rows);
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn diag(&self) -> Vec<Cplx<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn ensure_finite(&self, what: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(what))
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Cplx<T>) -> Cplx<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Cplx<T> {
        self.diag().into_iter().sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Induced 1-norm (maximum column sum).
    pub fn norm_1(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Induced infinity norm (maximum row sum).
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Checked product.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert_eq!(v.len(), self.cols, "matvec length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v^T M`, i.e. the action on a row vector.
    pub fn vecmat(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert_eq!(v.len(), self.rows, "vecmat length mismatch");
        let mut out = vec![Cplx::zero(); self.cols];
        for (i, &x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + x * a;
            }
        }
        out
    }

    /// Kronecker product: `kron(A,B)[(a*dB+b),(c*dB+d)] = A[a,c] * B[b,d]`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (ar, ac, br, bc) = (self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = Self::zeros(ar * br, ac * bc);
        for a in 0..ar {
            for cc in 0..ac {
                let x = self[(a, cc)];
                if x.is_zero() {
                    continue;
                }
                for b in 0..br {
                    for d in 0..bc {
                        out[(a * br + b, cc * bc + d)] = x * rhs[(b, d)];
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(&self.matmul(rhs)? - &rhs.matmul(self)?)
    }

    /// Hilbert-Schmidt inner product `tr(A^† B)`.
    pub fn hs_inner(&self, rhs: &Self) -> Result<Cplx<T>> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "hs_inner of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.data.iter().zip(&rhs.data).map(|(a, b)| a.conj() * b).sum())
    }

    /// Entrywise comparison `max |a - b| <= tol`.
    pub fn approx_eq(&self, rhs: &Self, tol: T) -> bool {
        self.rows == rhs.rows
            && self.cols == rhs.cols
            && self
                .data
                .iter()
                .zip(&rhs.data)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Largest entrywise deviation; infinite when shapes differ.
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return T::infinity();
        }
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// `|| A - A^† ||_F`.
    pub fn hermiticity_defect(&self) -> T {
        (self - &self.dagger()).frobenius_norm()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = Cplx<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cplx<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

fn assert_same_shape<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) {
    assert!(
        a.rows == b.rows && a.cols == b.cols,
        "shape mismatch: {}x{} vs {}x{}",
        a.rows,
        a.cols,
        b.rows,
        b.cols
    );
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: Self) -> CMatrix<T> {
        assert_same_shape(self, rhs);
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: Self) -> CMatrix<T> {
        assert_same_shape(self, rhs);
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> AddAssign<&CMatrix<T>> for CMatrix<T> {
    fn add_assign(&mut self, rhs: &CMatrix<T>) {
        assert_same_shape(self, rhs);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a = *a + b;
        }
    }
}

impl<T: Real> SubAssign<&CMatrix<T>> for CMatrix<T> {
    fn sub_assign(&mut self, rhs: &CMatrix<T>) {
        assert_same_shape(self, rhs);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a = *a - b;
        }
    }
}

impl<T: Real> Neg for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn neg(self) -> CMatrix<T> {
        self.map(|z| -z)
    }
}

/// Panicking product for internal use where shapes are known to agree.
impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: Self) -> CMatrix<T> {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

/// Free-function form of [`CMatrix::kron`].
pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kron(b)
}

/// Free-function form of [`CMatrix::dagger`].
pub fn dagger<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    a.dagger()
}

/// Free-function form of [`CMatrix::hs_inner`].
pub fn hs_inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<Cplx<T>> {
    a.hs_inner(b)
}

/// Default entrywise tolerance `1e-12 * max(1, ||A||_inf)`.
pub fn default_tolerance<T: Real>(a: &CMatrix<T>) -> T {
    T::of(1e-12) * T::one().max(a.norm_inf())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    type M = CMatrix<f64>;

    fn sx() -> M {
        M::from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]).unwrap()
    }

    fn sy() -> M {
        M::from_rows(&[vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]]).unwrap()
    }

    fn sz() -> M {
        M::from_real_diag(&[1., -1.])
    }

    #[test]
    fn kron_of_identities_is_identity() {
        assert_eq!(M::identity(2).kron(&M::identity(2)), M::identity(4));
    }

    #[test]
    fn kron_basis_order() {
        assert_eq!(sz().kron(&M::identity(2)), M::from_real_diag(&[1., 1., -1., -1.]));
        let e0 = [c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)];
        let out = sx().kron(&sx()).matvec(&e0);
        assert_eq!(out[3], c(1., 0.));
        assert_eq!(out.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn dagger_examples() {
        let sp = M::from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(0., 0.), c(0., 0.)]]).unwrap();
        assert_eq!(sp.dagger(), sp.transpose());
        let ii = M::identity(3).scale(c(0., 1.));
        assert_eq!(ii.dagger(), M::identity(3).scale(c(0., -1.)));
    }

    #[test]
    fn hs_inner_pauli() {
        assert_eq!(sx().hs_inner(&sx()).unwrap(), c(2., 0.));
        assert_eq!(sx().hs_inner(&sy()).unwrap(), c(0., 0.));
        let rho = M::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, (i as f64) - (j as f64)));
        assert_eq!(M::identity(3).hs_inner(&rho).unwrap(), rho.trace());
        assert!(sx().hs_inner(&M::identity(3)).is_err());
    }

    #[test]
    fn superoperator_of_left_right_product_is_kron_with_transpose() {
        // rho -> A rho B  ==  kron(A, B^T) vec(rho)  under row-major vec.
        let a = M::from_fn(3, 3, |i, j| c((i * 3 + j) as f64 * 0.1, (i as f64) - 0.5 * j as f64));
        let b = M::from_fn(3, 3, |i, j| c(1.0 / (1 + i + j) as f64, 0.3 * (j as f64)));
        let rho = M::from_fn(3, 3, |i, j| c((i as f64).sin() + j as f64, (j as f64).cos()));
        let direct = &(&a * &rho) * &b;
        let sup = a.kron(&b.transpose());
        let applied = sup.matvec(rho.as_slice());
        for (x, y) in applied.iter().zip(direct.as_slice()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn norms() {
        let m = M::from_rows(&[vec![c(1., 0.), c(-2., 0.)], vec![c(0., 3.), c(4., 0.)]]).unwrap();
        assert_eq!(m.norm_1(), 6.0);
        assert_eq!(m.norm_inf(), 7.0);
        assert_eq!(m.max_abs(), 4.0);
        assert!((m.frobenius_norm() - 30f64.sqrt()).abs() < 1e-15);
    }
}
