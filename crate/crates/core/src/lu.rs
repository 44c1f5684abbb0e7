//! LU factorization with partial pivoting.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::{Cplx, Real};

pub struct Lu<T: Real> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn factor(a: &CMatrix<T>) -> Result<Self> {
        a.ensure_square()?;
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        let tiny = T::epsilon() * T::epsilon() * scale.max(T::min_positive_value());
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -T::one()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= tiny {
                return Err(Error::Singular);
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve_vec(&self, b: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let n = self.lu.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<Cplx<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &CMatrix<T>) -> CMatrix<T> {
        let mut out = CMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve_vec(&b.col(j));
            out.set_col(j, &x);
        }
        out
    }
}

pub fn solve<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<CMatrix<T>> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch("solve: row counts differ".into()));
    }
    Ok(Lu::factor(a)?.solve(b))
}

pub fn inverse<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    a.ensure_square()?;
    solve(a, &CMatrix::identity(a.dim()))
}

/// Least-squares solution of an overdetermined system through the normal equations.
pub fn lstsq<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<CMatrix<T>> {
    let ah = a.dagger();
    solve(&ah.matmul(a)?, &ah.matmul(b)?)
}
