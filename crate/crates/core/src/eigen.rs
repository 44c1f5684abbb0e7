//! Dense complex eigensolvers.
//!
//! General matrices go through a Householder reduction to upper Hessenberg
//! form followed by implicit single-shift QR sweeps (Wilkinson shift, with an
//! exceptional shift every tenth iteration) down to the complex Schur form
//! `A = Q T Q^†`. Right and left eigenvectors are read off the triangular
//! factor by back and forward substitution, so both families come from the
//! same Schur vectors and are bi-orthogonal for distinct eigenvalues.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::{re, Cplx, Real};

/// Complex Schur form `A = Q T Q^†` with `T` upper triangular and `Q` unitary.
#[derive(Debug, Clone)]
pub struct Schur<T: Real> {
    pub t: CMatrix<T>,
    pub q: CMatrix<T>,
}

/// Eigenvalues with right (`A u = λ u`) and left (`A^† v = conj(λ) v`) eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigen<T: Real> {
    pub values: Vec<Cplx<T>>,
    pub right: CMatrix<T>,
    pub left: CMatrix<T>,
}

/// Givens rotation `G = [[c, s], [-conj(s), c]]` with `G [a; b] = [r; 0]`.
#[derive(Clone, Copy)]
struct Rot<T: Real> {
    c: T,
    s: Cplx<T>,
}

impl<T: Real> Rot<T> {
    fn new(a: Cplx<T>, b: Cplx<T>) -> Self {
        let na = a.norm();
        let nb = b.norm();
        if nb == T::zero() {
            return Self { c: T::one(), s: Cplx::zero() };
        }
        if na == T::zero() {
            return Self { c: T::zero(), s: Cplx::one() };
        }
        let norm = na.hypot(nb);
        Self {
            c: na / norm,
            s: (a / na) * b.conj() / norm,
        }
    }

    /// Rows `k, k+1` of `m`, columns `from..`.
    fn apply_rows(self, m: &mut CMatrix<T>, k: usize, from: usize) {
        for j in from..m.cols() {
            let x = m[(k, j)];
            let y = m[(k + 1, j)];
            m[(k, j)] = x * self.c + self.s * y;
            m[(k + 1, j)] = -self.s.conj() * x + y * self.c;
        }
    }

    /// Columns `k, k+1` of `m` multiplied by `G^†` on the right, rows `..=to`.
    fn apply_cols(self, m: &mut CMatrix<T>, k: usize, to: usize) {
        for i in 0..=to {
            let x = m[(i, k)];
            let y = m[(i, k + 1)];
            m[(i, k)] = x * self.c + y * self.s.conj();
            m[(i, k + 1)] = -x * self.s + y * self.c;
        }
    }
}

/// Householder reduction to upper Hessenberg form, `A = Q H Q^†`.
pub fn hessenberg<T: Real>(a: &CMatrix<T>) -> Result<(CMatrix<T>, CMatrix<T>)> {
    a.ensure_square()?;
    let n = a.dim();
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    if n < 3 {
        return Ok((h, q));
    }
    for k in 0..n - 2 {
        let mut v: Vec<Cplx<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if xnorm == T::zero() {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == T::zero() { Cplx::one() } else { x0 / x0.norm() };
        v[0] = x0 + phase * xnorm;
        let vnorm2 = v.iter().map(|z| z.norm_sqr()).sum::<T>();
        if vnorm2 == T::zero() {
            continue;
        }
        let beta = T::of(2.0) / vnorm2;

        // H <- (I - beta v v^†) H
        for j in k..n {
            let s: Cplx<T> = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)]).sum();
            let s = s * beta;
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] = h[(k + 1 + i, j)] - vi * s;
            }
        }
        // H <- H (I - beta v v^†), and the same for Q.
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let s: Cplx<T> = v.iter().enumerate().map(|(l, vl)| m[(i, k + 1 + l)] * vl).sum();
                let s = s * beta;
                for (l, vl) in v.iter().enumerate() {
                    m[(i, k + 1 + l)] = m[(i, k + 1 + l)] - s * vl.conj();
                }
            }
        }
        h[(k + 1, k)] = -phase * xnorm;
        for i in k + 2..n {
            h[(i, k)] = Cplx::zero();
        }
    }
    Ok((h, q))
}

/// Complex Schur decomposition.
pub fn schur<T: Real>(a: &CMatrix<T>) -> Result<Schur<T>> {
    a.ensure_finite("eigensolver input")?;
    let (mut h, mut q) = hessenberg(a)?;
    let n = h.dim();
    if n == 0 {
        return Ok(Schur { t: h, q });
    }
    let eps = T::epsilon();
    let hnorm = h.frobenius_norm().max(T::min_positive_value());
    let max_its = 100;
    let mut total = 0usize;

    let mut hi = n - 1;
    let mut its = 0usize;
    while hi > 0 {
        // Locate the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut tst = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if tst == T::zero() {
                tst = hnorm;
            }
            if sub <= eps * tst {
                h[(lo, lo - 1)] = Cplx::zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if its > max_its {
            return Err(Error::ConvergenceFailure {
                iterations: total,
                lo,
                hi,
                subdiagonal: h[(hi, hi - 1)].norm().to_f64().unwrap_or(f64::NAN),
            });
        }

        let shift = if its.is_multiple_of(10) {
            h[(hi, hi)] + re(T::of(0.75) * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        // Implicit single-shift sweep over lo..=hi.
        let mut rot = Rot::new(h[(lo, lo)] - shift, h[(lo + 1, lo)]);
        rot.apply_rows(&mut h, lo, lo);
        rot.apply_cols(&mut h, lo, (lo + 2).min(hi));
        rot.apply_cols(&mut q, lo, n - 1);
        for k in lo + 1..hi {
            rot = Rot::new(h[(k, k - 1)], h[(k + 1, k - 1)]);
            rot.apply_rows(&mut h, k, k - 1);
            h[(k + 1, k - 1)] = Cplx::zero();
            rot.apply_cols(&mut h, k, (k + 2).min(hi));
            rot.apply_cols(&mut q, k, n - 1);
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = Cplx::zero();
        }
    }
    Ok(Schur { t: h, q })
}

fn wilkinson_shift<T: Real>(a: Cplx<T>, b: Cplx<T>, c: Cplx<T>, d: Cplx<T>) -> Cplx<T> {
    let half = T::of(0.5);
    let m = (a + d) * half;
    let diff = (a - d) * half;
    let disc = (diff * diff + b * c).sqrt();
    let l1 = m + disc;
    let l2 = m - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn small_pivot<T: Real>(t: &CMatrix<T>) -> T {
    (T::epsilon() * t.frobenius_norm()).max(T::min_positive_value() / T::epsilon())
}

/// Right eigenvectors of an upper triangular matrix (columns, unnormalized).
fn triangular_right<T: Real>(t: &CMatrix<T>) -> CMatrix<T> {
    let n = t.dim();
    let smin = small_pivot(t);
    let mut x = CMatrix::zeros(n, n);
    let mut col = vec![Cplx::zero(); n];
    for k in 0..n {
        let lambda = t[(k, k)];
        col.iter_mut().for_each(|z| *z = Cplx::zero());
        col[k] = Cplx::one();
        for i in (0..k).rev() {
            let mut num: Cplx<T> = Cplx::zero();
            for j in i + 1..=k {
                num = num + t[(i, j)] * col[j];
            }
            let mut den = t[(i, i)] - lambda;
            if den.norm() < smin {
                den = re(smin);
            }
            col[i] = -num / den;
        }
        rescale(&mut col[..=k]);
        x.set_col(k, &col);
    }
    x
}

/// Left eigenvectors `y` with `y^† T = λ y^†` (columns, unnormalized).
fn triangular_left<T: Real>(t: &CMatrix<T>) -> CMatrix<T> {
    let n = t.dim();
    let smin = small_pivot(t);
    let mut y = CMatrix::zeros(n, n);
    let mut w = vec![Cplx::zero(); n];
    for k in 0..n {
        let lambda = t[(k, k)];
        w.iter_mut().for_each(|z| *z = Cplx::zero());
        w[k] = Cplx::one();
        for j in k + 1..n {
            let mut num: Cplx<T> = Cplx::zero();
            for i in k..j {
                num = num + w[i] * t[(i, j)];
            }
            let mut den = t[(j, j)] - lambda;
            if den.norm() < smin {
                den = re(smin);
            }
            w[j] = -num / den;
        }
        rescale(&mut w[k..]);
        let conj: Vec<Cplx<T>> = w.iter().map(|z| z.conj()).collect();
        y.set_col(k, &conj);
    }
    y
}

fn rescale<T: Real>(v: &mut [Cplx<T>]) {
    let m = v.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if m > T::zero() && m.is_finite() {
        v.iter_mut().for_each(|z| *z = *z / m);
    }
}

/// Full eigendecomposition with unit-norm right eigenvectors and left
/// eigenvectors scaled so that `u_a^† v_a = 1`. Order follows the Schur diagonal.
pub fn eig<T: Real>(a: &CMatrix<T>) -> Result<Eigen<T>> {
    let Schur { t, q } = schur(a)?;
    let n = t.dim();
    let mut right = q.matmul(&triangular_right(&t))?;
    let mut left = q.matmul(&triangular_left(&t))?;
    for k in 0..n {
        let u = right.col(k);
        let nu = u.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        let u: Vec<Cplx<T>> = u.iter().map(|z| z / nu).collect();
        right.set_col(k, &u);
        let v = left.col(k);
        let s: Cplx<T> = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        let f = if s.norm() > T::zero() { s.conj().inv() } else { Cplx::one() };
        let v: Vec<Cplx<T>> = v.iter().map(|z| z * f).collect();
        left.set_col(k, &v);
    }
    Ok(Eigen { values: t.diag(), right, left })
}

/// Eigenvalues only.
pub fn eigenvalues<T: Real>(a: &CMatrix<T>) -> Result<Vec<Cplx<T>>> {
    Ok(schur(a)?.t.diag())
}

/// Hermitian eigendecomposition: ascending real eigenvalues and orthonormal
/// eigenvectors (columns), each with its largest-modulus component made real
/// and positive.
pub fn hermitian_eigen<T: Real>(h: &CMatrix<T>) -> Result<(Vec<T>, CMatrix<T>)> {
    h.ensure_square()?;
    let sym = {
        let hd = h.dagger();
        (h + &hd).scale_real(T::of(0.5))
    };
    let Schur { t, q } = schur(&sym)?;
    let n = t.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| t[(a, a)].re.partial_cmp(&t[(b, b)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&k| t[(k, k)].re).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = q.col(src);
        fix_phase(&mut col);
        vecs.set_col(dst, &col);
    }
    Ok((values, vecs))
}

/// Rotates a vector so its largest-modulus component is real positive.
pub fn fix_phase<T: Real>(v: &mut [Cplx<T>]) {
    let mut best = T::zero();
    let mut phase = Cplx::one();
    // Ties resolved by the lowest index, with a small relative slack so the
    // choice is stable against roundoff.
    for z in v.iter() {
        if z.norm() > best * (T::one() + T::of(1e-9)) {
            best = z.norm();
            phase = z / z.norm();
        }
    }
    let f = phase.conj();
    v.iter_mut().for_each(|z| *z = *z * f);
}
