//! Parity superoperators and the PT master-symmetry residuals.
//!
//! A parity is a map `ρ -> A ρ B` that is unitary in the Hilbert-Schmidt
//! sense and squares to the identity. The operator pair is the source of
//! truth; matrices on the full space or on a sector are derived from it.
//! A Liouvillian is PT-symmetric when its traceless part obeys
//! `(L')^† = −P L' P`.

use crate::error::{Error, Result};
use crate::liouville::{average_damping, propagator, traceless_part, SuperOperator};
use crate::matrix::CMatrix;
use crate::scalar::{Cplx, Real};
use crate::spin::{reflection, z_string, BasisConvention};
use crate::xxz::{ladder_rows, ladder_to_direct, XxzParams};

#[derive(Debug, Clone)]
pub struct ParitySuperOp<T: Real> {
    left: CMatrix<T>,
    right: CMatrix<T>,
    sup: SuperOperator<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport<T: Real> {
    /// `||(L')^† + P L' P||_F / max(1, ||L'||_F)`.
    pub pt_residual: T,
    /// `||P² − 1||_max`.
    pub involution_residual: T,
    /// `||P^† P − 1||_max`.
    pub unitarity_residual: T,
    /// Largest matrix element of `P` from the retained basis to dropped basis elements.
    pub sector_leakage: T,
    pub gamma_bar: T,
}

fn unitarity_defect<T: Real>(a: &CMatrix<T>) -> T {
    (&a.dagger() * a).max_abs_diff(&CMatrix::identity(a.dim()))
}

impl<T: Real> ParitySuperOp<T> {
    pub fn left(&self) -> &CMatrix<T> {
        &self.left
    }

    pub fn right(&self) -> &CMatrix<T> {
        &self.right
    }

    /// Matrix on the full operator space.
    pub fn superoperator(&self) -> &SuperOperator<T> {
        &self.sup
    }

    pub fn apply(&self, rho: &CMatrix<T>) -> CMatrix<T> {
        &(&self.left * rho) * &self.right
    }

    /// Matrix element between basis elements `(j,k)` (row) and `(jp,kp)` (column).
    #[inline]
    fn element(&self, (j, k): (usize, usize), (jp, kp): (usize, usize)) -> Cplx<T> {
        self.left[(j, jp)] * self.right[(kp, k)]
    }

    /// Principal block of `P` on the given labels plus the largest element
    /// mapping a retained label outside the block.
    pub fn restricted(&self, labels: &[(usize, usize)]) -> (CMatrix<T>, T) {
        let m = CMatrix::from_fn(labels.len(), labels.len(), |a, b| self.element(labels[a], labels[b]));
        let n = self.left.dim();
        let mut kept = vec![false; n * n];
        for &(j, k) in labels {
            kept[j * n + k] = true;
        }
        let mut leak = T::zero();
        for &col in labels {
            for j in 0..n {
                for k in 0..n {
                    if !kept[j * n + k] {
                        leak = leak.max(self.element((j, k), col).norm());
                    }
                }
            }
        }
        (m, leak)
    }

    /// Parity restricted to a superoperator's basis, as a superoperator.
    pub fn on_basis_of(&self, sup: &SuperOperator<T>) -> Result<(SuperOperator<T>, T)> {
        if sup.hilbert_dim() != self.left.dim() {
            return Err(Error::DimensionMismatch(format!(
                "parity on Hilbert dim {} vs superoperator on {}",
                self.left.dim(),
                sup.hilbert_dim()
            )));
        }
        if sup.is_full() {
            return Ok((self.sup.clone(), T::zero()));
        }
        let (m, leak) = self.restricted(sup.labels());
        Ok((sup.with_matrix(m)?, leak))
    }

    pub fn involution_residual(&self) -> T {
        let m = self.sup.matrix();
        (m * m).max_abs_diff(&CMatrix::identity(m.dim()))
    }

    pub fn unitarity_residual(&self) -> T {
        unitarity_defect(self.sup.matrix())
    }
}

/// Parity `ρ -> A ρ B` with superoperator matrix `kron(A, B^T)`.
pub fn parity_from_pair<T: Real>(a: CMatrix<T>, b: CMatrix<T>) -> Result<ParitySuperOp<T>> {
    a.ensure_square()?;
    b.ensure_square()?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch("parity factors differ in size".into()));
    }
    let tol = T::of(1e-12);
    let ua = unitarity_defect(&a).max(unitarity_defect(&b));
    if ua > tol {
        return Err(Error::NotUnitary {
            residual: ua.to_f64().unwrap_or(f64::NAN),
        });
    }
    let n = a.dim();
    let m = a.kron(&b.transpose());
    let sup = SuperOperator::full(m, BasisConvention::for_dim(n))?;
    let p = ParitySuperOp { left: a, right: b, sup };
    let inv = p.involution_residual();
    if inv > tol {
        return Err(Error::NotInvolution {
            residual: inv.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(p)
}

/// XXZ parity `ρ -> (R ∏σ^z) ρ R`.
pub fn xxz_parity<T: Real>(n: usize) -> Result<ParitySuperOp<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("chain length n = 0".into()));
    }
    let r = reflection::<T>(n);
    let u = &r * &z_string(n);
    parity_from_pair(u, r)
}

/// The XXZ parity built literally as `(R ∏σ^z) ⊗ R` on `H ⊗ H` and mapped to
/// the `E_{j,k}` basis.
pub fn xxz_parity_ladder<T: Real>(n: usize) -> CMatrix<T> {
    let r = reflection::<T>(n);
    let u = &r * &z_string(n);
    ladder_to_direct(&u.kron(&r), n)
}

fn relative_pt_residual<T: Real>(lp: &CMatrix<T>, p: &CMatrix<T>) -> T {
    let mirrored = &(p * lp) * p;
    let res = (&lp.dagger() + &mirrored).frobenius_norm();
    res / T::one().max(lp.frobenius_norm())
}

/// PT residual of a Liouvillian (full or sector-restricted) under a parity.
pub fn check_pt<T: Real>(liou: &SuperOperator<T>, parity: &ParitySuperOp<T>) -> Result<SymmetryReport<T>> {
    let (p, leak) = parity.on_basis_of(liou)?;
    let lp = traceless_part(liou);
    Ok(SymmetryReport {
        pt_residual: relative_pt_residual(lp.matrix(), p.matrix()),
        involution_residual: parity.involution_residual(),
        unitarity_residual: parity.unitarity_residual(),
        sector_leakage: leak,
        gamma_bar: average_damping(liou),
    })
}

/// PT residuals of the three ladder rows of the XXZ Liouvillian, each made traceless on its own.
pub fn check_pt_rows<T: Real>(p: &XxzParams<T>) -> Result<[T; 3]> {
    let parity = xxz_parity::<T>(p.n)?;
    let pm = parity.superoperator().matrix();
    let rows = ladder_rows(p)?;
    let conv = BasisConvention::for_chain(p.n);
    let mut out = [T::zero(); 3];
    for (slot, row) in out.iter_mut().zip(rows.iter()) {
        let sup = SuperOperator::full(ladder_to_direct(row, p.n), conv)?;
        *slot = relative_pt_residual(traceless_part(&sup).matrix(), pm);
    }
    Ok(out)
}

/// `||U(−t) − e^{2γ̄t} P U(t)^† P||_F / ||U(−t)||_F`.
pub fn check_inversion<T: Real>(liou: &SuperOperator<T>, parity: &ParitySuperOp<T>, t: T) -> Result<T> {
    let (p, _) = parity.on_basis_of(liou)?;
    let p = p.matrix();
    let backward = propagator(liou, -t)?;
    let forward = propagator(liou, t)?;
    let g = average_damping(liou);
    let mirrored = (&(p * &forward.matrix().dagger()) * p).scale_real((T::of(2.0) * g * t).exp());
    let diff = (backward.matrix() - &mirrored).frobenius_norm();
    Ok(diff / backward.matrix().frobenius_norm())
}
