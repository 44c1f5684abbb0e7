//! Boundary-driven open XXZ chain.
//!
//! `H = Σ_{j<n} 2σ⁺_jσ⁻_{j+1} + 2σ⁻_jσ⁺_{j+1} + Δ σ^z_jσ^z_{j+1}` with four
//! edge Lindblad operators
//! `L1 = ½√(1+μ) σ⁺_1`, `L2 = ½√(1−μ) σ⁻_1`, `L3 = ½√(1−μ) σ⁺_n`, `L4 = ½√(1+μ) σ⁻_n`.
//!
//! Besides the direct Lindblad assembly this module builds the same
//! Liouvillian in "ladder" form on `H ⊗ H`, where `|ψ><φ|` is identified
//! with `|ψ> ⊗ S|φ>` and `S = ∏σ^x` is the global spin flip. The two
//! constructions share no code beyond site operators and `kron`, so their
//! agreement checks the vectorization bookkeeping.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::liouville::{build_superoperator, sector_restrict, LindbladModel, SuperOperator};
use crate::matrix::CMatrix;
use crate::scalar::{Cplx, Real};
use crate::spin::{magnetization, reflection, site_operator, spin_flip, total_mz, BasisConvention, Pauli};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XxzParams<T: Real> {
    pub n: usize,
    pub delta: T,
    pub mu: T,
    pub gamma: T,
}

impl<T: Real> XxzParams<T> {
    pub fn new(n: usize, delta: T, mu: T, gamma: T) -> Result<Self> {
        let p = Self { n, delta, mu, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("chain length n = {} (need n >= 2)", self.n)));
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidParameter(format!("anisotropy delta = {}", self.delta)));
        }
        if !(self.mu >= -T::one() && self.mu <= T::one()) {
            return Err(Error::InvalidParameter(format!("driving mu = {} outside [-1, 1]", self.mu)));
        }
        if !(self.gamma >= T::zero() && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("coupling gamma = {}", self.gamma)));
        }
        Ok(())
    }

    pub fn with_gamma(&self, gamma: T) -> Self {
        Self { gamma, ..*self }
    }

    pub fn hilbert_dim(&self) -> usize {
        1 << self.n
    }
}

fn op<T: Real>(kind: Pauli, j: usize, n: usize) -> CMatrix<T> {
    site_operator(kind, j, n).expect("site within chain")
}

pub fn hamiltonian<T: Real>(n: usize, delta: T) -> CMatrix<T> {
    let dim = 1 << n;
    let mut h = CMatrix::zeros(dim, dim);
    for j in 1..n {
        let hop = &(&op(Pauli::Plus, j, n) * &op(Pauli::Minus, j + 1, n)) + &(&op(Pauli::Minus, j, n) * &op(Pauli::Plus, j + 1, n));
        h += &hop.scale_real(T::of(2.0));
        h += &(&op(Pauli::Z, j, n) * &op(Pauli::Z, j + 1, n)).scale_real(delta);
    }
    h
}

/// The four boundary Lindblad operators; zero operators are kept at `μ = ±1`.
pub fn lindblads<T: Real>(n: usize, mu: T) -> Vec<CMatrix<T>> {
    let half = T::of(0.5);
    let up = half * (T::one() + mu).max(T::zero()).sqrt();
    let down = half * (T::one() - mu).max(T::zero()).sqrt();
    vec![
        op(Pauli::Plus, 1, n).scale_real(up),
        op(Pauli::Minus, 1, n).scale_real(down),
        op(Pauli::Plus, n, n).scale_real(down),
        op(Pauli::Minus, n, n).scale_real(up),
    ]
}

pub fn xxz_model<T: Real>(p: &XxzParams<T>) -> Result<LindbladModel<T>> {
    p.validate()?;
    LindbladModel::new(hamiltonian(p.n, p.delta), lindblads(p.n, p.mu), p.gamma)
}

/// `J = i Σ_{j<n} (σ⁺_jσ⁻_{j+1} − σ⁻_jσ⁺_{j+1})`.
pub fn spin_current<T: Real>(n: usize) -> Result<CMatrix<T>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("chain length n = {n} (need n >= 2)")));
    }
    let dim = 1 << n;
    let mut j_op = CMatrix::zeros(dim, dim);
    for j in 1..n {
        j_op += &(&op(Pauli::Plus, j, n) * &op(Pauli::Minus, j + 1, n));
        j_op -= &(&op(Pauli::Minus, j, n) * &op(Pauli::Plus, j + 1, n));
    }
    Ok(j_op.scale(Cplx::i()))
}

/// Basis pairs `(j,k)` with `m(j) − m(k) = dmz`, in flat-index order.
pub fn sector_basis(n: usize, dmz: i32) -> Vec<(usize, usize)> {
    let dim = 1usize << n;
    let mut out = Vec::new();
    for j in 0..dim {
        for k in 0..dim {
            if magnetization(j, n) - magnetization(k, n) == dmz {
                out.push((j, k));
            }
        }
    }
    out
}

/// Operator subspace a computation runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Full,
    /// Basis pairs whose bra and ket magnetizations differ by the given amount.
    Magnetization(i32),
}

impl Sector {
    pub const DMZ0: Sector = Sector::Magnetization(0);

    /// Basis labels for an `n`-site chain, `None` for the full space.
    pub fn labels(self, n: usize) -> Option<Vec<(usize, usize)>> {
        match self {
            Sector::Full => None,
            Sector::Magnetization(d) => Some(sector_basis(n, d)),
        }
    }
}

/// XXZ Liouvillian on the requested sector.
pub fn xxz_liouvillian<T: Real>(p: &XxzParams<T>, sector: Sector) -> Result<SuperOperator<T>> {
    let full = build_superoperator(&xxz_model(p)?);
    match sector.labels(p.n) {
        None => Ok(full),
        Some(l) => sector_restrict(&full, &l),
    }
}

/// Commuting symmetries of the XXZ Hamiltonian used to resolve its degeneracies:
/// total magnetization and site reflection.
pub fn xxz_symmetries<T: Real>(n: usize) -> Vec<CMatrix<T>> {
    vec![total_mz(n), reflection(n)]
}

/// Converts an operator on `H ⊗ H` (ladder form) into the `E_{j,k}` basis
/// through `|j><k| ↔ |j> ⊗ S|k>`.
pub fn ladder_to_direct<T: Real>(ladder: &CMatrix<T>, n: usize) -> CMatrix<T> {
    let phi = CMatrix::identity(1 << n).kron(&spin_flip(n));
    &(&phi.dagger() * ladder) * &phi
}

/// The three ladder-form rows of the XXZ Liouvillian, each as a ladder matrix:
/// the coherent part with the boundary σ^z field, the `(1+μ)/2` jumps, and
/// the `(1−μ)/2` jumps together with `−γ 1⊗1`.
pub fn ladder_rows<T: Real>(p: &XxzParams<T>) -> Result<[CMatrix<T>; 3]> {
    p.validate()?;
    let n = p.n;
    let dim = 1 << n;
    let eye = CMatrix::identity(dim);
    let h = hamiltonian(n, p.delta);
    let zdiff = &op(Pauli::Z, 1, n) - &op(Pauli::Z, n, n);
    let a = &h.scale(Cplx::i()) - &zdiff.scale_real(p.gamma * p.mu * T::of(0.25));
    let row1 = &eye.kron(&a) - &a.kron(&eye);

    let half = T::of(0.5);
    let sp1 = op::<T>(Pauli::Plus, 1, n);
    let sm1 = op::<T>(Pauli::Minus, 1, n);
    let spn = op::<T>(Pauli::Plus, n, n);
    let smn = op::<T>(Pauli::Minus, n, n);
    let row2 = (&sp1.kron(&sm1) + &smn.kron(&spn)).scale_real(p.gamma * (T::one() + p.mu) * half);
    let row3 = &(&sm1.kron(&sp1) + &spn.kron(&smn)).scale_real(p.gamma * (T::one() - p.mu) * half)
        - &CMatrix::identity(dim * dim).scale_real(p.gamma);
    Ok([row1, row2, row3])
}

/// Liouvillian assembled from the ladder rows and mapped back to the `E_{j,k}` basis.
pub fn ladder_liouvillian<T: Real>(p: &XxzParams<T>) -> Result<SuperOperator<T>> {
    let [r1, r2, r3] = ladder_rows(p)?;
    let total = &(&r1 + &r2) + &r3;
    SuperOperator::full(ladder_to_direct(&total, p.n), BasisConvention::for_chain(p.n))
}

/// Largest `|<ψ_j|J|ψ_j>|` over the given eigenvectors (columns).
pub fn max_diagonal_element<T: Real>(op: &CMatrix<T>, vectors: &CMatrix<T>) -> T {
    let mut worst = T::zero();
    for k in 0..vectors.cols() {
        let v = vectors.col(k);
        let ov = op.matvec(&v);
        let d: Cplx<T> = v.iter().zip(&ov).map(|(a, b)| a.conj() * b).sum();
        worst = worst.max(d.norm());
    }
    worst
}

/// Whether every element of `v` vanishes outside the given labels.
pub fn supported_on<T: Real>(m: &CMatrix<T>, labels: &[(usize, usize)]) -> bool {
    let mut mask = vec![false; m.rows() * m.cols()];
    for &(j, k) in labels {
        mask[j * m.cols() + k] = true;
    }
    m.as_slice().iter().zip(&mask).all(|(z, &keep)| keep || z.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::hermitian_eigen;
    use crate::liouville::build_superoperator;

    #[test]
    fn two_site_energies() {
        let (e, _) = hermitian_eigen(&hamiltonian::<f64>(2, 0.5)).unwrap();
        for (a, b) in e.iter().zip([-2.5, 0.5, 0.5, 1.5]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn maximal_driving_zeroes_two_lindblads() {
        let ls = lindblads::<f64>(3, 1.0);
        assert_eq!(ls.len(), 4);
        assert_eq!(ls[1].max_abs(), 0.0);
        assert_eq!(ls[2].max_abs(), 0.0);
    }

    #[test]
    fn hamiltonian_conserves_magnetization_and_is_reflection_symmetric() {
        for n in 2..=4 {
            let h = hamiltonian::<f64>(n, 0.7);
            assert!(h.commutator(&total_mz(n)).unwrap().max_abs() < 1e-14);
            let r = reflection::<f64>(n);
            assert!((&(&r * &h) * &r).approx_eq(&h, 1e-13));
            let j = spin_current::<f64>(n).unwrap();
            assert!((&(&r * &j) * &r).approx_eq(&j.scale_real(-1.0), 1e-13));
        }
    }

    #[test]
    fn current_matrix_element() {
        let j = spin_current::<f64>(2).unwrap();
        let up_down = BasisConvention::state_index(&[true, false]);
        let down_up = BasisConvention::state_index(&[false, true]);
        assert!((j[(up_down, down_up)] - Cplx::i()).norm() < 1e-15);
        assert!(j.hermiticity_defect() < 1e-14);
        assert!(j.trace().norm() < 1e-14);
    }

    #[test]
    fn sector_sizes() {
        assert_eq!(sector_basis(4, 0).len(), 70);
        assert_eq!(sector_basis(2, 0).len(), 6);
        assert_eq!(sector_basis(2, 4).len(), 1);
        assert!(sector_basis(3, 1).is_empty());
    }

    #[test]
    fn ladder_matches_direct() {
        let p = XxzParams::new(2, 0.5, 0.3, 0.7).unwrap();
        let direct = build_superoperator(&xxz_model(&p).unwrap());
        let ladder = ladder_liouvillian(&p).unwrap();
        assert!(ladder.matrix().max_abs_diff(direct.matrix()) <= 1e-12);
        assert!((ladder.trace().re + 0.7 * 16.0f64).abs() < 1e-12);
    }

    #[test]
    fn closed_ladder_is_coherent_row() {
        let p = XxzParams::new(2, 0.5, 0.3, 0.0).unwrap();
        let ih = hamiltonian::<f64>(2, 0.5).scale(Cplx::i());
        let eye = CMatrix::identity(4);
        let want = ladder_to_direct(&(&eye.kron(&ih) - &ih.kron(&eye)), 2);
        assert!(ladder_liouvillian(&p).unwrap().matrix().approx_eq(&want, 1e-15));
    }

    #[test]
    fn params_validation() {
        assert!(XxzParams::new(1, 0.5, 0.0, 0.1).is_err());
        assert!(XxzParams::new(3, 0.5, 1.5, 0.1).is_err());
        assert!(XxzParams::new(3, 0.5, 0.5, -0.1).is_err());
        assert!(XxzParams::new(3, f64::NAN, 0.5, 0.1).is_err());
    }
}
