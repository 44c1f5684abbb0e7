//! Spin-1/2 chain operators in the computational basis.
//!
//! A product state `|m_1 ... m_n>` has index `Σ_j bit(m_j) 2^(n-j)` with
//! `bit(up) = 0`, `bit(down) = 1`, so site 1 is the most significant bit and
//! `σ^z |up> = +|up>`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::{c, Cplx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
    /// σ⁺ = (σ^x + iσ^y)/2, raises `|down>` to `|up>`.
    Plus,
    /// σ⁻ = (σ^x − iσ^y)/2.
    Minus,
}

impl Pauli {
    pub const ALL: [Pauli; 5] = [Pauli::X, Pauli::Y, Pauli::Z, Pauli::Plus, Pauli::Minus];

    pub fn matrix<T: Real>(self) -> CMatrix<T> {
        let (o, l, i) = (Cplx::<T>::zero(), Cplx::<T>::one(), Cplx::<T>::i());
        let rows = match self {
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
            Pauli::Plus => [[o, l], [o, o]],
            Pauli::Minus => [[o, o], [l, o]],
        };
        CMatrix::from_row_major(2, 2, rows.concat()).expect("2x2")
    }
}

/// Index conventions for an `n`-site chain and its operator space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisConvention {
    pub hilbert_dim: usize,
    pub sites: Option<usize>,
}

impl BasisConvention {
    pub fn for_dim(hilbert_dim: usize) -> Self {
        Self { hilbert_dim, sites: None }
    }

    pub fn for_chain(n: usize) -> Self {
        Self {
            hilbert_dim: 1 << n,
            sites: Some(n),
        }
    }

    /// Flat index of `E_{j,k}`.
    #[inline]
    pub fn op_index(&self, j: usize, k: usize) -> usize {
        j * self.hilbert_dim + k
    }

    #[inline]
    pub fn op_label(&self, flat: usize) -> (usize, usize) {
        (flat / self.hilbert_dim, flat % self.hilbert_dim)
    }

    /// Index of a product state given spins (`true` = up) for sites 1..=n.
    pub fn state_index(spins_up: &[bool]) -> usize {
        spins_up.iter().fold(0, |acc, &up| (acc << 1) | usize::from(!up))
    }
}

/// `I^{⊗(j-1)} ⊗ σ ⊗ I^{⊗(n-j)}` on an `n`-site chain, sites numbered from 1.
pub fn site_operator<T: Real>(kind: Pauli, j: usize, n: usize) -> Result<CMatrix<T>> {
    if j == 0 || j > n {
        return Err(Error::SiteOutOfRange { site: j, n });
    }
    let left = CMatrix::identity(1 << (j - 1));
    let right = CMatrix::identity(1 << (n - j));
    Ok(left.kron(&kind.matrix()).kron(&right))
}

/// Magnetization `Σ_j σ^z_j` eigenvalue of basis state `index`.
pub fn magnetization(index: usize, n: usize) -> i32 {
    let downs = (index & ((1 << n) - 1)).count_ones() as i32;
    n as i32 - 2 * downs
}

/// Total magnetization operator `M^z = Σ_j σ^z_j` (diagonal).
pub fn total_mz<T: Real>(n: usize) -> CMatrix<T> {
    let d: Vec<T> = (0..1usize << n).map(|i| T::of(magnetization(i, n) as f64)).collect();
    CMatrix::from_real_diag(&d)
}

/// `∏_j σ^z_j` (diagonal, entries `(-1)^{#down}`).
pub fn z_string<T: Real>(n: usize) -> CMatrix<T> {
    let d: Vec<T> = (0..1usize << n)
        .map(|i| if i.count_ones() % 2 == 0 { T::one() } else { -T::one() })
        .collect();
    CMatrix::from_real_diag(&d)
}

/// Global spin flip `S = ∏_j σ^x_j`, mapping index `i` to `N-1-i`.
pub fn spin_flip<T: Real>(n: usize) -> CMatrix<T> {
    let dim = 1usize << n;
    CMatrix::from_fn(dim, dim, |i, j| if i + j == dim - 1 { c(T::one(), T::zero()) } else { Cplx::zero() })
}

/// Reverses the bit order of an `n`-bit index.
pub fn reverse_bits(index: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, b| (acc << 1) | ((index >> b) & 1))
}

/// Site reflection `R|m_1 ... m_n> = |m_n ... m_1>`.
pub fn reflection<T: Real>(n: usize) -> CMatrix<T> {
    let dim = 1usize << n;
    CMatrix::from_fn(dim, dim, |i, j| if i == reverse_bits(j, n) { Cplx::one() } else { Cplx::zero() })
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = CMatrix<f64>;

    #[test]
    fn sigma_z_on_first_of_two_sites() {
        let z = site_operator::<f64>(Pauli::Z, 1, 2).unwrap();
        assert_eq!(z, M::from_real_diag(&[1., 1., -1., -1.]));
    }

    #[test]
    fn raising_operator_maps_down_to_up() {
        let sp = site_operator::<f64>(Pauli::Plus, 1, 1).unwrap();
        let down = [Cplx::zero(), Cplx::one()];
        assert_eq!(sp.matvec(&down), vec![Cplx::one(), Cplx::zero()]);
    }

    #[test]
    fn ladder_operators_from_xy() {
        let x = Pauli::X.matrix::<f64>();
        let y = Pauli::Y.matrix::<f64>();
        let i = Cplx::i();
        let plus = (&x + &y.scale(i)).scale_real(0.5);
        let minus = (&x - &y.scale(i)).scale_real(0.5);
        assert_eq!(plus, Pauli::Plus.matrix());
        assert_eq!(minus, Pauli::Minus.matrix());
        assert_eq!(Pauli::Plus.matrix::<f64>().dagger(), Pauli::Minus.matrix());
    }

    #[test]
    fn operators_on_different_sites_commute() {
        let n = 3;
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                for j in 1..=n {
                    for k in 1..=n {
                        if j == k {
                            continue;
                        }
                        let oa = site_operator::<f64>(a, j, n).unwrap();
                        let ob = site_operator::<f64>(b, k, n).unwrap();
                        assert_eq!(oa.commutator(&ob).unwrap().max_abs(), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn site_out_of_range() {
        assert!(site_operator::<f64>(Pauli::X, 0, 3).is_err());
        assert!(site_operator::<f64>(Pauli::X, 4, 3).is_err());
    }

    #[test]
    fn index_conventions() {
        assert_eq!(BasisConvention::state_index(&[true, false]), 1);
        assert_eq!(BasisConvention::state_index(&[false, true, true]), 4);
        assert_eq!(magnetization(0, 3), 3);
        assert_eq!(magnetization(7, 3), -3);
        let conv = BasisConvention::for_chain(2);
        assert_eq!(conv.op_index(2, 3), 11);
        assert_eq!(conv.op_label(11), (2, 3));
        assert_eq!(reverse_bits(0b001, 3), 0b100);
        assert_eq!(total_mz::<f64>(2), M::from_real_diag(&[2., 0., 0., -2.]));
    }

    #[test]
    fn reflection_and_flip_are_involutions() {
        for n in 1..=4 {
            let r = reflection::<f64>(n);
            let s = spin_flip::<f64>(n);
            assert_eq!(&r * &r, M::identity(1 << n));
            assert_eq!(&s * &s, M::identity(1 << n));
            let mut sx = M::identity(1);
            for _ in 0..n {
                sx = sx.kron(&Pauli::X.matrix());
            }
            assert_eq!(s, sx);
        }
    }
}
