//! Lindblad generators as superoperator matrices.
//!
//! The generator is `L = -i ad(H) + γ D` with
//! `D ρ = Σ_m 2 L_m ρ L_m^† − L_m^† L_m ρ − ρ L_m^† L_m`, assembled as
//!
//! ```text
//! -i (H ⊗ I − I ⊗ H^T) + γ Σ_m [2 L_m ⊗ conj(L_m) − L_m^†L_m ⊗ I − I ⊗ (L_m^†L_m)^T]
//! ```
//!
//! in the row-major operator basis (see [`crate::matrix`]).

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expm::mat_exp;
use crate::matrix::CMatrix;
use crate::scalar::{Cplx, Real};
use crate::spin::BasisConvention;

/// Hamiltonian, Lindblad operators and coupling strength γ.
#[derive(Debug, Clone)]
pub struct LindbladModel<T: Real> {
    hamiltonian: CMatrix<T>,
    lindblads: Vec<CMatrix<T>>,
    gamma: T,
}

impl<T: Real> LindbladModel<T> {
    pub fn new(hamiltonian: CMatrix<T>, lindblads: Vec<CMatrix<T>>, gamma: T) -> Result<Self> {
        hamiltonian.ensure_square()?;
        hamiltonian.ensure_finite("Hamiltonian")?;
        let n = hamiltonian.dim();
        let defect = hamiltonian.hermiticity_defect();
        if defect > T::of(1e-12) * hamiltonian.frobenius_norm() {
            return Err(Error::NotHermitian {
                residual: defect.to_f64().unwrap_or(f64::NAN),
            });
        }
        for l in &lindblads {
            if l.rows() != n || l.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "Lindblad operator {}x{} for Hilbert dimension {n}",
                    l.rows(),
                    l.cols()
                )));
            }
            l.ensure_finite("Lindblad operator")?;
        }
        let max = (n * n).saturating_sub(1);
        if lindblads.len() > max {
            return Err(Error::TooManyLindblads {
                count: lindblads.len(),
                max,
            });
        }
        if !(gamma >= T::zero() && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("coupling gamma = {gamma}")));
        }
        Ok(Self {
            hamiltonian,
            lindblads,
            gamma,
        })
    }

    pub fn hamiltonian(&self) -> &CMatrix<T> {
        &self.hamiltonian
    }

    pub fn lindblads(&self) -> &[CMatrix<T>] {
        &self.lindblads
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn with_gamma(&self, gamma: T) -> Result<Self> {
        Self::new(self.hamiltonian.clone(), self.lindblads.clone(), gamma)
    }

    /// `D ρ` by direct operator arithmetic.
    pub fn dissipate(&self, rho: &CMatrix<T>) -> CMatrix<T> {
        let mut out = CMatrix::zeros(rho.rows(), rho.cols());
        for l in &self.lindblads {
            let ld = l.dagger();
            let ll = &ld * l;
            out += &(&(l * rho) * &ld).scale_real(T::of(2.0));
            out -= &(&ll * rho);
            out -= &(rho * &ll);
        }
        out
    }

    /// `L ρ = −i[H, ρ] + γ D ρ` by direct operator arithmetic.
    pub fn apply(&self, rho: &CMatrix<T>) -> CMatrix<T> {
        let comm = self.hamiltonian.commutator(rho).expect("square operators");
        &comm.scale(-Cplx::i()) + &self.dissipate(rho).scale_real(self.gamma)
    }
}

/// Matrix of a linear map on `B(H)` in the row-major `E_{j,k}` basis,
/// possibly restricted to a subset of basis elements.
#[derive(Debug, Clone)]
pub struct SuperOperator<T: Real> {
    matrix: CMatrix<T>,
    convention: BasisConvention,
    labels: Vec<(usize, usize)>,
}

impl<T: Real> SuperOperator<T> {
    /// Wraps an `N² x N²` matrix acting on the full operator space.
    pub fn full(matrix: CMatrix<T>, convention: BasisConvention) -> Result<Self> {
        matrix.ensure_square()?;
        let n = convention.hilbert_dim;
        if matrix.dim() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "superoperator of dim {} for Hilbert dim {n}",
                matrix.dim()
            )));
        }
        let labels = (0..n * n).map(|f| convention.op_label(f)).collect();
        Ok(Self {
            matrix,
            convention,
            labels,
        })
    }

    /// Wraps a matrix acting on the span of the listed basis elements.
    pub fn on_labels(matrix: CMatrix<T>, convention: BasisConvention, labels: Vec<(usize, usize)>) -> Result<Self> {
        matrix.ensure_square()?;
        if matrix.dim() != labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for superoperator of dim {}",
                labels.len(),
                matrix.dim()
            )));
        }
        let n = convention.hilbert_dim;
        if let Some(&(j, k)) = labels.iter().find(|&&(j, k)| j >= n || k >= n) {
            return Err(Error::InvalidLabel(j, k));
        }
        Ok(Self {
            matrix,
            convention,
            labels,
        })
    }

    pub fn identity_like(&self) -> Self {
        Self {
            matrix: CMatrix::identity(self.dim()),
            convention: self.convention,
            labels: self.labels.clone(),
        }
    }

    pub fn with_matrix(&self, matrix: CMatrix<T>) -> Result<Self> {
        Self::on_labels(matrix, self.convention, self.labels.clone())
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn convention(&self) -> BasisConvention {
        self.convention
    }

    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn hilbert_dim(&self) -> usize {
        self.convention.hilbert_dim
    }

    pub fn is_full(&self) -> bool {
        let n = self.hilbert_dim();
        self.labels.len() == n * n && self.labels.iter().enumerate().all(|(f, &(j, k))| f == j * n + k)
    }

    /// Position lookup table from flat `j*N+k` to the local index.
    pub fn positions(&self) -> Vec<Option<usize>> {
        let n = self.hilbert_dim();
        let mut pos = vec![None; n * n];
        for (i, &(j, k)) in self.labels.iter().enumerate() {
            pos[j * n + k] = Some(i);
        }
        pos
    }

    /// Coordinates of an operator in this superoperator's basis (entries outside are dropped).
    pub fn vectorize(&self, rho: &CMatrix<T>) -> Vec<Cplx<T>> {
        self.labels.iter().map(|&(j, k)| rho[(j, k)]).collect()
    }

    /// Operator with the given coordinates (zero outside the retained labels).
    pub fn unvectorize(&self, v: &[Cplx<T>]) -> CMatrix<T> {
        assert_eq!(v.len(), self.labels.len());
        let n = self.hilbert_dim();
        let mut m = CMatrix::zeros(n, n);
        for (&(j, k), &x) in self.labels.iter().zip(v) {
            m[(j, k)] = x;
        }
        m
    }

    pub fn apply(&self, rho: &CMatrix<T>) -> CMatrix<T> {
        self.unvectorize(&self.matrix.matvec(&self.vectorize(rho)))
    }

    /// Index map of `(j,k) -> (k,j)` within the retained labels.
    pub fn adjoint_permutation(&self) -> Result<Vec<usize>> {
        let pos = self.positions();
        let n = self.hilbert_dim();
        self.labels
            .iter()
            .map(|&(j, k)| pos[k * n + j].ok_or(Error::LabelsNotSelfAdjoint))
            .collect()
    }

    /// Coordinates of `rho^†` given those of `rho`.
    pub fn adjoint_vector(&self, v: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        let perm = self.adjoint_permutation()?;
        Ok(perm.iter().map(|&p| v[p].conj()).collect())
    }

    pub fn trace(&self) -> Cplx<T> {
        self.matrix.trace()
    }
}

fn unitary_part<T: Real>(h: &CMatrix<T>) -> CMatrix<T> {
    let eye = CMatrix::identity(h.dim());
    (&h.kron(&eye) - &eye.kron(&h.transpose())).scale(-Cplx::i())
}

fn dissipator_matrix<T: Real>(lindblads: &[CMatrix<T>], n: usize) -> CMatrix<T> {
    let eye = CMatrix::identity(n);
    let mut d = CMatrix::zeros(n * n, n * n);
    for l in lindblads {
        let ll = &l.dagger() * l;
        d += &l.kron(&l.conj()).scale_real(T::of(2.0));
        d -= &ll.kron(&eye);
        d -= &eye.kron(&ll.transpose());
    }
    d
}

/// Superoperator of `L = −i ad(H) + γ D`.
pub fn build_superoperator<T: Real>(model: &LindbladModel<T>) -> SuperOperator<T> {
    let n = model.hilbert_dim();
    let mut m = unitary_part(model.hamiltonian());
    m += &dissipator_matrix(model.lindblads(), n).scale_real(model.gamma());
    SuperOperator::full(m, BasisConvention::for_dim(n)).expect("consistent dimensions")
}

/// Superoperator of the dissipator `D` alone (no γ factor).
pub fn dissipator<T: Real>(model: &LindbladModel<T>) -> SuperOperator<T> {
    let n = model.hilbert_dim();
    SuperOperator::full(dissipator_matrix(model.lindblads(), n), BasisConvention::for_dim(n)).expect("consistent dimensions")
}

/// Traceless dissipator `D' = D + 1`; refuses dissipators without `Tr D = −N²`.
pub fn dissipator_traceless<T: Real>(model: &LindbladModel<T>) -> Result<SuperOperator<T>> {
    let d = dissipator(model);
    let n2 = T::of_usize(d.dim());
    let tr = d.trace();
    if (tr.re + n2).abs() > T::of(1e-9) * n2 || tr.im.abs() > T::of(1e-9) * n2 {
        return Err(Error::DissipatorNotNormalized {
            trace: tr.re.to_f64().unwrap_or(f64::NAN),
            expected: -n2.to_f64().unwrap_or(f64::NAN),
        });
    }
    let m = &d.matrix + &CMatrix::identity(d.dim());
    d.with_matrix(m)
}

/// Average damping `γ̄ = −Tr L / Tr 1`.
pub fn average_damping<T: Real>(sup: &SuperOperator<T>) -> T {
    if sup.dim() == 0 {
        return T::zero();
    }
    -sup.trace().re / T::of_usize(sup.dim())
}

/// `L' = L + γ̄ 1`.
pub fn traceless_part<T: Real>(sup: &SuperOperator<T>) -> SuperOperator<T> {
    let g = average_damping(sup);
    let mut m = sup.matrix.clone();
    for i in 0..m.dim() {
        m[(i, i)] = m[(i, i)] + g;
    }
    sup.with_matrix(m).expect("same shape")
}

/// `U(t) = exp(t L)`.
pub fn propagator<T: Real>(sup: &SuperOperator<T>, t: T) -> Result<SuperOperator<T>> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time t = {t}")));
    }
    sup.with_matrix(mat_exp(&sup.matrix.scale_real(t))?)
}

/// `max_b || L(E_b^†) − (L E_b)^† ||` over operator basis elements `E_b`.
///
/// Requires the retained labels to be closed under `(j,k) -> (k,j)`.
pub fn hermiticity_residual<T: Real>(sup: &SuperOperator<T>) -> Result<T> {
    let perm = sup.adjoint_permutation()?;
    let m = sup.matrix();
    let d = sup.dim();
    let mut worst = T::zero();
    for b in 0..d {
        let mut col = T::zero();
        for a in 0..d {
            let diff = m[(a, perm[b])] - m[(perm[a], b)].conj();
            col = col + diff.norm_sqr();
        }
        worst = worst.max(col.sqrt());
    }
    Ok(worst)
}

/// Principal submatrix on the kept basis pairs, after checking that their span is invariant.
pub fn sector_restrict<T: Real>(sup: &SuperOperator<T>, keep: &[(usize, usize)]) -> Result<SuperOperator<T>> {
    let pos = sup.positions();
    let n = sup.hilbert_dim();
    let mut idx = Vec::with_capacity(keep.len());
    for &(j, k) in keep {
        if j >= n || k >= n {
            return Err(Error::InvalidLabel(j, k));
        }
        idx.push(pos[j * n + k].ok_or(Error::InvalidLabel(j, k))?);
    }
    let mut kept = vec![false; sup.dim()];
    for &i in &idx {
        kept[i] = true;
    }
    let m = sup.matrix();
    let mut coupling = T::zero();
    for a in (0..sup.dim()).filter(|&a| !kept[a]) {
        for &b in &idx {
            coupling = coupling.max(m[(a, b)].norm());
        }
    }
    if coupling > T::of(1e-12) * T::one().max(m.max_abs()) {
        return Err(Error::SectorNotInvariant {
            coupling: coupling.to_f64().unwrap_or(f64::NAN),
        });
    }
    SuperOperator::on_labels(m.submatrix(&idx, &idx), sup.convention(), keep.to_vec())
}

/// Coordinates of the identity operator in the superoperator's basis.
pub fn identity_vector<T: Real>(sup: &SuperOperator<T>) -> Vec<Cplx<T>> {
    sup.labels()
        .iter()
        .map(|&(j, k)| if j == k { Cplx::one() } else { Cplx::zero() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigenvalues;
    use crate::scalar::c;
    use crate::spin::Pauli;

    fn qubit(omega: f64, gamma: f64) -> LindbladModel<f64> {
        LindbladModel::new(Pauli::Z.matrix().scale_real(0.5 * omega), vec![Pauli::Minus.matrix()], gamma).unwrap()
    }

    fn sorted(mut v: Vec<Cplx<f64>>) -> Vec<Cplx<f64>> {
        v.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn single_qubit_spectrum() {
        let sup = build_superoperator(&qubit(1.0, 0.1));
        let ev = sorted(eigenvalues(sup.matrix()).unwrap());
        let want = [c(0., 0.), c(-0.1, -1.), c(-0.1, 1.), c(-0.2, 0.)];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).norm() < 1e-13, "{a} vs {b}");
        }
        assert!((average_damping(&sup) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn traceless_shift() {
        let sup = build_superoperator(&qubit(1.0, 0.1));
        let tl = traceless_part(&sup);
        assert!(tl.trace().norm() < 1e-15);
        let ev = sorted(eigenvalues(tl.matrix()).unwrap());
        let want = [c(0.1, 0.), c(0., -1.), c(0., 1.), c(-0.1, 0.)];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn closed_system_is_unchanged_by_traceless_part() {
        let sup = build_superoperator(&qubit(1.3, 0.0));
        assert_eq!(average_damping(&sup), 0.0);
        assert_eq!(traceless_part(&sup).matrix(), sup.matrix());
    }

    #[test]
    fn excited_population_decays_at_twice_gamma() {
        let sup = build_superoperator(&qubit(1.0, 0.1));
        let u = propagator(&sup, 1.0).unwrap();
        let mut rho = CMatrix::zeros(2, 2);
        rho[(0, 0)] = Cplx::one();
        let out = u.apply(&rho);
        assert!((out[(0, 0)].re - (-0.2f64).exp()).abs() < 1e-13);
        assert!((out.trace().re - 1.0).abs() < 1e-13);
        assert_eq!(propagator(&sup, 0.0).unwrap().matrix(), &CMatrix::identity(4));
    }

    #[test]
    fn hermiticity_residuals() {
        let sup = build_superoperator(&qubit(1.0, 0.3));
        assert!(hermiticity_residual(&sup).unwrap() <= 1e-13);
        let times_i = SuperOperator::full(CMatrix::<f64>::identity(4).scale(Cplx::i()), BasisConvention::for_dim(2)).unwrap();
        assert!((hermiticity_residual(&times_i).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn model_validation() {
        let h = CMatrix::<f64>::from_fn(2, 2, |i, j| c(0., (i as f64) - (j as f64) + 1.0));
        assert!(matches!(LindbladModel::new(h, vec![], 0.1), Err(Error::NotHermitian { .. })));
        let h = Pauli::Z.matrix::<f64>();
        assert!(LindbladModel::new(h.clone(), vec![CMatrix::identity(3)], 0.1).is_err());
        assert!(LindbladModel::new(h.clone(), vec![h.clone(); 4], 0.1).is_err());
        assert!(LindbladModel::new(h, vec![], -1.0).is_err());
    }

    #[test]
    fn traceless_dissipator_requires_normalization() {
        assert!(dissipator_traceless(&qubit(1.0, 0.1)).is_ok());
        let m = LindbladModel::new(Pauli::Z.matrix(), vec![Pauli::Minus.matrix().scale_real(2.0)], 0.1).unwrap();
        assert!(matches!(dissipator_traceless(&m), Err(Error::DissipatorNotNormalized { .. })));
    }

    #[test]
    fn restriction_checks_invariance() {
        let sup = build_superoperator(&qubit(1.0, 0.1));
        // populations form an invariant block, a lone coherence does not couple either
        let pops = sector_restrict(&sup, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(pops.dim(), 2);
        // |e><e| alone leaks into |g><g|
        assert!(matches!(sector_restrict(&sup, &[(0, 0)]), Err(Error::SectorNotInvariant { .. })));
        let all: Vec<_> = sup.labels().to_vec();
        assert_eq!(sector_restrict(&sup, &all).unwrap().matrix(), sup.matrix());
        assert!(sector_restrict(&sup, &[(2, 0)]).is_err());
    }
}
