//! Weak-coupling perturbation theory in `γ`: the population matrix `V`,
//! eigenvalue velocities, degeneracy diagnostics and the order-of-magnitude
//! threshold estimate `γ_PT ~ 1 / (||D'|| d²)`.

use crate::eigen::{eig, hermitian_eigen};
use crate::error::{Error, Result};
use crate::liouville::{build_superoperator, dissipator, sector_restrict, LindbladModel, SuperOperator};
use crate::matrix::CMatrix;
use crate::scalar::{c, vec_dot, Cplx, Real};
use crate::spectral::{classify_cross, eig_biortho, SpectralDecomposition};

#[derive(Debug, Clone)]
pub struct PerturbationReport<T: Real> {
    /// Ascending.
    pub energies: Vec<T>,
    /// Energy eigenvectors `ψ_j` as columns.
    pub eigenvectors: CMatrix<T>,
    /// `V_jk = (d_j, D' d_k)` with `d_j = |ψ_j><ψ_j|`.
    pub v: CMatrix<T>,
    /// Eigenvalues of `V`, sorted by real part.
    pub xi: Vec<Cplx<T>>,
    /// Eigenvectors of `V` in the same order as `xi`.
    pub hybridization: CMatrix<T>,
    /// `max |V_jk − V_kj|`.
    pub symmetry_defect: T,
    /// `max |Im V_jk|`.
    pub reality_defect: T,
}

impl<T: Real> PerturbationReport<T> {
    /// `max_k |Σ_j V_jk − 1|`.
    pub fn column_sum_defect(&self) -> T {
        let n = self.v.dim();
        (0..n)
            .map(|k| {
                let s: Cplx<T> = (0..n).map(|j| self.v[(j, k)]).sum();
                (s - Cplx::new(T::one(), T::zero())).norm()
            })
            .fold(T::zero(), T::max)
    }

    /// Real part of `V`.
    pub fn v_real(&self) -> Vec<Vec<T>> {
        (0..self.v.rows()).map(|j| self.v.row(j).iter().map(|z| z.re).collect()).collect()
    }
}

fn group_by_value<T: Real>(w: &[T], tol: T) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=w.len() {
        if i == w.len() || (w[i] - w[start]).abs() > tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Orthonormal eigenbasis of `h` that also diagonalizes the given commuting
/// Hermitian operators. Energies ascending; ties keep the symmetry ordering.
pub fn adapted_eigenbasis<T: Real>(h: &CMatrix<T>, symmetries: &[CMatrix<T>]) -> Result<(Vec<T>, CMatrix<T>)> {
    h.ensure_square()?;
    let n = h.dim();
    for s in symmetries {
        if s.rows() != n || s.cols() != n {
            return Err(Error::DimensionMismatch("symmetry operator size".into()));
        }
    }
    let mut blocks = vec![CMatrix::identity(n)];
    for op in symmetries.iter().chain(std::iter::once(h)) {
        let tol = T::of(1e-9) * T::one().max(op.max_abs());
        let mut next = Vec::new();
        for q in &blocks {
            let reduced = q.dagger().matmul(&op.matmul(q)?)?;
            let (w, u) = hermitian_eigen(&reduced)?;
            let rotated = q.matmul(&u)?;
            for r in group_by_value(&w, tol) {
                let cols: Vec<usize> = r.collect();
                next.push(rotated.submatrix(&(0..n).collect::<Vec<_>>(), &cols));
            }
        }
        blocks = next;
    }
    let mut vecs = CMatrix::zeros(n, n);
    let mut col = 0;
    for b in &blocks {
        for k in 0..b.cols() {
            vecs.set_col(col, &b.col(k));
            col += 1;
        }
    }
    let energies: Vec<T> = (0..n).map(|k| vec_dot(&vecs.col(k), &h.matvec(&vecs.col(k))).re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| energies[a].partial_cmp(&energies[b]).expect("finite energies"));
    let mut sorted = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut v = vecs.col(src);
        crate::eigen::fix_phase(&mut v);
        sorted.set_col(dst, &v);
    }
    Ok((order.iter().map(|&k| energies[k]).collect(), sorted))
}

/// Population matrix in the plain energy eigenbasis.
pub fn population_matrix<T: Real>(model: &LindbladModel<T>) -> Result<PerturbationReport<T>> {
    population_matrix_with(model, &[])
}

/// Population matrix in an energy eigenbasis adapted to the given symmetries,
/// which fixes the basis inside degenerate levels.
///
/// `D'` is the dissipator shifted by its own average damping, which is
/// `D + 1` for a trace-normalized dissipator.
pub fn population_matrix_with<T: Real>(model: &LindbladModel<T>, symmetries: &[CMatrix<T>]) -> Result<PerturbationReport<T>> {
    let (energies, psi) = adapted_eigenbasis(model.hamiltonian(), symmetries)?;
    let n = energies.len();
    let shift = -dissipator(model).trace().re / T::of_usize(n * n);
    let mut v = CMatrix::zeros(n, n);
    for k in 0..n {
        let pk = psi.col(k);
        let dk = CMatrix::from_fn(n, n, |a, b| pk[a] * pk[b].conj());
        let image = model.dissipate(&dk);
        for j in 0..n {
            let pj = psi.col(j);
            let mut x = vec_dot(&pj, &image.matvec(&pj));
            if j == k {
                x = x + shift;
            }
            v[(j, k)] = x;
        }
    }
    let symmetry_defect = v.max_abs_diff(&v.transpose());
    let reality_defect = v.as_slice().iter().map(|z| z.im.abs()).fold(T::zero(), T::max);
    let e = eig(&v)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| e.values[a].re.partial_cmp(&e.values[b].re).expect("finite"));
    let xi = order.iter().map(|&k| e.values[k]).collect();
    let mut hybridization = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        hybridization.set_col(dst, &e.right.col(src));
    }
    Ok(PerturbationReport {
        energies,
        eigenvectors: psi,
        v,
        xi,
        hybridization,
        symmetry_defect,
        reality_defect,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossLine {
    Horizontal,
    Vertical,
    Off,
}

#[derive(Debug, Clone)]
pub struct VelocityEntry<T: Real> {
    pub index: usize,
    pub eigenvalue: Cplx<T>,
    /// `(v_a, D u_a)`.
    pub analytic: Cplx<T>,
    /// Centered finite difference of the tracked eigenvalue.
    pub finite_difference: Cplx<T>,
    pub line: CrossLine,
}

#[derive(Debug, Clone)]
pub struct VelocityReport<T: Real> {
    pub entries: Vec<VelocityEntry<T>>,
    pub max_discrepancy: T,
    /// Largest `|Im dλ/dγ|` over isolated eigenvalues on `ℓ_h`.
    pub max_h_confinement: T,
    /// Largest `|Re dλ'/dγ|` over isolated eigenvalues on `ℓ_v`.
    pub max_v_confinement: T,
    /// Indices skipped because their eigenvalue is degenerate.
    pub skipped: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum Selection {
    All,
    Indices(Vec<usize>),
}

fn restricted<T: Real>(sup: SuperOperator<T>, labels: Option<&[(usize, usize)]>) -> Result<SuperOperator<T>> {
    match labels {
        Some(l) => sector_restrict(&sup, l),
        None => Ok(sup),
    }
}

fn spectrum_at<T: Real>(model: &LindbladModel<T>, gamma: T, labels: Option<&[(usize, usize)]>) -> Result<SpectralDecomposition<T>> {
    eig_biortho(&restricted(build_superoperator(&model.with_gamma(gamma)?), labels)?)
}

/// Compares first-order velocities `dλ/dγ = (v, D u)` with centered finite
/// differences, optionally on a sector given by its basis labels.
pub fn velocity_check<T: Real>(
    model: &LindbladModel<T>,
    selection: Selection,
    dgamma: T,
    labels: Option<&[(usize, usize)]>,
) -> Result<VelocityReport<T>> {
    if !(dgamma > T::zero()) || dgamma >= model.gamma() {
        return Err(Error::InvalidParameter(format!("dgamma = {dgamma} must be positive and below gamma")));
    }
    let g = model.gamma();
    let dec = spectrum_at(model, g, labels)?;
    let d = restricted(dissipator(model), labels)?;
    let d_bar = -d.trace().re / T::of_usize(d.dim());
    let plus = spectrum_at(model, g + dgamma, labels)?;
    let minus = spectrum_at(model, g - dgamma, labels)?;
    let cls = classify_cross(&dec, dec.gamma_bar, T::of(1e-8))?;
    let mut line = vec![CrossLine::Off; dec.len()];
    cls.on_h.iter().for_each(|&i| line[i] = CrossLine::Horizontal);
    cls.on_v.iter().for_each(|&i| line[i] = CrossLine::Vertical);

    let indices: Vec<usize> = match &selection {
        Selection::All => (0..dec.len()).collect(),
        Selection::Indices(ix) => ix.clone(),
    };
    let mut report = VelocityReport {
        entries: Vec::new(),
        max_discrepancy: T::zero(),
        max_h_confinement: T::zero(),
        max_v_confinement: T::zero(),
        skipped: Vec::new(),
    };
    for a in indices {
        if a >= dec.len() {
            return Err(Error::InvalidParameter(format!("eigenvalue index {a} out of range")));
        }
        if !dec.is_simple(a) {
            if let Selection::Indices(_) = selection {
                let lam = dec.eigenvalues[a];
                let gap = dec
                    .eigenvalues
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| b != a)
                    .map(|(_, l)| (l - lam).norm())
                    .fold(T::infinity(), T::min);
                return Err(Error::DegenerateAtEvaluationPoint {
                    index: a,
                    gap: gap.to_f64().unwrap_or(f64::NAN),
                });
            }
            report.skipped.push(a);
            continue;
        }
        let lam = dec.eigenvalues[a];
        let u = dec.right_vector(a);
        let analytic = vec_dot(&dec.left_vector(a), &d.matrix().matvec(&u));
        let (ip, _) = plus.nearest(lam).expect("non-empty");
        let (im, _) = minus.nearest(lam).expect("non-empty");
        let fd = (plus.eigenvalues[ip] - minus.eigenvalues[im]) / (T::of(2.0) * dgamma);
        report.max_discrepancy = report.max_discrepancy.max((analytic - fd).norm());
        match line[a] {
            CrossLine::Horizontal => report.max_h_confinement = report.max_h_confinement.max(analytic.im.abs()),
            CrossLine::Vertical => report.max_v_confinement = report.max_v_confinement.max((analytic.re + d_bar).abs()),
            CrossLine::Off => {}
        }
        report.entries.push(VelocityEntry {
            index: a,
            eigenvalue: lam,
            analytic,
            finite_difference: fd,
            line: line[a],
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyReport<T: Real> {
    pub energies: Vec<T>,
    /// Index pairs `j < k` with `|ε_j − ε_k| ≤ tol`.
    pub energy_pairs: Vec<(usize, usize)>,
    /// Pairs of distinct transitions `(j,k)`, `(p,q)` with equal gaps
    /// `ε_j − ε_k = ε_p − ε_q ≥ 0` within `tol`.
    pub gap_pairs: Vec<((usize, usize), (usize, usize))>,
    pub tol: T,
}

impl<T: Real> DegeneracyReport<T> {
    pub fn is_generic(&self) -> bool {
        self.energy_pairs.is_empty() && self.gap_pairs.is_empty()
    }
}

/// Default degeneracy tolerance `1e-9 · max(1, max|ε|)`.
pub fn default_degeneracy_tol<T: Real>(energies: &[T]) -> T {
    T::of(1e-9) * energies.iter().fold(T::one(), |m, e| m.max(e.abs()))
}

fn degeneracies<T: Real>(energies: &[T], blocks: Option<&[i64]>, tol: T) -> DegeneracyReport<T> {
    let n = energies.len();
    let same = |a: usize, b: usize| blocks.is_none_or(|q| q[a] == q[b]);
    let mut energy_pairs = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            if same(j, k) && (energies[j] - energies[k]).abs() <= tol {
                energy_pairs.push((j, k));
            }
        }
    }
    // transitions with non-negative gap; zero gaps are oriented j < k
    let mut transitions = Vec::new();
    for j in 0..n {
        for k in 0..n {
            if j == k || !same(j, k) {
                continue;
            }
            let g = energies[j] - energies[k];
            if g > tol || (g.abs() <= tol && j < k) {
                transitions.push(((j, k), g));
            }
        }
    }
    transitions.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"));
    let mut gap_pairs = Vec::new();
    for a in 0..transitions.len() {
        for b in a + 1..transitions.len() {
            if transitions[b].1 - transitions[a].1 > tol {
                break;
            }
            let (x, y) = (transitions[a].0, transitions[b].0);
            gap_pairs.push((x.min(y), x.max(y)));
        }
    }
    gap_pairs.sort();
    DegeneracyReport {
        energies: energies.to_vec(),
        energy_pairs,
        gap_pairs,
        tol,
    }
}

/// Degenerate levels and degenerate transition frequencies of `h`.
pub fn degeneracy_report<T: Real>(h: &CMatrix<T>, tol: Option<T>) -> Result<DegeneracyReport<T>> {
    let (e, _) = hermitian_eigen(h)?;
    let tol = tol.unwrap_or_else(|| default_degeneracy_tol(&e));
    Ok(degeneracies(&e, None, tol))
}

/// Like [`degeneracy_report`], counting only pairs of levels that share the
/// quantum number of a conserved Hermitian operator.
pub fn degeneracy_report_in_blocks<T: Real>(h: &CMatrix<T>, conserved: &CMatrix<T>, tol: Option<T>) -> Result<DegeneracyReport<T>> {
    let (e, psi) = adapted_eigenbasis(h, std::slice::from_ref(conserved))?;
    let quantum: Vec<i64> = (0..e.len())
        .map(|k| {
            let q = vec_dot(&psi.col(k), &conserved.matvec(&psi.col(k))).re;
            (q.to_f64().unwrap_or(0.0) * 1e6).round() as i64
        })
        .collect();
    let tol = tol.unwrap_or_else(|| default_degeneracy_tol(&e));
    Ok(degeneracies(&e, Some(&quantum), tol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicEstimate<T: Real> {
    pub gamma_pt: T,
    /// Largest singular value of `D'`.
    pub dissipator_norm: T,
    /// Mean level density `(N − 1) / (ε_max − ε_min)`.
    pub density_of_states: T,
}

/// Order-of-magnitude threshold `1 / (||D'||_2 d²)`.
pub fn heuristic_gamma_pt<T: Real>(d_traceless: &SuperOperator<T>, h: &CMatrix<T>) -> Result<HeuristicEstimate<T>> {
    let (e, _) = hermitian_eigen(h)?;
    let span = e.last().copied().unwrap_or(T::zero()) - e.first().copied().unwrap_or(T::zero());
    if e.len() < 2 || span <= T::epsilon() * T::one().max(e[0].abs()) {
        return Err(Error::DegenerateSpectrumSpan);
    }
    let m = d_traceless.matrix();
    let gram = m.dagger().matmul(m)?;
    let (s2, _) = hermitian_eigen(&gram)?;
    let dissipator_norm = s2.last().copied().unwrap_or(T::zero()).max(T::zero()).sqrt();
    let density_of_states = T::of_usize(e.len() - 1) / span;
    Ok(HeuristicEstimate {
        gamma_pt: T::one() / (dissipator_norm * density_of_states * density_of_states),
        dissipator_norm,
        density_of_states,
    })
}

/// First-order prediction for the real Liouvillian rates: `λ' ≈ γ ξ`, i.e. `λ ≈ γ (ξ − 1)`
/// for a trace-normalized dissipator.
pub fn first_order_rates<T: Real>(report: &PerturbationReport<T>, gamma: T) -> Vec<Cplx<T>> {
    report.xi.iter().map(|x| x.scale(gamma) - c(gamma, T::zero())).collect()
}

/// Largest `|λ'/γ − ξ|` between the sorted real eigenvalues of a spectrum and the sorted `ξ`.
pub fn first_order_mismatch<T: Real>(dec: &SpectralDecomposition<T>, report: &PerturbationReport<T>, gamma: T) -> Result<T> {
    let cls = classify_cross(dec, dec.gamma_bar, T::of(1e-8))?;
    let mut real: Vec<T> = cls.on_h.iter().map(|&i| (dec.eigenvalues[i].re + dec.gamma_bar) / gamma).collect();
    let mut xi: Vec<T> = report.xi.iter().map(|x| x.re).collect();
    if real.len() != xi.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} real eigenvalues against {} population rates",
            real.len(),
            xi.len()
        )));
    }
    real.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    xi.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(real.iter().zip(&xi).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::dissipator_traceless;
    use crate::spin::Pauli;
    use crate::xxz::{hamiltonian, sector_basis, xxz_model, xxz_symmetries, XxzParams};

    fn qubit() -> LindbladModel<f64> {
        LindbladModel::new(Pauli::Z.matrix().scale_real(0.5), vec![Pauli::Minus.matrix()], 0.1).unwrap()
    }

    #[test]
    fn qubit_population_matrix() {
        let r = population_matrix(&qubit()).unwrap();
        let expect = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]]).unwrap();
        assert!(r.v.approx_eq(&expect, 1e-12), "{:?}", r.v);
        assert!((r.xi[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((r.xi[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(r.symmetry_defect > 1.0);
        assert!(r.column_sum_defect() < 1e-12);
    }

    #[test]
    fn xxz_population_matrix_symmetric() {
        for n in 2..=3 {
            let p = XxzParams::new(n, 0.5, 0.5, 0.1).unwrap();
            let r = population_matrix_with(&xxz_model(&p).unwrap(), &xxz_symmetries(n)).unwrap();
            assert!(r.symmetry_defect <= 1e-12 && r.reality_defect <= 1e-12);
            assert!(r.column_sum_defect() <= 1e-10);
            assert!(r.xi.iter().any(|x| (x - c(1.0, 0.0)).norm() < 1e-9));
        }
    }

    #[test]
    fn qubit_velocity() {
        let m = qubit();
        let rep = velocity_check(&m, Selection::All, 1e-5, None).unwrap();
        let fast = rep.entries.iter().find(|e| (e.eigenvalue.re + 0.2).abs() < 1e-9).unwrap();
        assert!((fast.analytic - c(-2.0, 0.0)).norm() < 1e-12);
        let ss = rep.entries.iter().find(|e| e.eigenvalue.norm() < 1e-12).unwrap();
        assert!(ss.analytic.norm() < 1e-10);
        assert!(rep.max_discrepancy < 1e-6);
    }

    #[test]
    fn degenerate_selection_is_refused() {
        // ad(H) at γ = 0.01 on a two-level system with H = 0 keeps three modes together
        let m = LindbladModel::new(CMatrix::<f64>::zeros(2, 2), vec![Pauli::Z.matrix()], 0.01).unwrap();
        let dec = spectrum_at(&m, 0.01, None).unwrap();
        let bad = (0..dec.len()).find(|&a| !dec.is_simple(a)).unwrap();
        let err = velocity_check(&m, Selection::Indices(vec![bad]), 1e-5, None).unwrap_err();
        assert!(matches!(err, Error::DegenerateAtEvaluationPoint { .. }));
    }

    #[test]
    fn xxz_two_site_degeneracies() {
        let rep = degeneracy_report(&hamiltonian::<f64>(2, 0.5), None).unwrap();
        let e: Vec<f64> = rep.energies.clone();
        assert!((e[0] + 2.5).abs() < 1e-12 && (e[3] - 1.5).abs() < 1e-12);
        assert_eq!(rep.energy_pairs, vec![(1, 2)]);
    }

    #[test]
    fn toy_gap_degeneracies() {
        let generic = degeneracy_report(&CMatrix::<f64>::from_real_diag(&[0.0, 1.0, 3.0]), Some(1e-9)).unwrap();
        assert!(generic.is_generic());
        let equi = degeneracy_report(&CMatrix::<f64>::from_real_diag(&[0.0, 1.0, 2.0]), Some(1e-9)).unwrap();
        assert!(equi.energy_pairs.is_empty());
        assert_eq!(equi.gap_pairs, vec![((1, 0), (2, 1))]);
    }

    #[test]
    fn block_restricted_degeneracies_drop_cross_sector_pairs() {
        let h = hamiltonian::<f64>(2, 0.5);
        let rep = degeneracy_report_in_blocks(&h, &xxz_symmetries::<f64>(2)[0], None).unwrap();
        assert!(rep.energy_pairs.is_empty());
    }

    #[test]
    fn heuristic_scales_with_energy() {
        let p = XxzParams::new(2, 0.5, 1.0, 1.0).unwrap();
        let m = xxz_model(&p).unwrap();
        let d = dissipator_traceless(&m).unwrap();
        let h = m.hamiltonian().clone();
        let a = heuristic_gamma_pt(&d, &h).unwrap();
        let b = heuristic_gamma_pt(&d, &h.scale_real(2.0)).unwrap();
        assert!((b.gamma_pt / a.gamma_pt - 4.0f64).abs() < 1e-10);
        assert!(matches!(heuristic_gamma_pt(&d, &CMatrix::identity(4)), Err(Error::DegenerateSpectrumSpan)));
    }

    #[test]
    fn first_order_rates_match() {
        let p = XxzParams::new(3, 0.5, 1.0, 1e-4).unwrap();
        let m = xxz_model(&p).unwrap();
        let r = population_matrix_with(&m, &xxz_symmetries(3)).unwrap();
        let dec = eig_biortho(&sector_restrict(&build_superoperator(&m), &sector_basis(3, 0)).unwrap()).unwrap();
        assert!(first_order_mismatch(&dec, &r, 1e-4).unwrap() < 1e-2);
    }
}
