//! Liouvillian spectra: bi-orthonormal eigendecomposition, steady state,
//! classification against the cross `ℓ_h ∪ ℓ_v` and the D2 reflection checks.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::eigen::{eig, hermitian_eigen};
use crate::error::{Error, Result};
use crate::liouville::{average_damping, SuperOperator};
use crate::matrix::CMatrix;
use crate::scalar::{c, collinearity_error, vec_dot, vec_norm, Cplx, Real};
use crate::spin::BasisConvention;
use crate::symmetry::ParitySuperOp;

/// Relative width of eigenvalue clusters, in units of the spectral radius.
pub const CLUSTER_REL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T: Real> {
    /// Sorted by real part descending, then imaginary part ascending.
    pub eigenvalues: Vec<Cplx<T>>,
    /// Unit-norm right eigenvectors as columns.
    pub right: CMatrix<T>,
    /// Left eigenvectors as columns, scaled so `(u_a, v_a) = 1`.
    pub left: CMatrix<T>,
    /// Per pair, the larger of the relative right and left residuals.
    pub residuals: Vec<T>,
    /// Groups of indices whose eigenvalues coincide within the cluster width.
    pub clusters: Vec<Vec<usize>>,
    pub gamma_bar: T,
    pub matrix_norm: T,
    pub spectral_radius: T,
    convention: BasisConvention,
    labels: Vec<(usize, usize)>,
    cluster_of: Vec<Option<usize>>,
}

fn sort_key<T: Real>(a: &Cplx<T>, b: &Cplx<T>) -> Ordering {
    let (ar, br) = (a.re.to_f64().unwrap_or(f64::NAN), b.re.to_f64().unwrap_or(f64::NAN));
    let (ai, bi) = (a.im.to_f64().unwrap_or(f64::NAN), b.im.to_f64().unwrap_or(f64::NAN));
    br.total_cmp(&ar).then(ai.total_cmp(&bi))
}

fn find_clusters<T: Real>(values: &[Cplx<T>], width: T) -> (Vec<Vec<usize>>, Vec<Option<usize>>) {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for a in 0..n {
        for b in a + 1..n {
            // values are sorted by real part, so later entries only move away
            if values[a].re - values[b].re > width {
                break;
            }
            if (values[a] - values[b]).norm() <= width {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![None; n];
    let mut of = vec![None; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        let g = *slot[r].get_or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    let clusters: Vec<Vec<usize>> = groups.into_iter().filter(|g| g.len() > 1).collect();
    for (ci, g) in clusters.iter().enumerate() {
        for &i in g {
            of[i] = Some(ci);
        }
    }
    (clusters, of)
}

/// Full eigendecomposition of a superoperator.
pub fn eig_biortho<T: Real>(sup: &SuperOperator<T>) -> Result<SpectralDecomposition<T>> {
    let m = sup.matrix();
    m.ensure_finite("superoperator")?;
    let raw = eig(m)?;
    let d = m.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| sort_key(&raw.values[a], &raw.values[b]));
    let eigenvalues: Vec<Cplx<T>> = order.iter().map(|&k| raw.values[k]).collect();
    let mut right = CMatrix::zeros(d, d);
    let mut left = CMatrix::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        right.set_col(dst, &raw.right.col(src));
        left.set_col(dst, &raw.left.col(src));
    }
    let lu = m.matmul(&right)?;
    let lv = m.dagger().matmul(&left)?;
    let matrix_norm = m.frobenius_norm();
    let scale = T::one().max(matrix_norm);
    let residuals = (0..d)
        .map(|a| {
            let lam = eigenvalues[a];
            let mut ru = T::zero();
            let mut rv = T::zero();
            for i in 0..d {
                ru = ru + (lu[(i, a)] - right[(i, a)] * lam).norm_sqr();
                rv = rv + (lv[(i, a)] - left[(i, a)] * lam.conj()).norm_sqr();
            }
            let nv = vec_norm(&left.col(a)).max(T::min_positive_value());
            (ru.sqrt() / scale).max(rv.sqrt() / nv / scale)
        })
        .collect();
    let spectral_radius = eigenvalues.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let (clusters, cluster_of) = find_clusters(&eigenvalues, T::of(CLUSTER_REL) * spectral_radius);
    Ok(SpectralDecomposition {
        eigenvalues,
        right,
        left,
        residuals,
        clusters,
        gamma_bar: average_damping(sup),
        matrix_norm,
        spectral_radius,
        convention: sup.convention(),
        labels: sup.labels().to_vec(),
        cluster_of,
    })
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    pub fn hilbert_dim(&self) -> usize {
        self.convention.hilbert_dim
    }

    pub fn right_vector(&self, a: usize) -> Vec<Cplx<T>> {
        self.right.col(a)
    }

    pub fn left_vector(&self, a: usize) -> Vec<Cplx<T>> {
        self.left.col(a)
    }

    pub fn is_simple(&self, a: usize) -> bool {
        self.cluster_of[a].is_none()
    }

    pub fn max_residual(&self) -> T {
        self.residuals.iter().copied().fold(T::zero(), T::max)
    }

    /// `max |(u_a, v_b) − δ_ab|` over pairs not in a common cluster.
    pub fn biorthogonality_defect(&self) -> T {
        let g = self.right.dagger().matmul(&self.left).expect("square");
        let mut worst = T::zero();
        for a in 0..self.len() {
            for b in 0..self.len() {
                let same = a == b || (self.cluster_of[a].is_some() && self.cluster_of[a] == self.cluster_of[b]);
                if a != b && same {
                    continue;
                }
                let target = if a == b { Cplx::one() } else { Cplx::zero() };
                worst = worst.max((g[(a, b)] - target).norm());
            }
        }
        worst
    }

    /// Index of the eigenvalue nearest to `z`, with its distance.
    pub fn nearest(&self, z: Cplx<T>) -> Option<(usize, T)> {
        self.eigenvalues
            .iter()
            .enumerate()
            .map(|(i, l)| (i, (l - z).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
    }

    /// Operator with the given coordinates in this decomposition's basis.
    pub fn unvectorize(&self, v: &[Cplx<T>]) -> CMatrix<T> {
        let n = self.hilbert_dim();
        let mut m = CMatrix::zeros(n, n);
        for (&(j, k), &x) in self.labels.iter().zip(v) {
            m[(j, k)] = x;
        }
        m
    }

    pub fn vectorize(&self, rho: &CMatrix<T>) -> Vec<Cplx<T>> {
        self.labels.iter().map(|&(j, k)| rho[(j, k)]).collect()
    }

    /// Coordinates of `ρ^†` given those of `ρ`.
    pub fn adjoint_vector(&self, v: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        let n = self.hilbert_dim();
        let mut pos = vec![None; n * n];
        for (i, &(j, k)) in self.labels.iter().enumerate() {
            pos[j * n + k] = Some(i);
        }
        self.labels
            .iter()
            .map(|&(j, k)| pos[k * n + j].map(|p| v[p].conj()).ok_or(Error::LabelsNotSelfAdjoint))
            .collect()
    }

    fn identity_coords(&self) -> Vec<Cplx<T>> {
        self.labels
            .iter()
            .map(|&(j, k)| if j == k { Cplx::one() } else { Cplx::zero() })
            .collect()
    }

    fn parity_matrix(&self, parity: &ParitySuperOp<T>) -> Result<CMatrix<T>> {
        if parity.left().dim() != self.hilbert_dim() {
            return Err(Error::DimensionMismatch("parity and spectrum on different Hilbert spaces".into()));
        }
        Ok(parity.restricted(&self.labels).0)
    }
}

#[derive(Debug, Clone)]
pub struct SteadyState<T: Real> {
    pub index: usize,
    pub eigenvalue: Cplx<T>,
    /// Coordinates of `ρ_∞` (unit trace).
    pub vector: Vec<Cplx<T>>,
    pub rho: CMatrix<T>,
    pub hermiticity_defect: T,
    pub min_eigenvalue: T,
    /// Sine of the angle between the left partner and the identity.
    pub left_identity_error: T,
}

/// The right eigenvector at `λ = 0`, normalized to unit trace.
pub fn steady_state<T: Real>(dec: &SpectralDecomposition<T>) -> Result<SteadyState<T>> {
    let tol = T::of(1e-9).max(T::of(1e3) * T::epsilon()) * T::one().max(dec.matrix_norm);
    let (index, dist) = dec.nearest(Cplx::zero()).ok_or(Error::NoZeroMode {
        tolerance: tol.to_f64().unwrap_or(f64::NAN),
        closest: f64::INFINITY,
    })?;
    if dist > tol {
        return Err(Error::NoZeroMode {
            tolerance: tol.to_f64().unwrap_or(f64::NAN),
            closest: dist.to_f64().unwrap_or(f64::NAN),
        });
    }
    let u = dec.right_vector(index);
    let tr: Cplx<T> = dec.labels.iter().zip(&u).filter(|((j, k), _)| j == k).map(|(_, z)| *z).sum();
    if tr.norm() <= T::epsilon() {
        return Err(Error::InvalidParameter("zero mode is traceless".into()));
    }
    let vector: Vec<Cplx<T>> = u.iter().map(|z| z / tr).collect();
    let rho = dec.unvectorize(&vector);
    let hermiticity_defect = rho.max_abs_diff(&rho.dagger());
    let (evals, _) = hermitian_eigen(&rho)?;
    let left_identity_error = collinearity_error(&dec.left_vector(index), &dec.identity_coords());
    Ok(SteadyState {
        index,
        eigenvalue: dec.eigenvalues[index],
        vector,
        rho,
        hermiticity_defect,
        min_eigenvalue: evals.first().copied().unwrap_or(T::zero()),
        left_identity_error,
    })
}

/// Distance of `λ` from the cross `ℝ ∪ (−γ̄ + iℝ)`.
pub fn distance_to_cross<T: Real>(lambda: Cplx<T>, gamma_bar: T) -> T {
    lambda.im.abs().min((lambda.re + gamma_bar).abs())
}

/// Partition of a spectrum against the cross.
///
/// An eigenvalue within `tau` of both lines is counted on `ℓ_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossClassification<T: Real> {
    pub on_h: Vec<usize>,
    pub on_v: Vec<usize>,
    pub off_cross: Vec<usize>,
    pub tau: T,
    /// Smallest distance to the cross among off-cross eigenvalues.
    pub min_off_distance: Option<T>,
    /// Whether the partition is unchanged with `tau` scaled by 0.9 and 1.1.
    pub stable: bool,
}

fn partition<T: Real>(values: &[Cplx<T>], gamma_bar: T, tau: T) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let (mut h, mut v, mut off) = (Vec::new(), Vec::new(), Vec::new());
    for (i, l) in values.iter().enumerate() {
        if l.im.abs() <= tau {
            h.push(i);
        } else if (l.re + gamma_bar).abs() <= tau {
            v.push(i);
        } else {
            off.push(i);
        }
    }
    (h, v, off)
}

pub fn classify_cross<T: Real>(dec: &SpectralDecomposition<T>, gamma_bar: T, tau_rel: T) -> Result<CrossClassification<T>> {
    classify_values(&dec.eigenvalues, gamma_bar, tau_rel)
}

/// Classification of a bare eigenvalue list; `τ = tau_rel · max(1, spectral radius)`.
pub fn classify_values<T: Real>(values: &[Cplx<T>], gamma_bar: T, tau_rel: T) -> Result<CrossClassification<T>> {
    if !(tau_rel > T::zero()) || !tau_rel.is_finite() {
        return Err(Error::InvalidParameter(format!("tau_rel = {tau_rel}")));
    }
    let radius = values.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let tau = tau_rel * T::one().max(radius);
    let (on_h, on_v, off_cross) = partition(values, gamma_bar, tau);
    let stable = [T::of(0.9), T::of(1.1)]
        .iter()
        .all(|&f| partition(values, gamma_bar, tau * f) == (on_h.clone(), on_v.clone(), off_cross.clone()));
    let min_off_distance = off_cross
        .iter()
        .map(|&i| distance_to_cross(values[i], gamma_bar))
        .fold(None, |acc: Option<T>, d| Some(acc.map_or(d, |a| a.min(d))));
    Ok(CrossClassification {
        on_h,
        on_v,
        off_cross,
        tau,
        min_off_distance,
        stable,
    })
}

#[derive(Debug, Clone)]
pub struct D2Report<T: Real> {
    /// Largest distance from a reflected eigenvalue across `ℓ_v` to its nearest neighbour.
    pub max_v_error: T,
    /// Same for the reflection across `ℓ_h`.
    pub max_h_error: T,
    /// Largest distance within the greedy one-to-one pairings.
    pub max_v_pairing_error: T,
    pub max_h_pairing_error: T,
    pub v_pairing: Vec<usize>,
    pub h_pairing: Vec<usize>,
    pub spectral_radius: T,
}

fn reflection_errors<T: Real>(values: &[Cplx<T>], map: impl Fn(Cplx<T>) -> Cplx<T>) -> (T, T, Vec<usize>) {
    let n = values.len();
    let mut nearest = T::zero();
    for l in values {
        let t = map(*l);
        let d = values.iter().map(|m| (m - t).norm()).fold(T::infinity(), T::min);
        nearest = nearest.max(d);
    }
    let mut used = vec![false; n];
    let mut pairing = vec![usize::MAX; n];
    let mut worst = T::zero();
    for a in 0..n {
        if pairing[a] != usize::MAX {
            continue;
        }
        let t = map(values[a]);
        let best = (0..n)
            .filter(|&b| !used[b] && (b == a || pairing[b] == usize::MAX))
            .min_by(|&x, &y| (values[x] - t).norm().partial_cmp(&(values[y] - t).norm()).unwrap_or(Ordering::Equal));
        if let Some(b) = best {
            used[a] = true;
            used[b] = true;
            pairing[a] = b;
            pairing[b] = a;
            worst = worst.max((values[b] - t).norm());
        }
    }
    (nearest, worst, pairing)
}

/// Checks the reflections `λ -> −conj(λ) − 2γ̄` and `λ -> conj(λ)`.
pub fn verify_d2<T: Real>(dec: &SpectralDecomposition<T>, gamma_bar: T) -> D2Report<T> {
    verify_d2_values(&dec.eigenvalues, gamma_bar)
}

pub fn verify_d2_values<T: Real>(values: &[Cplx<T>], gamma_bar: T) -> D2Report<T> {
    let two = T::of(2.0);
    let (max_v_error, max_v_pairing_error, v_pairing) = reflection_errors(values, |l| c(-l.re - two * gamma_bar, l.im));
    let (max_h_error, max_h_pairing_error, h_pairing) = reflection_errors(values, |l| l.conj());
    D2Report {
        max_v_error,
        max_h_error,
        max_v_pairing_error,
        max_h_pairing_error,
        v_pairing,
        h_pairing,
        spectral_radius: values.iter().map(|z| z.norm()).fold(T::zero(), T::max),
    }
}

#[derive(Debug, Clone)]
pub struct PartnerReport<T: Real> {
    /// Worst collinearity error of `u_β ∥ P v_α` and `v_β ∥ P u_α`.
    pub max_vector_error: T,
    /// Worst collinearity error of `u_η ∥ u_α^†` and `v_η ∥ v_α^†`.
    pub max_adjoint_error: T,
    pub checked: usize,
    /// Indices skipped because they or their partner belong to a cluster.
    pub skipped: Vec<usize>,
}

/// Checks the eigenvector relations implied by the PT identity and by
/// hermiticity preservation, for simple eigenvalues.
pub fn pt_partner_check<T: Real>(dec: &SpectralDecomposition<T>, parity: &ParitySuperOp<T>) -> Result<PartnerReport<T>> {
    let p = dec.parity_matrix(parity)?;
    let two = T::of(2.0);
    let g = dec.gamma_bar;
    let mut report = PartnerReport {
        max_vector_error: T::zero(),
        max_adjoint_error: T::zero(),
        checked: 0,
        skipped: Vec::new(),
    };
    for a in 0..dec.len() {
        let l = dec.eigenvalues[a];
        let Some((b, _)) = dec.nearest(c(-l.re - two * g, l.im)) else { continue };
        let Some((e, _)) = dec.nearest(l.conj()) else { continue };
        if !dec.is_simple(a) || !dec.is_simple(b) || !dec.is_simple(e) {
            report.skipped.push(a);
            continue;
        }
        let (ua, va) = (dec.right_vector(a), dec.left_vector(a));
        let pv = p.matvec(&va);
        let pu = p.matvec(&ua);
        let err = collinearity_error(&dec.right_vector(b), &pv).max(collinearity_error(&dec.left_vector(b), &pu));
        report.max_vector_error = report.max_vector_error.max(err);
        let ua_dag = dec.adjoint_vector(&ua)?;
        let va_dag = dec.adjoint_vector(&va)?;
        let err = collinearity_error(&dec.right_vector(e), &ua_dag).max(collinearity_error(&dec.left_vector(e), &va_dag));
        report.max_adjoint_error = report.max_adjoint_error.max(err);
        report.checked += 1;
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy)]
pub struct FastestMode<T: Real> {
    pub index: usize,
    /// `|λ + 2γ̄|` for the nearest eigenvalue.
    pub eigenvalue_error: T,
    /// Collinearity error between its right eigenvector and `P(1)`.
    pub vector_error: T,
}

/// Locates the eigenvalue at `−2γ̄` and compares its right eigenvector with `P(1)`.
pub fn fastest_mode<T: Real>(dec: &SpectralDecomposition<T>, parity: &ParitySuperOp<T>) -> Result<FastestMode<T>> {
    let target = c(-T::of(2.0) * dec.gamma_bar, T::zero());
    let (index, eigenvalue_error) = dec.nearest(target).ok_or(Error::DimensionMismatch("empty spectrum".into()))?;
    let p_one = parity.apply(&CMatrix::identity(dec.hilbert_dim()));
    let vector_error = collinearity_error(&dec.right_vector(index), &dec.vectorize(&p_one));
    Ok(FastestMode {
        index,
        eigenvalue_error,
        vector_error,
    })
}

/// Spectral weight `(v_a, x)` of a vector on each eigenmode, so that `x = Σ (v_a, x) u_a`.
pub fn mode_amplitudes<T: Real>(dec: &SpectralDecomposition<T>, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
    (0..dec.len()).map(|a| vec_dot(&dec.left_vector(a), x)).collect()
}
