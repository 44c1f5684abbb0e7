//! Locating the PT-breaking coupling, the chain-length scaling study and
//! coherence decay of observables.
//!
//! A coupling is "unbroken" when no eigenvalue lies off the cross at the
//! given relative tolerance. `γ_PT` is the boundary of that predicate found by
//! a logarithmic sweep followed by bisection.

use crate::eigen::{eigenvalues, hermitian_eigen};
use crate::error::{Error, Result};
use crate::expm::mat_exp;
use crate::liouville::{average_damping, build_superoperator, dissipator_traceless, sector_restrict, LindbladModel, SuperOperator};
use crate::lu::lstsq;
use crate::matrix::CMatrix;
use crate::perturbation::heuristic_gamma_pt;
use crate::scalar::{Cplx, Real};
use crate::spectral::{classify_cross, classify_values, eig_biortho, steady_state, verify_d2, CrossClassification, D2Report};
use crate::xxz::{xxz_liouvillian, xxz_model, Sector, XxzParams};

/// Default relative tolerance of the cross classification.
pub const TAU_REL: f64 = 1e-8;
/// Points per decade of the bracketing sweep.
pub const SWEEP_PER_DECADE: usize = 8;
/// Decades the bracket may be widened on either side before giving up.
pub const MAX_EXPANSION_DECADES: i32 = 2;

/// Coupling-independent XXZ parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XxzFamily<T: Real> {
    pub n: usize,
    pub delta: T,
    pub mu: T,
}

impl<T: Real> XxzFamily<T> {
    pub fn at(&self, gamma: T) -> Result<XxzParams<T>> {
        XxzParams::new(self.n, self.delta, self.mu, gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation<T: Real> {
    pub gamma: T,
    pub off_cross: usize,
    /// Smallest distance to the cross among off-cross eigenvalues.
    pub min_off_distance: Option<T>,
}

impl<T: Real> Evaluation<T> {
    pub fn unbroken(&self) -> bool {
        self.off_cross == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult<T: Real> {
    pub gamma_pt: T,
    /// `(γ_low, γ_high)` with `γ_low` unbroken and `γ_high` broken.
    pub bracket: (T, T),
    /// Every predicate evaluation in the order it was made.
    pub evaluations: Vec<Evaluation<T>>,
    pub tau_rel: T,
}

/// Whether the XXZ spectrum on `sector` lies on the cross.
pub fn is_unbroken<T: Real>(p: &XxzParams<T>, sector: Sector, tau_rel: T) -> Result<(bool, CrossClassification<T>)> {
    let l = xxz_liouvillian(p, sector)?;
    cross_of(&l, tau_rel)
}

/// Same predicate for an arbitrary Lindblad model, optionally on a label subset.
pub fn is_unbroken_model<T: Real>(
    model: &LindbladModel<T>,
    labels: Option<&[(usize, usize)]>,
    tau_rel: T,
) -> Result<(bool, CrossClassification<T>)> {
    let full = build_superoperator(model);
    let l = match labels {
        Some(k) => sector_restrict(&full, k)?,
        None => full,
    };
    cross_of(&l, tau_rel)
}

fn cross_of<T: Real>(l: &SuperOperator<T>, tau_rel: T) -> Result<(bool, CrossClassification<T>)> {
    let values = eigenvalues(l.matrix())?;
    let g = average_damping(l);
    let cls = classify_values(&values, g, tau_rel)?;
    Ok((cls.off_cross.is_empty(), cls))
}

fn log_grid<T: Real>(lo: T, hi: T) -> Vec<T> {
    let decades = (hi / lo).log10();
    let steps = ((decades * T::of_usize(SWEEP_PER_DECADE)).ceil().to_usize().unwrap_or(1)).max(1);
    (0..=steps)
        .map(|k| lo * (T::of_usize(k) / T::of_usize(steps) * decades * T::LN_10()).exp())
        .collect()
}

/// Threshold of an arbitrary predicate `γ -> classification`.
///
/// The interval is swept on a logarithmic grid; the first broken grid point
/// after an unbroken one seeds the bisection. If the low end is already
/// broken (or the high end still unbroken) the interval is widened a decade at
/// a time, up to [`MAX_EXPANSION_DECADES`].
pub fn find_threshold<T: Real, F>(mut predicate: F, gamma_min: T, gamma_max: T, rel_precision: T, tau_rel: T) -> Result<ThresholdResult<T>>
where
    F: FnMut(T) -> Result<CrossClassification<T>>,
{
    if !(gamma_min > T::zero()) || !(gamma_max > gamma_min) || !gamma_max.is_finite() {
        return Err(Error::InvalidParameter(format!("gamma range [{gamma_min}, {gamma_max}]")));
    }
    if !(rel_precision > T::zero()) {
        return Err(Error::InvalidParameter(format!("rel_precision = {rel_precision}")));
    }
    let mut evaluations = Vec::new();
    let mut eval = |g: T, evals: &mut Vec<Evaluation<T>>| -> Result<bool> {
        let cls = predicate(g)?;
        let e = Evaluation {
            gamma: g,
            off_cross: cls.off_cross.len(),
            min_off_distance: cls.min_off_distance,
        };
        evals.push(e);
        Ok(e.unbroken())
    };

    let ten = T::of(10.0);
    let mut lo = gamma_min;
    let mut widened = 0;
    while !eval(lo, &mut evaluations)? {
        if widened == MAX_EXPANSION_DECADES {
            return Err(Error::BracketInvalid(format!("broken already at gamma = {lo}")));
        }
        lo = lo / ten;
        widened += 1;
    }
    let mut hi_end = gamma_max;
    let mut widened = 0;
    let bracket = loop {
        let grid = log_grid(lo, hi_end);
        let mut last_ok = grid[0];
        let mut found = None;
        for &g in &grid[1..] {
            if eval(g, &mut evaluations)? {
                last_ok = g;
            } else {
                found = Some((last_ok, g));
                break;
            }
        }
        if let Some(b) = found {
            break b;
        }
        if widened == MAX_EXPANSION_DECADES {
            return Err(Error::BracketInvalid(format!("unbroken up to gamma = {hi_end}")));
        }
        lo = hi_end;
        hi_end = hi_end * ten;
        widened += 1;
    };

    let (mut a, mut b) = bracket;
    while b / a - T::one() > rel_precision {
        let mid = (a * b).sqrt();
        if eval(mid, &mut evaluations)? {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(ThresholdResult {
        gamma_pt: b,
        bracket: (a, b),
        evaluations,
        tau_rel,
    })
}

/// `γ_PT` of an XXZ family on the given sector.
pub fn find_gamma_pt<T: Real>(
    family: &XxzFamily<T>,
    sector: Sector,
    gamma_min: T,
    gamma_max: T,
    rel_precision: T,
    tau_rel: T,
) -> Result<ThresholdResult<T>> {
    find_threshold(
        |g| Ok(is_unbroken(&family.at(g)?, sector, tau_rel)?.1),
        gamma_min,
        gamma_max,
        rel_precision,
        tau_rel,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdOutcome<T: Real> {
    Bracketed(ThresholdResult<T>),
    /// Broken at the smallest coupling tried.
    BrokenThroughout { smallest_gamma: T },
    /// Unbroken at the largest coupling tried.
    UnbrokenThroughout { largest_gamma: T },
}

impl<T: Real> ThresholdOutcome<T> {
    pub fn gamma_pt(&self) -> Option<T> {
        match self {
            ThresholdOutcome::Bracketed(r) => Some(r.gamma_pt),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingEntry<T: Real> {
    pub n: usize,
    pub outcome: ThresholdOutcome<T>,
    /// Order-of-magnitude estimate `1 / (||D'|| d²)`.
    pub heuristic: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingStudy<T: Real> {
    pub entries: Vec<ScalingEntry<T>>,
    /// Least-squares slope of `ln γ_PT` against `n` over the bracketed entries
    /// (needs at least two).
    pub slope: Option<T>,
}

impl<T: Real> ScalingStudy<T> {
    /// Whether every entry was bracketed and `γ_PT` strictly decreases with `n`.
    pub fn strictly_decreasing(&self) -> bool {
        let g: Option<Vec<T>> = self.entries.iter().map(|e| e.outcome.gamma_pt()).collect();
        match g {
            Some(g) => g.windows(2).all(|w| w[1] < w[0]),
            None => false,
        }
    }
}

/// Slope of the least-squares line through `(x, y)`.
pub fn ls_slope<T: Real>(x: &[T], y: &[T]) -> Option<T> {
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let k = T::of_usize(x.len());
    let mx = x.iter().copied().sum::<T>() / k;
    let my = y.iter().copied().sum::<T>() / k;
    let sxx: T = x.iter().map(|&a| (a - mx) * (a - mx)).sum();
    let sxy: T = x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)).sum();
    if sxx == T::zero() {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// `γ_PT` on the `ΔM^z = 0` sector for each chain length, with the heuristic
/// estimate alongside. Chains whose threshold cannot be bracketed within the
/// allowed widening are reported as such instead of aborting the study.
pub fn scaling_study<T: Real>(
    n_list: &[usize],
    delta: T,
    mu: T,
    gamma_range: (T, T),
    rel_precision: T,
) -> Result<ScalingStudy<T>> {
    let mut entries = Vec::new();
    for &n in n_list {
        if !(1..=5).contains(&n) {
            return Err(Error::InvalidParameter(format!("chain length {n} outside 1..=5")));
        }
        let family = XxzFamily { n, delta, mu };
        let ten = T::of(10.0);
        let widen = ten.powi(MAX_EXPANSION_DECADES);
        let outcome = match find_gamma_pt(&family, Sector::DMZ0, gamma_range.0, gamma_range.1, rel_precision, T::of(TAU_REL)) {
            Ok(r) => ThresholdOutcome::Bracketed(r),
            Err(Error::BracketInvalid(msg)) if msg.starts_with("broken") => ThresholdOutcome::BrokenThroughout {
                smallest_gamma: gamma_range.0 / widen,
            },
            Err(Error::BracketInvalid(_)) => ThresholdOutcome::UnbrokenThroughout {
                largest_gamma: gamma_range.1 * widen,
            },
            Err(e) => return Err(e),
        };
        let model = xxz_model(&family.at(T::one())?)?;
        let heuristic = heuristic_gamma_pt(&dissipator_traceless(&model)?, model.hamiltonian())?.gamma_pt;
        entries.push(ScalingEntry { n, outcome, heuristic });
    }
    let (xs, ys): (Vec<T>, Vec<T>) = entries
        .iter()
        .filter_map(|e| e.outcome.gamma_pt().map(|g| (T::of_usize(e.n), g.ln())))
        .unzip();
    Ok(ScalingStudy {
        slope: ls_slope(&xs, &ys),
        entries,
    })
}

#[derive(Debug, Clone)]
pub struct DecaySeries<T: Real> {
    pub times: Vec<T>,
    /// `tr[(ρ(t) − ρ_∞) O]`.
    pub deviations: Vec<Cplx<T>>,
    pub steady_expectation: Cplx<T>,
    /// Rate from a straight-line fit of `ln |deviation|` over the fit window.
    pub log_fit_rate: Option<T>,
    /// Amplitude-weighted mean decay rate of a damped-exponential
    /// (matrix pencil) fit over the same window.
    pub pencil_rate: Option<T>,
    /// Rates and amplitudes of the pencil fit, strongest first.
    pub pencil_modes: Vec<(Cplx<T>, T)>,
    /// Index of the first sample used in the fits.
    pub window_start: usize,
}

/// Initial state `(1 + c·O₀/||O₀||_2)/N` with `O₀` the traceless part of
/// `O`, positive for `|c| < 1`. For traceless `O` this is `(1 + c·O/||O||_2)/N`.
pub fn biased_state<T: Real>(observable: &CMatrix<T>, c: T) -> Result<CMatrix<T>> {
    let n = observable.dim();
    let mut o = observable.clone();
    let mean = observable.trace() / T::of_usize(n);
    for i in 0..n {
        o[(i, i)] = o[(i, i)] - mean;
    }
    let (e, _) = hermitian_eigen(&o)?;
    let norm = e.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let mut rho = CMatrix::identity(n);
    if norm > T::of(1e-14) * T::one().max(observable.max_abs()) {
        rho += &o.scale_real(c / norm);
    }
    Ok(rho.scale_real(T::one() / T::of_usize(n)))
}

fn expectation<T: Real>(labels: &[(usize, usize)], x: &[Cplx<T>], obs: &CMatrix<T>) -> Cplx<T> {
    labels.iter().zip(x).map(|(&(j, k), &v)| v * obs[(k, j)]).sum()
}

/// Evolves `ρ0` under the XXZ Liouvillian and records `tr[(ρ(t) − ρ_∞) O]`.
///
/// Uniform grids are stepped with a single `exp(dt L)`. The fit window drops
/// the first 5% of the grid and ignores samples with `|deviation| ≤ 1e-10`.
pub fn observable_decay<T: Real>(
    p: &XxzParams<T>,
    sector: Sector,
    observable: &CMatrix<T>,
    rho0: &CMatrix<T>,
    times: &[T],
) -> Result<DecaySeries<T>> {
    let l = xxz_liouvillian(p, sector)?;
    decay_series(&l, observable, rho0, times)
}

/// [`observable_decay`] for an arbitrary superoperator.
pub fn decay_series<T: Real>(l: &SuperOperator<T>, observable: &CMatrix<T>, rho0: &CMatrix<T>, times: &[T]) -> Result<DecaySeries<T>> {
    let n = l.hilbert_dim();
    if observable.rows() != n || observable.cols() != n || rho0.rows() != n || rho0.cols() != n {
        return Err(Error::DimensionMismatch("observable or initial state size".into()));
    }
    if observable.hermiticity_defect() > T::of(1e-12) * T::one().max(observable.max_abs()) {
        return Err(Error::NotHermitian {
            residual: observable.hermiticity_defect().to_f64().unwrap_or(f64::NAN),
        });
    }
    if times.is_empty() || times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("time grid must be finite and increasing".into()));
    }
    let dec = eig_biortho(l)?;
    let ss = steady_state(&dec)?;
    let labels = l.labels();
    let steady_expectation = expectation(labels, &ss.vector, observable);
    let m = l.matrix();
    let x0 = l.vectorize(rho0);

    let dt = if times.len() > 1 { times[1] - times[0] } else { T::zero() };
    let uniform = times.windows(2).all(|w| ((w[1] - w[0]) - dt).abs() <= T::of(1e-9) * dt.abs().max(T::one()));
    let mut deviations = Vec::with_capacity(times.len());
    if uniform {
        let step = mat_exp(&m.scale_real(dt))?;
        let mut x = mat_exp(&m.scale_real(times[0]))?.matvec(&x0);
        for _ in times {
            deviations.push(expectation(labels, &x, observable) - steady_expectation);
            x = step.matvec(&x);
        }
    } else {
        for &t in times {
            let x = mat_exp(&m.scale_real(t))?.matvec(&x0);
            deviations.push(expectation(labels, &x, observable) - steady_expectation);
        }
    }

    let window_start = times.len() / 20;
    let floor = T::of(1e-10);
    let (tw, lw): (Vec<T>, Vec<T>) = times[window_start..]
        .iter()
        .zip(&deviations[window_start..])
        .filter(|(_, d)| d.norm() > floor)
        .map(|(&t, d)| (t, d.norm().ln()))
        .unzip();
    let log_fit_rate = ls_slope(&tw, &lw).map(|s| -s);
    let (pencil_rate, pencil_modes) = if uniform && deviations[window_start..].iter().all(|d| d.norm() > floor) {
        match matrix_pencil(&deviations[window_start..], dt) {
            Some((rate, modes)) => (Some(rate), modes),
            None => (None, Vec::new()),
        }
    } else {
        (None, Vec::new())
    };
    Ok(DecaySeries {
        times: times.to_vec(),
        deviations,
        steady_expectation,
        log_fit_rate,
        pencil_rate,
        pencil_modes,
        window_start,
    })
}

/// Damped-exponential fit `y_k ≈ Σ a_i z_i^k` by the matrix pencil method.
///
/// Returns the amplitude-weighted mean of `−Re s_i` with `s_i = ln z_i / dt`,
/// and the `(s_i, |a_i|)` pairs sorted by decreasing amplitude.
pub fn matrix_pencil<T: Real>(samples: &[Cplx<T>], dt: T) -> Option<(T, Vec<(Cplx<T>, T)>)> {
    const MAX_SAMPLES: usize = 480;
    let stride = samples.len().div_ceil(MAX_SAMPLES).max(1);
    let y: Vec<Cplx<T>> = samples.iter().step_by(stride).copied().collect();
    let dt = dt * T::of_usize(stride);
    let k = y.len();
    let lp = k / 3;
    if lp < 2 || !(dt > T::zero()) {
        return None;
    }
    let rows = k - lp;
    let hankel = CMatrix::from_fn(rows, lp + 1, |i, j| y[i + j]);
    let gram = hankel.dagger().matmul(&hankel).ok()?;
    let (ev, w) = hermitian_eigen(&gram).ok()?;
    let smax = ev.last().copied()?.max(T::zero()).sqrt();
    let keep: Vec<usize> = (0..ev.len()).rev().filter(|&i| ev[i].max(T::zero()).sqrt() > T::of(1e-6) * smax).collect();
    let rank = keep.len();
    if rank == 0 || rank >= lp {
        return None;
    }
    let v1 = CMatrix::from_fn(lp, rank, |i, c| w[(i, keep[c])]);
    let v2 = CMatrix::from_fn(lp, rank, |i, c| w[(i + 1, keep[c])]);
    let z = eigenvalues(&lstsq(&v1, &v2).ok()?).ok()?;
    let vander = CMatrix::from_fn(k, rank, |i, c| z[c].powu(i as u32));
    let rhs = CMatrix::from_fn(k, 1, |i, _| y[i]);
    let amp = lstsq(&vander, &rhs).ok()?;
    let mut modes: Vec<(Cplx<T>, T)> = z
        .iter()
        .enumerate()
        .map(|(i, zi)| (zi.ln() / dt, amp[(i, 0)].norm()))
        .collect();
    modes.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    let total: T = modes.iter().map(|m| m.1).sum();
    if !(total > T::zero()) {
        return None;
    }
    let rate = modes.iter().map(|(s, a)| -s.re * *a).sum::<T>() / total;
    rate.is_finite().then_some((rate, modes))
}

/// Largest `|Re λ + γ̄|` over eigenvalues with `|Im λ| > τ`: every coherence
/// mode decays at the average rate when this is at most `τ`.
pub fn coherence_rate_spread<T: Real>(cls: &CrossClassification<T>, values: &[Cplx<T>], gamma_bar: T) -> T {
    values
        .iter()
        .filter(|l| l.im.abs() > cls.tau)
        .map(|l| (l.re + gamma_bar).abs())
        .fold(T::zero(), T::max)
}

/// Classification of an XXZ point together with its D2 pairing, for reports.
pub fn classify_point<T: Real>(p: &XxzParams<T>, sector: Sector, tau_rel: T) -> Result<(CrossClassification<T>, D2Report<T>)> {
    let dec = eig_biortho(&xxz_liouvillian(p, sector)?)?;
    let cls = classify_cross(&dec, dec.gamma_bar, tau_rel)?;
    Ok((cls, verify_d2(&dec, dec.gamma_bar)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use crate::spin::Pauli;
    use crate::xxz::spin_current;

    fn chain4() -> XxzFamily<f64> {
        XxzFamily { n: 4, delta: 0.5, mu: 1.0 }
    }

    #[test]
    fn sector_phases_at_three_couplings() {
        let f = chain4();
        assert!(is_unbroken(&f.at(0.02).unwrap(), Sector::DMZ0, 1e-8).unwrap().0);
        assert!(!is_unbroken(&f.at(0.2).unwrap(), Sector::DMZ0, 1e-8).unwrap().0);
        assert!(!is_unbroken(&f.at(2.0).unwrap(), Sector::DMZ0, 1e-8).unwrap().0);
    }

    #[test]
    fn threshold_in_expected_bracket() {
        let r = find_gamma_pt(&chain4(), Sector::DMZ0, 1e-3, 10.0, 1e-3, 1e-8).unwrap();
        assert!(r.gamma_pt > 0.02 && r.gamma_pt < 0.2, "{}", r.gamma_pt);
        assert!(r.bracket.0 < r.gamma_pt && r.gamma_pt <= r.bracket.1);
        assert!(r.bracket.1 / r.bracket.0 - 1.0 <= 1e-3);
        let lo = r.evaluations.iter().find(|e| e.gamma == r.bracket.0).unwrap();
        let hi = r.evaluations.iter().find(|e| e.gamma == r.bracket.1).unwrap();
        assert!(lo.unbroken() && !hi.unbroken());
        let again = find_gamma_pt(&chain4(), Sector::DMZ0, 1e-3, 10.0, 1e-3, 1e-8).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn synthetic_predicate() {
        let cls = |broken: bool| CrossClassification {
            on_h: vec![],
            on_v: vec![],
            off_cross: if broken { vec![0] } else { vec![] },
            tau: 0.0,
            min_off_distance: None,
            stable: true,
        };
        let r = find_threshold(|g: f64| Ok(cls(g > 0.3)), 0.01, 1.0, 1e-6, 1e-8).unwrap();
        assert!((r.gamma_pt / 0.3 - 1.0).abs() < 2e-6);
        assert!(matches!(find_threshold(|_: f64| Ok(cls(true)), 0.01, 1.0, 1e-3, 1e-8), Err(Error::BracketInvalid(_))));
        assert!(matches!(find_threshold(|_: f64| Ok(cls(false)), 0.01, 1.0, 1e-3, 1e-8), Err(Error::BracketInvalid(_))));
        // widening below the given interval
        let r = find_threshold(|g: f64| Ok(cls(g > 0.005)), 0.01, 1.0, 1e-3, 1e-8).unwrap();
        assert!((r.gamma_pt / 0.005 - 1.0).abs() < 2e-3);
    }

    #[test]
    fn degenerate_gaps_break_immediately() {
        let h = CMatrix::<f64>::from_real_diag(&[0.0, 1.0, 2.0]);
        let l = CMatrix::from_fn(3, 3, |i, j| c(0.3 + 0.1 * (i as f64) - 0.2 * (j as f64), 0.05 * ((i * j) as f64)));
        for g in [1e-3, 1e-4, 1e-5] {
            let m = LindbladModel::new(h.clone(), vec![l.clone()], g).unwrap();
            assert!(!is_unbroken_model(&m, None, 1e-8).unwrap().0, "gamma {g}");
        }
    }

    #[test]
    fn decay_of_identity_is_zero() {
        let p = XxzParams::new(2, 0.5, 1.0, 0.1).unwrap();
        let eye = CMatrix::<f64>::identity(4);
        let rho0 = biased_state(&Pauli::Z.matrix::<f64>().kron(&CMatrix::identity(2)), 0.5).unwrap();
        let times: Vec<f64> = (0..50).map(|k| 0.2 * k as f64).collect();
        let s = observable_decay(&p, Sector::Full, &eye, &rho0, &times).unwrap();
        assert!(s.deviations.iter().all(|d| d.norm() <= 1e-12));
    }

    #[test]
    fn pencil_recovers_known_rates() {
        let dt = 0.05;
        let y: Vec<Cplx<f64>> = (0..600)
            .map(|k| {
                let t = k as f64 * dt;
                Cplx::from_polar(0.7 * (-0.1 * t).exp(), 1.3 * t) + Cplx::from_polar(0.3 * (-0.1 * t).exp(), -2.1 * t)
            })
            .collect();
        let (rate, modes) = matrix_pencil(&y, dt).unwrap();
        assert!((rate - 0.1).abs() < 1e-8, "{rate}");
        assert_eq!(modes.len(), 2);
    }

    #[test]
    fn pencil_fit_runs_on_current_signal() {
        let p = XxzParams::new(3, 0.5, 1.0, 0.02).unwrap();
        let j = spin_current::<f64>(3).unwrap();
        let rho0 = biased_state(&j, 0.5).unwrap();
        let times: Vec<f64> = (0..800).map(|k| 0.5 + k as f64 * 0.0625).collect();
        let s = observable_decay(&p, Sector::DMZ0, &j, &rho0, &times).unwrap();
        assert!(s.pencil_rate.is_some());
    }
}
