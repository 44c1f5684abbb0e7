//! Subcommands.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use pt_liouville::perturbation::{degeneracy_report, degeneracy_report_in_blocks, heuristic_gamma_pt, DegeneracyReport};
use pt_liouville::spectral::CLUSTER_REL;
use pt_liouville::spin::total_mz;
use pt_liouville::threshold::TAU_REL;
use pt_liouville::xxz::xxz_symmetries;
use pt_liouville::{
    biased_state, build_superoperator, check_inversion, check_pt, check_pt_rows, classify_cross, decay_series,
    dissipator_traceless, eig_biortho, find_gamma_pt, find_threshold, hermiticity_residual, is_unbroken_model,
    population_matrix_with, scaling_study, sector_restrict, site_operator, spin_current, steady_state, verify_d2,
    xxz_parity, CMatrix, Pauli, SuperOperator, ThresholdOutcome, ThresholdResult, XxzFamily,
};
use serde_json::{json, Value};

use crate::config::{parse_config, ModelConfig, ModelKind};
use crate::output::{complex_json, complex_list_json, emit_json, fmt_f64, format_csv, write_spectrum_csv, write_text};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "ptliou", version, about = "Liouvillian spectra, PT-symmetry checks and threshold scans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Model configuration (JSON).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 1e-3)]
    gamma_min: f64,
    #[arg(long, default_value_t = 10.0)]
    gamma_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    rel_precision: f64,
    #[arg(long, default_value_t = TAU_REL)]
    tau_rel: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues of the Liouvillian as CSV.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
        /// Summary JSON (stdout when omitted).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// PT identity, D2 symmetry and cross classification.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = TAU_REL)]
        tau_rel: f64,
        /// Time for the propagator inversion check.
        #[arg(long, default_value_t = 0.25)]
        time: f64,
    },
    /// Population matrix, its eigenvalues and degeneracy diagnostics.
    Perturb {
        #[command(flatten)]
        common: Common,
        /// V matrix as CSV (`j,k,re,im`).
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Locate the PT-breaking coupling (the configured gamma is ignored).
    Threshold {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relaxation of an observable towards the steady state, as CSV.
    Evolve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// `current` (xxz only), `sz1` or `identity`.
        #[arg(long, default_value = "current")]
        observable: String,
        #[arg(long, default_value_t = 0.5)]
        t_start: f64,
        #[arg(long, default_value_t = 50.0)]
        t_end: f64,
        #[arg(long, default_value_t = 2000)]
        points: usize,
        /// Weight of the observable in the initial state.
        #[arg(long, default_value_t = 0.5)]
        bias: f64,
    },
    /// Threshold against chain length (xxz only; n, gamma and sector from the config are ignored).
    Scaling {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        n_list: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code, printing failures as JSON on stderr.
pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return err.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("{}", err.to_json());
            err.exit_code()
        }
    }
}

/// Like [`run_command`] but returns the error instead of printing it.
pub fn run<I, S>(argv: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string().trim().to_string()))?;
    execute(cli.command)
}

fn execute(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Spectrum { common, out, report } => spectrum(&parse_config(&common.config)?, &out, report.as_deref()),
        Command::Check {
            common,
            out,
            tau_rel,
            time,
        } => check(&parse_config(&common.config)?, out.as_deref(), tau_rel, time),
        Command::Perturb { common, out, report } => perturb(&parse_config(&common.config)?, &out, report.as_deref()),
        Command::Threshold { common, scan, out } => threshold(&parse_config(&common.config)?, &scan, out.as_deref()),
        Command::Evolve {
            common,
            out,
            report,
            observable,
            t_start,
            t_end,
            points,
            bias,
        } => {
            let grid = TimeGrid { t_start, t_end, points };
            evolve(&parse_config(&common.config)?, &out, report.as_deref(), &observable, grid, bias)
        }
        Command::Scaling {
            common,
            scan,
            n_list,
            out,
            report,
        } => scaling(&parse_config(&common.config)?, &scan, &n_list, &out, report.as_deref()),
    }
}

/// Liouvillian of the configured model on its sector.
pub fn liouvillian(cfg: &ModelConfig) -> Result<SuperOperator<f64>, CliError> {
    let full = build_superoperator(&cfg.lindblad_model()?);
    Ok(match cfg.sector_labels() {
        Some(l) => sector_restrict(&full, &l)?,
        None => full,
    })
}

fn spectrum(cfg: &ModelConfig, out: &Path, report: Option<&Path>) -> Result<(), CliError> {
    let dec = eig_biortho(&liouvillian(cfg)?)?;
    write_spectrum_csv(&dec, out)?;
    let summary = json!({
        "command": "spectrum",
        "config": cfg.raw,
        "tolerances": { "cluster_rel": CLUSTER_REL },
        "eigenvalues": dec.len(),
        "gamma_bar": dec.gamma_bar,
        "spectral_radius": dec.spectral_radius,
        "max_residual": dec.max_residual(),
        "clusters": dec.clusters.len(),
        "csv": out.display().to_string(),
    });
    emit_json(&summary, report)
}

fn check(cfg: &ModelConfig, out: Option<&Path>, tau_rel: f64, time: f64) -> Result<(), CliError> {
    let l = liouvillian(cfg)?;
    let dec = eig_biortho(&l)?;
    let cls = classify_cross(&dec, dec.gamma_bar, tau_rel)?;
    let d2 = verify_d2(&dec, dec.gamma_bar);
    let (symmetry, rows, inversion) = match cfg.xxz_params() {
        Some(p) => {
            let parity = xxz_parity(p.n)?;
            let rep = check_pt(&l, &parity)?;
            let rows = check_pt_rows(&p)?;
            let inv = check_inversion(&l, &parity, time)?;
            (
                json!({
                    "pt_residual": rep.pt_residual,
                    "involution_residual": rep.involution_residual,
                    "unitarity_residual": rep.unitarity_residual,
                    "sector_leakage": rep.sector_leakage,
                    "gamma_bar": rep.gamma_bar,
                }),
                json!(rows),
                json!({ "t": time, "residual": inv }),
            )
        }
        None => (Value::Null, Value::Null, Value::Null),
    };
    let steady = match steady_state(&dec) {
        Ok(ss) => json!({
            "eigenvalue": complex_json(ss.eigenvalue),
            "left_identity_error": ss.left_identity_error,
            "hermiticity_defect": ss.hermiticity_defect,
            "min_eigenvalue": ss.min_eigenvalue,
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let report = json!({
        "command": "check",
        "config": cfg.raw,
        "tolerances": {
            "tau_rel": tau_rel,
            "tau": cls.tau,
            "pt_construction": 1e-12,
            "pt_propagator": 1e-9,
        },
        "symmetry": symmetry,
        "pt_rows": rows,
        "inversion": inversion,
        "hermiticity_residual": hermiticity_residual(&l).ok(),
        "d2": {
            "max_v_error": d2.max_v_error,
            "max_h_error": d2.max_h_error,
            "max_v_pairing_error": d2.max_v_pairing_error,
            "max_h_pairing_error": d2.max_h_pairing_error,
            "spectral_radius": d2.spectral_radius,
        },
        "cross": {
            "on_h": cls.on_h.len(),
            "on_v": cls.on_v.len(),
            "off_cross": cls.off_cross.len(),
            "min_off_distance": cls.min_off_distance,
            "stable": cls.stable,
        },
        "steady_state": steady,
    });
    emit_json(&report, out)
}

fn degeneracy_json(rep: &DegeneracyReport<f64>) -> Value {
    json!({
        "tol": rep.tol,
        "energy_pairs": rep.energy_pairs,
        "gap_pairs": rep.gap_pairs.iter().map(|(a, b)| json!([[a.0, a.1], [b.0, b.1]])).collect::<Vec<_>>(),
    })
}

fn perturb(cfg: &ModelConfig, out: &Path, report: Option<&Path>) -> Result<(), CliError> {
    let model = cfg.lindblad_model()?;
    let symmetries = match cfg.n {
        Some(n) if cfg.model == ModelKind::Xxz => xxz_symmetries(n),
        _ => Vec::new(),
    };
    let rep = population_matrix_with(&model, &symmetries)?;
    let n = rep.energies.len();
    let rows: Vec<Vec<String>> = (0..n)
        .flat_map(|j| (0..n).map(move |k| (j, k)))
        .map(|(j, k)| vec![j.to_string(), k.to_string(), fmt_f64(rep.v[(j, k)].re), fmt_f64(rep.v[(j, k)].im)])
        .collect();
    write_text(out, &format_csv(&["j", "k", "re", "im"], &rows))?;

    let h = model.hamiltonian();
    let blocks = match cfg.n {
        Some(n) if cfg.model == ModelKind::Xxz => Some(degeneracy_json(&degeneracy_report_in_blocks(h, &total_mz(n), None)?)),
        _ => None,
    };
    let heuristic = dissipator_traceless(&model)
        .and_then(|d| heuristic_gamma_pt(&d, h))
        .map(|e| json!({ "gamma_pt": e.gamma_pt, "dissipator_norm": e.dissipator_norm, "density_of_states": e.density_of_states }))
        .unwrap_or_else(|e| json!({ "error": e.to_string() }));
    let summary = json!({
        "command": "perturb",
        "config": cfg.raw,
        "tolerances": { "degeneracy": pt_liouville::perturbation::default_degeneracy_tol(&rep.energies) },
        "energies": rep.energies,
        "xi": complex_list_json(&rep.xi),
        "symmetry_defect": rep.symmetry_defect,
        "reality_defect": rep.reality_defect,
        "column_sum_defect": rep.column_sum_defect(),
        "degeneracies": degeneracy_json(&degeneracy_report(h, None)?),
        "degeneracies_in_magnetization_blocks": blocks,
        "heuristic": heuristic,
        "csv": out.display().to_string(),
    });
    emit_json(&summary, report)
}

fn threshold_json(r: &ThresholdResult<f64>) -> Value {
    json!({
        "gamma_pt": r.gamma_pt,
        "bracket": [r.bracket.0, r.bracket.1],
        "tau_rel": r.tau_rel,
        "evaluations": r.evaluations.iter().map(|e| json!({
            "gamma": e.gamma,
            "off_cross": e.off_cross,
            "min_off_distance": e.min_off_distance,
        })).collect::<Vec<_>>(),
    })
}

fn threshold(cfg: &ModelConfig, scan: &ScanArgs, out: Option<&Path>) -> Result<(), CliError> {
    let result = match (cfg.model, cfg.n, cfg.delta, cfg.mu) {
        (ModelKind::Xxz, Some(n), Some(delta), Some(mu)) => find_gamma_pt(
            &XxzFamily { n, delta, mu },
            cfg.sector,
            scan.gamma_min,
            scan.gamma_max,
            scan.rel_precision,
            scan.tau_rel,
        )?,
        _ => {
            let model = cfg.lindblad_model()?;
            find_threshold(
                |g| Ok(is_unbroken_model(&model.with_gamma(g)?, None, scan.tau_rel)?.1),
                scan.gamma_min,
                scan.gamma_max,
                scan.rel_precision,
                scan.tau_rel,
            )?
        }
    };
    let mut report = json!({
        "command": "threshold",
        "config": cfg.raw,
        "tolerances": { "tau_rel": scan.tau_rel, "rel_precision": scan.rel_precision },
        "gamma_range": [scan.gamma_min, scan.gamma_max],
    });
    report["result"] = threshold_json(&result);
    emit_json(&report, out)
}

#[derive(Debug, Clone, Copy)]
struct TimeGrid {
    t_start: f64,
    t_end: f64,
    points: usize,
}

fn observable(cfg: &ModelConfig, name: &str) -> Result<CMatrix<f64>, CliError> {
    let dim = cfg.hilbert_dim();
    match (name, cfg.model, cfg.n) {
        ("identity", _, _) => Ok(CMatrix::identity(dim)),
        ("current", ModelKind::Xxz, Some(n)) => Ok(spin_current(n)?),
        ("sz1", ModelKind::Xxz, Some(n)) => Ok(site_operator(Pauli::Z, 1, n)?),
        ("sz1", ModelKind::SingleQubit, _) => Ok(Pauli::Z.matrix()),
        _ => Err(CliError::Unsupported(format!("observable {name} for model {}", cfg.model.name()))),
    }
}

fn evolve(cfg: &ModelConfig, out: &Path, report: Option<&Path>, obs_name: &str, grid: TimeGrid, bias: f64) -> Result<(), CliError> {
    if grid.points < 2 || !(grid.t_end > grid.t_start) || !grid.t_start.is_finite() || !grid.t_end.is_finite() {
        return Err(CliError::Usage("time grid needs at least two points and t_end > t_start".into()));
    }
    let obs = observable(cfg, obs_name)?;
    let rho0 = biased_state(&obs, bias)?;
    let dt = (grid.t_end - grid.t_start) / (grid.points - 1) as f64;
    let times: Vec<f64> = (0..grid.points).map(|k| grid.t_start + dt * k as f64).collect();
    let series = decay_series(&liouvillian(cfg)?, &obs, &rho0, &times)?;
    let rows: Vec<Vec<String>> = times
        .iter()
        .zip(&series.deviations)
        .map(|(t, d)| vec![fmt_f64(*t), fmt_f64(d.re), fmt_f64(d.im)])
        .collect();
    write_text(out, &format_csv(&["t", "re", "im"], &rows))?;
    let summary = json!({
        "command": "evolve",
        "config": cfg.raw,
        "tolerances": { "fit_floor": 1e-10, "window_skip_fraction": 0.05 },
        "observable": obs_name,
        "bias": bias,
        "grid": { "t_start": grid.t_start, "t_end": grid.t_end, "points": grid.points },
        "steady_expectation": complex_json(series.steady_expectation),
        "log_fit_rate": series.log_fit_rate,
        "pencil_rate": series.pencil_rate,
        "csv": out.display().to_string(),
    });
    emit_json(&summary, report)
}

fn scaling(cfg: &ModelConfig, scan: &ScanArgs, n_list: &[usize], out: &Path, report: Option<&Path>) -> Result<(), CliError> {
    let (Some(delta), Some(mu)) = (cfg.delta, cfg.mu) else {
        return Err(CliError::Unsupported(format!("scaling for model {}", cfg.model.name())));
    };
    if scan.tau_rel != TAU_REL {
        return Err(CliError::Unsupported("scaling runs at the default tau_rel".into()));
    }
    let study = scaling_study(n_list, delta, mu, (scan.gamma_min, scan.gamma_max), scan.rel_precision)?;
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for e in &study.entries {
        let (status, g, detail) = match &e.outcome {
            ThresholdOutcome::Bracketed(r) => ("bracketed", fmt_f64(r.gamma_pt), threshold_json(r)),
            ThresholdOutcome::BrokenThroughout { smallest_gamma } => {
                ("broken_throughout", String::new(), json!({ "smallest_gamma": smallest_gamma }))
            }
            ThresholdOutcome::UnbrokenThroughout { largest_gamma } => {
                ("unbroken_throughout", String::new(), json!({ "largest_gamma": largest_gamma }))
            }
        };
        rows.push(vec![e.n.to_string(), status.to_string(), g, fmt_f64(e.heuristic)]);
        entries.push(json!({ "n": e.n, "status": status, "heuristic": e.heuristic, "detail": detail }));
    }
    write_text(out, &format_csv(&["n", "status", "gamma_pt", "heuristic"], &rows))?;
    let summary = json!({
        "command": "scaling",
        "config": cfg.raw,
        "tolerances": { "tau_rel": TAU_REL, "rel_precision": scan.rel_precision },
        "gamma_range": [scan.gamma_min, scan.gamma_max],
        "slope": study.slope,
        "reference_slope": (0.25f64).ln(),
        "strictly_decreasing": study.strictly_decreasing(),
        "entries": entries,
        "csv": out.display().to_string(),
    });
    emit_json(&summary, report)
}
