//! Model configuration files.
//!
//! ```json
//! {"model": "xxz", "n": 4, "delta": 0.5, "mu": 1.0, "gamma": 0.02, "sector": "dmz0"}
//! ```
//!
//! `single_qubit` takes `gamma` and an optional `omega` (default 1) for
//! `H = ω σ^z / 2`, `L = σ⁻`. `custom` takes
//! `"custom": {"hamiltonian": M, "lindblads": [M, ...]}` where each `M` is a
//! list of rows of `[re, im]` pairs.

use std::path::Path;

use pt_liouville::{
    xxz_model, BasisConvention, CMatrix, Cplx, LindbladModel, Pauli, Sector, XxzParams,
};
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Xxz,
    SingleQubit,
    Custom,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Xxz => "xxz",
            ModelKind::SingleQubit => "single_qubit",
            ModelKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub model: ModelKind,
    pub n: Option<usize>,
    pub delta: Option<f64>,
    pub mu: Option<f64>,
    pub gamma: f64,
    pub omega: Option<f64>,
    pub sector: Sector,
    pub hamiltonian: Option<CMatrix<f64>>,
    pub lindblads: Vec<CMatrix<f64>>,
    /// The document as read, echoed into reports.
    pub raw: Value,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

const KEYS: [&str; 8] = ["model", "n", "delta", "mu", "gamma", "omega", "sector", "custom"];

fn number(obj: &Map<String, Value>, key: &str) -> Result<Option<f64>, CliError> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => match v.as_f64() {
            Some(x) if x.is_finite() => Ok(Some(x)),
            _ => Err(schema(key, "expected a finite number")),
        },
    }
}

fn required(obj: &Map<String, Value>, key: &str) -> Result<f64, CliError> {
    number(obj, key)?.ok_or_else(|| schema(key, "missing"))
}

fn complex_matrix(v: &Value, path: &str) -> Result<CMatrix<f64>, CliError> {
    let rows = v.as_array().ok_or_else(|| schema(path, "expected a list of rows"))?;
    let dim = rows.len();
    if dim == 0 {
        return Err(schema(path, "empty matrix"));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| schema(format!("{path}[{i}]"), "expected a row"))?;
        if row.len() != dim {
            return Err(schema(format!("{path}[{i}]"), format!("expected {dim} entries")));
        }
        for (j, z) in row.iter().enumerate() {
            let pair = z.as_array().filter(|p| p.len() == 2);
            let parts = pair.and_then(|p| Some((p[0].as_f64()?, p[1].as_f64()?)));
            match parts {
                Some((re, im)) if re.is_finite() && im.is_finite() => data.push(Cplx::new(re, im)),
                _ => return Err(schema(format!("{path}[{i}][{j}]"), "expected [re, im]")),
            }
        }
    }
    CMatrix::from_row_major(dim, dim, data).map_err(|e| schema(path, e.to_string()))
}

/// Validates a parsed document.
pub fn config_from_value(raw: Value) -> Result<ModelConfig, CliError> {
    let obj = raw.as_object().ok_or_else(|| schema("", "expected a JSON object"))?;
    if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(schema(k.as_str(), "unknown key"));
    }
    let model = match obj.get("model").map(|m| m.as_str()) {
        None => return Err(schema("model", "missing")),
        Some(Some("xxz")) => ModelKind::Xxz,
        Some(Some("single_qubit")) => ModelKind::SingleQubit,
        Some(Some("custom")) => ModelKind::Custom,
        Some(_) => return Err(schema("model", "expected \"xxz\", \"single_qubit\" or \"custom\"")),
    };
    let gamma = required(obj, "gamma")?;
    if gamma < 0.0 {
        return Err(schema("gamma", "must be non-negative"));
    }
    let sector = match obj.get("sector").map(|s| s.as_str()) {
        None | Some(Some("full")) => Sector::Full,
        Some(Some("dmz0")) => Sector::DMZ0,
        Some(_) => return Err(schema("sector", "expected \"full\" or \"dmz0\"")),
    };
    let allowed: &[&str] = match model {
        ModelKind::Xxz => &["n", "delta", "mu"],
        ModelKind::SingleQubit => &["omega"],
        ModelKind::Custom => &["custom"],
    };
    for key in ["n", "delta", "mu", "omega", "custom"] {
        if obj.contains_key(key) && !allowed.contains(&key) {
            return Err(schema(key, format!("not used by model {}", model.name())));
        }
    }
    if sector != Sector::Full && model != ModelKind::Xxz {
        return Err(schema("sector", "dmz0 requires model xxz"));
    }

    let mut cfg = ModelConfig {
        model,
        n: None,
        delta: None,
        mu: None,
        gamma,
        omega: None,
        sector,
        hamiltonian: None,
        lindblads: Vec::new(),
        raw: raw.clone(),
    };
    match model {
        ModelKind::Xxz => {
            let n = obj.get("n").ok_or_else(|| schema("n", "missing"))?;
            let n = n
                .as_u64()
                .filter(|&n| (1..=6).contains(&n))
                .ok_or_else(|| schema("n", "expected an integer in 1..=6"))?;
            let delta = required(obj, "delta")?;
            let mu = required(obj, "mu")?;
            if mu.abs() > 1.0 {
                return Err(schema("mu", "must lie in [-1, 1]"));
            }
            cfg.n = Some(n as usize);
            cfg.delta = Some(delta);
            cfg.mu = Some(mu);
        }
        ModelKind::SingleQubit => {
            cfg.omega = Some(number(obj, "omega")?.unwrap_or(1.0));
        }
        ModelKind::Custom => {
            let custom = obj
                .get("custom")
                .ok_or_else(|| schema("custom", "missing"))?
                .as_object()
                .ok_or_else(|| schema("custom", "expected an object"))?;
            if let Some(k) = custom.keys().find(|k| !["hamiltonian", "lindblads"].contains(&k.as_str())) {
                return Err(schema(format!("custom.{k}"), "unknown key"));
            }
            let h = complex_matrix(
                custom.get("hamiltonian").ok_or_else(|| schema("custom.hamiltonian", "missing"))?,
                "custom.hamiltonian",
            )?;
            let tol = 1e-12 * h.max_abs().max(1.0);
            if h.hermiticity_defect() > tol {
                return Err(schema("custom.hamiltonian", "not Hermitian"));
            }
            let ls = match custom.get("lindblads") {
                None => Vec::new(),
                Some(v) => v
                    .as_array()
                    .ok_or_else(|| schema("custom.lindblads", "expected a list of matrices"))?
                    .iter()
                    .enumerate()
                    .map(|(i, m)| complex_matrix(m, &format!("custom.lindblads[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            };
            for (i, l) in ls.iter().enumerate() {
                if l.dim() != h.dim() {
                    return Err(schema(format!("custom.lindblads[{i}]"), "size differs from the Hamiltonian"));
                }
            }
            LindbladModel::new(h.clone(), ls.clone(), gamma).map_err(|e| schema("custom", e.to_string()))?;
            cfg.hamiltonian = Some(h);
            cfg.lindblads = ls;
        }
    }
    Ok(cfg)
}

/// Reads and validates a configuration file.
pub fn parse_config(path: &Path) -> Result<ModelConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let raw: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    config_from_value(raw)
}

impl ModelConfig {
    pub fn xxz_params(&self) -> Option<XxzParams<f64>> {
        match self.model {
            ModelKind::Xxz => XxzParams::new(self.n?, self.delta?, self.mu?, self.gamma).ok(),
            _ => None,
        }
    }

    pub fn lindblad_model(&self) -> Result<LindbladModel<f64>, CliError> {
        let m = match self.model {
            ModelKind::Xxz => {
                let p = self.xxz_params().ok_or_else(|| schema("", "incomplete xxz parameters"))?;
                xxz_model(&p)?
            }
            ModelKind::SingleQubit => {
                let w = self.omega.unwrap_or(1.0);
                LindbladModel::new(Pauli::Z.matrix().scale_real(0.5 * w), vec![Pauli::Minus.matrix()], self.gamma)?
            }
            ModelKind::Custom => LindbladModel::new(
                self.hamiltonian.clone().ok_or_else(|| schema("custom.hamiltonian", "missing"))?,
                self.lindblads.clone(),
                self.gamma,
            )?,
        };
        Ok(m)
    }

    pub fn hilbert_dim(&self) -> usize {
        match self.model {
            ModelKind::Xxz => 1 << self.n.unwrap_or(0),
            ModelKind::SingleQubit => 2,
            ModelKind::Custom => self.hamiltonian.as_ref().map_or(0, |h| h.dim()),
        }
    }

    pub fn convention(&self) -> BasisConvention {
        match (self.model, self.n) {
            (ModelKind::Xxz, Some(n)) => BasisConvention::for_chain(n),
            _ => BasisConvention::for_dim(self.hilbert_dim()),
        }
    }

    /// Sector labels, `None` for the full space.
    pub fn sector_labels(&self) -> Option<Vec<(usize, usize)>> {
        self.n.and_then(|n| self.sector.labels(n))
    }
}
