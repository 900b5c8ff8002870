//! `report.json` and `sweep.csv` records, plus atomic file output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use spinfactor::linalg::{c, CMatrix};
use spinfactor::{ChoiMatrix, Tolerances, WitnessCertificate};
use thiserror::Error;

use crate::config::TermSpec;

#[derive(Debug, Error)]
#[error("cannot write {path}: {source}")]
pub struct OutputError {
    pub path: PathBuf,
    pub source: std::io::Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Informational outcome that is neither a pass nor a failure.
    Info,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    /// Human-readable outcome, e.g. `not_cp` or `non_decomposable`.
    pub outcome: String,
    pub values: BTreeMap<String, Value>,
    pub tol: Option<f64>,
    pub runtime_ms: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict, outcome: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            verdict,
            outcome: outcome.into(),
            values: BTreeMap::new(),
            tol: None,
            runtime_ms: 0.0,
        }
    }

    pub fn error(name: impl Into<String>, message: impl ToString) -> Self {
        Self::new(name, Verdict::Error, "error").value("error", message.to_string())
    }

    pub fn value(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.values.insert(key.to_string(), v.into());
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    pub fn failed(&self) -> bool {
        matches!(self.verdict, Verdict::Fail | Verdict::Error)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    #[serde(rename = "J")]
    pub j: f64,
    pub h: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialEcho {
    pub kind: String,
    pub params: PotentialParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub n_sites: usize,
    pub potential: PotentialEcho,
}

/// Witness in portable form; `rho` is row-major `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    /// Time of the witnessed map; absent for the bare projection.
    pub t: Option<f64>,
    pub dim: usize,
    pub rho: Vec<[f64; 2]>,
    pub objective: f64,
    pub min_eig: f64,
    pub min_eig_pt: f64,
}

impl WitnessRecord {
    pub fn from_certificate(w: &WitnessCertificate, t: Option<f64>) -> Self {
        let n = w.rho.nrows();
        let mut rho = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = w.rho[(i, j)];
                rho.push([z.re, z.im]);
            }
        }
        Self {
            t,
            dim: n,
            rho,
            objective: w.objective,
            min_eig: w.min_eig_rho,
            min_eig_pt: w.min_eig_rho_pt,
        }
    }

    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, self.dim, |i, j| {
            let [re, im] = self.rho[i * self.dim + j];
            c(re, im)
        })
    }

    /// Recomputes the certificate against `choi` from the stored state only.
    pub fn reverify(&self, choi: &ChoiMatrix, tol: &Tolerances) -> bool {
        if self.rho.len() != self.dim * self.dim {
            return false;
        }
        let w = WitnessCertificate {
            rho: self.matrix(),
            min_eig_rho: self.min_eig,
            min_eig_rho_pt: self.min_eig_pt,
            objective: self.objective,
        };
        w.verify(choi, tol)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub seed: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub model: Model,
    pub checks: Vec<Check>,
    pub certificates: Certificates,
    pub meta: Meta,
}

impl Report {
    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(Check::failed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub choi_min_eig: f64,
    pub positivity_probe_min: f64,
    pub decomp_distance: f64,
    /// Empty in the CSV when the map is decomposable or no witness was found.
    pub witness_objective: Option<f64>,
}

pub const SWEEP_HEADER: &str = "t,choi_min_eig,positivity_probe_min,decomp_distance,witness_objective";

/// 17 significant digits, enough to round-trip every `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let w = r.witness_objective.map(num).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(r.t),
            num(r.choi_min_eig),
            num(r.positivity_probe_min),
            num(r.decomp_distance),
            w
        );
    }
    out
}

/// Writes through a temporary sibling file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), OutputError> {
    let err = |source| OutputError {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(err)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(err)
}

/// Writes `report.json` and `sweep.csv` (header only when no sweep ran).
pub fn emit(report: &Report, rows: &[SweepRow], dir: &Path) -> Result<(PathBuf, PathBuf), OutputError> {
    let report_path = dir.join("report.json");
    let csv_path = dir.join("sweep.csv");
    let mut json = serde_json::to_string_pretty(report).expect("report serializes");
    json.push('\n');
    write_atomic(&report_path, json.as_bytes())?;
    write_atomic(&csv_path, sweep_csv(rows).as_bytes())?;
    Ok((report_path, csv_path))
}
