//! Executes the configured analyses and assembles the report.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use spinfactor::fermion::{car_residual, majoranas, verify_spin_system_with};
use spinfactor::linalg::{frob, herm_eig_with, identity, min_eig, CMatrix};
use spinfactor::projection::projection_residuals;
use spinfactor::sampling::{projector, random_density, random_hermitian, random_pure_state};
use spinfactor::{
    build_projection, build_spin_factor, classify, decomposability_project,
    extract_witness, jordan_product, pauli, positivity_probe, reduced_map,
    reversibility_check, standard_potential, ChainConfig, Couplings,
    DecomposabilityVerdict, ProjectionMap, Reversibility, SpinFactor, SuperOp,
};

use crate::config::{Analysis, ConfigError, RunConfig};
use crate::report::{
    Certificates, Check, Meta, Model, PotentialEcho, PotentialParams, Report, SweepRow, Verdict,
    WitnessRecord,
};

/// Everything a run produces before it is written to disk.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub sweep: Vec<SweepRow>,
}

/// Shared objects built once per run.
pub struct Prepared {
    pub cfg: ChainConfig,
    pub projection: ProjectionMap,
    pub hamiltonian: CMatrix,
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const STREAM_PROJECT: u64 = 1;
const STREAM_CLASSIFY: u64 = 2;
const STREAM_SWEEP: u64 = 1 << 32;

pub fn build_model(config: &RunConfig) -> Result<Prepared, ConfigError> {
    config.validate()?;
    let invalid = |e: spinfactor::Error| ConfigError::Invalid(e.to_string());
    let cfg = config.chain()?;
    let kind = config.potential_kind()?;
    let couplings = Couplings {
        j: config.potential.j,
        h: config.potential.h,
    };
    let mut potential = standard_potential(kind, couplings, cfg).map_err(invalid)?;
    for term in &config.potential.terms {
        potential
            .add_pauli_term(&term.sites, &term.paulis, term.coeff)
            .map_err(invalid)?;
    }
    let hamiltonian = potential.full_hamiltonian().map_err(invalid)?;
    let factor = build_spin_factor(&cfg).map_err(invalid)?;
    let projection = build_projection(factor).map_err(invalid)?;
    Ok(Prepared {
        cfg,
        projection,
        hamiltonian,
    })
}

fn timed(f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let mut check = f();
    check.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    check
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn verify_algebra(model: &Prepared, config: &RunConfig) -> Vec<Check> {
    let tol = config.tolerances.spin_tol;
    let cfg = &model.cfg;
    let mut out = Vec::new();

    out.push(timed(|| {
        let mut worst = 0.0f64;
        for i in 1..=3 {
            for j in 1..=3 {
                let (a, b) = (pauli(i).unwrap(), pauli(j).unwrap());
                let want = if i == j { identity(2) } else { CMatrix::zeros(2, 2) };
                worst = worst.max(frob(&(jordan_product(&a, &b).unwrap() - want)));
            }
        }
        Check::new("pauli_jordan", pass_if(worst < tol), "")
            .value("max_residual", worst)
            .tol(tol)
    }));

    out.push(timed(|| match car_residual(cfg) {
        Ok(r) => Check::new("car", pass_if(r < tol), "")
            .value("max_residual", r)
            .tol(tol),
        Err(e) => Check::error("car", e),
    }));

    out.push(timed(|| {
        let cs = majoranas(cfg);
        let d = cfg.dim();
        let mut worst = 0.0f64;
        for (j, a) in cs.iter().enumerate() {
            for (k, b) in cs.iter().enumerate() {
                let anti = a * b + b * a;
                let want = if j == k { identity(d).scale(2.0) } else { CMatrix::zeros(d, d) };
                worst = worst.max(frob(&(anti - want)));
            }
        }
        Check::new("majorana_anticommutation", pass_if(worst < tol), "")
            .value("max_residual", worst)
            .value("generators", cs.len())
            .tol(tol)
    }));

    out.push(timed(|| {
        let spin = verify_spin_system_with(majoranas(cfg), tol)
            .and_then(|s| SpinFactor::from_spin_system_with(s, &config.tolerances));
        match spin {
            Ok(f) => Check::new("spin_factor", Verdict::Pass, "")
                .value("dimension", f.len())
                .tol(config.tolerances.closure_tol),
            Err(e) => Check::new("spin_factor", Verdict::Fail, "").value("error", e.to_string()),
        }
    }));
    out
}

fn project(model: &Prepared, config: &RunConfig) -> Vec<Check> {
    let p = &model.projection;
    let d = model.cfg.dim();
    let mut rng = stream_rng(config.seed, STREAM_PROJECT);
    let mut out = Vec::new();
    let tol = 1e-12;

    out.push(timed(|| {
        let probes: Vec<CMatrix> = (0..8).map(|_| random_hermitian(d, &mut rng)).collect();
        match projection_residuals(p, &probes) {
            Ok(r) => Check::new("projection_structure", pass_if(r.max() < tol), "")
                .value("idempotence", r.idempotence)
                .value("unitality", r.unitality)
                .value("trace_preservation", r.trace_preservation)
                .value("self_adjointness", r.self_adjointness)
                .value("range", r.range)
                .tol(tol),
            Err(e) => Check::error("projection_structure", e),
        }
    }));

    out.push(timed(|| {
        let mut min_pure = f64::INFINITY;
        let mut max_bloch = 0.0f64;
        for _ in 0..config.samples {
            let rho = projector(&random_pure_state(d, &mut rng));
            let img = p.apply(&rho).expect("dimension checked");
            min_pure = min_pure.min(min_eig(&img));
            max_bloch = max_bloch.max(p.bloch_norm_sqr(&rho).expect("dimension checked"));
        }
        let mut min_mixed = f64::INFINITY;
        for _ in 0..config.mixed_samples {
            let rho = random_density(d, &mut rng);
            min_mixed = min_mixed.min(min_eig(&p.apply(&rho).expect("dimension checked")));
        }
        let eig_tol = 1e-10;
        let ok = min_pure.min(min_mixed) >= -eig_tol && max_bloch <= 1.0 + eig_tol;
        Check::new("projection_positivity", pass_if(ok), "")
            .value("pure_samples", config.samples)
            .value("mixed_samples", config.mixed_samples)
            .value("min_eig_pure", finite_or_null(min_pure))
            .value("min_eig_mixed", finite_or_null(min_mixed))
            .value("max_bloch_norm_sqr", max_bloch)
            .tol(eig_tol)
    }));
    out
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn reversibility(model: &Prepared, config: &RunConfig) -> Check {
    timed(|| {
        match reversibility_check(
            model.projection.factor(),
            config.max_word_length,
            config.tolerances.closure_tol,
        ) {
            Ok(r) => {
                let outcome = match r.verdict {
                    Reversibility::Reversible => "reversible",
                    Reversibility::NonReversible => "non_reversible",
                    Reversibility::Inconclusive => "inconclusive",
                };
                Check::new("reversibility", Verdict::Info, outcome)
                    .value("factor_dimension", model.projection.factor().len())
                    .value("violating_word", r.violating_word.clone())
                    .value("residual_norm", r.residual_norm)
                    .value("max_word_length", r.max_word_length)
                    .value("words_checked", r.words_checked)
                    .value("notes", r.notes.clone())
                    .tol(config.tolerances.closure_tol)
            }
            Err(e) => Check::error("reversibility", e),
        }
    })
}

/// Map analysed by `classify` and `witness`: `P` itself, or `P∘α_t`.
fn target_map(model: &Prepared, t: Option<f64>) -> Result<SuperOp, spinfactor::Error> {
    match t {
        None => Ok(model.projection.to_superop()),
        Some(t) => reduced_map(&model.projection, &model.hamiltonian, t),
    }
}

fn label(prefix: &str, t: Option<f64>) -> String {
    match t {
        None => prefix.to_string(),
        Some(t) => format!("{prefix}@t={t}"),
    }
}

fn classify_one(model: &Prepared, config: &RunConfig, t: Option<f64>, stream: u64) -> Vec<Check> {
    let tol = &config.tolerances;
    let map = match target_map(model, t) {
        Ok(m) => m,
        Err(e) => return vec![Check::error(label("classify", t), e)],
    };
    let start = Instant::now();
    let mut rng = stream_rng(config.seed, stream);
    let r = classify(&map, tol, config.probe, &mut rng);
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let with_t = |c: Check| {
        let mut c = match t {
            Some(t) => c.value("t", t),
            None => c.value("t", Value::Null),
        };
        c.runtime_ms = ms;
        c
    };
    let mut out = Vec::new();
    for (name, v) in [("cp", &r.cp), ("cocp", &r.cocp)] {
        let check = match v {
            Ok(v) => Check::new(
                label(&format!("classify/{name}"), t),
                Verdict::Info,
                if v.holds { name.to_string() } else { format!("not_{name}") },
            )
            .value("holds", v.holds)
            .value("min_eig", v.min_eig)
            .tol(tol.cp_tol),
            Err(e) => Check::error(label(&format!("classify/{name}"), t), e),
        };
        out.push(with_t(check));
    }
    out.push(with_t(match &r.positivity {
        Ok(p) => {
            let positive = r.positive().unwrap_or(false);
            Check::new(
                label("classify/positivity", t),
                Verdict::Info,
                if positive { "no_violation_found" } else { "not_positive" },
            )
            .value("probe_min", p.min_value)
            .value("samples", config.probe.n_samples)
            .tol(tol.cp_tol)
        }
        Err(e) => Check::error(label("classify/positivity", t), e),
    }));
    out.push(with_t(match (&r.decomposition, r.decomposable) {
        (Ok(dec), Some(verdict)) => {
            let outcome = match verdict {
                DecomposabilityVerdict::Decomposable => "decomposable",
                DecomposabilityVerdict::NonDecomposable => "non_decomposable",
                DecomposabilityVerdict::Undetermined => "undetermined",
            };
            let mut c = Check::new(label("classify/decomposability", t), Verdict::Info, outcome)
                .value("distance", dec.distance)
                .value("iterations", dec.iterations)
                .value("converged", dec.converged)
                .tol(tol.dist_tol);
            match &r.witness {
                Some(Ok(w)) => c = c.value("witness_objective", w.objective),
                Some(Err(e)) => c = c.value("witness_error", e.to_string()),
                None => {}
            }
            c
        }
        (Err(e), _) => Check::error(label("classify/decomposability", t), e),
        (Ok(_), None) => Check::error(label("classify/decomposability", t), "no verdict"),
    }));
    out
}

fn classify_all(model: &Prepared, config: &RunConfig) -> Vec<Check> {
    match &config.time_grid {
        None => classify_one(model, config, None, STREAM_CLASSIFY),
        Some(grid) => grid
            .iter()
            .enumerate()
            .flat_map(|(k, &t)| classify_one(model, config, Some(t), STREAM_CLASSIFY + 16 * (k as u64 + 1)))
            .collect(),
    }
}

fn witness(model: &Prepared, config: &RunConfig) -> (Check, Option<WitnessRecord>) {
    let t = config.time_grid.as_ref().and_then(|g| g.first().copied());
    let tol = &config.tolerances;
    let start = Instant::now();
    let result = (|| {
        let map = target_map(model, t)?;
        let ch = map.choi();
        let dec = decomposability_project(&ch, tol.max_iters)?;
        if dec.is_decomposable(tol.dist_tol) {
            return Ok((dec.distance, None));
        }
        let w = extract_witness(&ch, &dec.residual(&ch), tol.refine_iters, tol)?;
        let verified = w.verify(&ch, tol);
        Ok::<_, spinfactor::Error>((dec.distance, Some((w, verified))))
    })();
    let mut record = None;
    let mut check = match result {
        Ok((distance, None)) => Check::new("witness", Verdict::Info, "not_needed")
            .value("distance", distance)
            .tol(tol.dist_tol),
        Ok((distance, Some((w, verified)))) => {
            record = Some(WitnessRecord::from_certificate(&w, t));
            Check::new("witness", pass_if(verified), if verified { "valid" } else { "invalid" })
                .value("distance", distance)
                .value("objective", w.objective)
                .value("min_eig", w.min_eig_rho)
                .value("min_eig_pt", w.min_eig_rho_pt)
                .tol(tol.ppt_tol)
        }
        Err(e @ spinfactor::Error::WitnessSearchFailed { .. }) => {
            Check::new("witness", Verdict::Fail, "search_failed").value("error", e.to_string())
        }
        Err(e) => Check::error("witness", e),
    };
    check = match t {
        Some(t) => check.value("t", t),
        None => check.value("t", Value::Null),
    };
    check.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    (check, record)
}

pub fn sweep_row(model: &Prepared, config: &RunConfig, t: f64, index: usize) -> Result<SweepRow, spinfactor::Error> {
    let tol = &config.tolerances;
    let map = reduced_map(&model.projection, &model.hamiltonian, t)?;
    let ch = map.choi();
    let choi_min_eig = herm_eig_with(&ch.mat, tol.herm_tol)?.min();
    let mut rng = stream_rng(config.seed, STREAM_SWEEP + index as u64);
    let probe = positivity_probe(&map, config.probe, &mut rng)?;
    let dec = decomposability_project(&ch, tol.max_iters)?;
    let witness_objective = if dec.is_decomposable(tol.dist_tol) {
        None
    } else {
        extract_witness(&ch, &dec.residual(&ch), tol.refine_iters, tol)
            .ok()
            .map(|w| w.objective)
    };
    Ok(SweepRow {
        t,
        choi_min_eig,
        positivity_probe_min: probe.min_value,
        decomp_distance: dec.distance,
        witness_objective,
    })
}

fn sweep(model: &Prepared, config: &RunConfig) -> (Check, Vec<SweepRow>) {
    let start = Instant::now();
    let grid = config.sweep_grid();
    let compute = || {
        grid.par_iter()
            .enumerate()
            .map(|(k, &t)| sweep_row(model, config, t, k))
            .collect::<Result<Vec<_>, _>>()
    };
    let rows = match rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build() {
        Ok(pool) => pool.install(compute),
        Err(e) => {
            log::warn!("thread pool unavailable ({e}); sweeping on the global pool");
            compute()
        }
    };
    let mut check = match &rows {
        Ok(rows) => {
            let max_choi = rows.iter().map(|r| r.choi_min_eig).fold(f64::NEG_INFINITY, f64::max);
            let min_probe = rows.iter().map(|r| r.positivity_probe_min).fold(f64::INFINITY, f64::min);
            let witnessed = rows.iter().filter(|r| r.witness_objective.is_some()).count();
            Check::new("sweep", Verdict::Info, "complete")
                .value("points", rows.len())
                .value("max_choi_min_eig", finite_or_null(max_choi))
                .value("min_positivity_probe", finite_or_null(min_probe))
                .value("witnessed_points", witnessed)
        }
        Err(e) => Check::error("sweep", e),
    };
    check.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    (check, rows.unwrap_or_default())
}

/// Runs the analyses listed in `config.analyses` (deduplicated, in
/// dependency order).
pub fn run(config: &RunConfig) -> Result<Outcome, ConfigError> {
    let model = build_model(config)?;
    let mut checks = Vec::new();
    let mut certificates = Certificates::default();
    let mut rows = Vec::new();
    // Dependency order: model, then P, then α_t, then classification.
    let mut analyses = config.analyses.clone();
    analyses.sort();
    analyses.dedup();
    for analysis in &analyses {
        log::info!("running {analysis:?}");
        match analysis {
            Analysis::VerifyAlgebra => checks.extend(verify_algebra(&model, config)),
            Analysis::Project => checks.extend(project(&model, config)),
            Analysis::Reversibility => checks.push(reversibility(&model, config)),
            Analysis::Classify => checks.extend(classify_all(&model, config)),
            Analysis::Witness => {
                let (check, record) = witness(&model, config);
                checks.push(check);
                if record.is_some() {
                    certificates.witness = record;
                }
            }
            Analysis::Sweep => {
                let (check, r) = sweep(&model, config);
                checks.push(check);
                rows = r;
            }
        }
    }
    let report = Report {
        model: Model {
            n_sites: config.n_sites,
            potential: PotentialEcho {
                kind: config.potential_kind()?.to_string(),
                params: PotentialParams {
                    j: config.potential.j,
                    h: config.potential.h,
                    terms: config.potential.terms.clone(),
                },
            },
        },
        checks,
        certificates,
        meta: Meta {
            seed: config.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    };
    Ok(Outcome { report, sweep: rows })
}
