//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode, Stdio};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinfactor::fermion::{car_residual, majoranas, verify_spin_system};
use spinfactor::linalg::{frob, identity, kron, min_eig, CMatrix};
use spinfactor::projection::projection_residuals;
use spinfactor::sampling::{projector, random_hermitian, random_pure_state};
use spinfactor::superop::SuperOp;
use spinfactor::{
    build_projection, build_spin_factor, choi, decomposability_project, extract_witness, herm_eig,
    jordan_product, norm1, norm_exp, partial_transpose, pauli, positivity_probe, reduced_map,
    reversibility_check, standard_potential, ChainConfig, Couplings, PotentialKind, ProbeSettings,
    ProjectionMap, Reversibility, SpinFactor, Tolerances,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn projection(n: usize) -> ProjectionMap {
    build_projection(build_spin_factor(&ChainConfig::new(n).unwrap()).unwrap()).unwrap()
}

fn algebraic_identities() -> Outcome {
    let tol = 1e-12;
    let mut worst = 0.0f64;
    for i in 1..=3 {
        for j in 1..=3 {
            let want = if i == j { identity(2) } else { CMatrix::zeros(2, 2) };
            let r = frob(&(jordan_product(&pauli(i).unwrap(), &pauli(j).unwrap()).unwrap() - want));
            worst = worst.max(r);
        }
    }
    for n in 1..=4 {
        let cfg = ChainConfig::new(n).unwrap();
        worst = worst.max(car_residual(&cfg).map_err(|e| e.to_string())?);
        let cs = majoranas(&cfg);
        for (j, a) in cs.iter().enumerate() {
            for (k, b) in cs.iter().enumerate() {
                let want = if j == k { identity(cfg.dim()).scale(2.0) } else { CMatrix::zeros(cfg.dim(), cfg.dim()) };
                worst = worst.max(frob(&(a * b + b * a - want)));
            }
        }
        let factor = verify_spin_system(cs)
            .and_then(SpinFactor::from_spin_system)
            .map_err(|e| format!("n = {n}: {e}"))?;
        ensure(factor.len() == 2 * n + 1, || format!("n = {n}: factor dimension {}", factor.len()))?;
    }
    ensure(worst < tol, || format!("max residual {worst:e}"))?;
    Ok(format!("max residual {worst:.1e}"))
}

fn projection_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let mut worst_struct = 0.0f64;
    let mut worst_eig = f64::INFINITY;
    let mut worst_bloch = 0.0f64;
    for n in 1..=4 {
        let p = projection(n);
        let d = p.dim();
        let probes: Vec<CMatrix> = (0..4).map(|_| random_hermitian(d, &mut rng)).collect();
        let r = projection_residuals(&p, &probes).map_err(|e| e.to_string())?;
        worst_struct = worst_struct.max(r.max());
        for _ in 0..10_000 {
            let rho = projector(&random_pure_state(d, &mut rng));
            worst_eig = worst_eig.min(min_eig(&p.apply(&rho).unwrap()));
            worst_bloch = worst_bloch.max(p.bloch_norm_sqr(&rho).unwrap());
        }
    }
    ensure(worst_struct < 1e-12, || format!("structural residual {worst_struct:e}"))?;
    ensure(worst_eig >= -1e-10, || format!("min eigenvalue {worst_eig:e}"))?;
    ensure(worst_bloch <= 1.0 + 1e-10, || format!("Bloch norm² {worst_bloch}"))?;
    Ok(format!(
        "residual {worst_struct:.1e}, min eig {worst_eig:.3e}, max Bloch² {worst_bloch:.6}"
    ))
}

fn one_site_choi_spectrum() -> Outcome {
    // Oracle: Choi(P) = (I⊗I + σ1⊗σ1 + σ2⊗σ2) / 2. The two involutions
    // commute and their product σ3⊗σ3 takes both signs, so the spectrum is
    // (1 + ε1 + ε2) / 2 over ε1 ε2 = ±1: {-1/2, 1/2, 1/2, 3/2}.
    let (s1, s2) = (pauli(1).unwrap(), pauli(2).unwrap());
    let oracle = (identity(4) + kron(&s1, &s1) + kron(&s2, &s2)).scale(0.5);
    let ch = choi(&projection(1).to_superop());
    let diff = frob(&(&ch.mat - &oracle));
    ensure(diff < 1e-14, || format!("Choi matrix differs from closed form by {diff:e}"))?;
    let ev = herm_eig(&ch.mat).map_err(|e| e.to_string())?.eigenvalues;
    let want = [-0.5, 0.5, 0.5, 1.5];
    let err = ev.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(err < 1e-9, || format!("spectrum {ev:?}"))?;
    Ok(format!("spectrum {ev:?}"))
}

fn decomposability() -> Outcome {
    let tol = Tolerances::default();
    let ch1 = choi(&projection(1).to_superop());
    let dec1 = decomposability_project(&ch1, tol.max_iters).map_err(|e| e.to_string())?;
    ensure(dec1.distance < 1e-6, || format!("n = 1 distance {}", dec1.distance))?;
    let recon = frob(&(&dec1.a + partial_transpose(&dec1.b, ch1.d) - &ch1.mat));
    ensure(recon <= 2e-6, || format!("n = 1 reconstruction {recon}"))?;
    ensure(min_eig(&dec1.a) >= -1e-9 && min_eig(&dec1.b) >= -1e-9, || "n = 1 blocks not PSD".into())?;

    let ch3 = choi(&projection(3).to_superop());
    let dec3 = decomposability_project(&ch3, tol.max_iters).map_err(|e| e.to_string())?;
    ensure(dec3.distance > 1e-3, || format!("n = 3 distance {}", dec3.distance))?;
    let w = extract_witness(&ch3, &dec3.residual(&ch3), tol.refine_iters, &tol).map_err(|e| e.to_string())?;
    ensure(w.verify(&ch3, &tol), || "witness failed re-verification".into())?;
    Ok(format!(
        "n=1 distance {:.1e}; n=3 distance {:.6}, witness tr(ρC) = {:.6}",
        dec1.distance, dec3.distance, w.objective
    ))
}

fn sweep() -> Outcome {
    let cfg = ChainConfig::new(3).unwrap();
    let pot = standard_potential(PotentialKind::IsingTransverse, Couplings { j: 1.0, h: 1.0 }, cfg)
        .map_err(|e| e.to_string())?;
    let h = pot.full_hamiltonian().map_err(|e| e.to_string())?;
    let p = projection(3);
    let p_op = p.to_superop();
    let grid = spinfactor_cli::parse_time_grid("0:1:0.1").map_err(|e| e.to_string())?;
    ensure(grid.len() == 11, || format!("grid has {} points", grid.len()))?;
    let mut max_choi = f64::NEG_INFINITY;
    let mut min_probe = f64::INFINITY;
    for (k, &t) in grid.iter().enumerate() {
        let m: SuperOp = reduced_map(&p, &h, t).map_err(|e| e.to_string())?;
        if t == 0.0 {
            let diff = frob(&(m.matrix() - p_op.matrix()));
            ensure(diff < 1e-12, || format!("reduced map at t = 0 differs from P by {diff:e}"))?;
        }
        max_choi = max_choi.max(herm_eig(&m.choi().mat).map_err(|e| e.to_string())?.min());
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        min_probe = min_probe.min(
            positivity_probe(&m, ProbeSettings::default(), &mut rng)
                .map_err(|e| e.to_string())?
                .min_value,
        );
    }
    ensure(max_choi < 0.0, || format!("Choi minimum reached {max_choi}"))?;
    ensure(min_probe >= -1e-9, || format!("probe found {min_probe}"))?;
    Ok(format!("max Choi min eig {max_choi:.6}, min probe {min_probe:.1e}"))
}

fn reversibility() -> Outcome {
    let paulis: Vec<CMatrix> = (1..=3).map(|i| pauli(i).unwrap()).collect();
    let pauli_factor = verify_spin_system(paulis)
        .and_then(SpinFactor::from_spin_system)
        .map_err(|e| e.to_string())?;
    let r = reversibility_check(&pauli_factor, 5, 1e-8).map_err(|e| e.to_string())?;
    ensure(r.verdict == Reversibility::Reversible, || format!("Pauli factor: {:?}", r.verdict))?;

    let jw = build_spin_factor(&ChainConfig::new(3).unwrap()).map_err(|e| e.to_string())?;
    let r = reversibility_check(&jw, 5, 1e-8).map_err(|e| e.to_string())?;
    ensure(r.verdict == Reversibility::NonReversible, || format!("n = 3: {:?}", r.verdict))?;
    ensure(!r.violating_word.is_empty() && r.violating_word.len() <= 5, || {
        format!("word {:?}", r.violating_word)
    })?;
    ensure(r.residual_norm > 0.9, || format!("residual {}", r.residual_norm))?;
    Ok(format!("n=3 word {:?}, residual {:.3}", r.violating_word, r.residual_norm))
}

fn norms() -> Outcome {
    let mut summary = Vec::new();
    for n in 3..=5 {
        for j in [1.0, 0.35, 2.5] {
            let cfg = ChainConfig::new(n).unwrap();
            let pot = standard_potential(PotentialKind::IsingTransverse, Couplings { j, h: 0.0 }, cfg)
                .map_err(|e| e.to_string())?;
            let n1 = norm1(&pot);
            let ne = norm_exp(&pot, std::f64::consts::LN_2).map_err(|e| e.to_string())?;
            ensure((n1 - 2.0 * j).abs() < 1e-12, || format!("n = {n}, J = {j}: norm1 {n1}"))?;
            ensure((ne - 8.0 * j).abs() < 1e-12, || format!("n = {n}, J = {j}: norm_exp {ne}"))?;
            if j == 1.0 {
                summary.push(format!("n={n}: {n1}, {ne}"));
            }
        }
    }
    Ok(summary.join("; "))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_spinfactor");
    let dirs = [tempdir()?, tempdir()?];
    for dir in &dirs {
        let status = Command::new(bin)
            .args(["run", "--config"])
            .arg(dir.path().join("run.toml"))
            .arg("--out")
            .arg(dir.path())
            .stdout(Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.code() == Some(0), || format!("exit status {status}"))?;
    }
    let read = |d: &tempfile::TempDir, f: &str| std::fs::read(d.path().join(f)).map_err(|e| e.to_string());
    ensure(read(&dirs[0], "sweep.csv")? == read(&dirs[1], "sweep.csv")?, || "sweep.csv differs".into())?;
    let strip = |bytes: Vec<u8>| -> Result<serde_json::Value, String> {
        let mut v: serde_json::Value = serde_json::from_slice(&bytes).map_err(|e| e.to_string())?;
        for check in v["checks"].as_array_mut().ok_or("no checks")? {
            check.as_object_mut().ok_or("bad check")?.remove("runtime_ms");
        }
        Ok(v)
    };
    let a = strip(read(&dirs[0], "report.json")?)?;
    let b = strip(read(&dirs[1], "report.json")?)?;
    ensure(a == b, || "report.json differs beyond runtime_ms".into())?;
    let checks = a["checks"].as_array().map(Vec::len).unwrap_or(0);
    Ok(format!("identical outputs across two runs ({checks} checks)"))
}

fn tempdir() -> Result<tempfile::TempDir, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    std::fs::write(
        dir.path().join("run.toml"),
        "n_sites = 3\nseed = 42\nanalyses = [\"verify_algebra\", \"classify\", \"sweep\", \"witness\"]\n",
    )
    .map_err(|e| e.to_string())?;
    Ok(dir)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 algebraic identities (n <= 4)", algebraic_identities),
        ("2 projection invariants (n = 1..4, 10^4 pure states each)", projection_invariants),
        ("3 one-site Choi spectrum", one_site_choi_spectrum),
        ("4 decomposability (n = 1 decomposable, n = 3 witnessed)", decomposability),
        ("5 Ising sweep n = 3, t = 0..1", sweep),
        ("6 reversibility", reversibility),
        ("7 potential norms", norms),
        ("8 determinism of CLI outputs", determinism),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
