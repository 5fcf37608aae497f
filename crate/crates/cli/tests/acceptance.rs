//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p sqkd-cli --test acceptance`.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use ghz_sqkd::adversary::{
    analyze_entangle_measure, estimate_detection, theorem1_certificate, write_em_file, AttackStrategy,
    EntangleMeasureConfig, PhaseScope, LEAKAGE_FLOOR, ZERO_ERROR_TOL,
};
use ghz_sqkd::postproc::{count_consumed_qubits, qubit_efficiency};
use ghz_sqkd::protocol::{
    alice_check_ctrl_phase1, alice_check_ctrl_phase2, alice_check_sift_phase1, alice_check_sift_phase2,
    bob_act, run_session, BobAction, Phase, ProtocolParams,
};
use ghz_sqkd::qsim::{random_unitary, trace_distance, DensityMatrix, StateVector};
use ghz_sqkd::rng::seeded;
use ghz_sqkd::states::{bell, ghz_like, ghz_like_basis, verify_g001_decomposition, BellLabel, GhzLikeLabel};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(x: f64, target: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure((x - target).abs() <= tol, format!("{what} = {x}, expected {target} ± {tol}"))
}

fn state_algebra() -> Verdict {
    let start = Instant::now();
    let dev = ghz_like_basis().gram_deviation();
    ensure(dev < 1e-12, format!("Gram deviation {dev:e}"))?;
    ensure(verify_g001_decomposition(), "G001 decomposition residual above 1e-12")?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), format!("took {t:?}"))?;
    Ok(format!("Gram deviation {dev:.1e}, decomposition holds, {t:.2?}"))
}

fn honest_protocol() -> Verdict {
    let start = Instant::now();
    for seed in 0..1000 {
        let p = ProtocolParams::new(16, 4, 4, seed).map_err(|e| e.to_string())?;
        let r = run_session(&p, &AttackStrategy::none()).map_err(|e| e.to_string())?;
        ensure(!r.detected, format!("seed {seed}: detected"))?;
        let k = r.key_material.as_ref().ok_or(format!("seed {seed}: no key material"))?;
        ensure(k.m_a1 == k.m_b1 && k.m_a2 == k.m_b2, format!("seed {seed}: sifted bits differ"))?;
        ensure(k.info_alice().len() == 56, format!("seed {seed}: INFO length {}", k.info_alice().len()))?;
        ensure(r.keys_agree(), format!("seed {seed}: final keys differ"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!("1000 sessions, INFO length 56, keys identical, {t:.2?}"))
}

const TRIALS: usize = 40_000;

fn measure_resend() -> Verdict {
    let p = ProtocolParams::new(100, 50, 50, 0).unwrap();
    let s = AttackStrategy::measure_resend(PhaseScope::Both);
    let mut out = Vec::new();
    for (phase, seed) in [(Phase::One, 301), (Phase::Two, 302)] {
        let e = estimate_detection(&p, &s, phase, TRIALS, seed).map_err(|e| e.to_string())?;
        within(e.p_hat, 0.25, 0.0087, &format!("phase {phase}"))?;
        out.push(format!("phase {phase} {:.4}", e.p_hat));
    }
    Ok(out.join(", "))
}

fn intercept_resend() -> Verdict {
    let s = AttackStrategy::intercept_resend(PhaseScope::Both);
    let p1 = ProtocolParams::new(100, 50, 50, 0).unwrap();
    let e1 = estimate_detection(&p1, &s, Phase::One, TRIALS, 401).map_err(|e| e.to_string())?;
    within(e1.p_hat, 0.4375, 0.0099, "phase 1")?;
    let p2 = ProtocolParams::new(100, 50, 100, 0).unwrap();
    let e2 = estimate_detection(&p2, &s, Phase::Two, TRIALS, 402).map_err(|e| e.to_string())?;
    within(e2.p_hat, 0.5, 0.01, "phase 2")?;
    Ok(format!("phase 1 {:.4} (0.4375), phase 2 {:.4} (0.5)", e1.p_hat, e2.p_hat))
}

fn ket(pairs: &[(usize, f64)], n: usize) -> StateVector {
    let mut amps = vec![0.0; 1 << n];
    for &(i, a) in pairs {
        amps[i] = a;
    }
    StateVector::from_real(&amps).unwrap()
}

fn double_cnot() -> Verdict {
    let s = AttackStrategy::double_cnot(PhaseScope::Both);
    let zero_probe = DensityMatrix::from_pure(&StateVector::basis(1, 0).unwrap());
    let zero = StateVector::basis(1, 0).unwrap();
    let one = StateVector::basis(1, 1).unwrap();
    let mut rng = seeded(500);
    let h = std::f64::consts::FRAC_1_SQRT_2;

    // reconstructed states
    let g = s.attach_probe(&ghz_like(GhzLikeLabel::G001)).unwrap();
    let fwd = s.attack_forward(&g, 0, &mut rng).unwrap();
    let forward_state = ket(&[(0b0010, 0.5), (0b0100, 0.5), (0b1001, 0.5), (0b1111, 0.5)], 4);
    ensure(fwd.distance(&forward_state).unwrap() < 1e-12, "forward-leg state")?;
    let ctrl = s.attack_return(&fwd, 0, &mut rng).unwrap();
    ensure(ctrl.distance(&ghz_like(GhzLikeLabel::G001).tensor(&zero).unwrap()).unwrap() < 1e-12, "phase-1 CTRL state")?;
    for (bit, pair) in [(0usize, BellLabel::PsiPlus), (1, BellLabel::PhiPlus)] {
        let (_, collapsed) = fwd.project(&[0], &ghz_sqkd::states::z_basis(), bit).unwrap();
        let back = s.attack_return(&collapsed, 0, &mut rng).unwrap();
        let first = if bit == 0 { &zero } else { &one };
        let want = first.tensor(&bell(pair)).unwrap().tensor(&zero).unwrap();
        ensure(back.distance(&want).unwrap() < 1e-12, format!("phase-1 SIFT {bit} state"))?;
    }
    let phi = s.attach_probe(&bell(BellLabel::PhiPlus)).unwrap();
    let fwd2 = s.attack_forward(&phi, 0, &mut rng).unwrap();
    let back2 = s.attack_return(&fwd2, 0, &mut rng).unwrap();
    ensure(back2.distance(&bell(BellLabel::PhiPlus).tensor(&zero).unwrap()).unwrap() < 1e-12, "phase-2 CTRL state")?;
    ensure(fwd2.distance(&ket(&[(0b000, h), (0b111, h)], 3)).unwrap() < 1e-12, "phase-2 forward state")?;
    for bit in 0..2usize {
        let (_, collapsed) = fwd2.project(&[0], &ghz_sqkd::states::z_basis(), bit).unwrap();
        let back = s.attack_return(&collapsed, 0, &mut rng).unwrap();
        let want = StateVector::basis(3, if bit == 0 { 0b000 } else { 0b110 }).unwrap();
        ensure(back.distance(&want).unwrap() < 1e-12, format!("phase-2 SIFT {bit} state"))?;
    }

    // 10⁴ attacked rounds per phase, every branch
    let mut worst = 0.0f64;
    for phase in [Phase::One, Phase::Two] {
        let start = match phase {
            Phase::One => ghz_like(GhzLikeLabel::G001),
            Phase::Two => bell(BellLabel::PhiPlus),
        };
        let probe_qubit = start.num_qubits();
        let mut detections = 0;
        for _ in 0..10_000 {
            let st = s.attack_forward(&s.attach_probe(&start).unwrap(), 0, &mut rng).unwrap();
            let action = if rng.random_bool(0.5) { BobAction::Ctrl } else { BobAction::Sift };
            let (st, bit) = bob_act(&st, 0, action, &mut rng).unwrap();
            let st = s.attack_return(&st, 0, &mut rng).unwrap();
            let d = trace_distance(&st.reduced_density(&[probe_qubit]).unwrap(), &zero_probe).unwrap();
            worst = worst.max(d);
            let passed = match (action, phase) {
                (BobAction::Ctrl, Phase::One) => alice_check_ctrl_phase1(&st, &mut rng).unwrap().passed,
                (BobAction::Ctrl, Phase::Two) => alice_check_ctrl_phase2(&st, &mut rng).unwrap().passed,
                (BobAction::Sift, Phase::One) => alice_check_sift_phase1(&st, bit.unwrap(), &mut rng).unwrap().passed,
                (BobAction::Sift, Phase::Two) => alice_check_sift_phase2(&st, bit.unwrap(), &mut rng).unwrap().passed,
            };
            if !passed {
                detections += 1;
            }
        }
        ensure(detections == 0, format!("phase {phase}: {detections} detections"))?;
    }
    ensure(worst < 1e-12, format!("probe trace distance {worst:e}"))?;
    Ok(format!("0 detections in 2×10⁴ rounds, max probe distance {worst:.1e}, states match"))
}

fn em_certificate() -> Verdict {
    let phases = [Phase::One, Phase::Two];
    let mut rng = seeded(600);
    let mut silent = vec![EntangleMeasureConfig::identity(2).unwrap()];
    for _ in 0..50 {
        silent.push(EntangleMeasureConfig::probe_rotation(random_unitary(2, &mut rng).unwrap()).unwrap());
    }
    for (i, c) in silent.iter().enumerate() {
        for phase in phases {
            let r = analyze_entangle_measure(c, phase).map_err(|e| e.to_string())?;
            ensure(
                r.ctrl_error < LEAKAGE_FLOOR && r.sift_error < LEAKAGE_FLOOR && r.probe_distinguishability < LEAKAGE_FLOOR,
                format!("config {i} phase {phase}: {r:?}"),
            )?;
        }
    }
    for i in 0..100 {
        let c = EntangleMeasureConfig::haar_random(2, &mut rng).unwrap();
        for phase in phases {
            let ok = theorem1_certificate(&c, phase, ZERO_ERROR_TOL).map_err(|e| e.to_string())?;
            ensure(ok, format!("Haar config {i} phase {phase} violates the certificate"))?;
        }
    }
    let r = analyze_entangle_measure(&EntangleMeasureConfig::single_cnot(), Phase::One).map_err(|e| e.to_string())?;
    ensure(r.ctrl_error > 0.01, format!("single CNOT ctrl_error {}", r.ctrl_error))?;
    Ok(format!("51 silent configs clean, 100 Haar configs certified, single CNOT ctrl_error {:.3}", r.ctrl_error))
}

fn efficiency() -> Verdict {
    let mut rng = seeded(700);
    for _ in 0..100 {
        let (n, d, v) = (rng.random_range(1..1000usize), rng.random_range(1..1000usize), rng.random_range(1..1000usize));
        let e = qubit_efficiency(n, d, v).map_err(|e| e.to_string())?;
        ensure(e.gamma_q == 15 * n + 14 * d + 15 * v && e.lambda_b == 3 * n + 2 * v, format!("({n},{d},{v}) counts"))?;
        let want = (3 * n + 2 * v) as f64 / (15 * n + 14 * d + 15 * v) as f64;
        ensure(e.eta == want, format!("({n},{d},{v}): eta {} vs {want}", e.eta))?;
    }
    for seed in 0..100 {
        let (n, d, v) = (rng.random_range(1..8usize), rng.random_range(1..8usize), rng.random_range(1..8usize));
        let p = ProtocolParams::new(n, d, v, seed).unwrap();
        let r = run_session(&p, &AttackStrategy::none()).map_err(|e| e.to_string())?;
        let t = count_consumed_qubits(&r);
        ensure(!t.aborted && t.qubits == 15 * n + 14 * d + 15 * v, format!("session ({n},{d},{v}) tally {}", t.qubits))?;
    }
    Ok("100 closed-form triples and 100 session tallies match".into())
}

fn sqkd(args: &[&str], out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_sqkd"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("SQKD_SEED")
        .status()
        .map_err(|e| e.to_string())?;
    ensure(matches!(status.code(), Some(0 | 2)), format!("{args:?} exited with {status}"))?;
    std::fs::read(out).map_err(|e| e.to_string())
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let em = dir.path().join("haar.em");
    let cfg = EntangleMeasureConfig::haar_random(2, &mut seeded(800)).unwrap();
    std::fs::write(&em, write_em_file(&cfg)).map_err(|e| e.to_string())?;
    let em = em.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["run", "--seed", "11"],
        vec!["run", "--seed", "11", "--attack", "measure-resend", "--format", "csv"],
        vec!["run", "--seed", "11", "--attack", "entangle-measure", "--em-file", em],
        vec!["detect", "--seed", "11", "--trials", "5000"],
        vec!["detect", "--seed", "11", "--trials", "5000", "--format", "csv"],
        vec!["efficiency", "--n", "1,10,100", "--format", "csv"],
        vec!["analyze-em", "--em-file", em],
    ];
    for (i, args) in commands.iter().enumerate() {
        let a = sqkd(args, &dir.path().join(format!("{i}a")))?;
        let b = sqkd(args, &dir.path().join(format!("{i}b")))?;
        ensure(!a.is_empty() && a == b, format!("{args:?} output differs between runs"))?;
    }
    Ok(format!("{} commands byte-identical across repeats", commands.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("state algebra", state_algebra),
        ("honest protocol", honest_protocol),
        ("measure-resend detection", measure_resend),
        ("intercept-resend detection", intercept_resend),
        ("double CNOT", double_cnot),
        ("entangle-measure certificate", em_certificate),
        ("qubit efficiency", efficiency),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
