use anyhow::{bail, Context, Result};
use rand::RngCore;
use serde::Serialize;

use ghz_sqkd::adversary::{
    analytic_detection, analyze_entangle_measure, estimate_detection, read_em_file, theorem1_certificate,
    AttackKind, AttackStrategy, PhaseScope,
};
use ghz_sqkd::postproc::{count_consumed_qubits, qubit_efficiency, EfficiencyAccount};
use ghz_sqkd::protocol::{run_session, Phase, ProtocolParams};
use ghz_sqkd::rng::substream;

use crate::output::{emit_one, emit_rows, float, opt, Options, Row};
use crate::{AnalyzeArgs, AttackArg, DetectArgs, EfficiencyArgs, RunArgs, SizeArgs, Status};

fn params(size: &SizeArgs, seed: u64) -> Result<ProtocolParams> {
    Ok(ProtocolParams::new(size.n, size.delta, size.nu, seed)?)
}

fn strategy(
    kind: AttackKind,
    scope: PhaseScope,
    em_file: Option<&std::path::Path>,
) -> Result<AttackStrategy> {
    Ok(match kind {
        AttackKind::None => AttackStrategy::none(),
        AttackKind::MeasureResend => AttackStrategy::measure_resend(scope),
        AttackKind::InterceptResend => AttackStrategy::intercept_resend(scope),
        AttackKind::DoubleCnot => AttackStrategy::double_cnot(scope),
        AttackKind::EntangleMeasure => {
            let Some(path) = em_file else {
                bail!("--attack entangle-measure requires --em-file");
            };
            let cfg = read_em_file(path).with_context(|| format!("loading {}", path.display()))?;
            AttackStrategy::entangle_measure(cfg, scope)
        }
    })
}

#[derive(Serialize)]
struct RunReport {
    n: usize,
    delta: usize,
    nu: usize,
    seed: u64,
    attack: AttackKind,
    detected: bool,
    detection_phase: Option<u8>,
    reconciliation_failed: bool,
    info_length: usize,
    leaked_bits: Option<usize>,
    key_length: usize,
    keys_agree: bool,
    alice_key: Option<String>,
    bob_key: Option<String>,
    probe_leakage: Option<f64>,
    qubits_consumed: usize,
    aborted: bool,
}

impl Row for RunReport {
    const HEADER: &'static [&'static str] = &[
        "n",
        "delta",
        "nu",
        "seed",
        "attack",
        "detected",
        "detection_phase",
        "reconciliation_failed",
        "info_length",
        "leaked_bits",
        "key_length",
        "keys_agree",
        "alice_key",
        "bob_key",
        "probe_leakage",
        "qubits_consumed",
        "aborted",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.delta.to_string(),
            self.nu.to_string(),
            self.seed.to_string(),
            self.attack.to_string(),
            self.detected.to_string(),
            opt(self.detection_phase),
            self.reconciliation_failed.to_string(),
            self.info_length.to_string(),
            opt(self.leaked_bits),
            self.key_length.to_string(),
            self.keys_agree.to_string(),
            self.alice_key.clone().unwrap_or_default(),
            self.bob_key.clone().unwrap_or_default(),
            self.probe_leakage.map(float).unwrap_or_default(),
            self.qubits_consumed.to_string(),
            self.aborted.to_string(),
        ]
    }
}

pub fn run(args: &RunArgs, seed: u64, opts: &Options) -> Result<Status> {
    let p = params(&args.size, seed)?;
    let s = strategy(args.attack.into(), args.phase.scope(), args.em_file.as_deref())?;
    let result = run_session(&p, &s)?;

    if let Some(path) = &args.transcript {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)
            .with_context(|| format!("writing {}", path.display()))?;
        for r in &result.records {
            w.serialize(r)?;
        }
        w.flush()?;
    }

    let tally = count_consumed_qubits(&result);
    let keys = result.final_keys.as_ref();
    let report = RunReport {
        n: p.n,
        delta: p.delta,
        nu: p.nu,
        seed,
        attack: s.kind(),
        detected: result.detected,
        detection_phase: result.detection_phase.map(Phase::number),
        reconciliation_failed: result.reconciliation_failed,
        info_length: result.key_material.as_ref().map_or(0, |k| k.info_alice().len()),
        leaked_bits: keys.map(|k| k.leaked_bits),
        key_length: keys.map_or(0, |k| k.alice.len()),
        keys_agree: result.keys_agree(),
        alice_key: keys.map(|k| k.alice.to_hex()),
        bob_key: keys.map(|k| k.bob.to_hex()),
        probe_leakage: result.probe_leakage,
        qubits_consumed: tally.qubits,
        aborted: tally.aborted,
    };
    emit_one(&report, opts)?;
    if result.detected || result.reconciliation_failed {
        Ok(Status::Detected)
    } else {
        Ok(Status::Ok)
    }
}

#[derive(Serialize)]
struct DetectRow {
    attack: AttackKind,
    phase: u8,
    p_analytic: Option<f64>,
    p_hat: f64,
    std_err: f64,
    trials: usize,
}

impl Row for DetectRow {
    const HEADER: &'static [&'static str] = &["attack", "phase", "p_analytic", "p_hat", "std_err", "trials"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.attack.to_string(),
            self.phase.to_string(),
            self.p_analytic.map_or_else(|| "n/a".to_owned(), float),
            float(self.p_hat),
            float(self.std_err),
            self.trials.to_string(),
        ]
    }
}

pub fn detect(args: &DetectArgs, seed: u64, opts: &Options) -> Result<Status> {
    let p = params(&args.size, seed)?;
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let attacks: Vec<AttackArg> = if args.attack.is_empty() {
        vec![
            AttackArg::None,
            AttackArg::MeasureResend,
            AttackArg::InterceptResend,
            AttackArg::DoubleCnot,
        ]
    } else {
        args.attack.clone()
    };
    let mut rows = Vec::new();
    for a in attacks {
        let kind: AttackKind = a.into();
        for phase in args.phase.phases() {
            let s = strategy(kind, PhaseScope::only(phase), args.em_file.as_deref())?;
            let row_seed = substream(seed, rows.len() as u64).next_u64();
            let est = estimate_detection(&p, &s, phase, args.trials, row_seed)?;
            rows.push(DetectRow {
                attack: kind,
                phase: phase.number(),
                p_analytic: analytic_detection(kind, phase, &p).ok(),
                p_hat: est.p_hat,
                std_err: est.std_err,
                trials: est.trials,
            });
        }
    }
    emit_rows(&rows, opts)?;
    Ok(Status::Ok)
}

impl Row for EfficiencyAccount {
    const HEADER: &'static [&'static str] = &["n", "delta", "nu", "lambda_b", "gamma_q", "gamma_c", "eta"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.delta.to_string(),
            self.nu.to_string(),
            self.lambda_b.to_string(),
            self.gamma_q.to_string(),
            self.gamma_c.to_string(),
            float(self.eta),
        ]
    }
}

pub fn efficiency(args: &EfficiencyArgs, opts: &Options) -> Result<Status> {
    let rows = args
        .n
        .iter()
        .map(|&n| qubit_efficiency(n, args.delta, args.nu))
        .collect::<Result<Vec<_>, _>>()?;
    emit_rows(&rows, opts)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct AnalyzeRow {
    phase: u8,
    ctrl_error: f64,
    sift_error: f64,
    probe_distinguishability: f64,
    error_tol: f64,
    certificate: bool,
}

impl Row for AnalyzeRow {
    const HEADER: &'static [&'static str] = &[
        "phase",
        "ctrl_error",
        "sift_error",
        "probe_distinguishability",
        "error_tol",
        "certificate",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.phase.to_string(),
            float(self.ctrl_error),
            float(self.sift_error),
            float(self.probe_distinguishability),
            float(self.error_tol),
            self.certificate.to_string(),
        ]
    }
}

pub fn analyze_em(args: &AnalyzeArgs, opts: &Options) -> Result<Status> {
    let cfg = read_em_file(&args.em_file).with_context(|| format!("loading {}", args.em_file.display()))?;
    let mut rows = Vec::new();
    for phase in args.phase.phases() {
        let r = analyze_entangle_measure(&cfg, phase)?;
        rows.push(AnalyzeRow {
            phase: phase.number(),
            ctrl_error: r.ctrl_error,
            sift_error: r.sift_error,
            probe_distinguishability: r.probe_distinguishability,
            error_tol: args.error_tol,
            certificate: theorem1_certificate(&cfg, phase, args.error_tol)?,
        });
    }
    emit_rows(&rows, opts)?;
    Ok(Status::Ok)
}
