use serde::Serialize;

use super::PostprocError;
use crate::protocol::{BobAction, SessionResult};

/// Qubit efficiency `η = λ_b / (γ_q + γ_c)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EfficiencyAccount {
    pub n: usize,
    pub delta: usize,
    pub nu: usize,
    /// INFO bits shared.
    pub lambda_b: usize,
    /// Qubits consumed.
    pub gamma_q: usize,
    /// Classical bits spent on communication; security checks are not counted.
    pub gamma_c: usize,
    pub eta: f64,
}

pub fn qubit_efficiency(n: usize, delta: usize, nu: usize) -> Result<EfficiencyAccount, PostprocError> {
    if n == 0 || delta == 0 || nu == 0 {
        return Err(PostprocError::NonPositive);
    }
    let total = n + delta + nu;
    // 4(n+δ+ν) three-qubit states, plus Bob's fresh particles: 2(n+δ+ν) in
    // phase 1 and n+ν in phase 2.
    let gamma_q = 4 * total * 3 + 2 * total + (n + nu);
    let lambda_b = 3 * n + 2 * nu;
    let gamma_c = 0;
    Ok(EfficiencyAccount {
        n,
        delta,
        nu,
        lambda_b,
        gamma_q,
        gamma_c,
        eta: lambda_b as f64 / (gamma_q + gamma_c) as f64,
    })
}

/// Qubits consumed according to a session transcript.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QubitTally {
    pub qubits: usize,
    /// The session stopped before completing both phases.
    pub aborted: bool,
}

/// Three qubits per phase-1 position plus one fresh particle for each SIFT
/// round Bob played, in either phase.
pub fn count_consumed_qubits(session: &SessionResult) -> QubitTally {
    let mut qubits = 0;
    for r in &session.records {
        if r.phase.number() == 1 {
            qubits += 3;
        }
        if r.action == BobAction::Sift {
            qubits += 1;
        }
    }
    QubitTally {
        qubits,
        aborted: session.detected,
    }
}
