//! Output formats.

use std::fmt::Write as _;

use qutrit_core::protocols::{PermutationOverlap, QssAudit};
use qutrit_core::transfer::{ChannelTrajectory, PulseSchedule};
use qutrit_core::{Complex64, StateVector};
use serde::Serialize;

pub const CSV_HEADER: &str = "t,lambda1,lambda2,alpha1,alpha2,d_a,norm_err";

/// One row per grid point, every value with 17 significant digits.
pub fn trajectory_csv(schedule: &PulseSchedule, traj: &ChannelTrajectory) -> String {
    let (l1, l2) = (schedule.lambda1(), schedule.lambda2());
    let norm = traj.norm_errors();
    let mut out = String::with_capacity(traj.len() * 7 * 24);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for i in 0..traj.len() {
        let row = [
            traj.times[i],
            l1[i],
            l2[i],
            traj.alpha1[i],
            traj.alpha2[i],
            traj.d_a[i],
            norm[i],
        ];
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write!(out, "{v:.16e}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
pub struct TransferReport {
    pub alpha2_final_l: f64,
    pub alpha2_final_r: f64,
    pub qutrit_fidelity: f64,
}

#[derive(Debug, Serialize)]
pub struct OverlapReport {
    /// New wire `i` is old wire `permutation[i]`.
    pub permutation: [usize; 3],
    pub sign: i8,
    /// `⟨ψ|P|ψ⟩` as `[re, im]`.
    pub overlap: [f64; 2],
}

#[derive(Debug, Serialize)]
pub struct StateReport {
    /// Basis order `|000⟩, |001⟩, …, |222⟩`, each as `[re, im]`.
    pub amplitudes: Vec<[f64; 2]>,
    pub overlaps: Vec<OverlapReport>,
}

impl StateReport {
    pub fn new(state: &StateVector, overlaps: &[PermutationOverlap]) -> Self {
        StateReport {
            amplitudes: pairs(state.amps()),
            overlaps: overlaps
                .iter()
                .map(|o| OverlapReport {
                    permutation: o.order,
                    sign: o.sign,
                    overlap: [o.overlap.re, o.overlap.im],
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BranchReport {
    pub m: usize,
    pub mu: usize,
    pub l: usize,
    pub a: usize,
    pub b: usize,
    pub fidelity: f64,
}

#[derive(Debug, Serialize)]
pub struct QssReport {
    pub branches: Vec<BranchReport>,
    pub paper_exponents_match: bool,
    pub identity_residual: f64,
}

impl From<&QssAudit> for QssReport {
    fn from(a: &QssAudit) -> Self {
        QssReport {
            branches: a
                .branches
                .iter()
                .map(|b| BranchReport {
                    m: b.m,
                    mu: b.mu,
                    l: b.l,
                    a: b.a,
                    b: b.b,
                    fidelity: b.fidelity,
                })
                .collect(),
            paper_exponents_match: a.paper_exponents_match,
            identity_residual: a.identity_residual,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DistributeReport {
    /// Two-qutrit output, basis order `|00⟩, |01⟩, …, |22⟩`, each as `[re, im]`.
    pub amplitudes: Vec<[f64; 2]>,
    pub fidelity: f64,
}

fn pairs(amps: &[Complex64]) -> Vec<[f64; 2]> {
    amps.iter().map(|c| [c.re, c.im]).collect()
}

/// Pretty JSON with a trailing newline. Floats use the shortest form that
/// reads back to the same `f64`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use qutrit_core::transfer::{integrate_channel, ChannelParams};

    #[test]
    fn csv_rows_round_trip() {
        let p = ChannelParams::new(1.0, 0.5, 1.0, 0.01).unwrap();
        let s = PulseSchedule::idle(&p);
        let traj = integrate_channel(&s, &p).unwrap();
        let csv = trajectory_csv(&s, &traj);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let rows: Vec<Vec<f64>> = lines
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 201);
        assert_eq!(rows[0][0], -1.0);
        assert_eq!(rows[137][0], traj.times[137]);
        assert!(rows.iter().all(|r| r.len() == 7 && r[3] == 1.0));
    }

    #[test]
    fn json_is_newline_terminated() {
        let r = TransferReport {
            alpha2_final_l: 0.1,
            alpha2_final_r: 1.0,
            qutrit_fidelity: 1.0 / 3.0,
        };
        let s = to_json(&r);
        assert!(s.ends_with("}\n"));
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["qutrit_fidelity"].as_f64().unwrap(), 1.0 / 3.0);
    }
}
