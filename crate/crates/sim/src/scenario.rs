use std::fs;
use std::path::PathBuf;

use qutrit_core::protocols::{
    audit, distribute_with_map, generate_antisymmetric, generate_symmetric, permutation_overlaps,
    source_pair,
};
use qutrit_core::transfer::{
    integrate_channel, shape_pulses, transfer_qutrit, ChannelParams, ChannelTrajectory, Drive,
    PulseSchedule, TransferMap,
};
use qutrit_core::{random_qutrit, StateVector};

use crate::config::{Scenario, ScenarioConfig};
use crate::report::{self, DistributeReport, QssReport, StateReport, TransferReport};

/// Channel checks applied to every integrated trajectory.
pub const NORM_TOLERANCE: f64 = 1e-8;
pub const MIRROR_TOLERANCE: f64 = 1e-6;
pub const CONSTRAINT_TOLERANCE: f64 = 1e-6;
/// Branch fidelity below `1 − QSS_TOLERANCE` fails a `qss` run.
pub const QSS_TOLERANCE: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Numerical(#[from] qutrit_core::Error),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// A shaped and integrated polarization channel.
#[derive(Debug, Clone)]
pub struct Channel {
    pub schedule: PulseSchedule,
    pub trajectory: ChannelTrajectory,
}

/// Shapes the pulse pair, integrates it and checks the channel invariants.
pub fn simulate_channel(
    params: &ChannelParams,
    table: Option<&[f64]>,
) -> Result<Channel, RunError> {
    let drive = match table {
        Some(t) => Drive::Table(t),
        None => Drive::Constant,
    };
    let schedule = shape_pulses(params, drive)?;
    let trajectory = integrate_channel(&schedule, params)?;

    let norm = trajectory.max_norm_error();
    if !(norm <= NORM_TOLERANCE) {
        return Err(RunError::Invariant(format!(
            "channel norm drifts by {norm:e}"
        )));
    }
    let mirror = trajectory.mirror_error();
    if !(mirror <= MIRROR_TOLERANCE) {
        return Err(RunError::Invariant(format!(
            "mirror symmetry broken by {mirror:e}"
        )));
    }
    let residual = trajectory
        .constraint_residuals(&schedule, params.kappa())
        .into_iter()
        .fold(0.0f64, |m, r| m.max(r.abs()));
    if !(residual <= CONSTRAINT_TOLERANCE) {
        return Err(RunError::Invariant(format!(
            "no-click constraint residual {residual:e}"
        )));
    }
    Ok(Channel {
        schedule,
        trajectory,
    })
}

fn channel_pair(config: &ScenarioConfig) -> Result<(Channel, Channel), RunError> {
    let params = config
        .channel
        .as_ref()
        .expect("channel scenarios always carry params");
    let table = config.lambda1_table.as_deref();
    // the polarizations share nothing; both are integrated from scratch
    let left = simulate_channel(params, table)?;
    let right = simulate_channel(params, table)?;
    Ok((left, right))
}

fn input_qutrit(config: &ScenarioConfig) -> StateVector {
    config
        .chi
        .clone()
        .unwrap_or_else(|| random_qutrit(config.seed))
}

/// Runs a scenario and returns the output file contents.
pub fn render(config: &ScenarioConfig) -> Result<String, RunError> {
    match config.scenario {
        Scenario::Pulses => {
            let (left, _) = channel_pair(config)?;
            Ok(report::trajectory_csv(&left.schedule, &left.trajectory))
        }
        Scenario::Transfer => {
            let (left, right) = channel_pair(config)?;
            let (_, fidelity) =
                transfer_qutrit(&input_qutrit(config), &left.trajectory, &right.trajectory)?;
            Ok(report::to_json(&TransferReport {
                alpha2_final_l: left.trajectory.final_state().alpha2,
                alpha2_final_r: right.trajectory.final_state().alpha2,
                qutrit_fidelity: fidelity,
            }))
        }
        Scenario::Distribute => {
            let (left, right) = channel_pair(config)?;
            let map = TransferMap::from_trajectories(&left.trajectory, &right.trajectory);
            let (out, fidelity) = distribute_with_map(&source_pair(), map)?;
            Ok(report::to_json(&DistributeReport {
                amplitudes: out.amps().iter().map(|c| [c.re, c.im]).collect(),
                fidelity,
            }))
        }
        Scenario::Symmetrize | Scenario::Antisymmetrize => {
            let state = if config.scenario == Scenario::Symmetrize {
                generate_symmetric()?
            } else {
                generate_antisymmetric()?
            };
            let overlaps = permutation_overlaps(&state)?;
            Ok(report::to_json(&StateReport::new(&state, &overlaps)))
        }
        Scenario::Qss => {
            let a = audit(&input_qutrit(config))?;
            if let Some(b) = a
                .branches
                .iter()
                .find(|b| !(b.fidelity >= 1.0 - QSS_TOLERANCE))
            {
                return Err(RunError::Invariant(format!(
                    "branch (m={}, mu={}, l={}) reconstructs with fidelity {}",
                    b.m, b.mu, b.l, b.fidelity
                )));
            }
            Ok(report::to_json(&QssReport::from(&a)))
        }
    }
}

/// Runs a scenario and writes its output file. Returns the path written.
pub fn run_scenario(config: &ScenarioConfig) -> Result<PathBuf, RunError> {
    let contents = render(config)?;
    let path = config.output_path.clone();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| RunError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(&path, contents).map_err(|source| RunError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}
