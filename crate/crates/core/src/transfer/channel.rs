use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use super::{
    rk4_step, symmetric_rate, ChannelParams, ChannelState, PulseSchedule, NORM_DRIFT_LIMIT,
};
use crate::error::{Error, Result};

/// Channel amplitudes sampled on the schedule grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTrajectory {
    pub times: Vec<f64>,
    pub alpha1: Vec<f64>,
    pub alpha2: Vec<f64>,
    pub d_a: Vec<f64>,
}

impl ChannelTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, i: usize) -> ChannelState {
        ChannelState {
            alpha1: self.alpha1[i],
            alpha2: self.alpha2[i],
            d_a: self.d_a[i],
        }
    }

    /// State at `t = T`.
    pub fn final_state(&self) -> ChannelState {
        self.state(self.len() - 1)
    }

    /// `α₁² + α₂² + d_a² − 1` per sample.
    pub fn norm_errors(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.state(i).norm_sqr() - 1.0)
            .collect()
    }

    pub fn max_norm_error(&self) -> f64 {
        self.norm_errors().iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    /// `max_t max(|α₁(t) − α₂(−t)|, |d_a(t) − d_a(−t)|)`.
    pub fn mirror_error(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let j = n - 1 - i;
                (self.alpha1[i] - self.alpha2[j])
                    .abs()
                    .max((self.d_a[i] - self.d_a[j]).abs())
            })
            .fold(0.0, f64::max)
    }

    /// `ḋ_s` along the trajectory; zero when the no-click condition holds.
    pub fn constraint_residuals(&self, schedule: &PulseSchedule, kappa: f64) -> Vec<f64> {
        let (l1, l2) = (schedule.lambda1(), schedule.lambda2());
        (0..self.len())
            .map(|i| symmetric_rate(kappa, l1[i], l2[i], &self.state(i)))
            .collect()
    }

    /// Grid index of `t`, if it lies on the grid.
    pub fn index_of_time(&self, t: f64) -> Option<usize> {
        let n = self.len();
        if n < 2 {
            return (n == 1 && self.times[0] == t).then_some(0);
        }
        let dt = self.times[1] - self.times[0];
        let x = (t - self.times[0]) / dt;
        let i = libm::round(x);
        if i < 0.0 || i as usize >= n {
            return None;
        }
        let i = i as usize;
        ((self.times[i] - t).abs() <= 1e-9 * dt).then_some(i)
    }
}

fn vector_field(l1: f64, l2: f64, x: [f64; 3]) -> [f64; 3] {
    [
        l1 * x[2] / SQRT_2,
        -l2 * x[2] / SQRT_2,
        (l2 * x[1] - l1 * x[0]) / SQRT_2,
    ]
}

/// Fixed-step classical RK4 over `[−T, T]` from the schedule's start state.
///
/// The couplings at each step's midpoint come from the schedule's half-step
/// samples, so no interpolation is involved. Aborts with
/// [`Error::IntegrationFailure`] once the channel norm drifts by more than
/// [`NORM_DRIFT_LIMIT`].
pub fn integrate_channel(
    schedule: &PulseSchedule,
    params: &ChannelParams,
) -> Result<ChannelTrajectory> {
    if !schedule.matches(params) {
        return Err(Error::DimensionMismatch(format!(
            "schedule grid (T = {}, dt = {}) does not match params (T = {}, dt = {})",
            schedule.t_max(),
            schedule.dt(),
            params.t_max(),
            params.dt()
        )));
    }
    let n = schedule.len();
    let dt = schedule.dt();
    let mut traj = ChannelTrajectory {
        times: schedule.times(),
        alpha1: Vec::with_capacity(n),
        alpha2: Vec::with_capacity(n),
        d_a: Vec::with_capacity(n),
    };
    let mut x = schedule.start().to_array();
    let push = |traj: &mut ChannelTrajectory, x: [f64; 3]| {
        traj.alpha1.push(x[0]);
        traj.alpha2.push(x[1]);
        traj.d_a.push(x[2]);
    };
    push(&mut traj, x);
    for i in 0..n - 1 {
        x = rk4_step(x, dt, |stage, y| {
            let (l1, l2) = schedule.half_step(2 * i + stage);
            Ok(vector_field(l1, l2, y))
        })?;
        let drift = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0).abs();
        if !(drift <= NORM_DRIFT_LIMIT) {
            return Err(Error::IntegrationFailure {
                t: schedule.time(i + 1),
                drift,
            });
        }
        push(&mut traj, x);
    }
    Ok(traj)
}
