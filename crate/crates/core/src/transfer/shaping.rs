use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use super::{rk4_step, ChannelParams, ChannelState};
use crate::error::{Error, Result};

/// Below this, `α₂` counts as zero when solving for `λ₂`.
const SINGULAR_ALPHA: f64 = 1e-9;

/// `(α(0), d_a(0))` at the centre of a symmetric transfer.
///
/// From `2α²(0)(λ₀² + κ²)/κ² = 1` with `α₁(0) = α₂(0)`; the negative root of
/// `d_a(0)` is the one with `ḋ_s(0) = 0` when `λ₀, α(0) > 0`.
pub fn initial_amplitudes(params: &ChannelParams) -> (f64, f64) {
    initial_amplitudes_for(params.kappa(), params.lambda0()).expect("validated params")
}

/// [`initial_amplitudes`] for bare `(κ, λ₀)`; `λ₀ = 0` is allowed.
pub fn initial_amplitudes_for(kappa: f64, lambda0: f64) -> Result<(f64, f64)> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::param(
            "kappa",
            format!("must be positive, got {kappa}"),
        ));
    }
    if !(lambda0 >= 0.0 && lambda0.is_finite()) {
        return Err(Error::param(
            "lambda0",
            format!("must be non-negative, got {lambda0}"),
        ));
    }
    let alpha0 = kappa / libm::sqrt(2.0 * (lambda0 * lambda0 + kappa * kappa));
    let d_a0 = -SQRT_2 * lambda0 * alpha0 / kappa;
    Ok((alpha0, d_a0))
}

/// Free half `λ₁(t)` of the drive on `[0, T]`.
#[derive(Clone, Copy)]
pub enum Drive<'a> {
    /// `λ₁(t) = λ₀` throughout.
    Constant,
    /// Arbitrary function of `t ∈ [0, T]`.
    Function(&'a dyn Fn(f64) -> f64),
    /// Uniform samples on `[0, T]` (first at `t = 0`, last at `t = T`),
    /// linearly interpolated.
    Table(&'a [f64]),
}

impl Drive<'_> {
    fn eval(&self, params: &ChannelParams, t: f64) -> f64 {
        match self {
            Drive::Constant => params.lambda0(),
            Drive::Function(f) => f(t),
            Drive::Table(samples) => {
                let n = samples.len() - 1;
                if n == 0 {
                    return samples[0];
                }
                let x = (t / params.t_max()).clamp(0.0, 1.0) * n as f64;
                let i = (libm::floor(x) as usize).min(n - 1);
                let frac = x - i as f64;
                samples[i] * (1.0 - frac) + samples[i + 1] * frac
            }
        }
    }
}

/// Couplings `λ₁(t)`, `λ₂(t)` on `[−T, T]`.
///
/// Samples are stored at half the integration step so a classical RK4 step
/// of size `dt` finds its midpoint values; the public grid is every other
/// sample. The schedule also carries the channel state at `t = −T`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    t_max: f64,
    dt: f64,
    half_steps: usize,
    lambda1: Vec<f64>,
    lambda2: Vec<f64>,
    start: ChannelState,
}

impl PulseSchedule {
    /// Builds a schedule from half-step samples (`4·T/dt + 1` values each).
    /// Rejects non-finite couplings and any violation of `λ₂(t) = λ₁(−t)`
    /// beyond 1e-12. Signed couplings are allowed; a negative `λ` is a drive
    /// with its phase flipped by π.
    pub fn from_half_step_samples(
        params: &ChannelParams,
        lambda1: Vec<f64>,
        lambda2: Vec<f64>,
        start: ChannelState,
    ) -> Result<Self> {
        let n = 4 * params.half_steps() + 1;
        if lambda1.len() != n || lambda2.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} half-step samples, got {} and {}",
                lambda1.len(),
                lambda2.len()
            )));
        }
        let h = params.dt() / 2.0;
        let centre = 2 * params.half_steps();
        for k in 0..n {
            let t = (k as f64 - centre as f64) * h;
            for (name, v) in [("lambda1", lambda1[k]), ("lambda2", lambda2[k])] {
                if !v.is_finite() {
                    return Err(Error::param(
                        name,
                        format!("sample {v} at t = {t} is not finite"),
                    ));
                }
            }
            if (lambda2[k] - lambda1[n - 1 - k]).abs() > 1e-12 {
                return Err(Error::param(
                    "lambda2",
                    format!("symmetric pulse condition violated at t = {t}"),
                ));
            }
        }
        Ok(PulseSchedule {
            t_max: params.t_max(),
            dt: params.dt(),
            half_steps: params.half_steps(),
            lambda1,
            lambda2,
            start,
        })
    }

    /// All-zero couplings starting from the source state.
    pub fn idle(params: &ChannelParams) -> Self {
        let n = 4 * params.half_steps() + 1;
        PulseSchedule {
            t_max: params.t_max(),
            dt: params.dt(),
            half_steps: params.half_steps(),
            lambda1: alloc::vec![0.0; n],
            lambda2: alloc::vec![0.0; n],
            start: ChannelState::SOURCE,
        }
    }

    /// Replaces the state at `t = −T`.
    pub fn with_start(mut self, start: ChannelState) -> Self {
        self.start = start;
        self
    }

    pub fn start(&self) -> ChannelState {
        self.start
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of grid points `2·T/dt + 1`.
    pub fn len(&self) -> usize {
        2 * self.half_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `t_i = (i − T/dt)·dt`; exactly antisymmetric about the centre.
    pub fn time(&self, i: usize) -> f64 {
        (i as f64 - self.half_steps as f64) * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    /// `λ₁` on the grid.
    pub fn lambda1(&self) -> Vec<f64> {
        self.lambda1.iter().step_by(2).copied().collect()
    }

    /// `λ₂` on the grid.
    pub fn lambda2(&self) -> Vec<f64> {
        self.lambda2.iter().step_by(2).copied().collect()
    }

    /// `(λ₁, λ₂)` at half-step sample `k` (grid point `i` is `k = 2i`).
    pub(crate) fn half_step(&self, k: usize) -> (f64, f64) {
        (self.lambda1[k], self.lambda2[k])
    }

    pub(crate) fn matches(&self, params: &ChannelParams) -> bool {
        self.half_steps == params.half_steps()
            && (self.t_max - params.t_max()).abs() <= 1e-12 * params.t_max()
    }
}

/// Solves the dark-state constraint for `λ₂` given the instantaneous state.
fn partner_coupling(kappa: f64, lambda1: f64, s: [f64; 3], t: f64) -> Result<f64> {
    let numerator = -SQRT_2 * kappa * s[2] - lambda1 * s[0];
    if s[1].abs() < SINGULAR_ALPHA {
        if numerator.abs() < SINGULAR_ALPHA {
            return Ok(0.0);
        }
        return Err(Error::Singularity {
            t,
            alpha2: s[1],
            numerator,
        });
    }
    Ok(numerator / s[1])
}

/// Shapes both couplings from the free half of `λ₁`.
///
/// Starting from [`initial_amplitudes`] at `t = 0`, the channel is integrated
/// forward on `[0, T]` with `λ₂` solved at every stage from
/// `λ₂α₂ = −√2κ d_a − λ₁α₁`. The mirror `λ₁(−t) = λ₂(t)` then fills
/// `[−T, 0]`, and the schedule's start state is the time reverse of the state
/// reached at `T`.
pub fn shape_pulses(params: &ChannelParams, drive: Drive<'_>) -> Result<PulseSchedule> {
    if let Drive::Table(samples) = drive {
        if samples.is_empty() {
            return Err(Error::param("lambda1", "empty drive table"));
        }
    }
    let kappa = params.kappa();
    let at_zero = drive.eval(params, 0.0);
    if (at_zero - params.lambda0()).abs() > 1e-9 * params.lambda0() {
        return Err(Error::param(
            "lambda1",
            format!(
                "drive starts at {at_zero}, expected lambda0 = {}",
                params.lambda0()
            ),
        ));
    }

    // forward half: 2·N steps of dt/2 on [0, T]
    let h = params.dt() / 2.0;
    let steps = 2 * params.half_steps();
    let (alpha0, d_a0) = initial_amplitudes(params);
    let mut x = [alpha0, alpha0, d_a0];
    let mut upper1 = Vec::with_capacity(steps + 1);
    let mut upper2 = Vec::with_capacity(steps + 1);
    upper1.push(at_zero);
    upper2.push(at_zero);

    let rhs = |t: f64, s: [f64; 3]| -> Result<[f64; 3]> {
        let l1 = drive.eval(params, t);
        let l2 = partner_coupling(kappa, l1, s, t)?;
        Ok([
            l1 * s[2] / SQRT_2,
            -l2 * s[2] / SQRT_2,
            (l2 * s[1] - l1 * s[0]) / SQRT_2,
        ])
    };

    for k in 0..steps {
        let t = k as f64 * h;
        x = rk4_step(x, h, |stage, s| rhs(t + stage as f64 * h / 2.0, s))?;
        let t_next = (k + 1) as f64 * h;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::IntegrationFailure {
                t: t_next,
                drift: f64::INFINITY,
            });
        }
        let l1 = drive.eval(params, t_next);
        let l2 = partner_coupling(kappa, l1, x, t_next)?;
        if !(l1 >= 0.0 && l1.is_finite()) {
            return Err(Error::param(
                "lambda1",
                format!("drive is {l1} at t = {t_next}"),
            ));
        }
        if !l2.is_finite() {
            return Err(Error::param(
                "lambda2",
                format!("shaped coupling is {l2} at t = {t_next}"),
            ));
        }
        upper1.push(l1);
        upper2.push(l2);
    }

    // [−T, 0) mirrored from (0, T]
    let mut lambda1: Vec<f64> = upper2.iter().rev().copied().collect();
    let mut lambda2: Vec<f64> = upper1.iter().rev().copied().collect();
    lambda1.extend_from_slice(&upper1[1..]);
    lambda2.extend_from_slice(&upper2[1..]);

    let end = ChannelState::from_array(x);
    PulseSchedule::from_half_step_samples(params, lambda1, lambda2, end.mirrored())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::symmetric_rate;
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_form_centre_amplitudes() {
        let kappa = 1.3;
        let (a, d) = initial_amplitudes_for(kappa, kappa / SQRT_2).unwrap();
        assert_abs_diff_eq!(a, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(d, -1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(2.0 * a * a + d * d, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn weak_coupling_limit() {
        let (a, d) = initial_amplitudes_for(1.0, 0.0).unwrap();
        assert_abs_diff_eq!(a, 1.0 / SQRT_2, epsilon = 1e-15);
        assert_eq!(d, 0.0);
        let (a, d) = initial_amplitudes_for(1.0, 1e-8).unwrap();
        assert_abs_diff_eq!(a, 1.0 / SQRT_2, epsilon = 1e-12);
        assert!(d.abs() < 1e-7);
        assert!(initial_amplitudes_for(0.0, 1.0).is_err());
        assert!(initial_amplitudes_for(1.0, -1.0).is_err());
    }

    #[test]
    fn centre_satisfies_dark_condition() {
        for (kappa, lambda0) in [(1.0, 0.2), (2.0, 3.0), (0.5, 0.5)] {
            let (a, d) = initial_amplitudes_for(kappa, lambda0).unwrap();
            let s = ChannelState {
                alpha1: a,
                alpha2: a,
                d_a: d,
            };
            assert!(symmetric_rate(kappa, lambda0, lambda0, &s).abs() < 1e-15);
        }
    }

    #[test]
    fn schedule_is_mirror_symmetric() {
        let p = ChannelParams::new(1.0, 1.0 / SQRT_2, 5.0, 0.01).unwrap();
        let s = shape_pulses(&p, Drive::Constant).unwrap();
        let (l1, l2) = (s.lambda1(), s.lambda2());
        let n = s.len();
        assert_eq!(n, 1001);
        for i in 0..n {
            assert_eq!(l2[i], l1[n - 1 - i]);
            assert_eq!(s.time(i), -s.time(n - 1 - i));
        }
        assert_eq!(s.time(n / 2), 0.0);
        assert_eq!(l1[n / 2], l2[n / 2]);
        assert!(l1.iter().all(|v| v.is_finite()));
        // the shaped half decays towards zero
        assert!(l1[0] < 0.1 * p.lambda0());
    }

    #[test]
    fn drive_must_start_at_lambda0() {
        let p = ChannelParams::with_defaults(1.0).unwrap();
        let f = |_t: f64| 0.1;
        assert!(matches!(
            shape_pulses(&p, Drive::Function(&f)),
            Err(Error::InvalidParameter {
                name: "lambda1",
                ..
            })
        ));
        assert!(shape_pulses(&p, Drive::Table(&[])).is_err());
    }

    #[test]
    fn table_drive_matches_constant() {
        let p = ChannelParams::new(1.0, 0.5, 4.0, 0.01).unwrap();
        let table = [0.5; 17];
        let a = shape_pulses(&p, Drive::Table(&table)).unwrap();
        let b = shape_pulses(&p, Drive::Constant).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn negative_drive_rejected() {
        let p = ChannelParams::new(1.0, 1.0 / SQRT_2, 10.0, 0.01).unwrap();
        let flip = |t: f64| if t > 0.05 { -0.2 } else { 1.0 / SQRT_2 };
        assert!(matches!(
            shape_pulses(&p, Drive::Function(&flip)),
            Err(Error::InvalidParameter {
                name: "lambda1",
                ..
            })
        ));
    }

    #[test]
    fn default_shape_dips_below_zero() {
        // the (α₁, d_a) pair is underdamped under a constant drive, so the
        // shaped coupling swings slightly negative late in the window
        let p = ChannelParams::with_defaults(1.0).unwrap();
        let s = shape_pulses(&p, Drive::Constant).unwrap();
        let low = s.lambda2().iter().copied().fold(f64::INFINITY, f64::min);
        assert!(low < 0.0 && low > -0.05 * p.lambda0(), "{low}");
    }

    #[test]
    fn singular_partner_coupling() {
        assert_eq!(
            partner_coupling(1.0, 1.0, [0.0, 0.0, 0.0], 0.0).unwrap(),
            0.0
        );
        assert!(matches!(
            partner_coupling(1.0, 1.0, [0.5, 1e-12, -0.1], 0.3),
            Err(Error::Singularity { .. })
        ));
    }

    #[test]
    fn hand_built_schedule_validation() {
        let p = ChannelParams::new(1.0, 1.0, 1.0, 0.01).unwrap();
        let n = 401;
        let ramp: Vec<f64> = (0..n).map(|k| k as f64 / 400.0).collect();
        let mirror: Vec<f64> = ramp.iter().rev().copied().collect();
        assert!(PulseSchedule::from_half_step_samples(
            &p,
            ramp.clone(),
            mirror,
            ChannelState::SOURCE
        )
        .is_ok());
        assert!(PulseSchedule::from_half_step_samples(
            &p,
            ramp.clone(),
            ramp.clone(),
            ChannelState::SOURCE
        )
        .is_err());
        assert!(PulseSchedule::from_half_step_samples(
            &p,
            ramp[1..].to_vec(),
            ramp[1..].to_vec(),
            ChannelState::SOURCE
        )
        .is_err());
        let mut neg = alloc::vec![0.0; n];
        neg[3] = f64::NAN;
        let mirror: Vec<f64> = neg.iter().rev().copied().collect();
        assert!(
            PulseSchedule::from_half_step_samples(&p, neg, mirror, ChannelState::SOURCE).is_err()
        );
    }
}
