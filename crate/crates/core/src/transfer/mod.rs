//! Photon-mediated qutrit transfer between two cascaded cavities.
//!
//! Each polarization channel `j ∈ {l, r}` is an independent three-amplitude
//! system `(α₁, α₂, d_a)` driven by the effective couplings `λ₁(t)`, `λ₂(t)`:
//!
//! ```text
//! α̇₁ =  λ₁ d_a / √2
//! α̇₂ = −λ₂ d_a / √2
//! ḋ_a = (λ₂ α₂ − λ₁ α₁) / √2
//! ```
//!
//! with the symmetric amplitude `d_s` held at zero by the no-click condition.
//! That in turn requires `(λ₁α₁ + λ₂α₂)/√2 + κ d_a = 0`, which fixes the
//! second half of the pulse once the first half is chosen.
//!
//! Stark shifts are assumed compensated (see [`stark_conditions`]) so all
//! amplitudes are real.

mod channel;
mod global;
mod shaping;
mod stark;

pub use channel::{integrate_channel, ChannelTrajectory};
pub use global::{
    assemble_global_state, transfer_qutrit, ChannelAmplitudes, GlobalAmplitudes,
    GlobalTransferState, TransferMap,
};
pub use shaping::{initial_amplitudes, initial_amplitudes_for, shape_pulses, Drive, PulseSchedule};
pub use stark::{stark_conditions, StarkCompensation, StarkInputs};

use crate::error::{Error, Result};

/// Half-window in units of `1/κ` used by [`ChannelParams::with_defaults`].
pub const DEFAULT_KAPPA_T: f64 = 10.0;
/// Integration step in units of `1/κ` used by [`ChannelParams::with_defaults`].
pub const DEFAULT_KAPPA_DT: f64 = 0.005;

/// Largest tolerated drift of `α₁² + α₂² + d_a²` before integration aborts.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Physical and numerical parameters of one polarization channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    kappa: f64,
    lambda0: f64,
    t_max: f64,
    dt: f64,
    half_steps: usize,
}

impl ChannelParams {
    /// Requires `κ > 0`, `λ₀ > 0`, `T > 0`, `0 < dt ≤ T/100`, and `T/dt` an
    /// integer so that the grid on `[−T, T]` contains `t = 0`.
    pub fn new(kappa: f64, lambda0: f64, t_max: f64, dt: f64) -> Result<Self> {
        let positive = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(
                    name,
                    alloc::format!("must be positive and finite, got {v}"),
                ))
            }
        };
        positive("kappa", kappa)?;
        positive("lambda0", lambda0)?;
        positive("t_max", t_max)?;
        positive("dt", dt)?;
        if dt > t_max / 100.0 * (1.0 + 1e-12) {
            return Err(Error::param(
                "dt",
                alloc::format!("{dt} exceeds t_max/100 = {}", t_max / 100.0),
            ));
        }
        let ratio = t_max / dt;
        let half_steps = libm::round(ratio);
        if (ratio - half_steps).abs() > 1e-9 * ratio {
            return Err(Error::param(
                "dt",
                alloc::format!("t_max/dt = {ratio} is not an integer"),
            ));
        }
        Ok(ChannelParams {
            kappa,
            lambda0,
            t_max,
            dt: t_max / half_steps,
            half_steps: half_steps as usize,
        })
    }

    /// `λ₀ = κ/√2`, `T = 10/κ`, `dt = 0.005/κ`.
    pub fn with_defaults(kappa: f64) -> Result<Self> {
        Self::new(
            kappa,
            kappa / core::f64::consts::SQRT_2,
            DEFAULT_KAPPA_T / kappa,
            DEFAULT_KAPPA_DT / kappa,
        )
    }

    /// Same physics, different step.
    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        Self::new(self.kappa, self.lambda0, self.t_max, dt)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of `dt` steps covering `[0, T]`.
    pub fn half_steps(&self) -> usize {
        self.half_steps
    }
}

/// Channel amplitudes `(α₁, α₂, d_a)` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelState {
    pub alpha1: f64,
    pub alpha2: f64,
    pub d_a: f64,
}

impl ChannelState {
    /// Excitation in the source cavity's ion: `α₁ = 1`.
    pub const SOURCE: ChannelState = ChannelState {
        alpha1: 1.0,
        alpha2: 0.0,
        d_a: 0.0,
    };

    pub fn norm_sqr(&self) -> f64 {
        self.alpha1 * self.alpha1 + self.alpha2 * self.alpha2 + self.d_a * self.d_a
    }

    /// Time reversal exchanges the two ion amplitudes.
    pub fn mirrored(&self) -> ChannelState {
        ChannelState {
            alpha1: self.alpha2,
            alpha2: self.alpha1,
            d_a: self.d_a,
        }
    }

    pub(crate) fn to_array(self) -> [f64; 3] {
        [self.alpha1, self.alpha2, self.d_a]
    }

    pub(crate) fn from_array(x: [f64; 3]) -> Self {
        ChannelState {
            alpha1: x[0],
            alpha2: x[1],
            d_a: x[2],
        }
    }
}

/// `ḋ_s = (λ₁α₁ + λ₂α₂)/√2 + κ d_a`; zero on a dark trajectory.
pub fn symmetric_rate(kappa: f64, lambda1: f64, lambda2: f64, s: &ChannelState) -> f64 {
    (lambda1 * s.alpha1 + lambda2 * s.alpha2) / core::f64::consts::SQRT_2 + kappa * s.d_a
}

/// One classical RK4 step of `ẋ = f(t, x)` using caller-supplied stage
/// evaluations at `t`, `t + h/2` (twice) and `t + h`.
pub(crate) fn rk4_step(
    x: [f64; 3],
    h: f64,
    mut f: impl FnMut(usize, [f64; 3]) -> Result<[f64; 3]>,
) -> Result<[f64; 3]> {
    let add =
        |a: [f64; 3], k: [f64; 3], s: f64| [a[0] + s * k[0], a[1] + s * k[1], a[2] + s * k[2]];
    let k1 = f(0, x)?;
    let k2 = f(1, add(x, k1, h / 2.0))?;
    let k3 = f(1, add(x, k2, h / 2.0))?;
    let k4 = f(2, add(x, k3, h))?;
    Ok(core::array::from_fn(|i| {
        x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    }))
}
