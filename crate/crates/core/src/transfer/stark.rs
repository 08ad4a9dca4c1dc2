use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Couplings entering the effective Raman Hamiltonian of one transition.
#[derive(Debug, Clone, PartialEq)]
pub struct StarkInputs {
    /// Cavity coupling `g` (rad/s); only `|g|` matters.
    pub g: f64,
    /// Detuning `Δ` (rad/s), non-zero.
    pub delta: f64,
    /// Time of the first sample.
    pub t0: f64,
    /// Uniform sample spacing, positive.
    pub dt: f64,
    /// `|Ω(t0 + k·dt)|` (rad/s).
    pub omega: Vec<f64>,
}

/// Detuning and laser phase that cancel the dynamical Stark shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct StarkCompensation {
    /// Cavity detuning `δ = |g|²/Δ`.
    pub delta_shift: f64,
    /// `φ(t) = ∫_{t0}^{t} |Ω|²/Δ`, sampled on the input grid, `φ(t0) = 0`.
    pub phi: Vec<f64>,
}

/// Cumulative trapezoid of `|Ω|²/Δ` plus the static cavity shift.
pub fn stark_conditions(inputs: &StarkInputs) -> Result<StarkCompensation> {
    if inputs.delta == 0.0 || !inputs.delta.is_finite() {
        return Err(Error::param(
            "delta",
            "detuning must be non-zero and finite",
        ));
    }
    if !(inputs.dt > 0.0 && inputs.dt.is_finite()) {
        return Err(Error::param("dt", "grid step must be positive"));
    }
    let rate = |w: f64| w * w / inputs.delta;
    let mut phi = Vec::with_capacity(inputs.omega.len());
    let mut acc = 0.0;
    let mut prev: Option<f64> = None;
    for &w in &inputs.omega {
        if let Some(p) = prev {
            acc += 0.5 * inputs.dt * (rate(p) + rate(w));
        }
        phi.push(acc);
        prev = Some(w);
    }
    Ok(StarkCompensation {
        delta_shift: inputs.g * inputs.g / inputs.delta,
        phi,
    })
}
