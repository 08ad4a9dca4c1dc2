use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::ChannelTrajectory;
use crate::error::{Error, Result};
use crate::qudit::StateVector;

/// Net effect of a completed transfer on a qutrit: `|0⟩` is untouched, `|1⟩`
/// and `|2⟩` pick up the final receiving amplitude of their channel.
/// Phases are taken as fully compensated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMap {
    /// `α_{l,2}(T)`
    pub left: f64,
    /// `α_{r,2}(T)`
    pub right: f64,
}

impl TransferMap {
    pub const IDEAL: TransferMap = TransferMap {
        left: 1.0,
        right: 1.0,
    };

    pub fn new(left: f64, right: f64) -> Result<Self> {
        for (name, v) in [("channel_alpha_l", left), ("channel_alpha_r", right)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::param(name, alloc::format!("{v} outside [0, 1]")));
            }
        }
        Ok(TransferMap { left, right })
    }

    pub fn from_trajectories(left: &ChannelTrajectory, right: &ChannelTrajectory) -> Self {
        TransferMap {
            left: left.final_state().alpha2,
            right: right.final_state().alpha2,
        }
    }

    /// `diag(1, α_l, α_r)`, row-major.
    pub fn operator(&self) -> [Complex64; 9] {
        let z = Complex64::new(0.0, 0.0);
        [
            Complex64::new(1.0, 0.0),
            z,
            z,
            z,
            Complex64::new(self.left, 0.0),
            z,
            z,
            z,
            Complex64::new(self.right, 0.0),
        ]
    }

    /// Applies the map to one qutrit wire of `state`. Returns the raw image
    /// (for fidelity bookkeeping) and the renormalized state.
    pub fn apply(&self, state: &StateVector, wire: usize) -> Result<(Vec<Complex64>, StateVector)> {
        let raw = state.apply_operator(&[wire], 3, &self.operator())?;
        let out = StateVector::normalized(state.dims().to_vec(), raw.clone())?;
        Ok((raw, out))
    }
}

/// Sends `c0|0⟩ + c1|1⟩ + c2|2⟩` through the two channels.
///
/// Returns the renormalized received qutrit and
/// `F = |c0 c0* + c1 c1* α_{l,2}(T) + c2 c2* α_{r,2}(T)|²`.
pub fn transfer_qutrit(
    input: &StateVector,
    left: &ChannelTrajectory,
    right: &ChannelTrajectory,
) -> Result<(StateVector, f64)> {
    transfer_with_map(input, TransferMap::from_trajectories(left, right))
}

pub(crate) fn transfer_with_map(
    input: &StateVector,
    map: TransferMap,
) -> Result<(StateVector, f64)> {
    if input.dims() != [3] {
        return Err(Error::DimensionMismatch(alloc::format!(
            "expected a single qutrit, got dims {:?}",
            input.dims()
        )));
    }
    let (raw, out) = map.apply(input, 0)?;
    let overlap: Complex64 = input
        .amps()
        .iter()
        .zip(&raw)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok((out, overlap.norm_sqr()))
}

/// Amplitude `a` of the uncoupled `|0⟩` branch plus both channel trajectories.
#[derive(Debug, Clone)]
pub struct GlobalTransferState {
    pub a: Complex64,
    pub left: ChannelTrajectory,
    pub right: ChannelTrajectory,
}

impl GlobalTransferState {
    /// `a ≡ 1`, since `ȧ = 0` and the transfer starts in the source state.
    pub fn new(left: ChannelTrajectory, right: ChannelTrajectory) -> Self {
        GlobalTransferState {
            a: Complex64::new(1.0, 0.0),
            left,
            right,
        }
    }
}

/// Ion and cavity-mode amplitudes of one channel, already weighted by `c_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelAmplitudes {
    /// excitation in the sending ion
    pub b1: Complex64,
    /// excitation in the receiving ion
    pub b2: Complex64,
    /// photon in the sending cavity
    pub d1: Complex64,
    /// photon in the receiving cavity
    pub d2: Complex64,
}

/// The nine amplitudes of the global transfer ansatz at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalAmplitudes {
    pub ground: Complex64,
    pub left: ChannelAmplitudes,
    pub right: ChannelAmplitudes,
}

impl GlobalAmplitudes {
    /// `[c₀a, c_l b_{l,1}, c_l b_{l,2}, c_l d_{l,1}, c_l d_{l,2}, (same for r)]`.
    pub fn to_array(&self) -> [Complex64; 9] {
        let (l, r) = (self.left, self.right);
        [self.ground, l.b1, l.b2, l.d1, l.d2, r.b1, r.b2, r.d1, r.d2]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.to_array().iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Expands the global state at grid time `t` for qutrit amplitudes `c`.
/// With `d_s = 0`, `d₁ = −d_a/√2` and `d₂ = +d_a/√2`.
pub fn assemble_global_state(
    c: [Complex64; 3],
    g: &GlobalTransferState,
    t: f64,
) -> Result<GlobalAmplitudes> {
    let channel = |cj: Complex64, traj: &ChannelTrajectory| -> Result<ChannelAmplitudes> {
        let i = traj.index_of_time(t).ok_or(Error::OffGrid { t })?;
        let s = traj.state(i);
        let d = s.d_a * FRAC_1_SQRT_2;
        Ok(ChannelAmplitudes {
            b1: cj * s.alpha1,
            b2: cj * s.alpha2,
            d1: cj * -d,
            d2: cj * d,
        })
    };
    Ok(GlobalAmplitudes {
        ground: c[0] * g.a,
        left: channel(c[1], &g.left)?,
        right: channel(c[2], &g.right)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::{integrate_channel, shape_pulses, ChannelParams, Drive, PulseSchedule};
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn channels() -> (ChannelTrajectory, ChannelTrajectory) {
        let p = ChannelParams::with_defaults(1.0).unwrap();
        let s = shape_pulses(&p, Drive::Constant).unwrap();
        let t = integrate_channel(&s, &p).unwrap();
        (t.clone(), t)
    }

    #[test]
    fn ground_state_always_transfers() {
        let p = ChannelParams::new(1.0, 0.5, 1.0, 0.01).unwrap();
        let idle = integrate_channel(&PulseSchedule::idle(&p), &p).unwrap();
        let zero = StateVector::basis(&[3], 0).unwrap();
        let (out, f) = transfer_qutrit(&zero, &idle, &idle).unwrap();
        assert_eq!(f, 1.0);
        assert_eq!(out, zero);
    }

    #[test]
    fn ideal_map_is_identity() {
        let s = 1.0 / 3f64.sqrt();
        let psi = StateVector::qutrit(c(s), Complex64::new(0.0, s), c(-s)).unwrap();
        let (out, f) = transfer_with_map(&psi, TransferMap::IDEAL).unwrap();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-15);
        assert_eq!(out, psi);
    }

    #[test]
    fn uniform_input_fidelity_formula() {
        let s = 1.0 / 3f64.sqrt();
        let psi = StateVector::qutrit(c(s), c(s), c(s)).unwrap();
        let (_, f) = transfer_with_map(&psi, TransferMap::new(0.999, 0.999).unwrap()).unwrap();
        let expected = ((1.0 + 0.999 + 0.999) / 3.0f64).powi(2);
        assert_abs_diff_eq!(f, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(f, 0.998667, epsilon = 1e-6);
    }

    #[test]
    fn fidelity_monotone_in_channel_quality() {
        let psi = StateVector::qutrit(c(0.5), c(0.5), Complex64::new(0.0, 0.5f64.sqrt())).unwrap();
        let mut last = 0.0;
        for k in 0..=20 {
            let a = k as f64 / 20.0;
            let (_, f) = transfer_with_map(&psi, TransferMap::new(a, 0.9).unwrap()).unwrap();
            assert!(f >= last);
            last = f;
        }
        assert!(TransferMap::new(1.1, 0.0).is_err());
    }

    #[test]
    fn global_state_start_and_norm() {
        let (l, r) = channels();
        let g = GlobalTransferState::new(l, r);
        let s = 1.0 / 3f64.sqrt();
        let coeffs = [c(s), c(s), Complex64::new(0.0, s)];
        let t0 = g.left.times[0];
        let start = assemble_global_state(coeffs, &g, t0).unwrap();
        assert_abs_diff_eq!(start.ground.re, s);
        assert!(start.left.b1.norm() > 0.99 * s);
        assert!(start.left.b2.norm() < 1e-2 && start.left.d1.norm() < 1e-2);
        for &t in g.left.times.iter().step_by(97) {
            let amps = assemble_global_state(coeffs, &g, t).unwrap();
            assert_abs_diff_eq!(amps.norm_sqr(), 1.0, epsilon = 1e-8);
            assert_eq!(amps.left.d1 + amps.left.d2, Complex64::new(0.0, 0.0));
            assert_eq!(amps.right.d1 + amps.right.d2, Complex64::new(0.0, 0.0));
        }
        assert!(matches!(
            assemble_global_state(coeffs, &g, 0.0012),
            Err(Error::OffGrid { .. })
        ));
    }

    #[test]
    fn idle_start_has_only_source_amplitudes() {
        let p = ChannelParams::new(1.0, 0.5, 1.0, 0.01).unwrap();
        let idle = integrate_channel(&PulseSchedule::idle(&p), &p).unwrap();
        let g = GlobalTransferState::new(idle.clone(), idle);
        let amps = assemble_global_state([c(0.6), c(0.0), c(0.8)], &g, -1.0).unwrap();
        let arr = amps.to_array();
        let nonzero: Vec<usize> = (0..9)
            .filter(|&i| arr[i] != Complex64::new(0.0, 0.0))
            .collect();
        assert_eq!(nonzero, alloc::vec![0, 5]);
        assert!(arr.iter().all(|z| z.im == 0.0));
    }
}
