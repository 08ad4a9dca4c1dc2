use alloc::vec;

use num_complex::Complex64;

use crate::error::Result;
use crate::qudit::{index_of, StateVector};
use crate::transfer::TransferMap;

/// `(|0⟩|2⟩ + |1⟩|0⟩ + |2⟩|1⟩)/√3` on wires (a, b).
pub fn source_pair() -> StateVector {
    let s = 1.0 / libm::sqrt(3.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 9];
    for (a, b) in [(0, 2), (1, 0), (2, 1)] {
        amps[index_of(&[3, 3], &[a, b]).expect("in range")] = Complex64::new(s, 0.0);
    }
    StateVector::from_amplitudes(vec![3, 3], amps).expect("normalized")
}

/// Transfers wire b of [`source_pair`] to a remote ion c over channels with
/// final receiving amplitudes `channel_alpha_l` and `channel_alpha_r`.
///
/// Returns the renormalized (a, c) state and its fidelity, computed before
/// renormalization, against the same pair now held on (a, c).
pub fn distribute_entanglement(
    channel_alpha_l: f64,
    channel_alpha_r: f64,
) -> Result<(StateVector, f64)> {
    distribute_with_map(
        &source_pair(),
        TransferMap::new(channel_alpha_l, channel_alpha_r)?,
    )
}

/// Sends wire 1 of any two-qutrit state through `map`; fidelity is taken
/// against the input.
pub fn distribute_with_map(pair: &StateVector, map: TransferMap) -> Result<(StateVector, f64)> {
    let (raw, out) = map.apply(pair, 1)?;
    let overlap: Complex64 = pair
        .amps()
        .iter()
        .zip(&raw)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok((out, overlap.norm_sqr()))
}
