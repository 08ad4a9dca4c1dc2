use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{
    controlled_on_level, embedded_qubit_gate, hadamard, pauli_x, pauli_z, u_symmetrizer,
};
use crate::qudit::StateVector;

/// The six wire orders of three qutrits with their permutation signs.
pub const PERMUTATIONS_3: [([usize; 3], i8); 6] = [
    ([0, 1, 2], 1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([1, 0, 2], -1),
    ([0, 2, 1], -1),
    ([2, 1, 0], -1),
];

/// Applies the three-qutrit symmetrizer to `|root⟩`.
///
/// Only the roots `(0,1,2)` and `(0,2,1)` are accepted; they give the two
/// cyclically invariant states `Ψ₀₁₂` and `Ψ₀₂₁`.
pub fn generate_cyclic(root: [usize; 3]) -> Result<StateVector> {
    if root != [0, 1, 2] && root != [0, 2, 1] {
        return Err(Error::param(
            "root",
            format!("{root:?} is neither (0,1,2) nor (0,2,1)"),
        ));
    }
    u_symmetrizer(3, 3)?.apply(&StateVector::basis_digits(&[3, 3, 3], &root)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellSign {
    Plus,
    Minus,
}

/// `(|1⟩|2⟩ ± |2⟩|1⟩)/√2` on two qutrits, built inside the `{|1⟩, |2⟩}`
/// subspace: Hadamard on the first wire, an optional phase flip, then a
/// flip of the second wire conditioned on the first being `|1⟩`.
pub fn prepare_subspace_bell(sign: BellSign) -> Result<StateVector> {
    let h = embedded_qubit_gate(3, 1, 2, &hadamard())?;
    let flip = embedded_qubit_gate(3, 1, 2, &pauli_x(2)?)?;
    let mut s = StateVector::basis_digits(&[3, 3], &[1, 1])?.apply_unitary(&[0], &h)?;
    if sign == BellSign::Minus {
        s = s.apply_unitary(&[0], &embedded_qubit_gate(3, 1, 2, &pauli_z(2)?)?)?;
    }
    s.apply_unitary(&[0, 1], &controlled_on_level(3, 1, &flip)?)
}

fn fourier_xor_stage(pair: StateVector) -> Result<StateVector> {
    u_symmetrizer(3, 3)?.apply(&StateVector::basis(&[3], 0)?.tensor(&pair))
}

/// `|S⟩₀₁₂`: equal superposition of all six permutation kets of `|012⟩`.
pub fn generate_symmetric() -> Result<StateVector> {
    fourier_xor_stage(prepare_subspace_bell(BellSign::Plus)?)
}

/// Completely antisymmetric three-qutrit state. Comes out as `Ψ₀₁₂ − Ψ₀₂₁`,
/// the negative of the usual `|A⟩₀₂₁` sign convention.
pub fn generate_antisymmetric() -> Result<StateVector> {
    fourier_xor_stage(prepare_subspace_bell(BellSign::Minus)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermutationOverlap {
    pub order: [usize; 3],
    pub sign: i8,
    /// `⟨ψ|P|ψ⟩`
    pub overlap: Complex64,
}

/// `⟨ψ|P|ψ⟩` for every wire permutation `P` of a three-wire state.
pub fn permutation_overlaps(state: &StateVector) -> Result<Vec<PermutationOverlap>> {
    PERMUTATIONS_3
        .iter()
        .map(|&(order, sign)| {
            Ok(PermutationOverlap {
                order,
                sign,
                overlap: state.inner(&state.permute_wires(&order)?)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::index_of;

    fn from_terms(terms: &[([usize; 3], f64)]) -> StateVector {
        let mut amps = alloc::vec![Complex64::new(0.0, 0.0); 27];
        for (k, a) in terms {
            amps[index_of(&[3, 3, 3], k).unwrap()] = Complex64::new(*a, 0.0);
        }
        StateVector::normalized(alloc::vec![3, 3, 3], amps).unwrap()
    }

    fn printed_symmetric() -> StateVector {
        from_terms(&[
            ([0, 1, 2], 1.0),
            ([1, 2, 0], 1.0),
            ([2, 0, 1], 1.0),
            ([0, 2, 1], 1.0),
            ([1, 0, 2], 1.0),
            ([2, 1, 0], 1.0),
        ])
    }

    fn printed_antisymmetric() -> StateVector {
        from_terms(&[
            ([0, 1, 2], 1.0),
            ([1, 2, 0], 1.0),
            ([2, 0, 1], 1.0),
            ([0, 2, 1], -1.0),
            ([1, 0, 2], -1.0),
            ([2, 1, 0], -1.0),
        ])
    }

    #[test]
    fn cyclic_roots() {
        let a = generate_cyclic([0, 1, 2]).unwrap();
        let expected = from_terms(&[([0, 2, 1], 1.0), ([1, 0, 2], 1.0), ([2, 1, 0], 1.0)]);
        assert!(a.max_abs_diff(&expected).unwrap() < 1e-12);
        let b = generate_cyclic([0, 2, 1]).unwrap();
        let expected = from_terms(&[([0, 1, 2], 1.0), ([1, 2, 0], 1.0), ([2, 0, 1], 1.0)]);
        assert!(b.max_abs_diff(&expected).unwrap() < 1e-12);
        for s in [a, b] {
            let rot = s.permute_wires(&[1, 2, 0]).unwrap();
            assert!((s.fidelity(&rot).unwrap() - 1.0).abs() < 1e-10);
            // but not invariant under a transposition
            let swap = s.permute_wires(&[1, 0, 2]).unwrap();
            assert!(s.fidelity(&swap).unwrap() < 1e-10);
        }
        assert!(generate_cyclic([1, 0, 2]).is_err());
        assert!(generate_cyclic([0, 0, 0]).is_err());
    }

    #[test]
    fn subspace_bell_pairs() {
        let r = 1.0 / 2f64.sqrt();
        let plus = prepare_subspace_bell(BellSign::Plus).unwrap();
        let minus = prepare_subspace_bell(BellSign::Minus).unwrap();
        assert!((plus.amplitude(&[1, 2]).unwrap().re - r).abs() < 1e-15);
        assert!((plus.amplitude(&[2, 1]).unwrap().re - r).abs() < 1e-15);
        assert!((minus.amplitude(&[1, 2]).unwrap().re - r).abs() < 1e-15);
        assert!((minus.amplitude(&[2, 1]).unwrap().re + r).abs() < 1e-15);
        assert!(plus.inner(&minus).unwrap().norm() < 1e-15);
        assert!((plus.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_state_matches_display() {
        let s = generate_symmetric().unwrap();
        assert!((s.fidelity(&printed_symmetric()).unwrap() - 1.0).abs() < 1e-10);
        let sum = StateVector::normalized(
            alloc::vec![3, 3, 3],
            generate_cyclic([0, 1, 2])
                .unwrap()
                .amps()
                .iter()
                .zip(generate_cyclic([0, 2, 1]).unwrap().amps())
                .map(|(a, b)| a + b)
                .collect(),
        )
        .unwrap();
        assert!((s.fidelity(&sum).unwrap() - 1.0).abs() < 1e-10);
        for p in permutation_overlaps(&s).unwrap() {
            assert!(
                (p.overlap - Complex64::new(1.0, 0.0)).norm() < 1e-10,
                "{p:?}"
            );
        }
    }

    #[test]
    fn antisymmetric_state_matches_display_up_to_sign() {
        let a = generate_antisymmetric().unwrap();
        let printed = printed_antisymmetric();
        assert!((a.fidelity(&printed).unwrap() - 1.0).abs() < 1e-10);
        assert!((a.inner(&printed).unwrap() + Complex64::new(1.0, 0.0)).norm() < 1e-10);
        for p in permutation_overlaps(&a).unwrap() {
            assert!(
                (p.overlap - Complex64::new(p.sign as f64, 0.0)).norm() < 1e-10,
                "{p:?}"
            );
        }
        let swapped = a.permute_wires(&[0, 2, 1]).unwrap();
        assert!((a.fidelity(&swapped).unwrap() - 1.0).abs() < 1e-10);
        assert!(a.inner(&generate_symmetric().unwrap()).unwrap().norm() < 1e-12);
    }
}
