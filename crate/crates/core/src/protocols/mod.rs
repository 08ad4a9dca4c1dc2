//! Applications of the transfer scheme and the qudit gate set.
//!
//! * [`distribute_entanglement`]: move one half of an entangled qutrit pair
//!   into a distant cavity.
//! * [`generate_cyclic`], [`generate_symmetric`], [`generate_antisymmetric`]:
//!   three-qutrit states with prescribed behaviour under wire permutations.
//! * [`qss_share`] / [`qss_reconstruct`]: four-qutrit secret sharing with
//!   correction exponents derived by brute force in [`derive_corrections`].

mod distribution;
mod sharing;
mod symmetric;

pub use distribution::{distribute_entanglement, distribute_with_map, source_pair};
pub use sharing::{
    audit, derive_corrections, identity_check, printed_exponents, qss_reconstruct, qss_share,
    skip_correction_branch, BranchAudit, CorrectionTable, IdentityCheck, Party, QssAudit,
    QssRecord, DEALER, PARTY_OF_WIRE, QUTRIT_0, QUTRIT_1, QUTRIT_2,
};
pub use symmetric::{
    generate_antisymmetric, generate_cyclic, generate_symmetric, permutation_overlaps,
    prepare_subspace_bell, BellSign, PermutationOverlap, PERMUTATIONS_3,
};
