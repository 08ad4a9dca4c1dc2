//! Qutrit state transfer between cascaded cavities, plus the gate-level
//! protocols built on top of it.
//!
//! The crate is `no_std` and only needs `alloc`. It is split into four layers:
//!
//! * [`qudit`]: exact pure-state registers of mixed-dimension wires, unitary
//!   application on selected wires, projective measurement and fidelity.
//! * [`gates`]: named constructors for the qudit Fourier transform, the three
//!   modular XOR variants, clock/shift operators, embedded qubit gates and the
//!   generalized Bell basis.
//! * [`transfer`]: the reduced amplitude dynamics of one polarization channel
//!   (Stark compensation, pulse shaping under the symmetric-pulse condition,
//!   fixed-step RK4 integration) and the resulting qutrit transfer map.
//! * [`protocols`]: entanglement distribution, cyclic / symmetric /
//!   antisymmetric three-qutrit states and four-qutrit secret sharing.
//!
//! Wire ordering is big-endian everywhere: wire 0 is the leftmost ket and the
//! most significant digit of a basis index.

#![no_std]
// `!(x <= tol)` is used on purpose so that NaN fails tolerance checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod gates;
pub mod protocols;
pub mod qudit;
mod rng;
pub mod transfer;

pub use error::{Error, Result};
pub use gates::{BellLabel, GateProgram};
pub use qudit::{GateMatrix, MeasurementResult, StateVector};
pub use rng::random_qutrit;

pub use num_complex::Complex64;
