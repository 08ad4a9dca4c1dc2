//! Named qudit gates and the generalized Bell basis.
//!
//! Two-wire gates follow one convention: the first wire is the control and
//! is the more significant index into the `D² × D²` matrix.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qudit::{GateMatrix, StateVector};

fn root_of_unity(d: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * ((k % d) as f64) / d as f64)
}

fn need_qudit(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::param("D", format!("dimension {d} < 2")));
    }
    Ok(())
}

/// Discrete Fourier transform `|j⟩ ↦ Σ_l ω^{lj} |l⟩ / √D`.
pub fn fourier(d: usize) -> Result<GateMatrix> {
    if d == 0 {
        return Err(Error::param("D", "dimension must be at least 1"));
    }
    let scale = 1.0 / libm::sqrt(d as f64);
    GateMatrix::from_fn(d, |l, j| root_of_unity(d, l * j) * scale)
}

/// Controlled permutation `|i⟩|j⟩ ↦ |i⟩|f(i, j)⟩`.
fn controlled_permutation(d: usize, f: impl Fn(usize, usize) -> usize) -> Result<GateMatrix> {
    need_qudit(d)?;
    GateMatrix::permutation(d * d, |idx| {
        let (i, j) = (idx / d, idx % d);
        i * d + f(i, j)
    })
}

/// Left modular difference `|i⟩|j⟩ ↦ |i⟩|i ⊖ j⟩`; self-inverse.
pub fn xor_lmd(d: usize) -> Result<GateMatrix> {
    controlled_permutation(d, |i, j| (i + d - j) % d)
}

/// Modular addition `|i⟩|j⟩ ↦ |i⟩|i ⊕ j⟩`.
pub fn xor_ma(d: usize) -> Result<GateMatrix> {
    controlled_permutation(d, |i, j| (i + j) % d)
}

/// Right modular difference `|i⟩|j⟩ ↦ |i⟩|j ⊖ i⟩`.
pub fn xor_rmd(d: usize) -> Result<GateMatrix> {
    controlled_permutation(d, |i, j| (j + d - i) % d)
}

/// Cyclic shift `X|n⟩ = |n+1 mod D⟩`.
pub fn pauli_x(d: usize) -> Result<GateMatrix> {
    need_qudit(d)?;
    GateMatrix::permutation(d, |n| (n + 1) % d)
}

/// Clock `Z|n⟩ = ω(n)|n⟩` with `ω(n) = e^{2πin/D}`.
pub fn pauli_z(d: usize) -> Result<GateMatrix> {
    need_qudit(d)?;
    GateMatrix::from_fn(d, |r, c| {
        if r == c {
            root_of_unity(d, r)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `X^a Z^b` on a single qudit.
pub fn weyl(d: usize, a: usize, b: usize) -> Result<GateMatrix> {
    pauli_x(d)?
        .pow((a % d) as u32)
        .matmul(&pauli_z(d)?.pow((b % d) as u32))
}

/// Acts as the 2×2 gate `g` on `span{|level_a⟩, |level_b⟩}` and as the
/// identity on every other level. `level_a` plays the qubit's `|0⟩`.
pub fn embedded_qubit_gate(
    d: usize,
    level_a: usize,
    level_b: usize,
    g: &GateMatrix,
) -> Result<GateMatrix> {
    if g.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected 2x2 gate, got {}x{}",
            g.dim(),
            g.dim()
        )));
    }
    if level_a == level_b {
        return Err(Error::param("level_b", "levels must differ"));
    }
    if level_a >= d || level_b >= d {
        return Err(Error::IndexOutOfRange {
            index: level_a.max(level_b),
            size: d,
        });
    }
    let slot = |n: usize| {
        if n == level_a {
            Some(0)
        } else if n == level_b {
            Some(1)
        } else {
            None
        }
    };
    GateMatrix::from_fn(d, |r, c| match (slot(r), slot(c)) {
        (Some(i), Some(j)) => g.get(i, j),
        (None, None) if r == c => Complex64::new(1.0, 0.0),
        _ => Complex64::new(0.0, 0.0),
    })
}

pub fn hadamard() -> GateMatrix {
    fourier(2).expect("D=2 is valid")
}

/// `|k⟩|t⟩ ↦ |k⟩ (target|t⟩)` when `k == control_level`, identity otherwise.
pub fn controlled_on_level(
    d: usize,
    control_level: usize,
    target: &GateMatrix,
) -> Result<GateMatrix> {
    if target.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "target gate {}x{} for D={d}",
            target.dim(),
            target.dim()
        )));
    }
    if control_level >= d {
        return Err(Error::IndexOutOfRange {
            index: control_level,
            size: d,
        });
    }
    GateMatrix::from_fn(d * d, |r, c| {
        let (kr, tr, kc, tc) = (r / d, r % d, c / d, c % d);
        if kr != kc {
            Complex64::new(0.0, 0.0)
        } else if kr == control_level {
            target.get(tr, tc)
        } else if tr == tc {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// One gate placed on a list of wires.
#[derive(Debug, Clone)]
pub struct GateStep {
    pub wires: Vec<usize>,
    pub gate: GateMatrix,
}

/// Ordered list of gates, applied first to last.
#[derive(Debug, Clone, Default)]
pub struct GateProgram {
    steps: Vec<GateStep>,
}

impl GateProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn then(mut self, wires: &[usize], gate: GateMatrix) -> Self {
        self.steps.push(GateStep {
            wires: wires.to_vec(),
            gate,
        });
        self
    }

    pub fn steps(&self) -> &[GateStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.steps.iter().try_fold(state.clone(), |s, step| {
            s.apply_unitary(&step.wires, &step.gate)
        })
    }

    /// Reversed program of adjoints.
    pub fn inverse(&self) -> GateProgram {
        GateProgram {
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| GateStep {
                    wires: s.wires.clone(),
                    gate: s.gate.adjoint(),
                })
                .collect(),
        }
    }
}

/// `U = ∏_{k≥2} XOR_{1k} F_1`: Fourier on wire 0, then `xor_lmd` from wire 0
/// onto every other wire. The XOR gates commute with each other.
pub fn u_symmetrizer(d: usize, n: usize) -> Result<GateProgram> {
    if n < 2 {
        return Err(Error::param("N", format!("need at least 2 wires, got {n}")));
    }
    need_qudit(d)?;
    let xor = xor_lmd(d)?;
    Ok(
        (1..n).fold(GateProgram::new().then(&[0], fourier(d)?), |p, k| {
            p.then(&[0, k], xor.clone())
        }),
    )
}

/// Index pair `(m, μ)` of a generalized Bell state, reduced mod `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellLabel {
    pub m: usize,
    pub mu: usize,
}

impl BellLabel {
    pub fn new(d: usize, m: usize, mu: usize) -> Self {
        BellLabel {
            m: m % d,
            mu: mu % d,
        }
    }

    /// All `D²` labels in ascending `(m, μ)` order.
    pub fn all(d: usize) -> impl Iterator<Item = BellLabel> {
        (0..d * d).map(move |i| BellLabel {
            m: i / d,
            mu: i % d,
        })
    }

    fn index(self, d: usize) -> usize {
        self.m * d + self.mu
    }
}

/// Preparation circuit of the Bell basis on a wire pair: Fourier on the
/// first wire, then `xor_lmd` controlled by it.
pub fn bell_circuit(d: usize, first: usize, second: usize) -> Result<GateProgram> {
    Ok(GateProgram::new()
        .then(&[first], fourier(d)?)
        .then(&[first, second], xor_lmd(d)?))
}

/// `|Φ_{m,μ}⟩ = XOR·(F ⊗ I)|m⟩|μ⟩ = Σ_j ω^{jm} |j⟩|j ⊖ μ⟩ / √D`.
pub fn bell_state(d: usize, label: BellLabel) -> Result<StateVector> {
    need_qudit(d)?;
    if label.m >= d || label.mu >= d {
        return Err(Error::IndexOutOfRange {
            index: label.m.max(label.mu),
            size: d,
        });
    }
    bell_circuit(d, 0, 1)?.apply(&StateVector::basis_digits(&[d, d], &[label.m, label.mu])?)
}

#[derive(Debug, Clone)]
pub struct BellOutcome {
    pub label: BellLabel,
    pub probability: f64,
    /// Collapsed state; the measured pair is left in `|Φ_{m,μ}⟩`.
    pub post_state: StateVector,
}

/// Generalized Bell measurement of `pair`: undo the preparation circuit,
/// measure both wires computationally, then redo it.
pub fn bell_measurement(
    state: &StateVector,
    pair: [usize; 2],
    forced: Option<BellLabel>,
    seed: Option<u64>,
) -> Result<BellOutcome> {
    let dims = state.dims();
    let d = *dims
        .get(pair[0])
        .ok_or_else(|| Error::InvalidWires(format!("wire {} out of range", pair[0])))?;
    if dims.get(pair[1]) != Some(&d) {
        return Err(Error::DimensionMismatch(format!(
            "Bell pair {pair:?} has wire dimensions {:?}",
            pair.iter().map(|&w| dims.get(w)).collect::<Vec<_>>()
        )));
    }
    let circuit = bell_circuit(d, pair[0], pair[1])?;
    let rotated = circuit.inverse().apply(state)?;
    let forced_index = forced.map(|l| BellLabel::new(d, l.m, l.mu).index(d));
    let r = rotated.measure(&pair, forced_index, seed)?;
    Ok(BellOutcome {
        label: BellLabel {
            m: r.outcome / d,
            mu: r.outcome % d,
        },
        probability: r.probability,
        post_state: circuit.apply(&r.post_state)?,
    })
}

/// Which side of `from` a target-wire local unitary multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalSide {
    /// `to = (I ⊗ L) · from`
    After,
    /// `to = from · (I ⊗ L)`
    Before,
}

/// A local relation `L = X^a F^b` on the target wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalRelation {
    pub shift: usize,
    pub fourier_power: usize,
    pub side: LocalSide,
}

/// Searches `L = X^a F^b` (`a < D`, `b < 4`) acting on the target wire such
/// that `to` equals `from` composed with `L` on either side.
pub fn find_target_local_relation(
    d: usize,
    from: &GateMatrix,
    to: &GateMatrix,
    tol: f64,
) -> Result<Option<LocalRelation>> {
    let x = pauli_x(d)?;
    let f = fourier(d)?;
    let id = GateMatrix::identity(d);
    for side in [LocalSide::After, LocalSide::Before] {
        for fourier_power in 0..4 {
            for shift in 0..d {
                let local = x.pow(shift as u32).matmul(&f.pow(fourier_power as u32))?;
                let lifted = id.kron(&local);
                let candidate = match side {
                    LocalSide::After => lifted.matmul(from)?,
                    LocalSide::Before => from.matmul(&lifted)?,
                };
                if candidate.max_abs_diff(to) <= tol {
                    return Ok(Some(LocalRelation {
                        shift,
                        fourier_power,
                        side,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Gram matrix `G_{ij} = ⟨b_i|b_j⟩` of a list of states.
pub fn gram_matrix(states: &[StateVector]) -> Result<Vec<Complex64>> {
    let n = states.len();
    let mut g = vec![Complex64::new(0.0, 0.0); n * n];
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            g[i * n + j] = a.inner(b)?;
        }
    }
    Ok(g)
}
