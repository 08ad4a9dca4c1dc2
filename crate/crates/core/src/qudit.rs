//! Exact pure-state registers over wires of arbitrary dimension.
//!
//! A [`StateVector`] stores `∏ dims` complex amplitudes with wire 0 as the most
//! significant digit, so `|1⟩|0⟩|2⟩` over three qutrits is basis index
//! `1·9 + 0·3 + 2 = 11`. All operations return new values.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::Sampler;

/// Tolerance on `| ‖ψ‖² - 1 |` accepted when a state is constructed.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Tolerance on the entries of `U†U - I` accepted for a [`GateMatrix`].
pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// Pure state of a register of qudit wires.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateVector{:?} [", self.dims)?;
        let mut first = true;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() < 1e-24 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|", a.re, a.im)?;
            for d in self.digits(i) {
                write!(f, "{d}")?;
            }
            write!(f, "⟩")?;
        }
        write!(f, "]")
    }
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::InvalidDimensions(
            "register needs at least one wire".into(),
        ));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDimensions(format!("wire dimension {d} < 2")));
    }
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::InvalidDimensions("register size overflows usize".into()))
}

impl StateVector {
    /// Computational basis state `|index⟩` over `dims`.
    pub fn basis(dims: &[usize], index: usize) -> Result<Self> {
        let size = check_dims(dims)?;
        if index >= size {
            return Err(Error::IndexOutOfRange { index, size });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); size];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            dims: dims.to_vec(),
            amps,
        })
    }

    /// Basis state from one digit per wire.
    pub fn basis_digits(dims: &[usize], digits: &[usize]) -> Result<Self> {
        let index = index_of(dims, digits)?;
        Self::basis(dims, index)
    }

    /// Single qutrit `c0|0⟩ + c1|1⟩ + c2|2⟩`.
    pub fn qutrit(c0: Complex64, c1: Complex64, c2: Complex64) -> Result<Self> {
        Self::from_amplitudes(vec![3], vec![c0, c1, c2])
    }

    /// Wraps an amplitude array; fails unless it has the right length and unit norm.
    pub fn from_amplitudes(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        let size = check_dims(&dims)?;
        if amps.len() != size {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a register of size {size}",
                amps.len()
            )));
        }
        let norm_sqr = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if !((norm_sqr - 1.0).abs() <= NORM_TOLERANCE) {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(StateVector { dims, amps })
    }

    /// Divides by the norm first. Fails on a zero (or non-finite) vector.
    pub fn normalized(dims: Vec<usize>, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm_sqr = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if !(norm_sqr > 0.0 && norm_sqr.is_finite()) {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let norm = libm::sqrt(norm_sqr);
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_wires(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Amplitude of the basis ket with the given per-wire digits.
    pub fn amplitude(&self, digits: &[usize]) -> Result<Complex64> {
        Ok(self.amps[index_of(&self.dims, digits)?])
    }

    /// Big-endian digit expansion of a basis index.
    pub fn digits(&self, index: usize) -> Vec<usize> {
        digits_of(&self.dims, index)
    }

    /// Kronecker product; `self`'s wires come first.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut amps = Vec::with_capacity(self.len() * other.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        StateVector { dims, amps }
    }

    /// Applies `gate` to `wires`; the first listed wire is the most significant
    /// index into the gate.
    pub fn apply_unitary(&self, wires: &[usize], gate: &GateMatrix) -> Result<StateVector> {
        let amps = self.apply_operator(wires, gate.dim, &gate.entries)?;
        Ok(StateVector {
            dims: self.dims.clone(),
            amps,
        })
    }

    /// Applies an arbitrary (possibly non-unitary) `dim × dim` row-major
    /// operator to `wires` and returns the raw, unnormalized amplitudes.
    pub fn apply_operator(
        &self,
        wires: &[usize],
        dim: usize,
        matrix: &[Complex64],
    ) -> Result<Vec<Complex64>> {
        let layout = WireLayout::new(&self.dims, wires)?;
        if layout.sub_size != dim || matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "operator of dimension {dim} on wires {wires:?} spanning {}",
                layout.sub_size
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        let mut local = vec![Complex64::new(0.0, 0.0); dim];
        for base in layout.bases(&self.dims) {
            for (s, slot) in local.iter_mut().enumerate() {
                *slot = self.amps[base + layout.offsets[s]];
            }
            for r in 0..dim {
                let row = &matrix[r * dim..(r + 1) * dim];
                out[base + layout.offsets[r]] = row
                    .iter()
                    .zip(&local)
                    .map(|(m, v)| m * v)
                    .sum::<Complex64>();
            }
        }
        Ok(out)
    }

    /// Probability of each joint outcome of `wires`, indexed big-endian in the
    /// listed wire order.
    pub fn outcome_probabilities(&self, wires: &[usize]) -> Result<Vec<f64>> {
        let layout = WireLayout::new(&self.dims, wires)?;
        let mut probs = vec![0.0; layout.sub_size];
        for base in layout.bases(&self.dims) {
            for (s, p) in probs.iter_mut().enumerate() {
                *p += self.amps[base + layout.offsets[s]].norm_sqr();
            }
        }
        Ok(probs)
    }

    /// Projective measurement of `wires` in the computational basis.
    ///
    /// With `forced` the named outcome is post-selected. Otherwise the outcome
    /// is drawn by inverse CDF over ascending outcome index from a generator
    /// seeded with `seed` (0 when absent), so every run is replayable.
    pub fn measure(
        &self,
        wires: &[usize],
        forced: Option<usize>,
        seed: Option<u64>,
    ) -> Result<MeasurementResult> {
        let probs = self.outcome_probabilities(wires)?;
        let outcome = match forced {
            Some(o) => {
                if o >= probs.len() {
                    return Err(Error::IndexOutOfRange {
                        index: o,
                        size: probs.len(),
                    });
                }
                if !(probs[o] > 1e-15) {
                    return Err(Error::ZeroProbability {
                        outcome: o,
                        probability: probs[o],
                    });
                }
                o
            }
            None => sample_inverse_cdf(&probs, Sampler::new(seed.unwrap_or(0)).uniform()),
        };
        let probability = probs[outcome];
        let layout = WireLayout::new(&self.dims, wires)?;
        let scale = 1.0 / libm::sqrt(probability);
        let mut amps = vec![Complex64::new(0.0, 0.0); self.len()];
        for base in layout.bases(&self.dims) {
            let i = base + layout.offsets[outcome];
            amps[i] = self.amps[i] * scale;
        }
        Ok(MeasurementResult {
            outcome,
            probability,
            post_state: StateVector {
                dims: self.dims.clone(),
                amps,
            },
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`, clamped to `[0, 1]`. Insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// Reorders wires: wire `i` of the result is wire `order[i]` of `self`.
    pub fn permute_wires(&self, order: &[usize]) -> Result<StateVector> {
        let n = self.num_wires();
        let mut seen = vec![false; n];
        if order.len() != n
            || order
                .iter()
                .any(|&w| w >= n || core::mem::replace(&mut seen[w], true))
        {
            return Err(Error::InvalidWires(format!(
                "{order:?} is not a permutation of 0..{n}"
            )));
        }
        let dims: Vec<usize> = order.iter().map(|&w| self.dims[w]).collect();
        let mut amps = vec![Complex64::new(0.0, 0.0); self.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let old = self.digits(i);
            let new: Vec<usize> = order.iter().map(|&w| old[w]).collect();
            amps[index_of(&dims, &new)?] = *a;
        }
        Ok(StateVector { dims, amps })
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Index of the first outcome whose cumulative probability exceeds `u`.
fn sample_inverse_cdf(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, p) in probs.iter().enumerate() {
        if *p > 0.0 {
            last_nonzero = i;
        }
        acc += p;
        if u < acc {
            return i;
        }
    }
    // roundoff left u above the final cumulative sum
    last_nonzero
}

/// Big-endian basis index for per-wire digits.
pub fn index_of(dims: &[usize], digits: &[usize]) -> Result<usize> {
    if digits.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} digits for {} wires",
            digits.len(),
            dims.len()
        )));
    }
    let mut index = 0;
    let mut size = 1;
    for (&d, &k) in dims.iter().zip(digits) {
        if k >= d {
            return Err(Error::IndexOutOfRange { index: k, size: d });
        }
        index = index * d + k;
        size *= d;
    }
    debug_assert!(index < size);
    Ok(index)
}

/// Big-endian digit expansion of `index` over `dims`.
pub fn digits_of(dims: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

/// Strides and sub-register offsets for a wire selection.
struct WireLayout {
    selected: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    sub_size: usize,
}

impl WireLayout {
    fn new(dims: &[usize], wires: &[usize]) -> Result<Self> {
        let n = dims.len();
        if wires.is_empty() {
            return Err(Error::InvalidWires("empty wire list".into()));
        }
        for (i, &w) in wires.iter().enumerate() {
            if w >= n {
                return Err(Error::InvalidWires(format!(
                    "wire {w} out of range for {n} wires"
                )));
            }
            if wires[..i].contains(&w) {
                return Err(Error::InvalidWires(format!("wire {w} listed twice")));
            }
        }
        let mut strides = vec![1usize; n];
        for w in (0..n.saturating_sub(1)).rev() {
            strides[w] = strides[w + 1] * dims[w + 1];
        }
        let sub_dims: Vec<usize> = wires.iter().map(|&w| dims[w]).collect();
        let sub_size = sub_dims.iter().product();
        let offsets = (0..sub_size)
            .map(|s| {
                digits_of(&sub_dims, s)
                    .iter()
                    .zip(wires)
                    .map(|(&k, &w)| k * strides[w])
                    .sum()
            })
            .collect();
        let selected = wires.iter().map(|&w| (strides[w], dims[w])).collect();
        Ok(WireLayout {
            selected,
            offsets,
            sub_size,
        })
    }

    /// Basis indices whose selected digits are all zero.
    fn bases<'a>(&'a self, dims: &[usize]) -> impl Iterator<Item = usize> + 'a {
        let size: usize = dims.iter().product();
        (0..size).filter(move |&i| self.selected.iter().all(|&(s, d)| (i / s) % d == 0))
    }
}

/// Outcome of [`StateVector::measure`].
#[derive(Debug, Clone)]
pub struct MeasurementResult {
    /// Joint outcome index, big-endian over the measured wires.
    pub outcome: usize,
    /// Squared norm of the projected branch before renormalization.
    pub probability: f64,
    /// Renormalized collapsed state over the full register.
    pub post_state: StateVector,
}

/// Unitary matrix on one or more wires, stored row-major.
#[derive(Clone, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl fmt::Debug for GateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GateMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl GateMatrix {
    /// Validates unitarity to [`UNITARY_TOLERANCE`].
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        let gate = GateMatrix { dim, entries };
        let deviation = gate.unitarity_deviation();
        if !(deviation <= UNITARY_TOLERANCE) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(gate)
    }

    /// Builds from a function of (row, column).
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let entries = (0..dim * dim).map(|i| f(i / dim, i % dim)).collect();
        Self::new(dim, entries)
    }

    /// Permutation matrix sending `|j⟩` to `|image(j)⟩`.
    pub fn permutation(dim: usize, image: impl Fn(usize) -> usize) -> Result<Self> {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for j in 0..dim {
            let i = image(j);
            if i >= dim {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    size: dim,
                });
            }
            entries[i * dim + j] = Complex64::new(1.0, 0.0);
        }
        Self::new(dim, entries)
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        GateMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Conjugate transpose, which is also the inverse.
    pub fn adjoint(&self) -> GateMatrix {
        let n = self.dim;
        let entries = (0..n * n).map(|i| self.get(i % n, i / n).conj()).collect();
        GateMatrix { dim: n, entries }
    }

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn matmul(&self, rhs: &GateMatrix) -> Result<GateMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.dim, self.dim, rhs.dim, rhs.dim
            )));
        }
        Ok(GateMatrix {
            dim: self.dim,
            entries: mat_mul(self.dim, &self.entries, &rhs.entries),
        })
    }

    pub fn pow(&self, exp: u32) -> GateMatrix {
        (0..exp).fold(GateMatrix::identity(self.dim), |acc, _| GateMatrix {
            dim: self.dim,
            entries: mat_mul(self.dim, &acc.entries, &self.entries),
        })
    }

    /// `self ⊗ rhs`; `self` acts on the more significant index.
    pub fn kron(&self, rhs: &GateMatrix) -> GateMatrix {
        let (a, b) = (self.dim, rhs.dim);
        let n = a * b;
        let entries = (0..n * n)
            .map(|i| {
                let (r, c) = (i / n, i % n);
                self.get(r / b, c / b) * rhs.get(r % b, c % b)
            })
            .collect();
        GateMatrix { dim: n, entries }
    }

    /// Multiplies every entry by a unit-modulus phase.
    pub fn phased(&self, phase: Complex64) -> Result<GateMatrix> {
        Self::new(self.dim, self.entries.iter().map(|z| z * phase).collect())
    }

    /// Largest entry of `|U†U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let prod = mat_mul(n, &self.adjoint_entries(), &self.entries);
        prod.iter()
            .enumerate()
            .map(|(i, z)| {
                let id = if i / n == i % n { 1.0 } else { 0.0 };
                (z - id).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`; infinite on a dimension mismatch.
    pub fn max_abs_diff(&self, other: &GateMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.max_abs_diff(&GateMatrix::identity(self.dim)) <= tol
    }

    fn adjoint_entries(&self) -> Vec<Complex64> {
        self.adjoint().entries
    }
}

fn mat_mul(n: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for r in 0..n {
        for k in 0..n {
            let x = a[r * n + k];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..n {
                out[r * n + c] += x * b[k * n + c];
            }
        }
    }
    out
}

pub fn make_register(dims: &[usize], basis_index: usize) -> Result<StateVector> {
    StateVector::basis(dims, basis_index)
}

pub fn make_qutrit(c0: Complex64, c1: Complex64, c2: Complex64) -> Result<StateVector> {
    StateVector::qutrit(c0, c1, c2)
}

pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    a.tensor(b)
}

pub fn apply_unitary(
    state: &StateVector,
    wires: &[usize],
    gate: &GateMatrix,
) -> Result<StateVector> {
    state.apply_unitary(wires, gate)
}

pub fn measure_wires(
    state: &StateVector,
    wires: &[usize],
    forced_outcome: Option<usize>,
    seed: Option<u64>,
) -> Result<MeasurementResult> {
    state.measure(wires, forced_outcome, seed)
}

pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    a.fidelity(b)
}
