//! Four-qutrit secret sharing over the cyclic state `Ψ₀₂₁`.
//!
//! Register layout: wire 0 is the dealer's secret `|χ⟩`, wires 1..=3 hold
//! qutrits 0, 1 and 2 of `Ψ₀₂₁`. A Bell measurement on (dealer, qutrit 0)
//! and a Fourier-basis measurement of qutrit 1 leave qutrit 2 in
//! `X^a Z^b |χ⟩` for exponents fixed by the three outcomes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::generate_cyclic;
use crate::error::{Error, Result};
use crate::gates::{bell_measurement, bell_state, fourier, weyl, BellLabel};
use crate::qudit::{index_of, StateVector};

pub const DEALER: usize = 0;
pub const QUTRIT_0: usize = 1;
pub const QUTRIT_1: usize = 2;
pub const QUTRIT_2: usize = 3;

const D: usize = 3;
const RECOVERY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    First,
    Second,
    Third,
}

/// Holder of each register wire. Qutrit 2 receives the secret, so its owner
/// is the party that reconstructs.
pub const PARTY_OF_WIRE: [Party; 4] = [Party::First, Party::First, Party::Second, Party::Third];

/// `|χ⟩ ⊗ Ψ₀₂₁` on (dealer, qutrit 0, qutrit 1, qutrit 2).
pub fn qss_share(chi: &StateVector) -> Result<StateVector> {
    if chi.dims() != [D] {
        return Err(Error::DimensionMismatch(format!(
            "secret must be one qutrit, got {:?}",
            chi.dims()
        )));
    }
    let norm_sqr = chi.norm_sqr();
    if (norm_sqr - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm_sqr });
    }
    Ok(chi.tensor(&generate_cyclic([0, 2, 1])?))
}

/// Outcomes and applied correction of one reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QssRecord {
    pub m: usize,
    pub mu: usize,
    pub l: usize,
    pub correction_a: usize,
    pub correction_b: usize,
}

/// Correction exponents `(a, b)` per outcome triple `(m, μ, l)`; the
/// receiver applies `(X^a Z^b)⁻¹`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorrectionTable {
    entries: BTreeMap<(usize, usize, usize), (usize, usize)>,
}

impl CorrectionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table filled from a closed-form exponent pattern.
    pub fn from_pattern(pattern: impl Fn(usize, usize, usize) -> (usize, usize)) -> Self {
        let mut t = Self::new();
        for (m, mu, l) in outcome_triples() {
            let (a, b) = pattern(m, mu, l);
            t.insert(m, mu, l, a % D, b % D);
        }
        t
    }

    pub fn insert(&mut self, m: usize, mu: usize, l: usize, a: usize, b: usize) {
        self.entries.insert((m, mu, l), (a, b));
    }

    pub fn get(&self, m: usize, mu: usize, l: usize) -> Option<(usize, usize)> {
        self.entries.get(&(m, mu, l)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), (usize, usize))> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    /// Triples whose entry differs from `pattern` (mod 3).
    pub fn mismatches(
        &self,
        pattern: impl Fn(usize, usize, usize) -> (usize, usize),
    ) -> Vec<(usize, usize, usize)> {
        self.iter()
            .filter(|&((m, mu, l), (a, b))| {
                let (pa, pb) = pattern(m, mu, l);
                (pa % D, pb % D) != (a, b)
            })
            .map(|(k, _)| k)
            .collect()
    }
}

/// Exponents as printed for the protocol: `(2 − μ, m + l)` mod 3.
pub fn printed_exponents(m: usize, mu: usize, l: usize) -> (usize, usize) {
    ((2 * D + 2 - mu) % D, (m + l) % D)
}

fn outcome_triples() -> impl Iterator<Item = (usize, usize, usize)> {
    (0..D * D * D).map(|i| (i / 9, (i / 3) % 3, i % 3))
}

/// Normalized state of `wire` in a state that is a product across `wire`.
fn factor_of(state: &StateVector, wire: usize) -> Result<StateVector> {
    let dims = state.dims();
    let d = dims[wire];
    let rest: Vec<usize> = dims
        .iter()
        .enumerate()
        .filter(|&(w, _)| w != wire)
        .map(|(_, &k)| k)
        .collect();
    let rest_size: usize = rest.iter().product();
    let slice_at = |r: usize| -> Result<Vec<Complex64>> {
        let mut digits = crate::qudit::digits_of(&rest, r);
        digits.insert(wire, 0);
        (0..d)
            .map(|k| {
                digits[wire] = k;
                Ok(state.amps()[index_of(dims, &digits)?])
            })
            .collect()
    };
    let mut best = (0, 0.0);
    for r in 0..rest_size {
        let w: f64 = slice_at(r)?.iter().map(|z| z.norm_sqr()).sum();
        if w > best.1 {
            best = (r, w);
        }
    }
    StateVector::normalized(vec![d], slice_at(best.0)?)
}

/// Result of both measurements for one branch, before any correction.
struct Branch {
    label: BellLabel,
    l: usize,
    raw_target: StateVector,
}

fn measure_branch(
    shared: &StateVector,
    forced: Option<(BellLabel, usize)>,
    seed: Option<u64>,
) -> Result<Branch> {
    if shared.dims() != [D; 4] {
        return Err(Error::DimensionMismatch(format!(
            "shared state must be four qutrits, got {:?}",
            shared.dims()
        )));
    }
    let bell = bell_measurement(shared, [DEALER, QUTRIT_0], forced.map(|f| f.0), seed)?;
    let rotated = bell.post_state.apply_unitary(&[QUTRIT_1], &fourier(D)?)?;
    let second_seed = seed.map(|s| s ^ 0x9e37_79b9_7f4a_7c15);
    let r = rotated.measure(&[QUTRIT_1], forced.map(|f| f.1), second_seed)?;
    Ok(Branch {
        label: bell.label,
        l: r.outcome,
        raw_target: factor_of(&r.post_state, QUTRIT_2)?,
    })
}

/// Qutrit 2 of a branch with no correction applied.
pub fn skip_correction_branch(
    shared: &StateVector,
    label: BellLabel,
    l: usize,
) -> Result<StateVector> {
    Ok(measure_branch(shared, Some((label, l)), None)?.raw_target)
}

/// Runs both measurements (forced or seeded), looks up the correction and
/// applies its inverse to qutrit 2, returning the record and the recovered
/// qutrit.
pub fn qss_reconstruct(
    shared: &StateVector,
    forced: Option<(BellLabel, usize)>,
    seed: Option<u64>,
    corrections: &CorrectionTable,
) -> Result<(QssRecord, StateVector)> {
    let branch = measure_branch(shared, forced, seed)?;
    let (m, mu, l) = (branch.label.m, branch.label.mu, branch.l);
    let (a, b) = corrections
        .get(m, mu, l)
        .ok_or(Error::MissingCorrection { m, mu, l })?;
    let recovered = branch
        .raw_target
        .apply_unitary(&[0], &weyl(D, a, b)?.adjoint())?;
    Ok((
        QssRecord {
            m,
            mu,
            l,
            correction_a: a,
            correction_b: b,
        },
        recovered,
    ))
}

fn fiducials() -> Result<Vec<StateVector>> {
    let f = fourier(D)?;
    let mut out: Vec<StateVector> = (0..D)
        .map(|k| StateVector::basis(&[D], k))
        .collect::<Result<_>>()?;
    for k in 0..2 {
        out.push(StateVector::basis(&[D], k)?.apply_unitary(&[0], &f)?);
    }
    Ok(out)
}

/// Finds, for each of the 27 outcome branches, the single `(a, b)` for which
/// `(X^a Z^b)⁻¹` restores every fiducial secret `{|0⟩, |1⟩, |2⟩, F|0⟩, F|1⟩}`.
pub fn derive_corrections() -> Result<CorrectionTable> {
    let fids = fiducials()?;
    let shared: Vec<StateVector> = fids.iter().map(qss_share).collect::<Result<_>>()?;
    let mut inverses = Vec::with_capacity(D * D);
    for a in 0..D {
        for b in 0..D {
            inverses.push(((a, b), weyl(D, a, b)?.adjoint()));
        }
    }
    let mut table = CorrectionTable::new();
    for (m, mu, l) in outcome_triples() {
        let label = BellLabel { m, mu };
        let raws: Vec<StateVector> = shared
            .iter()
            .map(|s| skip_correction_branch(s, label, l))
            .collect::<Result<_>>()?;
        let mut found = None;
        'search: for ((a, b), inv) in &inverses {
            for (raw, chi) in raws.iter().zip(&fids) {
                let f = raw.apply_unitary(&[0], inv)?.fidelity(chi)?;
                if (1.0 - f) > RECOVERY_TOLERANCE {
                    continue 'search;
                }
            }
            found = Some((*a, *b));
            break;
        }
        let (a, b) = found.ok_or(Error::ProtocolInconsistency { m, mu, l })?;
        table.insert(m, mu, l, a, b);
    }
    Ok(table)
}

/// Comparison of `F₁|χ⟩|Ψ₀₂₁⟩` with its Bell-basis expansion
/// `(1/3√3) Σ_{m,μ} |Φ_{m,μ}⟩ Σ_l Z^{1−μ}|l⟩ ⊗ X^a Z^b |χ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    /// Largest amplitude difference over the 81 entries.
    pub residual: f64,
    /// First basis index (ascending) whose difference exceeds 1e-10, with
    /// both sides' amplitudes.
    pub first_mismatch: Option<(usize, Complex64, Complex64)>,
}

/// Evaluates the expansion with `(a, b) = pattern(m, μ, l)`.
pub fn identity_check(
    chi: &StateVector,
    pattern: impl Fn(usize, usize, usize) -> (usize, usize),
) -> Result<IdentityCheck> {
    let lhs = qss_share(chi)?.apply_unitary(&[QUTRIT_1], &fourier(D)?)?;
    let prefactor = 1.0 / (3.0 * libm::sqrt(3.0));
    let mut rhs = vec![Complex64::new(0.0, 0.0); 81];
    for label in BellLabel::all(D) {
        let phi = bell_state(D, label)?;
        for l in 0..D {
            // Z^{1−μ}|l⟩ = ω^{l(1−μ)} |l⟩
            let z_phase = Complex64::from_polar(
                1.0,
                core::f64::consts::TAU * ((l * ((D + 1 - label.mu) % D)) % D) as f64 / D as f64,
            );
            let (a, b) = pattern(label.m, label.mu, l);
            let target = chi.apply_unitary(&[0], &weyl(D, a, b)?)?;
            let term = phi.tensor(&StateVector::basis(&[D], l)?).tensor(&target);
            for (acc, t) in rhs.iter_mut().zip(term.amps()) {
                *acc += t * z_phase * prefactor;
            }
        }
    }
    let mut residual = 0.0f64;
    let mut first_mismatch = None;
    for (i, (x, y)) in lhs.amps().iter().zip(&rhs).enumerate() {
        let diff = (x - y).norm();
        residual = residual.max(diff);
        if diff > 1e-10 && first_mismatch.is_none() {
            first_mismatch = Some((i, *x, *y));
        }
    }
    Ok(IdentityCheck {
        residual,
        first_mismatch,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchAudit {
    pub m: usize,
    pub mu: usize,
    pub l: usize,
    pub a: usize,
    pub b: usize,
    pub fidelity: f64,
}

/// Full sweep of one secret: every forced branch reconstructed with the
/// derived table, agreement of that table with [`printed_exponents`], and the
/// residual of the printed expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct QssAudit {
    pub branches: Vec<BranchAudit>,
    pub paper_exponents_match: bool,
    pub identity_residual: f64,
    pub derived: CorrectionTable,
}

pub fn audit(chi: &StateVector) -> Result<QssAudit> {
    let derived = derive_corrections()?;
    let shared = qss_share(chi)?;
    let branches = outcome_triples()
        .map(|(m, mu, l)| {
            let (rec, out) =
                qss_reconstruct(&shared, Some((BellLabel { m, mu }, l)), None, &derived)?;
            Ok(BranchAudit {
                m,
                mu,
                l,
                a: rec.correction_a,
                b: rec.correction_b,
                fidelity: out.fidelity(chi)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QssAudit {
        branches,
        paper_exponents_match: derived.mismatches(printed_exponents).is_empty(),
        identity_residual: identity_check(chi, printed_exponents)?.residual,
        derived,
    })
}
