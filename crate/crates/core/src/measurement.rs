//! Premeasurement, projective readout and rotated-basis readout channels.
//!
//! A rotated basis with angle `theta` on a two-level subsystem is
//! `{cos(theta/2)|0> + sin(theta/2)|1>, -sin(theta/2)|0> + cos(theta/2)|1>}`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;

use crate::copier::{apply_copy, CopierSpec, CopyLog};
use crate::infometrics::{Distribution, JointDistribution};
use crate::qstate::StateVector;
use crate::{rng, Error, Result, C64, TOLERANCE};

/// Probabilities below this are treated as impossible outcomes.
pub const ZERO_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    Symbol,
    Rotated(f64),
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Symbol => f.write_str("symbol"),
            Basis::Rotated(theta) => write!(f, "theta={theta}"),
        }
    }
}

/// Column vectors of the rotated qubit basis.
pub fn rotated_basis(theta: f64) -> [[C64; 2]; 2] {
    let (s, c) = (libm::sin(theta / 2.0), libm::cos(theta / 2.0));
    [
        [C64::new(c, 0.0), C64::new(s, 0.0)],
        [C64::new(-s, 0.0), C64::new(c, 0.0)],
    ]
}

fn basis_vectors(state: &StateVector, label: &str, basis: Basis) -> Result<Vec<Vec<C64>>> {
    let dim = state.layout().get(label)?.dim();
    match basis {
        Basis::Symbol => Ok((0..dim)
            .map(|k| (0..dim).map(|j| C64::new(if j == k { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect()),
        Basis::Rotated(theta) => {
            if dim != 2 {
                return Err(Error::RotationRequiresQubit { label: label.into(), dim });
            }
            Ok(rotated_basis(theta).iter().map(|v| v.to_vec()).collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub label: String,
    pub basis: Basis,
    pub result: usize,
    pub probability: f64,
    /// Born probabilities of every outcome before the reduction.
    pub distribution: Vec<f64>,
    pub post_state: StateVector,
}

/// Von Neumann premeasurement: the apparatus, prepared in its pure-medium
/// state, receives a copy of `system`. This is the copier with default
/// settings.
pub fn premeasure(state: &StateVector, system: &str, apparatus: &str) -> Result<StateVector> {
    let spec = CopierSpec::for_layout(system, apparatus, state.layout())?;
    let overlap = state.marginal(apparatus)?[spec.target_pm_index];
    if overlap < 1.0 - TOLERANCE {
        return Err(Error::TargetNotPrepared { label: apparatus.into(), overlap });
    }
    Ok(apply_copy(state, &spec, CopyLog::new())?.0)
}

/// Exact outcome probabilities of measuring `label` in `basis`.
pub fn outcome_distribution(state: &StateVector, label: &str, basis: Basis) -> Result<Vec<f64>> {
    match basis {
        Basis::Symbol => state.marginal(label),
        Basis::Rotated(_) => basis_vectors(state, label, basis)?
            .iter()
            .map(|v| state.project(label, v).map(|(p, _)| p))
            .collect(),
    }
}

/// Projective measurement with Born-rule sampling from `rng`.
pub fn measure<R: RngCore + ?Sized>(
    state: &StateVector,
    label: &str,
    basis: Basis,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    let vectors = basis_vectors(state, label, basis)?;
    let distribution = outcome_distribution(state, label, basis)?;
    let possible: Vec<usize> = (0..distribution.len()).filter(|&k| distribution[k] >= ZERO_PROBABILITY).collect();
    let Some(&last) = possible.last() else {
        return Err(Error::AllZeroProbabilities);
    };
    let total: f64 = possible.iter().map(|&k| distribution[k]).sum();
    let u = rng::uniform(rng) * total;
    let mut cumulative = 0.0;
    let mut result = last;
    for &k in &possible {
        cumulative += distribution[k];
        if u < cumulative {
            result = k;
            break;
        }
    }
    let (probability, post) = state.project(label, &vectors[result])?;
    let post_state = post.ok_or(Error::AllZeroProbabilities)?;
    Ok(MeasurementOutcome { label: label.into(), basis, result, probability, distribution, post_state })
}

pub fn measure_seeded(state: &StateVector, label: &str, basis: Basis, seed: u64) -> Result<MeasurementOutcome> {
    measure(state, label, basis, &mut rng::seeded(seed))
}

/// Row-stochastic matrix of `P(readout k | source symbol i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutChannel {
    rows: Vec<Vec<f64>>,
}

impl ReadoutChannel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        for row in &rows {
            if row.len() != rows.len() {
                return Err(Error::DimensionMismatch { expected: rows.len(), found: row.len() });
            }
            if row.iter().any(|p| !(-TOLERANCE..=1.0 + TOLERANCE).contains(p)) {
                return Err(Error::InvalidDistribution("channel entry outside [0, 1]"));
            }
            if (row.iter().sum::<f64>() - 1.0).abs() >= TOLERANCE {
                return Err(Error::InvalidDistribution("channel row does not sum to 1"));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn get(&self, symbol: usize, readout: usize) -> f64 {
        self.rows[symbol][readout]
    }

    /// Joint distribution of (source symbol, readout) under `prior`.
    pub fn joint(&self, prior: &Distribution) -> Result<JointDistribution> {
        if prior.len() != self.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.rows.len(), found: prior.len() });
        }
        let n = self.rows.len();
        let probs = (0..n)
            .flat_map(|i| self.rows[i].iter().map(move |p| p * prior.probs()[i]))
            .collect();
        JointDistribution::new(n, n, probs)
    }
}

/// Exact readout channel from `source` (symbol basis) to `copy` read in the
/// basis rotated by `theta`.
pub fn readout_channel(joint: &StateVector, source: &str, copy: &str, theta: f64) -> Result<ReadoutChannel> {
    let layout = joint.layout();
    let source_dim = layout.get(source)?.dim();
    let copy_dim = layout.get(copy)?.dim();
    if copy_dim != 2 {
        return Err(Error::RotationRequiresQubit { label: copy.into(), dim: copy_dim });
    }
    if source_dim != copy_dim {
        return Err(Error::DimensionMismatch { expected: copy_dim, found: source_dim });
    }
    let basis = rotated_basis(theta);
    let mut rows = Vec::with_capacity(source_dim);
    for symbol in 0..source_dim {
        let (p, branch) = joint.project_symbol(source, symbol)?;
        let branch = match branch {
            Some(b) if p >= ZERO_PROBABILITY => b,
            _ => return Err(Error::DegenerateSource { symbol }),
        };
        let row = basis
            .iter()
            .map(|v| branch.project(copy, v).map(|(q, _)| q))
            .collect::<Result<Vec<f64>>>()?;
        let sum: f64 = row.iter().sum();
        rows.push(row.into_iter().map(|q| q / sum).collect());
    }
    ReadoutChannel::new(rows)
}
