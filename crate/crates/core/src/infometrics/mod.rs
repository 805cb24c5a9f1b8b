//! Classical and quantum information measures. All logarithms are base 2
//! and `0 log 0 = 0`.

mod ngram;

use alloc::vec::Vec;

pub use self::ngram::{build_ngram, observer_surprisal, NGramModel, Recipient};
use crate::qstate::{DensityMatrix, StateVector};
use crate::{Error, Result, TOLERANCE};

/// Eigenvalues below this are treated as exact zeros.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * libm::log2(p)
    } else {
        0.0
    }
}

fn validate(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution("no outcomes"));
    }
    if probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidDistribution("negative or non-finite probability"));
    }
    if (probs.iter().sum::<f64>() - 1.0).abs() >= TOLERANCE {
        return Err(Error::InvalidDistribution("probabilities do not sum to 1"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        validate(&probs)?;
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: alloc::vec![1.0 / n as f64; n] }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Joint distribution `P(x, y)` stored row-major, `x` indexing rows.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: probs.len() });
        }
        validate(&probs)?;
        Ok(Self { rows, cols, probs })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidDistribution("ragged joint matrix"));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.cols + y]
    }

    pub fn marginal_x(&self) -> Distribution {
        Distribution { probs: (0..self.rows).map(|x| (0..self.cols).map(|y| self.get(x, y)).sum()).collect() }
    }

    pub fn marginal_y(&self) -> Distribution {
        Distribution { probs: (0..self.cols).map(|y| (0..self.rows).map(|x| self.get(x, y)).sum()).collect() }
    }
}

pub fn shannon_entropy(d: &Distribution) -> f64 {
    -d.probs.iter().copied().map(plogp).sum::<f64>()
}

pub fn joint_entropy(joint: &JointDistribution) -> f64 {
    -joint.probs.iter().copied().map(plogp).sum::<f64>()
}

/// `H(X | Y)`, summed branch by branch over `y`.
pub fn conditional_entropy(joint: &JointDistribution) -> f64 {
    let py = joint.marginal_y();
    (0..joint.cols)
        .filter(|&y| py.probs[y] > 0.0)
        .map(|y| {
            let h: f64 = (0..joint.rows).map(|x| plogp(joint.get(x, y) / py.probs[y])).sum();
            -py.probs[y] * h
        })
        .sum()
}

/// Mutual information `I(X;Y) = H(X) + H(Y) - H(X,Y)`.
pub fn transinformation(joint: &JointDistribution) -> f64 {
    let i = shannon_entropy(&joint.marginal_x()) + shannon_entropy(&joint.marginal_y()) - joint_entropy(joint);
    i.max(0.0)
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    -rho
        .eigenvalues()
        .into_iter()
        .map(|l| if l < EIGENVALUE_FLOOR { 0.0 } else { l })
        .map(plogp)
        .sum::<f64>()
}

/// `S(A) + S(B) - S(AB)` for disjoint label sets of a pure global state.
pub fn quantum_mutual_information<S: AsRef<str>>(global: &StateVector, part_a: &[S], part_b: &[S]) -> Result<f64> {
    if part_a.is_empty() || part_b.is_empty() {
        return Err(Error::EmptyPartition);
    }
    if let Some(shared) = part_a.iter().find(|a| part_b.iter().any(|b| b.as_ref() == a.as_ref())) {
        return Err(Error::OverlappingPartition(shared.as_ref().into()));
    }
    let both: Vec<&str> = part_a.iter().chain(part_b).map(AsRef::as_ref).collect();
    let s_a = von_neumann_entropy(&global.partial_trace(part_a)?);
    let s_b = von_neumann_entropy(&global.partial_trace(part_b)?);
    let s_ab = von_neumann_entropy(&global.partial_trace(&both)?);
    Ok((s_a + s_b - s_ab).max(0.0))
}
