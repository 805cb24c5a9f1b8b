//! Observer-relative descriptions of subsystems.
//!
//! An observer holds records of some subsystems and may already have read
//! some of them. Its description of a label set is the global state
//! conditioned on the outcomes it has read, reduced to that set.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::measurement::ZERO_PROBABILITY;
use crate::qstate::{DensityMatrix, StateVector};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observer {
    name: String,
    known_labels: BTreeSet<String>,
    known_outcomes: BTreeMap<String, usize>,
}

impl Observer {
    /// An observer without records.
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), known_labels: BTreeSet::new(), known_outcomes: BTreeMap::new() }
    }

    /// Hold a record of `label` without having read it.
    pub fn holding(mut self, label: impl Into<String>) -> Self {
        self.known_labels.insert(label.into());
        self
    }

    /// Hold a record of `label` that reads `outcome`.
    pub fn knowing(mut self, label: impl Into<String>, outcome: usize) -> Self {
        let label = label.into();
        self.known_labels.insert(label.clone());
        self.known_outcomes.insert(label, outcome);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn known_labels(&self) -> &BTreeSet<String> {
        &self.known_labels
    }

    pub fn known_outcomes(&self) -> &BTreeMap<String, usize> {
        &self.known_outcomes
    }
}

/// Project the global state onto every outcome the observer has read.
pub fn condition(global: &StateVector, obs: &Observer) -> Result<StateVector> {
    let mut state = global.clone();
    for (label, &outcome) in &obs.known_outcomes {
        let (p, post) = state.project_symbol(label, outcome)?;
        state = match post {
            Some(s) if p >= ZERO_PROBABILITY => s,
            _ => return Err(Error::InconsistentKnowledge { label: label.clone(), outcome }),
        };
    }
    Ok(state)
}

/// The observer's density matrix for the `about` subsystems.
pub fn perspective_state<S: AsRef<str>>(global: &StateVector, obs: &Observer, about: &[S]) -> Result<DensityMatrix> {
    condition(global, obs)?.partial_trace(about)
}

/// Whether every observer's prediction for `about` (symbol basis) shares at
/// least one possible outcome with all the others. An observer whose
/// records contradict the global state makes the set inconsistent.
pub fn perspectives_consistent(global: &StateVector, observers: &[Observer], about: &str) -> bool {
    let mut common: Option<Vec<bool>> = None;
    for obs in observers {
        let Ok(marginal) = condition(global, obs).and_then(|s| s.marginal(about)) else {
            return false;
        };
        let support: Vec<bool> = marginal.iter().map(|&p| p >= ZERO_PROBABILITY).collect();
        common = Some(match common {
            None => support,
            Some(prev) => prev.iter().zip(&support).map(|(a, b)| *a && *b).collect(),
        });
    }
    common.is_none_or(|c| c.into_iter().any(|x| x))
}
