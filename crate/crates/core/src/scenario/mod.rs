//! Declarative scenarios and their execution engine.
//!
//! A scenario file is line oriented; `#` starts a comment:
//!
//! ```text
//! subsystem e dim=2 basis=L,R           # optional pm=<basis label>
//! subsystem f1 dim=2 basis=0,1
//! init e amps=1,1                       # per-subsystem amplitudes
//! init f1=pm                            # or a basis label / pm / um
//! # init amps=<full complex list>       # alternatively, the whole vector
//! metric coherence e
//! copy e -> f1
//! multicopy e -> f2,f3 mode=chain       # mode=source (default) | chain
//! premeasure e -> d
//! measure d basis=symbol                # or basis=theta=<angle>
//! escape f1
//! erase all                             # or <seq> | <first>-<last>
//! metric entropy e
//! trials 100
//! seed 7
//! ```
//!
//! Complex literals are written `a+bi`. Angles accept plain numbers and the
//! forms `pi`, `k*pi`, `pi/m`, `k*pi/m`. Metric lines are evaluated at their
//! position in the script. Trial `t` uses seed `seed + t`.

mod parse;
mod run;

use alloc::string::String;
use alloc::vec::Vec;

pub use self::parse::{parse_angle, parse_complex, parse_scenario, ParseError};
pub use self::run::{
    run_scenario, run_trial, MetricRow, PreparedRun, OutcomeRow, RunReport, StepFailure, TrialReport,
};
use crate::copier::{ChainMode, CopyLog};
use crate::measurement::Basis;
use crate::qstate::{StateVector, SubsystemLayout};
use crate::{Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Full amplitude list over the layout.
    Amplitudes(Vec<C64>),
    /// One amplitude vector per subsystem, in layout order.
    Product(Vec<Vec<C64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum RecordSelector {
    All,
    /// Inclusive range of sequence numbers.
    Range(u64, u64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Copy { source: String, target: String },
    MultiCopy { source: String, targets: Vec<String>, mode: ChainMode },
    Premeasure { system: String, apparatus: String },
    Measure { label: String, basis: Basis },
    Escape { label: String },
    Erase(RecordSelector),
}

impl Step {
    pub fn kind(&self) -> &'static str {
        match self {
            Step::Copy { .. } => "copy",
            Step::MultiCopy { .. } => "multicopy",
            Step::Premeasure { .. } => "premeasure",
            Step::Measure { .. } => "measure",
            Step::Escape { .. } => "escape",
            Step::Erase(_) => "erase",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    /// Von Neumann entropy of the reduced state of the labels.
    Entropy(Vec<String>),
    /// `|rho_ij|` of the reduced state of one subsystem.
    Coherence { label: String, i: usize, j: usize },
    /// Transinformation between `source` (symbol basis) and `copy` read in
    /// the basis rotated by `theta`, under the source's current marginal.
    MutualInfo { source: String, copy: String, theta: f64 },
    /// Quantum mutual information between two label sets.
    Qmi(Vec<String>, Vec<String>),
    /// Fidelity of the current state with the initial state.
    Fidelity,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Entropy(_) => "entropy",
            Metric::Coherence { .. } => "coherence",
            Metric::MutualInfo { .. } => "mutualinfo",
            Metric::Qmi(..) => "qmi",
            Metric::Fidelity => "fidelity",
        }
    }

    /// Argument text as it appears in reports.
    pub fn args(&self) -> String {
        match self {
            Metric::Entropy(labels) => labels.join(","),
            Metric::Coherence { label, i, j } => alloc::format!("{label} {i} {j}"),
            Metric::MutualInfo { source, copy, theta } => alloc::format!("{source} {copy} theta={theta}"),
            Metric::Qmi(a, b) => alloc::format!("{} {}", a.join(","), b.join(",")),
            Metric::Fidelity => "initial".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRequest {
    /// Number of script steps executed before evaluation.
    pub position: usize,
    pub metric: Metric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub layout: SubsystemLayout,
    pub initial: InitialState,
    pub script: Vec<Step>,
    pub metrics: Vec<MetricRequest>,
    pub trials: u32,
    pub seed: u64,
}

impl Scenario {
    pub fn initial_state(&self) -> Result<StateVector> {
        match &self.initial {
            InitialState::Amplitudes(a) => StateVector::from_amplitudes(self.layout.clone(), a.clone()),
            InitialState::Product(f) => StateVector::product(self.layout.clone(), f.clone()),
        }
    }

    /// Number of script steps of the given kind.
    pub fn count_steps(&self, kind: &str) -> usize {
        self.script.iter().filter(|s| s.kind() == kind).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventStatus {
    /// Some copy can no longer be revoked locally.
    FixedEvent,
    /// Every copy could still be erased.
    Revocable,
}

impl EventStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventStatus::FixedEvent => "fixed-event",
            EventStatus::Revocable => "revocable",
        }
    }
}

/// A branch is a fixed event iff its provenance holds an escaped copy. The
/// number of copies is irrelevant.
pub fn event_status(log: &CopyLog) -> EventStatus {
    if log.any_escaped() {
        EventStatus::FixedEvent
    } else {
        EventStatus::Revocable
    }
}
