use alloc::string::String;
use alloc::vec::Vec;

use super::{event_status, EventStatus, Metric, RecordSelector, Scenario, Step};
use crate::copier::{apply_copy, erase_copies, multi_copy, CopierSpec, CopyLog};
use crate::infometrics::{quantum_mutual_information, transinformation, von_neumann_entropy, Distribution};
use crate::measurement::{measure, readout_channel, Basis};
use crate::qstate::{fidelity, StateVector};
use crate::rng::{self, TrialRng};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRow {
    pub step: usize,
    pub label: String,
    pub basis: Basis,
    pub outcome: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    /// Script position at which the metric was evaluated.
    pub position: usize,
    pub name: &'static str,
    pub args: String,
    pub value: f64,
}

/// The step (or metric position) at which a trial aborted.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFailure {
    pub step: usize,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub trial: u32,
    pub seed: u64,
    pub outcomes: Vec<OutcomeRow>,
    pub metrics: Vec<MetricRow>,
    pub failure: Option<StepFailure>,
    /// Status of the branch when the trial ended or aborted.
    pub event: EventStatus,
    pub log: CopyLog,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub trials: Vec<TrialReport>,
}

impl RunReport {
    pub fn failed_trials(&self) -> usize {
        self.trials.iter().filter(|t| t.failure.is_some()).count()
    }

    /// Copy log of the last trial.
    pub fn final_log(&self) -> Option<&CopyLog> {
        self.trials.last().map(|t| &t.log)
    }
}

struct Trial<'a> {
    initial: &'a StateVector,
    state: StateVector,
    log: CopyLog,
    rng: TrialRng,
}

impl Trial<'_> {
    fn step(&mut self, index: usize, step: &Step, outcomes: &mut Vec<OutcomeRow>) -> Result<()> {
        match step {
            Step::Copy { source, target } | Step::Premeasure { system: source, apparatus: target } => {
                let spec = CopierSpec::for_layout(source, target, self.state.layout())?;
                let log = core::mem::take(&mut self.log);
                (self.state, self.log) = apply_copy(&self.state, &spec, log)?;
            }
            Step::MultiCopy { source, targets, mode } => {
                let targets: Vec<&str> = targets.iter().map(String::as_str).collect();
                let log = core::mem::take(&mut self.log);
                (self.state, self.log) = multi_copy(&self.state, source, &targets, *mode, log)?;
            }
            Step::Measure { label, basis } => {
                let out = measure(&self.state, label, *basis, &mut self.rng)?;
                outcomes.push(OutcomeRow {
                    step: index,
                    label: label.clone(),
                    basis: *basis,
                    outcome: out.result,
                    probability: out.probability,
                });
                self.state = out.post_state;
            }
            Step::Escape { label } => {
                self.log.escape(label);
            }
            Step::Erase(selector) => {
                let which: Vec<u64> = match selector {
                    RecordSelector::All => self.log.seqs(),
                    RecordSelector::Range(lo, hi) => (*lo..=*hi).collect(),
                };
                let log = core::mem::take(&mut self.log);
                let restore = log.clone();
                match erase_copies(&self.state, log, &which) {
                    Ok((state, log)) => (self.state, self.log) = (state, log),
                    Err(e) => {
                        self.log = restore;
                        return Err(e);
                    }
                }
            }
        }
        Ok(())
    }

    fn metric(&self, metric: &Metric) -> Result<f64> {
        let s = &self.state;
        match metric {
            Metric::Entropy(labels) => Ok(von_neumann_entropy(&s.partial_trace(labels)?)),
            Metric::Coherence { label, i, j } => Ok(s.partial_trace(&[label])?.coherence(*i, *j)),
            Metric::MutualInfo { source, copy, theta } => {
                let channel = readout_channel(s, source, copy, *theta)?;
                let prior = Distribution::new(s.marginal(source)?)?;
                Ok(transinformation(&channel.joint(&prior)?))
            }
            Metric::Qmi(a, b) => quantum_mutual_information(s, a, b),
            Metric::Fidelity => fidelity(s, self.initial),
        }
    }
}

/// Where a trial is in its script: the next step to run and the next
/// metric request to evaluate.
#[derive(Debug, Clone, Copy, Default)]
struct Cursor {
    position: usize,
    pending: usize,
}

/// Advance `t` through the script, evaluating metrics before the step at
/// their position. With `deterministic_only`, stops in front of the first
/// step that draws randomness. Returns the failure that ended the trial,
/// if any.
fn drive(
    scenario: &Scenario,
    t: &mut Trial<'_>,
    cursor: &mut Cursor,
    outcomes: &mut Vec<OutcomeRow>,
    metrics: &mut Vec<MetricRow>,
    deterministic_only: bool,
) -> Option<StepFailure> {
    loop {
        let position = cursor.position;
        while let Some(req) = scenario.metrics.get(cursor.pending).filter(|m| m.position == position) {
            match t.metric(&req.metric) {
                Ok(value) => metrics.push(MetricRow { position, name: req.metric.name(), args: req.metric.args(), value }),
                Err(error) => return Some(StepFailure { step: position, error }),
            }
            cursor.pending += 1;
        }
        let step = scenario.script.get(position)?;
        if deterministic_only && matches!(step, Step::Measure { .. }) {
            return None;
        }
        if let Err(error) = t.step(position, step, outcomes) {
            return Some(StepFailure { step: position, error });
        }
        cursor.position += 1;
    }
}

/// The initial state and the leading stretch of the script that draws no
/// randomness, run once and shared by every trial.
#[derive(Debug, Clone)]
pub struct PreparedRun {
    initial: StateVector,
    state: StateVector,
    log: CopyLog,
    cursor: Cursor,
    metrics: Vec<MetricRow>,
    failure: Option<StepFailure>,
}

impl PreparedRun {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        let initial = scenario.initial_state()?;
        let mut t = Trial { initial: &initial, state: initial.clone(), log: CopyLog::new(), rng: rng::seeded(0) };
        let mut cursor = Cursor::default();
        let mut metrics = Vec::new();
        let failure = drive(scenario, &mut t, &mut cursor, &mut Vec::new(), &mut metrics, true);
        let (state, log) = (t.state, t.log);
        Ok(Self { initial, state, log, cursor, metrics, failure })
    }

    pub fn initial(&self) -> &StateVector {
        &self.initial
    }
}

/// Run one trial with seed `scenario.seed + trial`, resuming from `prepared`.
pub fn run_trial(scenario: &Scenario, prepared: &PreparedRun, trial: u32) -> TrialReport {
    let seed = scenario.seed.wrapping_add(u64::from(trial));
    let mut outcomes = Vec::new();
    let mut metrics = prepared.metrics.clone();
    let mut t = Trial {
        initial: &prepared.initial,
        state: prepared.state.clone(),
        log: prepared.log.clone(),
        rng: rng::seeded(seed),
    };
    let failure = match &prepared.failure {
        Some(f) => Some(f.clone()),
        None => {
            let mut cursor = prepared.cursor;
            drive(scenario, &mut t, &mut cursor, &mut outcomes, &mut metrics, false)
        }
    };
    TrialReport { trial, seed, outcomes, metrics, failure, event: event_status(&t.log), log: t.log }
}

/// Run every trial in index order.
pub fn run_scenario(scenario: &Scenario) -> Result<RunReport> {
    let prepared = PreparedRun::new(scenario)?;
    Ok(RunReport { trials: (0..scenario.trials).map(|i| run_trial(scenario, &prepared, i)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    const ERASER: &str = "\
subsystem e dim=2
subsystem f1 dim=2
subsystem f2 dim=2
init e amps=1,1
init f1=pm f2=pm
metric coherence e
multicopy e -> f1,f2
metric coherence e
erase all
metric coherence e
metric fidelity initial
";

    #[test]
    fn eraser_restores_coherence() {
        let s = parse_scenario(ERASER).unwrap();
        let r = run_scenario(&s).unwrap();
        let t = &r.trials[0];
        assert!(t.failure.is_none());
        let v: Vec<f64> = t.metrics.iter().map(|m| m.value).collect();
        assert!((v[0] - 0.5).abs() < 1e-10);
        assert!(v[1] < 1e-12);
        assert!((v[2] - 0.5).abs() < 1e-10);
        assert!((v[3] - 1.0).abs() < 1e-10);
        assert!(t.log.is_empty());
        assert_eq!(t.event, EventStatus::Revocable);
    }

    #[test]
    fn escaped_erase_aborts_as_event() {
        let doc = ERASER.replace("erase all", "escape f1\nerase all");
        let s = parse_scenario(&doc).unwrap();
        let t = &run_scenario(&s).unwrap().trials[0];
        let failure = t.failure.as_ref().unwrap();
        assert_eq!(failure.step, 2);
        assert_eq!(failure.error.kind(), "EscapedSubsystem");
        assert_eq!(t.event, EventStatus::FixedEvent);
        assert_eq!(t.log.len(), 2);
        assert_eq!(t.metrics.len(), 2);
    }

    #[test]
    fn trial_seeds_are_offsets() {
        let s = parse_scenario("subsystem a dim=2\ninit a amps=1,1\nmeasure a\ntrials 3\nseed 40\n").unwrap();
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.trials.iter().map(|t| t.seed).collect::<Vec<_>>(), [40, 41, 42]);
        let again = run_scenario(&s).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn event_status_examples() {
        assert_eq!(event_status(&CopyLog::new()), EventStatus::Revocable);
        let layout = crate::qstate::SubsystemLayout::qubits(&["a", "b", "c"]).unwrap();
        let s = StateVector::basis_state(layout, &[1, 0, 0]);
        let mut log = CopyLog::new();
        let mut state = s.clone();
        for _ in 0..1000 {
            (state, log) = apply_copy(&state, &CopierSpec::new("a", "b"), log).unwrap();
        }
        assert_eq!(log.len(), 1000);
        assert_eq!(event_status(&log), EventStatus::Revocable);

        let (_, mut log) =
            multi_copy(&s, "a", &["b", "c"], crate::copier::ChainMode::FromSource, CopyLog::new()).unwrap();
        log.escape("c");
        assert_eq!(event_status(&log), EventStatus::FixedEvent);
    }
}
