//! The copier unitary and copy provenance.
//!
//! For `d`-level source and target the copier maps
//! `|i>_src |j>_dst -> |perm(i)>_src |(i + j - pm) mod d>_dst`, where `pm` is
//! the target's pure-medium index. With `d = 2`, `pm = 0` and no permutation
//! this is the controlled-NOT: a pure medium receives a faithful copy and an
//! unprepared medium receives the inverted symbol.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::qstate::{StateVector, SubsystemLayout, UnitaryOp};
use crate::{Error, Result, C64, TOLERANCE};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopierSpec {
    pub source: String,
    pub target: String,
    pub target_pm_index: usize,
    /// Optional relabeling `i -> perm[i]` of the source symbols.
    pub permutation: Option<Vec<usize>>,
}

impl CopierSpec {
    pub fn new(source: impl Into<String>, target: impl Into<String>) -> Self {
        Self { source: source.into(), target: target.into(), target_pm_index: 0, permutation: None }
    }

    /// Spec whose pure-medium index is taken from the target subsystem.
    pub fn for_layout(source: &str, target: &str, layout: &SubsystemLayout) -> Result<Self> {
        let pm = layout.get(target)?.pm_index();
        Ok(Self::new(source, target).with_pm_index(pm))
    }

    pub fn with_pm_index(mut self, index: usize) -> Self {
        self.target_pm_index = index;
        self
    }

    pub fn with_permutation(mut self, permutation: Vec<usize>) -> Self {
        self.permutation = Some(permutation);
        self
    }
}

/// Build the copier acting on `[source, target]`.
pub fn build_copier(spec: &CopierSpec, layout: &SubsystemLayout) -> Result<UnitaryOp> {
    if spec.source == spec.target {
        return Err(Error::SelfCopy(spec.source.clone()));
    }
    let d = layout.get(&spec.source)?.dim();
    let target_dim = layout.get(&spec.target)?.dim();
    if d != target_dim {
        return Err(Error::DimensionMismatch { expected: d, found: target_dim });
    }
    if spec.target_pm_index >= d {
        return Err(Error::PureMediumOutOfRange { index: spec.target_pm_index, dim: d });
    }
    let perm: Vec<usize> = match &spec.permutation {
        Some(p) => {
            let mut seen = alloc::vec![false; d];
            if p.len() != d || p.iter().any(|&x| x >= d || core::mem::replace(&mut seen[x], true)) {
                return Err(Error::NonBijectivePermutation);
            }
            p.clone()
        }
        None => (0..d).collect(),
    };
    let pm = spec.target_pm_index;
    let mut m = DMatrix::<C64>::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let rel = (j + d - pm) % d;
            let out = perm[i] * d + (i + rel) % d;
            m[(out, i * d + j)] = C64::new(1.0, 0.0);
        }
    }
    UnitaryOp::new([spec.source.clone(), spec.target.clone()], m)
}

/// Condition of the target subsystem at copy time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Medium {
    /// Target was in its pure-medium state: the copy is faithful.
    Pure,
    /// Target had no pure-medium component: the copy is convention-inverted.
    Unprepared,
    /// Target was partly in the pure medium.
    Partial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CopyRecord {
    pub seq: u64,
    pub spec: CopierSpec,
    pub medium: Medium,
    pub escaped: bool,
}

impl CopyRecord {
    pub fn source(&self) -> &str {
        &self.spec.source
    }

    pub fn target(&self) -> &str {
        &self.spec.target
    }

    pub fn involves(&self, label: &str) -> bool {
        self.source() == label || self.target() == label
    }

    pub fn is_convention_inverted(&self) -> bool {
        self.medium != Medium::Pure
    }
}

/// Ordered provenance of the copies made during one run.
///
/// Sequence numbers start at 1 and keep increasing after erasures.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CopyLog {
    records: Vec<CopyRecord>,
    next_seq: u64,
    escaped: BTreeSet<String>,
}

impl CopyLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[CopyRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, seq: u64) -> Option<&CopyRecord> {
        self.records.iter().find(|r| r.seq == seq)
    }

    pub fn seqs(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.seq).collect()
    }

    pub fn any_escaped(&self) -> bool {
        self.records.iter().any(|r| r.escaped)
    }

    pub fn escaped_labels(&self) -> impl Iterator<Item = &str> {
        self.escaped.iter().map(String::as_str)
    }

    /// Mark `label` as escaped. Every record touching it, now or later, can
    /// no longer be erased. Returns the number of records newly marked.
    pub fn escape(&mut self, label: &str) -> usize {
        self.escaped.insert(label.into());
        let mut marked = 0;
        for r in self.records.iter_mut().filter(|r| r.involves(label) && !r.escaped) {
            r.escaped = true;
            marked += 1;
        }
        marked
    }

    fn push(&mut self, spec: CopierSpec, medium: Medium) -> u64 {
        self.next_seq += 1;
        let escaped = self.escaped.contains(&spec.source) || self.escaped.contains(&spec.target);
        self.records.push(CopyRecord { seq: self.next_seq, spec, medium, escaped });
        self.next_seq
    }
}

fn pure_medium_overlap(state: &StateVector, target: &str, pm: usize) -> Result<f64> {
    Ok(state.marginal(target)?[pm])
}

/// Copy `spec.source` onto `spec.target` and append a record to `log`.
pub fn apply_copy(state: &StateVector, spec: &CopierSpec, mut log: CopyLog) -> Result<(StateVector, CopyLog)> {
    let op = build_copier(spec, state.layout())?;
    let overlap = pure_medium_overlap(state, &spec.target, spec.target_pm_index)?;
    let medium = if overlap >= 1.0 - TOLERANCE {
        Medium::Pure
    } else if overlap <= TOLERANCE {
        Medium::Unprepared
    } else {
        Medium::Partial
    };
    let next = state.apply(&op)?;
    log.push(spec.clone(), medium);
    Ok((next, log))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainMode {
    /// Every target copies directly from the source.
    FromSource,
    /// Each target copies from the previous one.
    Chained,
}

/// Copy `source` onto every target in order. All targets must start in
/// their pure-medium state.
pub fn multi_copy(
    state: &StateVector,
    source: &str,
    targets: &[&str],
    mode: ChainMode,
    log: CopyLog,
) -> Result<(StateVector, CopyLog)> {
    let layout = state.layout();
    layout.position(source)?;
    for &t in targets {
        let pm = layout.get(t)?.pm_index();
        let overlap = pure_medium_overlap(state, t, pm)?;
        if overlap < 1.0 - TOLERANCE {
            return Err(Error::TargetNotPrepared { label: t.into(), overlap });
        }
    }
    let mut current = state.clone();
    let mut log = log;
    let mut from = source;
    for &t in targets {
        let spec = CopierSpec::for_layout(from, t, layout)?;
        (current, log) = apply_copy(&current, &spec, log)?;
        if mode == ChainMode::Chained {
            from = t;
        }
    }
    Ok((current, log))
}

/// Revoke the copies `which` by applying inverse copiers newest first.
///
/// The selected records must be the most recent ones among all records
/// touching the subsystems they involve, and none may be escaped.
pub fn erase_copies(state: &StateVector, log: CopyLog, which: &[u64]) -> Result<(StateVector, CopyLog)> {
    let mut selected: Vec<&CopyRecord> = which
        .iter()
        .map(|&seq| log.get(seq).ok_or(Error::UnknownRecord(seq)))
        .collect::<Result<_>>()?;
    selected.sort_by_key(|r| r.seq);
    selected.dedup_by_key(|r| r.seq);

    for r in &selected {
        if r.escaped {
            let label = if log.escaped.contains(r.target()) { r.target() } else { r.source() };
            return Err(Error::EscapedSubsystem { seq: r.seq, label: label.into() });
        }
    }

    let involved: BTreeSet<&str> = selected.iter().flat_map(|r| [r.source(), r.target()]).collect();
    let touching: Vec<u64> = log
        .records
        .iter()
        .filter(|r| involved.iter().any(|l| r.involves(l)))
        .map(|r| r.seq)
        .collect();
    let suffix = &touching[touching.len() - selected.len()..];
    if let Some(bad) = selected.iter().find(|r| !suffix.contains(&r.seq)) {
        return Err(Error::NonSuffixErasure { seq: bad.seq });
    }

    let mut current = state.clone();
    for r in selected.iter().rev() {
        let op = build_copier(&r.spec, current.layout())?.inverse();
        current = current.apply(&op)?;
    }
    let erased: Vec<u64> = selected.iter().map(|r| r.seq).collect();
    let mut log = log;
    log.records.retain(|r| !erased.contains(&r.seq));
    Ok((current, log))
}
