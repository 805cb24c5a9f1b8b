use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{Error, Result, MAX_DIMENSION};

/// One labeled tensor factor with its symbol basis.
///
/// `pm_index` names the basis state that acts as the pure medium when this
/// subsystem receives a copy. The aliases `pm` and `um` resolve against it
/// (`um` only for two-level subsystems).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subsystem {
    label: String,
    dim: usize,
    basis: Vec<String>,
    pm_index: usize,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| !c.is_whitespace() && !matches!(c, ',' | '=' | '#' | '(' | ')'))
}

impl Subsystem {
    pub fn new<L, B, S>(label: L, basis: B) -> Result<Self>
    where
        L: Into<String>,
        B: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let label = label.into();
        let basis: Vec<String> = basis.into_iter().map(Into::into).collect();
        if !valid_name(&label) {
            return Err(Error::InvalidSubsystem { label, reason: "label is not an identifier" });
        }
        if basis.len() < 2 {
            return Err(Error::InvalidSubsystem { label, reason: "dimension must be at least 2" });
        }
        if !basis.iter().all(|b| valid_name(b)) {
            return Err(Error::InvalidSubsystem { label, reason: "malformed basis label" });
        }
        for (i, b) in basis.iter().enumerate() {
            if basis[..i].contains(b) {
                return Err(Error::InvalidSubsystem { label, reason: "duplicate basis label" });
            }
        }
        Ok(Self { label, dim: basis.len(), basis, pm_index: 0 })
    }

    /// A two-level subsystem with symbols `0` and `1`.
    pub fn qubit(label: impl Into<String>) -> Result<Self> {
        Self::new(label, ["0", "1"])
    }

    /// A `dim`-level subsystem with symbols `0..dim`.
    pub fn qudit(label: impl Into<String>, dim: usize) -> Result<Self> {
        Self::new(label, (0..dim).map(|i| i.to_string()))
    }

    pub fn with_pure_medium(mut self, index: usize) -> Result<Self> {
        if index >= self.dim {
            return Err(Error::PureMediumOutOfRange { index, dim: self.dim });
        }
        self.pm_index = index;
        Ok(self)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn pm_index(&self) -> usize {
        self.pm_index
    }

    /// Resolve a basis label (or the `pm`/`um` aliases) to an index.
    pub fn basis_index(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.basis.iter().position(|b| b == name) {
            return Some(i);
        }
        match name {
            "pm" => Some(self.pm_index),
            "um" if self.dim == 2 => Some(1 - self.pm_index),
            _ => None,
        }
    }
}

/// Ordered list of subsystems. Index digits are mixed radix with the first
/// subsystem most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    entries: Vec<Subsystem>,
    total_dim: usize,
}

impl SubsystemLayout {
    pub fn new(entries: Vec<Subsystem>) -> Result<Self> {
        let mut total: usize = 1;
        for (i, e) in entries.iter().enumerate() {
            if entries[..i].iter().any(|o| o.label == e.label) {
                return Err(Error::DuplicateLabel(e.label.clone()));
            }
            total = total.checked_mul(e.dim).ok_or(Error::DimensionTooLarge)?;
            if total > MAX_DIMENSION {
                return Err(Error::DimensionTooLarge);
            }
        }
        if entries.is_empty() {
            return Err(Error::EmptyPartition);
        }
        Ok(Self { entries, total_dim: total })
    }

    /// Layout of two-level subsystems labeled by `labels`.
    pub fn qubits(labels: &[&str]) -> Result<Self> {
        Self::new(labels.iter().map(|l| Subsystem::qubit(*l)).collect::<Result<_>>()?)
    }

    pub fn entries(&self) -> &[Subsystem] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.label.as_str())
    }

    pub fn contains(&self, label: &str) -> bool {
        self.entries.iter().any(|e| e.label == label)
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.entries
            .iter()
            .position(|e| e.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.into()))
    }

    pub fn get(&self, label: &str) -> Result<&Subsystem> {
        Ok(&self.entries[self.position(label)?])
    }

    /// Place value of each subsystem digit.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = alloc::vec![1; self.entries.len()];
        for i in (0..self.entries.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.entries[i + 1].dim;
        }
        strides
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = alloc::vec![0; self.entries.len()];
        for (slot, e) in out.iter_mut().zip(&self.entries).rev() {
            *slot = index % e.dim;
            index /= e.dim;
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.entries)
            .fold(0, |acc, (d, e)| acc * e.dim + d)
    }

    /// Resolve a label set to sorted, deduplicated positions.
    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut pos = labels
            .iter()
            .map(|l| self.position(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        pos.sort_unstable();
        pos.dedup();
        Ok(pos)
    }

    /// The layout restricted to the given positions, in layout order.
    pub fn restrict(&self, positions: &[usize]) -> Self {
        let entries: Vec<Subsystem> = positions.iter().map(|&p| self.entries[p].clone()).collect();
        let total_dim = entries.iter().map(|e| e.dim).product();
        Self { entries, total_dim }
    }

    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        Ok(self.restrict(&self.positions(labels)?))
    }
}
