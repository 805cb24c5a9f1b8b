//! Dense tensor-product states.
//!
//! A [`StateVector`] is a normalized amplitude array over a
//! [`SubsystemLayout`]. Amplitude index `k` decodes to one digit per
//! subsystem, the first-listed subsystem being the most significant digit.

mod density;
mod layout;
mod unitary;

use alloc::vec::Vec;

use nalgebra::DMatrix;

pub use self::density::DensityMatrix;
pub(crate) use self::density::Split;
pub use self::layout::{Subsystem, SubsystemLayout};
pub use self::unitary::{unitarity_deviation, UnitaryOp};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: SubsystemLayout,
    amps: Vec<C64>,
}

fn normalize(mut amps: Vec<C64>) -> Result<Vec<C64>> {
    let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if !(norm_sqr > 0.0) || !norm_sqr.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let scale = 1.0 / libm::sqrt(norm_sqr);
    for a in &mut amps {
        *a *= scale;
    }
    Ok(amps)
}

impl StateVector {
    /// Computational basis state from one `(label, basis label)` pair per
    /// subsystem.
    pub fn from_assignments(layout: SubsystemLayout, assignments: &[(&str, &str)]) -> Result<Self> {
        let mut digits: Vec<Option<usize>> = alloc::vec![None; layout.len()];
        for &(label, basis) in assignments {
            let pos = layout.position(label)?;
            let sub = &layout.entries()[pos];
            if digits[pos].is_some() {
                return Err(Error::DuplicateLabel(label.into()));
            }
            digits[pos] = Some(sub.basis_index(basis).ok_or_else(|| Error::UnknownBasisLabel {
                label: label.into(),
                basis: basis.into(),
            })?);
        }
        let digits = digits
            .iter()
            .zip(layout.entries())
            .map(|(d, e)| d.ok_or_else(|| Error::MissingAssignment(e.label().into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::basis_state(layout, &digits))
    }

    pub fn basis_state(layout: SubsystemLayout, digits: &[usize]) -> Self {
        let mut amps = alloc::vec![C64::new(0.0, 0.0); layout.total_dim()];
        amps[layout.index(digits)] = C64::new(1.0, 0.0);
        Self { layout, amps }
    }

    /// Normalizes `amps`, which must have one entry per basis state.
    pub fn from_amplitudes(layout: SubsystemLayout, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != layout.total_dim() {
            return Err(Error::AmplitudeCount { expected: layout.total_dim(), found: amps.len() });
        }
        Ok(Self { layout, amps: normalize(amps)? })
    }

    /// Product state from one (unnormalized) amplitude vector per subsystem.
    pub fn product(layout: SubsystemLayout, factors: Vec<Vec<C64>>) -> Result<Self> {
        if factors.len() != layout.len() {
            return Err(Error::AmplitudeCount { expected: layout.len(), found: factors.len() });
        }
        let mut amps = alloc::vec![C64::new(1.0, 0.0)];
        for (factor, sub) in factors.into_iter().zip(layout.entries()) {
            if factor.len() != sub.dim() {
                return Err(Error::AmplitudeCount { expected: sub.dim(), found: factor.len() });
            }
            let factor = normalize(factor)?;
            amps = amps.iter().flat_map(|a| factor.iter().map(move |f| a * f)).collect();
        }
        Ok(Self { layout, amps })
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, digits: &[usize]) -> C64 {
        self.amps[self.layout.index(digits)]
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Apply `op` to its target subsystems, leaving the rest untouched.
    pub fn apply(&self, op: &UnitaryOp) -> Result<Self> {
        let positions = op
            .targets()
            .iter()
            .map(|t| self.layout.position(t))
            .collect::<Result<Vec<_>>>()?;
        let strides = self.layout.strides();
        let dims: Vec<usize> = positions.iter().map(|&p| self.layout.entries()[p].dim()).collect();
        let side: usize = dims.iter().product();
        if op.matrix().nrows() != side {
            return Err(Error::DimensionMismatch { expected: side, found: op.matrix().nrows() });
        }
        // Offset of each local basis state of the targets within the global index.
        let offsets: Vec<usize> = (0..side)
            .map(|mut local| {
                let mut offset = 0;
                for (&p, &d) in positions.iter().zip(&dims).rev() {
                    offset += (local % d) * strides[p];
                    local /= d;
                }
                offset
            })
            .collect();
        let m = op.matrix();
        let mut out = self.amps.clone();
        let mut gathered = alloc::vec![C64::new(0.0, 0.0); side];
        for base in self.zero_digit_bases(&positions) {
            for (g, &off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amps[base + off];
            }
            for (row, &off) in offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (col, g) in gathered.iter().enumerate() {
                    acc += m[(row, col)] * g;
                }
                out[base + off] = acc;
            }
        }
        Ok(Self { layout: self.layout.clone(), amps: out })
    }

    /// Reduced density matrix of the `keep` subsystems (in layout order).
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let kept = self.layout.positions(keep)?;
        let split = Split::new(&self.layout, &kept);
        let mut m = DMatrix::<C64>::zeros(split.keep_dim, split.env_dim);
        for (k, a) in self.amps.iter().enumerate() {
            let (ki, ei) = split.split(k);
            m[(ki, ei)] = *a;
        }
        let rho = &m * m.adjoint();
        Ok(DensityMatrix::from_parts(self.layout.restrict(&kept), rho))
    }

    /// Outcome probabilities of `label` in its symbol basis.
    pub fn marginal(&self, label: &str) -> Result<Vec<f64>> {
        let pos = self.layout.position(label)?;
        let dim = self.layout.entries()[pos].dim();
        let stride = self.layout.strides()[pos];
        let mut probs = alloc::vec![0.0; dim];
        for block in self.amps.chunks_exact(stride * dim) {
            for (p, run) in probs.iter_mut().zip(block.chunks_exact(stride)) {
                *p += run.iter().map(|a| a.norm_sqr()).sum::<f64>();
            }
        }
        Ok(probs)
    }

    /// Project `label` onto the normalized local vector `direction`.
    ///
    /// Returns the Born probability and, when it is nonzero, the renormalized
    /// post-projection state.
    pub fn project(&self, label: &str, direction: &[C64]) -> Result<(f64, Option<Self>)> {
        let pos = self.layout.position(label)?;
        let dim = self.layout.entries()[pos].dim();
        if direction.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: direction.len() });
        }
        let stride = self.layout.strides()[pos];
        let mut out = alloc::vec![C64::new(0.0, 0.0); self.amps.len()];
        let mut prob = 0.0;
        for base in self.zero_digit_bases(&[pos]) {
            let overlap: C64 = direction
                .iter()
                .enumerate()
                .map(|(j, v)| v.conj() * self.amps[base + j * stride])
                .sum();
            prob += overlap.norm_sqr();
            for (j, v) in direction.iter().enumerate() {
                out[base + j * stride] = v * overlap;
            }
        }
        if prob <= 0.0 {
            return Ok((prob, None));
        }
        let scale = 1.0 / libm::sqrt(prob);
        for a in &mut out {
            *a *= scale;
        }
        Ok((prob, Some(Self { layout: self.layout.clone(), amps: out })))
    }

    /// Project `label` onto its symbol basis state `outcome`.
    pub fn project_symbol(&self, label: &str, outcome: usize) -> Result<(f64, Option<Self>)> {
        let dim = self.layout.get(label)?.dim();
        if outcome >= dim {
            return Err(Error::OutcomeOutOfRange { label: label.into(), outcome });
        }
        let mut e = alloc::vec![C64::new(0.0, 0.0); dim];
        e[outcome] = C64::new(1.0, 0.0);
        self.project(label, &e)
    }

    /// Every global index whose digits at `positions` are all zero, ascending.
    fn zero_digit_bases(&self, positions: &[usize]) -> Vec<usize> {
        let strides = self.layout.strides();
        // (stride, dim) of the free positions, least significant first
        let free: Vec<(usize, usize)> = (0..strides.len())
            .rev()
            .filter(|p| !positions.contains(p))
            .map(|p| (strides[p], self.layout.entries()[p].dim()))
            .collect();
        let count: usize = free.iter().map(|&(_, d)| d).product();
        let mut out = Vec::with_capacity(count);
        let mut digits = alloc::vec![0usize; free.len()];
        let mut base = 0;
        for _ in 0..count {
            out.push(base);
            for (digit, &(stride, dim)) in digits.iter_mut().zip(&free) {
                *digit += 1;
                base += stride;
                if *digit < dim {
                    break;
                }
                *digit = 0;
                base -= stride * dim;
            }
        }
        out
    }

    /// `|s><s|` over the whole layout.
    pub fn to_density(&self) -> DensityMatrix {
        let v = DMatrix::from_column_slice(self.amps.len(), 1, &self.amps);
        DensityMatrix::from_parts(self.layout.clone(), &v * v.adjoint())
    }
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}
