use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use super::SubsystemLayout;
use crate::{Error, Result, C64, TOLERANCE};

/// Hermitian, unit-trace, positive semidefinite operator over a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: SubsystemLayout,
    elems: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validating constructor.
    pub fn new(layout: SubsystemLayout, elems: DMatrix<C64>) -> Result<Self> {
        let n = layout.total_dim();
        if elems.nrows() != n || elems.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: elems.nrows() });
        }
        let rho = Self { layout, elems };
        if rho.hermiticity_deviation() >= TOLERANCE {
            return Err(Error::InvalidDensityMatrix("not Hermitian"));
        }
        if (rho.trace() - 1.0).abs() >= TOLERANCE {
            return Err(Error::InvalidDensityMatrix("trace is not 1"));
        }
        if rho.eigenvalues().iter().any(|&l| l < -TOLERANCE) {
            return Err(Error::InvalidDensityMatrix("negative eigenvalue"));
        }
        Ok(rho)
    }

    pub(crate) fn from_parts(layout: SubsystemLayout, elems: DMatrix<C64>) -> Self {
        Self { layout, elems }
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn elems(&self) -> &DMatrix<C64> {
        &self.elems
    }

    pub fn dim(&self) -> usize {
        self.elems.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.elems[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.elems[(i, i)].re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.elems[(i, i)].re).collect()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.elems.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Modulus of the off-diagonal element `(i, j)` in the symbol basis.
    pub fn coherence(&self, i: usize, j: usize) -> f64 {
        crate::modulus(self.elems[(i, j)])
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max(crate::modulus(self.elems[(i, j)] - self.elems[(j, i)].conj()));
            }
        }
        worst
    }

    /// Eigenvalues in descending order, from a Hermitian eigensolver.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = SymmetricEigen::new(self.elems.clone()).eigenvalues.iter().copied().collect();
        values.sort_unstable_by(|a, b| b.total_cmp(a));
        values
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self
            .elems
            .iter()
            .zip(other.elems.iter())
            .map(|(a, b)| crate::modulus(a - b))
            .fold(0.0, f64::max))
    }

    /// Trace out every subsystem not listed in `keep`.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let kept = self.layout.positions(keep)?;
        let split = Split::new(&self.layout, &kept);
        let mut out = DMatrix::<C64>::zeros(split.keep_dim, split.keep_dim);
        let n = self.dim();
        for r in 0..n {
            let (kr, er) = split.split(r);
            for c in 0..n {
                let (kc, ec) = split.split(c);
                if er == ec {
                    out[(kr, kc)] += self.elems[(r, c)];
                }
            }
        }
        Ok(Self::from_parts(self.layout.restrict(&kept), out))
    }
}

/// Splits a global index into (kept, environment) indices.
pub(crate) struct Split {
    radices: Vec<(usize, bool)>,
    pub keep_dim: usize,
    pub env_dim: usize,
}

impl Split {
    pub fn new(layout: &SubsystemLayout, kept: &[usize]) -> Self {
        let radices: Vec<(usize, bool)> = layout
            .entries()
            .iter()
            .enumerate()
            .map(|(p, e)| (e.dim(), kept.contains(&p)))
            .collect();
        let keep_dim = radices.iter().filter(|r| r.1).map(|r| r.0).product();
        let env_dim = radices.iter().filter(|r| !r.1).map(|r| r.0).product();
        Self { radices, keep_dim, env_dim }
    }

    pub fn split(&self, mut index: usize) -> (usize, usize) {
        let (mut k, mut e) = (0, 0);
        let (mut kp, mut ep) = (1, 1);
        for &(dim, keep) in self.radices.iter().rev() {
            let digit = index % dim;
            index /= dim;
            if keep {
                k += digit * kp;
                kp *= dim;
            } else {
                e += digit * ep;
                ep *= dim;
            }
        }
        (k, e)
    }
}
