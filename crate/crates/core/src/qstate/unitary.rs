use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::{Error, Result, C64, TOLERANCE};

/// A unitary acting on an ordered list of subsystems. The matrix is indexed
/// in the mixed radix of `targets`, first target most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    targets: Vec<String>,
    matrix: DMatrix<C64>,
}

/// Largest entry of `|M^dag M - I|`.
pub fn unitarity_deviation(m: &DMatrix<C64>) -> f64 {
    let product = m.adjoint() * m;
    let mut worst = 0.0f64;
    for i in 0..product.nrows() {
        for j in 0..product.ncols() {
            let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max(crate::modulus(product[(i, j)] - expect));
        }
    }
    worst
}

impl UnitaryOp {
    pub fn new<S: Into<String>>(targets: impl IntoIterator<Item = S>, matrix: DMatrix<C64>) -> Result<Self> {
        let targets: Vec<String> = targets.into_iter().map(Into::into).collect();
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::DuplicateLabel(t.clone()));
            }
        }
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let deviation = unitarity_deviation(&matrix);
        if !(deviation < TOLERANCE) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { targets, matrix })
    }

    pub fn identity<S: Into<String>>(targets: impl IntoIterator<Item = S>, side: usize) -> Self {
        Self {
            targets: targets.into_iter().map(Into::into).collect(),
            matrix: DMatrix::identity(side, side),
        }
    }

    pub fn targets(&self) -> &[String] {
        &self.targets
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// The inverse `U^dag`.
    pub fn inverse(&self) -> Self {
        Self { targets: self.targets.clone(), matrix: self.matrix.adjoint() }
    }
}
