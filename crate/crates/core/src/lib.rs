//! Dense state-vector kernel for information-copying experiments.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`qstate`]: labeled tensor-product layouts, pure state vectors, unitary
//!   application, partial trace and density matrices.
//! * [`copier`]: the copier unitary (controlled modular addition onto a pure
//!   medium), multi-copy chains, provenance records and LIFO erasure.
//! * [`measurement`]: premeasurement, projective readout with Born sampling,
//!   rotated-basis readout channels.
//! * [`perspective`]: observer-relative state assignment.
//! * [`infometrics`]: Shannon/von Neumann entropies, transinformation,
//!   quantum mutual information and n-gram surprisal.
//! * [`scenario`]: the line-oriented scenario format and its execution engine.
//!
//! Subsystem ordering is fixed: the first subsystem of a layout is the most
//! significant digit of the mixed-radix amplitude index.
#![no_std]

extern crate alloc;

pub mod copier;
mod error;
pub mod infometrics;
pub mod measurement;
pub mod perspective;
pub mod qstate;
pub mod rng;
pub mod scenario;

pub use nalgebra::{Complex, DMatrix};

pub use crate::error::{Error, Result};

/// Double-precision complex amplitude.
pub type C64 = Complex<f64>;

/// Absolute tolerance used for every structural invariant check.
pub const TOLERANCE: f64 = 1e-10;

/// Largest supported total Hilbert-space dimension.
pub const MAX_DIMENSION: usize = 1 << 20;

/// `|z|` without relying on `std` float intrinsics.
#[inline]
pub(crate) fn modulus(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}
