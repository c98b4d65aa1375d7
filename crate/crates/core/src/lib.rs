//! Truncated matricial Hausdorff moment sequences on a compact interval `[alpha, beta]`.
//!
//! The crate is organised bottom-up:
//!
//! * [`matrix`]: complex Hermitian kernels (pseudo-inverse, parallel sum, Loewner order,
//!   range tests) together with tri-state [`verdict`]s.
//! * [`hankel`]: block Hankel matrices, Schur complements and the structural sign/shift matrices.
//! * [`classes`]: membership tests for the Hankel, Hausdorff and one-sided Stieltjes classes.
//! * [`intervals`]: the matricial interval of admissible next moments and its length recursion.
//! * [`extensions`]: lower/upper/central/ball extensions and a seeded random generator.
//! * [`verify`]: identity suites used as numerical cross-checks, plus corpus batch runs.

pub mod classes;
pub mod error;
pub mod extensions;
pub mod hankel;
pub mod intervals;
pub mod matrix;
pub mod par;
pub mod sequence;
pub mod tolerance;
pub mod verdict;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::CMatrix;
pub use sequence::MomentSequence;
pub use tolerance::Tolerances;
pub use verdict::{ClassVerdict, Status};
