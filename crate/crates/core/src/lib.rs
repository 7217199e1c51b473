//! Exact symbolic computations with Lie n-algebroid presentations of
//! singular foliations on R^n: structure-axiom verification and
//! modular classes (modular 1-form, closedness, exactness witnesses,
//! obstructions), all over exact rational arithmetic.

pub mod algebroid;
pub mod modular;
pub mod builders;
pub mod error;
pub mod fields;
pub mod forms;
pub mod graded;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod ratlog;
pub mod regfol;

pub use algebroid::{ExactnessReport, JacobiOutcome, LieNAlgebroid};
pub use error::{FoliaError, Result};
pub use fields::VectorField;
pub use forms::DifferentialForm;
pub use graded::{koszul_sign, unshuffles, GradedBundle, Section, Unshuffle, WedgeWord};
pub use linalg::QMatrix;
pub use poly::{Mono, Poly, Q, Vars};
pub use ratlog::RatLog;
