//! Crisp and triangular-fuzzy DEMATEL, run in both defuzzification orders.
//!
//! The defuzzify-first pipeline turns every fuzzy evaluation into a crisp
//! number and runs classical DEMATEL. The defuzzify-last pipeline runs
//! DEMATEL on the lower, medium and upper components of the fuzzy
//! evaluations and defuzzifies the resulting row and column sums. Because
//! the total-relation step is nonlinear, the two orders can rank objects
//! differently; [`compare`] measures that and [`search`] looks for
//! instances where it happens.

// `!(x > 0.0)` style checks also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compare;
pub mod dematel;
pub mod error;
pub mod fuzzy;
pub mod fuzzy_dematel;
pub mod io;
pub mod matrix;
pub mod report;
pub mod scale;
pub mod search;

pub use compare::{
    compare, run_defuzzify_first, run_defuzzify_last, DivergenceReport, PipelineConfig,
};
pub use dematel::{AnalysisResult, DirectInfluenceMatrix, NormalizationMode};
pub use error::{Error, Result};
pub use fuzzy::TriangularFuzzyNumber;
pub use fuzzy_dematel::{FuzzyMatrix, FuzzyScaling};
pub use matrix::Matrix;
pub use scale::{CrispSource, LevelMatrix, LinguisticScale, ScaleLevel};
pub use search::{search, SearchMode, SearchOutcome, SearchSpec};
