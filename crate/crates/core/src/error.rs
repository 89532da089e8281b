use thiserror::Error;

use crate::reduction::ReductionTrace;

/// Errors raised by the invariant pipeline.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid unit cell: {0}")]
    InvalidCell(String),

    #[error("degenerate basis (determinant {det:e})")]
    DegenerateBasis { det: f64 },

    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("matrix is not orthogonal (max deviation of QᵀQ from I is {deviation:e})")]
    NotOrthogonal { deviation: f64 },

    #[error("vectors do not sum to zero (residual {residual:e})")]
    NotSuperbase { residual: f64 },

    #[error("conorm p{i}{j} = {value:e} is not negative, no reduction needed")]
    NoReductionNeeded { i: usize, j: usize, value: f64 },

    #[error("invalid index pair ({0}, {1})")]
    InvalidPair(usize, usize),

    #[error("reduction did not terminate after {} steps", .trace.iterations())]
    NonTermination { trace: ReductionTrace },

    #[error("superbase is not obtuse: conorm p{i}{j} = {value:e}")]
    NotObtuse { i: usize, j: usize, value: f64 },

    #[error("seven values are not a voform (relation residual {residual:e})")]
    InvalidVoform { residual: f64 },

    #[error("root form is not realizable: {0}")]
    NonRealizable(String),

    #[error("degenerate root form: {0}")]
    DegenerateForm(String),

    #[error("oriented flags do not match")]
    OrientationMismatch,

    #[error("triple is not ordered: {0:?}")]
    UnorderedTriple([f64; 3]),

    #[error("triple has zero sum")]
    DegenerateTriple,

    #[error("cannot mix quotient and full triangle points in one grid")]
    MixedKinds,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures caused by the input data rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidCell(_)
                | Error::DegenerateBasis { .. }
                | Error::NonFinite
                | Error::NotSuperbase { .. }
                | Error::InvalidVoform { .. }
                | Error::InvalidArgument(_)
                | Error::UnorderedTriple(_)
                | Error::MixedKinds
                | Error::OrientationMismatch
                | Error::InvalidPair(..)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
