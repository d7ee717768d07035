use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two vectors (or a vector and a model) disagree on dimensionality.
    DimensionMismatch { expected: usize, found: usize },
    /// A NaN or infinite value was found where finite input is required.
    NonFinite { what: &'static str },
    /// A required collection was empty.
    Empty { what: &'static str },
    /// Two latent frame indices coincide.
    DuplicateIndex { index: usize },
    /// The ranks do not form a permutation of `1..=len`.
    NotAPermutation,
    /// A permutation index outside `1..=M!`.
    PermIndexOutOfRange { index: usize, max: usize },
    /// Greedy detection ran out of frames.
    SequenceTooShort {
        id: String,
        frames: usize,
        templates: usize,
        exclusion: usize,
    },
    /// A configuration or specification value is outside its allowed range.
    InvalidConfig(String),
    /// Binary training data contains only one label.
    SingleLabel,
    /// A class that was requested has no examples.
    EmptyClass(String),
    /// More folds were requested than there are groups.
    TooManyFolds { folds: usize, groups: usize },
    /// A cross-validation fold cannot be trained or evaluated.
    DegenerateFold { fold: usize, reason: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite { what } => write!(f, "non-finite value in {what}"),
            Error::Empty { what } => write!(f, "{what} is empty"),
            Error::DuplicateIndex { index } => {
                write!(f, "frame index {index} is selected more than once")
            }
            Error::NotAPermutation => write!(f, "ranks do not form a permutation"),
            Error::PermIndexOutOfRange { index, max } => {
                write!(f, "permutation index {index} outside 1..={max}")
            }
            Error::SequenceTooShort {
                id,
                frames,
                templates,
                exclusion,
            } => write!(
                f,
                "sequence too short for M,t: sequence '{id}' has N={frames} frames, \
                 M={templates}, t={exclusion}"
            ),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::SingleLabel => {
                write!(f, "training data must contain both positive and negative examples")
            }
            Error::EmptyClass(class) => write!(f, "class '{class}' has no examples"),
            Error::TooManyFolds { folds, groups } => {
                write!(f, "{folds} folds requested but only {groups} groups available")
            }
            Error::DegenerateFold { fold, reason } => write!(f, "fold {fold}: {reason}"),
        }
    }
}

impl core::error::Error for Error {}
