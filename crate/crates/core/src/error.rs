use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Daubechies order outside `1..=10`.
    FilterOrder(usize),
    /// Signal length is not a power of two, or too short for the requested levels.
    Shape(String),
    /// Two sequences that must have equal length do not.
    LengthMismatch { left: usize, right: usize },
    /// Nonzero samples inside the zero-padding margin.
    BoundaryViolation { margin: usize, first_offender: usize },
    /// A coefficient tree with missing or mis-sized levels.
    MalformedTree(String),
    /// A scalar parameter outside its admissible range.
    Parameter(String),
    /// `sobolev_line` asked to embed in the wrong direction.
    Embedding(String),
    /// Besov indices outside the region where the Hilbert target exists.
    OutOfRegion(&'static str),
    /// Evaluation point outside a corpus entry's domain.
    Domain { x: f64, lo: f64, hi: f64 },
    /// Power index below the range of a corpus registration.
    Registration { p: f64 },
    /// An input that must be nonempty is empty, or a ratio is undefined.
    UndefinedInput(&'static str),
    /// The density cannot be sampled (zero or non-finite mass, negative values).
    Sampler(String),
    /// A swarm member whose shifted smoothness leaves the validity window.
    SwarmMember { index: usize, s: f64, reason: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::FilterOrder(r) => {
                write!(f, "Daubechies order {r} not supported (expected 1..=10)")
            }
            Error::Shape(msg) => write!(f, "shape error: {msg}"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::BoundaryViolation {
                margin,
                first_offender,
            } => write!(
                f,
                "signal support touches the boundary: sample {first_offender} is nonzero \
                 inside the {margin}-sample zero margin"
            ),
            Error::MalformedTree(msg) => write!(f, "malformed coefficient tree: {msg}"),
            Error::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Embedding(msg) => write!(f, "invalid embedding direction: {msg}"),
            Error::OutOfRegion(which) => {
                write!(f, "Besov indices outside the Hilbert-target region: {which}")
            }
            Error::Domain { x, lo, hi } => write!(f, "x = {x} outside domain [{lo}, {hi}]"),
            Error::Registration { p } => {
                write!(f, "no Besov registration for p = {p} (requires 1 <= p <= inf)")
            }
            Error::UndefinedInput(what) => write!(f, "undefined input: {what}"),
            Error::Sampler(msg) => write!(f, "density cannot be sampled: {msg}"),
            Error::SwarmMember { index, s, reason } => {
                write!(f, "swarm member {index} (s = {s}): {reason}")
            }
        }
    }
}

impl core::error::Error for Error {}
