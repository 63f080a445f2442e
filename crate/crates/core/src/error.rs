use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Code parameters or operation arguments out of their domain.
    InvalidParams(&'static str),
    /// Two vectors that must have equal length do not.
    LengthMismatch { left: usize, right: usize },
    /// `d = 2w`: every pair of codewords must be disjoint, so the answer is
    /// `floor(n / w)` codewords and no QUBO is needed.
    Degenerate { max_codewords: u32 },
    /// An exact integer computation left the supported integer width.
    Overflow(&'static str),
    /// An operation that needs at least one solution was given `t = 0`.
    NoSolution,
    /// A bound was requested outside the assumptions under which it holds.
    BoundInapplicable(&'static str),
    /// The requested size exceeds a configured guard.
    Resource { what: &'static str, requested: u64, limit: u64 },
    /// A search ran out of its query budget without finding a target.
    Exhausted { queries: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::Degenerate { max_codewords } => write!(
                f,
                "d = 2w is the disjoint-support case; at most {max_codewords} codewords, no QUBO needed"
            ),
            Error::Overflow(what) => write!(f, "integer overflow computing {what}"),
            Error::NoSolution => f.write_str("solution count is zero"),
            Error::BoundInapplicable(why) => write!(f, "bound not applicable: {why}"),
            Error::Resource { what, requested, limit } => {
                write!(f, "{what} of {requested} exceeds the limit of {limit}")
            }
            Error::Exhausted { queries } => {
                write!(f, "no target found within {queries} queries")
            }
        }
    }
}

impl core::error::Error for Error {}
