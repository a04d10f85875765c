use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    NodeOutOfRange { node: usize, n: usize },
    SelfLoop(usize),
    SizeMismatch { expected: usize, found: usize },
    IsolatedNode(usize),
    NotConverged { iterations: usize },
    InvalidParameter(&'static str),
    ResampleLimit { attempts: usize },
    ZeroNormStep(usize),
    NonFinite,
    Empty,
    SingleClass,
    Disconnected,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NodeOutOfRange { node, n } => {
                write!(f, "node {node} out of range for graph with {n} nodes")
            }
            Error::SelfLoop(i) => write!(f, "self-loop on node {i}"),
            Error::SizeMismatch { expected, found } => {
                write!(f, "size mismatch: expected {expected}, found {found}")
            }
            Error::IsolatedNode(i) => write!(f, "node {i} is isolated"),
            Error::NotConverged { iterations } => {
                write!(f, "no convergence after {iterations} iterations")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::ResampleLimit { attempts } => write!(
                f,
                "no graph with minimum degree >= 1 after {attempts} attempts"
            ),
            Error::ZeroNormStep(t) => write!(f, "walk step {t} has zero norm"),
            Error::NonFinite => f.write_str("non-finite value in input"),
            Error::Empty => f.write_str("empty input"),
            Error::SingleClass => f.write_str("both classes must be present"),
            Error::Disconnected => f.write_str("graph is disconnected"),
        }
    }
}

impl core::error::Error for Error {}
