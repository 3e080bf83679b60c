use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("height {height} out of range 0..={max}")]
    HeightOutOfRange { height: usize, max: usize },

    #[error("vertex {vertex} is not valid: {reason}")]
    InvalidVertex { vertex: String, reason: String },

    #[error("graph would have {count} vertices, above the limit of {limit}")]
    SizeGuard { count: String, limit: u64 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("no p <= {cap} satisfies the midpoint conditions for code {code}")]
    NoPParam { code: String, cap: usize },

    #[error("selection count {k} outside 0..={max}")]
    SelectionOutOfRange { k: u64, max: u64 },

    #[error("base set is not registered")]
    UnregisteredBase,

    #[error("set is not representable on the {base}-adic grid")]
    NotGridRepresentable { base: u64 },

    #[error("selection count {num}/{den} is not an integer")]
    NonIntegerSelection { num: u64, den: u64 },

    #[error("set operation leaves the cylinder family: {0}")]
    NotCylinder(String),

    #[error("ESA vector length {len} exceeds the cap of {cap} (mu = {mu})")]
    EsaCap { mu: u64, len: String, cap: u64 },

    #[error("malformed composite vertex: {0}")]
    MalformedComposite(String),

    #[error("{0}")]
    Usage(String),
}

/// Outcome of an exhaustive check: the number of assertions made, or a
/// description of the first counterexample.
pub type CheckOutcome = std::result::Result<u64, String>;
