use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<usize>),

    #[error("repeated vertex {vertex} inside edge {edge:?}")]
    RepeatedVertex { vertex: usize, edge: Vec<usize> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hypergraph has the empty set as an edge")]
    EmptyEdge,

    #[error("{what}: {size} exceeds the cap of {cap}{hint}")]
    CapExceeded {
        what: String,
        size: u128,
        cap: u128,
        hint: String,
    },

    #[error("coloring is not proper")]
    ImproperColoring,

    #[error("coloring covers {got} vertices, expected {expected}")]
    ColoringLength { got: usize, expected: usize },

    #[error("color {color} at index {index} is outside 1..={num_colors}")]
    ColorOutOfRange {
        index: usize,
        color: usize,
        num_colors: usize,
    },

    #[error("{0} is not a prime")]
    NotPrime(usize),

    #[error("factor 1 does not attain the minimum: factor {factor} has {value} < {first}")]
    FactorNotMinimal {
        factor: usize,
        value: usize,
        first: usize,
    },

    #[error("malformed json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, size: u128, cap: u128) -> Self {
        Error::CapExceeded {
            what: what.into(),
            size,
            cap,
            hint: String::new(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
