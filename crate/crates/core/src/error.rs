use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arc {arc} references unknown vertex {vertex:?}")]
    DanglingVertex { arc: usize, vertex: String },

    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),

    #[error("invalid vertex id {0:?}: ids must be non-empty and contain no whitespace")]
    InvalidVertexId(String),

    #[error("pairing has {pairing} entries but the graph has {arcs} arcs")]
    PairingLength { pairing: usize, arcs: usize },

    #[error("pairing of arc {arc} points at {target}, which is out of range")]
    PairingOutOfRange { arc: usize, target: usize },

    #[error("pairing is not an involution at arc {arc}")]
    PairingNotInvolutive { arc: usize },

    #[error("arc {arc} and its pair {pair} do not have reversed endpoints")]
    PairingEndpointMismatch { arc: usize, pair: usize },

    #[error("vertex sets differ between composed graphs")]
    VertexSetMismatch,

    #[error("radius must be positive and finite, got {0}")]
    NonPositiveRadius(f64),

    #[error("tolerance must be positive and finite, got {0}")]
    NonPositiveTolerance(f64),

    #[error("radius {radius} is smaller than twice the norm bound {norm_bound}")]
    RadiusTooSmall { radius: f64, norm_bound: f64 },

    #[error("dimension {dim} exceeds the dense cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("matrix is not square or has inconsistent storage")]
    MalformedMatrix,

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,

    #[error("spectral set is empty")]
    EmptySpectrum,

    #[error("streamed operator has no declared norm bounds")]
    BoundsUndeclared,

    #[error("covering map references unknown {what} index {index}")]
    CoveringIndex { what: &'static str, index: usize },

    #[error("covering map is invalid: {0}")]
    InvalidCovering(String),

    #[error("coverings to compose do not share a vertex map")]
    VertexMapMismatch,

    #[error("voltage for arc {arc} is not the inverse of the voltage on its pair")]
    VoltageInverse { arc: usize },

    #[error("invalid voltage assignment: {0}")]
    InvalidVoltage(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),

    #[error("unknown point {0:?}")]
    UnknownPoint(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("group algebra element is zero")]
    ZeroElement,

    #[error("label alphabets differ between orbital graphs")]
    AlphabetMismatch,

    #[error("vector support escapes the radius-{radius} ball around the root")]
    SupportOutsideBall { radius: usize },

    #[error("no ball isomorphism of radius {radius} is available for the requested support and operator reach")]
    MatchRadiusInsufficient { radius: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
