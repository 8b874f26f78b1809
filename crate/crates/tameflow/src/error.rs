use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty facet at position {0}")]
    EmptyFacet(usize),
    #[error("unknown vertex label `{0}`")]
    UnknownVertex(String),
    #[error("face {0:?} is not a face of the complex")]
    FaceNotInComplex(Vec<String>),
    #[error("{0:?} is not a subcomplex: {1:?} missing from the ambient complex")]
    NotASubcomplex(String, Vec<String>),
    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("invalid orientation on face {face:?}: {reason}")]
    InvalidOrientation { face: Vec<String>, reason: String },
    #[error("function is not admissible: {0}")]
    InadmissibleFunction(String),
    #[error("function is not coherent: violation pair ({0}, {1}) has a non-reversing interval")]
    IncoherentFunction(String, String),
    #[error("condition C- fails at {0}")]
    CMinusFails(String),
    #[error("elements {0} and {1} are not comparable")]
    Incomparable(String, String),
    #[error("meet-semilattice violation: {0}")]
    MeetViolation(String),
    #[error("CW grading violation: {0}")]
    GradingViolation(String),
    #[error("invalid barycentric point: {0}")]
    InvalidPoint(String),
    #[error("point carrier does not match the supplied vertex order")]
    CarrierMismatch,
    #[error("scalar flow input {0} outside [0,1]")]
    ScalarOutOfRange(f64),
    #[error("{0} must be injective on the carrier")]
    NotInjective(String),
    #[error("index {0} out of range for dimension {1}")]
    IndexOutOfRange(usize, usize),
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operator is singular")]
    SingularOperator,
    #[error("spectrum {0:?} is not hyperbolic")]
    NotHyperbolic(Vec<f64>),
    #[error("transversality failure: gap(U,V) = 1")]
    TransversalityFailure,
    #[error("time {t} is below the slice threshold; the normal slice misses the graph")]
    SliceBelowThreshold { t: f64 },
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("reduced Poincaré polynomial of the empty complex is not defined")]
    ReducedOfEmpty,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
