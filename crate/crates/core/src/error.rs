use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building schemas, validating curves,
/// developing them into geometry, or comparing them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gluing word is empty")]
    EmptySchema,

    #[error("malformed gluing word: {reason}")]
    MalformedWord { reason: String },

    #[error("unknown generator `{letter}`")]
    UnknownLetter { letter: String },

    #[error("malformed curve: {reason}")]
    MalformedCurve { reason: String },

    #[error("curve touches a polygon vertex at {location}")]
    VertexHit { location: String },

    #[error("tangential self-contact at {location}")]
    TangentialCrossing { location: String },

    #[error("three strands meet at {location}")]
    TriplePoint { location: String },

    #[error("curve degenerates along a polygon side: {reason}")]
    SideCoincidence { reason: String },

    #[error("strand sequence does not close up")]
    NotClosed,

    #[error("curves live on different schemas")]
    SchemaMismatch,

    #[error("curves have different basepoints")]
    BasepointMismatch,

    #[error("operation needs an essential free-homotopy class, got a null-homotopic one")]
    NullHomotopicWord,

    #[error("operation needs a null-homotopic curve, but its class is essential (closure residual {residual})")]
    NotNullHomotopic { residual: f64 },

    #[error("a defining relation fails to close in the chart (residual {residual})")]
    RelatorNotClosing { residual: f64 },

    #[error("normal bundle along the curve is non-orientable; signed framed invariant undefined")]
    NonOrientableNormalBundle,

    #[error("holonomy of the class is elliptic; no annular cover to develop into")]
    EllipticHolonomy,

    #[error("polyline unreadable near sample {index}: direction nearly reverses between samples")]
    SampleTooCoarse { index: usize },

    #[error("exterior angle sum {value} is not close to an integer multiple of a full turn")]
    AngleSumNotInteger { value: f64 },

    #[error("schema not supported by this operation: {reason}")]
    UnsupportedSchema { reason: String },

    #[error("not enough clearance to place the move: {reason}")]
    InsufficientClearance { reason: String },

    #[error("graphs are not combinatorially compatible: {reason}")]
    GraphMismatch { reason: String },

    #[error("two edge germs at vertex {vertex} leave in the same direction")]
    CoincidentGerms { vertex: usize },

    #[error("auxiliary path is invalid: {reason}")]
    MalformedPath { reason: String },

    #[error("path does not trace a homotopy between the curves: {reason}")]
    PathWordMismatch { reason: String },

    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },

    #[error("JSON error: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
