use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the polygon calculus needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),

    #[error("unknown edge {0} -> {1}")]
    UnknownEdge(usize, usize),

    #[error("invalid potential key (mu={mu}, nu={nu}, nu'={nu_p}): requires edges {mu}->{nu} and {prev}->{nu_p}")]
    InvalidPotentialKey {
        mu: usize,
        nu: usize,
        nu_p: usize,
        prev: usize,
    },

    #[error("duplicate potential key (mu={0}, nu={1}, nu'={2})")]
    DuplicatePotentialKey(usize, usize, usize),

    #[error("degree {d} out of range 1..={max} for n = {n}")]
    DegreeOutOfRange { n: usize, d: usize, max: usize },

    #[error("operator spaces do not compose: {0}")]
    SpaceMismatch(String),

    #[error("matrix is not self-adjoint: |M - M*| = {asymmetry:e}, |M| = {norm:e}")]
    NotSelfAdjoint { asymmetry: f64, norm: f64 },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal mass {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
