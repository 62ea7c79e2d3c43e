//! Kähler calculus on the bidirected polygon, twisted edge Laplacians of
//! finite directed graphs, and the Connes distance of the associated
//! Dolbeault-Dirac spectral triple.
//!
//! Vertices are labelled `0..n` and all vertex arithmetic is modulo `n`.
//!
//! The crate is organised bottom-up:
//!
//! * [`calculus`]: the two-dimensional ∗-differential calculus on `n` points,
//!   its almost complex structure, Kähler form, Hodge star and metric.
//! * [`edge_module`]: the left `C(V)`-module `C(E)` of a directed graph, its
//!   Hermitian structure and the Hilbert space `L²(E) ⊕ L²(Ω^{0,1} ⊗ E)`.
//! * [`operator`]: dense complex matrices tagged with the spaces they act on.
//! * [`connection`]: the base connection, potentials, `∂̄` and the twisted
//!   edge Laplacian.
//! * [`spectra`]: a cyclic Jacobi eigensolver and closed-form spectra.
//! * [`dirac`]: the Dirac operator, commutators with functions, operator
//!   norms and Connes distances.
//! * [`random`]: seeded sample inputs for the invariant suites.
//! * [`verify`]: named invariant checks, used by the command-line tool.

pub mod calculus;
pub mod connection;
pub mod dirac;
pub mod edge_module;
mod error;
pub mod format;
pub mod linalg;
pub mod operator;
pub mod random;
pub mod spectra;
pub mod verify;

pub use calculus::{Calculus, GradedForm, VertexFunction};
pub use connection::PotentialCoefficients;
pub use dirac::{DistanceResult, DistanceValue, NumericInterval};
pub use edge_module::{DirectedCyclicGraph, EdgeFunction, HilbertVector};
pub use error::{Error, Result};
pub use operator::{DenseOperator, Space};
pub use spectra::Spectrum;

/// Double-precision complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Default comparison tolerance for form identities.
pub const DEFAULT_TOL: f64 = 1e-9;
