//! Seeded random inputs for the invariant suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::calculus::{GradedForm, VertexFunction};
use crate::connection::PotentialCoefficients;
use crate::edge_module::{DirectedCyclicGraph, EdgeFunction, HilbertVector};
use crate::C64;

pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn complex_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<C64> {
    (0..len).map(|_| complex(rng)).collect()
}

pub fn vertex_function<R: Rng + ?Sized>(rng: &mut R, n: usize) -> VertexFunction {
    VertexFunction::new(complex_vec(rng, n))
}

pub fn edge_function<R: Rng + ?Sized>(rng: &mut R, m: usize) -> EdgeFunction {
    EdgeFunction::new(complex_vec(rng, m))
}

pub fn hilbert_vector<R: Rng + ?Sized>(rng: &mut R, m: usize) -> HilbertVector {
    HilbertVector::from_flat(&complex_vec(rng, 2 * m))
}

/// A form with independent random coefficients in every degree.
pub fn form<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GradedForm {
    GradedForm {
        deg0: vertex_function(rng, n),
        fwd: complex_vec(rng, n),
        bwd: complex_vec(rng, n),
        deg2: complex_vec(rng, n),
    }
}

/// Each ordered pair (loops included) kept with probability `density`.
/// With `full_out_degree`, every vertex gets at least one outgoing edge.
pub fn graph<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64, full_out_degree: bool) -> DirectedCyclicGraph {
    let mut edges = Vec::new();
    for s in 0..n {
        let mut row: Vec<usize> = (0..n).filter(|_| rng.gen_bool(density)).collect();
        if full_out_degree && row.is_empty() {
            let all: Vec<usize> = (0..n).collect();
            row.push(*all.choose(rng).expect("n > 0"));
        }
        edges.extend(row.into_iter().map(|t| (s, t)));
    }
    DirectedCyclicGraph::new(n, edges).expect("valid random graph")
}

/// Independent complex coefficients on every admissible key.
pub fn potential<R: Rng + ?Sized>(rng: &mut R, g: &DirectedCyclicGraph) -> PotentialCoefficients {
    PotentialCoefficients::from_fn(g, |_, _, _| complex(rng))
}
