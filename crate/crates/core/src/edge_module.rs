//! The left `C(V)`-module `C(E)` of a finite directed graph, its Hermitian
//! structure, and the Hilbert space `H = L²(E) ⊕ L²(Ω^{0,1} ⊗ E)`.

use std::collections::HashMap;

use crate::calculus::VertexFunction;
use crate::operator::{DenseOperator, Space};
use crate::{Error, Result, C64};

/// `n` cyclically ordered vertices and a set of directed edges.
///
/// Edges are kept sorted lexicographically by `(source, target)`; every
/// matrix in the crate is indexed in this order. Self-loops are allowed,
/// parallel edges are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedCyclicGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl DirectedCyclicGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (s, t) in edges {
            for v in [s, t] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            list.push((s, t));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let index = list.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Ok(Self { n, edges: list, index })
    }

    /// Directed polygon `μ → μ+1`.
    pub fn directed_ngon(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|m| (m, (m + 1) % n)))
    }

    /// Bidirected polygon `μ → μ±1`.
    pub fn bidirected_ngon(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|m| [(m, (m + 1) % n), (m, (m + n - 1) % n)]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn source(&self, e: usize) -> usize {
        self.edges[e].0
    }

    pub fn target(&self, e: usize) -> usize {
        self.edges[e].1
    }

    pub fn edge_index(&self, s: usize, t: usize) -> Option<usize> {
        self.index.get(&(s, t)).copied()
    }

    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.index.contains_key(&(s, t))
    }

    /// Number of edges with source `v` (taken mod `n`).
    pub fn out_degree(&self, v: usize) -> usize {
        let v = v % self.n;
        self.edges.iter().filter(|e| e.0 == v).count()
    }

    /// Indices of edges with source `v` (mod `n`), in canonical order.
    pub fn edges_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let v = v % self.n;
        self.edges.iter().enumerate().filter(move |(_, e)| e.0 == v).map(|(i, _)| i)
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|e| e.0 == e.1)
    }

    /// Vertices with no outgoing edge.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.out_degree(v) == 0).collect()
    }

    pub fn prev(&self, v: usize) -> usize {
        (v + self.n - 1) % self.n
    }

    pub fn next(&self, v: usize) -> usize {
        (v + 1) % self.n
    }

    fn check_fn(&self, f: &VertexFunction) -> Result<()> {
        if f.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: f.len(),
            });
        }
        Ok(())
    }

    fn check_edges(&self, len: usize) -> Result<()> {
        if len != self.edges.len() {
            return Err(Error::DimensionMismatch {
                expected: self.edges.len(),
                found: len,
            });
        }
        Ok(())
    }

    /// Indicator `χ_{s→t}`.
    pub fn chi(&self, s: usize, t: usize) -> Result<EdgeFunction> {
        let e = self.edge_index(s, t).ok_or(Error::UnknownEdge(s, t))?;
        let mut x = EdgeFunction::zeros(self.num_edges());
        x.values[e] = C64::new(1.0, 0.0);
        Ok(x)
    }

    /// `(f·x)(e) = f(s(e)) x(e)`.
    pub fn left_action(&self, f: &VertexFunction, x: &EdgeFunction) -> Result<EdgeFunction> {
        self.check_fn(f)?;
        self.check_edges(x.len())?;
        Ok(EdgeFunction::new(
            x.values.iter().enumerate().map(|(e, v)| v * f.at(self.source(e))).collect(),
        ))
    }

    /// `h_E(x, y) = Σ_e conj(y(e)) x(e) δ_{s(e)}`.
    pub fn hermitian_pairing(&self, x: &EdgeFunction, y: &EdgeFunction) -> Result<VertexFunction> {
        self.check_edges(x.len())?;
        self.check_edges(y.len())?;
        let mut out = vec![C64::new(0.0, 0.0); self.n];
        for (e, (a, b)) in x.values.iter().zip(&y.values).enumerate() {
            out[self.source(e)] += b.conj() * a;
        }
        Ok(VertexFunction::new(out))
    }

    /// The dual functional `Φ^e(x) = x(e) δ_{s(e)}`.
    pub fn apply_dual(&self, edge: (usize, usize), x: &EdgeFunction) -> Result<VertexFunction> {
        self.check_edges(x.len())?;
        let e = self.edge_index(edge.0, edge.1).ok_or(Error::UnknownEdge(edge.0, edge.1))?;
        let mut out = VertexFunction::zeros(self.n).into_values();
        out[edge.0] = x.values[e];
        Ok(VertexFunction::new(out))
    }

    /// The 0/1 diagonal idempotent on `C(E_n)` that keeps the coordinates of
    /// `E ∩ E_n`, where `E_n` lists all loop-free pairs in lex order.
    pub fn complete_graph_projector(&self) -> DenseOperator {
        let all = complete_edges(self.n);
        let mut p = DenseOperator::zeros(all.len(), all.len(), Space::CompleteEdges, Space::CompleteEdges);
        for (i, &(s, t)) in all.iter().enumerate() {
            if self.contains(s, t) {
                p.set(i, i, C64::new(1.0, 0.0));
            }
        }
        p
    }

    /// `⟨u, v⟩ = (1/n) Σ_e (conj(v.top) u.top + conj(v.bottom) u.bottom)`.
    pub fn inner_product(&self, u: &HilbertVector, v: &HilbertVector) -> Result<C64> {
        for w in [u, v] {
            self.check_edges(w.top.len())?;
            self.check_edges(w.bottom.len())?;
        }
        let s: C64 = u
            .top
            .values
            .iter()
            .zip(&v.top.values)
            .chain(u.bottom.iter().zip(&v.bottom))
            .map(|(a, b)| b.conj() * a)
            .sum();
        Ok(s / self.n as f64)
    }

    /// `{√n χ_e}` followed by `{√n ξ_{s(e)+1→s(e)} ⊗ χ_e}`, canonical edge
    /// order within each block.
    pub fn orthonormal_basis(&self) -> Vec<HilbertVector> {
        let m = self.num_edges();
        let r = C64::new((self.n as f64).sqrt(), 0.0);
        (0..2 * m)
            .map(|k| {
                let mut v = HilbertVector::zeros(m);
                if k < m {
                    v.top.values[k] = r;
                } else {
                    v.bottom[k - m] = r;
                }
                v
            })
            .collect()
    }
}

/// All loop-free ordered pairs on `n` vertices, lex order.
pub fn complete_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t)))
        .collect()
}

/// Element of `C(E)`, indexed in canonical edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFunction {
    values: Vec<C64>,
}

impl EdgeFunction {
    pub fn new(values: Vec<C64>) -> Self {
        Self { values }
    }

    pub fn zeros(m: usize) -> Self {
        Self::new(vec![C64::new(0.0, 0.0); m])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.values.iter().map(|v| v * c).collect())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Add for &EdgeFunction {
    type Output = EdgeFunction;

    fn add(self, rhs: &EdgeFunction) -> EdgeFunction {
        EdgeFunction::new(self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect())
    }
}

/// Vector of `H`: the `L²(E)` block and the `L²(Ω^{0,1} ⊗ E)` block, the
/// latter holding the coefficient of `ξ_{s(e)+1→s(e)} ⊗ χ_e` at edge `e`.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertVector {
    pub top: EdgeFunction,
    pub bottom: Vec<C64>,
}

impl HilbertVector {
    pub fn zeros(m: usize) -> Self {
        Self {
            top: EdgeFunction::zeros(m),
            bottom: vec![C64::new(0.0, 0.0); m],
        }
    }

    /// Split a flat coordinate vector (top block first).
    pub fn from_flat(flat: &[C64]) -> Self {
        let m = flat.len() / 2;
        Self {
            top: EdgeFunction::new(flat[..m].to_vec()),
            bottom: flat[m..].to_vec(),
        }
    }

    pub fn to_flat(&self) -> Vec<C64> {
        self.top.values.iter().chain(&self.bottom).copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn triangle() -> DirectedCyclicGraph {
        DirectedCyclicGraph::directed_ngon(3).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert_eq!(DirectedCyclicGraph::new(2, [(0, 1)]), Err(Error::TooFewVertices(2)));
        assert_eq!(
            DirectedCyclicGraph::new(3, [(0, 1), (0, 1)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert_eq!(
            DirectedCyclicGraph::new(3, [(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        );
        let g = DirectedCyclicGraph::new(3, [(2, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 1), (2, 0)]);
        assert!(g.has_loops());
    }

    #[test]
    fn left_action_examples() {
        let g = triangle();
        let x = g.chi(0, 1).unwrap();
        assert_eq!(g.left_action(&VertexFunction::delta(3, 0), &x).unwrap(), x);
        assert_eq!(
            g.left_action(&VertexFunction::delta(3, 1), &x).unwrap(),
            EdgeFunction::zeros(3)
        );
        let y = EdgeFunction::new(vec![c(1.0), c(-2.0), C64::new(0.0, 3.0)]);
        assert_eq!(g.left_action(&VertexFunction::constant(3, c(1.0)), &y).unwrap(), y);
    }

    #[test]
    fn hermitian_pairing_examples() {
        let g = DirectedCyclicGraph::bidirected_ngon(3).unwrap();
        let a = g.chi(0, 1).unwrap();
        assert_eq!(g.hermitian_pairing(&a, &a).unwrap(), VertexFunction::delta(3, 0));
        let b = g.chi(1, 2).unwrap();
        assert_eq!(g.hermitian_pairing(&a, &b).unwrap(), VertexFunction::zeros(3));
        let x = &a.scale(c(2.0)) + &g.chi(1, 0).unwrap();
        assert_eq!(
            g.hermitian_pairing(&x, &x).unwrap(),
            VertexFunction::from_real(&[4.0, 1.0, 0.0])
        );
    }

    #[test]
    fn dual_examples() {
        let g = triangle();
        assert_eq!(
            g.apply_dual((0, 1), &g.chi(0, 1).unwrap()).unwrap(),
            VertexFunction::delta(3, 0)
        );
        assert_eq!(
            g.apply_dual((0, 1), &g.chi(1, 2).unwrap()).unwrap(),
            VertexFunction::zeros(3)
        );
        assert_eq!(
            g.apply_dual((0, 1), &g.chi(0, 1).unwrap().scale(c(3.0))).unwrap(),
            VertexFunction::delta(3, 0).scale(c(3.0))
        );
        assert!(g.apply_dual((1, 0), &g.chi(0, 1).unwrap()).is_err());
    }

    #[test]
    fn projector_examples() {
        let k3 = DirectedCyclicGraph::new(3, complete_edges(3)).unwrap();
        assert_eq!(k3.complete_graph_projector(), DenseOperator::identity(6, Space::CompleteEdges));

        let p = triangle().complete_graph_projector();
        // E_3 lex order: 0->1, 0->2, 1->0, 1->2, 2->0, 2->1
        let diag: Vec<f64> = (0..6).map(|i| p.get(i, i).re).collect();
        assert_eq!(diag, vec![1.0, 0.0, 0.0, 1.0, 1.0, 0.0]);

        let empty = DirectedCyclicGraph::new(4, []).unwrap();
        assert_eq!(empty.complete_graph_projector().frobenius_norm(), 0.0);
    }

    #[test]
    fn inner_product_examples() {
        let g = triangle();
        let mut u = HilbertVector::zeros(3);
        u.top = g.chi(1, 2).unwrap();
        assert!((g.inner_product(&u, &u).unwrap() - c(1.0 / 3.0)).norm() < 1e-15);
        let mut w = HilbertVector::zeros(3);
        w.bottom[1] = c(1.0);
        assert!((g.inner_product(&w, &w).unwrap() - c(1.0 / 3.0)).norm() < 1e-15);
        assert_eq!(g.inner_product(&u, &w).unwrap(), c(0.0));
    }

    #[test]
    fn orthonormal_basis_examples() {
        let g = triangle();
        let basis = g.orthonormal_basis();
        assert_eq!(basis.len(), 6);
        for (i, u) in basis.iter().enumerate() {
            let nz: Vec<_> = u.to_flat().into_iter().filter(|v| v.norm() > 0.0).collect();
            assert_eq!(nz.len(), 1);
            assert!((nz[0].re - 3f64.sqrt()).abs() < 1e-15);
            for (j, v) in basis.iter().enumerate() {
                let ip = g.inner_product(u, v).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - c(expect)).norm() < 1e-12);
            }
        }
        assert!(DirectedCyclicGraph::new(3, []).unwrap().orthonormal_basis().is_empty());
    }
}
