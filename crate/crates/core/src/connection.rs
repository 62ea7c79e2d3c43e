//! The holomorphic structure on `C(E)`: the base connection `∇₀`, a
//! potential `ζ`, `∂̄ = ∇₀ + ζ`, and the twisted edge Laplacian `∂̄†∂̄`.
//!
//! Matrices are written in the orthonormal bases of
//! [`DirectedCyclicGraph::orthonormal_basis`], so adjoints are conjugate
//! transposes.

use std::collections::BTreeMap;

use crate::edge_module::{DirectedCyclicGraph, EdgeFunction};
use crate::operator::{DenseOperator, Space};
use crate::{Error, Result, C64};

/// Coefficients `c^μ_{ν,ν'}` of a left-module map
/// `ζ(χ_{μ→ν}) = Σ c^μ_{ν,ν'} ξ_{μ→μ-1} ⊗ χ_{μ-1→ν'}`.
///
/// A key `(μ, ν, ν')` is valid iff `μ→ν` and `(μ-1)→ν'` are edges. Absent
/// valid keys are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PotentialCoefficients {
    entries: BTreeMap<(usize, usize, usize), C64>,
}

fn key_error(g: &DirectedCyclicGraph, (mu, nu, nu_p): (usize, usize, usize)) -> Error {
    Error::InvalidPotentialKey {
        mu,
        nu,
        nu_p,
        prev: if mu < g.n() { g.prev(mu) } else { mu },
    }
}

fn key_valid(g: &DirectedCyclicGraph, (mu, nu, nu_p): (usize, usize, usize)) -> bool {
    mu < g.n() && g.contains(mu, nu) && g.contains(g.prev(mu), nu_p)
}

impl PotentialCoefficients {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Validated construction; duplicate keys are rejected.
    pub fn new(
        g: &DirectedCyclicGraph,
        entries: impl IntoIterator<Item = ((usize, usize, usize), C64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (key, v) in entries {
            if !key_valid(g, key) {
                return Err(key_error(g, key));
            }
            if map.insert(key, v).is_some() {
                return Err(Error::DuplicatePotentialKey(key.0, key.1, key.2));
            }
        }
        Ok(Self { entries: map })
    }

    /// Every valid key set to `1`.
    pub fn unit(g: &DirectedCyclicGraph) -> Self {
        Self::from_fn(g, |_, _, _| C64::new(1.0, 0.0))
    }

    /// Every valid key set to `value(μ, ν, ν')`.
    pub fn from_fn(g: &DirectedCyclicGraph, mut value: impl FnMut(usize, usize, usize) -> C64) -> Self {
        let mut entries = BTreeMap::new();
        for &(mu, nu) in g.edges() {
            for e in g.edges_from(g.prev(mu)) {
                let nu_p = g.target(e);
                entries.insert((mu, nu, nu_p), value(mu, nu, nu_p));
            }
        }
        Self { entries }
    }

    pub fn get(&self, mu: usize, nu: usize, nu_p: usize) -> C64 {
        self.entries.get(&(mu, nu, nu_p)).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize, usize), &C64)> {
        self.entries.iter()
    }

    pub fn validate(&self, g: &DirectedCyclicGraph) -> Result<()> {
        match self.entries.keys().find(|k| !key_valid(g, **k)) {
            Some(k) => Err(key_error(g, *k)),
            None => Ok(()),
        }
    }
}

/// `∇₀(χ_e) = θ ⊗ χ_e = ξ_{s(e)+1→s(e)} ⊗ χ_e`, the identity pattern.
pub fn base_connection(g: &DirectedCyclicGraph) -> DenseOperator {
    DenseOperator::identity(g.num_edges(), Space::Top).retagged(Space::Top, Space::Bottom)
}

/// Entry `(e', e) = c^{s(e)}_{t(e), t(e')}` when `s(e') = s(e) - 1`.
pub fn zeta_operator(g: &DirectedCyclicGraph, c: &PotentialCoefficients) -> Result<DenseOperator> {
    c.validate(g)?;
    let m = g.num_edges();
    let mut z = DenseOperator::zeros(m, m, Space::Top, Space::Bottom);
    for e in 0..m {
        let (mu, nu) = g.edges()[e];
        for ep in g.edges_from(g.prev(mu)) {
            z.set(ep, e, c.get(mu, nu, g.target(ep)));
        }
    }
    Ok(z)
}

/// `∂̄ = ∇₀ + ζ : L²(E) → L²(Ω^{0,1} ⊗ E)`.
pub fn dbar(g: &DirectedCyclicGraph, c: &PotentialCoefficients) -> Result<DenseOperator> {
    base_connection(g).try_add(&zeta_operator(g, c)?)
}

/// Extend a top-to-bottom operator to `H` as its lower-left block; the
/// extension of `∂̄` to the bottom block is zero.
pub fn embed_lower(op: &DenseOperator) -> DenseOperator {
    let m = op.cols();
    let mut full = DenseOperator::zeros(2 * m, 2 * m, Space::Full, Space::Full);
    for i in 0..op.rows() {
        for j in 0..m {
            full.set(m + i, j, op.get(i, j));
        }
    }
    full
}

/// `L = ∂̄†∂̄` on `L²(E)`.
pub fn laplacian(g: &DirectedCyclicGraph, c: &PotentialCoefficients) -> Result<DenseOperator> {
    let d = dbar(g, c)?;
    d.adjoint().compose(&d)
}

/// Unit-potential Laplacian evaluated pointwise:
/// `L f(e) = f(e) + deg(s(e)-1) Σ_{s(e')=s(e)} f(e') + Σ_{s(e)=s(e'')+1} f(e'')
/// + Σ_{s(e)=s(e''')-1} f(e''')`.
pub fn apply_laplacian_unit(g: &DirectedCyclicGraph, f: &EdgeFunction) -> Result<EdgeFunction> {
    if f.len() != g.num_edges() {
        return Err(Error::DimensionMismatch {
            expected: g.num_edges(),
            found: f.len(),
        });
    }
    let n = g.n();
    let fv = f.values();
    // Σ f over edges sourced at each vertex
    let mut by_source = vec![C64::new(0.0, 0.0); n];
    for (e, v) in fv.iter().enumerate() {
        by_source[g.source(e)] += v;
    }
    let out = (0..g.num_edges())
        .map(|e| {
            let s = g.source(e);
            fv[e]
                + by_source[s] * g.out_degree(g.prev(s)) as f64
                + by_source[g.prev(s)]
                + by_source[g.next(s)]
        })
        .collect();
    Ok(EdgeFunction::new(out))
}

/// Closed-form basis actions of the adjoints and of the four composite
/// pieces of the Laplacian, assembled by enumerating edges rather than by
/// matrix products.
pub mod closed_form {
    use super::*;

    /// `∇₀†(ξ_{μ+1→μ} ⊗ χ_{μ→ν}) = χ_{μ→ν}`.
    pub fn nabla0_adjoint(g: &DirectedCyclicGraph) -> DenseOperator {
        let m = g.num_edges();
        let mut a = DenseOperator::zeros(m, m, Space::Bottom, Space::Top);
        for e in 0..m {
            a.set(e, e, C64::new(1.0, 0.0));
        }
        a
    }

    /// `ζ†(ξ_{μ+1→μ} ⊗ χ_{μ→ν}) = Σ_{ν'} conj(c^{μ+1}_{ν',ν}) χ_{μ+1→ν'}`.
    pub fn zeta_adjoint(g: &DirectedCyclicGraph, c: &PotentialCoefficients) -> DenseOperator {
        let m = g.num_edges();
        let mut a = DenseOperator::zeros(m, m, Space::Bottom, Space::Top);
        for (col, &(mu, nu)) in g.edges().iter().enumerate() {
            let up = g.next(mu);
            for row in g.edges_from(up) {
                a.set(row, col, c.get(up, g.target(row), nu).conj());
            }
        }
        a
    }

    /// `∇₀†∇₀ = Id`.
    pub fn nabla_nabla(g: &DirectedCyclicGraph) -> DenseOperator {
        DenseOperator::identity(g.num_edges(), Space::Top)
    }

    /// `∇₀†ζ(χ_{μ→ν}) = Σ_{ν'} c^μ_{ν,ν'} χ_{μ-1→ν'}`.
    pub fn nabla_zeta(g: &DirectedCyclicGraph, c: &PotentialCoefficients) -> DenseOperator {
        let m = g.num_edges();
        let mut a = DenseOperator::zeros(m, m, Space::Top, Space::Top);
        for (col, &(mu, nu)) in g.edges().iter().enumerate() {
            for row in g.edges_from(g.prev(mu)) {
                a.add_at(row, col, c.get(mu, nu, g.target(row)));
            }
        }
        a
    }

    /// `ζ†∇₀(χ_{μ→ν}) = Σ_{ν'} conj(c^{μ+1}_{ν',ν}) χ_{μ+1→ν'}`.
    pub fn zeta_nabla(g: &DirectedCyclicGraph, c: &PotentialCoefficients) -> DenseOperator {
        let m = g.num_edges();
        let mut a = DenseOperator::zeros(m, m, Space::Top, Space::Top);
        for (col, &(mu, nu)) in g.edges().iter().enumerate() {
            let up = g.next(mu);
            for row in g.edges_from(up) {
                a.add_at(row, col, c.get(up, g.target(row), nu).conj());
            }
        }
        a
    }

    /// `ζ†ζ(χ_{μ→ν}) = Σ_{μ-1→ν', μ→ν''} c^μ_{ν,ν'} conj(c^μ_{ν'',ν'}) χ_{μ→ν''}`.
    pub fn zeta_zeta(g: &DirectedCyclicGraph, c: &PotentialCoefficients) -> DenseOperator {
        let m = g.num_edges();
        let mut a = DenseOperator::zeros(m, m, Space::Top, Space::Top);
        for (col, &(mu, nu)) in g.edges().iter().enumerate() {
            for mid in g.edges_from(g.prev(mu)) {
                let nu_p = g.target(mid);
                for row in g.edges_from(mu) {
                    let nu_pp = g.target(row);
                    a.add_at(row, col, c.get(mu, nu, nu_p) * c.get(mu, nu_pp, nu_p).conj());
                }
            }
        }
        a
    }

    /// Sum of the four composite pieces.
    pub fn laplacian(g: &DirectedCyclicGraph, c: &PotentialCoefficients) -> DenseOperator {
        let parts = [nabla_zeta(g, c), zeta_nabla(g, c), zeta_zeta(g, c)];
        parts
            .iter()
            .fold(nabla_nabla(g), |acc, p| acc.try_add(p).expect("same shape"))
    }

    /// Unit-potential basis action: `(1 + deg(μ-1))` on `χ_{μ→ν}`,
    /// `deg(μ-1)` on `χ_{μ→ν'}` for `ν' ≠ ν`, and `1` on every
    /// `χ_{μ±1→ν'}`.
    pub fn laplacian_unit_basis(g: &DirectedCyclicGraph) -> DenseOperator {
        let m = g.num_edges();
        let mut a = DenseOperator::zeros(m, m, Space::Top, Space::Top);
        for (col, &(mu, _)) in g.edges().iter().enumerate() {
            let d = g.out_degree(g.prev(mu)) as f64;
            for row in g.edges_from(mu) {
                let v = if row == col { 1.0 + d } else { d };
                a.add_at(row, col, C64::new(v, 0.0));
            }
            for row in g.edges_from(g.prev(mu)).chain(g.edges_from(g.next(mu))) {
                a.add_at(row, col, C64::new(1.0, 0.0));
            }
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    fn real_matrix(m: &DenseOperator) -> Vec<Vec<f64>> {
        (0..m.rows()).map(|i| m.row(i).iter().map(|v| v.re).collect()).collect()
    }

    #[test]
    fn potential_keys_validated() {
        let g = DirectedCyclicGraph::directed_ngon(3).unwrap();
        // edges 0->1, 1->2, 2->0; key (1, 2, 1) needs 1->2 and 0->1
        assert!(PotentialCoefficients::new(&g, [((1, 2, 1), one())]).is_ok());
        let err = PotentialCoefficients::new(&g, [((1, 2, 2), one())]).unwrap_err();
        assert!(matches!(err, Error::InvalidPotentialKey { mu: 1, nu: 2, nu_p: 2, prev: 0 }));
        assert!(PotentialCoefficients::new(&g, [((1, 2, 1), one()), ((1, 2, 1), one())]).is_err());
        assert_eq!(PotentialCoefficients::unit(&g).len(), 3);
    }

    #[test]
    fn base_connection_is_identity_pattern() {
        let g = DirectedCyclicGraph::directed_ngon(3).unwrap();
        let b = base_connection(&g);
        let x = b.apply(g.chi(0, 1).unwrap().values()).unwrap();
        assert_eq!(x, vec![one(), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);

        // oracle: expand θ = Σ_μ ξ_{μ+1→μ} and keep the term whose right
        // vertex μ matches the source of χ_e
        let m = g.num_edges();
        let mut expanded = DenseOperator::zeros(m, m, Space::Top, Space::Bottom);
        for e in 0..m {
            for mu in 0..g.n() {
                if mu == g.source(e) {
                    expanded.add_at(e, e, one());
                }
            }
        }
        assert_eq!(b, expanded);
        let empty = DirectedCyclicGraph::new(3, []).unwrap();
        assert_eq!(base_connection(&empty).rows(), 0);
    }

    #[test]
    fn zeta_examples() {
        let g = DirectedCyclicGraph::directed_ngon(3).unwrap();
        let z = zeta_operator(&g, &PotentialCoefficients::unit(&g)).unwrap();
        let out = z.apply(g.chi(1, 2).unwrap().values()).unwrap();
        // ξ_{1→0} ⊗ χ_{0→1}: bottom coordinate of edge 0->1
        assert_eq!(out, g.chi(0, 1).unwrap().values());
        assert_eq!(
            zeta_operator(&g, &PotentialCoefficients::zero()).unwrap().frobenius_norm(),
            0.0
        );

        let b = DirectedCyclicGraph::bidirected_ngon(3).unwrap();
        let z = zeta_operator(&b, &PotentialCoefficients::unit(&b)).unwrap();
        let out = EdgeFunction::new(z.apply(b.chi(0, 1).unwrap().values()).unwrap());
        let expect = &b.chi(2, 0).unwrap() + &b.chi(2, 1).unwrap();
        assert_eq!(out, expect);
    }

    #[test]
    fn dbar_examples() {
        let g = DirectedCyclicGraph::directed_ngon(3).unwrap();
        assert_eq!(dbar(&g, &PotentialCoefficients::zero()).unwrap(), base_connection(&g));
        let d = dbar(&g, &PotentialCoefficients::unit(&g)).unwrap();
        let col = d.column(g.edge_index(1, 2).unwrap());
        let expect = &g.chi(1, 2).unwrap() + &g.chi(0, 1).unwrap();
        assert_eq!(col, expect.values());
        let full = embed_lower(&d);
        assert_eq!(full.compose(&full).unwrap().frobenius_norm(), 0.0);
    }

    #[test]
    fn adjoint_examples() {
        let g = DirectedCyclicGraph::bidirected_ngon(4).unwrap();
        let c = PotentialCoefficients::from_fn(&g, |a, b, d| C64::new(a as f64 + 0.5, b as f64 - d as f64));
        assert_eq!(base_connection(&g).adjoint(), closed_form::nabla0_adjoint(&g));
        let z = zeta_operator(&g, &c).unwrap();
        assert!(z.adjoint().max_abs_diff(&closed_form::zeta_adjoint(&g, &c)) < 1e-15);
        assert_eq!(z.adjoint().adjoint(), z);
    }

    #[test]
    fn laplacian_examples() {
        let g = DirectedCyclicGraph::directed_ngon(3).unwrap();
        assert_eq!(
            laplacian(&g, &PotentialCoefficients::zero()).unwrap(),
            DenseOperator::identity(3, Space::Top)
        );
        let l = laplacian(&g, &PotentialCoefficients::unit(&g)).unwrap();
        assert_eq!(
            real_matrix(&l),
            vec![vec![2.0, 1.0, 1.0], vec![1.0, 2.0, 1.0], vec![1.0, 1.0, 2.0]]
        );
        let g4 = DirectedCyclicGraph::directed_ngon(4).unwrap();
        let l4 = laplacian(&g4, &PotentialCoefficients::unit(&g4)).unwrap();
        assert_eq!(real_matrix(&l4)[0], vec![2.0, 1.0, 0.0, 1.0]);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(l4.get(i, j), l4.get((i + 1) % 4, (j + 1) % 4));
            }
        }
    }

    #[test]
    fn unit_formula_examples() {
        let g = DirectedCyclicGraph::directed_ngon(3).unwrap();
        let out = apply_laplacian_unit(&g, &g.chi(0, 1).unwrap()).unwrap();
        let expect = &(&g.chi(0, 1).unwrap().scale(C64::new(2.0, 0.0)) + &g.chi(1, 2).unwrap()) + &g.chi(2, 0).unwrap();
        assert_eq!(out, expect);
        assert_eq!(apply_laplacian_unit(&g, &EdgeFunction::zeros(3)).unwrap(), EdgeFunction::zeros(3));
        for n in 3..10 {
            let g = DirectedCyclicGraph::directed_ngon(n).unwrap();
            let ones = EdgeFunction::new(vec![one(); n]);
            assert_eq!(apply_laplacian_unit(&g, &ones).unwrap(), ones.scale(C64::new(4.0, 0.0)));
        }
    }

    #[test]
    fn loops_and_sinks_are_handled() {
        // vertex 2 has no outgoing edges; vertex 0 has a loop
        let g = DirectedCyclicGraph::new(4, [(0, 0), (0, 1), (1, 3), (3, 2)]).unwrap();
        let c = PotentialCoefficients::unit(&g);
        let l = laplacian(&g, &c).unwrap();
        assert!(l.max_abs_diff(&closed_form::laplacian(&g, &c)) < 1e-14);
        assert!(l.max_abs_diff(&closed_form::laplacian_unit_basis(&g)) < 1e-14);
    }
}
