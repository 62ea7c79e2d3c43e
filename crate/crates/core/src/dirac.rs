//! The twisted Dolbeault-Dirac operator `D = ∂̄ + ∂̄†` on `H`, commutators
//! `[D, f]` with vertex functions, and the Connes distance between vertices.
//!
//! `[D, f]` consists of 2×2 blocks pairing top edge `e` with its bottom
//! partner, each with singular values `|f(s(e)) - f(s(e)+1)|`. Hence
//! `‖[D, f]‖ = max_e |f(s(e)) - f(s(e)+1)|` and the distance is the path
//! metric of the cycle edges `{λ, λ+1}` over vertices `λ` with an outgoing
//! edge. [`connes_distance`] uses this reduction;
//! [`connes_distance_numeric`] brackets the same supremum using only the
//! assembled matrices.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::VertexFunction;
use crate::connection::{dbar, PotentialCoefficients};
use crate::edge_module::DirectedCyclicGraph;
use crate::format::fmt_g17;
use crate::linalg;
use crate::operator::{DenseOperator, Space};
use crate::spectra::eig_selfadjoint;
use crate::{Error, Result, C64};

/// `[[0, ∂̄†], [∂̄, 0]]` on `H`, top block first.
pub fn dirac(g: &DirectedCyclicGraph, c: &PotentialCoefficients) -> Result<DenseOperator> {
    let d = dbar(g, c)?;
    let m = g.num_edges();
    let mut full = DenseOperator::zeros(2 * m, 2 * m, Space::Full, Space::Full);
    for i in 0..m {
        for j in 0..m {
            let v = d.get(i, j);
            full.set(m + i, j, v);
            full.set(j, m + i, v.conj());
        }
    }
    Ok(full)
}

/// Left action of `f` on `H`: top entry `e` scaled by `f(s(e))`, bottom
/// entry `e` by `f(s(e)+1)`, the left vertex of `ξ_{s(e)+1→s(e)}`.
pub fn function_action(g: &DirectedCyclicGraph, f: &VertexFunction) -> Result<Vec<C64>> {
    if f.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: f.len(),
        });
    }
    let m = g.num_edges();
    Ok((0..2 * m)
        .map(|k| {
            if k < m {
                f.at(g.source(k))
            } else {
                f.at(g.next(g.source(k - m)))
            }
        })
        .collect())
}

/// `[D, f] = D M_f - M_f D`.
pub fn commutator_with_function(
    g: &DirectedCyclicGraph,
    d: &DenseOperator,
    f: &VertexFunction,
) -> Result<DenseOperator> {
    let diag = function_action(g, f)?;
    if d.rows() != diag.len() || d.cols() != diag.len() {
        return Err(Error::DimensionMismatch {
            expected: diag.len(),
            found: d.rows(),
        });
    }
    Ok(DenseOperator::from_fn(d.rows(), d.cols(), d.domain(), d.codomain(), |i, j| {
        d.get(i, j) * diag[j] - diag[i] * d.get(i, j)
    }))
}

/// Largest singular value, `sqrt(λ_max(M†M))`.
pub fn operator_norm(m: &DenseOperator) -> Result<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    let gram = m.adjoint().compose(m)?;
    let spec = eig_selfadjoint(&gram, false)?;
    Ok(spec.max().unwrap_or(0.0).max(0.0).sqrt())
}

/// A distance that may be unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceValue {
    Finite(f64),
    Infinite,
}

impl DistanceValue {
    pub fn is_finite(self) -> bool {
        matches!(self, DistanceValue::Finite(_))
    }

    pub fn as_f64(self) -> f64 {
        match self {
            DistanceValue::Finite(v) => v,
            DistanceValue::Infinite => f64::INFINITY,
        }
    }

    /// JSON token: a number, or the string `"inf"`.
    pub fn to_json(self) -> String {
        match self {
            DistanceValue::Finite(v) => fmt_g17(v),
            DistanceValue::Infinite => "\"inf\"".into(),
        }
    }
}

impl fmt::Display for DistanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceValue::Finite(v) => f.write_str(&fmt_g17(*v)),
            DistanceValue::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceResult {
    pub value: DistanceValue,
    /// A function attaining the supremum, when finite.
    pub witness: Option<VertexFunction>,
}

/// Undirected unit edges `{λ, λ+1}` for every `λ` with out-degree ≥ 1.
pub fn constraint_edges(g: &DirectedCyclicGraph) -> Vec<(usize, usize)> {
    (0..g.n())
        .filter(|&l| g.out_degree(l) > 0)
        .map(|l| (l, g.next(l)))
        .collect()
}

/// Breadth-first hop counts from `from` in the constraint graph.
fn constraint_bfs(g: &DirectedCyclicGraph, from: usize) -> Vec<Option<usize>> {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for (a, b) in constraint_edges(g) {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut dist = vec![None; n];
    dist[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].expect("visited");
        for &w in &adj[v] {
            if dist[w].is_none() {
                dist[w] = Some(dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Connes distance between the pure states at `mu` and `nu`, with the
/// witness `f(λ) = min(dist(λ, ν), dist(μ, ν))`.
pub fn connes_distance(g: &DirectedCyclicGraph, mu: usize, nu: usize) -> Result<DistanceResult> {
    let n = g.n();
    for v in [mu, nu] {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    let from_nu = constraint_bfs(g, nu);
    let Some(d) = from_nu[mu] else {
        return Ok(DistanceResult {
            value: DistanceValue::Infinite,
            witness: None,
        });
    };
    let witness = VertexFunction::from_real(
        &from_nu
            .iter()
            .map(|h| h.map_or(d, |h| h.min(d)) as f64)
            .collect::<Vec<_>>(),
    );
    Ok(DistanceResult {
        value: DistanceValue::Finite(d as f64),
        witness: Some(witness),
    })
}

/// Row-major all-pairs distance matrix.
pub fn all_pairs_distance(g: &DirectedCyclicGraph) -> Vec<Vec<DistanceValue>> {
    (0..g.n())
        .map(|mu| {
            (0..g.n())
                .map(|nu| connes_distance(g, mu, nu).expect("in range").value)
                .collect()
        })
        .collect()
}

/// `{"n":N,"distances":[[...]]}` with `"inf"` for unbounded entries.
pub fn distance_matrix_json(matrix: &[Vec<DistanceValue>]) -> String {
    let rows: Vec<String> = matrix
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|d| d.to_json()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("{{\"n\":{},\"distances\":[{}]}}", matrix.len(), rows.join(","))
}

/// Bracket `lower ≤ d(μ, ν) ≤ upper` from the numeric oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericInterval {
    pub lower: f64,
    /// `f64::INFINITY` when the relaxation is unbounded.
    pub upper: f64,
}

impl NumericInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.lower - tol <= x && x <= self.upper + tol
    }
}

/// Default Newton iteration budget per restart.
pub const NUMERIC_ITERS: usize = 10_000;
/// Random restarts of the interior ascent.
pub const NUMERIC_RESTARTS: usize = 8;
/// Duality-gap target of the barrier path.
const GAP_TARGET: f64 = 1e-9;
/// Newton steps per barrier parameter.
const CENTERING_STEPS: usize = 100;
/// Objective size beyond which the supremum is treated as unbounded.
const UNBOUNDED: f64 = 1e9;

/// Independent numeric bracket of the Connes distance over real `f`.
///
/// The generators `C_λ = [D, δ_λ]` are assembled from `D`, and
/// `[D, f] = Σ_λ f(λ) C_λ`.
///
/// * Upper bound: for each basis vector `x_j` and row `i`,
///   `|([D, f] x_j)_i| ≤ ‖[D, f]‖ ≤ 1`. Rows that read `α (f(a) - f(b))`
///   give difference constraints `|f(a) - f(b)| ≤ 1/|α|`; the maximum of
///   `f(μ) - f(ν)` under them is a shortest path (Floyd-Warshall).
/// * Lower bound: log-det barrier ascent of `t f(μ) + Σ log det(I - M†M)`
///   over the block-diagonal pieces `M` of `[D, f]`, with damped Newton
///   steps and `t` increased until the gap is below `1e-9`, from seeded
///   random starts. The best end point is normalized by
///   `max(1, ‖[D, f]‖)` with the full operator norm, so the reported value
///   is attained by a feasible function.
pub fn connes_distance_numeric(
    g: &DirectedCyclicGraph,
    c: &PotentialCoefficients,
    mu: usize,
    nu: usize,
    iters: usize,
    seed: u64,
) -> Result<NumericInterval> {
    let n = g.n();
    for v in [mu, nu] {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    if mu == nu {
        return Ok(NumericInterval { lower: 0.0, upper: 0.0 });
    }
    let d = dirac(g, c)?;
    let gens = (0..n)
        .map(|l| commutator_with_function(g, &d, &VertexFunction::delta(n, l)))
        .collect::<Result<Vec<_>>>()?;
    let upper = path_relaxation_bound(&gens, n, mu, nu);
    let blocks = Blocks::decompose(&gens);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..NUMERIC_RESTARTS {
        let start: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = barrier_ascent(&blocks, n, mu, nu, start, iters);
        let value = (f[mu] - f[nu]).abs() / blocks.norm(&f).max(1.0);
        if best.as_ref().map_or(true, |(v, _)| value > *v) {
            best = Some((value, f));
        }
    }
    let f = best.map(|(_, f)| f).unwrap_or_else(|| vec![0.0; n]);
    let norm = operator_norm(&commutator_with_function(g, &d, &VertexFunction::from_real(&f))?)?;
    let lower = (f[mu] - f[nu]).abs() / norm.max(1.0);
    Ok(NumericInterval { lower, upper })
}

fn path_relaxation_bound(gens: &[DenseOperator], n: usize, mu: usize, nu: usize) -> f64 {
    let mut w = vec![f64::INFINITY; n * n];
    for v in 0..n {
        w[v * n + v] = 0.0;
    }
    let dim = gens.first().map_or(0, |c| c.rows());
    for i in 0..dim {
        for j in 0..dim {
            let coeffs: Vec<(usize, C64)> = gens
                .iter()
                .enumerate()
                .map(|(l, c)| (l, c.get(i, j)))
                .filter(|(_, a)| a.norm() > 0.0)
                .collect();
            if let [(a, x), (b, y)] = coeffs[..] {
                if (x + y).norm() <= 1e-12 * x.norm() {
                    let bound = 1.0 / x.norm();
                    for (p, q) in [(a, b), (b, a)] {
                        w[p * n + q] = w[p * n + q].min(bound);
                    }
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = w[i * n + k] + w[k * n + j];
                if via < w[i * n + j] {
                    w[i * n + j] = via;
                }
            }
        }
    }
    w[mu * n + nu]
}

/// One diagonal block of the generators, restricted to the vertices whose
/// generator is nonzero there.
struct Piece {
    k: usize,
    /// Number of identical blocks represented.
    mult: f64,
    active: Vec<usize>,
    mats: Vec<Vec<C64>>,
    adjs: Vec<Vec<C64>>,
    /// `C_a†C_b + C_b†C_a`, indexed `a * active.len() + b`.
    cross: Vec<Vec<C64>>,
}

impl Piece {
    fn assemble(&self, f: &[f64]) -> Vec<C64> {
        let mut m = vec![C64::new(0.0, 0.0); self.k * self.k];
        for (c, &l) in self.mats.iter().zip(&self.active) {
            if f[l] != 0.0 {
                for (o, v) in m.iter_mut().zip(c) {
                    *o += v * f[l];
                }
            }
        }
        m
    }
}

/// Simultaneous block-diagonal structure of the generators.
struct Blocks {
    pieces: Vec<Piece>,
}

impl Blocks {
    fn decompose(gens: &[DenseOperator]) -> Self {
        let dim = gens.first().map_or(0, |c| c.rows());
        let mut parent: Vec<usize> = (0..dim).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut touched = vec![false; dim];
        for c in gens {
            for i in 0..dim {
                for j in 0..dim {
                    if c.get(i, j).norm() > 0.0 {
                        touched[i] = true;
                        touched[j] = true;
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        if a != b {
                            parent[a] = b;
                        }
                    }
                }
            }
        }
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for i in (0..dim).filter(|&i| touched[i]) {
            let r = find(&mut parent, i);
            match groups.iter_mut().find(|(root, _)| *root == r) {
                Some((_, idx)) => idx.push(i),
                None => groups.push((r, vec![i])),
            }
        }
        let mut pieces: Vec<Piece> = Vec::new();
        for piece in groups.into_iter().map(|(_, idx)| {
                let k = idx.len();
                let mut active = Vec::new();
                let mut mats = Vec::new();
                for (l, c) in gens.iter().enumerate() {
                    let m: Vec<C64> = idx
                        .iter()
                        .flat_map(|&i| idx.iter().map(move |&j| c.get(i, j)))
                        .collect();
                    if m.iter().any(|z| z.norm() > 0.0) {
                        active.push(l);
                        mats.push(m);
                    }
                }
                let adjs: Vec<Vec<C64>> = mats.iter().map(|m| adjoint(m, k)).collect();
                let na = active.len();
                let cross = (0..na * na)
                    .map(|ab| {
                        let (a, b) = (ab / na, ab % na);
                        let x = mat_mul(&adjs[a], &mats[b], k);
                        let y = mat_mul(&adjs[b], &mats[a], k);
                        x.iter().zip(&y).map(|(x, y)| x + y).collect()
                    })
                    .collect();
                Piece {
                    k,
                    mult: 1.0,
                    active,
                    mats,
                    adjs,
                    cross,
                }
            }) {
            match pieces
                .iter_mut()
                .find(|p| p.k == piece.k && p.active == piece.active && p.mats == piece.mats)
            {
                Some(p) => p.mult += 1.0,
                None => pieces.push(piece),
            }
        }
        Self { pieces }
    }

    fn barrier_parameter(&self) -> f64 {
        self.pieces.iter().map(|p| 2.0 * p.k as f64 * p.mult).sum()
    }

    /// `(M, chol(I - M†M))` for each block, or `None` if some block has
    /// `‖M‖ ≥ 1`.
    fn slacks(&self, f: &[f64]) -> Option<Vec<(Vec<C64>, Vec<C64>)>> {
        self.pieces
            .iter()
            .map(|p| {
                let m = p.assemble(f);
                let s = identity_minus_gram(&m, p.k);
                linalg::cholesky(&s, p.k).map(|l| (m, l))
            })
            .collect()
    }

    fn log_barrier(&self, f: &[f64]) -> Option<f64> {
        let factors = self.slacks(f)?;
        Some(
            factors
                .iter()
                .zip(&self.pieces)
                .map(|((_, l), p)| p.mult * linalg::cholesky_logdet(l, p.k))
                .sum(),
        )
    }

    /// Exact `max_B ‖M_B‖`.
    fn norm(&self, f: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|p| {
                let k = p.k;
                let m = p.assemble(f);
                let op = DenseOperator::from_fn(k, k, Space::Full, Space::Full, |i, j| m[i * k + j]);
                operator_norm(&op).unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max)
    }
}

fn identity_minus_gram(m: &[C64], k: usize) -> Vec<C64> {
    let mut s = vec![C64::new(0.0, 0.0); k * k];
    for i in 0..k {
        for j in 0..k {
            let g: C64 = (0..k).map(|r| m[r * k + i].conj() * m[r * k + j]).sum();
            s[i * k + j] = if i == j { C64::new(1.0, 0.0) - g } else { -g };
        }
    }
    s
}

fn mat_mul(a: &[C64], b: &[C64], k: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); k * k];
    for i in 0..k {
        for r in 0..k {
            let x = a[i * k + r];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..k {
                out[i * k + j] += x * b[r * k + j];
            }
        }
    }
    out
}

fn adjoint(a: &[C64], k: usize) -> Vec<C64> {
    (0..k * k).map(|idx| a[(idx % k) * k + idx / k].conj()).collect()
}

fn trace_prod(a: &[C64], b: &[C64], k: usize) -> f64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..k {
        for j in 0..k {
            s += a[i * k + j] * b[j * k + i];
        }
    }
    s.re
}

/// Damped-Newton path following on `t f(μ) + log-barrier`, with `f(ν)`
/// pinned to zero.
fn barrier_ascent(blocks: &Blocks, n: usize, mu: usize, nu: usize, start: Vec<f64>, iters: usize) -> Vec<f64> {
    let free: Vec<usize> = (0..n).filter(|&v| v != nu).collect();
    let p = free.len();
    let mut f = start;
    f[nu] = 0.0;
    let n0 = blocks.norm(&f);
    if n0 > 0.5 {
        f.iter_mut().for_each(|v| *v *= 0.5 / n0);
    }

    let m_total = blocks.barrier_parameter();
    let mut t = 1.0;
    let mut steps = 0;
    let objective = |f: &[f64], t: f64| blocks.log_barrier(f).map(|b| t * f[mu] + b);

    'outer: loop {
        for _ in 0..CENTERING_STEPS {
            if steps >= iters {
                break 'outer;
            }
            steps += 1;
            let Some((grad, hess)) = derivatives(blocks, &f, &free, mu, t) else {
                break 'outer;
            };
            // solve (-H + ridge) Δ = grad
            let scale = (0..p).map(|i| -hess[i * p + i]).fold(0.0, f64::max).max(1.0);
            let mut neg = hess.iter().map(|h| -h).collect::<Vec<_>>();
            for i in 0..p {
                neg[i * p + i] += 1e-13 * scale;
            }
            let Some(delta) = linalg::solve_spd(&neg, &grad) else {
                break 'outer;
            };
            let decrement: f64 = grad.iter().zip(&delta).map(|(a, b)| a * b).sum();
            if decrement < 1e-9 {
                break;
            }
            let base = objective(&f, t).expect("iterate is strictly feasible");
            let mut s = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let mut trial = f.clone();
                for (i, &v) in free.iter().enumerate() {
                    trial[v] += s * delta[i];
                }
                if let Some(val) = objective(&trial, t) {
                    if val >= base + 0.25 * s * decrement {
                        f = trial;
                        moved = true;
                        break;
                    }
                }
                s *= 0.5;
            }
            if !moved {
                break;
            }
            if (f[mu] - f[nu]).abs() > UNBOUNDED {
                break 'outer;
            }
        }
        if m_total / t < GAP_TARGET {
            break;
        }
        t *= 10.0;
    }
    f
}

/// Gradient and Hessian of `t f(μ) + Σ_B log det(I - M_B†M_B)` in the free
/// coordinates.
fn derivatives(blocks: &Blocks, f: &[f64], free: &[usize], mu: usize, t: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let p = free.len();
    let mut pos = vec![None; f.len()];
    for (i, &v) in free.iter().enumerate() {
        pos[v] = Some(i);
    }
    let mut grad: Vec<f64> = free.iter().map(|&v| if v == mu { t } else { 0.0 }).collect();
    let mut hess = vec![0.0; p * p];
    let factors = blocks.slacks(f)?;
    for (piece, (m, l)) in blocks.pieces.iter().zip(&factors) {
        let k = piece.k;
        let na = piece.active.len();
        let w = linalg::cholesky_inverse(l, k);
        let m_adj = adjoint(m, k);
        // W A_λ with A_λ = C_λ†M + M†C_λ
        let wa: Vec<Vec<C64>> = (0..na)
            .map(|a| {
                let x = mat_mul(&piece.adjs[a], m, k);
                let y = mat_mul(&m_adj, &piece.mats[a], k);
                let sum: Vec<C64> = x.iter().zip(&y).map(|(x, y)| x + y).collect();
                mat_mul(&w, &sum, k)
            })
            .collect();
        for a in 0..na {
            let Some(i) = pos[piece.active[a]] else { continue };
            grad[i] -= piece.mult * (0..k).map(|r| wa[a][r * k + r].re).sum::<f64>();
            for b in 0..na {
                let Some(j) = pos[piece.active[b]] else { continue };
                hess[i * p + j] -= piece.mult * (trace_prod(&wa[a], &wa[b], k) + trace_prod(&w, &piece.cross[a * na + b], k));
            }
        }
    }
    Some((grad, hess))
}
