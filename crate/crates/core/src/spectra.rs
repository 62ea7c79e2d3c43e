//! Self-adjoint eigensolver and the closed-form spectra of the unit
//! potential Laplacian on polygons and circulant regular graphs.

use std::f64::consts::PI;

use crate::edge_module::DirectedCyclicGraph;
use crate::format::fmt_g17;
use crate::operator::DenseOperator;
use crate::{Error, Result, C64};

/// Relative off-diagonal mass at which Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Ascending eigenvalues, optionally with orthonormal eigenvectors stored
/// column by column in the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<DenseOperator>,
}

impl Spectrum {
    pub fn max(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }

    pub fn min(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    /// `{"eigenvalues":[...]}` with 17 significant digits.
    pub fn to_json(&self) -> String {
        let vals: Vec<String> = self.eigenvalues.iter().map(|v| fmt_g17(*v)).collect();
        format!("{{\"eigenvalues\":[{}]}}", vals.join(","))
    }
}

/// Full spectrum of a self-adjoint matrix by cyclic complex Jacobi
/// rotations, sweeping pairs `(p, q)` with `p < q` in row order.
pub fn eig_selfadjoint(m: &DenseOperator, want_vectors: bool) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let norm = m.frobenius_norm();
    let asym = m.hermitian_defect();
    if asym > 1e-9 * norm {
        return Err(Error::NotSelfAdjoint { asymmetry: asym, norm });
    }
    // exact Hermitian part
    let mut a: Vec<C64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            (m.get(i, j) + m.get(j, i).conj()) * 0.5
        })
        .collect();
    let mut v: Vec<C64> = if want_vectors {
        (0..n * n)
            .map(|k| if k / n == k % n { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
            .collect()
    } else {
        Vec::new()
    };

    let off = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let threshold = JACOBI_TOL * norm;
    let mut sweeps = 0;
    while off(&a) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off: off(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = want_vectors.then(|| {
        DenseOperator::from_fn(n, n, m.domain(), m.codomain(), |i, j| v[i * n + order[j]])
    });
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Annihilate `a[p][q]` with the unitary `J` acting on columns `p, q`:
/// `J_pp = c`, `J_pq = s e^{iφ}`, `J_qp = -s e^{-iφ}`, `J_qq = c`, where
/// `a_pq = |a_pq| e^{iφ}`. Then `a ← J† a J` and `v ← v J`.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let jpp = C64::new(c, 0.0);
    let jqq = C64::new(c, 0.0);
    let jpq = phase * s;
    let jqp = -phase.conj() * s;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * jpp + akq * jqp;
        a[k * n + q] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
        a[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[p * n + q] = C64::new(0.0, 0.0);
    a[q * n + p] = C64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;

    if !v.is_empty() {
        for k in 0..n {
            let vkp = v[k * n + p];
            let vkq = v[k * n + q];
            v[k * n + p] = vkp * jpp + vkq * jqp;
            v[k * n + q] = vkp * jpq + vkq * jqq;
        }
    }
}

/// `{2 + 2 cos(2πj/n) : 0 ≤ j < n}`, ascending.
pub fn ngon_closed_form(n: usize) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    let mut vals: Vec<f64> = (0..n)
        .map(|j| 2.0 + 2.0 * (2.0 * PI * j as f64 / n as f64).cos())
        .collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Largest Gershgorin bound `max_i (|a_ii| + Σ_{j≠i} |a_ij|)`.
pub fn gershgorin_radius(m: &DenseOperator) -> f64 {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|a| a.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Edges `μ → μ+1, …, μ → μ+d` for every vertex.
pub fn make_circulant_regular(n: usize, d: usize) -> Result<DirectedCyclicGraph> {
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    if d == 0 || d >= n {
        return Err(Error::DegreeOutOfRange { n, d, max: n - 1 });
    }
    DirectedCyclicGraph::new(n, (0..n).flat_map(|m| (1..=d).map(move |k| (m, (m + k) % n))))
}

/// `‖M v - λ v‖` for each eigenpair.
pub fn residuals(m: &DenseOperator, spec: &Spectrum) -> Option<Vec<f64>> {
    let vecs = spec.eigenvectors.as_ref()?;
    Some(
        spec.eigenvalues
            .iter()
            .enumerate()
            .map(|(j, &lam)| {
                let x = vecs.column(j);
                let mx = m.apply(&x).expect("square");
                mx.iter()
                    .zip(&x)
                    .map(|(a, b)| (a - b * lam).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .collect(),
    )
}
