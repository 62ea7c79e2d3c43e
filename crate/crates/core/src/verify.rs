//! Named invariant checks over a user graph and built-in graph families.
//!
//! Each check reports a measured residual and passes when the residual is
//! within its tolerance. The exhaustive calculus and module suites cover
//! `n = 3..=16`; the polygon spectra cover `n = 3..=64`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{state_tau, BasisForm, Calculus, GradedForm, Side, VertexFunction};
use crate::connection::{self, closed_form, PotentialCoefficients};
use crate::dirac::{self, DistanceValue};
use crate::edge_module::{complete_edges, DirectedCyclicGraph, EdgeFunction};
use crate::format::fmt_g17;
use crate::operator::{DenseOperator, Space};
use crate::random;
use crate::spectra::{self, eig_selfadjoint};
use crate::{Result, C64};

/// Largest vertex count of the exhaustive suites.
pub const EXHAUSTIVE_MAX_N: usize = 16;
/// Largest polygon in the spectral checks.
pub const SPECTRAL_MAX_N: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: &'static str,
    pub pass: bool,
    pub residual: f64,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{} {} {}", self.id, status, fmt_g17(self.residual))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Replaces every default tolerance when set.
    pub tol: Option<f64>,
    pub seed: u64,
    /// Negative control for the Hodge checks.
    #[doc(hidden)]
    pub corrupt_wedge_sign: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            tol: None,
            seed: 0,
            corrupt_wedge_sign: false,
        }
    }
}

struct Ctx<'a> {
    cfg: &'a VerifyConfig,
    rng: ChaCha8Rng,
    out: Vec<Check>,
}

impl Ctx<'_> {
    fn record(&mut self, id: &'static str, residual: f64, tol: f64, extra: bool) {
        let tol = self.cfg.tol.unwrap_or(tol);
        let pass = extra && residual.is_finite() && residual <= tol;
        self.out.push(Check { id, pass, residual });
    }

    fn calculus(&self, n: usize) -> Result<Calculus> {
        if self.cfg.corrupt_wedge_sign {
            Calculus::with_corrupted_wedge_sign(n)
        } else {
            Calculus::new(n)
        }
    }
}

/// Run every suite on `g` with potential `c` and on the built-in families.
pub fn run(g: &DirectedCyclicGraph, c: &PotentialCoefficients, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut ctx = Ctx {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        out: Vec::new(),
    };
    let mut sizes: Vec<usize> = (3..=EXHAUSTIVE_MAX_N).collect();
    if !sizes.contains(&g.n()) {
        sizes.push(g.n());
    }
    calculus_suite(&mut ctx, &sizes)?;

    let mut graphs = vec![(g.clone(), c.clone())];
    for n in 3..=EXHAUSTIVE_MAX_N {
        let density = ctx.rng.gen_range(0.2..0.6);
        let h = random::graph(&mut ctx.rng, n, density, false);
        let p = random::potential(&mut ctx.rng, &h);
        graphs.push((h, p));
    }
    module_suite(&mut ctx, &graphs)?;

    let mut small = vec![(g.clone(), c.clone())];
    for _ in 0..100 {
        let n = ctx.rng.gen_range(3..=8);
        let density = ctx.rng.gen_range(0.15..0.7);
        let h = random::graph(&mut ctx.rng, n, density, false);
        let p = random::potential(&mut ctx.rng, &h);
        small.push((h, p));
    }
    connection_suite(&mut ctx, &small)?;
    spectral_suite(&mut ctx, &small)?;
    dirac_suite(&mut ctx, g, c)?;
    Ok(ctx.out)
}

fn sign(p: usize, q: usize) -> f64 {
    if (p * q) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn calculus_suite(ctx: &mut Ctx, sizes: &[usize]) -> Result<()> {
    let (mut assoc, mut graded, mut deriv, mut leibniz) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut central, mut leak, mut square, mut basis_metric) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut full_rank = true;
    for &n in sizes {
        let calc = ctx.calculus(n)?;
        let basis: Vec<(BasisForm, GradedForm)> = calc.basis().into_iter().map(|b| (b, calc.form(b))).collect();
        for (ba, a) in &basis {
            let ja = calc.apply_j(a)?;
            let sa = calc.star_involution(a)?;
            for (bb, b) in &basis {
                let ab = calc.wedge(a, b)?;
                let lhs = calc.star_involution(&ab)?;
                let rhs = calc.wedge(&calc.star_involution(b)?, &sa)?.scale(C64::new(sign(ba.degree(), bb.degree()), 0.0));
                graded = graded.max(lhs.max_abs_diff(&rhs));

                let jl = calc.apply_j(&ab)?;
                let jr = &calc.wedge(&ja, b)? + &calc.wedge(a, &calc.apply_j(b)?)?;
                deriv = deriv.max(jl.max_abs_diff(&jr));

                if ba.degree() + bb.degree() > 2 {
                    continue;
                }
                for (_, w) in &basis {
                    let left = calc.wedge(&ab, w)?;
                    let right = calc.wedge(a, &calc.wedge(b, w)?)?;
                    assoc = assoc.max(left.max_abs_diff(&right));
                }
            }
            if ba.degree() == 1 {
                // J² = -1 and J(ω∗) = (Jω)∗ on one-forms
                deriv = deriv.max(calc.apply_j(&ja)?.max_abs_diff(&-a));
                deriv = deriv.max(calc.apply_j(&sa)?.max_abs_diff(&calc.star_involution(&ja)?));
            }
            let want = if ba.degree() == 1 { -a } else { a.clone() };
            square = square.max(calc.hodge_star(&calc.hodge_star(a)?)?.max_abs_diff(&want));

            // g on basis forms: δ at the left vertex on the diagonal, zero off it
            for (bb, b) in &basis {
                let gv = calc.metric_g(a, b)?;
                let expect = if ba == bb {
                    let v = match *ba {
                        BasisForm::Delta(m) | BasisForm::Fwd(m) | BasisForm::Bwd(m) | BasisForm::Vol(m) => m,
                    };
                    VertexFunction::delta(n, v)
                } else {
                    VertexFunction::zeros(n)
                };
                basis_metric = basis_metric.max(gv.max_abs_diff(&expect));
            }
        }

        let one = VertexFunction::constant(n, C64::new(1.0, 0.0));
        leibniz = leibniz.max(calc.exterior_d(&one)?.max_abs());
        let kappa = calc.kahler_form();
        central = central.max(calc.star_involution(&kappa)?.max_abs_diff(&kappa));
        for _ in 0..20 {
            let f = random::vertex_function(&mut ctx.rng, n);
            let h = random::vertex_function(&mut ctx.rng, n);
            let lhs = calc.exterior_d(&(&f * &h))?;
            let rhs = &calc.bimodule_act(&h, &calc.exterior_d(&f)?, Side::Right)?
                + &calc.bimodule_act(&f, &calc.exterior_d(&h)?, Side::Left)?;
            leibniz = leibniz.max(lhs.max_abs_diff(&rhs));
            let fk = calc.bimodule_act(&f, &kappa, Side::Left)?;
            let kf = calc.bimodule_act(&f, &kappa, Side::Right)?;
            central = central.max(fk.max_abs_diff(&kf));
        }

        // Ω⁰ → Ω² under the Lefschetz map
        let mut mat = vec![C64::new(0.0, 0.0); n * n];
        for m in 0..n {
            let img = calc.lefschetz(&GradedForm::function(VertexFunction::delta(n, m)))?;
            leak = leak.max(img.degree_part(0).max_abs()).max(img.degree_part(1).max_abs());
            for r in 0..n {
                mat[r * n + m] = img.deg2[r];
            }
        }
        full_rank &= rank(&mut mat, n, 1e-9) == n;
    }
    ctx.record("calculus.wedge-associative", assoc, 1e-12, true);
    ctx.record("calculus.star-graded", graded, 1e-12, true);
    ctx.record("calculus.j-derivation", deriv, 1e-12, true);
    ctx.record("calculus.leibniz", leibniz, 1e-12, true);
    ctx.record("kahler.central-real", central, 1e-9, true);
    ctx.record("kahler.lefschetz-rank", leak, 1e-9, full_rank);
    ctx.record("hodge.star-square", square, 1e-9, true);
    ctx.record("hodge.metric-basis", basis_metric, 1e-9, true);

    let (mut negative, mut conj_sym) = (0.0f64, 0.0f64);
    for k in 0..=2 {
        for i in 0..1000 {
            let n = 3 + i % (EXHAUSTIVE_MAX_N - 2);
            let calc = ctx.calculus(n)?;
            let w = random::form(&mut ctx.rng, n).degree_part(k);
            let e = random::form(&mut ctx.rng, n).degree_part(k);
            for v in calc.metric_g(&w, &w)?.values() {
                negative = negative.max(-v.re).max(v.im.abs());
            }
            let a = calc.metric_g(&w, &e)?;
            let b = calc.metric_g(&e, &w)?;
            conj_sym = conj_sym.max(a.max_abs_diff(&b.conj()));
        }
    }
    ctx.record("hodge.metric-positive", negative.max(0.0), 1e-12, true);
    ctx.record("hodge.metric-symmetric", conj_sym, 1e-12, true);

    let (mut imag, mut min_tau) = (0.0f64, f64::INFINITY);
    for i in 0..1000 {
        let n = 3 + i % (EXHAUSTIVE_MAX_N - 2);
        let f = random::vertex_function(&mut ctx.rng, n);
        let t = state_tau(&(&f.conj() * &f));
        imag = imag.max(t.im.abs());
        min_tau = min_tau.min(t.re);
    }
    ctx.record("calculus.tau-faithful", imag, 1e-12, min_tau > 0.0);
    Ok(())
}

/// Rank by Gaussian elimination with partial pivoting.
fn rank(a: &mut [C64], n: usize, tol: f64) -> usize {
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..n).max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm())) else {
            break;
        };
        if a[p * n + col].norm() <= tol {
            continue;
        }
        for j in 0..n {
            a.swap(r * n + j, p * n + j);
        }
        for i in r + 1..n {
            let factor = a[i * n + col] / a[r * n + col];
            for j in col..n {
                let v = a[r * n + j];
                a[i * n + j] -= factor * v;
            }
        }
        r += 1;
    }
    r
}

fn module_suite(ctx: &mut Ctx, graphs: &[(DirectedCyclicGraph, PotentialCoefficients)]) -> Result<()> {
    let (mut positive, mut conj_sym, mut right_lin) = (0.0f64, 0.0f64, 0.0f64);
    let (mut inner, mut inner_pos, mut dual, mut proj, mut onb) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..1000 {
        let (g, _) = &graphs[i % graphs.len()];
        let (n, m) = (g.n(), g.num_edges());
        let x = random::edge_function(&mut ctx.rng, m);
        let y = random::edge_function(&mut ctx.rng, m);
        let phi = random::vertex_function(&mut ctx.rng, n);
        for v in g.hermitian_pairing(&x, &x)?.values() {
            positive = positive.max(-v.re).max(v.im.abs());
        }
        let hxy = g.hermitian_pairing(&x, &y)?;
        conj_sym = conj_sym.max(hxy.max_abs_diff(&g.hermitian_pairing(&y, &x)?.conj()));
        let lhs = g.hermitian_pairing(&x, &g.left_action(&phi.conj(), &y)?)?;
        right_lin = right_lin.max(lhs.max_abs_diff(&(&hxy * &phi)));

        let u = random::hilbert_vector(&mut ctx.rng, m);
        let w = random::hilbert_vector(&mut ctx.rng, m);
        inner = inner.max((g.inner_product(&u, &w)? - g.inner_product(&w, &u)?.conj()).norm());
        let uu = g.inner_product(&u, &u)?;
        let norm2: f64 = u.to_flat().iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        // positive definite: ⟨u, u⟩ is the weighted squared norm
        inner_pos = inner_pos.max((uu - C64::new(norm2, 0.0)).norm());
        if !(norm2 > 0.0) {
            inner_pos = f64::INFINITY;
        }
    }
    for (g, _) in graphs {
        let m = g.num_edges();
        for (e, &edge) in g.edges().iter().enumerate() {
            for f in 0..m {
                let (fs, ft) = g.edges()[f];
                let val: C64 = g.apply_dual(edge, &g.chi(fs, ft)?)?.values().iter().sum();
                let want = if e == f { 1.0 } else { 0.0 };
                dual = dual.max((val - C64::new(want, 0.0)).norm());
            }
        }
        let basis = g.orthonormal_basis();
        for (a, u) in basis.iter().enumerate() {
            for (b, v) in basis.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                onb = onb.max((g.inner_product(u, v)? - C64::new(want, 0.0)).norm());
            }
        }
        if g.has_loops() {
            continue;
        }
        let p = g.complete_graph_projector();
        proj = proj.max(p.compose(&p)?.max_abs_diff(&p));
        let all = complete_edges(g.n());
        let phi = random::vertex_function(&mut ctx.rng, g.n());
        let act = DenseOperator::from_fn(all.len(), all.len(), Space::CompleteEdges, Space::CompleteEdges, |i, j| {
            if i == j {
                phi.at(all[i].0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        proj = proj.max(p.compose(&act)?.max_abs_diff(&act.compose(&p)?));
    }
    ctx.record("module.h-positive", positive.max(0.0), 1e-12, true);
    ctx.record("module.h-conjugate-symmetric", conj_sym, 1e-12, true);
    ctx.record("module.h-right-linear", right_lin, 1e-12, true);
    ctx.record("module.dual-basis", dual, 1e-12, true);
    ctx.record("module.projector", proj, 1e-12, true);
    ctx.record("module.inner-product", inner.max(inner_pos), 1e-12, true);
    ctx.record("module.onb-gram", onb, 1e-12, true);
    Ok(())
}

fn connection_suite(ctx: &mut Ctx, graphs: &[(DirectedCyclicGraph, PotentialCoefficients)]) -> Result<()> {
    let (mut closed, mut adj, mut psd, mut unit_basis, mut pointwise, mut square) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (g, c) in graphs {
        let nabla = connection::base_connection(g);
        let zeta = connection::zeta_operator(g, c)?;
        let na = nabla.adjoint();
        let za = zeta.adjoint();
        let lap = connection::laplacian(g, c)?;
        closed = closed
            .max(na.max_abs_diff(&closed_form::nabla0_adjoint(g)))
            .max(za.max_abs_diff(&closed_form::zeta_adjoint(g, c)))
            .max(na.compose(&nabla)?.max_abs_diff(&closed_form::nabla_nabla(g)))
            .max(na.compose(&zeta)?.max_abs_diff(&closed_form::nabla_zeta(g, c)))
            .max(za.compose(&nabla)?.max_abs_diff(&closed_form::zeta_nabla(g, c)))
            .max(za.compose(&zeta)?.max_abs_diff(&closed_form::zeta_zeta(g, c)))
            .max(lap.max_abs_diff(&closed_form::laplacian(g, c)));

        if let Some(low) = eig_selfadjoint(&lap, false)?.min() {
            psd = psd.max(-low);
        }
        let unit = connection::laplacian(g, &PotentialCoefficients::unit(g))?;
        unit_basis = unit_basis.max(unit.max_abs_diff(&closed_form::laplacian_unit_basis(g)));
        for _ in 0..10 {
            let f = random::edge_function(&mut ctx.rng, g.num_edges());
            let direct = EdgeFunction::new(unit.apply(f.values())?);
            pointwise = pointwise.max(connection::apply_laplacian_unit(g, &f)?.max_abs_diff(&direct));
        }

        let full = connection::embed_lower(&connection::dbar(g, c)?);
        let full_adj = full.adjoint();
        let m = g.num_edges();
        for _ in 0..10 {
            let u = random::hilbert_vector(&mut ctx.rng, m);
            let v = random::hilbert_vector(&mut ctx.rng, m);
            let mu = crate::edge_module::HilbertVector::from_flat(&full.apply(&u.to_flat())?);
            let av = crate::edge_module::HilbertVector::from_flat(&full_adj.apply(&v.to_flat())?);
            adj = adj.max((g.inner_product(&mu, &v)? - g.inner_product(&u, &av)?).norm());
        }

        let d = dirac::dirac(g, c)?;
        let d2 = d.compose(&d)?;
        let db = connection::dbar(g, c)?;
        let lower = db.compose(&db.adjoint())?;
        let mut expect = DenseOperator::zeros(2 * m, 2 * m, Space::Full, Space::Full);
        for i in 0..m {
            for j in 0..m {
                expect.set(i, j, lap.get(i, j));
                expect.set(m + i, m + j, lower.get(i, j));
            }
        }
        square = square.max(d2.max_abs_diff(&expect));
    }
    ctx.record("connection.closed-form", closed, 1e-12, true);
    ctx.record("connection.adjoint", adj, 1e-12, true);
    ctx.record("connection.positive", psd.max(0.0), 1e-9, true);
    ctx.record("connection.unit-basis", unit_basis, 1e-12, true);
    ctx.record("connection.pointwise", pointwise, 1e-12, true);
    ctx.record("connection.dirac-square", square, 1e-12, true);
    Ok(())
}

fn spectral_suite(ctx: &mut Ctx, graphs: &[(DirectedCyclicGraph, PotentialCoefficients)]) -> Result<()> {
    let (mut ngon, mut kernel) = (0.0f64, 0.0f64);
    let mut parity = true;
    for n in 3..=SPECTRAL_MAX_N {
        let g = DirectedCyclicGraph::directed_ngon(n)?;
        let lap = connection::laplacian(&g, &PotentialCoefficients::unit(&g))?;
        let spec = eig_selfadjoint(&lap, false)?;
        let want = spectra::ngon_closed_form(n)?;
        for (a, b) in spec.eigenvalues.iter().zip(&want) {
            ngon = ngon.max((a - b).abs());
        }
        let has_zero = spec.eigenvalues.iter().any(|v| v.abs() <= 1e-9);
        parity &= has_zero == (n % 2 == 0);
        if n % 2 == 0 {
            let alt: Vec<C64> = (0..n).map(|e| C64::new(if e % 2 == 0 { 1.0 } else { -1.0 }, 0.0)).collect();
            let r = lap.apply(&alt)?.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            kernel = kernel.max(r);
        }
    }
    ctx.record("spectra.ngon", ngon, 1e-9, true);
    ctx.record("spectra.kernel-parity", kernel, 1e-9, parity);

    let (mut bounds, mut top, mut ones) = (0.0f64, 0.0f64, 0.0f64);
    let (mut sums_exact, mut blocks_ok) = (true, true);
    for n in 3..=12 {
        for d in 1..n {
            let g = spectra::make_circulant_regular(n, d)?;
            let lap = connection::laplacian(&g, &PotentialCoefficients::unit(&g))?;
            let target = ((d + 1) * (d + 1)) as f64;
            let spec = eig_selfadjoint(&lap, false)?;
            let (lo, hi) = (spec.min().unwrap_or(0.0), spec.max().unwrap_or(0.0));
            bounds = bounds.max(-lo).max(hi - target);
            top = top.max((hi - target).abs());
            let all_ones = vec![C64::new(1.0, 0.0); g.num_edges()];
            let r = lap.apply(&all_ones)?.iter().map(|z| (z - target).norm_sqr()).sum::<f64>().sqrt();
            ones = ones.max(r);
            sums_exact &= integer_line_sums(&lap, (d + 1) * (d + 1));
            blocks_ok &= regular_block_structure(&lap, n, d);
        }
    }
    ctx.record("spectra.regular-bounds", bounds.max(0.0), 1e-9, true);
    ctx.record("spectra.regular-max", top.max(ones), 1e-9, true);
    ctx.record("spectra.regular-sums", if sums_exact { 0.0 } else { 1.0 }, 0.0, sums_exact);
    ctx.record("spectra.regular-blocks", if blocks_ok { 0.0 } else { 1.0 }, 0.0, blocks_ok);

    let mut trace = 0.0f64;
    for (g, c) in graphs {
        let lap = connection::laplacian(g, c)?;
        let spec = eig_selfadjoint(&lap, false)?;
        let tr: f64 = (0..lap.rows()).map(|i| lap.get(i, i).re).sum();
        trace = trace.max((spec.eigenvalues.iter().sum::<f64>() - tr).abs());
    }
    ctx.record("spectra.trace", trace, 1e-9, true);
    Ok(())
}

/// Every row and column sum equals `target`, with each entry required to be
/// an exact integer.
pub fn integer_line_sums(m: &DenseOperator, target: usize) -> bool {
    let mut ints = Vec::with_capacity(m.rows() * m.cols());
    for z in m.data() {
        if z.im != 0.0 || z.re.fract() != 0.0 {
            return false;
        }
        ints.push(z.re as i64);
    }
    let (r, c) = (m.rows(), m.cols());
    let t = target as i64;
    (0..r).all(|i| (0..c).map(|j| ints[i * c + j]).sum::<i64>() == t)
        && (0..c).all(|j| (0..r).map(|i| ints[i * c + j]).sum::<i64>() == t)
}

/// Edges grouped by source into `d × d` blocks: diagonal blocks carry
/// `d + 1` on the diagonal and `d` elsewhere, blocks `(i, i ± 1)` are all
/// ones, the rest vanish.
pub fn regular_block_structure(m: &DenseOperator, n: usize, d: usize) -> bool {
    (0..n * d).all(|r| {
        (0..n * d).all(|c| {
            let (bi, bj) = (r / d, c / d);
            let want = if bi == bj {
                if r == c {
                    (d + 1) as f64
                } else {
                    d as f64
                }
            } else if bj == (bi + 1) % n || bi == (bj + 1) % n {
                1.0
            } else {
                0.0
            };
            m.get(r, c) == C64::new(want, 0.0)
        })
    })
}

fn dirac_suite(ctx: &mut Ctx, g: &DirectedCyclicGraph, c: &PotentialCoefficients) -> Result<()> {
    let (mut selfadj, mut indep, mut norm) = (0.0f64, 0.0f64, 0.0f64);
    let (mut adjacent, mut metric, mut diameter, mut oracle) = (true, true, true, 0.0f64);
    let mut graphs = vec![(g.clone(), c.clone())];
    for _ in 0..10 {
        let n = ctx.rng.gen_range(3..=8);
        let density = ctx.rng.gen_range(0.1..0.5);
        let h = random::graph(&mut ctx.rng, n, density, true);
        let p = random::potential(&mut ctx.rng, &h);
        graphs.push((h, p));
    }
    for (k, (g, c)) in graphs.iter().enumerate() {
        let n = g.n();
        let d = dirac::dirac(g, c)?;
        selfadj = selfadj.max(d.hermitian_defect());
        for _ in 0..100 {
            let f = random::vertex_function(&mut ctx.rng, n);
            let k1 = dirac::commutator_with_function(g, &d, &f)?;
            let predicted = g
                .edges()
                .iter()
                .map(|&(s, _)| (f.at(s) - f.at(g.next(s))).norm())
                .fold(0.0, f64::max);
            norm = norm.max((dirac::operator_norm(&k1)? - predicted).abs());
        }
        let f = random::vertex_function(&mut ctx.rng, n);
        let base = dirac::commutator_with_function(g, &d, &f)?;
        for _ in 0..10 {
            let p = random::potential(&mut ctx.rng, g);
            let other = dirac::commutator_with_function(g, &dirac::dirac(g, &p)?, &f)?;
            indep = indep.max(base.max_abs_diff(&other));
        }

        let dist = dirac::all_pairs_distance(g);
        let full_out = (0..n).all(|v| g.out_degree(v) > 0);
        for mu in 0..n {
            if g.out_degree(mu) > 0 {
                adjacent &= dist[mu][g.next(mu)] == DistanceValue::Finite(1.0);
            }
            for nu in 0..n {
                let a = dist[mu][nu].as_f64();
                metric &= a == dist[nu][mu].as_f64();
                for w in 0..n {
                    metric &= a <= dist[mu][w].as_f64() + dist[w][nu].as_f64();
                }
                if full_out {
                    diameter &= a <= (n / 2) as f64;
                }
            }
        }
        // numeric oracle: the given graph and two samples
        if k < 3 {
            for mu in 0..n {
                for nu in 0..n {
                    let iv = dirac::connes_distance_numeric(g, c, mu, nu, dirac::NUMERIC_ITERS, ctx.cfg.seed)?;
                    let gap = match dist[mu][nu] {
                        DistanceValue::Finite(v) => (v - iv.lower).abs().max((iv.upper - v).abs()),
                        DistanceValue::Infinite if iv.upper.is_infinite() && iv.lower > 1e6 => 0.0,
                        DistanceValue::Infinite => f64::INFINITY,
                    };
                    oracle = oracle.max(gap);
                }
            }
        }
    }
    ctx.record("dirac.self-adjoint", selfadj, 1e-12, true);
    ctx.record("dirac.commutator-potential-free", indep, 1e-12, true);
    ctx.record("dirac.norm-formula", norm, 1e-9, true);
    ctx.record("dirac.adjacent-unit", 0.0, 0.0, adjacent);
    ctx.record("dirac.metric", 0.0, 0.0, metric);
    ctx.record("dirac.diameter", 0.0, 0.0, diameter);
    ctx.record("dirac.numeric-oracle", oracle, 1e-6, true);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_gon_passes() {
        let g = DirectedCyclicGraph::directed_ngon(3).unwrap();
        let checks = run(&g, &PotentialCoefficients::unit(&g), &VerifyConfig::default()).unwrap();
        for c in &checks {
            assert!(c.pass, "{c}");
        }
        assert!(checks.iter().any(|c| c.id == "hodge.metric-basis"));
    }

    #[test]
    fn corrupted_sign_fails_hodge() {
        let g = DirectedCyclicGraph::directed_ngon(3).unwrap();
        let cfg = VerifyConfig {
            corrupt_wedge_sign: true,
            ..VerifyConfig::default()
        };
        let checks = run(&g, &PotentialCoefficients::unit(&g), &cfg).unwrap();
        let hodge = checks.iter().find(|c| c.id == "hodge.metric-basis").unwrap();
        assert!(!hodge.pass);
        assert!((hodge.residual - 2.0).abs() < 1e-12);
    }

    #[test]
    fn line_format() {
        let c = Check {
            id: "spectra.ngon",
            pass: true,
            residual: 0.0,
        };
        assert_eq!(c.to_string(), "spectra.ngon PASS 0");
    }

    #[test]
    fn rank_detects_deficiency() {
        let mut a = vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(2.0, 0.0), C64::new(4.0, 0.0)];
        assert_eq!(rank(&mut a, 2, 1e-12), 1);
    }
}
