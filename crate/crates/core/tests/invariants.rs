use kahler_graph::calculus::{Calculus, GradedForm, Side};
use kahler_graph::connection::{self, PotentialCoefficients};
use kahler_graph::dirac;
use kahler_graph::edge_module::HilbertVector;
use kahler_graph::operator::{DenseOperator, Space};
use kahler_graph::spectra::{eig_selfadjoint, residuals};
use kahler_graph::{random, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn homogeneous(r: &mut ChaCha8Rng, n: usize, k: usize) -> GradedForm {
    random::form(r, n).degree_part(k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_associative(n in 3usize..12, seed: u64) {
        let calc = Calculus::new(n).unwrap();
        let mut r = rng(seed);
        let (a, b, c) = (random::form(&mut r, n), random::form(&mut r, n), random::form(&mut r, n));
        let left = calc.wedge(&calc.wedge(&a, &b).unwrap(), &c).unwrap();
        let right = calc.wedge(&a, &calc.wedge(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn star_reverses_products_with_sign(n in 3usize..12, p in 0usize..3, q in 0usize..3, seed: u64) {
        let calc = Calculus::new(n).unwrap();
        let mut r = rng(seed);
        let (a, b) = (homogeneous(&mut r, n, p), homogeneous(&mut r, n, q));
        let lhs = calc.star_involution(&calc.wedge(&a, &b).unwrap()).unwrap();
        let mut rhs = calc.wedge(&calc.star_involution(&b).unwrap(), &calc.star_involution(&a).unwrap()).unwrap();
        if p * q % 2 == 1 {
            rhs = -&rhs;
        }
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let twice = calc.star_involution(&calc.star_involution(&a).unwrap()).unwrap();
        prop_assert!(twice.max_abs_diff(&a) == 0.0);
    }

    #[test]
    fn j_is_a_derivation(n in 3usize..12, seed: u64) {
        let calc = Calculus::new(n).unwrap();
        let mut r = rng(seed);
        let (a, b) = (random::form(&mut r, n), random::form(&mut r, n));
        let lhs = calc.apply_j(&calc.wedge(&a, &b).unwrap()).unwrap();
        let rhs = &calc.wedge(&calc.apply_j(&a).unwrap(), &b).unwrap() + &calc.wedge(&a, &calc.apply_j(&b).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn leibniz_rule(n in 3usize..16, seed: u64) {
        let calc = Calculus::new(n).unwrap();
        let mut r = rng(seed);
        let (f, g) = (random::vertex_function(&mut r, n), random::vertex_function(&mut r, n));
        let lhs = calc.exterior_d(&(&f * &g)).unwrap();
        let rhs = &calc.bimodule_act(&g, &calc.exterior_d(&f).unwrap(), Side::Right).unwrap()
            + &calc.bimodule_act(&f, &calc.exterior_d(&g).unwrap(), Side::Left).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn metric_is_hermitian_and_positive(n in 3usize..16, k in 0usize..3, seed: u64) {
        let calc = Calculus::new(n).unwrap();
        let mut r = rng(seed);
        let (a, b) = (homogeneous(&mut r, n, k), homogeneous(&mut r, n, k));
        let gab = calc.metric_g(&a, &b).unwrap();
        let gba = calc.metric_g(&b, &a).unwrap();
        prop_assert!(gab.max_abs_diff(&gba.conj()) < 1e-12);
        prop_assert!(calc.metric_g(&a, &a).unwrap().is_positive(1e-12));
    }

    #[test]
    fn hermitian_pairing_properties(n in 3usize..10, density in 0.1f64..0.9, seed: u64) {
        let mut r = rng(seed);
        let g = random::graph(&mut r, n, density, false);
        let m = g.num_edges();
        let (x, y) = (random::edge_function(&mut r, m), random::edge_function(&mut r, m));
        let phi = random::vertex_function(&mut r, n);
        prop_assert!(g.hermitian_pairing(&x, &x).unwrap().is_positive(1e-12));
        let hxy = g.hermitian_pairing(&x, &y).unwrap();
        let shifted = g.hermitian_pairing(&x, &g.left_action(&phi.conj(), &y).unwrap()).unwrap();
        prop_assert!(shifted.max_abs_diff(&(&hxy * &phi)) < 1e-12);
        // left-linearity in the first slot
        let lx = g.hermitian_pairing(&g.left_action(&phi, &x).unwrap(), &y).unwrap();
        prop_assert!(lx.max_abs_diff(&(&phi * &hxy)) < 1e-12);
    }

    #[test]
    fn dbar_adjoint_matches_inner_product(n in 3usize..9, density in 0.1f64..0.9, seed: u64) {
        let mut r = rng(seed);
        let g = random::graph(&mut r, n, density, false);
        let c = random::potential(&mut r, &g);
        let full = connection::embed_lower(&connection::dbar(&g, &c).unwrap());
        let m = g.num_edges();
        let (u, v) = (random::hilbert_vector(&mut r, m), random::hilbert_vector(&mut r, m));
        let du = HilbertVector::from_flat(&full.apply(&u.to_flat()).unwrap());
        let dv = HilbertVector::from_flat(&full.adjoint().apply(&v.to_flat()).unwrap());
        let lhs = g.inner_product(&du, &v).unwrap();
        let rhs = g.inner_product(&u, &dv).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn laplacian_is_positive(n in 3usize..9, density in 0.1f64..0.9, seed: u64) {
        let mut r = rng(seed);
        let g = random::graph(&mut r, n, density, false);
        let c = random::potential(&mut r, &g);
        let lap = connection::laplacian(&g, &c).unwrap();
        prop_assert!(lap.hermitian_defect() < 1e-12);
        if let Some(min) = eig_selfadjoint(&lap, false).unwrap().min() {
            prop_assert!(min >= -1e-9);
        }
    }

    #[test]
    fn commutator_norm_formula(n in 3usize..9, density in 0.1f64..0.9, seed: u64) {
        let mut r = rng(seed);
        let g = random::graph(&mut r, n, density, false);
        let c = random::potential(&mut r, &g);
        let d = dirac::dirac(&g, &c).unwrap();
        let f = random::vertex_function(&mut r, n);
        let k = dirac::commutator_with_function(&g, &d, &f).unwrap();
        let predicted = g.edges().iter().map(|&(s, _)| (f.at(s) - f.at(g.next(s))).norm()).fold(0.0, f64::max);
        prop_assert!((dirac::operator_norm(&k).unwrap() - predicted).abs() < 1e-9);
        let zero = dirac::dirac(&g, &PotentialCoefficients::zero()).unwrap();
        prop_assert!(dirac::commutator_with_function(&g, &zero, &f).unwrap().max_abs_diff(&k) < 1e-12);
    }

    #[test]
    fn distance_is_a_metric(n in 3usize..10, density in 0.05f64..0.6, seed: u64) {
        let mut r = rng(seed);
        let g = random::graph(&mut r, n, density, false);
        let dist = dirac::all_pairs_distance(&g);
        for a in 0..n {
            prop_assert_eq!(dist[a][a].as_f64(), 0.0);
            for b in 0..n {
                prop_assert_eq!(dist[a][b], dist[b][a]);
                for w in 0..n {
                    prop_assert!(dist[a][b].as_f64() <= dist[a][w].as_f64() + dist[w][b].as_f64());
                }
            }
        }
    }

    #[test]
    fn witness_attains_distance(n in 3usize..10, density in 0.05f64..0.6, mu in 0usize..10, nu in 0usize..10, seed: u64) {
        let (mu, nu) = (mu % n, nu % n);
        let mut r = rng(seed);
        let g = random::graph(&mut r, n, density, false);
        let res = dirac::connes_distance(&g, mu, nu).unwrap();
        if let Some(f) = res.witness {
            let d = dirac::dirac(&g, &PotentialCoefficients::unit(&g)).unwrap();
            let norm = dirac::operator_norm(&dirac::commutator_with_function(&g, &d, &f).unwrap()).unwrap();
            prop_assert!(norm <= 1.0 + 1e-12);
            prop_assert!(((f.at(mu) - f.at(nu)).norm() - res.value.as_f64()).abs() < 1e-12);
        }
    }

    #[test]
    fn eigensolver_conserves_trace(dim in 1usize..24, seed: u64) {
        let mut r = rng(seed);
        let raw = random::complex_vec(&mut r, dim * dim);
        let m = DenseOperator::from_fn(dim, dim, Space::Top, Space::Top, |i, j| {
            (raw[i * dim + j] + raw[j * dim + i].conj()) * 0.5
        });
        let spec = eig_selfadjoint(&m, true).unwrap();
        let tr: f64 = (0..dim).map(|i| m.get(i, i).re).sum();
        prop_assert!((spec.eigenvalues.iter().sum::<f64>() - tr).abs() < 1e-9);
        for res in residuals(&m, &spec).unwrap() {
            prop_assert!(res < 1e-9);
        }
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn potential_rejects_foreign_keys() {
    let g = kahler_graph::DirectedCyclicGraph::directed_ngon(4).unwrap();
    let bad = PotentialCoefficients::new(&g, [((0, 1, 2), C64::new(1.0, 0.0))]);
    assert!(bad.is_err());
}
