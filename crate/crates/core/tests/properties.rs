use std::time::Duration;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use indep_bounds::bounds::{adjacency_shift, general_bound, laplacian_shift, GENERAL_TOL};
use indep_bounds::certify::gentight_check;
use indep_bounds::exact::{brute_alpha, for_each_independent_set, max_independent_set};
use indep_bounds::families::random_graph;
use indep_bounds::galois::Field;
use indep_bounds::geometry::{er_graph, LoopMode};
use indep_bounds::graphcore::{set_params, Graph};
use indep_bounds::spectra::{eigenvalues, Matrix};

const ORDERS: [u64; 12] = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 49];

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n, any::<u64>(), 0.0..0.7f64, 0.0..0.5f64)
        .prop_map(|(n, seed, pe, pl)| random_graph(n, pe, pl, &mut StdRng::seed_from_u64(seed)))
}

fn regular_graph_strategy() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (3usize..12).prop_map(indep_bounds::families::cycle),
        (1usize..9).prop_map(indep_bounds::families::complete),
        Just(indep_bounds::families::petersen()),
        prop::sample::select(vec![2u64, 3, 4, 5])
            .prop_map(|q| er_graph(q, LoopMode::Keep).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_multiplication_laws(qi in 0..ORDERS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = Field::new(ORDERS[qi]).unwrap();
        let q = f.order();
        let (x, y, z) = (f.element(a % q).unwrap(), f.element(b % q).unwrap(), f.element(c % q).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(
            x.mul(&y.add(&z).unwrap()).unwrap(),
            x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
        );
        if !x.is_zero() {
            prop_assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), f.one());
        }
    }

    #[test]
    fn jacobi_matches_reference(n in 1usize..12, entries in prop::collection::vec(-5.0..5.0f64, 144)) {
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                rows[i][j] = entries[i * 12 + j];
                rows[j][i] = entries[i * 12 + j];
            }
        }
        let m = Matrix::from_rows(&rows).unwrap();
        let ours = eigenvalues(&m).unwrap();
        let reference = DMatrix::from_fn(n, n, |i, j| rows[i][j]).symmetric_eigenvalues();
        let mut theirs: Vec<f64> = reference.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.values().iter().zip(&theirs) {
            prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
        }
        let sum: f64 = ours.values().iter().sum();
        let squares: f64 = ours.values().iter().map(|x| x * x).sum();
        prop_assert!((sum - m.trace()).abs() < 1e-9);
        prop_assert!((squares.sqrt() - m.frobenius_norm()).abs() < 1e-9);
    }

    #[test]
    fn set_params_on_regular_graphs(g in regular_graph_strategy(), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..6)) {
        let k = g.regular_degree().unwrap() as i64;
        let mut set: Vec<usize> = picks.iter().map(|i| i.index(g.n())).collect();
        set.sort_unstable();
        set.dedup();
        let p = set_params(&g, &set).unwrap();
        prop_assert_eq!(p.dbar_s, k.into());
        prop_assert_eq!(p.k_s, k.into());
    }

    #[test]
    fn exact_matches_enumeration(g in graph_strategy(20)) {
        let r = max_independent_set(&g, Duration::from_secs(30));
        prop_assert!(r.optimal);
        prop_assert_eq!(r.alpha, brute_alpha(&g).unwrap());
    }

    #[test]
    fn loops_never_change_alpha(g in graph_strategy(16), v in any::<prop::sample::Index>()) {
        prop_assume!(g.n() > 0);
        let v = v.index(g.n());
        let mut loops = g.loops().to_vec();
        if !loops.contains(&v) {
            loops.push(v);
        }
        let looped = Graph::new(g.n(), g.edges().iter().copied(), loops).unwrap();
        prop_assert_eq!(brute_alpha(&looped).unwrap(), brute_alpha(&g).unwrap());
        prop_assert_eq!(brute_alpha(&g.without_loops()).unwrap(), brute_alpha(&g).unwrap());
    }

    #[test]
    fn laplacian_spectral_radius_at_most_n(g in graph_strategy(14)) {
        let mu = eigenvalues(&g.laplacian()).unwrap().greatest().unwrap_or(0.0);
        prop_assert!(mu <= g.n() as f64 + 1e-9);
        if g.edges().is_empty() {
            prop_assert!(mu.abs() < 1e-12);
        } else {
            prop_assert!(mu > 0.0);
        }
    }

    /// The quadratic form is nonnegative on every independent set for both
    /// standard diagonal choices, and equality forces both gentight conditions.
    #[test]
    fn general_bound_on_all_independent_sets(g in graph_strategy(9)) {
        let mut shifts = vec![adjacency_shift(&g).unwrap()];
        if !g.has_loops() {
            shifts.push(laplacian_shift(&g).unwrap());
        }
        for t in shifts {
            let mut result = Ok(());
            for_each_independent_set(&g, |s| {
                if result.is_err() {
                    return;
                }
                let r = general_bound(&g, &t, s).unwrap();
                if !r.holds {
                    result = Err(format!("{s:?}: {}", r.lhs));
                } else if !s.is_empty() && r.lhs.abs() <= GENERAL_TOL {
                    let c = gentight_check(&g, &t, s).unwrap();
                    if !(c.cond_a && c.cond_b) {
                        result = Err(format!("tight {s:?} but {c:?}"));
                    }
                }
            }).unwrap();
            prop_assert!(result.is_ok(), "{:?}", result);
        }
    }
}

#[test]
fn er_alpha_ignores_loops() {
    for q in [2u64, 3, 4, 5, 7] {
        let budget = Duration::from_secs(60);
        let keep = max_independent_set(&er_graph(q, LoopMode::Keep).unwrap(), budget);
        let dropped = max_independent_set(&er_graph(q, LoopMode::DropLoops).unwrap(), budget);
        assert!(keep.optimal && dropped.optimal);
        assert_eq!(keep.alpha, dropped.alpha, "q={q}");
    }
}
