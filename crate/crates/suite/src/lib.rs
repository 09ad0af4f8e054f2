//! Graph corpus shared by the acceptance criteria: named families plus a
//! seeded batch of small random graphs with loops.

use std::time::Duration;

use indep_bounds::exact::{brute_alpha, max_independent_set};
use indep_bounds::families;
use indep_bounds::geometry::{er_graph, incidence_graph_with_polarity, LoopMode};
use indep_bounds::graphcore::{is_independent, Graph};
use rand::rngs::StdRng;
use rand::SeedableRng;

pub const RANDOM_SEED: u64 = 0x5eed_2024;
pub const RANDOM_COUNT: usize = 200;

pub struct Case {
    pub name: String,
    pub graph: Graph,
}

fn case(name: impl Into<String>, graph: Graph) -> Case {
    Case {
        name: name.into(),
        graph,
    }
}

/// Named families: polarity and incidence graphs for q ≤ 7, X_m for m ≤ 6,
/// K_{a,b} for a < b ≤ 8, and small classical graphs.
pub fn named_corpus() -> Vec<Case> {
    let mut out = Vec::new();
    for q in [2u64, 3, 4, 5, 7] {
        for (tag, mode) in [
            ("keep", LoopMode::Keep),
            ("drop-loops", LoopMode::DropLoops),
            ("drop-absolute", LoopMode::DropAbsoluteVertices),
        ] {
            out.push(case(format!("ER({q}) {tag}"), er_graph(q, mode).unwrap()));
        }
        out.push(case(
            format!("incidence PG(2,{q})"),
            incidence_graph_with_polarity(q).unwrap().0,
        ));
    }
    for m in 2..=6 {
        out.push(case(format!("X_{m}"), families::x_m(m).unwrap()));
    }
    for b in 2..=8 {
        for a in 1..b {
            out.push(case(
                format!("K_{{{a},{b}}}"),
                families::complete_bipartite(a, b).unwrap(),
            ));
        }
    }
    out.push(case("Petersen", families::petersen()));
    for n in 3..=10 {
        out.push(case(format!("C_{n}"), families::cycle(n)));
    }
    for n in 2..=8 {
        out.push(case(format!("P_{n}"), families::path(n)));
        out.push(case(format!("K_{n}"), families::complete(n)));
        out.push(case(format!("star K_{{1,{n}}}"), families::star(n)));
    }
    out
}

pub fn random_corpus() -> Vec<Case> {
    let mut rng = StdRng::seed_from_u64(RANDOM_SEED);
    (0..RANDOM_COUNT)
        .map(|i| {
            let n = 1 + i % 12;
            case(
                format!("random #{i} (n={n})"),
                families::random_graph(n, 0.3, 0.2, &mut rng),
            )
        })
        .collect()
}

pub fn full_corpus() -> Vec<Case> {
    let mut all = named_corpus();
    all.extend(random_corpus());
    all
}

/// A maximum independent set and whether its optimality is proven. Small
/// graphs are cross-checked against exhaustive search.
pub fn witness(g: &Graph) -> (Vec<usize>, bool) {
    let r = max_independent_set(g, Duration::from_secs(20));
    assert!(is_independent(g, &r.witness));
    if g.n() <= indep_bounds::exact::BRUTE_MAX {
        assert_eq!(
            brute_alpha(g).unwrap(),
            r.alpha,
            "solver disagrees with enumeration"
        );
    }
    (r.witness, r.optimal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use indep_bounds::certify::{hoffman_equality_certify, laplacian_equality_certify};
    use indep_bounds::exact::for_each_independent_set;

    /// On tight instances the Hoffman and Laplacian certificates raise every flag
    /// together.
    #[test]
    fn tight_instances_raise_all_flags() {
        let mut hoffman_tight = 0;
        let mut laplacian_tight = 0;
        for c in full_corpus() {
            let g = &c.graph;
            if g.has_loops() || g.n() == 0 || g.n() > 12 {
                continue;
            }
            for_each_independent_set(g, |s| {
                if s.is_empty() {
                    return;
                }
                if let Ok(h) = hoffman_equality_certify(g, s) {
                    if h.equality {
                        hoffman_tight += 1;
                        assert!(h.all(), "{} {s:?}: {h:?}", c.name);
                    }
                }
                let l = laplacian_equality_certify(g, s).unwrap();
                if l.equality {
                    laplacian_tight += 1;
                    assert!(l.all(), "{} {s:?}: {l:?}", c.name);
                }
            })
            .unwrap();
        }
        assert!(hoffman_tight > 0 && laplacian_tight > 0);
    }

    #[test]
    fn corpus_exact_agrees_with_enumeration() {
        for c in random_corpus() {
            witness(&c.graph);
        }
    }
}
