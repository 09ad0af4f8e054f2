//! Exact independence number by branch and bound.
//!
//! Loops never prevent a vertex from joining an independent set, so the
//! search runs on the loop-stripped graph.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graphcore::Graph;

/// Largest order accepted by [`brute_alpha`].
pub const BRUTE_MAX: usize = 25;

/// The deadline is polled once every this many search nodes.
const DEADLINE_POLL: u64 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("exhaustive search supports at most {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaResult {
    /// Size of the best set found; a lower bound on α unless `optimal`.
    pub alpha: usize,
    /// Sorted independent set of size `alpha`.
    pub witness: Vec<usize>,
    /// The search finished before the deadline.
    pub optimal: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

type Bits = Vec<u64>;

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

fn set_bit(b: &mut [u64], v: usize) {
    b[v / 64] |= 1 << (v % 64);
}

fn clear_bit(b: &mut [u64], v: usize) {
    b[v / 64] &= !(1 << (v % 64));
}

fn has_bit(b: &[u64], v: usize) -> bool {
    b[v / 64] >> (v % 64) & 1 == 1
}

fn is_empty(b: &[u64]) -> bool {
    b.iter().all(|&w| w == 0)
}

fn first_bit(b: &[u64]) -> Option<usize> {
    b.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

fn count_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn bits_of(b: &[u64]) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + t)
        })
    })
}

struct Search {
    /// Loop-free neighbourhoods.
    adj: Vec<Bits>,
    current: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    deadline: Instant,
    timed_out: bool,
}

impl Search {
    /// Removes `v` and its neighbours from `cand`.
    fn take(&mut self, cand: &mut [u64], v: usize) {
        self.current.push(v);
        clear_bit(cand, v);
        for (c, a) in cand.iter_mut().zip(&self.adj[v]) {
            *c &= !a;
        }
    }

    /// Includes every vertex of degree at most one in `cand`, repeatedly.
    /// Some maximum independent set of the candidate graph contains each such vertex.
    fn reduce(&mut self, cand: &mut Bits) {
        loop {
            let mut changed = false;
            let snapshot = cand.clone();
            for v in bits_of(&snapshot) {
                if has_bit(cand, v) && count_and(cand, &self.adj[v]) <= 1 {
                    self.take(cand, v);
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Number of cliques in a greedy clique cover of `cand`, stopping once it
    /// exceeds `limit`. Every independent set meets each clique at most once.
    fn clique_cover(&self, cand: &[u64], limit: usize) -> usize {
        let mut rest = cand.to_vec();
        let mut cliques = 0;
        while let Some(v) = first_bit(&rest) {
            cliques += 1;
            if cliques > limit {
                return cliques;
            }
            clear_bit(&mut rest, v);
            let mut grow: Bits = rest.iter().zip(&self.adj[v]).map(|(r, a)| r & a).collect();
            while let Some(w) = first_bit(&grow) {
                clear_bit(&mut rest, w);
                for (g, a) in grow.iter_mut().zip(&self.adj[w]) {
                    *g &= a;
                }
            }
        }
        cliques
    }

    fn expand(&mut self, mut cand: Bits) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(DEADLINE_POLL) && Instant::now() >= self.deadline {
            self.timed_out = true;
        }
        if self.timed_out {
            return;
        }
        let mark = self.current.len();
        self.reduce(&mut cand);
        if is_empty(&cand) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            self.current.truncate(mark);
            return;
        }
        let room = (self.best.len() + 1).saturating_sub(self.current.len());
        if self.clique_cover(&cand, room) < room {
            self.current.truncate(mark);
            return;
        }
        let v = bits_of(&cand)
            .max_by_key(|&v| (count_and(&cand, &self.adj[v]), std::cmp::Reverse(v)))
            .expect("candidate set is nonempty");

        let mut with = cand.clone();
        let before = self.current.len();
        self.take(&mut with, v);
        self.expand(with);
        self.current.truncate(before);

        clear_bit(&mut cand, v);
        self.expand(cand);
        self.current.truncate(mark);
    }
}

/// Repeatedly picks a vertex of minimum remaining degree.
fn greedy(adj: &[Bits], n: usize) -> Vec<usize> {
    let mut cand = vec![0u64; words_for(n)];
    for v in 0..n {
        set_bit(&mut cand, v);
    }
    let mut out = Vec::new();
    while let Some(v) = bits_of(&cand).min_by_key(|&v| (count_and(&cand, &adj[v]), v)) {
        out.push(v);
        clear_bit(&mut cand, v);
        for (c, a) in cand.iter_mut().zip(&adj[v]) {
            *c &= !a;
        }
    }
    out
}

fn neighbourhoods(g: &Graph) -> Vec<Bits> {
    let words = words_for(g.n());
    (0..g.n())
        .map(|v| {
            let mut b = vec![0u64; words];
            for &w in g.neighbors(v) {
                if w != v {
                    set_bit(&mut b, w);
                }
            }
            b
        })
        .collect()
}

/// Maximum independent set within `budget`. The result is deterministic in
/// the vertex order when the search completes.
pub fn max_independent_set(g: &Graph, budget: Duration) -> AlphaResult {
    let start = Instant::now();
    let n = g.n();
    let adj = neighbourhoods(g);
    let mut search = Search {
        best: greedy(&adj, n),
        adj,
        current: Vec::new(),
        nodes: 0,
        deadline: start + budget,
        timed_out: false,
    };
    let mut all = vec![0u64; words_for(n)];
    for v in 0..n {
        set_bit(&mut all, v);
    }
    search.expand(all);
    let mut witness = search.best;
    witness.sort_unstable();
    debug_assert!(crate::graphcore::is_independent(g, &witness));
    AlphaResult {
        alpha: witness.len(),
        witness,
        optimal: !search.timed_out,
        nodes: search.nodes,
        elapsed: start.elapsed(),
    }
}

/// α by plain recursive enumeration: every vertex is either left out or
/// taken together with the removal of its neighbours.
pub fn brute_alpha(g: &Graph) -> Result<usize, ExactError> {
    let n = g.n();
    if n > BRUTE_MAX {
        return Err(ExactError::TooLarge { n, max: BRUTE_MAX });
    }
    let closed: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(1u32 << v, |m, &w| m | 1 << w))
        .collect();
    fn go(cand: u32, closed: &[u32]) -> usize {
        if cand == 0 {
            return 0;
        }
        let v = cand.trailing_zeros() as usize;
        let with = 1 + go(cand & !closed[v], closed);
        if cand & closed[v] == 1 << v {
            // v has no neighbour left, so taking it is never worse.
            return with;
        }
        with.max(go(cand & !(1 << v), closed))
    }
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    Ok(go(all, &closed))
}

/// Calls `f` on every independent set of `g` (including the empty set), in
/// increasing bitmask order.
pub fn for_each_independent_set<F: FnMut(&[usize])>(g: &Graph, mut f: F) -> Result<(), ExactError> {
    let n = g.n();
    if n > BRUTE_MAX {
        return Err(ExactError::TooLarge { n, max: BRUTE_MAX });
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&w| w != v)
                .fold(0u32, |m, &w| m | 1 << w)
        })
        .collect();
    let mut set = Vec::with_capacity(n);
    for mask in 0u32..(1u32 << n) {
        if (0..n).all(|v| mask >> v & 1 == 0 || mask & nbr[v] == 0) {
            set.clear();
            set.extend((0..n).filter(|&v| mask >> v & 1 == 1));
            f(&set);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::geometry::{er_graph, LoopMode};
    use crate::graphcore::is_independent;

    const BUDGET: Duration = Duration::from_secs(60);

    #[test]
    fn small_families() {
        assert_eq!(brute_alpha(&families::petersen()).unwrap(), 4);
        assert_eq!(brute_alpha(&families::cycle(5)).unwrap(), 2);
        assert_eq!(brute_alpha(&families::x_m(2).unwrap()).unwrap(), 2);
        assert_eq!(brute_alpha(&families::complete(6)).unwrap(), 1);
        assert_eq!(brute_alpha(&Graph::empty(0)).unwrap(), 0);
        let r = max_independent_set(&families::petersen(), BUDGET);
        assert_eq!((r.alpha, r.optimal), (4, true));
        assert!(is_independent(&families::petersen(), &r.witness));
    }

    #[test]
    fn complete_bipartite_alpha() {
        for a in 1..5 {
            for b in a + 1..8 {
                let g = families::complete_bipartite(a, b).unwrap();
                assert_eq!(max_independent_set(&g, BUDGET).alpha, b);
                assert_eq!(brute_alpha(&g).unwrap(), b);
            }
        }
    }

    #[test]
    fn er_small() {
        let r = max_independent_set(&er_graph(3, LoopMode::Keep).unwrap(), BUDGET);
        assert_eq!((r.alpha, r.optimal), (5, true));
        let r = max_independent_set(&er_graph(5, LoopMode::Keep).unwrap(), BUDGET);
        assert_eq!((r.alpha, r.optimal), (10, true));
    }

    #[test]
    fn brute_rejects_large() {
        assert_eq!(
            brute_alpha(&Graph::empty(26)).unwrap_err(),
            ExactError::TooLarge { n: 26, max: 25 }
        );
    }

    #[test]
    fn zero_budget_reports_lower_bound() {
        let g = er_graph(7, LoopMode::Keep).unwrap();
        let r = max_independent_set(&g, Duration::ZERO);
        assert!(!r.optimal || r.alpha == 15);
        assert!(is_independent(&g, &r.witness));
        assert_eq!(r.alpha, r.witness.len());
    }

    #[test]
    fn enumerator_counts() {
        let mut count = 0;
        for_each_independent_set(&families::cycle(5), |_| count += 1).unwrap();
        // empty, 5 singletons, 5 non-adjacent pairs
        assert_eq!(count, 11);
        let mut best = 0;
        for_each_independent_set(&families::petersen(), |s| best = best.max(s.len())).unwrap();
        assert_eq!(best, 4);
    }
}
