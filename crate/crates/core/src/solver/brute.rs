//! Naive recursive triangle-decomposition search, kept free of any exact-cover
//! machinery so it can serve as an independent oracle.

use super::{necessary_conditions, SolverError};
use crate::design::Triple;
use crate::graph::Graph;
use crate::outcome::SearchOutcome;
use crate::solver::Packing;

/// Largest edge count accepted by [`brute_force_k3_decompose`].
pub const BRUTE_FORCE_EDGE_LIMIT: usize = 45;

struct State<'a> {
    g: &'a Graph,
    edges: Vec<(usize, usize)>,
    covered: Vec<bool>,
    n: usize,
    stack: Vec<[usize; 3]>,
    nodes: u64,
}

impl State<'_> {
    fn live(&self, i: usize, j: usize) -> bool {
        self.g.has_edge_idx(i, j) && !self.covered[i * self.n + j]
    }

    fn mark(&mut self, i: usize, j: usize, value: bool) {
        self.covered[i * self.n + j] = value;
        self.covered[j * self.n + i] = value;
    }

    /// Covers the lexicographically first uncovered edge in every possible way.
    fn solve(&mut self, from: usize) -> bool {
        let Some(pos) = (from..self.edges.len()).find(|&e| {
            let (i, j) = self.edges[e];
            !self.covered[i * self.n + j]
        }) else {
            return true;
        };
        let (i, j) = self.edges[pos];
        for k in 0..self.n {
            if k == i || k == j || !self.live(i, k) || !self.live(j, k) {
                continue;
            }
            self.nodes += 1;
            self.mark(i, j, true);
            self.mark(i, k, true);
            self.mark(j, k, true);
            self.stack.push([i, j, k]);
            if self.solve(pos + 1) {
                return true;
            }
            self.stack.pop();
            self.mark(i, j, false);
            self.mark(i, k, false);
            self.mark(j, k, false);
        }
        false
    }
}

/// Brute-force decomposition of small graphs. Divisibility failures are
/// reported as `ProvedNo` without search, matching the exact solver.
pub fn brute_force_k3_decompose(g: &Graph) -> Result<SearchOutcome<Packing>, SolverError> {
    if g.size() > BRUTE_FORCE_EDGE_LIMIT {
        return Err(SolverError::TooLarge(g.size()));
    }
    let nc = necessary_conditions(g);
    if !nc.holds() {
        return Ok(SearchOutcome::no(0, nc.reasons().join("; ")));
    }
    let n = g.order();
    let mut state = State {
        g,
        edges: g.edge_indices().collect(),
        covered: vec![false; n * n],
        n,
        stack: Vec::new(),
        nodes: 0,
    };
    if state.solve(0) {
        let triples = state
            .stack
            .iter()
            .map(|&[i, j, k]| Triple::new(g.label(i), g.label(j), g.label(k)).expect("distinct"))
            .collect();
        Ok(SearchOutcome::yes(Packing::new(triples), state.nodes))
    } else {
        Ok(SearchOutcome::no(state.nodes, "search space exhausted".to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::TrianglePackingProblem;

    #[test]
    fn small_complete_graphs() {
        let k7 = Graph::complete(0..7);
        let out = brute_force_k3_decompose(&k7).unwrap();
        assert!(out.is_yes());
        assert!(out.witness.unwrap().verify(&TrianglePackingProblem::new(k7), true).is_ok());
        assert!(brute_force_k3_decompose(&Graph::complete(0..6)).unwrap().is_no());
        assert!(brute_force_k3_decompose(&Graph::complete(0..9)).unwrap().is_yes());
    }

    #[test]
    fn guard() {
        assert!(brute_force_k3_decompose(&Graph::complete(0..10)).unwrap().is_no());
        assert_eq!(
            brute_force_k3_decompose(&Graph::complete(0..11)).unwrap_err(),
            SolverError::TooLarge(55)
        );
    }
}
