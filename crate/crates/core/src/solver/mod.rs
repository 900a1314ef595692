//! Triangle decompositions of graphs.
//!
//! Three engines share one problem type:
//!
//! - [`exact_k3_decompose`]: complete exact-cover search (dancing links). It
//!   can prove that no decomposition exists.
//! - [`brute_force_k3_decompose`]: a deliberately naive recursive search,
//!   used only as an independent oracle on small graphs.
//! - [`hill_climb`]: the randomised packing climb. It never proves
//!   nonexistence; it is the constructive tool for large dense hosts.
//!
//! A problem may also carry *holes*: point sets inside which no triple may
//! lie. Hole problems normally delete the hole's interior edges from the host
//! already, so the hole filter is a consistency check rather than a pruning
//! device.

mod brute;
mod climb;
mod exact;
mod holes;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::design::Triple;
use crate::graph::{Edge, Graph, Point};

pub use brute::{brute_force_k3_decompose, BRUTE_FORCE_EDGE_LIMIT};
pub use climb::{hill_climb, HillClimber, Step};
pub use exact::exact_k3_decompose;
pub use holes::{
    decompose_complete_minus_hole, decompose_double_hole, decompose_hole_on, double_hole_conditions, hole_conditions,
};

/// Decision nodes for the exact solver when no budget is given.
pub const DEFAULT_EXACT_BUDGET: u64 = 100_000_000;
/// Iterations for the hill climb when no budget is given.
pub const DEFAULT_CLIMB_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("hole point {0} is not a vertex of the host")]
    HoleOutsideHost(Point),
    #[error("at most 64 holes are supported")]
    TooManyHoles,
    #[error("graph has {0} edges; brute force is limited to {BRUTE_FORCE_EDGE_LIMIT}")]
    TooLarge(usize),
    #[error("hole sets are not subsets of the point set")]
    HoleNotSubset,
}

/// A host graph to be decomposed into triangles, with optional holes.
#[derive(Debug, Clone)]
pub struct TrianglePackingProblem {
    host: Graph,
    holes: Vec<Vec<Point>>,
    budget: Option<u64>,
    seed: u64,
    jobs: usize,
}

impl TrianglePackingProblem {
    pub fn new(host: Graph) -> Self {
        TrianglePackingProblem { host, holes: Vec::new(), budget: None, seed: 0, jobs: 1 }
    }

    pub fn with_hole<V: IntoIterator<Item = Point>>(mut self, hole: V) -> Result<Self, SolverError> {
        let hole: BTreeSet<Point> = hole.into_iter().collect();
        if let Some(&p) = hole.iter().find(|&&p| !self.host.contains_vertex(p)) {
            return Err(SolverError::HoleOutsideHost(p));
        }
        if self.holes.len() == 64 {
            return Err(SolverError::TooManyHoles);
        }
        self.holes.push(hole.into_iter().collect());
        Ok(self)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Worker threads for the exact solver's root split; 1 means sequential.
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn holes(&self) -> &[Vec<Point>] {
        &self.holes
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    /// Per-vertex bitmask of the holes containing it, indexed like the host.
    pub(crate) fn hole_masks(&self) -> Vec<u64> {
        let mut masks = vec![0u64; self.host.order()];
        for (h, hole) in self.holes.iter().enumerate() {
            for &p in hole {
                let i = self.host.index_of(p).expect("holes are validated");
                masks[i] |= 1 << h;
            }
        }
        masks
    }

    /// Host edges lying inside some hole.
    pub fn edges_inside_holes(&self) -> Vec<Edge> {
        let masks = self.hole_masks();
        self.host
            .edge_indices()
            .filter(|&(i, j)| masks[i] & masks[j] != 0)
            .map(|(i, j)| (self.host.label(i), self.host.label(j)))
            .collect()
    }

    /// Triangles of the host not lying entirely inside a hole, as vertex
    /// index triples in lexicographic order.
    pub(crate) fn candidate_triangles(&self) -> Vec<[usize; 3]> {
        let g = &self.host;
        let masks = self.hole_masks();
        let mut out = Vec::new();
        for i in 0..g.order() {
            let row = g.neighbor_indices(i);
            for (a, &j) in row.iter().enumerate() {
                let j = j as usize;
                if j < i {
                    continue;
                }
                for &k in &row[a + 1..] {
                    let k = k as usize;
                    if g.has_edge_idx(j, k) && masks[i] & masks[j] & masks[k] == 0 {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// [`candidate_triangles`](Self::candidate_triangles) as labelled triples.
    pub fn candidate_triples(&self) -> Vec<Triple> {
        self.candidate_triangles().into_iter().map(|t| triple_from_indices(&self.host, t)).collect()
    }
}

/// A set of edge-disjoint host triangles.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Packing {
    pub triples: Vec<Triple>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("triple {0} is not a triangle of the host")]
    NotATriangle(Triple),
    #[error("triple {0} lies inside a hole")]
    InsideHole(Triple),
    #[error("edge {}-{} is covered twice", .0.0, .0.1)]
    Overlap(Edge),
    #[error("{0} host edges are left uncovered")]
    Uncovered(usize),
}

impl Packing {
    pub fn new(mut triples: Vec<Triple>) -> Self {
        triples.sort_unstable();
        Packing { triples }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn covered_edges(&self) -> BTreeSet<Edge> {
        self.triples.iter().flat_map(|t| t.pairs()).collect()
    }

    /// The uncovered part of the host.
    pub fn leave(&self, host: &Graph) -> Graph {
        let covered = Graph::from_edges(self.triples.iter().flat_map(|t| t.pairs()))
            .unwrap_or_else(|_| Graph::edgeless(std::iter::empty()));
        host.subtract(&covered)
    }

    /// Checks that the triples are edge-disjoint host triangles avoiding hole
    /// interiors and, when `full` is set, that they cover every host edge.
    pub fn verify(&self, problem: &TrianglePackingProblem, full: bool) -> Result<(), PackingError> {
        let host = &problem.host;
        let mut seen = BTreeSet::new();
        for &t in &self.triples {
            let [a, b, c] = t.points();
            if !(host.has_edge(a, b) && host.has_edge(a, c) && host.has_edge(b, c)) {
                return Err(PackingError::NotATriangle(t));
            }
            if problem.holes.iter().any(|h| t.points().iter().all(|p| h.binary_search(p).is_ok())) {
                return Err(PackingError::InsideHole(t));
            }
            for p in t.pairs() {
                if !seen.insert(p) {
                    return Err(PackingError::Overlap(p));
                }
            }
        }
        if full && seen.len() != host.size() {
            return Err(PackingError::Uncovered(host.size() - seen.len()));
        }
        Ok(())
    }
}

/// Divisibility audit: every degree even and the edge count divisible by 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecessaryConditions {
    pub odd_vertices: Vec<Point>,
    pub edge_count: usize,
}

impl NecessaryConditions {
    pub fn holds(&self) -> bool {
        self.odd_vertices.is_empty() && self.edge_count % 3 == 0
    }

    pub fn reasons(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.odd_vertices.is_empty() {
            let shown: Vec<String> = self.odd_vertices.iter().take(8).map(|p| p.to_string()).collect();
            out.push(format!(
                "{} vertices of odd degree ({}{})",
                self.odd_vertices.len(),
                shown.join(","),
                if self.odd_vertices.len() > 8 { ",..." } else { "" }
            ));
        }
        if self.edge_count % 3 != 0 {
            out.push(format!("edge count {} is not divisible by 3", self.edge_count));
        }
        out
    }
}

impl fmt::Display for NecessaryConditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            f.write_str("divisibility conditions hold")
        } else {
            f.write_str(&self.reasons().join("; "))
        }
    }
}

pub fn necessary_conditions(g: &Graph) -> NecessaryConditions {
    NecessaryConditions {
        odd_vertices: g
            .vertices()
            .iter()
            .enumerate()
            .filter(|&(i, _)| g.degree_idx(i) % 2 == 1)
            .map(|(_, &p)| p)
            .collect(),
        edge_count: g.size(),
    }
}

/// Greedy maximal packing: scan triangles lexicographically, keep each one
/// that is edge-disjoint from those already kept.
pub fn greedy_packing(problem: &TrianglePackingProblem) -> Packing {
    let g = &problem.host;
    let mut used = BTreeSet::new();
    let mut triples = Vec::new();
    for [i, j, k] in problem.candidate_triangles() {
        let pairs = [edge_idx(i, j), edge_idx(i, k), edge_idx(j, k)];
        if pairs.iter().any(|p| used.contains(p)) {
            continue;
        }
        used.extend(pairs);
        triples.push(Triple::new(g.label(i), g.label(j), g.label(k)).expect("distinct vertices"));
    }
    Packing::new(triples)
}

fn edge_idx(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

pub(crate) fn triple_from_indices(g: &Graph, [i, j, k]: [usize; 3]) -> Triple {
    Triple::new(g.label(i), g.label(j), g.label(k)).expect("distinct vertices")
}
