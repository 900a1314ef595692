//! Stinson-style hill climbing for triangle decompositions.
//!
//! The climber keeps a packing of the host. Each step picks a vertex `x`
//! with uncovered edges and two uncovered edges `xy`, `xz` at it. If `yz` is a
//! host edge the triple `{x, y, z}` goes in; when `yz` already belongs to a
//! triple `{y, z, t}` that triple is evicted first. Either way the number of
//! covered edges never drops: an insertion gains three, a swap gains none.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{necessary_conditions, Packing, TrianglePackingProblem, DEFAULT_CLIMB_BUDGET};
use crate::design::Triple;
use crate::outcome::SearchOutcome;
use crate::seed;

const NONE: u32 = u32::MAX;

/// What a single climb step did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// A new triple covered three uncovered edges.
    Inserted,
    /// A triple was swapped in for the one holding the third edge.
    Swapped,
    /// The sampled pair did not close a usable triangle.
    Rejected,
    /// Nothing left to cover.
    Complete,
}

pub struct HillClimber<'a> {
    problem: &'a TrianglePackingProblem,
    n: usize,
    masks: Vec<u64>,
    /// `third[i * n + j]` is the vertex completing edge `ij` to its triple.
    third: Vec<u32>,
    live: Vec<Vec<u32>>,
    pos: Vec<u32>,
    live_vertices: Vec<u32>,
    vpos: Vec<u32>,
    uncovered: usize,
    blocks: usize,
    iterations: u64,
    rng: ChaCha8Rng,
}

impl<'a> HillClimber<'a> {
    pub fn new(problem: &'a TrianglePackingProblem) -> Self {
        Self::with_seed(problem, problem.seed())
    }

    pub fn with_seed(problem: &'a TrianglePackingProblem, seed: u64) -> Self {
        let host = problem.host();
        let n = host.order();
        let mut live: Vec<Vec<u32>> = Vec::with_capacity(n);
        let mut pos = vec![NONE; n * n];
        for i in 0..n {
            let row = host.neighbor_indices(i).to_vec();
            for (k, &j) in row.iter().enumerate() {
                pos[i * n + j as usize] = k as u32;
            }
            live.push(row);
        }
        let live_vertices: Vec<u32> = (0..n as u32).filter(|&i| !live[i as usize].is_empty()).collect();
        let mut vpos = vec![NONE; n];
        for (k, &i) in live_vertices.iter().enumerate() {
            vpos[i as usize] = k as u32;
        }
        HillClimber {
            problem,
            n,
            masks: problem.hole_masks(),
            third: vec![NONE; n * n],
            live,
            pos,
            live_vertices,
            vpos,
            uncovered: host.size(),
            blocks: 0,
            iterations: 0,
            rng: seed::rng(seed),
        }
    }

    pub fn uncovered(&self) -> usize {
        self.uncovered
    }

    pub fn covered(&self) -> usize {
        self.problem.host().size() - self.uncovered
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    fn unlink(&mut self, i: usize, j: usize) {
        self.unlink_one(i, j);
        self.unlink_one(j, i);
    }

    fn unlink_one(&mut self, i: usize, j: usize) {
        let n = self.n;
        let k = self.pos[i * n + j] as usize;
        let row = &mut self.live[i];
        let last = *row.last().expect("edge is live");
        row.swap_remove(k);
        if last as usize != j {
            self.pos[i * n + last as usize] = k as u32;
        }
        self.pos[i * n + j] = NONE;
        if row.is_empty() {
            let k = self.vpos[i] as usize;
            let last = *self.live_vertices.last().expect("vertex is live");
            self.live_vertices.swap_remove(k);
            if last as usize != i {
                self.vpos[last as usize] = k as u32;
            }
            self.vpos[i] = NONE;
        }
    }

    fn relink(&mut self, i: usize, j: usize) {
        self.relink_one(i, j);
        self.relink_one(j, i);
    }

    fn relink_one(&mut self, i: usize, j: usize) {
        let n = self.n;
        if self.live[i].is_empty() {
            self.vpos[i] = self.live_vertices.len() as u32;
            self.live_vertices.push(i as u32);
        }
        self.pos[i * n + j] = self.live[i].len() as u32;
        self.live[i].push(j as u32);
    }

    fn set_third(&mut self, i: usize, j: usize, k: u32) {
        self.third[i * self.n + j] = k;
        self.third[j * self.n + i] = k;
    }

    pub fn step(&mut self) -> Step {
        if self.uncovered == 0 {
            return Step::Complete;
        }
        self.iterations += 1;
        let n = self.n;
        let x = self.live_vertices[self.rng.gen_range(0..self.live_vertices.len())] as usize;
        let len = self.live[x].len();
        if len < 2 {
            return Step::Rejected;
        }
        let a = self.rng.gen_range(0..len);
        let mut b = self.rng.gen_range(0..len - 1);
        if b >= a {
            b += 1;
        }
        let (y, z) = (self.live[x][a] as usize, self.live[x][b] as usize);
        if !self.problem.host().has_edge_idx(y, z) || self.masks[x] & self.masks[y] & self.masks[z] != 0 {
            return Step::Rejected;
        }
        let t = self.third[y * n + z];
        let step = if t == NONE {
            self.unlink(y, z);
            self.uncovered -= 3;
            self.blocks += 1;
            Step::Inserted
        } else {
            let t = t as usize;
            self.set_third(y, t, NONE);
            self.set_third(z, t, NONE);
            self.relink(y, t);
            self.relink(z, t);
            Step::Swapped
        };
        self.unlink(x, y);
        self.unlink(x, z);
        self.set_third(y, z, x as u32);
        self.set_third(x, y, z as u32);
        self.set_third(x, z, y as u32);
        step
    }

    /// The current packing.
    pub fn packing(&self) -> Packing {
        let host = self.problem.host();
        let n = self.n;
        let mut triples = Vec::with_capacity(self.blocks);
        for (i, j) in host.edge_indices() {
            let k = self.third[i * n + j];
            if k != NONE && k as usize > j {
                triples.push(
                    Triple::new(host.label(i), host.label(j), host.label(k as usize)).expect("distinct"),
                );
            }
        }
        Packing::new(triples)
    }

    /// Steps until the packing is complete or `budget` iterations are spent.
    pub fn run(&mut self, budget: u64) -> bool {
        while self.uncovered > 0 && self.iterations < budget {
            self.step();
        }
        self.uncovered == 0
    }
}

/// Steps without an insertion after which a climb is abandoned. On hosts
/// with holes the uncovered edges can end up with no live vertex having two
/// live neighbours joined in the host (e.g. a bipartite remainder between
/// two holes); no monotone move exists then, so the climb restarts.
fn stall_limit(order: usize) -> u64 {
    (200 * order as u64).max(20_000)
}

/// Randomised search for a triangle decomposition. Never answers
/// `ProvedNo` except when the host fails the divisibility conditions.
///
/// Each climb is monotone; a climb that stalls is restarted from the empty
/// packing with a seed derived from the problem seed. All iterations count
/// against the budget.
pub fn hill_climb(problem: &TrianglePackingProblem) -> SearchOutcome<Packing> {
    let nc = necessary_conditions(problem.host());
    if !nc.holds() {
        return SearchOutcome::no(0, nc.reasons().join("; "));
    }
    let budget = problem.budget().unwrap_or(DEFAULT_CLIMB_BUDGET);
    let stall = stall_limit(problem.host().order());
    let mut spent = 0u64;
    let mut best = problem.host().size();
    for restart in 0u64.. {
        let seed = if restart == 0 { problem.seed() } else { seed::derive_seed(problem.seed(), "climb-restart", restart) };
        let mut climber = HillClimber::with_seed(problem, seed);
        let mut since_insert = 0u64;
        while climber.uncovered > 0 && spent < budget && since_insert < stall {
            spent += 1;
            match climber.step() {
                Step::Inserted => since_insert = 0,
                _ => since_insert += 1,
            }
        }
        best = best.min(climber.uncovered());
        if climber.uncovered() == 0 {
            let packing = climber.packing();
            debug_assert!(packing.verify(problem, true).is_ok());
            return SearchOutcome::yes(packing, spent);
        }
        if spent >= budget {
            break;
        }
    }
    SearchOutcome::unknown(
        spent,
        format!("iteration budget {budget} exhausted; best climb left {best} of {} edges uncovered", problem.host().size()),
    )
}
