//! Counterexamples to Bryant's conjecture on decompositions of `L ∨ K_w`.
//!
//! The conjecture predicts that `L ∨ K_w` is triangle decomposable exactly
//! when four conditions hold. An even graph `L` of odd order `u` with
//! `|E(L)| = w(u−w+1)/2`, `χ′(L) = w` and two vertices that miss the same
//! colours in every `w`-colouring satisfies all four but has no
//! decomposition. This module builds such leaves (an explicit PSTS(15) for
//! `w = 4`, and `L1 ∪ L2 ∪ L3` for even `w ≥ 6`) and checks both sides.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::ops::ControlFlow;

use thiserror::Error;

use crate::coloring::{
    chromatic_index, enumerate_colorings, is_proper, koenig_coloring, missing_colors, vizing_coloring, ColorId,
    EdgeColoring,
};
use crate::design::TripleSystem;
use crate::graph::{edge, Edge, Graph, Point};
use crate::outcome::{SearchOutcome, Status};
use crate::seed::derive_seed;
use crate::solver::{exact_k3_decompose, hill_climb, TrianglePackingProblem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("structural argument does not apply: {0}")]
    PatternMismatch(String),
    #[error("precondition fails: {0}")]
    Precondition(String),
}

fn bad<T>(msg: String) -> Result<T, FamilyError> {
    Err(FamilyError::InvalidParameters(msg))
}

const PSTS15: [[Point; 3]; 27] = [
    [1, 2, 7],
    [1, 3, 12],
    [1, 4, 11],
    [1, 8, 15],
    [1, 9, 10],
    [1, 13, 14],
    [2, 5, 10],
    [2, 6, 13],
    [2, 8, 11],
    [2, 9, 14],
    [2, 12, 15],
    [3, 7, 8],
    [3, 9, 15],
    [3, 10, 14],
    [3, 11, 13],
    [4, 7, 15],
    [4, 8, 14],
    [4, 9, 13],
    [4, 10, 12],
    [5, 7, 13],
    [5, 8, 12],
    [5, 9, 11],
    [5, 14, 15],
    [6, 7, 10],
    [6, 8, 9],
    [6, 11, 15],
    [6, 12, 14],
];

/// The 27-triple partial Steiner triple system on `{1, …, 15}` whose leave
/// is the `w = 4` counterexample.
pub fn psts15() -> TripleSystem {
    TripleSystem::from_raw(1..=15, PSTS15).expect("fixed system is valid")
}

fn check_w(w: u32, min: u32) -> Result<(), FamilyError> {
    if w % 2 == 1 || w < min {
        return bad(format!("w={w} must be even and at least {min}"));
    }
    Ok(())
}

/// The graph whose complement is `L1`, on `Z_{w+1} ∪ {∞}` with `∞ = w+1`.
fn l1_complement_edges(w: u32) -> Vec<Edge> {
    let inf = w + 1;
    let mut out: Vec<Edge> = (1..=w / 2).map(|x| edge(x, w + 1 - x)).collect();
    out.extend([edge(0, 2), edge(1, 2), edge(1, inf)]);
    out
}

/// `L1` on points `0..=w+1` (`w+1` playing `∞`): the complete graph minus
/// the pairs `{x, w+1−x}`, `{0,2}`, `{1,2}` and `{1,∞}`.
pub fn build_l1(w: u32) -> Result<Graph, FamilyError> {
    check_w(w, 4)?;
    let missing = Graph::from_edges(l1_complement_edges(w)).expect("distinct pairs");
    let g = Graph::complete(0..=w + 1).subtract(&missing);

    // The pairs removed are pinned down by three constraint groups.
    assert_eq!(missing.size() as u32, (w + 6) / 2);
    for p in 0..=w + 1 {
        let want = if p == 1 || p == 2 { 3 } else { 1 };
        assert_eq!(missing.degree(p).unwrap_or(0), want, "complement degree at {p}");
        let want = if p == 1 || p == 2 { w - 2 } else { w };
        assert_eq!(g.degree(p).unwrap() as u32, want, "degree at {p}");
    }
    assert!(is_proper(&canonical_coloring_of(&g, w)));
    Ok(g)
}

fn canonical_coloring_of(g: &Graph, w: u32) -> EdgeColoring {
    let (m, inf) = (w + 1, w + 1);
    let assignment = g.edges().map(|(x, y)| {
        let c = if y == inf {
            if x == 0 {
                2
            } else {
                2 * x % m
            }
        } else {
            (x + y) % m
        };
        ((x, y), ColorId(c))
    });
    EdgeColoring::new(g.clone(), (1..=w).map(ColorId), assignment).expect("colours are nonzero residues")
}

/// The colouring `γ(xy) = x+y`, `γ(x∞) = 2x`, `γ(0∞) = 2` of `L1`, with
/// palette the nonzero residues mod `w+1`.
pub fn l1_canonical_coloring(w: u32) -> Result<EdgeColoring, FamilyError> {
    Ok(canonical_coloring_of(&build_l1(w)?, w))
}

fn family_t(u: u32, w: u32) -> Result<u32, FamilyError> {
    if u % 2 == 0 {
        return bad(format!("u={u} must be odd"));
    }
    if u < 4 * w + 1 {
        return bad(format!("u={u} < 4w+1={}", 4 * w + 1));
    }
    Ok((u - 2 * w - 1) / 2)
}

/// `L2` on points `0..2t` with `a_i = i` and `b_j = t + j`, where
/// `t = (u−2w−1)/2`: `a_i b_j` for `j ∈ {i, …, i+w−1} (mod t)`, minus
/// `a0b1, a0b2, a1b1, a1b2`.
pub fn build_l2(u: u32, w: u32) -> Result<Graph, FamilyError> {
    check_w(w, 4)?;
    let t = family_t(u, w)?;
    let removed = [edge(0, t + 1), edge(0, t + 2), edge(1, t + 1), edge(1, t + 2)];
    let edges = (0..t)
        .flat_map(|i| (i..i + w).map(move |j| edge(i, t + j % t)))
        .filter(|e| !removed.contains(e));
    Ok(Graph::new(0..2 * t, edges).expect("t >= w keeps the pairs distinct"))
}

/// `L3` on points `0..w−1` with `c_k = k − 1`: a bowtie centred at `c5`
/// plus isolated points.
pub fn build_l3(w: u32) -> Result<Graph, FamilyError> {
    check_w(w, 6)?;
    let c = |k: u32| k - 1;
    let edges = [(1, 2), (1, 5), (2, 5), (3, 4), (3, 5), (4, 5)].map(|(a, b)| edge(c(a), c(b)));
    Ok(Graph::new(0..w - 1, edges).expect("bowtie"))
}

/// `L1 ∪ L2 ∪ L3` on `0..u` together with a certified `w`-edge-colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyLeave {
    pub w: u32,
    pub u: u32,
    pub t: u32,
    pub graph: Graph,
    pub l1: Graph,
    pub l2: Graph,
    pub l3: Graph,
    pub d1: Point,
    pub d2: Point,
    /// Canonical colouring on `L1`, König on `L2`, Vizing on `L3`, all with
    /// palette `1..=w`.
    pub coloring: EdgeColoring,
}

impl FamilyLeave {
    /// Labels: `L1` on `0..=w+1`, then `a_0..a_{t−1}`, `b_0..b_{t−1}`,
    /// `c_1..c_{w−1}`.
    pub fn label_ranges(&self) -> [(&'static str, Point, Point); 4] {
        let (w, t) = (self.w, self.t);
        let a = w + 2;
        [("l1", 0, a), ("a", a, a + t), ("b", a + t, a + 2 * t), ("c", a + 2 * t, self.u)]
    }
}

/// True iff `u` is a valid family order for `w`.
pub fn is_family_order(u: u32, w: u32) -> bool {
    u % 2 == 1 && u >= 4 * w + 1 && matches!((u + w) % 6, 1 | 3)
}

/// The `k` smallest valid family orders for `w`.
pub fn smallest_family_orders(w: u32, k: usize) -> Vec<u32> {
    (4 * w + 1..).filter(|&u| is_family_order(u, w)).take(k).collect()
}

pub fn build_family_leave(u: u32, w: u32) -> Result<FamilyLeave, FamilyError> {
    check_w(w, 6)?;
    if !is_family_order(u, w) {
        return bad(format!("u={u} must be odd, at least 4w+1, with u+w ≡ 1,3 (mod 6)"));
    }
    let t = family_t(u, w)?;
    let l1 = build_l1(w)?;
    let shift = |g: &Graph, by: u32| g.relabel(|p| p + by).expect("shift is injective");
    let l2 = shift(&build_l2(u, w)?, w + 2);
    let l3 = shift(&build_l3(w)?, w + 2 + 2 * t);
    let graph = l1.union(&l2).union(&l3);
    assert_eq!(graph.order() as u32, u);

    let c1 = canonical_coloring_of(&l1, w);
    let c2 = koenig_coloring(&l2).expect("L2 is bipartite");
    let c3 = vizing_coloring(&l3);
    assert!(c2.palette().len() as u32 == w && c3.palette().len() as u32 <= w);
    let assignment: Vec<(Edge, ColorId)> = c1
        .assignment()
        .iter()
        .map(|(&e, &c)| (e, c))
        .chain(c2.assignment().iter().chain(c3.assignment()).map(|(&e, &c)| (e, ColorId(c.0 + 1))))
        .collect();
    let coloring = EdgeColoring::new(graph.clone(), (1..=w).map(ColorId), assignment).expect("palette 1..=w");
    assert!(is_proper(&coloring));
    Ok(FamilyLeave { w, u, t, graph, l1, l2, l3, d1: 1, d2: 2, coloring })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma31Mode {
    Enumerate,
    Structural,
}

impl Lemma31Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Lemma31Mode::Enumerate => "enumerate",
            Lemma31Mode::Structural => "structural",
        }
    }
}

/// Outcome of the three counterexample conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma31Report {
    pub order: usize,
    pub edges: usize,
    /// `w(u−w+1)/2`, or `None` when it is not an integer ≥ 0.
    pub expected_edges: Option<usize>,
    /// (i): the edge count matches.
    pub edge_count: bool,
    /// (ii): `χ′(L) = w`; `None` if undecided within budget.
    pub chromatic_index: Option<usize>,
    pub index_is_w: Option<bool>,
    /// (iii): equal missing colours at `d1` and `d2` in every `w`-colouring;
    /// `None` if undecided.
    pub equal_missing: Option<bool>,
    pub mode: Lemma31Mode,
    /// Colourings visited in enumerate mode.
    pub visited: u64,
    pub detail: String,
}

impl Lemma31Report {
    pub fn holds(&self) -> Option<bool> {
        if !self.edge_count || self.index_is_w == Some(false) || self.equal_missing == Some(false) {
            return Some(false);
        }
        Some(self.index_is_w? && self.equal_missing?)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |b: Option<bool>| b.map_or("unknown".to_string(), |b| b.to_string());
        let _ = writeln!(s, "order={}", self.order);
        let _ = writeln!(s, "edges={}", self.edges);
        let _ = writeln!(s, "expected_edges={}", self.expected_edges.map_or("none".into(), |e| e.to_string()));
        let _ = writeln!(s, "condition_i={}", self.edge_count);
        let _ = writeln!(
            s,
            "chromatic_index={}",
            self.chromatic_index.map_or("unknown".into(), |c| c.to_string())
        );
        let _ = writeln!(s, "condition_ii={}", opt(self.index_is_w));
        let _ = writeln!(s, "condition_iii={}", opt(self.equal_missing));
        let _ = writeln!(s, "mode={}", self.mode.as_str());
        let _ = writeln!(s, "visited={}", self.visited);
        let _ = writeln!(s, "detail={}", self.detail);
        let _ = writeln!(s, "holds={}", opt(self.holds()));
        s
    }
}

/// Checks the counterexample conditions for `L` with distinguished
/// vertices `d1`, `d2`. `certificate`, if given and a proper colouring of `L`
/// with at most `w` colours, settles (ii) without search.
pub fn check_lemma31(
    l: &Graph,
    w: u32,
    d1: Point,
    d2: Point,
    mode: Lemma31Mode,
    certificate: Option<&EdgeColoring>,
    budget: Option<u64>,
) -> Result<Lemma31Report, FamilyError> {
    if !l.is_even() || l.order() % 2 == 0 || w % 2 == 1 {
        return Err(FamilyError::Precondition("L must be even of odd order and w even".into()));
    }
    if !l.contains_vertex(d1) || !l.contains_vertex(d2) || d1 == d2 {
        return Err(FamilyError::Precondition(format!("{d1} and {d2} must be distinct vertices of L")));
    }
    let (u, wu) = (l.order() as i64, w as i64);
    let twice = wu * (u - wu + 1);
    let expected_edges = (twice >= 0 && twice % 2 == 0).then_some((twice / 2) as usize);
    let mut report = Lemma31Report {
        order: l.order(),
        edges: l.size(),
        expected_edges,
        edge_count: expected_edges == Some(l.size()),
        chromatic_index: None,
        index_is_w: None,
        equal_missing: None,
        mode,
        visited: 0,
        detail: String::new(),
    };
    if !report.edge_count {
        report.detail = "edge count differs from w(u-w+1)/2".into();
        return Ok(report);
    }

    let certified = certificate
        .filter(|c| c.graph() == l && is_proper(c) && c.used_colors().len() <= w as usize)
        .is_some();
    if certified && l.max_degree() == w as usize {
        report.chromatic_index = Some(w as usize);
    } else {
        report.chromatic_index = chromatic_index(l, budget).witness.map(|c| c.index);
    }
    report.index_is_w = report.chromatic_index.map(|c| c == w as usize);

    match mode {
        Lemma31Mode::Enumerate => {
            let mut counterexample = None;
            let e = enumerate_colorings(
                l,
                w as usize,
                |view| {
                    if view.missing_mask(d1).ok() != view.missing_mask(d2).ok() {
                        counterexample = Some(view.to_coloring());
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                },
                budget,
            )
            .map_err(|e| FamilyError::Precondition(e.to_string()))?;
            report.visited = e.visited;
            report.equal_missing = if counterexample.is_some() {
                Some(false)
            } else if e.exhausted {
                Some(true)
            } else {
                None
            };
            report.detail = match (&counterexample, e.exhausted) {
                (Some(c), _) => format!(
                    "coloring with different missing sets at {d1} ({:?}) and {d2} ({:?})",
                    missing_colors(c, d1).unwrap_or_default(),
                    missing_colors(c, d2).unwrap_or_default()
                ),
                (None, true) => format!("all {} colorings up to color permutation checked", e.visited),
                (None, false) => format!("budget exhausted after {} colorings", e.visited),
            };
        }
        Lemma31Mode::Structural => {
            let comp = l
                .components()
                .into_iter()
                .find(|c| c.contains(&d1))
                .expect("d1 is a vertex");
            let w = w as usize;
            let mut problems = Vec::new();
            if !comp.contains(&d2) {
                problems.push(format!("{d1} and {d2} lie in different components"));
            }
            if comp.len() != w + 2 {
                problems.push(format!("component of {d1} has {} vertices, not w+2={}", comp.len(), w + 2));
            }
            for &p in &comp {
                let want = if p == d1 || p == d2 { w.wrapping_sub(2) } else { w };
                let got = l.degree(p).expect("vertex");
                if got != want {
                    problems.push(format!("vertex {p} has degree {got}, not {want}"));
                }
            }
            if !problems.is_empty() {
                return Err(FamilyError::PatternMismatch(problems.join("; ")));
            }
            report.equal_missing = Some(true);
            report.detail = format!(
                "component of {d1} has even order {}; {d1},{d2} have degree w-2 and all others degree w, so each \
                 colour missing one of them misses both",
                comp.len()
            );
        }
    }
    Ok(report)
}

/// Where the condition (4) witness came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessSource {
    Provided,
    /// `G = L`.
    Whole,
    /// Found by searching packings of `L`.
    Searched,
}

impl WitnessSource {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessSource::Provided => "provided",
            WitnessSource::Whole => "whole",
            WitnessSource::Searched => "searched",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCheck {
    pub witness: Graph,
    pub source: WitnessSource,
    /// (4)(i) `L − G` has a triangle decomposition.
    pub remainder_decomposable: Status,
    /// `w² − (u+1)w + 2|E(G)|`.
    pub quadratic: i64,
    /// (4)(iii) `χ′(G) ≤ w`; `None` if undecided.
    pub colorable: Option<bool>,
}

impl WitnessCheck {
    pub fn holds(&self) -> Option<bool> {
        match self.remainder_decomposable {
            Status::ProvedNo => return Some(false),
            Status::Unknown => return if self.quadratic < 0 || self.colorable == Some(false) { Some(false) } else { None },
            Status::ProvedYes => {}
        }
        if self.quadratic < 0 {
            return Some(false);
        }
        self.colorable
    }
}

/// Bryant's four conditions for `L` and `w`, plus the actual decomposition
/// verdict for `L ∨ K_w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureReport {
    pub u: usize,
    pub w: u32,
    pub edges: usize,
    pub degree_parity: bool,
    pub order_parity: bool,
    /// `|E(L)| + uw + C(w,2) (mod 3)`.
    pub divisibility_residue: u64,
    pub condition4: WitnessCheck,
    pub decomposition: Status,
    pub decomposition_effort: u64,
    pub decomposition_note: Option<String>,
}

impl ConjectureReport {
    pub fn divisibility(&self) -> bool {
        self.divisibility_residue == 0
    }

    /// All four conditions; `None` if some part is undecided.
    pub fn conditions_hold(&self) -> Option<bool> {
        if !self.degree_parity || !self.order_parity || !self.divisibility() {
            return Some(false);
        }
        self.condition4.holds()
    }

    /// The conditions hold yet `L ∨ K_w` provably has no decomposition.
    pub fn is_counterexample(&self) -> bool {
        self.conditions_hold() == Some(true) && self.decomposition == Status::ProvedNo
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ConjectureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |b: Option<bool>| b.map_or("unknown".to_string(), |b| b.to_string());
        let c4 = &self.condition4;
        writeln!(f, "u={}", self.u)?;
        writeln!(f, "w={}", self.w)?;
        writeln!(f, "edges={}", self.edges)?;
        writeln!(f, "condition1_degree_parity={}", self.degree_parity)?;
        writeln!(f, "condition2_order_parity={}", self.order_parity)?;
        writeln!(f, "condition3_divisibility={}", self.divisibility())?;
        writeln!(f, "condition3_residue={}", self.divisibility_residue)?;
        writeln!(f, "condition4_witness={}", c4.source.as_str())?;
        writeln!(f, "condition4_witness_edges={}", c4.witness.size())?;
        writeln!(f, "condition4i_remainder_decomposable={}", c4.remainder_decomposable)?;
        writeln!(f, "condition4ii_quadratic={}", c4.quadratic)?;
        writeln!(f, "condition4ii={}", c4.quadratic >= 0)?;
        writeln!(f, "condition4iii_colorable={}", opt(c4.colorable))?;
        writeln!(f, "condition4={}", opt(c4.holds()))?;
        writeln!(f, "conditions_hold={}", opt(self.conditions_hold()))?;
        writeln!(f, "decomposition={}", self.decomposition)?;
        writeln!(f, "decomposition_effort={}", self.decomposition_effort)?;
        if let Some(note) = &self.decomposition_note {
            writeln!(f, "decomposition_note={note}")?;
        }
        writeln!(f, "counterexample={}", self.is_counterexample())
    }
}

/// Packing-based witnesses are searched only up to this many edges of `L`.
pub const WITNESS_SEARCH_EDGE_LIMIT: usize = 20;

fn witness_check(l: &Graph, w: u32, g: Graph, source: WitnessSource, budget: Option<u64>) -> WitnessCheck {
    let u = l.order() as i64;
    let wi = w as i64;
    let quadratic = wi * wi - (u + 1) * wi + 2 * g.size() as i64;
    let mut problem = TrianglePackingProblem::new(l.subtract(&g));
    if let Some(b) = budget {
        problem = problem.with_budget(b);
    }
    let remainder_decomposable = exact_k3_decompose(&problem).status;
    let colorable = if g.max_degree() > w as usize {
        Some(false)
    } else if g.max_degree() < w as usize {
        Some(true)
    } else {
        chromatic_index(&g, budget).witness.map(|c| c.index <= w as usize)
    };
    WitnessCheck { witness: g, source, remainder_decomposable, quadratic, colorable }
}

/// Every edge-disjoint set of triangles of `l`, as the graph left over.
fn packing_remainders(l: &Graph) -> Vec<Graph> {
    let triangles: Vec<[Edge; 3]> = TrianglePackingProblem::new(l.clone())
        .candidate_triples()
        .into_iter()
        .map(|t| t.pairs())
        .collect();
    let mut out = Vec::new();
    let mut used = BTreeSet::new();
    fn rec(
        k: usize,
        tris: &[[Edge; 3]],
        used: &mut BTreeSet<Edge>,
        l: &Graph,
        out: &mut Vec<Graph>,
    ) {
        if k == tris.len() {
            let covered = Graph::new(l.vertices().iter().copied(), used.iter().copied()).expect("subgraph");
            out.push(l.subtract(&covered));
            return;
        }
        rec(k + 1, tris, used, l, out);
        if tris[k].iter().all(|e| !used.contains(e)) {
            used.extend(tris[k]);
            rec(k + 1, tris, used, l, out);
            for e in tris[k] {
                used.remove(&e);
            }
        }
    }
    rec(0, &triangles, &mut used, l, &mut out);
    out
}

/// Evaluates the four conditions and decides `L ∨ K_w` exactly (within
/// `budget` nodes). Without a witness, `G = L` is tried first; if that
/// fails and `L` has at most [`WITNESS_SEARCH_EDGE_LIMIT`] edges, every `G`
/// with `L − G` a union of edge-disjoint triangles is tried.
pub fn check_conjecture(
    l: &Graph,
    w: u32,
    witness: Option<&Graph>,
    budget: Option<u64>,
    jobs: usize,
) -> ConjectureReport {
    let u = l.order();
    let degree_parity = l.vertices().iter().all(|&p| l.degree(p).expect("vertex") % 2 == w as usize % 2);
    let order_parity = w == 0 || (u + w as usize) % 2 == 1;
    let wu = w as u64;
    let residue = (l.size() as u64 + u as u64 * wu + wu * wu.saturating_sub(1) / 2) % 3;

    let condition4 = match witness {
        Some(g) => witness_check(l, w, g.clone(), WitnessSource::Provided, budget),
        None => {
            let whole = witness_check(l, w, l.clone(), WitnessSource::Whole, budget);
            if whole.holds() != Some(true) && l.size() <= WITNESS_SEARCH_EDGE_LIMIT {
                packing_remainders(l)
                    .into_iter()
                    .map(|g| witness_check(l, w, g, WitnessSource::Searched, budget))
                    .find(|c| c.holds() == Some(true))
                    .unwrap_or(whole)
            } else {
                whole
            }
        }
    };

    let fresh = l.fresh_points(w as usize);
    let joined = l.join(&Graph::complete(fresh)).expect("fresh labels");
    let mut problem = TrianglePackingProblem::new(joined).with_jobs(jobs);
    if let Some(b) = budget {
        problem = problem.with_budget(b);
    }
    let verdict = exact_k3_decompose(&problem);
    ConjectureReport {
        u,
        w,
        edges: l.size(),
        degree_parity,
        order_parity,
        divisibility_residue: residue,
        condition4,
        decomposition: verdict.status,
        decomposition_effort: verdict.effort,
        decomposition_note: verdict.note,
    }
}

/// Result of [`realize_as_leave`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    /// `δ(complement) ≥ 0.91·u`: the density hypothesis under which a
    /// decomposition of the complement is guaranteed for large `u`.
    pub density_hypothesis: bool,
    pub complement_min_degree: usize,
    pub outcome: SearchOutcome<TripleSystem>,
}

/// Searches for a partial Steiner triple system on `V(L)` whose leave is
/// exactly `L`, by hill climbing on the complement.
pub fn realize_as_leave(l: &Graph, seed: u64, budget: Option<u64>) -> Result<Realization, FamilyError> {
    let u = l.order();
    if !l.is_even() {
        return Err(FamilyError::Precondition("L has a vertex of odd degree".into()));
    }
    if u % 2 == 0 {
        return Err(FamilyError::Precondition(format!("order {u} is even")));
    }
    let pairs = (u * (u - 1) / 2) as u64;
    if (pairs - l.size() as u64) % 3 != 0 {
        return Err(FamilyError::Precondition(format!(
            "|E(L)|={} is not congruent to C(u,2)={pairs} mod 3",
            l.size()
        )));
    }
    let complement = l.complement();
    let min_degree = complement.min_degree();
    let density_hypothesis = 100 * min_degree >= 91 * u;
    let mut effort = 0;
    let mut last_note = None;
    for attempt in 0..5 {
        let mut problem = TrianglePackingProblem::new(complement.clone()).with_seed(derive_seed(seed, "realize", attempt));
        if let Some(b) = budget {
            problem = problem.with_budget(b);
        }
        let out = hill_climb(&problem);
        effort += out.effort;
        if let Some(p) = out.witness {
            let system = TripleSystem::new(l.vertices().iter().copied(), p.triples).expect("packing is a PSTS");
            debug_assert_eq!(system.leave().as_ref(), Ok(l));
            return Ok(Realization {
                density_hypothesis,
                complement_min_degree: min_degree,
                outcome: SearchOutcome::yes(system, effort),
            });
        }
        last_note = out.note;
    }
    Ok(Realization {
        density_hypothesis,
        complement_min_degree: min_degree,
        outcome: SearchOutcome::unknown(effort, last_note),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psts15_is_the_published_system() {
        let s = psts15();
        assert_eq!(s.triples().len(), 27);
        assert!(s.validate().is_valid());
        assert!(s.triples().contains(&crate::design::Triple::new(1, 2, 7).unwrap()));
        assert!(s.triples().contains(&crate::design::Triple::new(6, 12, 14).unwrap()));
        let leave = s.leave().unwrap();
        assert_eq!(leave.size(), 24);
        assert!(leave.is_even());
        assert_eq!(leave.components().iter().filter(|c| c.len() > 1).count(), 2);
    }

    #[test]
    fn l1_small_cases() {
        let g = build_l1(4).unwrap();
        assert_eq!(g.size(), 10);
        let missing = Graph::complete(0..6).subtract(&g);
        assert_eq!(missing.edge_list(), vec![(0, 2), (1, 2), (1, 4), (1, 5), (2, 3)]);
        let c = l1_canonical_coloring(4).unwrap();
        assert_eq!(c.color(0, 3), Some(ColorId(3)));
        assert_eq!(c.color(3, 5), Some(ColorId(1)));
        assert!(build_l1(5).is_err() && build_l1(2).is_err());
    }

    #[test]
    fn l1_canonical_coloring_misses_two_three() {
        for w in (4..=40).step_by(2) {
            let c = l1_canonical_coloring(w).unwrap();
            assert!(is_proper(&c));
            assert_eq!(c.used_colors().len() as u32, w);
            let want = BTreeSet::from([ColorId(2), ColorId(3)]);
            assert_eq!(missing_colors(&c, 1).unwrap(), want);
            assert_eq!(missing_colors(&c, 2).unwrap(), want);
            assert_eq!(c.graph().size() as u32, w * w / 2 + w - 2);
        }
    }

    #[test]
    fn family_25_6() {
        let f = build_family_leave(25, 6).unwrap();
        assert_eq!(f.t, 6);
        assert_eq!(f.l1.size(), 22);
        assert_eq!(f.l2.size(), 32);
        assert_eq!(f.l3.size(), 6);
        assert_eq!(f.l3.order(), 5);
        assert_eq!(f.graph.size(), 60);
        assert_eq!(f.graph.order(), 25);
        assert!(f.graph.is_even());
        assert_eq!(f.graph.max_degree(), 6);
        let r = check_lemma31(&f.graph, 6, f.d1, f.d2, Lemma31Mode::Structural, Some(&f.coloring), None).unwrap();
        assert_eq!(r.holds(), Some(true));
        assert!(build_family_leave(29, 6).is_err());
        assert!(build_family_leave(25, 4).is_err());
    }

    #[test]
    fn structural_mode_refuses_other_patterns() {
        let leave = psts15().leave().unwrap();
        let err = check_lemma31(&leave, 4, 1, 3, Lemma31Mode::Structural, None, None).unwrap_err();
        assert!(matches!(err, FamilyError::PatternMismatch(_)));
    }

    #[test]
    fn family_check_edge_count_failure_is_short() {
        let c5 = Graph::new(0..5, (0..5).map(|i| edge(i, (i + 1) % 5))).unwrap();
        let r = check_lemma31(&c5, 2, 0, 1, Lemma31Mode::Enumerate, None, None).unwrap();
        assert!(!r.edge_count);
        assert_eq!(r.holds(), Some(false));
        assert_eq!(r.chromatic_index, None);
    }

    #[test]
    fn empty_leave_with_w_zero() {
        let r = check_conjecture(&Graph::edgeless(0..7), 0, None, None, 1);
        assert_eq!(r.conditions_hold(), Some(true));
        assert_eq!(r.decomposition, Status::ProvedYes);
        assert!(!r.is_counterexample());
    }

    #[test]
    fn realize_psts15_leave() {
        let leave = psts15().leave().unwrap();
        let r = realize_as_leave(&leave, 7, None).unwrap();
        assert!(!r.density_hypothesis);
        let system = r.outcome.witness.unwrap();
        assert_eq!(system.leave().unwrap(), leave);
        let odd = Graph::from_edges([(0, 1)]).unwrap().with_vertices([2]);
        assert!(realize_as_leave(&odd, 0, None).is_err());
    }

    #[test]
    fn family_orders() {
        assert_eq!(smallest_family_orders(6, 3), vec![25, 27, 31]);
        assert_eq!(smallest_family_orders(8, 3), vec![35, 37, 41]);
        for w in (6..=40).step_by(2) {
            for u in smallest_family_orders(w, 3) {
                assert!(u >= 4 * w + 1 && u % 2 == 1);
            }
        }
    }
}
