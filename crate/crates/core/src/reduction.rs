//! `(u, v, G)`-backgrounds: partial triple systems of order `u` that embed in
//! order `v` exactly when the cubic graph `G` is 3-edge-colourable, and no
//! smaller.
//!
//! Layout of the points `0..u` (with `u′` the working order and `d = v − u′`):
//!
//! | role        | labels               |
//! |-------------|----------------------|
//! | `V(G)`      | `0..n`               |
//! | `x`         | `n`                  |
//! | `D`         | `n+1 ..= n+d`        |
//! | `A′`        | `n+d+1 .. u′`        |
//! | `Z ⊆ A′`    | three lowest of `A′` |
//! | padding     | `u′ .. u`            |
//! | extension   | `u .. v`             |
//!
//! The leave restricted to `0..u′` is `(K̄_Z ∨ G) ∪ K_{A′,D}`. Padding points
//! are in no triple; in the padded system every pair through them is
//! uncovered, which is why the leave is audited on `0..u′`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::coloring::{coloring_to_decomposition, decomposition_to_coloring, is_proper, ColorId, ColoringError, EdgeColoring};
use crate::design::{is_admissible, Triple, TripleSystem};
use crate::graph::{edge, Graph, Point};
use crate::outcome::{SearchOutcome, Status};
use crate::seed::derive_seed;
use crate::solver::{decompose_double_hole, decompose_hole_on, double_hole_conditions, hill_climb, hole_conditions, Packing, TrianglePackingProblem};

/// Attempts per stochastic stage before giving up with `Unknown`.
pub const STAGE_ATTEMPTS: u64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("parameters rejected: {}", .0.join("; "))]
    Params(Vec<String>),
    #[error("source graph must be cubic")]
    NotCubic,
    #[error("stage {stage} gave no answer: {note}")]
    Stage { stage: &'static str, status: Status, note: String },
    #[error("background fails verification:\n{0}")]
    Verification(String),
    #[error("coloring: {0}")]
    Coloring(#[from] ColoringError),
    #[error("not an embedding: {0}")]
    NotEmbedding(String),
    #[error("inconsistent embedding: {0}")]
    Inconsistent(String),
    #[error("metadata: {0}")]
    Metadata(String),
}

/// The orders involved in one background and the sizes they force.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackgroundParams {
    /// Order of the cubic graph.
    pub n: u64,
    pub u: u64,
    pub v: u64,
    /// The order of the unpadded system.
    pub working_order: u64,
    /// `v − working_order`, the size of `D`.
    pub d: u64,
}

impl BackgroundParams {
    /// `|A′| = u′ − d − n − 1`.
    pub fn a_prime_len(&self) -> u64 {
        self.working_order - self.d - self.n - 1
    }

    /// `|A| = |A′| + n + 1 = u′ − d`.
    pub fn a_len(&self) -> u64 {
        self.working_order - self.d
    }

    pub fn padding(&self) -> u64 {
        self.u - self.working_order
    }
}

/// Largest `u′ ≤ min(u, ⌊(2v+n+1)/3⌋)` with `u′ ≡ v (mod 6)`, if any.
fn working_order_rule(n: u64, u: u64, v: u64) -> Option<u64> {
    let cap = u.min((2 * v + n + 1) / 3);
    let target = v % 6;
    (0..6).map(|k| cap.checked_sub(k)).find(|c| c.is_some_and(|c| c % 6 == target)).flatten()
}

fn derive_params(n: u64, u: u64, v: u64) -> Option<BackgroundParams> {
    let working_order = working_order_rule(n, u, v)?;
    let d = v.checked_sub(working_order)?;
    Some(BackgroundParams { n, u, v, working_order, d })
}

/// Hypotheses on `(n, u, v)` under which a background exists.
fn outer_violations(n: u64, u: u64, v: u64) -> Vec<String> {
    let mut out = Vec::new();
    if n % 2 != 0 {
        out.push(format!("n={n} must be even"));
    }
    if n < 74 {
        out.push(format!("n={n} < 74"));
    }
    if !is_admissible(v) {
        out.push(format!("v={v} is not 1 or 3 mod 6"));
    }
    if u < 4 * n + 43 {
        out.push(format!("u={u} < 4n+43={}", 4 * n + 43));
    }
    if v < u {
        out.push(format!("v={v} < u={u}"));
    }
    if v + 2 * n + 13 > 2 * u {
        out.push(format!("v={v} > 2u-2n-13={}", 2 * u as i64 - 2 * n as i64 - 13));
    }
    out
}

/// Hypotheses on the working order that the construction itself relies on.
fn working_violations(p: &BackgroundParams) -> Vec<String> {
    let (n, w, v, d) = (p.n, p.working_order, p.v, p.d);
    let mut out = Vec::new();
    if w < 3 * n + 5 {
        out.push(format!("u'={w} < 3n+5={}", 3 * n + 5));
    }
    if 3 * w > 2 * v + n + 1 {
        out.push(format!("(3u'-n-1)/2 > v={v} for u'={w}"));
    }
    if v + 2 * n + 3 > 2 * w {
        out.push(format!("v={v} > 2u'-2n-3={}", 2 * w as i64 - 2 * n as i64 - 3));
    }
    if d % 6 != 0 {
        out.push(format!("d={d} is not 0 mod 6"));
    }
    if d < n + 2 {
        out.push(format!("d={d} < n+2={}", n + 2));
    }
    out
}

/// The arithmetic each construction stage needs, without the asymptotic
/// hypotheses. Used in best-effort mode.
fn stage_violations(p: &BackgroundParams) -> Vec<String> {
    let (n, d) = (p.n, p.d);
    let mut out = Vec::new();
    if n % 2 != 0 {
        out.push(format!("n={n} must be even"));
    }
    if !is_admissible(p.v) {
        out.push(format!("v={} is not 1 or 3 mod 6", p.v));
    }
    if d % 6 != 0 {
        out.push(format!("d={d} is not 0 mod 6"));
    }
    if p.working_order < d + n + 4 {
        out.push(format!("u'={} leaves fewer than 3 points for A'", p.working_order));
        return out;
    }
    if !is_admissible(p.a_len()) {
        out.push(format!("|A|={} is not 1 or 3 mod 6", p.a_len()));
    }
    for f in hole_conditions(n + 1 + d, n + 1) {
        out.push(format!("K_(A''∪D) - K_A'': {f}"));
    }
    let (a, b, ab) = double_hole_sizes(p);
    for f in double_hole_conditions(p.v, a, b, ab) {
        out.push(format!("double hole: {f}"));
    }
    out
}

/// `(|A|, |B|, |A ∩ B|)` for the double hole filled by the embedding.
fn double_hole_sizes(p: &BackgroundParams) -> (u64, u64, u64) {
    (p.a_len(), p.d + p.n + 1, p.n + 1)
}

/// Validates `(n, u, v)` and derives the working order and `d`.
pub fn check_params(n: u64, u: u64, v: u64) -> Result<BackgroundParams, Vec<String>> {
    let mut out = outer_violations(n, u, v);
    if !out.is_empty() {
        return Err(out);
    }
    let Some(p) = derive_params(n, u, v) else {
        return Err(vec![format!("no working order u' <= u with u' = v mod 6")]);
    };
    out.extend(working_violations(&p));
    if out.is_empty() {
        Ok(p)
    } else {
        Err(out)
    }
}

/// Parameters for best-effort runs: only the per-stage arithmetic is checked.
pub fn check_params_best_effort(n: u64, u: u64, v: u64) -> Result<BackgroundParams, Vec<String>> {
    let Some(p) = derive_params(n, u, v) else {
        return Err(vec![format!("no working order u' <= u with u' = v mod 6")]);
    };
    let out = stage_violations(&p);
    if out.is_empty() {
        Ok(p)
    } else {
        Err(out)
    }
}

/// The working order `u′`, asserting the inequalities the two cases of the
/// existence argument promise.
pub fn select_working_order(n: u64, u: u64, v: u64) -> Result<u64, Vec<String>> {
    let out = outer_violations(n, u, v);
    if !out.is_empty() {
        return Err(out);
    }
    let w = working_order_rule(n, u, v).expect("u >= 4n+43 leaves room below the cap");
    assert!(w % 2 == 1, "u' is odd");
    if 3 * u <= 2 * v + n + 1 {
        assert!(w + 5 >= u && w <= u, "case u <= (2v+n+1)/3");
    } else {
        assert!(3 * w + 18 > 2 * v + n + 1, "case u > (2v+n+1)/3");
        assert!(w > 3 * n + 23);
    }
    let p = BackgroundParams { n, u, v, working_order: w, d: v - w };
    let post = working_violations(&p);
    assert!(post.is_empty(), "working order {w} violates {post:?}");
    Ok(w)
}

/// A background together with the labelling that makes its structure
/// checkable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackgroundInstance {
    pub system: TripleSystem,
    /// The cubic graph as given.
    pub source: Graph,
    /// `labels[i]` is the source vertex placed at point `i`.
    pub labels: Vec<Point>,
    pub params: BackgroundParams,
    /// Built without the guarantee of the existence hypotheses.
    pub best_effort: bool,
}

impl BackgroundInstance {
    fn n(&self) -> Point {
        self.params.n as Point
    }

    pub fn graph_points(&self) -> Range<Point> {
        0..self.n()
    }

    pub fn x(&self) -> Point {
        self.n()
    }

    pub fn d_points(&self) -> Range<Point> {
        self.n() + 1..self.n() + 1 + self.params.d as Point
    }

    pub fn a_prime(&self) -> Range<Point> {
        self.d_points().end..self.params.working_order as Point
    }

    pub fn z(&self) -> [Point; 3] {
        let s = self.a_prime().start;
        [s, s + 1, s + 2]
    }

    pub fn padding(&self) -> Range<Point> {
        self.params.working_order as Point..self.params.u as Point
    }

    pub fn extension(&self) -> Range<Point> {
        self.params.u as Point..self.params.v as Point
    }

    /// The hole `A = U′ ∖ D` of the order-`v` completion.
    pub fn hole_a(&self) -> Vec<Point> {
        (0..=self.x()).chain(self.a_prime()).collect()
    }

    /// The hole `B = D ∪ V(G) ∪ {x}`.
    pub fn hole_b(&self) -> Vec<Point> {
        (0..self.d_points().end).collect()
    }

    /// The source graph moved onto the points `0..n`.
    pub fn placed_graph(&self) -> Graph {
        let pos: BTreeMap<Point, Point> = self.labels.iter().enumerate().map(|(i, &l)| (l, i as Point)).collect();
        self.source.relabel(|p| pos[&p]).expect("labels are a bijection")
    }

    /// `(K̄_Z ∨ G) ∪ K_{A′,D}` on the points `0..u′`.
    pub fn expected_leave(&self) -> Graph {
        let g = self.placed_graph();
        let join = Graph::edgeless(self.z()).join(&g).expect("Z avoids V(G)");
        let cross = Graph::complete_bipartite(self.a_prime(), self.d_points()).expect("disjoint");
        join.union(&cross).with_vertices(0..self.params.working_order as Point)
    }

    /// Plain `key=value` metadata describing the layout.
    pub fn metadata(&self) -> String {
        let p = &self.params;
        let range = |r: Range<Point>| {
            if r.is_empty() {
                "-".to_string()
            } else {
                format!("{}..{}", r.start, r.end - 1)
            }
        };
        let labels: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        let z: Vec<String> = self.z().iter().map(|l| l.to_string()).collect();
        [
            format!("n={}", p.n),
            format!("u={}", p.u),
            format!("v={}", p.v),
            format!("working_order={}", p.working_order),
            format!("d={}", p.d),
            format!("graph_points={}", range(self.graph_points())),
            format!("x={}", self.x()),
            format!("d_points={}", range(self.d_points())),
            format!("a_prime={}", range(self.a_prime())),
            format!("z={}", z.join(",")),
            format!("padding={}", range(self.padding())),
            format!("extension={}", range(self.extension())),
            format!("best_effort={}", self.best_effort),
            format!("source_labels={}", labels.join(",")),
        ]
        .join("\n")
            + "\n"
    }

    /// Rebuilds an instance from its system and [`metadata`](Self::metadata).
    /// The source graph is read back off the leave.
    pub fn from_metadata(system: TripleSystem, text: &str) -> Result<Self, ReductionError> {
        let mut kv = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ReductionError::Metadata(format!("line {}: expected key=value", i + 1)))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| kv.get(k).ok_or_else(|| ReductionError::Metadata(format!("missing key {k}")));
        let num = |k: &str| -> Result<u64, ReductionError> {
            get(k)?.parse().map_err(|_| ReductionError::Metadata(format!("{k} is not an integer")))
        };
        let (n, u, v) = (num("n")?, num("u")?, num("v")?);
        let best_effort = match get("best_effort")?.as_str() {
            "true" => true,
            "false" => false,
            other => return Err(ReductionError::Metadata(format!("best_effort={other}"))),
        };
        let params = if best_effort { check_params_best_effort(n, u, v) } else { check_params(n, u, v) }
            .map_err(ReductionError::Params)?;
        let labels: Vec<Point> = get("source_labels")?
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.trim().parse().map_err(|_| ReductionError::Metadata(format!("bad label {s}"))))
            .collect::<Result<_, _>>()?;
        if labels.len() as u64 != n || labels.iter().collect::<BTreeSet<_>>().len() != labels.len() {
            return Err(ReductionError::Metadata("source_labels must list n distinct labels".into()));
        }
        if system.points() != (0..u as Point).collect::<Vec<_>>() {
            return Err(ReductionError::Metadata(format!("system points must be 0..{u}")));
        }
        let leave = system.leave().map_err(|e| ReductionError::Verification(e.to_string()))?;
        let placed = leave.induced(0..n as Point);
        let source = placed.relabel(|p| labels[p as usize]).expect("labels are distinct");
        let b = BackgroundInstance { system, source, labels, params, best_effort };
        for key in ["working_order", "d"] {
            let recorded = num(key)?;
            let derived = if key == "d" { params.d } else { params.working_order };
            if recorded != derived {
                return Err(ReductionError::Metadata(format!("{key}={recorded} but the rule gives {derived}")));
            }
        }
        let z: Vec<String> = b.z().iter().map(|l| l.to_string()).collect();
        if get("z")? != &z.join(",") {
            return Err(ReductionError::Metadata("z does not match the layout".into()));
        }
        Ok(b)
    }
}

/// Outcome of [`verify_background`]: one named verdict per check.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BackgroundReport {
    pub checks: Vec<(&'static str, bool, String)>,
}

impl BackgroundReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    fn push(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) {
        self.checks.push((name, ok, detail.into()));
    }
}

impl fmt::Display for BackgroundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, ok, detail) in &self.checks {
            if detail.is_empty() {
                writeln!(f, "{name}={ok}")?;
            } else {
                writeln!(f, "{name}={ok} # {detail}")?;
            }
        }
        Ok(())
    }
}

/// Checks the system, the exact leave on `0..u′`, the layout and the leave
/// degrees the non-embeddability argument counts on.
pub fn verify_background(b: &BackgroundInstance) -> BackgroundReport {
    let mut r = BackgroundReport::default();
    let p = &b.params;
    let validation = b.system.validate();
    r.push(
        "system_valid",
        validation.is_valid(),
        validation.first().map(|v| v.to_string()).unwrap_or_default(),
    );
    let points_ok = b.system.points().iter().copied().eq(0..p.u as Point);
    r.push("points", points_ok, format!("expected 0..{}", p.u));

    let layout_ok = p.working_order <= p.u
        && p.working_order >= p.d + p.n + 4
        && b.labels.len() as u64 == p.n
        && b.source.order() as u64 == p.n
        && b.labels.iter().all(|&l| b.source.contains_vertex(l));
    r.push("layout", layout_ok, format!("n={} d={} |A'|={}", p.n, p.d, p.working_order.saturating_sub(p.d + p.n + 1)));
    r.push("source_cubic", b.source.is_cubic(), "");
    if !validation.is_valid() || !points_ok || !layout_ok {
        return r;
    }

    let full_leave = b.system.leave().expect("validated");
    let leave = full_leave.induced(0..p.working_order as Point);
    let expected = b.expected_leave();
    let extra = leave.subtract(&expected).size();
    let missing = expected.subtract(&leave).size();
    r.push("leave_exact", extra == 0 && missing == 0, format!("{extra} unexpected, {missing} missing edges"));

    let padded: Vec<Triple> =
        b.system.triples().iter().filter(|t| t.points().iter().any(|&q| q >= p.working_order as Point)).copied().collect();
    r.push("padding_unused", padded.is_empty(), padded.first().map(|t| format!("triple {t}")).unwrap_or_default());

    let deg = |q: Point| leave.degree(q).expect("point of the leave");
    let z = b.z();
    let bad_a = b.a_prime().filter(|q| !z.contains(q)).find(|&q| deg(q) as u64 != p.d);
    r.push(
        "degree_a_prime",
        bad_a.is_none(),
        bad_a.map(|q| format!("point {q} has degree {}", deg(q))).unwrap_or_else(|| format!("all {}", p.d)),
    );
    let bad_z = z.iter().copied().find(|&q| deg(q) as u64 != p.d + p.n);
    r.push(
        "degree_z",
        bad_z.is_none(),
        bad_z.map(|q| format!("point {q} has degree {}", deg(q))).unwrap_or_else(|| format!("all {}", p.d + p.n)),
    );
    // Three edges inside G plus one to each point of Z.
    let inside = leave.induced(b.graph_points());
    let bad_g = b.graph_points().find(|&q| inside.degree(q).expect("graph point") != 3 || deg(q) != 6);
    r.push(
        "degree_graph",
        bad_g.is_none(),
        bad_g
            .map(|q| format!("point {q} has degree {} ({} inside G)", deg(q), inside.degree(q).unwrap_or(0)))
            .unwrap_or_else(|| "all 3 inside G, 6 in total".into()),
    );
    r
}

/// Runs a stochastic stage up to [`STAGE_ATTEMPTS`] times with derived seeds.
fn retry<F>(stage: &'static str, seed: u64, mut run: F) -> Result<Packing, ReductionError>
where
    F: FnMut(u64) -> SearchOutcome<Packing>,
{
    let mut last = None;
    for attempt in 0..STAGE_ATTEMPTS {
        let out = run(derive_seed(seed, stage, attempt));
        match out.status {
            Status::ProvedYes => return Ok(out.witness.expect("yes carries a witness")),
            // A proof of nonexistence will not change with another seed.
            Status::ProvedNo => {
                return Err(ReductionError::Stage { stage, status: out.status, note: out.note.unwrap_or_default() })
            }
            Status::Unknown => last = Some(out),
        }
    }
    let out = last.expect("at least one attempt");
    Err(ReductionError::Stage {
        stage,
        status: Status::Unknown,
        note: format!("{} attempts: {}", STAGE_ATTEMPTS, out.note.unwrap_or_default()),
    })
}

/// Builds a background for the cubic graph `g`. In best-effort mode only the
/// per-stage arithmetic is required, so small graphs can be used; the result
/// then carries no guarantee about embeddings.
pub fn build_background(
    g: &Graph,
    u: u64,
    v: u64,
    seed: u64,
    budget: Option<u64>,
    best_effort: bool,
) -> Result<BackgroundInstance, ReductionError> {
    if !g.is_cubic() {
        return Err(ReductionError::NotCubic);
    }
    let n = g.order() as u64;
    let params = if best_effort { check_params_best_effort(n, u, v) } else { check_params(n, u, v) }
        .map_err(ReductionError::Params)?;
    let shell = BackgroundInstance {
        system: TripleSystem::empty(0..u as Point).expect("distinct points"),
        source: g.clone(),
        labels: g.vertices().to_vec(),
        params,
        best_effort,
    };
    let placed = shell.placed_graph();

    // B0: everything inside A except K̄_Z ∨ G.
    let a = shell.hole_a();
    let removed = Graph::edgeless(shell.z()).join(&placed).expect("Z avoids V(G)");
    let host = Graph::complete(a.iter().copied()).subtract(&removed);
    assert!(host.is_even(), "K_A - (K̄_Z ∨ G) is even");
    assert_eq!(host.size() % 3, 0, "K_A - (K̄_Z ∨ G) has a multiple of 3 edges");
    let b0 = retry("background-b0", seed, |s| {
        let mut problem = TrianglePackingProblem::new(host.clone()).with_seed(s);
        if let Some(b) = budget {
            problem = problem.with_budget(b);
        }
        hill_climb(&problem)
    })?;

    // B1: K_{A″ ∪ D} − K_{A″}.
    let inner: Vec<Point> = (0..=shell.x()).collect();
    let b1 = retry("background-b1", seed, |s| {
        decompose_hole_on(&shell.hole_b(), &inner, s, budget).expect("A'' lies inside A'' ∪ D")
    })?;

    let triples = b0.triples.into_iter().chain(b1.triples);
    let system = TripleSystem::new(0..u as Point, triples).expect("distinct points");
    let b = BackgroundInstance { system, ..shell };
    let report = verify_background(&b);
    if !report.holds() {
        return Err(ReductionError::Verification(report.to_string()));
    }
    Ok(b)
}

/// Moves a colouring of the source onto the placed graph.
fn place_coloring(b: &BackgroundInstance, gamma: &EdgeColoring) -> Result<EdgeColoring, ColoringError> {
    if gamma.graph() != &b.source {
        return Err(ColoringError::GraphMismatch);
    }
    let pos: BTreeMap<Point, Point> = b.labels.iter().enumerate().map(|(i, &l)| (l, i as Point)).collect();
    let assignment = gamma.assignment().iter().map(|(&(x, y), &c)| (edge(pos[&x], pos[&y]), c));
    EdgeColoring::new(b.placed_graph(), gamma.palette().iter().copied(), assignment)
}

/// Completes the background to a Steiner triple system of order `v` from a
/// proper 3-edge-colouring of its source graph.
pub fn certify_yes(
    b: &BackgroundInstance,
    gamma: &EdgeColoring,
    seed: u64,
    budget: Option<u64>,
) -> Result<TripleSystem, ReductionError> {
    let placed = place_coloring(b, gamma)?;
    if placed.palette().len() != 3 {
        return Err(ColoringError::PaletteSize { expected: 3, found: placed.palette().len() }.into());
    }
    if !is_proper(&placed) {
        return Err(ColoringError::Improper.into());
    }
    let report = verify_background(b);
    if !report.holds() {
        return Err(ReductionError::Verification(report.to_string()));
    }
    let dagger = coloring_to_decomposition(placed.graph(), &placed, &b.z())?;

    let p = &b.params;
    let (a, bb, ab) = double_hole_sizes(p);
    let failures = double_hole_conditions(p.v, a, bb, ab);
    if !failures.is_empty() {
        return Err(ReductionError::Params(failures));
    }
    let all: Vec<Point> = (0..p.v as Point).collect();
    let ddagger = retry("certify-double-hole", seed, |s| {
        decompose_double_hole(&all, &b.hole_a(), &b.hole_b(), s, budget).expect("holes lie inside the point set")
    })?;

    let triples = b.system.triples().iter().copied().chain(dagger).chain(ddagger.triples);
    let sts = TripleSystem::new(all.iter().copied(), triples).expect("distinct points");
    match b.system.is_embedded_in(&sts) {
        Ok(true) => Ok(sts),
        Ok(false) => Err(ReductionError::Inconsistent("assembled system is not a complete embedding".into())),
        Err(e) => Err(ReductionError::Inconsistent(e.to_string())),
    }
}

/// Reads a proper 3-edge-colouring of the source graph off an embedding of
/// order exactly `v`. Colours are `0, 1, 2` in the order of `Z`.
pub fn extract_coloring(b: &BackgroundInstance, emb: &TripleSystem) -> Result<EdgeColoring, ReductionError> {
    let p = &b.params;
    if emb.order() as u64 != p.v {
        return Err(ReductionError::NotEmbedding(format!("order {} but v = {}", emb.order(), p.v)));
    }
    match b.system.is_embedded_in(emb) {
        Ok(true) => {}
        Ok(false) => return Err(ReductionError::NotEmbedding("background triples missing or system incomplete".into())),
        Err(e) => return Err(ReductionError::NotEmbedding(e.to_string())),
    }
    let own: BTreeSet<Triple> = b.system.triples().iter().copied().collect();
    let w = p.working_order as Point;
    let inside: Vec<Triple> =
        emb.triples().iter().filter(|t| !own.contains(t) && t.points().iter().all(|&q| q < w)).copied().collect();
    let placed = b.placed_graph();
    let z = b.z();
    let coloring = decomposition_to_coloring(&inside, &placed, &z).map_err(|e| match e {
        ColoringError::ColorEdgeUncovered((s, t)) => ReductionError::Inconsistent(format!(
            "edge {s}-{t} at Z is covered outside the working order, impossible at order v"
        )),
        other => ReductionError::Inconsistent(other.to_string()),
    })?;
    let assignment = coloring.assignment().iter().map(|(&(x, y), c)| {
        let k = z.iter().position(|&zi| ColorId(zi) == *c).expect("colours are points of Z");
        (edge(b.labels[x as usize], b.labels[y as usize]), ColorId(k as u32))
    });
    let out = EdgeColoring::new(b.source.clone(), (0..3).map(ColorId), assignment)?;
    debug_assert!(is_proper(&out));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::coloring_from_hamiltonian_cycle;
    use crate::graph::StandardGraph;

    #[test]
    fn full_scale_params() {
        let p = check_params(74, 339, 451).unwrap();
        assert_eq!(p.working_order, 325);
        assert_eq!(p.d, 126);
        assert_eq!(p.a_prime_len(), 124);
        assert_eq!(select_working_order(74, 339, 451), Ok(325));
        assert!(check_params(74, 339, 340).is_err());
        let low = check_params(74, 330, 451).unwrap_err();
        assert!(low.iter().any(|m| m.contains("4n+43")), "{low:?}");
    }

    #[test]
    fn working_order_rule_cases() {
        // v = u and u ≤ (2v+n+1)/3: nothing to trim.
        assert_eq!(working_order_rule(12, 13, 13), Some(13));
        assert_eq!(working_order_rule(10, 13, 13), Some(7));
        // The cap binds and the result is pulled down to v's residue.
        assert_eq!(working_order_rule(74, 339, 451), Some(325));
        assert_eq!(working_order_rule(74, 400, 451), Some(325));
        assert_eq!(working_order_rule(0, 2, 3), None);
    }

    #[test]
    fn arithmetic_sweep() {
        for n in (74..=120).step_by(2) {
            for u in 4 * n + 43..=4 * n + 43 + 60 {
                for v in (u..=2 * u - 2 * n - 13).filter(|&v| is_admissible(v)) {
                    let p = check_params(n, u, v).unwrap_or_else(|e| panic!("({n},{u},{v}): {e:?}"));
                    assert_eq!(p.d % 6, 0);
                    assert!(p.d >= n + 2);
                    let (a, b, ab) = double_hole_sizes(&p);
                    assert!(double_hole_conditions(v, a, b, ab).is_empty(), "({n},{u},{v})");
                    assert!(hole_conditions(n + 1 + p.d, n + 1).is_empty());
                    assert!(is_admissible(p.a_len()));
                }
            }
        }
    }

    #[test]
    fn small_graphs_need_best_effort() {
        let petersen = StandardGraph::Petersen.build().unwrap();
        let err = build_background(&petersen, 43, 61, 1, None, false).unwrap_err();
        assert!(matches!(err, ReductionError::Params(ref m) if m.iter().any(|s| s.contains("< 74"))));
        let b = build_background(&petersen, 43, 61, 1, None, true).unwrap();
        assert!(verify_background(&b).holds());
        assert_eq!(b.params.d, 18);
    }

    fn small_prism() -> (Graph, BackgroundInstance) {
        // Prism on 10 vertices with labels shifted away from 0..n.
        let g = StandardGraph::Prism(5).build().unwrap().relabel(|p| 100 + 3 * p).unwrap();
        let b = build_background(&g, 43, 61, 7, None, true).unwrap();
        (g, b)
    }

    #[test]
    fn small_round_trip() {
        let (g, b) = small_prism();
        let cycle: Vec<Point> = StandardGraph::Prism(5).hamiltonian_cycle().unwrap().iter().map(|p| 100 + 3 * p).collect();
        let gamma = coloring_from_hamiltonian_cycle(&g, &cycle).unwrap();
        let sts = certify_yes(&b, &gamma, 3, None).unwrap();
        assert_eq!(sts.order(), 61);
        assert!(b.system.is_embedded_in(&sts).unwrap());
        let back = extract_coloring(&b, &sts).unwrap();
        assert!(is_proper(&back));
        assert_eq!(back.graph(), &g);
    }

    #[test]
    fn tampering_is_detected() {
        let (_, b) = small_prism();
        let mut fewer = b.clone();
        let t: Vec<Triple> = b.system.triples()[1..].to_vec();
        fewer.system = TripleSystem::new(b.system.points().iter().copied(), t).unwrap();
        let r = verify_background(&fewer);
        assert!(!r.holds());
        assert!(r.checks.iter().any(|c| c.0 == "leave_exact" && !c.1));

        // Point Z somewhere else by pretending the graph is elsewhere.
        let mut shifted = b.clone();
        shifted.params.d += 6;
        assert!(!verify_background(&shifted).holds());
    }

    #[test]
    fn improper_coloring_rejected_before_search() {
        let (g, b) = small_prism();
        let mono = EdgeColoring::new(g.clone(), (0..3).map(ColorId), g.edges().map(|e| (e, ColorId(0)))).unwrap();
        assert!(matches!(certify_yes(&b, &mono, 0, Some(1)), Err(ReductionError::Coloring(ColoringError::Improper))));
    }

    #[test]
    fn wrong_order_embedding_rejected() {
        let (_, b) = small_prism();
        let bigger = b.system.add_isolated_points(30);
        assert!(matches!(extract_coloring(&b, &bigger), Err(ReductionError::NotEmbedding(_))));
    }

    #[test]
    fn metadata_round_trip() {
        let (_, b) = small_prism();
        let back = BackgroundInstance::from_metadata(b.system.clone(), &b.metadata()).unwrap();
        assert_eq!(back, b);
        let bad = b.metadata().replace("best_effort=true", "best_effort=false");
        assert!(BackgroundInstance::from_metadata(b.system.clone(), &bad).is_err());
    }
}
