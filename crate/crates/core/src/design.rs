//! Partial Steiner triple systems, leaves and embeddings.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::graph::{fresh_labels, Edge, Graph, Point};
use crate::outcome::{SearchOutcome, Status};
use crate::seed::derive_seed;
use crate::solver::{self, TrianglePackingProblem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("degenerate triple {0} {1} {2}")]
    DegenerateTriple(Point, Point, Point),
    #[error("repeated point {0}")]
    DuplicatePoint(Point),
    #[error("invalid triple system: {0}")]
    Invalid(Violation),
    #[error("order {0} is not admissible")]
    Inadmissible(u64),
    #[error("target order {order} is smaller than the system order {points}")]
    OrderTooSmall { order: u64, points: usize },
    #[error("target orders must be strictly ascending")]
    UnsortedOrders,
}

/// A 3-subset of points, stored in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple([Point; 3]);

impl Triple {
    pub fn new(a: Point, b: Point, c: Point) -> Result<Self, DesignError> {
        let mut t = [a, b, c];
        t.sort_unstable();
        if t[0] == t[1] || t[1] == t[2] {
            return Err(DesignError::DegenerateTriple(a, b, c));
        }
        Ok(Triple(t))
    }

    pub fn points(&self) -> [Point; 3] {
        self.0
    }

    /// The three pairs, lexicographically ordered.
    pub fn pairs(&self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [(a, b), (a, c), (b, c)]
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.contains(&p)
    }

    /// The point completing `{x, y}` to this triple, if both lie in it.
    pub fn third(&self, x: Point, y: Point) -> Option<Point> {
        if !self.contains(x) || !self.contains(y) || x == y {
            return None;
        }
        self.0.iter().copied().find(|&p| p != x && p != y)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

/// A point set with a list of triples. Construction only normalises; whether
/// the result is a partial Steiner triple system is answered by
/// [`TripleSystem::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSystem {
    points: Vec<Point>,
    triples: Vec<Triple>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    PointOutside { triple: Triple, point: Point },
    RepeatedPair { pair: Edge, first: Triple, second: Triple },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PointOutside { triple, point } => {
                write!(f, "triple {triple} uses point {point} outside the point set")
            }
            Violation::RepeatedPair { pair, first, second } => write!(
                f,
                "pair ({}, {}) lies in both {first} and {second}",
                pair.0, pair.1
            ),
        }
    }
}

/// Result of [`TripleSystem::validate`]; violations are listed in the order
/// they are met while scanning triples lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

impl TripleSystem {
    pub fn new<P, T>(points: P, triples: T) -> Result<Self, DesignError>
    where
        P: IntoIterator<Item = Point>,
        T: IntoIterator<Item = Triple>,
    {
        let mut points: Vec<Point> = points.into_iter().collect();
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(DesignError::DuplicatePoint(w[0]));
        }
        let mut triples: Vec<Triple> = triples.into_iter().collect();
        triples.sort_unstable();
        Ok(TripleSystem { points, triples })
    }

    /// Convenience constructor from raw point triples.
    pub fn from_raw<P, T>(points: P, triples: T) -> Result<Self, DesignError>
    where
        P: IntoIterator<Item = Point>,
        T: IntoIterator<Item = [Point; 3]>,
    {
        let triples = triples
            .into_iter()
            .map(|[a, b, c]| Triple::new(a, b, c))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(points, triples)
    }

    /// The empty system on `points`.
    pub fn empty<P: IntoIterator<Item = Point>>(points: P) -> Result<Self, DesignError> {
        Self::new(points, std::iter::empty())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn contains_point(&self, p: Point) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    pub fn validate(&self) -> Validation {
        let mut report = Validation::default();
        let mut owner: HashMap<Edge, Triple> = HashMap::with_capacity(3 * self.triples.len());
        for &t in &self.triples {
            for p in t.points() {
                if !self.contains_point(p) {
                    report.violations.push(Violation::PointOutside { triple: t, point: p });
                }
            }
            for pair in t.pairs() {
                if let Some(&first) = owner.get(&pair) {
                    report.violations.push(Violation::RepeatedPair { pair, first, second: t });
                } else {
                    owner.insert(pair, t);
                }
            }
        }
        report
    }

    fn require_valid(&self) -> Result<(), DesignError> {
        match self.validate().violations.into_iter().next() {
            None => Ok(()),
            Some(v) => Err(DesignError::Invalid(v)),
        }
    }

    /// Pairs covered by some triple, as a graph on the full point set.
    pub fn covered_graph(&self) -> Graph {
        Graph::new(
            self.points.iter().copied(),
            self.triples.iter().flat_map(|t| t.pairs()),
        )
        .expect("valid systems cover each pair once")
    }

    /// The leave: pairs of points not covered by any triple.
    pub fn leave(&self) -> Result<Graph, DesignError> {
        self.require_valid()?;
        Ok(self.covered_graph().complement())
    }

    /// True when every pair of points is covered.
    pub fn is_complete(&self) -> bool {
        let u = self.points.len();
        self.validate().is_valid() && 3 * self.triples.len() == u * u.saturating_sub(1) / 2
    }

    /// Whether `big` is a (complete) Steiner triple system containing this one.
    pub fn is_embedded_in(&self, big: &TripleSystem) -> Result<bool, DesignError> {
        self.require_valid()?;
        big.require_valid()?;
        if !self.points.iter().all(|&p| big.contains_point(p)) {
            return Ok(false);
        }
        let mut it = big.triples.iter().peekable();
        for t in &self.triples {
            while it.peek().is_some_and(|&b| b < t) {
                it.next();
            }
            if it.peek() != Some(&t) {
                return Ok(false);
            }
        }
        Ok(big.is_complete())
    }

    /// Adds `k` isolated points, taking the smallest unused labels.
    pub fn add_isolated_points(&self, k: usize) -> TripleSystem {
        let fresh = fresh_labels(&self.points, k);
        let mut points = self.points.clone();
        points.extend(fresh);
        points.sort_unstable();
        TripleSystem { points, triples: self.triples.clone() }
    }

    /// Union of two systems' points and triples (no validity check).
    pub fn merged(&self, other: &TripleSystem) -> TripleSystem {
        let points: BTreeSet<Point> = self.points.iter().chain(&other.points).copied().collect();
        let mut triples: Vec<Triple> = self.triples.iter().chain(&other.triples).copied().collect();
        triples.sort_unstable();
        TripleSystem { points: points.into_iter().collect(), triples }
    }
}

/// `v ≥ 1` and `v ≡ 1, 3 (mod 6)`.
pub fn is_admissible(v: u64) -> bool {
    v >= 1 && matches!(v % 6, 1 | 3)
}

/// One F-embed query with the target orders listed explicitly.
#[derive(Debug, Clone)]
pub struct EmbedQuery {
    pub system: TripleSystem,
    /// Strictly ascending admissible orders, each at least the system order.
    pub orders: Vec<u64>,
    pub exact_budget: u64,
    pub climb_budget: u64,
    pub climb_attempts: u64,
    pub seed: u64,
}

impl EmbedQuery {
    pub fn new(system: TripleSystem, orders: Vec<u64>) -> Self {
        EmbedQuery {
            system,
            orders,
            exact_budget: solver::DEFAULT_EXACT_BUDGET,
            climb_budget: solver::DEFAULT_CLIMB_BUDGET,
            climb_attempts: 8,
            seed: 0,
        }
    }
}

/// Decides, for each listed order `v`, whether the system embeds in an STS(v).
///
/// Orders `v ≥ 2u + 1` always embed; a witness is still constructed by hill
/// climbing. Smaller orders are settled by the complete solver, so a
/// `ProvedNo` there is a proof.
pub fn decide_f_embed(query: &EmbedQuery) -> Result<Vec<SearchOutcome<TripleSystem>>, DesignError> {
    let system = &query.system;
    system.require_valid()?;
    if query.orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DesignError::UnsortedOrders);
    }
    let u = system.order() as u64;
    for &v in &query.orders {
        if !is_admissible(v) {
            return Err(DesignError::Inadmissible(v));
        }
        if v < u {
            return Err(DesignError::OrderTooSmall { order: v, points: system.order() });
        }
    }
    let covered = system.covered_graph();
    let mut results = Vec::with_capacity(query.orders.len());
    for &v in &query.orders {
        let extra = fresh_labels(system.points(), (v - u) as usize);
        let all: Vec<Point> = system.points().iter().copied().chain(extra).collect();
        let host = Graph::complete(all.iter().copied()).subtract(&covered);
        let outcome = if v > 2 * u {
            let mut last = SearchOutcome::unknown(0, None);
            let mut spent = 0;
            for attempt in 0..query.climb_attempts.max(1) {
                let problem = TrianglePackingProblem::new(host.clone())
                    .with_seed(derive_seed(query.seed, &format!("embed-{v}"), attempt))
                    .with_budget(query.climb_budget);
                last = solver::hill_climb(&problem);
                spent += last.effort;
                if last.is_yes() {
                    break;
                }
            }
            last.effort = spent;
            if last.status == Status::Unknown {
                last = last.with_note(format!(
                    "an embedding of order {v} exists, but hill climbing did not find one"
                ));
            }
            last
        } else {
            let problem = TrianglePackingProblem::new(host).with_budget(query.exact_budget);
            solver::exact_k3_decompose(&problem)
        };
        let outcome = outcome.map(|packing| {
            let witness = TripleSystem::new(
                all.iter().copied(),
                system.triples().iter().copied().chain(packing.triples),
            )
            .expect("fresh points are distinct");
            debug_assert!(system.is_embedded_in(&witness).unwrap_or(false));
            witness
        });
        results.push(outcome);
    }
    Ok(results)
}

/// All pairs in the given triples, for quick membership tests.
pub fn pair_set(triples: &[Triple]) -> BTreeSet<Edge> {
    triples.iter().flat_map(|t| t.pairs()).collect()
}
