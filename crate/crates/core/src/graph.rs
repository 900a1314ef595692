//! Simple undirected graphs over integer-labelled points.
//!
//! A [`Graph`] is an immutable value: every operation that "changes" a graph
//! returns a new one. Vertices are kept in ascending label order and each
//! vertex owns a row of an adjacency bit matrix, so edge membership is a
//! single word lookup while neighbourhood iteration walks a sorted list.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Point label. Symbolic names are mapped onto integers before they get here.
pub type Point = u32;

/// Unordered pair, always stored with the smaller label first.
pub type Edge = (Point, Point);

/// Normalises an unordered pair to `(min, max)`.
#[inline]
pub fn edge(a: Point, b: Point) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(Point),
    #[error("repeated edge {0} {1}")]
    DuplicateEdge(Point, Point),
    #[error("repeated vertex {0}")]
    DuplicateVertex(Point),
    #[error("edge {0} {1} has an endpoint outside the vertex set")]
    UnknownEndpoint(Point, Point),
    #[error("unknown vertex {0}")]
    UnknownVertex(Point),
    #[error("vertex sets are not disjoint (both contain {0})")]
    Overlap(Point),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<Point>,
    adj: Vec<Vec<u32>>,
    bits: Vec<u64>,
    words: usize,
    size: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph {{ n: {}, m: {}, edges: [", self.order(), self.size())?;
        for (k, (a, b)) in self.edges().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        write!(f, "] }}")
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, repeated vertices or edges, and
    /// edges whose endpoints are not listed.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = Point>,
        E: IntoIterator<Item = Edge>,
    {
        let mut labels: Vec<Point> = vertices.into_iter().collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
        let mut g = Self::with_labels(labels);
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::Loop(a));
            }
            let (i, j) = match (g.index_of(a), g.index_of(b)) {
                (Some(i), Some(j)) => (i, j),
                _ => {
                    let (a, b) = edge(a, b);
                    return Err(GraphError::UnknownEndpoint(a, b));
                }
            };
            if g.has_edge_idx(i, j) {
                let (a, b) = edge(a, b);
                return Err(GraphError::DuplicateEdge(a, b));
            }
            g.link(i, j);
        }
        g.finish();
        Ok(g)
    }

    /// Graph whose vertex set is exactly the set of edge endpoints.
    pub fn from_edges<E>(edges: E) -> Result<Self, GraphError>
    where
        E: IntoIterator<Item = Edge>,
    {
        let edges: Vec<Edge> = edges.into_iter().collect();
        let vertices: BTreeSet<Point> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        Self::new(vertices, edges)
    }

    /// Internal constructor for edge sets already known to be simple.
    fn from_trusted<V, E>(vertices: V, edges: E) -> Self
    where
        V: IntoIterator<Item = Point>,
        E: IntoIterator<Item = Edge>,
    {
        let mut labels: Vec<Point> = vertices.into_iter().collect();
        labels.sort_unstable();
        labels.dedup();
        let mut g = Self::with_labels(labels);
        for (a, b) in edges {
            let i = g.index_of(a).expect("endpoint in vertex set");
            let j = g.index_of(b).expect("endpoint in vertex set");
            debug_assert!(i != j);
            if !g.has_edge_idx(i, j) {
                g.link(i, j);
            }
        }
        g.finish();
        g
    }

    fn with_labels(labels: Vec<Point>) -> Self {
        let n = labels.len();
        let words = n.div_ceil(64).max(1);
        Graph {
            labels,
            adj: vec![Vec::new(); n],
            bits: vec![0; n * words],
            words,
            size: 0,
        }
    }

    fn link(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
        self.bits[j * self.words + i / 64] |= 1 << (i % 64);
        self.adj[i].push(j as u32);
        self.adj[j].push(i as u32);
        self.size += 1;
    }

    fn finish(&mut self) {
        for row in &mut self.adj {
            row.sort_unstable();
        }
    }

    /// The edgeless graph on `points`.
    pub fn edgeless<V: IntoIterator<Item = Point>>(points: V) -> Self {
        Self::from_trusted(points, std::iter::empty())
    }

    /// `K_S`.
    pub fn complete<V: IntoIterator<Item = Point>>(points: V) -> Self {
        let pts: BTreeSet<Point> = points.into_iter().collect();
        let v: Vec<Point> = pts.into_iter().collect();
        let mut edges = Vec::with_capacity(v.len() * v.len().saturating_sub(1) / 2);
        for (k, &a) in v.iter().enumerate() {
            for &b in &v[k + 1..] {
                edges.push((a, b));
            }
        }
        Self::from_trusted(v, edges)
    }

    /// `K_{S,T}`; the parts must be disjoint.
    pub fn complete_bipartite<S, T>(s: S, t: T) -> Result<Self, GraphError>
    where
        S: IntoIterator<Item = Point>,
        T: IntoIterator<Item = Point>,
    {
        let s: BTreeSet<Point> = s.into_iter().collect();
        let t: BTreeSet<Point> = t.into_iter().collect();
        if let Some(&p) = s.intersection(&t).next() {
            return Err(GraphError::Overlap(p));
        }
        let edges: Vec<Edge> = s
            .iter()
            .flat_map(|&a| t.iter().map(move |&b| edge(a, b)))
            .collect();
        Ok(Self::from_trusted(s.union(&t).copied(), edges))
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Vertex labels in ascending order.
    pub fn vertices(&self) -> &[Point] {
        &self.labels
    }

    pub fn index_of(&self, p: Point) -> Option<usize> {
        self.labels.binary_search(&p).ok()
    }

    #[inline]
    pub fn label(&self, i: usize) -> Point {
        self.labels[i]
    }

    pub fn contains_vertex(&self, p: Point) -> bool {
        self.index_of(p).is_some()
    }

    #[inline]
    pub fn has_edge_idx(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn has_edge(&self, a: Point, b: Point) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.has_edge_idx(i, j),
            _ => false,
        }
    }

    /// Sorted neighbour indices of vertex index `i`.
    #[inline]
    pub fn neighbor_indices(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    pub fn neighbors(&self, p: Point) -> Result<impl Iterator<Item = Point> + '_, GraphError> {
        let i = self.index_of(p).ok_or(GraphError::UnknownVertex(p))?;
        Ok(self.adj[i].iter().map(move |&j| self.labels[j as usize]))
    }

    pub fn degree(&self, p: Point) -> Result<usize, GraphError> {
        self.index_of(p)
            .map(|i| self.adj[i].len())
            .ok_or(GraphError::UnknownVertex(p))
    }

    #[inline]
    pub fn degree_idx(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Edges in lexicographic order, each as `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(move |(i, row)| {
            let a = self.labels[i];
            row.iter()
                .filter(move |&&j| j as usize > i)
                .map(move |&j| (a, self.labels[j as usize]))
        })
    }

    /// Edges as pairs of vertex indices, `i < j`, in lexicographic order.
    pub fn edge_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .filter(move |&&j| j as usize > i)
                .map(move |&j| (i, j as usize))
        })
    }

    /// True iff every vertex has even degree.
    pub fn is_even(&self) -> bool {
        self.adj.iter().all(|row| row.len() % 2 == 0)
    }

    pub fn is_regular(&self, k: usize) -> bool {
        self.adj.iter().all(|row| row.len() == k)
    }

    pub fn is_cubic(&self) -> bool {
        self.is_regular(3)
    }

    /// Connected components, each sorted, ordered by smallest label.
    pub fn components(&self) -> Vec<Vec<Point>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    let y = y as usize;
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp.into_iter().map(|i| self.labels[i]).collect());
        }
        out
    }

    /// A 2-colouring of the vertices, if one exists. Each component's
    /// smallest vertex goes to the first side.
    pub fn bipartition(&self) -> Option<(Vec<Point>, Vec<Point>)> {
        let n = self.order();
        let mut side: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                let sx = side[x].unwrap();
                for &y in &self.adj[x] {
                    match side[y as usize] {
                        None => {
                            side[y as usize] = Some(!sx);
                            queue.push_back(y as usize);
                        }
                        Some(sy) if sy == sx => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (i, s) in side.into_iter().enumerate() {
            if s == Some(true) {
                right.push(self.labels[i]);
            } else {
                left.push(self.labels[i]);
            }
        }
        Some((left, right))
    }

    /// Subgraph induced on the given points (unknown points are ignored).
    pub fn induced<V: IntoIterator<Item = Point>>(&self, points: V) -> Self {
        let keep: BTreeSet<Point> = points.into_iter().filter(|&p| self.contains_vertex(p)).collect();
        let edges: Vec<Edge> = self
            .edges()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .collect();
        Self::from_trusted(keep, edges)
    }

    /// Renames every vertex through `f`, which must be injective on `V(self)`.
    pub fn relabel<F: Fn(Point) -> Point>(&self, f: F) -> Result<Self, GraphError> {
        Self::new(
            self.labels.iter().map(|&p| f(p)),
            self.edges().map(|(a, b)| (f(a), f(b))),
        )
    }

    /// The same graph with extra isolated vertices (already-present points are ignored).
    pub fn with_vertices<V: IntoIterator<Item = Point>>(&self, points: V) -> Self {
        Self::from_trusted(self.labels.iter().copied().chain(points), self.edges())
    }

    /// `G ∨ H` for vertex-disjoint `G`, `H`.
    pub fn join(&self, other: &Graph) -> Result<Self, GraphError> {
        if let Some(&p) = self.labels.iter().find(|&&p| other.contains_vertex(p)) {
            return Err(GraphError::Overlap(p));
        }
        let cross = self
            .labels
            .iter()
            .flat_map(|&a| other.labels.iter().map(move |&b| edge(a, b)));
        Ok(Self::from_trusted(
            self.labels.iter().chain(other.labels.iter()).copied(),
            self.edges().chain(other.edges()).chain(cross),
        ))
    }

    /// `G ∪ H`: union of vertex sets and of edge sets.
    pub fn union(&self, other: &Graph) -> Self {
        Self::from_trusted(
            self.labels.iter().chain(other.labels.iter()).copied(),
            self.edges().chain(other.edges()),
        )
    }

    /// `G − H`: vertex set of `G`, edges of `G` not in `H`.
    pub fn subtract(&self, other: &Graph) -> Self {
        Self::from_trusted(
            self.labels.iter().copied(),
            self.edges().filter(|&(a, b)| !other.has_edge(a, b)),
        )
    }

    /// Edges present in both graphs, on the vertex set of `self`.
    pub fn intersect_edges(&self, other: &Graph) -> Self {
        Self::from_trusted(
            self.labels.iter().copied(),
            self.edges().filter(|&(a, b)| other.has_edge(a, b)),
        )
    }

    /// Complement relative to this graph's vertex set.
    pub fn complement(&self) -> Self {
        let n = self.order();
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2 - self.size);
        for i in 0..n {
            for j in i + 1..n {
                if !self.has_edge_idx(i, j) {
                    edges.push((self.labels[i], self.labels[j]));
                }
            }
        }
        Self::from_trusted(self.labels.iter().copied(), edges)
    }

    /// Edge set as a sorted vector.
    pub fn edge_list(&self) -> Vec<Edge> {
        self.edges().collect()
    }

    /// Smallest `k` labels not used by this graph.
    pub fn fresh_points(&self, k: usize) -> Vec<Point> {
        fresh_labels(&self.labels, k)
    }
}

/// The `k` smallest nonnegative integers missing from a sorted label list.
pub fn fresh_labels(sorted: &[Point], k: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(k);
    let mut it = sorted.iter().peekable();
    let mut candidate: Point = 0;
    while out.len() < k {
        while it.peek().is_some_and(|&&p| p < candidate) {
            it.next();
        }
        if it.peek() == Some(&&candidate) {
            it.next();
        } else {
            out.push(candidate);
        }
        candidate += 1;
    }
    out
}

/// Named graphs used as cubic gadget sources and test fixtures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StandardGraph {
    Petersen,
    K4,
    K33,
    /// Two `k`-cycles joined by a perfect matching.
    Prism(u32),
    /// A `2k`-cycle plus its `k` diameters.
    MoebiusLadder(u32),
    /// Vertices `0..n`, `i ~ i ± s (mod n)` for each connection `s`.
    Circulant { n: u32, connections: Vec<u32> },
}

impl StandardGraph {
    pub fn build(&self) -> Result<Graph, GraphError> {
        let bad = |msg: String| Err(GraphError::InvalidParameters(msg));
        match *self {
            StandardGraph::Petersen => {
                let mut edges = Vec::new();
                for i in 0..5 {
                    edges.push(edge(i, (i + 1) % 5));
                    edges.push(edge(i, i + 5));
                    edges.push(edge(i + 5, (i + 2) % 5 + 5));
                }
                Graph::new(0..10, edges)
            }
            StandardGraph::K4 => Ok(Graph::complete(0..4)),
            StandardGraph::K33 => Graph::complete_bipartite(0..3, 3..6),
            StandardGraph::Prism(k) => {
                if k < 3 {
                    return bad(format!("prism({k}) needs k >= 3"));
                }
                let mut edges = Vec::new();
                for i in 0..k {
                    edges.push(edge(i, (i + 1) % k));
                    edges.push(edge(k + i, k + (i + 1) % k));
                    edges.push(edge(i, k + i));
                }
                Graph::new(0..2 * k, edges)
            }
            StandardGraph::MoebiusLadder(k) => {
                if k < 2 {
                    return bad(format!("moebius_ladder({k}) needs k >= 2"));
                }
                let n = 2 * k;
                let mut edges: Vec<Edge> = (0..n).map(|i| edge(i, (i + 1) % n)).collect();
                edges.extend((0..k).map(|i| edge(i, i + k)));
                Graph::new(0..n, edges)
            }
            StandardGraph::Circulant { n, ref connections } => {
                if n == 0 {
                    return bad("circulant needs n >= 1".into());
                }
                let mut set = BTreeSet::new();
                for &s in connections {
                    if s == 0 || 2 * s > n {
                        return bad(format!("connection {s} outside 1..={}", n / 2));
                    }
                    for i in 0..n {
                        set.insert(edge(i, (i + s) % n));
                    }
                }
                Graph::new(0..n, set)
            }
        }
    }

    /// A Hamiltonian cycle as a closed vertex sequence (last vertex adjacent
    /// to the first), where one is known by construction.
    pub fn hamiltonian_cycle(&self) -> Option<Vec<Point>> {
        match *self {
            StandardGraph::K4 => Some(vec![0, 1, 2, 3]),
            StandardGraph::K33 => Some(vec![0, 3, 1, 4, 2, 5]),
            StandardGraph::Prism(k) if k >= 3 => Some((0..k).chain((k..2 * k).rev()).collect()),
            StandardGraph::MoebiusLadder(k) if k >= 2 => Some((0..2 * k).collect()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graphs() {
        let empty = Graph::complete(std::iter::empty());
        assert_eq!((empty.order(), empty.size()), (0, 0));
        let k3 = Graph::complete([1, 2, 3]);
        assert_eq!(k3.edge_list(), vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(Graph::complete(10..17).size(), 21);
        assert!(Graph::complete(0..7).is_even());
    }

    #[test]
    fn complete_bipartite_counts() {
        let g = Graph::complete_bipartite([1], [2]).unwrap();
        assert_eq!(g.edge_list(), vec![(1, 2)]);
        let g = Graph::complete_bipartite(0..3, 3..7).unwrap();
        assert_eq!(g.size(), 12);
        assert!((0..3).all(|p| g.degree(p).unwrap() == 4));
        assert_eq!(
            Graph::complete_bipartite([1, 2], [2, 3]),
            Err(GraphError::Overlap(2))
        );
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert_eq!(Graph::new([1, 2], [(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(
            Graph::new([1, 2], [(1, 2), (2, 1)]),
            Err(GraphError::DuplicateEdge(1, 2))
        );
        assert_eq!(
            Graph::new([1, 2], [(1, 3)]),
            Err(GraphError::UnknownEndpoint(1, 3))
        );
        assert_eq!(Graph::new([1, 1], []), Err(GraphError::DuplicateVertex(1)));
    }

    #[test]
    fn join_of_edgeless_and_petersen() {
        let p = StandardGraph::Petersen.build().unwrap();
        let z = Graph::edgeless([100, 101, 102]);
        let j = z.join(&p).unwrap();
        assert_eq!((j.order(), j.size()), (13, 45));
        assert_eq!(j.degree(0).unwrap(), 6);
        assert_eq!(j.degree(100).unwrap(), 10);
        let empty = Graph::edgeless(std::iter::empty());
        assert_eq!(empty.join(&p).unwrap(), p);
        assert!(matches!(p.join(&p), Err(GraphError::Overlap(0))));
    }

    #[test]
    fn set_algebra() {
        let g = StandardGraph::Petersen.build().unwrap();
        let none = g.subtract(&g);
        assert_eq!((none.order(), none.size()), (10, 0));
        let k = Graph::complete(0..6);
        assert_eq!(k.complement(), Graph::edgeless(0..6));
        assert_eq!(g.complement().complement(), g);
    }

    #[test]
    fn degrees_and_parity() {
        let p = StandardGraph::Petersen.build().unwrap();
        assert!(p.is_cubic());
        assert!(!p.is_even());
        assert_eq!(p.degree(42), Err(GraphError::UnknownVertex(42)));
        assert_eq!(p.components().len(), 1);
        assert!(p.bipartition().is_none());
        let k33 = StandardGraph::K33.build().unwrap();
        assert_eq!(k33.bipartition(), Some((vec![0, 1, 2], vec![3, 4, 5])));
    }

    #[test]
    fn standard_graphs() {
        let prism = StandardGraph::Prism(37).build().unwrap();
        assert_eq!((prism.order(), prism.size()), (74, 111));
        assert!(prism.is_cubic());
        assert!(StandardGraph::Prism(2).build().is_err());
        let m = StandardGraph::MoebiusLadder(5).build().unwrap();
        assert!(m.is_cubic() && m.order() == 10);
        assert_eq!(StandardGraph::MoebiusLadder(2).build().unwrap(), Graph::complete(0..4));
        let k4 = StandardGraph::K4.build().unwrap();
        assert!(k4.is_cubic() && k4.order() == 4);
        let c = StandardGraph::Circulant { n: 8, connections: vec![1, 4] }.build().unwrap();
        assert!(c.is_cubic());
        assert!(StandardGraph::Circulant { n: 8, connections: vec![5] }.build().is_err());
    }

    #[test]
    fn known_hamiltonian_cycles() {
        for sg in [
            StandardGraph::K4,
            StandardGraph::K33,
            StandardGraph::Prism(3),
            StandardGraph::Prism(37),
            StandardGraph::MoebiusLadder(4),
        ] {
            let g = sg.build().unwrap();
            let cycle = sg.hamiltonian_cycle().unwrap();
            assert_eq!(cycle.iter().collect::<BTreeSet<_>>().len(), g.order());
            for k in 0..cycle.len() {
                assert!(g.has_edge(cycle[k], cycle[(k + 1) % cycle.len()]), "{sg:?}");
            }
        }
        assert!(StandardGraph::Petersen.hamiltonian_cycle().is_none());
    }

    #[test]
    fn fresh_labels_fill_gaps() {
        assert_eq!(fresh_labels(&[0, 1, 3, 7], 4), vec![2, 4, 5, 6]);
        assert_eq!(fresh_labels(&[], 2), vec![0, 1]);
        assert_eq!(fresh_labels(&[5], 0), Vec::<Point>::new());
    }

    #[test]
    fn large_labels_and_edge_order() {
        let g = Graph::new([900, 5, 70], [(900, 5), (70, 5)]).unwrap();
        assert_eq!(g.edge_list(), vec![(5, 70), (5, 900)]);
        assert!(g.has_edge(900, 5));
        assert!(!g.has_edge(900, 70));
    }
}
