//! Proper edge colourings.
//!
//! Colourings carry their graph and an explicit palette, so "uses at most `c`
//! colours" and "misses colour `k` at `x`" are questions about the value
//! itself. Search-based routines live in [`search`]; the two constructive
//! theorems (König for bipartite graphs, Vizing's `Δ + 1`) have their own
//! modules.

mod konig;
mod search;
mod vizing;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::design::Triple;
use crate::graph::{edge, Edge, Graph, Point};

pub use konig::koenig_coloring;
pub use search::{chromatic_index, enumerate_colorings, ChromaticIndex, ColoringView, Enumeration};
pub use vizing::vizing_coloring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorId(pub u32);

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("graph is not cubic")]
    NotCubic,
    #[error("unknown vertex {0}")]
    UnknownVertex(Point),
    #[error("edge {}-{} is not in the graph", .0.0, .0.1)]
    UnknownEdge(Edge),
    #[error("color {0} is not in the palette")]
    ColorOutsidePalette(ColorId),
    #[error("palette repeats color {0}")]
    DuplicateColor(ColorId),
    #[error("palette has {found} colors, expected {expected}")]
    PaletteSize { expected: usize, found: usize },
    #[error("{colors} colors cannot properly color a graph of maximum degree {max_degree}")]
    PaletteTooSmall { colors: usize, max_degree: usize },
    #[error("coloring is not proper or not total")]
    Improper,
    #[error("coloring belongs to a different graph")]
    GraphMismatch,
    #[error("color points must be 3 distinct points outside the graph")]
    BadColorPoints,
    #[error("triple {0} is not a triangle of the join")]
    NotATriangle(Triple),
    #[error("edge {}-{} is covered twice", .0.0, .0.1)]
    Overlap(Edge),
    #[error("edge {}-{} at a color point is not covered", .0.0, .0.1)]
    ColorEdgeUncovered(Edge),
}

/// An assignment of palette colours to (some of) the edges of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    graph: Graph,
    palette: Vec<ColorId>,
    assignment: BTreeMap<Edge, ColorId>,
}

impl EdgeColoring {
    /// Checks that the palette is duplicate-free and that every assigned
    /// edge and colour exists. Properness and totality are not required;
    /// ask [`is_proper`].
    pub fn new<P, A>(graph: Graph, palette: P, assignment: A) -> Result<Self, ColoringError>
    where
        P: IntoIterator<Item = ColorId>,
        A: IntoIterator<Item = (Edge, ColorId)>,
    {
        let mut pal: Vec<ColorId> = palette.into_iter().collect();
        pal.sort_unstable();
        if let Some(w) = pal.windows(2).find(|w| w[0] == w[1]) {
            return Err(ColoringError::DuplicateColor(w[0]));
        }
        let mut map = BTreeMap::new();
        for ((a, b), c) in assignment {
            let e = edge(a, b);
            if !graph.has_edge(a, b) {
                return Err(ColoringError::UnknownEdge(e));
            }
            if pal.binary_search(&c).is_err() {
                return Err(ColoringError::ColorOutsidePalette(c));
            }
            map.insert(e, c);
        }
        Ok(EdgeColoring { graph, palette: pal, assignment: map })
    }

    /// Palette `0..colors`, `per_edge[k]` colouring the `k`-th edge in
    /// lexicographic order.
    pub(crate) fn from_edge_order(graph: Graph, colors: usize, per_edge: &[u32]) -> Self {
        debug_assert_eq!(per_edge.len(), graph.size());
        let assignment = graph.edges().zip(per_edge.iter().map(|&c| ColorId(c))).collect();
        EdgeColoring { palette: (0..colors as u32).map(ColorId).collect(), graph, assignment }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn palette(&self) -> &[ColorId] {
        &self.palette
    }

    pub fn assignment(&self) -> &BTreeMap<Edge, ColorId> {
        &self.assignment
    }

    pub fn color(&self, a: Point, b: Point) -> Option<ColorId> {
        self.assignment.get(&edge(a, b)).copied()
    }

    /// Colours actually used on some edge.
    pub fn used_colors(&self) -> BTreeSet<ColorId> {
        self.assignment.values().copied().collect()
    }

    /// Renames colours through `f`; the palette is renamed too.
    pub fn recolor<F: Fn(ColorId) -> ColorId>(&self, f: F) -> Result<Self, ColoringError> {
        EdgeColoring::new(
            self.graph.clone(),
            self.palette.iter().map(|&c| f(c)),
            self.assignment.iter().map(|(&e, &c)| (e, f(c))),
        )
    }
}

/// True iff every edge is coloured and edges sharing a vertex differ.
pub fn is_proper(c: &EdgeColoring) -> bool {
    if c.assignment.len() != c.graph.size() {
        return false;
    }
    let g = &c.graph;
    (0..g.order()).all(|i| {
        let x = g.label(i);
        let mut seen = BTreeSet::new();
        g.neighbor_indices(i)
            .iter()
            .all(|&j| seen.insert(c.assignment[&edge(x, g.label(j as usize))]))
    })
}

/// Palette colours on no edge at `x`.
pub fn missing_colors(c: &EdgeColoring, x: Point) -> Result<BTreeSet<ColorId>, ColoringError> {
    let hits: BTreeSet<ColorId> = c
        .graph
        .neighbors(x)
        .map_err(|_| ColoringError::UnknownVertex(x))?
        .filter_map(|y| c.color(x, y))
        .collect();
    Ok(c.palette.iter().copied().filter(|k| !hits.contains(k)).collect())
}

/// Proper 3-colouring of a cubic graph from a Hamiltonian cycle of even
/// length: colours 0 and 1 alternate along the cycle, chords get 2.
pub fn coloring_from_hamiltonian_cycle(g: &Graph, cycle: &[Point]) -> Result<EdgeColoring, ColoringError> {
    if !g.is_cubic() {
        return Err(ColoringError::NotCubic);
    }
    if cycle.len() != g.order() || cycle.len() % 2 == 1 {
        return Err(ColoringError::Improper);
    }
    let mut assignment = BTreeMap::new();
    for k in 0..cycle.len() {
        let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
        if !g.has_edge(a, b) {
            return Err(ColoringError::UnknownEdge(edge(a, b)));
        }
        assignment.insert(edge(a, b), ColorId((k % 2) as u32));
    }
    for e in g.edges() {
        assignment.entry(e).or_insert(ColorId(2));
    }
    let c = EdgeColoring::new(g.clone(), (0..3).map(ColorId), assignment)?;
    if is_proper(&c) {
        Ok(c)
    } else {
        Err(ColoringError::Improper)
    }
}

fn color_points(g: &Graph, z: &[Point]) -> Result<Vec<Point>, ColoringError> {
    let zs: BTreeSet<Point> = z.iter().copied().collect();
    if z.len() != 3 || zs.len() != 3 || zs.iter().any(|&p| g.contains_vertex(p)) {
        return Err(ColoringError::BadColorPoints);
    }
    Ok(zs.into_iter().collect())
}

/// Turns a proper 3-edge-colouring of a cubic graph into a triangle
/// decomposition of `K̄_Z ∨ G`: the `i`-th palette colour is identified with
/// the `i`-th smallest point of `z`, and edge `xy` of colour `i` yields the
/// triple `{x, y, z_i}`.
pub fn coloring_to_decomposition(g: &Graph, gamma: &EdgeColoring, z: &[Point]) -> Result<Vec<Triple>, ColoringError> {
    if !g.is_cubic() {
        return Err(ColoringError::NotCubic);
    }
    if gamma.graph() != g {
        return Err(ColoringError::GraphMismatch);
    }
    if gamma.palette.len() != 3 {
        return Err(ColoringError::PaletteSize { expected: 3, found: gamma.palette.len() });
    }
    if !is_proper(gamma) {
        return Err(ColoringError::Improper);
    }
    let z = color_points(g, z)?;
    let mut triples: Vec<Triple> = gamma
        .assignment
        .iter()
        .map(|(&(a, b), c)| {
            let i = gamma.palette.binary_search(c).expect("validated palette");
            Triple::new(a, b, z[i]).expect("z is disjoint from the graph")
        })
        .collect();
    triples.sort_unstable();
    Ok(triples)
}

/// Reads a 3-edge-colouring of the cubic graph `g` off a packing of
/// `K̄_Z ∨ G` that covers every edge at `z`. The colour of `xy` is the point
/// of `z` in its triple, so the palette is `{ColorId(z_i)}`.
pub fn decomposition_to_coloring(triples: &[Triple], g: &Graph, z: &[Point]) -> Result<EdgeColoring, ColoringError> {
    if !g.is_cubic() {
        return Err(ColoringError::NotCubic);
    }
    let z = color_points(g, z)?;
    let host = Graph::edgeless(z.iter().copied()).join(g).expect("disjoint");
    let mut covered = BTreeSet::new();
    let mut assignment = BTreeMap::new();
    for &t in triples {
        if t.pairs().iter().any(|&(a, b)| !host.has_edge(a, b)) {
            return Err(ColoringError::NotATriangle(t));
        }
        for p in t.pairs() {
            if !covered.insert(p) {
                return Err(ColoringError::Overlap(p));
            }
        }
        let pts = t.points();
        if let Some(&zi) = pts.iter().find(|p| z.contains(p)) {
            let rest: Vec<Point> = pts.into_iter().filter(|&p| p != zi).collect();
            assignment.insert(edge(rest[0], rest[1]), ColorId(zi));
        }
    }
    for &zi in &z {
        for &x in g.vertices() {
            if !covered.contains(&edge(zi, x)) {
                return Err(ColoringError::ColorEdgeUncovered(edge(zi, x)));
            }
        }
    }
    let c = EdgeColoring::new(g.clone(), z.iter().map(|&p| ColorId(p)), assignment)?;
    if is_proper(&c) {
        Ok(c)
    } else {
        Err(ColoringError::Improper)
    }
}
