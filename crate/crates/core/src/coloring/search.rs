//! Backtracking over edge colourings.
//!
//! Edges are coloured in lexicographic order and a colour may be used only
//! once every smaller colour has appeared (colours enter in first-use
//! order). Each class of colourings under permutation of the palette is
//! therefore visited exactly once, through its first-use-ordered member.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use super::{koenig_coloring, vizing_coloring, ColorId, ColoringError, EdgeColoring};
use crate::graph::{Graph, Point};
use crate::outcome::SearchOutcome;
use crate::solver::DEFAULT_EXACT_BUDGET;

const NONE: u32 = u32::MAX;
const MAX_COLORS: usize = 64;

/// χ′ together with a colouring achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChromaticIndex {
    pub index: usize,
    pub coloring: EdgeColoring,
}

/// Result of [`enumerate_colorings`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumeration {
    /// Colourings handed to the visitor.
    pub visited: u64,
    /// True iff the whole search tree was explored.
    pub exhausted: bool,
    /// Colour assignments tried.
    pub nodes: u64,
}

enum Next {
    Solution,
    Exhausted,
    OutOfBudget,
}

struct Backtrack {
    edges: Vec<(usize, usize)>,
    colors: usize,
    assigned: Vec<u32>,
    used: Vec<u64>,
    /// `fresh[k]`: number of distinct colours on edges `0..k`.
    fresh: Vec<u32>,
    pos: usize,
    started: bool,
    nodes: u64,
}

impl Backtrack {
    fn new(g: &Graph, colors: usize) -> Self {
        debug_assert!(colors <= MAX_COLORS);
        let edges: Vec<(usize, usize)> = g.edge_indices().collect();
        let m = edges.len();
        Backtrack {
            edges,
            colors,
            assigned: vec![NONE; m],
            used: vec![0; g.order()],
            fresh: vec![0; m + 1],
            pos: 0,
            started: false,
            nodes: 0,
        }
    }

    fn unassign(&mut self, k: usize) {
        let (a, b) = self.edges[k];
        let bit = !(1u64 << self.assigned[k]);
        self.used[a] &= bit;
        self.used[b] &= bit;
    }

    fn next(&mut self, budget: u64) -> Next {
        let m = self.edges.len();
        if !self.started {
            self.started = true;
            if m == 0 {
                return Next::Solution;
            }
        } else if m == 0 {
            return Next::Exhausted;
        } else if self.pos == m {
            self.pos -= 1;
        }
        loop {
            let k = self.pos;
            let (a, b) = self.edges[k];
            let prev = self.assigned[k];
            let start = if prev == NONE {
                0
            } else {
                self.unassign(k);
                prev + 1
            };
            let limit = (self.fresh[k] as usize + 1).min(self.colors) as u32;
            let range = if start >= limit { 0 } else { (low_bits(limit) ^ low_bits(start)) & low_bits(limit) };
            let options = range & !(self.used[a] | self.used[b]);
            if options != 0 {
                if self.nodes >= budget {
                    return Next::OutOfBudget;
                }
                self.nodes += 1;
                let c = options.trailing_zeros();
                self.assigned[k] = c;
                self.used[a] |= 1 << c;
                self.used[b] |= 1 << c;
                self.fresh[k + 1] = self.fresh[k].max(c + 1);
                self.pos += 1;
                if self.pos == m {
                    return Next::Solution;
                }
            } else {
                self.assigned[k] = NONE;
                if k == 0 {
                    return Next::Exhausted;
                }
                self.pos -= 1;
            }
        }
    }
}

fn low_bits(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// A colouring reached by [`enumerate_colorings`], valid only during the
/// visitor call.
pub struct ColoringView<'a> {
    graph: &'a Graph,
    edges: &'a [(usize, usize)],
    colors: &'a [u32],
    used: &'a [u64],
    palette: usize,
}

impl ColoringView<'_> {
    /// Colour of each edge, in lexicographic edge order.
    pub fn colors(&self) -> &[u32] {
        self.colors
    }

    pub fn color(&self, a: Point, b: Point) -> Option<ColorId> {
        let (i, j) = (self.graph.index_of(a)?, self.graph.index_of(b)?);
        let key = (i.min(j), i.max(j));
        let k = self.edges.binary_search(&key).ok()?;
        Some(ColorId(self.colors[k]))
    }

    /// Number of distinct colours used.
    pub fn colors_used(&self) -> usize {
        self.colors.iter().map(|&c| c + 1).max().unwrap_or(0) as usize
    }

    /// Bit `k` is set iff colour `k` misses `x`.
    pub fn missing_mask(&self, x: Point) -> Result<u64, ColoringError> {
        let i = self.graph.index_of(x).ok_or(ColoringError::UnknownVertex(x))?;
        Ok(!self.used[i] & low_bits(self.palette as u32))
    }

    pub fn missing(&self, x: Point) -> Result<BTreeSet<ColorId>, ColoringError> {
        let mask = self.missing_mask(x)?;
        Ok((0..self.palette as u32).filter(|k| mask >> k & 1 == 1).map(ColorId).collect())
    }

    pub fn to_coloring(&self) -> EdgeColoring {
        EdgeColoring::from_edge_order(self.graph.clone(), self.palette, self.colors)
    }
}

/// Visits every proper `colors`-edge-colouring of `g` up to permutation of
/// the palette. `budget` caps colour assignments; the visitor may stop the
/// enumeration early by returning `Break`.
pub fn enumerate_colorings<F>(
    g: &Graph,
    colors: usize,
    mut visitor: F,
    budget: Option<u64>,
) -> Result<Enumeration, ColoringError>
where
    F: FnMut(&ColoringView<'_>) -> ControlFlow<()>,
{
    let max_degree = g.max_degree();
    if colors < max_degree {
        return Err(ColoringError::PaletteTooSmall { colors, max_degree });
    }
    if colors > MAX_COLORS {
        return Err(ColoringError::PaletteSize { expected: MAX_COLORS, found: colors });
    }
    let budget = budget.unwrap_or(u64::MAX);
    let mut bt = Backtrack::new(g, colors);
    let mut visited = 0;
    loop {
        match bt.next(budget) {
            Next::Solution => {
                visited += 1;
                let view = ColoringView {
                    graph: g,
                    edges: &bt.edges,
                    colors: &bt.assigned,
                    used: &bt.used,
                    palette: colors,
                };
                if visitor(&view).is_break() {
                    return Ok(Enumeration { visited, exhausted: false, nodes: bt.nodes });
                }
            }
            Next::Exhausted => return Ok(Enumeration { visited, exhausted: true, nodes: bt.nodes }),
            Next::OutOfBudget => return Ok(Enumeration { visited, exhausted: false, nodes: bt.nodes }),
        }
    }
}

/// Exact chromatic index. Components are handled separately: one with
/// smaller maximum degree than `g` is Vizing-coloured, a bipartite one is
/// König-coloured, and the rest are searched with `Δ` colours. A complete
/// failed search proves `χ′ = Δ + 1`, witnessed by a Vizing colouring of `g`.
/// `budget` caps colour assignments over all searches.
pub fn chromatic_index(g: &Graph, budget: Option<u64>) -> SearchOutcome<ChromaticIndex> {
    let delta = g.max_degree();
    let budget = budget.unwrap_or(DEFAULT_EXACT_BUDGET);
    let mut assignment = BTreeMap::new();
    let mut nodes = 0u64;
    for comp in g.components() {
        let h = g.induced(comp);
        if h.size() == 0 {
            continue;
        }
        let part = if h.max_degree() < delta {
            vizing_coloring(&h)
        } else if h.bipartition().is_some() {
            koenig_coloring(&h).expect("bipartite")
        } else if delta >= MAX_COLORS {
            return SearchOutcome::unknown(nodes, format!("maximum degree {delta} is beyond the search's palette limit"));
        } else {
            let mut bt = Backtrack::new(&h, delta);
            let found = bt.next(budget - nodes);
            nodes += bt.nodes;
            match found {
                Next::Solution => EdgeColoring::from_edge_order(h.clone(), delta, &bt.assigned),
                Next::Exhausted => {
                    let coloring = vizing_coloring(g);
                    return SearchOutcome::yes(ChromaticIndex { index: delta + 1, coloring }, nodes);
                }
                Next::OutOfBudget => {
                    return SearchOutcome::unknown(nodes, format!("node budget {budget} exhausted"));
                }
            }
        };
        assignment.extend(part.assignment().iter().map(|(&e, &c)| (e, c)));
    }
    let coloring =
        EdgeColoring::new(g.clone(), (0..delta as u32).map(ColorId), assignment).expect("colours below delta");
    SearchOutcome::yes(ChromaticIndex { index: delta, coloring }, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_proper;
    use crate::graph::StandardGraph;

    fn index(g: &Graph) -> usize {
        let out = chromatic_index(g, None);
        let w = out.witness.expect("decided");
        assert!(is_proper(&w.coloring));
        assert!(w.coloring.used_colors().len() <= w.index);
        w.index
    }

    #[test]
    fn small_chromatic_indices() {
        assert_eq!(index(&StandardGraph::Petersen.build().unwrap()), 4);
        assert_eq!(index(&StandardGraph::K33.build().unwrap()), 3);
        assert_eq!(index(&Graph::complete(0..4)), 3);
        assert_eq!(index(&Graph::complete(0..5)), 5);
        assert_eq!(index(&Graph::complete(0..3)), 3);
        assert_eq!(index(&Graph::edgeless(0..3)), 0);
        assert_eq!(index(&StandardGraph::Prism(37).build().unwrap()), 3);
        // Petersen plus a disjoint K4: the class 2 component decides.
        let k4 = Graph::complete(20..24);
        assert_eq!(index(&StandardGraph::Petersen.build().unwrap().union(&k4)), 4);
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let p = StandardGraph::Petersen.build().unwrap();
        assert!(chromatic_index(&p, Some(5)).is_unknown());
    }

    #[test]
    fn enumeration_basics() {
        let path = Graph::from_edges([(0, 1), (1, 2)]).unwrap();
        let e = enumerate_colorings(&path, 2, |_| ControlFlow::Continue(()), None).unwrap();
        assert_eq!((e.visited, e.exhausted), (1, true));
        let tri = Graph::complete(0..3);
        assert_eq!(
            enumerate_colorings(&tri, 1, |_| ControlFlow::Continue(()), None),
            Err(ColoringError::PaletteTooSmall { colors: 1, max_degree: 2 })
        );
        let e = enumerate_colorings(&tri, 3, |_| ControlFlow::Continue(()), None).unwrap();
        assert_eq!((e.visited, e.exhausted), (1, true));
        let e = enumerate_colorings(&Graph::complete(0..4), 3, |_| ControlFlow::Break(()), None).unwrap();
        assert_eq!((e.visited, e.exhausted), (1, false));
        let e = enumerate_colorings(&Graph::edgeless(0..2), 0, |_| ControlFlow::Continue(()), None).unwrap();
        assert_eq!((e.visited, e.exhausted), (1, true));
    }

    #[test]
    fn triangle_with_two_colors_has_none() {
        let e = enumerate_colorings(&Graph::complete(0..3), 2, |_| ControlFlow::Continue(()), None).unwrap();
        assert_eq!((e.visited, e.exhausted), (0, true));
    }

    #[test]
    fn views_report_missing_colors() {
        let star = Graph::from_edges([(0, 1), (0, 2)]).unwrap();
        let mut seen = Vec::new();
        enumerate_colorings(
            &star,
            3,
            |v| {
                assert!(is_proper(&v.to_coloring()));
                seen.push((v.color(0, 2).unwrap(), v.missing(0).unwrap(), v.missing(1).unwrap()));
                ControlFlow::Continue(())
            },
            None,
        )
        .unwrap();
        assert_eq!(seen.len(), 1);
        assert_eq!(seen[0].0, ColorId(1));
        assert_eq!(seen[0].1, BTreeSet::from([ColorId(2)]));
        assert_eq!(seen[0].2, BTreeSet::from([ColorId(1), ColorId(2)]));
    }
}
