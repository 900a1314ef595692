//! Small deterministic graph collections for exhaustive checks: all cubic
//! graphs and all even graphs of a given small order up to isomorphism, and
//! seeded random graphs.
//!
//! Isomorphism rejection uses a canonical form computed by equitable
//! partition refinement plus individualisation, which is plenty for graphs
//! of at most a dozen or so vertices.

use std::collections::BTreeSet;

use rand::Rng;

use crate::graph::{Graph, Point};
use crate::seed::{derive_seed, rng};

/// Largest order handled by [`canonical_form`].
pub const CANONICAL_LIMIT: usize = 32;

/// Adjacency rows of the canonical relabelling; two graphs (on the same
/// number of vertices) are isomorphic iff their forms are equal.
pub fn canonical_form(g: &Graph) -> Vec<u32> {
    let n = g.order();
    assert!(n <= CANONICAL_LIMIT, "canonical forms are limited to {CANONICAL_LIMIT} vertices");
    let adj: Vec<u32> = (0..n).map(|i| g.neighbor_indices(i).iter().fold(0, |m, &j| m | 1 << j)).collect();
    canonical_rows(&adj)
}

fn canonical_rows(adj: &[u32]) -> Vec<u32> {
    let cells = vec![(0..adj.len() as u8).collect::<Vec<u8>>()];
    let mut best = None;
    search(adj, cells, &mut best);
    best.unwrap_or_default()
}

/// Splits cells by neighbour counts into every cell until nothing changes.
fn refine(adj: &[u32], mut cells: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
    loop {
        let masks: Vec<u32> = cells.iter().map(|c| c.iter().fold(0, |m, &v| m | 1 << v)).collect();
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, u8)> = cell
                .iter()
                .map(|&v| (masks.iter().map(|m| (adj[v as usize] & m).count_ones()).collect(), v))
                .collect();
            keyed.sort();
            let mut group: Vec<u8> = Vec::new();
            for k in 0..keyed.len() {
                if k > 0 && keyed[k].0 != keyed[k - 1].0 {
                    next.push(std::mem::take(&mut group));
                }
                group.push(keyed[k].1);
            }
            next.push(group);
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn search(adj: &[u32], cells: Vec<Vec<u8>>, best: &mut Option<Vec<u32>>) {
    let cells = refine(adj, cells);
    let Some(at) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.iter().map(|c| c[0] as usize).collect();
        let mut pos = vec![0usize; adj.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let rows: Vec<u32> = order
            .iter()
            .map(|&v| (0..adj.len()).filter(|&w| adj[v] >> w & 1 == 1).fold(0, |m, w| m | 1 << pos[w]))
            .collect();
        if best.as_ref().is_none_or(|b| rows < *b) {
            *best = Some(rows);
        }
        return;
    };
    let cell = &cells[at];
    // Mutual twins can be swapped by an automorphism fixing everything
    // else, so one branch covers them all.
    let twins = cell.iter().all(|&a| {
        cell.iter().all(|&b| (adj[a as usize] & !(1 << b)) == (adj[b as usize] & !(1 << a)))
    });
    let branches: &[u8] = if twins { &cell[..1] } else { cell };
    for &v in branches {
        let mut next = cells.clone();
        let rest: Vec<u8> = cell.iter().copied().filter(|&w| w != v).collect();
        next[at] = vec![v];
        next.insert(at + 1, rest);
        search(adj, next, best);
    }
}

fn from_rows(rows: &[u32]) -> Graph {
    let n = rows.len() as Point;
    let edges = (0..n).flat_map(|i| (i + 1..n).filter(move |&j| rows[i as usize] >> j & 1 == 1).map(move |j| (i, j)));
    Graph::new(0..n, edges).expect("rows describe a simple graph")
}

/// The canonical relabelling of `g` onto `0..n`.
pub fn canonical_graph(g: &Graph) -> Graph {
    from_rows(&canonical_form(g))
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.order() == h.order() && g.size() == h.size() && canonical_form(g) == canonical_form(h)
}

/// All cubic graphs on `n` vertices up to isomorphism, in canonical order.
pub fn cubic_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 16, "cubic enumeration is meant for small orders");
    if n % 2 == 1 || n < 4 {
        return Vec::new();
    }
    let mut adj = vec![0u32; n];
    let mut found = BTreeSet::new();
    extend_cubic(&mut adj, &mut found);
    found.iter().map(|rows: &Vec<u32>| from_rows(rows)).collect()
}

/// Labelled backtracking: always saturate the smallest unsaturated vertex,
/// add its neighbours in increasing order, and treat untouched vertices as
/// interchangeable.
fn extend_cubic(adj: &mut [u32], found: &mut BTreeSet<Vec<u32>>) {
    let n = adj.len();
    let Some(i) = (0..n).find(|&i| adj[i].count_ones() < 3) else {
        found.insert(canonical_rows(adj));
        return;
    };
    let last = 31 - adj[i].leading_zeros().min(31);
    let start = if adj[i] == 0 { i + 1 } else { (last as usize + 1).max(i + 1) };
    let mut tried_untouched = false;
    for j in start..n {
        if adj[j].count_ones() >= 3 {
            continue;
        }
        if adj[j] == 0 {
            if tried_untouched {
                continue;
            }
            tried_untouched = true;
        }
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
        extend_cubic(adj, found);
        adj[i] &= !(1 << j);
        adj[j] &= !(1 << i);
    }
}

/// All graphs on `n` vertices up to isomorphism, grown one vertex at a time.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    all_graph_rows(n).iter().map(|r| from_rows(r)).collect()
}

fn all_graph_rows(n: usize) -> BTreeSet<Vec<u32>> {
    assert!(n <= 9, "exhaustive graph enumeration is meant for small orders");
    let mut level: BTreeSet<Vec<u32>> = [Vec::new()].into();
    for k in 0..n {
        let mut next = BTreeSet::new();
        for rows in &level {
            for s in 0u32..1 << k {
                let mut adj = rows.clone();
                for (j, row) in adj.iter_mut().enumerate() {
                    *row |= (s >> j & 1) << k;
                }
                adj.push(s);
                next.insert(canonical_rows(&adj));
            }
        }
        level = next;
    }
    level
}

/// All even graphs (every degree even) on `n ≥ 1` vertices up to isomorphism.
/// Deleting any vertex of an even graph leaves a graph whose odd vertices are
/// exactly its neighbours, so each one arises from a graph on `n − 1`.
pub fn even_graphs(n: usize) -> Vec<Graph> {
    if n == 0 {
        return vec![Graph::edgeless(std::iter::empty())];
    }
    let mut found = BTreeSet::new();
    for rows in all_graph_rows(n - 1) {
        let mut adj = rows.clone();
        let k = n - 1;
        let odd: u32 = (0..k).filter(|&j| rows[j].count_ones() % 2 == 1).fold(0, |m, j| m | 1 << j);
        for (j, row) in adj.iter_mut().enumerate() {
            *row |= (odd >> j & 1) << k;
        }
        adj.push(odd);
        found.insert(canonical_rows(&adj));
    }
    found.iter().map(|r| from_rows(r)).collect()
}

/// `count` random graphs on `3..=max_order` vertices. Every other graph is
/// made even by attaching a vertex to the odd-degree ones, so that a fair
/// share pass the divisibility conditions.
pub fn random_graphs(count: usize, max_order: usize, seed: u64) -> Vec<Graph> {
    assert!(max_order >= 3);
    (0..count)
        .map(|k| {
            let mut r = rng(derive_seed(seed, "corpus-random", k as u64));
            let n = r.gen_range(3..=max_order);
            let p: f64 = r.gen_range(0.3..0.9);
            let base = if k % 2 == 1 { n - 1 } else { n };
            let mut edges = Vec::new();
            for i in 0..base as Point {
                for j in i + 1..base as Point {
                    if r.gen_bool(p) {
                        edges.push((i, j));
                    }
                }
            }
            if base < n {
                let apex = base as Point;
                let mut deg = vec![0usize; base];
                for &(i, j) in &edges {
                    deg[i as usize] += 1;
                    deg[j as usize] += 1;
                }
                edges.extend((0..base).filter(|&i| deg[i] % 2 == 1).map(|i| (i as Point, apex)));
            }
            Graph::new(0..n as Point, edges).expect("simple by construction")
        })
        .collect()
}
