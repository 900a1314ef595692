//! König's theorem, constructively: pad a bipartite graph to a `Δ`-regular
//! bipartite multigraph and peel off `Δ` perfect matchings.

use std::collections::BTreeMap;

use super::{ColorId, ColoringError, EdgeColoring};
use crate::graph::{Edge, Graph};

/// A proper `Δ`-edge-colouring of a bipartite graph.
pub fn koenig_coloring(g: &Graph) -> Result<EdgeColoring, ColoringError> {
    let (left, right) = g.bipartition().ok_or(ColoringError::NotBipartite)?;
    let delta = g.max_degree();
    let n = left.len().max(right.len());
    let lpos: BTreeMap<_, _> = left.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let rpos: BTreeMap<_, _> = right.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    // Multigraph edges (left index, right index, original edge if any).
    let mut edges: Vec<(usize, usize, Option<Edge>)> = Vec::new();
    let (mut dl, mut dr) = (vec![0usize; n], vec![0usize; n]);
    for (a, b) in g.edges() {
        let (l, r) = match lpos.get(&a) {
            Some(&l) => (l, rpos[&b]),
            None => (lpos[&b], rpos[&a]),
        };
        edges.push((l, r, Some((a, b))));
        dl[l] += 1;
        dr[r] += 1;
    }
    // Both sides miss n·Δ − |E| edge ends in total, so deficits pair up.
    let (mut i, mut j) = (0, 0);
    loop {
        while i < n && dl[i] == delta {
            i += 1;
        }
        while j < n && dr[j] == delta {
            j += 1;
        }
        if i == n || j == n {
            debug_assert!(i == n && j == n);
            break;
        }
        edges.push((i, j, None));
        dl[i] += 1;
        dr[j] += 1;
    }

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, &(l, _, _)) in edges.iter().enumerate() {
        adj[l].push(id);
    }
    let mut assignment = BTreeMap::new();
    for color in 0..delta as u32 {
        let matching = perfect_matching(n, &edges, &adj);
        for &id in &matching {
            if let Some(e) = edges[id].2 {
                assignment.insert(e, ColorId(color));
            }
            let l = edges[id].0;
            adj[l].retain(|&x| x != id);
        }
    }
    EdgeColoring::new(g.clone(), (0..delta as u32).map(ColorId), assignment)
}

/// Kuhn's augmenting paths on a regular bipartite multigraph, where a
/// perfect matching always exists.
fn perfect_matching(n: usize, edges: &[(usize, usize, Option<Edge>)], adj: &[Vec<usize>]) -> Vec<usize> {
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for l in 0..n {
        let mut seen = vec![false; n];
        let ok = augment(l, edges, adj, &mut owner, &mut seen);
        debug_assert!(ok, "regular bipartite multigraphs have perfect matchings");
    }
    owner.into_iter().flatten().collect()
}

fn augment(
    l: usize,
    edges: &[(usize, usize, Option<Edge>)],
    adj: &[Vec<usize>],
    owner: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &id in &adj[l] {
        let r = edges[id].1;
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if owner[r].is_none_or(|other| augment(edges[other].0, edges, adj, owner, seen)) {
            owner[r] = Some(id);
            return true;
        }
    }
    false
}
