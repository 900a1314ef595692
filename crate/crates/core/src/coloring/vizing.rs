//! Vizing's theorem via the Misra–Gries fan-rotation algorithm.

use std::collections::HashMap;

use super::{ColorId, EdgeColoring};
use crate::graph::{edge, Graph};

const NONE: u32 = u32::MAX;

struct State<'g> {
    g: &'g Graph,
    palette: usize,
    /// `at[v * palette + c]`: neighbour joined to `v` by an edge of colour `c`.
    at: Vec<u32>,
    color: HashMap<(usize, usize), u32>,
}

impl State<'_> {
    fn key(a: usize, b: usize) -> (usize, usize) {
        (a.min(b), a.max(b))
    }

    fn color_of(&self, a: usize, b: usize) -> Option<u32> {
        self.color.get(&Self::key(a, b)).copied()
    }

    fn is_free(&self, v: usize, c: u32) -> bool {
        self.at[v * self.palette + c as usize] == NONE
    }

    fn free(&self, v: usize) -> u32 {
        (0..self.palette as u32).find(|&c| self.is_free(v, c)).expect("Δ+1 colours leave one free")
    }

    fn set(&mut self, a: usize, b: usize, c: u32) {
        self.at[a * self.palette + c as usize] = b as u32;
        self.at[b * self.palette + c as usize] = a as u32;
        self.color.insert(Self::key(a, b), c);
    }

    fn clear(&mut self, a: usize, b: usize) {
        if let Some(c) = self.color.remove(&Self::key(a, b)) {
            self.at[a * self.palette + c as usize] = NONE;
            self.at[b * self.palette + c as usize] = NONE;
        }
    }

    fn color_edge(&mut self, u: usize, v: usize) {
        let mut fan = vec![v];
        loop {
            let last = *fan.last().expect("non-empty");
            let next = self.g.neighbor_indices(u).iter().map(|&w| w as usize).find(|&w| {
                !fan.contains(&w) && self.color_of(u, w).is_some_and(|c| self.is_free(last, c))
            });
            match next {
                Some(w) => fan.push(w),
                None => break,
            }
        }
        let c = self.free(u);
        let d = self.free(*fan.last().expect("non-empty"));

        // Swap c and d along the c/d path starting at u with a d edge.
        let mut path = Vec::new();
        let (mut cur, mut col, mut other) = (u, d, c);
        while !self.is_free(cur, col) {
            let next = self.at[cur * self.palette + col as usize] as usize;
            path.push((cur, next, col));
            cur = next;
            std::mem::swap(&mut col, &mut other);
        }
        for &(a, b, _) in &path {
            self.clear(a, b);
        }
        for &(a, b, k) in &path {
            self.set(a, b, if k == c { d } else { c });
        }

        // Shortest fan prefix that is still a fan and ends where d is free.
        let mut end = None;
        for i in 0..fan.len() {
            if i > 0 {
                let ok = self.color_of(u, fan[i]).is_some_and(|k| self.is_free(fan[i - 1], k));
                if !ok {
                    break;
                }
            }
            if self.is_free(fan[i], d) {
                end = Some(i);
                break;
            }
        }
        let end = end.expect("Misra–Gries guarantees a rotatable prefix");
        let shifted: Vec<u32> = (0..end).map(|j| self.color_of(u, fan[j + 1]).expect("fan edge")).collect();
        for &w in &fan[1..=end] {
            self.clear(u, w);
        }
        for (j, &k) in shifted.iter().enumerate() {
            self.set(u, fan[j], k);
        }
        self.set(u, fan[end], d);
    }
}

/// A proper colouring with palette `0..=Δ`.
pub fn vizing_coloring(g: &Graph) -> EdgeColoring {
    let palette = g.max_degree() + 1;
    let mut st = State { g, palette, at: vec![NONE; g.order() * palette], color: HashMap::new() };
    for (i, j) in g.edge_indices() {
        st.color_edge(i, j);
    }
    let assignment: Vec<_> = st
        .color
        .iter()
        .map(|(&(i, j), &c)| (edge(g.label(i), g.label(j)), ColorId(c)))
        .collect();
    EdgeColoring::new(g.clone(), (0..palette as u32).map(ColorId), assignment).expect("colours are in the palette")
}
