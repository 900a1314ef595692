//! Complete triangle-decomposition search as exact cover.
//!
//! Columns are host edges in lexicographic order; rows are candidate
//! triangles in lexicographic order. Algorithm X over dancing links picks the
//! live column with the fewest rows (first such column on ties) and tries its
//! rows top to bottom, so runs are reproducible node for node.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::{necessary_conditions, triple_from_indices, Packing, TrianglePackingProblem, DEFAULT_EXACT_BUDGET};
use crate::outcome::SearchOutcome;

const ROOT: usize = 0;

#[derive(Debug, Clone)]
struct Dlx {
    left: Vec<u32>,
    right: Vec<u32>,
    up: Vec<u32>,
    down: Vec<u32>,
    col: Vec<u32>,
    row: Vec<u32>,
    size: Vec<u32>,
}

#[derive(Debug)]
enum Search {
    Found(Vec<usize>),
    Exhausted,
    OutOfBudget,
    Cancelled,
}

impl Dlx {
    /// `rows[r]` lists column indices (0-based) of row `r`.
    fn new(columns: usize, rows: &[[usize; 3]]) -> Self {
        let nodes = 1 + columns + 3 * rows.len();
        let mut d = Dlx {
            left: vec![0; nodes],
            right: vec![0; nodes],
            up: vec![0; nodes],
            down: vec![0; nodes],
            col: vec![0; nodes],
            row: vec![u32::MAX; nodes],
            size: vec![0; 1 + columns],
        };
        for h in 0..=columns {
            d.left[h] = if h == 0 { columns as u32 } else { h as u32 - 1 };
            d.right[h] = if h == columns { 0 } else { h as u32 + 1 };
            d.up[h] = h as u32;
            d.down[h] = h as u32;
            d.col[h] = h as u32;
        }
        let mut next = 1 + columns;
        for (r, cols) in rows.iter().enumerate() {
            let first = next;
            for (k, &c) in cols.iter().enumerate() {
                let h = c + 1;
                let x = next;
                next += 1;
                d.col[x] = h as u32;
                d.row[x] = r as u32;
                d.up[x] = d.up[h];
                d.down[x] = h as u32;
                let last = d.up[h] as usize;
                d.down[last] = x as u32;
                d.up[h] = x as u32;
                d.size[h] += 1;
                d.left[x] = if k == 0 { (first + cols.len() - 1) as u32 } else { x as u32 - 1 };
                d.right[x] = if k + 1 == cols.len() { first as u32 } else { x as u32 + 1 };
            }
        }
        d
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l as usize] = r;
        self.left[r as usize] = l;
        let mut i = self.down[c] as usize;
        while i != c {
            let mut j = self.right[i] as usize;
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u as usize] = d;
                self.up[d as usize] = u;
                self.size[self.col[j] as usize] -= 1;
                j = self.right[j] as usize;
            }
            i = self.down[i] as usize;
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c] as usize;
        while i != c {
            let mut j = self.left[i] as usize;
            while j != i {
                self.size[self.col[j] as usize] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u as usize] = j as u32;
                self.up[d as usize] = j as u32;
                j = self.left[j] as usize;
            }
            i = self.up[i] as usize;
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l as usize] = c as u32;
        self.left[r as usize] = c as u32;
    }

    fn enter_row(&mut self, r: usize) {
        let mut j = self.right[r] as usize;
        while j != r {
            self.cover(self.col[j] as usize);
            j = self.right[j] as usize;
        }
    }

    fn leave_row(&mut self, r: usize) {
        let mut j = self.left[r] as usize;
        while j != r {
            self.uncover(self.col[j] as usize);
            j = self.left[j] as usize;
        }
    }

    /// Fewest rows first; the earliest column wins ties.
    fn choose(&self) -> usize {
        let mut best = self.right[ROOT] as usize;
        let mut best_size = u32::MAX;
        let mut c = best;
        while c != ROOT {
            let s = self.size[c];
            if s < best_size {
                best = c;
                best_size = s;
                if s == 0 {
                    break;
                }
            }
            c = self.right[c] as usize;
        }
        best
    }

    fn is_solved(&self) -> bool {
        self.right[ROOT] as usize == ROOT
    }

    /// Depth-first search below the current state. `chosen` holds row nodes
    /// already selected above this level and is extended in place.
    fn search(
        &mut self,
        chosen: &mut Vec<usize>,
        nodes: &mut u64,
        budget: u64,
        cancelled: &dyn Fn() -> bool,
    ) -> Search {
        let base = chosen.len();
        let mut descend = true;
        loop {
            if descend {
                if self.is_solved() {
                    return Search::Found(chosen.iter().map(|&x| self.row[x] as usize).collect());
                }
                let c = self.choose();
                if self.size[c] == 0 {
                    descend = false;
                    continue;
                }
                self.cover(c);
                let r = self.down[c] as usize;
                *nodes += 1;
                if *nodes > budget {
                    return Search::OutOfBudget;
                }
                if *nodes % 4096 == 0 && cancelled() {
                    return Search::Cancelled;
                }
                self.enter_row(r);
                chosen.push(r);
                continue;
            }
            if chosen.len() == base {
                return Search::Exhausted;
            }
            let r = chosen.pop().expect("non-empty");
            self.leave_row(r);
            let c = self.col[r] as usize;
            let next = self.down[r] as usize;
            if next != c {
                *nodes += 1;
                if *nodes > budget {
                    return Search::OutOfBudget;
                }
                self.enter_row(next);
                chosen.push(next);
                descend = true;
            } else {
                self.uncover(c);
            }
        }
    }
}

/// Complete search for a triangle decomposition of the host.
///
/// Returns `ProvedYes` with a packing covering every host edge, `ProvedNo`
/// if the divisibility conditions fail or the search space is exhausted, and
/// `Unknown` when the node budget runs out. With more than one job the root
/// column's rows are explored in parallel; the budget then applies to each
/// root branch separately and the witness is the one from the lowest branch.
pub fn exact_k3_decompose(problem: &TrianglePackingProblem) -> SearchOutcome<Packing> {
    let host = problem.host();
    let nc = necessary_conditions(host);
    if !nc.holds() {
        return SearchOutcome::no(0, nc.reasons().join("; "));
    }
    if host.size() == 0 {
        return SearchOutcome::yes(Packing::default(), 0);
    }
    let n = host.order();
    let mut column_of = vec![u32::MAX; n * n];
    for (c, (i, j)) in host.edge_indices().enumerate() {
        column_of[i * n + j] = c as u32;
    }
    let triangles = problem.candidate_triangles();
    let rows: Vec<[usize; 3]> = triangles
        .iter()
        .map(|&[i, j, k]| {
            [
                column_of[i * n + j] as usize,
                column_of[i * n + k] as usize,
                column_of[j * n + k] as usize,
            ]
        })
        .collect();
    let budget = problem.budget().unwrap_or(DEFAULT_EXACT_BUDGET);
    let dlx = Dlx::new(host.size(), &rows);

    let (result, nodes) = if problem.jobs() <= 1 {
        let mut dlx = dlx;
        let mut nodes = 0;
        let r = dlx.search(&mut Vec::new(), &mut nodes, budget, &|| false);
        (r, nodes)
    } else {
        parallel_search(dlx, budget, problem.jobs())
    };

    match result {
        Search::Found(rows) => {
            let packing = Packing::new(
                rows.into_iter()
                    .map(|r| triple_from_indices(host, triangles[r]))
                    .collect(),
            );
            debug_assert!(packing.verify(problem, true).is_ok());
            SearchOutcome::yes(packing, nodes)
        }
        Search::Exhausted => SearchOutcome::no(nodes, "search space exhausted".to_string()),
        Search::OutOfBudget | Search::Cancelled => {
            SearchOutcome::unknown(nodes, format!("node budget {budget} exhausted"))
        }
    }
}

fn parallel_search(mut base: Dlx, budget: u64, jobs: usize) -> (Search, u64) {
    if base.is_solved() {
        return (Search::Found(Vec::new()), 0);
    }
    let c = base.choose();
    if base.size[c] == 0 {
        return (Search::Exhausted, 0);
    }
    base.cover(c);
    let mut branches = Vec::new();
    let mut r = base.down[c] as usize;
    while r != c {
        branches.push(r);
        r = base.down[r] as usize;
    }
    let next = AtomicUsize::new(0);
    let best_yes = AtomicUsize::new(usize::MAX);
    let results: Mutex<Vec<Option<(Search, u64)>>> =
        Mutex::new((0..branches.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(branches.len()) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                if k >= branches.len() {
                    break;
                }
                if k > best_yes.load(Ordering::SeqCst) {
                    results.lock().unwrap()[k] = Some((Search::Cancelled, 0));
                    continue;
                }
                let mut dlx = base.clone();
                let row = branches[k];
                dlx.enter_row(row);
                let mut chosen = vec![row];
                let mut nodes = 1;
                let cancelled = || best_yes.load(Ordering::SeqCst) < k;
                let outcome = dlx.search(&mut chosen, &mut nodes, budget, &cancelled);
                if matches!(outcome, Search::Found(_)) {
                    best_yes.fetch_min(k, Ordering::SeqCst);
                }
                results.lock().unwrap()[k] = Some((outcome, nodes));
            });
        }
    });
    let results = results.into_inner().unwrap();
    let mut total = 0;
    let mut all_exhausted = true;
    let mut found = None;
    for (outcome, nodes) in results.into_iter().map(|r| r.expect("every branch visited")) {
        total += nodes;
        match outcome {
            Search::Found(rows) if found.is_none() => found = Some(rows),
            Search::Found(_) | Search::Exhausted => {}
            Search::OutOfBudget | Search::Cancelled => all_exhausted = false,
        }
    }
    match found {
        Some(rows) => (Search::Found(rows), total),
        None if all_exhausted => (Search::Exhausted, total),
        None => (Search::OutOfBudget, total),
    }
}
