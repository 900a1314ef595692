//! Line-oriented text formats for graphs, triple systems and edge colourings.
//!
//! ```text
//! graph <n> <m>        psts <u> <k>           ecol <m> <c>
//! v <label>            p <label>              c <a> <b> <color>
//! e <a> <b>            t <a> <b> <c>
//! ```
//!
//! Emitters are canonical (everything sorted, `a < b < c`), so equal objects
//! give identical bytes. Parsers accept any order, blank lines and `#`
//! comments, and report the 1-based line of the first problem.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::coloring::{ColorId, EdgeColoring};
use crate::design::{Triple, TripleSystem};
use crate::graph::{edge, Edge, Graph, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

/// Non-blank, non-comment lines with their 1-based numbers, split on
/// whitespace.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn numbers<const K: usize>(line: usize, fields: &[&str]) -> Result<[u32; K], FormatError> {
    if fields.len() != K + 1 {
        return err(line, format!("`{}` takes {K} values, found {}", fields[0], fields.len() - 1));
    }
    let mut out = [0u32; K];
    for (slot, f) in out.iter_mut().zip(&fields[1..]) {
        *slot = f.parse().map_err(|_| FormatError { line, message: format!("`{f}` is not a non-negative integer") })?;
    }
    Ok(out)
}

/// Parses the header, returning its counts and the line it sits on.
fn header<'a, I: Iterator<Item = (usize, Vec<&'a str>)>>(
    it: &mut I,
    tag: &str,
) -> Result<(usize, [u32; 2]), FormatError> {
    match it.next() {
        Some((line, fields)) if fields[0] == tag => Ok((line, numbers::<2>(line, &fields)?)),
        Some((line, fields)) => err(line, format!("expected `{tag}` header, found `{}`", fields[0])),
        None => err(0, format!("empty input, expected `{tag}` header")),
    }
}

fn count_check(line: usize, what: &str, declared: u32, found: usize) -> Result<(), FormatError> {
    if declared as usize != found {
        return err(line, format!("header declares {declared} {what}, found {found}"));
    }
    Ok(())
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut it = records(text);
    let (hline, [n, m]) = header(&mut it, "graph")?;
    let mut vertices = BTreeSet::new();
    let mut edges: Vec<(usize, Edge)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, fields) in it {
        match fields[0] {
            "v" => {
                let [p] = numbers::<1>(line, &fields)?;
                if !vertices.insert(p) {
                    return err(line, format!("duplicate vertex {p}"));
                }
            }
            "e" => {
                let [a, b] = numbers::<2>(line, &fields)?;
                if a == b {
                    return err(line, format!("loop at {a}"));
                }
                if !seen.insert(edge(a, b)) {
                    return err(line, format!("duplicate edge {a} {b}"));
                }
                edges.push((line, edge(a, b)));
            }
            other => return err(line, format!("unknown record `{other}`")),
        }
    }
    for &(line, (a, b)) in &edges {
        if !vertices.contains(&a) || !vertices.contains(&b) {
            return err(line, format!("edge {a} {b} uses an undeclared vertex"));
        }
    }
    count_check(hline, "vertices", n, vertices.len())?;
    count_check(hline, "edges", m, edges.len())?;
    Graph::new(vertices, edges.into_iter().map(|(_, e)| e)).map_err(|e| FormatError { line: hline, message: e.to_string() })
}

pub fn emit_graph(g: &Graph) -> String {
    let mut out = format!("graph {} {}\n", g.order(), g.size());
    for p in g.vertices() {
        out.push_str(&format!("v {p}\n"));
    }
    for (a, b) in g.edge_list() {
        out.push_str(&format!("e {a} {b}\n"));
    }
    out
}

pub fn parse_triples(text: &str) -> Result<TripleSystem, FormatError> {
    let mut it = records(text);
    let (hline, [u, k]) = header(&mut it, "psts")?;
    let mut points = BTreeSet::new();
    let mut triples: Vec<(usize, Triple)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, fields) in it {
        match fields[0] {
            "p" => {
                let [p] = numbers::<1>(line, &fields)?;
                if !points.insert(p) {
                    return err(line, format!("duplicate point {p}"));
                }
            }
            "t" => {
                let [a, b, c] = numbers::<3>(line, &fields)?;
                let Ok(t) = Triple::new(a, b, c) else {
                    return err(line, format!("degenerate triple {a} {b} {c}"));
                };
                if !seen.insert(t) {
                    return err(line, format!("duplicate triple {t}"));
                }
                triples.push((line, t));
            }
            other => return err(line, format!("unknown record `{other}`")),
        }
    }
    for &(line, t) in &triples {
        if let Some(p) = t.points().into_iter().find(|p| !points.contains(p)) {
            return err(line, format!("triple {t} uses undeclared point {p}"));
        }
    }
    count_check(hline, "points", u, points.len())?;
    count_check(hline, "triples", k, triples.len())?;
    let system = TripleSystem::new(points, triples.iter().map(|&(_, t)| t)).expect("points are distinct");
    if let Some(v) = system.validate().first() {
        let line = triples.iter().rev().find(|(_, t)| v.to_string().contains(&t.to_string())).map_or(hline, |x| x.0);
        return err(line, format!("not a partial triple system: {v}"));
    }
    Ok(system)
}

pub fn emit_triples(ts: &TripleSystem) -> String {
    let mut out = format!("psts {} {}\n", ts.order(), ts.triples().len());
    for p in ts.points() {
        out.push_str(&format!("p {p}\n"));
    }
    for t in ts.triples() {
        let [a, b, c] = t.points();
        out.push_str(&format!("t {a} {b} {c}\n"));
    }
    out
}

/// Parses a colouring of `g`. When every colour is below the declared
/// palette size `c` the palette is `0..c`; otherwise it is the set of colours
/// used, which must then have exactly `c` members.
pub fn parse_coloring(text: &str, g: &Graph) -> Result<EdgeColoring, FormatError> {
    let mut it = records(text);
    let (hline, [m, c]) = header(&mut it, "ecol")?;
    let mut assignment = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, fields) in it {
        if fields[0] != "c" {
            return err(line, format!("unknown record `{}`", fields[0]));
        }
        let [a, b, k] = numbers::<3>(line, &fields)?;
        if !g.has_edge(a, b) {
            return err(line, format!("{a} {b} is not an edge of the graph"));
        }
        if !seen.insert(edge(a, b)) {
            return err(line, format!("edge {a} {b} colored twice"));
        }
        assignment.push((edge(a, b), ColorId(k)));
    }
    count_check(hline, "colored edges", m, assignment.len())?;
    let used: BTreeSet<ColorId> = assignment.iter().map(|&(_, k)| k).collect();
    let palette: Vec<ColorId> = if used.iter().all(|k| k.0 < c) {
        (0..c).map(ColorId).collect()
    } else if used.len() == c as usize {
        used.into_iter().collect()
    } else {
        return err(hline, format!("colors do not fit a palette of {c}"));
    };
    EdgeColoring::new(g.clone(), palette, assignment).map_err(|e| FormatError { line: hline, message: e.to_string() })
}

pub fn emit_coloring(c: &EdgeColoring) -> String {
    let mut out = format!("ecol {} {}\n", c.assignment().len(), c.palette().len());
    for (&(a, b), k) in c.assignment() {
        out.push_str(&format!("c {a} {b} {k}\n"));
    }
    out
}

/// Parses a point list such as `0,1,5..9` (inclusive ranges).
pub fn parse_point_list(s: &str) -> Result<Vec<Point>, String> {
    let mut out = BTreeSet::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |x: &str| x.trim().parse::<Point>().map_err(|_| format!("`{x}` is not a point"));
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range {part}"));
                }
                out.extend(a..=b);
            }
            None => {
                out.insert(num(part)?);
            }
        }
    }
    Ok(out.into_iter().collect())
}
