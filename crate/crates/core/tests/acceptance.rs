//! Acceptance run: one `PASS`/`FAIL` line per criterion. Exits non-zero if
//! any criterion fails.

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use psts::coloring::{
    chromatic_index, coloring_from_hamiltonian_cycle, enumerate_colorings, is_proper, missing_colors,
};
use psts::corpus::{cubic_graphs, even_graphs, is_isomorphic, random_graphs};
use psts::family::{
    build_family_leave, build_l1, check_conjecture, check_lemma31, l1_canonical_coloring, psts15,
    smallest_family_orders, Lemma31Mode,
};
use psts::format::emit_triples;
use psts::graph::{Graph, Point, StandardGraph};
use psts::outcome::Status;
use psts::reduction::{build_background, certify_yes, check_params, extract_coloring, verify_background};
use psts::solver::{
    brute_force_k3_decompose, decompose_complete_minus_hole, exact_k3_decompose, necessary_conditions,
    TrianglePackingProblem,
};

const SEED: u64 = 20_240_601;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, format!("{what} took {took:?}, limit {limit:?}"))
}

fn psts15_valid() -> Verdict {
    let start = Instant::now();
    let s = psts15();
    ensure(s.triples().len() == 27 && s.order() == 15, "expected 27 triples on 15 points")?;
    ensure(s.validate().is_valid(), format!("invalid: {:?}", s.validate().first()))?;
    let leave = s.leave().map_err(|e| e.to_string())?;
    let deg2 = leave.vertices().iter().filter(|&&p| leave.degree(p) == Ok(2)).count();
    ensure(leave.size() == 24, format!("leave has {} edges", leave.size()))?;
    ensure(leave.is_even(), "leave not even")?;
    ensure(leave.components().len() == 2, format!("{} components", leave.components().len()))?;
    ensure(deg2 == 6, format!("{deg2} vertices of degree 2"))?;
    within(start, Duration::from_secs(1), "validation")?;
    Ok(format!("27 triples, leave 24 edges, 2 components, 6 of degree 2, {:?}", start.elapsed()))
}

fn psts15_index() -> Verdict {
    let leave = psts15().leave().map_err(|e| e.to_string())?;
    let ci = chromatic_index(&leave, None);
    let found = ci.witness.ok_or("chromatic index undecided")?;
    ensure(found.index == 4, format!("chromatic index {}", found.index))?;
    ensure(is_proper(&found.coloring) && found.coloring.used_colors().len() == 4, "witness not a proper 4-colouring")?;

    let mut unequal = 0u64;
    let e = enumerate_colorings(
        &leave,
        4,
        |view| {
            if view.missing_mask(1) != view.missing_mask(2) {
                unequal += 1;
            }
            ControlFlow::Continue(())
        },
        None,
    )
    .map_err(|e| e.to_string())?;
    ensure(e.exhausted, "enumeration did not exhaust")?;
    ensure(unequal == 0, format!("{unequal} colourings with different missing sets at 1 and 2"))?;
    Ok(format!(
        "χ′=4, {} colourings up to permutation, missing sets at 1,2 equal in all; witness misses {:?} at 1",
        e.visited,
        missing_colors(&found.coloring, 1).map_err(|e| e.to_string())?
    ))
}

fn counterexample_verdict() -> Result<String, String> {
    let leave = psts15().leave().map_err(|e| e.to_string())?;
    let r = check_conjecture(&leave, 4, None, None, 1);
    ensure(r.degree_parity && r.order_parity && r.divisibility(), "conditions 1–3")?;
    ensure(r.condition4.quadratic == 0, format!("quadratic = {}", r.condition4.quadratic))?;
    ensure(r.condition4.witness == leave, "witness is not the leave itself")?;
    ensure(r.conditions_hold() == Some(true), format!("condition 4: {:?}", r.condition4.holds()))?;
    ensure(r.decomposition == Status::ProvedNo, format!("decomposition {}", r.decomposition))?;
    Ok(r.to_text())
}

fn gadget_sweep() -> Verdict {
    let start = Instant::now();
    let mut graphs: Vec<Graph> = [4, 6, 8, 10].into_iter().flat_map(cubic_graphs).collect();
    let named = [
        StandardGraph::K4,
        StandardGraph::K33,
        StandardGraph::Prism(3),
        StandardGraph::Prism(4),
        StandardGraph::Prism(5),
        StandardGraph::MoebiusLadder(3),
        StandardGraph::MoebiusLadder(4),
        StandardGraph::MoebiusLadder(5),
        StandardGraph::Petersen,
    ];
    for s in &named {
        let g = s.build().map_err(|e| e.to_string())?;
        ensure(graphs.iter().any(|h| is_isomorphic(h, &g)), format!("{s:?} missing from the corpus"))?;
    }
    let petersen = StandardGraph::Petersen.build().unwrap();
    graphs.push(petersen.clone());
    let (mut yes, mut no) = (0, 0);
    for g in &graphs {
        let host = g.join(&Graph::edgeless(g.fresh_points(3))).map_err(|e| e.to_string())?;
        let status = exact_k3_decompose(&TrianglePackingProblem::new(host)).status;
        let index = chromatic_index(g, None).witness.ok_or("index undecided")?.index;
        ensure(status != Status::Unknown, "decomposition undecided")?;
        ensure((status == Status::ProvedYes) == (index == 3), format!("mismatch on {g:?}: {status} vs χ′={index}"))?;
        if g == &petersen {
            ensure(status == Status::ProvedNo, "Petersen gadget decomposes")?;
        }
        if status == Status::ProvedYes {
            yes += 1;
        } else {
            no += 1;
        }
    }
    within(start, Duration::from_secs(300), "sweep")?;
    Ok(format!("{} cubic graphs: {yes} class 1, {no} class 2 (Petersen twice), {:?}", graphs.len(), start.elapsed()))
}

fn oracle_equivalence() -> Verdict {
    let small: Vec<Graph> = even_graphs(8).into_iter().filter(|g| necessary_conditions(g).holds()).collect();
    let random = random_graphs(200, 9, SEED);
    let mut disagreements = Vec::new();
    for g in small.iter().chain(&random) {
        let exact = exact_k3_decompose(&TrianglePackingProblem::new(g.clone())).status;
        let brute = brute_force_k3_decompose(g).map_err(|e| e.to_string())?.status;
        if exact != brute || exact == Status::Unknown {
            disagreements.push(format!("{g:?}: exact {exact}, brute {brute}"));
        }
    }
    ensure(disagreements.is_empty(), disagreements.join("; "))?;
    Ok(format!("{} graphs on ≤8 vertices + {} random, 0 disagreements", small.len(), random.len()))
}

fn doyen_wilson() -> Verdict {
    let start = Instant::now();
    let yes = decompose_complete_minus_hole(15, 7, SEED, None);
    ensure(yes.status == Status::ProvedYes, format!("(15,7): {}", yes.status))?;
    let packing = yes.witness.ok_or("(15,7) has no witness")?;
    let host = Graph::complete(0..15).subtract(&Graph::complete(0..7));
    let problem = TrianglePackingProblem::new(host).with_hole(0..7).map_err(|e| e.to_string())?;
    packing.verify(&problem, true).map_err(|e| format!("witness: {e}"))?;
    for (v, w) in [(13, 5), (13, 7)] {
        let r = decompose_complete_minus_hole(v, w, SEED, None);
        ensure(r.status == Status::ProvedNo, format!("({v},{w}): {}", r.status))?;
    }
    within(start, Duration::from_secs(60), "wrapper")?;
    Ok(format!("(15,7) yes with {} triples; (13,5), (13,7) no", packing.len()))
}

/// Everything criterion 7 produces, for the determinism comparison.
struct PipelineRun {
    background: String,
    metadata: String,
    report: String,
    embedding: String,
}

fn pipeline() -> Result<(PipelineRun, String), String> {
    let start = Instant::now();
    let prism = StandardGraph::Prism(37);
    let g = prism.build().map_err(|e| e.to_string())?;
    let params = check_params(74, 339, 451).map_err(|e| e.join("; "))?;
    ensure(params.working_order == 325 && params.d == 126, format!("{params:?}"))?;

    let b = build_background(&g, 339, 451, SEED, None, false).map_err(|e| e.to_string())?;
    let report = verify_background(&b);
    ensure(report.holds(), report.to_string())?;
    let u_prime = params.working_order as Point;
    let leave = b.system.leave().map_err(|e| e.to_string())?.induced(0..u_prime);
    ensure(leave == b.expected_leave(), "leave differs from the expected gadget")?;
    let z = b.z();
    for p in b.a_prime() {
        let want = if z.contains(&p) { 200 } else { 126 };
        let got = leave.degree(p).map_err(|e| e.to_string())?;
        ensure(got == want, format!("A′ point {p} has leave degree {got}, want {want}"))?;
    }
    let placed = b.placed_graph();
    for p in b.graph_points() {
        ensure(placed.degree(p) == Ok(3), format!("G vertex {p} not cubic"))?;
    }

    let cycle = prism.hamiltonian_cycle().ok_or("no Hamilton cycle")?;
    let gamma = coloring_from_hamiltonian_cycle(&g, &cycle).map_err(|e| e.to_string())?;
    let sts = certify_yes(&b, &gamma, SEED, None).map_err(|e| e.to_string())?;
    ensure(sts.order() == 451 && sts.is_complete() && sts.validate().is_valid(), "not an STS(451)")?;
    ensure(b.system.is_embedded_in(&sts) == Ok(true), "background not embedded")?;
    let back = extract_coloring(&b, &sts).map_err(|e| e.to_string())?;
    ensure(back.graph() == &g && is_proper(&back) && back.used_colors().len() == 3, "extracted colouring")?;
    within(start, Duration::from_secs(1800), "pipeline")?;

    let summary = format!(
        "u′=325, d=126, leave exact, degrees 126/200/3, STS(451) with {} triples, extraction proper, {:?}",
        sts.triples().len(),
        start.elapsed()
    );
    let run = PipelineRun {
        background: emit_triples(&b.system),
        metadata: b.metadata(),
        report: report.to_string(),
        embedding: emit_triples(&sts),
    };
    Ok((run, summary))
}

fn family_sweep() -> Verdict {
    let start = Instant::now();
    let mut checked = 0;
    for w in (6..=40).step_by(2) {
        for u in smallest_family_orders(w, 3) {
            let f = build_family_leave(u, w).map_err(|e| e.to_string())?;
            let l = &f.graph;
            let (uu, ww) = (u as usize, w as usize);
            let tag = format!("w={w} u={u}");
            ensure(2 * l.size() == ww * (uu - ww + 1), format!("{tag}: {} edges", l.size()))?;
            ensure(l.is_even(), format!("{tag}: not even"))?;
            ensure(l.max_degree() == ww, format!("{tag}: Δ={}", l.max_degree()))?;
            ensure(l.size() % 3 == (uu * (uu - 1) / 2) % 3, format!("{tag}: divisibility"))?;
            ensure(
                is_proper(&f.coloring) && f.coloring.used_colors().len() == ww,
                format!("{tag}: colouring"),
            )?;
            let r = check_lemma31(l, w, f.d1, f.d2, Lemma31Mode::Structural, Some(&f.coloring), Some(0))
                .map_err(|e| format!("{tag}: {e}"))?;
            ensure(r.chromatic_index == Some(ww), format!("{tag}: χ′ {:?}", r.chromatic_index))?;
            ensure(r.holds() == Some(true), format!("{tag}: {}", r.detail))?;
            checked += 1;
        }
    }
    within(start, Duration::from_secs(60), "sweep")?;
    Ok(format!("{checked} leaves, {:?}", start.elapsed()))
}

fn l1_check() -> Verdict {
    let start = Instant::now();
    let mut counts = Vec::new();
    for w in [4, 6] {
        let l1 = build_l1(w).map_err(|e| e.to_string())?;
        let mut unequal = 0u64;
        let e = enumerate_colorings(
            &l1,
            w as usize,
            |view| {
                if view.missing_mask(1) != view.missing_mask(2) {
                    unequal += 1;
                }
                ControlFlow::Continue(())
            },
            Some(1_000_000_000),
        )
        .map_err(|e| e.to_string())?;
        ensure(e.exhausted, format!("w={w}: enumeration did not exhaust"))?;
        ensure(e.visited > 0, format!("w={w}: no colourings"))?;
        ensure(unequal == 0, format!("w={w}: {unequal} colourings differ at 1,2"))?;
        counts.push(format!("w={w}: {}", e.visited));
    }
    for w in (4..=40).step_by(2) {
        let c = l1_canonical_coloring(w).map_err(|e| e.to_string())?;
        ensure(is_proper(&c) && c.used_colors().len() == w as usize, format!("w={w}: canonical colouring"))?;
        let m1 = missing_colors(&c, 1).map_err(|e| e.to_string())?;
        let m2 = missing_colors(&c, 2).map_err(|e| e.to_string())?;
        ensure(m1.len() == 2 && m1 == m2, format!("w={w}: missing {m1:?} vs {m2:?}"))?;
    }
    within(start, Duration::from_secs(600), "L1 check")?;
    Ok(format!("{} colourings, all equal at 1,2; canonical colourings w=4..40 ok", counts.join(", ")))
}

fn determinism(first3: &str, first7: &PipelineRun) -> Verdict {
    let again3 = counterexample_verdict()?;
    ensure(again3 == first3, "counterexample report differs between runs")?;
    let (again7, _) = pipeline()?;
    ensure(again7.background == first7.background, "background differs")?;
    ensure(again7.metadata == first7.metadata, "metadata differs")?;
    ensure(again7.report == first7.report, "verification report differs")?;
    ensure(again7.embedding == first7.embedding, "embedding differs")?;
    Ok("counterexample report and pipeline outputs byte-identical".into())
}

fn main() {
    let mut failed = 0;
    let mut line = |k: u32, name: &str, v: Verdict| {
        match v {
            Ok(detail) => println!("PASS {k:>2} {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {k:>2} {name}: {why}");
            }
        }
    };
    line(1, "psts15 validity", psts15_valid());
    line(2, "psts15 chromatic index", psts15_index());
    let start = Instant::now();
    let c3 = counterexample_verdict();
    line(
        3,
        "counterexample verdict",
        c3.clone().map(|_| format!("conditions hold, quadratic 0, proved no, {:?}", start.elapsed())),
    );
    line(4, "gadget equivalence sweep", gadget_sweep());
    line(5, "oracle equivalence", oracle_equivalence());
    line(6, "Doyen–Wilson wrapper", doyen_wilson());
    let c7 = pipeline();
    line(7, "full-scale pipeline", c7.as_ref().map(|(_, s)| s.clone()).map_err(Clone::clone));
    line(8, "family sweep", family_sweep());
    line(9, "L1 exhaustive check", l1_check());
    let det = match (&c3, &c7) {
        (Ok(r3), Ok((r7, _))) => determinism(r3, r7),
        _ => Err("criterion 3 or 7 failed, nothing to compare".into()),
    };
    line(10, "determinism", det);
    if failed > 0 {
        std::process::exit(1);
    }
}
