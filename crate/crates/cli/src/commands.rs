use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::Instant;

use psts::coloring::{
    chromatic_index, coloring_from_hamiltonian_cycle, enumerate_colorings, is_proper, koenig_coloring, vizing_coloring,
};
use psts::design::{decide_f_embed, EmbedQuery, TripleSystem};
use psts::family::{
    build_family_leave, check_conjecture, check_lemma31, psts15, realize_as_leave, smallest_family_orders, Lemma31Mode,
};
use psts::format::{
    emit_coloring, emit_graph, emit_triples, parse_coloring, parse_graph, parse_point_list, parse_triples,
};
use psts::graph::{Graph, StandardGraph};
use psts::outcome::Status;
use psts::reduction::{build_background, certify_yes, extract_coloring, verify_background, BackgroundInstance};
use psts::solver::{
    decompose_complete_minus_hole, exact_k3_decompose, hill_climb, DEFAULT_CLIMB_BUDGET, DEFAULT_EXACT_BUDGET,
    TrianglePackingProblem,
};

use crate::report::{fail, read, write, Failure, Report};
use crate::{BackgroundFiles, Command, Common, Named};

type Outcome = Result<u8, Failure>;

fn env_budget(var: &str, fallback: u64) -> Result<u64, Failure> {
    match std::env::var(var) {
        Ok(s) => s.trim().parse().map_err(|_| Failure(format!("{var}={s} is not an integer"))),
        Err(_) => Ok(fallback),
    }
}

impl Common {
    fn exact_budget(&self) -> Result<u64, Failure> {
        self.budget.map_or_else(|| env_budget("PSTS_EXACT_BUDGET", DEFAULT_EXACT_BUDGET), Ok)
    }

    fn climb_budget(&self) -> Result<u64, Failure> {
        self.budget.map_or_else(|| env_budget("PSTS_CLIMB_BUDGET", DEFAULT_CLIMB_BUDGET), Ok)
    }

    fn report(&self, command: &str) -> Report {
        let mut r = Report::new(command);
        r.set("seed", self.seed).set("jobs", self.jobs);
        r
    }
}

fn load_graph(p: &Path) -> Result<Graph, Failure> {
    parse_graph(&read(p)?).map_err(|e| Failure(format!("{}: {e}", p.display())))
}

fn load_triples(p: &Path) -> Result<TripleSystem, Failure> {
    parse_triples(&read(p)?).map_err(|e| Failure(format!("{}: {e}", p.display())))
}

fn load_background(files: &BackgroundFiles) -> Result<BackgroundInstance, Failure> {
    let meta = files.meta.clone().unwrap_or_else(|| files.background.with_extension("meta"));
    let system = load_triples(&files.background)?;
    BackgroundInstance::from_metadata(system, &read(&meta)?).map_err(|e| Failure(format!("{}: {e}", meta.display())))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn run(command: Command) -> Outcome {
    let started = Instant::now();
    let out = match command {
        Command::Verify { file, graph, contains, common } => verify(&file, graph.as_deref(), contains.as_deref(), &common),
        Command::Leave { psts, out, common } => leave(&psts, out.as_deref(), &common),
        Command::Embed { psts, orders, out_dir, common } => embed(&psts, orders, out_dir.as_deref(), &common),
        Command::Decompose { graph, hole, exact: _, climb, out, common } => {
            decompose(&graph, &hole, climb, out.as_deref(), &common)
        }
        Command::ChromaticIndex { graph, colors, out, common } => chromatic(&graph, colors, out.as_deref(), &common),
        Command::Reduce { graph, u, v, best_effort, out, common } => reduce(&graph, u, v, best_effort, &out, &common),
        Command::Certify { background, coloring, out, common } => certify(&background, &coloring, &out, &common),
        Command::Extract { background, embedding, out, common } => extract(&background, &embedding, out.as_deref(), &common),
        Command::Family { w, u, out, common } => family(w, u, out.as_deref(), &common),
        Command::Counterexample { w, out_dir, common } => counterexample(w, out_dir.as_deref(), &common),
        Command::CheckConjecture { graph, w, witness, common } => conjecture(&graph, w, witness.as_deref(), &common),
        Command::RealizeLeave { graph, out, common } => realize(&graph, out.as_deref(), &common),
        Command::Generate { name, k, out, hamiltonian_coloring, common } => {
            generate(name, k, &out, hamiltonian_coloring.as_deref(), &common)
        }
        Command::Selftest { common } => selftest(&common),
    };
    eprintln!("wall_time_ms={}", started.elapsed().as_millis());
    out
}

fn verify(file: &Path, graph: Option<&Path>, contains: Option<&Path>, common: &Common) -> Outcome {
    let text = read(file)?;
    let head = text.split_whitespace().next().unwrap_or("");
    let mut r = common.report("verify");
    r.set("file", file.display());
    let ok = match head {
        "psts" => {
            let ts = load_triples(file)?;
            let complete = ts.is_complete();
            r.set("kind", "psts").set("order", ts.order()).set("triples", ts.triples().len());
            r.set("leave_edges", ts.leave()?.size()).set("complete", complete);
            match contains {
                Some(small) => {
                    let small = load_triples(small)?;
                    let embedded = small.is_embedded_in(&ts)?;
                    r.set("embeds", embedded);
                    embedded
                }
                None => true,
            }
        }
        "graph" => {
            let g = load_graph(file)?;
            r.set("kind", "graph").set("order", g.order()).set("edges", g.size());
            r.set("max_degree", g.max_degree()).set("even", g.is_even()).set("cubic", g.is_cubic());
            true
        }
        "ecol" => {
            let Some(gp) = graph else {
                return fail("verifying a coloring needs --graph");
            };
            let g = load_graph(gp)?;
            let c = parse_coloring(&text, &g).map_err(|e| Failure(format!("{}: {e}", file.display())))?;
            let proper = is_proper(&c);
            r.set("kind", "coloring").set("colors", c.palette().len()).set("proper", proper);
            proper
        }
        other => return fail(format!("{}: unknown header `{other}`", file.display())),
    };
    r.set("valid", ok);
    r.emit(common.report.as_deref())?;
    Ok(if ok { 0 } else { 1 })
}

fn leave(psts: &Path, out: Option<&Path>, common: &Common) -> Outcome {
    let ts = load_triples(psts)?;
    let l = ts.leave()?;
    let mut r = common.report("leave");
    r.set("order", l.order()).set("edges", l.size()).set("even", l.is_even());
    match out {
        Some(p) => {
            write(p, &emit_graph(&l))?;
            r.set("leave_file", p.display());
        }
        None => print!("{}", emit_graph(&l)),
    }
    if out.is_some() || common.report.is_some() {
        r.emit(common.report.as_deref())?;
    }
    Ok(0)
}

fn embed(psts: &Path, orders: Vec<u64>, out_dir: Option<&Path>, common: &Common) -> Outcome {
    let ts = load_triples(psts)?;
    let mut q = EmbedQuery::new(ts, orders.clone());
    q.seed = common.seed;
    q.exact_budget = common.exact_budget()?;
    q.climb_budget = common.climb_budget()?;
    let results = decide_f_embed(&q)?;
    let mut r = common.report("embed");
    r.set("order", q.system.order());
    for (v, res) in orders.iter().zip(&results) {
        r.set(&format!("order_{v}"), res.status).set(&format!("order_{v}_effort"), res.effort);
        if let Some(note) = &res.note {
            r.set(&format!("order_{v}_note"), note);
        }
        if let (Some(dir), Some(w)) = (out_dir, &res.witness) {
            let p = dir.join(format!("embedding-{v}.psts"));
            write(&p, &emit_triples(w))?;
            r.set(&format!("order_{v}_witness"), p.display());
        }
    }
    let status = if results.iter().any(|o| o.is_yes()) {
        Status::ProvedYes
    } else if results.iter().all(|o| o.is_no()) {
        Status::ProvedNo
    } else {
        Status::Unknown
    };
    let code = r.status(status);
    r.emit(common.report.as_deref())?;
    Ok(code)
}

fn decompose(graph: &Path, holes: &[String], climb: bool, out: Option<&Path>, common: &Common) -> Outcome {
    let g = load_graph(graph)?;
    let mut problem = TrianglePackingProblem::new(g).with_seed(common.seed).with_jobs(common.jobs);
    for h in holes {
        let points = parse_point_list(h).map_err(Failure)?;
        problem = problem.with_hole(points)?;
    }
    let method = if climb { "climb" } else { "exact" };
    problem = problem.with_budget(if climb { common.climb_budget()? } else { common.exact_budget()? });
    let res = if climb { hill_climb(&problem) } else { exact_k3_decompose(&problem) };
    let mut r = common.report("decompose");
    r.set("method", method).set("holes", holes.len()).set("effort", res.effort);
    if let Some(n) = &res.note {
        r.set("note", n);
    }
    if let Some(p) = &res.witness {
        let ts = TripleSystem::new(problem.host().vertices().iter().copied(), p.triples.iter().copied())?;
        r.set("triples", ts.triples().len());
        if let Some(path) = out {
            write(path, &emit_triples(&ts))?;
            r.set("witness", path.display());
        }
    }
    let code = r.status(res.status);
    r.emit(common.report.as_deref())?;
    Ok(code)
}

fn chromatic(graph: &Path, colors: Option<usize>, out: Option<&Path>, common: &Common) -> Outcome {
    let g = load_graph(graph)?;
    let budget = Some(common.exact_budget()?);
    let mut r = common.report("chromatic-index");
    r.set("max_degree", g.max_degree());
    let (status, coloring) = match colors {
        Some(k) => {
            let mut found = None;
            let e = enumerate_colorings(
                &g,
                k,
                |view| {
                    found = Some(view.to_coloring());
                    ControlFlow::Break(())
                },
                budget,
            )?;
            r.set("colors", k).set("effort", e.nodes);
            let status = match (&found, e.exhausted) {
                (Some(_), _) => Status::ProvedYes,
                (None, true) => Status::ProvedNo,
                (None, false) => Status::Unknown,
            };
            (status, found)
        }
        None => {
            let res = chromatic_index(&g, budget);
            r.set("effort", res.effort);
            if let Some(ci) = &res.witness {
                let class = if ci.index == g.max_degree() { 1 } else { 2 };
                r.set("chromatic_index", ci.index).set("class", class);
            }
            (res.status, res.witness.map(|c| c.coloring))
        }
    };
    if let (Some(c), Some(p)) = (&coloring, out) {
        write(p, &emit_coloring(c))?;
        r.set("coloring", p.display());
    }
    let code = r.status(status);
    r.emit(common.report.as_deref())?;
    Ok(code)
}

fn reduce(graph: &Path, u: u64, v: u64, best_effort: bool, out: &Path, common: &Common) -> Outcome {
    let g = load_graph(graph)?;
    let b = build_background(&g, u, v, common.seed, Some(common.climb_budget()?), best_effort);
    let b = match b {
        Ok(b) => b,
        Err(psts::reduction::ReductionError::Stage { stage, status, note }) => {
            let mut r = common.report("reduce");
            r.set("stage", stage).set("note", note);
            let code = r.status(status);
            r.emit(common.report.as_deref())?;
            return Ok(code);
        }
        Err(e) => return Err(e.into()),
    };
    let (psts, meta) = (with_ext(out, "psts"), with_ext(out, "meta"));
    write(&psts, &emit_triples(&b.system))?;
    write(&meta, &b.metadata())?;
    let mut r = common.report("reduce");
    r.extend_text("", &b.metadata());
    r.set("triples", b.system.triples().len());
    r.extend_text("check_", &verify_background(&b).to_string());
    r.set("background", psts.display()).set("meta", meta.display());
    let code = r.status(Status::ProvedYes);
    r.emit(common.report.as_deref())?;
    Ok(code)
}

fn certify(files: &BackgroundFiles, coloring: &Path, out: &Path, common: &Common) -> Outcome {
    let b = load_background(files)?;
    let gamma = parse_coloring(&read(coloring)?, &b.source).map_err(|e| Failure(format!("{}: {e}", coloring.display())))?;
    let sts = match certify_yes(&b, &gamma, common.seed, Some(common.climb_budget()?)) {
        Ok(s) => s,
        Err(psts::reduction::ReductionError::Stage { stage, status, note }) => {
            let mut r = common.report("certify");
            r.set("stage", stage).set("note", note);
            let code = r.status(status);
            r.emit(common.report.as_deref())?;
            return Ok(code);
        }
        Err(e) => return Err(e.into()),
    };
    write(out, &emit_triples(&sts))?;
    let mut r = common.report("certify");
    r.set("order", sts.order()).set("triples", sts.triples().len());
    r.set("complete", sts.is_complete()).set("embeds_background", b.system.is_embedded_in(&sts)?);
    r.set("embedding", out.display());
    let code = r.status(Status::ProvedYes);
    r.emit(common.report.as_deref())?;
    Ok(code)
}

fn extract(files: &BackgroundFiles, embedding: &Path, out: Option<&Path>, common: &Common) -> Outcome {
    let b = load_background(files)?;
    let emb = load_triples(embedding)?;
    let c = extract_coloring(&b, &emb)?;
    let mut r = common.report("extract");
    r.set("colors", c.palette().len()).set("proper", is_proper(&c));
    match out {
        Some(p) => {
            write(p, &emit_coloring(&c))?;
            r.set("coloring", p.display());
        }
        None => print!("{}", emit_coloring(&c)),
    }
    let code = r.status(Status::ProvedYes);
    if out.is_some() || common.report.is_some() {
        r.emit(common.report.as_deref())?;
    }
    Ok(code)
}

fn family(w: u32, u: Option<u32>, out: Option<&Path>, common: &Common) -> Outcome {
    let u = match u {
        Some(u) => u,
        None => *smallest_family_orders(w, 1).first().ok_or_else(|| Failure(format!("no order for w={w}")))?,
    };
    let f = build_family_leave(u, w)?;
    let mut r = common.report("family");
    r.set("w", w).set("u", u).set("t", f.t).set("edges", f.graph.size());
    r.set("max_degree", f.graph.max_degree()).set("even", f.graph.is_even());
    r.set("d1", f.d1).set("d2", f.d2);
    for (name, lo, hi) in f.label_ranges() {
        r.set(&format!("labels_{name}"), format!("{lo}..{}", hi.saturating_sub(1)));
    }
    r.set("coloring_proper", is_proper(&f.coloring)).set("coloring_colors", f.coloring.palette().len());
    let l31 = check_lemma31(&f.graph, w, f.d1, f.d2, Lemma31Mode::Structural, Some(&f.coloring), Some(common.exact_budget()?))?;
    r.extend_text("leave_check_", &l31.to_text());
    if let Some(prefix) = out {
        let (gp, cp, mp) = (with_ext(prefix, "graph"), with_ext(prefix, "ecol"), with_ext(prefix, "meta"));
        write(&gp, &emit_graph(&f.graph))?;
        write(&cp, &emit_coloring(&f.coloring))?;
        write(&mp, &r.render())?;
        r.set("graph", gp.display()).set("coloring", cp.display()).set("meta", mp.display());
    }
    let ok = l31.holds() == Some(true);
    r.emit(common.report.as_deref())?;
    Ok(if ok { 0 } else { 1 })
}

fn counterexample(w: u32, out_dir: Option<&Path>, common: &Common) -> Outcome {
    if w != 4 {
        // Larger w only has the leave; a system realising it needs a very
        // large order.
        let prefix = out_dir.map(|d| d.join(format!("family-w{w}")));
        return family(w, None, prefix.as_deref(), common);
    }
    let ts = psts15();
    let l = ts.leave()?;
    let report = check_conjecture(&l, w, None, Some(common.exact_budget()?), common.jobs);
    let mut r = common.report("counterexample");
    r.set("order", ts.order()).set("triples", ts.triples().len()).set("leave_edges", l.size());
    r.extend_text("", &report.to_text());
    if let Some(dir) = out_dir {
        let (sp, lp, rp) = (dir.join("psts15.psts"), dir.join("leave.graph"), dir.join("report.txt"));
        write(&sp, &emit_triples(&ts))?;
        write(&lp, &emit_graph(&l))?;
        write(&rp, &report.to_text())?;
        r.set("system", sp.display()).set("leave", lp.display()).set("conjecture_report", rp.display());
    }
    r.emit(common.report.as_deref())?;
    Ok(match report.decomposition {
        Status::Unknown => 2,
        _ if report.is_counterexample() => 0,
        _ => 1,
    })
}

fn conjecture(graph: &Path, w: u32, witness: Option<&Path>, common: &Common) -> Outcome {
    let l = load_graph(graph)?;
    let wg = witness.map(load_graph).transpose()?;
    let report = check_conjecture(&l, w, wg.as_ref(), Some(common.exact_budget()?), common.jobs);
    let mut r = common.report("check-conjecture");
    r.extend_text("", &report.to_text());
    let code = report.decomposition.exit_code() as u8;
    r.emit(common.report.as_deref())?;
    Ok(code)
}

fn realize(graph: &Path, out: Option<&Path>, common: &Common) -> Outcome {
    let l = load_graph(graph)?;
    let res = realize_as_leave(&l, common.seed, Some(common.climb_budget()?))?;
    let mut r = common.report("realize-leave");
    r.set("density_hypothesis", res.density_hypothesis).set("complement_min_degree", res.complement_min_degree);
    r.set("effort", res.outcome.effort);
    if let Some(n) = &res.outcome.note {
        r.set("note", n);
    }
    if let (Some(ts), Some(p)) = (&res.outcome.witness, out) {
        write(p, &emit_triples(ts))?;
        r.set("system", p.display());
    }
    let code = r.status(res.outcome.status);
    r.emit(common.report.as_deref())?;
    Ok(code)
}

fn generate(name: Named, k: u32, out: &Path, coloring: Option<&Path>, common: &Common) -> Outcome {
    let sg = match name {
        Named::Petersen => StandardGraph::Petersen,
        Named::K4 => StandardGraph::K4,
        Named::K33 => StandardGraph::K33,
        Named::Prism => StandardGraph::Prism(k),
        Named::Moebius => StandardGraph::MoebiusLadder(k),
    };
    let g = sg.build()?;
    write(out, &emit_graph(&g))?;
    let mut r = common.report("generate");
    r.set("graph", out.display()).set("order", g.order()).set("edges", g.size());
    if let Some(p) = coloring {
        let Some(cycle) = sg.hamiltonian_cycle() else {
            return fail(format!("no Hamilton cycle is known for {sg:?}"));
        };
        let c = coloring_from_hamiltonian_cycle(&g, &cycle)?;
        write(p, &emit_coloring(&c))?;
        r.set("coloring", p.display());
    }
    r.emit(common.report.as_deref())?;
    Ok(0)
}

fn selftest(common: &Common) -> Outcome {
    let mut r = common.report("selftest");
    let mut all = true;
    let mut check = |name: &str, ok: bool| {
        r.set(name, if ok { "PASS" } else { "FAIL" });
        all &= ok;
    };
    let ts = psts15();
    let l = ts.leave().ok();
    check("psts15_valid", ts.validate().is_valid() && l.as_ref().is_some_and(|l| l.size() == 24));
    let ci = l.as_ref().and_then(|l| chromatic_index(l, None).witness).map(|c| c.index);
    check("psts15_leave_chromatic_index_4", ci == Some(4));
    let petersen = StandardGraph::Petersen.build()?;
    check("petersen_class_2", chromatic_index(&petersen, None).witness.map(|c| c.index) == Some(4));
    let k33 = StandardGraph::K33.build()?;
    check("konig_k33", koenig_coloring(&k33).is_ok_and(|c| is_proper(&c) && c.palette().len() == 3));
    check("vizing_petersen", is_proper(&vizing_coloring(&petersen)));
    check("hole_15_7", decompose_complete_minus_hole(15, 7, common.seed, None).is_yes());
    check("hole_13_5_no", decompose_complete_minus_hole(13, 5, common.seed, None).is_no());
    let prism = StandardGraph::Prism(5).build()?;
    let round_trip = build_background(&prism, 43, 61, common.seed, None, true).ok().and_then(|b| {
        let cycle = StandardGraph::Prism(5).hamiltonian_cycle()?;
        let gamma = coloring_from_hamiltonian_cycle(&prism, &cycle).ok()?;
        let sts = certify_yes(&b, &gamma, common.seed, None).ok()?;
        extract_coloring(&b, &sts).ok().map(|c| is_proper(&c))
    });
    check("small_background_round_trip", round_trip == Some(true));
    let code = if all { 0 } else { 1 };
    r.set("result", if all { "PASS" } else { "FAIL" });
    r.emit(common.report.as_deref())?;
    Ok(code)
}
