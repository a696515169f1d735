//! Batch front end: load fixtures or JSON files, run recognizers, checkers
//! and synthesizers, emit a single JSON report on standard output. Logs go
//! to standard error. Exit codes: 0 = verdict computed, 1 = input error,
//! 2 = inconclusive analysis (precision exhausted or search inconclusive).

use clap::{Args, Parser, Subcommand};
use permlat_core::decomp::{cp_split, recognize_permutation};
use permlat_core::group::{PGroup, Subgroup};
use permlat_core::hnn::{
    kernel_abelianization, kernel_rank, quotient_kill_nontrivial_edges, roundtrip_check,
    synthesize_hnn,
};
use permlat_core::lattice::Lattice;
use permlat_core::linalg::PrecisionContext;
use permlat_core::weiss::{
    check_weiss_classic, check_weiss_generalized, necessity_check, HypothesisVerdict,
    TrivialPartCandidate,
};
use permlat_core::{fixtures, io, suites, Error};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "permlat", version, about = "Exact permutation-lattice computations over finite p-groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// prime p; must match the fixture or file
    #[arg(long)]
    p: Option<u64>,
    /// working exponent for p-adic iterations
    #[arg(long, default_value_t = 64)]
    cap: u32,
    /// seed for randomized searches
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// write the report to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// include wall-clock timings in the report (reports are then no longer
    /// byte-identical across runs)
    #[arg(long, default_value_t = false)]
    timings: bool,
}

#[derive(Args, Clone)]
struct ModuleInput {
    /// bundled fixture name (see README for the list)
    #[arg(long)]
    fixture: Option<String>,
    /// group description file (JSON)
    #[arg(long)]
    group: Option<PathBuf>,
    /// lattice description file (JSON)
    #[arg(long)]
    lattice: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Recognize a lattice as a permutation module, with certificate
    Recognize {
        #[command(flatten)]
        input: ModuleInput,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Split off the trivial part over an order-p subgroup
    CpSplit {
        #[command(flatten)]
        input: ModuleInput,
        /// subgroup as comma-separated element indices, or "center"
        #[arg(long)]
        subgroup: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Classical criterion: free restriction + permutation fixed points
    WeissClassic {
        #[command(flatten)]
        input: ModuleInput,
        /// normal subgroup as comma-separated element indices, or "center"
        #[arg(long)]
        normal: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Generalized criterion for |N| = p (larger N routes to the classical
    /// checker)
    WeissGeneralized {
        #[command(flatten)]
        input: ModuleInput,
        #[arg(long)]
        normal: String,
        /// optional candidate trivial part: JSON file with a basis matrix
        #[arg(long)]
        candidate: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Necessity of both hypotheses for recognized permutation lattices
    Necessity {
        #[command(flatten)]
        input: ModuleInput,
        #[arg(long)]
        normal: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Synthesize the special HNN-extension of a certificate
    HnnSynthesize {
        /// certificate fixture name (e.g. c2-mixed)
        #[arg(long)]
        fixture: Option<String>,
        /// certificate file (JSON) together with --group
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        group: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Verify the synthesis roundtrip through the kernel abelianization
    HnnRoundtrip {
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        group: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Classify the subgroups of a group up to conjugacy
    Subgroups {
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        group: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the bundled verification suites at reduced size
    Selftest {
        /// seeded cases per group and suite
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::PrecisionExhausted | Error::SearchInconclusive => 2,
                _ => 1,
            }
        }
    });
}

fn parse_subgroup(g: &Arc<PGroup>, spec: &str) -> Result<Subgroup, Error> {
    if spec == "center" {
        return Ok(g.center());
    }
    let elements: Vec<usize> = spec
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::InvalidInput(format!("bad subgroup spec {spec:?}")))?;
    g.subgroup(elements)
}

fn read_json(path: &PathBuf) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn load_module(input: &ModuleInput) -> Result<(Lattice, String), Error> {
    match (&input.fixture, &input.group, &input.lattice) {
        (Some(name), None, None) => {
            let m = fixtures::lattice(name)?;
            Ok((m, name.clone()))
        }
        (None, Some(gpath), Some(lpath)) => {
            let g = io::group_from_json(&read_json(gpath)?)?;
            let m = io::lattice_from_json(&read_json(lpath)?, &g)?;
            Ok((m, lpath.display().to_string()))
        }
        _ => Err(Error::InvalidInput(
            "give either --fixture NAME or both --group FILE and --lattice FILE".into(),
        )),
    }
}

fn load_group_only(fixture: &Option<String>, path: &Option<PathBuf>) -> Result<(Arc<PGroup>, String), Error> {
    match (fixture, path) {
        (Some(name), None) => Ok((fixtures::group(name)?, name.clone())),
        (None, Some(p)) => Ok((io::group_from_json(&read_json(p)?)?, p.display().to_string())),
        _ => Err(Error::InvalidInput("give either --fixture or --group".into())),
    }
}

fn context_for(m_p: u64, common: &CommonOpts) -> Result<PrecisionContext, Error> {
    if let Some(p) = common.p {
        if p != m_p {
            return Err(Error::InvalidInput(format!(
                "--p {p} does not match the input's prime {m_p}"
            )));
        }
    }
    PrecisionContext::new(m_p, common.cap)
}

fn emit(common: &CommonOpts, command: &str, body: Value, started: Instant) -> Result<i32, Error> {
    let mut report = json!({
        "schema": 1,
        "tool": "permlat",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": common.seed,
        "cap": common.cap,
    });
    let obj = report.as_object_mut().unwrap();
    for (k, v) in body.as_object().cloned().unwrap_or_default() {
        obj.insert(k, v);
    }
    if common.timings {
        obj.insert("elapsed_ms".into(), json!(started.elapsed().as_millis() as u64));
    }
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    match &common.out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(0)
}

fn hypothesis_exit(h: &HypothesisVerdict) -> i32 {
    match h {
        HypothesisVerdict::Inconclusive => 2,
        _ => 0,
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    let started = Instant::now();
    match cli.command {
        Command::Recognize { input, common } => {
            let (m, name) = load_module(&input)?;
            let ctx = context_for(m.group.p, &common)?;
            eprintln!("recognizing {name} (rank {}, group order {})", m.rank, m.group.order());
            let verdict = recognize_permutation(&m, &ctx)?;
            let body = json!({
                "input": name,
                "p": m.group.p,
                "result": io::verdict_to_json(&m, &verdict),
            });
            emit(&common, "recognize", body, started)
        }
        Command::CpSplit { input, subgroup, common } => {
            let (m, name) = load_module(&input)?;
            let ctx = context_for(m.group.p, &common)?;
            let c = parse_subgroup(&m.group, &subgroup)?;
            let (m1, mp) = cp_split(&m, &c, &ctx)?;
            let body = json!({
                "input": name,
                "p": m.group.p,
                "subgroup": io::subgroup_to_json(&m.group, &c),
                "trivial_part": {"rank": m1.basis.cols(), "basis": m1.basis},
                "free_part": {"rank": mp.basis.cols(), "basis": mp.basis},
            });
            emit(&common, "cp-split", body, started)
        }
        Command::WeissClassic { input, normal, common } => {
            let (m, name) = load_module(&input)?;
            let ctx = context_for(m.group.p, &common)?;
            let n = parse_subgroup(&m.group, &normal)?;
            let report = check_weiss_classic(&m, &n, &ctx)?;
            let code = hypothesis_exit(&report.hypothesis_i).max(hypothesis_exit(&report.hypothesis_ii));
            let body = json!({
                "input": name,
                "normal": io::subgroup_to_json(&m.group, &n),
                "report": io::weiss_report_to_json(&m, &report),
            });
            emit(&common, "weiss-classic", body, started)?;
            Ok(code)
        }
        Command::WeissGeneralized { input, normal, candidate, common } => {
            let (m, name) = load_module(&input)?;
            let ctx = context_for(m.group.p, &common)?;
            let n = parse_subgroup(&m.group, &normal)?;
            let cand = match candidate {
                Some(path) => {
                    let v = read_json(&path)?;
                    let basis: permlat_core::linalg::IntMat = serde_json::from_value(
                        v.get("basis").cloned().unwrap_or(v),
                    )
                    .map_err(|e| Error::InvalidInput(format!("candidate: {e}")))?;
                    Some(TrivialPartCandidate {
                        basis: permlat_core::lattice::Sublattice { basis },
                        provenance: permlat_core::weiss::Provenance::Supplied,
                    })
                }
                None => None,
            };
            // |N| > p routes to the classical checker
            let (kind, report) = if n.elements.len() == m.group.p as usize {
                ("generalized", check_weiss_generalized(&m, &n, cand.as_ref(), &ctx)?)
            } else {
                eprintln!("|N| = {} > p: routing to the classical checker", n.elements.len());
                ("classical", check_weiss_classic(&m, &n, &ctx)?)
            };
            let code = hypothesis_exit(&report.hypothesis_i).max(hypothesis_exit(&report.hypothesis_ii));
            let body = json!({
                "input": name,
                "normal": io::subgroup_to_json(&m.group, &n),
                "checker": kind,
                "report": io::weiss_report_to_json(&m, &report),
            });
            emit(&common, "weiss-generalized", body, started)?;
            Ok(code)
        }
        Command::Necessity { input, normal, common } => {
            let (m, name) = load_module(&input)?;
            let ctx = context_for(m.group.p, &common)?;
            let n = parse_subgroup(&m.group, &normal)?;
            let report = necessity_check(&m, &n, &ctx)?;
            let body = json!({
                "input": name,
                "normal": io::subgroup_to_json(&m.group, &n),
                "report": io::weiss_report_to_json(&m, &report),
            });
            emit(&common, "necessity", body, started)
        }
        Command::HnnSynthesize { fixture, cert, group, common } => {
            let (c, g, name) = load_certificate(&fixture, &cert, &group)?;
            let pres = synthesize_hnn(&c, &g);
            let quotient = quotient_kill_nontrivial_edges(&pres);
            let body = json!({
                "input": name,
                "presentation": io::presentation_to_json(&pres, &name),
                "kernel_rank": kernel_rank(&pres),
                "free_product_quotient": {
                    "finite_factor_order": quotient.finite_factor_order,
                    "free_rank": quotient.free_rank,
                },
            });
            emit(&common, "hnn-synthesize", body, started)
        }
        Command::HnnRoundtrip { fixture, cert, group, common } => {
            let (c, g, name) = load_certificate(&fixture, &cert, &group)?;
            let ctx = context_for(g.p, &common)?;
            let pres = synthesize_hnn(&c, &g);
            let ab = kernel_abelianization(&pres)?;
            let ok = roundtrip_check(&c, &g, &ctx)?;
            let body = json!({
                "input": name,
                "kernel_rank": kernel_rank(&pres),
                "abelianization_rank": ab.rank,
                "roundtrip": ok,
            });
            emit(&common, "hnn-roundtrip", body, started)?;
            Ok(if ok { 0 } else { 2 })
        }
        Command::Subgroups { fixture, group, common } => {
            let (g, name) = load_group_only(&fixture, &group)?;
            if let Some(p) = common.p {
                if p != g.p {
                    return Err(Error::InvalidInput(format!(
                        "--p {p} does not match the group's prime {}",
                        g.p
                    )));
                }
            }
            let classes = g.classify_subgroups();
            let body = json!({
                "input": name,
                "p": g.p,
                "order": g.order(),
                "subgroup_count": classes.all_subgroups.len(),
                "class_count": classes.class_reps.len(),
                "classes": classes
                    .class_reps
                    .iter()
                    .enumerate()
                    .map(|(ci, s)| {
                        let mut v = io::subgroup_to_json(&g, s);
                        v.as_object_mut()
                            .unwrap()
                            .insert("label".into(), serde_json::json!(io::class_label(ci)));
                        v
                    })
                    .collect::<Vec<_>>(),
            });
            emit(&common, "subgroups", body, started)
        }
        Command::Selftest { seeds, common } => {
            // independent cases fan out over a bounded pool of two workers
            let outcomes = run_selftest_parallel(seeds)?;
            let all_passed = outcomes.iter().all(|o| o.passed);
            let body = json!({
                "seeds": seeds,
                "passed": all_passed,
                "suites": outcomes
                    .iter()
                    .map(|o| json!({
                        "name": o.name,
                        "passed": o.passed,
                        "cases": o.cases,
                        "failures": o.failures,
                    }))
                    .collect::<Vec<_>>(),
            });
            emit(&common, "selftest", body, started)?;
            Ok(if all_passed { 0 } else { 2 })
        }
    }
}

fn run_selftest_parallel(seeds: u64) -> Result<Vec<suites::SuiteOutcome>, Error> {
    type Job = Box<dyn FnOnce() -> permlat_core::Result<suites::SuiteOutcome> + Send>;
    let jobs: Vec<Job> = vec![
        Box::new(suites::suite_paper_example),
        Box::new(move || suites::suite_recognition(seeds)),
        Box::new(move || suites::suite_weiss_generalized(seeds)),
        Box::new(move || suites::suite_weiss_classic(seeds)),
        Box::new(move || suites::suite_hnn_roundtrip(seeds)),
        Box::new(suites::suite_orbit_counts),
        Box::new(suites::suite_negative_controls),
    ];
    let queue = std::sync::Mutex::new(jobs.into_iter().enumerate().collect::<Vec<_>>());
    let results = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..2 {
            scope.spawn(|| loop {
                let job = queue.lock().unwrap().pop();
                match job {
                    Some((i, f)) => {
                        let r = f();
                        results.lock().unwrap().push((i, r));
                    }
                    None => break,
                }
            });
        }
    });
    let mut collected = results.into_inner().unwrap();
    collected.sort_by_key(|(i, _)| *i);
    collected.into_iter().map(|(_, r)| r).collect()
}

#[allow(clippy::type_complexity)]
fn load_certificate(
    fixture: &Option<String>,
    cert: &Option<PathBuf>,
    group: &Option<PathBuf>,
) -> Result<(permlat_core::decomp::PermutationCertificate, Arc<PGroup>, String), Error> {
    match (fixture, cert, group) {
        (Some(name), None, None) => {
            let (c, g) = fixtures::certificate(name)?;
            Ok((c, g, name.clone()))
        }
        (None, Some(cpath), Some(gpath)) => {
            let g = io::group_from_json(&read_json(gpath)?)?;
            let c = io::certificate_from_json(&read_json(cpath)?, &g)?;
            Ok((c, g, cpath.display().to_string()))
        }
        _ => Err(Error::InvalidInput(
            "give either --fixture NAME or both --cert FILE and --group FILE".into(),
        )),
    }
}
