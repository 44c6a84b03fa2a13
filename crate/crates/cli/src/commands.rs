use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use flowmon::flowsim::{infer as infer_flows, Measurements};
use flowmon::generators::{gen_fig1, GeneratorSpec, RandomSpec};
use flowmon::hardness::{
    check_star_corpus, connected_graphs, lemma1_check, random_connected_simple, HardnessError,
};
use flowmon::io::{
    format_edge_list, parse_edge_list, parse_graph, parse_readings, write_graph, write_readings,
};
use flowmon::kernel::kernel_graph;
use flowmon::reduce::preprocess;
use flowmon::solvers::{self, Algorithm, GreedyTrace, Solution, SolverError};
use flowmon::{EdgeSet, Graph};
use thiserror::Error;

use crate::{Family, GenArgs, HardnessArgs};

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0:#}")]
    Input(#[from] anyhow::Error),
    #[error("{0}")]
    SizeGuard(String),
    #[error("measurements are inconsistent")]
    Inconsistent,
    #[error("{0}")]
    CheckFailed(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::CheckFailed(_) => 1,
            Failure::Input(_) => 2,
            Failure::SizeGuard(_) => 3,
            Failure::Inconsistent => 4,
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::TooLarge { .. } | SolverError::BudgetExceeded { .. } => {
                Failure::SizeGuard(e.to_string())
            }
            other => Failure::Input(other.into()),
        }
    }
}

impl From<HardnessError> for Failure {
    fn from(e: HardnessError) -> Self {
        match e {
            HardnessError::TooLarge { .. } => Failure::SizeGuard(e.to_string()),
            other => Failure::Input(other.into()),
        }
    }
}

pub type CmdResult = Result<(), Failure>;

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_graph(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn edge_list(s: &str) -> Result<EdgeSet, Failure> {
    Ok(parse_edge_list(s).map_err(|e| anyhow!("monitor list: {}", e.message))?)
}

fn write_target(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn ids(set: &EdgeSet) -> String {
    if set.is_empty() {
        "-".into()
    } else {
        format_edge_list(set)
    }
}

pub fn gen(a: &GenArgs) -> CmdResult {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::Input(anyhow!("{flag} is required for this family")))
    };
    let spec = match a.family {
        Family::Greedy1Tight => GeneratorSpec::Greedy1Tight {
            k: need(a.k, "--k")?,
            epsilon: a.epsilon,
        },
        Family::Greedy2Tight => GeneratorSpec::Greedy2Tight {
            k: need(a.k, "--k")?,
            epsilon: a.epsilon,
        },
        Family::Fig1 => GeneratorSpec::Fig1,
        Family::Cycle => GeneratorSpec::Cycle {
            n: need(a.n, "--n")?,
        },
        Family::Ladder => GeneratorSpec::Ladder {
            n: need(a.n, "--n")?,
        },
        Family::Random => GeneratorSpec::Random(RandomSpec {
            n: need(a.n, "--n")?,
            m: need(a.m, "--m")?,
            seed: a.seed,
            min_degree: a.min_degree,
            simple: a.simple,
            max_weight: a.max_weight,
        }),
    };
    let g = spec.generate().map_err(anyhow::Error::from)?;
    let mut text = String::new();
    if a.family == Family::Fig1 {
        let fig = gen_fig1();
        writeln!(text, "c monitors {}", format_edge_list(&fig.monitors)).unwrap();
        if let Some(path) = &a.readings_out {
            write_target(path, &write_readings(&fig.readings.readings))?;
        }
    } else if a.readings_out.is_some() {
        return Err(anyhow!("--readings-out only applies to fig1").into());
    }
    text.push_str(&write_graph(&g));
    match &a.out {
        Some(path) => write_target(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn reduce(input: &Path, map: Option<&Path>) -> CmdResult {
    let g = read_graph(input)?;
    let (reduced, rmap) = preprocess(&g).map_err(anyhow::Error::from)?;
    let map_path = map.map(Path::to_path_buf).unwrap_or_else(|| {
        let mut p = input.as_os_str().to_owned();
        p.push(".map");
        PathBuf::from(p)
    });
    write_target(&map_path, &rmap.to_sidecar())?;
    print!("{}", write_graph(&reduced));
    Ok(())
}

fn solution_report(s: &Solution) -> String {
    let mut out = String::new();
    for e in s.monitors.iter() {
        writeln!(out, "M {e}").unwrap();
    }
    for e in s.determined_extras.iter() {
        writeln!(out, "D {e}").unwrap();
    }
    for e in s.zero_flow.iter() {
        writeln!(out, "Z {e}").unwrap();
    }
    writeln!(out, "GAIN {}", s.gain).unwrap();
    out
}

fn trace_report(t: &GreedyTrace) -> String {
    let mut out = String::new();
    for (i, s) in t.steps.iter().enumerate() {
        writeln!(
            out,
            "STEP {} batch {} remaining {} candidates {} gain {} placed {} collected {}",
            i + 1,
            s.batch,
            s.remaining_edges,
            s.candidates_evaluated,
            s.step_gain,
            ids(&s.monitors_placed),
            ids(&s.collected),
        )
        .unwrap();
    }
    writeln!(out, "TRUNCATED {}", if t.truncated { "yes" } else { "no" }).unwrap();
    out
}

pub fn solve(input: &Path, k: usize, algo: Algorithm, trace: bool) -> CmdResult {
    let g = read_graph(input)?;
    let s = solvers::solve_pipeline(&g, k, algo)?;
    let mut out = solution_report(&s);
    if trace {
        if let Some(t) = &s.trace {
            out.push_str(&trace_report(t));
        }
    }
    print!("{out}");
    Ok(())
}

pub fn exact(input: &Path, k: usize) -> CmdResult {
    let g = read_graph(input)?;
    let s = solvers::exact(&g, k)?;
    print!("{}", solution_report(&s));
    Ok(())
}

pub fn infer(input: &Path, monitors: &str, readings: &Path) -> CmdResult {
    let g = read_graph(input)?;
    let m = edge_list(monitors)?;
    let text =
        fs::read_to_string(readings).with_context(|| format!("reading {}", readings.display()))?;
    let r = Measurements {
        readings: parse_readings(&text)
            .with_context(|| format!("parsing {}", readings.display()))?,
    };
    let res = infer_flows(&g, &m, &r).map_err(anyhow::Error::from)?;
    let mut out = String::new();
    for (e, v) in &res.determined {
        writeln!(out, "F {e} {v}").unwrap();
    }
    for e in res.undetermined.iter() {
        writeln!(out, "U {e}").unwrap();
    }
    writeln!(
        out,
        "CONSISTENT {}",
        if res.consistent { "yes" } else { "no" }
    )
    .unwrap();
    print!("{out}");
    if res.consistent {
        Ok(())
    } else {
        for comp in &res.violations {
            let vs: Vec<String> = comp.iter().map(usize::to_string).collect();
            eprintln!("flowmon: unbalanced component {{{}}}", vs.join(","));
        }
        Err(Failure::Inconsistent)
    }
}

pub fn kernel(input: &Path, monitors: &str) -> CmdResult {
    let g = read_graph(input)?;
    let m = edge_list(monitors)?;
    let kg = kernel_graph(&g, &m).map_err(anyhow::Error::from)?;
    let mut out = write_graph(&kg.graph);
    for (ke, orig) in kg.represents.iter().enumerate() {
        writeln!(out, "K {ke} {orig}").unwrap();
    }
    print!("{out}");
    Ok(())
}

pub fn hardness(a: &HardnessArgs) -> CmdResult {
    let mut out = String::new();
    let mut failures = 0usize;
    if a.mode.verify_star {
        writeln!(out, "n source graphs pairs cliques mismatches result").unwrap();
        for n in 3..=a.max_n {
            let (source, graphs) = if n <= a.exhaustive_up_to.min(8) {
                ("all", connected_graphs(n))
            } else {
                let graphs = (0..a.samples)
                    .map(|i| random_connected_simple(n, sample_seed(a.seed, n, i)))
                    .collect();
                ("random", graphs)
            };
            let checks = check_star_corpus(&graphs)?;
            let mismatches = checks.iter().filter(|c| !c.holds()).count();
            let cliques = checks.iter().filter(|c| c.clique).count();
            failures += mismatches;
            writeln!(
                out,
                "{n} {source} {} {} {cliques} {mismatches} {}",
                graphs.len(),
                checks.len(),
                verdict(mismatches == 0)
            )
            .unwrap();
        }
    }
    if a.mode.lemma1 {
        writeln!(out, "n cases result").unwrap();
        for n in 1..=a.max_n {
            let bad = (1..=n).filter(|&s| !lemma1_check(n, s)).count();
            failures += bad;
            writeln!(out, "{n} {n} {}", verdict(bad == 0)).unwrap();
        }
    }
    writeln!(out, "TOTAL {}", verdict(failures == 0)).unwrap();
    print!("{out}");
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::CheckFailed(format!("{failures} failing cases")))
    }
}

/// Seed of the `i`-th sampled graph on `n` vertices.
pub fn sample_seed(seed: u64, n: usize, i: u64) -> u64 {
    seed.wrapping_mul(1_000_003)
        .wrapping_add((n as u64) << 32 | i)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
