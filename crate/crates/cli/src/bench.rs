//! Size-ladder timing of the pipeline with candidate-count checks.

use std::fmt::Write as _;
use std::time::Instant;

use flowmon::combinatorics::binomial;
use flowmon::generators::{gen_random, RandomSpec};
use flowmon::solvers::{sigma_greedy, solve_pipeline, Algorithm, GreedyTrace, SolverConfig};

use crate::commands::{CmdResult, Failure};
use crate::BenchArgs;

fn counts_match(t: &GreedyTrace) -> bool {
    t.steps
        .iter()
        .filter(|s| s.candidates_evaluated > 0)
        .all(|s| s.candidates_evaluated == binomial(s.remaining_edges, s.batch))
}

pub fn run(a: &BenchArgs) -> CmdResult {
    let mut out = String::new();
    let mut ok = true;

    // Fixed reference point: the first 2-greedy step on 20 edges sees C(20, 2).
    let g = gen_random(&RandomSpec {
        simple: true,
        ..RandomSpec::new(10, 20, a.seed)
    })
    .map_err(anyhow::Error::from)?;
    let s = sigma_greedy(&g, &SolverConfig::new(a.k.max(2), 2)?)?;
    let first = &s.trace.as_ref().expect("greedy records a trace").steps[0];
    let check = first.remaining_edges == g.edge_count()
        && first.candidates_evaluated == binomial(g.edge_count(), 2);
    ok &= check;
    writeln!(
        out,
        "CHECK m {} sigma 2 step 1 candidates {} {}",
        g.edge_count(),
        first.candidates_evaluated,
        if check { "ok" } else { "MISMATCH" }
    )
    .unwrap();

    writeln!(out, "m n sigma reduced_m steps candidates counts ms").unwrap();
    for &m in &a.sizes {
        let n = (m / 2).max(2);
        let g = gen_random(&RandomSpec {
            min_degree: 3,
            ..RandomSpec::new(n, m, a.seed.wrapping_add(m as u64))
        })
        .map_err(anyhow::Error::from)?;
        for &sigma in &a.sigmas {
            let start = Instant::now();
            let s = solve_pipeline(&g, a.k, Algorithm::Greedy { sigma })?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let t = s.trace.expect("greedy records a trace");
            let matched = counts_match(&t);
            ok &= matched;
            let total: u64 = t.steps.iter().map(|s| s.candidates_evaluated).sum();
            let reduced_m = t.steps.first().map_or(0, |s| s.remaining_edges);
            writeln!(
                out,
                "{} {} {sigma} {reduced_m} {} {total} {} {ms:.3}",
                g.edge_count(),
                n,
                t.steps.len(),
                if matched { "ok" } else { "MISMATCH" }
            )
            .unwrap();
        }
    }
    print!("{out}");
    if ok {
        Ok(())
    } else {
        Err(Failure::CheckFailed(
            "candidate counts differ from binomials".into(),
        ))
    }
}
