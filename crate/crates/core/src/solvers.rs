//! Monitor placement: the batch greedy family, exhaustive optimum, the
//! spanning-tree complement placement, and the reduce/solve/lift pipeline.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::combinatorics::{binomial, for_each_combination};
use crate::graph::{extras, spanning_forest, BridgeFinder, EdgeId, EdgeMask, EdgeSet, Graph};
use crate::reduce::{preprocess, ReduceError};
use crate::weight::Weight;

/// Default cap on subset evaluations for batch sizes of three or more.
pub const DEFAULT_CANDIDATE_BUDGET: u64 = 50_000_000;
/// Largest number of subsets [`exact`] will enumerate.
pub const EXACT_SUBSET_LIMIT: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("candidate budget exceeded: step needs {needed} evaluations, budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("instance too large for exhaustive search: {subsets} subsets exceeds {limit}")]
    TooLarge { subsets: u64, limit: u64 },
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

/// How ties between equal-gain candidate sets are resolved.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Lexicographically smallest sorted edge-id tuple.
    #[default]
    LexSmallest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub k: usize,
    pub sigma: usize,
    pub tie_break: TieBreak,
    /// Only enforced when `sigma >= 3`.
    pub candidate_budget: u64,
}

impl SolverConfig {
    pub fn new(k: usize, sigma: usize) -> Result<Self, SolverError> {
        if k == 0 {
            return Err(SolverError::InvalidConfig("k must be at least 1".into()));
        }
        if sigma == 0 {
            return Err(SolverError::InvalidConfig(
                "sigma must be at least 1".into(),
            ));
        }
        Ok(SolverConfig {
            k,
            sigma,
            tie_break: TieBreak::LexSmallest,
            candidate_budget: DEFAULT_CANDIDATE_BUDGET,
        })
    }
}

/// One greedy step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    /// Monitors placed in this step.
    pub monitors_placed: EdgeSet,
    /// Monitors plus the bridges they expose; removed from the working graph.
    pub collected: EdgeSet,
    pub step_gain: Weight,
    /// Edges left in the working graph before the step.
    pub remaining_edges: usize,
    /// Batch size used for the step.
    pub batch: usize,
    /// Number of candidate sets evaluated.
    pub candidates_evaluated: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GreedyTrace {
    pub steps: Vec<StepRecord>,
    /// The run ended before its scheduled number of steps.
    pub truncated: bool,
}

impl GreedyTrace {
    pub fn total_gain(&self) -> Weight {
        self.steps.iter().map(|s| s.step_gain).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub monitors: EdgeSet,
    /// Bridges of `G - monitors` (excluding [`Solution::zero_flow`]).
    pub determined_extras: EdgeSet,
    pub gain: Weight,
    pub trace: Option<GreedyTrace>,
    /// Bridges of the input graph, known to carry zero flow. Only the pipeline
    /// fills this; these edges never count toward `gain`.
    pub zero_flow: EdgeSet,
}

impl Solution {
    fn from_monitors(g: &Graph, monitors: EdgeSet, trace: Option<GreedyTrace>) -> Self {
        let determined_extras = extras(g, &monitors);
        let gain = monitors
            .weight(g)
            .checked_add(determined_extras.weight(g))
            .expect("bounded by total weight");
        Solution {
            monitors,
            determined_extras,
            gain,
            trace,
            zero_flow: EdgeSet::new(),
        }
    }

    fn everything(g: &Graph, trace: Option<GreedyTrace>) -> Self {
        Solution {
            monitors: g.all_edges(),
            determined_extras: EdgeSet::new(),
            gain: g.total_weight(),
            trace,
            zero_flow: EdgeSet::new(),
        }
    }
}

/// Scores candidate sets against a working graph with a reusable finder.
struct Evaluator<'g> {
    g: &'g Graph,
    finder: BridgeFinder,
    buf: Vec<EdgeId>,
}

impl<'g> Evaluator<'g> {
    fn new(g: &'g Graph) -> Self {
        Evaluator {
            g,
            finder: BridgeFinder::new(g),
            buf: Vec::new(),
        }
    }

    /// `w(P ∪ bridges(G - removed - P))`; leaves the bridges in `self.buf`.
    fn score(&mut self, removed: &mut EdgeMask, candidate: &[EdgeId]) -> Weight {
        let mut w = Weight::ZERO;
        for &e in candidate {
            removed.remove(e);
            w = w
                .checked_add(self.g.edge(e).weight)
                .expect("bounded by total weight");
        }
        let extra = self.finder.bridge_weight(self.g, removed, &mut self.buf);
        for &e in candidate {
            removed.restore(e);
        }
        w.checked_add(extra).expect("bounded by total weight")
    }
}

/// Repeatedly places a batch of up to `sigma` monitors maximizing the
/// immediate gain, then deletes the collected edges from the working graph.
///
/// Runs `ceil(k / sigma)` steps; the last one uses `k mod sigma` monitors
/// when `sigma` does not divide `k`. If `k >= m` every edge is a monitor.
pub fn sigma_greedy(g: &Graph, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    let (k, sigma) = (cfg.k, cfg.sigma);
    if k == 0 || sigma == 0 {
        return Err(SolverError::InvalidConfig(
            "k and sigma must be positive".into(),
        ));
    }
    let m = g.edge_count();
    if k >= m {
        let all = g.all_edges();
        let trace = GreedyTrace {
            steps: vec![StepRecord {
                monitors_placed: all.clone(),
                collected: all,
                step_gain: g.total_weight(),
                remaining_edges: m,
                batch: m,
                candidates_evaluated: 0,
            }],
            truncated: true,
        };
        return Ok(Solution::everything(g, Some(trace)));
    }

    let mut removed = EdgeMask::none(m);
    let mut monitors = EdgeSet::new();
    let mut trace = GreedyTrace::default();
    let mut eval = Evaluator::new(g);
    let mut spent: u64 = 0;
    let steps = k.div_ceil(sigma);

    for t in 1..=steps {
        let remaining: Vec<EdgeId> = removed.present().collect();
        if remaining.is_empty() {
            trace.truncated = true;
            break;
        }
        let batch = if t == k / sigma + 1 { k % sigma } else { sigma };

        if remaining.len() <= batch {
            let taken: EdgeSet = remaining.iter().copied().collect();
            let step_gain = taken.weight(g);
            monitors.extend(taken.iter());
            trace.steps.push(StepRecord {
                monitors_placed: taken.clone(),
                collected: taken,
                step_gain,
                remaining_edges: remaining.len(),
                batch,
                candidates_evaluated: 0,
            });
            trace.truncated = true;
            break;
        }

        let candidates = binomial(remaining.len(), batch);
        if sigma >= 3 && spent.saturating_add(candidates) > cfg.candidate_budget {
            return Err(SolverError::BudgetExceeded {
                needed: candidates,
                budget: cfg.candidate_budget.saturating_sub(spent),
            });
        }

        let mut best: Option<(Weight, Vec<EdgeId>, Vec<EdgeId>)> = None;
        let mut chosen = Vec::with_capacity(batch);
        let mut evaluated = 0u64;
        for_each_combination(remaining.len(), batch, |idx| {
            chosen.clear();
            chosen.extend(idx.iter().map(|&i| remaining[i]));
            let w = eval.score(&mut removed, &chosen);
            evaluated += 1;
            // Strict improvement keeps the lexicographically first maximum.
            if best.as_ref().is_none_or(|(bw, _, _)| w > *bw) {
                best = Some((w, chosen.clone(), eval.buf.clone()));
            }
            true
        });
        spent = spent.saturating_add(evaluated);

        let (step_gain, placed, exposed) = best.expect("at least one candidate");
        let placed: EdgeSet = placed.into_iter().collect();
        let mut collected = placed.clone();
        collected.extend(exposed);
        for e in &collected {
            removed.remove(e);
        }
        monitors.extend(placed.iter());
        trace.steps.push(StepRecord {
            monitors_placed: placed,
            collected,
            step_gain,
            remaining_edges: remaining.len(),
            batch,
            candidates_evaluated: evaluated,
        });
    }

    Ok(Solution::from_monitors(g, monitors, Some(trace)))
}

pub fn one_greedy(g: &Graph, k: usize) -> Result<Solution, SolverError> {
    sigma_greedy(g, &SolverConfig::new(k, 1)?)
}

pub fn two_greedy(g: &Graph, k: usize) -> Result<Solution, SolverError> {
    sigma_greedy(g, &SolverConfig::new(k, 2)?)
}

/// Maximum-gain monitor set of size `min(k, m)` by exhaustive enumeration,
/// ties broken toward the lexicographically smallest id tuple.
///
/// Only exact-size subsets are enumerated: gain never decreases when a
/// monitor is added.
pub fn exact(g: &Graph, k: usize) -> Result<Solution, SolverError> {
    exact_with_limit(g, k, EXACT_SUBSET_LIMIT)
}

pub fn exact_with_limit(g: &Graph, k: usize, limit: u64) -> Result<Solution, SolverError> {
    if k == 0 {
        return Err(SolverError::InvalidConfig("k must be at least 1".into()));
    }
    let m = g.edge_count();
    if k >= m {
        return Ok(Solution::everything(g, None));
    }
    let subsets = binomial(m, k);
    if subsets > limit {
        return Err(SolverError::TooLarge { subsets, limit });
    }
    let mut removed = EdgeMask::none(m);
    let mut eval = Evaluator::new(g);
    let mut best: Option<(Weight, Vec<EdgeId>)> = None;
    let mut chosen = Vec::with_capacity(k);
    for_each_combination(m, k, |idx| {
        chosen.clear();
        chosen.extend(idx.iter().map(|&i| EdgeId(i)));
        let w = eval.score(&mut removed, &chosen);
        if best.as_ref().is_none_or(|(bw, _)| w > *bw) {
            best = Some((w, chosen.clone()));
        }
        true
    });
    let (_, monitors) = best.expect("k < m gives at least one subset");
    Ok(Solution::from_monitors(
        g,
        monitors.into_iter().collect(),
        None,
    ))
}

/// Monitors on the complement of a spanning forest determine every edge.
pub fn full_determination(g: &Graph) -> EdgeSet {
    g.all_edges().difference(&spanning_forest(g))
}

/// The solver run inside [`solve_pipeline`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Greedy { sigma: usize },
    Exact,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Greedy { sigma: 1 } => f.write_str("greedy1"),
            Algorithm::Greedy { sigma: 2 } => f.write_str("greedy2"),
            Algorithm::Greedy { sigma } => write!(f, "greedy:{sigma}"),
            Algorithm::Exact => f.write_str("exact"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SolverError::InvalidConfig(format!("unknown algorithm `{s}`"));
        match s {
            "greedy1" => Ok(Algorithm::Greedy { sigma: 1 }),
            "greedy2" => Ok(Algorithm::Greedy { sigma: 2 }),
            "exact" => Ok(Algorithm::Exact),
            _ => {
                let sigma: usize = s
                    .strip_prefix("greedy:")
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?;
                if sigma == 0 {
                    return Err(bad());
                }
                Ok(Algorithm::Greedy { sigma })
            }
        }
    }
}

pub fn run_algorithm(g: &Graph, k: usize, algo: Algorithm) -> Result<Solution, SolverError> {
    match algo {
        Algorithm::Greedy { sigma } => sigma_greedy(g, &SolverConfig::new(k, sigma)?),
        Algorithm::Exact => exact(g, k),
    }
}

/// Preprocesses `g`, solves the reduced instance and lifts the result back.
///
/// Gains are measured on `g` with its bridges set aside: those are reported
/// in [`Solution::zero_flow`]. With `k >= m` every edge is a monitor.
pub fn solve_pipeline(g: &Graph, k: usize, algo: Algorithm) -> Result<Solution, SolverError> {
    if k >= g.edge_count() {
        return run_algorithm(g, k, algo);
    }
    let (reduced, map) = preprocess(g)?;
    let inner = run_algorithm(&reduced, k, algo)?;
    let monitors = map.lift_monitors(&inner.monitors)?;

    let zero_flow = map.stripped_bridges.clone();
    let determined_extras = extras(g, &monitors).difference(&zero_flow);
    let gain = monitors
        .weight(g)
        .checked_add(determined_extras.weight(g))
        .expect("bounded by total weight");

    let trace = match inner.trace {
        Some(t) => {
            let mut steps = Vec::with_capacity(t.steps.len());
            for s in t.steps {
                steps.push(StepRecord {
                    monitors_placed: map.lift_monitors(&s.monitors_placed)?,
                    collected: map.lift_groups(&s.collected)?,
                    ..s
                });
            }
            Some(GreedyTrace {
                steps,
                truncated: t.truncated,
            })
        }
        None => None,
    };

    Ok(Solution {
        monitors,
        determined_extras,
        gain,
        trace,
        zero_flow,
    })
}
