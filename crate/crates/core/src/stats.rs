//! Aggregates over run records: means, variances, convergence CDFs and the
//! active-link sweep. Only successful runs are aggregated; convergence
//! statistics additionally skip runs that hit the iteration cap.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::{ScenarioConfig, Scheme};
use crate::error::{Error, Result};
use crate::experiment::{run_experiment, Experiment, RunRecord};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance; absent for a single value.
    pub variance: Option<f64>,
}

pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = (values.len() > 1).then(|| values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0));
    Some(Summary {
        count: values.len(),
        mean,
        variance,
    })
}

/// Empirical CDF of iterations-to-converge per network size, over converged runs.
pub fn convergence_cdf(records: &[RunRecord]) -> Result<BTreeMap<usize, Vec<(usize, f64)>>> {
    let mut by_n: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.converged) {
        by_n.entry(r.n).or_default().push(r.iters);
    }
    if by_n.is_empty() {
        return Err(Error::Empty("no converged runs"));
    }
    Ok(by_n
        .into_iter()
        .map(|(n, mut iters)| {
            iters.sort_unstable();
            let total = iters.len() as f64;
            let mut steps: Vec<(usize, f64)> = Vec::new();
            for (i, &k) in iters.iter().enumerate() {
                let p = (i + 1) as f64 / total;
                match steps.last_mut() {
                    Some(last) if last.0 == k => last.1 = p,
                    _ => steps.push((k, p)),
                }
            }
            (n, steps)
        })
        .collect())
}

fn grouped<F: Fn(&RunRecord) -> f64>(records: &[RunRecord], f: F) -> BTreeMap<(Scheme, usize), Summary> {
    let mut cells: BTreeMap<(Scheme, usize), Vec<f64>> = BTreeMap::new();
    for r in records {
        cells.entry((r.scheme, r.n)).or_default().push(f(r));
    }
    cells.into_iter().filter_map(|(k, v)| summarize(&v).map(|s| (k, s))).collect()
}

/// Mean and variance of realized throughput per scheme and network size.
pub fn throughput_stats(records: &[RunRecord]) -> BTreeMap<(Scheme, usize), Summary> {
    grouped(records, |r| r.throughput)
}

/// Mean iterations of converged runs per scheme and network size.
pub fn iteration_stats(records: &[RunRecord]) -> BTreeMap<(Scheme, usize), Summary> {
    let converged: Vec<RunRecord> = records.iter().filter(|r| r.converged).cloned().collect();
    grouped(&converged, |r| r.iters as f64)
}

/// Mean active links of fuzzy runs per network size, from existing records.
pub fn active_links_by_n(records: &[RunRecord]) -> BTreeMap<usize, f64> {
    grouped(records, |r| r.active_links as f64)
        .into_iter()
        .filter(|((s, _), _)| *s == Scheme::Fuzzy)
        .map(|((_, n), s)| (n, s.mean))
        .collect()
}

/// Runs the fuzzy scheme for each network size and reports mean active links.
pub fn active_links_sweep(cfg: &ScenarioConfig, n_values: &[usize]) -> Result<BTreeMap<usize, f64>> {
    if n_values.is_empty() {
        return Err(Error::Empty("network sizes"));
    }
    let mut records = Vec::new();
    for &n in n_values {
        let exp = run_experiment(&ScenarioConfig {
            n_nodes: n,
            schemes: vec![Scheme::Fuzzy],
            ..cfg.clone()
        })?;
        records.extend(exp.records);
    }
    Ok(active_links_by_n(&records))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub runs: usize,
    pub failures: usize,
    pub converged: usize,
    pub not_converged: usize,
    pub iterations: Option<Summary>,
    pub rate: Option<Summary>,
    pub throughput: Option<Summary>,
    pub active_links: Option<Summary>,
    pub qos_pass: Option<Summary>,
}

/// Per-scheme, per-size summary keyed `scheme -> N -> stats`.
pub fn summarize_experiment(exp: &Experiment) -> BTreeMap<String, BTreeMap<usize, CellSummary>> {
    let mut cells: BTreeMap<(Scheme, usize), Vec<&RunRecord>> = BTreeMap::new();
    for r in &exp.records {
        cells.entry((r.scheme, r.n)).or_default().push(r);
    }
    let mut failures: BTreeMap<(Scheme, usize), usize> = BTreeMap::new();
    for f in &exp.failures {
        *failures.entry((f.scheme, f.n)).or_default() += 1;
        cells.entry((f.scheme, f.n)).or_default();
    }
    let mut out: BTreeMap<String, BTreeMap<usize, CellSummary>> = BTreeMap::new();
    for ((scheme, n), rs) in cells {
        let col = |f: &dyn Fn(&RunRecord) -> f64| summarize(&rs.iter().map(|r| f(r)).collect::<Vec<_>>());
        let conv: Vec<f64> = rs.iter().filter(|r| r.converged).map(|r| r.iters as f64).collect();
        out.entry(scheme.to_string()).or_default().insert(
            n,
            CellSummary {
                runs: rs.len(),
                failures: failures.get(&(scheme, n)).copied().unwrap_or(0),
                converged: conv.len(),
                not_converged: rs.len() - conv.len(),
                iterations: summarize(&conv),
                rate: col(&|r| r.rate),
                throughput: col(&|r| r.throughput),
                active_links: col(&|r| r.active_links as f64),
                qos_pass: col(&|r| r.qos_pass),
            },
        );
    }
    out
}
