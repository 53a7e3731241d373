//! Bound sweeps over generated models and random representation pairs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    check_bound_a, check_bound_b, check_bound_c, check_swan_bridge, BVariant, CVariant, CheckResult, Theorem,
};
use crate::error::{Error, Result};
use crate::generator::{derive_seed, gen_model_with_stats, gen_rep, GenParams};
use crate::model::{Mode, ModelInstance};
use crate::rep::WDRep;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    /// Requested families; `B` also runs `B_indec`, `C` also runs `C_irr`, and so on.
    pub theorems: Vec<Theorem>,
    pub models: usize,
    pub pairs_per_model: usize,
    /// Model `k` is generated with seed `seed + k`.
    pub seed: u64,
    pub gen: GenParams,
    pub max_terms: usize,
    pub max_r: u32,
}

impl SweepConfig {
    pub fn new(theorems: Vec<Theorem>, models: usize, pairs_per_model: usize, seed: u64) -> Self {
        SweepConfig {
            theorems,
            models,
            pairs_per_model,
            seed,
            gen: GenParams::default(),
            max_terms: 3,
            max_r: 4,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.models == 0 || self.pairs_per_model == 0 {
            return Err(Error::InvalidParams("models and pairs must be >= 1".into()));
        }
        if self.theorems.is_empty() {
            return Err(Error::InvalidParams("no theorems selected".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub theorem: String,
    pub samples: usize,
    pub violations: usize,
    pub equalities: usize,
    pub precondition_failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub results: Vec<CheckResult>,
    pub summary: Vec<SummaryRow>,
    /// Generator attempts summed over all models.
    pub generator_rounds: usize,
}

impl SweepReport {
    pub fn violations(&self) -> usize {
        self.summary.iter().map(|r| r.violations).sum()
    }

    pub fn row(&self, th: Theorem) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.theorem == th.label())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("theorem,samples,violations,equalities,precondition_failures\n");
        for r in &self.summary {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                r.theorem, r.samples, r.violations, r.equalities, r.precondition_failures
            );
        }
        s
    }

    pub fn results_json(&self) -> String {
        serde_json::to_string_pretty(&self.results).expect("results serialize")
    }
}

/// Leading indecomposable, and its `r = 1` version.
fn lead(x: &WDRep) -> (WDRep, WDRep) {
    let (t, _) = x.terms().next().expect("nonzero rep");
    (WDRep::single(t.r, t.cls.clone()), WDRep::single(1, t.cls.clone()))
}

/// Every check selected by `theorems` on one pair.
pub fn check_pair(x: &WDRep, y: &WDRep, m: &ModelInstance, theorems: &[Theorem]) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let (xi, xr) = lead(x);
    let (yi, yr) = lead(y);
    for &th in theorems {
        match th {
            Theorem::A | Theorem::AS => {
                let mode = if th == Theorem::A { Mode::Eta } else { Mode::Sigma };
                out.push(check_bound_a(x, y, m, mode)?);
                out.push(check_bound_a(y, x, m, mode)?);
            }
            Theorem::B | Theorem::BIndec => {
                out.push(check_bound_b(x, y, m, Mode::Eta, BVariant::Sum)?);
                out.push(check_bound_b(&xi, &yi, m, Mode::Eta, BVariant::IndecOrIrr)?);
            }
            Theorem::BS | Theorem::BSIrr => {
                out.push(check_bound_b(x, y, m, Mode::Sigma, BVariant::Sum)?);
                out.push(check_bound_b(&xr, &yr, m, Mode::Sigma, BVariant::IndecOrIrr)?);
            }
            Theorem::C | Theorem::CIrr => {
                out.push(check_bound_c(x, y, m, Mode::Eta, CVariant::General)?);
                out.push(check_bound_c(&xr, &yr, m, Mode::Eta, CVariant::Irreducible)?);
            }
            Theorem::CS | Theorem::CSIrr => {
                out.push(check_bound_c(x, y, m, Mode::Sigma, CVariant::General)?);
                out.push(check_bound_c(&xr, &yr, m, Mode::Sigma, CVariant::Irreducible)?);
            }
            Theorem::SwanBridge => out.push(check_swan_bridge(x, y, m)?),
            Theorem::MaxPlus | Theorem::SelfSlope => {}
        }
    }
    Ok(out)
}

/// Runs the sweep; results are ordered by (model index, pair index) whatever
/// the scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.check()?;
    let mut theorems = cfg.theorems.clone();
    theorems.sort();
    theorems.dedup();
    let per_model: Vec<Result<(Vec<CheckResult>, usize)>> = (0..cfg.models)
        .into_par_iter()
        .map(|k| {
            let seed = cfg.seed.wrapping_add(k as u64);
            let (m, stats) = gen_model_with_stats(&cfg.gen.with_seed(seed))?;
            let mut rows = Vec::new();
            for p in 0..cfg.pairs_per_model as u64 {
                let x = gen_rep(&m, cfg.max_terms.max(1), cfg.max_r.max(1), derive_seed(seed, 2 * p));
                let y = gen_rep(&m, cfg.max_terms.max(1), cfg.max_r.max(1), derive_seed(seed, 2 * p + 1));
                rows.extend(check_pair(&x, &y, &m, &theorems)?);
            }
            Ok((rows, stats.rounds))
        })
        .collect();
    let mut results = Vec::new();
    let mut generator_rounds = 0;
    for r in per_model {
        let (rows, rounds) = r?;
        results.extend(rows);
        generator_rounds += rounds;
    }
    Ok(SweepReport {
        summary: summarize(&results),
        results,
        generator_rounds,
    })
}

pub fn summarize(results: &[CheckResult]) -> Vec<SummaryRow> {
    let mut by: BTreeMap<Theorem, SummaryRow> = BTreeMap::new();
    for r in results {
        let row = by.entry(r.theorem).or_insert_with(|| SummaryRow {
            theorem: r.theorem.label().to_string(),
            ..Default::default()
        });
        if !r.precondition_met {
            row.precondition_failures += 1;
            continue;
        }
        row.samples += 1;
        if !r.holds {
            row.violations += 1;
        }
        if r.equality {
            row.equalities += 1;
        }
    }
    by.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_is_clean_and_ordered() {
        let cfg = SweepConfig::new(vec![Theorem::A, Theorem::C, Theorem::SwanBridge], 3, 5, 11);
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a.results, b.results);
        assert_eq!(a.violations(), 0);
        assert!(a.row(Theorem::CIrr).unwrap().samples == 15);
        assert!(a.to_csv().starts_with("theorem,samples"));
    }

    #[test]
    fn empty_selection_is_rejected() {
        assert!(run_sweep(&SweepConfig::new(vec![], 1, 1, 0)).is_err());
        assert!(run_sweep(&SweepConfig::new(vec![Theorem::A], 0, 1, 0)).is_err());
    }
}
