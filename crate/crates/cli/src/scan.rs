//! Parameter-grid scans over real `(p, q)`.

use std::fmt;
use std::str::FromStr;

use qdeform::{
    build_rep, f_eval, hermiticity_report, integer_roots, DeformationVariant, HighestWeight,
    Params, RhsConvention,
};
use rayon::prelude::*;
use serde::Serialize;

/// `lo,hi,steps`, sampled inclusively at `steps` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64
        }
    }
}

impl FromStr for AxisRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [lo, hi, steps] = parts[..] else {
            return Err(format!("expected `lo,hi,steps`, got `{s}`"));
        };
        let lo: f64 = lo.parse().map_err(|e| format!("lo: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("hi: {e}"))?;
        let steps: usize = steps.parse().map_err(|e| format!("steps: {e}"))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("need finite lo < hi, got {lo} and {hi}"));
        }
        if steps < 2 {
            return Err("steps must be at least 2".into());
        }
        Ok(AxisRange { lo, hi, steps })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ScanQuantity {
    /// Number of positive integer roots of f up to n_max.
    RootCount,
    /// Smallest |f(n)| over n = 1..n_max.
    MinAbsFAtIntegers,
    /// Number of depths with a negative lowering radicand.
    RadicandViolations,
}

impl fmt::Display for ScanQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanQuantity::RootCount => "root_count",
            ScanQuantity::MinAbsFAtIntegers => "min_abs_f_at_integers",
            ScanQuantity::RadicandViolations => "radicand_violations",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanGrid {
    pub p_range: AxisRange,
    pub q_range: AxisRange,
    pub quantity: ScanQuantity,
}

/// Fixed inputs of every cell.
#[derive(Debug, Clone, Copy)]
pub struct ScanSetup {
    pub variant: DeformationVariant,
    pub j: HighestWeight,
    pub n_max: usize,
    pub truncation: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub p: f64,
    pub q: f64,
    /// `None` where the cell hit a degenerate or ill-conditioned point.
    pub value: Option<f64>,
}

fn cell(grid: &ScanGrid, setup: &ScanSetup, p: f64, q: f64) -> qdeform::Result<f64> {
    let params = Params::real(p, q);
    match grid.quantity {
        ScanQuantity::RootCount => {
            Ok(integer_roots(setup.j, &params, setup.n_max, setup.tol)?.roots.len() as f64)
        }
        ScanQuantity::MinAbsFAtIntegers => {
            let mut best = f64::INFINITY;
            for n in 1..=setup.n_max {
                best = best.min(f_eval(n as f64, setup.j, params.p, params.q)?.norm());
            }
            Ok(best)
        }
        ScanQuantity::RadicandViolations => {
            let rep = build_rep(setup.variant, setup.j, &params, setup.truncation, RhsConvention::default())?;
            Ok(hermiticity_report(&rep)?.len() as f64)
        }
    }
}

/// Evaluate every grid cell, p-major. Rows come back in grid order
/// whatever the thread count.
pub fn run_scan(grid: &ScanGrid, setup: &ScanSetup, threads: usize) -> Result<Vec<ScanRow>, String> {
    let (np, nq) = (grid.p_range.steps, grid.q_range.steps);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| e.to_string())?;
    Ok(pool.install(|| {
        (0..np * nq)
            .into_par_iter()
            .map(|index| {
                let p = grid.p_range.point(index / nq);
                let q = grid.q_range.point(index % nq);
                ScanRow {
                    p,
                    q,
                    value: cell(grid, setup, p, q).ok(),
                }
            })
            .collect()
    }))
}
