//! Finite-dimensional pieces of the `U^(2)_pq` highest-weight modules.
//!
//! The lowering radicand of the `U^(2)_pq` representation at depth `n` is
//! `f(n) / (q - 1/p)` with
//!
//! ```text
//! f(x) = q^{2j-x} [x+1]_q - p^{x-2j} [x+1]_p
//! ```
//!
//! so the module acquires an `(n+1)`-dimensional invariant subspace exactly
//! when `f` has a positive integer root `n`. This module evaluates `f`,
//! scans integers for roots, solves for parameter values that create a
//! root, and cuts out the invariant block.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{DeformationVariant, HighestWeight};
use crate::error::{Error, Result};
use crate::numbers::{cpow, q_bracket, Params};
use crate::rep::{lower_radicand, RepMatrices};

pub const DEFAULT_SCAN_DEPTH: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FValue {
    pub n: usize,
    #[serde(with = "crate::io::complex")]
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootScanResult {
    pub j: HighestWeight,
    pub params: Params,
    pub scanned_range: (usize, usize),
    pub roots: Vec<usize>,
    pub f_values: Vec<FValue>,
    pub subrep_dims: Vec<usize>,
    /// `q = 1/p` exactly. `f` vanishes identically there, so roots were
    /// read off the lowering radicand instead.
    pub singular_locus: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusSolution {
    pub target_n: usize,
    pub j: HighestWeight,
    pub q: f64,
    pub p: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// The two terms of `f(x)`, returned separately for scaling.
fn f_terms(x: f64, j: HighestWeight, p: Complex64, q: Complex64) -> Result<(Complex64, Complex64)> {
    if p == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateParameter("p = 0".into()));
    }
    let shift = Complex64::new(x + 1.0, 0.0);
    let exponent = Complex64::new(j.value() * 2.0 - x, 0.0);
    let first = cpow(q, exponent) * q_bracket(shift, q)?;
    let second = cpow(p, -exponent) * q_bracket(shift, p)?;
    Ok((first, second))
}

/// `f(x) = q^{2j-x} [x+1]_q - p^{x-2j} [x+1]_p`.
pub fn f_eval(x: f64, j: HighestWeight, p: Complex64, q: Complex64) -> Result<Complex64> {
    let (a, b) = f_terms(x, j, p, q)?;
    crate::numbers::ensure_finite(a - b, "f(x)")
}

/// Evaluate `f` at `n = 1..=n_max` and collect the integer roots.
///
/// A root is declared when `|f(n)| <= tol * max(|term1|, |term2|, 1)`. On
/// the locus `q = 1/p` the lowering radicand is tested instead.
pub fn integer_roots(
    j: HighestWeight,
    params: &Params,
    n_max: usize,
    tol: f64,
) -> Result<RootScanResult> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let singular_locus = params.on_singular_locus();
    let mut roots = Vec::new();
    let mut f_values = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (a, b) = f_terms(n as f64, j, params.p, params.q)?;
        let value = a - b;
        let is_root = if singular_locus {
            let radicand = lower_radicand(
                DeformationVariant::TwoParamV2,
                j,
                j.weight_at_depth(n),
                params,
            )?;
            radicand.norm() <= tol
        } else {
            value.norm() <= tol * a.norm().max(b.norm()).max(1.0)
        };
        if is_root {
            roots.push(n);
        }
        f_values.push(FValue { n, value });
    }
    let subrep_dims = roots.iter().map(|n| n + 1).collect();
    Ok(RootScanResult {
        j,
        params: *params,
        scanned_range: (1, n_max),
        roots,
        f_values,
        subrep_dims,
        singular_locus,
    })
}

/// Solve `f(target_n; j, p, q) = 0` for real `p` in `bracket`, with `q`
/// fixed, by Illinois-modified regula falsi (a bracketing secant).
pub fn locus_solve(
    target_n: usize,
    j: HighestWeight,
    q: f64,
    bracket: (f64, f64),
    tol: f64,
    max_iter: usize,
) -> Result<LocusSolution> {
    let (lo, hi) = bracket;
    if target_n == 0 {
        return Err(Error::InvalidArgument("target_n must be positive".into()));
    }
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::InvalidArgument("q must be real and positive".into()));
    }
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!("bad bracket [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }

    let x = target_n as f64;
    let qc = Complex64::new(q, 0.0);
    let g = |p: f64| f_eval(x, j, Complex64::new(p, 0.0), qc).map(|z| z.re);
    let solution = |p: f64, residual: f64, iterations| LocusSolution {
        target_n,
        j,
        q,
        p,
        residual,
        iterations,
    };

    let (mut s, mut t) = (lo, hi);
    let (mut fs, mut ft) = (g(s)?, g(t)?);
    if fs.abs() <= tol {
        return Ok(solution(s, fs.abs(), 0));
    }
    if ft.abs() <= tol {
        return Ok(solution(t, ft.abs(), 0));
    }
    if fs.signum() == ft.signum() {
        return Err(Error::NoSignChange { target_n, lo, hi });
    }

    let mut side = 0i8;
    let mut last = fs.abs().min(ft.abs());
    for iteration in 1..=max_iter {
        let r = (fs * t - ft * s) / (fs - ft);
        let fr = g(r)?;
        last = fr.abs();
        if last <= tol {
            return Ok(solution(r, last, iteration));
        }
        if fr.signum() == ft.signum() {
            t = r;
            ft = fr;
            if side == -1 {
                fs /= 2.0;
            }
            side = -1;
        } else {
            s = r;
            fs = fr;
            if side == 1 {
                ft /= 2.0;
            }
            side = 1;
        }
        if (t - s).abs() <= f64::EPSILON * s.abs().max(t.abs()) {
            break;
        }
    }
    Err(Error::MaxIterations {
        iterations: max_iter,
        residual: last,
    })
}

/// Restrict `rep` to depths `0..=root_n`.
///
/// The block is invariant because `E-` annihilates depth `root_n` (up to
/// `tol` on the squared coefficient), `E+` annihilates depth 0 and `H` is
/// diagonal.
pub fn extract_subrep(rep: &RepMatrices, root_n: usize, tol: f64) -> Result<RepMatrices> {
    if root_n >= rep.truncation() {
        return Err(Error::InvalidArgument(format!(
            "root depth {root_n} must lie below the truncation depth {}",
            rep.truncation()
        )));
    }
    if let Some(d) = rep.module_depth() {
        if root_n > d {
            return Err(Error::InvalidArgument(format!(
                "the module already closes at depth {d}"
            )));
        }
    }
    let c = rep.eminus()[[root_n + 1, root_n]];
    let radicand = c.norm_sqr();
    if radicand > tol {
        return Err(Error::NotARoot {
            depth: root_n,
            radicand,
        });
    }
    Ok(rep.leading_block(root_n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RhsConvention;
    use crate::rep::build_rep;
    use approx::assert_relative_eq;

    fn hw(s: &str) -> HighestWeight {
        s.parse().unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn f_examples() {
        for two_j in 0..6 {
            let j = HighestWeight::from_twice(two_j);
            let v = f_eval(j.value() * 2.0, j, c(1.7), c(1.7)).unwrap();
            assert_eq!(v, c(0.0));
        }
        // [3]_s = s^2 + 1 + s^-2
        let br3 = |s: f64| s * s + 1.0 + 1.0 / (s * s);
        let oracle = br3(1.5) - br3(2.0);
        assert_relative_eq!(oracle, -1.555_555_555_555_555_6, max_relative = 1e-14);
        let v = f_eval(2.0, hw("1"), c(2.0), c(1.5)).unwrap();
        assert_relative_eq!(v.re, oracle, max_relative = 1e-13);

        let (p, q) = (1.9f64, 0.7f64);
        let v = f_eval(0.0, hw("3/2"), c(p), c(q)).unwrap();
        assert_relative_eq!(v.re, q.powi(3) - p.powi(-3), max_relative = 1e-14);
    }

    #[test]
    fn scan_examples() {
        let scan = integer_roots(hw("3/2"), &Params::real(1.3, 1.3), 10, 1e-10).unwrap();
        assert_eq!(scan.roots, vec![3]);
        assert_eq!(scan.subrep_dims, vec![4]);
        assert_eq!(scan.f_values.len(), 10);
        assert_eq!(scan.scanned_range, (1, 10));

        let scan = integer_roots(hw("1"), &Params::real(2.0, 1.5), 200, 1e-10).unwrap();
        assert!(scan.roots.is_empty());
    }

    #[test]
    fn singular_locus_scan_uses_radicand() {
        // p q = 1 with p = q = 1: the radicand limit is (2j - n)(n + 1).
        let scan = integer_roots(hw("1"), &Params::classical(), 6, 1e-10).unwrap();
        assert!(scan.singular_locus);
        assert_eq!(scan.roots, vec![2]);
        assert!(scan.f_values.iter().all(|v| v.value.norm() == 0.0));
    }

    #[test]
    fn locus_examples() {
        let sol = locus_solve(2, hw("1"), 1.7, (1.2, 2.5), 1e-12, 100).unwrap();
        assert_relative_eq!(sol.p, 1.7, max_relative = 1e-10);

        let sol = locus_solve(1, hw("1/2"), 2.0, (1.9, 2.1), 1e-12, 100).unwrap();
        assert_relative_eq!(sol.p, 2.0, max_relative = 1e-10);
        assert!(sol.residual <= 1e-12);

        assert!(matches!(
            locus_solve(2, hw("1"), 1.5, (1.6, 3.0), 1e-10, 100),
            Err(Error::NoSignChange { .. })
        ));
        assert!(matches!(
            locus_solve(2, hw("1"), 1.5, (3.0, 1.6), 1e-10, 100),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            locus_solve(2, hw("1"), 1.7, (1.2, 2.5), 1e-300, 3),
            Err(Error::MaxIterations { .. })
        ));
    }

    #[test]
    fn off_diagonal_locus_creates_a_root() {
        // For j = 1 and q = 1.5, f(3) vanishes at p = 1/q (singular) and at
        // one more point in (0.8, 1); bracket the second one.
        let sol = locus_solve(3, hw("1"), 1.5, (0.8, 0.99), 1e-12, 200).unwrap();
        assert!(sol.p > 0.8 && sol.p < 0.99);
        let params = Params::real(sol.p, 1.5);
        let scan = integer_roots(hw("1"), &params, 20, 1e-9).unwrap();
        assert!(scan.roots.contains(&3), "{:?}", scan.roots);
    }

    #[test]
    fn extract_examples() {
        let j = hw("1");
        let rep = build_rep(
            DeformationVariant::TwoParamV2,
            j,
            &Params::real(1.3, 1.3),
            6,
            RhsConvention::default(),
        )
        .unwrap();
        let block = extract_subrep(&rep, 2, 1e-12).unwrap();
        let q_rep = build_rep(
            DeformationVariant::OneParamQ,
            j,
            &Params::real(1.3, 1.3),
            2,
            RhsConvention::default(),
        )
        .unwrap();
        for (a, b) in block.eminus().iter().zip(q_rep.eminus().iter()) {
            assert!((a - b).norm() <= 1e-12);
        }
        for (a, b) in block.eplus().iter().zip(q_rep.eplus().iter()) {
            assert!((a - b).norm() <= 1e-12);
        }

        let generic = build_rep(
            DeformationVariant::TwoParamV2,
            j,
            &Params::real(1.8, 1.3),
            6,
            RhsConvention::default(),
        )
        .unwrap();
        assert!(matches!(
            extract_subrep(&generic, 2, 1e-10),
            Err(Error::NotARoot { depth: 2, .. })
        ));
        assert!(extract_subrep(&generic, 6, 1e-10).is_err());

        let classical = build_rep(
            DeformationVariant::Classical,
            hw("3/2"),
            &Params::classical(),
            3,
            RhsConvention::default(),
        );
        // root_n must stay below the truncation depth
        assert!(extract_subrep(&classical.unwrap(), 3, 1e-12).is_err());
        let classical = build_rep(
            DeformationVariant::Classical,
            hw("3/2"),
            &Params::classical(),
            5,
            RhsConvention::default(),
        )
        .unwrap();
        let block = extract_subrep(&classical, 3, 1e-12).unwrap();
        assert_eq!(block.dim(), 4);
        assert!(extract_subrep(&classical, 4, 1e-12).is_err());
    }
}
