//! Deformed numbers: the one-parameter bracket `[X]_q` and the
//! two-parameter bracket `[X]_{pq}`.
//!
//! Both are evaluated in double precision on complex arguments. The
//! reduction points `q = 1` and `p q = 1` use their closed-form limits;
//! parameters that sit within [`GUARD_BAND`] of a singular locus without
//! landing on it are rejected as [`Error::IllConditioned`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Denominators smaller than this (but nonzero) are refused.
pub const GUARD_BAND: f64 = 1e-8;

/// Deformation parameters. `p` is ignored by the classical and
/// one-parameter algebras.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(with = "crate::io::complex")]
    pub p: Complex64,
    #[serde(with = "crate::io::complex")]
    pub q: Complex64,
}

impl Params {
    pub fn new(p: Complex64, q: Complex64) -> Self {
        Params { p, q }
    }

    pub fn real(p: f64, q: f64) -> Self {
        Params::new(Complex64::new(p, 0.0), Complex64::new(q, 0.0))
    }

    /// `p = q`, the one-parameter specialization.
    pub fn one_param(q: Complex64) -> Self {
        Params::new(q, q)
    }

    /// `p = q = 1`, where every deformation collapses onto `sl(2)`.
    pub fn classical() -> Self {
        Params::real(1.0, 1.0)
    }

    pub fn is_real(&self) -> bool {
        self.p.im == 0.0 && self.q.im == 0.0
    }

    /// True when `q - 1/p` vanishes exactly.
    pub fn on_singular_locus(&self) -> bool {
        self.p != Complex64::new(0.0, 0.0) && self.q - self.p.inv() == Complex64::new(0.0, 0.0)
    }
}

pub(crate) fn ensure_finite(z: Complex64, what: &'static str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

fn is_zero(z: Complex64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

/// `base^exponent`. Integer exponents go through repeated multiplication,
/// everything else through the principal branch `exp(exponent * Log base)`.
pub fn cpow(base: Complex64, exponent: Complex64) -> Complex64 {
    if exponent.im == 0.0 && exponent.re.fract() == 0.0 && exponent.re.abs() <= i32::MAX as f64 {
        base.powi(exponent.re as i32)
    } else {
        base.powc(exponent)
    }
}

/// Integer power of a complex base.
pub fn ipow(base: Complex64, exponent: i64) -> Complex64 {
    cpow(base, Complex64::new(exponent as f64, 0.0))
}

/// `[X]_q = (q^X - q^{-X}) / (q - q^{-1})`.
///
/// Returns `X` at `q = 1`. `q = 0` and `q = -1` are degenerate.
pub fn q_bracket(x: Complex64, q: Complex64) -> Result<Complex64> {
    ensure_finite(x, "bracket argument")?;
    ensure_finite(q, "parameter q")?;
    if is_zero(q) {
        return Err(Error::DegenerateParameter("q = 0".into()));
    }
    if q == Complex64::new(-1.0, 0.0) {
        return Err(Error::DegenerateParameter("q = -1".into()));
    }
    if q == Complex64::new(1.0, 0.0) {
        return Ok(x);
    }
    let den = q - q.inv();
    if den.norm() < GUARD_BAND {
        return Err(Error::IllConditioned(format!(
            "|q - 1/q| = {:e} at q = {q}",
            den.norm()
        )));
    }
    let num = cpow(q, x) - cpow(q, -x);
    ensure_finite(num / den, "q-bracket value")
}

/// `[X]_{pq} = (q^X - p^{-X}) / (q - p^{-1})`.
///
/// At `p = q` this is exactly [`q_bracket`]; on the locus `p q = 1` the
/// limit `X q^{X-1}` is returned.
pub fn pq_bracket(x: Complex64, p: Complex64, q: Complex64) -> Result<Complex64> {
    ensure_finite(x, "bracket argument")?;
    ensure_finite(p, "parameter p")?;
    ensure_finite(q, "parameter q")?;
    if is_zero(p) {
        return Err(Error::DegenerateParameter("p = 0".into()));
    }
    if is_zero(q) {
        return Err(Error::DegenerateParameter("q = 0".into()));
    }
    if p == q {
        return q_bracket(x, q);
    }
    let den = q - p.inv();
    if is_zero(den) {
        let one = Complex64::new(1.0, 0.0);
        return ensure_finite(x * cpow(q, x - one), "pq-bracket limit");
    }
    if den.norm() < GUARD_BAND {
        return Err(Error::IllConditioned(format!(
            "|q - 1/p| = {:e} at p = {p}, q = {q}",
            den.norm()
        )));
    }
    let num = cpow(q, x) - cpow(p, -x);
    ensure_finite(num / den, "pq-bracket value")
}

/// Real-argument convenience wrapper around [`q_bracket`].
pub fn q_number(x: f64, q: Complex64) -> Result<Complex64> {
    q_bracket(Complex64::new(x, 0.0), q)
}

/// Real-argument convenience wrapper around [`pq_bracket`].
pub fn pq_number(x: f64, p: Complex64, q: Complex64) -> Result<Complex64> {
    pq_bracket(Complex64::new(x, 0.0), p, q)
}
