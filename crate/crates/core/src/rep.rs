//! Truncated matrices of `H`, `E+` and `E-` on a highest-weight module.
//!
//! The basis is indexed by depth `n = j - m`, so basis vector `n` is the
//! normalized image of `(E-)^n |j, j>`. `E+` lives on the superdiagonal and
//! `E-` on the subdiagonal. The coupling from depth `N` to depth `N + 1` is
//! dropped at the truncation boundary.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{DeformationVariant, HighestWeight, RhsConvention, Weight};
use crate::error::{Error, Result};
use crate::numbers::{ipow, pq_number, q_bracket, q_number, Params, GUARD_BAND};

pub const DEFAULT_TRUNCATION: usize = 64;

/// Lowering coefficients at or below this magnitude are treated as zero by
/// [`monomial_norm`].
pub const ZERO_COEFF_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A basis state `|j, j - n>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightState {
    pub j: HighestWeight,
    pub depth: usize,
}

impl WeightState {
    pub fn weight(&self) -> Weight {
        self.j.weight_at_depth(self.depth)
    }
}

/// Radicand of the `E+` coefficient taking `|j, m>` to `|j, m + 1>`.
pub fn raise_radicand(
    variant: DeformationVariant,
    j: HighestWeight,
    m: Weight,
    params: &Params,
) -> Result<Complex64> {
    let n = j.depth_of(m)? as i64;
    let two_j = i64::from(j.two_j());
    if n == 0 || (variant.is_finite() && n > two_j) {
        return Ok(ZERO);
    }
    // (j - m) = n, (j + m + 1) = 2j - n + 1
    let (a, b) = (n, two_j - n + 1);
    match variant {
        DeformationVariant::Classical => Ok(Complex64::new((a * b) as f64, 0.0)),
        DeformationVariant::OneParamQ => {
            Ok(q_number(a as f64, params.q)? * q_number(b as f64, params.q)?)
        }
        DeformationVariant::TwoParamV1 => Ok(pq_number(a as f64, params.p, params.q)?
            * pq_number(b as f64, params.p, params.q)?),
        // q^{j+m+1} [j-m]_q - p^{-j-m-1} [j-m]_p
        DeformationVariant::TwoParamV2 => v2_radicand(b, a, params),
    }
}

/// Radicand of the `E-` coefficient taking `|j, m>` to `|j, m - 1>`.
pub fn lower_radicand(
    variant: DeformationVariant,
    j: HighestWeight,
    m: Weight,
    params: &Params,
) -> Result<Complex64> {
    let n = j.depth_of(m)? as i64;
    let two_j = i64::from(j.two_j());
    if variant.is_finite() && n >= two_j {
        return Ok(ZERO);
    }
    // (j + m) = 2j - n, (j - m + 1) = n + 1
    let (a, b) = (two_j - n, n + 1);
    match variant {
        DeformationVariant::Classical => Ok(Complex64::new((a * b) as f64, 0.0)),
        DeformationVariant::OneParamQ => {
            Ok(q_number(a as f64, params.q)? * q_number(b as f64, params.q)?)
        }
        DeformationVariant::TwoParamV1 => Ok(pq_number(a as f64, params.p, params.q)?
            * pq_number(b as f64, params.p, params.q)?),
        // q^{j+m} [j-m+1]_q - p^{-j-m} [j-m+1]_p
        DeformationVariant::TwoParamV2 => v2_radicand(a, b, params),
    }
}

/// `(q^a [k]_q - p^{-a} [k]_p) / (q - p^{-1})` for integer `a` and `k >= 0`.
///
/// On `p q = 1` numerator and denominator both vanish; the value there is
/// the derivative of `s^a [k]_s` at `s = q`.
fn v2_radicand(a: i64, k: i64, params: &Params) -> Result<Complex64> {
    let Params { p, q } = *params;
    if p == ZERO || q == ZERO {
        return Err(Error::DegenerateParameter("p and q must be nonzero".into()));
    }
    let kc = Complex64::new(k as f64, 0.0);
    let den = q - p.inv();
    if den == ZERO {
        let bracket = q_bracket(kc, q)?;
        // d/ds [k]_s = sum_{i<k} (k-1-2i) s^{k-2-2i}
        let dbracket: Complex64 = (0..k)
            .map(|i| (k - 1 - 2 * i) as f64 * ipow(q, k - 2 - 2 * i))
            .sum();
        let value = a as f64 * ipow(q, a - 1) * bracket + ipow(q, a) * dbracket;
        return crate::numbers::ensure_finite(value, "radicand limit");
    }
    if den.norm() < GUARD_BAND {
        return Err(Error::IllConditioned(format!(
            "|q - 1/p| = {:e} at p = {p}, q = {q}",
            den.norm()
        )));
    }
    let num = ipow(q, a) * q_bracket(kc, q)? - ipow(p, -a) * q_bracket(kc, p)?;
    crate::numbers::ensure_finite(num / den, "radicand")
}

/// Coefficient of `|j, m + 1>` in `E+ |j, m>` (principal square root).
pub fn raise_coeff(
    variant: DeformationVariant,
    j: HighestWeight,
    m: Weight,
    params: &Params,
) -> Result<Complex64> {
    Ok(raise_radicand(variant, j, m, params)?.sqrt())
}

/// Coefficient of `|j, m - 1>` in `E- |j, m>` (principal square root).
pub fn lower_coeff(
    variant: DeformationVariant,
    j: HighestWeight,
    m: Weight,
    params: &Params,
) -> Result<Complex64> {
    Ok(lower_radicand(variant, j, m, params)?.sqrt())
}

/// Dense truncated matrices of a highest-weight representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepMatrices {
    pub(crate) variant: DeformationVariant,
    pub(crate) params: Params,
    pub(crate) convention: RhsConvention,
    pub(crate) two_j: HighestWeight,
    pub(crate) truncation: usize,
    pub(crate) module_depth: Option<usize>,
    #[serde(with = "crate::io::matrix")]
    pub(crate) h: Array2<Complex64>,
    #[serde(with = "crate::io::matrix")]
    pub(crate) eplus: Array2<Complex64>,
    #[serde(with = "crate::io::matrix")]
    pub(crate) eminus: Array2<Complex64>,
}

impl RepMatrices {
    pub fn variant(&self) -> DeformationVariant {
        self.variant
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn convention(&self) -> RhsConvention {
        self.convention
    }

    pub fn highest_weight(&self) -> HighestWeight {
        self.two_j
    }

    /// Largest depth `N` in the basis.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn dim(&self) -> usize {
        self.truncation + 1
    }

    /// Depth at which `E-` vanishes exactly, when that happens inside the
    /// window (including the dropped boundary coupling). States below it
    /// are not reachable from the highest weight and carry no couplings.
    pub fn module_depth(&self) -> Option<usize> {
        self.module_depth
    }

    /// True when no nonzero coupling was cut by the truncation.
    pub fn is_closed(&self) -> bool {
        self.module_depth.is_some()
    }

    pub fn h(&self) -> &Array2<Complex64> {
        &self.h
    }

    pub fn eplus(&self) -> &Array2<Complex64> {
        &self.eplus
    }

    pub fn eminus(&self) -> &Array2<Complex64> {
        &self.eminus
    }

    pub fn weight(&self, depth: usize) -> Weight {
        self.two_j.weight_at_depth(depth)
    }

    /// Stored lowering coefficient at `depth` (`E-[depth + 1, depth]`).
    pub fn lowering(&self, depth: usize) -> Option<Complex64> {
        (depth < self.truncation).then(|| self.eminus[[depth + 1, depth]])
    }

    /// Stored raising coefficient at `depth` (`E+[depth - 1, depth]`).
    pub fn raising(&self, depth: usize) -> Option<Complex64> {
        (depth >= 1 && depth <= self.truncation).then(|| self.eplus[[depth - 1, depth]])
    }

    /// Restriction to depths `0..=depth`, marked closed at `depth`.
    pub(crate) fn leading_block(&self, depth: usize) -> RepMatrices {
        let s = ndarray::s![0..=depth, 0..=depth];
        RepMatrices {
            truncation: depth,
            module_depth: Some(depth),
            h: self.h.slice(s).to_owned(),
            eplus: self.eplus.slice(s).to_owned(),
            eminus: self.eminus.slice(s).to_owned(),
            ..*self
        }
    }
}

/// Build `H`, `E+`, `E-` on depths `0..=truncation`.
pub fn build_rep(
    variant: DeformationVariant,
    j: HighestWeight,
    params: &Params,
    truncation: usize,
    convention: RhsConvention,
) -> Result<RepMatrices> {
    let dim = truncation + 1;
    let mut h = Array2::<Complex64>::zeros((dim, dim));
    let mut eplus = Array2::<Complex64>::zeros((dim, dim));
    let mut eminus = Array2::<Complex64>::zeros((dim, dim));
    for n in 0..dim {
        h[[n, n]] = Complex64::new(j.weight_at_depth(n).value(), 0.0);
    }

    let mut module_depth = None;
    for n in 0..truncation {
        let lower = lower_coeff(variant, j, j.weight_at_depth(n), params)?;
        if lower == ZERO {
            module_depth = Some(n);
            break;
        }
        eminus[[n + 1, n]] = lower;
        eplus[[n, n + 1]] = raise_coeff(variant, j, j.weight_at_depth(n + 1), params)?;
    }
    if module_depth.is_none() && lower_coeff(variant, j, j.weight_at_depth(truncation), params)? == ZERO {
        module_depth = Some(truncation);
    }

    Ok(RepMatrices {
        variant,
        params: *params,
        convention,
        two_j: j,
        truncation,
        module_depth,
        h,
        eplus,
        eminus,
    })
}

/// `||(E-)^n |j, j>||` as the product of lowering coefficients along the
/// descent. Fails with [`Error::ZeroNorm`] if the path dies before depth `n`.
pub fn monomial_norm(
    variant: DeformationVariant,
    j: HighestWeight,
    depth: usize,
    params: &Params,
) -> Result<Complex64> {
    let mut norm = Complex64::new(1.0, 0.0);
    for i in 0..depth {
        let c = lower_coeff(variant, j, j.weight_at_depth(i), params)?;
        if c.norm() <= ZERO_COEFF_TOL {
            return Err(Error::ZeroNorm { depth, vanishing_at: i });
        }
        norm *= c;
    }
    Ok(norm)
}

/// `A_n` with `|j, j - n> = A_n (E-)^n |j, j>`: the reciprocal of
/// [`monomial_norm`].
pub fn normalization_coeff(
    variant: DeformationVariant,
    j: HighestWeight,
    depth: usize,
    params: &Params,
) -> Result<Complex64> {
    Ok(monomial_norm(variant, j, depth, params)?.inv())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DeformationVariant::*;
    use approx::assert_relative_eq;

    fn hw(s: &str) -> HighestWeight {
        s.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spin_half_ladder() {
        let j = hw("1/2");
        let any = Params::real(2.0, 3.0);
        for v in [Classical, TwoParamV2] {
            let up = raise_coeff(v, j, j.weight_at_depth(1), &any).unwrap();
            assert_relative_eq!(up.re, 1.0, epsilon = 1e-15);
            assert_eq!(up.im, 0.0);
        }
        assert_eq!(lower_coeff(Classical, j, j.weight_at_depth(0), &any).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn v2_raise_by_hand() {
        // j = 1, m = 0, p = 2, q = 1.5:
        // (q^2 [1]_q - p^{-2} [1]_p) / (q - 1/p) = (2.25 - 0.25) / 1 = 2
        let (p, q) = (2.0f64, 1.5f64);
        let radicand = (q * q - 1.0 / (p * p)) / (q - 1.0 / p);
        assert_relative_eq!(radicand, 2.0, epsilon = 1e-15);
        let j = hw("1");
        let up = raise_coeff(TwoParamV2, j, j.weight_at_depth(1), &Params::real(p, q)).unwrap();
        assert_relative_eq!(up.re, 2f64.sqrt(), max_relative = 1e-14);
        assert_eq!(up.im, 0.0);
    }

    #[test]
    fn v2_lower_descends_past_minus_j() {
        // [2]_q = q + 1/q = 2.5, [2]_p = 10/3, q - 1/p = 5/3.
        let (p, q) = (3.0f64, 2.0f64);
        let radicand = ((q + 1.0 / q) - (p + 1.0 / p)) / (q - 1.0 / p);
        assert_relative_eq!(radicand, -0.5, max_relative = 1e-14);
        let j = hw("1/2");
        let down = lower_coeff(TwoParamV2, j, j.weight_at_depth(1), &Params::real(p, q)).unwrap();
        assert_relative_eq!(down.re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(down.im, 0.5f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn classical_closure() {
        let j = hw("1");
        assert_eq!(lower_coeff(Classical, j, j.weight_at_depth(2), &Params::classical()).unwrap(), ZERO);
    }

    #[test]
    fn build_spin_half() {
        let rep = build_rep(Classical, hw("1/2"), &Params::classical(), 1, RhsConvention::default())
            .unwrap();
        assert_eq!(rep.h()[[0, 0]], c(0.5, 0.0));
        assert_eq!(rep.h()[[1, 1]], c(-0.5, 0.0));
        assert_eq!(rep.eplus()[[0, 1]], c(1.0, 0.0));
        assert_eq!(rep.eminus()[[1, 0]], c(1.0, 0.0));
        assert_eq!(rep.eplus()[[1, 0]], ZERO);
        assert_eq!(rep.eminus()[[0, 1]], ZERO);
        assert_eq!(rep.module_depth(), Some(1));
    }

    #[test]
    fn q_equal_one_matches_classical() {
        let j = hw("1");
        let a = build_rep(OneParamQ, j, &Params::classical(), 2, RhsConvention::default()).unwrap();
        let b = build_rep(Classical, j, &Params::classical(), 2, RhsConvention::default()).unwrap();
        assert_eq!(a.h(), b.h());
        assert_eq!(a.eplus(), b.eplus());
        assert_eq!(a.eminus(), b.eminus());
    }

    #[test]
    fn v2_build_keeps_imaginary_coupling() {
        let rep = build_rep(TwoParamV2, hw("1/2"), &Params::real(3.0, 2.0), 3, RhsConvention::default())
            .unwrap();
        let e = rep.eminus()[[2, 1]];
        assert_relative_eq!(e.im, 0.5f64.sqrt(), max_relative = 1e-14);
        assert!(rep.module_depth().is_none());
    }

    #[test]
    fn finite_variants_zero_beyond_two_j() {
        let j = hw("3/2");
        let params = Params::real(1.4, 0.8);
        for v in [Classical, OneParamQ, TwoParamV1] {
            let rep = build_rep(v, j, &params, 8, RhsConvention::default()).unwrap();
            assert_eq!(rep.module_depth(), Some(3));
            for n in 3..8 {
                assert_eq!(rep.eminus()[[n + 1, n]], ZERO);
                assert_eq!(rep.eplus()[[n, n + 1]], ZERO);
            }
            assert_ne!(rep.eminus()[[3, 2]], ZERO);
        }
    }

    #[test]
    fn monomial_norm_examples() {
        let j = hw("1");
        for v in DeformationVariant::ALL {
            assert_eq!(monomial_norm(v, j, 0, &Params::real(1.3, 1.9)).unwrap(), c(1.0, 0.0));
        }
        let n1 = monomial_norm(Classical, j, 1, &Params::classical()).unwrap();
        assert_relative_eq!(n1.re, 2f64.sqrt(), max_relative = 1e-15);
        assert!(matches!(
            monomial_norm(Classical, j, 3, &Params::classical()),
            Err(Error::ZeroNorm { depth: 3, vanishing_at: 2 })
        ));
        let a = normalization_coeff(Classical, j, 1, &Params::classical()).unwrap();
        assert_relative_eq!(a.re, 0.5f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn monomial_norm_matches_factorial_formula() {
        fn fact(n: u32) -> f64 {
            (1..=n).map(f64::from).product()
        }
        for two_j in 0..=10u32 {
            let j = HighestWeight::from_twice(two_j);
            for n in 0..=two_j {
                // product of (2j - i)(i + 1) over the descent path
                let oracle: f64 = (0..n).map(|i| f64::from((two_j - i) * (i + 1))).product::<f64>().sqrt();
                let closed = (fact(n) * fact(two_j) / fact(two_j - n)).sqrt();
                assert_relative_eq!(oracle, closed, max_relative = 1e-13);
                let got = monomial_norm(Classical, j, n as usize, &Params::classical()).unwrap();
                assert_relative_eq!(got.re, closed, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn v2_radicand_on_singular_locus() {
        // At p = q = 1 the limit is the classical (j+m)(j-m+1).
        let j = hw("3/2");
        for n in 0..6 {
            let m = j.weight_at_depth(n);
            let lim = lower_radicand(TwoParamV2, j, m, &Params::classical()).unwrap();
            let classical = ((3 - n as i64) * (n as i64 + 1)) as f64;
            assert_relative_eq!(lim.re, classical, epsilon = 1e-12);
        }
        // p q = 1 with q = 2: compare against a centered difference of s^a [k]_s.
        let params = Params::real(0.5, 2.0);
        let j = hw("1");
        let m = j.weight_at_depth(1);
        let h = |s: f64| s.powi(1) * (s.powi(2) - s.powi(-2)) / (s - 1.0 / s);
        let step = 1e-5;
        let fd = (h(2.0 + step) - h(2.0 - step)) / (2.0 * step);
        let lim = lower_radicand(TwoParamV2, j, m, &params).unwrap();
        assert_relative_eq!(lim.re, fd, max_relative = 1e-8);
    }

    #[test]
    fn header_is_preserved_by_block() {
        let rep = build_rep(TwoParamV2, hw("1"), &Params::real(1.3, 1.3), 6, RhsConvention::default())
            .unwrap();
        let block = rep.leading_block(2);
        assert_eq!(block.variant(), rep.variant());
        assert_eq!(block.params(), rep.params());
        assert_eq!(block.highest_weight(), rep.highest_weight());
        assert_eq!(block.dim(), 3);
    }
}
