//! The four algebras and the right-hand side of the ladder commutator.
//!
//! Every variant shares `[H, E±] = ±E±`; they differ only in what
//! `[E+, E-]` evaluates to on a weight vector. Two of the printed relations
//! admit more than one reading, which is what [`RhsConvention`] selects.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numbers::{ipow, pq_number, q_number, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeformationVariant {
    /// Undeformed `sl(2)`: `[E+, E-] = 2H`.
    Classical,
    /// `U_q`: `[E+, E-] = [2H]_q`.
    OneParamQ,
    /// `U^(1)_pq`: `[E+, E-] = r^{J-H} [2H]_pq`.
    TwoParamV1,
    /// `U^(2)_pq`: `[E+, E-] = [H]_pq` as printed, `[2H]_pq` as realized.
    TwoParamV2,
}

impl DeformationVariant {
    pub const ALL: [DeformationVariant; 4] = [
        DeformationVariant::Classical,
        DeformationVariant::OneParamQ,
        DeformationVariant::TwoParamV1,
        DeformationVariant::TwoParamV2,
    ];

    /// Whether every highest-weight module with half-integral `j` closes at
    /// depth `2j` (generic parameters).
    pub fn is_finite(self) -> bool {
        !matches!(self, DeformationVariant::TwoParamV2)
    }

    pub fn name(self) -> &'static str {
        match self {
            DeformationVariant::Classical => "classical",
            DeformationVariant::OneParamQ => "q",
            DeformationVariant::TwoParamV1 => "v1",
            DeformationVariant::TwoParamV2 => "v2",
        }
    }
}

impl fmt::Display for DeformationVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DeformationVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "classical" | "sl2" => Ok(DeformationVariant::Classical),
            "q" | "uq" | "one_param_q" | "one-param-q" => Ok(DeformationVariant::OneParamQ),
            "v1" | "pq1" | "two_param_v1" | "two-param-v1" => Ok(DeformationVariant::TwoParamV1),
            "v2" | "pq2" | "two_param_v2" | "two-param-v2" => Ok(DeformationVariant::TwoParamV2),
            other => Err(Error::InvalidArgument(format!("unknown variant `{other}`"))),
        }
    }
}

/// Orientation of the `(·/·)^{J-H}` prefactor in the `U^(1)_pq` relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentOrientation {
    POverQ,
    QOverP,
}

/// Argument of the `pq`-bracket in the `U^(2)_pq` relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketArgument {
    H,
    TwoH,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RhsConvention {
    pub v1_exponent_orientation: ExponentOrientation,
    pub v2_bracket_argument: BracketArgument,
}

impl RhsConvention {
    /// The relations exactly as printed: `(p/q)^{J-H}` and `[H]_pq`.
    pub const LITERAL: RhsConvention = RhsConvention {
        v1_exponent_orientation: ExponentOrientation::POverQ,
        v2_bracket_argument: BracketArgument::H,
    };

    /// The reading satisfied by the published matrix elements.
    pub const CONSISTENT: RhsConvention = RhsConvention {
        v1_exponent_orientation: ExponentOrientation::QOverP,
        v2_bracket_argument: BracketArgument::TwoH,
    };
}

impl Default for RhsConvention {
    fn default() -> Self {
        RhsConvention::CONSISTENT
    }
}

impl FromStr for ExponentOrientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p/q" | "p_over_q" | "p-over-q" => Ok(ExponentOrientation::POverQ),
            "q/p" | "q_over_p" | "q-over-p" => Ok(ExponentOrientation::QOverP),
            other => Err(Error::InvalidArgument(format!("unknown orientation `{other}`"))),
        }
    }
}

impl FromStr for BracketArgument {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h" => Ok(BracketArgument::H),
            "2h" | "two_h" | "twoh" | "two-h" => Ok(BracketArgument::TwoH),
            other => Err(Error::InvalidArgument(format!("unknown bracket argument `{other}`"))),
        }
    }
}

/// A nonnegative half-integral highest weight, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HighestWeight(u32);

impl HighestWeight {
    pub fn from_twice(two_j: u32) -> Self {
        HighestWeight(two_j)
    }

    pub fn two_j(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// `m = j - n`.
    pub fn weight_at_depth(self, depth: usize) -> Weight {
        Weight::from_twice(i64::from(self.0) - 2 * depth as i64)
    }

    /// Depth `n = j - m`, or an error when `m` is not reachable from `j`
    /// by lowering.
    pub fn depth_of(self, m: Weight) -> Result<usize> {
        let diff = i64::from(self.0) - m.twice();
        if diff < 0 || diff % 2 != 0 {
            return Err(Error::InvalidWeight(format!(
                "m = {m} is not of the form j - n with j = {self}, n >= 0"
            )));
        }
        Ok((diff / 2) as usize)
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HighestWeight {
    type Err = Error;

    /// Accepts `"3/2"`, `"1.5"` and `"2"`; anything that is not a
    /// nonnegative multiple of one half is rejected.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidWeight(format!("`{s}` is not a nonnegative half-integer"));
        let twice = if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            let den: i64 = den.trim().parse().map_err(|_| bad())?;
            if den <= 0 || (2 * num) % den != 0 {
                return Err(bad());
            }
            2 * num / den
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            let t = 2.0 * x;
            if !t.is_finite() || t.fract() != 0.0 || t > f64::from(u32::MAX) {
                return Err(bad());
            }
            t as i64
        };
        u32::try_from(twice).map(HighestWeight).map_err(|_| bad())
    }
}

/// An `H`-eigenvalue `m`, stored as `2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(i64);

impl Weight {
    pub fn from_twice(twice: i64) -> Self {
        Weight(twice)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Raise,
    Lower,
}

/// `[H, E±] = ±E±`: a ladder operator moves the weight by exactly one.
pub fn weight_rule(m: Weight, direction: Ladder) -> Weight {
    match direction {
        Ladder::Raise => Weight(m.0 + 2),
        Ladder::Lower => Weight(m.0 - 2),
    }
}

/// Eigenvalue of the right-hand side of `[E+, E-]` on `|j, m>`.
///
/// `J` acts as the scalar `j`, so the `U^(1)_pq` prefactor is
/// `r^{j-m}` with `r` chosen by `conv`.
pub fn commutator_rhs(
    variant: DeformationVariant,
    conv: RhsConvention,
    j: HighestWeight,
    m: Weight,
    params: &Params,
) -> Result<Complex64> {
    let depth = j.depth_of(m)?;
    let two_m = m.twice() as f64;
    match variant {
        DeformationVariant::Classical => Ok(Complex64::new(two_m, 0.0)),
        DeformationVariant::OneParamQ => q_number(two_m, params.q),
        DeformationVariant::TwoParamV1 => {
            let bracket = pq_number(two_m, params.p, params.q)?;
            let ratio = match conv.v1_exponent_orientation {
                ExponentOrientation::POverQ => params.p / params.q,
                ExponentOrientation::QOverP => params.q / params.p,
            };
            Ok(ipow(ratio, depth as i64) * bracket)
        }
        DeformationVariant::TwoParamV2 => {
            let arg = match conv.v2_bracket_argument {
                BracketArgument::H => m.value(),
                BracketArgument::TwoH => two_m,
            };
            pq_number(arg, params.p, params.q)
        }
    }
}
