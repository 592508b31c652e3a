//! Closed-form thresholds for line arrangements through the origin of `𝔸²`.
//!
//! A [`MultiplicityProfile`] is the slope-free data `a₁,…,a_ℓ` of
//! `D = Σ aᵢ Dᵢ`; `d = Σ aᵢ`. A [`WeightedArrangement`] carries rational
//! weights `qᵢ` instead, optionally with explicit slopes so that it can be
//! handed to the Frobenius oracle.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::coeffsets::{largest_below, min_positive, CoeffSetSpec};
use crate::error::{Error, Result};
use crate::frobenius::Slope;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct MultiplicityProfile {
    mults: Vec<u64>,
}

impl MultiplicityProfile {
    pub fn new(mults: Vec<u64>) -> Result<Self> {
        if mults.is_empty() {
            return Err(Error::InvalidProfile("no lines".into()));
        }
        if mults.contains(&0) {
            return Err(Error::InvalidProfile("multiplicities must be positive".into()));
        }
        if mults.iter().try_fold(0u64, |acc, &m| acc.checked_add(m)).is_none() {
            return Err(Error::InvalidProfile("degree overflows u64".into()));
        }
        Ok(MultiplicityProfile { mults })
    }

    pub fn mults(&self) -> &[u64] {
        &self.mults
    }

    /// `ℓ`, the number of distinct lines.
    pub fn lines(&self) -> usize {
        self.mults.len()
    }

    /// `d = Σ aᵢ`.
    pub fn degree(&self) -> u64 {
        self.mults.iter().sum()
    }

    pub fn max_mult(&self) -> u64 {
        *self.mults.iter().max().expect("profile is nonempty")
    }

    /// Some line carries at least half the degree (`2aᵢ ≥ d`).
    pub fn is_degenerate(&self) -> bool {
        2 * self.max_mult() >= self.degree()
    }

    /// Every multiplicity multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Result<Self> {
        let mults = self
            .mults
            .iter()
            .map(|m| m.checked_mul(k))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidProfile("scaled multiplicity overflows".into()))?;
        MultiplicityProfile::new(mults)
    }
}

impl TryFrom<Vec<u64>> for MultiplicityProfile {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        MultiplicityProfile::new(v)
    }
}

impl From<MultiplicityProfile> for Vec<u64> {
    fn from(p: MultiplicityProfile) -> Self {
        p.mults
    }
}

/// `B = Σ qᵢ Dᵢ` with `0 < qᵢ ≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedArrangement {
    weights: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slopes: Option<Vec<Slope>>,
}

impl WeightedArrangement {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no lines".into()));
        }
        if let Some(w) = weights
            .iter()
            .find(|w| !w.is_positive() || **w > Rational::one())
        {
            return Err(Error::InvalidWeights(format!("weight {w} is not in (0,1]")));
        }
        Ok(WeightedArrangement {
            weights,
            slopes: None,
        })
    }

    /// Attaches one slope per weight. Distinctness modulo `p` is checked when
    /// the oracle builds a [`LineArrangement`](crate::frobenius::LineArrangement).
    pub fn with_slopes(mut self, slopes: Vec<Slope>) -> Result<Self> {
        if slopes.len() != self.weights.len() {
            return Err(Error::InvalidWeights(format!(
                "{} slopes for {} weights",
                slopes.len(),
                self.weights.len()
            )));
        }
        self.slopes = Some(slopes);
        Ok(self)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn slopes(&self) -> Option<&[Slope]> {
        self.slopes.as_deref()
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }
}

/// Where a `Λ` came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "values")]
pub enum LambdaSpec {
    Finite(Vec<Rational>),
    Hyperstandard(CoeffSetSpec),
}

impl LambdaSpec {
    fn describe(&self) -> String {
        match self {
            LambdaSpec::Finite(v) => format!(
                "finite {{{}}}",
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            ),
            LambdaSpec::Hyperstandard(s) => format!(
                "D({{{}}})",
                s.elements()
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct T0Report {
    pub t0: Rational,
    pub witness_d: u64,
    pub witness_lambda: Rational,
    pub lambda_source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum T0Outcome {
    Attained(T0Report),
    /// No `λ ∈ Λ` lies below any `2/d`; every characteristic is admissible.
    Vacuous { lambda_source: String },
}

impl T0Outcome {
    pub fn report(&self) -> Option<&T0Report> {
        match self {
            T0Outcome::Attained(r) => Some(r),
            T0Outcome::Vacuous { .. } => None,
        }
    }
}

/// `min(2/d, 1/max aᵢ)`.
pub fn lct_line_arrangement(profile: &MultiplicityProfile) -> Rational {
    let two_over_d = Rational::from_integer(2u64) / Rational::from_integer(profile.degree());
    let inv_max = Rational::from_integer(profile.max_mult()).recip();
    two_over_d.min(inv_max)
}

/// `1/aᵢ` for the largest `aᵢ` with `2aᵢ ≥ d`, which is then the exact fpt.
pub fn fpt_degenerate(profile: &MultiplicityProfile) -> Option<Rational> {
    profile
        .is_degenerate()
        .then(|| Rational::from_integer(profile.max_mult()).recip())
}

/// `(2p − ℓ + 2)/(dp)`, valid when every `2aᵢ < d`.
pub fn hara_monsky_lower(profile: &MultiplicityProfile, p: u64) -> Result<Rational> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if profile.is_degenerate() {
        return Err(Error::DegenerateProfile(format!("{:?}", profile.mults())));
    }
    let ell = profile.lines() as i128;
    let p_big = p as i128;
    let num = BigInt::from(2 * p_big - ell + 2);
    let den = BigInt::from(profile.degree()) * BigInt::from(p);
    Rational::from_bigints(num, den)
}

/// The smallest gap `2/d − λ > 0` over integers `d > 2` and `λ ∈ Λ`.
///
/// Only `d ≤ 2/min Λ` can contribute. For each `d` the best `λ` is the
/// largest element below `2/d`; ties across `d` keep the smallest `d`.
pub fn t0(spec: &LambdaSpec) -> Result<T0Outcome> {
    let source = spec.describe();
    let min_lambda = match spec {
        LambdaSpec::Finite(v) => {
            if v.is_empty() {
                return Err(Error::InvalidArgument("Λ is empty".into()));
            }
            if let Some(bad) = v.iter().find(|x| !x.is_positive() || **x > Rational::one()) {
                return Err(Error::InvalidArgument(format!("λ = {bad} is not in (0,1]")));
            }
            v.iter().min().cloned().expect("nonempty")
        }
        LambdaSpec::Hyperstandard(s) => min_positive(s),
    };
    let two = Rational::from_integer(2u64);
    let d_max = (&two / &min_lambda)
        .floor()
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("min Λ too small".into()))?;

    let mut best: Option<T0Report> = None;
    for d in 3..=d_max {
        let cap = &two / Rational::from_integer(d);
        let lambda = match spec {
            LambdaSpec::Finite(v) => v.iter().filter(|x| **x < cap).max().cloned(),
            LambdaSpec::Hyperstandard(s) => {
                largest_below(s, &cap, &Rational::zero())?.filter(|x| x.is_positive())
            }
        };
        let Some(lambda) = lambda else { continue };
        let gap = &cap - &lambda;
        if best.as_ref().is_none_or(|b| gap < b.t0) {
            best = Some(T0Report {
                t0: gap,
                witness_d: d,
                witness_lambda: lambda,
                lambda_source: source.clone(),
            });
        }
    }
    Ok(match best {
        Some(r) => T0Outcome::Attained(r),
        None => T0Outcome::Vacuous {
            lambda_source: source,
        },
    })
}

/// Kawamata log terminal at the origin: all `qᵢ < 1` and `Σ qᵢ < 2`.
pub fn klt_weighted(w: &WeightedArrangement) -> bool {
    let one = Rational::one();
    w.weights.iter().all(|q| *q < one) && w.total() < Rational::from_integer(2u64)
}

/// `(𝔸², λD)` is klt iff `λ < lct(D)`.
pub fn klt_scaled(profile: &MultiplicityProfile, lambda: &Rational) -> bool {
    *lambda < lct_line_arrangement(profile)
}
