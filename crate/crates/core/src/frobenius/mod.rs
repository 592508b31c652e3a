//! Brute-force Frobenius-power oracle over prime fields.
//!
//! For `f = ∏ (x − λᵢ y)^{aᵢ} · y^{a_∞}` and `q = pᵉ`,
//! `ν_f(q) = max{N : f^N ∉ (x^q, y^q)}`. Then `ν/q < fpt(f) ≤ (ν+1)/q`.
//!
//! `f` is homogeneous of degree `d`, so the coefficient of `x^u y^{Nd−u}` in
//! `f^N` is the coefficient of `t^u` in `g^N`, where `g(t) = f(t, 1)`. Hence
//! `f^N ∉ (x^q, y^q)` iff `g^N mod t^q` has a nonzero coefficient with
//! `Nd − q < u < q`. No bivariate arithmetic is needed, and the `y^{a_∞}`
//! factor only lowers `deg g` below `d`.

pub mod poly;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::rational::Rational;
use crate::thresholds::{hara_monsky_lower, MultiplicityProfile};

pub use poly::MulStrategy;

/// Environment variable overriding [`OracleBudget::max_work`].
pub const BUDGET_ENV: &str = "FPTLAB_ORACLE_BUDGET";

/// A point of `ℙ¹(𝔽_p)`: `Finite(λ)` is the line `x − λy`, `Infinity` is `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slope {
    Finite(u64),
    Infinity,
}

impl Slope {
    /// Image under the fractional-linear map `[a b; c d]` over `𝔽_p`.
    /// The matrix must be invertible modulo `p`.
    pub fn moebius(self, m: [u64; 4], p: u64) -> Slope {
        let [a, b, c, d] = m.map(|v| v % p);
        let (num, den) = match self {
            Slope::Finite(l) => ((a * l + b) % p, (c * l + d) % p),
            Slope::Infinity => (a, c),
        };
        if den == 0 {
            Slope::Infinity
        } else {
            Slope::Finite(num * inv_mod(den, p) % p)
        }
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(l) => write!(f, "{l}"),
            Slope::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Slope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") {
            return Ok(Slope::Infinity);
        }
        t.parse::<u64>()
            .map(Slope::Finite)
            .map_err(|_| Error::InvalidArrangement(format!("bad slope {s:?}")))
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Deserialize)]
struct RawArrangement {
    p: u64,
    slopes: Vec<Slope>,
    mults: Vec<u64>,
}

/// Distinct lines through the origin of `𝔸²_{𝔽_p}` with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawArrangement")]
pub struct LineArrangement {
    p: u64,
    slopes: Vec<Slope>,
    mults: Vec<u64>,
}

impl TryFrom<RawArrangement> for LineArrangement {
    type Error = Error;
    fn try_from(raw: RawArrangement) -> Result<Self> {
        LineArrangement::new(raw.p, raw.slopes, raw.mults)
    }
}

impl LineArrangement {
    pub fn new(p: u64, slopes: Vec<Slope>, mults: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 32 {
            return Err(Error::InvalidArrangement(format!("p = {p} exceeds 2^32")));
        }
        if slopes.len() != mults.len() {
            return Err(Error::InvalidArrangement(format!(
                "{} slopes but {} multiplicities",
                slopes.len(),
                mults.len()
            )));
        }
        if let Some(Slope::Finite(l)) = slopes.iter().find(|s| matches!(s, Slope::Finite(l) if *l >= p)) {
            return Err(Error::InvalidArrangement(format!(
                "slope {l} is not reduced modulo {p}"
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = slopes.iter().find(|s| !seen.insert(**s)) {
            return Err(Error::InvalidArrangement(format!("repeated slope {dup}")));
        }
        MultiplicityProfile::new(mults.clone())?;
        Ok(LineArrangement { p, slopes, mults })
    }

    /// All `p + 1` lines of `𝔽_p`, each with multiplicity one.
    pub fn all_rational_lines(p: u64) -> Result<Self> {
        let slopes = (0..p)
            .map(Slope::Finite)
            .chain(std::iter::once(Slope::Infinity))
            .collect();
        LineArrangement::new(p, slopes, vec![1; (p + 1) as usize])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn slopes(&self) -> &[Slope] {
        &self.slopes
    }

    pub fn mults(&self) -> &[u64] {
        &self.mults
    }

    pub fn profile(&self) -> MultiplicityProfile {
        MultiplicityProfile::new(self.mults.clone()).expect("validated on construction")
    }

    pub fn degree(&self) -> u64 {
        self.mults.iter().sum()
    }

    /// `f^k`: same lines, multiplicities times `k`.
    pub fn power(&self, k: u64) -> Result<Self> {
        let mults = self.profile().scaled(k)?.mults().to_vec();
        Ok(LineArrangement {
            mults,
            ..self.clone()
        })
    }

    /// Same multiplicities, slopes moved by an invertible fractional-linear map.
    pub fn moebius(&self, m: [u64; 4]) -> Result<Self> {
        let [a, b, c, d] = m.map(|v| v % self.p);
        if (a * d % self.p + self.p - b * c % self.p).is_multiple_of(self.p) {
            return Err(Error::InvalidArgument("singular coordinate change".into()));
        }
        let slopes = self.slopes.iter().map(|s| s.moebius(m, self.p)).collect();
        LineArrangement::new(self.p, slopes, self.mults.clone())
    }

    /// `g(t) = f(t, 1) = ∏_{finite λ} (t − λ)^{a}`.
    pub fn dehomogenized(&self, strategy: MulStrategy) -> Vec<u64> {
        let roots: Vec<(u64, u64)> = self
            .slopes
            .iter()
            .zip(&self.mults)
            .filter_map(|(s, &a)| match s {
                Slope::Finite(l) => Some((*l, a)),
                Slope::Infinity => None,
            })
            .collect();
        poly::from_roots(&roots, self.p, strategy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub max_e: u32,
    /// Cap on the `p · d · q` work estimate.
    pub max_work: u128,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_e: 5,
            max_work: 100_000_000,
        }
    }
}

impl OracleBudget {
    /// Default budget, with `max_work` taken from the environment if set.
    pub fn from_env() -> Self {
        let mut b = OracleBudget::default();
        if let Some(w) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u128>().ok())
        {
            b.max_work = w;
        }
        b
    }

    fn check(&self, arr: &LineArrangement, e: u32) -> Result<u64> {
        let q = arr.p.checked_pow(e);
        let work = q.map_or(u128::MAX, |q| {
            (arr.p as u128)
                .saturating_mul(arr.degree() as u128)
                .saturating_mul(q as u128)
        });
        match q {
            Some(q) if e <= self.max_e && work <= self.max_work => Ok(q),
            _ => Err(Error::BudgetExceeded {
                q: q.unwrap_or(u64::MAX),
                e,
                max_e: self.max_e,
                work,
                limit: self.max_work,
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OracleConfig {
    pub budget: OracleBudget,
    pub strategy: MulStrategy,
}

impl OracleConfig {
    pub fn from_env() -> Self {
        OracleConfig {
            budget: OracleBudget::from_env(),
            strategy: MulStrategy::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuRecord {
    pub e: u32,
    pub q: u64,
    pub nu: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdBracket {
    pub lower: Rational,
    pub upper: Rational,
    pub record: NuRecord,
}

impl ThresholdBracket {
    pub fn from_record(record: NuRecord) -> Self {
        let q = Rational::from_integer(record.q);
        ThresholdBracket {
            lower: Rational::from_integer(record.nu) / &q,
            upper: Rational::from_integer(record.nu + 1) / &q,
            record,
        }
    }

    /// `lower < x ≤ upper`, the interval known to hold the fpt.
    pub fn encloses(&self, x: &Rational) -> bool {
        self.lower < *x && *x <= self.upper
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "e")]
pub enum FpureVerdict {
    /// Sharply F-pure, witnessed at this level.
    Yes(u32),
    /// No witness up to this level. Not a proof of failure.
    NoUpTo(u32),
}

/// `f^N ∉ (x^q, y^q)`, tested on the dehomogenized power.
fn outside_with(g: &[u64], arr: &LineArrangement, n: u64, q: u64, strategy: MulStrategy) -> bool {
    let d = arr.degree() as u128;
    let q_len = q as usize;
    let h = poly::pow_trunc(g, n, q_len, arr.p, strategy);
    let lo = (n as u128 * d + 1).saturating_sub(q as u128);
    let start = usize::try_from(lo).unwrap_or(usize::MAX);
    start < h.len() && h[start..].iter().any(|&c| c != 0)
}

/// Whether `f^n ∈ (x^q, y^q)`.
pub fn in_frobenius_power(arr: &LineArrangement, n: u64, q: u64, strategy: MulStrategy) -> bool {
    let g = arr.dehomogenized(strategy);
    !outside_with(&g, arr, n, q, strategy)
}

pub fn nu_with(arr: &LineArrangement, e: u32, cfg: &OracleConfig) -> Result<NuRecord> {
    if e == 0 {
        return Err(Error::InvalidArgument("e must be positive".into()));
    }
    let q = cfg.budget.check(arr, e)?;
    let g = arr.dehomogenized(cfg.strategy);
    let d = arr.degree();
    // Beyond this every monomial of f^N has an exponent ≥ q.
    let mut hi = 2 * (q - 1) / d;
    let mut lo = 0u64;
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if outside_with(&g, arr, mid, q, cfg.strategy) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(NuRecord { e, q, nu: lo })
}

/// `ν_f(pᵉ)` under the environment-derived budget.
pub fn nu(arr: &LineArrangement, e: u32) -> Result<NuRecord> {
    nu_with(arr, e, &OracleConfig::from_env())
}

pub fn fpt_bracket_with(arr: &LineArrangement, e: u32, cfg: &OracleConfig) -> Result<ThresholdBracket> {
    nu_with(arr, e, cfg).map(ThresholdBracket::from_record)
}

pub fn fpt_bracket(arr: &LineArrangement, e: u32) -> Result<ThresholdBracket> {
    fpt_bracket_with(arr, e, &OracleConfig::from_env())
}

/// Smallest `e ≤ e_max` with `⌈λ(pᵉ − 1)⌉ ≤ ν(pᵉ)`.
pub fn sharply_fpure_at_with(
    arr: &LineArrangement,
    lambda: &Rational,
    e_max: u32,
    cfg: &OracleConfig,
) -> Result<FpureVerdict> {
    if !lambda.is_positive() || *lambda > Rational::one() {
        return Err(Error::InvalidArgument(format!("λ = {lambda} is not in (0,1]")));
    }
    if e_max == 0 {
        return Err(Error::InvalidArgument("e_max must be positive".into()));
    }
    for e in 1..=e_max {
        let rec = nu_with(arr, e, cfg)?;
        let need = (lambda * Rational::from_integer(rec.q - 1)).ceil();
        if need <= BigInt::from(rec.nu) {
            return Ok(FpureVerdict::Yes(e));
        }
    }
    Ok(FpureVerdict::NoUpTo(e_max))
}

pub fn sharply_fpure_at(arr: &LineArrangement, lambda: &Rational, e_max: u32) -> Result<FpureVerdict> {
    sharply_fpure_at_with(arr, lambda, e_max, &OracleConfig::from_env())
}

/// The bracket's upper end dominates the non-degenerate lower bound
/// `(2p − ℓ + 2)/(dp)`.
pub fn verify_hm_bound_with(arr: &LineArrangement, e: u32, cfg: &OracleConfig) -> Result<bool> {
    let bound = hara_monsky_lower(&arr.profile(), arr.p)?;
    let bracket = fpt_bracket_with(arr, e, cfg)?;
    Ok(bracket.upper >= bound)
}

pub fn verify_hm_bound(arr: &LineArrangement, e: u32) -> Result<bool> {
    verify_hm_bound_with(arr, e, &OracleConfig::from_env())
}

/// Independent `(arrangement, e)` queries, results in input order.
pub fn nu_batch(items: &[(LineArrangement, u32)], cfg: &OracleConfig, exec: Exec) -> Vec<Result<NuRecord>> {
    exec.map(items, |(arr, e)| nu_with(arr, *e, cfg))
}
