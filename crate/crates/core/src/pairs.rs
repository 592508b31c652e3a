//! ℙ¹ pairs, the cone correspondence, and strong F-regularity certificates.
//!
//! A pair `(ℙ¹, Σ qᵢ Pᵢ)` is log Fano iff it is klt and `Σ qᵢ < 2`; its cone
//! over `𝒪(1)` is the line arrangement with the same weights, which is
//! strongly F-regular exactly when the pair is globally F-regular.
//!
//! [`certify_sfr`] tries, in order: the klt test, boundary reduction,
//! the degenerate-multiplicity formula, the Hara–Monsky comparison, and
//! finally (only with explicit slopes) the Frobenius oracle. The first rule
//! that succeeds decides, and the certificate carries the exact inequality
//! so it can be rechecked.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::coeffsets::{dset_below, CoeffSetSpec};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::frobenius::{nu_with, LineArrangement, NuRecord, OracleConfig};
use crate::rational::{lcm_of_denominators, Rational};
use crate::thresholds::{klt_weighted, WeightedArrangement};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct P1Pair {
    coeffs: Vec<Rational>,
}

impl P1Pair {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidWeights("no points".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_positive()) {
            return Err(Error::InvalidWeights(format!("coefficient {c} is not positive")));
        }
        Ok(P1Pair { coeffs })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct P1Class {
    pub log_fano: bool,
    pub klt: bool,
}

pub fn classify_p1(pair: &P1Pair) -> P1Class {
    let one = Rational::one();
    let klt = pair.coeffs.iter().all(|c| *c < one);
    let total: Rational = pair.coeffs.iter().sum();
    P1Class {
        klt,
        log_fano: klt && total < Rational::from_integer(2u64),
    }
}

/// `(𝔸¹, (Σ cᵢ)·O)` is sharply F-pure iff the total coefficient is `≤ 1`.
pub fn sharply_fpure_a1(coeffs: &[Rational]) -> bool {
    coeffs.iter().sum::<Rational>() <= Rational::one()
}

/// Points of ℙ¹ become lines through the origin with the same weights.
///
/// Weights above 1 cannot be carried by a [`WeightedArrangement`]; such a
/// pair is not klt and is rejected here.
pub fn cone_transfer(pair: &P1Pair) -> Result<WeightedArrangement> {
    WeightedArrangement::new(pair.coeffs.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    StronglyFRegular,
    NotKlt,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    BoundaryReduction,
    DegenerateLemma,
    HaraMonskyRule,
    OracleEscalation,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "<=")]
    LessEq,
    #[serde(rename = ">=")]
    GreaterEq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Less => "<",
            Relation::LessEq => "<=",
            Relation::GreaterEq => ">=",
        })
    }
}

/// `lhs relation rhs`, true by construction when attached to a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub lhs: Rational,
    pub relation: Relation,
    pub rhs: Rational,
    pub meaning: String,
}

impl Inequality {
    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::Less => self.lhs < self.rhs,
            Relation::LessEq => self.lhs <= self.rhs,
            Relation::GreaterEq => self.lhs >= self.rhs,
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} ({})", self.lhs, self.relation, self.rhs, self.meaning)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub reason: Reason,
    pub p: u64,
    /// `λ = 1/c` with `c` the lcm of the weight denominators.
    pub lambda: Rational,
    /// `G = c·B`, integral multiplicities.
    pub integral_mults: Vec<u64>,
    pub details: Option<Inequality>,
    pub oracle: Option<NuRecord>,
    pub note: Option<String>,
}

impl Certificate {
    /// Re-verifies the decisive inequality with exact arithmetic.
    pub fn recheck(&self) -> bool {
        match self.verdict {
            Verdict::StronglyFRegular => self.details.as_ref().is_some_and(Inequality::holds),
            _ => true,
        }
    }
}

fn ineq(lhs: Rational, relation: Relation, rhs: Rational, meaning: &str) -> Inequality {
    Inequality {
        lhs,
        relation,
        rhs,
        meaning: meaning.to_string(),
    }
}

/// Decides strong F-regularity of `(𝔸², B)` at the origin in characteristic `p`.
///
/// Rule (d) runs only when slopes are attached and `e_max > 0`. Oracle
/// budget errors downgrade to `inconclusive` with a note; they never flip a
/// verdict.
pub fn certify_sfr_with(
    w: &WeightedArrangement,
    p: u64,
    e_max: u32,
    cfg: &OracleConfig,
) -> Result<Certificate> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let one = Rational::one();
    let weights = w.weights();
    let c = lcm_of_denominators(weights);
    let lambda = Rational::from_integer(c.clone()).recip();
    let c_rat = Rational::from_integer(c.clone());
    let integral_mults: Vec<u64> = weights
        .iter()
        .map(|q| {
            (q * &c_rat)
                .floor()
                .to_u64()
                .ok_or_else(|| Error::InvalidWeights("integral multiplicity overflows".into()))
        })
        .collect::<Result<_>>()?;

    let mut cert = Certificate {
        verdict: Verdict::Inconclusive,
        reason: Reason::None,
        p,
        lambda: lambda.clone(),
        integral_mults: integral_mults.clone(),
        details: None,
        oracle: None,
        note: None,
    };

    // (0)
    if !klt_weighted(w) {
        cert.verdict = Verdict::NotKlt;
        cert.note = Some("some weight is 1 or the total weight is at least 2".into());
        return Ok(cert);
    }

    // (a) dropping the largest weight leaves the smallest remainder.
    let total = w.total();
    let (j, largest) = weights
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("nonempty");
    let others: Vec<Rational> = weights
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != j)
        .map(|(_, q)| q.clone())
        .collect();
    if sharply_fpure_a1(&others) {
        cert.verdict = Verdict::StronglyFRegular;
        cert.reason = Reason::BoundaryReduction;
        cert.details = Some(ineq(
            &total - largest,
            Relation::LessEq,
            one.clone(),
            &format!("sum of the weights other than line {j}"),
        ));
        return Ok(cert);
    }

    let d_g: u64 = integral_mults.iter().sum();
    let b_max = *integral_mults.iter().max().expect("nonempty");

    // (b)
    if 2 * b_max >= d_g {
        let inv = Rational::from_integer(b_max).recip();
        if lambda < inv {
            cert.verdict = Verdict::StronglyFRegular;
            cert.reason = Reason::DegenerateLemma;
            cert.details = Some(ineq(
                lambda,
                Relation::Less,
                inv,
                "lambda below fpt(G) = 1/b_max",
            ));
            return Ok(cert);
        }
    } else {
        // (c)
        let ell = weights.len() as i128;
        let hm = Rational::from_bigints(
            BigInt::from(2 * p as i128 - ell + 2),
            BigInt::from(d_g) * BigInt::from(p),
        )?;
        if lambda < hm {
            cert.verdict = Verdict::StronglyFRegular;
            cert.reason = Reason::HaraMonskyRule;
            cert.details = Some(ineq(
                lambda,
                Relation::Less,
                hm,
                "lambda below (2p - l + 2)/(d_G p) <= fpt(G)",
            ));
            return Ok(cert);
        }
        cert.details = Some(ineq(
            lambda.clone(),
            Relation::GreaterEq,
            hm,
            "Hara-Monsky comparison fails",
        ));
    }

    // (d)
    if let (Some(slopes), true) = (w.slopes(), e_max > 0) {
        let arr = match LineArrangement::new(p, slopes.to_vec(), integral_mults.clone()) {
            Ok(a) => a,
            Err(e) => {
                cert.note = Some(format!("oracle skipped: {e}"));
                return Ok(cert);
            }
        };
        for e in 1..=e_max {
            match nu_with(&arr, e, cfg) {
                Ok(rec) => {
                    let lower = Rational::from_integer(rec.nu) / Rational::from_integer(rec.q);
                    if lower > lambda {
                        cert.verdict = Verdict::StronglyFRegular;
                        cert.reason = Reason::OracleEscalation;
                        cert.details = Some(ineq(
                            lambda,
                            Relation::Less,
                            lower,
                            "lambda below nu/q < fpt(G)",
                        ));
                        cert.oracle = Some(rec);
                        return Ok(cert);
                    }
                    cert.oracle = Some(rec);
                }
                Err(err @ Error::BudgetExceeded { .. }) => {
                    cert.note = Some(format!("oracle stopped: {err}"));
                    return Ok(cert);
                }
                Err(err) => return Err(err),
            }
        }
        cert.note = Some(format!("no oracle witness up to e = {e_max}"));
    }
    Ok(cert)
}

pub fn certify_sfr(w: &WeightedArrangement, p: u64, e_max: u32) -> Result<Certificate> {
    certify_sfr_with(w, p, e_max, &OracleConfig::from_env())
}

/// Certificates for many arrangements at one prime, in input order.
pub fn certify_batch(
    items: &[WeightedArrangement],
    p: u64,
    e_max: u32,
    cfg: &OracleConfig,
    exec: Exec,
) -> Vec<Result<Certificate>> {
    exec.map(items, |w| certify_sfr_with(w, p, e_max, cfg))
}

/// Every klt weighted arrangement (as a sorted multiset of weights) with at
/// most `max_lines` lines and weights in `D(I) ∩ (0, cutoff)`.
pub fn klt_arrangements(
    set: &CoeffSetSpec,
    cutoff: &Rational,
    max_lines: usize,
) -> Result<Vec<WeightedArrangement>> {
    let slice = dset_below(set, cutoff)?.positive().to_vec();
    let two = Rational::from_integer(2u64);
    let mut out = Vec::new();
    let mut stack: Vec<Rational> = Vec::new();

    fn walk(
        slice: &[Rational],
        from: usize,
        sum: &Rational,
        max_lines: usize,
        two: &Rational,
        stack: &mut Vec<Rational>,
        out: &mut Vec<WeightedArrangement>,
    ) {
        if !stack.is_empty() {
            out.push(WeightedArrangement::new(stack.clone()).expect("weights in (0,1)"));
        }
        if stack.len() == max_lines {
            return;
        }
        for idx in from..slice.len() {
            let next = sum + &slice[idx];
            if next >= *two {
                break;
            }
            stack.push(slice[idx].clone());
            walk(slice, idx, &next, max_lines, two, stack, out);
            stack.pop();
        }
    }

    walk(&slice, 0, &Rational::zero(), max_lines, &two, &mut stack, &mut out);
    Ok(out)
}
