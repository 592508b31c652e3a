//! Effective constants for klt line arrangements with hyperstandard weights.
//!
//! Given `Γ = D(I)` and `ε = min(I ∪ {1/2})`, the sum set is
//!
//! ```text
//! 𝒮 = { Σ qᵢ : qᵢ ∈ Γ ∩ (0,1), Σ_{i≠j} qᵢ > 1 for every j } ∩ (0,2)
//! ```
//!
//! `Q = max 𝒮` is attained and `p₀ = ⌊((1−ε)/ε) · 1/(1 − Q/2)⌋`. Above `p₀`
//! every klt arrangement with weights in `Γ` is strongly F-regular.
//!
//! The search draws the `ℓ−1` smallest weights from a finite slice and
//! completes each prefix with every admissible element of `Γ` below
//! `2 − sum < 1`. That enumerates `𝒮` completely, so the trace is all of it
//! and entries flagged `largest_top` are the greedy completions.

use std::cmp::Ordering;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::coeffsets::{
    contains_in_closure, dset_below, largest_below, min_positive, slice_from_closure,
    plus_closure, CoeffSetSpec,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::rational::Rational;

/// Largest `k` tried by [`safe_perturbation`].
pub const PERTURBATION_K_CAP: u64 = 1_000_000;

/// One element of `𝒮`, as a sorted witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub lines: usize,
    pub witness: Vec<Rational>,
    pub sum: Rational,
    /// Whether the last weight is the largest admissible completion.
    pub largest_top: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSearch {
    #[serde(rename = "Q")]
    pub q: Rational,
    pub witness: Vec<Rational>,
    /// All of `𝒮`, sorted by `(lines, witness)`.
    pub trace: Vec<TraceEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(rename = "I")]
    pub set: CoeffSetSpec,
    pub epsilon: Rational,
    #[serde(rename = "Q")]
    pub q: Rational,
    pub witness: Vec<Rational>,
    pub p0_exact: Rational,
    pub p0: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleBound {
    pub n: u64,
    /// `(d, m_d)` for `d = 3..=2n−1`.
    pub per_degree: Vec<(u64, Rational)>,
    pub m: Rational,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub x: Rational,
    #[serde(rename = "J")]
    pub j_set: Vec<Rational>,
}

/// Checks the defining constraints of `𝒮` for a candidate multiset.
pub fn in_sum_set(set: &CoeffSetSpec, weights: &[Rational]) -> bool {
    let plus = plus_closure(set).elements;
    sum_set_member(&plus, weights)
}

fn sum_set_member(plus: &[Rational], weights: &[Rational]) -> bool {
    let one = Rational::one();
    let two = Rational::from_integer(2u64);
    if weights.is_empty() {
        return false;
    }
    let total: Rational = weights.iter().sum();
    total.is_positive()
        && total < two
        && weights.iter().all(|w| {
            w.is_positive() && *w < one && contains_in_closure(plus, w) && &total - w > one
        })
}

/// Deterministic order on candidates: larger sum first, then the
/// lexicographically smaller witness.
fn better(a: &TraceEntry, b: &TraceEntry) -> bool {
    match a.sum.cmp(&b.sum) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.witness < b.witness,
    }
}

struct Branch<'a> {
    lines: usize,
    first: usize,
    slice: &'a [Rational],
}

fn search_branch(branch: &Branch<'_>, plus: &[Rational]) -> Vec<TraceEntry> {
    let mut out = Vec::new();
    let mut prefix = vec![branch.slice[branch.first].clone()];
    let sum = branch.slice[branch.first].clone();
    extend(branch, plus, branch.first, &mut prefix, sum, &mut out);
    out
}

fn extend(
    branch: &Branch<'_>,
    plus: &[Rational],
    from: usize,
    prefix: &mut Vec<Rational>,
    sum: Rational,
    out: &mut Vec<TraceEntry>,
) {
    let two = Rational::from_integer(2u64);
    let one = Rational::one();
    let ell = branch.lines;
    // The remaining ℓ − |prefix| weights are all at least the last one drawn.
    let last = prefix.last().expect("nonempty prefix").clone();
    let rest = Rational::from_integer((ell - prefix.len()) as u64);
    if &sum + &rest * &last >= two {
        return;
    }
    if prefix.len() == ell - 1 {
        // The j = ℓ constraint forces the prefix sum above 1, so the cap
        // 2 − sum is below 1 and only finitely many tops remain.
        if sum <= one {
            return;
        }
        let cap = &two - &sum;
        let tops: Vec<Rational> = slice_from_closure(plus, &cap)
            .into_iter()
            .filter(|t| *t >= last)
            .collect();
        let Some(largest) = tops.last().cloned() else {
            return;
        };
        for top in tops {
            let mut witness = prefix.clone();
            witness.push(top.clone());
            if sum_set_member(plus, &witness) {
                out.push(TraceEntry {
                    lines: ell,
                    sum: &sum + &top,
                    largest_top: top == largest,
                    witness,
                });
            }
        }
        return;
    }
    for idx in from..branch.slice.len() {
        let v = &branch.slice[idx];
        let rest = Rational::from_integer((ell - prefix.len()) as u64);
        if &sum + &rest * v >= two {
            break;
        }
        prefix.push(v.clone());
        extend(branch, plus, idx, prefix, &sum + v, out);
        prefix.pop();
    }
}

/// `Q = max 𝒮` with a witness, searched in parallel over `(ℓ, q₁)`.
pub fn q_max_with(set: &CoeffSetSpec, exec: Exec) -> Result<QSearch> {
    let eps = min_positive(set);
    let plus = plus_closure(set).elements;
    let two = Rational::from_integer(2u64);
    let max_lines = (&two / &eps).floor().to_usize().unwrap_or(0);

    let mut slices = Vec::new();
    for ell in 3..=max_lines {
        // q_{ℓ−1} < 1 − (ℓ−2)ε/2, from (ℓ−2)ε + 2q_{ℓ−1} < 2.
        let cutoff = Rational::one()
            - Rational::from_integer((ell - 2) as u64) * &eps / &two;
        let slice = dset_below(set, &cutoff)?.positive().to_vec();
        slices.push((ell, slice));
    }
    let branches: Vec<Branch<'_>> = slices
        .iter()
        .flat_map(|(ell, slice)| {
            (0..slice.len()).map(move |first| Branch {
                lines: *ell,
                first,
                slice,
            })
        })
        .collect();

    let mut trace = exec.flat_map(&branches, |b| search_branch(b, &plus));
    trace.sort_by(|a, b| (a.lines, &a.witness).cmp(&(b.lines, &b.witness)));

    let best = trace
        .iter()
        .fold(None::<&TraceEntry>, |acc, e| match acc {
            Some(a) if !better(e, a) => Some(a),
            _ => Some(e),
        })
        .ok_or(Error::EmptySumSet)?;
    Ok(QSearch {
        q: best.sum.clone(),
        witness: best.witness.clone(),
        trace: trace.clone(),
    })
}

pub fn q_max(set: &CoeffSetSpec) -> Result<QSearch> {
    q_max_with(set, Exec::default())
}

fn assemble(set: &CoeffSetSpec, search: &QSearch) -> BoundReport {
    let eps = min_positive(set);
    let one = Rational::one();
    let two = Rational::from_integer(2u64);
    let p0_exact = ((&one - &eps) / &eps) * (&one - &search.q / &two).recip();
    let p0 = p0_exact
        .floor()
        .to_u64()
        .expect("p0 fits in u64 for desk-scale inputs");
    BoundReport {
        set: set.clone(),
        epsilon: eps,
        q: search.q.clone(),
        witness: search.witness.clone(),
        p0_exact,
        p0,
    }
}

/// `ε`, `Q` and `p₀(I)`.
pub fn p0_with(set: &CoeffSetSpec, exec: Exec) -> Result<(BoundReport, QSearch)> {
    let search = q_max_with(set, exec)?;
    Ok((assemble(set, &search), search))
}

pub fn p0(set: &CoeffSetSpec) -> Result<BoundReport> {
    p0_with(set, Exec::default()).map(|(r, _)| r)
}

/// `m = min_d min{2/d − λ > 0 : λ ∈ D({1/n})}` over `d = 3..=2n−1`, and the
/// characteristic bound `2n² − n = 1/m`.
pub fn hyperstandard_simple_bound(n: u64) -> Result<SimpleBound> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "n = {n}; n must be at least 3 (smaller n reduce to standard coefficients)"
        )));
    }
    let set = CoeffSetSpec::new(vec![Rational::new(1, n as i64)])?;
    let two = Rational::from_integer(2u64);
    let mut per_degree = Vec::new();
    for d in 3..=(2 * n - 1) {
        let cap = &two / Rational::from_integer(d);
        let lambda = largest_below(&set, &cap, &Rational::zero())?
            .filter(|l| l.is_positive())
            .expect("1/n < 2/d for d ≤ 2n − 1");
        per_degree.push((d, &cap - &lambda));
    }
    let m = per_degree
        .iter()
        .map(|(_, g)| g.clone())
        .min()
        .expect("at least d = 3");
    let closed = Rational::from_integer((2 * n - 1) * n).recip();
    if m != closed {
        return Err(Error::ClosedFormMismatch(format!(
            "m = {m} but 1/((2n−1)n) = {closed}"
        )));
    }
    let bound = m.recip().ceil().to_u64().expect("small");
    Ok(SimpleBound {
        n,
        per_degree,
        m,
        bound,
    })
}

/// The J-set for a given `x` and `N`.
pub fn j_set(x: &Rational, n: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 2..=n {
        for p in 1..q {
            let (p, q) = (Rational::from_integer(p), Rational::from_integer(q));
            out.push((&p - x) / (&q - x));
            out.push(p / q);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Elements of `D(I) ∩ (0, (N−1)/N]`; anything larger exceeds every `p/q`.
fn perturbation_slice(set: &CoeffSetSpec, n: u64) -> Result<Vec<Rational>> {
    let top = Rational::new(n as i64 - 1, n as i64);
    let cutoff = Rational::new(n as i64, n as i64 + 1);
    Ok(dset_below(set, &cutoff)?
        .positive()
        .iter()
        .filter(|a| **a <= top)
        .cloned()
        .collect())
}

/// First `(a, p/q)` with `a ∈ ((p−x)/(q−x), p/q)`, if any.
pub fn perturbation_violation(
    slice: &[Rational],
    x: &Rational,
    n: u64,
) -> Option<(Rational, Rational, Rational)> {
    for q in 2..=n {
        for p in 1..q {
            let (pr, qr) = (Rational::from_integer(p), Rational::from_integer(q));
            let lo = (&pr - x) / (&qr - x);
            let hi = &pr / &qr;
            if let Some(a) = slice.iter().find(|a| a.strictly_between(&lo, &hi)) {
                return Some((a.clone(), lo, hi));
            }
        }
    }
    None
}

/// The largest `x = 1/k`, `k ≥ 2`, keeping every element of `D(I)` out of
/// the open intervals `((p−x)/(q−x), p/q)`, `2 ≤ q ≤ N`, `1 ≤ p < q`.
///
/// For `a < p/q`, `a ≤ (p−x)/(q−x)` is equivalent to `x ≤ (p − aq)/(1 − a)`,
/// so the admissible `x` form an interval `(0, x_max]`.
pub fn safe_perturbation(set: &CoeffSetSpec, n: u64) -> Result<PerturbationReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("N = {n}; N must be at least 2")));
    }
    let slice = perturbation_slice(set, n)?;
    let one = Rational::one();
    let mut x_max: Option<Rational> = None;
    for q in 2..=n {
        for p in 1..q {
            let (pr, qr) = (Rational::from_integer(p), Rational::from_integer(q));
            let hi = &pr / &qr;
            for a in slice.iter().filter(|a| **a < hi) {
                let limit = (&pr - a * &qr) / (&one - a);
                if x_max.as_ref().is_none_or(|m| limit < *m) {
                    x_max = Some(limit);
                }
            }
        }
    }
    let k = match &x_max {
        None => 2,
        Some(m) => m.recip().ceil().to_u64().unwrap_or(u64::MAX).max(2),
    };
    if k > PERTURBATION_K_CAP {
        return Err(Error::NoPerturbation(PERTURBATION_K_CAP));
    }
    let x = Rational::new(1, k as i64);
    if let Some((a, lo, hi)) = perturbation_violation(&slice, &x, n) {
        return Err(Error::ClosedFormMismatch(format!(
            "x = {x} leaves {a} inside ({lo}, {hi})"
        )));
    }
    Ok(PerturbationReport {
        n,
        j_set: j_set(&x, n),
        x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::r;

    fn set(v: &[(i64, i64)]) -> CoeffSetSpec {
        CoeffSetSpec::new(v.iter().map(|&(a, b)| r(a, b)).collect()).unwrap()
    }

    fn rs(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(a, b)| r(a, b)).collect()
    }

    #[test]
    fn standard_coefficients_q() {
        let s = q_max(&CoeffSetSpec::empty()).unwrap();
        assert_eq!(s.q, r(59, 30));
        assert_eq!(s.witness, rs(&[(1, 2), (2, 3), (4, 5)]));
    }

    #[test]
    fn one_third_q() {
        let s = q_max(&set(&[(1, 3)])).unwrap();
        assert_eq!(s.q, r(263, 132));
        assert_eq!(s.witness, rs(&[(1, 3), (3, 4), (10, 11)]));
        // Greedy completions of the three ℓ = 3 cases starting at 1/3, and
        // the q₁ = 1/2 branch.
        let greedy: Vec<_> = s.trace.iter().filter(|t| t.largest_top).map(|t| t.sum.clone()).collect();
        for v in [r(143, 72), r(263, 132), r(209, 105), r(59, 30)] {
            assert!(greedy.contains(&v), "missing {v}");
        }
        assert_eq!(s.trace.len(), 32);
        assert!(s.trace.iter().all(|t| in_sum_set(&set(&[(1, 3)]), &t.witness)));
    }

    #[test]
    fn paper_case_sums_are_members() {
        let third = set(&[(1, 3)]);
        let search = q_max(&third).unwrap();
        let q = search.q.clone();
        for (w, total) in [
            (rs(&[(1, 3), (7, 9), (13, 15)]), r(89, 45)),
            (rs(&[(1, 3), (3, 4), (19, 21)]), r(167, 84)),
            (rs(&[(1, 3), (4, 5), (6, 7)]), r(209, 105)),
        ] {
            assert!(in_sum_set(&third, &w));
            assert_eq!(w.iter().sum::<Rational>(), total);
            assert!(search.trace.iter().any(|t| t.witness == w && t.sum == total));
            assert!(total <= q);
        }
        assert!(!in_sum_set(&third, &rs(&[(1, 3), (1, 3), (1, 3)])));
        assert!(!in_sum_set(&third, &rs(&[(1, 3), (1, 4), (9, 10)])));
    }

    #[test]
    fn p0_values() {
        let std = p0(&CoeffSetSpec::empty()).unwrap();
        assert_eq!(std.epsilon, r(1, 2));
        assert_eq!(std.p0_exact, r(60, 1));
        assert_eq!(std.p0, 60);

        let third = p0(&set(&[(1, 3)])).unwrap();
        assert_eq!(third.epsilon, r(1, 3));
        assert_eq!(third.p0_exact, r(528, 1));
        assert_eq!(third.p0, 528);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        for s in [CoeffSetSpec::empty(), set(&[(1, 3)]), set(&[(2, 5)])] {
            assert_eq!(
                q_max_with(&s, Exec::Sequential).unwrap(),
                q_max_with(&s, Exec::Parallel).unwrap()
            );
        }
    }

    #[test]
    fn proof_inequality_over_trace() {
        for s in [CoeffSetSpec::empty(), set(&[(1, 3)]), set(&[(1, 2)]), set(&[(2, 5)])] {
            let (rep, search) = p0_with(&s, Exec::default()).unwrap();
            let two = Rational::from_integer(2u64);
            let lhs = (&two / &rep.epsilon - &two) / (&two - &rep.q);
            for t in &search.trace {
                let ell = Rational::from_integer((t.lines - 2) as u64);
                let rhs = ell / (&Rational::one() - &t.sum / &two) / &two;
                assert!(lhs >= rhs, "{} vs {} at {:?}", lhs, rhs, t.witness);
            }
        }
    }

    #[test]
    fn simple_bound_values() {
        let b = hyperstandard_simple_bound(3).unwrap();
        assert_eq!((b.m.clone(), b.bound), (r(1, 15), 15));
        assert_eq!(b.per_degree[0], (3, r(1, 6)));
        for n in 4..=10u64 {
            let b = hyperstandard_simple_bound(n).unwrap();
            assert_eq!(b.m, r(1, ((2 * n - 1) * n) as i64));
            assert_eq!(b.bound, 2 * n * n - n);
        }
        assert_eq!(hyperstandard_simple_bound(10).unwrap().bound, 190);
        assert!(hyperstandard_simple_bound(2).is_err());
    }

    #[test]
    fn perturbation_examples() {
        let e = safe_perturbation(&CoeffSetSpec::empty(), 3).unwrap();
        assert_eq!(e.x, r(1, 2));
        let e = safe_perturbation(&CoeffSetSpec::empty(), 2).unwrap();
        assert_eq!(e.x, r(1, 2));
        assert_eq!(e.j_set, rs(&[(1, 3), (1, 2)]));
        let e = safe_perturbation(&set(&[(1, 3)]), 2).unwrap();
        assert_eq!(e.x, r(1, 2));
        assert!(safe_perturbation(&CoeffSetSpec::empty(), 1).is_err());
    }

    #[test]
    fn perturbation_shrinks_when_needed() {
        // The chosen x is the largest 1/k that clears every interval.
        let e = safe_perturbation(&CoeffSetSpec::empty(), 5).unwrap();
        let slice = perturbation_slice(&CoeffSetSpec::empty(), 5).unwrap();
        assert!(perturbation_violation(&slice, &e.x, 5).is_none());
        let k = e.x.recip().to_f64() as u64;
        if k > 2 {
            let bigger = r(1, k as i64 - 1);
            assert!(perturbation_violation(&slice, &bigger, 5).is_some());
        }
    }
}
