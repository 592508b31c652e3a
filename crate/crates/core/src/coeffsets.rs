//! Hyperstandard coefficient sets.
//!
//! For a finite `I ⊂ (0,1) ∩ ℚ`, `I₊` is the set of non-negative integer
//! combinations of elements of `I` that do not exceed 1 (the empty sum 0
//! included), and `D(I) = {(m-1+f)/m : m ≥ 1, f ∈ I₊} ∩ [0,1]`.
//!
//! `D(I)` accumulates only at 1, so every slice `D(I) ∩ [0, c)` with `c < 1`
//! is finite. All slices here are half-open and materialized eagerly.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A finite coefficient set `I ⊂ (0,1)`, sorted and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct CoeffSetSpec {
    elements: Vec<Rational>,
}

impl CoeffSetSpec {
    /// Sorts and deduplicates; rejects anything outside the open unit interval.
    pub fn new(mut elements: Vec<Rational>) -> Result<Self> {
        if let Some(bad) = elements
            .iter()
            .find(|e| !e.is_positive() || **e >= Rational::one())
        {
            return Err(Error::InvalidCoeffSet(format!(
                "element {bad} is not in the open interval (0,1)"
            )));
        }
        elements.sort();
        elements.dedup();
        Ok(CoeffSetSpec { elements })
    }

    pub fn empty() -> Self {
        CoeffSetSpec::default()
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_subset_of(&self, other: &CoeffSetSpec) -> bool {
        self.elements
            .iter()
            .all(|e| other.elements.binary_search(e).is_ok())
    }
}

impl TryFrom<Vec<Rational>> for CoeffSetSpec {
    type Error = Error;
    fn try_from(v: Vec<Rational>) -> Result<Self> {
        CoeffSetSpec::new(v)
    }
}

impl From<CoeffSetSpec> for Vec<Rational> {
    fn from(s: CoeffSetSpec) -> Self {
        s.elements
    }
}

/// `I₊`: sorted, contains 0, closed under sums that stay `≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlusClosure {
    pub elements: Vec<Rational>,
}

impl PlusClosure {
    pub fn contains(&self, x: &Rational) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

/// `D(I) ∩ [0, cutoff)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsetSlice {
    pub source: CoeffSetSpec,
    pub cutoff: Rational,
    pub elements: Vec<Rational>,
}

impl DsetSlice {
    pub fn contains(&self, x: &Rational) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// The strictly positive elements.
    pub fn positive(&self) -> &[Rational] {
        let start = self.elements.partition_point(|e| !e.is_positive());
        &self.elements[start..]
    }
}

/// Closure of `generators` (all positive) under addition, capped at 1.
fn sum_closure(generators: &[Rational]) -> Vec<Rational> {
    let one = Rational::one();
    let mut seen: BTreeSet<Rational> = BTreeSet::new();
    seen.insert(Rational::zero());
    let mut frontier = vec![Rational::zero()];
    while let Some(base) = frontier.pop() {
        for g in generators {
            let s = &base + g;
            if s <= one && !seen.contains(&s) {
                seen.insert(s.clone());
                frontier.push(s);
            }
        }
    }
    seen.into_iter().collect()
}

fn check_cutoff(cutoff: &Rational) -> Result<()> {
    if cutoff.is_negative() || *cutoff >= Rational::one() {
        return Err(Error::CutoffOutOfRange(cutoff.to_string()));
    }
    Ok(())
}

/// Largest integer `m ≥ 0` with `(m-1+f)/m < bound`, i.e. `m < (1-f)/(1-bound)`.
/// Requires `f < 1` and `bound < 1`.
fn max_denominator_below(f: &Rational, bound: &Rational) -> BigInt {
    let one = Rational::one();
    let limit = (&one - f) / (&one - bound);
    limit.ceil() - BigInt::one()
}

fn hyperstandard(m: &BigInt, f: &Rational) -> Rational {
    let m = Rational::from_integer(m.clone());
    (&m - Rational::one() + f) / m
}

/// `D(·) ∩ [0, cutoff)` generated from an explicit `I₊`.
pub(crate) fn slice_from_closure(plus: &[Rational], cutoff: &Rational) -> Vec<Rational> {
    let one = Rational::one();
    let mut out: BTreeSet<Rational> = BTreeSet::new();
    for f in plus.iter().filter(|f| **f < one) {
        let m_max = max_denominator_below(f, cutoff)
            .to_u64()
            .expect("slice too large to enumerate");
        for m in 1..=m_max {
            out.insert(hyperstandard(&BigInt::from(m), f));
        }
    }
    out.into_iter().collect()
}

pub fn plus_closure(set: &CoeffSetSpec) -> PlusClosure {
    PlusClosure {
        elements: sum_closure(&set.elements),
    }
}

/// Exactly `D(I) ∩ [0, cutoff)`, sorted.
pub fn dset_below(set: &CoeffSetSpec, cutoff: &Rational) -> Result<DsetSlice> {
    check_cutoff(cutoff)?;
    let plus = sum_closure(&set.elements);
    Ok(DsetSlice {
        source: set.clone(),
        cutoff: cutoff.clone(),
        elements: slice_from_closure(&plus, cutoff),
    })
}

/// Maximum of `D(I) ∩ [floor, bound)`, if any.
///
/// For each `f ∈ I₊` the values `(m-1+f)/m` increase with `m`, so only the
/// largest admissible `m` per `f` is a candidate.
pub fn largest_below(
    set: &CoeffSetSpec,
    bound: &Rational,
    floor: &Rational,
) -> Result<Option<Rational>> {
    if *bound >= Rational::one() {
        return Err(Error::CutoffOutOfRange(bound.to_string()));
    }
    if floor > bound {
        return Err(Error::FloorAboveBound {
            floor: floor.to_string(),
            bound: bound.to_string(),
        });
    }
    Ok(largest_below_in_closure(
        &sum_closure(&set.elements),
        bound,
        floor,
    ))
}

/// Same as [`largest_below`] with a precomputed `I₊`.
pub(crate) fn largest_below_in_closure(
    plus: &[Rational],
    bound: &Rational,
    floor: &Rational,
) -> Option<Rational> {
    let one = Rational::one();
    plus.iter()
        .filter(|f| **f < one)
        .filter_map(|f| {
            let m = max_denominator_below(f, bound);
            (m >= BigInt::one()).then(|| hyperstandard(&m, f))
        })
        .filter(|v| v >= floor)
        .max()
}

/// Membership in `D(I)`: `x = (m-1+f)/m` forces `m = (1-f)/(1-x)`, so
/// `x < 1` belongs iff that ratio is a positive integer for some `f ∈ I₊`.
pub fn contains(set: &CoeffSetSpec, x: &Rational) -> bool {
    contains_in_closure(&sum_closure(&set.elements), x)
}

pub(crate) fn contains_in_closure(plus: &[Rational], x: &Rational) -> bool {
    let one = Rational::one();
    if x.is_negative() || *x > one {
        return false;
    }
    if *x == one {
        return plus.contains(&one);
    }
    plus.iter().filter(|f| **f < one).any(|f| {
        let m = (&one - f) / (&one - x);
        m.is_integer() && m.is_positive()
    })
}

/// `min(I ∪ {1/2})`, the smallest positive element of `D(I)`.
pub fn min_positive(set: &CoeffSetSpec) -> Rational {
    let half = Rational::new(1, 2);
    match set.elements.first() {
        Some(e) if *e < half => e.clone(),
        _ => half,
    }
}

/// Checks `D(D(I)) ∩ [0,c) = D(I) ∩ [0,c)`.
///
/// Elements of `D(D(I))` below `c` only use summands below `c`, so the left
/// side is built from the plus-closure of the finite slice itself.
pub fn ddi_check(set: &CoeffSetSpec, cutoff: &Rational) -> Result<bool> {
    let inner = dset_below(set, cutoff)?;
    let gens = inner.positive().to_vec();
    let outer = slice_from_closure(&sum_closure(&gens), cutoff);
    Ok(outer == inner.elements)
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
    fn plus_closure_examples() {
        assert_eq!(plus_closure(&CoeffSetSpec::empty()).elements, rs(&[(0, 1)]));
        assert_eq!(
            plus_closure(&set(&[(1, 3)])).elements,
            rs(&[(0, 1), (1, 3), (2, 3), (1, 1)])
        );
        assert_eq!(
            plus_closure(&set(&[(1, 2), (1, 3)])).elements,
            rs(&[(0, 1), (1, 3), (1, 2), (2, 3), (5, 6), (1, 1)])
        );
    }

    #[test]
    fn standard_coefficients_below_nine_tenths() {
        let s = dset_below(&CoeffSetSpec::empty(), &r(9, 10)).unwrap();
        assert_eq!(
            s.elements,
            rs(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9)])
        );
    }

    #[test]
    fn one_third_slice() {
        let s = dset_below(&set(&[(1, 3)]), &r(9, 10)).unwrap();
        assert_eq!(
            s.elements,
            rs(&[
                (0, 1),
                (1, 3),
                (1, 2),
                (2, 3),
                (3, 4),
                (7, 9),
                (4, 5),
                (5, 6),
                (6, 7),
                (13, 15),
                (7, 8),
                (8, 9)
            ])
        );
    }

    #[test]
    fn zero_cutoff_is_empty() {
        for s in [CoeffSetSpec::empty(), set(&[(1, 3)]), set(&[(2, 7), (1, 5)])] {
            assert!(dset_below(&s, &Rational::zero()).unwrap().elements.is_empty());
            assert!(ddi_check(&s, &Rational::zero()).unwrap());
        }
    }

    #[test]
    fn cutoff_at_or_above_one_rejected() {
        assert!(matches!(
            dset_below(&CoeffSetSpec::empty(), &Rational::one()),
            Err(Error::CutoffOutOfRange(_))
        ));
        assert!(dset_below(&CoeffSetSpec::empty(), &r(-1, 2)).is_err());
        assert!(largest_below(&CoeffSetSpec::empty(), &r(3, 2), &Rational::zero()).is_err());
        assert!(ddi_check(&CoeffSetSpec::empty(), &r(1, 1)).is_err());
    }

    #[test]
    fn invalid_sets_rejected() {
        assert!(CoeffSetSpec::new(vec![r(0, 1)]).is_err());
        assert!(CoeffSetSpec::new(vec![r(1, 1)]).is_err());
        assert!(CoeffSetSpec::new(vec![r(-1, 3)]).is_err());
        let s = CoeffSetSpec::new(vec![r(1, 2), r(1, 3), r(2, 4)]).unwrap();
        assert_eq!(s.elements(), &rs(&[(1, 3), (1, 2)])[..]);
    }

    #[test]
    fn largest_below_examples() {
        let third = set(&[(1, 3)]);
        let zero = Rational::zero();
        assert_eq!(largest_below(&third, &r(13, 15), &zero).unwrap(), Some(r(6, 7)));
        // 10/11 = (11-1)/11 lies in D(∅) ⊂ D({1/3}) and exceeds 19/21.
        assert_eq!(largest_below(&third, &r(11, 12), &zero).unwrap(), Some(r(10, 11)));
        // 7/8 = (8-1)/8 exceeds 13/15.
        assert_eq!(largest_below(&third, &r(8, 9), &zero).unwrap(), Some(r(7, 8)));
        assert_eq!(largest_below(&third, &r(1, 3), &zero).unwrap(), Some(zero.clone()));
        assert_eq!(largest_below(&third, &r(1, 3), &r(1, 5)).unwrap(), None);
        assert!(largest_below(&third, &r(1, 3), &r(1, 2)).is_err());
    }

    #[test]
    fn membership() {
        let third = set(&[(1, 3)]);
        for x in [(0, 1), (1, 3), (10, 11), (19, 21), (7, 8), (13, 15)] {
            assert!(contains(&third, &r(x.0, x.1)), "{x:?}");
        }
        for x in [(1, 4), (4, 7), (3, 5), (-1, 2), (3, 2)] {
            assert!(!contains(&third, &r(x.0, x.1)), "{x:?}");
        }
        assert!(!contains(&CoeffSetSpec::empty(), &Rational::one()));
        assert!(contains(&third, &Rational::one()));
    }

    #[test]
    fn min_positive_examples() {
        assert_eq!(min_positive(&CoeffSetSpec::empty()), r(1, 2));
        assert_eq!(min_positive(&set(&[(1, 3)])), r(1, 3));
        assert_eq!(min_positive(&set(&[(2, 5), (1, 2)])), r(2, 5));
        assert_eq!(min_positive(&set(&[(3, 4)])), r(1, 2));
    }

    #[test]
    fn ddi_examples() {
        assert!(ddi_check(&CoeffSetSpec::empty(), &r(4, 5)).unwrap());
        assert_eq!(
            dset_below(&CoeffSetSpec::empty(), &r(4, 5)).unwrap().elements,
            rs(&[(0, 1), (1, 2), (2, 3), (3, 4)])
        );
        assert!(ddi_check(&set(&[(1, 3)]), &r(2, 3)).unwrap());
    }

    #[test]
    fn serde_roundtrip_set() {
        let s = set(&[(1, 2), (1, 3)]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"["1/3","1/2"]"#);
        assert_eq!(serde_json::from_str::<CoeffSetSpec>(&json).unwrap(), s);
        assert!(serde_json::from_str::<CoeffSetSpec>(r#"["3/2"]"#).is_err());
    }
}
