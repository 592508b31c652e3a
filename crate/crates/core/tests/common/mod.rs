#![allow(dead_code)]

use std::collections::BTreeSet;

use fptlab_core::Rational;
use num_rational::Ratio;

pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

pub fn to_lib(x: &Q) -> Rational {
    Rational::new(*x.numer() as i64, *x.denom() as i64)
}

pub fn from_lib(x: &Rational) -> Q {
    x.to_string().split_once('/').map_or_else(
        || Ratio::from_integer(x.to_string().parse().unwrap()),
        |(n, d)| Ratio::new(n.parse().unwrap(), d.parse().unwrap()),
    )
}

/// `I₊` by brute force over multiplicity vectors.
pub fn plus_oracle(set: &[Q]) -> BTreeSet<Q> {
    let one = Q::from_integer(1);
    let mut seen = BTreeSet::from([Q::from_integer(0)]);
    let mut frontier = vec![Q::from_integer(0)];
    while let Some(s) = frontier.pop() {
        for a in set {
            let t = s + a;
            if t <= one && seen.insert(t) {
                frontier.push(t);
            }
        }
    }
    seen
}

/// Elements `(m−1+f)/m < cutoff` of `D(I)` with `m ≤ m_max`.
pub fn dset_oracle(set: &[Q], cutoff: &Q, m_max: i128) -> BTreeSet<Q> {
    let one = Q::from_integer(1);
    let mut out = BTreeSet::new();
    for f in plus_oracle(set) {
        for m in 1..=m_max {
            let x = (Q::from_integer(m - 1) + f) / Q::from_integer(m);
            if x < *cutoff && x < one {
                out.insert(x);
            }
        }
    }
    out
}

/// All elements of `D(I) ∩ [0, 1)` with denominator at most `den`.
pub fn dset_bounded_denominator(set: &[Q], den: i128) -> Vec<Q> {
    let one = Q::from_integer(1);
    let plus = plus_oracle(set);
    let mut out = Vec::new();
    for b in 1..=den {
        for a in 0..b {
            let x = q(a, b);
            if *x.denom() != b {
                continue;
            }
            // x = (m−1+f)/m ⇔ f = 1 − m(1−x), m ≥ 1.
            let hit = (1..=den).any(|m| {
                let f = one - Q::from_integer(m) * (one - x);
                f >= Q::from_integer(0) && plus.contains(&f)
            });
            if hit {
                out.push(x);
            }
        }
    }
    out.sort();
    out
}
