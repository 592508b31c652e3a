//! Value parsers for list-valued flags. Failures here are usage errors.

use std::str::FromStr;

use fptlab_core::frobenius::Slope;
use fptlab_core::Rational;

fn split<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<T>().map_err(|e| format!("bad {what} {item:?}: {e}"))
        })
        .collect()
}

pub fn rational(s: &str) -> Result<Rational, String> {
    s.trim().parse().map_err(|e| format!("{e}"))
}

/// A whole comma-separated list as one flag value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct List<T>(pub Vec<T>);

pub fn rationals(s: &str) -> Result<List<Rational>, String> {
    split(s, "rational").map(List)
}

pub fn slopes(s: &str) -> Result<List<Slope>, String> {
    split(s, "slope").map(List)
}

pub fn integers(s: &str) -> Result<List<u64>, String> {
    split(s, "integer").map(List)
}
