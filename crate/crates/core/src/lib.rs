//! Exact positive-characteristic singularity invariants of line arrangements
//! through the origin of the affine plane.
//!
//! - [`coeffsets`]: hyperstandard sets `I₊` and `D(I)`, finite slices, extremal queries.
//! - [`thresholds`]: log canonical thresholds, the degenerate fpt, the
//!   Hara–Monsky lower bound and the `t₀` gap.
//! - [`frobenius`]: brute-force `ν_f(pᵉ)` over `𝔽_p`, fpt brackets, sharp F-purity.
//! - [`bounds`]: `ε`, `Q = max 𝒮`, `p₀(I)`, the simple hyperstandard bound and the
//!   perturbation `x` with its J-set.
//! - [`pairs`]: ℙ¹ log Fano pairs, the cone transfer and strong F-regularity
//!   certificates.
//!
//! Everything is exact: rationals are arbitrary precision and reduced, and no
//! floating point enters any decision.

pub mod arith;
pub mod bounds;
pub mod coeffsets;
pub mod error;
pub mod exec;
pub mod frobenius;
pub mod pairs;
pub mod rational;
pub mod thresholds;

pub use error::{Error, Result};
pub use exec::Exec;
pub use rational::Rational;
