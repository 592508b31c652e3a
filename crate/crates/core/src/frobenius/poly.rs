//! Dense univariate polynomials over `𝔽_p`, coefficients as `u64` in `[0, p)`,
//! lowest degree first.
//!
//! Multiplication comes in three flavours that must agree coefficient for
//! coefficient: schoolbook, Karatsuba, and a number-theoretic transform over
//! a 62-bit NTT prime (exact as long as the integer convolution does not
//! reach that prime, after which it falls back to Karatsuba).

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MulStrategy {
    Schoolbook,
    Karatsuba,
    Ntt,
    /// Schoolbook for short operands, NTT above that.
    #[default]
    Auto,
}

const KARATSUBA_CUTOFF: usize = 32;
const AUTO_CUTOFF: usize = 64;

// 29·2^57 + 1, primitive root 3.
const NTT_MOD: u64 = 4_179_340_454_199_820_289;
const NTT_ROOT: u64 = 3;
const NTT_TWO_ADICITY: u32 = 57;

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Drops trailing zero coefficients.
pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn schoolbook(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Accumulate in u128 and reduce lazily; each term is < p² < 2^128 / len.
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += x as u128 * y as u128;
        }
    }
    acc.into_iter().map(|c| (c % p as u128) as u64).collect()
}

fn add_into(dst: &mut [u64], src: &[u64], p: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        let t = *d + s;
        *d = if t >= p { t - p } else { t };
    }
}

fn sub_into(dst: &mut [u64], src: &[u64], p: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = if *d >= s { *d - s } else { *d + p - s };
    }
}

pub fn karatsuba(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= KARATSUBA_CUTOFF {
        return schoolbook(a, b, p);
    }
    let half = a.len().max(b.len()).div_ceil(2);
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));

    let z0 = karatsuba(a0, b0, p);
    let z2 = karatsuba(a1, b1, p);

    let mut sa = a0.to_vec();
    add_into(&mut sa, a1, p);
    let mut sb = b0.to_vec();
    add_into(&mut sb, b1, p);
    let mut z1 = karatsuba(&sa, &sb, p);
    sub_into(&mut z1, &z0, p);
    sub_into(&mut z1, &z2, p);

    let mut out = vec![0u64; a.len() + b.len() - 1];
    add_into(&mut out, &z0, p);
    add_into(&mut out[half..], &z1, p);
    if !z2.is_empty() {
        add_into(&mut out[2 * half..], &z2, p);
    }
    out
}

fn ntt_in_place(a: &mut [u64], invert: bool) {
    let n = a.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = powmod(NTT_ROOT, (NTT_MOD - 1) / len as u64, NTT_MOD);
        if invert {
            w = powmod(w, NTT_MOD - 2, NTT_MOD);
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(len / 2);
            let mut wn = 1u64;
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let x = *u;
                let y = mulmod(*v, wn, NTT_MOD);
                *u = if x + y >= NTT_MOD { x + y - NTT_MOD } else { x + y };
                *v = if x >= y { x - y } else { x + NTT_MOD - y };
                wn = mulmod(wn, w, NTT_MOD);
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = powmod(n as u64, NTT_MOD - 2, NTT_MOD);
        for x in a.iter_mut() {
            *x = mulmod(*x, n_inv, NTT_MOD);
        }
    }
}

/// Whether the NTT route is exact for these operand lengths.
fn ntt_is_exact(a_len: usize, b_len: usize, p: u64) -> bool {
    let out_len = a_len + b_len - 1;
    let size = out_len.next_power_of_two();
    let bound = (a_len.min(b_len) as u128) * ((p - 1) as u128) * ((p - 1) as u128);
    size.trailing_zeros() <= NTT_TWO_ADICITY && bound < NTT_MOD as u128
}

pub fn ntt(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if !ntt_is_exact(a.len(), b.len(), p) {
        return karatsuba(a, b, p);
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut fa = a.to_vec();
    fa.resize(size, 0);
    let mut fb = b.to_vec();
    fb.resize(size, 0);
    ntt_in_place(&mut fa, false);
    ntt_in_place(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = mulmod(*x, *y, NTT_MOD);
    }
    ntt_in_place(&mut fa, true);
    fa.truncate(out_len);
    fa.into_iter().map(|c| c % p).collect()
}

pub fn mul(a: &[u64], b: &[u64], p: u64, strategy: MulStrategy) -> Vec<u64> {
    match strategy {
        MulStrategy::Schoolbook => schoolbook(a, b, p),
        MulStrategy::Karatsuba => karatsuba(a, b, p),
        MulStrategy::Ntt => ntt(a, b, p),
        MulStrategy::Auto => {
            if a.len().min(b.len()) <= AUTO_CUTOFF {
                schoolbook(a, b, p)
            } else {
                ntt(a, b, p)
            }
        }
    }
}

/// Product truncated to the first `len` coefficients.
pub fn mul_trunc(a: &[u64], b: &[u64], len: usize, p: u64, strategy: MulStrategy) -> Vec<u64> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    let mut out = mul(a, b, p, strategy);
    out.truncate(len);
    trim(out)
}

/// `base^n mod t^len` by square-and-multiply.
pub fn pow_trunc(base: &[u64], mut n: u64, len: usize, p: u64, strategy: MulStrategy) -> Vec<u64> {
    if len == 0 {
        return Vec::new();
    }
    let mut acc = vec![1u64 % p];
    let mut sq = trim(base[..base.len().min(len)].to_vec());
    while n > 0 {
        if n & 1 == 1 {
            acc = mul_trunc(&acc, &sq, len, p, strategy);
        }
        n >>= 1;
        if n > 0 {
            sq = mul_trunc(&sq, &sq, len, p, strategy);
        }
    }
    trim(acc)
}

/// `∏ (t − rᵢ)^{aᵢ}` over `𝔽_p`.
pub fn from_roots(roots: &[(u64, u64)], p: u64, strategy: MulStrategy) -> Vec<u64> {
    let mut acc = vec![1u64 % p];
    for &(root, mult) in roots {
        let neg = (p - root % p) % p;
        let linear = [neg, 1 % p];
        let factor = pow_trunc(&linear, mult, usize::MAX, p, strategy);
        acc = mul(&acc, &factor, p, strategy);
    }
    trim(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_mod_p() {
        // (t + 1)^5 = t^5 + 1 over 𝔽_5.
        let f = from_roots(&[(4, 5)], 5, MulStrategy::Schoolbook);
        assert_eq!(f, vec![1, 0, 0, 0, 0, 1]);
        // (t - 1)(t - 2) = t^2 - 3t + 2 over 𝔽_7.
        assert_eq!(from_roots(&[(1, 1), (2, 1)], 7, MulStrategy::Auto), vec![2, 4, 1]);
    }

    #[test]
    fn pow_truncates() {
        let g = vec![1, 1];
        assert_eq!(pow_trunc(&g, 4, 3, 7, MulStrategy::Schoolbook), vec![1, 4, 6]);
        assert_eq!(pow_trunc(&g, 0, 3, 7, MulStrategy::Schoolbook), vec![1]);
        assert!(pow_trunc(&g, 3, 0, 7, MulStrategy::Schoolbook).is_empty());
    }

    #[test]
    fn ntt_falls_back_when_inexact() {
        let p = (1u64 << 31) - 1;
        let a: Vec<u64> = (0..3000).map(|i| (i * 7919 + 11) % p).collect();
        let b: Vec<u64> = (0..2000).map(|i| (p - 1 - i) % p).collect();
        assert!(!ntt_is_exact(a.len(), b.len(), p));
        assert_eq!(ntt(&a, &b, p), schoolbook(&a, &b, p));
    }

    fn poly(max_len: usize) -> impl Strategy<Value = (u64, Vec<u64>, Vec<u64>)> {
        prop_oneof![Just(2u64), Just(3), Just(5), Just(7), Just(31), Just(65_521)].prop_flat_map(
            move |p| {
                (
                    Just(p),
                    proptest::collection::vec(0..p, 0..max_len),
                    proptest::collection::vec(0..p, 0..max_len),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn strategies_agree((p, a, b) in poly(300)) {
            let reference = schoolbook(&a, &b, p);
            prop_assert_eq!(&karatsuba(&a, &b, p), &reference);
            prop_assert_eq!(&ntt(&a, &b, p), &reference);
            prop_assert_eq!(&mul(&a, &b, p, MulStrategy::Auto), &reference);
        }

        #[test]
        fn truncated_pow_is_prefix((p, a, _b) in poly(12), n in 0u64..20, len in 1usize..60) {
            let mut full = vec![1 % p];
            for _ in 0..n {
                full = schoolbook(&full, &a, p);
            }
            full.truncate(len);
            let full = trim(full);
            for s in [MulStrategy::Schoolbook, MulStrategy::Karatsuba, MulStrategy::Ntt] {
                prop_assert_eq!(&pow_trunc(&a, n, len, p, s), &full);
            }
        }
    }
}
