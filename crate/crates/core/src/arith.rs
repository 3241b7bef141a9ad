//! Rational integer helpers: trial-division factorisation, primality,
//! squarefreeness and square roots modulo a prime.

use crate::error::{Error, Result};

/// Prime factorisation of `n >= 2` as ascending `(p, e)` pairs.
pub fn factor_integer(n: u64) -> Result<Vec<(u64, u32)>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "cannot factor {n}: need n >= 2"
        )));
    }
    Ok(trial_division(n))
}

pub(crate) fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && trial_division(n) == [(n, 1)]
}

pub fn is_squarefree(d: i64) -> bool {
    d != 0
        && trial_division(d.unsigned_abs())
            .iter()
            .all(|&(_, e)| e == 1)
}

/// Smallest `r` in `0..p` with `r^2 = d (mod p)`, by exhaustive search.
pub(crate) fn sqrt_mod_prime(d: i64, p: u64) -> Option<u64> {
    let p = p as i128;
    let target = (d as i128).rem_euclid(p);
    (0..p).find(|r| (r * r) % p == target).map(|r| r as u64)
}
