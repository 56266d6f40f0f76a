use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{binomial, factorial, PiGraded, Rational, Truncation};
use crate::error::invalid;
use crate::Result;

static BERNOULLI: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Bernoulli number `B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli(n: u32) -> Rational {
    let n = n as usize;
    if let Some(b) = BERNOULLI.read().unwrap().get(n) {
        return b.clone();
    }
    let mut table = BERNOULLI.write().unwrap();
    if table.is_empty() {
        table.push(Rational::one());
    }
    while table.len() <= n {
        let m = table.len() as u32;
        let mut acc = Rational::zero();
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += b * Rational::from_integer(binomial(m + 1, k as u32));
            }
        }
        table.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    table[n].clone()
}

/// Rational `r` with `zeta(s) = r * pi^s` for even `s >= 2`.
pub fn zeta_even_coeff(s: u32) -> Result<Rational> {
    if s < 2 || s % 2 == 1 {
        return invalid(format!("zeta_even needs an even argument >= 2, got {s}"));
    }
    let j = s / 2;
    let sign = if j % 2 == 1 { 1 } else { -1 };
    let num = bernoulli(s) * Rational::from_integer(BigInt::one() << s as usize);
    Ok(num * Rational::from_integer(BigInt::from(sign)) / Rational::from_integer(2 * factorial(s)))
}

pub fn zeta_even(s: u32) -> Result<PiGraded> {
    Ok(PiGraded::monomial(s, zeta_even_coeff(s)?))
}

/// `sum_{i=1}^m i^{-s}`.
pub fn partial_zeta(m: u32, s: u32) -> Rational {
    let mut acc = Rational::zero();
    for i in 1..=m {
        acc += Rational::new(BigInt::one(), num_traits::pow(BigInt::from(i), s as usize));
    }
    acc
}

/// `zeta_m(s)`: the partial sum for finite `m`, the full even zeta value
/// otherwise.
pub fn zeta_truncated(m: Truncation, s: u32) -> Result<PiGraded> {
    match m {
        Truncation::Finite(m) => {
            if s == 0 {
                return invalid("zeta_m(0) is not used");
            }
            Ok(PiGraded::rational(partial_zeta(m, s)))
        }
        Truncation::Infinite => zeta_even(s),
    }
}
