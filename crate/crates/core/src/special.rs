//! Floating point special functions: Gamma, polygamma, zeta at real
//! arguments and the normal distribution function.

use crate::exact::{bernoulli, factorial, to_f64, zeta_even_coeff};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `1/Gamma(x)`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        return 0.0;
    }
    1.0 / gamma(x)
}

pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Riemann zeta for real `s > 1`, by Euler-Maclaurin summation.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta({s}) outside the convergent range");
    if s.fract() == 0.0 && s <= 200.0 && (s as u32).is_multiple_of(2) {
        let c = zeta_even_coeff(s as u32).expect("even argument");
        return to_f64(&c) * std::f64::consts::PI.powf(s);
    }
    const N: f64 = 12.0;
    let mut acc: f64 = (1..12).map(|i| (i as f64).powf(-s)).sum();
    acc += N.powf(1.0 - s) / (s - 1.0) + 0.5 * N.powf(-s);
    // rising factorial s(s+1)...(s+2j-2) / (2j)!
    let mut rising = s;
    let mut fact = 2.0;
    for j in 1..=12u32 {
        let term = to_f64(&bernoulli(2 * j)) / fact * rising * N.powf(-s - 2.0 * j as f64 + 1.0);
        acc += term;
        rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        fact *= (2.0 * j as f64 + 1.0) * (2.0 * j as f64 + 2.0);
    }
    acc
}

/// `psi^(k)(x)` for `x > 0`: upward recurrence followed by the asymptotic
/// series.
pub fn polygamma(k: u32, x: f64) -> f64 {
    assert!(x > 0.0, "polygamma needs x > 0, got {x}");
    let kf = to_f64(&factorial(k).into());
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut shift = 0.0;
    let mut y = x;
    while y < 30.0 {
        // psi^(k)(y) = psi^(k)(y+1) - (-1)^k k! / y^(k+1)
        shift -= sign * kf / y.powi(k as i32 + 1);
        y += 1.0;
    }
    let series = if k == 0 {
        let mut s = y.ln() - 0.5 / y;
        for j in 1..=10u32 {
            s -= to_f64(&bernoulli(2 * j)) / (2.0 * j as f64 * y.powi(2 * j as i32));
        }
        s
    } else {
        let km1 = to_f64(&factorial(k - 1).into());
        let mut s = km1 / y.powi(k as i32) + kf / (2.0 * y.powi(k as i32 + 1));
        for j in 1..=10u32 {
            let num = to_f64(&factorial(2 * j + k - 1).into()) / to_f64(&factorial(2 * j).into());
            s += to_f64(&bernoulli(2 * j)) * num / y.powi(2 * j as i32 + k as i32);
        }
        -sign * s
    };
    series + shift
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_values() {
        assert!((zeta(3.0) - 1.202_056_903_159_594_2).abs() < 1e-15);
        assert!((zeta(5.0) - 1.036_927_755_143_37).abs() < 1e-14);
        assert!((zeta(2.0) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
        assert!((zeta(1.5) - 2.612_375_348_685_488).abs() < 1e-13);
    }

    #[test]
    fn polygamma_identities() {
        let ln2 = std::f64::consts::LN_2;
        assert!((polygamma(0, 1.0) + EULER_GAMMA).abs() < 1e-13);
        assert!((polygamma(0, 0.5) + EULER_GAMMA + 2.0 * ln2).abs() < 1e-13);
        for m in 1..=6u32 {
            let mf = to_f64(&factorial(m).into());
            let s = if m % 2 == 1 { 1.0 } else { -1.0 };
            let at1 = s * zeta(m as f64 + 1.0) * mf;
            assert!((polygamma(m, 1.0) / at1 - 1.0).abs() < 1e-12, "m={m}");
            let at_half = at1 * (2f64.powi(m as i32 + 1) - 1.0);
            assert!((polygamma(m, 0.5) / at_half - 1.0).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn gamma_helpers() {
        let err = (gamma(0.5) - std::f64::consts::PI.sqrt()).abs();
        assert!(err < 1e-14, "{err:e}");
        assert_eq!(rgamma(-2.0), 0.0);
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        let err = (normal_cdf(1.959_963_984_540_054) - 0.975).abs();
        assert!(err < 1e-11, "{err:e}");
    }
}
