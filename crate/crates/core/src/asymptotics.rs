//! Closed-form approximations to cycle-count laws and the diagnostics that
//! compare them with exact distributions.

use std::sync::OnceLock;

use crate::exact::{factorial, stirling_second, to_f64, Rational, Truncation};
use crate::special::{gamma, ln_factorial, ln_gamma, normal_cdf, polygamma, rgamma, zeta, EULER_GAMMA};
use crate::{Distribution, Error, Result};

/// Largest `j` accepted by [`phi_taylor`].
pub const PHI_MAX: usize = 40;

/// Constants shared by the cumulant formulas, computed once.
#[derive(Debug)]
pub struct NumericConstants {
    /// `zeta(j)` at index `j` for `2 <= j <= PHI_MAX + 1`.
    zeta: Vec<f64>,
}

impl NumericConstants {
    pub fn get() -> &'static NumericConstants {
        static CONSTANTS: OnceLock<NumericConstants> = OnceLock::new();
        CONSTANTS.get_or_init(|| {
            let mut zeta_values = vec![f64::NAN, f64::INFINITY];
            zeta_values.extend((2..=PHI_MAX + 1).map(|j| zeta(j as f64)));
            NumericConstants { zeta: zeta_values }
        })
    }

    pub fn zeta(&self, j: usize) -> f64 {
        self.zeta[j]
    }

    /// `psi^(m)(1)`: `-gamma` for `m = 0`, else `(-1)^{m+1} m! zeta(m+1)`.
    pub fn polygamma_one(&self, m: u32) -> f64 {
        if m == 0 {
            return -EULER_GAMMA;
        }
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        sign * to_f64(&factorial(m).into()) * self.zeta(m as usize + 1)
    }

    /// `psi^(m)(1/2)`: `-gamma - 2 log 2` for `m = 0`, else
    /// `(2^{m+1} - 1) psi^(m)(1)`.
    pub fn polygamma_half(&self, m: u32) -> f64 {
        if m == 0 {
            return -EULER_GAMMA - 2.0 * std::f64::consts::LN_2;
        }
        (2f64.powi(m as i32 + 1) - 1.0) * self.polygamma_one(m)
    }

    /// `psi^(m)(x)`, read from the identities at 1 and 1/2.
    pub fn polygamma(&self, m: u32, x: f64) -> f64 {
        if x == 1.0 && (m as usize) < PHI_MAX {
            self.polygamma_one(m)
        } else if x == 0.5 && (m as usize) < PHI_MAX {
            self.polygamma_half(m)
        } else {
            polygamma(m, x)
        }
    }
}

/// The pair `(lambda, alpha)` and the shift `s` such that
/// `E t^{X-s} ~ exp(lambda (t-1)) G(t)` with `G(t) = Gamma(1+alpha)/Gamma(1+alpha t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxParams {
    pub lambda: f64,
    pub alpha: f64,
    pub shift: usize,
}

impl ApproxParams {
    pub fn new(lambda: f64, alpha: f64, shift: usize) -> Result<Self> {
        if !(lambda > 0.0 && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("need lambda, alpha > 0, got {lambda}, {alpha}")));
        }
        Ok(Self { lambda, alpha, shift })
    }

    /// Parameters for the cycle count on `n` points, shifted by one.
    pub fn for_permutations(n: usize, m: Truncation, alpha: f64) -> Result<Self> {
        Self::new(lambda_n(n, m, alpha)?, alpha, 1)
    }

    pub fn limit_function(&self, t: f64) -> f64 {
        limit_function(self.alpha, t)
    }
}

/// `G(t) = Gamma(1+alpha)/Gamma(1+alpha t)`.
pub fn limit_function(alpha: f64, t: f64) -> f64 {
    gamma(1.0 + alpha) * rgamma(1.0 + alpha * t)
}

/// `lambda_n = alpha log(2m/(m+1) n)`.
pub fn lambda_n(n: usize, m: Truncation, alpha: f64) -> Result<f64> {
    if n < 1 || !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("need n >= 1 and alpha > 0, got {n}, {alpha}")));
    }
    let lambda = alpha * (m.log_factor() * n as f64).ln();
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda_n = {lambda} is not positive")));
    }
    Ok(lambda)
}

/// `phi_1..=phi_{j_max}` with `1/Gamma(t) = sum_j phi_j t^j / j!`.
pub fn phi_taylor(j_max: usize) -> Result<Vec<f64>> {
    if j_max > PHI_MAX {
        return Err(Error::InvalidParameter(format!("j_max {j_max} exceeds {PHI_MAX}")));
    }
    let consts = NumericConstants::get();
    // 1/Gamma(t) = t exp(gamma t - sum_{k>=2} (-1)^k zeta(k) t^k / k)
    let mut exponent = vec![0.0; j_max.max(1)];
    if j_max > 1 {
        exponent[1] = EULER_GAMMA;
    }
    for (k, e) in exponent.iter_mut().enumerate().skip(2) {
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        *e = sign * consts.zeta(k) / k as f64;
    }
    let series = exp_series(&exponent);
    let mut out = Vec::with_capacity(j_max);
    let mut fact = 1.0;
    for j in 1..=j_max {
        fact *= j as f64;
        out.push(fact * series[j - 1]);
    }
    Ok(out)
}

/// `exp(a)` for a power series with `a[0] = 0`, truncated to `a.len()`.
fn exp_series(a: &[f64]) -> Vec<f64> {
    // b' = a' b
    let n = a.len();
    let mut b = vec![0.0; n];
    if n == 0 {
        return b;
    }
    b[0] = 1.0;
    for k in 1..n {
        let s: f64 = (1..=k).map(|j| j as f64 * a[j] * b[k - j]).sum();
        b[k] = s / k as f64;
    }
    b
}

/// `u(0..=k_max)`, the Taylor coefficients of
/// `exp(lambda (t-1)) t Gamma(1+alpha)/Gamma(1+alpha t)`.
pub fn u_coefficients(lambda: f64, alpha: f64, k_max: usize) -> Result<Vec<f64>> {
    if !(lambda > 0.0 && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("need lambda, alpha > 0, got {lambda}, {alpha}")));
    }
    let j_max = k_max.min(PHI_MAX);
    let phi = phi_taylor(j_max)?;
    // t Gamma(1+alpha)/Gamma(1+alpha t) = Gamma(alpha) sum_i phi_i alpha^i t^i / i!
    let lead = gamma(alpha) * (-lambda).exp();
    let mut out = vec![0.0];
    for k in 1..=k_max {
        let mut s = 0.0;
        for (i, p) in phi.iter().enumerate().take(k) {
            let i = i + 1;
            // C(k,i) lambda^{k-i} / k! = lambda^{k-i} / (i! (k-i)!)
            let log_w = (k - i) as f64 * lambda.ln() - ln_factorial(i as u64) - ln_factorial((k - i) as u64);
            s += p * alpha.powi(i as i32) * log_w.exp();
        }
        out.push(lead * s);
    }
    Ok(out)
}

/// Local limit estimate of `q(k+1)`:
/// `exp(-lambda) lambda^k / k! * Gamma(1+alpha)/Gamma(1+alpha k/lambda)`.
pub fn llt_estimate(n: usize, m: Truncation, alpha: f64, k: usize) -> Result<f64> {
    let lambda = lambda_n(n, m, alpha)?;
    Ok(llt_with_lambda(lambda, alpha, k))
}

pub fn llt_with_lambda(lambda: f64, alpha: f64, k: usize) -> f64 {
    let poisson = (k as f64 * lambda.ln() - lambda - ln_factorial(k as u64)).exp();
    poisson * limit_function(alpha, k as f64 / lambda)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailSide {
    Upper,
    Lower,
}

/// A tail estimate at the integer threshold `j = ceil(x lambda)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailEstimate {
    pub threshold: usize,
    /// `j / lambda`, the value of `x` the formula is evaluated at.
    pub x_eff: f64,
    pub lambda: f64,
    pub estimate: f64,
}

/// Large deviation estimate of `P(X >= j)` (upper) or `P(X < j)` (lower)
/// for `X = K - 1` and `j = ceil(x lambda_n)`. The prefactor `x/|x-1|` is
/// the one that is asymptotically exact for these two events; with `>` and
/// `<=` it would be off by a factor `x`.
pub fn tail_estimate(n: usize, m: Truncation, alpha: f64, x: f64, side: TailSide) -> Result<TailEstimate> {
    let valid = match side {
        TailSide::Upper => x > 1.0,
        TailSide::Lower => x > 0.0 && x < 1.0,
    };
    if !valid {
        return Err(Error::InvalidParameter(format!("x = {x} is outside the {side:?} range")));
    }
    let lambda = lambda_n(n, m, alpha)?;
    let threshold = (x * lambda).ceil() as usize;
    let x_eff = threshold as f64 / lambda;
    if x_eff == 1.0 || (side == TailSide::Lower && x_eff > 1.0) || x_eff == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "rounded threshold x = {x_eff} leaves the {side:?} range"
        )));
    }
    let rate = x_eff * x_eff.ln() - x_eff + 1.0;
    let estimate = (-lambda * rate).exp() / (2.0 * std::f64::consts::PI * x_eff * lambda).sqrt() * x_eff
        / (x_eff - 1.0).abs()
        * limit_function(alpha, x_eff);
    Ok(TailEstimate {
        threshold,
        x_eff,
        lambda,
        estimate,
    })
}

/// The exact counterpart of [`tail_estimate`] for a cycle-count law `d`.
pub fn exact_tail(d: &Distribution, threshold: usize, side: TailSide) -> f64 {
    // K = X + 1
    let cut = threshold + 1;
    d.support()
        .filter(|&k| match side {
            TailSide::Upper => k >= cut,
            TailSide::Lower => k < cut,
        })
        .map(|k| d.at(k))
        .sum()
}

/// `sigma(x) = log G(x)/(x-1)` for `G(x) = sqrt(pi)/(2 Gamma(1+x/2))`.
pub fn shift_sigma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidParameter(format!("x must be positive, got {x}")));
    }
    let log_g = |y: f64| ln_gamma(1.5) - ln_gamma(1.0 + y / 2.0);
    if (x - 1.0).abs() < 1e-5 {
        // log G(x) = -psi(3/2)/2 (x-1) - psi'(3/2)/8 (x-1)^2 + ...
        let c = NumericConstants::get();
        let psi0 = c.polygamma_half(0) + 2.0;
        let psi1 = c.polygamma_half(1) - 4.0;
        return Ok(-psi0 / 2.0 - psi1 / 8.0 * (x - 1.0));
    }
    Ok(log_g(x) / (x - 1.0))
}

/// `P_n(lambda) = sum_k S(n,k) lambda^k`, the `n`-th Poisson moment.
pub fn poisson_moment(n: u32, lambda: f64) -> f64 {
    (0..=n).map(|k| to_f64(&stirling_second(n, k).into()) * lambda.powi(k as i32)).sum()
}

pub fn poisson_moment_exact(n: u32, lambda: &Rational) -> Rational {
    let mut acc = Rational::from_integer(0.into());
    let mut power = Rational::from_integer(1.into());
    for k in 0..=n {
        acc += Rational::from_integer(stirling_second(n, k)) * &power;
        power *= lambda;
    }
    acc
}

/// Both sides of the tail bound
/// `sum_{k >= x lambda} k^n lambda^k / k! <= P_n(x lambda) exp(-lambda (x log x - x))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    pub lhs: f64,
    pub rhs: f64,
}

pub fn poisson_tail_bound(lambda: f64, x: f64, n: u32) -> Result<TailBound> {
    if !(lambda > 0.0 && x > 0.0) {
        return Err(Error::InvalidParameter(format!("need lambda, x > 0, got {lambda}, {x}")));
    }
    let rhs = poisson_moment(n, x * lambda) * (-lambda * (x * x.ln() - x)).exp();
    let start = (x * lambda).ceil() as u64;
    let log_term = |k: u64| {
        let kn = if n == 0 { 0.0 } else { n as f64 * (k.max(1) as f64).ln() };
        if k == 0 && n > 0 {
            f64::NEG_INFINITY
        } else {
            kn + k as f64 * lambda.ln() - ln_factorial(k)
        }
    };
    let mut lhs = 0.0;
    let mut k = start;
    loop {
        let t = log_term(k).exp();
        lhs += t;
        // terms decrease geometrically once k > lambda + n
        if k as f64 > lambda + n as f64 + 10.0 && t < lhs * 1e-18 {
            break;
        }
        k += 1;
    }
    Ok(TailBound { lhs, rhs })
}

/// Largest cumulant order accepted by [`exact_cumulants`].
pub const CUMULANT_MAX: usize = 8;

/// `kappa_1..=kappa_{i_max}` of `d`, from central moments.
pub fn exact_cumulants(d: &Distribution, i_max: usize) -> Result<Vec<f64>> {
    if i_max == 0 || i_max > CUMULANT_MAX {
        return Err(Error::InvalidParameter(format!("cumulant order must be in 1..={CUMULANT_MAX}")));
    }
    let mean = d.mean();
    let probs = d.probabilities();
    let mut mu = vec![0.0; i_max + 1];
    for (i, p) in probs.iter().enumerate() {
        let y = (d.offset() + i) as f64 - mean;
        let mut pw = 1.0;
        for m in mu.iter_mut() {
            *m += p * pw;
            pw *= y;
        }
    }
    // moments-to-cumulants recursion on the centred variable, kappa_1 = 0
    let mut kappa = vec![0.0; i_max + 1];
    for n in 2..=i_max {
        let mut s = mu[n];
        for m in 2..n {
            s -= binom(n - 1, m - 1) * kappa[m] * mu[n - m];
        }
        kappa[n] = s;
    }
    kappa[1] = mean;
    Ok(kappa[1..].to_vec())
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `kappa_i ~ lambda_n - sum_k S(i,k) psi^(k-1)(alpha) alpha^k`.
pub fn asymptotic_cumulants(n: usize, m: Truncation, alpha: f64, i_max: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidParameter("need n >= 2".into()));
    }
    if i_max == 0 || i_max > CUMULANT_MAX {
        return Err(Error::InvalidParameter(format!("cumulant order must be in 1..={CUMULANT_MAX}")));
    }
    let lambda = lambda_n(n, m, alpha)?;
    let c = NumericConstants::get();
    Ok((1..=i_max as u32)
        .map(|i| {
            let corr: f64 = (1..=i)
                .map(|k| to_f64(&stirling_second(i, k).into()) * c.polygamma(k - 1, alpha) * alpha.powi(k as i32))
                .sum();
            lambda - corr
        })
        .collect())
}

/// `max_t |F(t) / (exp(lambda (t-1)) G(t)) - 1|`, where `F(t) = E t^{X - shift}`.
pub fn mod_poisson_deviation(d: &Distribution, params: &ApproxParams, t_grid: &[f64]) -> Result<f64> {
    let probs = d.probabilities();
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        let g = params.limit_function(t);
        if g == 0.0 || !g.is_finite() {
            return Err(Error::InvalidParameter(format!("limit function vanishes at t = {t}")));
        }
        let f: f64 = probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != 0.0)
            .map(|(i, p)| p * t.powi((d.offset() + i) as i32 - params.shift as i32))
            .sum();
        let model = (params.lambda * (t - 1.0)).exp() * g;
        worst = worst.max((f / model - 1.0).abs());
    }
    Ok(worst)
}

/// Kolmogorov distance between `(X - lambda)/sqrt(lambda)` and a standard
/// normal.
pub fn clt_compare(d: &Distribution, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let scale = lambda.sqrt();
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for (i, p) in d.probabilities().iter().enumerate() {
        let z = ((d.offset() + i) as f64 - lambda) / scale;
        let phi = normal_cdf(z);
        worst = worst.max((below - phi).abs());
        below += p;
        worst = worst.max((below - phi).abs());
    }
    Ok(worst.min(1.0))
}

/// Direction of a sequence relative to a target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Trend {
    /// Every step strictly reduces the distance to the target.
    pub monotone: bool,
    /// The last value is closer to the target than the first.
    pub net: bool,
}

pub fn trend_toward(values: &[f64], target: f64) -> Trend {
    let dist: Vec<f64> = values.iter().map(|v| (v - target).abs()).collect();
    Trend {
        monotone: dist.windows(2).all(|w| w[1] < w[0]),
        net: dist.len() >= 2 && dist[dist.len() - 1] < dist[0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::perm::{q_distribution, WeightSequence};
    use num_complex::Complex64;
    use proptest::prelude::*;

    const LAMBDA_26: f64 = 2.505_317_647_048_128; // log(150)/2

    #[test]
    fn phi_values() {
        let phi = phi_taylor(5).unwrap();
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((phi[0] - 1.0).abs() < 1e-15);
        assert!((phi[1] - 2.0 * EULER_GAMMA).abs() < 1e-15);
        assert!((phi[2] - 3.0 * (EULER_GAMMA.powi(2) - z2)).abs() < 1e-14);
        // 1/Gamma(t) at t = 0.3 from the series
        let t: f64 = 0.3;
        let phi = phi_taylor(30).unwrap();
        let mut s = 0.0;
        let mut f = 1.0;
        for (j, p) in phi.iter().enumerate() {
            f *= t / (j + 1) as f64;
            s += p * f;
        }
        assert!((s - rgamma(t)).abs() < 1e-13);
        assert!(phi_taylor(41).is_err());
    }

    /// Complex Lanczos Gamma, independent of the crate's evaluator.
    fn complex_gamma(z: Complex64) -> Complex64 {
        const G: f64 = 7.0;
        const C: [f64; 9] = [
            0.999_999_999_999_809_9,
            676.520_368_121_885_1,
            -1_259.139_216_722_402_8,
            771.323_428_777_653_1,
            -176.615_029_162_140_6,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_572e-6,
            1.505_632_735_149_311_6e-7,
        ];
        if z.re < 0.5 {
            let pi = std::f64::consts::PI;
            return pi / ((pi * z).sin() * complex_gamma(1.0 - z));
        }
        let z = z - 1.0;
        let mut x = Complex64::new(C[0], 0.0);
        for (i, c) in C.iter().enumerate().skip(1) {
            x += c / (z + i as f64);
        }
        let t = z + G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
    }

    #[test]
    fn u_coefficients_match_contour_integral() {
        for &(lambda, alpha) in &[(2.5, 0.5), (1.0, 1.0)] {
            let u = u_coefficients(lambda, alpha, 12).unwrap();
            let g1a = complex_gamma(Complex64::new(1.0 + alpha, 0.0));
            let points = 256;
            for (k, uk) in u.iter().enumerate() {
                // [t^k] f = mean of f(e^{i theta}) e^{-i k theta}
                let mut acc = Complex64::new(0.0, 0.0);
                for p in 0..points {
                    let th = 2.0 * std::f64::consts::PI * p as f64 / points as f64;
                    let t = Complex64::from_polar(1.0, th);
                    let f = (lambda * (t - 1.0)).exp() * t * g1a / complex_gamma(1.0 + alpha * t);
                    acc += f * Complex64::from_polar(1.0, -(k as f64) * th);
                }
                let coeff = acc.re / points as f64;
                assert!((coeff - uk).abs() < 1e-9, "lambda={lambda} alpha={alpha} k={k}: {coeff} vs {uk}");
            }
        }
    }

    #[test]
    fn u_sums_to_one() {
        for &(lambda, alpha) in &[(LAMBDA_26, 0.5), (4.0, 1.5), (0.7, 0.25)] {
            let k_max = (lambda + 12.0 * lambda.sqrt()).ceil() as usize + 1;
            let s: f64 = u_coefficients(lambda, alpha, k_max.min(PHI_MAX)).unwrap().iter().sum();
            assert!((s - 1.0).abs() < 1e-10, "{s}");
        }
    }

    const TABLE_26: [(f64, f64); 8] = [
        (0.0724, 0.0724),
        (0.2022, 0.1974),
        (0.2675, 0.2559),
        (0.2251, 0.2123),
        (0.1361, 0.1276),
        (0.0633, 0.0596),
        (0.0237, 0.0226),
        (0.0073, 0.0072),
    ];

    #[test]
    fn genus_26_table() {
        let u = u_coefficients(LAMBDA_26, 0.5, 8).unwrap();
        for (k, (want_u, want_llt)) in TABLE_26.iter().enumerate() {
            let llt = llt_estimate(75, Truncation::Infinite, 0.5, k).unwrap();
            assert!((u[k + 1] - want_u).abs() < 5e-4, "u({}) = {}", k + 1, u[k + 1]);
            assert!((llt - want_llt).abs() < 5e-4, "llt({k}) = {llt}");
        }
        assert!((lambda_n(75, Truncation::Infinite, 0.5).unwrap() - LAMBDA_26).abs() < 1e-14);
    }

    #[test]
    fn u_and_llt_close_near_the_edges() {
        // the gap peaks near k = lambda at about 0.013; away from it both
        // approximations coincide to leading order
        let u = u_coefficients(LAMBDA_26, 0.5, 12).unwrap();
        let gaps: Vec<f64> = (1..=12).map(|k| (u[k] - llt_with_lambda(LAMBDA_26, 0.5, k - 1)).abs()).collect();
        assert!(gaps[0] < 1e-12);
        assert!(gaps.iter().all(|g| *g < 0.0135), "{gaps:?}");
        assert!(gaps[5..].iter().all(|g| *g < 0.005));
    }

    #[test]
    fn llt_at_the_mean() {
        // k = lambda gives G(1) = 1
        let lambda: f64 = 4.0;
        let direct = (-lambda).exp() * lambda.powi(4) / 24.0;
        assert!((llt_with_lambda(lambda, 0.7, 4) - direct).abs() < 1e-15);
    }

    #[test]
    fn tails_against_exact_law() {
        let n = 10_000;
        let w = WeightSequence::zeta(Truncation::Infinite, rat(1, 2)).unwrap();
        let d = crate::perm::q_distribution_f64(n, &w, None).unwrap();
        for (x, side) in [(2.0, TailSide::Upper), (0.5, TailSide::Lower)] {
            let est = tail_estimate(n, Truncation::Infinite, 0.5, x, side).unwrap();
            let exact = exact_tail(&d, est.threshold, side);
            let r = est.estimate / exact;
            assert!((0.5..=2.0).contains(&r), "{side:?}: {} vs {exact}", est.estimate);
        }
        assert!(tail_estimate(n, Truncation::Infinite, 0.5, 1.0, TailSide::Upper).is_err());
        assert!(tail_estimate(n, Truncation::Infinite, 0.5, 0.5, TailSide::Upper).is_err());
    }

    #[test]
    fn sigma() {
        let s1 = shift_sigma(1.0).unwrap();
        let want = EULER_GAMMA / 2.0 + std::f64::consts::LN_2 - 1.0;
        assert!((s1 - want).abs() < 1e-14);
        for h in [1e-6, -1e-6, 2e-5, -2e-5] {
            assert!((shift_sigma(1.0 + h).unwrap() - s1).abs() < 1e-4);
        }
        assert!(shift_sigma(0.0).is_err());
    }

    #[test]
    fn poisson_moments() {
        assert_eq!(poisson_moment(0, 3.0), 1.0);
        assert_eq!(poisson_moment(2, 3.0), 12.0);
        assert_eq!(poisson_moment(4, 2.0), 94.0);
        assert_eq!(poisson_moment_exact(3, &rat(1, 2)), rat(1, 8) + rat(3, 4) + rat(1, 2));
        assert_eq!(poisson_moment_exact(4, &int(2)), int(94));
    }

    #[test]
    fn tail_bound_grid() {
        for lambda in [1.0, 5.0, 20.0] {
            for x in [1.0, 2.0, 3.0, 4.0] {
                for n in 0..=2 {
                    let b = poisson_tail_bound(lambda, x, n).unwrap();
                    // equality holds at x = 1, n > 0
                    assert!(b.lhs <= b.rhs * (1.0 + 1e-12), "lambda={lambda} x={x} n={n}: {b:?}");
                }
            }
        }
        let e = std::f64::consts::E;
        assert!((poisson_tail_bound(3.0, e, 0).unwrap().rhs - 1.0).abs() < 1e-12);
        for x in [3.0, 4.0] {
            let rhs = [1.0, 5.0, 20.0].map(|l| poisson_tail_bound(l, x, 0).unwrap().rhs);
            assert!(rhs[1] < rhs[0] && rhs[2] < rhs[1]);
            // the moment factor grows polynomially, so for n > 0 the decay
            // only sets in once lambda is large
            for n in 1..=2 {
                let rhs = [5.0, 20.0, 40.0].map(|l| poisson_tail_bound(l, x, n).unwrap().rhs);
                assert!(rhs[1] < rhs[0] && rhs[2] < rhs[1], "x={x} n={n} {rhs:?}");
            }
        }
    }

    #[test]
    fn mean_cycle_count_is_harmonic() {
        let w = WeightSequence::zeta(Truncation::Finite(1), int(1)).unwrap();
        for n in [1, 5, 20, 50] {
            let d = q_distribution(n, &w).unwrap();
            let k = exact_cumulants(&d, 4).unwrap();
            let h: f64 = (1..=n).map(|j| 1.0 / j as f64).sum();
            let var: f64 = (1..=n).map(|j| 1.0 / j as f64 - 1.0 / (j * j) as f64).sum();
            assert!((k[0] - h).abs() < 1e-12);
            assert!((k[1] - var).abs() < 1e-12);
        }
    }

    #[test]
    fn poisson_cumulants() {
        let lambda: f64 = 6.0;
        let w: Vec<f64> = (0..80).map(|k| (k as f64 * lambda.ln() - lambda - ln_factorial(k)).exp()).collect();
        let d = Distribution::from_float_weights(0, w).unwrap();
        for k in exact_cumulants(&d, 6).unwrap() {
            assert!((k - lambda).abs() < 1e-8, "{k}");
        }
        assert!(exact_cumulants(&d, 9).is_err());
    }

    #[test]
    fn cumulant_constants() {
        let z2 = std::f64::consts::PI.powi(2) / 6.0;
        let z3 = zeta(3.0);
        let base = EULER_GAMMA / 2.0 + std::f64::consts::LN_2;
        let k = asymptotic_cumulants(100, Truncation::Infinite, 0.5, 3).unwrap();
        let lambda = 0.5 * 200f64.ln();
        assert!((k[0] - lambda - base).abs() < 1e-13);
        assert!((k[1] - lambda - (base - 0.75 * z2)).abs() < 1e-13);
        assert!((k[2] - lambda - (base - 2.25 * z2 + 1.75 * z3)).abs() < 1e-13);
    }

    #[test]
    fn polygamma_table() {
        let c = NumericConstants::get();
        for m in 0..10 {
            assert!((c.polygamma_one(m) / polygamma(m, 1.0) - 1.0).abs() < 1e-12);
            assert!((c.polygamma_half(m) / polygamma(m, 0.5) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn deviation_shrinks_with_n() {
        let w = WeightSequence::zeta(Truncation::Infinite, rat(1, 2)).unwrap();
        let grid = [0.2, 0.6, 1.0, 1.4, 1.8];
        let devs: Vec<f64> = [50, 200, 800]
            .iter()
            .map(|&n| {
                let d = crate::perm::q_distribution_f64(n, &w, Some(n)).unwrap();
                let p = ApproxParams::for_permutations(n, Truncation::Infinite, 0.5).unwrap();
                mod_poisson_deviation(&d, &p, &grid).unwrap()
            })
            .collect();
        assert!(devs[1] < devs[0] && devs[2] < devs[1], "{devs:?}");
        let d = q_distribution(10, &w).unwrap();
        let p = ApproxParams::for_permutations(10, Truncation::Infinite, 0.5).unwrap();
        assert!(mod_poisson_deviation(&d, &p, &[1.0]).unwrap() < 1e-14);
    }

    #[test]
    fn clt_distance() {
        let lambda: f64 = 25.0;
        let w: Vec<f64> = (0..150).map(|k| (k as f64 * lambda.ln() - lambda - ln_factorial(k)).exp()).collect();
        let d = Distribution::from_float_weights(0, w).unwrap();
        assert!(clt_compare(&d, lambda).unwrap() < 0.1);
        let w = WeightSequence::zeta(Truncation::Infinite, rat(1, 2)).unwrap();
        let dist = |n: usize| {
            let d = crate::perm::q_distribution_f64(n, &w, Some(n)).unwrap();
            let l = lambda_n(n, Truncation::Infinite, 0.5).unwrap();
            clt_compare(&d, l).unwrap()
        };
        assert!(dist(800) < dist(50));
    }

    #[test]
    fn trends() {
        assert_eq!(trend_toward(&[3.0, 2.0, 1.5], 1.0), Trend { monotone: true, net: true });
        assert_eq!(trend_toward(&[3.0, 0.9, 1.5], 1.0), Trend { monotone: false, net: true });
    }

    proptest! {
        #[test]
        fn rate_function_positive(x in 0.01f64..10.0) {
            prop_assume!((x - 1.0).abs() > 1e-6);
            prop_assert!(x * x.ln() - x + 1.0 > 0.0);
        }

        #[test]
        fn cumulant_variance_nonnegative(ws in proptest::collection::vec(0.0f64..1.0, 1..20)) {
            prop_assume!(ws.iter().sum::<f64>() > 1e-6);
            let d = Distribution::from_float_weights(1, ws).unwrap();
            prop_assert!(exact_cumulants(&d, 2).unwrap()[1] >= -1e-12);
            let c = clt_compare(&d, 3.0).unwrap();
            prop_assert!((0.0..=1.0).contains(&c));
        }
    }
}
