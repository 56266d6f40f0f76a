//! Cycle counts of random permutations weighted by `prod theta_{cycle length}`.
//!
//! `H_n(k) = [t^k z^n] exp(t sum_j theta_j z^j / j)` is `1/n!` times the total
//! weight of permutations of `n` with `k` cycles, and `q(k) = H_n(k) / W_n`
//! with `W_n = sum_k H_n(k)` is the law of the number of cycles.

mod float;
mod sampler;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use float::{default_k_max, harmonic_sums_f64, q_distribution_f64, total_weight_f64};
pub use sampler::{empirical_distribution, CycleSampler};

use crate::exact::{factorial, partial_zeta, to_f64, zeta_even_coeff, PiGraded, Rational, Truncation};
use crate::special::zeta;
use crate::{Distribution, Error, Result};

/// The weights `theta_1, theta_2, ...`.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSequence {
    /// `theta_j = alpha * zeta_m(2j)`.
    Zeta { m: Truncation, alpha: Rational },
    /// Explicit nonnegative rational weights; `theta_j` for `j` beyond the
    /// list is an error.
    Custom(Vec<Rational>),
}

impl WeightSequence {
    pub fn zeta(m: Truncation, alpha: Rational) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::InvalidParameter("alpha must be positive".into()));
        }
        Ok(WeightSequence::Zeta { m, alpha })
    }

    pub fn custom(theta: Vec<Rational>) -> Result<Self> {
        if theta.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidParameter("weights must be nonnegative".into()));
        }
        Ok(WeightSequence::Custom(theta))
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if let WeightSequence::Custom(t) = self {
            if t.len() < n {
                return Err(Error::InvalidParameter(format!("{} weights given, {n} needed", t.len())));
            }
        }
        Ok(())
    }

    /// Writes `theta_j = c_j * pi^{step * j}` and returns `(c_1..c_n, step)`.
    fn graded(&self, n: usize) -> Result<(Vec<Rational>, u32)> {
        self.check_len(n)?;
        match self {
            WeightSequence::Custom(t) => Ok((t[..n].to_vec(), 0)),
            WeightSequence::Zeta { m: Truncation::Finite(m), alpha } => {
                Ok(((1..=n).map(|j| alpha * partial_zeta(*m, 2 * j as u32)).collect(), 0))
            }
            WeightSequence::Zeta {
                m: Truncation::Infinite,
                alpha,
            } => {
                let c = (1..=n)
                    .map(|j| Ok(alpha * zeta_even_coeff(2 * j as u32)?))
                    .collect::<Result<Vec<_>>>()?;
                Ok((c, 2))
            }
        }
    }

    /// `theta_j` as an exact pi-graded value.
    pub fn theta(&self, j: usize) -> Result<PiGraded> {
        let (c, step) = self.graded(j)?;
        Ok(PiGraded::monomial(step * j as u32, c[j - 1].clone()))
    }

    /// `theta_1..theta_n` as floats.
    pub fn theta_f64(&self, n: usize) -> Result<Vec<f64>> {
        self.check_len(n)?;
        Ok(match self {
            WeightSequence::Custom(t) => t[..n].iter().map(to_f64).collect(),
            WeightSequence::Zeta { m, alpha } => {
                let a = to_f64(alpha);
                (1..=n)
                    .map(|j| match m {
                        Truncation::Infinite => a * zeta(2.0 * j as f64),
                        Truncation::Finite(mm) => a * (1..=*mm).map(|i| (i as f64).powi(-2 * j as i32)).sum::<f64>(),
                    })
                    .collect()
            }
        })
    }
}

/// Rational parts of `H_n(1..=k_max)`; every value carries `pi^{step * n}`.
fn harmonic_coefficients(n: usize, c: &[Rational], k_max: usize) -> Vec<Rational> {
    // a[j] = c_j / j, power series truncated at z^n
    let a: Vec<Rational> = (0..=n)
        .map(|j| if j == 0 { Rational::zero() } else { &c[j - 1] / Rational::from_integer(BigInt::from(j)) })
        .collect();
    let mut out = Vec::with_capacity(k_max);
    // q = A^k / k!
    let mut q = a.clone();
    for k in 1..=k_max.min(n) {
        if k > 1 {
            let mut next = vec![Rational::zero(); n + 1];
            for (i, qi) in q.iter().enumerate().skip(k - 1) {
                if qi.is_zero() {
                    continue;
                }
                for j in 1..=n - i {
                    if !a[j].is_zero() {
                        next[i + j] += qi * &a[j];
                    }
                }
            }
            let kk = Rational::from_integer(BigInt::from(k));
            q = next.into_iter().map(|x| x / &kk).collect();
        }
        out.push(q[n].clone());
    }
    out.resize(k_max, Rational::zero());
    out
}

/// `H_n(k)` for `k = 1..=k_max`, exactly.
pub fn harmonic_sums(n: usize, weights: &WeightSequence, k_max: usize) -> Result<Vec<PiGraded>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let (c, step) = weights.graded(n)?;
    Ok(harmonic_coefficients(n, &c, k_max)
        .into_iter()
        .map(|x| PiGraded::monomial(step * n as u32, x))
        .collect())
}

/// Exact law of the number of cycles on `1..=n`.
pub fn q_distribution(n: usize, weights: &WeightSequence) -> Result<Distribution> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let (c, _) = weights.graded(n)?;
    let h = harmonic_coefficients(n, &c, n);
    Distribution::from_weights(1, h)
}

/// Law of the number of cycles by listing all `n!` permutations; `n <= 8`.
pub fn brute_force_q(n: usize, weights: &WeightSequence) -> Result<Distribution> {
    if n == 0 || n > 8 {
        return Err(Error::InvalidParameter(format!("brute force needs 1 <= n <= 8, got {n}")));
    }
    let thetas = (1..=n).map(|j| weights.theta(j)).collect::<Result<Vec<_>>>()?;
    let mut by_k = vec![PiGraded::zero(); n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut visit = |p: &[usize]| {
        let mut seen = vec![false; n];
        let mut w = PiGraded::rational(Rational::one());
        let mut cycles = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = p[x];
                len += 1;
            }
            cycles += 1;
            w = &w * &thetas[len - 1];
        }
        by_k[cycles - 1] += &w;
    };
    // Heap's algorithm
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let total: PiGraded = by_k.iter().cloned().sum();
    let masses = by_k.iter().map(|x| x.ratio(&total)).collect::<Result<Vec<_>>>()?;
    debug_assert!(factorial(n as u32) > BigInt::zero());
    Distribution::exact(1, masses)
}

/// `g_m(z) = sum_{k=1}^{terms} zeta_m(2k) z^k / k`.
pub fn g_m_series(z: f64, m: Truncation, terms: usize) -> Result<f64> {
    if z.abs() >= 1.0 {
        return Err(Error::InvalidParameter(format!("series diverges at |z| = {}", z.abs())));
    }
    let mut acc = 0.0;
    let mut zk = 1.0;
    for k in 1..=terms {
        zk *= z;
        let zeta_k = match m {
            Truncation::Infinite => zeta(2.0 * k as f64),
            Truncation::Finite(mm) => (1..=mm).map(|i| (i as f64).powi(-2 * k as i32)).sum(),
        };
        acc += zeta_k * zk / k as f64;
    }
    Ok(acc)
}

/// Closed form of `g_m`: `-sum_{nu <= m} log(1 - z/nu^2)`, and
/// `log(pi sqrt z / sin(pi sqrt z))` for `m = infinity`.
pub fn g_m_closed(z: f64, m: Truncation) -> Result<f64> {
    if z.abs() >= 1.0 {
        return Err(Error::InvalidParameter(format!("series diverges at |z| = {}", z.abs())));
    }
    Ok(match m {
        Truncation::Finite(mm) => -(1..=mm).map(|nu| (1.0 - z / (nu as f64).powi(2)).ln()).sum::<f64>(),
        Truncation::Infinite => {
            if z == 0.0 {
                0.0
            } else if z > 0.0 {
                let x = std::f64::consts::PI * z.sqrt();
                (x / x.sin()).ln()
            } else {
                let x = std::f64::consts::PI * (-z).sqrt();
                (x / x.sinh()).ln()
            }
        }
    })
}
