//! Contributions of the graphs with a single vertex and `k` loops, by the
//! partition-indexed fast formula.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{apply_zeta, graph_polynomial};
use crate::correlators::{correlator, correlator_f64};
use crate::exact::{factorial, partial_zeta, partitions, pow2, zeta_truncated, PiGraded, Rational, Truncation};
use crate::graphs::StableGraph;
use crate::special::{ln_factorial, zeta};
use crate::{Distribution, Error, Result};

fn check(g: u32, k: u32) -> Result<()> {
    if g < 2 || k == 0 || k > g {
        return Err(Error::InvalidParameter(format!("need g >= 2 and 1 <= k <= g, got g={g}, k={k}")));
    }
    Ok(())
}

fn fact(n: i64) -> Rational {
    Rational::from_integer(factorial(n as u32))
}

fn pow3(e: u32) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(3), e as usize))
}

/// Vectors `D` of length `k` summing to `total`, one per multiset, with
/// the number of distinct orderings.
fn sorted_vectors(total: u32, k: usize) -> Vec<(Vec<u32>, BigInt)> {
    partitions(total, k)
        .map(|mut p| {
            p.resize(k, 0);
            let mut mult = factorial(k as u32);
            let mut i = 0;
            while i < p.len() {
                let mut j = i;
                while j < p.len() && p[j] == p[i] {
                    j += 1;
                }
                mult /= factorial((j - i) as u32);
                i = j;
            }
            (p, mult)
        })
        .collect()
}

/// Every `(d_{1,1}, d_{1,2}, ..., d_{k,1}, d_{k,2})` with `d_{j,1} + d_{j,2} = D_j`,
/// up to swapping within a pair, with the number of splittings each stands for.
/// Correlators and weights are symmetric under such swaps.
fn splittings(big_d: &[u32]) -> Vec<(Vec<u32>, u32)> {
    let mut out = vec![(Vec::with_capacity(2 * big_d.len()), 1)];
    for &dj in big_d {
        let mut next = Vec::with_capacity(out.len() * (dj as usize / 2 + 1));
        for (prefix, mult) in &out {
            for a in 0..=dj / 2 {
                let mut v = prefix.clone();
                v.push(a);
                v.push(dj - a);
                next.push((v, if 2 * a == dj { *mult } else { 2 * mult }));
            }
        }
        out = next;
    }
    out
}

/// Normalized correlator sum `c_{G,k}(D)` for a vertex of genus `G` with
/// `k` loops.
fn c_coefficient(genus: u32, k: u32, big_d: &[u32]) -> Result<Rational> {
    let (gg, kk) = (genus as i64, k as i64);
    let mut sum = Rational::zero();
    for (d, mult) in splittings(big_d) {
        let c = correlator(genus, &d)?;
        if c.is_zero() {
            continue;
        }
        let mut w = Rational::from_integer(BigInt::from(mult));
        for (j, &dj) in big_d.iter().enumerate() {
            w *= Rational::new(factorial(2 * dj + 2), factorial(d[2 * j]) * factorial(d[2 * j + 1]));
        }
        sum += c * w;
    }
    let pref = fact(gg) * fact(3 * gg - 3 + 2 * kk) / fact(6 * gg + 4 * kk - 5) * pow3(genus)
        / pow2(3 * gg - 6 + 5 * kk);
    Ok(pref * sum)
}

fn fast_path(g: u32, k: u32, m: Truncation, with_correlators: bool) -> Result<PiGraded> {
    check(g, k)?;
    let (gg, kk) = (g as i64, k as i64);
    let a = fact(4 * gg - 4) / fact(6 * gg - 7) * pow2(gg + 1) / fact(kk);
    let b = fact(6 * gg - 2 * kk - 5) / (fact(gg - kk) * fact(3 * gg - 3 - kk)) * pow2(3 * gg - 6 + 2 * kk)
        / pow3(g - k);
    let mut sum = PiGraded::zero();
    for (big_d, mult) in sorted_vectors(3 * g - 3 - k, k as usize) {
        let c = if with_correlators {
            c_coefficient(g - k, k, &big_d)?
        } else {
            Rational::from_integer(BigInt::from(1))
        };
        if c.is_zero() {
            continue;
        }
        let mut term = PiGraded::rational(c * Rational::from_integer(mult) / pow2(kk));
        for &dj in &big_d {
            let z = zeta_truncated(m, 2 * dj + 2)?;
            term = &term * &z.scale(&Rational::new(BigInt::from(1), BigInt::from(dj + 1)));
        }
        sum += &term;
    }
    Ok(sum.scale(&(a * b)))
}

/// `V_{m,k}(g)`: contribution of the single-vertex graph with `k` loops
/// when all loop weights are at most `m`.
pub fn single_vertex_contribution(g: u32, k: u32, m: Truncation) -> Result<PiGraded> {
    fast_path(g, k, m, true)
}

/// `V_{m,k}(g)` straight from the graph polynomial.
pub fn single_vertex_direct(g: u32, k: u32, m: Truncation) -> Result<PiGraded> {
    check(g, k)?;
    apply_zeta(&graph_polynomial(&StableGraph::single_vertex(g, k)?)?, m)
}

/// `V~_{infinity,k}(g)`: the fast formula with every `c_{g-k,k}(D)`
/// replaced by 1.
pub fn single_vertex_tilde(g: u32, k: u32) -> Result<PiGraded> {
    fast_path(g, k, Truncation::Infinite, false)
}

/// `q~_g(k) = V~_{infinity,k}(g) / sum_j V~_{infinity,j}(g)` for `k = 1..=g`.
pub fn approximate_distribution_qtilde(g: u32) -> Result<Distribution> {
    check(g, 1)?;
    let vals = (1..=g).map(|k| single_vertex_tilde(g, k)).collect::<Result<Vec<_>>>()?;
    let total: PiGraded = vals.iter().cloned().sum();
    let masses = vals.iter().map(|v| v.ratio(&total)).collect::<Result<Vec<_>>>()?;
    Distribution::exact(1, masses)
}

/// `V_{m,k}(g) / V_m(g)` for `k = 1..=g`.
pub fn single_vertex_distribution(g: u32, m: Truncation) -> Result<Distribution> {
    check(g, 1)?;
    let vals = (1..=g)
        .map(|k| single_vertex_contribution(g, k, m))
        .collect::<Result<Vec<_>>>()?;
    let total: PiGraded = vals.iter().cloned().sum();
    let masses = vals.iter().map(|v| v.ratio(&total)).collect::<Result<Vec<_>>>()?;
    Distribution::exact(1, masses)
}

/// `V_m(g) / V_infinity(g)`: the share of single-vertex multicurves with
/// all weights at most `m`.
pub fn bounded_weight_ratio(g: u32, m: u32) -> Result<f64> {
    check(g, 1)?;
    let mut bounded = 0.0;
    let mut all = 0.0;
    for k in 1..=g {
        bounded += single_vertex_contribution(g, k, Truncation::Finite(m))?.to_f64();
        all += single_vertex_contribution(g, k, Truncation::Infinite)?.to_f64();
    }
    Ok(bounded / all)
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Floating point `V_{m,k}(g)` using the float correlator engine; meant for
/// genera where exact arithmetic becomes expensive.
pub fn single_vertex_contribution_f64(g: u32, k: u32, m: Truncation) -> Result<f64> {
    check(g, k)?;
    let (gg, kk) = (g as u64, k as u64);
    let ln2 = std::f64::consts::LN_2;
    let ln3 = 3f64.ln();
    let ln_a = ln_factorial(4 * gg - 4) - ln_factorial(6 * gg - 7) + (gg + 1) as f64 * ln2 - ln_factorial(kk);
    let ln_b = ln_factorial(6 * gg - 2 * kk - 5) - ln_factorial(gg - kk) - ln_factorial(3 * gg - 3 - kk)
        + (3 * gg + 2 * kk) as f64 * ln2
        - 6.0 * ln2
        - (gg - kk) as f64 * ln3;
    let genus = g - k;
    let (cg, ck) = (genus as u64, kk);
    let ln_pref_c = ln_factorial(cg) + ln_factorial(3 * cg + 2 * ck - 3) - ln_factorial(6 * cg + 4 * ck - 5)
        + cg as f64 * ln3
        - (3.0 * cg as f64 - 6.0 + 5.0 * ck as f64) * ln2;
    let top = 2 * (3 * g - 3 - k) as u64 + 2;
    let lf: Vec<f64> = (0..=top).map(ln_factorial).collect();
    let mut terms = Vec::new();
    for (big_d, mult) in sorted_vectors(3 * g - 3 - k, k as usize) {
        let mut inner = Vec::new();
        for (d, split_mult) in splittings(&big_d) {
            let c = correlator_f64(genus, &d)?;
            if c == 0.0 {
                continue;
            }
            let mut w = c.ln() + (split_mult as f64).ln();
            for (j, &dj) in big_d.iter().enumerate() {
                w += lf[2 * dj as usize + 2] - lf[d[2 * j] as usize] - lf[d[2 * j + 1] as usize];
            }
            inner.push(w);
        }
        if inner.is_empty() {
            continue;
        }
        let mut t = log_sum_exp(&inner) + crate::exact::to_f64(&Rational::from_integer(mult)).ln()
            - kk as f64 * ln2;
        for &dj in &big_d {
            let z = match m {
                Truncation::Finite(mm) => crate::exact::to_f64(&partial_zeta(mm, 2 * dj + 2)),
                Truncation::Infinite => zeta(2.0 * dj as f64 + 2.0),
            };
            t += z.ln() - ((dj + 1) as f64).ln();
        }
        terms.push(t);
    }
    Ok((ln_a + ln_b + ln_pref_c + log_sum_exp(&terms)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn genus_two_values() {
        assert_eq!(
            single_vertex_contribution(2, 1, Truncation::Infinite).unwrap(),
            PiGraded::monomial(6, rat(16, 945))
        );
        assert_eq!(single_vertex_contribution(2, 1, Truncation::Finite(1)).unwrap(), PiGraded::rational(int(16)));
        assert!(single_vertex_contribution(2, 3, Truncation::Infinite).is_err());
    }

    #[test]
    fn fast_equals_direct_small() {
        for g in 2..=3 {
            for k in 1..=g {
                for m in [Truncation::Finite(1), Truncation::Finite(2), Truncation::Infinite] {
                    assert_eq!(
                        single_vertex_contribution(g, k, m).unwrap(),
                        single_vertex_direct(g, k, m).unwrap(),
                        "g={g} k={k} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn float_path_agrees() {
        for g in 2..=6 {
            for k in 1..=g {
                for m in [Truncation::Finite(1), Truncation::Infinite] {
                    let exact = single_vertex_contribution(g, k, m).unwrap().to_f64();
                    let float = single_vertex_contribution_f64(g, k, m).unwrap();
                    assert!((float / exact - 1.0).abs() < 1e-10, "g={g} k={k}");
                }
            }
        }
    }

    #[test]
    fn qtilde_is_a_distribution() {
        for g in 2..=6 {
            let q = approximate_distribution_qtilde(g).unwrap();
            assert_eq!(q.len(), g as usize);
            assert!(q.exact_masses().unwrap().iter().all(|x| *x > Rational::zero()));
        }
    }
}
