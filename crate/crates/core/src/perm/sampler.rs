use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{float::total_weight_f64, WeightSequence};
use crate::{Distribution, Error, Result};

/// Draws weighted permutations one cycle at a time: given `m` remaining
/// points, the cycle through the smallest one has length `l` with
/// probability `theta_l W_{m-l} / (m W_m)`.
pub struct CycleSampler {
    n: usize,
    /// `cdf[m][l-1]`: cumulative first-cycle law with `m` points left.
    cdf: Vec<Vec<f64>>,
}

impl CycleSampler {
    pub fn new(n: usize, weights: &WeightSequence) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        let theta = weights.theta_f64(n)?;
        let w = total_weight_f64(n, &theta);
        if theta.iter().chain(&w).any(|x| !x.is_finite()) {
            return Err(Error::Budget("weights overflow double precision".into()));
        }
        let mut cdf = vec![Vec::new(); n + 1];
        for m in 1..=n {
            if w[m] <= 0.0 {
                continue;
            }
            let mut acc = 0.0;
            let mut row = Vec::with_capacity(m);
            for l in 1..=m {
                acc += theta[l - 1] * w[m - l] / (m as f64 * w[m]);
                row.push(acc);
            }
            cdf[m] = row;
        }
        if cdf[n].is_empty() {
            return Err(Error::InvalidParameter("weights give every permutation weight zero".into()));
        }
        Ok(Self { n, cdf })
    }

    pub fn first_cycle_length<R: Rng>(&self, m: usize, rng: &mut R) -> usize {
        let row = &self.cdf[m];
        let u: f64 = rng.gen::<f64>() * row[m - 1];
        row.partition_point(|&c| c <= u).min(m - 1) + 1
    }

    /// Cycle lengths of one random permutation, in order of discovery.
    pub fn sample_cycle_type<R: Rng>(&self, rng: &mut R) -> Vec<usize> {
        let mut left = self.n;
        let mut out = Vec::new();
        while left > 0 {
            let l = self.first_cycle_length(left, rng);
            out.push(l);
            left -= l;
        }
        out
    }

    pub fn sample_cycle_count<R: Rng>(&self, rng: &mut R) -> usize {
        self.sample_cycle_type(rng).len()
    }
}

/// Empirical law of the number of cycles over `samples` draws seeded by
/// `seed`, on `1..=n`.
pub fn empirical_distribution(n: usize, weights: &WeightSequence, samples: usize, seed: u64) -> Result<Distribution> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let sampler = CycleSampler::new(n, weights)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; n];
    for _ in 0..samples {
        counts[sampler.sample_cycle_count(&mut rng) - 1] += 1;
    }
    Distribution::from_float_weights(1, counts.into_iter().map(|c| c as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, Truncation};

    #[test]
    fn deterministic_for_a_seed() {
        let w = WeightSequence::zeta(Truncation::Finite(1), int(1)).unwrap();
        let a = empirical_distribution(12, &w, 500, 3).unwrap();
        let b = empirical_distribution(12, &w, 500, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_first_cycle() {
        // unweighted permutations: first cycle length is uniform on 1..=n
        let n = 10;
        let w = WeightSequence::zeta(Truncation::Finite(1), int(1)).unwrap();
        let s = CycleSampler::new(n, &w).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 50_000;
        let mut counts = vec![0f64; n];
        for _ in 0..draws {
            counts[s.first_cycle_length(n, &mut rng) - 1] += 1.0;
        }
        let e = draws as f64 / n as f64;
        let chi2: f64 = counts.iter().map(|c| (c - e).powi(2) / e).sum();
        // 9 degrees of freedom, 0.999 quantile
        assert!(chi2 < 27.88, "chi2 = {chi2}");
    }

    #[test]
    fn overflow_is_reported() {
        let huge = crate::exact::parse_rational("1e400").unwrap();
        let w = WeightSequence::custom(vec![int(1), huge]).unwrap();
        assert!(matches!(CycleSampler::new(2, &w), Err(Error::Budget(_))));
    }

    #[test]
    fn forced_cycle_structure() {
        // theta = (0, 1): only fixed-point-free involutions
        let w = WeightSequence::custom(vec![int(0), int(1), int(0), int(0)]).unwrap();
        let s = CycleSampler::new(4, &w).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(s.sample_cycle_type(&mut rng), vec![2, 2]);
        }
    }
}
