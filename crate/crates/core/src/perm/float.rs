use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::WeightSequence;
use crate::{Distribution, Error, Result};

/// Above this size power series products go through FFT.
const FFT_THRESHOLD: usize = 512;

/// `W_0..=W_n` from `m W_m = sum_{l=1}^m theta_l W_{m-l}`, `W_0 = 1`.
pub fn total_weight_f64(n: usize, theta: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    w[0] = 1.0;
    for m in 1..=n {
        let s: f64 = (1..=m).map(|l| theta[l - 1] * w[m - l]).sum();
        w[m] = s / m as f64;
    }
    w
}

/// `k_max = min(n, ceil(22 log n))`, at least 1.
pub fn default_k_max(n: usize) -> usize {
    let k = (22.0 * (n as f64).ln()).ceil() as usize;
    k.clamp(1, n.max(1))
}

/// `H_n(1..=k_max)` in floating point.
pub fn harmonic_sums_f64(n: usize, theta: &[f64], k_max: usize) -> Result<Vec<f64>> {
    if n == 0 || theta.len() < n {
        return Err(Error::InvalidParameter(format!("need n >= 1 and n weights, got n={n}")));
    }
    let a: Vec<f64> = (0..=n).map(|j| if j == 0 { 0.0 } else { theta[j - 1] / j as f64 }).collect();
    let k_max = k_max.min(n);
    let mut out = Vec::with_capacity(k_max);
    let mut q = a.clone();
    out.push(q[n]);
    if n > FFT_THRESHOLD {
        let len = (2 * n + 2).next_power_of_two();
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(len);
        let inv = planner.plan_fft_inverse(len);
        let mut fa: Vec<Complex<f64>> = a.iter().map(|&x| Complex::new(x, 0.0)).collect();
        fa.resize(len, Complex::new(0.0, 0.0));
        fwd.process(&mut fa);
        for k in 2..=k_max {
            let mut buf: Vec<Complex<f64>> = q.iter().map(|&x| Complex::new(x, 0.0)).collect();
            buf.resize(len, Complex::new(0.0, 0.0));
            fwd.process(&mut buf);
            for (b, f) in buf.iter_mut().zip(&fa) {
                *b *= f;
            }
            inv.process(&mut buf);
            let scale = 1.0 / (len as f64 * k as f64);
            for (i, x) in q.iter_mut().enumerate() {
                // coefficients below z^k vanish identically
                *x = if i < k { 0.0 } else { (buf[i].re * scale).max(0.0) };
            }
            out.push(q[n]);
        }
    } else {
        for k in 2..=k_max {
            let mut next = vec![0.0; n + 1];
            for i in (k - 1)..=n {
                let qi = q[i];
                if qi == 0.0 {
                    continue;
                }
                for j in 1..=n - i {
                    next[i + j] += qi * a[j];
                }
            }
            for x in next.iter_mut() {
                *x /= k as f64;
            }
            q = next;
            out.push(q[n]);
        }
    }
    if out.iter().any(|x| !x.is_finite()) {
        return Err(Error::Invariant("harmonic sums left the floating point range".into()));
    }
    Ok(out)
}

/// Floating point law of the number of cycles, truncated at `k_max`
/// (default `min(n, ceil(22 log n))`) and renormalized.
pub fn q_distribution_f64(n: usize, weights: &WeightSequence, k_max: Option<usize>) -> Result<Distribution> {
    let theta = weights.theta_f64(n)?;
    let k_max = k_max.unwrap_or_else(|| default_k_max(n));
    let h = harmonic_sums_f64(n, &theta, k_max)?;
    Distribution::from_float_weights(1, h)
}
