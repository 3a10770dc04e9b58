#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let dist = Normal::new(0.0, 1.0).unwrap();
    (0..n).map(|_| dist.sample(rng)).collect()
}

pub fn uniform(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let dist = Uniform::new(0.0, 1.0).unwrap();
    (0..n).map(|_| dist.sample(rng)).collect()
}

/// Sine with a random period and phase plus a little Gaussian noise.
pub fn sine_plus_noise(rng: &mut ChaCha8Rng, n: usize, noise: f64) -> Vec<f64> {
    let period = rng.random_range(8.0..64.0);
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let dist = Normal::new(0.0, noise).unwrap();
    (0..n)
        .map(|i| (std::f64::consts::TAU * i as f64 / period + phase).sin() + dist.sample(rng))
        .collect()
}

/// One of the three families, chosen by `kind % 3`.
pub fn mixed(rng: &mut ChaCha8Rng, kind: usize, n: usize) -> Vec<f64> {
    match kind % 3 {
        0 => gaussian(rng, n),
        1 => uniform(rng, n),
        _ => sine_plus_noise(rng, n, 0.2),
    }
}

pub fn sample_sd(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Independent reference implementations written straight from the
/// definitions, materialising every template as its own vector.
pub mod oracle {
    fn templates(v: &[f64], len: usize, count: usize) -> Vec<Vec<f64>> {
        (0..count).map(|i| v[i..i + len].to_vec()).collect()
    }

    fn within(a: &[f64], b: &[f64], r: f64) -> bool {
        let mut d = 0.0f64;
        for k in 0..a.len() {
            let diff = (a[k] - b[k]).abs();
            if diff > d {
                d = diff;
            }
        }
        d <= r
    }

    /// (B, A): ordered non-self pairs over the first N - m templates.
    pub fn sampen_counts(v: &[f64], m: usize, r: f64) -> (u64, u64) {
        let count = v.len() - m;
        let short = templates(v, m, count);
        let long = templates(v, m + 1, count);
        let mut b = 0;
        let mut a = 0;
        for i in 0..count {
            for j in 0..count {
                if i != j && within(&short[i], &short[j], r) {
                    b += 1;
                }
                if i != j && within(&long[i], &long[j], r) {
                    a += 1;
                }
            }
        }
        (b, a)
    }

    pub fn sampen(v: &[f64], m: usize, r: f64) -> Option<f64> {
        let (b, a) = sampen_counts(v, m, r);
        if a == 0 || b == 0 {
            return None;
        }
        Some(-(a as f64 / b as f64).ln())
    }

    /// Phi^p: mean over the N - p + 1 templates of ln(C_i^p), self-matches included.
    pub fn phi(v: &[f64], p: usize, r: f64) -> f64 {
        let count = v.len() - p + 1;
        let t = templates(v, p, count);
        let mut total = 0.0;
        for i in 0..count {
            let c = (0..count).filter(|&j| within(&t[i], &t[j], r)).count();
            total += (c as f64 / count as f64).ln();
        }
        total / count as f64
    }

    pub fn apen(v: &[f64], m: usize, r: f64) -> f64 {
        phi(v, m, r) - phi(v, m + 1, r)
    }
}
