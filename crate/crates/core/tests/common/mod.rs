#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Independent generator for oracles, unrelated to the library's streams.
pub fn oracle_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Mean and standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    (m, (var / xs.len() as f64).sqrt())
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Asymptotic two-sample KS critical value at level 1%.
pub fn ks_critical_1pct(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.628 * ((n + m) / (n * m)).sqrt()
}

/// Chambers–Mallows–Stuck written out independently of the library, with
/// unit characteristic exponent `exp(-|u|^beta)`.
pub fn cms_oracle<R: Rng>(beta: f64, rng: &mut R) -> f64 {
    use std::f64::consts::PI;
    let v = PI * (rng.random::<f64>() - 0.5);
    let w = -(1.0 - rng.random::<f64>()).ln();
    let t = (beta * v).sin() / v.cos().powf(1.0 / beta);
    t * (((1.0 - beta) * v).cos() / w).powf((1.0 - beta) / beta)
}

/// `max(Exp(rate), floor) / E[max(Exp(rate), floor)]` from an independent
/// generator.
pub fn phi_oracle<R: Rng>(rate: f64, floor: f64, rng: &mut R) -> f64 {
    let e = -(1.0 - rng.random::<f64>()).ln() / rate;
    e.max(floor) / (floor + (-rate * floor).exp() / rate)
}

/// Composite Simpson rule on `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `E[max(X, floor)^q] / norm^q` for `X ~ Exp(rate)` by Simpson's rule.
pub fn phi_moment_oracle(rate: f64, floor: f64, q: f64) -> f64 {
    let norm = floor + (-rate * floor).exp() / rate;
    let atom = floor.powf(q) * (1.0 - (-rate * floor).exp());
    let tail = simpson(
        |x| x.powf(q) * rate * (-rate * x).exp(),
        floor,
        floor + 50.0 / rate,
        400_000,
    );
    (atom + tail) / norm.powf(q)
}

/// Random irregular times and heavy-tailed random-walk values.
pub fn synthetic(seed: u64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = oracle_rng(seed);
    let beta = 1.05 + 0.9 * rng.random::<f64>();
    let mut taus = vec![0.0];
    let mut xs = vec![rng.random::<f64>() * 10.0 - 5.0];
    for _ in 0..n {
        let gap = 0.05 + rng.random::<f64>();
        taus.push(taus.last().unwrap() + gap);
        let step = gap.powf(1.0 / beta) * cms_oracle(beta, &mut rng);
        xs.push(xs.last().unwrap() + step);
    }
    let end = *taus.last().unwrap();
    for t in &mut taus {
        *t /= end;
    }
    (taus, xs)
}
