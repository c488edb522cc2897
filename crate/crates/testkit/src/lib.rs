//! Independent reference implementations and data generators for tests.
//!
//! Everything here is written directly from the definitions in plain `f64`
//! with quadratic or exponential loops, and shares no code with `cshape`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cross-correlation by direct summation. Entry `w` holds lag
/// `k = w - (p - 1)`, the sum of `x[l + k] * y[l]` over valid `l`.
pub fn direct_cross_correlation(x: &[f64], y: &[f64]) -> Vec<f64> {
    let p = x.len() as isize;
    (-(p - 1)..p)
        .map(|k| {
            (0..p)
                .filter(|l| (0..p).contains(&(l + k)))
                .map(|l| x[(l + k) as usize] * y[l as usize])
                .sum()
        })
        .collect()
}

/// SBD by direct summation: `(dist, shift, aligned)`.
pub fn direct_sbd(x: &[f64], y: &[f64]) -> (f64, isize, Vec<f64>) {
    let p = x.len();
    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nx * ny == 0.0 {
        return (1.0, 0, y.to_vec());
    }
    let cc = direct_cross_correlation(x, y);
    let mut best = 0;
    for w in 1..cc.len() {
        if cc[w] > cc[best] {
            best = w;
        }
    }
    let shift = best as isize - (p as isize - 1);
    (1.0 - cc[best] / (nx * ny), shift, roll_with_zeros(y, shift))
}

/// `out[t] = y[t - shift]`, zero outside the original support.
pub fn roll_with_zeros(y: &[f64], shift: isize) -> Vec<f64> {
    let p = y.len() as isize;
    (0..p)
        .map(|t| {
            let src = t - shift;
            if (0..p).contains(&src) {
                y[src as usize]
            } else {
                0.0
            }
        })
        .collect()
}

/// Circular rotation: `out[t] = y[(t - shift) mod p]`.
pub fn circular_shift(y: &[f64], shift: isize) -> Vec<f64> {
    let p = y.len() as isize;
    (0..p)
        .map(|t| y[(t - shift).rem_euclid(p) as usize])
        .collect()
}

pub fn z_normalize(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    if sd == 0.0 {
        return vec![0.0; x.len()];
    }
    x.iter().map(|v| (v - mean) / sd).collect()
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// eigenvalues in descending order with unit eigenvectors.
pub fn jacobi_eigen(matrix: &[Vec<f64>]) -> Vec<(f64, Vec<f64>)> {
    let n = matrix.len();
    let mut a = matrix.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = a.iter().flatten().map(|x| x * x).sum();
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|j| (a[j][j], v.iter().map(|row| row[j]).collect()))
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    pairs
}

/// `(a, b, c, d)` by visiting every unordered pair. `a`: together in both,
/// `b`: together only in `q`, `c`: together only in `u`, `d`: apart in both.
pub fn brute_pair_counts(u: &[usize], q: &[usize]) -> (u64, u64, u64, u64) {
    let (mut a, mut b, mut c, mut d) = (0, 0, 0, 0);
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            match (u[i] == u[j], q[i] == q[j]) {
                (true, true) => a += 1,
                (false, true) => b += 1,
                (true, false) => c += 1,
                (false, false) => d += 1,
            }
        }
    }
    (a, b, c, d)
}

fn entropy_of(labels: impl Iterator<Item = (usize, usize)>, n: f64) -> f64 {
    let mut counts = std::collections::HashMap::new();
    for key in labels {
        *counts.entry(key).or_insert(0usize) += 1;
    }
    counts
        .values()
        .map(|&k| {
            let p = k as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Variation of information via `2 H(U, Q) - H(U) - H(Q)`.
pub fn vi_entropy_identity(u: &[usize], q: &[usize]) -> f64 {
    let n = u.len() as f64;
    let hu = entropy_of(u.iter().map(|&x| (x, 0)), n);
    let hq = entropy_of(q.iter().map(|&x| (x, 0)), n);
    let joint = entropy_of(u.iter().copied().zip(q.iter().copied()), n);
    2.0 * joint - hu - hq
}

/// Exact two-sided signed-rank p-value for `b - a`, enumerating all sign
/// patterns over the (average) ranks of the non-zero differences.
pub fn exact_wilcoxon_p(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| y - x)
        .filter(|v| *v != 0.0)
        .collect();
    let n = d.len();
    assert!(n <= 20, "enumeration limited to 20 differences");
    if n == 0 {
        return 1.0;
    }
    let mut ranks = vec![0.0; n];
    for i in 0..n {
        let less = d.iter().filter(|v| v.abs() < d[i].abs()).count();
        let equal = d.iter().filter(|v| v.abs() == d[i].abs()).count();
        ranks[i] = less as f64 + (equal as f64 + 1.0) / 2.0;
    }
    let observed: f64 = (0..n).filter(|&i| d[i] > 0.0).map(|i| ranks[i]).sum();
    let (mut low, mut high) = (0u64, 0u64);
    let total = 1u64 << n;
    for mask in 0..total {
        let t: f64 = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ranks[i])
            .sum();
        if t <= observed + 1e-9 {
            low += 1;
        }
        if t >= observed - 1e-9 {
            high += 1;
        }
    }
    (2.0 * low.min(high) as f64 / total as f64).min(1.0)
}

/// Column-wise argmin of a `c x n` matrix, lowest row on ties.
pub fn brute_argmin(d: &[Vec<f64>]) -> Vec<usize> {
    (0..d[0].len())
        .map(|k| {
            let mut best = 0;
            for (i, row) in d.iter().enumerate() {
                if row[k] < d[best][k] {
                    best = i;
                }
            }
            best
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    Sine,
    Square,
    Triangle,
}

impl Template {
    pub const ALL: [Template; 3] = [Template::Sine, Template::Square, Template::Triangle];

    /// The waveform on the middle half of `p` points, zero elsewhere, so a
    /// circular shift of up to `p / 4` never wraps it.
    pub fn pulse(self, p: usize) -> Vec<f64> {
        let (start, width) = (p / 4, p / 2);
        let body = self.sample(width);
        (0..p)
            .map(|t| {
                if (start..start + width).contains(&t) {
                    body[t - start]
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// One period of the waveform sampled at `p` points.
    pub fn sample(self, p: usize) -> Vec<f64> {
        (0..p)
            .map(|t| {
                let phase = t as f64 / p as f64;
                match self {
                    Template::Sine => (2.0 * std::f64::consts::PI * phase).sin(),
                    Template::Square => {
                        if phase < 0.5 {
                            1.0
                        } else {
                            -1.0
                        }
                    }
                    Template::Triangle => {
                        if phase < 0.5 {
                            4.0 * phase - 1.0
                        } else {
                            3.0 - 4.0 * phase
                        }
                    }
                }
            })
            .collect()
    }
}

/// `copies` of each template pulse, circularly shifted by up to `p / 4` and
/// scaled by a factor in `[0.5, 2]`. Rows are raw (not normalized); labels
/// follow template order.
pub fn shape_groups(p: usize, copies: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    groups_from(p, copies, seed, Template::pulse)
}

/// As [`shape_groups`] but with full-period waveforms, where a circular
/// shift changes the phase rather than the position.
pub fn periodic_groups(p: usize, copies: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    groups_from(p, copies, seed, Template::sample)
}

fn groups_from(
    p: usize,
    copies: usize,
    seed: u64,
    waveform: fn(Template, usize) -> Vec<f64>,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = rng(seed);
    let max_shift = (p / 4) as isize;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (label, template) in Template::ALL.iter().enumerate() {
        let base = waveform(*template, p);
        for _ in 0..copies {
            let shift = rng.gen_range(-max_shift..=max_shift);
            let scale = rng.gen_range(0.5..=2.0);
            rows.push(
                circular_shift(&base, shift)
                    .into_iter()
                    .map(|v| v * scale)
                    .collect(),
            );
            labels.push(label);
        }
    }
    (rows, labels)
}

/// A z-normalized series of i.i.d. standard normal-ish values.
pub fn random_series(rng: &mut impl Rng, p: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect();
    z_normalize(&raw)
}

/// Labels in `0..k`, each value used at least once when `n >= k`.
pub fn random_labels(rng: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    if n >= k {
        let mut slots: Vec<usize> = (0..n).collect();
        slots.shuffle(rng);
        for (label, &slot) in slots.iter().take(k).enumerate() {
            labels[slot] = label;
        }
    }
    labels
}

/// `n` rows of length `p` drawn around `k` random centres with unit noise.
pub fn noisy_blobs(rng: &mut impl Rng, n: usize, p: usize, k: usize) -> Vec<Vec<f64>> {
    let centres: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..p).map(|_| rng.gen_range(-3.0..3.0)).collect())
        .collect();
    (0..n)
        .map(|i| {
            centres[i % k]
                .iter()
                .map(|c| c + rng.gen_range(-1.0..1.0))
                .collect()
        })
        .collect()
}
