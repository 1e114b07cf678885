//! Deterministic covariance sampling for sampled-union regions.
//!
//! Rotations come from a Halton sequence over Givens angles with a seeded
//! Cranley–Patterson shift; power profiles come from a uniform simplex grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matcore::{GeneralMatrix, SymMatrix};

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Sampling budget for region construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    /// Rotation samples (covariance eigenbases).
    pub samples: usize,
    /// Power-split levels per axis.
    pub splits: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            samples: 256,
            splits: 33,
            seed: 0,
        }
    }
}

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base as u64) as f64 * inv;
        index /= base as u64;
        inv /= b;
    }
    out
}

/// Shifted Halton points in `[0,1)^dim`.
pub struct Halton {
    dim: usize,
    shift: Vec<f64>,
    next: u64,
}

impl Halton {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len(), "Halton dimension {dim} too large");
        let shift = if seed == 0 {
            vec![0.0; dim]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..dim).map(|_| rng.gen::<f64>()).collect()
        };
        Self {
            dim,
            shift,
            next: 1,
        }
    }
}

impl Iterator for Halton {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let i = self.next;
        self.next += 1;
        Some(
            (0..self.dim)
                .map(|k| (radical_inverse(i, PRIMES[k]) + self.shift[k]).fract())
                .collect(),
        )
    }
}

pub fn angle_count(t: usize) -> usize {
    t * t.saturating_sub(1) / 2
}

/// Product of Givens rotations over all planes `(i, j)`, `i < j`, in
/// lexicographic order.
pub fn givens_rotation(t: usize, angles: &[f64]) -> GeneralMatrix {
    let mut q = GeneralMatrix::identity(t);
    let mut k = 0;
    for i in 0..t {
        for j in (i + 1)..t {
            let (s, c) = angles[k].sin_cos();
            k += 1;
            // q ← q·G(i, j)
            for r in 0..t {
                let a = q[(r, i)];
                let b = q[(r, j)];
                q[(r, i)] = c * a + s * b;
                q[(r, j)] = -s * a + c * b;
            }
        }
    }
    q
}

/// Deterministic rotation sequence: `count` rotations with Givens angles in
/// `[0, π)` drawn from a shifted Halton sequence. The first is the identity
/// when `seed == 0`.
pub fn rotations(t: usize, count: usize, seed: u64) -> Vec<GeneralMatrix> {
    let d = angle_count(t);
    if d == 0 {
        return vec![GeneralMatrix::identity(t)];
    }
    let mut out = Vec::with_capacity(count);
    if seed == 0 {
        out.push(GeneralMatrix::identity(t));
    }
    out.extend(
        Halton::new(d, seed)
            .take(count.saturating_sub(out.len()))
            .map(|u| {
                let angles: Vec<f64> = u.iter().map(|x| x * std::f64::consts::PI).collect();
                givens_rotation(t, &angles)
            }),
    );
    out
}

/// All compositions of `divisions` into `t` nonnegative parts, scaled so each
/// vector sums to 1.
pub fn simplex_grid(t: usize, divisions: usize) -> Vec<Vec<f64>> {
    fn rec(t: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == t {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(t, left - k, cur, out);
            cur.pop();
        }
    }
    if t == 0 {
        return Vec::new();
    }
    let m = divisions.max(1);
    let mut raw = Vec::new();
    rec(t, m, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|v| v.into_iter().map(|k| k as f64 / m as f64).collect())
        .collect()
}

/// Simplex divisions for `t` antennas: `splits − 1` for `t ≤ 2`, otherwise
/// the finest grid with at most `splits²` points.
pub fn simplex_divisions(t: usize, splits: usize) -> usize {
    let base = splits.saturating_sub(1).max(1);
    if t <= 2 {
        return base;
    }
    let budget = splits * splits;
    let count = |m: usize| -> usize {
        // C(m + t − 1, t − 1)
        let mut c: u128 = 1;
        for i in 1..t {
            c = c * (m + i) as u128 / i as u128;
        }
        c.min(usize::MAX as u128) as usize
    };
    let mut m = base;
    while m > 1 && count(m) > budget {
        m -= 1;
    }
    m
}

/// `R·diag(p)·Rᵀ`.
pub fn covariance(rotation: &GeneralMatrix, powers: &[f64]) -> SymMatrix {
    SymMatrix::diag(powers)
        .sandwich(rotation)
        .expect("rotation is t x t")
}
