//! Fuzzy preference relations over channels and the least-deviation
//! priority vector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative indices below this are floored before forming relative
/// differences.
pub const INDEX_FLOOR: f64 = 1e-9;
/// Absolute differences smaller than this count as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Preference-strength transform `g(q) = 9^(2q - 1)`.
pub fn preference_transform(q: f64) -> f64 {
    9f64.powf(2.0 * q - 1.0)
}

/// Order-independent sum, invariant under any permutation of the terms.
///
/// Terms are scaled by a power of two fixed by the largest magnitude,
/// truncated to integers with about 100 significant bits and added exactly
/// as two 50-bit limbs. Non-finite input falls back to a sorted sum.
fn symmetric_sum(terms: &mut [f64]) -> f64 {
    let max = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    if max == 0.0 || !max.is_finite() || terms.len() > 1 << 10 {
        terms.sort_unstable_by(f64::total_cmp);
        return terms.iter().sum();
    }
    // 2^(100 - e) applied in two steps so neither factor overflows
    let e = ((max.to_bits() >> 52) as i32 - 1023).max(-1074);
    let shift = 100 - e;
    let (s1, s2) = (pow2(shift / 2), pow2(shift - shift / 2));
    let (limb, inv_limb) = (pow2(50), pow2(-50));
    let (mut hi, mut lo) = (0_i64, 0_i64);
    for &t in terms.iter() {
        let x = t * s1 * s2;
        let h = (x * inv_limb) as i64;
        hi += h;
        lo += (x - h as f64 * limb) as i64;
    }
    (((hi as i128) << 50) + lo as i128) as f64 / s1 / s2
}

fn pow2(k: i32) -> f64 {
    f64::from_bits(((k + 1023) as u64) << 52)
}

/// Complementary preference matrix `Q = [q_ij]` with `q_ij + q_ji = 1` and
/// `q_ii = 0.5`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FprMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl FprMatrix {
    /// Validates a row-major `size × size` matrix.
    pub fn new(size: usize, entries: Vec<f64>) -> Result<Self> {
        if size == 0 {
            return Err(Error::Empty("preference matrix"));
        }
        if entries.len() != size * size {
            return Err(Error::invalid(format!("expected {} entries, got {}", size * size, entries.len())));
        }
        for i in 0..size {
            for j in 0..size {
                let q = entries[i * size + j];
                if !(0.0..=1.0).contains(&q) {
                    return Err(Error::invalid(format!("q[{i}][{j}] = {q} outside [0, 1]")));
                }
                let back = entries[j * size + i];
                if (q + back - 1.0).abs() > 1e-12 {
                    return Err(Error::invalid(format!("q[{i}][{j}] + q[{j}][{i}] = {} != 1", q + back)));
                }
            }
        }
        Ok(FprMatrix { size, entries })
    }

    pub fn uniform(size: usize) -> Self {
        FprMatrix {
            size,
            entries: vec![0.5; size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Relabels alternatives: entry `(i, j)` of the result is entry
    /// `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.size;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        FprMatrix { size: n, entries }
    }
}

/// Positive weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorityVector(Vec<f64>);

impl PriorityVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty("priority vector"));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::invalid("priority weights must be finite and positive"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("priority weights sum to {sum}")));
        }
        Ok(PriorityVector(weights))
    }

    pub fn uniform(size: usize) -> Self {
        PriorityVector(vec![1.0 / size as f64; size])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the largest weight, lowest index on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &w) in self.0.iter().enumerate() {
            if w > self.0[best] {
                best = i;
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreferenceParams {
    /// Weight of the absolute versus relative difference, in `[0, 1]`.
    pub zeta: f64,
    /// Stopping threshold on `max |φ|`.
    pub eta: f64,
    pub max_iters: usize,
}

impl Default for PreferenceParams {
    fn default() -> Self {
        PreferenceParams {
            zeta: 0.5,
            eta: 0.8,
            max_iters: 10_000,
        }
    }
}

impl PreferenceParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.zeta) {
            return Err(Error::invalid(format!("zeta {} outside [0, 1]", self.zeta)));
        }
        if !(self.eta > 0.0) {
            return Err(Error::invalid(format!("eta {} must be positive", self.eta)));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters must be positive"));
        }
        Ok(())
    }
}

/// Builds the preference matrix from relative indices (max entry 1).
///
/// For `Ψ = V_i - V_j` and `Λ = Ψ / V_j`, `q_ij` is
/// `min(ζΨ + (1-ζ)Λ + 0.5, 1)` when `Ψ > 0`, `0.5` on ties, and the
/// complement of `q_ji` when `Ψ < 0`.
pub fn build_fpr(indices: &[f64], zeta: f64) -> Result<FprMatrix> {
    if indices.is_empty() {
        return Err(Error::Empty("relative indices"));
    }
    if !(0.0..=1.0).contains(&zeta) {
        return Err(Error::invalid(format!("zeta {zeta} outside [0, 1]")));
    }
    if indices.iter().any(|v| !(0.0..=1.0 + 1e-12).contains(v)) {
        return Err(Error::invalid("relative indices must lie in [0, 1]"));
    }
    let best = indices.iter().copied().fold(0.0_f64, f64::max);
    if (best - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("largest relative index is {best}, expected 1")));
    }

    let upper = |vi: f64, vj: f64| {
        let psi = vi - vj;
        let lambda = psi / vj.max(INDEX_FLOOR);
        (zeta * psi + (1.0 - zeta) * lambda + 0.5).min(1.0)
    };

    let n = indices.len();
    let mut entries = vec![0.5; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let psi = indices[i] - indices[j];
            let q = if psi.abs() < TIE_TOLERANCE {
                0.5
            } else if psi > 0.0 {
                upper(indices[i], indices[j])
            } else {
                1.0 - upper(indices[j], indices[i])
            };
            entries[i * n + j] = q.clamp(0.0, 1.0);
        }
    }
    FprMatrix::new(n, entries)
}

/// Deviation residuals `φ_i = Σ_j [g(q_ij) w_j/w_i − g(q_ji) w_i/w_j]`.
pub fn deviation_residuals(q: &FprMatrix, w: &[f64]) -> Vec<f64> {
    residuals(&transformed(q), q.size(), w)
}

fn transformed(q: &FprMatrix) -> Vec<f64> {
    q.entries().iter().map(|&x| preference_transform(x)).collect()
}

fn residuals(g: &[f64], n: usize, w: &[f64]) -> Vec<f64> {
    let inv: Vec<f64> = w.iter().map(|x| 1.0 / x).collect();
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    (0..n)
        .map(|i| {
            for j in 0..n {
                a[j] = g[i * n + j] * w[j];
                b[j] = g[j * n + i] * inv[j];
            }
            symmetric_sum(&mut a) * inv[i] - w[i] * symmetric_sum(&mut b)
        })
        .collect()
}

/// Least-deviation priority vector.
///
/// Starting from `w0`, repeatedly rescales the weight with the largest
/// `|φ|` (lowest index on ties) by the factor that zeroes its residual,
/// renormalising after each step, until every `|φ_m| <= η`.
pub fn least_deviation(q: &FprMatrix, params: &PreferenceParams, w0: &PriorityVector) -> Result<PriorityVector> {
    params.validate()?;
    let n = q.size();
    if w0.len() != n {
        return Err(Error::invalid(format!(
            "initial vector has {} entries for a {n}x{n} matrix",
            w0.len()
        )));
    }
    let g = transformed(q);
    let mut w = w0.weights().to_vec();
    let mut num = Vec::with_capacity(n);
    let mut den = Vec::with_capacity(n);
    let mut scratch = w.clone();

    for iteration in 0..=params.max_iters {
        let phi = residuals(&g, n, &w);
        let (lambda, worst) = phi
            .iter()
            .enumerate()
            .fold((0, 0.0_f64), |(bi, bv), (i, p)| if p.abs() > bv { (i, p.abs()) } else { (bi, bv) });
        if worst <= params.eta {
            return Ok(PriorityVector(w));
        }
        if iteration == params.max_iters {
            return Err(Error::NotConverged {
                iterations: iteration,
                max_residual: worst,
                last: PriorityVector(w),
            });
        }

        // w_λ ← sqrt(Σ_{j≠λ} g_λj w_j / Σ_{j≠λ} g_jλ / w_j) zeroes φ_λ
        num.clear();
        den.clear();
        for j in (0..n).filter(|&j| j != lambda) {
            num.push(g[lambda * n + j] * w[j]);
            den.push(g[j * n + lambda] / w[j]);
        }
        w[lambda] = (symmetric_sum(&mut num) / symmetric_sum(&mut den)).sqrt();

        scratch.copy_from_slice(&w);
        let total = symmetric_sum(&mut scratch);
        for wm in &mut w {
            *wm /= total;
        }
    }
    unreachable!("loop returns on its final iteration")
}
