//! Daubechies filter pairs and pointwise evaluation of φ and ψ.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// Highest Daubechies order generated by [`make_daubechies`].
pub const MAX_ORDER: usize = 10;

/// Default order (DB4) used by the learner and CLI.
pub const DEFAULT_ORDER: usize = 4;

/// Default dyadic refinement depth for [`evaluate_scaling`] in plots.
pub const DEFAULT_CASCADE_DEPTH: u32 = 12;

/// Orthonormal low-pass / high-pass pair generating (φ, ψ).
///
/// The high-pass taps follow the quadrature-mirror rule
/// `g_k = (−1)^k h_{L−1−k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    low_pass: Vec<f64>,
    high_pass: Vec<f64>,
    vanishing_moments: usize,
}

impl FilterPair {
    /// Builds a pair from low-pass taps; the high-pass side is derived.
    ///
    /// The taps must have even length; their count fixes the vanishing-moment
    /// order as `L / 2`. Orthonormality is not checked here.
    pub fn from_low_pass(low_pass: Vec<f64>) -> Result<Self> {
        if low_pass.is_empty() || low_pass.len() % 2 != 0 {
            return Err(Error::Parameter(alloc::format!(
                "low-pass filter length must be even and positive, got {}",
                low_pass.len()
            )));
        }
        let len = low_pass.len();
        let high_pass = (0..len)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * low_pass[len - 1 - k]
            })
            .collect();
        Ok(Self {
            vanishing_moments: len / 2,
            low_pass,
            high_pass,
        })
    }

    pub fn low_pass(&self) -> &[f64] {
        &self.low_pass
    }

    pub fn high_pass(&self) -> &[f64] {
        &self.high_pass
    }

    pub fn vanishing_moments(&self) -> usize {
        self.vanishing_moments
    }

    /// Filter length `L = 2·r_v`; φ and ψ are supported on `[0, L − 1]`.
    pub fn support_length(&self) -> usize {
        self.low_pass.len()
    }

    pub fn is_haar(&self) -> bool {
        self.low_pass.len() == 2
    }
}

/// Daubechies extremal-phase filter with `vanishing_moments` vanishing moments.
///
/// Built by spectral factorization: the roots `y_i` of
/// `P(y) = Σ_{k<r} C(r−1+k, k) y^k` are mapped through `z + 1/z = 2 − 4y`, the
/// root inside the unit circle is retained, and the taps are read off
/// `(1 + z)^r Π (z − z_i)` normalized to `Σ h = √2`.
pub fn make_daubechies(vanishing_moments: usize) -> Result<FilterPair> {
    if !(1..=MAX_ORDER).contains(&vanishing_moments) {
        return Err(Error::FilterOrder(vanishing_moments));
    }
    let r = vanishing_moments;
    let half_band: Vec<f64> = (0..r)
        .map(|k| math::binomial((r - 1 + k) as u64, k as u64))
        .collect();
    let y_roots = math::poly_roots(&half_band);

    let mut z_roots: Vec<Complex64> = vec![Complex64::new(-1.0, 0.0); r];
    for y in y_roots {
        // z^2 − 2cz + 1 = 0 with c = 1 − 2y; the two roots are reciprocal.
        let c = Complex64::new(1.0, 0.0) - y * 2.0;
        let disc = (c * c - 1.0).sqrt();
        let (a, b) = (c + disc, c - disc);
        z_roots.push(if a.norm() < b.norm() { a } else { b });
    }
    let ascending = math::poly_from_roots(&z_roots);
    let len = ascending.len();
    let mut taps: Vec<f64> = (0..len).map(|k| ascending[len - 1 - k].re).collect();
    let sum: f64 = taps.iter().sum();
    for t in taps.iter_mut() {
        *t *= SQRT_2 / sum;
    }
    FilterPair::from_low_pass(taps)
}

/// φ and ψ tabulated on the dyadic grid `m·2^{−depth}` over `[0, L − 1]`.
///
/// Values at integers come from the eigenvector of the two-scale operator
/// normalized to `Σ φ(n) = 1`; every finer level is filled in by the
/// refinement relation `φ(x) = √2 Σ h_k φ(2x − k)`.
#[derive(Debug, Clone)]
pub struct CascadeTable {
    filter: FilterPair,
    depth: u32,
    scaling: Vec<f64>,
}

impl CascadeTable {
    pub fn new(filter: &FilterPair, depth: u32) -> Result<Self> {
        if depth < 1 || depth > 24 {
            return Err(Error::Parameter(alloc::format!(
                "cascade depth must lie in 1..=24, got {depth}"
            )));
        }
        let len = filter.support_length();
        let h = filter.low_pass();
        let scale = 1usize << depth;
        let mut table = vec![0.0; (len - 1) * scale + 1];

        let integers = integer_values(filter);
        for (n, v) in integers.iter().enumerate() {
            table[n * scale] = *v;
        }
        for level in 1..=depth {
            // Points with exact denominator 2^level.
            let stride = 1usize << (depth - level);
            let mut m = stride;
            while m < table.len() {
                // 2x − k on the index grid: 2m − k·2^depth.
                let twice = 2 * m;
                let mut acc = 0.0;
                for (k, hk) in h.iter().enumerate() {
                    let shift = k * scale;
                    if twice >= shift {
                        if let Some(v) = table.get(twice - shift) {
                            acc += hk * v;
                        }
                    }
                }
                table[m] = SQRT_2 * acc;
                m += 2 * stride;
            }
        }
        Ok(Self {
            filter: filter.clone(),
            depth,
            scaling: table,
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Tabulated φ values, index `m` ↔ `x = m·2^{−depth}`.
    pub fn scaling_values(&self) -> &[f64] {
        &self.scaling
    }

    /// φ(x); exact indicator of `[0, 1)` for Haar, linear interpolation of the
    /// dyadic table otherwise, zero outside `[0, L − 1]`.
    pub fn scaling(&self, x: f64) -> f64 {
        if self.filter.is_haar() {
            return if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 };
        }
        let last = (self.filter.support_length() - 1) as f64;
        if !(0.0..=last).contains(&x) {
            return 0.0;
        }
        let pos = x * (1u64 << self.depth) as f64;
        let i = libm::floor(pos) as usize;
        if i + 1 >= self.scaling.len() {
            return self.scaling[self.scaling.len() - 1];
        }
        let frac = pos - i as f64;
        self.scaling[i] * (1.0 - frac) + self.scaling[i + 1] * frac
    }

    /// ψ(x) = √2 Σ g_k φ(2x − k).
    pub fn wavelet(&self, x: f64) -> f64 {
        let g = self.filter.high_pass();
        SQRT_2
            * g.iter()
                .enumerate()
                .map(|(k, gk)| gk * self.scaling(2.0 * x - k as f64))
                .sum::<f64>()
    }
}

fn integer_values(filter: &FilterPair) -> Vec<f64> {
    let len = filter.support_length();
    if filter.is_haar() {
        return vec![1.0, 0.0];
    }
    // φ(0) = φ(L−1) = 0 for r_v ≥ 2; solve on the interior integers 1..L−2.
    let h = filter.low_pass();
    let tap = |i: isize| -> f64 {
        if i >= 0 && (i as usize) < len {
            h[i as usize]
        } else {
            0.0
        }
    };
    let interior = len - 2;
    let mut a = vec![vec![0.0; interior]; interior];
    for (row, line) in a.iter_mut().enumerate() {
        let n = row as isize + 1;
        for (col, cell) in line.iter_mut().enumerate() {
            let m = col as isize + 1;
            *cell = SQRT_2 * tap(2 * n - m) - if row == col { 1.0 } else { 0.0 };
        }
    }
    let mut b = vec![0.0; interior];
    // Replace the last equation by the normalization Σ φ(n) = 1.
    a[interior - 1] = vec![1.0; interior];
    b[interior - 1] = 1.0;
    let interior_values = math::solve_dense(a, b).unwrap_or_else(|| vec![1.0 / interior as f64; interior]);
    let mut out = vec![0.0; len];
    out[1..len - 1].copy_from_slice(&interior_values);
    out
}

/// One-off evaluation of φ(x) at the given cascade depth.
///
/// Builds a [`CascadeTable`] per call; reuse a table when evaluating many points.
pub fn evaluate_scaling(filter: &FilterPair, x: f64, cascade_depth: u32) -> Result<f64> {
    Ok(CascadeTable::new(filter, cascade_depth)?.scaling(x))
}

/// One-off evaluation of ψ(x) at the given cascade depth.
pub fn evaluate_wavelet(filter: &FilterPair, x: f64, cascade_depth: u32) -> Result<f64> {
    Ok(CascadeTable::new(filter, cascade_depth)?.wavelet(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_taps() {
        let f = make_daubechies(1).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((f.low_pass()[0] - r).abs() < 1e-15);
        assert!((f.low_pass()[1] - r).abs() < 1e-15);
        assert_eq!(f.high_pass().len(), 2);
        assert!((f.high_pass()[0] - r).abs() < 1e-15);
        assert!((f.high_pass()[1] + r).abs() < 1e-15);
        assert_eq!(f.support_length(), 2);
    }

    #[test]
    fn order_out_of_range() {
        assert_eq!(make_daubechies(0), Err(Error::FilterOrder(0)));
        assert_eq!(make_daubechies(11), Err(Error::FilterOrder(11)));
    }

    #[test]
    fn db2_identities() {
        let f = make_daubechies(2).unwrap();
        let h = f.low_pass();
        assert!((h.iter().sum::<f64>() - SQRT_2).abs() < 1e-12);
        assert!((h[0] * h[2] + h[1] * h[3]).abs() < 1e-12);
    }

    #[test]
    fn haar_scaling_is_indicator() {
        let f = make_daubechies(1).unwrap();
        assert_eq!(evaluate_scaling(&f, 0.5, 4).unwrap(), 1.0);
        assert_eq!(evaluate_scaling(&f, 1.5, 4).unwrap(), 0.0);
        assert_eq!(evaluate_scaling(&f, -0.1, 4).unwrap(), 0.0);
        assert!((evaluate_wavelet(&f, 0.25, 4).unwrap() - 1.0).abs() < 1e-15);
        assert!((evaluate_wavelet(&f, 0.75, 4).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn db2_integer_values() {
        let f = make_daubechies(2).unwrap();
        let t = CascadeTable::new(&f, 3).unwrap();
        let s3 = libm::sqrt(3.0);
        assert!(t.scaling(0.0).abs() < 1e-12);
        assert!((t.scaling(1.0) - (1.0 + s3) / 2.0).abs() < 1e-12);
        assert!((t.scaling(2.0) - (1.0 - s3) / 2.0).abs() < 1e-12);
        assert!(t.scaling(3.0).abs() < 1e-12);
        assert_eq!(t.scaling(3.5), 0.0);
    }

    #[test]
    fn bad_depth() {
        let f = make_daubechies(2).unwrap();
        assert!(CascadeTable::new(&f, 0).is_err());
    }
}
