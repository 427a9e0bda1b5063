//! Fast orthonormal wavelet transform between dyadic sample grids and the
//! telescopic coefficient tree `V_{j0} ⊕ W_{j0} ⊕ … ⊕ W_J`.
//!
//! Levels are numbered on the domain rescaled to `[0, 1]`: a grid of `N = 2^n`
//! samples is the finest scaling level `n`, detail levels run over
//! `j0..=J` with `J = n − 1`, and level `j` carries `2^j` coefficients. The
//! filter is applied with periodic indexing. [`analyze`] insists on a zero
//! margin of at least `L` samples at both ends, so fine-level coefficients
//! never see the wrap and the transform coincides with zero extension there.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::filter::FilterPair;

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Parameter(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Samples `f(x_lo + i·h_N)`, `i = 0..N`, with `h_N = (x_hi − x_lo)/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    domain: Interval,
    values: Vec<f64>,
}

impl SampleGrid {
    pub fn new(domain: Interval, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::UndefinedInput("sample grid has no samples"));
        }
        Ok(Self { domain, values })
    }

    /// Samples `f` at the left endpoints of `n` equal cells of `domain`.
    pub fn from_fn(domain: Interval, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = domain.length() / n as f64;
        Self::new(domain, (0..n).map(|i| f(domain.lo + i as f64 * h)).collect())
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Grid step `h_N`.
    pub fn step(&self) -> f64 {
        self.domain.length() / self.values.len() as f64
    }

    /// Position of sample `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.domain.lo + i as f64 * self.step()
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.x(i))
    }
}

/// Telescopic coefficient vector `{α_{j0,k}} ∪ {β_{j,k} : j0 ≤ j ≤ J}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTree {
    j0: u32,
    alphas: Vec<f64>,
    /// `betas[j − j0]` holds the `2^j` detail coefficients of level `j`.
    betas: Vec<Vec<f64>>,
    /// Membership in the active index set `i(f, ψ, j0, J)`.
    active: Vec<Vec<bool>>,
    domain: Interval,
}

impl CoefficientTree {
    /// Assembles a tree from raw parts with every detail position active.
    ///
    /// `alphas` must have `2^{j0}` entries and `betas[i]` must have `2^{j0+i}`.
    pub fn from_parts(
        j0: u32,
        alphas: Vec<f64>,
        betas: Vec<Vec<f64>>,
        domain: Interval,
    ) -> Result<Self> {
        let active = betas.iter().map(|level| vec![true; level.len()]).collect();
        Self::with_active(j0, alphas, betas, active, domain)
    }

    /// Like [`CoefficientTree::from_parts`] with an explicit active set.
    pub fn with_active(
        j0: u32,
        alphas: Vec<f64>,
        betas: Vec<Vec<f64>>,
        active: Vec<Vec<bool>>,
        domain: Interval,
    ) -> Result<Self> {
        if j0 > 40 {
            return Err(Error::MalformedTree(format!("coarsest level {j0} too large")));
        }
        if alphas.len() != 1usize << j0 {
            return Err(Error::MalformedTree(format!(
                "level {j0} needs {} alphas, got {}",
                1usize << j0,
                alphas.len()
            )));
        }
        if betas.is_empty() {
            return Err(Error::MalformedTree("no detail levels".into()));
        }
        if active.len() != betas.len() {
            return Err(Error::MalformedTree("active set does not cover every level".into()));
        }
        for (i, (level, mask)) in betas.iter().zip(&active).enumerate() {
            let want = 1usize << (j0 as usize + i);
            if level.len() != want || mask.len() != want {
                return Err(Error::MalformedTree(format!(
                    "level {} needs {want} betas, got {}",
                    j0 as usize + i,
                    level.len()
                )));
            }
        }
        Ok(Self {
            j0,
            alphas,
            betas,
            active,
            domain,
        })
    }

    pub fn j0(&self) -> u32 {
        self.j0
    }

    /// Finest detail level `J`.
    pub fn finest_level(&self) -> u32 {
        self.j0 + self.betas.len() as u32 - 1
    }

    /// Number of samples of the represented grid, `2^{J+1}`.
    pub fn grid_len(&self) -> usize {
        1usize << (self.finest_level() + 1)
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn alphas_mut(&mut self) -> &mut [f64] {
        &mut self.alphas
    }

    /// Detail coefficients of level `j`; panics outside `j0..=J`.
    pub fn level(&self, j: u32) -> &[f64] {
        &self.betas[(j - self.j0) as usize]
    }

    pub fn level_mut(&mut self, j: u32) -> &mut [f64] {
        &mut self.betas[(j - self.j0) as usize]
    }

    pub fn beta(&self, j: u32, k: usize) -> f64 {
        self.betas[(j - self.j0) as usize][k]
    }

    pub fn set_beta(&mut self, j: u32, k: usize, value: f64) {
        self.betas[(j - self.j0) as usize][k] = value;
    }

    pub fn is_active(&self, j: u32, k: usize) -> bool {
        self.active[(j - self.j0) as usize][k]
    }

    pub fn levels(&self) -> impl Iterator<Item = (u32, &[f64])> + '_ {
        self.betas
            .iter()
            .enumerate()
            .map(move |(i, level)| (self.j0 + i as u32, level.as_slice()))
    }

    /// Every detail coefficient as `(j, k, β_{jk})`, level-major.
    pub fn betas(&self) -> impl Iterator<Item = (u32, usize, f64)> + '_ {
        self.levels()
            .flat_map(|(j, level)| level.iter().enumerate().map(move |(k, b)| (j, k, *b)))
    }

    /// Detail coefficients of the active index set.
    pub fn active_betas(&self) -> impl Iterator<Item = (u32, usize, f64)> + '_ {
        self.betas().filter(|(j, k, _)| self.is_active(*j, *k))
    }

    /// `M_j`, the number of active positions per level.
    pub fn active_counts(&self) -> Vec<usize> {
        self.active
            .iter()
            .map(|mask| mask.iter().filter(|a| **a).count())
            .collect()
    }

    /// `m(j0, J)`, the size of the active index set.
    pub fn active_count(&self) -> usize {
        self.active_counts().iter().sum()
    }

    /// Active positions carrying a nonzero coefficient.
    pub fn kept_count(&self) -> usize {
        self.active_betas().filter(|(_, _, b)| *b != 0.0).count()
    }

    /// Positions `(j, k)` of nonzero active betas, level-major.
    pub fn kept_set(&self) -> Vec<(u32, usize)> {
        self.active_betas()
            .filter(|(_, _, b)| *b != 0.0)
            .map(|(j, k, _)| (j, k))
            .collect()
    }

    /// Total number of coefficients (alphas plus betas).
    pub fn len(&self) -> usize {
        self.alphas.len() + self.betas.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Alphas followed by the betas level by level.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        out.extend_from_slice(&self.alphas);
        for level in &self.betas {
            out.extend_from_slice(level);
        }
        out
    }

    /// Same structure with every beta replaced by `f(j, k, β)`.
    pub fn map_betas(&self, mut f: impl FnMut(u32, usize, f64) -> f64) -> Self {
        let mut out = self.clone();
        for (i, level) in out.betas.iter_mut().enumerate() {
            let j = self.j0 + i as u32;
            for (k, b) in level.iter_mut().enumerate() {
                *b = f(j, k, *b);
            }
        }
        out
    }

    /// Coefficient-wise `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.j0 != other.j0 || self.betas.len() != other.betas.len() {
            return Err(Error::MalformedTree(format!(
                "cannot combine trees with levels {}..={} and {}..={}",
                self.j0,
                self.finest_level(),
                other.j0,
                other.finest_level()
            )));
        }
        let mut out = self.clone();
        for (x, y) in out.alphas.iter_mut().zip(&other.alphas) {
            *x = a * *x + b * y;
        }
        for (lx, ly) in out.betas.iter_mut().zip(&other.betas) {
            for (x, y) in lx.iter_mut().zip(ly) {
                *x = a * *x + b * y;
            }
        }
        for (mx, my) in out.active.iter_mut().zip(&other.active) {
            for (x, y) in mx.iter_mut().zip(my) {
                *x = *x || *y;
            }
        }
        Ok(out)
    }

    /// `self − other`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.combine(1.0, other, -1.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.alphas.iter_mut().for_each(|x| *x *= c);
        out.betas.iter_mut().flatten().for_each(|x| *x *= c);
        out
    }
}

/// Forward transform with the zero-margin precondition enforced.
///
/// The finest-level scaling coefficients are the samples scaled by `√h_N`, so
/// `Σ α² + Σ β² = h_N Σ f(x_i)²` approximates `∫ f²`.
pub fn analyze(grid: &SampleGrid, filter: &FilterPair, j0: u32) -> Result<CoefficientTree> {
    let margin = filter.support_length();
    let values = grid.values();
    check_shape(values.len(), j0)?;
    if values.len() <= 2 * margin {
        return Err(Error::Shape(format!(
            "{} samples leave no interior inside a {margin}-sample margin",
            values.len()
        )));
    }
    let offender = values[..margin]
        .iter()
        .position(|v| *v != 0.0)
        .or_else(|| {
            values[values.len() - margin..]
                .iter()
                .position(|v| *v != 0.0)
                .map(|i| values.len() - margin + i)
        });
    if let Some(first_offender) = offender {
        return Err(Error::BoundaryViolation {
            margin,
            first_offender,
        });
    }
    analyze_periodic(grid, filter, j0)
}

/// Forward transform without the boundary check: the signal is treated as one
/// period of a periodic function. Still orthonormal and exactly invertible.
pub fn analyze_periodic(grid: &SampleGrid, filter: &FilterPair, j0: u32) -> Result<CoefficientTree> {
    let values = grid.values();
    let n = check_shape(values.len(), j0)?;
    let scale = libm::sqrt(grid.step());
    let mut approx: Vec<f64> = values.iter().map(|v| v * scale).collect();
    let mut betas: Vec<Vec<f64>> = Vec::with_capacity((n - j0) as usize);
    let mut low = Vec::new();
    let mut high = Vec::new();
    for _ in j0..n {
        split(&approx, filter, &mut low, &mut high);
        betas.push(high.clone());
        core::mem::swap(&mut approx, &mut low);
    }
    betas.reverse();
    let active = active_set(values, filter, j0, n);
    CoefficientTree::with_active(j0, approx, betas, active, grid.domain())
}

/// Inverse transform back to samples on the tree's domain.
pub fn synthesize(tree: &CoefficientTree, filter: &FilterPair) -> Result<SampleGrid> {
    let mut approx = tree.alphas().to_vec();
    let mut next = Vec::new();
    for (_, level) in tree.levels() {
        merge(&approx, level, filter, &mut next);
        core::mem::swap(&mut approx, &mut next);
    }
    let step = tree.domain().length() / approx.len() as f64;
    let inv = 1.0 / libm::sqrt(step);
    approx.iter_mut().for_each(|v| *v *= inv);
    SampleGrid::new(tree.domain(), approx)
}

fn check_shape(len: usize, j0: u32) -> Result<u32> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::Shape(format!("grid length {len} is not a power of two >= 2")));
    }
    let n = len.trailing_zeros();
    if j0 >= n {
        return Err(Error::Shape(format!(
            "grid of {len} samples has no detail level at or above j0 = {j0} (needs N >= 2^(j0+1))"
        )));
    }
    Ok(n)
}

/// One analysis step: `low[k] = Σ h_m a[2k+m]`, `high[k] = Σ g_m a[2k+m]`,
/// indices modulo `a.len()`.
pub fn split(a: &[f64], filter: &FilterPair, low: &mut Vec<f64>, high: &mut Vec<f64>) {
    let len = a.len();
    let half = len / 2;
    low.clear();
    high.clear();
    low.resize(half, 0.0);
    high.resize(half, 0.0);
    let h = filter.low_pass();
    let g = filter.high_pass();
    for k in 0..half {
        let (mut lo, mut hi) = (0.0, 0.0);
        for (m, (hm, gm)) in h.iter().zip(g).enumerate() {
            let v = a[(2 * k + m) % len];
            lo += hm * v;
            hi += gm * v;
        }
        low[k] = lo;
        high[k] = hi;
    }
}

/// Adjoint of [`split`].
pub fn merge(low: &[f64], high: &[f64], filter: &FilterPair, out: &mut Vec<f64>) {
    let len = 2 * low.len();
    out.clear();
    out.resize(len, 0.0);
    let h = filter.low_pass();
    let g = filter.high_pass();
    for (k, (lo, hi)) in low.iter().zip(high).enumerate() {
        for (m, (hm, gm)) in h.iter().zip(g).enumerate() {
            out[(2 * k + m) % len] += hm * lo + gm * hi;
        }
    }
}

/// Marks `(j, k)` active when the samples feeding `β_{jk}` include a nonzero.
///
/// At depth `d = n − j` the coefficient reads samples
/// `2^d k ..= 2^d k + (2^d − 1)(L − 1)` (mod N).
fn active_set(values: &[f64], filter: &FilterPair, j0: u32, n: u32) -> Vec<Vec<bool>> {
    let len = values.len();
    let taps = filter.support_length();
    // prefix[i] = number of nonzero samples in values[..i]
    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(0usize);
    for v in values {
        prefix.push(prefix.last().unwrap() + usize::from(*v != 0.0));
    }
    let total = prefix[len];
    let count = |start: usize, span: usize| -> usize {
        if span >= len {
            return total;
        }
        let end = start + span;
        if end <= len {
            prefix[end] - prefix[start]
        } else {
            (total - prefix[start]) + prefix[end - len]
        }
    };
    (j0..n)
        .map(|j| {
            let d = n - j;
            let stride = 1usize << d;
            let span = (stride - 1) * (taps - 1) + 1;
            (0..1usize << j)
                .map(|k| count((stride * k) % len, span) > 0)
                .collect()
        })
        .collect()
}
