//! Haar empirical density estimation and the Monte Carlo risk experiment.
//!
//! Plugging the empirical measure `(1/N) Σ δ(x − X_i)` into the single-level
//! Haar expansion at level `J` gives `α̂_{Jk} = (1/N) Σ φ_{Jk}(X_i)`, whose
//! reconstruction is the histogram with dyadic bins of width `2^{−J}·|domain|`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::math;
pub use crate::math::LineFit;
use crate::transform::Interval;

/// Nodes of the tabulated CDF used for inverse-CDF sampling.
pub const INVERSE_CDF_NODES: usize = 1 << 16;

/// Rule choosing the resolution level `J` from the sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelRule {
    /// `J = ⌊log₂ N⌋`: one bin per sample.
    Log2,
    /// `J = round(log₂ N / (1 + 2s))`, balancing squared bias against variance
    /// for a density of smoothness `s`.
    Balanced { s: f64 },
    Fixed(u32),
}

impl LevelRule {
    pub fn level(&self, n: usize) -> u32 {
        let log2 = libm::log2(n.max(1) as f64);
        match *self {
            LevelRule::Log2 => libm::floor(log2 + 1e-12) as u32,
            LevelRule::Balanced { s } => libm::round(log2 / (1.0 + 2.0 * s)).max(0.0) as u32,
            LevelRule::Fixed(j) => j,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDensity {
    level: u32,
    domain: Interval,
    alphas: Vec<f64>,
    counts: Vec<usize>,
    used: usize,
    rejected: usize,
}

impl EmpiricalDensity {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// `α̂_{Jk}`, `k = 0..2^J`.
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Sample points in each bin.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn bin_count(&self) -> usize {
        self.alphas.len()
    }

    /// `2^{−J}·|domain|`.
    pub fn bin_width(&self) -> f64 {
        self.domain.length() / self.alphas.len() as f64
    }

    /// Sample points that fell inside the domain.
    pub fn used(&self) -> usize {
        self.used
    }

    /// Sample points outside the domain, left out of the estimate.
    pub fn rejected(&self) -> usize {
        self.rejected
    }

    fn height(&self, k: usize) -> f64 {
        // α̂_{Jk} φ_{Jk} on bin k, i.e. count / (N · width)
        self.counts[k] as f64 / (self.used as f64 * self.bin_width())
    }

    /// `f̂(x) = Σ α̂_{Jk} φ_{Jk}(x)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        match bin_of(x, self.domain, self.alphas.len()) {
            Some(k) => self.height(k),
            None => 0.0,
        }
    }

    /// Density value on each bin.
    pub fn bin_heights(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|k| self.height(k)).collect()
    }

    /// `∫ f̂`.
    pub fn total_mass(&self) -> f64 {
        self.bin_heights().iter().sum::<f64>() * self.bin_width()
    }
}

/// Bin index of `x` among `bins` equal cells of `domain`; the right endpoint
/// belongs to the last bin.
fn bin_of(x: f64, domain: Interval, bins: usize) -> Option<usize> {
    if !domain.contains(x) {
        return None;
    }
    let pos = (x - domain.lo) / domain.length() * bins as f64;
    Some((libm::floor(pos) as usize).min(bins - 1))
}

/// Haar estimate at the level chosen by `rule`.
pub fn estimate_density(sample: &[f64], domain: Interval, rule: LevelRule) -> Result<EmpiricalDensity> {
    if sample.is_empty() {
        return Err(Error::UndefinedInput("empty sample"));
    }
    let level = rule.level(sample.len());
    if level > 30 {
        return Err(Error::Parameter(format!("resolution level {level} too fine")));
    }
    let bins = 1usize << level;
    let mut counts = vec![0usize; bins];
    let mut rejected = 0;
    for &x in sample {
        match bin_of(x, domain, bins) {
            Some(k) => counts[k] += 1,
            None => rejected += 1,
        }
    }
    let used = sample.len() - rejected;
    if used == 0 {
        return Err(Error::UndefinedInput("no sample point inside the domain"));
    }
    let height = libm::sqrt(bins as f64 / domain.length());
    let alphas = counts
        .iter()
        .map(|c| *c as f64 / used as f64 * height)
        .collect();
    Ok(EmpiricalDensity {
        level,
        domain,
        alphas,
        counts,
        used,
        rejected,
    })
}

/// Integrated squared error of `estimate` against `f_true` by the midpoint
/// rectangle rule on `grid_size` cells of the estimate's domain.
pub fn density_mise(f_true: impl Fn(f64) -> f64, estimate: &EmpiricalDensity, grid_size: usize) -> f64 {
    let d = estimate.domain();
    let h = d.length() / grid_size as f64;
    (0..grid_size)
        .map(|i| {
            let x = d.lo + (i as f64 + 0.5) * h;
            let e = estimate.evaluate(x) - f_true(x);
            e * e
        })
        .sum::<f64>()
        * h
}

/// Inverse-CDF sampler from a density tabulated on a uniform grid.
#[derive(Debug, Clone)]
pub struct InverseCdf {
    domain: Interval,
    cdf: Vec<f64>,
}

impl InverseCdf {
    pub fn new(density: impl Fn(f64) -> f64, domain: Interval, nodes: usize) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::Sampler(format!("need at least two nodes, got {nodes}")));
        }
        let h = domain.length() / (nodes - 1) as f64;
        let values: Vec<f64> = (0..nodes).map(|i| density(domain.lo + i as f64 * h)).collect();
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Sampler(format!("density value {bad} is negative or not finite")));
        }
        let mut cdf = Vec::with_capacity(nodes);
        cdf.push(0.0);
        for w in values.windows(2) {
            let last = *cdf.last().unwrap();
            cdf.push(last + 0.5 * (w[0] + w[1]) * h);
        }
        let total = *cdf.last().unwrap();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::Sampler(format!("total mass {total} is not positive")));
        }
        cdf.iter_mut().for_each(|c| *c /= total);
        Ok(Self { domain, cdf })
    }

    /// Quantile of `u ∈ [0, 1)`, linear between CDF nodes.
    pub fn quantile(&self, u: f64) -> f64 {
        let nodes = self.cdf.len();
        let h = self.domain.length() / (nodes - 1) as f64;
        // first node with cdf >= u
        let i = self.cdf.partition_point(|c| *c < u).clamp(1, nodes - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let frac = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.0 };
        self.domain.lo + (i as f64 - 1.0 + frac) * h
    }
}

/// Rejection sampler under a constant envelope on `domain`.
#[derive(Debug, Clone)]
pub struct RejectionSampler<F> {
    density: F,
    domain: Interval,
    bound: f64,
}

impl<F: Fn(f64) -> f64> RejectionSampler<F> {
    /// The envelope is 1.1× the maximum of `density` on `probe_nodes` points.
    pub fn new(density: F, domain: Interval, probe_nodes: usize) -> Result<Self> {
        let h = domain.length() / probe_nodes.max(2) as f64;
        let mut bound = 0.0f64;
        for i in 0..=probe_nodes {
            let v = density(domain.lo + i as f64 * h);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Sampler(format!("density value {v} is negative or not finite")));
            }
            bound = bound.max(v);
        }
        if bound == 0.0 {
            return Err(Error::Sampler("density vanishes on the probe grid".into()));
        }
        Ok(Self {
            density,
            domain,
            bound: 1.1 * bound,
        })
    }

    /// Draws one point from a stream of uniforms on `[0, 1)`.
    pub fn draw(&self, uniform: &mut impl FnMut() -> f64) -> f64 {
        loop {
            let x = self.domain.lo + uniform() * self.domain.length();
            if uniform() * self.bound <= (self.density)(x) {
                return x;
            }
        }
    }
}

/// Uniform on `[0, 1)` with 53 random bits.
pub fn unit_uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Generator for replication `rep` of sample-size index `n_index`: the
/// experiment seed picks the key and the pair picks the stream, so any
/// replication can be regenerated independently of the others.
pub fn replication_rng(seed: u64, n_index: usize, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n_index as u64) << 32) | rep as u64);
    rng
}

/// Sampling method for the risk experiment.
#[derive(Debug, Clone)]
pub enum DensitySampler<F> {
    InverseCdf(InverseCdf),
    Rejection(RejectionSampler<F>),
}

impl<F: Fn(f64) -> f64> DensitySampler<F> {
    /// Inverse CDF on [`INVERSE_CDF_NODES`] nodes, falling back to rejection
    /// sampling if the tabulation fails.
    pub fn for_density(density: F, domain: Interval) -> Result<Self> {
        match InverseCdf::new(&density, domain, INVERSE_CDF_NODES) {
            Ok(inv) => Ok(DensitySampler::InverseCdf(inv)),
            Err(_) => Ok(DensitySampler::Rejection(RejectionSampler::new(
                density,
                domain,
                INVERSE_CDF_NODES,
            )?)),
        }
    }

    pub fn draw(&self, rng: &mut impl RngCore) -> f64 {
        match self {
            DensitySampler::InverseCdf(inv) => inv.quantile(unit_uniform(rng)),
            DensitySampler::Rejection(rej) => rej.draw(&mut || unit_uniform(rng)),
        }
    }

    pub fn sample(&self, n: usize, rng: &mut impl RngCore) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

/// Settings of [`risk_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct RiskSettings {
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    /// Smoothness `s` of the true density; must lie in `(0, 2)`.
    pub smoothness: f64,
    pub level_rule: LevelRule,
    pub domain: Interval,
    /// Cells of the rectangle rule in [`density_mise`].
    pub mise_grid: usize,
}

impl RiskSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.smoothness > 0.0 && self.smoothness < 2.0) {
            return Err(Error::Parameter(format!(
                "smoothness s = {} outside (0, 2)",
                self.smoothness
            )));
        }
        if self.reps < 30 {
            return Err(Error::Parameter(format!("reps = {} below 30", self.reps)));
        }
        if self.n_list.len() < 2 || self.n_list.contains(&0) {
            return Err(Error::Parameter(
                "need at least two positive sample sizes".into(),
            ));
        }
        Ok(())
    }

    /// Theoretical log-log slope `−s/(1 + 2s)`.
    pub fn theoretical_slope(&self) -> f64 {
        -self.smoothness / (1.0 + 2.0 * self.smoothness)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskRow {
    pub n: usize,
    pub level: u32,
    /// Mean integrated squared error over replications.
    pub mean_mise: f64,
    /// Mean L2 distance `E ‖f − f̂‖₂`.
    pub mean_risk: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskTable {
    pub rows: Vec<RiskRow>,
    /// Fit of `log(mean_risk)` against `log N`.
    pub risk_fit: LineFit,
    /// Fit of `log(mean_mise)` against `log N`.
    pub mise_fit: LineFit,
}

impl RiskTable {
    pub fn from_rows(rows: Vec<RiskRow>) -> Self {
        let xs: Vec<f64> = rows.iter().map(|r| libm::log(r.n as f64)).collect();
        let risk: Vec<f64> = rows.iter().map(|r| libm::log(r.mean_risk)).collect();
        let mise: Vec<f64> = rows.iter().map(|r| libm::log(r.mean_mise)).collect();
        Self {
            risk_fit: math::fit_line(&xs, &risk),
            mise_fit: math::fit_line(&xs, &mise),
            rows,
        }
    }

    pub fn slope(&self) -> f64 {
        self.risk_fit.slope
    }
}

/// Integrated squared error of one replication.
pub fn replication_ise<F: Fn(f64) -> f64>(
    f_true: &F,
    sampler: &DensitySampler<F>,
    settings: &RiskSettings,
    n_index: usize,
    rep: usize,
) -> Result<f64> {
    let n = settings.n_list[n_index];
    let mut rng = replication_rng(settings.seed, n_index, rep);
    let sample = sampler.sample(n, &mut rng);
    let est = estimate_density(&sample, settings.domain, settings.level_rule)?;
    Ok(density_mise(f_true, &est, settings.mise_grid))
}

/// Aggregates per-replication squared errors `ise[n_index][rep]` into a table.
pub fn summarize(settings: &RiskSettings, ise: &[Vec<f64>]) -> RiskTable {
    let rows = settings
        .n_list
        .iter()
        .zip(ise)
        .map(|(&n, reps)| RiskRow {
            n,
            level: settings.level_rule.level(n),
            mean_mise: reps.iter().sum::<f64>() / reps.len() as f64,
            mean_risk: reps.iter().map(|e| libm::sqrt(*e)).sum::<f64>() / reps.len() as f64,
        })
        .collect();
    RiskTable::from_rows(rows)
}

/// Mean risk per sample size over seeded i.i.d. replications, with the
/// fitted log-log slope.
pub fn risk_experiment<F: Fn(f64) -> f64 + Clone>(f_true: F, settings: &RiskSettings) -> Result<RiskTable> {
    settings.validate()?;
    let sampler = DensitySampler::for_density(f_true.clone(), settings.domain)?;
    let ise = (0..settings.n_list.len())
        .map(|ni| {
            (0..settings.reps)
                .map(|rep| replication_ise(&f_true, &sampler, settings, ni, rep))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(settings, &ise))
}
