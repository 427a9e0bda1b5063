//! Besov index triples and the wavelet-coefficient quasinorm.
//!
//! For `n = 1`,
//!
//! ```text
//! ‖f‖ = { ‖α‖_p^q + Σ_j [ 2^{j(s + 1/2 − 1/p)} ‖β_j‖_p ]^q }^{1/q}
//! ```
//!
//! with the supremum forms for `p = ∞` (over `k`) and `q = ∞` (over the blocks).

use alloc::format;

use crate::error::{Error, Result};
use crate::transform::CoefficientTree;

/// Index triple `(p, q, s)`. `p` and `q` may be `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovParams {
    p: f64,
    q: f64,
    s: f64,
}

fn recip(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

impl BesovParams {
    pub fn new(p: f64, q: f64, s: f64) -> Result<Self> {
        if !(p > 0.0) {
            return Err(Error::Parameter(format!("metric power index p = {p} must be > 0")));
        }
        if !(q > 0.0) {
            return Err(Error::Parameter(format!(
                "metric logarithmic index q = {q} must be > 0"
            )));
        }
        if !s.is_finite() {
            return Err(Error::Parameter(format!("smoothness index s = {s} must be finite")));
        }
        Ok(Self { p, q, s })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Sobolev slope `τ = s − 1/p`.
    pub fn tau(&self) -> f64 {
        self.s - recip(self.p)
    }

    /// Same `(p, q)` with smoothness `s + delta`.
    pub fn with_s_offset(&self, delta: f64) -> Result<Self> {
        Self::new(self.p, self.q, self.s + delta)
    }

    /// Checks `(1/p − 1)₊ < s < r_v` for a filter with `r_v` vanishing moments.
    pub fn check_window(&self, vanishing_moments: usize) -> Result<()> {
        let lower = (recip(self.p) - 1.0).max(0.0);
        if self.s > lower && self.s < vanishing_moments as f64 {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "smoothness s = {} outside the validity window ({lower}, {vanishing_moments}) \
                 for p = {}",
                self.s, self.p
            )))
        }
    }

    /// Exponent of the level weight `2^{j(s + 1/2 − 1/p)}`, i.e. `τ + 1/2`.
    pub fn level_exponent(&self) -> f64 {
        self.tau() + 0.5
    }
}

fn lp_norm(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, |m, v| m.max(libm::fabs(v)))
    } else {
        let sum: f64 = values.map(|v| libm::pow(libm::fabs(v), p)).sum();
        libm::pow(sum, 1.0 / p)
    }
}

/// The coefficient quasinorm of `tree` in `B_{pq}^s`.
pub fn besov_seq_norm(tree: &CoefficientTree, params: &BesovParams) -> f64 {
    let (p, q) = (params.p(), params.q());
    let exponent = params.level_exponent();
    let alpha_block = lp_norm(tree.alphas().iter().copied(), p);
    let blocks = tree.levels().map(|(j, level)| {
        libm::exp2(j as f64 * exponent) * lp_norm(level.iter().copied(), p)
    });
    if q.is_infinite() {
        blocks.fold(alpha_block, f64::max)
    } else {
        let sum = libm::pow(alpha_block, q) + blocks.map(|b| libm::pow(b, q)).sum::<f64>();
        libm::pow(sum, 1.0 / q)
    }
}

/// Moves along the Sobolev embedding line through `params` to power index `rho`
/// and log index `eta`: returns `(rho, eta, σ)` with `σ − 1/ρ = s − 1/p`.
pub fn sobolev_line(params: &BesovParams, rho: f64, eta: f64) -> Result<BesovParams> {
    if !(rho >= params.p()) {
        return Err(Error::Embedding(format!(
            "rho = {rho} is below p = {}",
            params.p()
        )));
    }
    if !(eta >= params.q()) {
        return Err(Error::Embedding(format!(
            "eta = {eta} is below q = {}",
            params.q()
        )));
    }
    BesovParams::new(rho, eta, params.tau() + recip(rho))
}

/// The Hilbert space `B_{22}^σ` on the Sobolev line of `params`, with
/// `σ = s − 1/p + 1/2`.
///
/// Requires `1/(r_v + 1/2) < p ≤ 2`, `0 < q ≤ 2`, `1/p − 1/2 ≤ s < r_v`.
pub fn hilbert_target(params: &BesovParams, vanishing_moments: usize) -> Result<BesovParams> {
    let r = vanishing_moments as f64;
    let (p, q, s) = (params.p(), params.q(), params.s());
    if !(p > 1.0 / (r + 0.5)) {
        return Err(Error::OutOfRegion("p > 1/(r + 1/2)"));
    }
    if !(p <= 2.0) {
        return Err(Error::OutOfRegion("p <= 2"));
    }
    if !(q <= 2.0) {
        return Err(Error::OutOfRegion("q <= 2"));
    }
    if !(s >= 1.0 / p - 0.5) {
        return Err(Error::OutOfRegion("s >= 1/p - 1/2"));
    }
    if !(s < r) {
        return Err(Error::OutOfRegion("s < r"));
    }
    BesovParams::new(2.0, 2.0, s - 1.0 / p + 0.5)
}
