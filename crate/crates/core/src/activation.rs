//! Shrinkage activation operators on coefficient trees.
//!
//! Every operator here fixes the alphas, preserves the sign of each beta and
//! never increases its magnitude. Threshold-type rules ([`apply_threshold`],
//! [`apply_top_k`]) may zero a coefficient; the soft rule never does.
//!
//! The ranking weight of `β_{jk}` is `2^{j(τ+1/2)} |β_{jk}|`, with `τ = s − 1/p`
//! the Sobolev slope of the target's Besov class. Keeping the `k` largest
//! weights minimizes the `B_{22}^{τ+1/2}` residual over all `k`-subsets.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::transform::CoefficientTree;

/// `2^{j(τ+1/2)}`.
pub fn level_weight(j: u32, tau: f64) -> f64 {
    libm::exp2(j as f64 * (tau + 0.5))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedEntry {
    pub weight: f64,
    pub level: u32,
    pub position: usize,
    pub value: f64,
}

/// Decreasing rearrangement of the nonzero betas.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedCoefficients {
    /// Sorted by weight, non-increasing; ties in `(level, position)` order.
    pub entries: Vec<RankedEntry>,
    /// Size `m(j0, J)` of the tree's active index set.
    pub total_count: usize,
}

impl RankedCoefficients {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.weight)
    }
}

pub fn rank(tree: &CoefficientTree, tau: f64) -> RankedCoefficients {
    let mut entries: Vec<RankedEntry> = tree
        .betas()
        .filter(|(_, _, b)| *b != 0.0)
        .map(|(j, k, b)| RankedEntry {
            weight: level_weight(j, tau) * libm::fabs(b),
            level: j,
            position: k,
            value: b,
        })
        .collect();
    // Stable sort over level-major input keeps the (j, k) tie order.
    entries.sort_by(|a, b| b.weight.total_cmp(&a.weight));
    RankedCoefficients {
        entries,
        total_count: tree.active_count(),
    }
}

/// Zeroes every beta whose weight lies in `(0, δ)`; weights `≥ δ` are kept.
pub fn apply_threshold(tree: &CoefficientTree, tau: f64, delta: f64) -> Result<CoefficientTree> {
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!("threshold delta = {delta} must be > 0")));
    }
    Ok(tree.map_betas(|j, _, b| {
        if level_weight(j, tau) * libm::fabs(b) < delta {
            0.0
        } else {
            b
        }
    }))
}

/// Keeps the first `min(k, M)` entries of [`rank`] and zeroes the rest.
pub fn apply_top_k(tree: &CoefficientTree, tau: f64, k: usize) -> CoefficientTree {
    let ranked = rank(tree, tau);
    let mut out = tree.map_betas(|_, _, _| 0.0);
    for e in ranked.entries.iter().take(k) {
        out.set_beta(e.level, e.position, e.value);
    }
    out
}

/// Non-threshold shrinkage `β ↦ β · w / (w + λ)` with `w = 2^{j(τ+1/2)} |β|`.
pub fn apply_soft(tree: &CoefficientTree, tau: f64, lambda: f64) -> Result<CoefficientTree> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Parameter(format!(
            "soft shrinkage lambda = {lambda} must be finite and >= 0"
        )));
    }
    if lambda == 0.0 {
        return Ok(tree.clone());
    }
    Ok(tree.map_betas(|j, _, b| {
        let w = level_weight(j, tau) * libm::fabs(b);
        if w == 0.0 {
            0.0
        } else {
            b * (w / (w + lambda))
        }
    }))
}

/// A threshold for which [`apply_threshold`] zeroes `⌈pct/100 · M⌉` of the
/// `M` ranked betas.
///
/// The result is the midpoint between the last kept and first killed weight,
/// half the smallest weight for 0%, and twice the largest for 100%. A tree
/// with no nonzero betas returns `1.0`. When weights tie across the cut the
/// zeroed count can differ from the target by the size of the tie.
pub fn delta_for_compression(tree: &CoefficientTree, tau: f64, target_pct: f64) -> f64 {
    let ranked = rank(tree, tau);
    delta_for_ranked(&ranked, target_pct)
}

pub(crate) fn zero_count_for(m: usize, target_pct: f64) -> usize {
    let pct = target_pct.clamp(0.0, 100.0);
    // Guard against 0.3·10 = 3.0000000000000004 style round-up.
    let raw = pct / 100.0 * m as f64;
    let z = libm::ceil(raw - 1e-9 * (1.0 + raw));
    (z.max(0.0) as usize).min(m)
}

pub(crate) fn delta_for_ranked(ranked: &RankedCoefficients, target_pct: f64) -> f64 {
    let m = ranked.len();
    if m == 0 {
        return 1.0;
    }
    let keep = m - zero_count_for(m, target_pct);
    let w = |i: usize| ranked.entries[i].weight;
    if keep == m {
        w(m - 1) / 2.0
    } else if keep == 0 {
        2.0 * w(0)
    } else {
        0.5 * (w(keep - 1) + w(keep))
    }
}

/// Percentage of the active index set left at zero: `(m − kept)/m · 100`.
pub fn compression_pct(tree: &CoefficientTree) -> f64 {
    let m = tree.active_count();
    if m == 0 {
        return 0.0;
    }
    (m - tree.kept_count()) as f64 / m as f64 * 100.0
}

/// An activation operator together with the Sobolev slope it normalizes by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShrinkageRule {
    Threshold { delta: f64 },
    TopK { k: usize },
    Soft { lambda: f64 },
    Identity,
}

impl ShrinkageRule {
    pub fn apply(&self, tree: &CoefficientTree, tau: f64) -> Result<CoefficientTree> {
        match *self {
            ShrinkageRule::Threshold { delta } => apply_threshold(tree, tau, delta),
            ShrinkageRule::TopK { k } => Ok(apply_top_k(tree, tau, k)),
            ShrinkageRule::Soft { lambda } => apply_soft(tree, tau, lambda),
            ShrinkageRule::Identity => Ok(tree.clone()),
        }
    }

    /// Threshold-type rules may kill a nonzero coefficient; the others never do.
    pub fn is_threshold_type(&self) -> bool {
        matches!(self, ShrinkageRule::Threshold { .. } | ShrinkageRule::TopK { .. })
    }
}
