//! The single-layer pipeline: sample grid → analyze → activate → synthesize,
//! with error metrics, compression sweeps and the swarm of perturbed learners.

use alloc::format;
use alloc::vec::Vec;

use crate::activation::{self, ShrinkageRule};
use crate::besov::{besov_seq_norm, BesovParams};
use crate::error::{Error, Result};
use crate::filter::{make_daubechies, FilterPair, DEFAULT_ORDER};
use crate::transform::{analyze, synthesize, CoefficientTree, Interval, SampleGrid};

/// How the activation is chosen for a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleSpec {
    Identity,
    /// Threshold chosen so that this percentage of ranked betas is zeroed.
    Compression(f64),
    Delta(f64),
    TopK(usize),
    Soft(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnConfig {
    pub filter_order: usize,
    pub j0: u32,
    pub besov: BesovParams,
    pub rule: RuleSpec,
    pub grid_size: usize,
}

impl LearnConfig {
    /// DB4, `j0 = 0`.
    pub fn new(besov: BesovParams, rule: RuleSpec, grid_size: usize) -> Self {
        Self {
            filter_order: DEFAULT_ORDER,
            j0: 0,
            besov,
            rule,
            grid_size,
        }
    }

    pub fn with_rule(mut self, rule: RuleSpec) -> Self {
        self.rule = rule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.besov.check_window(self.filter_order)?;
        if !self.grid_size.is_power_of_two() || self.grid_size < (2usize << self.j0) {
            return Err(Error::Shape(format!(
                "grid size {} must be a power of two >= 2^(j0+1) = {}",
                self.grid_size,
                2usize << self.j0
            )));
        }
        match self.rule {
            RuleSpec::Compression(pct) if !(0.0..=100.0).contains(&pct) => Err(Error::Parameter(
                format!("compression {pct}% outside [0, 100]"),
            )),
            _ => Ok(()),
        }
    }
}

/// Pointwise error between a target and its reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct MiseProfile {
    /// `h_N Σ (f − f̂)²`.
    pub mise: f64,
    pub sup_error: f64,
    /// `|f − f̂|` per sample.
    pub abs_error: Vec<f64>,
    pub domain: Interval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnReport {
    pub target_tree: CoefficientTree,
    pub learned: CoefficientTree,
    pub reconstruction: SampleGrid,
    pub tau: f64,
    pub rule: ShrinkageRule,
    pub compression_pct: f64,
    pub kept_count: usize,
    /// `m(j0, J)`.
    pub active_count: usize,
    pub mise: f64,
    pub sup_error: f64,
    pub error_profile: Vec<f64>,
    pub besov_norm_target: f64,
    pub besov_norm_learned: f64,
}

impl LearnReport {
    pub fn zeroed_count(&self) -> usize {
        self.active_count - self.kept_count
    }

    pub fn kept_set(&self) -> Vec<(u32, usize)> {
        self.learned.kept_set()
    }

    pub fn profile(&self) -> MiseProfile {
        MiseProfile {
            mise: self.mise,
            sup_error: self.sup_error,
            abs_error: self.error_profile.clone(),
            domain: self.reconstruction.domain(),
        }
    }
}

/// A validated configuration with its filter built once.
#[derive(Debug, Clone)]
pub struct Learner {
    config: LearnConfig,
    filter: FilterPair,
}

impl Learner {
    pub fn new(config: LearnConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            filter: make_daubechies(config.filter_order)?,
            config,
        })
    }

    pub fn config(&self) -> &LearnConfig {
        &self.config
    }

    pub fn filter(&self) -> &FilterPair {
        &self.filter
    }

    pub fn analyze(&self, target: &SampleGrid) -> Result<CoefficientTree> {
        if target.len() != self.config.grid_size {
            return Err(Error::LengthMismatch {
                left: target.len(),
                right: self.config.grid_size,
            });
        }
        analyze(target, &self.filter, self.config.j0)
    }

    /// The concrete operator the rule spec resolves to on `tree`.
    pub fn resolve_rule(&self, tree: &CoefficientTree) -> ShrinkageRule {
        let tau = self.config.besov.tau();
        match self.config.rule {
            RuleSpec::Identity => ShrinkageRule::Identity,
            RuleSpec::Compression(pct) => ShrinkageRule::Threshold {
                delta: activation::delta_for_compression(tree, tau, pct),
            },
            RuleSpec::Delta(delta) => ShrinkageRule::Threshold { delta },
            RuleSpec::TopK(k) => ShrinkageRule::TopK { k },
            RuleSpec::Soft(lambda) => ShrinkageRule::Soft { lambda },
        }
    }

    pub fn learn(&self, target: &SampleGrid) -> Result<LearnReport> {
        let tree = self.analyze(target)?;
        let rule = self.resolve_rule(&tree);
        self.learn_tree(target, tree, rule)
    }

    /// Runs the pipeline from an already analyzed tree with a fixed operator.
    pub fn learn_tree(
        &self,
        target: &SampleGrid,
        tree: CoefficientTree,
        rule: ShrinkageRule,
    ) -> Result<LearnReport> {
        let tau = self.config.besov.tau();
        let learned = rule.apply(&tree, tau)?;
        let reconstruction = synthesize(&learned, &self.filter)?;
        let profile = mise_profile(target, &reconstruction)?;
        Ok(LearnReport {
            compression_pct: activation::compression_pct(&learned),
            kept_count: learned.kept_count(),
            active_count: learned.active_count(),
            besov_norm_target: besov_seq_norm(&tree, &self.config.besov),
            besov_norm_learned: besov_seq_norm(&learned, &self.config.besov),
            target_tree: tree,
            learned,
            reconstruction,
            tau,
            rule,
            mise: profile.mise,
            sup_error: profile.sup_error,
            error_profile: profile.abs_error,
        })
    }
}

pub fn learn(target: &SampleGrid, config: &LearnConfig) -> Result<LearnReport> {
    Learner::new(*config)?.learn(target)
}

/// Rectangle-rule integrated squared error on the shared grid.
pub fn mise_profile(target: &SampleGrid, learned: &SampleGrid) -> Result<MiseProfile> {
    if target.len() != learned.len() {
        return Err(Error::LengthMismatch {
            left: target.len(),
            right: learned.len(),
        });
    }
    let abs_error: Vec<f64> = target
        .values()
        .iter()
        .zip(learned.values())
        .map(|(f, g)| libm::fabs(f - g))
        .collect();
    let mise = target.step() * abs_error.iter().map(|e| e * e).sum::<f64>();
    let sup_error = abs_error.iter().fold(0.0, |m: f64, e| m.max(*e));
    Ok(MiseProfile {
        mise,
        sup_error,
        abs_error,
        domain: target.domain(),
    })
}

/// Share of the integrated squared error found within `radius` of any of the
/// given singularities.
pub fn error_concentration(profile: &MiseProfile, singularities: &[f64], radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::Parameter(format!("radius = {radius} must be > 0")));
    }
    if profile.abs_error.is_empty() {
        return Err(Error::UndefinedInput("empty error profile"));
    }
    let n = profile.abs_error.len();
    let h = profile.domain.length() / n as f64;
    let (mut near, mut total) = (0.0, 0.0);
    for (i, e) in profile.abs_error.iter().enumerate() {
        let x = profile.domain.lo + i as f64 * h;
        let sq = e * e;
        total += sq;
        if singularities.iter().any(|s| libm::fabs(x - s) <= radius) {
            near += sq;
        }
    }
    if total == 0.0 {
        return Err(Error::UndefinedInput("error profile is identically zero"));
    }
    Ok(near / total)
}

/// Normalization of the MISE in compression sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelativeMise {
    /// Divide by the mean of the squared target samples.
    #[default]
    MeanSquare,
    /// Divide by `h_N Σ f²`, the target's squared L2 norm.
    Energy,
    /// Report the MISE itself.
    Absolute,
}

impl RelativeMise {
    pub fn normalizer(&self, target: &SampleGrid) -> f64 {
        let sum_sq: f64 = target.values().iter().map(|v| v * v).sum();
        match self {
            RelativeMise::MeanSquare => sum_sq / target.len() as f64,
            RelativeMise::Energy => sum_sq * target.step(),
            RelativeMise::Absolute => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Requested compression.
    pub pct: f64,
    /// Achieved compression of the active set.
    pub compression_pct: f64,
    pub mise: f64,
    pub relative_mise: f64,
}

/// One threshold run per requested compression percentage.
///
/// The config's own rule is ignored; each row uses `RuleSpec::Compression(pct)`.
pub fn compression_sweep(
    target: &SampleGrid,
    config: &LearnConfig,
    pct_list: &[f64],
    normalization: RelativeMise,
) -> Result<Vec<SweepRow>> {
    let learner = Learner::new(config.with_rule(RuleSpec::Identity))?;
    let tree = learner.analyze(target)?;
    let tau = config.besov.tau();
    let ranked = activation::rank(&tree, tau);
    let norm = normalization.normalizer(target);
    pct_list
        .iter()
        .map(|&pct| {
            if !(0.0..=100.0).contains(&pct) {
                return Err(Error::Parameter(format!("compression {pct}% outside [0, 100]")));
            }
            let rule = ShrinkageRule::Threshold {
                delta: activation::delta_for_ranked(&ranked, pct),
            };
            let report = learner.learn_tree(target, tree.clone(), rule)?;
            Ok(SweepRow {
                pct,
                compression_pct: report.compression_pct,
                mise: report.mise,
                relative_mise: report.mise / norm,
            })
        })
        .collect()
}

/// Highest compression (fewest kept top-ranked betas) whose MISE does not
/// exceed `benchmark_mise`. Returns `(compression_pct, kept_count, mise)`.
///
/// Kept sets of the top-k rule are nested, so the MISE is non-increasing in
/// `k` and a bisection over `k` finds the smallest admissible count.
pub fn compression_for_benchmark(
    target: &SampleGrid,
    config: &LearnConfig,
    benchmark_mise: f64,
) -> Result<(f64, usize, f64)> {
    let learner = Learner::new(config.with_rule(RuleSpec::Identity))?;
    let tree = learner.analyze(target)?;
    let m = activation::rank(&tree, config.besov.tau()).len();
    let run = |k: usize| learner.learn_tree(target, tree.clone(), ShrinkageRule::TopK { k });
    let (mut lo, mut hi) = (0usize, m);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if run(mid)?.mise <= benchmark_mise {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let best = run(lo)?;
    Ok((best.compression_pct, best.kept_count, best.mise))
}

/// Member configurations for a swarm of learners whose smoothness index is
/// shifted by each offset.
///
/// Members share the kept count: a `Compression` rule is converted once, from
/// the base tree, into `TopK` with `k = M − ⌈pct·M/100⌉`.
#[derive(Debug, Clone)]
pub struct SwarmPlan {
    members: Vec<LearnConfig>,
    offsets: Vec<f64>,
}

impl SwarmPlan {
    pub fn new(target: &SampleGrid, base: &LearnConfig, s_offsets: &[f64]) -> Result<Self> {
        let rule = match base.rule {
            RuleSpec::Compression(pct) => {
                let learner = Learner::new(base.with_rule(RuleSpec::Identity))?;
                let tree = learner.analyze(target)?;
                let m = activation::rank(&tree, base.besov.tau()).len();
                RuleSpec::TopK(m - activation::zero_count_for(m, pct))
            }
            other => other,
        };
        let members = s_offsets
            .iter()
            .enumerate()
            .map(|(index, &offset)| {
                let member_err = |e: Error| Error::SwarmMember {
                    index,
                    s: base.besov.s() + offset,
                    reason: alloc::string::ToString::to_string(&e),
                };
                let besov = base.besov.with_s_offset(offset).map_err(member_err)?;
                let config = LearnConfig {
                    besov,
                    rule,
                    ..*base
                };
                config.validate().map_err(member_err)?;
                Ok(config)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            members,
            offsets: s_offsets.to_vec(),
        })
    }

    pub fn members(&self) -> &[LearnConfig] {
        &self.members
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn run_member(&self, index: usize, target: &SampleGrid) -> Result<LearnReport> {
        learn(target, &self.members[index])
    }
}

/// Runs every swarm member sequentially.
pub fn swarm_learn(
    target: &SampleGrid,
    base: &LearnConfig,
    s_offsets: &[f64],
) -> Result<Vec<LearnReport>> {
    let plan = SwarmPlan::new(target, base, s_offsets)?;
    (0..plan.members().len())
        .map(|i| plan.run_member(i, target))
        .collect()
}
