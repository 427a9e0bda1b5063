//! Command-line interface: argument types and the five subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use wbnn_core::corpus::{CorpusEntry, CorpusId};
use wbnn_core::density::{LevelRule, RiskSettings};
use wbnn_core::learner::{compression_for_benchmark, compression_sweep, learn, RelativeMise};
use wbnn_core::transform::{analyze, analyze_periodic};
use wbnn_core::{BesovParams, Interval, LearnConfig, RuleSpec, SampleGrid};

use crate::error::{AppError, AppResult};
use crate::output::{self, BenchmarkRow, Manifest};
use crate::parallel;
use crate::stats::slope_interval;
use crate::svg::{line_plot, Series};

#[derive(Debug, Parser)]
#[command(name = "wbnn", version, about = "Wavelet-based network learning of univariate functions")]
pub struct Cli {
    /// Directory for CSV, SVG and manifest files
    #[arg(long, global = true, env = "WBNN_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    /// Seed for the random draws of the density experiment
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Also write an SVG plot
    #[arg(long, global = true)]
    pub svg: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn one target and write the target, learned curve and error
    Learn(LearnArgs),
    /// Relative MISE against compression percentage for several targets
    Sweep(SweepArgs),
    /// Risk rate of the Haar density estimator
    Density(DensityArgs),
    /// Learners with perturbed smoothness index on the same target
    Swarm(SwarmArgs),
    /// Dump the wavelet coefficients of a target
    Transform(TransformArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SignalArgs {
    /// Corpus target: lambda-tear, weierstrass, double-chirp, sinusoidal-density
    #[arg(long, conflicts_with = "input")]
    pub target: Option<String>,

    /// CSV file with `x` and `value` columns on a uniform power-of-two grid
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Number of samples (power of two)
    #[arg(long, default_value_t = 1024)]
    pub n: usize,

    /// λ of the λ-tear or τ of the Weierstrass curve
    #[arg(long)]
    pub shape: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Vanishing moments of the Daubechies filter
    #[arg(long, default_value_t = 4)]
    pub filter_order: usize,

    /// Coarsest level
    #[arg(long, default_value_t = 0)]
    pub j0: u32,

    /// Besov power index (`inf` allowed); selects the target's registration
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,

    /// Besov log index override
    #[arg(long)]
    pub q: Option<f64>,

    /// Smoothness override
    #[arg(long)]
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[group(multiple = false)]
pub struct RuleArgs {
    /// Percentage of active betas to zero by thresholding
    #[arg(long)]
    pub compress: Option<f64>,

    /// Threshold on the normalized weight
    #[arg(long)]
    pub delta: Option<f64>,

    /// Keep the k highest-ranked betas
    #[arg(long)]
    pub top_k: Option<usize>,

    /// Non-threshold shrinkage β·w/(w + λ)
    #[arg(long)]
    pub soft: Option<f64>,
}

impl RuleArgs {
    fn spec(&self) -> RuleSpec {
        if let Some(pct) = self.compress {
            RuleSpec::Compression(pct)
        } else if let Some(d) = self.delta {
            RuleSpec::Delta(d)
        } else if let Some(k) = self.top_k {
            RuleSpec::TopK(k)
        } else if let Some(l) = self.soft {
            RuleSpec::Soft(l)
        } else {
            RuleSpec::Identity
        }
    }
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    #[command(flatten)]
    pub signal: SignalArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub rule: RuleArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Normalization {
    MeanSquare,
    Energy,
    Absolute,
}

impl From<Normalization> for RelativeMise {
    fn from(n: Normalization) -> Self {
        match n {
            Normalization::MeanSquare => RelativeMise::MeanSquare,
            Normalization::Energy => RelativeMise::Energy,
            Normalization::Absolute => RelativeMise::Absolute,
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated corpus targets, or `all`
    #[arg(long, default_value = "all")]
    pub targets: String,

    /// Compression percentages
    #[arg(long, value_delimiter = ',', default_value = "0,50,85,98,99")]
    pub pcts: Vec<f64>,

    #[arg(long, value_enum, default_value = "mean-square")]
    pub normalization: Normalization,

    /// Also find, for every target, the compression that meets the MISE the
    /// λ-tear attains at this percentage
    #[arg(long)]
    pub benchmark_pct: Option<f64>,

    #[arg(long, default_value_t = 1024)]
    pub n: usize,

    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, default_value = "sinusoidal-density")]
    pub target: String,

    /// Smallest sample size 2^e
    #[arg(long, default_value_t = 8)]
    pub n_min_exp: u32,

    /// Largest sample size 2^e
    #[arg(long, default_value_t = 14)]
    pub n_max_exp: u32,

    #[arg(long, default_value_t = 50)]
    pub reps: usize,

    /// Smoothness of the density (default: the target's registration at p = 2)
    #[arg(long)]
    pub smoothness: Option<f64>,

    /// Resolution rule: `balanced`, `log2` or `fixed:J`
    #[arg(long, default_value = "balanced")]
    pub level_rule: String,

    /// Cells of the rectangle rule for the integrated squared error
    #[arg(long, default_value_t = 1 << 16)]
    pub mise_grid: usize,
}

#[derive(Debug, Args)]
pub struct SwarmArgs {
    #[command(flatten)]
    pub signal: SignalArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub rule: RuleArgs,

    /// Offsets added to the smoothness index, one learner each
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-0.25,0,0.25")]
    pub offsets: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub signal: SignalArgs,

    #[arg(long, default_value_t = 4)]
    pub filter_order: usize,

    #[arg(long, default_value_t = 0)]
    pub j0: u32,

    /// Wrap around the ends instead of requiring a zero margin
    #[arg(long)]
    pub periodic: bool,
}

fn usage<T>(r: wbnn_core::Result<T>) -> AppResult<T> {
    r.map_err(|e| AppError::usage(e.to_string()))
}

fn parse_target(name: &str) -> AppResult<CorpusId> {
    name.parse::<CorpusId>().map_err(|_| {
        let known: Vec<&str> = CorpusId::ALL.iter().map(|c| c.as_str()).collect();
        AppError::usage(format!("unknown target `{name}` (expected one of {})", known.join(", ")))
    })
}

fn corpus_entry(id: CorpusId, shape: Option<f64>) -> AppResult<CorpusEntry> {
    match (id, shape) {
        (CorpusId::LambdaTear, Some(l)) => usage(CorpusEntry::lambda_tear(l)),
        (CorpusId::Weierstrass, Some(t)) => usage(CorpusEntry::weierstrass(t)),
        (_, Some(_)) => Err(AppError::usage(format!("target `{id}` takes no shape parameter"))),
        (_, None) => Ok(CorpusEntry::new(id)),
    }
}

/// A sampled signal and, for corpus targets, its entry.
struct Signal {
    name: String,
    entry: Option<CorpusEntry>,
    grid: SampleGrid,
}

fn load_signal(args: &SignalArgs) -> AppResult<Signal> {
    if let Some(path) = &args.input {
        let grid = output::read_signal(path)?;
        return Ok(Signal {
            name: path.display().to_string(),
            entry: None,
            grid,
        });
    }
    let id = parse_target(args.target.as_deref().unwrap_or("lambda-tear"))?;
    let entry = corpus_entry(id, args.shape)?;
    if !args.n.is_power_of_two() {
        return Err(AppError::usage(format!("--n {} is not a power of two", args.n)));
    }
    let grid = usage(entry.sample(args.n))?;
    Ok(Signal {
        name: id.to_string(),
        entry: Some(entry),
        grid,
    })
}

fn besov_for(entry: Option<&CorpusEntry>, model: &ModelArgs) -> AppResult<BesovParams> {
    let base = match entry {
        Some(e) => usage(e.register_besov(model.p))?,
        None => usage(BesovParams::new(model.p, f64::INFINITY, 1.0))?,
    };
    usage(BesovParams::new(
        model.p,
        model.q.unwrap_or(base.q()),
        model.s.unwrap_or(base.s()),
    ))
}

fn learn_config(signal: &Signal, model: &ModelArgs, rule: RuleSpec) -> AppResult<LearnConfig> {
    let besov = besov_for(signal.entry.as_ref(), model)?;
    let config = LearnConfig {
        filter_order: model.filter_order,
        j0: model.j0,
        besov,
        rule,
        grid_size: signal.grid.len(),
    };
    usage(config.validate())?;
    Ok(config)
}

fn finite(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn rule_json(rule: RuleSpec) -> serde_json::Value {
    match rule {
        RuleSpec::Identity => json!({ "kind": "identity" }),
        RuleSpec::Compression(p) => json!({ "kind": "compression", "pct": p }),
        RuleSpec::Delta(d) => json!({ "kind": "delta", "delta": d }),
        RuleSpec::TopK(k) => json!({ "kind": "top_k", "k": k }),
        RuleSpec::Soft(l) => json!({ "kind": "soft", "lambda": l }),
    }
}

fn config_json(signal: &str, config: &LearnConfig) -> serde_json::Value {
    json!({
        "target": signal,
        "n": config.grid_size,
        "filter_order": config.filter_order,
        "j0": config.j0,
        "p": finite(config.besov.p()),
        "q": finite(config.besov.q()),
        "s": config.besov.s(),
        "rule": rule_json(config.rule),
    })
}

fn write_text(path: PathBuf, text: &str) -> AppResult<PathBuf> {
    fs::write(&path, text).map_err(|source| AppError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

pub fn run(cli: &Cli) -> AppResult<()> {
    output::ensure_dir(&cli.out_dir)?;
    match &cli.command {
        Command::Learn(a) => cmd_learn(cli, a),
        Command::Sweep(a) => cmd_sweep(cli, a),
        Command::Density(a) => cmd_density(cli, a),
        Command::Swarm(a) => cmd_swarm(cli, a),
        Command::Transform(a) => cmd_transform(cli, a),
    }
}

fn cmd_learn(cli: &Cli, args: &LearnArgs) -> AppResult<()> {
    let signal = load_signal(&args.signal)?;
    let config = learn_config(&signal, &args.model, args.rule.spec())?;
    let report = learn(&signal.grid, &config)?;
    let dir = &cli.out_dir;
    let mut manifest = Manifest::new("learn", config_json(&signal.name, &config), cli.seed);
    manifest.record(&output::write_learn(dir, &signal.grid, &report)?);
    if cli.svg {
        let xs: Vec<f64> = signal.grid.xs().collect();
        let svg = line_plot(
            &format!("{}: {:.3}% compression", signal.name, report.compression_pct),
            &[
                Series { label: "target", xs: &xs, ys: signal.grid.values(), dashed: true },
                Series { label: "learned", xs: &xs, ys: report.reconstruction.values(), dashed: false },
                Series { label: "error", xs: &xs, ys: &report.error_profile, dashed: false },
            ],
        );
        manifest.record(&write_text(dir.join("learn.svg"), &svg)?);
    }
    manifest.write(dir)?;
    let relative = report.mise / RelativeMise::MeanSquare.normalizer(&signal.grid);
    println!("target           {}", signal.name);
    println!("samples          {}", signal.grid.len());
    println!("compression      {:.4}% ({} of {} betas kept)", report.compression_pct, report.kept_count, report.active_count);
    println!("mise             {:.6e}", report.mise);
    println!("relative mise    {relative:.6e}");
    println!("sup error        {:.6e}", report.sup_error);
    Ok(())
}

fn sweep_targets(list: &str) -> AppResult<Vec<CorpusId>> {
    if list.trim() == "all" {
        return Ok(CorpusId::ALL.to_vec());
    }
    list.split(',').map(|t| parse_target(t.trim())).collect()
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> AppResult<()> {
    let targets = sweep_targets(&args.targets)?;
    if let Some(p) = args.pcts.iter().find(|p| !(0.0..=100.0).contains(*p)) {
        return Err(AppError::usage(format!("compression {p}% outside [0, 100]")));
    }
    let signal_args = |id: CorpusId| SignalArgs {
        target: Some(id.as_str().to_string()),
        input: None,
        n: args.n,
        shape: None,
    };
    let mut rows = Vec::new();
    let mut configs = Vec::new();
    for &id in &targets {
        let signal = load_signal(&signal_args(id))?;
        let config = learn_config(&signal, &args.model, RuleSpec::Identity)?;
        for row in compression_sweep(&signal.grid, &config, &args.pcts, args.normalization.into())? {
            rows.push((signal.name.clone(), row));
        }
        configs.push(config_json(&signal.name, &config));
    }
    let dir = &cli.out_dir;
    let mut manifest = Manifest::new(
        "sweep",
        json!({
            "targets": configs,
            "pcts": args.pcts,
            "normalization": format!("{:?}", args.normalization),
            "benchmark_pct": args.benchmark_pct,
        }),
        cli.seed,
    );
    manifest.record(&output::write_sweep(dir, &rows)?);
    for (name, r) in &rows {
        println!("{name:<20} {:>7.3}%  relative mise {:.6e}", r.compression_pct, r.relative_mise);
    }
    if let Some(bench_pct) = args.benchmark_pct {
        let tear = load_signal(&signal_args(CorpusId::LambdaTear))?;
        let config = learn_config(&tear, &args.model, RuleSpec::Compression(bench_pct))?;
        let bench = learn(&tear.grid, &config)?.mise;
        let mut bench_rows = Vec::new();
        for &id in &targets {
            let signal = load_signal(&signal_args(id))?;
            let config = learn_config(&signal, &args.model, RuleSpec::Identity)?;
            let (pct, kept, mise) = compression_for_benchmark(&signal.grid, &config, bench)?;
            println!("{:<20} meets benchmark {bench:.6e} at {pct:.3}% compression", signal.name);
            bench_rows.push(BenchmarkRow {
                target: signal.name,
                benchmark_mise: bench,
                compression_pct: pct,
                kept_count: kept,
                mise,
            });
        }
        manifest.record(&output::write_benchmark(dir, &bench_rows)?);
    }
    if cli.svg {
        let series_data: Vec<(String, Vec<f64>, Vec<f64>)> = targets
            .iter()
            .map(|id| {
                let own: Vec<_> = rows.iter().filter(|(n, _)| n == id.as_str()).map(|(_, r)| r).collect();
                (
                    id.to_string(),
                    own.iter().map(|r| r.compression_pct).collect(),
                    own.iter().map(|r| r.relative_mise.max(1e-300).log10()).collect(),
                )
            })
            .collect();
        let series: Vec<Series<'_>> = series_data
            .iter()
            .map(|(n, x, y)| Series { label: n, xs: x, ys: y, dashed: false })
            .collect();
        let svg = line_plot("log10 relative MISE against compression %", &series);
        manifest.record(&write_text(dir.join("sweep.svg"), &svg)?);
    }
    manifest.write(dir)?;
    Ok(())
}

fn parse_level_rule(text: &str, s: f64) -> AppResult<LevelRule> {
    match text {
        "balanced" => Ok(LevelRule::Balanced { s }),
        "log2" => Ok(LevelRule::Log2),
        _ => text
            .strip_prefix("fixed:")
            .and_then(|j| j.parse().ok())
            .map(LevelRule::Fixed)
            .ok_or_else(|| AppError::usage(format!("unknown level rule `{text}`"))),
    }
}

fn cmd_density(cli: &Cli, args: &DensityArgs) -> AppResult<()> {
    let entry = CorpusEntry::new(parse_target(&args.target)?);
    if args.n_min_exp >= args.n_max_exp || args.n_max_exp > 24 {
        return Err(AppError::usage("need n-min-exp < n-max-exp <= 24"));
    }
    let s = match args.smoothness {
        Some(s) => s,
        None => usage(entry.register_besov(2.0))?.s(),
    };
    let level_rule = parse_level_rule(&args.level_rule, s)?;
    let domain: Interval = entry.domain();
    // normalize so non-density targets still integrate to one
    let cells = 1usize << 16;
    let h = domain.length() / cells as f64;
    let mass: f64 = (0..cells).map(|i| entry.value(domain.lo + (i as f64 + 0.5) * h)).sum::<f64>() * h;
    if !(mass > 0.0) {
        return Err(AppError::usage(format!("target `{}` has no positive mass", entry.id())));
    }
    let settings = RiskSettings {
        n_list: (args.n_min_exp..=args.n_max_exp).map(|e| 1usize << e).collect(),
        reps: args.reps,
        seed: cli.seed,
        smoothness: s,
        level_rule,
        domain,
        mise_grid: args.mise_grid,
    };
    usage(settings.validate())?;
    let density = {
        let entry = entry.clone();
        let scale = if (mass - 1.0).abs() < 1e-9 { 1.0 } else { 1.0 / mass };
        move |x: f64| entry.value(x) * scale
    };
    let table = parallel::risk_experiment(density, &settings)?;
    let ci = slope_interval(&table.risk_fit, table.rows.len(), 0.95);
    let dir = &cli.out_dir;
    let mut manifest = Manifest::new(
        "density",
        json!({
            "target": entry.id().as_str(),
            "n_list": settings.n_list,
            "reps": settings.reps,
            "smoothness": s,
            "level_rule": args.level_rule,
            "mise_grid": settings.mise_grid,
        }),
        cli.seed,
    );
    manifest.record(&output::write_density(dir, &table, settings.theoretical_slope(), ci)?);
    for r in &table.rows {
        println!("N = {:>7}  J = {:>2}  mean mise {:.6e}  mean risk {:.6e}", r.n, r.level, r.mean_mise, r.mean_risk);
    }
    match ci {
        Some((lo, hi)) => println!(
            "fitted slope {:.4} (95% CI {lo:.4} .. {hi:.4}), theoretical {:.4}",
            table.slope(),
            settings.theoretical_slope()
        ),
        None => println!("fitted slope {:.4}, theoretical {:.4}", table.slope(), settings.theoretical_slope()),
    }
    if cli.svg {
        let xs: Vec<f64> = table.rows.iter().map(|r| (r.n as f64).ln()).collect();
        let ys: Vec<f64> = table.rows.iter().map(|r| r.mean_risk.ln()).collect();
        let fit: Vec<f64> = xs.iter().map(|x| table.risk_fit.intercept + table.risk_fit.slope * x).collect();
        let svg = line_plot(
            "log mean risk against log N",
            &[
                Series { label: "simulated", xs: &xs, ys: &ys, dashed: false },
                Series { label: "fit", xs: &xs, ys: &fit, dashed: true },
            ],
        );
        manifest.record(&write_text(dir.join("density.svg"), &svg)?);
    }
    manifest.write(dir)?;
    Ok(())
}

fn cmd_swarm(cli: &Cli, args: &SwarmArgs) -> AppResult<()> {
    if args.offsets.is_empty() {
        return Err(AppError::usage("no offsets given"));
    }
    let signal = load_signal(&args.signal)?;
    let config = learn_config(&signal, &args.model, args.rule.spec())?;
    let reports = parallel::swarm_learn(&signal.grid, &config, &args.offsets)?;
    let dir = &cli.out_dir;
    let mut manifest = Manifest::new(
        "swarm",
        json!({ "base": config_json(&signal.name, &config), "offsets": args.offsets }),
        cli.seed,
    );
    let (curves, summary) = output::write_swarm(dir, &signal.grid, &args.offsets, &reports)?;
    manifest.record(&curves);
    manifest.record(&summary);
    for (i, (r, off)) in reports.iter().zip(&args.offsets).enumerate() {
        println!(
            "member {i}: s offset {off:+.3}  kept {}  compression {:.3}%  mise {:.6e}",
            r.kept_count, r.compression_pct, r.mise
        );
    }
    if cli.svg {
        let xs: Vec<f64> = signal.grid.xs().collect();
        let labels: Vec<String> = args.offsets.iter().map(|o| format!("s {o:+}")).collect();
        let mut series = vec![Series { label: "target", xs: &xs, ys: signal.grid.values(), dashed: true }];
        series.extend(reports.iter().zip(&labels).map(|(r, l)| Series {
            label: l,
            xs: &xs,
            ys: r.reconstruction.values(),
            dashed: false,
        }));
        let svg = line_plot(&format!("{} swarm", signal.name), &series);
        manifest.record(&write_text(dir.join("swarm.svg"), &svg)?);
    }
    manifest.write(dir)?;
    Ok(())
}

fn cmd_transform(cli: &Cli, args: &TransformArgs) -> AppResult<()> {
    let signal = load_signal(&args.signal)?;
    let filter = usage(wbnn_core::filter::make_daubechies(args.filter_order))?;
    let tree = if args.periodic {
        usage(analyze_periodic(&signal.grid, &filter, args.j0))?
    } else {
        usage(analyze(&signal.grid, &filter, args.j0))?
    };
    let dir: &Path = &cli.out_dir;
    let mut manifest = Manifest::new(
        "transform",
        json!({
            "target": signal.name,
            "n": signal.grid.len(),
            "filter_order": args.filter_order,
            "j0": args.j0,
            "periodic": args.periodic,
        }),
        cli.seed,
    );
    manifest.record(&output::write_transform(dir, &tree)?);
    manifest.write(dir)?;
    println!(
        "{} coefficients: {} alphas at level {}, detail levels {}..={}, {} active betas",
        tree.len(),
        tree.alphas().len(),
        tree.j0(),
        tree.j0(),
        tree.finest_level(),
        tree.active_count()
    );
    Ok(())
}
