//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use wbnn::parallel;
use wbnn_core::activation::{apply_soft, apply_threshold, apply_top_k, rank, ShrinkageRule};
use wbnn_core::besov::{besov_seq_norm, BesovParams};
use wbnn_core::corpus::{CorpusEntry, CorpusId};
use wbnn_core::density::{estimate_density, LevelRule, RiskSettings};
use wbnn_core::filter::make_daubechies;
use wbnn_core::learner::{compression_for_benchmark, error_concentration, learn, Learner};
use wbnn_core::transform::{analyze_periodic, synthesize, CoefficientTree, Interval, SampleGrid};
use wbnn_core::{LearnConfig, RuleSpec};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

fn grid(values: Vec<f64>) -> SampleGrid {
    let n = values.len() as f64;
    SampleGrid::new(Interval::new(0.0, n).unwrap(), values).unwrap()
}

fn random_signal(rng: &mut ChaCha20Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn perfect_reconstruction() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for r in 1..=8 {
        let f = make_daubechies(r).unwrap();
        for n in [256, 1024, 4096] {
            let x = random_signal(&mut rng, n);
            let tree = analyze_periodic(&grid(x.clone()), &f, 0).unwrap();
            let back = synthesize(&tree, &f).unwrap();
            for (a, b) in back.values().iter().zip(&x) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    let t = start.elapsed();
    outcome(
        worst < 1e-10 && within(t, 1.0),
        format!("max |error| {worst:.2e} over DB1-DB8 x N in {{256, 1024, 4096}}, {:.3} s", t.as_secs_f64()),
    )
}

fn orthonormality() -> Outcome {
    let n = 64;
    let mut worst_gram = 0.0f64;
    for r in 1..=8 {
        let f = make_daubechies(r).unwrap();
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                analyze_periodic(&grid(e), &f, 0).unwrap().to_flat()
            })
            .collect();
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = (0..n).map(|k| cols[a][k] * cols[b][k]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                worst_gram = worst_gram.max((dot - want).abs());
            }
        }
    }
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let mut worst_parseval = 0.0f64;
    for i in 0..100 {
        let f = make_daubechies(1 + i % 8).unwrap();
        let x = random_signal(&mut rng, 1024);
        let energy: f64 = x.iter().map(|v| v * v).sum();
        let coeff: f64 = analyze_periodic(&grid(x), &f, 0).unwrap().to_flat().iter().map(|c| c * c).sum();
        worst_parseval = worst_parseval.max((energy - coeff).abs() / energy.max(1.0));
    }
    outcome(
        worst_gram < 1e-10 && worst_parseval < 1e-10,
        format!("max |QtQ - I| {worst_gram:.2e} (N = 64, DB1-DB8); Parseval {worst_parseval:.2e} on 100 signals"),
    )
}

fn random_tree(rng: &mut ChaCha20Rng) -> CoefficientTree {
    // at most 7 betas per tree, so the subset enumeration stays small
    let layouts: [(u32, u32); 4] = [(0, 3), (1, 2), (2, 1), (0, 2)];
    let (j0, levels) = layouts[rng.random_range(0..layouts.len())];
    let alphas = (0..1usize << j0).map(|_| rng.random_range(-2.0..2.0)).collect();
    let betas = (j0..j0 + levels)
        .map(|j| {
            (0..1usize << j)
                .map(|_| if rng.random_bool(0.15) { 0.0 } else { rng.random_range(-2.0..2.0) })
                .collect()
        })
        .collect();
    CoefficientTree::from_parts(j0, alphas, betas, Interval::UNIT).unwrap()
}

fn hilbert_residual(tree: &CoefficientTree, tau: f64, kept: &[(u32, usize)]) -> f64 {
    let mut rest = tree.map_betas(|j, k, b| if kept.contains(&(j, k)) { 0.0 } else { b });
    rest.alphas_mut().iter_mut().for_each(|a| *a = 0.0);
    besov_seq_norm(&rest, &BesovParams::new(2.0, 2.0, tau + 0.5).unwrap())
}

fn best_k_term_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let (mut worst, mut mismatched, mut cases) = (0.0f64, 0usize, 0usize);
    for _ in 0..200 {
        let t = random_tree(&mut rng);
        let tau = rng.random_range(-0.5..2.0);
        let index: Vec<(u32, usize)> = t.betas().filter(|(_, _, b)| *b != 0.0).map(|(j, k, _)| (j, k)).collect();
        let m = index.len();
        assert!(m <= 12);
        let ranked = rank(&t, tau);
        for k in 0..=m {
            cases += 1;
            let mut best = f64::INFINITY;
            let mut best_set = Vec::new();
            for mask in 0u32..1 << m {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let set: Vec<(u32, usize)> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| index[i]).collect();
                let r = hilbert_residual(&t, tau, &set);
                if r < best {
                    best = r;
                    best_set = set;
                }
            }
            let kept = apply_top_k(&t, tau, k).kept_set();
            let ours = hilbert_residual(&t, tau, &kept);
            worst = worst.max((ours - best).abs() / best.max(1.0));
            let tie = k > 0 && k < m && ranked.entries[k - 1].weight == ranked.entries[k].weight;
            if !tie && kept != best_set {
                mismatched += 1;
            }
        }
    }
    let t = start.elapsed();
    outcome(
        worst <= 1e-12 && mismatched == 0 && within(t, 30.0),
        format!(
            "200 trees, {cases} (tree, k) cases: max residual gap {worst:.2e}, {mismatched} kept-set mismatches, {:.2} s",
            t.as_secs_f64()
        ),
    )
}

fn top_k_convergence() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for id in CorpusId::ALL {
        let e = CorpusEntry::new(id);
        let g = e.sample(1024).unwrap();
        let params = e.register_besov(2.0).unwrap();
        let learner = Learner::new(LearnConfig::new(params, RuleSpec::Identity, 1024)).unwrap();
        let tree = learner.analyze(&g).unwrap();
        let tau = params.tau();
        let m = rank(&tree, tau).len();
        let mut prev = f64::INFINITY;
        let mut monotone = true;
        for k in 0..=m {
            let mut diff = tree.difference(&apply_top_k(&tree, tau, k)).unwrap();
            diff.alphas_mut().iter_mut().for_each(|a| *a = 0.0);
            let r = besov_seq_norm(&diff, &params);
            monotone &= r <= prev;
            prev = r;
        }
        pass &= monotone && prev < 1e-9;
        details.push(format!("{id}: M = {m}, monotone = {monotone}, final {prev:.1e}"));
    }
    outcome(pass, details.join("; "))
}

fn benchmark_compressions(j0: u32) -> Vec<(CorpusId, f64)> {
    let config = |e: &CorpusEntry, rule| {
        let mut c = LearnConfig::new(e.register_besov(2.0).unwrap(), rule, 1024);
        c.j0 = j0;
        c
    };
    let tear = CorpusEntry::new(CorpusId::LambdaTear);
    let bench = learn(&tear.sample(1024).unwrap(), &config(&tear, RuleSpec::Compression(99.0)))
        .unwrap()
        .mise;
    CorpusId::ALL
        .iter()
        .map(|&id| {
            let e = CorpusEntry::new(id);
            let (pct, _, _) =
                compression_for_benchmark(&e.sample(1024).unwrap(), &config(&e, RuleSpec::Identity), bench).unwrap();
            (id, pct)
        })
        .collect()
}

fn compression_ordering() -> Outcome {
    let start = Instant::now();
    let at = |v: &[(CorpusId, f64)], id| v.iter().find(|(i, _)| *i == id).unwrap().1;
    let ours = benchmark_compressions(7);
    let (w, c, s, l) = (
        at(&ours, CorpusId::Weierstrass),
        at(&ours, CorpusId::DoubleChirp),
        at(&ours, CorpusId::SinusoidalDensity),
        at(&ours, CorpusId::LambdaTear),
    );
    let t = start.elapsed();
    let coarse = benchmark_compressions(0);
    let pass = w <= 30.0
        && l >= 90.0
        && w < c.min(s)
        && c.max(s) < l
        && (c - s).abs() <= 25.0
        && within(t, 10.0);
    let fmt = |v: &[(CorpusId, f64)]| {
        v.iter().map(|(id, p)| format!("{id} {p:.1}%")).collect::<Vec<_>>().join(", ")
    };
    outcome(
        pass,
        format!(
            "DB4, j0 = 7: {}; {:.2} s [j0 = 0 for reference: {}]",
            fmt(&ours),
            t.as_secs_f64(),
            fmt(&coarse)
        ),
    )
}

fn concentration(id: CorpusId, j0: u32) -> f64 {
    let e = CorpusEntry::new(id);
    let mut c = LearnConfig::new(e.register_besov(2.0).unwrap(), RuleSpec::Compression(98.0), 1024);
    c.j0 = j0;
    let r = learn(&e.sample(1024).unwrap(), &c).unwrap();
    let sing: Vec<f64> = match id {
        // no isolated singularity; measure against the support edges
        CorpusId::Weierstrass => vec![0.0, 1.0],
        _ => e.singularities().iter().map(|s| s.x).collect(),
    };
    error_concentration(&r.profile(), &sing, 0.05).unwrap()
}

fn error_concentration_check() -> Outcome {
    let tear = concentration(CorpusId::LambdaTear, 7);
    let sinus = concentration(CorpusId::SinusoidalDensity, 7);
    let weier = concentration(CorpusId::Weierstrass, 7);
    let coarse: Vec<String> = [CorpusId::LambdaTear, CorpusId::SinusoidalDensity, CorpusId::Weierstrass]
        .iter()
        .map(|&id| format!("{id} {:.2}", concentration(id, 0)))
        .collect();
    outcome(
        tear >= 0.5 && sinus >= 0.5 && weier < 0.5,
        format!(
            "DB4, j0 = 7, 98%: lambda-tear {tear:.2}, sinusoidal-density {sinus:.2}, weierstrass {weier:.2} \
             [j0 = 0 for reference: {}]",
            coarse.join(", ")
        ),
    )
}

fn density_rate() -> Outcome {
    let start = Instant::now();
    let e = CorpusEntry::new(CorpusId::SinusoidalDensity);
    let settings = RiskSettings {
        n_list: (8..=14).map(|k| 1usize << k).collect(),
        reps: 50,
        seed: 2024,
        smoothness: 0.5,
        level_rule: LevelRule::Balanced { s: 0.5 },
        domain: e.domain(),
        mise_grid: 1 << 16,
    };
    let table = parallel::risk_experiment(move |x| e.value(x), &settings).unwrap();
    let slope = table.slope();
    let t = start.elapsed();
    outcome(
        (slope + 0.25).abs() <= 0.12 && within(t, 60.0),
        format!(
            "slope {slope:.3} (+/- {:.3}), target -0.25 +/- 0.12, {:.2} s",
            table.risk_fit.slope_stderr,
            t.as_secs_f64()
        ),
    )
}

fn histogram_equivalence() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let (lo, hi) = (-2.0, 3.0);
    let domain = Interval::new(lo, hi).unwrap();
    let (mut mismatches, mut worst_mass) = (0usize, 0.0f64);
    for _ in 0..100 {
        let n = rng.random_range(1..500);
        let level = rng.random_range(0..9u32);
        let sample: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
        let est = estimate_density(&sample, domain, LevelRule::Fixed(level)).unwrap();
        let bins = 1usize << level;
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins];
        for &x in &sample {
            let mut k = 0;
            while k + 1 < bins && x >= lo + (k + 1) as f64 * width {
                k += 1;
            }
            counts[k] += 1;
        }
        let want: Vec<f64> = counts.iter().map(|&c| c as f64 / (n as f64 * width)).collect();
        if est.bin_heights() != want {
            mismatches += 1;
        }
        worst_mass = worst_mass.max((est.total_mass() - 1.0).abs());
    }
    outcome(
        mismatches == 0 && worst_mass <= 1e-12,
        format!("100 samples: {mismatches} mismatching histograms, max |mass - 1| {worst_mass:.1e}"),
    )
}

fn shrinkage_contract() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let mut violations = 0usize;
    let mut soft_zeroed = 0usize;
    for _ in 0..1000 {
        let j0 = rng.random_range(0..3u32);
        let levels = rng.random_range(1..=6u32);
        let alphas = (0..1usize << j0).map(|_| rng.random_range(-3.0..3.0)).collect();
        let betas = (j0..j0 + levels)
            .map(|j| {
                (0..1usize << j)
                    .map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random_range(-3.0..3.0) })
                    .collect()
            })
            .collect();
        let t = CoefficientTree::from_parts(j0, alphas, betas, Interval::UNIT).unwrap();
        let tau = rng.random_range(-0.5..2.0);
        let rules = [
            ShrinkageRule::Threshold { delta: rng.random_range(0.01..5.0) },
            ShrinkageRule::TopK { k: rng.random_range(0..=t.active_count()) },
            ShrinkageRule::Soft { lambda: rng.random_range(0.001..10.0) },
            ShrinkageRule::Identity,
        ];
        for rule in rules {
            let out = rule.apply(&t, tau).unwrap();
            if out.alphas() != t.alphas() {
                violations += 1;
            }
            for ((_, _, a), (_, _, b)) in t.betas().zip(out.betas()) {
                if b.abs() > a.abs() || (b != 0.0 && b.signum() != a.signum()) {
                    violations += 1;
                }
                if matches!(rule, ShrinkageRule::Soft { .. }) && a != 0.0 && b == 0.0 {
                    soft_zeroed += 1;
                }
            }
        }
    }
    let witness = CoefficientTree::from_parts(0, vec![1.0], vec![vec![0.1]], Interval::UNIT).unwrap();
    let killed = apply_threshold(&witness, 0.0, 1.0).unwrap().beta(0, 0) == 0.0;
    let soft_kept = apply_soft(&witness, 0.0, 1e6).unwrap().beta(0, 0) != 0.0;
    outcome(
        violations == 0 && soft_zeroed == 0 && killed && soft_kept,
        format!(
            "1000 trees x 4 rules: {violations} contract violations, {soft_zeroed} betas zeroed by soft rule, \
             threshold witness kills = {killed}"
        ),
    )
}

fn run_cli(dir: &Path, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_wbnn"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .env("SOURCE_DATE_EPOCH", "0")
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn swarm_robustness() -> Outcome {
    let e = CorpusEntry::new(CorpusId::SinusoidalDensity);
    let g = e.sample(1024).unwrap();
    let base = LearnConfig::new(e.register_besov(2.0).unwrap(), RuleSpec::Identity, 1024);
    let offsets = [-0.25, 0.0, 0.25];
    let zero = parallel::swarm_learn(&g, &base.with_rule(RuleSpec::Compression(0.0)), &offsets).unwrap();
    let identical = zero.windows(2).all(|w| w[0].reconstruction == w[1].reconstruction);
    let high = parallel::swarm_learn(&g, &base.with_rule(RuleSpec::Compression(98.0)), &offsets).unwrap();
    let mut distinct = true;
    let mut mise_differ = true;
    for a in 0..high.len() {
        for b in a + 1..high.len() {
            distinct &= high[a].kept_set() != high[b].kept_set();
            mise_differ &= high[a].mise != high[b].mise;
        }
    }
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let args = ["swarm", "--target", "sinusoidal-density", "--compress", "98", "--seed", "5"];
    let ran = dirs.iter().all(|d| run_cli(d.path(), &args));
    let same = ran
        && ["swarm.csv", "swarm_summary.csv", "swarm.manifest.json"].iter().all(|name| {
            let read = |d: &tempfile::TempDir| fs::read(d.path().join(name)).ok();
            let (a, b) = (read(&dirs[0]), read(&dirs[1]));
            a.is_some() && a == b
        });
    let mises: Vec<String> = high.iter().map(|r| format!("{:.4}", r.mise)).collect();
    outcome(
        identical && distinct && mise_differ && same,
        format!(
            "0%: identical = {identical}; 98%: kept sets distinct = {distinct}, MISE [{}]; rerun byte-identical = {same}",
            mises.join(", ")
        ),
    )
}

fn main() -> ExitCode {
    // under `cargo test` extra harness flags may be passed; they are ignored
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("perfect reconstruction", perfect_reconstruction),
        ("orthonormality and Parseval", orthonormality),
        ("top-k equals exhaustive best k-term", best_k_term_oracle),
        ("top-k convergence on the corpus", top_k_convergence),
        ("compression ordering at the lambda-tear benchmark", compression_ordering),
        ("error concentration near singularities", error_concentration_check),
        ("density risk rate", density_rate),
        ("histogram equivalence", histogram_equivalence),
        ("shrinkage contract", shrinkage_contract),
        ("swarm robustness and determinism", swarm_robustness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{status} [{}] {name}: {} ({:.2} s)", i + 1, o.detail, start.elapsed().as_secs_f64());
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
