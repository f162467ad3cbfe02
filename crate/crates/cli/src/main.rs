//! `hipsim`: simulate feature-based human identification protocols, run the
//! eavesdropping attacks against them, and print or sweep the closed-form
//! workload and probability formulas.
//!
//! Every command is a pure function of its flags and seed: rerunning with
//! the same configuration reproduces the output byte for byte. The
//! `HIPSIM_SEED` environment variable overrides `--seed` when set.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hipsim_core::adversary::{
    boolean_hypothesis_search, recover_basic_secret, recover_enhanced_secret,
    recover_enhanced_secret_replay, success_probability, EnhancedAttack, EnhancedAttackOptions,
    ExtractionModel,
};
use hipsim_core::analysis::{
    estimate, recovery_probability_bounds, sweep, workload_basic, workload_enhanced,
    workload_practical, EstimatorParams, Scheme as EstimatorScheme, SweepFigure, SweepGrid,
};
use hipsim_core::feature_model::{
    build_dictionary, sample_picture, BoolExpr, Dictionary, FeatureSet, FeatureUniverse, Question,
    Word,
};
use hipsim_core::magic_square::{parse_feature_table, NamedFeature, MAGIC_SQUARE_CSV};
use hipsim_core::protocols::{
    basic_round, run_session, BasicConfig, EnhancedConfig, LcgParams, PermutationString,
    PracticalConfig, ProtocolConfig, TranscriptRound, UserStrategy,
};
use hipsim_core::rng::{trial_seed, trial_stream, SimRng};
use rand::Rng;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "hipsim", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run authentication sessions and report the acceptance rate.
    Simulate(SimulateArgs),
    /// Run the eavesdropper against honest sessions and report its cost.
    Attack(AttackArgs),
    /// Print closed-form workload and permutation-recovery bounds.
    Bounds(BoundsArgs),
    /// Write a workload-comparison table as CSV.
    Sweep(SweepArgs),
    /// Run a named Monte Carlo estimator and print its report.
    Estimate(EstimateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Basic,
    Enhanced,
    Practical,
    /// Basic rounds with a multi-literal boolean secret.
    Multi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UserArg {
    Honest,
    Random,
}

#[derive(Args)]
struct CommonParams {
    /// Universe size n (features per picture pool), n >= 2
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u32).range(2..))]
    n: u32,
    /// Dictionary size N for the practical scheme, N >= 4
    #[arg(long = "N", default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(4..))]
    dictionary_words: u64,
    /// Word-feature overlap fraction x in (0,1)
    #[arg(long, default_value_t = 0.5)]
    x: f64,
    /// Pictures (or boxes) per round L, 1..=64
    #[arg(long = "L", default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=64))]
    group_size: u32,
    /// Answered slots l, 1..=L
    #[arg(long = "l", default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..=64))]
    assigned: u32,
    /// Rounds per session k, k >= 1
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    /// Words per box j in the practical scheme, j >= 1
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    j: u32,
    /// Per-feature extraction probability p in (0,1]
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Master seed; HIPSIM_SEED overrides when set
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl CommonParams {
    /// Apply the HIPSIM_SEED override.
    fn effective_seed(&self) -> Result<u64> {
        match std::env::var("HIPSIM_SEED") {
            Ok(v) => v.parse().context("HIPSIM_SEED must be a 64-bit integer"),
            Err(_) => Ok(self.seed),
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Which scheme to run
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// User behavior
    #[arg(long, value_enum, default_value_t = UserArg::Honest)]
    user: UserArg,
    /// Sessions to run, >= 1
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Mismatches tolerated by the verifier
    #[arg(long, default_value_t = 0)]
    tolerated_errors: u32,
    /// Write every session transcript to this file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Annotate the practical scheme with the bundled named feature table
    #[arg(long, default_value_t = false)]
    named_features: bool,
    /// Load feature names from a CSV file instead of the bundled table
    #[arg(long)]
    features_file: Option<PathBuf>,
    #[command(flatten)]
    params: CommonParams,
}

#[derive(Args)]
struct AttackArgs {
    /// Which scheme to attack (practical reduces to enhanced with l = 1)
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Attack runs to aggregate, >= 1
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Per-path step cap for the enhanced hunt (default: 2 * ceil(log2 n))
    #[arg(long)]
    step_cap: Option<u32>,
    /// Reuse extractions across paths instead of consuming fresh rounds
    #[arg(long, default_value_t = false)]
    memoize: bool,
    /// Print the first run's per-step trace lines
    /// (step|path_i|path_j|survivor_count|work_units)
    #[arg(long, default_value_t = false)]
    trace: bool,
    #[command(flatten)]
    params: CommonParams,
}

#[derive(Args)]
struct BoundsArgs {
    /// Which scheme's workload to print
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    #[command(flatten)]
    params: CommonParams,
}

#[derive(Args)]
struct SweepArgs {
    /// Which table to generate: fig6 (workload vs L), fig7 (workload vs n),
    /// fig8 (enhanced workload vs l)
    #[arg(long)]
    figure: String,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    params: CommonParams,
}

#[derive(Args)]
struct EstimateArgs {
    /// Estimator name: basic_steps, enhanced_steps, sigma_recovery_rate,
    /// intersection_size, guess_acceptance
    #[arg(long)]
    claim: String,
    /// Sets intersected by intersection_size, >= 1
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    t: u32,
    /// Scheme simulated by guess_acceptance
    #[arg(long, value_enum, default_value_t = SchemeArg::Basic)]
    scheme: SchemeArg,
    /// Monte Carlo trials, >= 100
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(100..))]
    trials: u64,
    #[command(flatten)]
    params: CommonParams,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate(args) => simulate(args),
        Command::Attack(args) => attack(args),
        Command::Bounds(args) => bounds(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Estimate(args) => run_estimate(args),
    }
}

/// Two distinct features of a universe with at least two, so random boolean
/// secrets never degenerate into constants.
fn distinct_feature_pair(n: u32, rng: &mut SimRng) -> (u32, u32) {
    let a = rng.gen_range(1..=n);
    let offset = rng.gen_range(1..n);
    (a, (a - 1 + offset) % n + 1)
}

/// Build the protocol configuration for one session seed.
fn session_config(
    scheme: SchemeArg,
    params: &CommonParams,
    named: Option<&[NamedFeature]>,
    rng: &mut SimRng,
) -> Result<ProtocolConfig> {
    let universe = FeatureUniverse::new(params.n)?;
    Ok(match scheme {
        SchemeArg::Basic => {
            let secret = rng.gen_range(1..=params.n);
            ProtocolConfig::Basic(BasicConfig::new(universe, Question::single(secret), params.k, 1)?)
        }
        SchemeArg::Multi => {
            let (a, b) = distinct_feature_pair(params.n, rng);
            let q = Question::boolean(BoolExpr::or(
                BoolExpr::literal(a, false),
                BoolExpr::literal(b, rng.gen()),
            ))?;
            ProtocolConfig::Basic(BasicConfig::new(universe, q, params.k, 1)?)
        }
        SchemeArg::Enhanced => {
            let secret = rng.gen_range(1..=params.n);
            let sigma = PermutationString::random(params.group_size, params.assigned, rng)?;
            ProtocolConfig::Enhanced(EnhancedConfig::new(
                universe,
                Question::single(secret),
                sigma,
                params.k,
            )?)
        }
        SchemeArg::Practical => {
            let dictionary = match named {
                Some(table) => named_dictionary(table.len() as u32, params.dictionary_words, rng)?,
                None => build_dictionary(params.dictionary_words, params.x, rng)?,
            };
            let secret = rng.gen_range(1..=dictionary.universe().size());
            let lcg = LcgParams::new(rng.gen(), rng.gen(), rng.gen(), params.group_size as u64);
            ProtocolConfig::Practical(PracticalConfig::new(
                Question::single(secret),
                lcg,
                params.j,
                dictionary,
                params.k,
            )?)
        }
    })
}

/// Demo dictionary whose word features live in the named-feature universe.
fn named_dictionary(
    feature_count: u32,
    word_count: u64,
    rng: &mut SimRng,
) -> Result<Dictionary> {
    let universe = FeatureUniverse::new(feature_count)?;
    let words = (0..word_count)
        .map(|id| Word { id: id as u32, features: sample_picture(universe, rng) })
        .collect();
    Ok(Dictionary::from_words(universe, words)?)
}

fn load_named_features(args: &SimulateArgs) -> Result<Vec<NamedFeature>> {
    match &args.features_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Ok(parse_feature_table(&text)?)
        }
        None => Ok(parse_feature_table(MAGIC_SQUARE_CSV)?),
    }
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let seed = args.params.effective_seed()?;
    let named = if args.named_features || args.features_file.is_some() {
        if args.scheme != SchemeArg::Practical {
            bail!("--named-features applies to the practical scheme only");
        }
        Some(load_named_features(&args)?)
    } else {
        None
    };
    let strategy = match args.user {
        UserArg::Honest => UserStrategy::Honest,
        UserArg::Random => UserStrategy::Random,
    };
    let mut accepted = 0u64;
    let mut transcripts = String::new();
    for trial in 0..args.trials {
        let mut rng = trial_stream(seed, trial);
        let cfg = session_config(args.scheme, &args.params, named.as_deref(), &mut rng)?;
        let (verdict, transcript) = run_session(&cfg, &strategy, args.tolerated_errors, &mut rng)?;
        if verdict.accepted() {
            accepted += 1;
        }
        if args.out.is_some() || (args.trials == 1 && named.is_none()) {
            writeln!(transcripts, "session|{trial}|seed={}", trial_seed(seed, trial)).unwrap();
            transcripts.push_str(&transcript.to_pipe_format());
        }
        if let (Some(table), 0) = (&named, trial) {
            annotate_practical_session(&cfg, table, &transcript)?;
        }
    }
    let rate = accepted as f64 / args.trials as f64;
    println!(
        "scheme={} user={} trials={} seed={seed} tolerated_errors={}",
        scheme_name(args.scheme),
        if args.user == UserArg::Honest { "honest" } else { "random" },
        args.trials,
        args.tolerated_errors
    );
    println!("accept_rate={rate}");
    if let Some(path) = &args.out {
        std::fs::write(path, &transcripts).with_context(|| format!("writing {}", path.display()))?;
        println!("transcripts written to {}", path.display());
    } else if args.trials == 1 && named.is_none() {
        print!("{transcripts}");
    }
    Ok(())
}

/// Cosmetic demo output: show which box the recurrence selects each round and
/// name a few of its features.
fn annotate_practical_session(
    cfg: &ProtocolConfig,
    table: &[NamedFeature],
    transcript: &hipsim_core::protocols::Transcript,
) -> Result<()> {
    let ProtocolConfig::Practical(cfg) = cfg else {
        return Ok(());
    };
    let secret = match &cfg.question {
        Question::Single(f) => *f,
        Question::Boolean(_) => 0,
    };
    let name_of = |id: u32| {
        table
            .iter()
            .find(|r| r.id == id)
            .map(|r| r.name.as_str())
            .unwrap_or("?")
    };
    println!("secret question: does the box show {:?}?", name_of(secret));
    let mut x = cfg.lcg.seed_value();
    for round in transcript.rounds() {
        x = cfg.lcg.next(x);
        let chosen = &round.challenge.pictures[x as usize];
        let mut names: Vec<&str> = chosen.iter().take(6).map(name_of).collect();
        if chosen.len() > 6 {
            names.push("...");
        }
        println!(
            "round {}: box {} answered {}; box shows: {}",
            round.challenge.iteration_index,
            x,
            if round.answers[0] { 1 } else { 0 },
            names.join(", ")
        );
    }
    Ok(())
}

fn scheme_name(scheme: SchemeArg) -> &'static str {
    match scheme {
        SchemeArg::Basic => "basic",
        SchemeArg::Enhanced => "enhanced",
        SchemeArg::Practical => "practical",
        SchemeArg::Multi => "multi",
    }
}

fn attack(args: AttackArgs) -> Result<()> {
    let seed = args.params.effective_seed()?;
    match args.scheme {
        SchemeArg::Basic => attack_basic(&args, seed),
        SchemeArg::Enhanced => attack_enhanced(&args, seed),
        SchemeArg::Multi => attack_multi(&args, seed),
        SchemeArg::Practical => bail!(
            "the practical scheme is attacked as enhanced with --l 1 over the word universe"
        ),
    }
}

fn attack_basic(args: &AttackArgs, seed: u64) -> Result<()> {
    let params = &args.params;
    let universe = FeatureUniverse::new(params.n)?;
    let model = ExtractionModel::new(params.p)?;
    let budget = 4 * (params.n as f64).log2().ceil() as u32 + 100;
    let mut steps = 0u64;
    let mut work = 0u64;
    let mut successes = 0u64;
    for trial in 0..args.trials {
        let mut rng = trial_stream(seed, trial);
        let secret = rng.gen_range(1..=params.n);
        let cfg = BasicConfig::new(universe, Question::single(secret), 1, 1)?;
        let rounds: Result<Vec<(FeatureSet, bool)>, _> =
            (0..budget).map(|_| basic_round(&cfg, &mut rng)).collect();
        let mut attack_rng = rng.clone();
        let outcome = recover_basic_secret(universe, rounds?, model, &mut attack_rng);
        steps += outcome.steps as u64;
        work += outcome.work_units;
        if outcome.recovered() == Some(secret) {
            successes += 1;
        }
        if args.trace && trial == 0 {
            for line in &outcome.trace {
                println!("{}", line.to_line());
            }
        }
    }
    println!("attack=basic n={} p={} trials={} seed={seed}", params.n, params.p, args.trials);
    println!(
        "success_rate={} closed_form_success={}",
        successes as f64 / args.trials as f64,
        success_probability(params.p, params.n as u64)
    );
    println!(
        "mean_steps={} idealized_steps={} mean_work={} idealized_work={}",
        steps as f64 / args.trials as f64,
        (params.n as f64).log2(),
        work as f64 / args.trials as f64,
        workload_basic(params.n as f64)
    );
    Ok(())
}

fn attack_enhanced(args: &AttackArgs, seed: u64) -> Result<()> {
    let params = &args.params;
    if params.assigned > params.group_size {
        bail!("--l must not exceed --L");
    }
    let universe = FeatureUniverse::new(params.n)?;
    let model = ExtractionModel::new(params.p)?;
    let options = EnhancedAttackOptions { step_cap: args.step_cap, ..Default::default() };
    let mut steps = 0u64;
    let mut work = 0u64;
    let mut paths = 0u64;
    let mut successes = 0u64;
    for trial in 0..args.trials {
        let mut rng = trial_stream(seed, trial);
        let secret = rng.gen_range(1..=params.n);
        let sigma = PermutationString::random(params.group_size, params.assigned, &mut rng)?;
        let cfg = EnhancedConfig::new(universe, Question::single(secret), sigma, 1)?;
        let mut gen_rng = hipsim_core::rng::stream_from_seed(rng.gen());
        let mut attack_rng = hipsim_core::rng::stream_from_seed(rng.gen());
        let outcome: EnhancedAttack = if args.memoize {
            let budget = 2 * params.group_size * params.group_size
                * hipsim_core::adversary::default_step_cap(universe)
                + 100;
            let rounds: Result<Vec<TranscriptRound>, _> = (0..budget)
                .map(|i| honest_enhanced_round(&cfg, i + 1, &mut gen_rng))
                .collect();
            recover_enhanced_secret_replay(universe, &rounds?, model, &mut attack_rng, options)
        } else {
            let mut index = 0u32;
            let source = move || {
                index += 1;
                honest_enhanced_round(&cfg, index, &mut gen_rng).ok()
            };
            recover_enhanced_secret(
                universe,
                params.group_size,
                source,
                model,
                &mut attack_rng,
                options,
            )
        };
        steps += outcome.total_steps as u64;
        work += outcome.work_units;
        paths += outcome.paths_tried as u64;
        if outcome.recovered() == Some(secret) {
            successes += 1;
        }
        if args.trace && trial == 0 {
            for line in &outcome.trace {
                println!("{}", line.to_line());
            }
        }
    }
    let l2 = (params.group_size * params.group_size) as f64;
    println!(
        "attack=enhanced n={} L={} l={} p={} memoize={} trials={} seed={seed}",
        params.n, params.group_size, params.assigned, params.p, args.memoize, args.trials
    );
    println!(
        "success_rate={} closed_form_success={}",
        successes as f64 / args.trials as f64,
        success_probability(params.p, params.n as u64)
    );
    println!(
        "mean_steps={} idealized_steps={} mean_paths={} idealized_paths={}",
        steps as f64 / args.trials as f64,
        (l2 + 1.0) / (params.assigned as f64 + 1.0) * (params.n as f64).log2(),
        paths as f64 / args.trials as f64,
        (l2 + 1.0) / (params.assigned as f64 + 1.0)
    );
    println!(
        "mean_work={} idealized_work={}",
        work as f64 / args.trials as f64,
        workload_enhanced(params.n as f64, params.group_size, params.assigned)
    );
    Ok(())
}

fn honest_enhanced_round(
    cfg: &EnhancedConfig,
    index: u32,
    rng: &mut SimRng,
) -> Result<TranscriptRound, hipsim_core::Error> {
    let challenge = hipsim_core::protocols::enhanced_challenge(cfg, index, rng)?;
    let answers = hipsim_core::protocols::enhanced_answer(cfg, &challenge, rng)?;
    Ok(TranscriptRound { challenge, answers })
}

fn attack_multi(args: &AttackArgs, seed: u64) -> Result<()> {
    let params = &args.params;
    let universe = FeatureUniverse::new(params.n)?;
    let mut consistent_total = 0u64;
    let mut secret_included = 0u64;
    for trial in 0..args.trials {
        let mut rng = trial_stream(seed, trial);
        let (a, b) = distinct_feature_pair(params.n, &mut rng);
        let secret = Question::boolean(BoolExpr::and(
            BoolExpr::literal(a, false),
            BoolExpr::literal(b, rng.gen()),
        ))?;
        let cfg = BasicConfig::new(universe, secret.clone(), 1, 1)?;
        let rounds: Result<Vec<(FeatureSet, bool)>, _> =
            (0..params.k).map(|_| basic_round(&cfg, &mut rng)).collect();
        let (v, answers): (Vec<FeatureSet>, Vec<bool>) = rounds?.into_iter().unzip();
        let consistent = boolean_hypothesis_search(universe, &v, &answers, 3)?;
        consistent_total += consistent.len() as u64;
        if consistent.contains(&secret.canonical()) {
            secret_included += 1;
        }
    }
    println!(
        "attack=multi n={} k={} trials={} seed={seed}",
        params.n, params.k, args.trials
    );
    println!(
        "mean_consistent_hypotheses={} secret_included_rate={}",
        consistent_total as f64 / args.trials as f64,
        secret_included as f64 / args.trials as f64
    );
    Ok(())
}

fn bounds(args: BoundsArgs) -> Result<()> {
    let params = &args.params;
    match args.scheme {
        SchemeArg::Basic | SchemeArg::Multi => {
            let w = workload_basic(params.n as f64);
            println!("scheme=basic n={}", params.n);
            println!("workload={w} log2_workload={}", w.log2());
        }
        SchemeArg::Enhanced => {
            if params.assigned > params.group_size {
                bail!("--l must not exceed --L");
            }
            let w = workload_enhanced(params.n as f64, params.group_size, params.assigned);
            let b = recovery_probability_bounds(params.k, params.group_size, params.assigned)?;
            println!(
                "scheme=enhanced n={} L={} l={} k={}",
                params.n, params.group_size, params.assigned, params.k
            );
            println!("workload={w} log2_workload={}", w.log2());
            println!("sigma_recovery_lower={} sigma_recovery_upper={}", b.lower, b.upper);
        }
        SchemeArg::Practical => {
            let w = workload_practical(params.dictionary_words, params.x, params.group_size);
            println!(
                "scheme=practical N={} x={} L={}",
                params.dictionary_words, params.x, params.group_size
            );
            println!("workload={w} log2_workload={}", w.log2());
        }
    }
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    let figure = SweepFigure::parse(&args.figure)
        .ok_or_else(|| anyhow!("unknown figure {:?}; use fig6, fig7 or fig8", args.figure))?;
    let grid = SweepGrid {
        word_count: args.params.dictionary_words,
        x: args.params.x,
        group_size: args.params.group_size,
        ..Default::default()
    };
    let csv = sweep(figure, &grid);
    match &args.out {
        Some(path) => {
            std::fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
            println!("{} written to {}", figure.token(), path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn run_estimate(args: EstimateArgs) -> Result<()> {
    let seed = args.params.effective_seed()?;
    let params = EstimatorParams {
        universe_n: args.params.n,
        group_size: args.params.group_size,
        assigned: args.params.assigned,
        rounds: args.params.k,
        set_count: args.t,
        extraction_p: args.params.p,
        scheme: match args.scheme {
            SchemeArg::Basic | SchemeArg::Multi => EstimatorScheme::Basic,
            SchemeArg::Enhanced => EstimatorScheme::Enhanced,
            SchemeArg::Practical => EstimatorScheme::Practical,
        },
    };
    let report = estimate(&args.claim, &params, args.trials, seed)?;
    println!("claim={}", args.claim);
    println!("{report}");
    Ok(())
}
