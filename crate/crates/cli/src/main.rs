use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pitchcut::io::{read_cover, read_instance, read_json, read_knapsack, Instance};
use pitchcut::lp::{export_lp, ExportOptions};
use pitchcut::minknap::{
    check_valid_by_signature, compute_type, drag, separate, separate_p2, signature, strengthen, EnumOptions, SeparateOptions,
    SeparationResult,
};
use pitchcut::oracle::{cover_valid_bruteforce, knap_family_min_slack, knap_valid_bruteforce, knap_valid_by_points, DEFAULT_GUARD};
use pitchcut::setcover::{
    build_level, enumerate_strongest, predict_size, undominated, BuildOptions, PitchCertifier, DEFAULT_ENUMERATION_GUARD,
    DEFAULT_GUARD_NONZEROS,
};
use pitchcut::{pitch, CoverInstance, FractionalPoint, Inequality, KnapsackInstance, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const EXIT_ERROR: u8 = 1;
const EXIT_DISAGREE: u8 = 2;
const EXIT_FAILED: u8 = 3;
const EXIT_VIOLATED: u8 = 10;

#[derive(Parser)]
#[command(name = "pitchcut", version, about = "Pitch-level formulations for set covering and near-separation for minimum knapsack")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the level-pi formulation of a set-covering instance and write it as an LP file
    Build(BuildArgs),
    /// Check that the level-pi formulation satisfies the valid inequalities of pitch at most pi
    Certify(CertifyArgs),
    /// Separate a fractional point from the bounded-coefficient inequalities of a minimum-knapsack instance
    Separate(SeparateArgs),
    /// Brute-force checks for small instances
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args)]
struct BuildArgs {
    /// Set-covering instance (JSON)
    instance: PathBuf,
    #[arg(long)]
    pi: usize,
    /// Refuse to build when the predicted nonzero count exceeds this
    #[arg(long, default_value_t = DEFAULT_GUARD_NONZEROS)]
    guard_nonzeros: u128,
    /// Omit homogenized rows that are trivially satisfied
    #[arg(long)]
    drop_vacuous: bool,
    /// Inequality file whose coefficients become the objective
    #[arg(long)]
    objective: Option<PathBuf>,
    /// Write the LP here; without it the LP goes to stdout and the report to stderr
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Set-covering instance (JSON)
    instance: PathBuf,
    #[arg(long)]
    pi: usize,
    /// Certify this inequality instead of the enumerated ones
    #[arg(long)]
    ineq: Option<PathBuf>,
    /// Also certify dominated inequalities
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = DEFAULT_GUARD_NONZEROS)]
    guard_nonzeros: u128,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_GUARD)]
    enumeration_guard: u128,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Types,
    P2,
    Both,
}

#[derive(Args)]
struct SeparateArgs {
    /// Minimum-knapsack instance (JSON)
    instance: PathBuf,
    /// Fractional point (JSON array of rationals)
    point: PathBuf,
    /// Coefficient bound
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, default_value = "1/100")]
    epsilon: Rational,
    /// Rounding grid; derived from p, n and epsilon when absent
    #[arg(long)]
    grid: Option<u64>,
    #[arg(long, value_enum, default_value_t = Method::Types)]
    method: Method,
    /// Worker threads for the type search
    #[arg(long)]
    jobs: Option<usize>,
    /// Cap heavy sets at q^2 - 1 instead of max{q(q-2), q-1}
    #[arg(long)]
    literal_cap: bool,
    /// Write the JSON result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Decide validity of an inequality by enumeration
    Validity {
        instance: PathBuf,
        ineq: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: usize,
    },
    /// List the strongest inequalities with coefficients in 0..=p of a set-covering instance
    Strongest {
        instance: PathBuf,
        #[arg(long, default_value_t = 2)]
        p: u32,
        /// Keep only undominated inequalities
        #[arg(long)]
        undominated: bool,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_GUARD)]
        guard: u128,
    },
    /// Show drag sets, type and signature of a knapsack inequality
    Drag {
        instance: PathBuf,
        ineq: PathBuf,
        /// Also strengthen with this coefficient bound
        #[arg(long)]
        strengthen: Option<i64>,
    },
    /// Most violated bounded-coefficient inequality, by exhaustive search
    Omega {
        instance: PathBuf,
        point: PathBuf,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, default_value_t = 12)]
        guard: usize,
    },
    /// Compare separation against the exhaustive search on random instances
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, default_value = "1/100")]
        epsilon: Rational,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Build(args) => run_build(args),
        Command::Certify(args) => run_certify(args),
        Command::Separate(args) => run_separate(args),
        Command::Oracle(cmd) => run_oracle(cmd),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn check_epsilon(epsilon: &Rational) -> Result<()> {
    if !epsilon.is_positive() || *epsilon >= Rational::one() {
        bail!("--epsilon must lie strictly between 0 and 1");
    }
    Ok(())
}

fn read_ineq(path: &Path, n: usize) -> Result<Inequality> {
    let ineq: Inequality = read_json(path)?;
    if ineq.n() != n {
        bail!("{} has {} coefficients, instance has {n} variables", path.display(), ineq.n());
    }
    Ok(ineq)
}

fn read_point(path: &Path, n: usize) -> Result<FractionalPoint> {
    let y: FractionalPoint = read_json(path)?;
    if y.n() != n {
        bail!("{} has {} entries, instance has {n} variables", path.display(), y.n());
    }
    Ok(y)
}

fn cover(path: &Path) -> Result<CoverInstance> {
    read_cover(path).with_context(|| path.display().to_string())
}

fn knapsack(path: &Path) -> Result<KnapsackInstance> {
    read_knapsack(path).with_context(|| path.display().to_string())
}

fn run_build(args: BuildArgs) -> Result<u8> {
    if args.pi == 0 {
        bail!("--pi must be at least 1");
    }
    if args.guard_nonzeros == 0 {
        bail!("--guard-nonzeros must be positive");
    }
    let a = cover(&args.instance)?;
    let options = BuildOptions { drop_vacuous_rows: args.drop_vacuous, guard_nonzeros: args.guard_nonzeros };
    let form = build_level(&a, args.pi, &options)?;
    let objective = match &args.objective {
        Some(path) => {
            let c = read_ineq(path, a.n())?;
            form.original_vars().zip(c.coeffs().iter().cloned()).filter(|(_, v)| !v.is_zero()).collect()
        }
        None => Vec::new(),
    };
    let lp = export_lp(form.system(), &objective, ExportOptions::default());

    let mut report = vec![format!("level {}: {}", args.pi, form.size_report())];
    if args.pi >= 2 {
        let extended = |level| predict_size(&a, level, &options).variables - a.n();
        let (prev, next) = (extended(args.pi - 1), form.extended_count());
        let bound = a.m() * a.n() * (prev + a.n());
        let verdict = if next <= bound { "ok" } else { "exceeded" };
        report.push(format!("extended variables {next} <= m n (N' + n) = {bound} with N' = {prev}: {verdict}"));
    }
    match &args.out {
        Some(path) => {
            fs::write(path, lp).with_context(|| format!("writing {}", path.display()))?;
            report.iter().for_each(|line| println!("{line}"));
        }
        None => {
            print!("{lp}");
            report.iter().for_each(|line| eprintln!("{line}"));
        }
    }
    Ok(0)
}

fn run_certify(args: CertifyArgs) -> Result<u8> {
    if args.pi == 0 {
        bail!("--pi must be at least 1");
    }
    let a = cover(&args.instance)?;
    let options = BuildOptions { drop_vacuous_rows: false, guard_nonzeros: args.guard_nonzeros };
    let mut cert = PitchCertifier::new(&a, args.pi, &options)?;
    println!("level {}: {}", args.pi, cert.formulation().size_report());

    if let Some(path) = &args.ineq {
        let ineq = read_ineq(path, a.n())?;
        let slack = cert.slack(&ineq)?;
        let pitch = pitch(&ineq).map(|p| p.to_string()).unwrap_or_else(|_| "undefined".into());
        println!("{ineq}: pitch {pitch}, slack {slack}");
        return Ok(if slack.is_negative() { EXIT_FAILED } else { 0 });
    }

    let strongest: Vec<Inequality> = enumerate_strongest(&a, args.pi as u32, args.enumeration_guard)?
        .into_iter()
        .filter(|s| s.pitch.is_some_and(|p| p <= args.pi))
        .map(|s| s.ineq)
        .collect();
    let list = if args.all { strongest } else { undominated(&strongest) };
    let mut min_slack: Option<Rational> = None;
    let mut failures = 0;
    for ineq in &list {
        let slack = cert.slack(ineq)?;
        if slack.is_negative() {
            println!("violated: {ineq}, slack {slack}");
            failures += 1;
        }
        if min_slack.as_ref().is_none_or(|m| slack < *m) {
            min_slack = Some(slack);
        }
    }
    let min = min_slack.map(|s| s.to_string()).unwrap_or_else(|| "none".into());
    println!("{} inequalities of pitch <= {}, {failures} violated, min slack {min}", list.len(), args.pi);
    Ok(if failures > 0 { EXIT_FAILED } else { 0 })
}

fn separation_options(args: &SeparateArgs) -> SeparateOptions {
    SeparateOptions {
        grid: args.grid,
        enumeration: EnumOptions { literal_cap: args.literal_cap, ..EnumOptions::default() },
        ..SeparateOptions::default()
    }
}

/// Two verdicts agree when both cut, both certify, or the lone cut is no
/// deeper than `-epsilon`.
fn agree(a: &SeparationResult, b: &SeparationResult, epsilon: &Rational) -> bool {
    match (a.cut(), b.cut()) {
        (Some(_), Some(_)) | (None, None) => true,
        (Some((_, s)), None) | (None, Some((_, s))) => *s >= -epsilon.clone(),
    }
}

fn run_separate(args: SeparateArgs) -> Result<u8> {
    check_epsilon(&args.epsilon)?;
    if args.p == 0 || args.grid == Some(0) || args.jobs == Some(0) {
        bail!("--p, --grid and --jobs must be positive");
    }
    let k = knapsack(&args.instance)?;
    let y = read_point(&args.point, k.n())?;
    if args.method != Method::Types && args.p != 2 {
        bail!("the p2 method requires --p 2");
    }
    // zero threads lets rayon pick the default
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs.unwrap_or(0)).build()?;
    let options = separation_options(&args);
    let run_types = || pool.install(|| separate(&k, &y, args.p, &args.epsilon, &options));

    let (value, violated, agreed) = match args.method {
        Method::Types => {
            let r = run_types()?;
            (serde_json::to_value(&r)?, r.is_violated(), true)
        }
        Method::P2 => {
            let r = separate_p2(&k, &y)?;
            (serde_json::to_value(&r)?, r.is_violated(), true)
        }
        Method::Both => {
            let t = run_types()?;
            let e = separate_p2(&k, &y)?;
            let agreed = agree(&t, &e, &args.epsilon);
            let value = json!({ "types": t, "p2": e, "agree": agreed });
            (value, t.is_violated() || e.is_violated(), agreed)
        }
    };
    let text = serde_json::to_string(&value)?;
    match &args.out {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    if !agreed {
        eprintln!("methods disagree");
        return Ok(EXIT_DISAGREE);
    }
    Ok(if violated { EXIT_VIOLATED } else { 0 })
}

fn run_oracle(cmd: OracleCommand) -> Result<u8> {
    match cmd {
        OracleCommand::Validity { instance, ineq, guard } => match read_instance(&instance)? {
            Instance::SetCover(a) => {
                let i = read_ineq(&ineq, a.n())?;
                let valid = cover_valid_bruteforce(&a, &i, guard)?;
                println!("{}", json!({ "valid": valid }));
                Ok(0)
            }
            Instance::MinKnap(k) => {
                let i = read_ineq(&ineq, k.n())?;
                let covers = knap_valid_bruteforce(&k, &i, guard)?;
                let points = knap_valid_by_points(&k, &i, guard)?;
                let by_signature = check_valid_by_signature(&k, &i).ok();
                println!("{}", json!({ "valid": points, "covers": covers, "signature": by_signature }));
                let consistent = covers == points && by_signature.is_none_or(|s| s == points);
                Ok(if consistent { 0 } else { EXIT_DISAGREE })
            }
        },
        OracleCommand::Strongest { instance, p, undominated: only_undominated, guard } => {
            let a = cover(&instance)?;
            let all = enumerate_strongest(&a, p, guard)?;
            let keep = if only_undominated {
                let ineqs: Vec<Inequality> = all.iter().map(|s| s.ineq.clone()).collect();
                let kept = undominated(&ineqs);
                all.into_iter().filter(|s| kept.contains(&s.ineq)).collect()
            } else {
                all
            };
            for s in keep {
                let pitch = s.pitch.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
                println!("{}\tpitch {pitch}", s.ineq);
            }
            Ok(0)
        }
        OracleCommand::Drag { instance, ineq, strengthen: big_p } => {
            let k = knapsack(&instance)?;
            let i = read_ineq(&ineq, k.n())?;
            let (coeffs, _) = i.int_coeffs().context("drag sets need integer coefficients")?;
            let top = coeffs.iter().copied().max().unwrap_or(0);
            for class in 1..=top {
                let items: Vec<usize> = drag(&k, &i, class)?.into_iter().map(|j| j + 1).collect();
                println!("drag {class}: {items:?}");
            }
            let tau = compute_type(&k, &i)?;
            println!("signature: {}", signature(&k, &tau));
            if let Some(big_p) = big_p {
                match strengthen(&k, &i, big_p)? {
                    Some(s) => println!("strengthened: {s}"),
                    None => println!("strengthened: unchanged"),
                }
            }
            Ok(0)
        }
        OracleCommand::Omega { instance, point, p, guard } => {
            let k = knapsack(&instance)?;
            let y = read_point(&point, k.n())?;
            let best = knap_family_min_slack(&k, &y, p, guard)?;
            let value = match best {
                Some((ineq, slack)) => json!({ "ineq": ineq, "slack": slack }),
                None => json!(null),
            };
            println!("{value}");
            Ok(0)
        }
        OracleCommand::Selfcheck { seed, count, max_n, p, epsilon } => selfcheck(seed, count, max_n, p, &epsilon),
    }
}

fn selfcheck(seed: u64, count: usize, max_n: usize, p: usize, epsilon: &Rational) -> Result<u8> {
    check_epsilon(epsilon)?;
    if max_n < 2 || p == 0 {
        bail!("--max-n must be at least 2 and --p positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for idx in 0..count {
        let n = rng.gen_range(2..=max_n);
        let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=30)).collect();
        let total: u64 = weights.iter().sum();
        let heaviest = weights.iter().copied().max().unwrap_or(1);
        let k = KnapsackInstance::new(weights, rng.gen_range(heaviest..=total))?;
        let entries = (0..n).map(|_| Rational::new(rng.gen_range(0..=12), 12)).collect();
        let y = FractionalPoint::new(entries)?;

        let result = separate(&k, &y, p, epsilon, &SeparateOptions::default())?;
        let best = knap_family_min_slack(&k, &y, p, DEFAULT_GUARD)?.map(|(_, s)| s);
        let ok = match result.cut() {
            Some((ineq, slack)) => slack.is_negative() && knap_valid_by_points(&k, ineq, DEFAULT_GUARD)?,
            None => best.as_ref().is_none_or(|s| *s >= -epsilon.clone()),
        };
        let verdict = match result.cut() {
            Some((ineq, slack)) => format!("cut {ineq} (slack {slack})"),
            None => "certified".into(),
        };
        let best = best.map(|s| s.to_string()).unwrap_or_else(|| "none".into());
        println!("{idx:3} {} w={:?} w0={}: {verdict}, exhaustive min {best}", if ok { "ok  " } else { "FAIL" }, k.weights(), k.rhs());
        failures += usize::from(!ok);
    }
    println!("{} of {count} consistent", count - failures);
    Ok(if failures > 0 { EXIT_FAILED } else { 0 })
}
