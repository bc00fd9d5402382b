use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypersplit::geometry::enumerate_halfspaces;
use hypersplit::io::{
    emit_instance, emit_solution, emit_svg, generate_instance, generate_pcms, generate_rmc,
    parse_instance, parse_solution, AbstractParams, GeneratorParams, InstanceFile, InstanceKind,
    SolutionFile, TargetRule,
};
use hypersplit::oracle::{realizable_subsets, OracleBudget};
use hypersplit::workflow::{
    exact_instance, selftest, solve_instance, verify_solution, VerifyStatus,
};
use hypersplit::{Error, GreedyMode, GreedyOptions};

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_BUDGET: u8 = 5;

/// Separate groups of points with few hyperplanes.
#[derive(Parser, Debug)]
#[command(name = "hypersplit", version)]
struct Cli {
    /// Raise log verbosity (repeatable); HYPERSPLIT_LOG takes precedence.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance greedily and write a solution file.
    Solve(SolveArgs),
    /// Find an optimal solution size by exhaustive search.
    Exact(ExactArgs),
    /// Check a solution file against its instance.
    Verify(VerifyArgs),
    /// Count (and optionally list) the halfspace classes of a point set.
    Enumerate(EnumerateArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Render a planar instance, optionally with a solution, as SVG.
    Plot(PlotArgs),
    /// Run the built-in property checks.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// Instance kind; detected from the file when omitted.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Geometric,
    Pcms,
    Ptd,
    Rmc,
}

impl From<KindArg> for InstanceKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Geometric => InstanceKind::Geometric,
            KindArg::Pcms => InstanceKind::Pcms,
            KindArg::Ptd => InstanceKind::Ptd,
            KindArg::Rmc => InstanceKind::Rmc,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Naive,
    Lazy,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Solution file; printed to stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "lazy")]
    mode: ModeArg,
    /// Worker threads for the candidate scan.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Also render the solution (planar instances only).
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = OracleBudget::default().max_edges)]
    budget_edges: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Print every class by its canonical subset.
    #[arg(long)]
    list: bool,
    /// Cross-check against the brute-force separability oracle.
    #[arg(long)]
    check: bool,
    #[arg(long, default_value_t = OracleBudget::default().max_subset_points)]
    budget_points: usize,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "geometric")]
    kind: KindArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of points (or universe size for abstract kinds).
    #[arg(long, default_value_t = 8)]
    points: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Number of groups (or ground sets).
    #[arg(long, default_value_t = 2)]
    groups: usize,
    /// Number of edges (abstract kinds only).
    #[arg(long, default_value_t = 10)]
    edges: usize,
    /// Coordinates are drawn from 0..=bound.
    #[arg(long, default_value_t = 100)]
    bound: u64,
    #[arg(long, value_enum, default_value = "half")]
    rule: RuleArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    Half,
    Singleton,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long)]
    input: PathBuf,
    /// Solution whose hyperplanes are drawn.
    #[arg(long)]
    solution: Option<PathBuf>,
    /// SVG output; printed to stdout when omitted.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    rounds: usize,
}

/// Failure carrying its exit status.
struct Fail {
    code: u8,
    message: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Fail {
            code,
            message: e.to_string(),
        }
    }
}

fn input_fail(message: String) -> Fail {
    Fail {
        code: EXIT_INPUT,
        message,
    }
}

type Outcome = Result<u8, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default_level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(
        env_logger::Env::new().filter_or("HYPERSPLIT_LOG", default_level),
    )
    .init();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Exact(a) => exact(a),
        Command::Verify(a) => verify(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Gen(a) => generate(a),
        Command::Plot(a) => plot(a),
        Command::Selftest(a) => run_selftest(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(fail) => {
            eprintln!("error: {}", fail.message);
            ExitCode::from(fail.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| input_fail(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| input_fail(format!("{}: {e}", path.display())))
}

/// Rejects output paths whose directory does not exist, before any work.
fn check_output(path: Option<&Path>) -> Result<(), Fail> {
    let Some(path) = path else {
        return Ok(());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    if dir.is_dir() {
        Ok(())
    } else {
        Err(input_fail(format!(
            "{}: directory {} does not exist",
            path.display(),
            dir.display()
        )))
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(args: &InputArgs) -> Result<InstanceFile, Fail> {
    let text = read(&args.input)?;
    parse_instance(&text, args.kind.map(Into::into))
        .map_err(|e| input_fail(format!("{}: {e}", args.input.display())))
}

fn load_solution(path: &Path) -> Result<SolutionFile, Fail> {
    let text = read(path)?;
    parse_solution(&text).map_err(|e| input_fail(format!("{}: {e}", path.display())))
}

fn solve(args: SolveArgs) -> Outcome {
    check_output(args.output.as_deref())?;
    check_output(args.svg.as_deref())?;
    let instance = load_instance(&args.input)?;
    if args.threads == 0 {
        return Err(input_fail("--threads must be at least 1".into()));
    }
    if args.svg.is_some() && !matches!(instance, InstanceFile::Geometric(ref c) if c.dim() == 2) {
        return Err(input_fail("--svg needs a planar geometric instance".into()));
    }
    let mode = match args.mode {
        ModeArg::Naive => GreedyMode::Naive,
        ModeArg::Lazy => GreedyMode::Lazy,
    };
    let opts = GreedyOptions {
        mode,
        threads: args.threads,
    };
    let sol = solve_instance(&instance, opts)?;
    write_or_print(args.output.as_deref(), &emit_solution(&sol))?;
    if let (Some(path), InstanceFile::Geometric(cfg)) = (&args.svg, &instance) {
        write(path, &emit_svg(cfg, &sol.hyperplanes)?)?;
    }

    // Keep stdout clean when it carries the solution itself.
    let summary = |line: String| {
        if args.output.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    };
    let what = match instance {
        InstanceFile::Geometric(_) => "hyperplane",
        _ => "edge",
    };
    let count = sol.chosen.len();
    let plural = if count == 1 { "" } else { "s" };
    summary(format!("solution: {count} {what}{plural}"));
    summary(format!("feasible: {}", sol.feasible));
    summary(format!(
        "trace: {} steps, value {}/{}, gains [{}]",
        sol.trace.len(),
        sol.final_value,
        sol.f_max,
        sol.trace
            .iter()
            .map(|s| s.gain.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ));
    for v in &sol.violations {
        summary(format!("violation: {v}"));
    }
    Ok(if sol.feasible { 0 } else { EXIT_INFEASIBLE })
}

fn exact(args: ExactArgs) -> Outcome {
    let instance = load_instance(&args.input)?;
    let budget = OracleBudget {
        max_edges: args.budget_edges,
        ..OracleBudget::default()
    };
    let exact = exact_instance(&instance, budget).map_err(|e| match e {
        Error::BudgetExceeded { actual, limit, .. } => Fail {
            code: EXIT_BUDGET,
            message: format!(
                "refusing exhaustive search over {actual} edges (budget {limit}); raise --budget-edges"
            ),
        },
        e => e.into(),
    })?;
    println!("k = {}", exact.size);
    println!("chosen: {:?}", exact.chosen);
    println!("feasible: {}", exact.feasible);
    Ok(if exact.feasible { 0 } else { EXIT_INFEASIBLE })
}

fn verify(args: VerifyArgs) -> Outcome {
    let instance = load_instance(&args.input)?;
    let solution = load_solution(&args.solution)?;
    let report = match verify_solution(&instance, &solution) {
        Ok(r) => r,
        Err(e @ Error::OnHyperplane { .. }) => {
            println!("invalid: {e}");
            return Ok(EXIT_VERIFY);
        }
        Err(e) => return Err(e.into()),
    };
    match report.status {
        VerifyStatus::Valid => {
            println!("valid");
            Ok(0)
        }
        VerifyStatus::Infeasible => {
            println!("infeasible instance, recorded violations confirmed:");
            for v in &report.violations {
                println!("  {v}");
            }
            Ok(EXIT_INFEASIBLE)
        }
        VerifyStatus::Failed(problems) => {
            println!("invalid:");
            for p in &problems {
                println!("  {p}");
            }
            Ok(EXIT_VERIFY)
        }
    }
}

fn enumerate(args: EnumerateArgs) -> Outcome {
    let text = read(&args.input)?;
    let cfg = match parse_instance(&text, None) {
        Ok(InstanceFile::Geometric(cfg)) => cfg,
        Ok(other) => {
            return Err(input_fail(format!(
                "{}: enumerate needs a geometric instance, got {}",
                args.input.display(),
                other.kind()
            )))
        }
        Err(e) => return Err(input_fail(format!("{}: {e}", args.input.display()))),
    };
    let halfspaces = enumerate_halfspaces(&cfg)?;
    println!("{} halfspace classes", halfspaces.len());
    if args.list {
        for h in &halfspaces {
            println!("{:?}", h.subset);
        }
    }
    if args.check {
        let budget = OracleBudget {
            max_subset_points: args.budget_points,
            ..OracleBudget::default()
        };
        let oracle = realizable_subsets(&cfg, budget)?;
        let found: std::collections::BTreeSet<Vec<usize>> =
            halfspaces.iter().map(|h| h.key.clone()).collect();
        if oracle != found {
            println!(
                "mismatch: oracle finds {} classes, enumeration {}",
                oracle.len(),
                found.len()
            );
            return Ok(EXIT_VERIFY);
        }
        println!("oracle agrees");
    }
    Ok(0)
}

fn generate(args: GenArgs) -> Outcome {
    check_output(args.output.as_deref())?;
    let file = match args.kind {
        KindArg::Geometric => InstanceFile::Geometric(generate_instance(&GeneratorParams {
            seed: args.seed,
            points: args.points,
            dim: args.dim,
            groups: args.groups,
            coordinate_bound: args.bound,
            rule: match args.rule {
                RuleArg::Half => TargetRule::Half,
                RuleArg::Singleton => TargetRule::Singleton,
            },
        })?),
        KindArg::Pcms | KindArg::Rmc => {
            let shape = AbstractParams {
                seed: args.seed,
                universe: args.points,
                edges: args.edges,
                ground_sets: args.groups,
            };
            if let KindArg::Pcms = args.kind {
                InstanceFile::Pcms(generate_pcms(&shape)?)
            } else {
                InstanceFile::Rmc(generate_rmc(&shape)?)
            }
        }
        KindArg::Ptd => return Err(input_fail("gen does not produce ptd instances".into())),
    };
    write_or_print(args.output.as_deref(), &emit_instance(&file))?;
    Ok(0)
}

fn plot(args: PlotArgs) -> Outcome {
    check_output(args.svg.as_deref())?;
    let text = read(&args.input)?;
    let cfg = match parse_instance(&text, None) {
        Ok(InstanceFile::Geometric(cfg)) => cfg,
        Ok(other) => {
            return Err(input_fail(format!(
                "{}: plot needs a geometric instance, got {}",
                args.input.display(),
                other.kind()
            )))
        }
        Err(e) => return Err(input_fail(format!("{}: {e}", args.input.display()))),
    };
    let hyperplanes = match &args.solution {
        Some(p) => load_solution(p)?.hyperplanes,
        None => Vec::new(),
    };
    write_or_print(args.svg.as_deref(), &emit_svg(&cfg, &hyperplanes)?)?;
    Ok(0)
}

fn run_selftest(args: SelftestArgs) -> Outcome {
    let report = selftest(args.seed, args.rounds)?;
    for f in &report.failures {
        println!("FAIL {f}");
    }
    println!(
        "{} checks, {} failures",
        report.checks,
        report.failures.len()
    );
    Ok(if report.failures.is_empty() {
        0
    } else {
        EXIT_VERIFY
    })
}
