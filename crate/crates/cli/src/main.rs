use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use schroeter::cubic::fit_cubic_9;
use schroeter::engine::{run, ConstructionState, PointPair, RunOptions};
use schroeter::io::{
    format_csv, format_run, format_seed, parse_point_list, parse_points, parse_rational, parse_run, parse_seed,
    LoadedSeed,
};
use schroeter::plot::{render_svg, PlotOptions};
use schroeter::verify::{parse_suites, verify};
use schroeter::weierstrass::{seed_from_curve, WeierstrassCurve};
use schroeter::{Error, ErrorKind};

/// Exact ruler constructions of point pairs on plane cubics.
#[derive(Parser, Debug)]
#[command(name = "schroeter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the pair construction from a seed.
    Construct(ConstructArgs),
    /// Build a seed from three points of y^2 = x^3 + a x^2 + b x.
    SeedFromCurve(SeedFromCurveArgs),
    /// Fit the cubic through exactly nine points.
    Fit(FitArgs),
    /// Check the theorem instances on a construction.
    Verify(VerifyArgs),
    /// Render a construction as SVG.
    Plot(PlotArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Seed file; looked up in $SCHROETER_SEED_DIR when not found as given.
    #[arg(long)]
    seed: Option<PathBuf>,
    #[arg(long, default_value_t = 512)]
    max_points: usize,
    #[arg(long, default_value_t = 16)]
    max_generations: usize,
    #[arg(long, hide = true)]
    shuffle_seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Output file (standard output when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    tangents: bool,
}

#[derive(Args, Debug)]
struct SeedFromCurveArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    /// Three affine points "x,y;x,y;x,y".
    #[arg(long, allow_hyphen_values = true)]
    points: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Nine points "x,y;..." (three numbers per entry for homogeneous input).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    points: Option<String>,
    /// File holding the points inline or as a JSON array.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    run: RunArgs,
    /// A run file written by `construct` instead of a seed.
    #[arg(long, conflicts_with = "seed")]
    input: Option<PathBuf>,
    /// all, or a comma separated list of chasles, lemma4, tangents, fact7,
    /// fact9, lemma8, invariants.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[command(flatten)]
    run: RunArgs,
    /// A run file written by `construct` instead of a seed.
    #[arg(long, conflicts_with = "seed")]
    input: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    tangents: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    /// Some theorem checks failed.
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Lib(e) => match e.kind() {
                ErrorKind::Validation => 1,
                ErrorKind::Degeneracy => 2,
                ErrorKind::Invariant => 3,
            },
            Failure::Checks => 3,
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn resolve_seed(path: &Path) -> CliResult<PathBuf> {
    if path.exists() {
        return Ok(path.to_path_buf());
    }
    if let Some(dir) = std::env::var_os("SCHROETER_SEED_DIR") {
        let dir = PathBuf::from(dir);
        for candidate in [dir.join(path), dir.join(path).with_extension("json")] {
            if candidate.exists() {
                return Ok(candidate);
            }
        }
    }
    Err(Failure::Usage(format!("seed file {} not found", path.display())))
}

fn load_seed(args: &RunArgs) -> CliResult<LoadedSeed> {
    let path = args.seed.as_deref().ok_or_else(|| Failure::Usage("--seed is required".into()))?;
    Ok(parse_seed(&read(&resolve_seed(path)?)?)?)
}

fn construct_from(args: &RunArgs) -> CliResult<(ConstructionState, Option<WeierstrassCurve>)> {
    let seed = load_seed(args)?;
    let options = RunOptions {
        max_points: args.max_points,
        max_generations: args.max_generations,
        shuffle: args.shuffle_seed,
    };
    let state = run(&seed.seed, options)?;
    Ok((state, seed.weierstrass))
}

/// A run read from `--input`, or a fresh one from `--seed`.
fn obtain_run(args: &RunArgs, input: Option<&Path>) -> CliResult<(ConstructionState, Option<WeierstrassCurve>)> {
    match input {
        Some(path) => {
            let loaded = parse_run(&read(path)?)?;
            Ok((loaded.state, loaded.weierstrass))
        }
        None => construct_from(args),
    }
}

fn plot_state(state: &ConstructionState, tangents: bool) -> String {
    let pairs: Vec<PointPair> = state.pairs().map(|(p, _)| p.clone()).collect();
    let opts = PlotOptions { tangents, ..PlotOptions::default() };
    let out = render_svg(Some(state.curve()), &pairs, &opts);
    for w in &out.warnings {
        eprintln!("plot: {w}");
    }
    out.svg
}

fn cmd_construct(args: &ConstructArgs) -> CliResult<()> {
    let (state, weierstrass) = construct_from(&args.run)?;
    let text = match args.format {
        Format::Json => format_run(&state, weierstrass.as_ref()),
        Format::Csv => format_csv(&state),
    };
    write_or_print(args.out.as_deref(), &text)?;
    if let Some(svg) = &args.svg {
        write_or_print(Some(svg), &plot_state(&state, args.tangents))?;
    }
    eprintln!(
        "{} points in {} pairs, {} generations, closed={}",
        state.point_count(),
        state.pair_count(),
        state.generation(),
        state.closed()
    );
    Ok(())
}

fn cmd_seed_from_curve(args: &SeedFromCurveArgs) -> CliResult<()> {
    let w = WeierstrassCurve::new(parse_rational(&args.a)?, parse_rational(&args.b)?)?;
    let points = parse_points(&args.points)?;
    let [a, b, c]: [_; 3] = points
        .try_into()
        .map_err(|v: Vec<_>| Error::WrongPointCount { expected: 3, got: v.len() })?;
    let seed = seed_from_curve(&w, &a, &b, &c)?;
    let loaded = LoadedSeed { seed, weierstrass: Some(w) };
    write_or_print(args.out.as_deref(), &format_seed(&loaded))
}

fn cmd_fit(args: &FitArgs) -> CliResult<()> {
    let points = match (&args.points, &args.input) {
        (Some(p), None) => parse_points(p)?,
        (None, Some(path)) => parse_point_list(&read(path)?)?,
        _ => return Err(Failure::Usage("give nine points with --points or --input".into())),
    };
    let cubic = fit_cubic_9(&points)?;
    let coeffs: Vec<String> = cubic.coeffs().iter().map(ToString::to_string).collect();
    println!("{}", coeffs.join(" "));
    eprintln!("{cubic}");
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let suites = parse_suites(&args.suite)?;
    let (state, weierstrass) = obtain_run(&args.run, args.input.as_deref())?;
    state.check_invariants()?;
    let report = verify(&state, weierstrass.as_ref(), &suites);
    if let Some(out) = &args.out {
        write_or_print(Some(out), &report.to_json())?;
    }
    print!("{}", report.summary());
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_plot(args: &PlotArgs) -> CliResult<()> {
    let (state, _) = obtain_run(&args.run, args.input.as_deref())?;
    write_or_print(args.svg.as_deref(), &plot_state(&state, args.tangents))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::SeedFromCurve(a) => cmd_seed_from_curve(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Plot(a) => cmd_plot(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Checks => eprintln!("error: some theorem checks failed"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
