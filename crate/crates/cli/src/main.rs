use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flatcover::surface::{SurfaceFile, TranslationSurface};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

mod commands;

pub const SCHEMA_VERSION: u32 = 1;

const EXIT_DOMAIN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;

#[derive(Parser, Debug)]
#[command(name = "flatcover", version, about = "Exact analysis of translation surfaces and their Z-covers")]
struct Cli {
    /// Write the report to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Lift a rational surface into Q(sqrt(d)) before analysis.
    #[arg(long, global = true, value_name = "d")]
    field: Option<u32>,
    /// Seed for commands that sample directions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Surface validation and invariants.
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Relative homology, W and W0.
    #[command(subcommand)]
    Homology(HomologyCmd),
    /// Cylinder decomposition in a direction.
    Cylinders(DirArgs),
    /// Multi-twist in a periodic direction and its homology action.
    Twist {
        #[command(flatten)]
        dir: DirArgs,
        #[arg(long, value_enum, default_value_t = Sign::Right)]
        sign: Sign,
    },
    /// Affine automorphisms given by a polygon map.
    #[command(subcommand)]
    Auto(AutoCmd),
    /// Z-cover analysis.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Straight-line flow on the Z-cover.
    Simulate(SimArgs),
    /// First-return interval exchange with its cocycle.
    Iet {
        #[command(flatten)]
        input: Input,
        /// Class w as comma-separated relative coordinates.
        /// Class w in relative coordinates, "[a,b,...]" or "a,b,..."
        #[arg(short = 'w', long = "class", allow_hyphen_values = true)]
        w: String,
        #[arg(long)]
        direction: String,
        /// Report the refinement at vertex levels instead of the merged map.
        #[arg(long)]
        refined: bool,
    },
    /// Built-in surfaces.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Run the acceptance suite and print a pass/fail table.
    ReproducePaper,
}

#[derive(Subcommand, Debug)]
enum SurfaceCmd {
    Validate(Input),
    Info(Input),
}

#[derive(Subcommand, Debug)]
enum HomologyCmd {
    Basis(Input),
    Ranks(Input),
}

#[derive(Subcommand, Debug)]
enum AutoCmd {
    /// Validate a polygon map and print f_*, ψ0, ψ and ρ.
    Check {
        #[command(flatten)]
        input: Input,
        /// Derivative as "a,b,c,d" (row major).
        #[arg(long, allow_hyphen_values = true)]
        derivative: String,
        /// JSON list of {source_polygon, target_polygon, offset, vertex_shift}.
        #[arg(long, value_name = "PATH")]
        map: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CoverCmd {
    /// Certificate for the cover defined by w.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Class w in relative coordinates, "[a,b,...]" or "a,b,..."
        #[arg(short = 'w', long = "class", allow_hyphen_values = true)]
        w: String,
        /// Number of sweep directions searched for multi-twists.
        #[arg(long, default_value_t = 24)]
        sweep: usize,
        #[arg(long, default_value_t = flatcover::cylinders::DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogCmd {
    List,
    Get { name: String },
}

#[derive(Args, Debug)]
struct Input {
    /// Surface file; stdin when omitted or "-".
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DirArgs {
    #[command(flatten)]
    input: Input,
    /// Direction "x,y" in the exact number grammar, e.g. "1+sqrt(2),1".
    #[arg(long, allow_hyphen_values = true)]
    direction: String,
    /// Maximum edge crossings per traced separatrix.
    #[arg(long, default_value_t = flatcover::cylinders::DEFAULT_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct SimArgs {
    #[command(flatten)]
    input: Input,
    /// Class w in relative coordinates, "[a,b,...]" or "a,b,..."
    #[arg(short = 'w', long = "class", allow_hyphen_values = true)]
    w: String,
    /// Direction; when omitted, directions are sampled using --seed.
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<String>,
    /// Unit-speed time budget.
    #[arg(long, default_value_t = 1e4)]
    time: f64,
    /// Floating-point mode with an ε guard around marked points.
    #[arg(long)]
    float: bool,
    /// Write (t, polygon, n) rows as CSV.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Number of sampled directions when --direction is omitted.
    #[arg(long, default_value_t = 5)]
    samples: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sign {
    Left,
    Right,
}

/// An error carrying its exit code and a machine-readable kind.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for Failure {}

fn variant_name(debug: &str) -> String {
    debug.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect()
}

/// Error variants that only wrap an error from another module.
const WRAPPERS: &[&str] = &["Surface", "Num", "Homology", "Catalog", "Lattice", "Trace"];

/// Domain error: exit 2, kind taken from the innermost error variant.
pub fn domain<E: fmt::Debug + fmt::Display>(e: E) -> anyhow::Error {
    let debug = format!("{e:?}");
    let mut rest = debug.as_str();
    let mut kind = variant_name(rest);
    while WRAPPERS.contains(&kind.as_str()) {
        match rest.strip_prefix(&format!("{kind}(")) {
            Some(inner) => {
                rest = inner;
                kind = variant_name(rest);
            }
            None => break,
        }
    }
    anyhow::Error::new(Failure { code: EXIT_DOMAIN, kind, message: e.to_string() })
}

pub fn parse_error(kind: &str, message: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Failure { code: EXIT_PARSE, kind: kind.into(), message: message.into() })
}

pub fn usage_error(message: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Failure { code: EXIT_USAGE, kind: "Usage".into(), message: message.into() })
}

fn read_text(path: Option<&Path>) -> Result<String> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p).map_err(|e| usage_error(format!("cannot read {}: {e}", p.display())))?;
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
        }
    }
    Ok(text)
}

pub struct Loaded {
    pub surface: TranslationSurface,
    pub hash: String,
}

fn load_surface(input: &Input, field: Option<u32>) -> Result<Loaded> {
    let text = read_text(input.file.as_deref())?;
    let spec = SurfaceFile::parse(&text).map_err(|e| parse_error("SurfaceFormat", e.to_string()))?;
    let mut surface = spec.validate().map_err(domain)?;
    if let Some(d) = field {
        surface = surface.rebase_field(d).map_err(domain)?;
    }
    let canonical = SurfaceFile::render(surface.spec());
    let hash = hex::encode(Sha256::digest(canonical.as_bytes()));
    log::debug!("loaded surface '{}' ({} polygons)", surface.name(), surface.num_polygons());
    Ok(Loaded { surface, hash })
}

fn report(argv: &[String], loaded: Option<&Loaded>, seed: Option<u64>, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "flatcover",
        "version": env!("CARGO_PKG_VERSION"),
        "command": argv.join(" "),
        "surface_hash": loaded.map(|l| l.hash.clone()),
        "seed": seed,
        "result": result,
    })
}

enum Output {
    Json(Value),
    Text(String),
}

fn execute(cli: Cli, argv: &[String]) -> Result<(Output, u8)> {
    let field = cli.field;
    let wrap = |loaded: &Loaded, v: Value| Output::Json(report(argv, Some(loaded), None, v));
    let out = match cli.command {
        Command::Surface(SurfaceCmd::Validate(input)) => {
            let l = load_surface(&input, field)?;
            let v = json!({ "valid": true, "invariants": l.surface.invariants() });
            wrap(&l, v)
        }
        Command::Surface(SurfaceCmd::Info(input)) => {
            let l = load_surface(&input, field)?;
            let v = commands::surface_info(&l.surface)?;
            wrap(&l, v)
        }
        Command::Homology(HomologyCmd::Basis(input)) => {
            let l = load_surface(&input, field)?;
            let v = commands::homology_basis(&l.surface)?;
            wrap(&l, v)
        }
        Command::Homology(HomologyCmd::Ranks(input)) => {
            let l = load_surface(&input, field)?;
            let v = commands::homology_ranks(&l.surface)?;
            wrap(&l, v)
        }
        Command::Cylinders(a) => {
            let l = load_surface(&a.input, field)?;
            let v = commands::cylinders(&l.surface, &a.direction, a.cap)?;
            wrap(&l, v)
        }
        Command::Twist { dir, sign } => {
            let l = load_surface(&dir.input, field)?;
            let sign = match sign {
                Sign::Left => flatcover::cylinders::TwistSign::Left,
                Sign::Right => flatcover::cylinders::TwistSign::Right,
            };
            let v = commands::twist(&l.surface, &dir.direction, dir.cap, sign)?;
            wrap(&l, v)
        }
        Command::Auto(AutoCmd::Check { input, derivative, map }) => {
            let l = load_surface(&input, field)?;
            let map_text = read_text(Some(&map))?;
            let v = commands::auto_check(&l.surface, &derivative, &map_text)?;
            wrap(&l, v)
        }
        Command::Cover(CoverCmd::Analyze { input, w, sweep, cap }) => {
            let l = load_surface(&input, field)?;
            let v = commands::cover_analyze(&l.surface, &w, sweep, cap)?;
            wrap(&l, v)
        }
        Command::Simulate(a) => {
            let l = load_surface(&a.input, field)?;
            let sampled = a.direction.is_none();
            let (v, rows) = commands::simulate(&l.surface, &a.w, a.direction.as_deref(), a.time, a.float, a.samples, cli.seed, a.trace.is_some())?;
            if let Some(path) = &a.trace {
                let mut csv = String::from("t,polygon,n\n");
                for r in rows {
                    csv.push_str(&format!("{},{},{}\n", r.t, r.polygon, r.n));
                }
                std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            }
            Output::Json(report(argv, Some(&l), sampled.then_some(cli.seed), v))
        }
        Command::Iet { input, w, direction, refined } => {
            let l = load_surface(&input, field)?;
            let v = commands::iet(&l.surface, &w, &direction, refined)?;
            wrap(&l, v)
        }
        Command::Catalog(CatalogCmd::List) => Output::Json(report(argv, None, None, commands::catalog_list()?)),
        Command::Catalog(CatalogCmd::Get { name }) => {
            let s = flatcover::catalog::get(&name).map_err(domain)?;
            Output::Text(SurfaceFile::render(s.spec()) + "\n")
        }
        Command::ReproducePaper => {
            let results = flatcover::reproduce::all();
            let mut table = String::new();
            for r in &results {
                table.push_str(&r.line());
                table.push('\n');
                for c in r.checks.iter().filter(|c| !c.passed) {
                    table.push_str(&format!("    {}: {}\n", c.name, c.detail));
                }
            }
            let passed = results.iter().filter(|r| r.passed).count();
            table.push_str(&format!("{passed}/{} criteria pass\n", results.len()));
            let code = if passed == results.len() { 0 } else { EXIT_DOMAIN };
            return Ok((Output::Text(table), code));
        }
    };
    Ok((out, 0))
}

fn emit(out: Output, path: Option<&Path>) -> Result<()> {
    let text = match out {
        Output::Json(v) => serde_json::to_string_pretty(&v)? + "\n",
        Output::Text(t) => t,
    };
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => write_stdout(&text),
    }
    Ok(())
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn write_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn error_json(code: u8, kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message, "exit_code": code } }).to_string()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write_stdout(&e.to_string());
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            eprintln!("{}", error_json(EXIT_USAGE, "Usage", &e.kind().to_string()));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let out_path = cli.out.clone();
    let shown: Vec<String> = argv.iter().skip(1).cloned().collect();
    match execute(cli, &shown).and_then(|(out, code)| emit(out, out_path.as_deref()).map(|_| code)) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let (code, kind, message) = match err.downcast_ref::<Failure>() {
                Some(f) => (f.code, f.kind.clone(), f.message.clone()),
                None => (EXIT_DOMAIN, "Error".to_string(), format!("{err:#}")),
            };
            eprintln!("{}", error_json(code, &kind, &message));
            ExitCode::from(code)
        }
    }
}
