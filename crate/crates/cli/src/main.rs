//! `qcross`: construct, verify, search for and use quasi-cross lattice tilings.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage or precondition
//! violation, 3 internal fault.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qcross::bounds::{feasibility, shape_constraints};
use qcross::codec::{CodeSpec, Decoded};
use qcross::constructions::{
    balance_ratio_family_with_degree, construct_21, construct_cyclic, construct_field, mixed_construction,
};
use qcross::lattice::{
    geometric_check, lattice_from_splitting, packing_density, period, GeometricVerdict, GEOMETRIC_TORUS_LIMIT,
    GEOMETRIC_VOLUME_LIMIT,
};
use qcross::render::render_2d;
use qcross::search::{search_tilings, SearchOptions};
use qcross::survey::{survey, write_csv, SurveyConfig};
use qcross::{Error, IntegerLattice, QuasiCrossShape, Splitting};

#[derive(Parser)]
#[command(name = "qcross", version, about = "Perfect limited-magnitude codes from quasi-cross lattice tilings")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build a splitting from one of the explicit families; prints splitting JSON.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Check a splitting JSON file: packing, tiling, density, period.
    Verify {
        /// Splitting JSON, or `-` for stdin.
        file: PathBuf,
    },
    /// Print the kernel lattice of a splitting in Hermite form.
    Lattice {
        file: PathBuf,
    },
    /// Exhaustively search Z_q for tilings.
    Search {
        #[arg(long)]
        kplus: u64,
        #[arg(long)]
        kminus: u64,
        #[arg(long)]
        q: u64,
        /// Stop at the first tiling.
        #[arg(long)]
        first: bool,
        /// Search without fixing 1 ∈ S, so that every tiling is visited.
        #[arg(long)]
        all_orbits: bool,
        #[arg(long)]
        max_nodes: Option<u64>,
        #[arg(long)]
        max_seconds: Option<u64>,
    },
    /// Survey every instance with k_minus < k_plus ≤ kmax, q ≤ qmax, n ≥ 2.
    Survey {
        #[arg(long, default_value_t = 10)]
        kmax: u64,
        #[arg(long, default_value_t = 100)]
        qmax: u64,
        #[arg(long)]
        jobs: Option<usize>,
        /// CSV output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip the search on instances a bound rules out.
        #[arg(long)]
        prune: bool,
        /// JSON-lines progress log.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Reuse finished instances from the progress log.
        #[arg(long, requires = "log")]
        resume: bool,
        /// Per-instance time cap.
        #[arg(long, default_value_t = 600)]
        max_seconds: u64,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Evaluate the nonexistence rules for a shape or a group order.
    Bounds {
        #[arg(long)]
        kplus: u64,
        #[arg(long)]
        kminus: u64,
        #[arg(long, required_unless_present = "q")]
        n: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Systematically encode information digits.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, num_args = 0..)]
        info: Vec<u64>,
        /// Quotient digits of the pivot coordinates.
        #[arg(long, num_args = 1.., default_values_t = [0])]
        t: Vec<u64>,
    },
    /// Decode a received word, correcting one limited-magnitude error.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, required = true)]
        word: Vec<i64>,
    },
    /// Render a two-dimensional packing as SVG.
    Plot {
        /// Splitting JSON with n = 2.
        #[arg(long, conflicts_with = "lattice")]
        code: Option<PathBuf>,
        /// Lattice JSON; needs --kplus and --kminus.
        #[arg(long, requires_all = ["kplus", "kminus"])]
        lattice: Option<PathBuf>,
        #[arg(long)]
        kplus: Option<u64>,
        #[arg(long)]
        kminus: Option<u64>,
        #[arg(long, default_value_t = 12)]
        window: u32,
        /// SVG output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CodeArgs {
    /// Splitting JSON of the code.
    #[arg(long)]
    code: PathBuf,
    /// Number of cell levels Q.
    #[arg(long)]
    levels: u64,
}

#[derive(Subcommand)]
enum Family {
    /// Z_{p^ℓ} with k_plus + k_minus = p − 1.
    Cyclic {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        kplus: u64,
        #[arg(long)]
        kminus: u64,
    },
    /// Leading-one vectors of GF(p^ℓ) with k_plus + k_minus = p − 1.
    Field {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        kplus: u64,
        #[arg(long)]
        kminus: u64,
    },
    /// (2,1) over Z_{4^ℓ}.
    TwoOne {
        #[arg(long)]
        ell: u32,
    },
    /// Cyclic construction extended to Z_{p^ℓ}^k.
    Mixed {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        kplus: u64,
        #[arg(long)]
        kminus: u64,
        #[arg(long)]
        k: usize,
    },
    /// Member of the family with balance ratio k_minus/k_plus = a/b.
    Balance {
        /// Ratio `a/b` with 0 < a < b.
        #[arg(long)]
        beta: String,
        /// 1-based index of the prime p ≡ 1 (mod a+b).
        #[arg(long, default_value_t = 1)]
        index: u64,
        #[arg(long, default_value_t = 1)]
        ell: u32,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) => 3,
            Error::NotPacking(_) | Error::DensityAboveOne { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure { code: 3, message: message.into() }
}

/// Standard output plus the exit status of a successful run.
struct Output {
    text: String,
    status: u8,
}

impl Output {
    fn ok(text: impl Into<String>) -> Self {
        Output { text: text.into(), status: 0 }
    }
    fn negative(text: impl Into<String>) -> Self {
        Output { text: text.into(), status: 1 }
    }
}

type CmdResult = std::result::Result<Output, Failure>;

fn read_input(path: &Path) -> std::result::Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn load_splitting(path: &Path) -> std::result::Result<Splitting, Failure> {
    Ok(Splitting::from_json_str(&read_input(path)?)?)
}

fn write_output(path: &Path, contents: &str) -> std::result::Result<(), Failure> {
    fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn tuple(values: &[u64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

fn words(values: &[i64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn construct(family: Family) -> CmdResult {
    let sp = match family {
        Family::Cyclic { p, ell, kplus, kminus } => construct_cyclic(p, ell, kplus, kminus)?,
        Family::Field { p, ell, kplus, kminus } => construct_field(p, ell, kplus, kminus)?,
        Family::TwoOne { ell } => construct_21(ell)?,
        Family::Mixed { p, ell, kplus, kminus, k } => mixed_construction(p, ell, kplus, kminus, k)?,
        Family::Balance { beta, index, ell } => {
            let (a, b) = beta
                .split_once('/')
                .and_then(|(a, b)| Some((a.trim().parse::<u64>().ok()?, b.trim().parse::<u64>().ok()?)))
                .ok_or_else(|| usage(format!("--beta must look like a/b, got {beta:?}")))?;
            balance_ratio_family_with_degree(a, b, index, ell)?.splitting
        }
    };
    Ok(Output::ok(sp.to_json_string()))
}

fn verify(file: &Path, format: Format) -> CmdResult {
    let sp = load_splitting(file)?;
    if let Err(w) = sp.verify_packing() {
        return Ok(match format {
            Format::Text => Output::negative(format!("not a packing: {w}")),
            Format::Json => Output::negative(pretty(&json!({ "verdict": "overlap", "witness": w, "text": w.to_string() }))),
        });
    }
    let tiling = sp.is_tiling()?;
    let kernel = lattice_from_splitting(&sp)?;
    let density = packing_density(&kernel.lattice, &sp.shape())?;
    let periods = period(&sp);
    let geometric = if sp.group().order() <= GEOMETRIC_TORUS_LIMIT && sp.shape().volume() <= GEOMETRIC_VOLUME_LIMIT {
        let verdict = geometric_check(&sp)?;
        // The lattice only sees the subgroup generated by the splitters.
        let lattice_tiles = sp.group().order() / kernel.index == sp.shape().volume();
        let agrees = matches!(
            (&verdict, lattice_tiles),
            (GeometricVerdict::Tiling, true) | (GeometricVerdict::Packing { .. }, false)
        );
        if !agrees {
            return Err(internal(format!("geometric check disagrees: {verdict:?}")));
        }
        Some(verdict)
    } else {
        None
    };
    let verdict = if tiling { "tiling" } else { "packing" };
    Ok(Output::ok(match format {
        Format::Text if kernel.index > 1 => format!(
            "{verdict}, density {density}, period {}; splitters generate a subgroup of index {}",
            tuple(&periods),
            kernel.index
        ),
        Format::Text => format!("{verdict}, density {density}, period {}", tuple(&periods)),
        Format::Json => pretty(&json!({
            "verdict": verdict,
            "density": density.to_string(),
            "period": periods,
            "determinant": kernel.lattice.determinant()?,
            "subgroup_index": kernel.index,
            "singularity": sp.classify_singularity(),
            "geometric": geometric,
        })),
    }))
}

fn lattice(file: &Path, format: Format) -> CmdResult {
    let sp = load_splitting(file)?;
    let kernel = lattice_from_splitting(&sp)?;
    Ok(Output::ok(match format {
        Format::Text => kernel.lattice.to_json_string(),
        Format::Json => pretty(&json!({
            "basis": kernel.lattice.basis(),
            "determinant": kernel.lattice.determinant()?,
            "index": kernel.index,
        })),
    }))
}

#[allow(clippy::too_many_arguments)]
fn search(
    kplus: u64,
    kminus: u64,
    q: u64,
    first: bool,
    all_orbits: bool,
    max_nodes: Option<u64>,
    max_seconds: Option<u64>,
    format: Format,
) -> CmdResult {
    let opts = SearchOptions {
        find_all: !first,
        canonical_only: !all_orbits,
        max_nodes,
        max_time: max_seconds.map(Duration::from_secs),
    };
    let out = search_tilings(kplus, kminus, q, &opts)?;
    let sets = out.canonical_sets();
    if format == Format::Json {
        return Ok(Output::ok(pretty(&json!({
            "k_plus": kplus,
            "k_minus": kminus,
            "q": q,
            "n": out.n,
            "tilings": sets,
            "orbit_sizes": out.orbit_sizes,
            "raw_count": out.raw_count,
            "nodes": out.nodes,
            "complete": out.complete,
        }))));
    }
    let mut text = match out.n {
        None => "(k_plus + k_minus) does not divide q - 1: 0 canonical tilings".to_string(),
        Some(n) => format!(
            "{} canonical tiling{} of Z_{q} (n = {n}, {} nodes{})",
            sets.len(),
            if sets.len() == 1 { "" } else { "s" },
            out.nodes,
            if out.complete { "" } else { ", INCOMPLETE" }
        ),
    };
    for (set, size) in sets.iter().zip(&out.orbit_sizes) {
        text.push_str(&format!("\n{set:?} orbit size {size}"));
    }
    if all_orbits {
        text.push_str(&format!("\n{} tilings in total", out.raw_count));
    }
    Ok(Output::ok(text))
}

#[allow(clippy::too_many_arguments)]
fn run_survey(
    kmax: u64,
    qmax: u64,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    prune: bool,
    log: Option<PathBuf>,
    resume: bool,
    max_seconds: u64,
    max_nodes: Option<u64>,
    format: Format,
) -> CmdResult {
    let cfg = SurveyConfig {
        k_max: kmax,
        q_max: qmax,
        jobs,
        prune,
        max_nodes,
        max_time: Some(Duration::from_secs(max_seconds)),
        log,
        resume,
    };
    let report = survey(&cfg)?;
    let mut csv = Vec::new();
    write_csv(&report.rows(), &mut csv)?;
    let csv = String::from_utf8(csv).map_err(|e| internal(e.to_string()))?;
    let text = match (&out, format) {
        (Some(path), Format::Text) => {
            write_output(path, &csv)?;
            report.summary()
        }
        (Some(path), Format::Json) => {
            write_output(path, &csv)?;
            pretty(&serde_json::to_value(&report).map_err(|e| internal(e.to_string()))?)
        }
        (None, Format::Text) => {
            eprintln!("{}", report.summary());
            csv.trim_end().to_string()
        }
        (None, Format::Json) => pretty(&serde_json::to_value(&report).map_err(|e| internal(e.to_string()))?),
    };
    Ok(if report.checks.all_clear() { Output::ok(text) } else { Output::negative(text) })
}

fn bounds(kplus: u64, kminus: u64, n: Option<u64>, q: Option<u64>, format: Format) -> CmdResult {
    let report = match (n, q) {
        (_, Some(q)) => {
            let r = feasibility(kplus, kminus, q)?;
            if let (Some(n), Some(rn)) = (n, r.n) {
                if n != rn {
                    return Err(usage(format!("--n {n} disagrees with q = {q}, which gives n = {rn}")));
                }
            }
            r
        }
        (Some(n), None) => shape_constraints(&QuasiCrossShape::new(kplus, kminus, n)?)?,
        (None, None) => return Err(usage("one of --n or --q is required")),
    };
    Ok(Output::ok(match format {
        Format::Text => report.to_string(),
        Format::Json => pretty(&json!({
            "k_plus": report.k_plus,
            "k_minus": report.k_minus,
            "n": report.n,
            "q": report.q,
            "ruled_out": report.is_ruled_out(),
            "rules": report.rules,
        })),
    }))
}

fn load_code(args: &CodeArgs) -> std::result::Result<CodeSpec, Failure> {
    Ok(CodeSpec::new(load_splitting(&args.code)?, args.levels)?)
}

fn encode(code: &CodeArgs, info: &[u64], t: &[u64], format: Format) -> CmdResult {
    let spec = load_code(code)?;
    let word = spec.encode(info, t)?;
    Ok(Output::ok(match format {
        Format::Text => words(&word),
        Format::Json => pretty(&json!({ "codeword": word })),
    }))
}

fn decode(code: &CodeArgs, word: &[i64], format: Format) -> CmdResult {
    let spec = load_code(code)?;
    let decoded = spec.decode(word)?;
    let negative = matches!(decoded, Decoded::Uncorrectable { .. });
    let text = match format {
        Format::Json => pretty(&serde_json::to_value(&decoded).map_err(|e| internal(e.to_string()))?),
        Format::Text => match &decoded {
            Decoded::NoError { codeword } => format!("codeword {}, no error", words(codeword)),
            Decoded::Corrected { codeword, index, magnitude } => {
                format!("codeword {}, corrected (i={}, m={magnitude:+})", words(codeword), index + 1)
            }
            Decoded::Uncorrectable { syndrome } => format!("uncorrectable, syndrome {}", tuple(syndrome)),
        },
    };
    Ok(if negative { Output::negative(text) } else { Output::ok(text) })
}

fn plot(
    code: Option<PathBuf>,
    lattice: Option<PathBuf>,
    kplus: Option<u64>,
    kminus: Option<u64>,
    window: u32,
    out: Option<PathBuf>,
) -> CmdResult {
    let (l, shape) = match (code, lattice) {
        (Some(path), None) => {
            let sp = load_splitting(&path)?;
            (lattice_from_splitting(&sp)?.lattice, sp.shape())
        }
        (None, Some(path)) => {
            let l = IntegerLattice::from_json_str(&read_input(&path)?)?;
            let (kp, km) = kplus.zip(kminus).ok_or_else(|| usage("--lattice needs --kplus and --kminus"))?;
            let shape = QuasiCrossShape::new(kp, km, l.dim() as u64)?;
            (l, shape)
        }
        _ => return Err(usage("give exactly one of --code or --lattice")),
    };
    let svg = render_2d(&l, &shape, window)?;
    match out {
        Some(path) => {
            write_output(&path, &svg)?;
            Ok(Output::ok(format!("wrote {}", path.display())))
        }
        None => Ok(Output::ok(svg.trim_end().to_string())),
    }
}

fn run(cli: Cli) -> CmdResult {
    let format = cli.format;
    match cli.command {
        Command::Construct { family } => construct(family),
        Command::Verify { file } => verify(&file, format),
        Command::Lattice { file } => lattice(&file, format),
        Command::Search { kplus, kminus, q, first, all_orbits, max_nodes, max_seconds } => {
            search(kplus, kminus, q, first, all_orbits, max_nodes, max_seconds, format)
        }
        Command::Survey { kmax, qmax, jobs, out, prune, log, resume, max_seconds, max_nodes } => {
            run_survey(kmax, qmax, jobs, out, prune, log, resume, max_seconds, max_nodes, format)
        }
        Command::Bounds { kplus, kminus, n, q } => bounds(kplus, kminus, n, q, format),
        Command::Encode { code, info, t } => encode(&code, &info, &t, format),
        Command::Decode { code, word } => decode(&code, &word, format),
        Command::Plot { code, lattice, kplus, kminus, window, out } => plot(code, lattice, kplus, kminus, window, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let _ = writeln!(stdout, "{}", out.text);
            ExitCode::from(out.status)
        }
        Err(f) => {
            if format == Format::Json {
                println!("{}", pretty(&json!({ "error": f.message, "exit_code": f.code })));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
