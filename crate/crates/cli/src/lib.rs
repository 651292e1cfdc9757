//! Command-line front end for `tropsolve_core`.
//!
//! Exit codes: 0 feasible (or equal, or convergent), 1 infeasible (or
//! mismatch, or divergent), 2 input error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;
use tropsolve_core::oracle::default_bound;
use tropsolve_core::text::{format_matrices, matrix_tokens, vector_tokens};
use tropsolve_core::{
    check_condition, grid_oracle, parse_matrices, parse_vector, solve_all, verify_solution,
    Arithmetic, BasisRecord, Matrix, RowSelection, SelectionPair, Semifield, SemifieldKind, Side,
    SolveOptions, SolveReport, Strategy, VerifyStatus, Witness, DEFAULT_TOLERANCE,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: tropsolve_core::Error,
    },
    #[error(transparent)]
    Core(#[from] tropsolve_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write report: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<std::io::Error> for CliError {
    fn from(source: std::io::Error) -> Self {
        CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(
    name = "tropsolve",
    version,
    about = "Solve two-sided tropical linear equations A x = B y"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Arith {
    /// Scalar carrier.
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Absolute tolerance for comparisons (float mode only).
    #[arg(long)]
    pub tolerance: Option<f64>,
}

impl Arith {
    pub fn arithmetic(&self) -> Result<Arithmetic> {
        match (self.mode, self.tolerance) {
            (Mode::Exact, None) => Ok(Arithmetic::Exact),
            (Mode::Exact, Some(_)) => {
                Err(CliError::Usage("--tolerance requires --mode float".into()))
            }
            (Mode::Float, t) => {
                let tolerance = t.unwrap_or(DEFAULT_TOLERANCE);
                if !(tolerance.is_finite() && tolerance >= 0.0) {
                    return Err(CliError::Usage(format!("invalid tolerance {tolerance}")));
                }
                Ok(Arithmetic::Float { tolerance })
            }
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate sparsifications and print every solution basis.
    Solve {
        problem: PathBuf,
        #[arg(long, default_value_t = Strategy::Backtracking)]
        strategy: Strategy,
        /// Keep bases whose family is contained in another's.
        #[arg(long)]
        no_dedupe: bool,
        /// Omit witnesses from the printed output.
        #[arg(long)]
        no_witness: bool,
        /// Write a JSON report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        arith: Arith,
    },
    /// Evaluate the feasibility condition for one selection pair.
    Check {
        problem: PathBuf,
        /// 1-based column picked in each row of A, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sel_a: Vec<usize>,
        /// 1-based column picked in each row of B, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sel_b: Vec<usize>,
        #[command(flatten)]
        arith: Arith,
    },
    /// Print the Kleene star of a square matrix.
    Star {
        matrix: PathBuf,
        #[command(flatten)]
        arith: Arith,
    },
    /// Substitute x and y into A x = B y.
    Verify {
        problem: PathBuf,
        /// Entries of x, comma- or space-separated.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Entries of y, comma- or space-separated.
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        arith: Arith,
    },
    /// Brute-force integer search for a solution (max-plus, exact).
    Oracle {
        problem: PathBuf,
        /// Coordinate range [-bound, bound]; defaults to 2*max|entry|+2.
        #[arg(long)]
        bound: Option<i64>,
    },
}

/// A two-sided problem: `A` and `B` over one semifield.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub semifield: Semifield,
    pub a: Matrix,
    pub b: Matrix,
}

impl ProblemFile {
    /// Parses a header, then `A` and `B` separated by a blank line. Files
    /// without a header are read as max-plus.
    pub fn parse(text: &str, arithmetic: Arithmetic) -> tropsolve_core::Result<Self> {
        let (semifield, matrices) = parse_matrices(text, SemifieldKind::MaxPlus, arithmetic)?;
        let [a, b]: [Matrix; 2] =
            matrices
                .try_into()
                .map_err(|m: Vec<Matrix>| tropsolve_core::Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("expected two matrices (A and B), found {}", m.len()),
                })?;
        let problem = Self { semifield, a, b };
        problem.validate()?;
        Ok(problem)
    }

    pub fn load(path: &Path, arithmetic: Arithmetic) -> Result<Self> {
        let text = read(path)?;
        Self::parse(&text, arithmetic).map_err(|source| CliError::Input {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn validate(&self) -> tropsolve_core::Result<()> {
        use tropsolve_core::Error;
        if self.a.rows() != self.b.rows() {
            return Err(Error::RowCountMismatch {
                a: self.a.rows(),
                b: self.b.rows(),
            });
        }
        if let Some(row) = self.a.first_zero_row() {
            return Err(Error::NotRowRegular { matrix: 'A', row });
        }
        if let Some(row) = self.b.first_zero_row() {
            return Err(Error::NotRowRegular { matrix: 'B', row });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        format_matrices(&[&self.a, &self.b])
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_single(path: &Path, arithmetic: Arithmetic) -> Result<Matrix> {
    let text = read(path)?;
    let input = |source| CliError::Input {
        path: path.to_path_buf(),
        source,
    };
    let (_, matrices) = parse_matrices(&text, SemifieldKind::MaxPlus, arithmetic).map_err(input)?;
    match <[Matrix; 1]>::try_from(matrices) {
        Ok([m]) => Ok(m),
        Err(m) => Err(input(tropsolve_core::Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected one matrix, found {}", m.len()),
        })),
    }
}

#[derive(Debug, Serialize)]
pub struct PairJson {
    pub sel_a: Vec<usize>,
    pub sel_b: Vec<usize>,
    pub trace: String,
}

impl From<&SelectionPair> for PairJson {
    fn from(p: &SelectionPair) -> Self {
        Self {
            sel_a: p.sel_a.to_one_based(),
            sel_b: p.sel_b.to_one_based(),
            trace: p.trace.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WitnessJson {
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub x: Vec<String>,
    pub y: Vec<String>,
}

impl From<&Witness> for WitnessJson {
    fn from(w: &Witness) -> Self {
        Self {
            u: vector_tokens(&w.u),
            v: vector_tokens(&w.v),
            x: vector_tokens(&w.x),
            y: vector_tokens(&w.y),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BasisJson {
    pub sel_a: Vec<usize>,
    pub sel_b: Vec<usize>,
    pub trace: String,
    pub gxu: Vec<Vec<String>>,
    pub gxv: Vec<Vec<String>>,
    pub gyu: Vec<Vec<String>>,
    pub gyv: Vec<Vec<String>>,
    pub witness: Option<WitnessJson>,
    pub note: Option<String>,
    /// 1-based position in `bases` of a basis containing this one.
    pub subsumed_by: Option<usize>,
}

impl From<&BasisRecord> for BasisJson {
    fn from(r: &BasisRecord) -> Self {
        let b = &r.basis;
        Self {
            sel_a: b.pair.sel_a.to_one_based(),
            sel_b: b.pair.sel_b.to_one_based(),
            trace: b.pair.trace.to_string(),
            gxu: matrix_tokens(&b.gxu),
            gxv: matrix_tokens(&b.gxv),
            gyu: matrix_tokens(&b.gyu),
            gyv: matrix_tokens(&b.gyv),
            witness: r.witness.as_ref().map(WitnessJson::from),
            note: r.note.clone(),
            subsumed_by: r.subsumed_by.map(|i| i + 1),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SolveJson {
    pub schema_version: u32,
    pub semifield: String,
    pub mode: String,
    pub tolerance: Option<f64>,
    pub strategy: String,
    pub dedupe: bool,
    pub feasible: bool,
    pub selections_examined: u64,
    pub selections_pruned: u64,
    pub feasible_pairs: Vec<PairJson>,
    pub bases: Vec<BasisJson>,
    pub redundant_bases: Vec<BasisJson>,
    pub witness: Option<WitnessJson>,
}

impl SolveJson {
    pub fn new(problem: &ProblemFile, options: &SolveOptions, report: &SolveReport) -> Self {
        let (mode, tolerance) = match problem.semifield.arithmetic() {
            Arithmetic::Exact => ("exact", None),
            Arithmetic::Float { tolerance } => ("float", Some(tolerance)),
        };
        Self {
            schema_version: SCHEMA_VERSION,
            semifield: problem.semifield.kind().name().to_string(),
            mode: mode.to_string(),
            tolerance,
            strategy: options.strategy.name().to_string(),
            dedupe: options.dedupe,
            feasible: report.feasible,
            selections_examined: report.selections_examined,
            selections_pruned: report.selections_pruned,
            feasible_pairs: report.feasible_pairs.iter().map(PairJson::from).collect(),
            bases: report.bases.iter().map(BasisJson::from).collect(),
            redundant_bases: report.redundant_bases.iter().map(BasisJson::from).collect(),
            witness: report.witness.as_ref().map(WitnessJson::from),
        }
    }
}

fn vector_text(v: &Matrix) -> String {
    format!("({})", vector_tokens(v).join(", "))
}

fn indent(m: &Matrix, prefix: &str) -> String {
    m.to_string()
        .lines()
        .map(|l| format!("{prefix}{l}\n"))
        .collect()
}

fn write_witness(out: &mut String, w: &Witness, prefix: &str) {
    let _ = writeln!(
        out,
        "{prefix}witness: u = {}, v = {} gives x = {}, y = {}",
        vector_text(&w.u),
        vector_text(&w.v),
        vector_text(&w.x),
        vector_text(&w.y)
    );
}

fn write_basis(out: &mut String, label: &str, r: &BasisRecord, witness: bool) {
    let pair = &r.basis.pair;
    let _ = writeln!(
        out,
        "{label}: A rows pick {:?}, B rows pick {:?}, Tr = {}",
        pair.sel_a.to_one_based(),
        pair.sel_b.to_one_based(),
        pair.trace
    );
    for (name, m) in [
        ("Gxu", &r.basis.gxu),
        ("Gxv", &r.basis.gxv),
        ("Gyu", &r.basis.gyu),
        ("Gyv", &r.basis.gyv),
    ] {
        let _ = writeln!(out, "  {name}:");
        out.push_str(&indent(m, "    "));
    }
    if witness {
        if let Some(w) = &r.witness {
            write_witness(out, w, "  ");
        }
    }
    if let Some(note) = &r.note {
        let _ = writeln!(out, "  note: {note}");
    }
}

/// Human-readable solve report.
pub fn render_solve(
    problem: &ProblemFile,
    options: &SolveOptions,
    report: &SolveReport,
    witness: bool,
) -> String {
    let mut out = String::new();
    let mode = match problem.semifield.arithmetic() {
        Arithmetic::Exact => "exact".to_string(),
        Arithmetic::Float { tolerance } => format!("float, tolerance {tolerance}"),
    };
    let _ = writeln!(out, "semifield: {} ({mode})", problem.semifield.kind());
    let _ = writeln!(
        out,
        "problem: A is {}x{}, B is {}x{}",
        problem.a.rows(),
        problem.a.cols(),
        problem.b.rows(),
        problem.b.cols()
    );
    let _ = writeln!(
        out,
        "strategy: {}; selections examined: {}, pruned: {}",
        options.strategy, report.selections_examined, report.selections_pruned
    );
    let _ = writeln!(
        out,
        "feasible selection pairs: {}",
        report.feasible_pairs.len()
    );
    let _ = writeln!(
        out,
        "verdict: {}",
        if report.feasible {
            "feasible"
        } else {
            "infeasible"
        }
    );
    for (i, r) in report.bases.iter().enumerate() {
        write_basis(&mut out, &format!("basis {}", i + 1), r, witness);
    }
    for r in &report.redundant_bases {
        let label = match r.subsumed_by {
            Some(k) => format!("redundant basis (contained in basis {})", k + 1),
            None => "redundant basis".to_string(),
        };
        write_basis(&mut out, &label, r, witness);
    }
    if witness {
        match &report.witness {
            Some(w) => write_witness(&mut out, w, ""),
            None => out.push_str("witness: none\n"),
        }
    }
    out
}

fn solve(
    path: &Path,
    options: SolveOptions,
    witness: bool,
    report_path: Option<&Path>,
    arithmetic: Arithmetic,
    out: &mut dyn Write,
) -> Result<u8> {
    let problem = ProblemFile::load(path, arithmetic)?;
    let report = solve_all(&problem.a, &problem.b, &options)?;
    out.write_all(render_solve(&problem, &options, &report, witness).as_bytes())?;
    if let Some(dest) = report_path {
        let json = serde_json::to_string_pretty(&SolveJson::new(&problem, &options, &report))?;
        fs::write(dest, json + "\n").map_err(|source| CliError::Io {
            path: dest.to_path_buf(),
            source,
        })?;
    }
    Ok(if report.feasible {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn check(
    path: &Path,
    sel_a: &[usize],
    sel_b: &[usize],
    arithmetic: Arithmetic,
    out: &mut dyn Write,
) -> Result<u8> {
    let problem = ProblemFile::load(path, arithmetic)?;
    let sf = problem.semifield;
    let sel_a = RowSelection::from_one_based(Side::A, sel_a)?;
    let sel_b = RowSelection::from_one_based(Side::B, sel_b)?;
    let total = check_condition(&problem.a, &problem.b, &sel_a, &sel_b)?;
    let product = problem
        .a
        .mul(&sel_a.materialize(&problem.a)?.conjugate()?)?
        .mul(&problem.b)?
        .mul(&sel_b.materialize(&problem.b)?.conjugate()?)?;
    let mut power = product.clone();
    for i in 1..=product.rows() {
        writeln!(out, "tr(P^{i}) = {}", power.trace()?)?;
        power = power.mul(&product)?;
    }
    let feasible = sf.leq(&total, &sf.one());
    writeln!(
        out,
        "Tr = {total}, {}",
        if feasible { "feasible" } else { "infeasible" }
    )?;
    Ok(if feasible { EXIT_OK } else { EXIT_NEGATIVE })
}

fn star(path: &Path, arithmetic: Arithmetic, out: &mut dyn Write) -> Result<u8> {
    let m = load_single(path, arithmetic)?;
    match m.kleene_star() {
        Ok(s) => {
            write!(out, "{s}")?;
            Ok(EXIT_OK)
        }
        Err(tropsolve_core::Error::Divergent { trace }) => {
            writeln!(out, "diverges, Tr = {trace}")?;
            Ok(EXIT_NEGATIVE)
        }
        Err(e) => Err(e.into()),
    }
}

fn verify(
    path: &Path,
    x: &str,
    y: &str,
    arithmetic: Arithmetic,
    out: &mut dyn Write,
) -> Result<u8> {
    let problem = ProblemFile::load(path, arithmetic)?;
    let x = parse_vector(problem.semifield, x)?;
    let y = parse_vector(problem.semifield, y)?;
    let result = verify_solution(&problem.a, &problem.b, &x, &y)?;
    let lhs = problem.a.mul(&x)?;
    match &result.status {
        VerifyStatus::ExactEqual => writeln!(out, "ExactEqual: both sides {}", vector_text(&lhs))?,
        VerifyStatus::Mismatch { row, lhs, rhs } => writeln!(
            out,
            "Mismatch at row {}: (A x) = {lhs}, (B y) = {rhs}",
            row + 1
        )?,
    }
    writeln!(
        out,
        "regular x: {}, regular y: {}",
        result.regular_x, result.regular_y
    )?;
    Ok(if result.is_exact_equal() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn oracle(path: &Path, bound: Option<i64>, out: &mut dyn Write) -> Result<u8> {
    let problem = ProblemFile::load(path, Arithmetic::Exact)?;
    let bound = match bound {
        Some(b) => b,
        None => default_bound(&problem.a, &problem.b)?,
    };
    let grid = grid_oracle(&problem.a, &problem.b, bound)?;
    writeln!(
        out,
        "bound: {}; candidates: {}; witnesses: {}",
        grid.bound,
        grid.candidates,
        grid.witnesses.len()
    )?;
    if let Some((x, y)) = grid.witnesses.first() {
        writeln!(
            out,
            "first witness: x = {}, y = {}",
            vector_text(x),
            vector_text(y)
        )?;
    }
    writeln!(
        out,
        "verdict: {}",
        if grid.exists {
            "solution found"
        } else {
            "no solution within bound"
        }
    )?;
    Ok(if grid.exists { EXIT_OK } else { EXIT_NEGATIVE })
}

/// Runs a parsed command, writing normal output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    match &cli.command {
        Command::Solve {
            problem,
            strategy,
            no_dedupe,
            no_witness,
            report,
            arith,
        } => solve(
            problem,
            SolveOptions {
                strategy: *strategy,
                dedupe: !no_dedupe,
            },
            !no_witness,
            report.as_deref(),
            arith.arithmetic()?,
            out,
        ),
        Command::Check {
            problem,
            sel_a,
            sel_b,
            arith,
        } => check(problem, sel_a, sel_b, arith.arithmetic()?, out),
        Command::Star { matrix, arith } => star(matrix, arith.arithmetic()?, out),
        Command::Verify {
            problem,
            x,
            y,
            arith,
        } => verify(problem, x, y, arith.arithmetic()?, out),
        Command::Oracle { problem, bound } => oracle(problem, *bound, out),
    }
}
