//! `conics`: analyze conic arrangements, test freeness of plane curves, and check the
//! combinatorial inequalities.
//!
//! Exit codes: 0 success, 1 a verification found a counterexample, 2 parse or validation
//! error, 3 computation failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use conics_core::algebra::{parse_rational, rational_string, Rational};
use conics_core::arrangement::fixtures;
use conics_core::combinatorics::{
    enumerate_admissible, vector_checks, verify_theorem_a, verify_theorem_b, VectorChecks,
};
use conics_core::{
    analyze, freeness_report, parse_form, pencil_members, ArrangementDocument, ArrangementPolynomial, Conic,
    ConicArrangement, FreenessError,
};

#[derive(Parser)]
#[command(name = "conics", version, about = "Exact analysis of conic arrangements in the projective plane")]
struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Structured JSON output instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Singular points, Tjurina numbers, freeness and inequality checks for an arrangement file.
    Analyze { input: PathBuf },
    /// mdr, global Tjurina number and freeness verdict for a curve given as a polynomial.
    Freeness(FreenessArgs),
    /// Admissible weak combinatorics for k conics, with per-check outcomes.
    Enumerate(EnumerateArgs),
    /// Exhaustive or symbolic verification of the two theorems.
    Verify(VerifyArgs),
    /// Write an arrangement file from a pencil or a built-in fixture.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct FreenessArgs {
    /// Homogeneous polynomial in x, y, z, such as "x*y*z" or "(x^2-y*z)*(x^2+y*z)".
    #[arg(required_unless_present = "file")]
    polynomial: Option<String>,
    /// Read the polynomial from a file instead.
    #[arg(long, conflicts_with = "polynomial")]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Filter {
    TheoremB,
    Discriminant,
    TacnodeBound,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    k: u64,
    /// Checks to report; all of them when omitted.
    #[arg(long, value_enum)]
    filter: Vec<Filter>,
    /// Only rows failing at least one reported check.
    #[arg(long)]
    violations: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    /// No admissible vector solves the freeness equation.
    A,
    /// The orbifold inequality implies 8k + n2 + 3/4 n3 >= 5/2 t2.
    B,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    theorem: Theorem,
    /// Single value of k.
    #[arg(long, conflicts_with_all = ["kmin", "kmax"])]
    k: Option<u64>,
    #[arg(long)]
    kmin: Option<u64>,
    #[arg(long)]
    kmax: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    TangentPair,
    GenericPair,
    Pencil3,
    Pencil4,
    FiveCircles,
}

#[derive(Args)]
struct GenerateArgs {
    /// First pencil generator: six coefficients "a,b,c,d,e,f" or a quadratic form.
    #[arg(long, requires_all = ["g2", "params"], conflicts_with = "fixture")]
    g1: Option<String>,
    /// Second pencil generator, same format.
    #[arg(long)]
    g2: Option<String>,
    /// Comma-separated pencil parameters t for the members g1 + t g2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    params: Vec<String>,
    #[arg(long, value_enum, required_unless_present = "g1")]
    fixture: Option<Fixture>,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: 2, message: message.to_string() }
    }

    fn computation(message: impl ToString) -> Self {
        Failure { code: 3, message: message.to_string() }
    }
}

fn main() -> ExitCode {
    // Let `conics ... | head` end quietly instead of panicking on a closed pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().expect("thread pool is configured once");
    }
    let result = match &cli.command {
        Command::Analyze { input } => cmd_analyze(input, cli.json),
        Command::Freeness(a) => cmd_freeness(a, cli.json),
        Command::Enumerate(a) => cmd_enumerate(a, cli.json),
        Command::Verify(a) => cmd_verify(a, cli.json),
        Command::Generate(a) => cmd_generate(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).unwrap());
}

fn cmd_analyze(input: &PathBuf, as_json: bool) -> Result<u8, Failure> {
    let text = read(input)?;
    let arr = ArrangementDocument::parse(&text).and_then(|d| d.to_arrangement()).map_err(Failure::input)?;
    let report = analyze(&arr).map_err(Failure::computation)?;
    if as_json {
        print_json(&report.to_json());
    } else {
        print!("{report}");
    }
    if !report.consistent() {
        return Err(Failure::computation("global and local Tjurina numbers disagree"));
    }
    Ok(0)
}

fn cmd_freeness(a: &FreenessArgs, as_json: bool) -> Result<u8, Failure> {
    let text = match (&a.polynomial, &a.file) {
        (Some(p), _) => p.clone(),
        (None, Some(path)) => read(path)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    let form = parse_form(text.trim()).map_err(Failure::input)?;
    let report = freeness_report(&ArrangementPolynomial::curve(form)).map_err(|e| match e {
        FreenessError::NotReduced | FreenessError::DegreeTooSmall => Failure::input(e),
        FreenessError::NonIsolatedSingularities(_) => Failure::computation(e),
    })?;
    if as_json {
        print_json(&report.to_json());
    } else {
        println!("{report}");
    }
    Ok(0)
}

fn cmd_enumerate(a: &EnumerateArgs, as_json: bool) -> Result<u8, Failure> {
    if a.k < 2 {
        return Err(Failure::input("k must be at least 2"));
    }
    let filters = if a.filter.is_empty() {
        vec![Filter::TheoremB, Filter::Discriminant, Filter::TacnodeBound]
    } else {
        a.filter.clone()
    };
    let outcome = |c: &VectorChecks, f: Filter| match f {
        Filter::TheoremB => c.theorem_b,
        Filter::Discriminant => Some(c.discriminant),
        Filter::TacnodeBound => c.tacnode_bound,
    };
    let name = |f: Filter| match f {
        Filter::TheoremB => "theorem-b",
        Filter::Discriminant => "discriminant",
        Filter::TacnodeBound => "tacnode-bound",
    };
    if !as_json {
        let mut header = format!("{:>4} {:>6} {:>6} {:>6} {:>6}", "k", "n2", "t2", "n3", "n4");
        for &f in &filters {
            header += &format!(" {:>14}", name(f));
        }
        println!("{header}");
    }
    let mut rows = 0;
    for wc in enumerate_admissible(a.k) {
        let c = vector_checks(&wc);
        if a.violations && !filters.iter().any(|&f| outcome(&c, f) == Some(false)) {
            continue;
        }
        rows += 1;
        if as_json {
            println!("{}", serde_json::to_string(&c).unwrap());
            continue;
        }
        let mut line = format!("{:>4} {:>6} {:>6} {:>6} {:>6}", wc.k, wc.n2, wc.t2, wc.n3, wc.n4);
        for &f in &filters {
            let cell = match outcome(&c, f) {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "-",
            };
            line += &format!(" {cell:>14}");
        }
        println!("{line}");
    }
    if !as_json {
        println!("{rows} rows");
    }
    Ok(0)
}

fn range(a: &VerifyArgs, default_max: u64) -> Result<(u64, u64), Failure> {
    let (lo, hi) = match a.k {
        Some(k) => (k, k),
        None => (a.kmin.unwrap_or(2), a.kmax.unwrap_or(default_max)),
    };
    if lo < 2 || lo > hi {
        return Err(Failure::input(format!("invalid range k in [{lo}, {hi}]")));
    }
    Ok((lo, hi))
}

fn cmd_verify(a: &VerifyArgs, as_json: bool) -> Result<u8, Failure> {
    match a.theorem {
        Theorem::A => {
            let (lo, hi) = range(a, 12)?;
            let r = verify_theorem_a(lo, hi);
            if as_json {
                print_json(&serde_json::to_value(&r).unwrap());
            } else {
                for (k, n) in &r.per_k {
                    println!("k = {k:>3}: {n} admissible vectors");
                }
                println!("vectors checked: {}", r.vectors_checked);
                println!("counterexamples: {}", r.counterexamples.len());
                for (wc, roots) in &r.counterexamples {
                    println!("  {wc}: r = {roots:?}");
                }
            }
            Ok(if r.counterexamples.is_empty() { 0 } else { 1 })
        }
        Theorem::B => {
            let (lo, hi) = range(a, 3.max(a.kmin.unwrap_or(3)))?;
            let mut all = true;
            let mut records = Vec::new();
            for k in lo..=hi {
                let c = verify_theorem_b(k).map_err(Failure::input)?;
                all &= c.passed();
                if as_json {
                    records.push(serde_json::to_value(&c).unwrap());
                    continue;
                }
                let s: Vec<String> = c.summands.iter().map(rational_string).collect();
                println!("k = {k}");
                println!("  summands node, tacnode, triple, quadruple: {}  {}", s.join(", "), ok(c.summands_match));
                let d: Vec<String> = c.difference.0.iter().map(rational_string).collect();
                println!(
                    "  rhs - lhs over (k, n2, t2, n3, n4, 1): [{}]  multiple of 8k + n2 + 3/4 n3 - 5/2 t2: {}",
                    d.join(", "),
                    ok(c.difference_is_multiple)
                );
                println!(
                    "  {} admissible vectors: substitution {}, equivalence {}",
                    c.vectors_checked,
                    ok(c.substitution_holds),
                    ok(c.equivalence_holds)
                );
            }
            if as_json {
                print_json(&json!({ "checks": records, "passed": all }));
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn parse_conic(text: &str) -> Result<Conic, Failure> {
    if text.contains(['x', 'y', 'z']) {
        let form = parse_form(text).map_err(Failure::input)?;
        return Conic::from_form(&form).ok_or_else(|| Failure::input(format!("not a quadratic form: {text}")));
    }
    let coeffs: Vec<Rational> = text
        .split(',')
        .map(|s| parse_rational(s).ok_or_else(|| Failure::input(format!("not a rational: {s:?}"))))
        .collect::<Result<_, _>>()?;
    let coeffs: [Rational; 6] =
        coeffs.try_into().map_err(|_| Failure::input(format!("expected six coefficients: {text}")))?;
    Ok(Conic::new(coeffs))
}

fn cmd_generate(a: &GenerateArgs) -> Result<u8, Failure> {
    let arr: ConicArrangement = match a.fixture {
        Some(Fixture::TangentPair) => fixtures::tangent_pair(),
        Some(Fixture::GenericPair) => fixtures::generic_pair(),
        Some(Fixture::Pencil3) => fixtures::pencil3(),
        Some(Fixture::Pencil4) => fixtures::pencil4(),
        Some(Fixture::FiveCircles) => fixtures::five_circles(),
        None => {
            let g1 = parse_conic(a.g1.as_deref().unwrap())?;
            let g2 = parse_conic(a.g2.as_deref().unwrap())?;
            let params: Vec<Rational> = a
                .params
                .iter()
                .map(|s| parse_rational(s).ok_or_else(|| Failure::input(format!("not a rational: {s:?}"))))
                .collect::<Result<_, _>>()?;
            pencil_members(&g1, &g2, &params).map_err(Failure::input)?
        }
    };
    let doc = ArrangementDocument::from_conics(arr.conics()).to_json();
    match &a.output {
        Some(path) => fs::write(path, doc).map_err(|e| Failure::computation(format!("{}: {e}", path.display())))?,
        None => print!("{doc}"),
    }
    Ok(0)
}
