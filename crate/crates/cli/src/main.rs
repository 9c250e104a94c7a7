//! Batch CLI for the cellchain homology engine.
//!
//! One subcommand per pipeline. Results go to stdout, diagnostics to
//! stderr. Exit status: 0 on success, 1 on input or parse errors, 2 on
//! mathematical validation failures (chain condition, sublevel closure,
//! regular-value requirements, dimension accounting).
//!
//! Output is deterministic: identical inputs produce byte-identical output,
//! and the canonical (dim, id) cell order absorbs reorderings of the input.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::Ratio;
use serde_json::{Map, Value};

use cellchain::chain::{ChainComplex, ChainError, CoefficientRing};
use cellchain::cw::{CWComplex, CwError};
use cellchain::io;
use cellchain::level::Level;
use cellchain::morse::{
    analyze_index_sequence, analyze_nullity_sequence, filtered_complex_from_critical_data,
    FilteredComplex, MorseError, PerturbMode,
};
use cellchain::nerve::{nerve_complex, NerveError};
use cellchain::smith::{smith_normal_form, verify_snf};
use cellchain::spaces::{
    berger_lookup, classify_growth, decompose_holonomy, kunneth_poincare, BigRational,
    HolonomyFactor, SymmetricSpace,
};

#[derive(Parser)]
#[command(name = "cellchain", version, about = "Exact cellular homology toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Args)]
struct FormatArg {
    /// Output format: human text or structured JSON.
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form of an integer matrix file.
    Snf {
        file: PathBuf,
        /// Re-check the factorization independently and report the result.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Homology groups of a complex file.
    Homology {
        file: PathBuf,
        /// Single degree (default: all degrees of the complex).
        #[arg(long)]
        dim: Option<usize>,
        /// Coefficient ring: Z, Q, or Z/<n>.
        #[arg(long, default_value = "Z")]
        coeff: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Betti numbers of a complex file.
    Betti {
        file: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Euler characteristic of a complex file.
    Euler {
        file: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Poincaré polynomial of a complex file.
    Poincare {
        file: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Sublevel homology or interval invariants of a filtered complex.
    /// Accepts critical-record files or cellchain files with values.
    Filtration {
        file: PathBuf,
        /// Sublevel threshold.
        #[arg(long, conflicts_with = "interval", allow_hyphen_values = true)]
        level: Option<String>,
        /// Interval endpoints a b (both regular values).
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        interval: Option<Vec<String>>,
        #[arg(long)]
        dim: Option<usize>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Insert critical points at a regular value and report the effect.
    Perturb {
        file: PathBuf,
        /// Regular value at which the new critical points appear.
        #[arg(long, allow_hyphen_values = true)]
        level: String,
        /// Morse index of the new critical points.
        #[arg(long)]
        index: usize,
        /// Number of new critical points (or pairs).
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum)]
        mode: PerturbModeArg,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Homology of the nerve of a cover file.
    Nerve {
        file: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Holonomy table rows, product decompositions, model-space
    /// polynomials, Künneth products, and the growth test.
    Spaces {
        /// Table row for an irreducible non-symmetric holonomy group.
        #[arg(long, group = "action")]
        berger: Option<String>,
        /// Comma-separated holonomy factors, e.g. "SU(3),Sp(2)·Sp(1)".
        #[arg(long, group = "action", requires = "dim")]
        factors: Option<String>,
        /// Total manifold dimension for --factors.
        #[arg(long)]
        dim: Option<usize>,
        /// Poincaré polynomial of S(n), CP(n), HP(n), or OP2.
        #[arg(long, group = "action")]
        poincare: Option<String>,
        /// Künneth product of the labels' polynomials, comma-separated.
        #[arg(long, group = "action")]
        kunneth: Option<String>,
        /// Comma-separated homotopy dimensions for the growth test.
        #[arg(long, group = "action", requires = "alpha")]
        growth: Option<String>,
        /// Exact rational growth base, e.g. 3/2.
        #[arg(long)]
        alpha: Option<String>,
        /// First window index for the growth test.
        #[arg(long, default_value = "1")]
        from: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Iteration-sequence analyzers for index and nullity windows.
    Analyze {
        /// Comma-separated index sequence.
        #[arg(long, group = "action", requires = "base")]
        index_seq: Option<String>,
        /// Base index for --index-seq.
        #[arg(long)]
        base: Option<u64>,
        /// Comma-separated nullity sequence (entries >= 1).
        #[arg(long, group = "action")]
        nullity_seq: Option<String>,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PerturbModeArg {
    #[value(name = "paper_model", alias = "paper-model")]
    PaperModel,
    #[value(name = "cancelling_pairs", alias = "cancelling-pairs")]
    CancellingPairs,
}

impl From<PerturbModeArg> for PerturbMode {
    fn from(mode: PerturbModeArg) -> Self {
        match mode {
            PerturbModeArg::PaperModel => PerturbMode::PaperModel,
            PerturbModeArg::CancellingPairs => PerturbMode::CancellingPairs,
        }
    }
}

/// Failure with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn math(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<io::IoError> for Failure {
    fn from(e: io::IoError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<CwError> for Failure {
    fn from(e: CwError) -> Self {
        match &e {
            CwError::InconsistentDegrees { .. } => Failure::math(e.to_string()),
            CwError::Chain(inner) => chain_failure(inner, e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

fn chain_failure(e: &ChainError, message: String) -> Failure {
    match e {
        ChainError::ChainCondition { .. } => Failure::math(message),
        _ => Failure::input(message),
    }
}

impl From<ChainError> for Failure {
    fn from(e: ChainError) -> Self {
        let message = e.to_string();
        chain_failure(&e, message)
    }
}

impl From<MorseError> for Failure {
    fn from(e: MorseError) -> Self {
        match &e {
            MorseError::SublevelClosureViolation { .. }
            | MorseError::NotARegularValue { .. }
            | MorseError::EmptyInterval { .. }
            | MorseError::EmptyCriticalData => Failure::math(e.to_string()),
            MorseError::Cw(inner) => {
                let message = e.to_string();
                match inner {
                    CwError::InconsistentDegrees { .. } => Failure::math(message),
                    CwError::Chain(chain) => chain_failure(chain, message),
                    _ => Failure::input(message),
                }
            }
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<NerveError> for Failure {
    fn from(e: NerveError) -> Self {
        match &e {
            NerveError::AllSetsEmpty | NerveError::ClosureViolation { .. } => {
                Failure::math(e.to_string())
            }
            NerveError::Chain(inner) => {
                let message = e.to_string();
                chain_failure(inner, message)
            }
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<cellchain::spaces::SpacesError> for Failure {
    fn from(e: cellchain::spaces::SpacesError) -> Self {
        match &e {
            cellchain::spaces::SpacesError::DimensionMismatch { .. } => {
                Failure::math(e.to_string())
            }
            _ => Failure::input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.command) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Snf {
            file,
            verify,
            format,
        } => run_snf(&file, verify, format.format),
        Command::Homology {
            file,
            dim,
            coeff,
            format,
        } => run_homology(&file, dim, &coeff, format.format),
        Command::Betti { file, dim, format } => run_betti(&file, dim, format.format),
        Command::Euler { file, format } => run_euler(&file, format.format),
        Command::Poincare { file, format } => run_poincare(&file, format.format),
        Command::Filtration {
            file,
            level,
            interval,
            dim,
            format,
        } => run_filtration(&file, level, interval, dim, format.format),
        Command::Perturb {
            file,
            level,
            index,
            count,
            mode,
            format,
        } => run_perturb(&file, &level, index, count, mode.into(), format.format),
        Command::Nerve { file, dim, format } => run_nerve(&file, dim, format.format),
        Command::Spaces {
            berger,
            factors,
            dim,
            poincare,
            kunneth,
            growth,
            alpha,
            from,
            format,
        } => run_spaces(
            berger, factors, dim, poincare, kunneth, growth, alpha, from, format.format,
        ),
        Command::Analyze {
            index_seq,
            base,
            nullity_seq,
            format,
        } => run_analyze(index_seq, base, nullity_seq, format.format),
    }
}

fn load_chain_complex(file: &std::path::Path) -> Result<(CWComplex, ChainComplex), Failure> {
    let complex = io::read_cw_complex(file)?;
    let chain = complex.build_chain_complex().map_err(Failure::from)?;
    Ok((complex, chain))
}

fn parse_level(text: &str) -> Result<Level, Failure> {
    Level::from_str(text).map_err(|e| Failure::input(e.to_string()))
}

fn run_snf(file: &std::path::Path, verify: bool, format: OutputFormat) -> Result<String, Failure> {
    let matrix = io::read_matrix(file)?;
    let snf = smith_normal_form(&matrix);
    let verification = verify.then(|| verify_snf(&matrix, &snf));
    let mut out = String::new();
    match format {
        OutputFormat::Text => {
            let divisors: Vec<String> = snf.divisors.iter().map(BigInt::to_string).collect();
            writeln!(out, "divisors: {}", divisors.join(" ")).unwrap();
            writeln!(out, "rank: {}", snf.rank).unwrap();
            if let Some(report) = &verification {
                writeln!(out, "verification: {}", pass_fail(report.pass())).unwrap();
            }
        }
        OutputFormat::Structured => {
            let mut v = io::snf_to_value(&snf);
            if let Some(report) = &verification {
                let mut checks = Map::new();
                checks.insert("product".into(), report.product_equals_input.into());
                checks.insert("u_unimodular".into(), report.u_unimodular.into());
                checks.insert("v_unimodular".into(), report.v_unimodular.into());
                checks.insert("diagonal".into(), report.d_diagonal.into());
                checks.insert("divisor_chain".into(), report.divisor_chain.into());
                checks.insert("rank".into(), report.rank_agrees.into());
                checks.insert("pass".into(), report.pass().into());
                v.as_object_mut()
                    .unwrap()
                    .insert("verification".into(), Value::Object(checks));
            }
            out = io::to_pretty_string(&v);
        }
    }
    if verification.as_ref().is_some_and(|r| !r.pass()) {
        return Err(Failure::math(format!(
            "Smith normal form verification failed for {}:\n{out}",
            file.display()
        )));
    }
    Ok(out)
}

/// Parses Z, Q, or Z/<n>.
fn parse_coefficients(text: &str) -> Result<Option<CoefficientRing>, Failure> {
    let text = text.trim();
    match text {
        "Z" => Ok(None),
        "Q" => Ok(Some(CoefficientRing::Rationals)),
        _ => match text.strip_prefix("Z/") {
            Some(n) => {
                let modulus: u64 = n.parse().map_err(|_| {
                    Failure::input(format!("invalid coefficient modulus {n:?} in {text:?}"))
                })?;
                if modulus < 2 {
                    return Err(Failure::input(format!(
                        "coefficient modulus must be at least 2, got {modulus}"
                    )));
                }
                Ok(Some(CoefficientRing::Mod(modulus)))
            }
            None => Err(Failure::input(format!(
                "unknown coefficient ring {text:?}; expected Z, Q, or Z/<n>"
            ))),
        },
    }
}

/// Renders coefficient-homology summands: zeros are free copies of the ring.
fn render_summands(summands: &[BigInt], ring: CoefficientRing) -> String {
    let zero = BigInt::from(0);
    let free = summands.iter().filter(|&s| *s == zero).count();
    let free_symbol = match ring {
        CoefficientRing::Rationals => "Q".to_string(),
        CoefficientRing::Mod(l) => format!("(Z/{l})"),
    };
    let mut parts = Vec::new();
    match free {
        0 => {}
        1 => parts.push(match ring {
            CoefficientRing::Rationals => "Q".to_string(),
            CoefficientRing::Mod(l) => format!("Z/{l}"),
        }),
        r => parts.push(format!("{free_symbol}^{r}")),
    }
    for t in summands.iter().filter(|&s| *s != zero) {
        parts.push(format!("Z/{t}"));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ⊕ ")
    }
}

fn run_homology(
    file: &std::path::Path,
    dim: Option<usize>,
    coeff: &str,
    format: OutputFormat,
) -> Result<String, Failure> {
    let (_, chain) = load_chain_complex(file)?;
    let ring = parse_coefficients(coeff)?;
    let degrees: Vec<usize> = match dim {
        Some(k) => vec![k],
        None => (0..=chain.top_degree()).collect(),
    };
    let mut out = String::new();
    match format {
        OutputFormat::Text => {
            for &k in &degrees {
                match ring {
                    None => {
                        writeln!(out, "H_{k} = {}", chain.homology(k)).unwrap();
                    }
                    Some(r) => {
                        let summands = chain.homology_with_coefficients(k, r)?;
                        writeln!(out, "H_{k} = {}", render_summands(&summands, r)).unwrap();
                    }
                }
            }
        }
        OutputFormat::Structured => {
            let groups: Vec<Value> = degrees
                .iter()
                .map(|&k| -> Result<Value, Failure> {
                    let mut obj = Map::new();
                    obj.insert("degree".into(), Value::Number(k.into()));
                    match ring {
                        None => {
                            let h = chain.homology(k);
                            obj.insert("group".into(), io::homology_group_to_value(&h));
                        }
                        Some(r) => {
                            let summands = chain.homology_with_coefficients(k, r)?;
                            obj.insert("summands".into(), io::summands_to_value(&summands));
                        }
                    }
                    Ok(Value::Object(obj))
                })
                .collect::<Result<_, _>>()?;
            let mut root = Map::new();
            root.insert(
                "cell_counts".into(),
                Value::Array(
                    chain
                        .cell_counts()
                        .iter()
                        .map(|&n| Value::Number(n.into()))
                        .collect(),
                ),
            );
            // Actual boundary ranks, degree by degree; rank of M_k together
            // with the cell counts makes the free-rank bookkeeping visible.
            root.insert(
                "boundary_ranks".into(),
                Value::Array(
                    (1..=chain.top_degree())
                        .map(|k| Value::Number(chain.boundary(k).rank_over_rationals().into()))
                        .collect(),
                ),
            );
            root.insert("homology".into(), Value::Array(groups));
            out = io::to_pretty_string(&Value::Object(root));
        }
    }
    Ok(out)
}

fn run_betti(
    file: &std::path::Path,
    dim: Option<usize>,
    format: OutputFormat,
) -> Result<String, Failure> {
    let (_, chain) = load_chain_complex(file)?;
    let degrees: Vec<usize> = match dim {
        Some(k) => vec![k],
        None => (0..=chain.top_degree()).collect(),
    };
    match format {
        OutputFormat::Text => {
            let mut out = String::new();
            for &k in &degrees {
                writeln!(out, "b_{k} = {}", chain.betti(k)).unwrap();
            }
            Ok(out)
        }
        OutputFormat::Structured => {
            let mut root = Map::new();
            root.insert(
                "betti".into(),
                Value::Array(
                    degrees
                        .iter()
                        .map(|&k| Value::Number(chain.betti(k).into()))
                        .collect(),
                ),
            );
            Ok(io::to_pretty_string(&Value::Object(root)))
        }
    }
}

fn run_euler(file: &std::path::Path, format: OutputFormat) -> Result<String, Failure> {
    let (_, chain) = load_chain_complex(file)?;
    let chi = chain.euler_characteristic();
    match format {
        OutputFormat::Text => Ok(format!("chi = {chi}\n")),
        OutputFormat::Structured => {
            let mut root = Map::new();
            root.insert("euler_characteristic".into(), Value::Number(chi.into()));
            Ok(io::to_pretty_string(&Value::Object(root)))
        }
    }
}

fn poly_to_value(p: &cellchain::poly::GradedPolynomial) -> Value {
    Value::Array(
        p.terms()
            .map(|(d, c)| {
                Value::Array(vec![Value::Number(d.into()), Value::Number(c.into())])
            })
            .collect(),
    )
}

fn run_poincare(file: &std::path::Path, format: OutputFormat) -> Result<String, Failure> {
    let (_, chain) = load_chain_complex(file)?;
    let p = chain.poincare_polynomial();
    match format {
        OutputFormat::Text => Ok(format!("P(t) = {p}\nsparse: {}\n", p.sparse_pairs())),
        OutputFormat::Structured => {
            let mut root = Map::new();
            root.insert("terms".into(), poly_to_value(&p));
            root.insert(
                "euler_characteristic".into(),
                Value::Number(p.eval_at_minus_one().into()),
            );
            Ok(io::to_pretty_string(&Value::Object(root)))
        }
    }
}

/// A filtration source file is either a critical-record document or a
/// cellchain document whose cells carry values.
fn load_filtered_complex(file: &std::path::Path) -> Result<FilteredComplex, Failure> {
    let value = io::load_value(file)?;
    let path = file.display().to_string();
    if io::is_complex_value(&value) {
        let complex = io::cw_complex_from_value(&path, &value)?;
        Ok(FilteredComplex::new(complex)?)
    } else {
        let data = io::critical_data_from_value(&path, &value)?;
        Ok(filtered_complex_from_critical_data(
            &data.records,
            data.boundary.as_ref(),
        )?)
    }
}

fn run_filtration(
    file: &std::path::Path,
    level: Option<String>,
    interval: Option<Vec<String>>,
    dim: Option<usize>,
    format: OutputFormat,
) -> Result<String, Failure> {
    let filtered = load_filtered_complex(file)?;
    match (level, interval) {
        (Some(level), None) => {
            let at = parse_level(&level)?;
            let degrees: Vec<usize> = match dim {
                Some(k) => vec![k],
                None => (0..=filtered.top_dimension()).collect(),
            };
            match format {
                OutputFormat::Text => {
                    let mut out = String::new();
                    for &k in &degrees {
                        writeln!(out, "H_{k}(<= {at}) = {}", filtered.sublevel_homology(&at, k))
                            .unwrap();
                    }
                    Ok(out)
                }
                OutputFormat::Structured => {
                    let groups: Vec<Value> = degrees
                        .iter()
                        .map(|&k| {
                            let mut obj = Map::new();
                            obj.insert("degree".into(), Value::Number(k.into()));
                            obj.insert(
                                "group".into(),
                                io::homology_group_to_value(&filtered.sublevel_homology(&at, k)),
                            );
                            Value::Object(obj)
                        })
                        .collect();
                    let mut root = Map::new();
                    root.insert("level".into(), Value::String(at.to_string()));
                    root.insert("homology".into(), Value::Array(groups));
                    Ok(io::to_pretty_string(&Value::Object(root)))
                }
            }
        }
        (None, Some(endpoints)) => {
            let a = parse_level(&endpoints[0])?;
            let b = parse_level(&endpoints[1])?;
            let report = filtered.interval_invariants(&a, &b)?;
            match format {
                OutputFormat::Text => {
                    let mut out = String::new();
                    writeln!(out, "interval ({a}, {b}]:").unwrap();
                    for d in &report.degrees {
                        writeln!(
                            out,
                            "degree {}: C={} r={} t={} rank_inequality={} alternating={}",
                            d.degree,
                            d.cells,
                            d.rank,
                            d.torsion_rank,
                            pass_fail(d.rank_inequality),
                            pass_fail(d.alternating_inequality),
                        )
                        .unwrap();
                    }
                    writeln!(out, "overall: {}", pass_fail(report.pass())).unwrap();
                    Ok(out)
                }
                OutputFormat::Structured => {
                    let degrees: Vec<Value> = report
                        .degrees
                        .iter()
                        .map(|d| {
                            let mut obj = Map::new();
                            obj.insert("degree".into(), Value::Number(d.degree.into()));
                            obj.insert("cells".into(), Value::Number(d.cells.into()));
                            obj.insert("rank".into(), Value::Number(d.rank.into()));
                            obj.insert(
                                "torsion_rank".into(),
                                Value::Number(d.torsion_rank.into()),
                            );
                            obj.insert("rank_inequality".into(), d.rank_inequality.into());
                            obj.insert(
                                "alternating_inequality".into(),
                                d.alternating_inequality.into(),
                            );
                            Value::Object(obj)
                        })
                        .collect();
                    let mut root = Map::new();
                    root.insert("a".into(), Value::String(a.to_string()));
                    root.insert("b".into(), Value::String(b.to_string()));
                    root.insert("degrees".into(), Value::Array(degrees));
                    root.insert("pass".into(), report.pass().into());
                    Ok(io::to_pretty_string(&Value::Object(root)))
                }
            }
        }
        _ => Err(Failure::input(
            "filtration requires exactly one of --level or --interval".to_string(),
        )),
    }
}

fn run_perturb(
    file: &std::path::Path,
    level: &str,
    index: usize,
    count: usize,
    mode: PerturbMode,
    format: OutputFormat,
) -> Result<String, Failure> {
    let filtered = load_filtered_complex(file)?;
    let at = parse_level(level)?;
    let before = filtered
        .underlying()
        .build_chain_complex()
        .map_err(Failure::from)?;
    let perturbed = filtered.perturb(&at, index, count, mode)?;
    let after = perturbed
        .underlying()
        .build_chain_complex()
        .map_err(Failure::from)?;
    match format {
        OutputFormat::Text => {
            let top = before.top_degree().max(after.top_degree());
            let row = |chain: &ChainComplex| {
                (0..=top)
                    .map(|k| chain.betti(k).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            Ok(format!(
                "betti before: {}\nbetti after: {}\n",
                row(&before),
                row(&after)
            ))
        }
        // Structured mode emits the perturbed complex itself, so the output
        // can be fed back into any other command.
        OutputFormat::Structured => Ok(io::cw_complex_to_canonical_json(perturbed.underlying())),
    }
}

fn run_nerve(
    file: &std::path::Path,
    dim: Option<usize>,
    format: OutputFormat,
) -> Result<String, Failure> {
    let cover = io::read_cover(file)?;
    let nerve = nerve_complex(&cover)?;
    let chain = nerve.chain_complex()?;
    let degrees: Vec<usize> = match dim {
        Some(k) => vec![k],
        None => (0..=chain.top_degree()).collect(),
    };
    match format {
        OutputFormat::Text => {
            let mut out = String::new();
            let counts: Vec<String> = chain
                .cell_counts()
                .iter()
                .map(|n| n.to_string())
                .collect();
            writeln!(out, "simplices per dim: {}", counts.join(" ")).unwrap();
            for &k in &degrees {
                writeln!(out, "H_{k} = {}", chain.homology(k)).unwrap();
            }
            Ok(out)
        }
        OutputFormat::Structured => {
            let groups: Vec<Value> = degrees
                .iter()
                .map(|&k| {
                    let mut obj = Map::new();
                    obj.insert("degree".into(), Value::Number(k.into()));
                    obj.insert("group".into(), io::homology_group_to_value(&chain.homology(k)));
                    Value::Object(obj)
                })
                .collect();
            let mut root = Map::new();
            root.insert(
                "vertices".into(),
                Value::Array(
                    nerve
                        .vertices()
                        .iter()
                        .map(|v| Value::String(v.clone()))
                        .collect(),
                ),
            );
            root.insert(
                "simplex_counts".into(),
                Value::Array(
                    chain
                        .cell_counts()
                        .iter()
                        .map(|&n| Value::Number(n.into()))
                        .collect(),
                ),
            );
            root.insert("homology".into(), Value::Array(groups));
            Ok(io::to_pretty_string(&Value::Object(root)))
        }
    }
}

fn parse_comma_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| Failure::input(format!("invalid {what} entry {s:?}")))
        })
        .collect()
}

fn parse_rational(text: &str) -> Result<BigRational, Failure> {
    let parse_int = |s: &str| -> Result<BigInt, Failure> {
        BigInt::from_str(s.trim())
            .map_err(|_| Failure::input(format!("invalid rational literal {text:?}")))
    };
    match text.split_once('/') {
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den == BigInt::from(0) {
                return Err(Failure::input(format!(
                    "invalid rational literal {text:?}: zero denominator"
                )));
            }
            Ok(Ratio::new(parse_int(num)?, den))
        }
        None => Ok(Ratio::from_integer(parse_int(text)?)),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_spaces(
    berger: Option<String>,
    factors: Option<String>,
    dim: Option<usize>,
    poincare: Option<String>,
    kunneth: Option<String>,
    growth: Option<String>,
    alpha: Option<String>,
    from: usize,
    format: OutputFormat,
) -> Result<String, Failure> {
    if let Some(group) = berger {
        let factor: HolonomyFactor = group.parse().map_err(Failure::from)?;
        let entry = berger_lookup(&factor)?;
        return Ok(match format {
            OutputFormat::Text => format!(
                "group: {}\ndimension: {} ({})\nstructure: {}\ndescription: {}\n",
                entry.group,
                entry.real_dimension,
                entry.dimension_formula,
                entry.g_structure,
                entry.description
            ),
            OutputFormat::Structured => {
                let mut root = Map::new();
                root.insert("group".into(), Value::String(entry.group.clone()));
                root.insert(
                    "real_dimension".into(),
                    Value::Number(entry.real_dimension.into()),
                );
                root.insert(
                    "dimension_formula".into(),
                    Value::String(entry.dimension_formula.to_string()),
                );
                root.insert(
                    "g_structure".into(),
                    Value::String(entry.g_structure.to_string()),
                );
                root.insert(
                    "description".into(),
                    Value::String(entry.description.to_string()),
                );
                io::to_pretty_string(&Value::Object(root))
            }
        });
    }
    if let Some(list) = factors {
        let total = dim.expect("clap enforces --dim with --factors");
        let factors: Vec<HolonomyFactor> = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<HolonomyFactor>().map_err(Failure::from))
            .collect::<Result<_, _>>()?;
        let report = decompose_holonomy(&factors, total)?;
        return Ok(match format {
            OutputFormat::Text => {
                let validity = if report.reducible_valid {
                    format!("VALID ({} factors)", report.factors.len())
                } else {
                    format!("INVALID ({} factor)", report.factors.len())
                };
                let generators = match report.two_generators {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "not asserted",
                };
                format!(
                    "factors: {}\ntotal dimension: {}\nreducible decomposition: {}\ntwo cohomology generators: {}\n",
                    report.product, report.total_dimension, validity, generators
                )
            }
            OutputFormat::Structured => {
                let mut root = Map::new();
                root.insert("product".into(), Value::String(report.product.clone()));
                root.insert(
                    "total_dimension".into(),
                    Value::Number(report.total_dimension.into()),
                );
                root.insert("reducible_valid".into(), report.reducible_valid.into());
                root.insert(
                    "two_generators".into(),
                    match report.two_generators {
                        Some(b) => Value::Bool(b),
                        None => Value::Null,
                    },
                );
                io::to_pretty_string(&Value::Object(root))
            }
        });
    }
    if let Some(label) = poincare {
        let space: SymmetricSpace = label.parse().map_err(Failure::from)?;
        let p = space.poincare_polynomial();
        return Ok(match format {
            OutputFormat::Text => format!("P(t) = {p}\nsparse: {}\n", p.sparse_pairs()),
            OutputFormat::Structured => {
                let mut root = Map::new();
                root.insert("space".into(), Value::String(space.to_string()));
                root.insert("terms".into(), poly_to_value(&p));
                io::to_pretty_string(&Value::Object(root))
            }
        });
    }
    if let Some(labels) = kunneth {
        let polys: Vec<_> = labels
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<SymmetricSpace>()
                    .map(|space| space.poincare_polynomial())
                    .map_err(Failure::from)
            })
            .collect::<Result<_, _>>()?;
        if polys.is_empty() {
            return Err(Failure::input("kunneth requires at least one label"));
        }
        let p = kunneth_poincare(&polys);
        return Ok(match format {
            OutputFormat::Text => format!("P(t) = {p}\nsparse: {}\n", p.sparse_pairs()),
            OutputFormat::Structured => {
                let mut root = Map::new();
                root.insert("terms".into(), poly_to_value(&p));
                io::to_pretty_string(&Value::Object(root))
            }
        });
    }
    if let Some(dims_text) = growth {
        let dims: Vec<u64> = parse_comma_list(&dims_text, "dimension")?;
        let alpha = parse_rational(&alpha.expect("clap enforces --alpha with --growth"))?;
        let report = classify_growth(&dims, &alpha, from)?;
        return Ok(match format {
            OutputFormat::Text => match report.first_violation {
                None => "growth: HOLDS\n".to_string(),
                Some(n) => format!("growth: FAILS at n = {n}\n"),
            },
            OutputFormat::Structured => {
                let mut root = Map::new();
                root.insert("holds".into(), report.holds.into());
                root.insert(
                    "first_violation".into(),
                    match report.first_violation {
                        Some(n) => Value::Number(n.into()),
                        None => Value::Null,
                    },
                );
                io::to_pretty_string(&Value::Object(root))
            }
        });
    }
    Err(Failure::input(
        "spaces requires one of --berger, --factors, --poincare, --kunneth, or --growth",
    ))
}

fn run_analyze(
    index_seq: Option<String>,
    base: Option<u64>,
    nullity_seq: Option<String>,
    format: OutputFormat,
) -> Result<String, Failure> {
    if let Some(seq_text) = index_seq {
        let seq: Vec<u64> = parse_comma_list(&seq_text, "index")?;
        if seq.is_empty() {
            return Err(Failure::input("index sequence must be nonempty"));
        }
        let base = base.expect("clap enforces --base with --index-seq");
        let report = analyze_index_sequence(&seq, base);
        return Ok(match format {
            OutputFormat::Text => {
                let epsilon = match (&report.epsilon, &report.epsilon_witness) {
                    (Some(e), Some((m, s))) => format!("{e} at (m,s) = ({m},{s})"),
                    _ => "undefined (window has no pairs)".to_string(),
                };
                format!(
                    "exactly linear: {}\nepsilon: {}\nall zero: {}\n",
                    yes_no(report.exactly_linear),
                    epsilon,
                    yes_no(report.all_zero)
                )
            }
            OutputFormat::Structured => {
                let mut root = Map::new();
                root.insert("exactly_linear".into(), report.exactly_linear.into());
                root.insert(
                    "epsilon".into(),
                    match &report.epsilon {
                        Some(e) => Value::String(e.to_string()),
                        None => Value::Null,
                    },
                );
                root.insert(
                    "epsilon_witness".into(),
                    match report.epsilon_witness {
                        Some((m, s)) => Value::Array(vec![
                            Value::Number(m.into()),
                            Value::Number(s.into()),
                        ]),
                        None => Value::Null,
                    },
                );
                root.insert("all_zero".into(), report.all_zero.into());
                io::to_pretty_string(&Value::Object(root))
            }
        });
    }
    if let Some(seq_text) = nullity_seq {
        let seq: Vec<u64> = parse_comma_list(&seq_text, "nullity")?;
        if seq.is_empty() {
            return Err(Failure::input("nullity sequence must be nonempty"));
        }
        let report = analyze_nullity_sequence(&seq)?;
        return Ok(match format {
            OutputFormat::Text => {
                let values: Vec<String> = report
                    .first_occurrences
                    .iter()
                    .map(|(v, pos)| format!("{v}@{pos}"))
                    .collect();
                let consistency = match report.first_violation {
                    None => yes_no(true).to_string(),
                    Some(m) => format!("no (first violation at position {m})"),
                };
                format!(
                    "constant one: {}\nvalues: {}\ndivisibility consistent: {}\n",
                    yes_no(report.constant_one),
                    values.join(" "),
                    consistency
                )
            }
            OutputFormat::Structured => {
                let mut root = Map::new();
                root.insert("constant_one".into(), report.constant_one.into());
                root.insert(
                    "first_occurrences".into(),
                    Value::Array(
                        report
                            .first_occurrences
                            .iter()
                            .map(|&(v, pos)| {
                                Value::Array(vec![
                                    Value::Number(v.into()),
                                    Value::Number(pos.into()),
                                ])
                            })
                            .collect(),
                    ),
                );
                root.insert(
                    "divisibility_consistent".into(),
                    report.divisibility_consistent.into(),
                );
                root.insert(
                    "first_violation".into(),
                    match report.first_violation {
                        Some(m) => Value::Number(m.into()),
                        None => Value::Null,
                    },
                );
                io::to_pretty_string(&Value::Object(root))
            }
        });
    }
    Err(Failure::input(
        "analyze requires --index-seq (with --base) or --nullity-seq",
    ))
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
