//! Command-line front end. Every command prints one JSON document (or the
//! same data flattened to TSV) and exits with
//!
//! * `0` when every check passes,
//! * `2` on usage or input validation errors,
//! * `3` when a mathematical check fails; the output then names a witness.
//!
//! Output depends only on the arguments and the seed.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cdalgebra::{
    cd_multiply, find_zero_divisors, norm_multiplicativity_check, CdAlgebra, CdElement,
    CounterexampleSource, SearchStrategy,
};
use crate::error::Error;
use crate::exactcore::{format_rational, format_vector, parse_rational, GaussianRational, Mcg64, Rational};
use crate::frobenius::{admissible_dimensions, factorization_argument_check, full_pipeline_report};
use crate::hopf::{self, HopfSample};
use crate::ktheory::{k0_cp, k0_rp_with_method, k1_cp, k1_rp_with_method, KGroup, Method};
use crate::stiefel::{
    basis_pair_zero_divisor, frame_det_unnormalized, normalize_right_identity, verify_frames,
    MultiplicationTable,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "divalg", version, about = "Exact checks around real division algebras")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every command.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Seed for the sampling generator.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Number of random samples for sampled checks.
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// K-group of a real or complex projective space.
    Kgroup {
        #[arg(value_enum)]
        space: Space,
        index: usize,
        degree: u8,
    },
    /// Cayley-Dickson algebra computations.
    Algebra {
        #[command(subcommand)]
        action: AlgebraCommand,
    },
    /// Frame checks for a multiplication table.
    Stiefel {
        /// Use the Cayley-Dickson algebra of this level.
        #[arg(long, conflicts_with = "table", required_unless_present = "table")]
        level: Option<u32>,
        /// JSON multiplication table `{"n": .., "c": [[["p/q", ..]]]}`.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Also look for a basis-pair zero divisor and test the frame at it.
        #[arg(long)]
        cross_check: bool,
        #[arg(long)]
        allow_high_level: bool,
    },
    /// Checks of the map from RP^{2n+1} to the sphere bundle of the squared Hopf bundle.
    Hopf {
        n: usize,
        /// JSON sample file `{"samples": [{"x": [..], "w": [re, im]}]}`.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Divisibility verdicts.
    Frobenius {
        #[command(subcommand)]
        action: FrobeniusCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Rp,
    Cp,
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCommand {
    /// Product of two elements given as `e3` or comma-separated coefficients.
    Mul {
        #[arg(long)]
        level: u32,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        allow_high_level: bool,
    },
    /// Search for exact zero divisors.
    Zerodiv {
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value_t = Strategy::BasisPairs)]
        strategy: Strategy,
        /// Print at most this many pairs (the count is always complete).
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        allow_high_level: bool,
    },
    /// Test norm(ab) = norm(a) norm(b) on random pairs.
    Normcheck {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        allow_high_level: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    BasisPairs,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum FrobeniusCommand {
    /// Admissible dimensions up to a bound.
    Scan { max: u64 },
    /// Verdict for one dimension.
    Single { n: u64 },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    body: Value,
}

impl Report {
    fn ok(body: Value) -> Self {
        Self { code: EXIT_OK, body }
    }

    fn checked(passed: bool, body: Value) -> Self {
        Self {
            code: if passed { EXIT_OK } else { EXIT_CHECK_FAILED },
            body,
        }
    }
}

/// Failure before a report exists.
enum Failure {
    Usage(String),
    Check(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let config = cli.config.clone();
    let (code, body) = match execute(&cli) {
        Ok(r) => (r.code, r.body),
        Err(Failure::Usage(msg)) => {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            }
        }
        Err(Failure::Check(body)) => (EXIT_CHECK_FAILED, body),
    };
    let text = render(&body, config.format);
    match &config.output {
        Some(path) => match fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}

fn render(body: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(body).expect("serializable");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let mut lines = Vec::new();
            flatten_tsv("", body, &mut lines);
            let mut s = lines.join("\n");
            s.push('\n');
            s
        }
    }
}

fn flatten_tsv(prefix: &str, v: &Value, out: &mut Vec<String>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten_tsv(&join(k), child, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let cells: Vec<String> = items.iter().map(scalar_text).collect();
            out.push(format!("{prefix}\t{}", cells.join(",")));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten_tsv(&join(&i.to_string()), child, out);
            }
        }
        other => out.push(format!("{prefix}\t{}", scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Kgroup { space, index, degree } => cmd_kgroup(*space, *index, *degree),
        Command::Algebra { action } => cmd_algebra(action, cfg),
        Command::Stiefel {
            level,
            table,
            cross_check,
            allow_high_level,
        } => cmd_stiefel(*level, table.as_ref(), *cross_check, *allow_high_level, cfg),
        Command::Hopf { n, input } => cmd_hopf(*n, input.as_ref(), cfg),
        Command::Frobenius { action } => cmd_frobenius(action, cfg),
    }
}

fn group_json(g: &KGroup) -> Value {
    json!({
        "group": g.group,
        "method": g.method,
        "display": g.group.to_string(),
    })
}

fn cmd_kgroup(space: Space, index: usize, degree: u8) -> Result<Report, Failure> {
    let g = match (space, degree) {
        (Space::Rp, 0) => k0_rp_with_method(index)?,
        (Space::Rp, 1) => k1_rp_with_method(index)?,
        (Space::Cp, 0) => KGroup { group: k0_cp(index), method: Method::LemmaPresentation },
        (Space::Cp, 1) => KGroup { group: k1_cp(index), method: Method::LemmaPresentation },
        (_, d) => return Err(Failure::Usage(format!("degree must be 0 or 1, got {d}"))),
    };
    Ok(Report::ok(group_json(&g)))
}

fn algebra(level: u32, allow_high: bool) -> Result<CdAlgebra, Failure> {
    Ok(if allow_high {
        CdAlgebra::new_uncapped(level)?
    } else {
        CdAlgebra::new(level)?
    })
}

/// `e3`, `-e3`, or comma-separated coefficients.
fn parse_element(alg: CdAlgebra, text: &str) -> Result<CdElement, Failure> {
    let t = text.trim();
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) if r.starts_with('e') => (-1, r),
        _ => (1, t),
    };
    if let Some(idx) = rest.strip_prefix('e') {
        let i: usize = idx
            .parse()
            .map_err(|_| Failure::Usage(format!("bad basis element {text:?}")))?;
        if i >= alg.dim() {
            return Err(Failure::Usage(format!("e{i} is outside dimension {}", alg.dim())));
        }
        return Ok(alg.basis(i).scale(&Rational::from_integer(sign.into())));
    }
    let coeffs = t
        .split(',')
        .map(parse_rational)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(alg.element(coeffs)?)
}

fn cmd_algebra(action: &AlgebraCommand, cfg: &RunConfig) -> Result<Report, Failure> {
    match action {
        AlgebraCommand::Mul { level, a, b, allow_high_level } => {
            let alg = algebra(*level, *allow_high_level)?;
            let (x, y) = (parse_element(alg, a)?, parse_element(alg, b)?);
            let p = cd_multiply(&x, &y)?;
            Ok(Report::ok(json!({
                "level": level,
                "a": x.to_strings(),
                "b": y.to_strings(),
                "product": p.to_strings(),
            })))
        }
        AlgebraCommand::Zerodiv { level, strategy, limit, allow_high_level } => {
            let alg = algebra(*level, *allow_high_level)?;
            let strat = match strategy {
                Strategy::BasisPairs => SearchStrategy::BasisPairs,
                Strategy::Random => SearchStrategy::Random {
                    samples: cfg.samples as usize,
                    seed: cfg.seed,
                },
            };
            let found = find_zero_divisors(alg, strat);
            let shown = limit.unwrap_or(found.len()).min(found.len());
            let pairs: Vec<Value> = found[..shown]
                .iter()
                .map(|zd| {
                    let mut v = json!({ "a": zd.a.to_strings(), "b": zd.b.to_strings() });
                    if let Some((la, lb)) = zd.labels {
                        v["a_label"] = json!(la.to_string());
                        v["b_label"] = json!(lb.to_string());
                    }
                    v
                })
                .collect();
            Ok(Report::ok(json!({
                "level": level,
                "strategy": match strategy { Strategy::BasisPairs => "basis-pairs", Strategy::Random => "random" },
                "count": found.len(),
                "pairs": pairs,
            })))
        }
        AlgebraCommand::Normcheck { level, allow_high_level } => {
            let alg = algebra(*level, *allow_high_level)?;
            let r = norm_multiplicativity_check(alg, cfg.samples as usize, cfg.seed);
            let cx = r.counterexample.as_ref().map(|c| {
                json!({
                    "a": c.a.to_strings(),
                    "b": c.b.to_strings(),
                    "norm_of_product": format_rational(&c.norm_product),
                    "product_of_norms": format_rational(&c.product_of_norms),
                    "source": match c.source {
                        CounterexampleSource::RandomSample => "random-sample",
                        CounterexampleSource::BasisPairScan => "basis-pair-scan",
                    },
                })
            });
            Ok(Report::checked(
                r.passed,
                json!({
                    "level": level,
                    "samples_checked": r.samples_checked,
                    "passed": r.passed,
                    "counterexample": cx,
                }),
            ))
        }
    }
}

fn cmd_stiefel(
    level: Option<u32>,
    table_path: Option<&PathBuf>,
    cross_check: bool,
    allow_high: bool,
    cfg: &RunConfig,
) -> Result<Report, Failure> {
    let table = match (level, table_path) {
        (Some(l), _) => MultiplicationTable::from_algebra(algebra(l, allow_high)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            MultiplicationTable::from_json(&text)?
        }
        (None, None) => return Err(Failure::Usage("pass --level or --table".into())),
    };
    let spot = cfg.samples as usize;
    if let Some((a, b)) = table.zero_divisor_spot_check(spot, cfg.seed) {
        return Err(Failure::Check(json!({
            "n": table.n(),
            "error": "zero divisor found by spot check",
            "a": format_vector(&a),
            "b": format_vector(&b),
        })));
    }
    let normalized = match normalize_right_identity(&table) {
        Ok(t) => t,
        Err(Error::SingularNormalization { witness }) => {
            return Err(Failure::Check(json!({
                "n": table.n(),
                "error": "right multiplication by e1 is singular",
                "kernel_element": format_vector(&witness),
            })))
        }
        Err(e) => return Err(e.into()),
    };
    let r = verify_frames(&normalized, cfg.samples as usize, cfg.seed)?;
    let mut body = json!({
        "n": r.n,
        "samples": r.samples,
        "nonzero_determinants": r.nonzero_dets,
        "full_rank_sections": r.full_rank_sections,
        "orthogonal_sections": r.orthogonal_sections,
        "homogeneous": r.homogeneous,
        "first_failure": r.first_failure.as_ref().map(|x| format_vector(x)),
    });
    let mut passed = r.passed();
    if cross_check {
        let cc = match basis_pair_zero_divisor(&normalized) {
            Some((a, b)) => {
                let det = frame_det_unnormalized(&normalized, &a)?;
                let degenerate = det.is_zero();
                passed &= !degenerate;
                json!({
                    "zero_divisor_found": true,
                    "a": format_vector(&a),
                    "b": format_vector(&b),
                    "frame_determinant_at_a": format_rational(&det),
                    "frame_degenerate": degenerate,
                })
            }
            None => json!({ "zero_divisor_found": false }),
        };
        body["cross_check"] = cc;
    }
    Ok(Report::checked(passed, body))
}

#[derive(Deserialize)]
struct HopfInput {
    samples: Vec<HopfInputSample>,
}

#[derive(Deserialize)]
struct HopfInputSample {
    x: Vec<String>,
    w: [String; 2],
    w2: Option<[String; 2]>,
    lambda: Option<[String; 2]>,
}

fn parse_gaussian(pair: &[String; 2]) -> Result<GaussianRational, Error> {
    Ok(GaussianRational::new(parse_rational(&pair[0])?, parse_rational(&pair[1])?))
}

fn load_hopf_samples(n: usize, path: &PathBuf, seed: u64) -> Result<Vec<HopfSample>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: HopfInput = serde_json::from_str(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut rng = Mcg64::new(seed);
    let mut unit = |given: &Option<[String; 2]>| -> Result<GaussianRational, Error> {
        match given {
            Some(p) => parse_gaussian(p),
            None => Ok(crate::exactcore::unit_circle_rational(&rng.rational(9, 9))),
        }
    };
    let mut out = Vec::new();
    for s in &doc.samples {
        let x = s.x.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>, _>>()?;
        if x.len() != 2 * n + 2 {
            return Err(Failure::Usage(format!(
                "sample has {} coordinates, expected {}",
                x.len(),
                2 * n + 2
            )));
        }
        if !crate::exactcore::norm_sq(&x).is_one() {
            return Err(Error::NotUnit("x").into());
        }
        let w1 = parse_gaussian(&s.w)?;
        let w2 = unit(&s.w2)?;
        let lambda = unit(&s.lambda)?;
        for (name, q) in [("w", &w1), ("w2", &w2), ("lambda", &lambda)] {
            if !q.is_unit() {
                return Err(Failure::Usage(format!("{name} is not a unit complex number")));
            }
        }
        out.push(HopfSample { x, w1, w2, lambda });
    }
    Ok(out)
}

fn cmd_hopf(n: usize, input: Option<&PathBuf>, cfg: &RunConfig) -> Result<Report, Failure> {
    let samples = match input {
        Some(path) => load_hopf_samples(n, path, cfg.seed)?,
        None => hopf::sample_configurations(n, cfg.samples as usize, cfg.seed),
    };
    match hopf::verify_samples(n, &samples) {
        Ok(r) => {
            let passed = r.passed();
            Ok(Report::checked(passed, serde_json::to_value(&r).expect("serializable")))
        }
        Err(Error::InconsistentExponent) => Err(Failure::Check(json!({
            "n": n,
            "error": "equivariance exponent is not uniform across samples",
        }))),
        Err(e) => Err(e.into()),
    }
}

fn cmd_frobenius(action: &FrobeniusCommand, cfg: &RunConfig) -> Result<Report, Failure> {
    match action {
        FrobeniusCommand::Scan { max } => {
            if *max == 0 {
                return Err(Failure::Usage("scan bound must be at least 1".into()));
            }
            let found = admissible_dimensions(*max);
            let expected: Vec<u64> = [1, 2, 4, 8].into_iter().filter(|n| n <= max).collect();
            let factorization = factorization_argument_check(*max);
            let passed = found == expected && factorization;
            Ok(Report::checked(
                passed,
                json!({
                    "max": max,
                    "admissible": found,
                    "expected": expected,
                    "matches_expected": found == expected,
                    "factorization_check": factorization,
                }),
            ))
        }
        FrobeniusCommand::Single { n } => {
            let v = full_pipeline_report(*n, cfg.seed)?;
            Ok(Report::ok(serde_json::to_value(&v).expect("serializable")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("divalg").chain(args.iter().copied()))
    }

    fn json_out(args: &[&str]) -> (i32, Value) {
        let o = run_args(args);
        let v = serde_json::from_str(&o.stdout).unwrap_or_else(|_| panic!("not json: {o:?}"));
        (o.code, v)
    }

    #[test]
    fn kgroup_examples() {
        let (code, v) = json_out(&["kgroup", "rp", "7", "0"]);
        assert_eq!(code, 0);
        assert_eq!(v["group"], json!({"free_rank": 1, "torsion": [8]}));
        assert_eq!(v["method"], "snf-cokernel");
        let (_, v) = json_out(&["kgroup", "cp", "3", "1"]);
        assert_eq!(v["group"], json!({"free_rank": 0, "torsion": []}));
        let (_, v) = json_out(&["kgroup", "rp", "4", "1"]);
        assert_eq!(v["group"], json!({"free_rank": 0, "torsion": []}));
        assert_eq!(run_args(&["kgroup", "rp", "0", "0"]).code, 2);
        assert_eq!(run_args(&["kgroup", "sp", "1", "0"]).code, 2);
        assert_eq!(run_args(&["kgroup", "rp", "3", "2"]).code, 2);
    }

    #[test]
    fn algebra_examples() {
        let (code, v) = json_out(&["algebra", "mul", "--level", "2", "e1", "e2"]);
        assert_eq!(code, 0);
        assert_eq!(v["product"], json!(["0/1", "0/1", "0/1", "1/1"]));
        let (_, v) = json_out(&["algebra", "mul", "--level", "1", "1/2,1", "-e1"]);
        assert_eq!(v["product"], json!(["1/1", "-1/2"]));
        assert_eq!(run_args(&["algebra", "mul", "--level", "2", "1,2", "e1"]).code, 2);
        assert_eq!(run_args(&["algebra", "mul", "--level", "2", "e4", "e1"]).code, 2);
        assert_eq!(run_args(&["algebra", "mul", "--level", "9", "e0", "e0"]).code, 2);
        let (code, v) = json_out(&["algebra", "zerodiv", "--level", "3"]);
        assert_eq!((code, v["count"].clone()), (0, json!(0)));
        let (code, v) = json_out(&["algebra", "zerodiv", "--level", "4", "--limit", "2"]);
        assert_eq!(code, 0);
        assert_eq!(v["count"], json!(336));
        assert_eq!(v["pairs"].as_array().unwrap().len(), 2);
        assert_eq!(v["pairs"][0]["a_label"], "e1+e10");
    }

    #[test]
    fn normcheck_exit_codes() {
        assert_eq!(run_args(&["--samples", "50", "algebra", "normcheck", "--level", "3"]).code, 0);
        let (code, v) = json_out(&["algebra", "normcheck", "--level", "4", "--samples", "50"]);
        assert_eq!(code, 3);
        assert_eq!(v["passed"], json!(false));
        assert!(v["counterexample"].is_object());
    }

    #[test]
    fn tsv_rendering() {
        let o = run_args(&["--format", "tsv", "kgroup", "rp", "5", "0"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("group.free_rank\t1\n"));
        assert!(o.stdout.contains("group.torsion\t4\n"));
        assert!(o.stdout.contains("method\tsnf-cokernel\n"));
    }

    #[test]
    fn help_is_not_an_error() {
        let o = run_args(&["--help"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("kgroup"));
    }
}
