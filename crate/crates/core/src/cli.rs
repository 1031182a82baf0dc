//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::distribution::Distribution;
use crate::error::Error;
use crate::format::{self, Analysis, InstanceFile, Mode};
use crate::fuzz::{self, FuzzConfig, Suite};
use crate::oracle::{self, Instance, OracleVerdict};
use crate::rational::{parse_rational, Rational};
use crate::titchmarsh::{lemma_alpha, Engine, Mutation, ReflectionMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "circle-titchmarsh", version, about = "Exact support analysis for convolutions of point distributions on the circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct Common {
    /// Fourier modes |m| <= M checked by the oracle.
    #[arg(long, default_value_t = oracle::DEFAULT_M_MAX)]
    m_max: u32,
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convolve the distributions in the given files.
    Convolve {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the pair, reflection, power or lemma analysis.
    Analyze {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        p: Option<u32>,
        /// Certificates for this λ (turns, at most the maximal one).
        #[arg(long, value_parser = parse_lambda)]
        lambda: Option<Rational>,
        /// Use the conjugated reflection in the reflection analysis.
        #[arg(long)]
        conjugate: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded randomized falsification run.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Instances per suite and parameter (default: per-suite sizes).
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<u32>>,
        #[arg(long, default_value_t = 8)]
        max_points: usize,
        #[arg(long, default_value_t = 3)]
        max_order: u32,
        /// Fraction of symmetry-seeded pairs.
        #[arg(long, default_value_t = 0.5)]
        mix: f64,
        #[arg(long = "suite", value_parser = parse_suite)]
        suites: Vec<Suite>,
        /// Where to write the shrunken counterexample on failure.
        #[arg(long, default_value = "counterexample.json")]
        counterexample: PathBuf,
        #[arg(long, hide = true)]
        mutate: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Worked examples and a short fuzz run.
    Selftest {
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn parse_lambda(s: &str) -> Result<Rational, String> {
    parse_rational(s)
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Hypothesis(_) | Error::ZeroDistribution => EXIT_HYPOTHESIS,
        Error::TheoremViolation(_) => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, output: &Option<PathBuf>, text: &str) -> Result<(), i32> {
        match output {
            Some(path) => std::fs::write(path, text).map_err(|e| {
                let _ = writeln!(self.err, "error: cannot write {}: {e}", path.display());
                EXIT_INPUT
            }),
            None => {
                let _ = self.out.write_all(text.as_bytes());
                Ok(())
            }
        }
    }

    fn fail(&mut self, format: OutputFormat, e: &Error) -> i32 {
        let code = exit_code(e);
        let _ = writeln!(self.err, "error: {e}");
        if format == OutputFormat::Json {
            let kind = match code {
                EXIT_HYPOTHESIS => "hypothesis",
                EXIT_VIOLATION => "theorem-violation",
                _ => "input",
            };
            let v = json!({"error": {"kind": kind, "message": e.to_string()}});
            let _ = self.out.write_all(format::to_canonical_string(&v).as_bytes());
        }
        code
    }
}

fn load(paths: &[PathBuf]) -> Result<InstanceFile, Error> {
    let mut merged = InstanceFile::default();
    for path in paths {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let file = format::parse_instance(&text)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        merged.distributions.extend(file.distributions);
        merged.components = file.components.or(merged.components);
        merged.arc = file.arc.or(merged.arc);
        merged.n = file.n.or(merged.n);
        merged.p = file.p.or(merged.p);
        merged.mode = file.mode.or(merged.mode);
        merged.lambda = file.lambda.or(merged.lambda);
        merged.conjugate = file.conjugate.or(merged.conjugate);
    }
    Ok(merged)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let mut io = Io { out, err };
    match cli.command {
        Command::Convolve { paths, common } => convolve(&mut io, &paths, &common),
        Command::Analyze {
            paths,
            mode,
            n,
            p,
            lambda,
            conjugate,
            common,
        } => {
            let file = match load(&paths) {
                Ok(f) => f,
                Err(e) => return io.fail(common.format, &e),
            };
            let request = Request {
                mode,
                n,
                p,
                lambda,
                conjugate,
            };
            analyze(&mut io, file, request, &common)
        }
        Command::Fuzz {
            seed,
            count,
            n_list,
            max_points,
            max_order,
            mix,
            suites,
            counterexample,
            mutate,
            common,
        } => {
            let config = FuzzConfig {
                seed,
                count,
                n_list,
                max_points,
                max_order,
                mix,
                m_max: common.m_max,
                suites: if suites.is_empty() { Suite::ALL.to_vec() } else { suites },
                engine: if mutate {
                    Engine::with_mutation(Mutation::SymmetrizeSignFlip)
                } else {
                    Engine::default()
                },
            };
            run_fuzz(&mut io, &config, &counterexample, &common)
        }
        Command::Selftest { format } => selftest(&mut io, format),
    }
}

fn convolve(io: &mut Io, paths: &[PathBuf], common: &Common) -> i32 {
    let file = match load(paths) {
        Ok(f) => f,
        Err(e) => return io.fail(common.format, &e),
    };
    if file.distributions.is_empty() {
        return io.fail(common.format, &Error::Input("no distributions given".into()));
    }
    let mut acc = file.distributions[0].clone();
    for g in &file.distributions[1..] {
        let verdict = oracle::check_convolution(&acc, g, common.m_max);
        if !verdict.passed {
            let _ = writeln!(io.err, "oracle failure: {}", verdict.counterexample.unwrap_or_default());
            return EXIT_VIOLATION;
        }
        acc = acc.convolve(g);
    }
    let text = match (common.format, &common.output) {
        (_, Some(_)) | (OutputFormat::Json, None) => format::write_distribution(&acc),
        (OutputFormat::Text, None) => format!("{acc}\n"),
    };
    match io.emit(&common.output, &text) {
        Ok(()) => EXIT_OK,
        Err(code) => code,
    }
}

struct Request {
    mode: Option<Mode>,
    n: Option<u32>,
    p: Option<u32>,
    lambda: Option<Rational>,
    conjugate: bool,
}

fn need_one(file: &InstanceFile, mode: Mode) -> Result<Distribution, Error> {
    match file.distributions.as_slice() {
        [f] => Ok(f.clone()),
        ds => Err(Error::Input(format!("{mode} analysis takes one distribution, got {}", ds.len()))),
    }
}

fn analyze(io: &mut Io, file: InstanceFile, req: Request, common: &Common) -> i32 {
    let mode = req.mode.or(file.mode).unwrap_or(match (&file.components, file.distributions.len()) {
        (Some(_), _) => Mode::Lemma,
        (None, 1) => Mode::Reflection,
        _ => Mode::Pair,
    });
    let engine = Engine::default();
    let n = req.n.or(file.n).unwrap_or(2);
    let result = (|| -> Result<(Analysis, Vec<OracleVerdict>), Error> {
        match mode {
            Mode::Pair => {
                let [f, g] = file.distributions.as_slice() else {
                    return Err(Error::Input(format!(
                        "pair analysis takes two distributions, got {}",
                        file.distributions.len()
                    )));
                };
                let lambda = req.lambda.clone().or(file.lambda.clone());
                let report = engine.analyze_pair(f, g, n, lambda.as_ref())?;
                let corollary = if n == 2 { Some(engine.check_corollary_n2(f, g)?) } else { None };
                let instance = Instance::Pair {
                    f: f.clone(),
                    g: g.clone(),
                    n,
                };
                let oracle = vec![
                    oracle::check_convolution(f, g, common.m_max),
                    oracle::check_support_theorems(&instance),
                ];
                let convolution = f.convolve(g);
                Ok((
                    Analysis::Pair {
                        report,
                        convolution,
                        corollary,
                    },
                    oracle,
                ))
            }
            Mode::Reflection => {
                let f = need_one(&file, mode)?;
                let reflection = if req.conjugate || file.conjugate == Some(true) {
                    ReflectionMode::Conjugate
                } else {
                    ReflectionMode::Plain
                };
                let outcome = engine.analyze_reflection(&f, reflection)?;
                let sharp = match reflection {
                    ReflectionMode::Plain => f.reflect(),
                    ReflectionMode::Conjugate => f.reflect_conj(),
                };
                let instance = Instance::Reflection { f: f.clone(), mode: reflection };
                let oracle = vec![
                    oracle::check_convolution(&f, &sharp, common.m_max),
                    oracle::check_support_theorems(&instance),
                ];
                Ok((Analysis::Reflection { mode: reflection, outcome }, oracle))
            }
            Mode::Power => {
                let f = need_one(&file, mode)?;
                let p = req
                    .p
                    .or(file.p)
                    .ok_or_else(|| Error::Input("power analysis needs --p".into()))?;
                let report = engine.analyze_power(&f, n, p)?;
                let rest = f.convolve_power(p.saturating_sub(1).max(1))?;
                let instance = Instance::Power { f: f.clone(), n, p };
                let oracle = vec![
                    oracle::check_convolution(&f, &rest, common.m_max),
                    oracle::check_support_theorems(&instance),
                ];
                Ok((Analysis::Power(report), oracle))
            }
            Mode::Lemma => {
                let components = file
                    .components
                    .clone()
                    .ok_or_else(|| Error::Input("lemma analysis needs \"components\"".into()))?;
                let arc = file
                    .arc
                    .clone()
                    .ok_or_else(|| Error::Input("lemma analysis needs \"arc\"".into()))?;
                let n = req.n.or(file.n).unwrap_or(components.len() as u32);
                let root = lemma_alpha(&components, &arc, n)?;
                let mut combined = Distribution::zero();
                let mut weight = crate::cyclotomic::CycloNumber::one(1);
                for c in &components {
                    combined = combined.add(&c.scale(&weight));
                    weight = &weight * &root.value;
                }
                let instance = Instance::Lemma { components, arc, n };
                let oracle = vec![oracle::check_support_theorems(&instance)];
                Ok((Analysis::Lemma { n, root, combined }, oracle))
            }
        }
    })();
    let (analysis, verdicts) = match result {
        Ok(x) => x,
        Err(e) => return io.fail(common.format, &e),
    };
    let report_json = format::to_canonical_string(&format::analysis_json(&analysis, &verdicts));
    let shown = match common.format {
        OutputFormat::Json => report_json.clone(),
        OutputFormat::Text => format::analysis_text(&analysis, &verdicts),
    };
    if let Some(path) = &common.output {
        if let Err(code) = io.emit(&Some(path.clone()), &report_json) {
            return code;
        }
    }
    let _ = io.out.write_all(shown.as_bytes());
    if verdicts.iter().all(|v| v.passed) {
        EXIT_OK
    } else {
        let _ = writeln!(io.err, "error: oracle disagreement");
        EXIT_VIOLATION
    }
}

fn run_fuzz(io: &mut Io, config: &FuzzConfig, counterexample: &Path, common: &Common) -> i32 {
    let report = fuzz::run(config);
    let shown = match common.format {
        OutputFormat::Text => report.log.clone(),
        OutputFormat::Json => format::to_canonical_string(&format::fuzz_json(&report, config.seed)),
    };
    if let Err(code) = io.emit(&common.output, &shown) {
        return code;
    }
    if report.passed() {
        return EXIT_OK;
    }
    let first = &report.failures[0];
    let instance = first.shrunk.as_ref().unwrap_or(&first.trial.instance);
    let text = format::to_canonical_string(&format::instance_json(instance));
    match std::fs::write(counterexample, text) {
        Ok(()) => {
            let _ = writeln!(io.err, "counterexample written to {}", counterexample.display());
        }
        Err(e) => {
            let _ = writeln!(io.err, "error: cannot write {}: {e}", counterexample.display());
        }
    }
    EXIT_VIOLATION
}

fn selftest(io: &mut Io, format: OutputFormat) -> i32 {
    let mut checks: Vec<(&str, bool)> = Vec::new();
    let d = |items: &[(i64, (i64, i64))]| crate::distribution::deltas(items);

    let f = d(&[(1, (0, 1)), (-1, (1, 2))]);
    let g = d(&[(1, (0, 1)), (1, (1, 2)), (1, (1, 8)), (-1, (5, 8))]);
    let worked = crate::titchmarsh::analyze_pair(&f, &g, 2).is_ok_and(|r| {
        r.lambda == Some(crate::rational::ratio(1, 8))
            && r.alpha.as_ref().is_some_and(|a| a.exponent == 0)
            && r.beta.as_ref().is_some_and(|b| b.exponent == 1)
    });
    checks.push(("worked pair: λ = 1/8, α = 1, β = -1", worked));

    let four = d(&[(1, (1, 16)), (1, (9, 16)), (1, (15, 16)), (-1, (7, 16))]);
    let reflection = matches!(
        crate::titchmarsh::analyze_reflection(&four),
        Ok(crate::titchmarsh::ReflectionOutcome::Decomposed(ref dec))
            if dec.mu == d(&[(1, (1, 16))]) && dec.nu == d(&[(1, (15, 16))])
    );
    checks.push(("four-delta decomposition: μ = δ(1/16), ν = δ(15/16)", reflection));

    let tri = d(&[(1, (0, 1)), (1, (1, 32)), (1, (1, 2))]);
    let power = crate::titchmarsh::analyze_power(&tri, 2, 3)
        .is_ok_and(|r| r.k.inf() == &crate::rational::ratio(0, 1) && r.k.sup() == crate::rational::ratio(3, 32));
    checks.push(("trinomial cube: K = [0, 3/32]", power));

    let vandermonde = (1..=6).all(|n| {
        crate::cyclotomic::determinant(crate::titchmarsh::vandermonde_matrix(n)).is_ok_and(|det| !det.is_zero())
    });
    checks.push(("Vandermonde determinants nonzero for n <= 6", vandermonde));

    let report = fuzz::run(&FuzzConfig {
        count: Some(20),
        ..FuzzConfig::default()
    });
    checks.push(("short fuzz run, seed 1", report.passed()));

    let all = checks.iter().all(|(_, ok)| *ok);
    let shown = match format {
        OutputFormat::Text => {
            let mut s: String = checks
                .iter()
                .map(|(name, ok)| format!("{} {name}\n", if *ok { "PASS" } else { "FAIL" }))
                .collect();
            s.push_str(if all { "selftest passed\n" } else { "selftest FAILED\n" });
            s
        }
        OutputFormat::Json => {
            let items: Vec<_> = checks.iter().map(|(name, ok)| json!({"check": name, "passed": ok})).collect();
            format::to_canonical_string(&json!({"passed": all, "checks": items}))
        }
    };
    let _ = io.out.write_all(shown.as_bytes());
    if all {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}
