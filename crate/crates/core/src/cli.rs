//! Command-line front end.
//!
//! Exit codes: 0 success, 1 `check` mismatch, 2 input error (unreadable file,
//! grammar or flag errors), 3 computation error.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::algebra::{Polynomial, Rational};
use crate::grammar::{parse_grammar, to_poly_system, validate, Grammar};
use crate::groebner::CancelToken;
use crate::oracle::{self, EnumerateOptions, OracleError, WeightCounts};
use crate::solve::{self, Method, SeriesExpansion, Solution, Substitution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "growthfn",
    version,
    about = "Growth series of weighted context-free grammars"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Functional equation and closed form of the start symbol's generating function
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Print the full Gröbner basis (implies the Gröbner route)
        #[arg(long)]
        dump_basis: bool,
    },
    /// Power-series coefficients of the growth function
    Series {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Count words and derivations by brute force
    Enumerate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value_t = oracle::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Compare the solver's series against brute-force counts
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = oracle::DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Reference counts `c0,c1,...` the series must also match
        #[arg(long, value_delimiter = ',')]
        expect: Vec<num_bigint::BigInt>,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Grammar file; names of bundled corpus grammars also work
    file: String,
    /// Emit a JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct RangeArgs {
    /// Weight exponents, e.g. `x=1,y=2`; unlisted weight variables map to 1
    #[arg(long)]
    subst: Option<String>,
    /// Highest degree
    #[arg(short = 'n', default_value_t = 10)]
    n: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum MethodArg {
    Auto,
    Groebner,
    Linear,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Groebner => Method::Groebner,
            MethodArg::Linear => Method::Linear,
        }
    }
}

/// Everything one invocation produced. Reports are reproducible: the same
/// input and flags give the same report apart from `timings`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub growthfn_report: u32,
    pub command: String,
    pub input: InputInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<ResultInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckInfo>,
    pub diagnostics: Vec<String>,
    /// Milliseconds per phase.
    pub timings: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodInfo {
    pub requested: String,
    pub used: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyInfo {
    pub text: String,
    pub variables: Vec<String>,
    /// `[numerator, denominator, [exponents...]]` per term, descending.
    pub terms: Vec<(serde_json::Number, serde_json::Number, Vec<u32>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedForm {
    pub numerator: PolyInfo,
    pub denominator: PolyInfo,
    pub coprime_verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultInfo {
    pub functional_equation: PolyInfo,
    pub degree: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedForm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<PolyInfo>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesInfo {
    pub variable: String,
    pub substitution: BTreeMap<String, u32>,
    pub order: usize,
    /// Integers as JSON numbers; non-integral rationals as `"p/q"` strings.
    pub coefficients: Vec<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub degree: usize,
    pub words: u64,
    pub derivations: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleInfo {
    pub bound: usize,
    pub substitution: BTreeMap<String, u32>,
    pub words: Vec<u64>,
    pub derivations: Vec<u64>,
    pub complete: bool,
    pub ambiguity_witness: Option<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub degree: usize,
    pub solver: String,
    pub oracle: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<serde_json::Number>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckInfo {
    pub agree: bool,
    /// `"words"` when the grammar looked unambiguous, else `"derivations"`.
    pub compared: String,
    pub mismatches: Vec<Mismatch>,
}

fn number(n: &num_bigint::BigInt) -> serde_json::Number {
    n.to_string()
        .parse()
        .expect("integers are valid JSON numbers")
}

fn poly_info(p: &Polynomial) -> PolyInfo {
    let order = crate::algebra::TermOrder::block_lex(p.var_table().clone());
    PolyInfo {
        text: p.to_string(),
        variables: p.var_table().names().to_vec(),
        terms: p
            .terms_desc(&order)
            .into_iter()
            .map(|(m, c)| (number(c.numer()), number(c.denom()), m.exponents().to_vec()))
            .collect(),
    }
}

fn coefficient_value(c: &Rational) -> serde_json::Value {
    if c.is_integer() {
        serde_json::Value::Number(number(&c.to_integer()))
    } else {
        serde_json::Value::String(c.to_string())
    }
}

enum Failure {
    Input(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Compute(_) => EXIT_COMPUTE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Compute(m) => m,
        }
    }
}

struct Loaded {
    grammar: Grammar,
    info: InputInfo,
    diagnostics: Vec<String>,
}

fn load(file: &str, err: &mut dyn Write) -> Result<Loaded, Failure> {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => match crate::corpus::bundled(file) {
            Some(t) => t.to_string(),
            None => return Err(Failure::Input(format!("cannot read {file}: {e}"))),
        },
    };
    let sha256 = Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    let grammar = parse_grammar(&text).map_err(|e| Failure::Input(format!("{file}:{e}")))?;
    let diags = validate(&grammar);
    let diagnostics: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
    for d in &diagnostics {
        let _ = writeln!(err, "{file}: {d}");
    }
    if diags.iter().any(|d| d.is_error()) {
        return Err(Failure::Input(format!("{file}: grammar is not well-posed")));
    }
    Ok(Loaded {
        grammar,
        info: InputInfo {
            file: file.to_string(),
            sha256,
        },
        diagnostics,
    })
}

fn parse_subst(spec: Option<&str>, g: &Grammar) -> Result<Substitution, Failure> {
    let mut subst = solve::default_substitution(g.weight_vars());
    let Some(spec) = spec else { return Ok(subst) };
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, k) = item
            .split_once('=')
            .ok_or_else(|| Failure::Input(format!("bad --subst entry `{item}` (want var=k)")))?;
        let name = name.trim();
        if !g.weight_vars().iter().any(|w| w == name) {
            return Err(Failure::Input(format!(
                "--subst: `{name}` is not a weight variable"
            )));
        }
        let k: u32 = k
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("--subst: bad exponent in `{item}`")))?;
        subst.insert(name.to_string(), k);
    }
    Ok(subst)
}

struct Timer(BTreeMap<String, f64>);

impl Timer {
    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0
            .insert(phase.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }
}

/// Parses `args` (including the program name) and runs one command, writing
/// the report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, cancel: &CancelToken) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let json = match &cli.command {
        Command::Solve { input, .. }
        | Command::Series { input, .. }
        | Command::Enumerate { input, .. }
        | Command::Check { input, .. } => input.json,
    };
    match execute(cli.command, err, cancel) {
        Ok((report, code)) => {
            let text = if json {
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            } else {
                render_text(&report)
            };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn new_report(command: &str, loaded: &Loaded) -> RunReport {
    RunReport {
        growthfn_report: 1,
        command: command.to_string(),
        input: loaded.info.clone(),
        method: None,
        result: None,
        series: None,
        oracle: None,
        check: None,
        diagnostics: loaded.diagnostics.clone(),
        timings: BTreeMap::new(),
    }
}

fn solve_loaded(
    loaded: &Loaded,
    method: Method,
    timer: &mut Timer,
    cancel: &CancelToken,
) -> Result<Solution, Failure> {
    let system = to_poly_system(&loaded.grammar).map_err(|e| Failure::Input(e.to_string()))?;
    timer
        .time("solve", || solve::solve_system(&system, method, cancel))
        .map_err(|e| Failure::Compute(e.to_string()))
}

fn result_info(sol: &Solution, with_basis: bool) -> ResultInfo {
    ResultInfo {
        functional_equation: poly_info(sol.equation.poly()),
        degree: sol.equation.degree(),
        closed_form: sol.closed_form.as_ref().map(|rf| ClosedForm {
            numerator: poly_info(rf.numerator()),
            denominator: poly_info(rf.denominator()),
            coprime_verified: rf.coprime_verified(),
        }),
        basis: if with_basis {
            sol.basis
                .as_ref()
                .map(|b| b.generators().iter().map(poly_info).collect())
        } else {
            None
        },
    }
}

fn series_of(
    loaded: &Loaded,
    sol: &Solution,
    subst: &Substitution,
    n: usize,
    timer: &mut Timer,
) -> Result<SeriesExpansion, Failure> {
    let g = &loaded.grammar;
    let c0 = Rational::from_integer(g.weightless_derivations()[g.start()].clone());
    timer
        .time("series", || sol.series(c0, subst, n))
        .map_err(|e| Failure::Compute(e.to_string()))
}

fn series_info(s: &SeriesExpansion, subst: &Substitution) -> SeriesInfo {
    SeriesInfo {
        variable: s.variable.clone(),
        substitution: subst.clone(),
        order: s.order(),
        coefficients: s.coefficients.iter().map(coefficient_value).collect(),
    }
}

fn enumerate_loaded(
    loaded: &Loaded,
    subst: &Substitution,
    n: usize,
    budget: u64,
    timer: &mut Timer,
) -> Result<WeightCounts, Failure> {
    let opts = EnumerateOptions {
        node_budget: budget,
        from: None,
    };
    timer
        .time("enumerate", || {
            oracle::enumerate_with(&loaded.grammar, subst, n, opts)
        })
        .map_err(|e| match e {
            OracleError::Substitution(_) | OracleError::ZeroWeightTerminal(_) => {
                Failure::Input(e.to_string())
            }
            OracleError::Invalid(_) => Failure::Input(e.to_string()),
            OracleError::BudgetExceeded { .. } => Failure::Compute(e.to_string()),
        })
}

fn oracle_info(c: &WeightCounts, subst: &Substitution) -> OracleInfo {
    OracleInfo {
        bound: c.bound,
        substitution: subst.clone(),
        words: c.words.clone(),
        derivations: c.derivations.clone(),
        complete: c.is_complete(),
        ambiguity_witness: c
            .ambiguity_witness()
            .map(|(degree, words, derivations)| Witness {
                degree,
                words,
                derivations,
            }),
    }
}

fn execute(
    command: Command,
    err: &mut dyn Write,
    cancel: &CancelToken,
) -> Result<(RunReport, i32), Failure> {
    let mut timer = Timer(BTreeMap::new());
    let (mut report, code) = match command {
        Command::Solve {
            input,
            method,
            dump_basis,
        } => {
            let loaded = timer.time("parse", || load(&input.file, err))?;
            let mut method: Method = method.into();
            if dump_basis && method == Method::Auto {
                method = Method::Groebner;
            }
            if dump_basis && method == Method::Linear {
                return Err(Failure::Input(
                    "--dump-basis needs the groebner method".into(),
                ));
            }
            let sol = solve_loaded(&loaded, method, &mut timer, cancel)?;
            let mut r = new_report("solve", &loaded);
            r.method = Some(method_info(method, &sol));
            r.result = Some(result_info(&sol, dump_basis));
            (r, EXIT_OK)
        }
        Command::Series {
            input,
            range,
            method,
        } => {
            let loaded = timer.time("parse", || load(&input.file, err))?;
            let subst = parse_subst(range.subst.as_deref(), &loaded.grammar)?;
            let sol = solve_loaded(&loaded, method.into(), &mut timer, cancel)?;
            let s = series_of(&loaded, &sol, &subst, range.n, &mut timer)?;
            let mut r = new_report("series", &loaded);
            r.method = Some(method_info(method.into(), &sol));
            r.result = Some(result_info(&sol, false));
            r.series = Some(series_info(&s, &subst));
            (r, EXIT_OK)
        }
        Command::Enumerate {
            input,
            range,
            budget,
        } => {
            let loaded = timer.time("parse", || load(&input.file, err))?;
            let subst = parse_subst(range.subst.as_deref(), &loaded.grammar)?;
            let counts = enumerate_loaded(&loaded, &subst, range.n, budget, &mut timer)?;
            let mut r = new_report("enumerate", &loaded);
            if let Some((d, w, k)) = counts.ambiguity_witness() {
                let msg =
                    format!("warning: ambiguous: degree {d} has {w} words but {k} derivations");
                let _ = writeln!(err, "{}: {msg}", loaded.info.file);
                r.diagnostics.push(msg);
            }
            r.oracle = Some(oracle_info(&counts, &subst));
            (r, EXIT_OK)
        }
        Command::Check {
            input,
            range,
            method,
            budget,
            expect,
        } => {
            let loaded = timer.time("parse", || load(&input.file, err))?;
            let subst = parse_subst(range.subst.as_deref(), &loaded.grammar)?;
            let sol = solve_loaded(&loaded, method.into(), &mut timer, cancel)?;
            let s = series_of(&loaded, &sol, &subst, range.n, &mut timer)?;
            let counts = enumerate_loaded(&loaded, &subst, range.n, budget, &mut timer)?;
            let mut r = new_report("check", &loaded);
            let witness = counts.ambiguity_witness();
            if let Some((d, w, k)) = witness {
                let msg = format!(
                    "warning: ambiguous: degree {d} has {w} words but {k} derivations; \
                     comparing derivation counts only"
                );
                let _ = writeln!(err, "{}: {msg}", loaded.info.file);
                r.diagnostics.push(msg);
            }
            let mismatches: Vec<Mismatch> = (0..=range.n)
                .filter_map(|d| {
                    let solver = &s.coefficients[d];
                    let oracle = counts.derivations[d];
                    let expected = expect.get(d);
                    let bad = *solver != Rational::from_integer(oracle.into())
                        || expected.is_some_and(|e| *solver != Rational::from_integer(e.clone()));
                    bad.then(|| Mismatch {
                        degree: d,
                        solver: solver.to_string(),
                        oracle,
                        expected: expected.map(number),
                    })
                })
                .collect();
            let agree = mismatches.is_empty();
            if let Some(m) = mismatches.first() {
                let _ = writeln!(
                    err,
                    "{}: mismatch at degree {}: {}",
                    loaded.info.file,
                    m.degree,
                    mismatch_text(m)
                );
            }
            r.method = Some(method_info(method.into(), &sol));
            r.result = Some(result_info(&sol, false));
            r.series = Some(series_info(&s, &subst));
            r.oracle = Some(oracle_info(&counts, &subst));
            r.check = Some(CheckInfo {
                agree,
                compared: if witness.is_some() {
                    "derivations"
                } else {
                    "words"
                }
                .to_string(),
                mismatches,
            });
            (r, if agree { EXIT_OK } else { EXIT_MISMATCH })
        }
    };
    report.timings = timer.0;
    Ok((report, code))
}

fn method_info(requested: Method, sol: &Solution) -> MethodInfo {
    MethodInfo {
        requested: requested.name().to_string(),
        used: sol.method.name().to_string(),
    }
}

fn mismatch_text(m: &Mismatch) -> String {
    let mut t = format!("solver {} vs oracle {}", m.solver, m.oracle);
    if let Some(e) = &m.expected {
        t.push_str(&format!(" vs expected {e}"));
    }
    t
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Human-readable rendering of a report. Timings come last.
pub fn render_text(r: &RunReport) -> String {
    let mut s = String::new();
    let mut line = |l: String| {
        s.push_str(&l);
        s.push('\n');
    };
    line(format!(
        "input: {} (sha256 {})",
        r.input.file, r.input.sha256
    ));
    if let Some(m) = &r.method {
        line(format!("method: {} (requested {})", m.used, m.requested));
    }
    if let Some(res) = &r.result {
        line(format!(
            "functional equation: {} = 0",
            res.functional_equation.text
        ));
        line(format!("degree in start symbol: {}", res.degree));
        if let Some(cf) = &res.closed_form {
            line(format!(
                "closed form: ({}) / ({})",
                cf.numerator.text, cf.denominator.text
            ));
            if !cf.coprime_verified {
                line("note: coprimality not fully reduced".to_string());
            }
        }
        if let Some(basis) = &res.basis {
            line(format!("groebner basis ({} elements):", basis.len()));
            for g in basis {
                line(format!("  {}", g.text));
            }
        }
    }
    if let Some(se) = &r.series {
        let subst: Vec<String> = se
            .substitution
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        line(format!(
            "series in {} [{}] to order {}:",
            se.variable,
            subst.join(","),
            se.order
        ));
        let coeffs: Vec<String> = se
            .coefficients
            .iter()
            .map(|c| match c {
                serde_json::Value::String(x) => x.clone(),
                other => other.to_string(),
            })
            .collect();
        line(format!("  {}", coeffs.join(", ")));
    }
    if let Some(o) = &r.oracle {
        line(format!(
            "enumeration to weight {}{}:",
            o.bound,
            if o.complete { "" } else { " (incomplete)" }
        ));
        line(format!("  words:       {}", join(&o.words)));
        line(format!("  derivations: {}", join(&o.derivations)));
        match &o.ambiguity_witness {
            Some(w) => line(format!(
                "  ambiguity witness: degree {} ({} words, {} derivations)",
                w.degree, w.words, w.derivations
            )),
            None => line("  ambiguity witness: none".to_string()),
        }
    }
    if let Some(c) = &r.check {
        if c.agree {
            line(format!("check: agree ({} counts)", c.compared));
        } else {
            line(format!("check: MISMATCH ({} counts)", c.compared));
            for m in &c.mismatches {
                line(format!("  degree {}: {}", m.degree, mismatch_text(m)));
            }
        }
    }
    for d in &r.diagnostics {
        line(format!("diagnostic: {d}"));
    }
    line("timings (ms):".to_string());
    for (k, v) in &r.timings {
        line(format!("  {k}: {v:.3}"));
    }
    s
}
