//! The `ballotkit` command line.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bigjson;
use crate::bijections::{
    behead_231_321, from_dyck_prefix, insert_132_321, prepend_231_321, remove_132_321,
    to_dyck_prefix, wilf_transport,
};
use crate::enumerate::{self, EnumerationRequest, Limits, Method, Provenance, SequenceRecord};
use crate::error::Error;
use crate::formulas::{self, RuleKind};
use crate::pattern::PatternSet;
use crate::perm::{Permutation, StepWord};
use crate::verify::{self, Suite, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "ballotkit",
    version,
    about = "Pattern-avoiding ballot permutations"
)]
pub struct Cli {
    #[command(flatten)]
    pub caps: Caps,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Caps {
    /// Largest n the brute-force oracle accepts.
    #[arg(long, global = true, env = "BALLOTKIT_ORACLE_MAX_N", default_value_t = enumerate::DEFAULT_ORACLE_MAX_N)]
    pub oracle_max_n: usize,

    /// Largest n the pruned search accepts.
    #[arg(long, global = true, env = "BALLOTKIT_PRUNED_MAX_N", default_value_t = enumerate::DEFAULT_PRUNED_MAX_N)]
    pub pruned_max_n: usize,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "BALLOTKIT_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the members of B_n(S), or S_n(S) with --no-ballot.
    Enumerate {
        #[arg(long, value_parser = parse_class, default_value = "")]
        patterns: PatternSet,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        no_ballot: bool,
        #[arg(long, value_enum, default_value_t = EnumMethod::Pruned)]
        method: EnumMethod,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        /// Always print comma-separated permutations.
        #[arg(long)]
        separated: bool,
    },
    /// Count sequence a_1..a_{n_max}.
    Count {
        #[arg(long, value_parser = parse_class, default_value = "")]
        patterns: PatternSet,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = CountMethod::Pruned)]
        method: CountMethod,
        #[arg(long, value_enum, default_value_t = Format::Bfile)]
        format: Format,
    },
    /// Evaluate the registered counting rule for one n.
    Formula {
        #[arg(long, value_parser = parse_class)]
        patterns: PatternSet,
        #[arg(long)]
        n: usize,
    },
    /// Apply one of the constructive maps.
    Biject {
        #[arg(long, value_enum)]
        map: MapKind,
        #[arg(long, value_parser = parse_perm)]
        perm: Option<Permutation>,
        #[arg(long, value_parser = parse_word)]
        word: Option<StepWord>,
        #[arg(long)]
        inverse: bool,
        #[arg(long, value_parser = parse_class)]
        from: Option<PatternSet>,
        #[arg(long, value_parser = parse_class)]
        to: Option<PatternSet>,
    },
    /// Cross-check tables, rules and maps; prints a JSON report.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumMethod {
    Oracle,
    Pruned,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    Oracle,
    Pruned,
    Formula,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Plain,
    Json,
    Bfile,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Dyck,
    Transport,
    #[value(name = "insert-132-321")]
    Insert132321,
    #[value(name = "prepend-231-321")]
    Prepend231321,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteArg {
    Tables,
    Formulas,
    Bijections,
    All,
}

fn parse_class(s: &str) -> Result<PatternSet, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_perm(s: &str) -> Result<Permutation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_word(s: &str) -> Result<StepWord, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationOutput {
    pub schema_version: u32,
    pub class: PatternSet,
    pub n: usize,
    pub ballot: bool,
    pub method: Method,
    pub count: usize,
    pub permutations: Vec<Permutation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOutput {
    pub schema_version: u32,
    pub class: PatternSet,
    #[serde(with = "bigjson::vec")]
    pub counts: Vec<BigUint>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaOutput {
    pub schema_version: u32,
    pub class: PatternSet,
    pub n: usize,
    #[serde(with = "bigjson::option")]
    pub count: Option<BigUint>,
    pub rule_kind: Option<RuleKind>,
    pub rule_text: Option<String>,
    pub corrected: bool,
}

/// Failure of a command, already mapped to its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let limits = Limits {
        oracle_max_n: cli.caps.oracle_max_n,
        pruned_max_n: cli.caps.pruned_max_n,
        parallel: cli.caps.threads != Some(1),
    };
    if let Some(t) = cli.caps.threads.filter(|&t| t > 1) {
        // The global pool can only be configured once per process; later
        // calls keep the first setting.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let result = dispatch(&cli.command, &limits, out, err);
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Mismatch(msg)) => {
            let _ = writeln!(err, "mismatch: {msg}");
            EXIT_MISMATCH
        }
    }
}

fn dispatch(
    command: &Command,
    limits: &Limits,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    match command {
        Command::Enumerate {
            patterns,
            n,
            no_ballot,
            method,
            format,
            separated,
        } => cmd_enumerate(
            patterns, *n, !no_ballot, *method, *format, *separated, limits, out,
        ),
        Command::Count {
            patterns,
            n_max,
            method,
            format,
        } => cmd_count(patterns, *n_max, *method, *format, limits, out, err),
        Command::Formula { patterns, n } => cmd_formula(patterns, *n, out),
        Command::Biject {
            map,
            perm,
            word,
            inverse,
            from,
            to,
        } => cmd_biject(
            *map,
            perm.as_ref(),
            word.as_ref(),
            *inverse,
            from.as_ref(),
            to.as_ref(),
            out,
        ),
        Command::Verify { suite, n_max } => cmd_verify(*suite, *n_max, limits, out, err),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_enumerate(
    pset: &PatternSet,
    n: usize,
    ballot: bool,
    method: EnumMethod,
    format: Format,
    separated: bool,
    limits: &Limits,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let method = match method {
        EnumMethod::Oracle => Method::Oracle,
        EnumMethod::Pruned => Method::Pruned,
    };
    let req = EnumerationRequest {
        n,
        pset: pset.clone(),
        ballot_required: ballot,
        method,
    };
    let perms = enumerate::enumerate(&req, limits)?;
    match format {
        Format::Json => write_json(
            out,
            &EnumerationOutput {
                schema_version: SCHEMA_VERSION,
                class: pset.clone(),
                n,
                ballot,
                method,
                count: perms.len(),
                permutations: perms,
            },
        ),
        Format::Plain => {
            for p in &perms {
                if separated {
                    writeln!(out, "{}", p.to_separated())?;
                } else {
                    writeln!(out, "{p}")?;
                }
            }
            Ok(())
        }
        Format::Bfile => Err(Failure::Usage(
            "enumerate prints permutations; use --format plain or json".into(),
        )),
    }
}

fn cmd_count(
    pset: &PatternSet,
    n_max: usize,
    method: CountMethod,
    format: Format,
    limits: &Limits,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    if n_max < 1 {
        return Err(Failure::Usage("--n-max must be at least 1".into()));
    }
    let formula_record = || -> Result<SequenceRecord, Failure> {
        let counts = (1..=n_max)
            .map(|n| {
                formulas::formula_count(pset, n)?.ok_or_else(|| {
                    Error::InvalidInput(format!("no counting rule registered for {pset}"))
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(SequenceRecord {
            class: pset.clone(),
            counts,
            provenance: Provenance::Formula,
        })
    };
    let record = match method {
        CountMethod::Oracle => enumerate::count_sequence(pset, n_max, Method::Oracle, limits)?,
        CountMethod::Pruned => enumerate::count_sequence(pset, n_max, Method::Pruned, limits)?,
        CountMethod::Formula => formula_record()?,
        CountMethod::Both => {
            let by_rule = formula_record()?;
            let enumerated = enumerate::count_sequence(pset, n_max, Method::Pruned, limits)?;
            if let Some(i) = (0..n_max).find(|&i| by_rule.counts[i] != enumerated.counts[i]) {
                return Err(Failure::Mismatch(format!(
                    "class {pset} at n = {}: formula {} vs pruned {}",
                    i + 1,
                    by_rule.counts[i],
                    enumerated.counts[i]
                )));
            }
            writeln!(
                err,
                "formula and pruned enumeration agree for n = 1..={n_max}"
            )?;
            enumerated
        }
    };
    match format {
        Format::Bfile => {
            out.write_all(record.to_bfile().as_bytes())?;
            Ok(())
        }
        Format::Plain => {
            let line: Vec<String> = record.counts.iter().map(BigUint::to_string).collect();
            writeln!(out, "{}", line.join(","))?;
            Ok(())
        }
        Format::Json => write_json(
            out,
            &CountOutput {
                schema_version: SCHEMA_VERSION,
                class: record.class,
                counts: record.counts,
                provenance: record.provenance,
            },
        ),
    }
}

fn cmd_formula(pset: &PatternSet, n: usize, out: &mut dyn Write) -> Result<(), Failure> {
    let count = formulas::formula_count(pset, n)?;
    let spec = formulas::lookup(pset);
    write_json(
        out,
        &FormulaOutput {
            schema_version: SCHEMA_VERSION,
            class: pset.clone(),
            n,
            count,
            rule_kind: spec.map(|s| s.kind),
            rule_text: spec.map(|s| s.rule_text.to_string()),
            corrected: spec.is_some_and(|s| s.corrected),
        },
    )
}

fn cmd_biject(
    map: MapKind,
    perm: Option<&Permutation>,
    word: Option<&StepWord>,
    inverse: bool,
    from: Option<&PatternSet>,
    to: Option<&PatternSet>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let need_perm = || perm.ok_or_else(|| Failure::Usage("--perm is required for this map".into()));
    let image = match (map, inverse) {
        (MapKind::Dyck, false) => to_dyck_prefix(need_perm()?)?.to_string(),
        (MapKind::Dyck, true) => {
            let w = word.ok_or_else(|| {
                Failure::Usage("--word is required for the inverse Dyck map".into())
            })?;
            from_dyck_prefix(w)?.to_string()
        }
        (MapKind::Transport, _) => {
            let (Some(from), Some(to)) = (from, to) else {
                return Err(Failure::Usage("transport needs --from and --to".into()));
            };
            let (from, to) = if inverse { (to, from) } else { (from, to) };
            wilf_transport(need_perm()?, from, to)?.to_string()
        }
        (MapKind::Insert132321, false) => insert_132_321(need_perm()?)?.to_string(),
        (MapKind::Insert132321, true) => remove_132_321(need_perm()?)?.to_string(),
        (MapKind::Prepend231321, false) => prepend_231_321(need_perm()?)?.to_string(),
        (MapKind::Prepend231321, true) => behead_231_321(need_perm()?)?.to_string(),
    };
    writeln!(out, "{image}")?;
    Ok(())
}

fn cmd_verify(
    suite: SuiteArg,
    n_max: usize,
    limits: &Limits,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let suite = match suite {
        SuiteArg::Tables => Suite::Tables,
        SuiteArg::Formulas => Suite::Formulas,
        SuiteArg::Bijections => Suite::Bijections,
        SuiteArg::All => Suite::All,
    };
    let report = verify::run(suite, n_max, limits)?;
    writeln!(
        err,
        "{} rows checked, {} failed",
        report.results.len(),
        report
            .results
            .iter()
            .filter(|r| r.status == verify::Status::Fail)
            .count()
    )?;
    write_json(out, &report)?;
    match &report.minimal_failure {
        None => Ok(()),
        Some(f) => Err(Failure::Mismatch(format!(
            "{} failed for class {} at n = {}",
            f.check, f.class, f.n
        ))),
    }
}
