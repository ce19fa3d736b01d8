//! Command-line front end. [`run`] takes the argument list and output
//! streams so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 parse or usage
//! error, 3 validation failure, 4 solver guard tripped, 5 certificate or
//! covering rejected against the budget.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cost::BigCost;
use crate::fixtures;
use crate::harness::{
    gen_random_3p, gen_random_ocp, run_gap_experiment, Family, GapReport, GapRow, GenParams,
};
use crate::instance::{Covering, InstanceError, OcpInstance};
use crate::io::{
    parse_3p, parse_covering, parse_instance, parse_map, serialize_3p, serialize_covering,
    serialize_instance, serialize_map, CoveringDocument, ParseError,
};
use crate::reduction::{
    extract_partition, reduce_3p_to_ocp, solve_3p_bruteforce, ExtractError, ReductionError,
    ThreePartitionInstance,
};
use crate::solvers::{solve, Method, SolveError, SolverLimits};
use crate::trace::{residual_trace, EvalError};
use crate::verify::verify_certificate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_GUARD: i32 = 4;
pub const EXIT_REJECTED: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "ocp", version, about = "Ordered covering with exponential step costs")]
struct Cli {
    /// Output style: human-readable text or tab-separated records.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the residual trace and exact cost of a covering.
    Eval {
        /// Instance file, or @testA / @testB for a built-in fixture.
        instance: String,
        covering: PathBuf,
    },
    /// Check a covering against the instance budget.
    Verify {
        instance: String,
        covering: PathBuf,
        /// Budget override as a decimal integer.
        #[arg(long)]
        budget: Option<String>,
    },
    /// Find a covering with the chosen method.
    Solve {
        instance: String,
        #[arg(long, short, default_value = "dp")]
        method: Method,
        /// Also write the covering to this file.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Build the covering instance for a 3-Partition instance.
    Reduce {
        three_partition: PathBuf,
        /// Writes PREFIX.ocp and PREFIX.map; defaults to the input path stem.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Recover a 3-partition from a budget-feasible covering of a reduced instance.
    Extract {
        map: PathBuf,
        instance: String,
        covering: PathBuf,
    },
    /// Validate a 3-Partition instance, optionally deciding it by brute force.
    Check3p {
        three_partition: PathBuf,
        #[arg(long)]
        solve: bool,
    },
    /// Generate a seeded random instance.
    Gen(GenArgs),
    /// Greedy against optimal over every .ocp file in a directory.
    Gap { dir: PathBuf },
    /// Print a built-in instance.
    Fixture { name: String },
}

#[derive(Debug, Args)]
struct GenArgs {
    family: Family,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    labels: usize,
    #[arg(long, default_value_t = 0)]
    extras: usize,
    #[arg(long, default_value_t = 6)]
    edges: usize,
    #[arg(long, default_value_t = 5)]
    max_weight: u64,
    #[arg(long, default_value_t = 3)]
    max_edge_size: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 9)]
    b_min: u64,
    #[arg(long, default_value_t = 15)]
    b_max: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let code = match e {
            SolveError::Capacity { .. } => EXIT_GUARD,
            SolveError::Uncoverable | SolveError::Eval(_) => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure::new(EXIT_INVALID, e.to_string())
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        Failure::new(EXIT_INVALID, e.to_string())
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        let code = match e {
            ReductionError::Guard { .. } => EXIT_GUARD,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<(String, i32), Failure>;

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_IO;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli) -> Outcome {
    let records = cli.format == Format::Records;
    match &cli.command {
        Command::Eval { instance, covering } => eval(instance, covering, records),
        Command::Verify {
            instance,
            covering,
            budget,
        } => verify(instance, covering, budget.as_deref(), records),
        Command::Solve {
            instance,
            method,
            output,
        } => solve_cmd(instance, *method, output.as_deref(), records),
        Command::Reduce {
            three_partition,
            out,
        } => reduce(three_partition, out.as_deref(), records),
        Command::Extract {
            map,
            instance,
            covering,
        } => extract(map, instance, covering, records),
        Command::Check3p {
            three_partition,
            solve,
        } => check3p(three_partition, *solve, records),
        Command::Gen(args) => generate(args),
        Command::Gap { dir } => gap(dir, records),
        Command::Fixture { name } => fixtures::fixture_text(name)
            .map(|t| (t.to_string(), EXIT_OK))
            .map_err(|e| Failure::new(EXIT_INVALID, e.to_string())),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn parse_failure(path: &Path, e: ParseError) -> Failure {
    Failure::new(EXIT_PARSE, format!("{}: {e}", path.display()))
}

fn load_instance(source: &str) -> Result<OcpInstance, Failure> {
    if let Some(name) = source.strip_prefix('@') {
        return fixtures::load_fixture(name).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()));
    }
    let path = Path::new(source);
    parse_instance(&read(path)?).map_err(|e| parse_failure(path, e))
}

fn load_covering(path: &Path) -> Result<CoveringDocument, Failure> {
    parse_covering(&read(path)?).map_err(|e| parse_failure(path, e))
}

fn load_3p(path: &Path) -> Result<ThreePartitionInstance, Failure> {
    parse_3p(&read(path)?).map_err(|e| parse_failure(path, e))
}

fn resolve(instance: &OcpInstance, doc: &CoveringDocument) -> Result<Covering, Failure> {
    Ok(doc.resolve(instance)?)
}

fn cost_fields(cost: &BigCost) -> String {
    let exps: Vec<String> = cost.terms().iter().map(u64::to_string).collect();
    format!("{}\t{}", cost.to_decimal_string(), exps.join(" "))
}

fn cost_text(cost: &BigCost) -> String {
    let decimal = cost.to_decimal_string();
    if cost.terms().len() <= 1 && decimal.len() < 20 {
        decimal
    } else if decimal.len() <= 40 {
        format!("{decimal} = {}", cost.to_power_string())
    } else {
        cost.to_power_string()
    }
}

fn eval(instance: &str, covering: &Path, records: bool) -> Outcome {
    let inst = load_instance(instance)?;
    let cov = resolve(&inst, &load_covering(covering)?)?;
    let trace = residual_trace(&inst, &cov)?;
    let mut s = String::new();
    for (i, step) in trace.steps.iter().enumerate() {
        let edge = &inst.edge(step.edge)?.name;
        let residual: Vec<&str> = step
            .residual
            .iter()
            .map(|&x| inst.element(x).name.as_str())
            .collect();
        if records {
            let _ = writeln!(
                s,
                "step\t{}\t{edge}\t{}\t{}\t{}",
                i + 1,
                residual.join(" "),
                step.weight,
                step.cost.to_decimal_string()
            );
        } else {
            let _ = writeln!(
                s,
                "{:>3}  {edge:<10} U = {{{}}}  u = {}  f = {}",
                i + 1,
                residual.join(", "),
                step.weight,
                step.cost
            );
        }
    }
    let total: BigCost = trace.steps.iter().map(|st| &st.cost).sum();
    if records {
        let _ = writeln!(s, "cost\t{}", cost_fields(&total));
    } else {
        let _ = writeln!(s, "cost {}", cost_text(&total));
    }
    Ok((s, EXIT_OK))
}

fn verify(instance: &str, covering: &Path, budget: Option<&str>, records: bool) -> Outcome {
    let mut inst = load_instance(instance)?;
    if let Some(text) = budget {
        let c = BigCost::parse_decimal(text)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("--budget: {e}")))?;
        inst = inst.with_budget(Some(c));
    }
    let doc = load_covering(covering)?;
    // unknown ids are a rejected certificate rather than a usage error
    let cov = doc.resolve(&inst).ok();
    let verdict = match &cov {
        Some(c) => verify_certificate(&inst, c)
            .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?,
        None => {
            if inst.budget().is_none() {
                return Err(Failure::new(EXIT_INVALID, "instance has no budget to verify against"));
            }
            crate::verify::Verdict {
                accepted: false,
                reason: crate::verify::VerdictReason::MalformedCertificate,
                step: None,
            }
        }
    };
    let step = verdict.step.map(|p| (p + 1).to_string());
    let s = if records {
        format!(
            "verdict\t{}\t{}\t{}\n",
            if verdict.accepted { "accept" } else { "reject" },
            verdict.reason,
            step.as_deref().unwrap_or("-")
        )
    } else if verdict.accepted {
        "accept\n".to_string()
    } else {
        match step {
            Some(p) => format!("reject: {} at step {p}\n", verdict.reason),
            None => format!("reject: {}\n", verdict.reason),
        }
    };
    Ok((s, if verdict.accepted { EXIT_OK } else { EXIT_REJECTED }))
}

fn solve_cmd(instance: &str, method: Method, output: Option<&Path>, records: bool) -> Outcome {
    let inst = load_instance(instance)?;
    let limits = SolverLimits::from_env().map_err(|e| Failure::new(EXIT_PARSE, e))?;
    let result = solve(&inst, method, &limits)?;
    let names = inst.edge_names(&result.covering)?;
    if let Some(path) = output {
        let doc = CoveringDocument::from_covering(&inst, &result.covering, Some(instance.to_string()))?;
        write(path, &serialize_covering(&doc))?;
    }
    let st = result.stats;
    let s = if records {
        format!(
            "method\t{method}\noptimal\t{}\ncost\t{}\nsequence\t{}\nstats\t{}\t{}\t{}\t{}\n",
            result.optimal,
            cost_fields(&result.cost),
            names.join(" "),
            st.expanded,
            st.generated,
            st.pruned,
            st.incumbent_updates
        )
    } else {
        format!(
            "method {method}{}\ncost {}\nsequence {}\nexpanded {}, generated {}, pruned {}, improvements {}\n",
            if result.optimal { " (optimal)" } else { "" },
            cost_text(&result.cost),
            names.join(" "),
            st.expanded,
            st.generated,
            st.pruned,
            st.incumbent_updates
        )
    };
    Ok((s, EXIT_OK))
}

fn reduce(input: &Path, out: Option<&Path>, records: bool) -> Outcome {
    let tp = load_3p(input)?;
    let reduction = reduce_3p_to_ocp(&tp)?;
    let prefix = out.map_or_else(|| input.with_extension(""), Path::to_path_buf);
    let ocp_path = prefix.with_extension("ocp");
    let map_path = prefix.with_extension("map");
    write(&ocp_path, &serialize_instance(&reduction.instance))?;
    write(&map_path, &serialize_map(&reduction.map))?;
    let p = reduction.map.params;
    let budget = p.budget();
    let s = if records {
        format!(
            "instance\t{}\nmap\t{}\nt\t{}\nw\t{}\ntriplets\t{}\nedges\t{}\nbudget\t{}\ninfeasible\t{}\n",
            ocp_path.display(),
            map_path.display(),
            p.t,
            p.w,
            reduction.map.triplets.len(),
            reduction.instance.edges().len(),
            cost_fields(&budget),
            reduction.map.infeasible
        )
    } else {
        let mut s = format!(
            "wrote {} and {}\nt = {}, w = {}, {} valid triplets, {} edges, budget {}\n",
            ocp_path.display(),
            map_path.display(),
            p.t,
            p.w,
            reduction.map.triplets.len(),
            reduction.instance.edges().len(),
            cost_text(&budget)
        );
        if reduction.map.infeasible {
            s.push_str("valid triplets miss some label: no covering exists, the answer is NO\n");
        }
        s
    };
    Ok((s, EXIT_OK))
}

fn extract(map: &Path, instance: &str, covering: &Path, records: bool) -> Outcome {
    let rmap = parse_map(&read(map)?).map_err(|e| parse_failure(map, e))?;
    let inst = load_instance(instance)?;
    let cov = resolve(&inst, &load_covering(covering)?)?;
    let partition = extract_partition(&rmap, &inst, &cov).map_err(|e| {
        let code = match e {
            ExtractError::NotFeasible(_) => EXIT_REJECTED,
            ExtractError::Soundness(_) => EXIT_IO,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    })?;
    let s = if records {
        partition
            .canonical()
            .triplets
            .iter()
            .map(|t| format!("triplet\t{}\t{}\t{}\n", t[0] + 1, t[1] + 1, t[2] + 1))
            .collect()
    } else {
        format!("{}\n", partition.canonical())
    };
    Ok((s, EXIT_OK))
}

fn check3p(input: &Path, decide: bool, records: bool) -> Outcome {
    let tp = load_3p(input)?;
    let violations = tp.violations();
    let mut s = String::new();
    if !violations.is_empty() {
        for v in &violations {
            if records {
                let _ = writeln!(s, "violation\t{v}");
            } else {
                let _ = writeln!(s, "invalid: {v}");
            }
        }
        return Ok((s, EXIT_INVALID));
    }
    s.push_str(if records { "valid\ttrue\n" } else { "valid\n" });
    if decide {
        match solve_3p_bruteforce(&tp)? {
            Some(p) if records => {
                let _ = writeln!(s, "answer\tyes\t{}", p.canonical());
            }
            Some(p) => {
                let _ = writeln!(s, "YES {}", p.canonical());
            }
            None => s.push_str(if records { "answer\tno\n" } else { "NO\n" }),
        }
    }
    Ok((s, EXIT_OK))
}

fn generate(args: &GenArgs) -> Outcome {
    let params = GenParams {
        family: args.family,
        seed: args.seed,
        labels: args.labels,
        extras: args.extras,
        edges: args.edges,
        max_weight: args.max_weight,
        max_edge_size: args.max_edge_size,
        m: args.m,
        b_min: args.b_min,
        b_max: args.b_max,
    };
    let text = match args.family {
        Family::RandomOcp => gen_random_ocp(&params).map(|i| serialize_instance(&i)),
        Family::Planted3p | Family::Unconstrained3p => gen_random_3p(&params).map(|t| serialize_3p(&t)),
    }
    .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    match &args.output {
        Some(path) => {
            write(path, &text)?;
            Ok((String::new(), EXIT_OK))
        }
        None => Ok((text, EXIT_OK)),
    }
}

fn gap(dir: &Path, records: bool) -> Outcome {
    let limits = SolverLimits::from_env().map_err(|e| Failure::new(EXIT_PARSE, e))?;
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "ocp"))
        .collect();
    paths.sort();

    let mut batch = Vec::new();
    let mut unreadable = Vec::new();
    for path in &paths {
        let id = path
            .file_stem()
            .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        match read(path).and_then(|t| parse_instance(&t).map_err(|e| parse_failure(path, e))) {
            Ok(inst) => batch.push((id, inst)),
            Err(f) => unreadable.push((id, f.message)),
        }
    }
    let mut rows = run_gap_experiment(&batch, &limits).rows;
    rows.extend(unreadable.into_iter().map(|(id, message)| GapRow {
        id,
        outcome: Err(message),
    }));
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    let report = GapReport::from_rows(rows);
    let s = if records {
        report.to_records()
    } else {
        report.to_table()
    };
    Ok((s, EXIT_OK))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("ocp").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn solve_fixture() {
        let (code, out, _) = run_args(&["solve", "@testB", "--method", "greedy"]);
        assert_eq!(code, 0);
        assert!(out.contains("cost 336"), "{out}");
        assert!(out.contains("sequence E4 E1 E2"), "{out}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["solve"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["solve", "@testB", "--method", "ilp"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn missing_file_is_io() {
        let (code, _, err) = run_args(&["solve", "/nonexistent/x.ocp"]);
        assert_eq!(code, EXIT_IO);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn records_format() {
        let (code, out, _) = run_args(&["--format", "records", "solve", "@testB"]);
        assert_eq!(code, 0);
        assert!(out.contains("cost\t292\t8 5 2\n"), "{out}");
    }
}
