//! The `groupresp` command line: validation, contribution and responsibility
//! tables, axiom suites and the seeded fuzzer over decision-tree files or the
//! built-in scenarios.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use groupresp::axioms::aggregate::{check_agg_suite, SampleConfig};
use groupresp::axioms::member::check_member_suite;
use groupresp::axioms::{
    check_cc, check_nrv, check_nur, claimed_aggregation, claimed_member, claimed_outcome, fuzz, round12, AxiomId,
    AxiomReport, FuzzConfig, FuzzSubject, Suite,
};
use groupresp::builtins::{builtin, BUILTIN_NAMES};
use groupresp::contribution::GroupContributions;
use groupresp::format::{parse_raw, to_canonical, RawTree};
use groupresp::responsibility::{trace_with, Composite};
use groupresp::strategy::{enumerate_scenarios, enumerate_strategies};
use groupresp::{
    Aggregator, ContributionFunction, DecisionTree, EvalError, Group, LoadError, NodeIx, TreeError, ValidationErrors,
    DEFAULT_CAP, EPS,
};

pub const EXIT_OK: i32 = 0;
/// Some axiom was violated, but only where the reference tables expect it.
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_EXPLOSION: i32 = 4;
/// A violation where the reference tables claim compliance.
pub const EXIT_UNEXPECTED_VIOLATION: i32 = 5;
/// Bad arguments, unknown nodes or agents, and other usage errors.
pub const EXIT_USAGE: i32 = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("invalid tree:\n{0}")]
    Invalid(ValidationErrors),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Load(LoadError::Invalid(_)) | CliError::Invalid(_) => EXIT_INVALID,
            CliError::Load(_) => EXIT_PARSE,
            CliError::Eval(EvalError::ExplosionGuard { .. }) => EXIT_EXPLOSION,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "groupresp", version, about = "Quantified group responsibility in multi-agent decision trees")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Absolute tolerance for numeric comparisons.
    #[arg(long, global = true, default_value_t = EPS, value_parser = positive_f64)]
    pub eps: f64,
    /// Maximum number of strategies or scenarios enumerated at once.
    #[arg(long, global = true, env = "GROUPRESP_CAP", default_value_t = DEFAULT_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Success probability of evading in the built-in `fig1a`.
    #[arg(long, global = true)]
    pub p: Option<f64>,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Structured,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    Like,
    Risk,
    Negl,
}

impl FunctionArg {
    const ALL: [FunctionArg; 3] = [FunctionArg::Like, FunctionArg::Risk, FunctionArg::Negl];

    fn function(self) -> ContributionFunction {
        match self {
            FunctionArg::Like => ContributionFunction::Like,
            FunctionArg::Risk => ContributionFunction::Risk,
            FunctionArg::Negl => ContributionFunction::Negl,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum AggArg {
    Sum,
    Avg,
    Max,
    Mprod,
}

impl AggArg {
    fn aggregator(self) -> Aggregator {
        match self {
            AggArg::Sum => Aggregator::Sum,
            AggArg::Avg => Aggregator::Avg,
            AggArg::Max => Aggregator::Max,
            AggArg::Mprod => Aggregator::MProd,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Member,
    Agg,
    Outcome,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FuzzSuiteArg {
    Member,
    Outcome,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a tree file and summarise it.
    Validate {
        /// Tree file, or the name of a built-in scenario.
        tree: String,
    },
    /// Member contributions of a group's decisions.
    Contrib(ContribArgs),
    /// Outcome responsibility R(G, w) for every outcome.
    Outcome(OutcomeArgs),
    /// Run axiom checkers on one tree.
    Axioms(AxiomsArgs),
    /// Run axiom checkers on seeded random trees.
    Fuzz(FuzzArgs),
    /// Print a built-in scenario in the file format, or list them.
    Examples { name: Option<String> },
}

#[derive(Args, Debug)]
pub struct ContribArgs {
    pub tree: String,
    /// Comma-separated agent names.
    #[arg(long)]
    pub group: String,
    /// Defaults to all three functions.
    #[arg(long, value_enum)]
    pub function: Option<FunctionArg>,
    /// Restrict to one decision node.
    #[arg(long)]
    pub node: Option<String>,
    /// List the group's strategies at each node.
    #[arg(long)]
    pub dump_strategies: bool,
    /// List the scenarios at each node.
    #[arg(long)]
    pub dump_scenarios: bool,
}

#[derive(Args, Debug)]
pub struct OutcomeArgs {
    pub tree: String,
    #[arg(long)]
    pub group: String,
    #[arg(long, value_enum, default_value_t = FunctionArg::Risk)]
    pub function: FunctionArg,
    #[arg(long, value_enum, default_value_t = AggArg::Mprod)]
    pub agg: AggArg,
    /// Only this outcome node.
    #[arg(long)]
    pub outcome: Option<String>,
}

#[derive(Args, Debug)]
pub struct AxiomsArgs {
    /// Not needed for `--suite agg`.
    pub tree: Option<String>,
    #[arg(long, value_enum, default_value_t = FunctionArg::Risk)]
    pub function: FunctionArg,
    #[arg(long, value_enum, default_value_t = AggArg::Mprod)]
    pub agg: AggArg,
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    /// Member axioms for this group only (default: every nonempty group).
    #[arg(long)]
    pub group: Option<String>,
    /// Seed of the aggregation sampler.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number of sampled vectors per aggregation axiom.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = FuzzSuiteArg::All)]
    pub suite: FuzzSuiteArg,
    #[arg(long, value_enum, default_value_t = FunctionArg::Risk)]
    pub function: FunctionArg,
    #[arg(long, value_enum, default_value_t = AggArg::Mprod)]
    pub agg: AggArg,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub max_agents: Option<usize>,
    /// Generate trees without probability or ambiguity nodes.
    #[arg(long)]
    pub uncertainty_free: bool,
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let c = &cli.common;
    match &cli.command {
        Command::Validate { tree } => validate(c, tree, out),
        Command::Contrib(a) => contrib(c, a, out),
        Command::Outcome(a) => outcome(c, a, out),
        Command::Axioms(a) => axioms(c, a, out),
        Command::Fuzz(a) => run_fuzz(c, a, out),
        Command::Examples { name } => examples(c, name.as_deref(), out),
    }
}

fn limits(c: &Common) -> groupresp::Limits {
    groupresp::Limits { eps: c.eps, cap: c.cap }
}

/// A file path, or a built-in name when no such file exists.
pub fn load_tree(spec: &str, c: &Common) -> Result<DecisionTree, CliError> {
    let path = Path::new(spec);
    if !path.exists() && BUILTIN_NAMES.contains(&spec) {
        return builtin(spec, c.p).map_err(|e| CliError::Usage(e.to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: spec.to_string(),
        source,
    })?;
    let raw = parse_raw(&text)?;
    DecisionTree::validate_with(&raw, c.eps).map_err(CliError::Invalid)
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(v).expect("json value serializes");
    writeln!(out, "{s}")?;
    Ok(())
}

fn num(x: f64) -> String {
    format!("{}", round12(x))
}

fn group_label(t: &DecisionTree, g: Group) -> String {
    format!("{{{}}}", g.names(t).join(","))
}

/// Left-aligned columns separated by two spaces, without trailing blanks.
fn columns(rows: &[Vec<String>]) -> String {
    let n = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..n)
        .map(|k| rows.iter().filter_map(|r| r.get(k)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut s = String::new();
    for r in rows {
        let mut line = String::new();
        for (k, cell) in r.iter().enumerate() {
            if k + 1 == r.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<w$}  ", w = widths[k]));
            }
        }
        s.push_str(line.trim_end());
        s.push('\n');
    }
    s
}

fn validate(c: &Common, spec: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let t = load_tree(spec, c)?;
    let outcomes = t.outcomes().len();
    let bad = t.undesirable().len();
    let sets = t.classes().iter().filter(|x| x.len() > 1).count();
    match c.format {
        Format::Table => writeln!(
            out,
            "valid: {} nodes, {} agents, {} outcomes ({} undesirable), {} information sets",
            t.len(),
            t.agents().len(),
            outcomes,
            bad,
            sets
        )?,
        Format::Structured => print_json(
            out,
            &json!({
                "valid": true,
                "nodes": t.len(),
                "agents": t.agents(),
                "outcomes": outcomes,
                "undesirable": bad,
                "info_sets": sets,
            }),
        )?,
    }
    Ok(EXIT_OK)
}

fn contrib(c: &Common, a: &ContribArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let t = load_tree(&a.tree, c)?;
    let l = limits(c);
    let g = Group::parse_list(&t, &a.group)?;
    let mut nodes = t.group_nodes(g).0;
    if let Some(id) = &a.node {
        let v = t.ix(id)?;
        if !nodes.contains(&v) {
            return Err(CliError::Usage(format!(
                "`{id}` is not a decision node of {}",
                group_label(&t, g)
            )));
        }
        nodes = vec![v];
    }
    let functions: Vec<FunctionArg> = match a.function {
        Some(f) => vec![f],
        None => FunctionArg::ALL.to_vec(),
    };
    // one evaluator per function, in the order requested
    let evals: Vec<(ContributionFunction, GroupContributions)> = functions
        .iter()
        .map(|f| {
            let r = f.function();
            let e = GroupContributions::new(&t, &r, g, &l);
            (r, e)
        })
        .collect();
    let cells: Vec<(NodeIx, &str)> = nodes.iter().flat_map(|&v| t.actions(v).into_iter().map(move |x| (v, x))).collect();

    match c.format {
        Format::Table => {
            writeln!(out, "G = {}", group_label(&t, g))?;
            let mut rows = vec![std::iter::once(String::new())
                .chain(cells.iter().map(|(v, x)| format!("{}:{x}", t.id(*v))))
                .collect::<Vec<_>>()];
            for (r, e) in &evals {
                let mut row = vec![r.name().to_string()];
                for &(v, x) in &cells {
                    let val = e.value(v, x)?;
                    row.push(if val.clamped { format!("{}*", num(val.value)) } else { num(val.value) });
                }
                rows.push(row);
            }
            write!(out, "{}", columns(&rows))?;
            if evals.iter().any(|(_, e)| !e.clamped().is_empty()) {
                writeln!(out, "* clamped into [0, 1]")?;
            }
        }
        Format::Structured => {
            let mut entries = Vec::new();
            for &(v, x) in &cells {
                let mut values = serde_json::Map::new();
                let mut clamped = Vec::new();
                for (r, e) in &evals {
                    let val = e.value(v, x)?;
                    values.insert(r.name().to_string(), json!(round12(val.value)));
                    if val.clamped {
                        clamped.push(json!({"function": r.name(), "raw": val.raw}));
                    }
                }
                let mut entry = json!({
                    "node": t.id(v),
                    "agent": t.agent_name(t.owner(v).expect("decision node")),
                    "action": x,
                    "values": values,
                });
                if !clamped.is_empty() {
                    entry["clamped"] = json!(clamped);
                }
                entries.push(entry);
            }
            let mut doc = json!({"group": g.names(&t), "contributions": entries});
            if a.dump_strategies || a.dump_scenarios {
                doc["enumerations"] = json!(dumps(&t, g, &nodes, a, l.cap)?
                    .into_iter()
                    .map(|(id, kind, items)| json!({"node": id, "kind": kind, "items": items}))
                    .collect::<Vec<_>>());
            }
            print_json(out, &doc)?;
            return Ok(EXIT_OK);
        }
    }
    for (id, kind, items) in dumps(&t, g, &nodes, a, l.cap)? {
        writeln!(out, "\n{kind} at {id} ({}):", items.len())?;
        for s in items {
            writeln!(out, "  {s}")?;
        }
    }
    Ok(EXIT_OK)
}

type Dump = (String, &'static str, Vec<String>);

fn dumps(t: &DecisionTree, g: Group, nodes: &[NodeIx], a: &ContribArgs, cap: u64) -> Result<Vec<Dump>, CliError> {
    let mut out = Vec::new();
    for &v in nodes {
        if a.dump_strategies {
            let s = enumerate_strategies(t, g, v, cap)?;
            out.push((t.id(v).to_string(), "strategies", s.iter().map(|x| x.describe(t)).collect()));
        }
        if a.dump_scenarios {
            let z = enumerate_scenarios(t, g, v, cap)?;
            out.push((t.id(v).to_string(), "scenarios", z.iter().map(|x| x.describe(t)).collect()));
        }
    }
    Ok(out)
}

fn outcome(c: &Common, a: &OutcomeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let t = load_tree(&a.tree, c)?;
    let l = limits(c);
    let g = Group::parse_list(&t, &a.group)?;
    let r = a.function.function();
    let agg = a.agg.aggregator();
    let outcomes = match &a.outcome {
        Some(id) => {
            let w = t.ix(id)?;
            if !t.is_outcome(w) {
                return Err(CliError::Usage(format!("`{id}` is not an outcome node")));
            }
            vec![w]
        }
        None => t.outcomes(),
    };
    let eval = GroupContributions::new(&t, &r, g, &l);
    let mut rows = Vec::new();
    for w in outcomes {
        let trace = trace_with(&t, &eval, w)?;
        let xs: Vec<f64> = trace.iter().map(|e| e.value.value).collect();
        rows.push((w, agg.apply(&xs).map_err(EvalError::from)?, trace));
    }
    let name = format!("{}∘{}", agg.name(), r.name());
    match c.format {
        Format::Table => {
            writeln!(out, "{name}  G = {}", group_label(&t, g))?;
            let mut table = vec![vec!["outcome".to_string(), "ε".into(), "R".into(), "trace".into()]];
            for (w, x, trace) in &rows {
                let tr: Vec<String> = trace
                    .iter()
                    .map(|e| format!("{}:{}={}", t.id(e.node), e.action, num(e.value.value)))
                    .collect();
                table.push(vec![
                    t.id(*w).to_string(),
                    if t.is_undesirable(*w) { "yes" } else { "no" }.to_string(),
                    num(*x),
                    if tr.is_empty() { "-".to_string() } else { tr.join(" ") },
                ]);
            }
            write!(out, "{}", columns(&table))?;
        }
        Format::Structured => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(w, x, trace)| {
                    json!({
                        "outcome": t.id(*w),
                        "undesirable": t.is_undesirable(*w),
                        "responsibility": round12(*x),
                        "trace": trace.iter().map(|e| json!({
                            "node": t.id(e.node),
                            "agent": t.agent_name(e.agent),
                            "action": e.action,
                            "value": round12(e.value.value),
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            print_json(out, &json!({"function": name, "group": g.names(&t), "outcomes": items}))?;
        }
    }
    Ok(EXIT_OK)
}

/// Counts violations, and those that contradict a reference ✓ cell.
#[derive(Default)]
struct Tally {
    violations: usize,
    unexpected: usize,
}

impl Tally {
    fn add(&mut self, r: &AxiomReport, claimed: Option<bool>) {
        if r.is_violated() {
            self.violations += 1;
            if claimed == Some(true) {
                self.unexpected += 1;
            }
        }
    }

    fn code(&self) -> i32 {
        if self.unexpected > 0 {
            EXIT_UNEXPECTED_VIOLATION
        } else if self.violations > 0 {
            EXIT_VIOLATION
        } else {
            EXIT_OK
        }
    }

    fn summary(&self) -> String {
        format!(
            "{} violated, {} contrary to the reference tables",
            self.violations, self.unexpected
        )
    }
}

fn claim_mark(claimed: Option<bool>) -> &'static str {
    match claimed {
        Some(true) => "expected ✓",
        Some(false) => "expected ×",
        None => "",
    }
}

/// Outcome-axiom claims only cover aggregators with (BSM) and (RED).
fn outcome_claim(function: &str, agg: &Aggregator, axiom: AxiomId) -> Option<bool> {
    if matches!(agg, Aggregator::MProd) {
        claimed_outcome(function, axiom)
    } else {
        None
    }
}

fn report_json(r: &AxiomReport, claimed: Option<bool>) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    if let Some(c) = claimed {
        v["claimed"] = json!(c);
    }
    v
}

fn report_line(r: &AxiomReport, claimed: Option<bool>) -> String {
    let mark = claim_mark(claimed);
    let mut s = format!("  {}", r.summary());
    if !mark.is_empty() {
        s = format!("  {:<12}{}", mark, r.summary());
    }
    s
}

fn axioms(c: &Common, a: &AxiomsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let l = limits(c);
    let r = a.function.function();
    let agg = a.agg.aggregator();
    let needs_tree = a.suite != SuiteArg::Agg;
    let tree = match (&a.tree, needs_tree) {
        (Some(s), _) => Some(load_tree(s, c)?),
        (None, false) => None,
        (None, true) => return Err(CliError::Usage("a tree is required for this suite".into())),
    };
    let mut tally = Tally::default();
    let mut text = String::new();
    let mut doc = serde_json::Map::new();
    doc.insert("function".into(), json!(r.name()));
    doc.insert("aggregator".into(), json!(agg.name()));

    if let (Some(t), true) = (&tree, matches!(a.suite, SuiteArg::Member | SuiteArg::All)) {
        let groups = match &a.group {
            Some(s) => vec![Group::parse_list(t, s)?],
            None => Group::nonempty_subsets(t)?,
        };
        let mut sections = Vec::new();
        for g in groups {
            text.push_str(&format!("member axioms for {}, G = {}\n", r.name(), group_label(t, g)));
            let reports = check_member_suite(t, &r, g, &l)?;
            let mut items = Vec::new();
            for rep in &reports {
                let claimed = claimed_member(r.name(), rep.axiom);
                tally.add(rep, claimed);
                text.push_str(&report_line(rep, claimed));
                text.push('\n');
                items.push(report_json(rep, claimed));
            }
            sections.push(json!({"group": g.names(t), "reports": items}));
        }
        doc.insert("member".into(), json!(sections));
    }
    if matches!(a.suite, SuiteArg::Agg | SuiteArg::All) {
        let cfg = SampleConfig {
            seed: a.seed,
            samples: a.samples,
            eps: c.eps,
            ..SampleConfig::default()
        };
        text.push_str(&format!("aggregation axioms for {}\n", agg.name()));
        let mut items = Vec::new();
        for rep in check_agg_suite(&agg, &cfg) {
            let claimed = claimed_aggregation(agg.name(), rep.axiom);
            tally.add(&rep, claimed);
            text.push_str(&report_line(&rep, claimed));
            text.push('\n');
            items.push(report_json(&rep, claimed));
        }
        doc.insert("aggregation".into(), json!(items));
    }
    if let (Some(t), true) = (&tree, matches!(a.suite, SuiteArg::Outcome | SuiteArg::All)) {
        let comp = Composite::new(r.clone(), agg.clone());
        text.push_str(&format!("outcome axioms for {}∘{}\n", agg.name(), r.name()));
        let reports = [
            check_nrv(t, &comp, false, &l)?,
            check_nrv(t, &comp, true, &l)?,
            check_nur(t, &comp, &l)?,
            check_cc(t, &comp, &l)?,
        ];
        let mut items = Vec::new();
        for rep in &reports {
            let claimed = outcome_claim(r.name(), &agg, rep.axiom);
            tally.add(rep, claimed);
            text.push_str(&report_line(rep, claimed));
            text.push('\n');
            for n in &rep.notes {
                text.push_str(&format!("      note: {n}\n"));
            }
            items.push(report_json(rep, claimed));
        }
        doc.insert("outcome".into(), json!(items));
    }
    let code = tally.code();
    match c.format {
        Format::Table => {
            write!(out, "{text}")?;
            writeln!(out, "{}", tally.summary())?;
        }
        Format::Structured => {
            doc.insert("violations".into(), json!(tally.violations));
            doc.insert("unexpected".into(), json!(tally.unexpected));
            print_json(out, &Value::Object(doc))?;
        }
    }
    Ok(code)
}

fn run_fuzz(c: &Common, a: &FuzzArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let l = limits(c);
    let mut cfg = if a.uncertainty_free {
        FuzzConfig::uncertainty_free()
    } else {
        FuzzConfig::default()
    }
    .with_seed(a.seed)
    .with_count(a.count);
    if let Some(d) = a.max_depth {
        cfg.max_depth = d;
    }
    if let Some(k) = a.max_agents {
        if k == 0 {
            return Err(CliError::Usage("--max-agents must be at least 1".into()));
        }
        cfg.max_agents = k;
    }
    let suite = match a.suite {
        FuzzSuiteArg::Member => Suite::Member,
        FuzzSuiteArg::Outcome => Suite::Outcome,
        FuzzSuiteArg::All => Suite::All,
    };
    let r = a.function.function();
    let agg = a.agg.aggregator();
    let report = fuzz(&cfg, &FuzzSubject::new(r.clone(), agg.clone(), suite), &l)?;
    let claim = |axiom: AxiomId| {
        if AxiomId::MEMBER.contains(&axiom) {
            claimed_member(r.name(), axiom)
        } else {
            outcome_claim(r.name(), &agg, axiom)
        }
    };
    let mut tally = Tally::default();
    for rep in &report.reports {
        tally.add(rep, claim(rep.axiom));
    }
    match c.format {
        Format::Table => {
            writeln!(
                out,
                "fuzz seed={} trees={} regenerated={} clamped={} function={} aggregator={}",
                a.seed,
                report.trees,
                report.regenerated,
                report.clamped_values,
                r.name(),
                agg.name()
            )?;
            for rep in &report.reports {
                let n = report.violating_trees.get(rep.axiom.label()).copied().unwrap_or(0);
                writeln!(out, "{}  violating trees={n}", report_line(rep, claim(rep.axiom)))?;
                for note in &rep.notes {
                    writeln!(out, "      note: {note}")?;
                }
            }
            writeln!(out, "{}", tally.summary())?;
        }
        Format::Structured => {
            let mut v = serde_json::to_value(&report).expect("report serializes");
            v["violations"] = json!(tally.violations);
            v["unexpected"] = json!(tally.unexpected);
            print_json(out, &v)?;
        }
    }
    Ok(tally.code())
}

fn examples(c: &Common, name: Option<&str>, out: &mut dyn Write) -> Result<i32, CliError> {
    match name {
        None => {
            for n in BUILTIN_NAMES {
                writeln!(out, "{n}")?;
            }
        }
        Some(n) => {
            let t = builtin(n, c.p).map_err(|e| CliError::Usage(e.to_string()))?;
            match c.format {
                Format::Table => write!(out, "{}", to_canonical(&t))?,
                Format::Structured => print_json(out, &serde_json::to_value(RawTree::from_tree(&t)).expect("tree serializes"))?,
            }
        }
    }
    Ok(EXIT_OK)
}
