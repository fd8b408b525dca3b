//! The `abcsat` command line.
//!
//! Exit codes: 0 ok, 1 I/O or runtime failure, 2 invalid arguments or input,
//! 3 a check or verification failed, 4 a transformer precondition does not
//! hold, 10 satisfiable, 20 unsatisfiable.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::axioms::{check, Axiom, SpVariant};
use crate::cnf::Cnf;
use crate::encoder::{encode_with, EncodeConfig, Encoding, Manifest, ProportionalityMode};
use crate::error::Error;
use crate::model::{parse_ordering, Ballot, ElectionParams};
use crate::mus::{extract_mus, render_mus, verify_mus, write_gcnf, MusOptions};
use crate::proofs::{
    droop_reduce, reduce_alternatives, reduce_committee_size, reduce_voters, replay, ProofScript,
};
use crate::report::{Metadata, VerdictReport};
use crate::rules::{build_table_in, profile_cap, random_table, Domain, Rule, RuleTable};
use crate::solver::{self, decode_model, verify_model, SolverConfig, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;
pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;

#[derive(Debug, Parser)]
#[command(name = "abcsat", version, about = "Committee rules, axiom checks and SAT-based impossibility proofs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Worker threads for encoding and tabulation.
    #[arg(long, default_value_t = 1, global = true)]
    pub threads: usize,
    /// Refuse to enumerate more profiles than this.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode the axioms as DIMACS CNF plus a JSON manifest.
    Encode(EncodeCmd),
    /// Solve a CNF file or an inline encoding.
    Solve(SolveCmd),
    /// Check a rule against axioms.
    CheckRule(CheckRuleCmd),
    /// Extract a group-minimal unsatisfiable core.
    ExtractMus(MusCmd),
    /// Replay the base-case proof or a proof script.
    ReplayProof(ReplayCmd),
    /// Apply an induction-step transformer to a table.
    Reduce(ReduceCmd),
    /// Write the table of a named rule.
    Table(TableCmd),
    /// Write a seeded random table.
    RandomTable(RandomTableCmd),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Number of candidates.
    #[arg(short = 'm')]
    pub m: Option<usize>,
    /// Number of voters.
    #[arg(short = 'n')]
    pub n: Option<usize>,
    /// Committee size.
    #[arg(short = 'k')]
    pub k: Option<usize>,
}

impl ParamArgs {
    fn given(&self) -> bool {
        self.m.is_some() || self.n.is_some() || self.k.is_some()
    }

    fn params(&self) -> Result<ElectionParams, Error> {
        match (self.m, self.n, self.k) {
            (Some(m), Some(n), Some(k)) => ElectionParams::new(m, n, k),
            _ => Err(Error::InvalidParams("-m, -n and -k are all required".into())),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// hare, jr-party or droop.
    #[arg(long, default_value = "hare")]
    pub prop: String,
    /// subset or superset.
    #[arg(long, default_value = "subset")]
    pub sp: String,
    /// Add weak efficiency
    #[arg(long)]
    pub weak_eff: bool,
    /// Fix the committee at one profile
    #[arg(long)]
    pub symmetry_break: bool,
    /// Restrict to candidate-interval profiles for this order, e.g. `abcd`.
    /// Restrict to candidate-interval profiles for this order
    #[arg(long)]
    pub ci_order: Option<String>,
}

impl EncodeArgs {
    fn config(&self) -> Result<EncodeConfig, Error> {
        let params = self.params.params()?;
        let sp: SpVariant = self.sp.parse()?;
        let prop: ProportionalityMode = self.prop.parse()?;
        let order = self.ci_order.as_deref().map(|s| parse_ordering(s, params.m)).transpose()?;
        let cfg = EncodeConfig::new(params)
            .sp(sp)
            .proportionality(prop)
            .weak_efficiency(self.weak_eff)
            .symmetry_break(self.symmetry_break)
            .ci_order(order);
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct EncodeCmd {
    #[command(flatten)]
    pub encoding: EncodeArgs,
    /// DIMACS output; the manifest goes to `<out>.manifest.json`.
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
    /// Also write grouped DIMACS.
    #[arg(long)]
    pub gcnf: Option<PathBuf>,
    /// Omit the variable-naming comments.
    #[arg(long)]
    pub no_comments: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Give up after this many conflicts
    #[arg(long)]
    pub conflict_limit: Option<u64>,
    /// Disable restarts
    #[arg(long)]
    pub no_restarts: bool,
    /// Never delete learnt clauses
    #[arg(long)]
    pub no_deletion: bool,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            restarts: !self.no_restarts,
            clause_deletion: !self.no_deletion,
            conflict_limit: self.conflict_limit,
            ..SolverConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveCmd {
    /// DIMACS file; omit to encode from the flags.
    pub cnf: Option<PathBuf>,
    /// Manifest for the CNF file (default `<cnf>.manifest.json` if present).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[command(flatten)]
    pub encoding: EncodeArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Where to write the decoded table on SAT.
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckRuleCmd {
    /// `av`, `pav` or `table:<path>`.
    pub rule: String,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Restrict to candidate-interval profiles for this order
    #[arg(long)]
    pub ci_order: Option<String>,
    /// Comma-separated axiom names, or `all`.
    #[arg(long, default_value = "all")]
    pub axioms: String,
}

#[derive(Debug, Args)]
pub struct MusCmd {
    /// DIMACS file; omit to encode from the flags.
    pub cnf: Option<PathBuf>,
    /// Manifest for the CNF file
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[command(flatten)]
    pub encoding: EncodeArgs,
    /// Let totality and uniqueness clauses be deleted too.
    #[arg(long)]
    pub full_clauses: bool,
    /// Write the core as DIMACS.
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
    /// Write the input as grouped DIMACS.
    #[arg(long)]
    pub gcnf: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct ReplayCmd {
    /// Proof script JSON; defaults to the built-in base case.
    #[arg(long)]
    pub script: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reduction {
    Voters,
    Alternatives,
    Committee,
    Droop,
}

#[derive(Debug, Args)]
pub struct ReduceCmd {
    pub kind: Reduction,
    /// Input table JSON.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Multiplier q of the `voters` and `droop` transformers
    #[arg(long)]
    pub q: Option<usize>,
    /// Fixed ballots for `droop`, comma-separated.
    #[arg(long)]
    pub fixed: Option<String>,
    #[arg(short = 'o', long = "out")]
    pub out: Option<PathBuf>,
    /// Axioms to track from input to output, or `all`.
    #[arg(long, default_value = "all")]
    pub axioms: String,
}

#[derive(Debug, Args)]
pub struct TableCmd {
    pub rule: Rule,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Restrict to candidate-interval profiles for this order
    #[arg(long)]
    pub ci_order: Option<String>,
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RandomTableCmd {
    #[command(flatten)]
    pub params: ParamArgs,
    /// RNG seed
    #[arg(long)]
    pub seed: u64,
    /// Copy this rule's committee at each profile with probability `--bias`.
    #[arg(long)]
    pub base: Option<Rule>,
    #[arg(long, default_value_t = 0.0)]
    pub bias: f64,
    /// Restrict to candidate-interval profiles for this order
    #[arg(long)]
    pub ci_order: Option<String>,
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

impl clap::ValueEnum for Rule {
    fn value_variants<'a>() -> &'a [Self] {
        &[Rule::Av, Rule::Pav]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            Rule::Av => "av",
            Rule::Pav => "pav",
        }))
    }
}

/// What a command produced: an exit code, a text summary and a JSON body.
struct Outcome {
    code: i32,
    text: String,
    json: Value,
}

struct Ctx {
    cap: u64,
    threads: usize,
}

/// Maps a library error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Aborted => EXIT_RUNTIME,
        Error::Precondition(_) => EXIT_PRECONDITION,
        Error::Decode(_) | Error::ProofStep { .. } => EXIT_CHECK_FAILED,
        Error::Satisfiable => EXIT_SAT,
        Error::EmptyAllowedSet(_) => EXIT_UNSAT,
        _ => EXIT_USAGE,
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let ctx = Ctx {
        cap: cli.global.cap.unwrap_or_else(profile_cap),
        threads: cli.global.threads.max(1),
    };
    let name = command_name(&cli.command);
    let result = match &cli.command {
        Command::Encode(c) => cmd_encode(c, &ctx),
        Command::Solve(c) => cmd_solve(c, &ctx),
        Command::CheckRule(c) => cmd_check_rule(c, &ctx),
        Command::ExtractMus(c) => cmd_extract_mus(c, &ctx),
        Command::ReplayProof(c) => cmd_replay(c),
        Command::Reduce(c) => cmd_reduce(c, &ctx),
        Command::Table(c) => cmd_table(c, &ctx),
        Command::RandomTable(c) => cmd_random_table(c, &ctx),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let doc = json!({
        "command": name,
        "exit_code": outcome.code,
        "metadata": Metadata::current(ctx.cap, ctx.threads),
        "result": outcome.json,
    });
    let pretty = serde_json::to_string_pretty(&doc).expect("report serialises");
    if let Some(path) = &cli.global.report {
        if let Err(e) = std::fs::write(path, format!("{pretty}\n")) {
            eprintln!("error: writing {}: {e}", path.display());
            return EXIT_RUNTIME;
        }
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let printed = match cli.global.format {
        Format::Text => write!(out, "{}", outcome.text),
        Format::Json => writeln!(out, "{pretty}"),
    };
    if printed.and_then(|_| out.flush()).is_err() {
        return EXIT_RUNTIME;
    }
    outcome.code
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Encode(_) => "encode",
        Command::Solve(_) => "solve",
        Command::CheckRule(_) => "check-rule",
        Command::ExtractMus(_) => "extract-mus",
        Command::ReplayProof(_) => "replay-proof",
        Command::Reduce(_) => "reduce",
        Command::Table(_) => "table",
        Command::RandomTable(_) => "random-table",
    }
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("report serialises")
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn manifest_path(cnf: &Path) -> PathBuf {
    let mut s = cnf.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write_table(t: &RuleTable, path: &Path) -> Result<(), Error> {
    std::fs::write(path, format!("{}\n", t.to_json()))?;
    Ok(())
}

fn read_table(path: &Path, cap: u64) -> Result<RuleTable, Error> {
    let doc = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    RuleTable::from_document(doc, cap)
}

fn parse_axioms(list: &str, params: &ElectionParams) -> Result<Vec<Axiom>, Error> {
    if list.trim() == "all" {
        return Ok(default_axioms(params));
    }
    let axioms = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<Axiom>, _>>()?;
    if axioms.is_empty() {
        return Err(Error::Unknown("empty axiom list".into()));
    }
    Ok(axioms)
}

/// Every axiom, leaving out the singleton-approver condition unless `m = k + 1`.
fn default_axioms(params: &ElectionParams) -> Vec<Axiom> {
    Axiom::ALL
        .iter()
        .copied()
        .filter(|a| *a != Axiom::SingletonApprovers || params.m == params.k + 1)
        .collect()
}

/// Loads a formula from a file, with its encoding when a manifest is found,
/// or encodes one from the flags.
fn load_formula(
    cnf: Option<&Path>,
    manifest: Option<&Path>,
    args: &EncodeArgs,
    ctx: &Ctx,
) -> Result<(Cnf, Option<Encoding>), Error> {
    match cnf {
        None => {
            let enc = encode_with(&args.config()?, ctx.cap, ctx.threads)?;
            Ok((enc.cnf.clone(), Some(enc)))
        }
        Some(path) => {
            if args.params.given() {
                return Err(Error::InvalidParams("give either a CNF file or -m/-n/-k, not both".into()));
            }
            let cnf = Cnf::parse_dimacs(BufReader::new(File::open(path)?))?;
            let mpath = match manifest {
                Some(p) => Some(p.to_path_buf()),
                None => Some(manifest_path(path)).filter(|p| p.exists()),
            };
            match mpath {
                None => Ok((cnf, None)),
                Some(mp) => {
                    let m: Manifest = serde_json::from_reader(BufReader::new(File::open(&mp)?))?;
                    let enc = Encoding::from_manifest(cnf, &m)?;
                    Ok((enc.cnf.clone(), Some(enc)))
                }
            }
        }
    }
}

fn cmd_encode(c: &EncodeCmd, ctx: &Ctx) -> Result<Outcome, Error> {
    let cfg = c.encoding.config()?;
    let enc = encode_with(&cfg, ctx.cap, ctx.threads)?;
    let mut files = Vec::new();
    if let Some(path) = &c.out {
        let mut w = create(path)?;
        enc.cnf.write_dimacs(&mut w, (!c.no_comments).then_some(&enc.varmap))?;
        w.flush()?;
        let mpath = manifest_path(path);
        let mut w = create(&mpath)?;
        serde_json::to_writer(&mut w, &enc.manifest())?;
        writeln!(w)?;
        w.flush()?;
        files.push(path.display().to_string());
        files.push(mpath.display().to_string());
    }
    if let Some(path) = &c.gcnf {
        let mut w = create(path)?;
        write_gcnf(&enc.cnf, true, &mut w)?;
        w.flush()?;
        files.push(path.display().to_string());
    }
    let mut text = format!(
        "{cfg}\nprofiles: {}\nvariables: {}\nclauses: {}\ngroups: {}\n",
        enc.domain().len(),
        enc.cnf.num_vars(),
        enc.cnf.num_clauses(),
        enc.cnf.groups().len()
    );
    for f in &files {
        text.push_str(&format!("wrote {f}\n"));
    }
    Ok(Outcome {
        code: EXIT_OK,
        text,
        json: json!({
            "config": cfg,
            "profiles": enc.domain().len(),
            "variables": enc.cnf.num_vars(),
            "clauses": enc.cnf.num_clauses(),
            "groups": enc.cnf.groups().len(),
            "files": files,
        }),
    })
}

fn cmd_solve(c: &SolveCmd, ctx: &Ctx) -> Result<Outcome, Error> {
    let (cnf, enc) = load_formula(c.cnf.as_deref(), c.manifest.as_deref(), &c.encoding, ctx)?;
    if c.out.is_some() && enc.is_none() {
        return Err(Error::InvalidParams("writing a table needs the formula's manifest".into()));
    }
    let res = solver::solve_with(&cnf, &[], c.solver.config());
    let mut body = json!({
        "status": res.status,
        "variables": cnf.num_vars(),
        "clauses": cnf.num_clauses(),
        "stats": res.stats,
    });
    let s = &res.stats;
    let mut text = String::new();
    let code = match res.status {
        Verdict::Aborted => {
            text.push_str(&format!("ABORTED after {} conflicts\n", s.conflicts));
            EXIT_RUNTIME
        }
        Verdict::Unsatisfiable => {
            text.push_str("UNSAT\n");
            EXIT_UNSAT
        }
        Verdict::Satisfiable => {
            text.push_str("SAT\n");
            let model = res.model.as_deref().expect("SAT result has a model");
            let model_ok = verify_model(&cnf, model)?;
            body["model_verified"] = json!(model_ok);
            let mut code = if model_ok { EXIT_SAT } else { EXIT_CHECK_FAILED };
            if !model_ok {
                text.push_str("model does NOT satisfy the formula\n");
            }
            match &enc {
                None => body["model"] = json!(res.model_lits()),
                Some(enc) => {
                    let table = decode_model(model, &enc.varmap)?;
                    let verdicts: Vec<VerdictReport> = enc
                        .config
                        .axioms()
                        .into_iter()
                        .map(|a| VerdictReport::from(&check(&table, a)))
                        .collect();
                    for v in &verdicts {
                        text.push_str(&format!("  {}\n", v.to_text()));
                    }
                    if verdicts.iter().any(|v| !v.passed) {
                        code = EXIT_CHECK_FAILED;
                    }
                    body["verdicts"] = to_value(&verdicts);
                    if let Some(path) = &c.out {
                        write_table(&table, path)?;
                        text.push_str(&format!("wrote {}\n", path.display()));
                        body["table"] = json!(path.display().to_string());
                    }
                }
            }
            code
        }
    };
    text.push_str(&format!(
        "{} variables, {} clauses; {} decisions, {} conflicts, {} restarts\n",
        cnf.num_vars(),
        cnf.num_clauses(),
        s.decisions,
        s.conflicts,
        s.restarts
    ));
    Ok(Outcome { code, text, json: body })
}

fn cmd_check_rule(c: &CheckRuleCmd, ctx: &Ctx) -> Result<Outcome, Error> {
    let table = match c.rule.strip_prefix("table:") {
        Some(path) => {
            if c.params.given() || c.ci_order.is_some() {
                return Err(Error::InvalidParams("a table file carries its own parameters".into()));
            }
            read_table(Path::new(path), ctx.cap)?
        }
        None => {
            let rule: Rule = c.rule.parse()?;
            let params = c.params.params()?;
            let order = c.ci_order.as_deref().map(|s| parse_ordering(s, params.m)).transpose()?;
            build_table_in(rule, Domain::build(&params, order, ctx.cap)?, ctx.threads)?
        }
    };
    let axioms = parse_axioms(&c.axioms, table.params())?;
    let verdicts: Vec<VerdictReport> = axioms.iter().map(|&a| VerdictReport::from(&check(&table, a))).collect();
    let failed = verdicts.iter().filter(|v| !v.passed).count();
    let mut text = format!("{} at {}\n", c.rule, table.params());
    for v in &verdicts {
        text.push_str(&v.to_text());
        text.push('\n');
    }
    Ok(Outcome {
        code: if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED },
        text,
        json: json!({ "rule": c.rule, "params": table.params(), "verdicts": verdicts }),
    })
}

fn cmd_extract_mus(c: &MusCmd, ctx: &Ctx) -> Result<Outcome, Error> {
    let (cnf, enc) = load_formula(c.cnf.as_deref(), c.manifest.as_deref(), &c.encoding, ctx)?;
    let opts = MusOptions {
        hard_function_constraints: !c.full_clauses,
        solver: c.solver.config(),
    };
    if let Some(path) = &c.gcnf {
        let mut w = create(path)?;
        write_gcnf(&cnf, opts.hard_function_constraints, &mut w)?;
        w.flush()?;
    }
    let mus = extract_mus(&cnf, &opts)?;
    let check = verify_mus(&cnf, &mus);
    let report = render_mus(&mus, &cnf, enc.as_ref())?;
    if let Some(path) = &c.out {
        let mut w = create(path)?;
        mus.to_cnf(&cnf).write_dimacs(&mut w, None)?;
        w.flush()?;
    }
    let mut text = report.to_text();
    text.push_str(&format!(
        "re-verified: unsatisfiable {}, minimal {} ({} extraction calls)\n",
        check.unsatisfiable, check.minimal, mus.solver_calls
    ));
    Ok(Outcome {
        code: if check.unsatisfiable && check.minimal { EXIT_OK } else { EXIT_CHECK_FAILED },
        text,
        json: json!({
            "core": report,
            "group_ids": mus.group_ids(),
            "solver_calls": mus.solver_calls,
            "check": check,
        }),
    })
}

fn cmd_replay(c: &ReplayCmd) -> Result<Outcome, Error> {
    let script = match &c.script {
        Some(p) => ProofScript::from_json(&std::fs::read_to_string(p)?)?,
        None => ProofScript::base_case(),
    };
    let report = replay(&script)?;
    Ok(Outcome {
        code: if report.verified { EXIT_OK } else { EXIT_CHECK_FAILED },
        text: report.to_text(),
        json: to_value(&report),
    })
}

#[derive(Serialize)]
struct Inheritance {
    axiom: String,
    input: bool,
    output: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

fn cmd_reduce(c: &ReduceCmd, ctx: &Ctx) -> Result<Outcome, Error> {
    let input = read_table(&c.input, ctx.cap)?;
    let need_q = || c.q.ok_or_else(|| Error::InvalidParams("--q is required".into()));
    let output = match c.kind {
        Reduction::Voters => reduce_voters(&input, need_q()?)?,
        Reduction::Alternatives => reduce_alternatives(&input)?,
        Reduction::Committee => reduce_committee_size(&input)?,
        Reduction::Droop => {
            let m = input.params().m;
            let fixed = c
                .fixed
                .as_deref()
                .unwrap_or("")
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| Ballot::parse(s, m))
                .collect::<Result<Vec<_>, _>>()?;
            droop_reduce(&input, need_q()?, &fixed)?
        }
    };
    // Axioms are tracked only where they make sense for both tables.
    let mut axioms = parse_axioms(&c.axioms, input.params())?;
    if c.axioms.trim() == "all" {
        let keep = default_axioms(output.params());
        axioms.retain(|a| keep.contains(a));
    }
    let mut rows = Vec::new();
    let mut lost = 0;
    let mut text = format!("{:?}: {} -> {}\n", c.kind, input.params(), output.params());
    for a in axioms {
        let before = check(&input, a).passed;
        let after = check(&output, a);
        if before && !after.passed {
            lost += 1;
        }
        let mark = match (before, after.passed) {
            (true, true) => "inherited",
            (true, false) => "LOST",
            (false, true) => "gained",
            (false, false) => "fails in both",
        };
        text.push_str(&format!("  {a}: {mark}\n"));
        rows.push(Inheritance {
            axiom: a.name().to_string(),
            input: before,
            output: after.passed,
            witness: after.witness.map(|w| w.to_string()),
        });
    }
    if let Some(path) = &c.out {
        write_table(&output, path)?;
        text.push_str(&format!("wrote {}\n", path.display()));
    }
    Ok(Outcome {
        code: if lost == 0 { EXIT_OK } else { EXIT_CHECK_FAILED },
        text,
        json: json!({
            "input_params": input.params(),
            "output_params": output.params(),
            "axioms": rows,
        }),
    })
}

fn domain_for(params: &ParamArgs, ci_order: Option<&str>, ctx: &Ctx) -> Result<std::sync::Arc<Domain>, Error> {
    let params = params.params()?;
    let order = ci_order.map(|s| parse_ordering(s, params.m)).transpose()?;
    Domain::build(&params, order, ctx.cap)
}

fn cmd_table(c: &TableCmd, ctx: &Ctx) -> Result<Outcome, Error> {
    let t = build_table_in(c.rule, domain_for(&c.params, c.ci_order.as_deref(), ctx)?, ctx.threads)?;
    write_table(&t, &c.out)?;
    Ok(Outcome {
        code: EXIT_OK,
        text: format!("wrote {} entries to {}\n", t.len(), c.out.display()),
        json: json!({ "params": t.params(), "entries": t.len() }),
    })
}

fn cmd_random_table(c: &RandomTableCmd, ctx: &Ctx) -> Result<Outcome, Error> {
    if !(0.0..=1.0).contains(&c.bias) {
        return Err(Error::InvalidParams(format!("--bias must lie in [0, 1], got {}", c.bias)));
    }
    let domain = domain_for(&c.params, c.ci_order.as_deref(), ctx)?;
    let base = c.base.map(|r| build_table_in(r, domain.clone(), ctx.threads)).transpose()?;
    let t = random_table(domain, c.seed, base.as_ref(), c.bias)?;
    write_table(&t, &c.out)?;
    Ok(Outcome {
        code: EXIT_OK,
        text: format!("wrote {} entries to {}\n", t.len(), c.out.display()),
        json: json!({ "params": t.params(), "entries": t.len(), "seed": c.seed }),
    })
}
