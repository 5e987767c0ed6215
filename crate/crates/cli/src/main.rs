mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use twophase::elab::{elaborate_program_with, Elab, ElabConfig};
use twophase::harness::{fuzz_trials, FuzzConfig, FuzzSummary};
use twophase::infer::{infer_program, InferConfig, Solved};
use twophase::logic::{to_smtlib, Budget, Pred, Vc, Verdict};
use twophase::machine::{Outcome, Run};
use twophase::par::Strategy;
use twophase::refine::{check_refined_with, gen_vcs, RefEnv, RefineConfig};
use twophase::source_interp::run_source;
use twophase::syntax::{parse_pred, parse_source, Program};
use twophase::target_interp::run_target;

use config::Config;

const EXIT_REJECTED: u8 = 1;
const EXIT_PHASE1: u8 = 2;
const EXIT_FUEL: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;
const EXIT_NOINPUT: u8 = 66;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(name = "twophase", version)]
#[command(about = "Two-phase checker for value-overloaded programs: elaborate with DEAD-casts, then verify them")]
struct Cli {
    /// Emit structured JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// TOML file with default settings
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run both phases; exit 0 if accepted, 1 on a failing VC, 2 if elaboration fails
    Check {
        file: PathBuf,
        /// Print every VC with its origin, environment and verdict
        #[arg(long)]
        explain: bool,
    },
    /// Print the elaborated target program and its type
    Elaborate {
        file: PathBuf,
        #[arg(long)]
        trace: bool,
    },
    /// Evaluate the source program or its elaboration
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "src")]
        lang: Lang,
        #[arg(long)]
        fuel: Option<usize>,
        /// Print every intermediate term
        #[arg(long)]
        trace: bool,
    },
    /// List the verification conditions of the elaborated program
    Vcs {
        file: PathBuf,
        /// Write one SMT-LIB2 script per VC into this directory
        #[arg(long)]
        smtlib: Option<PathBuf>,
        /// Include syntactically trivial VCs
        #[arg(long)]
        all: bool,
    },
    /// Infer refinements for unannotated positions
    Infer {
        file: PathBuf,
        /// Candidate predicates, one per line
        #[arg(long)]
        preds: Option<PathBuf>,
    },
    /// Differential testing of the two semantics on generated programs
    Fuzz {
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        fuel: Option<usize>,
        #[arg(long)]
        size: Option<usize>,
        /// Run trials on one thread
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Lang {
    Src,
    Tgt,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

type Res<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if json {
                say(json!({ "error": f.message, "exit": f.code }));
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Res<u8> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path).map_err(|e| Failure::new(EXIT_USAGE, e))?,
        None => Config::default(),
    };
    let out = Out { json: cli.json };
    match cli.command {
        Command::Check { file, explain } => check(&out, &cfg, &file, explain),
        Command::Elaborate { file, trace } => {
            cfg.trace |= trace;
            elaborate(&out, &cfg, &file)
        }
        Command::Run { file, lang, fuel, trace } => {
            cfg.fuel = fuel.unwrap_or(cfg.fuel);
            cfg.trace |= trace;
            run_program(&out, &cfg, &file, lang)
        }
        Command::Vcs { file, smtlib, all } => {
            cfg.smtlib = smtlib.or(cfg.smtlib);
            vcs(&out, &cfg, &file, all)
        }
        Command::Infer { file, preds } => {
            cfg.preds = preds.or(cfg.preds);
            infer(&out, &cfg, &file)
        }
        Command::Fuzz { trials, seed, fuel, size, sequential } => {
            cfg.trials = trials.unwrap_or(cfg.trials);
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.fuel = fuel.unwrap_or(cfg.fuel);
            cfg.size = size.unwrap_or(cfg.size);
            cfg.sequential |= sequential;
            fuzz(&out, &cfg)
        }
    }
}

/// Print a line, ignoring a closed stdout (e.g. when piped into `head`).
fn say(line: impl std::fmt::Display) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

struct Out {
    json: bool,
}

impl Out {
    /// Print `value` in JSON mode, or the lines produced by `text` otherwise.
    fn emit(&self, value: Value, text: impl FnOnce() -> Vec<String>) {
        if self.json {
            say(value);
        } else {
            for line in text() {
                say(line);
            }
        }
    }
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_NOINPUT, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Res<Program> {
    parse_source(&read(path)?).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn strategy(cfg: &Config) -> Strategy {
    if cfg.sequential {
        Strategy::Sequential
    } else {
        Strategy::Parallel
    }
}

fn refine_config(cfg: &Config) -> RefineConfig {
    RefineConfig { budget: Budget { clauses: cfg.clause_budget }, strategy: strategy(cfg) }
}

fn elab(cfg: &Config, p: &Program) -> Res<Elab> {
    let config = ElabConfig { budget: cfg.search_depth, ..ElabConfig::default() };
    elaborate_program_with(p, config).map_err(|e| Failure::new(EXIT_PHASE1, format!("phase 1: {e}")))
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_INTERNAL, format!("internal error: {e}"))
}

fn vc_json(vc: &Vc, verdict: Option<&Verdict>) -> Value {
    json!({
        "vc": vc.to_string(),
        "canonical": vc.canonical(),
        "environment": vc.hypotheses_text(),
        "origin": vc.origin,
        "trivial": vc.is_trivial(),
        "verdict": verdict,
    })
}

fn check(out: &Out, cfg: &Config, file: &Path, explain: bool) -> Res<u8> {
    let p = load(file)?;
    let e = match elab(cfg, &p) {
        Ok(e) => e,
        Err(f) => {
            out.emit(json!({ "file": file, "accepted": false, "phase": 1, "error": f.message }), || {
                vec![format!("rejected: {}", f.message)]
            });
            return Ok(EXIT_PHASE1);
        }
    };
    let report = check_refined_with(&RefEnv::new(), &e.target, None, refine_config(cfg)).map_err(internal)?;
    let accepted = report.accepted();
    let vcs: Vec<Value> = report.vcs.iter().zip(&report.verdicts).map(|(vc, v)| vc_json(vc, Some(v))).collect();
    out.emit(
        json!({ "file": file, "accepted": accepted, "type": e.ty.to_string(), "target": e.target.to_string(), "vcs": vcs }),
        || {
            let mut lines = vec![if accepted { "accepted".to_string() } else { "rejected".to_string() }];
            lines.push(format!("type: {}", e.ty));
            let shown: Vec<(&Vc, &Verdict)> = if explain { report.obligations() } else { report.failures() };
            for (vc, v) in shown {
                lines.push(format!("{vc}"));
                if explain {
                    let within = vc.origin.within.as_deref().map(|w| format!(" in {w}")).unwrap_or_default();
                    lines.push(format!("  origin: {} at {}{within}", vc.origin.kind.as_str(), vc.origin.site));
                    lines.push(format!("  environment: {}", vc.hypotheses_text()));
                }
                lines.push(format!("  {v}"));
            }
            lines
        },
    );
    Ok(if accepted { 0 } else { EXIT_REJECTED })
}

fn elaborate(out: &Out, cfg: &Config, file: &Path) -> Res<u8> {
    let p = load(file)?;
    let e = elab(cfg, &p)?;
    out.emit(
        json!({ "type": e.ty.to_string(), "target": e.target.to_string(), "dead_casts": e.target.count_dead(), "trace": e.trace }),
        || {
            let mut lines = vec![e.target.to_string(), format!(": {}", e.ty)];
            if cfg.trace {
                lines.push(format!("rules: {}", e.trace.join(" ")));
            }
            lines
        },
    );
    Ok(0)
}

fn describe<E: std::fmt::Display>(run: &Run<E>, trace: bool) -> (Value, Vec<String>, u8) {
    let steps: Vec<Value> = run.steps.iter().map(|(rule, e)| json!({ "rule": rule, "term": e.to_string() })).collect();
    let (kind, code) = match &run.outcome {
        Outcome::Value(_) => ("value", 0),
        Outcome::StuckAt { .. } => ("stuck", EXIT_REJECTED),
        Outcome::FuelExhausted(_) => ("fuel-exhausted", EXIT_FUEL),
    };
    let mut value = json!({ "outcome": kind, "result": run.outcome.to_string(), "steps": run.taken });
    if let Outcome::StuckAt { reason, focus, .. } = &run.outcome {
        value["reason"] = json!(reason);
        value["focus"] = json!(focus.to_string());
    }
    let mut lines = Vec::new();
    if trace {
        value["trace"] = json!(steps);
        lines.push(format!("0: {}", run.start));
        for (i, (rule, e)) in run.steps.iter().enumerate() {
            lines.push(format!("{}: [{rule}] {e}", i + 1));
        }
    }
    lines.push(format!("{} after {} steps", run.outcome, run.taken));
    (value, lines, code)
}

fn run_program(out: &Out, cfg: &Config, file: &Path, lang: Lang) -> Res<u8> {
    let p = load(file)?;
    let (value, lines, code) = match lang {
        Lang::Src => describe(&run_source(&p.main, cfg.fuel), cfg.trace),
        Lang::Tgt => describe(&run_target(&elab(cfg, &p)?.target, cfg.fuel), cfg.trace),
    };
    out.emit(value, || lines);
    Ok(code)
}

fn vcs(out: &Out, cfg: &Config, file: &Path, all: bool) -> Res<u8> {
    let p = load(file)?;
    let e = elab(cfg, &p)?;
    let (_, vcs) = gen_vcs(&RefEnv::new(), &e.target, None).map_err(internal)?;
    let vcs: Vec<Vc> = vcs.into_iter().filter(|vc| all || !vc.is_trivial()).collect();
    if let Some(dir) = &cfg.smtlib {
        std::fs::create_dir_all(dir).map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", dir.display())))?;
        for (i, vc) in vcs.iter().enumerate() {
            let path = dir.join(format!("vc{}.smt2", i + 1));
            std::fs::write(&path, to_smtlib(vc))
                .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?;
        }
    }
    let items: Vec<Value> = vcs.iter().map(|vc| vc_json(vc, None)).collect();
    out.emit(json!({ "vcs": items }), || vcs.iter().map(|vc| vc.to_string()).collect());
    Ok(0)
}

fn read_preds(path: &Path) -> Res<Vec<Pred>> {
    let text = read(path)?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with("//"))
        .map(|l| parse_pred(l, None).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display()))))
        .collect()
}

fn infer(out: &Out, cfg: &Config, file: &Path) -> Res<u8> {
    let p = load(file)?;
    let preds = cfg.preds.as_deref().map(read_preds).transpose()?;
    let config = InferConfig { budget: Budget { clauses: cfg.clause_budget }, strategy: strategy(cfg) };
    let inf = infer_program(&p, preds.as_deref(), config).map_err(|e| match e {
        twophase::infer::InferError::Elab(e) => Failure::new(EXIT_PHASE1, format!("phase 1: {e}")),
        e => internal(e),
    })?;
    let kappas: Vec<String> = inf.kappas.iter().map(|k| k.to_string()).collect();
    let clauses: Vec<String> = inf.clauses.iter().map(|c| c.to_string()).collect();
    let (solved, solution, failing) = match &inf.outcome {
        Solved::Solution(s) => (true, s, None),
        Solved::Unsat { clause, best } => (false, best, Some(clause.to_string())),
    };
    let assignment: Vec<String> = inf.kappas.iter().map(|k| format!("k{} := {}", k.id, solution.get(k.id))).collect();
    let annotated = inf.annotated.as_ref().map(|p| p.to_string());
    out.emit(
        json!({
            "kappas": kappas,
            "clauses": clauses,
            "solved": solved,
            "solution": assignment,
            "failing_clause": failing,
            "annotated": annotated,
        }),
        || {
            let mut lines = vec![format!("templated: {}", inf.templated)];
            lines.extend(kappas.iter().cloned());
            lines.push(format!("{} clauses", clauses.len()));
            lines.extend(clauses.iter().map(|c| format!("  {c}")));
            lines.extend(assignment.iter().cloned());
            match (&failing, &annotated) {
                (Some(c), _) => lines.push(format!("no solution; violated clause: {c}")),
                (None, Some(a)) => lines.push(format!("annotated: {a}")),
                (None, None) => {}
            }
            lines
        },
    );
    Ok(if solved { 0 } else { EXIT_REJECTED })
}

fn fuzz(out: &Out, cfg: &Config) -> Res<u8> {
    if cfg.size == 0 {
        return Err(Failure::new(EXIT_USAGE, "--size must be at least 1"));
    }
    let config = FuzzConfig { trials: cfg.trials, seed: cfg.seed, fuel: cfg.fuel, size: cfg.size, strategy: strategy(cfg) };
    let reports = fuzz_trials(&config);
    let sum = FuzzSummary::from_reports(&reports);
    if out.json {
        for r in &reports {
            say(serde_json::to_string(r).map_err(internal)?);
        }
    } else {
        say(format!(
            "{} trials: {} agree, {} inconclusive, {} counterexamples; {} accepted by both phases, {} soundness violations, {} property violations",
            sum.trials,
            sum.agree,
            sum.inconclusive,
            sum.counterexamples.len(),
            sum.accepted,
            sum.soundness_violations.len(),
            sum.property_violations.len()
        ));
        say(format!("{} runs met a DEAD-cast, {} got stuck at one", sum.with_dead, sum.stuck_at_dead));
        for r in &sum.counterexamples {
            say(format!("seed {}: {:?}", r.seed, r.diff.verdict));
            say(format!("  program: {}", r.diff.program));
            if let Some(s) = &r.shrunk {
                say(format!("  shrunk: {s}"));
            }
            say(format!("  source: {}", r.diff.source_outcome));
            say(format!("  target: {}", r.diff.target_outcome));
        }
        for r in sum.soundness_violations.iter().chain(&sum.property_violations) {
            say(format!("seed {}: {:?} {:?}", r.seed, r.soundness, r.property_violations));
        }
    }
    Ok(if sum.clean() { 0 } else { EXIT_REJECTED })
}
