//! Command-line front end.
//!
//! Exit codes: 0 true/pass/found/halts, 1 false/fail/none-found/no-halt,
//! 2 undecided or budget exhausted, 3 input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::encoder::{
    encode_grid, encode_phi, encode_sane, encode_transitions, reduction_formula, stats,
    EncodingVocabulary, Reduction,
};
use crate::gridmodel::{build_grid_model, verify_run_encoding};
use crate::kripke::Model;
use crate::semantics::{
    eval, sat_search, EvalConfig, QuantMode, QuantStrategy, SatOutcome, Verdict,
    DEFAULT_MAX_PROFILES,
};
use crate::syntax::{parse_formula, Formula};
use crate::turing::{halts_within, run as run_machine, HaltResult, TuringMachine};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

const DEFAULT_MAX_CLAUSES: usize = 3;
const DEFAULT_MAX_DEPTH: usize = 2;

#[derive(Debug, Parser)]
#[command(
    name = "aaulc",
    version,
    about = "Model checker for arbitrary arrow update logic with common knowledge"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Exact,
    Bounded,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// How `[*]` is decided.
    #[arg(long, global = true, value_enum, default_value_t = StrategyArg::Exact)]
    pub strategy: StrategyArg,
    /// Exact strategy: largest number of update profiles to enumerate.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_profiles: Option<u64>,
    /// Bounded strategy: most clauses per candidate update.
    #[arg(long, global = true, value_parser = parse_positive)]
    pub max_clauses: Option<usize>,
    /// Bounded strategy: deepest clause body.
    #[arg(long, global = true, value_parser = parse_positive)]
    pub max_depth: Option<usize>,
    /// Bounded strategy: admit clause bodies containing C.
    #[arg(long, global = true)]
    pub allow_c_in_updates: bool,
    /// Exact strategy: only vary arrows of agents the quantified formula mentions.
    #[arg(long, global = true)]
    pub formula_agents_only: bool,
    /// Read C over the reflexive-transitive closure.
    #[arg(long, global = true)]
    pub c_reflexive: bool,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct FormulaSource {
    /// Formula text.
    #[arg(long)]
    pub formula: Option<String>,
    /// File holding the formula text.
    #[arg(long)]
    pub formula_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long, default_value_t = -8, allow_hyphen_values = true)]
    pub n_min: i64,
    #[arg(long, default_value_t = 8, allow_hyphen_values = true)]
    pub n_max: i64,
    #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
    pub m_min: i64,
    #[arg(long, default_value_t = 12, allow_hyphen_values = true)]
    pub m_max: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Phi,
    Grid,
    Sane,
    Trans,
    ReductionHalting,
    ReductionNonhalting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridAction {
    Build,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TmAction {
    Run,
    Halts,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a formula at a world of a model.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        #[command(flatten)]
        source: FormulaSource,
    },
    /// Emit the encoding formulas of a Turing machine.
    Encode {
        #[arg(value_enum)]
        variant: Variant,
        #[arg(long)]
        tm: PathBuf,
        /// Also print size statistics.
        #[arg(long)]
        stats: bool,
        /// Include `no_other` in the grid formula.
        #[arg(long, value_enum, default_value_t = Switch::On)]
        no_other: Switch,
        /// Agent outside the grid vocabulary, constrained by `no_other`.
        #[arg(long = "extra-agent")]
        extra_agents: Vec<String>,
    },
    /// Build or verify a finite window of a machine's grid model.
    Grid {
        #[arg(value_enum)]
        action: GridAction,
        #[arg(long)]
        tm: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Run a Turing machine or look for it to halt.
    Tm {
        #[arg(value_enum)]
        action: TmAction,
        #[arg(long)]
        tm: PathBuf,
        /// Step bound for `halts`.
        #[arg(long, default_value_t = 1000)]
        steps: u64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Search small models for a witness of a formula.
    Sat {
        #[command(flatten)]
        source: FormulaSource,
        #[arg(long, default_value_t = 3, value_parser = parse_positive)]
        max_worlds: usize,
        #[arg(long, default_value_t = 1 << 20, value_parser = clap::value_parser!(u64).range(1..))]
        max_models: u64,
    },
}

impl GlobalOpts {
    pub fn eval_config(&self) -> anyhow::Result<EvalConfig> {
        let mode = match self.strategy {
            StrategyArg::Exact => {
                if self.max_clauses.is_some() || self.max_depth.is_some() || self.allow_c_in_updates
                {
                    bail!("--max-clauses, --max-depth and --allow-c-in-updates need --strategy bounded");
                }
                QuantMode::Exact {
                    max_profiles: self.max_profiles.unwrap_or(DEFAULT_MAX_PROFILES),
                }
            }
            StrategyArg::Bounded => {
                if self.max_profiles.is_some() || self.formula_agents_only {
                    bail!("--max-profiles and --formula-agents-only need --strategy exact");
                }
                QuantMode::BoundedSyntactic {
                    max_clauses: self.max_clauses.unwrap_or(DEFAULT_MAX_CLAUSES),
                    max_depth: self.max_depth.unwrap_or(DEFAULT_MAX_DEPTH),
                }
            }
        };
        Ok(EvalConfig {
            quantifier: QuantStrategy {
                mode,
                allow_c_in_updates: self.allow_c_in_updates,
                formula_agents_only: self.formula_agents_only,
            },
            c_reflexive: self.c_reflexive,
        })
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_TRUE
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_INPUT
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_INPUT
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_formula(src: &FormulaSource) -> anyhow::Result<Formula> {
    let text = match (&src.formula, &src.formula_file) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => read(p)?,
        (None, None) => bail!("no formula given"),
    };
    Ok(parse_formula(&text)?)
}

fn load_machine(path: &Path, err: &mut dyn Write) -> anyhow::Result<TuringMachine> {
    let tm = TuringMachine::from_json(&read(path)?)
        .with_context(|| format!("loading {}", path.display()))?;
    for w in tm.warnings() {
        writeln!(err, "warning: {w}")?;
    }
    Ok(tm)
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let cfg = cli.global.eval_config()?;
    let json = cli.global.json;
    match &cli.command {
        Command::Check {
            model,
            world,
            source,
        } => {
            let m = Model::from_json(&read(model)?)
                .with_context(|| format!("loading {}", model.display()))?;
            let f = load_formula(source)?;
            let verdict = eval(&m, world, &f, &cfg)?;
            let (label, reason, code) = match &verdict {
                Verdict::True => ("TRUE", None, EXIT_TRUE),
                Verdict::False => ("FALSE", None, EXIT_FALSE),
                Verdict::Undecided(r) => ("UNDECIDED", Some(r.as_str()), EXIT_UNDECIDED),
            };
            if json {
                writeln!(out, "{}", json!({ "verdict": label, "reason": reason }))?;
            } else if let Some(r) = reason {
                writeln!(out, "{label}({r})")?;
            } else {
                writeln!(out, "{label}")?;
            }
            Ok(code)
        }
        Command::Encode {
            variant,
            tm,
            stats: want_stats,
            no_other,
            extra_agents,
        } => {
            let tm = load_machine(tm, err)?;
            let voc = EncodingVocabulary::new(&tm)
                .with_no_other(*no_other == Switch::On)
                .with_extra_agents(extra_agents.iter().cloned())?;
            let f = match variant {
                Variant::Phi => encode_phi(&tm, &voc),
                Variant::Grid => encode_grid(&voc),
                Variant::Sane => encode_sane(&tm, &voc),
                Variant::Trans => encode_transitions(&tm, &voc),
                Variant::ReductionHalting => reduction_formula(&tm, &voc, Reduction::Halting),
                Variant::ReductionNonhalting => reduction_formula(&tm, &voc, Reduction::NonHalting),
            };
            let s = stats(&f);
            if json {
                let mut doc = json!({ "formula": f.to_string() });
                if *want_stats {
                    doc["stats"] = serde_json::to_value(&s)?;
                }
                writeln!(out, "{doc}")?;
            } else {
                writeln!(out, "{f}")?;
                if *want_stats {
                    writeln!(
                        out,
                        "STATS nodes={} depth={} conjuncts={} atoms={} agents={}",
                        s.nodes, s.depth, s.top_level_conjuncts, s.atoms, s.agents
                    )?;
                }
            }
            Ok(EXIT_TRUE)
        }
        Command::Grid { action, tm, window } => {
            let tm = load_machine(tm, err)?;
            let voc = EncodingVocabulary::new(&tm);
            let g = build_grid_model(
                &tm,
                &voc,
                window.n_min..=window.n_max,
                window.m_min..=window.m_max,
            )?;
            match action {
                GridAction::Build => {
                    writeln!(out, "{}", g.model().to_json())?;
                    Ok(EXIT_TRUE)
                }
                GridAction::Verify => {
                    let report = verify_run_encoding(&tm, &voc, &g);
                    if json {
                        writeln!(out, "{}", report.to_json())?;
                    } else {
                        write!(out, "{}", report.to_text())?;
                    }
                    Ok(if report.all_pass() {
                        EXIT_TRUE
                    } else {
                        EXIT_FALSE
                    })
                }
            }
        }
        Command::Tm {
            action,
            tm,
            steps,
            window,
        } => {
            let tm = load_machine(tm, err)?;
            match action {
                TmAction::Run => {
                    let table = run_machine(
                        &tm,
                        window.n_min..=window.n_max,
                        window.m_min..=window.m_max,
                    )?;
                    write!(out, "{}", table.render(&tm))?;
                    Ok(EXIT_TRUE)
                }
                TmAction::Halts => {
                    let result = halts_within(&tm, *steps);
                    let (line, code) = match result {
                        HaltResult::Halts(m) => (format!("HALTS {m}"), EXIT_TRUE),
                        HaltResult::NoHaltWithinBound(b) => {
                            (format!("NO-HALT-WITHIN {b}"), EXIT_FALSE)
                        }
                    };
                    if json {
                        let doc = match result {
                            HaltResult::Halts(m) => json!({ "halts": true, "time": m }),
                            HaltResult::NoHaltWithinBound(b) => {
                                json!({ "halts": false, "bound": b })
                            }
                        };
                        writeln!(out, "{doc}")?;
                    } else {
                        writeln!(out, "{line}")?;
                    }
                    Ok(code)
                }
            }
        }
        Command::Sat {
            source,
            max_worlds,
            max_models,
        } => {
            let f = load_formula(source)?;
            match sat_search(&f, *max_worlds, *max_models, &cfg)? {
                SatOutcome::Found { model, world } => {
                    if json {
                        let doc: serde_json::Value = serde_json::from_str(&model.to_json())?;
                        writeln!(
                            out,
                            "{}",
                            json!({ "result": "FOUND", "world": world, "model": doc })
                        )?;
                    } else {
                        writeln!(out, "FOUND {world}")?;
                        writeln!(out, "{}", model.to_json())?;
                    }
                    Ok(EXIT_TRUE)
                }
                SatOutcome::NoneFound { bound, undecided } => {
                    if json {
                        writeln!(
                            out,
                            "{}",
                            json!({ "result": "NONE-FOUND", "bound": bound, "undecided": undecided })
                        )?;
                    } else {
                        writeln!(out, "NONE-FOUND {bound}")?;
                        if undecided > 0 {
                            writeln!(
                                err,
                                "note: {undecided} candidate models left the quantifier undecided"
                            )?;
                        }
                    }
                    Ok(EXIT_FALSE)
                }
                SatOutcome::BudgetExhausted {
                    completed_bound,
                    explored,
                } => {
                    if json {
                        writeln!(
                            out,
                            "{}",
                            json!({ "result": "BUDGET-EXHAUSTED", "completed_bound": completed_bound, "explored": explored })
                        )?;
                    } else {
                        writeln!(out, "BUDGET-EXHAUSTED {completed_bound}")?;
                    }
                    Ok(EXIT_UNDECIDED)
                }
            }
        }
    }
}
