use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use scc_core::ds::{ds_strategy_proof_given, rational_string, DsWitness, ProbabilityModel};
use scc_core::io::{load_scc, parse_table_code, save_scc, table_code, NamedScc};
use scc_core::verify::{Bias, Scope, Verification};
use scc_core::{
    check_taylor_hypotheses, find_taylor_manipulation, is_onto_singletons, weak_dictators, Mode,
    OutcomeSet, TaylorManipulation,
};

#[derive(Parser)]
#[command(name = "scc", version, about = "Manipulability checks for social choice correspondences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Correspondence file (JSON)
    #[arg(long)]
    file: Option<PathBuf>,
    /// Table code as printed by `enumerate` and in violation records
    #[arg(long)]
    code: Option<String>,
}

impl Input {
    fn load(&self) -> Result<NamedScc> {
        match (&self.file, &self.code) {
            (Some(path), _) => Ok(load_scc(path)?),
            (None, Some(code)) => Ok(NamedScc::with_default_names(parse_table_code(code)?)),
            (None, None) => bail!("one of --file or --code is required"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Spo,
    Spp,
    Onto,
    WeakDictator,
    Taylor,
    DsHalf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Half,
    Uniform,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Taylor,
    Equivalence,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one property; exit 0 if it holds, 1 if it fails
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        property: Property,
    },
    /// Search for an expected-utility manipulation under a probability model
    Witness {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "half")]
        model: ModelArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verify the weak-dictator theorem and the manipulability equivalence
    Verify {
        #[arg(long)]
        voters: usize,
        #[arg(long)]
        alternatives: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `uniform` or `mutate:K`
        #[arg(long, default_value = "uniform")]
        bias: String,
        /// Seeded random models per manipulable correspondence
        #[arg(long, default_value_t = 3)]
        models: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "equivalence")]
        check: CheckArg,
    },
    /// Print table codes in counter order
    Enumerate {
        #[arg(long)]
        voters: usize,
        #[arg(long)]
        alternatives: usize,
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Write a correspondence out as an explicit-table file
    Export {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: PathBuf,
    },
}

fn set_json(f: &NamedScc, w: OutcomeSet) -> Value {
    json!(f.set_names(w))
}

fn taylor_json(f: &NamedScc, t: &TaylorManipulation) -> Value {
    json!({
        "mode": t.mode,
        "voter": t.voter,
        "sincere": f.profile_key(&t.sincere),
        "deviation_ballot": f.ballot_key(&t.deviation_ballot),
        "sincere_set": set_json(f, t.sincere_set),
        "deviation_set": set_json(f, t.deviation_set),
    })
}

fn ds_json(f: &NamedScc, w: &DsWitness) -> Value {
    let utility: serde_json::Map<String, Value> = f
        .names
        .iter()
        .zip(w.utility.values())
        .map(|(name, v)| (name.clone(), json!(rational_string(v))))
        .collect();
    json!({
        "voter": w.voter,
        "model": w.model,
        "sincere": f.profile_key(&w.sincere),
        "deviation_ballot": f.ballot_key(&w.deviation_ballot),
        "sincere_set": set_json(f, w.sincere_set),
        "deviation_set": set_json(f, w.deviation_set),
        "utility": utility,
        "eu_sincere": rational_string(&w.eu_sincere),
        "eu_deviate": rational_string(&w.eu_deviate),
        "extremes": w.extremes,
        "epsilon": rational_string(&w.epsilon),
        "delta": rational_string(&w.delta),
    })
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value serializes"));
}

fn verdict(holds: bool) -> ExitCode {
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn check(input: &Input, property: Property) -> Result<ExitCode> {
    let f = input.load()?;
    let scc = &f.scc;
    let taylor = |mode| find_taylor_manipulation(scc, mode);
    let (name, holds, detail) = match property {
        Property::Spo | Property::Spp => {
            let mode = if matches!(property, Property::Spo) { Mode::Optimist } else { Mode::Pessimist };
            let w = taylor(mode);
            let name = if mode == Mode::Optimist { "spo" } else { "spp" };
            (name, w.is_none(), json!({ "witness": w.map(|t| taylor_json(&f, &t)) }))
        }
        Property::Onto => {
            let r = is_onto_singletons(scc);
            let space = scc.space();
            let witnesses: serde_json::Map<String, Value> = f
                .names
                .iter()
                .zip(&r.witnesses)
                .map(|(name, w)| {
                    let key = w.map(|idx| f.profile_key(&space.decode(idx).expect("witness in range")));
                    (name.clone(), json!(key))
                })
                .collect();
            ("onto", r.onto, json!({ "singleton_profiles": witnesses }))
        }
        Property::WeakDictator => {
            let d = weak_dictators(scc);
            ("weak-dictator", !d.is_empty(), json!({ "dictators": d }))
        }
        Property::Taylor => {
            let r = check_taylor_hypotheses(scc);
            let witness = r
                .optimist_manipulation
                .as_ref()
                .or(r.pessimist_manipulation.as_ref())
                .map(|t| taylor_json(&f, t));
            (
                "taylor",
                r.spo && r.spp,
                json!({
                    "spo": r.spo,
                    "spp": r.spp,
                    "onto": r.onto,
                    "weak_dictators": r.weak_dictators,
                    "theorem_violation": r.theorem_violation,
                    "witness": witness,
                }),
            )
        }
        Property::DsHalf => {
            let w = ds_strategy_proof_given(scc, &ProbabilityModel::HalfHalf)?;
            ("ds-half", w.is_none(), json!({ "witness": w.map(|w| ds_json(&f, &w)) }))
        }
    };
    let mut out = json!({ "property": name, "holds": holds });
    if let (Value::Object(o), Value::Object(d)) = (&mut out, detail) {
        o.extend(d);
    }
    print(&out);
    Ok(verdict(holds))
}

fn witness(input: &Input, model: ModelArg, seed: u64) -> Result<ExitCode> {
    let f = input.load()?;
    let model = match model {
        ModelArg::Half => ProbabilityModel::HalfHalf,
        ModelArg::Uniform => ProbabilityModel::UniformOverSet,
        ModelArg::Random => ProbabilityModel::SeededRandom { seed },
    };
    let w = ds_strategy_proof_given(&f.scc, &model)?;
    print(&json!({ "model": model, "witness": w.as_ref().map(|w| ds_json(&f, w)) }));
    Ok(verdict(w.is_none()))
}

fn parse_bias(s: &str) -> Result<Bias> {
    match s.split_once(':') {
        None if s == "uniform" => Ok(Bias::Uniform),
        Some(("mutate", k)) => Ok(Bias::MutateFixture(k.parse().context("mutation count")?)),
        _ => bail!("bias must be `uniform` or `mutate:K`, got {s:?}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let reason: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.is_empty() && !l.starts_with("Usage:"))
                .collect();
            eprintln!("error: usage: {}", reason.join(" ").trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Check { input, property } => check(&input, property),
        Command::Witness { input, model, seed } => witness(&input, model, seed),
        Command::Verify {
            voters,
            alternatives,
            mode,
            count,
            seed,
            bias,
            models,
            jobs,
            check,
        } => {
            let scope = match mode {
                ModeArg::Exhaustive => Scope::Exhaustive,
                ModeArg::Sample => Scope::Sample {
                    count,
                    seed,
                    bias: parse_bias(&bias)?,
                },
            };
            let v = Verification::new(voters, alternatives, scope).jobs(jobs).models(models, seed);
            let report = match check {
                CheckArg::Taylor => v.run_taylor()?,
                CheckArg::Equivalence => v.run_equivalence()?,
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(verdict(report.is_clean()))
        }
        Command::Enumerate {
            voters,
            alternatives,
            limit,
        } => {
            use std::io::Write;
            let tables = scc_core::verify::enumerate_sccs(voters, alternatives)?;
            let stdout = std::io::stdout();
            let mut out = std::io::BufWriter::new(stdout.lock());
            for f in tables.take(limit.unwrap_or(u64::MAX).try_into().unwrap_or(usize::MAX)) {
                if writeln!(out, "{}", table_code(&f)).is_err() {
                    break;
                }
            }
            out.flush().ok();
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { input, out } => {
            let f = input.load()?;
            let table = NamedScc {
                names: f.names.clone(),
                scc: f.scc.materialize(),
            };
            save_scc(&table, &out).map_err(|e| anyhow!(e))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
