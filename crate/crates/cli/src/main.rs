use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use lcalc::bridges::lmu::{embed_lmu, parse_lmu, type_lmu};
use lcalc::bridges::nlm::{parse_nlm, translate, translate_checked, typecheck_nlm, ul};
use lcalc::fuzz::{run_suite, GenConfig, Suite};
use lcalc::infer::{check_detailed, pt};
use lcalc::reduction::{normalize_with, RuleSet, Strategy, DEFAULT_FUEL};
use lcalc::types::judgement;
use lcalc::{parse_conclusion, parse_context, parse_term, Dialect, Term, TypingContext};

#[derive(Parser)]
#[command(name = "lcalc", version, about = "Terms, reduction and types for λμ with first-class negation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Source file; the extension (.l, .lmu, .nlm) selects the dialect.
    file: Option<String>,
    /// Read the term from the command line instead.
    #[arg(short = 'e', long = "expr", conflicts_with = "file")]
    expr: Option<String>,
    #[arg(long, value_enum)]
    dialect: Option<DialectArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DialectArg {
    L,
    Lmu,
    Nlm,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Lo,
    Ri,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Print the principal typing.
    Infer {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Reduce to normal form.
    Reduce {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "lo")]
        strategy: StrategyArg,
        /// Seed for the random strategy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        /// Leave θ redexes alone.
        #[arg(long)]
        no_theta: bool,
        /// Print every step as JSON.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Translate a νλμ term.
    Translate {
        #[command(flatten)]
        input: Input,
        /// Translate even if the term has no ⊥-free typing.
        #[arg(long)]
        untyped: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check a term against a context and a type.
    Check {
        #[command(flatten)]
        input: Input,
        /// For example `x:p1, 'a:~p2`.
        #[arg(long, default_value = "")]
        context: String,
        /// A type, or `#` for ⊥.
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        json: bool,
    },
    /// Run a property suite over generated terms.
    Fuzz {
        /// One of subject-reduction, confluence, sn, subst-commute,
        /// pt-roundtrip, translation, embedding, mgu, or all.
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 30)]
        max_size: usize,
        #[arg(long)]
        json: bool,
    },
}

/// An error with its exit code.
struct Fail(u8, String);

fn usage(msg: impl Into<String>) -> Fail {
    Fail(2, msg.into())
}

impl Input {
    fn read(&self) -> Result<(String, Dialect), Fail> {
        let from_ext = self.file.as_deref().and_then(Dialect::from_extension);
        let dialect = match self.dialect {
            Some(DialectArg::L) => Dialect::L,
            Some(DialectArg::Lmu) => Dialect::Lmu,
            Some(DialectArg::Nlm) => Dialect::Nlm,
            None => from_ext.unwrap_or(Dialect::L),
        };
        let text = match (&self.expr, &self.file) {
            (Some(e), _) => e.clone(),
            (None, Some(f)) if f != "-" => {
                std::fs::read_to_string(f).map_err(|e| usage(format!("cannot read {f}: {e}")))?
            }
            _ => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("cannot read stdin: {e}")))?;
                s
            }
        };
        Ok((text, dialect))
    }

    /// The input as a term of the full calculus; λμ terms are embedded.
    fn term(&self) -> Result<(Term, Dialect), Fail> {
        let (text, dialect) = self.read()?;
        let t = match dialect {
            Dialect::L => parse_term(&text).map_err(|e| usage(e.to_string()))?,
            Dialect::Lmu => embed_lmu(&parse_lmu(&text).map_err(|e| usage(e.to_string()))?),
            Dialect::Nlm => return Err(usage("this command takes an l or lmu term")),
        };
        Ok((t, dialect))
    }
}

fn print_json(v: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
}

fn infer(input: &Input, as_json: bool) -> Result<(), Fail> {
    let (text, dialect) = input.read()?;
    let out = match dialect {
        Dialect::L => {
            let t = parse_term(&text).map_err(|e| usage(e.to_string()))?;
            match pt(&t) {
                Ok(ty) => Ok((ty.judgement(&t), json!({"context": ty.context.to_string(), "term": t.to_string(), "conclusion": ty.conclusion.to_string()}))),
                Err(e) => Err(e.to_string()),
            }
        }
        Dialect::Lmu => {
            let t = parse_lmu(&text).map_err(|e| usage(e.to_string()))?;
            match type_lmu(&t) {
                Ok(j) => Ok((j.to_string(), json!({"context": j.l_context().to_string(), "term": t.to_string(), "conclusion": j.ty.to_string()}))),
                Err(e) => Err(e.to_string()),
            }
        }
        Dialect::Nlm => {
            let t = parse_nlm(&text).map_err(|e| usage(e.to_string()))?;
            match typecheck_nlm(&t) {
                Some(ty) => {
                    let ctx: Vec<String> = ty.context.iter().map(|(x, a)| format!("{x}:{a}")).collect();
                    let ctx = ctx.join(", ");
                    Ok((judgement(&ctx, &t, &ty.ty), json!({"context": ctx, "term": t.to_string(), "conclusion": ty.ty.to_string()})))
                }
                None => Err("no νλμ typing".to_string()),
            }
        }
    };
    match out {
        Ok((line, v)) => {
            if as_json {
                print_json(v)
            } else {
                println!("{line}")
            }
            Ok(())
        }
        Err(reason) => {
            if as_json {
                print_json(json!({"untypeable": reason}))
            } else {
                println!("untypeable: {reason}")
            }
            Err(Fail(1, String::new()))
        }
    }
}

fn translate_cmd(input: &Input, untyped: bool, as_json: bool) -> Result<(), Fail> {
    let (text, _) = input.read()?;
    let t = parse_nlm(&text).map_err(|e| usage(e.to_string()))?;
    let (term, context, conclusion) = match translate_checked(&t) {
        Ok((g, m, c)) => (m, Some(g), Some(c)),
        Err(_) if untyped => (translate(&t, &ul(&t)), None, None),
        Err(e) => return Err(Fail(1, e.to_string())),
    };
    if as_json {
        print_json(json!({
            "term": term.to_string(),
            "context": context.map(|g| g.to_string()),
            "conclusion": conclusion.map(|c| c.to_string()),
        }));
    } else {
        println!("{term}");
    }
    Ok(())
}

fn reduce(
    input: &Input,
    strategy: StrategyArg,
    seed: u64,
    fuel: usize,
    no_theta: bool,
    trace: bool,
    as_json: bool,
) -> Result<(), Fail> {
    let (t, _) = input.term()?;
    let strategy = match strategy {
        StrategyArg::Lo => Strategy::LeftmostOutermost,
        StrategyArg::Ri => Strategy::RightmostInnermost,
        StrategyArg::Random => Strategy::Random(seed),
    };
    let rules = if no_theta { RuleSet::NO_THETA } else { RuleSet::ALL };
    let tr = normalize_with(&t, strategy, fuel, rules);
    if trace {
        print_json(tr.to_json());
    } else if as_json {
        print_json(json!({"normal_form": tr.final_term.to_string(), "steps": tr.steps.len(), "fuel_exhausted": tr.fuel_exhausted}));
    } else {
        println!("{}", tr.final_term);
    }
    if tr.fuel_exhausted {
        return Err(Fail(1, format!("fuel {fuel} exhausted")));
    }
    Ok(())
}

fn check_cmd(input: &Input, context: &str, ty: &str, as_json: bool) -> Result<(), Fail> {
    let (t, _) = input.term()?;
    let g: TypingContext = parse_context(context).map_err(|e| usage(e.to_string()))?;
    let c = parse_conclusion(ty).map_err(|e| usage(e.to_string()))?;
    let result = check_detailed(&g, &t, &c);
    let j = judgement(&g, &t, &c);
    if as_json {
        print_json(json!({"judgement": j, "holds": result.is_ok(), "reason": result.as_ref().err().map(|e| e.to_string())}));
    }
    match result {
        Ok(()) => {
            if !as_json {
                println!("ok: {j}");
            }
            Ok(())
        }
        Err(e) => Err(Fail(1, if as_json { String::new() } else { format!("fails: {j}: {e}") })),
    }
}

fn fuzz(suite: &str, seed: u64, n: usize, max_size: usize, as_json: bool) -> Result<(), Fail> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(|e: lcalc::fuzz::UnknownSuite| usage(e.to_string()))?]
    };
    let cfg = GenConfig::new(seed, n, max_size);
    let reports: Vec<_> = suites.iter().map(|s| run_suite(*s, &cfg)).collect();
    if as_json {
        print_json(serde_json::Value::Array(reports.iter().map(|r| r.to_json()).collect()));
    } else {
        for r in &reports {
            print!("{}", r.table());
        }
    }
    if reports.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(Fail(1, String::new()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Infer { input, json } => infer(input, *json),
        Command::Reduce { input, strategy, seed, fuel, no_theta, trace, json } => {
            reduce(input, *strategy, *seed, *fuel, *no_theta, *trace, *json)
        }
        Command::Translate { input, untyped, json } => translate_cmd(input, *untyped, *json),
        Command::Check { input, context, ty, json } => check_cmd(input, context, ty, *json),
        Command::Fuzz { suite, seed, n, max_size, json } => fuzz(suite, *seed, *n, *max_size, *json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(code)
        }
    }
}
