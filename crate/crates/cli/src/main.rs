use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wta_core::minimize::{degree, equivalent, is_minimal, minimize};
use wta_core::{
    parse_wta, BruteForceOracle, Monomial, StateOrBot, SyntacticQuotient, Tree, Wta, WtaError,
};

/// Weighted tree automata over commutative semifields.
#[derive(Parser)]
#[command(name = "wta", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an automaton and summarize it.
    Validate { file: PathBuf },
    /// Print the weight of a tree.
    Eval {
        file: PathBuf,
        #[arg(long)]
        tree: String,
    },
    /// Print the state a deterministic automaton reaches on a tree, or ⊥.
    State {
        file: PathBuf,
        #[arg(long)]
        tree: String,
    },
    /// Print structural flags, the state count and the degree.
    Check { file: PathBuf },
    /// Minimize a deterministic automaton.
    Minimize {
        file: PathBuf,
        /// Write the result here; `-` for stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether two monomials `w.tree` are syntactically congruent.
    Congruent {
        file: PathBuf,
        #[arg(long = "mono", num_args = 1, required = true)]
        monos: Vec<String>,
        /// Cross-check against the bounded-context oracle at this depth.
        #[arg(long)]
        oracle_depth: Option<usize>,
    },
    /// Decide whether two automata recognize the same weighted language.
    Equiv { first: PathBuf, second: PathBuf },
}

const TRUE: u8 = 0;
const FALSE: u8 = 1;
const INPUT: u8 = 2;
const PRECONDITION: u8 = 3;
const DISAGREEMENT: u8 = 4;

enum Failure {
    Input(String),
    Precondition(String),
    Disagreement(String),
}

impl From<WtaError> for Failure {
    fn from(e: WtaError) -> Self {
        if e.is_precondition() {
            Failure::Precondition(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::from(TRUE),
        Ok(false) => ExitCode::from(FALSE),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(INPUT)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(PRECONDITION)
        }
        Err(Failure::Disagreement(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(DISAGREEMENT)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { file } => validate(&load(&file)?),
        Command::Eval { file, tree } => {
            let a = load(&file)?;
            let t = parse_tree(&a, &tree)?;
            println!("{}", a.evaluate(&t));
            Ok(true)
        }
        Command::State { file, tree } => {
            let a = load(&file)?;
            let t = parse_tree(&a, &tree)?;
            match a.state_of(&t)? {
                StateOrBot::State(q) => println!("{}", a.state_name(q)),
                StateOrBot::Bot => println!("⊥"),
            }
            Ok(true)
        }
        Command::Check { file } => check(&load(&file)?),
        Command::Minimize { file, output } => {
            let a = load(&file)?;
            let m = minimize(&a)?;
            match output {
                Some(path) if path.as_os_str() == "-" => print!("{m}"),
                Some(path) => {
                    fs::write(&path, m.to_string())
                        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                }
                None => {}
            }
            println!("states: {} -> {}", a.num_states(), m.num_states());
            Ok(true)
        }
        Command::Congruent {
            file,
            monos,
            oracle_depth,
        } => {
            let a = load(&file)?;
            congruent(&a, &monos, oracle_depth)
        }
        Command::Equiv { first, second } => {
            let verdict = equivalent(&load(&first)?, &load(&second)?)?;
            println!("{}", yes_no(verdict));
            Ok(verdict)
        }
    }
}

fn load(path: &Path) -> Result<Wta, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_wta(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_tree(a: &Wta, text: &str) -> Result<Tree, Failure> {
    a.alphabet()
        .parse_tree(text)
        .map_err(|e| Failure::Input(format!("tree {text:?}: {e}")))
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

fn field(name: &str, value: impl Display) {
    println!("{name}: {value}");
}

fn validate(a: &Wta) -> Outcome {
    let det = a.is_bu_deterministic();
    field("semifield", a.kind());
    field("symbols", a.alphabet().len());
    field("states", a.num_states());
    field("bu-deterministic", yes_no(det));
    field("total", yes_no(a.is_total()));
    if det {
        field("slim", yes_no(a.is_slim()?));
    } else {
        field("slim", "n/a");
    }
    Ok(true)
}

fn check(a: &Wta) -> Outcome {
    if !a.is_bu_deterministic() {
        field("bu-deterministic", "no");
        return Err(WtaError::NotDeterministic.into());
    }
    field("bu-deterministic", "yes");
    field("total", yes_no(a.is_total()));
    field("slim", yes_no(a.is_slim()?));
    field("minimal", yes_no(is_minimal(a)?));
    field("states", a.num_states());
    field("degree", degree(a)?);
    Ok(true)
}

fn congruent(a: &Wta, monos: &[String], oracle_depth: Option<usize>) -> Outcome {
    let [m1, m2] = monos else {
        return Err(Failure::Input(format!(
            "expected exactly two --mono arguments, got {}",
            monos.len()
        )));
    };
    let parse = |text: &str| {
        Monomial::parse(text, a.alphabet(), a.kind())
            .map_err(|e| Failure::Input(format!("monomial {text:?}: {e}")))
    };
    let (m1, m2) = (parse(m1)?, parse(m2)?);
    if !a.is_bu_deterministic() {
        return Err(WtaError::NotDeterministic.into());
    }
    let qt = SyntacticQuotient::build(&a.slim()?)?;
    let verdict = qt.congruent(&m1, &m2)?;
    if let Some(depth) = oracle_depth {
        let bounded = BruteForceOracle::new(a, depth)?.congruent(&m1, &m2)?;
        if bounded != verdict {
            return Err(Failure::Disagreement(format!(
                "quotient says {}, oracle at depth {depth} says {}",
                yes_no(verdict),
                yes_no(bounded)
            )));
        }
    }
    println!("{}", yes_no(verdict));
    Ok(verdict)
}
