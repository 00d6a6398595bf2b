//! `linkgame`: word and diagram analysis, solving, strategy verification,
//! acceptance sweeps and the session service.

mod commands;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linkgame::{ClosureKind, Role};

#[derive(Parser)]
#[command(name = "linkgame", version, about = "Linking-Unlinking game on two-component link shadows")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClosureArg {
    Numerator,
    Denominator,
}

impl From<ClosureArg> for ClosureKind {
    fn from(c: ClosureArg) -> Self {
        match c {
            ClosureArg::Numerator => ClosureKind::Numerator,
            ClosureArg::Denominator => ClosureKind::Denominator,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RoleArg {
    Linker,
    Unlinker,
}

impl From<RoleArg> for Role {
    fn from(r: RoleArg) -> Self {
        match r {
            RoleArg::Linker => Role::Linker,
            RoleArg::Unlinker => Role::Unlinker,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Rational pseudotangle words.
    Word {
        #[command(subcommand)]
        command: WordCommand,
    },
    /// Two-component diagrams and shadows.
    Shadow {
        #[command(subcommand)]
        command: ShadowCommand,
    },
    /// Move logs.
    Game {
        #[command(subcommand)]
        command: GameCommand,
    },
    /// Decide who wins a shadow under perfect play.
    Solve(SolveArgs),
    /// Check strategies against every opponent line.
    Verify(VerifyArgs),
    /// Run the acceptance criteria.
    Sweep(SweepArgs),
    /// Start the HTTP session service.
    Serve(ServeArgs),
}

#[derive(Subcommand)]
enum WordCommand {
    /// Classification, decomposition, counts, fraction, closure and verdict.
    Analyze { word: String },
    /// Rewrite to a fixed point with the tangle equivalences.
    Reduce { word: String },
}

#[derive(Subcommand)]
enum ShadowCommand {
    /// Components, SI/NSI crossings, linking number, twist regions, verdict.
    Analyze {
        #[command(flatten)]
        input: DiagramInput,
        /// Node budget for the splittability search.
        #[arg(long, default_value_t = linkgame::game::DEFAULT_BUDGET)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum GameCommand {
    /// Replay a move log and report the outcome.
    Replay {
        log: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
    },
}

/// A diagram given as a word, a PD file or a preset name.
#[derive(Args, Clone, Debug)]
pub struct DiagramInput {
    #[arg(long, conflicts_with_all = ["pd", "preset"], required_unless_present_any = ["pd", "preset"])]
    pub word: Option<String>,
    /// Closure of the word; defaults to the one with two components.
    #[arg(long, value_enum, requires = "word")]
    pub closure: Option<ClosureArg>,
    #[arg(long, conflicts_with = "preset")]
    pub pd: Option<PathBuf>,
    /// Bundled diagram: hopf or whitehead.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: DiagramInput,
    #[arg(long, value_enum)]
    pub first: RoleArg,
    /// Node budget for deciding terminal diagrams.
    #[arg(long, default_value_t = linkgame::game::DEFAULT_BUDGET)]
    pub budget: usize,
    /// Refuse diagram searches with more unresolved crossings; word
    /// searches run on syllables and have no bound.
    #[arg(long, default_value_t = linkgame::solver::DEFAULT_CROSSING_BOUND)]
    pub max_crossings: usize,
    /// Search the diagram even when the shadow comes from a word.
    #[arg(long)]
    pub diagram: bool,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: DiagramInput,
    #[arg(long, value_enum)]
    pub first: RoleArg,
    /// Strategy id; every applicable strategy when absent.
    #[arg(long)]
    pub strategy: Option<String>,
    #[arg(long, default_value_t = linkgame::game::DEFAULT_BUDGET)]
    pub budget: usize,
    /// Refuse shadows with more crossings.
    #[arg(long, default_value_t = 12)]
    pub max_crossings: usize,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Criteria to run (1-11); all when absent.
    #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=11))]
    pub criteria: Vec<u8>,
}

#[derive(Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    /// Directory for session move logs; in-memory sessions when absent.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    /// Idle seconds before a session expires.
    #[arg(long, default_value_t = 86_400)]
    pub ttl_secs: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Word { command: WordCommand::Analyze { word } } => commands::word_analyze(&word),
        Command::Word { command: WordCommand::Reduce { word } } => commands::word_reduce(&word),
        Command::Shadow { command: ShadowCommand::Analyze { input, budget } } => commands::shadow_analyze(&input, budget),
        Command::Game { command: GameCommand::Replay { log, budget } } => commands::game_replay(&log, budget),
        Command::Solve(args) => commands::solve(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::Serve(args) => commands::serve(&args),
    };
    match result {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON values serialize")),
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
