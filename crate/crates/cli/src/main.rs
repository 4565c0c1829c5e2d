//! `monolith`: normal structure, witness chains and first-order checks for
//! finite groups from the command line. Reports go to stdout as JSON (or as
//! text with `--pretty`); diagnostics go to stderr.
//!
//! Exit status: 0 when every check passes, 2 when a bound check fails (the
//! report carries the violation record), 1 on any other error.

mod commands;
mod resolve;

use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "monolith", version, about = "Finite-group normal structure and witness checks")]
struct Cli {
    /// Human-readable text instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SampleArgs {
    /// Largest direct power whose subgroups are sampled.
    #[arg(long, default_value_t = 2)]
    pub power: usize,
    /// Largest order of a sampled subgroup.
    #[arg(long, default_value_t = 64)]
    pub max_order: usize,
    /// Largest order of an ambient direct power.
    #[arg(long, default_value_t = 1024)]
    pub max_power_order: usize,
    /// Generators per sampled subgroup (1 or 2).
    #[arg(long, default_value_t = 2)]
    pub max_gens: usize,
    /// Cap on the number of sampled members.
    #[arg(long, default_value_t = 256)]
    pub max_members: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal structure report.
    Analyze { group: String },
    /// Dump the lattice of normal subgroups.
    Lattice { group: String },
    /// Descend from an element into the monolith.
    Witness {
        group: String,
        /// Element index or name.
        #[arg(allow_hyphen_values = true)]
        element: String,
        /// Per-step search cap (defaults to the exponent).
        #[arg(long)]
        complexity_cap: Option<usize>,
    },
    /// Evaluate a formula, or the set it defines with `--free`.
    Eval {
        group: String,
        formula: String,
        /// Free variable whose defined set is reported.
        #[arg(long)]
        free: Option<String>,
        /// Values for other free variables, as `var=element`.
        #[arg(long = "bind", value_name = "VAR=ELEMENT")]
        binds: Vec<String>,
    },
    /// Compare the subdirect-irreducibility sentence with the lattice on a
    /// sample of the variety.
    Axioms {
        group: String,
        #[command(flatten)]
        sample: SampleArgs,
        /// Complexity cap for the second formula (defaults to m^k).
        #[arg(long)]
        complexity_cap: Option<usize>,
        /// Largest formula built for the syntactic cross-check.
        #[arg(long, default_value_t = 1_000_000)]
        max_disjuncts: u128,
    },
    /// Atom and descent complexity bounds across a sample of the variety.
    Bounds {
        group: String,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Build and replay variety members.
    #[command(subcommand)]
    Construct(ConstructCommand),
}

#[derive(Subcommand, Debug)]
enum ConstructCommand {
    /// Rebuild a group from a provenance file and verify its hash.
    Replay { file: String },
    /// List the sampled members of the variety, optionally writing one
    /// provenance file per member.
    Sample {
        group: String,
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        out_dir: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { group } => commands::analyze(&group),
        Command::Lattice { group } => commands::lattice(&group),
        Command::Witness {
            group,
            element,
            complexity_cap,
        } => commands::witness(&group, &element, complexity_cap),
        Command::Eval {
            group,
            formula,
            free,
            binds,
        } => commands::eval(&group, &formula, free.as_deref(), &binds),
        Command::Axioms {
            group,
            sample,
            complexity_cap,
            max_disjuncts,
        } => commands::axioms(&group, &sample, complexity_cap, max_disjuncts),
        Command::Bounds { group, sample } => commands::bounds(&group, &sample),
        Command::Construct(ConstructCommand::Replay { file }) => commands::replay(&file),
        Command::Construct(ConstructCommand::Sample {
            group,
            sample,
            out_dir,
        }) => commands::sample(&group, &sample, out_dir.as_deref()),
    };
    match result {
        Ok(outcome) => {
            let text = if cli.pretty {
                outcome.text
            } else {
                serde_json::to_string(&outcome.json).expect("reports serialize")
            };
            println!("{text}");
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
