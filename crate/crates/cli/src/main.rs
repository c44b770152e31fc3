//! `ideal-rpm`: solve, generate and evaluate progressive-matrix instances,
//! plus a monomial-ideal scratchpad.

mod algebra;
mod run;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ideal_rpm::invariance::{BinOp, Module};
use ideal_rpm::io::synthetic::{Layout, RuleFamily};

#[derive(Parser, Debug)]
#[command(name = "ideal-rpm", version, about = "Monomial-ideal reasoning for progressive matrices")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Schema preset (`iraven-full`, `running-example`) or schema JSON path.
    /// Instances name their own preset when this is omitted.
    #[arg(long, global = true)]
    pub schema: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Progression steps tried by the compositional module.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [1, 2, -1, -2])]
    pub deltas: Vec<i64>,
    /// Binary operators, from `+ - * /`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [BinOp::Add, BinOp::Sub])]
    pub ops: Vec<BinOp>,
    /// Enabled invariance modules.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = Module::ALL)]
    pub modules: Vec<Module>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score every candidate and pick the answer.
    Solve(Inputs),
    /// Build the missing panel without looking at the candidates.
    Generate {
        #[command(flatten)]
        inputs: Inputs,
        /// Directory for one SVG drawing per generated panel.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Generate, then compare against the ground-truth candidate.
    EvaluateGen(Inputs),
    /// Solve again with each module disabled in turn.
    Ablate(Inputs),
    /// Monomial-ideal and polynomial scratchpad.
    Algebra {
        #[command(subcommand)]
        op: algebra::AlgebraOp,
    },
    /// Write seeded synthetic instances as JSON files.
    MakeSynthetic {
        #[arg(long)]
        family: RuleFamily,
        /// Fixed layout; by default layouts cycle with the seed.
        #[arg(long)]
        layout: Option<Layout>,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// Output directory.
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Inputs {
    /// Instance files (`.json` or `.xml`), directories or glob patterns.
    #[arg(required = true)]
    pub paths: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(inputs) => run::solve(&cli.global, &inputs),
        Command::Generate { inputs, svg } => run::generate(&cli.global, &inputs, svg.as_deref()),
        Command::EvaluateGen(inputs) => run::evaluate_gen(&cli.global, &inputs),
        Command::Ablate(inputs) => run::ablate(&cli.global, &inputs),
        Command::Algebra { op } => algebra::run(&cli.global, op).map(|()| true),
        Command::MakeSynthetic { family, layout, count, dir } => {
            run::make_synthetic(&cli.global, family, layout, count, &dir).map(|()| true)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
