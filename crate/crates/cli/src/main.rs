use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use stablereg::commands::{resolve_budget, write_path, BUDGET_ENV};
use stablereg::error::exit;
use stablereg::{run, CliError, Command, Context};

#[derive(Parser, Debug)]
#[command(name = "stablereg", version, about = "Stability and stable regularity of finite partite hypergraphs")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Search budget in work units; overrides STABLEREG_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write the primary output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn main_inner(cli: &Cli) -> Result<i32, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    }
    let env = std::env::var(BUDGET_ENV).ok();
    let ctx = Context { seed: cli.seed, budget: resolve_budget(cli.budget, env.as_deref())? };
    let out = run(&cli.command, &ctx)?;
    match &cli.output {
        Some(path) => write_path(path, &out.output)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.output.as_bytes());
        }
    }
    if let Some(note) = &out.note {
        eprintln!("{note}");
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::PASS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match main_inner(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
