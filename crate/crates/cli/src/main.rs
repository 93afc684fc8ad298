use std::process::ExitCode;

use clap::Parser;
use islandfs_cli::args::{Cli, Command};
use islandfs_cli::commands::{cmd_bench, cmd_compare, cmd_eaf, cmd_run, cmd_synth};
use islandfs_cli::experiment::ExperimentSpec;
use islandfs_cli::output::sig6;
use islandfs_cli::CliError;

fn dispatch(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Run(args) => {
            let spec = ExperimentSpec::from_args(&args)?;
            let out = cmd_run(&spec)?;
            let s = &out.summary.summary;
            Ok(format!(
                "{} runs: mean cardinality {}, mean AUC {}, mean HV {}\nwrote {} files to {}",
                s.runs,
                sig6(s.mean_cardinality),
                sig6(s.mean_auc),
                sig6(s.mean_hv),
                out.files.len(),
                spec.out.display()
            ))
        }
        Command::Compare { summary_a, summary_b, alpha } => Ok(cmd_compare(&summary_a, &summary_b, alpha)?.1),
        Command::Bench(args) => Ok(cmd_bench(&ExperimentSpec::from_args(&args)?)?.report()),
        Command::Eaf { fronts, out, auc } => {
            let (_, svg) = cmd_eaf(&fronts, &out, auc)?;
            Ok(format!("wrote {} and {}", out.display(), svg.display()))
        }
        Command::Synth { rows, features, informative, noise, seed, out } => {
            cmd_synth(rows, features, &informative, noise, seed, &out)?;
            Ok(format!("wrote {}", out.display()))
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(msg) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("islandfs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
