use clap::error::ErrorKind;
use clap::Parser;
use std::process::ExitCode;
use wavequanta_cli::error::CliError;
use wavequanta_cli::{execute, Cli, Command};

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.diagnostic_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Parse(e.render().to_string().trim().to_string())),
    };

    let threads = cli.threads.map_or(0, usize::from);
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        return fail(&CliError::Validation(format!("thread pool: {e}")));
    }

    let done = match execute(&cli) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let verify = matches!(cli.command, Command::Verify);
    for c in &done.checks {
        if verify || cli.verbose {
            println!("{}", c.line());
        }
    }
    println!("wrote {} files to {}", done.artifacts.files.len(), done.out_dir.display());
    if verify && !done.failed.is_empty() {
        return fail(&CliError::Invariant(done.failed));
    }
    ExitCode::SUCCESS
}
