mod args;
mod commands;
mod output;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{CliResult, Outcome};

fn run(cli: &Cli, out: &mut impl Write) -> CliResult<()> {
    let outcome: Outcome = match &cli.command {
        Command::Bounds(a) => commands::bounds_cmd(a)?,
        Command::MaxM(a) => commands::max_m_cmd(a)?,
        Command::Alpha(a) => commands::alpha_cmd(a)?,
        Command::Sequence(a) => commands::sequence_cmd(a)?,
        Command::Verify(a) => commands::verify_cmd(a)?,
        Command::Certificate(a) => commands::certificate_cmd(a)?,
        Command::Compare(a) => commands::compare_cmd(a)?,
        Command::Chudnovsky(a) => commands::chudnovsky_cmd(a)?,
        Command::Sample(a) => commands::sample_cmd(a)?,
        Command::Sweep(a) => {
            let failure = commands::sweep_cmd(a, cli.format, out)?;
            out.flush()?;
            return failure.map_or(Ok(()), Err);
        }
    };
    outcome.report.write(cli.format, out)?;
    out.flush()?;
    outcome.failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be >= 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
