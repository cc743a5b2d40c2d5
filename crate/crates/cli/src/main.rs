use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use logmaj::ineq::Verdict;
use logmaj_cli::config::{Cli, Command, OutputArgs};
use logmaj_cli::document::to_json;
use logmaj_cli::error::{CliError, CliResult};
use logmaj_cli::matrix_file::load_matrices;
use logmaj_cli::run::{random_input, run_check, run_majorize, CheckInput};
use logmaj_cli::scan::run_scan;

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => 0,
        Verdict::Inconclusive => 1,
        Verdict::Violated => 2,
    }
}

fn emit(text: &str, output: &OutputArgs) -> CliResult<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()).map_err(|source| CliError::Io {
                path: Path::new("<stdout>").to_path_buf(),
                source,
            })
        }
    }
}

fn run(cli: Cli) -> CliResult<Verdict> {
    match cli.command {
        Command::Check(args) => {
            let input = match &args.matrices {
                Some(path) => CheckInput::from_file(load_matrices(path)?, &path.display().to_string()),
                None => random_input(args.check, &args.params, &args.source, args.offset)?,
            };
            let doc = run_check(args.check, &args.params, &input, args.output.trace)?;
            emit(&to_json(&doc), &args.output)?;
            Ok(doc.verdict)
        }
        Command::Majorize(args) => {
            let doc = run_majorize(&args.a, &args.b, args.mode)?;
            emit(&to_json(&doc), &args.output)?;
            Ok(doc.verdict)
        }
        Command::Scan(args) => {
            let doc = run_scan(args.check, &args.params, &args.source, args.samples)?;
            emit(&to_json(&doc), &args.output)?;
            Ok(doc.verdict)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(v) => ExitCode::from(exit_code(v)),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
