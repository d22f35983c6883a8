use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::Parser;

use polar_cylinders::cli;

/// Exact-arithmetic computations for polar cylinders on blow-ups of the
/// plane. Reads a JSON job document, writes a JSON report.
#[derive(Parser)]
#[command(name = "polar-cylinders", version)]
struct Args {
    /// Expected command; must match the document's `command` field.
    command: Option<String>,

    /// Input document path (stdin when omitted).
    #[arg(long)]
    input: Option<PathBuf>,

    /// Report path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,

    /// Pretty-print the report.
    #[arg(long)]
    pretty: bool,
}

fn read_input(path: &Option<PathBuf>) -> anyhow::Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .context("reading stdin")?;
            Ok(buf)
        }
    }
}

fn run(args: &Args) -> anyhow::Result<i32> {
    let input = read_input(&args.input)?;
    if let Some(expected) = &args.command {
        let doc = serde_json::from_str::<serde_json::Value>(&input).unwrap_or_default();
        if doc.get("command").and_then(|c| c.as_str()) != Some(expected.as_str()) {
            bail!("document command does not match `{expected}`");
        }
    }
    let out = cli::run_input(&input);
    let rendered = if args.pretty {
        serde_json::to_string_pretty(&out.report)?
    } else {
        serde_json::to_string(&out.report)?
    };
    match &args.output {
        Some(p) => fs::write(p, rendered + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => println!("{rendered}"),
    }
    Ok(out.exit_code)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code.clamp(0, u8::MAX as i32) as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
