use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use monsch_cli::{parse, run, Options};

/// Compute invariants of monoid schemes described in a manifest.
#[derive(Parser, Debug)]
#[command(name = "monsch", version)]
struct Cli {
    /// Manifest file; standard input when omitted or `-`.
    input: Option<PathBuf>,
    /// Search bound for bound-qualified predicates.
    #[arg(long, default_value_t = 8)]
    bound: usize,
    /// Degree for cohomology tasks that do not name one.
    #[arg(long)]
    degree: Option<usize>,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    /// Cross-check both cohomology models on every scheme task.
    #[arg(long)]
    check_oracles: bool,
    /// Run independent tasks concurrently.
    #[arg(long)]
    parallel: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let src = match &cli.input {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s)
        }
    };
    let src = match src {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read input: {e}");
            return ExitCode::from(2);
        }
    };
    let manifest = match parse(&src) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("syntax error at {e}");
            return ExitCode::from(2);
        }
    };
    let opts = Options { bound: cli.bound, degree: cli.degree, check_oracles: cli.check_oracles, parallel: cli.parallel };
    let report = match run(&manifest, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report serializes"));
    } else {
        print!("{}", report.render());
    }
    ExitCode::from(report.exit_code() as u8)
}
