use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ellhecke::config::Config;
use ellhecke::report::Report;
use ellhecke::suites::{self, SuiteOptions};
use ellhecke::Error;

#[derive(Parser, Debug)]
#[command(name = "ellhecke", version, about = "Verification suites for elliptic Hecke and quiver Hecke operators")]
struct Cli {
    /// JSON config file; missing fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Machine mode: JSON on stdout only, no summary on stderr.
    #[arg(long, global = true)]
    json: bool,

    /// Print the available suites and exit.
    #[arg(long)]
    list: bool,

    /// Harness self-test: break the theta oddness identity on purpose.
    #[arg(long, global = true, hide = true)]
    tamper: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Theta-function and elliptic-function invariants.
    ThetaCheck,
    /// Operator relations, membership, triangularity and push-forwards for one root datum.
    HeckeVerify {
        /// One of sl2, a2, b2, gl3.
        #[arg(long)]
        datum: String,
    },
    /// Quiver Hecke relations on Γ built from (n1, n2) with n strands, and their jet transport.
    KlrVerify {
        #[arg(long)]
        n1: i64,
        #[arg(long)]
        n2: i64,
        #[arg(long)]
        n: usize,
    },
    /// Parameter enumeration for a JSON file {"points": [[a, b], ...], "t": [a, b]}.
    Params {
        #[arg(long)]
        input: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidCurve(_)
            | Error::InvalidConfig(_)
            | Error::UnknownDatum(_)
            | Error::Parse(_)
            | Error::TooLarge(_)
            | Error::NonTorsionRequired { .. }
            | Error::SingularParameter { .. }
            | Error::AmbiguousString { .. }
            | Error::Overflow { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Verify(e.to_string()),
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Config::from_json(&text)?
        }
        None => Config::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(n) = cli.samples {
        cfg.samples = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn summarize(r: &Report) {
    for c in &r.checks {
        eprintln!(
            "{} {:<40} samples={:<6} worst_abs={:.3e} worst_rel={:.3e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.samples,
            c.worst_abs,
            c.worst_rel
        );
    }
    eprintln!("{}: {}", r.suite, if r.pass { "pass" } else { "FAIL" });
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if cli.list {
        for (name, what) in suites::SUITES {
            println!("{name:<14} {what}");
        }
        return Ok(true);
    }
    let Some(cmd) = &cli.command else {
        return Err(Failure::Usage("no command given (try --help or --list)".into()));
    };
    let cfg = load_config(cli)?;
    let report = match cmd {
        Command::ThetaCheck => suites::theta_suite(&cfg, SuiteOptions { tamper: cli.tamper })?,
        Command::HeckeVerify { datum } => suites::hecke_suite(&cfg, datum)?,
        Command::KlrVerify { n1, n2, n } => suites::klr_suite(&cfg, *n1, *n2, *n)?,
        Command::Params { input } => {
            let text = std::fs::read_to_string(input).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
            let r = suites::params_suite(&cfg, &text)?;
            println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            if !cli.json {
                eprintln!("params: {} parameter(s), oracle counts {:?}", r.count, r.oracle_counts);
            }
            return Ok(true);
        }
    };
    println!("{}", report.to_json());
    if !cli.json {
        summarize(&report);
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verify(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
