use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use invround::bench::{self, Suite};
use invround::gen::{self, GenKind, GenParams, WindowStyle};
use invround::model::Problem;
use invround::pipeline::{self, Algorithm, LpChoice, SolutionFile, SolveOptions};
use invround::{num, verify, Error};

#[derive(Parser)]
#[command(name = "invround", version, about = "Approximation algorithms for cover problems over time")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Irp,
    SjrpModular,
    SjrpCardinality,
    SjrpCoverage,
    SjrpLaminar,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    LeftAligned,
    Arbitrary,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgArg {
    Sjrp,
    Irp,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum LpArg {
    Config,
    Lovasz,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a seeded instance.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long = "horizon", short = 'T')]
        horizon: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "left-aligned")]
        window_style: StyleArg,
        /// Emit an inventory instance with demands and holding costs.
        #[arg(long)]
        inventory: bool,
        /// Output path, `-` for stdout.
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Solve an instance.
    Solve {
        /// Instance path, `-` for stdin.
        instance: String,
        #[arg(long, value_enum, default_value = "auto")]
        algorithm: AlgArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "k-constant")]
        k_constant: Option<u32>,
        /// Support parameter α, as a decimal or p/q.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        lp: LpArg,
        /// Solution path, `-` for stdout.
        #[arg(short, long, default_value = "-")]
        output: String,
        /// Trace path (JSON lines).
        #[arg(long)]
        trace: Option<String>,
    },
    /// Check a solution against its instance.
    Verify {
        instance: String,
        solution: String,
    },
    /// Run a benchmark suite (JSON file, or `default`).
    Bench {
        #[arg(default_value = "default")]
        suite: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn write_output(path: &str, text: &str) -> Result<(), Error> {
    if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes())?;
        if !text.ends_with('\n') {
            out.write_all(b"\n")?;
        }
        Ok(())
    } else {
        let mut t = text.to_string();
        if !t.ends_with('\n') {
            t.push('\n');
        }
        Ok(fs::write(path, t)?)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Capacity(_) => 3,
        Error::NonTermination { .. } | Error::Solver(_) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Gen { kind, n, horizon, seed, window_style, inventory, output } => {
            let kind = match kind {
                KindArg::Irp => GenKind::Irp,
                KindArg::SjrpModular => GenKind::SjrpModular,
                KindArg::SjrpCardinality => GenKind::SjrpCardinality,
                KindArg::SjrpCoverage => GenKind::SjrpCoverage,
                KindArg::SjrpLaminar => GenKind::SjrpLaminar,
            };
            let style = match window_style {
                StyleArg::LeftAligned => WindowStyle::LeftAligned,
                StyleArg::Arbitrary => WindowStyle::Arbitrary,
            };
            let p = GenParams { kind, n, horizon, seed, style };
            let problem = if inventory {
                Problem::Inventory(gen::generate_inventory(&p)?)
            } else {
                Problem::Cover(gen::generate(&p)?)
            };
            write_output(&output, &problem.to_json())?;
            Ok(0)
        }
        Cmd::Solve { instance, algorithm, seed, k_constant, alpha, lp, output, trace } => {
            let problem = Problem::from_json(&read_input(&instance)?)?;
            let alpha = match alpha {
                Some(a) => {
                    let q = num::parse(&a).map_err(|e| Error::Usage(format!("--alpha: {e}")))?;
                    if q <= num::zero() {
                        return Err(Error::Usage("--alpha must be positive".into()));
                    }
                    Some(q)
                }
                None => None,
            };
            if k_constant == Some(0) {
                return Err(Error::Usage("--k-constant must be at least 1".into()));
            }
            let opts = SolveOptions {
                algorithm: match algorithm {
                    AlgArg::Sjrp => Algorithm::Sjrp,
                    AlgArg::Irp => Algorithm::Irp,
                    AlgArg::Auto => Algorithm::Auto,
                },
                lp: match lp {
                    LpArg::Config => LpChoice::Config,
                    LpArg::Lovasz => LpChoice::Lovasz,
                    LpArg::Auto => LpChoice::Auto,
                },
                seed,
                k: k_constant,
                alpha,
                ..Default::default()
            };
            let out = pipeline::solve(&problem, &opts)?;
            if let Some(path) = trace {
                let lines: Vec<String> = out.trace.iter().map(|v| v.to_string()).collect();
                write_output(&path, &lines.join("\n"))?;
            }
            write_output(&output, &out.solution.to_json())?;
            Ok(0)
        }
        Cmd::Verify { instance, solution } => {
            if instance == "-" && solution == "-" {
                return Err(Error::Usage("only one of the inputs can come from stdin".into()));
            }
            let problem = Problem::from_json(&read_input(&instance)?)?;
            let sol = SolutionFile::from_json(&read_input(&solution)?)?;
            let report = verify::verify(&problem, &sol)?;
            for v in &report.violations {
                println!("violation: {v}");
            }
            if report.is_clean() {
                println!("ok: cost {}", num::format(&report.recomputed_cost));
                Ok(0)
            } else {
                Ok(1)
            }
        }
        Cmd::Bench { suite, format, output } => {
            let suite: Suite = if suite == "default" {
                bench::default_suite()
            } else {
                serde_json::from_str(&read_input(&suite)?).map_err(|e| Error::Usage(format!("suite file: {e}")))?
            };
            let rows = bench::run_suite(&suite)?;
            let text = match format {
                FormatArg::Csv => bench::to_csv(&rows),
                FormatArg::Json => serde_json::to_string_pretty(&rows)?,
            };
            write_output(&output, &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
