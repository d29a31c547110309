use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypersel_cli::report::{Report, Status};
use hypersel_cli::{generate, load, report_exit_code, resolve, CliError, Overrides, Runner, Scenario};

#[derive(Parser)]
#[command(name = "hypersel", version, about = "Check extreme hyperspace selections on compact ordinal amalgams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy, Default)]
struct RunOpts {
    /// Grid offset for enumerated families and nets.
    #[arg(long)]
    grid: Option<u64>,
    /// Window for net and base certification.
    #[arg(long)]
    window: Option<u64>,
    /// Seed for sampled open sets.
    #[arg(long)]
    seed: Option<u64>,
}

impl From<RunOpts> for Overrides {
    fn from(o: RunOpts) -> Self {
        Overrides { grid: o.grid, window: o.window, seed: o.seed }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
struct DemoOpts {
    #[arg(long, value_enum, default_value_t)]
    report: Format,
    /// Also write the generated scenario to this path.
    #[arg(long)]
    save: Option<PathBuf>,
    #[command(flatten)]
    run: RunOpts,
}

#[derive(Subcommand)]
enum Generator {
    /// The compact ordinal [0, γ].
    Ordinal {
        gamma: String,
        #[command(flatten)]
        opts: DemoOpts,
    },
    /// n copies of [0, ω] glued at ω.
    Wedge {
        n: usize,
        #[command(flatten)]
        opts: DemoOpts,
    },
    /// The finite fan.
    Fan {
        #[arg(long)]
        prongs: usize,
        #[command(flatten)]
        opts: DemoOpts,
    },
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate every object of a scenario.
    Validate { file: PathBuf },
    /// Run the suites of a scenario.
    Check {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Run a named base construction and print its stages.
    BuildBase {
        file: PathBuf,
        #[arg(long)]
        target: String,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Generate a scenario and check it.
    Demo {
        #[command(subcommand)]
        generator: Generator,
    },
}

fn text(r: &Report) -> String {
    let mut out = String::new();
    for c in &r.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        out.push_str(&format!("{tag:5} {}/{}: {}\n", c.suite, c.name, c.detail));
        if let Some(w) = &c.witness {
            out.push_str(&format!("      witness {w}\n"));
        }
    }
    out.push_str(&format!(
        "{}: {} passed, {} failed, {} errors\n",
        r.scenario, r.summary.pass, r.summary.fail, r.summary.error
    ));
    out
}

fn invalid(e: CliError) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(e.exit_code() as u8)
}

fn write_out(path: Option<&PathBuf>, body: &str) -> Result<(), ExitCode> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| {
            eprintln!("{}: {e}", p.display());
            ExitCode::from(2)
        }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn demo(scenario: Result<Scenario, String>, opts: &DemoOpts) -> ExitCode {
    let scenario = match scenario {
        Ok(s) => s,
        Err(e) => return invalid(CliError::Invalid(vec![e])),
    };
    if let Some(p) = &opts.save {
        let body = serde_json::to_string_pretty(&scenario).expect("scenario serializes") + "\n";
        if let Err(code) = write_out(Some(p), &body) {
            return code;
        }
    }
    let model = match resolve(scenario.clone()) {
        Ok(m) => m,
        Err(problems) => return invalid(CliError::Invalid(problems)),
    };
    let report = Runner::new(&model, opts.run.into()).run();
    let body = match opts.report {
        Format::Text => text(&report),
        Format::Json => {
            let doc = serde_json::json!({ "scenario": scenario, "report": report });
            serde_json::to_string_pretty(&doc).expect("serializes") + "\n"
        }
    };
    print!("{body}");
    ExitCode::from(report_exit_code(&report) as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { file } => match load(&file) {
            Ok(m) => {
                println!(
                    "{}: valid ({} sets, {} opens, {} selections, {} decompositions, {} cuts, {} bases, {} nets, {} suites)",
                    m.name,
                    m.sets.len(),
                    m.opens.len(),
                    m.selections.len(),
                    m.decompositions.len(),
                    m.cuts.len(),
                    m.bases.len(),
                    m.nets.len(),
                    m.suites.len()
                );
                ExitCode::SUCCESS
            }
            Err(e) => invalid(e),
        },
        Command::Check { file, out, run } => {
            let model = match load(&file) {
                Ok(m) => m,
                Err(e) => return invalid(e),
            };
            let report = Runner::new(&model, run.into()).run();
            if let Err(code) = write_out(out.as_ref(), &report.to_json()) {
                return code;
            }
            ExitCode::from(report_exit_code(&report) as u8)
        }
        Command::BuildBase { file, target, run } => {
            let model = match load(&file) {
                Ok(m) => m,
                Err(e) => return invalid(e),
            };
            let runner = Runner::new(&model, run.into());
            match runner.build_base(&target, &runner.params()) {
                Ok(v) => {
                    println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
                    ExitCode::SUCCESS
                }
                Err(o) => {
                    eprintln!("{}", o.detail);
                    if let Some(w) = o.witness {
                        println!("{}", serde_json::json!({ "witness": w }));
                    }
                    ExitCode::from(if o.status == Status::Error { 2 } else { 1 })
                }
            }
        }
        Command::Demo { generator } => match generator {
            Generator::Ordinal { gamma, opts } => {
                demo(gamma.parse().map(|g| generate::ordinal(&g)).map_err(|e: hypersel_core::ordinal::ParseOrdinalError| e.to_string()), &opts)
            }
            Generator::Wedge { n, opts } => demo(generate::wedge(n), &opts),
            Generator::Fan { prongs, opts } => demo(generate::fan(prongs), &opts),
        },
    }
}
