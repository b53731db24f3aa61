mod commands;
mod error;
mod report;
mod scene;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use arcspace::catalog::example;
use arcspace::field::Field;
use arcspace::jets::DEFAULT_BUDGET;
use clap::{Parser, Subcommand};

use crate::commands::CountArgs;
use crate::error::CliError;
use crate::report::Report;
use crate::scene::Scene;
use crate::suites::{Suite, SuiteOptions};

#[derive(Parser)]
#[command(name = "arcspace", version, about = "Arc-space invariants, jet counts and motivic change of variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Render the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for enumeration.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Do not fail on jets whose liftability could not be decided.
    #[arg(long, global = true)]
    allow_undetermined: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant factors of the differentials along a scene arc.
    Invariants {
        scene: PathBuf,
        arc: String,
        /// Also report the order of this subscheme along the arc (repeatable).
        #[arg(long = "ord")]
        ords: Vec<String>,
        #[arg(long, default_value_t = 16)]
        precision: usize,
    },
    /// Relative Mather discrepancy of a morphism along a scene arc.
    Mather {
        scene: PathBuf,
        morphism: String,
        arc: String,
        /// Subscheme Z of the target for the contact profile.
        #[arg(long)]
        z: Option<String>,
        /// Subscheme V of the target for the contact profile.
        #[arg(long)]
        v: Option<String>,
    },
    /// Counts jets of a scene variety over F_q.
    CountJets {
        scene: PathBuf,
        variety: String,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        q: Option<u32>,
        /// Keep only jets that lift to arcs.
        #[arg(long)]
        liftable: bool,
        /// Restrict to the fiber over ARC truncated at level M, written ARC@M.
        #[arg(long)]
        fiber: Option<String>,
        /// List the jets.
        #[arg(long)]
        dump: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Runs a verification suite on a catalog example (E1..E4) or a scene file.
    Verify {
        target: String,
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        q: Option<u32>,
        /// Contact cap for the counting suites.
        #[arg(long = "P", default_value_t = 2)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Sampled arcs per chart.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Random re-extensions per arc in the stability suite.
        #[arg(long, default_value_t = 20)]
        tails: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Precision accepted for parity with the other commands; the suites escalate on their own.
        #[arg(long)]
        precision: Option<usize>,
    },
}

fn read_scene(path: &Path, q: Option<u32>) -> Result<Scene, CliError> {
    let src = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Scene::parse(&src, q)
}

fn prime(q: u32) -> Result<Field, CliError> {
    Field::prime(q).map_err(|e| CliError::Usage(e.to_string()))
}

fn verify(target: &str, suite: Suite, q: Option<u32>, opts: &SuiteOptions) -> Result<Report, CliError> {
    let path = Path::new(target);
    if path.is_file() {
        let scene = read_scene(path, q)?;
        return match suite {
            Suite::Stability => suites::stability_scene(&scene, opts),
            Suite::Fibers => suites::fibers_scene(&scene, opts),
            other => Err(CliError::Usage(format!(
                "suite {} needs a catalog example, not a scene",
                other.name()
            ))),
        };
    }
    let counting = matches!(suite, Suite::Fibration | Suite::CovCount | Suite::Fibers);
    let field = match (q, counting) {
        (Some(q), _) => prime(q)?,
        (None, true) => prime(2)?,
        (None, false) => Field::Rational,
    };
    if suite == Suite::CovExact && q.is_some() {
        return Err(CliError::Usage("cov-exact works in the motivic ring; drop --q".into()));
    }
    let ex = example(target, field)?;
    match suite {
        Suite::CovExact => suites::cov_exact(&ex),
        Suite::Fibration => suites::fibration(&ex, opts),
        Suite::CovCount => suites::cov_count(&ex, opts),
        Suite::Stability => suites::stability(&ex, opts),
        Suite::Additivity => suites::additivity(&ex, opts),
        Suite::Fibers => suites::fibers(&ex, opts),
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Invariants {
            scene,
            arc,
            ords,
            precision,
        } => commands::invariants(&read_scene(scene, None)?, arc, ords, *precision),
        Command::Mather { scene, morphism, arc, z, v } => {
            commands::mather(&read_scene(scene, None)?, morphism, arc, z.as_deref(), v.as_deref())
        }
        Command::CountJets {
            scene,
            variety,
            level,
            q,
            liftable,
            fiber,
            dump,
            budget,
        } => commands::count_jets(
            &read_scene(scene, *q)?,
            &CountArgs {
                variety,
                level: *level,
                liftable: *liftable,
                fiber: fiber.as_deref(),
                dump: *dump,
                budget: *budget,
            },
        ),
        Command::Verify {
            target,
            suite,
            q,
            cap,
            budget,
            samples,
            tails,
            seed,
            precision: _,
        } => verify(
            target,
            *suite,
            *q,
            &SuiteOptions {
                cap: *cap,
                budget: *budget,
                samples: *samples,
                tails: *tails,
                seed: *seed,
                fiber_limit: 200_000,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let started = Instant::now();
    let result = run(&cli);
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    match result {
        Ok(report) => {
            let out = if cli.json {
                report.render_json(cli.allow_undetermined)
            } else {
                report.render_text(cli.allow_undetermined)
            };
            print!("{out}");
            if report.passed(cli.allow_undetermined) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
