use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use procsplit::axioms::run_suite;
use procsplit::equivalence::bisimilar;
use procsplit::regions::{async_regions, sync_regions};
use procsplit::reo::ConnectorTopology;
use procsplit::semantics::{explore, DEFAULT_MAX_STATES};
use procsplit::splitting::{split_specification, split_with, SplitOptions, WordMode};
use procsplit::{format, parse, ActionSet, BranchWord, ProcName, Specification};

#[derive(Parser)]
#[command(name = "procsplit", version)]
#[command(about = "Multi-action process algebra: exploration, bisimulation, splitting and Reo regions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a specification
    Check { file: PathBuf },

    /// Explore the state space of a process
    Lts {
        file: PathBuf,
        #[arg(long)]
        proc: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
        /// Write the LTS in Aldebaran format
        #[arg(long)]
        aut: Option<PathBuf>,
    },

    /// Decide strong bisimilarity of two processes
    Bisim {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long)]
        proc_a: Option<String>,
        #[arg(long)]
        proc_b: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },

    /// Split a process along a set of actions
    Split {
        file: PathBuf,
        #[arg(long)]
        proc: Option<String>,
        /// Comma-separated actions, e.g. `a,b`
        #[arg(long, value_delimiter = ',')]
        actions: Vec<String>,
        #[arg(long, default_value = "")]
        word: String,
        /// Check that the split is bisimilar to the original
        #[arg(long)]
        verify: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
        /// Keep the branch word fixed at choices (unsound, for experiments)
        #[arg(long, hide = true)]
        freeze_words: bool,
    },

    /// Compute synchronous regions, and asynchronous pairs given a topology
    Regions {
        file: PathBuf,
        #[arg(long)]
        proc: Option<String>,
        #[arg(long)]
        topo: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },

    /// Compose a Reo connector topology into a specification
    Reo {
        topofile: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },

    /// Check the axioms on random instances
    Axioms {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        per_axiom: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: procsplit::Error,
    },
    #[error(transparent)]
    Lib(#[from] procsplit::Error),
}

/// Whether a command's verdict was positive.
type Outcome = Result<bool, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_owned(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path, proc: Option<&str>) -> Result<Specification, CliError> {
    let spec = parse(&read(path)?).map_err(|source| CliError::Input {
        path: path.to_owned(),
        source,
    })?;
    match proc {
        None => Ok(spec),
        Some(name) => {
            let name = ProcName::new(name).or_else(|_| ProcName::quoted(name))?;
            Ok(spec.with_root(name)?)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Check { file } => {
            let spec = load(&file, None)?;
            println!(
                "ok: {} definition(s), root {}",
                spec.definitions().len(),
                spec.root()
            );
            Ok(true)
        }
        Command::Lts {
            file,
            proc,
            max_states,
            aut,
        } => {
            let lts = explore(&load(&file, proc.as_deref())?, max_states)?;
            match aut {
                Some(path) => {
                    write_or_print(Some(&path), &lts.to_aut())?;
                    println!(
                        "{} states, {} transitions",
                        lts.num_states,
                        lts.transitions.len()
                    );
                }
                None => print!("{}", lts.to_aut()),
            }
            Ok(true)
        }
        Command::Bisim {
            file_a,
            file_b,
            proc_a,
            proc_b,
            max_states,
        } => {
            let l1 = explore(&load(&file_a, proc_a.as_deref())?, max_states)?;
            let l2 = explore(&load(&file_b, proc_b.as_deref())?, max_states)?;
            let verdict = bisimilar(&l1, &l2);
            report_verdict(&verdict);
            Ok(verdict.bisimilar)
        }
        Command::Split {
            file,
            proc,
            actions,
            word,
            verify,
            output,
            max_states,
            freeze_words,
        } => {
            let spec = load(&file, proc.as_deref())?;
            let names: Vec<&str> = actions.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
            let a_set = ActionSet::try_from_names(&names)?;
            let w = BranchWord::parse(&word)?;
            let options = SplitOptions {
                word_mode: if freeze_words { WordMode::Frozen } else { WordMode::Advance },
                ..SplitOptions::default()
            };
            let result = split_with(&spec, &a_set, &w, &options)?;
            for warning in &result.warnings {
                log::warn!("{warning}");
            }
            let split = split_specification(&spec, &result)?;
            write_or_print(output.as_deref(), &format(&split))?;
            if !verify {
                return Ok(true);
            }
            let verdict = bisimilar(&explore(&spec, max_states)?, &explore(&split, max_states)?);
            report_verdict(&verdict);
            Ok(verdict.bisimilar)
        }
        Command::Regions {
            file,
            proc,
            topo,
            max_states,
        } => {
            let lts = explore(&load(&file, proc.as_deref())?, max_states)?;
            let x = sync_regions(&lts);
            println!("synchronous regions:");
            print!("{x}");
            if let Some(path) = topo {
                let topo = ConnectorTopology::parse(&read(&path)?).map_err(|source| CliError::Input {
                    path: path.clone(),
                    source,
                })?;
                println!("asynchronous pairs:");
                print!("{}", async_regions(&x, &topo));
            }
            Ok(true)
        }
        Command::Reo { topofile, output } => {
            let topo = ConnectorTopology::parse(&read(&topofile)?).map_err(|source| CliError::Input {
                path: topofile.clone(),
                source,
            })?;
            write_or_print(output.as_deref(), &format(&topo.compose()?))?;
            Ok(true)
        }
        Command::Axioms { seed, per_axiom } => {
            let report = run_suite(seed, per_axiom);
            println!("{report}");
            Ok(report.passed())
        }
    }
}

fn report_verdict(verdict: &procsplit::Verdict) {
    if verdict.bisimilar {
        println!("bisimilar");
    } else {
        println!("not bisimilar");
        if let Some(w) = &verdict.witness {
            println!("witness: {w}");
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
