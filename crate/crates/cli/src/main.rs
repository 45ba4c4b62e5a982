use std::fs;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fdnf_core::analyzer::{annotate_attempt, solve_reference, AttemptReport};
use fdnf_core::formula::{equivalent, parse, print, VarSet};
use fdnf_core::solution::{aggregate_stats, export_tsv, load_solutions, write_annotations, Attempt};
use fdnf_core::taskgen::{generate_tasks, TaskSpec};
use fdnf_session::SessionStore;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "fdnf", version, about = "Analyze step-by-step conversions to full disjunctive normal form")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Annotate every step of the attempts in solution files.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Output file, or directory for one annotation file per attempt.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the statistics table.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Write the statistics table of solution files as TSV.
    Stats {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate random tasks as a solution file with empty attempts.
    Gen {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Variable pool, e.g. XYZW.
        #[arg(long, default_value = "XYZW")]
        vars: String,
        /// Negation count range A..B.
        #[arg(long, default_value = "2..3", value_parser = parse_range)]
        negations: (usize, usize),
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a formula to full DNF with the reference solver.
    Solve {
        formula: String,
        /// Task variables; defaults to those of the formula.
        #[arg(long)]
        vars: Option<String>,
        /// Print every step.
        #[arg(long)]
        trace: bool,
    },
    /// Check whether two formulas are equivalent.
    Check { first: String, second: String },
    /// Run the interactive session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory with the browser front end.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").unwrap_or((s, s));
    let a = a.trim().parse().map_err(|_| format!("bad range {s:?}"))?;
    let b = b.trim_start_matches('=').trim().parse().map_err(|_| format!("bad range {s:?}"))?;
    Ok((a, b))
}

/// Failure with its exit code: 1 for bad input contents, 2 for usage and I/O.
struct Failure(u8, String);

type Outcome = Result<ExitCode, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

fn read(path: &FsPath) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: Option<&FsPath>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(bytes).map_err(|e| usage(e.to_string())),
    }
}

/// Loads every file; reports rejected attempts on stderr.
fn load_all(files: &[PathBuf]) -> Result<(Vec<(PathBuf, Attempt)>, bool), Failure> {
    let mut attempts = Vec::new();
    let mut clean = true;
    for file in files {
        let bytes = read(file)?;
        match load_solutions(&bytes) {
            Ok(loaded) => {
                for f in &loaded.failures {
                    eprintln!("{}: attempt {} ({}): {}", file.display(), f.index, f.task_id, f.error);
                    clean = false;
                }
                attempts.extend(loaded.attempts.into_iter().map(|a| (file.clone(), a)));
            }
            Err(e) => {
                eprintln!("{}: {e}", file.display());
                clean = false;
            }
        }
    }
    Ok((attempts, clean))
}

fn file_name(source: &FsPath, attempt: &Attempt) -> String {
    let stem = source.file_stem().map_or("solutions".into(), |s| s.to_string_lossy().into_owned());
    let mut name = format!("{stem}-{}", attempt.task_id);
    if let Some(s) = &attempt.student {
        name.push('-');
        name.push_str(s);
    }
    let safe: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' })
        .collect();
    safe + ".txt"
}

fn analyze(files: &[PathBuf], output: Option<&FsPath>, stats: Option<&FsPath>) -> Outcome {
    let (attempts, mut clean) = load_all(files)?;
    let reports: Vec<AttemptReport> = attempts.iter().map(|(_, a)| annotate_attempt(a)).collect();
    for ((file, a), r) in attempts.iter().zip(&reports) {
        if let Some(why) = &r.summary.invalid {
            eprintln!("{}: {}: {why}", file.display(), a.task_id);
            clean = false;
        }
    }
    let to_dir = output.is_some_and(|p| p.is_dir());
    if to_dir {
        let dir = output.expect("checked");
        for ((file, a), r) in attempts.iter().zip(&reports) {
            write(Some(&dir.join(file_name(file, a))), &write_annotations(a, r))?;
        }
    } else {
        let mut all = Vec::new();
        for (i, ((_, a), r)) in attempts.iter().zip(&reports).enumerate() {
            if i > 0 {
                all.push(b'\n');
            }
            all.extend(write_annotations(a, r));
        }
        write(output, &all)?;
    }
    if let Some(path) = stats {
        let table = aggregate_stats(attempts.iter().map(|(_, a)| a).zip(reports.iter().map(|r| &r.summary)));
        write(Some(path), &export_tsv(&table))?;
    }
    Ok(if clean { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn stats(files: &[PathBuf], output: Option<&FsPath>) -> Outcome {
    let (attempts, mut clean) = load_all(files)?;
    let reports: Vec<AttemptReport> = attempts.iter().map(|(_, a)| annotate_attempt(a)).collect();
    clean &= reports.iter().all(|r| r.summary.invalid.is_none());
    let table = aggregate_stats(attempts.iter().map(|(_, a)| a).zip(reports.iter().map(|r| &r.summary)));
    write(output, &export_tsv(&table))?;
    Ok(if clean { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct GeneratedFile<'a> {
    version: u32,
    generator: &'a TaskSpec,
    attempts: Vec<Attempt>,
}

fn gen(spec: TaskSpec, output: Option<&FsPath>) -> Outcome {
    let tasks = generate_tasks(&spec).map_err(|e| usage(e.to_string()))?;
    let attempts = tasks
        .iter()
        .enumerate()
        .map(|(i, f)| Attempt::new(format!("s{}-{}", spec.seed, i + 1), print(f)))
        .collect();
    let file = GeneratedFile { version: fdnf_core::solution::FORMAT_VERSION, generator: &spec, attempts };
    let mut bytes = serde_json::to_vec_pretty(&file).expect("serializable");
    bytes.push(b'\n');
    write(output, &bytes)?;
    Ok(ExitCode::SUCCESS)
}

fn formula_arg(text: &str) -> Result<fdnf_core::formula::Formula, Failure> {
    parse(text).map_err(|e| usage(format!("{text:?}: {e}")))
}

fn solve(text: &str, vars: Option<&str>, trace: bool) -> Outcome {
    let f = formula_arg(text)?;
    let vars: VarSet = match vars {
        Some(v) => v.chars().filter(|c| !c.is_whitespace() && *c != ',').collect(),
        None => f.variables(),
    };
    if let Some(v) = f.variables().difference(&vars).next() {
        return Err(usage(format!("variable {v} is not among --vars")));
    }
    let steps = solve_reference(&f, &vars).map_err(|e| Failure(1, e.to_string()))?;
    let mut out = String::new();
    if trace {
        for (i, s) in steps.iter().enumerate() {
            out.push_str(&format!("{:>3}  rule {:<2} at {:<10} {}\n", i + 1, s.rule, s.path.to_string(), s.formula));
        }
    }
    let last = steps.last().map_or_else(|| print(&f), |s| print(&s.formula));
    out.push_str(&last);
    out.push('\n');
    write(None, out.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn check(first: &str, second: &str) -> Outcome {
    let f = formula_arg(first)?;
    let g = formula_arg(second)?;
    match equivalent(&f, &g) {
        Ok(true) => {
            println!("equivalent");
            Ok(ExitCode::SUCCESS)
        }
        Ok(false) => {
            println!("not equivalent");
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(usage(e.to_string())),
    }
}

fn serve(host: &str, port: u16, static_dir: Option<PathBuf>) -> Outcome {
    let addr: SocketAddr = format!("{host}:{port}").parse().map_err(|e| usage(format!("{host}:{port}: {e}")))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| usage(e.to_string()))?;
    eprintln!("listening on http://{addr}");
    runtime
        .block_on(fdnf_session::serve(addr, SessionStore::default(), static_dir))
        .map_err(|e| usage(e.to_string()))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze { files, output, stats: s } => analyze(&files, output.as_deref(), s.as_deref()),
        Command::Stats { files, output } => stats(&files, output.as_deref()),
        Command::Gen { count, seed, vars, negations, output } => {
            let spec = TaskSpec {
                count,
                seed,
                pool: vars.chars().filter(|c| !c.is_whitespace() && *c != ',').collect(),
                min_negations: negations.0,
                max_negations: negations.1,
                ..TaskSpec::default()
            };
            gen(spec, output.as_deref())
        }
        Command::Solve { formula, vars, trace } => solve(&formula, vars.as_deref(), trace),
        Command::Check { first, second } => check(&first, &second),
        Command::Serve { port, host, static_dir } => serve(&host, port, static_dir),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("fdnf: {msg}");
            ExitCode::from(code)
        }
    }
}
