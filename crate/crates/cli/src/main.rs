// SPDX-License-Identifier: Apache-2.0

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use rotlung_core::utm::parse_tape_file;
use rotlung_core::verifier::random_cases;
use rotlung_core::{
    build_initial_state, census, extract_config, lockstep_verify, BoardRecipe, BoardSnapshot,
    Engine, EngineOptions, Outcome, Program, TmState,
};

#[derive(Parser)]
#[command(name = "rotlung", version, about = "Run Rogozhin's (2,18) UTM on a simulated Magic board")]
struct Cli {
    /// Program manifest; defaults to the bundled (2,18) transcription.
    #[arg(long, global = true, env = "ROTLUNG_MANIFEST")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the board for a tape and play until Alice wins or the step limit.
    Run {
        #[arg(long)]
        tape: PathBuf,
        /// Start state; overrides the tape file's `state`.
        #[arg(long)]
        state: Option<TmState>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_steps: u64,
        /// Write the event log here, one JSON record per line.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check random tapes against the direct interpreter.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cases: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the initial board for a tape.
    DumpBoard {
        #[arg(long)]
        tape: PathBuf,
        #[arg(long)]
        state: Option<TmState>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    /// Nontoken permanents grouped by name, controller and text changes.
    Census,
}

fn load_program(path: Option<&Path>) -> Result<Program> {
    match path {
        None => Ok(Program::canonical()),
        Some(p) => {
            let file = File::open(p).with_context(|| format!("opening manifest {}", p.display()))?;
            Program::from_reader(file).with_context(|| format!("loading manifest {}", p.display()))
        }
    }
}

fn load_recipe(program: Program, tape: &Path, state: Option<TmState>) -> Result<BoardRecipe> {
    let text = fs::read_to_string(tape).with_context(|| format!("reading tape {}", tape.display()))?;
    let (tape, file_state) = parse_tape_file(&text)?;
    Ok(BoardRecipe::new(program, tape, state.unwrap_or(file_state))?)
}

fn cmd_run(
    recipe: BoardRecipe,
    max_steps: u64,
    trace: Option<&Path>,
    out: &mut impl Write,
) -> Result<()> {
    let mut sink = match trace {
        Some(p) => Some(BufWriter::new(
            File::create(p).with_context(|| format!("creating trace {}", p.display()))?,
        )),
        None => None,
    };
    let mut engine = Engine::new(build_initial_state(&recipe), EngineOptions::default());
    let mut halted_at = None;
    for step in 1..=max_steps {
        let result = engine.run_computational_step();
        let (report, events) = match result {
            Ok(r) => r,
            Err(e) => {
                if let Some(sink) = sink.as_mut() {
                    for ev in engine.take_events() {
                        writeln!(sink, "{}", ev.to_json_line())?;
                    }
                    sink.flush()?;
                }
                bail!("engine error at step {step}: {e}");
            }
        };
        if let Some(sink) = sink.as_mut() {
            for ev in &events {
                writeln!(sink, "{}", ev.to_json_line())?;
            }
        }
        if report.halted {
            halted_at = Some(step);
            break;
        }
    }
    if let Some(mut sink) = sink {
        sink.flush()?;
    }
    let config = extract_config(engine.state()).context("reading the final tape off the board")?;
    match halted_at {
        Some(k) => writeln!(out, "halted-alice-wins at step {k}")?,
        None => {
            debug_assert_eq!(engine.state().outcome, Outcome::Ongoing);
            writeln!(out, "step-limit")?
        }
    }
    writeln!(out, "state: {}", config.state)?;
    writeln!(out, "tape: {}", config.tape)?;
    Ok(())
}

/// Returns whether every case passed.
fn cmd_verify(program: Program, cases: u64, steps: u64, seed: u64, out: &mut impl Write) -> Result<bool> {
    let recipes = random_cases(seed, cases as usize, &program);
    let reports: Vec<_> = recipes
        .par_iter()
        .map(|(case_seed, recipe)| {
            let mut report = lockstep_verify(recipe, steps, EngineOptions::default());
            report.seed = Some(*case_seed);
            report
        })
        .collect();
    let mut passed = 0;
    for (i, report) in reports.iter().enumerate() {
        let ok = report.ok();
        passed += ok as usize;
        writeln!(out, "case {i} {} {report}", if ok { "ok" } else { "FAIL" })?;
    }
    writeln!(out, "{passed}/{} ok", reports.len())?;
    Ok(passed == reports.len())
}

fn cmd_dump_board(recipe: BoardRecipe, format: Format, out: &mut impl Write) -> Result<()> {
    let state = build_initial_state(&recipe);
    match format {
        Format::Text => write!(out, "{}", BoardSnapshot::capture(&state))?,
        Format::Json => writeln!(out, "{}", BoardSnapshot::capture(&state).to_json())?,
        Format::Census => {
            for row in census(&state) {
                writeln!(out, "{row}")?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = (|| -> Result<bool> {
        let program = load_program(cli.manifest.as_deref())?;
        match cli.command {
            Command::Run {
                tape,
                state,
                max_steps,
                trace,
            } => {
                let recipe = load_recipe(program, &tape, state)?;
                cmd_run(recipe, max_steps, trace.as_deref(), &mut out)?;
                Ok(true)
            }
            Command::Verify { cases, steps, seed } => cmd_verify(program, cases, steps, seed, &mut out),
            Command::DumpBoard { tape, state, format } => {
                let recipe = load_recipe(program, &tape, state)?;
                cmd_dump_board(recipe, format, &mut out)?;
                Ok(true)
            }
        }
    })();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
