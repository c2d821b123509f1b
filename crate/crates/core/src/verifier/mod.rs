// SPDX-License-Identifier: Apache-2.0

//! Reads machine configurations back off the board and checks the game
//! against the direct interpreter, step by step.

mod audit;
pub mod faults;
mod extract;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use audit::{audit_forced_moves, AuditReport, AuditViolation};
pub use extract::{extract_config, ExtractError};

use crate::compiler::{build_initial_state, BoardRecipe};
use crate::engine::{Engine, EngineOptions};
use crate::model::{Card, Colors, CreatureType, Event, GameState, Player, TraceEvent};
use crate::utm::{tm_step, Program, TmConfig, TmState, TmSymbol, TmTape};

/// Longest random tape drawn by [`random_recipe`], head included.
pub const MAX_RANDOM_TAPE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: u64,
    pub alice_turns: u32,
    /// Whether the oracle's rule for this step was a tapped (state-changing) one.
    pub rule_tapped: bool,
    pub halted: bool,
    /// First 16 hex digits of the SHA-256 of this step's trace lines.
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub step: u64,
    pub expected: String,
    pub found: String,
}

/// How Alice's win came about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WinEvidence {
    pub step: u64,
    /// 1-based Alice turn within the step's cycle.
    pub alice_turn: u32,
    pub via_coalition_victory: bool,
    pub blue_assassin: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CaseResult {
    Halted { step: u64 },
    StepLimit,
    Diverged { step: u64 },
    EngineError { step: u64, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub seed: Option<u64>,
    pub tape: String,
    pub start_state: TmState,
    pub max_steps: u64,
    pub steps_run: u64,
    pub result: CaseResult,
    pub first_divergence: Option<Divergence>,
    pub steps: Vec<StepRecord>,
    /// Non-halting steps whose Alice-turn count disagreed with the rule's tapped flag.
    pub parity_mismatches: Vec<u64>,
    pub audit: AuditReport,
    pub win: Option<WinEvidence>,
    pub trace_digest: String,
}

impl CaseReport {
    /// No divergence, no engine error, a clean audit and the right cycle lengths.
    pub fn ok(&self) -> bool {
        matches!(self.result, CaseResult::Halted { .. } | CaseResult::StepLimit)
            && self.first_divergence.is_none()
            && self.parity_mismatches.is_empty()
            && self.audit.is_clean()
            && self.win.is_none_or(|w| w.alice_turn == 3 && w.via_coalition_victory && w.blue_assassin)
    }

    /// Alice-turn counts, as (turns, how many steps).
    pub fn turn_histogram(&self) -> Vec<(u32, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for s in &self.steps {
            *counts.entry(s.alice_turns).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.seed {
            Some(seed) => write!(f, "seed={seed:#018x}")?,
            None => write!(f, "seed=none")?,
        }
        write!(f, " state={} tape=\"{}\" steps={}/{}", self.start_state, self.tape, self.steps_run, self.max_steps)?;
        match &self.result {
            CaseResult::Halted { step } => write!(f, " result=halted@{step}")?,
            CaseResult::StepLimit => write!(f, " result=step-limit")?,
            CaseResult::Diverged { step } => write!(f, " result=diverged@{step}")?,
            CaseResult::EngineError { step, message } => write!(f, " result=engine-error@{step} ({message})")?,
        }
        let turns: Vec<String> = self
            .turn_histogram()
            .iter()
            .map(|(t, n)| format!("{t}x{n}"))
            .collect();
        write!(f, " turns={}", turns.join(","))?;
        if !self.parity_mismatches.is_empty() {
            write!(f, " parity_mismatches={:?}", self.parity_mismatches)?;
        }
        match &self.first_divergence {
            Some(d) => write!(f, " divergence=step {}: expected {} found {}", d.step, d.expected, d.found)?,
            None => write!(f, " divergence=none")?,
        }
        write!(f, " audit={} digest={}", self.audit, &self.trace_digest[..16])
    }
}

fn describe(config: &TmConfig) -> String {
    format!("{} \"{}\"", config.state, config.tape)
}

/// Streaming SHA-256 over newline-terminated trace records.
#[derive(Clone, Default)]
pub struct TraceDigest(Sha256);

impl TraceDigest {
    pub fn update(&mut self, events: &[TraceEvent]) {
        for ev in events {
            self.0.update(ev.to_json_line().as_bytes());
            self.0.update(b"\n");
        }
    }

    pub fn hex(self) -> String {
        hex::encode(self.0.finalize())
    }
}

/// Position of Alice's win within a step's events, if she won.
fn win_evidence(step: u64, events: &[TraceEvent], state: &GameState) -> Option<WinEvidence> {
    let mut alice_turn = 0;
    let mut cv_this_turn = false;
    for ev in events {
        match &ev.event {
            Event::TurnStart { player: Player::Alice } => {
                alice_turn += 1;
                cv_this_turn = false;
            }
            Event::SpellResolved {
                card: Card::CoalitionVictory,
                controller: Player::Alice,
            } => cv_this_turn = true,
            Event::Win { player: Player::Alice } => {
                let blue_assassin = state
                    .live_creatures()
                    .any(|p| p.has_type(CreatureType::Assassin) && p.colors.contains(Colors::BLUE));
                return Some(WinEvidence {
                    step,
                    alice_turn,
                    via_coalition_victory: cv_this_turn,
                    blue_assassin,
                });
            }
            _ => {}
        }
    }
    None
}

/// Runs the game from `state` next to the interpreter from `start`, comparing
/// after every computational step. `state` may be deliberately corrupted.
pub fn lockstep_from_state(
    state: GameState,
    program: &Program,
    start: TmConfig,
    max_steps: u64,
    options: EngineOptions,
) -> CaseReport {
    let mut report = CaseReport {
        seed: None,
        tape: start.tape.to_string(),
        start_state: start.state,
        max_steps,
        steps_run: 0,
        result: CaseResult::StepLimit,
        first_divergence: None,
        steps: Vec::new(),
        parity_mismatches: Vec::new(),
        audit: AuditReport::default(),
        win: None,
        trace_digest: String::new(),
    };
    let mut engine = Engine::new(state, options);
    let mut oracle = start;
    let mut digest = TraceDigest::default();
    for step in 1..=max_steps {
        let rule = *program.rule(oracle.state, oracle.tape.head);
        oracle = tm_step(&oracle, program).expect("oracle only steps running machines");
        let (game, events) = match engine.run_computational_step() {
            Ok(r) => r,
            Err(e) => {
                let events = engine.take_events();
                digest.update(&events);
                report.audit.extend(&events);
                report.result = CaseResult::EngineError {
                    step,
                    message: e.to_string(),
                };
                break;
            }
        };
        digest.update(&events);
        report.audit.extend(&events);
        let mut step_digest = TraceDigest::default();
        step_digest.update(&events);
        report.steps_run = step;
        report.steps.push(StepRecord {
            step,
            alice_turns: game.alice_turns,
            rule_tapped: rule.result_tapped,
            halted: game.halted,
            digest: step_digest.hex()[..16].to_string(),
        });
        if rule.is_halt {
            report.win = win_evidence(step, &events, engine.state());
        } else if game.alice_turns != 4 - rule.result_tapped as u32 {
            report.parity_mismatches.push(step);
        }

        let found = extract_config(engine.state()).map(|mut c| {
            c.steps = oracle.steps;
            c
        });
        let matches = found.as_ref().is_ok_and(|c| *c == oracle) && game.halted == rule.is_halt;
        if !matches {
            report.first_divergence = Some(Divergence {
                step,
                expected: describe(&oracle),
                found: match &found {
                    Ok(c) => describe(c),
                    Err(e) => format!("unreadable board ({e})"),
                },
            });
            report.result = CaseResult::Diverged { step };
            break;
        }
        if game.halted {
            report.result = CaseResult::Halted { step };
            break;
        }
    }
    report.trace_digest = digest.hex();
    report
}

/// Builds the board for `recipe` and runs it in lockstep with the interpreter.
pub fn lockstep_verify(recipe: &BoardRecipe, max_steps: u64, options: EngineOptions) -> CaseReport {
    let start = TmConfig::new(recipe.tape.clone(), recipe.start_state);
    lockstep_from_state(build_initial_state(recipe), &recipe.program, start, max_steps, options)
}

/// A uniformly random tape of 1..=16 cells with the head anywhere on it, and
/// a uniformly random start state.
pub fn random_recipe(rng: &mut impl Rng, program: &Program) -> BoardRecipe {
    let len = rng.gen_range(1..=MAX_RANDOM_TAPE);
    let head_at = rng.gen_range(0..len);
    let mut cells: Vec<TmSymbol> = (0..len)
        .map(|_| TmSymbol::new(rng.gen_range(1..=18)).expect("in range"))
        .collect();
    let right = cells.split_off(head_at + 1);
    let head = cells.pop().expect("head cell");
    let left = cells.into_iter().rev();
    let state = if rng.gen_bool(0.5) { TmState::Q1 } else { TmState::Q2 };
    BoardRecipe::new(program.clone(), TmTape::new(left, head, right), state).expect("running state")
}

/// `count` seeded cases. Each case's seed is drawn from a master stream so
/// that any single case can be replayed alone.
pub fn random_cases(seed: u64, count: usize, program: &Program) -> Vec<(u64, BoardRecipe)> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let case_seed: u64 = master.gen();
            let recipe = random_recipe(&mut ChaCha8Rng::seed_from_u64(case_seed), program);
            (case_seed, recipe)
        })
        .collect()
}

#[cfg(test)]
mod tests;
