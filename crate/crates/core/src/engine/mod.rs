// SPDX-License-Identifier: Apache-2.0

//! The forced game line: turn structure, phasing, Wild Evocation casts, the
//! four-spell cycle, APNAP trigger stacking, state-based actions and the
//! Coalition Victory win.

mod actions;
pub use actions::token_permanent;
mod stack;
mod turn;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::model::{
    BehaviorTag, Event, GameState, ModelError, PendingTrigger, Permanent, PermanentId,
    TraceEvent, TriggerKind,
};
use crate::utm::TmState;

/// How simultaneous triggers controlled by the same player are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TriggerOrder {
    /// Ascending source timestamp.
    #[default]
    Canonical,
    /// Seeded shuffle; used to check that the order never matters.
    Shuffled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    /// Strict engines fail on any ambiguous or impossible forced move and on
    /// infrastructure deaths. Lenient engines record the problem in the
    /// trace, pick the lowest id and carry on.
    pub strict: bool,
    pub trigger_order: TriggerOrder,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            strict: true,
            trigger_order: TriggerOrder::Canonical,
        }
    }
}

impl EngineOptions {
    pub fn lenient() -> Self {
        EngineOptions {
            strict: false,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("forced-move violation: {reason} (at {})", event.to_json_line())]
    ForcedMove { reason: String, event: Box<TraceEvent> },
    #[error("board corruption: {0}")]
    BoardCorruption(String),
    #[error("nontoken permanent {name} ({id}) left the battlefield")]
    InfrastructureDied { id: PermanentId, name: &'static str },
    #[error("game is over")]
    GameOver,
    #[error("not at a step boundary: {0}")]
    NotAtStepBoundary(String),
    #[error("no step boundary reached after {0} Alice turns")]
    NoStepBoundary(u32),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Summary of one computational step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub step: u64,
    pub alice_turns: u32,
    pub state_changed: bool,
    pub halted: bool,
}

/// A single game instance and its trace sink.
pub struct Engine {
    state: GameState,
    options: EngineOptions,
    rng: Option<ChaCha8Rng>,
    events: Vec<TraceEvent>,
    steps_run: u64,
}

impl Engine {
    pub fn new(state: GameState, options: EngineOptions) -> Self {
        let rng = match options.trigger_order {
            TriggerOrder::Canonical => None,
            TriggerOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        Engine {
            state,
            options,
            rng,
            events: Vec::new(),
            steps_run: 0,
        }
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    /// Direct access for tests and fault injection.
    pub fn state_mut(&mut self) -> &mut GameState {
        &mut self.state
    }

    pub fn into_state(self) -> GameState {
        self.state
    }

    pub fn options(&self) -> EngineOptions {
        self.options
    }

    pub fn steps_run(&self) -> u64 {
        self.steps_run
    }

    /// Drains the events recorded since the last call.
    pub fn take_events(&mut self) -> Vec<TraceEvent> {
        std::mem::take(&mut self.events)
    }

    fn emit(&mut self, event: Event) {
        self.events.push(TraceEvent {
            turn: self.state.turn_number,
            phase: self.state.phase,
            event,
        });
    }

    /// Strict mode turns `event` into an error; lenient mode only records it.
    fn forced_move_violation(&mut self, reason: String, event: Event) -> Result<(), EngineError> {
        let record = TraceEvent {
            turn: self.state.turn_number,
            phase: self.state.phase,
            event,
        };
        if self.options.strict {
            return Err(EngineError::ForcedMove {
                reason,
                event: Box::new(record),
            });
        }
        self.events.push(record);
        self.emit(Event::Warning { message: reason });
        Ok(())
    }

    fn queue_trigger(&mut self, source: &Permanent, kind: TriggerKind) {
        let seq = self.state.take_seq();
        self.state.pending_triggers.push(PendingTrigger {
            source: source.id,
            source_name: source.name,
            controller: source.controller,
            source_timestamp: source.timestamp,
            seq,
            kind,
        });
    }

    /// Control state whose program cards are currently phased in, if exactly one.
    pub fn phased_in_program_state(&self) -> Option<TmState> {
        phased_in_program_state(&self.state)
    }
}

/// Control state whose program cards are phased in, when that is unambiguous.
pub fn phased_in_program_state(state: &GameState) -> Option<TmState> {
    let mut seen = None;
    for p in state.live() {
        for b in &p.behaviors {
            let Some((rule, _)) = b.reanimate_rule() else {
                continue;
            };
            let Some(s) = rule.program_state else {
                continue;
            };
            match seen {
                None => seen = Some(s),
                Some(prev) if prev != s => return None,
                _ => {}
            }
        }
    }
    seen
}

pub(crate) fn is_program_card(p: &Permanent) -> bool {
    p.behaviors
        .iter()
        .any(|b| b.reanimate_rule().is_some_and(|(r, _)| r.program_state.is_some()))
}

pub(crate) fn has(p: &Permanent, tag: BehaviorTag) -> bool {
    p.behaviors.contains(&tag)
}
