// SPDX-License-Identifier: Apache-2.0

//! Rogozhin's (2,18) universal Turing machine, its embedding into a Magic:
//! The Gathering board, and a lockstep checker between the two.

pub mod compiler;
pub mod engine;
pub mod model;
pub mod utm;
pub mod verifier;

pub use compiler::{build_initial_state, BoardRecipe, CompileError};
pub use engine::{Engine, EngineError, EngineOptions, StepReport, TriggerOrder};
pub use model::{census, BoardSnapshot, CensusRow, GameState, Outcome, TraceEvent};
pub use utm::{Program, TmConfig, TmState, TmSymbol, TmTape};
pub use verifier::{audit_forced_moves, extract_config, lockstep_verify, CaseReport};
