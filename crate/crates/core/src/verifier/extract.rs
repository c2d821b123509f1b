// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::engine::phased_in_program_state;
use crate::model::{Colors, CreatureType, GameState, MarkerSide, Outcome, Permanent, PermanentId};
use crate::utm::{TmConfig, TmState, TmSymbol, TmTape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("no 2/2 tape token under the head")]
    NoHead,
    #[error("several 2/2 tape tokens: {0:?}")]
    MultipleHeads(Vec<PermanentId>),
    #[error("{side:?} side: expected toughness {expected}, found {found}")]
    ToughnessGap {
        side: MarkerSide,
        expected: i32,
        found: i32,
    },
    #[error("tape token {0} has colours {1}")]
    StrayColor(PermanentId, Colors),
    #[error("expected exactly one {0:?} end marker, found {1}")]
    MarkerCount(MarkerSide, usize),
    #[error("{side:?} end marker at toughness {found}, expected {expected}")]
    MarkerMisplaced {
        side: MarkerSide,
        expected: i32,
        found: i32,
    },
    #[error("phased-in program cards do not form one control state's rule set")]
    AmbiguousPhase,
    #[error("game won but no program card creates the halt token")]
    NoHaltRule,
}

struct Cell {
    toughness: i32,
    symbol: TmSymbol,
}

/// Which side of the head a green or white token sits on.
fn side_of(colors: Colors) -> Option<MarkerSide> {
    if colors == Colors::GREEN {
        Some(MarkerSide::Left)
    } else if colors == Colors::WHITE {
        Some(MarkerSide::Right)
    } else {
        None
    }
}

fn check_run(side: MarkerSide, mut cells: Vec<Cell>) -> Result<Vec<TmSymbol>, ExtractError> {
    cells.sort_by_key(|c| c.toughness);
    for (i, c) in cells.iter().enumerate() {
        let expected = 3 + i as i32;
        if c.toughness != expected {
            return Err(ExtractError::ToughnessGap {
                side,
                expected,
                found: c.toughness,
            });
        }
    }
    Ok(cells.into_iter().map(|c| c.symbol).collect())
}

/// Reads the machine configuration off a board at a step boundary.
///
/// The head is the unique 2/2 tape token; an end marker at 2/2 stands for
/// a blank head. Sides are read by colour and ordered by toughness. After
/// Alice's win the head cell is the one the halt rule reads. The board does
/// not record a step count, so `steps` is 0.
pub fn extract_config(state: &GameState) -> Result<TmConfig, ExtractError> {
    let ctx = state.stat_context();
    let mut heads: Vec<(PermanentId, TmSymbol)> = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut markers: [Vec<(PermanentId, i32)>; 2] = [Vec::new(), Vec::new()];
    for p in state.live_creatures().filter(|p| p.is_token) {
        let (power, toughness) = ctx.stats(p);
        if let Some(side) = p.marker_side() {
            markers[side as usize].push((p.id, toughness));
            if (power, toughness) == (2, 2) {
                heads.push((p.id, TmSymbol::BLANK));
            }
            continue;
        }
        if p.has_type(CreatureType::Assassin) {
            continue;
        }
        let Some(symbol) = p.tape_symbol() else { continue };
        if (power, toughness) == (2, 2) {
            heads.push((p.id, symbol));
            continue;
        }
        let cell = Cell { toughness, symbol };
        match side_of(p.colors) {
            Some(MarkerSide::Left) => left.push(cell),
            Some(MarkerSide::Right) => right.push(cell),
            None => return Err(ExtractError::StrayColor(p.id, p.colors)),
        }
    }

    let halted = state.outcome == Outcome::AliceWins;
    let head = if halted {
        if !heads.is_empty() {
            return Err(ExtractError::MultipleHeads(heads.iter().map(|h| h.0).collect()));
        }
        halt_trigger(state).ok_or(ExtractError::NoHaltRule)?
    } else {
        match heads.as_slice() {
            [] => return Err(ExtractError::NoHead),
            [(_, s)] => *s,
            _ => return Err(ExtractError::MultipleHeads(heads.iter().map(|h| h.0).collect())),
        }
    };
    let head_on_marker = |side: MarkerSide| {
        !halted && heads.iter().any(|(id, _)| markers[side as usize].iter().any(|m| m.0 == *id))
    };

    let left = check_run(MarkerSide::Left, left)?;
    let right = check_run(MarkerSide::Right, right)?;
    for (side, len) in [(MarkerSide::Left, left.len()), (MarkerSide::Right, right.len())] {
        let found = &markers[side as usize];
        if found.len() != 1 {
            return Err(ExtractError::MarkerCount(side, found.len()));
        }
        let expected = if head_on_marker(side) { 2 } else { 3 + len as i32 };
        if found[0].1 != expected || (head_on_marker(side) && len != 0) {
            return Err(ExtractError::MarkerMisplaced {
                side,
                expected,
                found: found[0].1,
            });
        }
    }

    let control = if halted {
        TmState::Halted
    } else {
        let s = phased_in_program_state(state).ok_or(ExtractError::AmbiguousPhase)?;
        if !phase_partition_holds(state, s) {
            return Err(ExtractError::AmbiguousPhase);
        }
        s
    };
    Ok(TmConfig::new(TmTape::new(left, head, right), control))
}

fn program_rule(p: &Permanent) -> Option<&crate::model::ReanimateRule> {
    p.behaviors
        .iter()
        .find_map(|b| b.reanimate_rule().map(|(r, _)| r))
        .filter(|r| r.program_state.is_some())
}

/// Every program card of `s` is phased in and every other one phased out.
fn phase_partition_holds(state: &GameState, s: TmState) -> bool {
    state.battlefield.values().all(|p| match program_rule(p) {
        Some(r) => p.phased_out == (r.program_state != Some(s)),
        None => true,
    })
}

/// The symbol read by the rule that creates the Assassin.
fn halt_trigger(state: &GameState) -> Option<TmSymbol> {
    state.battlefield.values().find_map(|p| {
        let r = program_rule(p)?;
        (r.token.creature_type == CreatureType::Assassin)
            .then(|| r.watches.symbol())
            .flatten()
    })
}
