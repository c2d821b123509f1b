// SPDX-License-Identifier: Apache-2.0

//! Deliberate board corruptions for checking that the verifier notices.

use crate::model::{BehaviorTag, Colors, GameState, PermanentId};

/// Removes Steely Resolve, exposing Alice's infrastructure to Cleansing Beam.
pub fn remove_steely_resolve(state: &mut GameState) -> bool {
    let ids: Vec<PermanentId> = state
        .battlefield
        .values()
        .filter(|p| matches!(p.behaviors.first(), Some(BehaviorTag::SteelyResolve(_))))
        .map(|p| p.id)
        .collect();
    for id in &ids {
        state.battlefield.remove(id);
    }
    !ids.is_empty()
}

/// Swaps green and white on the first side-of-head tape token.
pub fn flip_side_token_color(state: &mut GameState) -> Option<PermanentId> {
    let ctx = state.stat_context();
    let id = state
        .live_creatures()
        .filter(|p| p.is_tape_token() && ctx.stats(p) != (2, 2))
        .find(|p| p.colors == Colors::GREEN || p.colors == Colors::WHITE)
        .map(|p| p.id)?;
    let p = state.get_mut(id).expect("found above");
    p.colors = if p.colors == Colors::GREEN {
        Colors::WHITE
    } else {
        Colors::GREEN
    };
    Some(id)
}
