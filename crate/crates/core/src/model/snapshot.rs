// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use super::{
    AttachTarget, BehaviorTag, Card, Colors, GameState, Outcome, Phase, Player, ReanimateRule,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlayerView {
    pub player: Player,
    pub hand: Vec<Card>,
    pub library: Vec<Card>,
    pub graveyard: Vec<Card>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermanentView {
    pub id: u32,
    pub name: &'static str,
    pub controller: Player,
    pub owner: Player,
    pub card_types: String,
    pub colors: Colors,
    pub creature_types: Vec<&'static str>,
    pub base: (i32, i32),
    /// `None` while phased out.
    pub effective: Option<(i32, i32)>,
    pub plus_counters: u32,
    pub minus_counters: u32,
    pub marked_damage: u32,
    pub tapped: bool,
    pub phased_out: bool,
    pub has_phasing: bool,
    pub token: bool,
    pub attached_to: Option<String>,
    pub behaviors: Vec<String>,
}

/// Stable, fully ordered view of a [`GameState`] for dumps and golden tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoardSnapshot {
    pub turn: u32,
    pub active_player: Player,
    pub phase: Phase,
    pub outcome: Outcome,
    pub players: Vec<PlayerView>,
    pub permanents: Vec<PermanentView>,
}

fn describe_rule(kind: &str, r: &ReanimateRule) -> String {
    let mut s = format!(
        "{kind}({} -> {}{}/{} {} {}",
        r.watches,
        if r.token.tapped { "tapped " } else { "" },
        r.token.power,
        r.token.toughness,
        r.token.colors,
        r.token.creature_type,
    );
    if let Some(state) = r.program_state {
        let _ = write!(s, "; {state}");
    }
    s.push(')');
    s
}

pub(crate) fn describe_behavior(tag: &BehaviorTag) -> String {
    match tag {
        BehaviorTag::RotlungTrigger(r) => describe_rule("rotlung", r),
        BehaviorTag::XathridTrigger(r) => describe_rule("xathrid", r),
        BehaviorTag::SteelyResolve(t) => format!("steely_resolve({t})"),
        BehaviorTag::DreadOfNight(c) => format!("dread_of_night({c})"),
        BehaviorTag::FungusSliverGrant(t) => format!("fungus_sliver_grant({t})"),
        BehaviorTag::SharedTriumph(t) => format!("shared_triumph({t})"),
        BehaviorTag::EndMarker(side) => format!("end_marker({side:?})").to_lowercase(),
        other => {
            // Unit variants: snake_case of the variant name.
            let name = format!("{other:?}");
            let mut out = String::new();
            for (i, ch) in name.chars().enumerate() {
                if ch.is_ascii_uppercase() && i > 0 {
                    out.push('_');
                }
                out.push(ch.to_ascii_lowercase());
            }
            out
        }
    }
}

impl BoardSnapshot {
    pub fn capture(state: &GameState) -> Self {
        let ctx = state.stat_context();
        let permanents = state
            .battlefield
            .values()
            .map(|p| PermanentView {
                id: p.id.0,
                name: p.name,
                controller: p.controller,
                owner: p.owner,
                card_types: p.card_types.to_string(),
                colors: p.colors,
                creature_types: p.creature_types.iter().map(|t| t.name()).collect(),
                base: (p.base_power, p.base_toughness),
                effective: (!p.phased_out && p.is_creature()).then(|| ctx.stats(p)),
                plus_counters: p.plus_counters,
                minus_counters: p.minus_counters,
                marked_damage: p.marked_damage,
                tapped: p.tapped,
                phased_out: p.phased_out,
                has_phasing: p.has_phasing,
                token: p.is_token,
                attached_to: p.attached_to.map(|a| match a {
                    AttachTarget::Permanent(id) => id.to_string(),
                    AttachTarget::Player(pl) => pl.to_string(),
                }),
                behaviors: p.behaviors.iter().map(describe_behavior).collect(),
            })
            .collect();
        let players = state
            .players
            .iter()
            .map(|z| PlayerView {
                player: z.player,
                hand: z.hand.clone(),
                library: z.library.iter().copied().collect(),
                graveyard: z.graveyard.clone(),
            })
            .collect();
        BoardSnapshot {
            turn: state.turn_number,
            active_player: state.active_player,
            phase: state.phase,
            outcome: state.outcome,
            players,
            permanents,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshots always serialize")
    }
}

fn card_list(cards: &[Card]) -> String {
    cards.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for BoardSnapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let outcome = match self.outcome {
            Outcome::Ongoing => "ongoing",
            Outcome::AliceWins => "alice_wins",
            Outcome::StepLimit => "step_limit",
        };
        writeln!(
            f,
            "game turn={} active={} phase={} outcome={}",
            self.turn, self.active_player, self.phase, outcome
        )?;
        for p in &self.players {
            writeln!(
                f,
                "player {} hand=[{}] library=[{}] graveyard=[{}]",
                p.player,
                card_list(&p.hand),
                card_list(&p.library),
                card_list(&p.graveyard)
            )?;
        }
        for p in &self.permanents {
            write!(
                f,
                "permanent id={} name=\"{}\" controller={} owner={} types={} colors={}",
                p.id, p.name, p.controller, p.owner, p.card_types, p.colors
            )?;
            if !p.creature_types.is_empty() {
                write!(f, " subtypes={}", p.creature_types.join("/"))?;
            }
            if let Some((pw, t)) = p.effective {
                write!(
                    f,
                    " base={}/{} pt={pw}/{t} counters=+{}/-{} damage={}",
                    p.base.0, p.base.1, p.plus_counters, p.minus_counters, p.marked_damage
                )?;
            }
            write!(
                f,
                " tapped={} phased_out={} phasing={} token={}",
                p.tapped, p.phased_out, p.has_phasing, p.token
            )?;
            if let Some(a) = &p.attached_to {
                write!(f, " attached_to={a}")?;
            }
            if !p.behaviors.is_empty() {
                write!(f, " behaviors=[{}]", p.behaviors.join(", "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// One row of the nontoken permanent census.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CensusRow {
    pub name: &'static str,
    pub controller: Player,
    pub detail: String,
    pub count: usize,
}

impl fmt::Display for CensusRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let controller = match self.controller {
            Player::Alice => "Alice",
            Player::Bob => "Bob",
        };
        write!(f, "{} {} | {}", self.count, self.name, controller)?;
        if !self.detail.is_empty() {
            write!(f, " | {}", self.detail)?;
        }
        Ok(())
    }
}

fn capitalized_color(c: Colors) -> String {
    let s = c.to_string();
    let mut chars = s.chars();
    chars
        .next()
        .map(|h| h.to_ascii_uppercase().to_string() + chars.as_str())
        .unwrap_or_default()
}

/// Nontoken permanents grouped by (name, controller, changed text or attachment).
pub fn census(state: &GameState) -> Vec<CensusRow> {
    let mut rows: BTreeMap<(&'static str, Player, String), usize> = BTreeMap::new();
    for p in state.battlefield.values().filter(|p| !p.is_token) {
        let detail = p
            .behaviors
            .iter()
            .find_map(|b| match b {
                BehaviorTag::RotlungTrigger(r) | BehaviorTag::XathridTrigger(r) => Some(
                    if r.program_state.is_some() {
                        "program".to_string()
                    } else {
                        format!("{}, {}, {}", r.watches, r.token.colors, r.token.creature_type)
                    },
                ),
                BehaviorTag::SteelyResolve(t) | BehaviorTag::FungusSliverGrant(t) | BehaviorTag::SharedTriumph(t) => {
                    Some(t.to_string())
                }
                BehaviorTag::DreadOfNight(c) => Some(capitalized_color(*c)),
                _ => None,
            })
            .or_else(|| {
                p.attached_to.map(|a| match a {
                    AttachTarget::Player(Player::Alice) => "attached to Alice".to_string(),
                    AttachTarget::Player(Player::Bob) => "attached to Bob".to_string(),
                    AttachTarget::Permanent(id) => match state.get(id) {
                        Some(host) if host.is_tape_token() || host.marker_side().is_some() => {
                            "attached to latest tape token".to_string()
                        }
                        Some(host) => format!("attached to {}", host.name),
                        None => "attached to nothing".to_string(),
                    },
                })
            })
            .unwrap_or_default();
        *rows.entry((p.name, p.controller, detail)).or_default() += 1;
    }
    rows.into_iter()
        .map(|((name, controller, detail), count)| CensusRow {
            name,
            controller,
            detail,
            count,
        })
        .collect()
}
