// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use super::{Card, Colors, PermanentId, Phase, Player};

/// One engine event. Serialized as `{"turn":..,"phase":..,"kind":..,"payload":{..}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub turn: u32,
    pub phase: Phase,
    #[serde(flatten)]
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "payload")]
pub enum Event {
    TurnStart {
        player: Player,
    },
    PhaseToggle {
        player: Player,
        phased_in: u32,
        phased_out: u32,
    },
    Untap {
        permanent: PermanentId,
        name: &'static str,
        controller: Player,
    },
    /// Wild Evocation made `player` reveal and cast their only card.
    ForcedCast {
        player: Player,
        card: Card,
        hand_size: usize,
        /// Legal target count for targeted spells.
        legal_targets: Option<usize>,
        target: Option<PermanentId>,
        cast: bool,
    },
    Draw {
        player: Player,
        card: Card,
    },
    DrawSkipped {
        player: Player,
    },
    TriggerFired {
        source: PermanentId,
        source_name: &'static str,
        controller: Player,
        ability: &'static str,
    },
    SpellResolved {
        card: Card,
        controller: Player,
    },
    Entered {
        permanent: PermanentId,
        name: &'static str,
        controller: Player,
    },
    TokenCreated {
        permanent: PermanentId,
        controller: Player,
        creature_type: &'static str,
        colors: Colors,
        power: i32,
        toughness: i32,
        tapped: bool,
    },
    ControlChanged {
        permanent: PermanentId,
        from: Player,
        to: Player,
    },
    Death {
        permanent: PermanentId,
        name: &'static str,
        controller: Player,
        token: bool,
    },
    DamageDealt {
        permanent: PermanentId,
        amount: u32,
    },
    DamagePrevented {
        permanent: PermanentId,
        amount: u32,
        by: PermanentId,
    },
    CounterAdded {
        permanent: PermanentId,
        counter: &'static str,
        amount: u32,
    },
    /// A mass -1/-1 counter placement, summarised.
    CountersOnEachCreature {
        counter: &'static str,
        creatures: usize,
    },
    MilledToBottom {
        player: Player,
        card: Card,
    },
    /// Wheel of Sun and Moon put a card that would hit the graveyard on the bottom.
    CardToLibraryBottom {
        player: Player,
        card: Card,
    },
    CardToGraveyard {
        player: Player,
        card: Card,
    },
    TargetLost {
        card: Card,
        target: PermanentId,
    },
    Win {
        player: Player,
    },
    EndOfTurn {
        effects_expired: usize,
    },
    StepBoundary {
        step: u64,
        alice_turns: u32,
        state_changed: bool,
    },
    Warning {
        message: String,
    },
}

impl Event {
    pub fn kind(&self) -> &'static str {
        match self {
            Event::TurnStart { .. } => "TurnStart",
            Event::PhaseToggle { .. } => "PhaseToggle",
            Event::Untap { .. } => "Untap",
            Event::ForcedCast { .. } => "ForcedCast",
            Event::Draw { .. } => "Draw",
            Event::DrawSkipped { .. } => "DrawSkipped",
            Event::TriggerFired { .. } => "TriggerFired",
            Event::SpellResolved { .. } => "SpellResolved",
            Event::Entered { .. } => "Entered",
            Event::TokenCreated { .. } => "TokenCreated",
            Event::ControlChanged { .. } => "ControlChanged",
            Event::Death { .. } => "Death",
            Event::DamageDealt { .. } => "DamageDealt",
            Event::DamagePrevented { .. } => "DamagePrevented",
            Event::CounterAdded { .. } => "CounterAdded",
            Event::CountersOnEachCreature { .. } => "CountersOnEachCreature",
            Event::MilledToBottom { .. } => "MilledToBottom",
            Event::CardToLibraryBottom { .. } => "CardToLibraryBottom",
            Event::CardToGraveyard { .. } => "CardToGraveyard",
            Event::TargetLost { .. } => "TargetLost",
            Event::Win { .. } => "Win",
            Event::EndOfTurn { .. } => "EndOfTurn",
            Event::StepBoundary { .. } => "StepBoundary",
            Event::Warning { .. } => "Warning",
        }
    }
}

impl TraceEvent {
    /// One newline-free JSON record.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trace events always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_has_stable_key_order() {
        let ev = TraceEvent {
            turn: 3,
            phase: Phase::Upkeep,
            event: Event::ForcedCast {
                player: Player::Alice,
                card: Card::CleansingBeam,
                hand_size: 1,
                legal_targets: Some(1),
                target: Some(PermanentId(7)),
                cast: true,
            },
        };
        assert_eq!(
            ev.to_json_line(),
            r#"{"turn":3,"phase":"upkeep","kind":"ForcedCast","payload":{"player":"alice","card":"Cleansing Beam","hand_size":1,"legal_targets":1,"target":7,"cast":true}}"#
        );
        assert_eq!(ev.event.kind(), "ForcedCast");
    }

    #[test]
    fn colours_serialize_as_names() {
        let ev = TraceEvent {
            turn: 1,
            phase: Phase::Upkeep,
            event: Event::TokenCreated {
                permanent: PermanentId(100),
                controller: Player::Bob,
                creature_type: "Sliver",
                colors: Colors::WHITE,
                power: 2,
                toughness: 2,
                tapped: false,
            },
        };
        assert!(ev.to_json_line().contains(r#""colors":["white"]"#));
    }
}
