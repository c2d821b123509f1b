// SPDX-License-Identifier: Apache-2.0

use super::{has, Engine, EngineError, StepReport};
use crate::model::{
    AttachTarget, BehaviorTag, Card, Event, Outcome, Phase, Player, TraceEvent, TriggerKind,
};

impl Engine {
    /// Plays one full turn for the active player and passes the turn.
    /// Combat is never legal (both players have Blazing Archon) and the main
    /// phase offers no actions, so neither is simulated.
    pub fn advance_turn(&mut self) -> Result<Vec<TraceEvent>, EngineError> {
        if self.state.outcome != Outcome::Ongoing {
            return Err(EngineError::GameOver);
        }
        let player = self.state.active_player;
        self.state.turn_number += 1;
        self.state.phase = Phase::Untap;
        self.emit(Event::TurnStart { player });

        self.phasing_toggle(player);
        self.untap_step(player);

        self.state.phase = Phase::Upkeep;
        let evocations: Vec<_> = self
            .state
            .live()
            .filter(|p| has(p, BehaviorTag::WildEvocation))
            .cloned()
            .collect();
        for source in &evocations {
            self.queue_trigger(source, TriggerKind::WildEvocation { player });
        }
        self.stack_and_resolve()?;

        if self.state.outcome == Outcome::Ongoing {
            self.state.phase = Phase::Draw;
            self.draw_step(player);
            self.stack_and_resolve()?;
        }
        if self.state.outcome == Outcome::Ongoing {
            self.state.phase = Phase::Main;
            self.stack_and_resolve()?;
            self.state.phase = Phase::End;
            self.stack_and_resolve()?;
            self.state.phase = Phase::Cleanup;
            self.cleanup_step();
            self.stack_and_resolve()?;
            self.state.active_player = player.opponent();
            self.state.phase = Phase::Untap;
        }
        Ok(self.take_events())
    }

    /// Flips every phasing permanent `player` controls. Auras attached to
    /// them phase along with their host.
    pub fn phasing_toggle(&mut self, player: Player) {
        let mut phased_in = 0;
        let mut phased_out = 0;
        let toggled: Vec<_> = self
            .state
            .battlefield
            .values_mut()
            .filter(|p| p.has_phasing && p.controller == player)
            .map(|p| {
                p.phased_out = !p.phased_out;
                if p.phased_out {
                    phased_out += 1;
                } else {
                    phased_in += 1;
                }
                (p.id, p.phased_out)
            })
            .collect();
        if toggled.is_empty() {
            return;
        }
        for (host, out) in toggled {
            for aura in self.state.attachments(host) {
                if let Some(a) = self.state.get_mut(aura) {
                    a.phased_out = out;
                }
            }
        }
        self.emit(Event::PhaseToggle {
            player,
            phased_in,
            phased_out,
        });
    }

    fn untap_step(&mut self, player: Player) {
        let candidates: Vec<_> = self
            .state
            .live()
            .filter(|p| p.controller == player && p.tapped && !self.state.untap_locked(p))
            .map(|p| p.id)
            .collect();
        let orbs: Vec<_> = self
            .state
            .live()
            .filter(|p| has(p, BehaviorTag::MesmericOrb))
            .cloned()
            .collect();
        for id in candidates {
            let p = self.state.get_mut(id).expect("just listed");
            p.tapped = false;
            let (name, controller) = (p.name, p.controller);
            self.emit(Event::Untap {
                permanent: id,
                name,
                controller,
            });
            for orb in &orbs {
                self.queue_trigger(
                    orb,
                    TriggerKind::MesmericMill {
                        player: controller,
                        untapped: id,
                    },
                );
            }
        }
    }

    fn draw_step(&mut self, player: Player) {
        if self
            .state
            .controls_live(player, |b| *b == BehaviorTag::Recycle)
        {
            self.emit(Event::DrawSkipped { player });
            return;
        }
        let zone = self.state.player_mut(player);
        match zone.library.pop_front() {
            Some(card) => {
                zone.hand.push(card);
                self.emit(Event::Draw { player, card });
            }
            None => self.emit(Event::Warning {
                message: format!("{player} draws from an empty library"),
            }),
        }
    }

    fn cleanup_step(&mut self) {
        let effects_expired = self.state.until_eot_effects.len();
        self.state.until_eot_effects.clear();
        for p in self.state.battlefield.values_mut() {
            p.marked_damage = 0;
        }
        self.emit(Event::EndOfTurn { effects_expired });
    }

    /// True when Alice is about to start a turn holding only Infest.
    pub fn at_step_boundary(&self) -> bool {
        let s = &self.state;
        s.outcome == Outcome::Ongoing
            && s.active_player == Player::Alice
            && s.stack.is_empty()
            && s.pending_triggers.is_empty()
            && s.player(Player::Alice).hand == [Card::Infest]
    }

    /// Runs turns from one step boundary to the next (or to Alice's win).
    pub fn run_computational_step(&mut self) -> Result<(StepReport, Vec<TraceEvent>), EngineError> {
        if !self.at_step_boundary() {
            return Err(EngineError::NotAtStepBoundary(format!(
                "active={} hand={:?} outcome={:?}",
                self.state.active_player,
                self.state.player(Player::Alice).hand,
                self.state.outcome
            )));
        }
        let before = self.phased_in_program_state();
        let mut events = Vec::new();
        let mut alice_turns = 0;
        let mut halted = false;
        loop {
            events.extend(self.advance_turn()?);
            alice_turns += 1;
            if self.state.outcome == Outcome::AliceWins {
                halted = true;
                break;
            }
            events.extend(self.advance_turn()?);
            if self.at_step_boundary() {
                break;
            }
            if alice_turns >= 4 {
                return Err(EngineError::NoStepBoundary(alice_turns));
            }
        }
        self.steps_run += 1;
        let state_changed = !halted && self.phased_in_program_state() != before;
        let report = StepReport {
            step: self.steps_run,
            alice_turns,
            state_changed,
            halted,
        };
        self.emit(Event::StepBoundary {
            step: report.step,
            alice_turns,
            state_changed,
        });
        events.extend(self.take_events());
        Ok((report, events))
    }

    /// Whether `player` is enchanted by a phased-in Wheel of Sun and Moon.
    pub(crate) fn has_wheel(&self, player: Player) -> bool {
        self.state.live().any(|p| {
            has(p, BehaviorTag::WheelOfSunAndMoon)
                && p.attached_to == Some(AttachTarget::Player(player))
        })
    }
}
