// SPDX-License-Identifier: Apache-2.0

use rand::seq::SliceRandom;

use super::{is_program_card, Engine, EngineError};
use crate::model::{
    AttachTarget, BehaviorTag, Card, Event, Outcome, PendingTrigger, Permanent, PermanentId,
    Player, StackItem, TriggerKind,
};

impl Engine {
    /// Runs state-based actions, stacks pending triggers in APNAP order and
    /// resolves the stack top-down until everything is settled.
    pub fn stack_and_resolve(&mut self) -> Result<(), EngineError> {
        loop {
            if self.state.outcome != Outcome::Ongoing {
                self.state.pending_triggers.clear();
                self.state.stack.clear();
                return Ok(());
            }
            self.state_based_actions()?;
            if !self.state.pending_triggers.is_empty() {
                self.stack_pending();
                continue;
            }
            match self.state.stack.pop() {
                Some(item) => self.resolve_item(item)?,
                None => return Ok(()),
            }
        }
    }

    /// Active player's triggers go on the stack first, so they resolve last.
    /// Within one controller, ascending source timestamp.
    fn stack_pending(&mut self) {
        let mut pending = std::mem::take(&mut self.state.pending_triggers);
        pending.sort_by_key(|t| (t.source_timestamp, t.seq));
        let active = self.state.active_player;
        for controller in [active, active.opponent()] {
            let mut group: Vec<PendingTrigger> = pending
                .iter()
                .filter(|t| t.controller == controller)
                .cloned()
                .collect();
            if let Some(rng) = self.rng.as_mut() {
                group.shuffle(rng);
            }
            for t in group {
                self.emit(Event::TriggerFired {
                    source: t.source,
                    source_name: t.source_name,
                    controller: t.controller,
                    ability: t.kind.label(),
                });
                self.state.stack.push(StackItem::Ability(t));
            }
        }
        pending.clear();
    }

    fn resolve_item(&mut self, item: StackItem) -> Result<(), EngineError> {
        match item {
            StackItem::Spell {
                card,
                controller,
                target,
            } => self.resolve_spell(card, controller, target),
            StackItem::Ability(t) => self.resolve_trigger(t),
        }
    }

    fn resolve_trigger(&mut self, t: PendingTrigger) -> Result<(), EngineError> {
        match t.kind {
            TriggerKind::Reanimate { token, .. } => {
                self.create_token(token, t.controller);
                Ok(())
            }
            TriggerKind::AttachIllusoryGains { target } => {
                self.attach_illusory_gains(t.source, target);
                Ok(())
            }
            TriggerKind::MesmericMill { player, .. } => {
                self.mill_to_bottom(player);
                Ok(())
            }
            TriggerKind::WildEvocation { player } => self.forced_cast(player),
            TriggerKind::SoulSnuffersEtb => {
                let ids: Vec<_> = self.state.live_creatures().map(|p| p.id).collect();
                for id in &ids {
                    self.state.get_mut(*id).expect("live").minus_counters += 1;
                }
                self.emit(Event::CountersOnEachCreature {
                    counter: "-1/-1",
                    creatures: ids.len(),
                });
                Ok(())
            }
        }
    }

    /// Destroys creatures with lethal toughness or damage and annihilates
    /// counters, repeating until nothing changes. Returns the dead.
    pub fn state_based_actions(&mut self) -> Result<Vec<PermanentId>, EngineError> {
        let mut all_dead = Vec::new();
        loop {
            let ctx = self.state.stat_context();
            let dead: Vec<PermanentId> = self
                .state
                .live_creatures()
                .filter(|p| {
                    let (_, toughness) = ctx.stats(p);
                    toughness <= 0 || (p.marked_damage > 0 && p.marked_damage as i32 >= toughness)
                })
                .map(|p| p.id)
                .collect();
            let orphans: Vec<PermanentId> = self
                .state
                .battlefield
                .values()
                .filter(|p| {
                    matches!(p.attached_to, Some(AttachTarget::Permanent(host)) if self.state.get(host).is_none())
                })
                .map(|p| p.id)
                .collect();
            let mut annihilated = false;
            for p in self.state.battlefield.values_mut() {
                if p.plus_counters > 0 && p.minus_counters > 0 {
                    p.annihilate_counters();
                    annihilated = true;
                }
            }
            if dead.is_empty() && orphans.is_empty() && !annihilated {
                return Ok(all_dead);
            }
            // Leaves-the-battlefield triggers look back: fire them all while
            // every simultaneously dying creature is still present.
            let dying: Vec<Permanent> = dead
                .iter()
                .map(|id| self.state.get(*id).expect("live").clone())
                .collect();
            for p in &dying {
                self.emit(Event::Death {
                    permanent: p.id,
                    name: p.name,
                    controller: p.controller,
                    token: p.is_token,
                });
                self.fire_death_triggers(p)?;
            }
            for p in dying {
                self.state.battlefield.remove(&p.id);
                self.leave_battlefield(&p)?;
                all_dead.push(p.id);
            }
            for id in orphans {
                let aura = self.state.battlefield.remove(&id).expect("listed");
                self.emit(Event::Warning {
                    message: format!("{} {} fell off its host", aura.name, aura.id),
                });
                self.leave_battlefield(&aura)?;
            }
        }
    }

    /// Tokens cease to exist; Soul Snuffers goes back to its owner's
    /// graveyard (and so to the library under Wheel of Sun and Moon). Any
    /// other nontoken permanent leaving is a broken construction.
    fn leave_battlefield(&mut self, p: &Permanent) -> Result<(), EngineError> {
        if p.is_token {
            return Ok(());
        }
        if p.behaviors.contains(&BehaviorTag::SoulSnuffersEtb) {
            self.put_in_graveyard(p.owner, Card::SoulSnuffers);
            return Ok(());
        }
        if self.options.strict {
            return Err(EngineError::InfrastructureDied {
                id: p.id,
                name: p.name,
            });
        }
        self.emit(Event::Warning {
            message: format!("nontoken {} {} left the battlefield", p.name, p.id),
        });
        Ok(())
    }

    /// Queues every Reanimator/Necromancer trigger that notices `dead` dying.
    /// Rotlung sees any controller's creature; Xathrid only its own.
    pub fn fire_death_triggers(&mut self, dead: &Permanent) -> Result<(), EngineError> {
        let mut hits: Vec<(Permanent, TriggerKind)> = Vec::new();
        for src in self.state.live() {
            for tag in &src.behaviors {
                let Some((rule, yours_only)) = tag.reanimate_rule() else {
                    continue;
                };
                if !(dead.has_type(rule.watches) || src.id == dead.id) {
                    continue;
                }
                if yours_only && dead.controller != src.controller {
                    continue;
                }
                hits.push((
                    src.clone(),
                    TriggerKind::Reanimate {
                        died: dead.id,
                        token: rule.token,
                    },
                ));
            }
        }
        let program_hits = hits
            .iter()
            .filter(|(src, _)| src.controller == Player::Bob && is_program_card(src))
            .count();
        if program_hits > 1 {
            let msg = format!(
                "{} phased-in program cards of Bob's match the death of {} {}",
                program_hits, dead.name, dead.id
            );
            if self.options.strict {
                return Err(EngineError::BoardCorruption(msg));
            }
            self.emit(Event::Warning { message: msg });
        }
        for (src, kind) in hits {
            self.queue_trigger(&src, kind);
        }
        Ok(())
    }
}
