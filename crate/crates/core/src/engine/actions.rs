// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use super::{has, Engine, EngineError};
use crate::model::{
    AttachTarget, BehaviorTag, Card, CardTypes, Colors, CreatureType, Event, MarkerSide, Outcome,
    Permanent, PermanentId, Player, StackItem, TokenSpec, TriggerKind, UntilEotEffect,
};

impl Engine {
    /// Wild Evocation: `player` reveals their hand and casts the card.
    /// Exactly one card is expected; more is ambiguous, none is a no-op.
    pub fn forced_cast(&mut self, player: Player) -> Result<(), EngineError> {
        let hand = self.state.player(player).hand.clone();
        let Some(&card) = hand.first() else {
            return Ok(());
        };
        if hand.len() > 1 {
            self.forced_move_violation(
                format!("{player} reveals at random from {} cards", hand.len()),
                Event::ForcedCast {
                    player,
                    card,
                    hand_size: hand.len(),
                    legal_targets: None,
                    target: None,
                    cast: false,
                },
            )?;
        }
        let (legal_targets, target) = if card.is_targeted() {
            let targets = self.state.legal_targets(card, player)?;
            match targets.len() {
                0 => {
                    self.forced_move_violation(
                        format!("{} has no legal target", card.name()),
                        Event::ForcedCast {
                            player,
                            card,
                            hand_size: hand.len(),
                            legal_targets: Some(0),
                            target: None,
                            cast: false,
                        },
                    )?;
                    return Ok(());
                }
                1 => (Some(1), Some(targets[0])),
                n => {
                    self.forced_move_violation(
                        format!("{} has {n} legal targets", card.name()),
                        Event::ForcedCast {
                            player,
                            card,
                            hand_size: hand.len(),
                            legal_targets: Some(n),
                            target: Some(targets[0]),
                            cast: true,
                        },
                    )?;
                    (Some(n), Some(targets[0]))
                }
            }
        } else {
            (None, None)
        };
        self.state.player_mut(player).hand.remove(0);
        self.state.stack.push(StackItem::Spell {
            card,
            controller: player,
            target,
        });
        self.emit(Event::ForcedCast {
            player,
            card,
            hand_size: hand.len(),
            legal_targets,
            target,
            cast: true,
        });
        Ok(())
    }

    pub(crate) fn resolve_spell(
        &mut self,
        card: Card,
        controller: Player,
        target: Option<PermanentId>,
    ) -> Result<(), EngineError> {
        match card {
            Card::Infest => {
                let affected: BTreeSet<_> = self.state.live_creatures().map(|p| p.id).collect();
                self.state.until_eot_effects.push(UntilEotEffect {
                    source: card,
                    power: -2,
                    toughness: -2,
                    affected,
                });
            }
            Card::CleansingBeam => {
                let legal = self.state.legal_targets(card, controller)?;
                match target.filter(|t| legal.contains(t)) {
                    None => {
                        if let Some(t) = target {
                            self.emit(Event::TargetLost { card, target: t });
                        }
                    }
                    Some(t) => {
                        let colors = self.state.get(t).expect("legal target").colors;
                        let mut hit = vec![t];
                        hit.extend(
                            self.state
                                .live_creatures()
                                .filter(|p| p.id != t && p.colors.shares_with(colors))
                                .map(|p| p.id),
                        );
                        self.deal_damage(&hit, 2);
                    }
                }
            }
            Card::CoalitionVictory => {
                for player in [controller, controller.opponent()] {
                    if self.meets_coalition(player) {
                        self.emit(Event::SpellResolved { card, controller });
                        self.emit(Event::Win { player });
                        if player == Player::Alice {
                            self.state.outcome = Outcome::AliceWins;
                        } else {
                            return Err(EngineError::BoardCorruption(
                                "Bob meets Coalition Victory".into(),
                            ));
                        }
                        self.put_in_graveyard(controller, card);
                        return Ok(());
                    }
                }
            }
            Card::SoulSnuffers => {
                let mut p = Permanent::new("Soul Snuffers", controller, CardTypes::CREATURE);
                p.base_power = 3;
                p.base_toughness = 3;
                p.colors = Colors::BLACK;
                p.creature_types = vec![CreatureType::Elemental, CreatureType::Shade];
                p.behaviors = vec![BehaviorTag::SoulSnuffersEtb];
                let id = self.enter_battlefield(p);
                self.emit(Event::SpellResolved { card, controller });
                let snuffers = self.state.get(id).expect("just entered").clone();
                self.queue_trigger(&snuffers, TriggerKind::SoulSnuffersEtb);
                return Ok(());
            }
        }
        self.emit(Event::SpellResolved { card, controller });
        self.put_in_graveyard(controller, card);
        Ok(())
    }

    /// Lands of every basic type plus creatures of all five colours.
    fn meets_coalition(&self, player: Player) -> bool {
        let has_land = self
            .state
            .live()
            .any(|p| p.controller == player && self.state.land_has_all_basic_types(p));
        has_land && self.state.colors_controlled(player) == Colors::all()
    }

    /// Deals `amount` damage to each creature in `ids` at once.
    pub fn deal_damage(&mut self, ids: &[PermanentId], amount: u32) {
        if amount == 0 {
            return;
        }
        let vigors: Vec<(PermanentId, Player)> = self
            .state
            .live()
            .filter(|p| has(p, BehaviorTag::Vigor))
            .map(|p| (p.id, p.controller))
            .collect();
        let grants: Vec<CreatureType> = self
            .state
            .live()
            .flat_map(|p| p.behaviors.iter())
            .filter_map(|b| match b {
                BehaviorTag::FungusSliverGrant(t) => Some(*t),
                _ => None,
            })
            .collect();
        for &id in ids {
            let Some(p) = self.state.get(id) else { continue };
            let controller = p.controller;
            let shield = vigors
                .iter()
                .find(|(v, c)| *c == controller && *v != id)
                .map(|(v, _)| *v);
            if let Some(by) = shield {
                self.state.get_mut(id).expect("live").plus_counters += amount;
                self.emit(Event::DamagePrevented {
                    permanent: id,
                    amount,
                    by,
                });
                self.emit(Event::CounterAdded {
                    permanent: id,
                    counter: "+1/+1",
                    amount,
                });
                continue;
            }
            let growth = grants.iter().filter(|t| p.has_type(**t)).count() as u32;
            let p = self.state.get_mut(id).expect("live");
            p.marked_damage += amount;
            p.plus_counters += growth;
            self.emit(Event::DamageDealt {
                permanent: id,
                amount,
            });
            if growth > 0 {
                self.emit(Event::CounterAdded {
                    permanent: id,
                    counter: "+1/+1",
                    amount: growth,
                });
            }
        }
    }

    /// Mesmeric Orb: `player` mills one card; Wheel of Sun and Moon sends it
    /// to the bottom of the library instead of the graveyard.
    pub fn mill_to_bottom(&mut self, player: Player) {
        let wheel = self.has_wheel(player);
        let zone = self.state.player_mut(player);
        let Some(card) = zone.library.pop_front() else {
            self.emit(Event::Warning {
                message: format!("{player} mills from an empty library"),
            });
            return;
        };
        if wheel {
            zone.library.push_back(card);
            self.emit(Event::MilledToBottom { player, card });
        } else {
            zone.graveyard.push(card);
            self.emit(Event::CardToGraveyard { player, card });
        }
    }

    pub(crate) fn put_in_graveyard(&mut self, owner: Player, card: Card) {
        if self.has_wheel(owner) {
            self.state.player_mut(owner).library.push_back(card);
            self.emit(Event::CardToLibraryBottom {
                player: owner,
                card,
            });
        } else {
            self.state.player_mut(owner).graveyard.push(card);
            self.emit(Event::CardToGraveyard {
                player: owner,
                card,
            });
        }
    }

    /// Creates a token for `controller` and returns its id.
    pub fn create_token(&mut self, spec: TokenSpec, controller: Player) -> PermanentId {
        let p = token_permanent(spec, controller);
        let id = self.enter_battlefield(p);
        self.emit(Event::TokenCreated {
            permanent: id,
            controller,
            creature_type: spec.creature_type.name(),
            colors: spec.colors,
            power: spec.power,
            toughness: spec.toughness,
            tapped: spec.tapped,
        });
        id
    }

    /// Puts `p` onto the battlefield and queues Illusory Gains if a creature
    /// entered under the control of an Illusory Gains controller's opponent.
    fn enter_battlefield(&mut self, p: Permanent) -> PermanentId {
        let is_creature = p.is_creature();
        let controller = p.controller;
        let is_token = p.is_token;
        let name = p.name;
        let id = self.state.add_permanent(p);
        if !is_token {
            self.emit(Event::Entered {
                permanent: id,
                name,
                controller,
            });
        }
        if is_creature {
            let gains: Vec<Permanent> = self
                .state
                .live()
                .filter(|g| has(g, BehaviorTag::IllusoryGains) && g.controller != controller)
                .cloned()
                .collect();
            for g in &gains {
                self.queue_trigger(g, TriggerKind::AttachIllusoryGains { target: id });
            }
        }
        id
    }

    /// Moves Illusory Gains onto `target`. The old host returns to its owner
    /// and the new host comes under the Aura's controller.
    pub(crate) fn attach_illusory_gains(&mut self, aura: PermanentId, target: PermanentId) {
        let Some(gains) = self.state.get(aura).cloned() else {
            return;
        };
        if self.state.get(target).is_none_or(|t| t.phased_out) {
            self.emit(Event::Warning {
                message: format!("Illusory Gains target {target} is gone"),
            });
            return;
        }
        if let Some(AttachTarget::Permanent(old)) = gains.attached_to {
            if let Some(host) = self.state.get_mut(old) {
                let from = host.controller;
                host.controller = host.owner;
                let to = host.owner;
                if from != to {
                    self.emit(Event::ControlChanged {
                        permanent: old,
                        from,
                        to,
                    });
                }
            }
        }
        self.state.get_mut(aura).expect("checked").attached_to = Some(AttachTarget::Permanent(target));
        let host = self.state.get_mut(target).expect("checked");
        let from = host.controller;
        host.controller = gains.controller;
        if from != gains.controller {
            self.emit(Event::ControlChanged {
                permanent: target,
                from,
                to: gains.controller,
            });
        }
    }
}

/// The permanent a [`TokenSpec`] describes. Symbol tokens are tape cells,
/// Lhurgoyf and Rat tokens are the end markers.
pub fn token_permanent(spec: TokenSpec, controller: Player) -> Permanent {
    let mut p = Permanent::new(spec.creature_type.name(), controller, CardTypes::CREATURE);
    p.base_power = spec.power;
    p.base_toughness = spec.toughness;
    p.colors = spec.colors;
    p.creature_types = vec![spec.creature_type];
    p.tapped = spec.tapped;
    p.is_token = true;
    match spec.creature_type {
        CreatureType::Symbol(_) => p.behaviors.push(BehaviorTag::TapeToken),
        CreatureType::Lhurgoyf => p.behaviors.push(BehaviorTag::EndMarker(MarkerSide::Left)),
        CreatureType::Rat => p.behaviors.push(BehaviorTag::EndMarker(MarkerSide::Right)),
        _ => {}
    }
    p
}
