// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::{
    AttachTarget, BehaviorTag, Card, Colors, CreatureType, ModelError, Permanent, PermanentId,
    Phase, Player, TokenSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlayerZone {
    pub player: Player,
    pub hand: Vec<Card>,
    /// Top card first.
    pub library: VecDeque<Card>,
    pub graveyard: Vec<Card>,
}

impl PlayerZone {
    pub fn empty(player: Player) -> Self {
        PlayerZone {
            player,
            hand: Vec::new(),
            library: VecDeque::new(),
            graveyard: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Ongoing,
    AliceWins,
    StepLimit,
}

/// A "get +X/+Y until end of turn" effect. The affected set is locked in
/// when the effect is created.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UntilEotEffect {
    pub source: Card,
    pub power: i32,
    pub toughness: i32,
    pub affected: BTreeSet<PermanentId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TriggerKind {
    /// A Reanimator/Necromancer saw `died` die.
    Reanimate { died: PermanentId, token: TokenSpec },
    /// Illusory Gains saw `target` enter under its controller's opponent.
    AttachIllusoryGains { target: PermanentId },
    /// Mesmeric Orb saw `untapped` untap; `player` mills.
    MesmericMill { player: Player, untapped: PermanentId },
    /// Wild Evocation at the beginning of `player`'s upkeep.
    WildEvocation { player: Player },
    SoulSnuffersEtb,
}

impl TriggerKind {
    pub fn label(&self) -> &'static str {
        match self {
            TriggerKind::Reanimate { .. } => "reanimate",
            TriggerKind::AttachIllusoryGains { .. } => "illusory_gains",
            TriggerKind::MesmericMill { .. } => "mesmeric_orb",
            TriggerKind::WildEvocation { .. } => "wild_evocation",
            TriggerKind::SoulSnuffersEtb => "soul_snuffers_etb",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PendingTrigger {
    pub source: PermanentId,
    pub source_name: &'static str,
    pub controller: Player,
    pub source_timestamp: u64,
    /// Order in which the trigger event happened; breaks timestamp ties.
    pub seq: u64,
    pub kind: TriggerKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StackItem {
    Spell {
        card: Card,
        controller: Player,
        target: Option<PermanentId>,
    },
    Ability(PendingTrigger),
}

/// Full game snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub battlefield: BTreeMap<PermanentId, Permanent>,
    pub players: [PlayerZone; 2],
    pub active_player: Player,
    pub turn_number: u32,
    pub phase: Phase,
    /// Triggered but not yet put on the stack.
    pub pending_triggers: Vec<PendingTrigger>,
    /// Bottom first.
    pub stack: Vec<StackItem>,
    pub until_eot_effects: Vec<UntilEotEffect>,
    pub outcome: Outcome,
    pub(crate) next_id: u32,
    pub(crate) next_timestamp: u64,
    pub(crate) next_seq: u64,
}

impl Default for GameState {
    fn default() -> Self {
        GameState::new()
    }
}

impl GameState {
    pub fn new() -> Self {
        GameState {
            battlefield: BTreeMap::new(),
            players: [PlayerZone::empty(Player::Alice), PlayerZone::empty(Player::Bob)],
            active_player: Player::Alice,
            turn_number: 0,
            phase: Phase::Untap,
            pending_triggers: Vec::new(),
            stack: Vec::new(),
            until_eot_effects: Vec::new(),
            outcome: Outcome::Ongoing,
            next_id: 1,
            next_timestamp: 1,
            next_seq: 1,
        }
    }

    /// Puts a permanent onto the battlefield with a fresh id and timestamp.
    pub fn add_permanent(&mut self, mut p: Permanent) -> PermanentId {
        let id = PermanentId(self.next_id);
        self.next_id += 1;
        p.id = id;
        p.timestamp = self.next_timestamp;
        self.next_timestamp += 1;
        self.battlefield.insert(id, p);
        id
    }

    pub(crate) fn take_seq(&mut self) -> u64 {
        let s = self.next_seq;
        self.next_seq += 1;
        s
    }

    pub fn get(&self, id: PermanentId) -> Option<&Permanent> {
        self.battlefield.get(&id)
    }

    pub fn get_mut(&mut self, id: PermanentId) -> Option<&mut Permanent> {
        self.battlefield.get_mut(&id)
    }

    pub fn player(&self, p: Player) -> &PlayerZone {
        &self.players[p.index()]
    }

    pub fn player_mut(&mut self, p: Player) -> &mut PlayerZone {
        &mut self.players[p.index()]
    }

    /// Phased-in permanents, in id order.
    pub fn live(&self) -> impl Iterator<Item = &Permanent> {
        self.battlefield.values().filter(|p| !p.phased_out)
    }

    pub fn live_creatures(&self) -> impl Iterator<Item = &Permanent> {
        self.live().filter(|p| p.is_creature())
    }

    /// Any phased-in permanent carrying a matching behaviour.
    pub fn any_live(&self, pred: impl Fn(&BehaviorTag) -> bool) -> bool {
        self.live().any(|p| p.behaviors.iter().any(&pred))
    }

    pub fn controls_live(&self, player: Player, pred: impl Fn(&BehaviorTag) -> bool) -> bool {
        self.live()
            .any(|p| p.controller == player && p.behaviors.iter().any(&pred))
    }

    /// Ids of permanents attached to `id`.
    pub fn attachments(&self, id: PermanentId) -> Vec<PermanentId> {
        self.battlefield
            .values()
            .filter(|p| p.attached_to == Some(AttachTarget::Permanent(id)))
            .map(|p| p.id)
            .collect()
    }

    pub fn stat_context(&self) -> StatContext<'_> {
        StatContext::new(self)
    }

    /// Base + counters + anthems + until-end-of-turn deltas.
    pub fn effective_stats(&self, id: PermanentId) -> Result<(i32, i32), ModelError> {
        let p = self.get(id).ok_or(ModelError::NotOnBattlefield(id))?;
        if p.phased_out {
            return Err(ModelError::PhasedOut(id));
        }
        Ok(self.stat_context().stats(p))
    }

    /// Permanents `caster` could target with `spell`.
    pub fn legal_targets(&self, spell: Card, caster: Player) -> Result<Vec<PermanentId>, ModelError> {
        if !spell.is_targeted() {
            return Err(ModelError::Untargeted(spell));
        }
        let hexproof_owners: Vec<Player> = [Player::Alice, Player::Bob]
            .into_iter()
            .filter(|&pl| pl != caster && self.controls_live(pl, |b| *b == BehaviorTag::PrivilegedPosition))
            .collect();
        let shrouded: Vec<CreatureType> = self
            .live()
            .flat_map(|p| p.behaviors.iter())
            .filter_map(|b| match b {
                BehaviorTag::SteelyResolve(t) => Some(*t),
                _ => None,
            })
            .collect();
        Ok(self
            .live_creatures()
            .filter(|p| !hexproof_owners.contains(&p.controller))
            .filter(|p| !shrouded.iter().any(|t| p.has_type(*t)))
            .map(|p| p.id)
            .collect())
    }

    /// Union of the colours of a player's phased-in creatures.
    pub fn colors_controlled(&self, player: Player) -> Colors {
        self.live_creatures()
            .filter(|p| p.controller == player)
            .fold(Colors::empty(), |acc, p| acc | p.colors)
    }

    /// A land has every basic land type when its controller has Prismatic Omen.
    pub fn land_has_all_basic_types(&self, land: &Permanent) -> bool {
        land.is_land() && self.controls_live(land.controller, |b| *b == BehaviorTag::PrismaticOmen)
    }

    /// Choke: Islands don't untap during their controllers' untap steps.
    pub fn untap_locked(&self, p: &Permanent) -> bool {
        self.land_has_all_basic_types(p) && self.any_live(|b| *b == BehaviorTag::Choke)
    }
}

/// Static modifiers gathered once so that many stat queries stay linear.
pub struct StatContext<'a> {
    anthems: Vec<CreatureType>,
    dreads: Vec<Colors>,
    eot: &'a [UntilEotEffect],
}

impl<'a> StatContext<'a> {
    pub fn new(state: &'a GameState) -> Self {
        let mut anthems = Vec::new();
        let mut dreads = Vec::new();
        for b in state.live().flat_map(|p| p.behaviors.iter()) {
            match b {
                BehaviorTag::SharedTriumph(t) => anthems.push(*t),
                BehaviorTag::DreadOfNight(c) => dreads.push(*c),
                _ => {}
            }
        }
        StatContext {
            anthems,
            dreads,
            eot: &state.until_eot_effects,
        }
    }

    pub fn stats(&self, p: &Permanent) -> (i32, i32) {
        let mut delta = p.counter_delta();
        delta += self.anthems.iter().filter(|t| p.has_type(**t)).count() as i32;
        delta -= self.dreads.iter().filter(|c| p.colors.intersects(**c)).count() as i32;
        let (mut power, mut toughness) = (p.base_power + delta, p.base_toughness + delta);
        for e in self.eot.iter().filter(|e| e.affected.contains(&p.id)) {
            power += e.power;
            toughness += e.toughness;
        }
        (power, toughness)
    }
}
