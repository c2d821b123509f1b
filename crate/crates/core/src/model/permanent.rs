// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use bitflags::bitflags;
use serde::{Serialize, Serializer};

use super::{Colors, PermanentId, Player};
use crate::utm::{TmState, TmSymbol};

/// Creature types that occur in the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CreatureType {
    /// One of the 18 tape types.
    Symbol(TmSymbol),
    Assassin,
    Lhurgoyf,
    Rat,
    AssemblyWorker,
    Incarnation,
    Elemental,
    Zombie,
    Cleric,
    Human,
    Wizard,
    Fungus,
    Shade,
    Archon,
}

impl CreatureType {
    pub fn name(self) -> &'static str {
        match self {
            CreatureType::Symbol(s) => s.creature_type(),
            CreatureType::Assassin => "Assassin",
            CreatureType::Lhurgoyf => "Lhurgoyf",
            CreatureType::Rat => "Rat",
            CreatureType::AssemblyWorker => "Assembly-Worker",
            CreatureType::Incarnation => "Incarnation",
            CreatureType::Elemental => "Elemental",
            CreatureType::Zombie => "Zombie",
            CreatureType::Cleric => "Cleric",
            CreatureType::Human => "Human",
            CreatureType::Wizard => "Wizard",
            CreatureType::Fungus => "Fungus",
            CreatureType::Shade => "Shade",
            CreatureType::Archon => "Archon",
        }
    }

    pub fn symbol(self) -> Option<TmSymbol> {
        match self {
            CreatureType::Symbol(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for CreatureType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for CreatureType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

bitflags! {
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
    pub struct CardTypes: u8 {
        const CREATURE = 1 << 0;
        const ENCHANTMENT = 1 << 1;
        const ARTIFACT = 1 << 2;
        const LAND = 1 << 3;
    }
}

impl fmt::Display for CardTypes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self
            .iter_names()
            .map(|(n, _)| match n {
                "CREATURE" => "creature",
                "ENCHANTMENT" => "enchantment",
                "ARTIFACT" => "artifact",
                _ => "land",
            })
            .collect();
        f.write_str(&names.join("+"))
    }
}

/// The token a death trigger creates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TokenSpec {
    pub creature_type: CreatureType,
    pub colors: Colors,
    pub tapped: bool,
    pub power: i32,
    pub toughness: i32,
}

/// "Whenever this or another `watches` dies, create `token`." Program cards
/// also remember which control state's rule set they belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ReanimateRule {
    pub watches: CreatureType,
    pub token: TokenSpec,
    pub program_state: Option<TmState>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MarkerSide {
    /// Green Lhurgoyf bounding the left of the initialised tape.
    Left,
    /// White Rat bounding the right.
    Right,
}

/// Card behaviour, parameterised by whatever text edits the card received.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BehaviorTag {
    /// Rotlung Reanimator: sees any controller's creature die.
    RotlungTrigger(ReanimateRule),
    /// Xathrid Necromancer: only sees its controller's creatures.
    XathridTrigger(ReanimateRule),
    IllusoryGains,
    CloakOfInvisibility,
    WheelOfSunAndMoon,
    SteelyResolve(CreatureType),
    DreadOfNight(Colors),
    FungusSliverGrant(CreatureType),
    SharedTriumph(CreatureType),
    WildEvocation,
    Recycle,
    PrivilegedPosition,
    Vigor,
    MesmericOrb,
    PrismaticOmen,
    Choke,
    BlazingArchon,
    SoulSnuffersEtb,
    TapeToken,
    EndMarker(MarkerSide),
}

impl BehaviorTag {
    pub fn reanimate_rule(&self) -> Option<(&ReanimateRule, bool)> {
        match self {
            BehaviorTag::RotlungTrigger(r) => Some((r, false)),
            BehaviorTag::XathridTrigger(r) => Some((r, true)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AttachTarget {
    Permanent(PermanentId),
    Player(Player),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permanent {
    pub id: PermanentId,
    pub name: &'static str,
    pub owner: Player,
    pub controller: Player,
    pub card_types: CardTypes,
    pub base_power: i32,
    pub base_toughness: i32,
    pub colors: Colors,
    pub creature_types: Vec<CreatureType>,
    pub tapped: bool,
    pub phased_out: bool,
    pub has_phasing: bool,
    pub plus_counters: u32,
    pub minus_counters: u32,
    pub marked_damage: u32,
    /// For Auras: what this permanent enchants.
    pub attached_to: Option<AttachTarget>,
    pub behaviors: Vec<BehaviorTag>,
    pub is_token: bool,
    pub timestamp: u64,
}

impl Permanent {
    /// A permanent with no stats, colours or behaviour; callers fill the rest.
    pub fn new(name: &'static str, controller: Player, card_types: CardTypes) -> Self {
        Permanent {
            id: PermanentId(0),
            name,
            owner: controller,
            controller,
            card_types,
            base_power: 0,
            base_toughness: 0,
            colors: Colors::empty(),
            creature_types: Vec::new(),
            tapped: false,
            phased_out: false,
            has_phasing: false,
            plus_counters: 0,
            minus_counters: 0,
            marked_damage: 0,
            attached_to: None,
            behaviors: Vec::new(),
            is_token: false,
            timestamp: 0,
        }
    }

    pub fn is_creature(&self) -> bool {
        self.card_types.contains(CardTypes::CREATURE)
    }

    pub fn is_land(&self) -> bool {
        self.card_types.contains(CardTypes::LAND)
    }

    pub fn has_type(&self, t: CreatureType) -> bool {
        self.creature_types.contains(&t)
    }

    pub fn has_behavior(&self, pred: impl Fn(&BehaviorTag) -> bool) -> bool {
        self.behaviors.iter().any(pred)
    }

    pub fn is_tape_token(&self) -> bool {
        self.is_token && self.behaviors.contains(&BehaviorTag::TapeToken)
    }

    pub fn marker_side(&self) -> Option<MarkerSide> {
        self.behaviors.iter().find_map(|b| match b {
            BehaviorTag::EndMarker(side) => Some(*side),
            _ => None,
        })
    }

    /// The tape symbol a tape token carries.
    pub fn tape_symbol(&self) -> Option<TmSymbol> {
        self.creature_types.iter().find_map(|t| t.symbol())
    }

    pub fn counter_delta(&self) -> i32 {
        self.plus_counters as i32 - self.minus_counters as i32
    }

    pub fn annihilate_counters(&mut self) {
        let common = self.plus_counters.min(self.minus_counters);
        self.plus_counters -= common;
        self.minus_counters -= common;
    }
}

/// Removes matched pairs of +1/+1 and -1/-1 counters.
pub fn annihilate_counters(p: &Permanent) -> Permanent {
    let mut p = p.clone();
    p.annihilate_counters();
    p
}
