// SPDX-License-Identifier: Apache-2.0

//! Battlefield object model and the flat static-effect algebra used by the
//! rules engine.

mod color;
mod permanent;
mod snapshot;
mod state;
mod trace;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use color::Colors;
pub use permanent::{
    annihilate_counters, AttachTarget, BehaviorTag, CardTypes, CreatureType, MarkerSide,
    Permanent, ReanimateRule, TokenSpec,
};
pub use snapshot::{census, BoardSnapshot, CensusRow, PermanentView, PlayerView};
pub use state::{
    GameState, Outcome, PendingTrigger, PlayerZone, StackItem, StatContext, TriggerKind,
    UntilEotEffect,
};
pub use trace::{Event, TraceEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Player::Alice => 0,
            Player::Bob => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "alice",
            Player::Bob => "bob",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PermanentId(pub u32);

impl fmt::Display for PermanentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The four cards Alice cycles through her hand and library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Card {
    #[serde(rename = "Infest")]
    Infest,
    #[serde(rename = "Cleansing Beam")]
    CleansingBeam,
    #[serde(rename = "Coalition Victory")]
    CoalitionVictory,
    #[serde(rename = "Soul Snuffers")]
    SoulSnuffers,
}

impl Card {
    pub fn name(self) -> &'static str {
        match self {
            Card::Infest => "Infest",
            Card::CleansingBeam => "Cleansing Beam",
            Card::CoalitionVictory => "Coalition Victory",
            Card::SoulSnuffers => "Soul Snuffers",
        }
    }

    pub fn is_targeted(self) -> bool {
        self == Card::CleansingBeam
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Card {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Card::Infest,
            Card::CleansingBeam,
            Card::CoalitionVictory,
            Card::SoulSnuffers,
        ]
        .into_iter()
        .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
        .ok_or_else(|| ModelError::UnknownCard(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Untap,
    Upkeep,
    Draw,
    Main,
    End,
    Cleanup,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Untap => "untap",
            Phase::Upkeep => "upkeep",
            Phase::Draw => "draw",
            Phase::Main => "main",
            Phase::End => "end",
            Phase::Cleanup => "cleanup",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("permanent {0} is not on the battlefield")]
    NotOnBattlefield(PermanentId),
    #[error("permanent {0} is phased out")]
    PhasedOut(PermanentId),
    #[error("unknown card `{0}`")]
    UnknownCard(String),
    #[error("{0} has no targeting requirement")]
    Untargeted(Card),
}
