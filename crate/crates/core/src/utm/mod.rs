// SPDX-License-Identifier: Apache-2.0

//! The (2,18) universal Turing machine as plain data, plus a direct
//! interpreter that serves as ground truth for the board simulation.

mod machine;
mod program;
mod tape;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use machine::{tm_run, tm_step, RunOutcome, RunResult, StepError};
pub use program::{
    load_manifest, parse_manifest, validate_program, ManifestError, Program, ResultColor,
    ResultType, RuleCardSpec, ValidationReport, Violation, CANONICAL_MANIFEST,
};
pub use tape::{parse_tape_file, render_tape_file, TapeFile, TapeFileError, TmTape};

/// Creature types standing in for the 18 tape symbols, in alphabetical order.
pub const SYMBOL_TYPES: [&str; 18] = [
    "Aetherborn",
    "Basilisk",
    "Cephalid",
    "Demon",
    "Elf",
    "Faerie",
    "Giant",
    "Harpy",
    "Illusion",
    "Juggernaut",
    "Kavu",
    "Leviathan",
    "Myr",
    "Noggle",
    "Orc",
    "Pegasus",
    "Rhino",
    "Sliver",
];

const ROGOZHIN_LABELS: [&str; 18] = [
    "1", "→1", "←1", "→1₁", "←1₁", "b", "→b", "←b", "→b₁", "←b₁", "b₂", "b₃", "c", "→c", "←c",
    "→c₁", "←c₁", "c₂",
];

/// One of the 18 tape symbols, indexed 1..=18.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TmSymbol(u8);

impl TmSymbol {
    /// Symbol 3, represented by Cephalid.
    pub const BLANK: TmSymbol = TmSymbol(3);

    pub fn new(index: u8) -> Option<Self> {
        (1..=18).contains(&index).then_some(TmSymbol(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn creature_type(self) -> &'static str {
        SYMBOL_TYPES[usize::from(self.0 - 1)]
    }

    /// Display-only label in Rogozhin's arrow/subscript notation.
    pub fn rogozhin_label(self) -> &'static str {
        ROGOZHIN_LABELS[usize::from(self.0 - 1)]
    }

    pub fn is_blank(self) -> bool {
        self == Self::BLANK
    }

    pub fn from_type_name(name: &str) -> Option<Self> {
        SYMBOL_TYPES
            .iter()
            .position(|t| t.eq_ignore_ascii_case(name.trim()))
            .map(|i| TmSymbol(i as u8 + 1))
    }

    pub fn all() -> impl Iterator<Item = TmSymbol> {
        (1..=18).map(TmSymbol)
    }
}

impl fmt::Display for TmSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.creature_type())
    }
}

impl Serialize for TmSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.creature_type())
    }
}

impl<'de> Deserialize<'de> for TmSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        TmSymbol::from_type_name(&name)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown tape creature type `{name}`")))
    }
}

/// Control state. `Halted` is absorbing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TmState {
    Q1,
    Q2,
    Halted,
}

impl TmState {
    /// The other running state; `Halted` stays put.
    pub fn flipped(self) -> Self {
        match self {
            TmState::Q1 => TmState::Q2,
            TmState::Q2 => TmState::Q1,
            TmState::Halted => TmState::Halted,
        }
    }

    pub fn is_running(self) -> bool {
        self != TmState::Halted
    }
}

impl fmt::Display for TmState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TmState::Q1 => "q1",
            TmState::Q2 => "q2",
            TmState::Halted => "halted",
        })
    }
}

impl FromStr for TmState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q1" => Ok(TmState::Q1),
            "q2" => Ok(TmState::Q2),
            other => Err(format!("expected q1 or q2, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

/// Tape, control state and number of rules applied so far.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TmConfig {
    pub tape: TmTape,
    pub state: TmState,
    pub steps: u64,
}

impl TmConfig {
    pub fn new(tape: TmTape, state: TmState) -> Self {
        TmConfig {
            tape: tape.normalized(),
            state,
            steps: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_bijection_is_alphabetical() {
        let names: Vec<_> = TmSymbol::all().map(|s| s.creature_type()).collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        assert_eq!(names, sorted);
        assert_eq!(TmSymbol::new(1).unwrap().creature_type(), "Aetherborn");
        assert_eq!(TmSymbol::new(18).unwrap().creature_type(), "Sliver");
        assert_eq!(TmSymbol::BLANK.creature_type(), "Cephalid");
        for s in TmSymbol::all() {
            assert_eq!(TmSymbol::from_type_name(s.creature_type()), Some(s));
        }
    }

    #[test]
    fn out_of_range_symbols_rejected() {
        assert!(TmSymbol::new(0).is_none());
        assert!(TmSymbol::new(19).is_none());
        assert!(TmSymbol::from_type_name("Zombie").is_none());
    }

    #[test]
    fn labels_are_display_only() {
        assert_eq!(TmSymbol::new(17).unwrap().rogozhin_label(), "←c₁");
        assert_eq!(TmSymbol::BLANK.rogozhin_label(), "←1");
    }
}
