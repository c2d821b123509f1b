// SPDX-License-Identifier: Apache-2.0

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{TmState, TmSymbol};

/// Two-sided tape. Both sides are stored nearest-first; anything beyond
/// them reads as blank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TmTape {
    pub left: VecDeque<TmSymbol>,
    pub head: TmSymbol,
    pub right: VecDeque<TmSymbol>,
}

impl TmTape {
    pub fn new(
        left: impl IntoIterator<Item = TmSymbol>,
        head: TmSymbol,
        right: impl IntoIterator<Item = TmSymbol>,
    ) -> Self {
        TmTape {
            left: left.into_iter().collect(),
            head,
            right: right.into_iter().collect(),
        }
    }

    pub fn blank() -> Self {
        TmTape::new([], TmSymbol::BLANK, [])
    }

    /// Symbol at signed offset from the head (negative is left).
    pub fn read(&self, offset: i64) -> TmSymbol {
        let side = match offset.signum() {
            0 => return self.head,
            -1 => &self.left,
            _ => &self.right,
        };
        side.get(offset.unsigned_abs() as usize - 1)
            .copied()
            .unwrap_or(TmSymbol::BLANK)
    }

    /// Drops blanks at the far end of each side.
    pub fn normalize(&mut self) {
        for side in [&mut self.left, &mut self.right] {
            while side.back().is_some_and(|s| s.is_blank()) {
                side.pop_back();
            }
        }
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    pub fn is_normalized(&self) -> bool {
        self.left.back().is_none_or(|s| !s.is_blank())
            && self.right.back().is_none_or(|s| !s.is_blank())
    }

    /// Stored cells including the head.
    pub fn len(&self) -> usize {
        self.left.len() + 1 + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for TmTape {
    /// Far-left to far-right with the head in brackets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if !std::mem::take(&mut first) {
                f.write_str(" ")?;
            }
            Ok(())
        };
        for s in self.left.iter().rev() {
            sep(f)?;
            write!(f, "{s}")?;
        }
        sep(f)?;
        write!(f, "[{}]", self.head)?;
        for s in &self.right {
            sep(f)?;
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// On-disk tape description (TOML).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TapeFile {
    pub state: String,
    #[serde(default)]
    pub left: Vec<String>,
    pub head: String,
    #[serde(default)]
    pub right: Vec<String>,
}

#[derive(Debug, Error)]
pub enum TapeFileError {
    #[error("tape file: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("tape file: unknown creature type `{0}`")]
    UnknownSymbol(String),
    #[error("tape file: {0}")]
    BadState(String),
}

/// Reads a tape file into a normalized tape and its start state.
pub fn parse_tape_file(text: &str) -> Result<(TmTape, TmState), TapeFileError> {
    let file: TapeFile = toml::from_str(text)?;
    let state: TmState = file.state.parse().map_err(TapeFileError::BadState)?;
    let sym = |name: &String| {
        TmSymbol::from_type_name(name).ok_or_else(|| TapeFileError::UnknownSymbol(name.clone()))
    };
    let left = file.left.iter().map(sym).collect::<Result<Vec<_>, _>>()?;
    let right = file.right.iter().map(sym).collect::<Result<Vec<_>, _>>()?;
    let head = sym(&file.head)?;
    Ok((TmTape::new(left, head, right).normalized(), state))
}

pub fn render_tape_file(tape: &TmTape, state: TmState) -> String {
    let names = |side: &VecDeque<TmSymbol>| side.iter().map(|s| s.to_string()).collect();
    let file = TapeFile {
        state: state.to_string(),
        left: names(&tape.left),
        head: tape.head.to_string(),
        right: names(&tape.right),
    };
    toml::to_string(&file).expect("tape files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(name: &str) -> TmSymbol {
        TmSymbol::from_type_name(name).unwrap()
    }

    #[test]
    fn normalize_strips_only_outermost_blanks() {
        let blank = TmSymbol::BLANK;
        let mut t = TmTape::new([sym("Elf"), blank], sym("Myr"), []);
        t.normalize();
        assert_eq!(t.left, VecDeque::from([sym("Elf")]));
        let t = TmTape::new([blank, sym("Elf")], sym("Myr"), []).normalized();
        assert_eq!(t.left, VecDeque::from([blank, sym("Elf")]));
    }

    #[test]
    fn all_blank_tape_normalizes_to_empty_sides() {
        let blank = TmSymbol::BLANK;
        let t = TmTape::new([blank, blank], blank, [blank]).normalized();
        assert_eq!(t, TmTape::blank());
        assert!(t.left.is_empty() && t.right.is_empty());
    }

    #[test]
    fn reads_beyond_storage_are_blank() {
        let t = TmTape::new([sym("Elf")], sym("Myr"), [sym("Orc")]);
        assert_eq!(t.read(-1), sym("Elf"));
        assert_eq!(t.read(-2), TmSymbol::BLANK);
        assert_eq!(t.read(0), sym("Myr"));
        assert_eq!(t.read(1), sym("Orc"));
        assert_eq!(t.read(40), TmSymbol::BLANK);
    }

    #[test]
    fn tape_file_round_trip() {
        let text = "state = \"q1\"\nleft = [\"Elf\"]\nhead = \"Aetherborn\"\nright = []\n";
        let (tape, state) = parse_tape_file(text).unwrap();
        assert_eq!(state, TmState::Q1);
        assert_eq!(tape, TmTape::new([sym("Elf")], sym("Aetherborn"), []));
        let again = parse_tape_file(&render_tape_file(&tape, state)).unwrap();
        assert_eq!(again, (tape, state));
    }

    #[test]
    fn tape_file_errors() {
        assert!(matches!(
            parse_tape_file("state = \"q3\"\nhead = \"Elf\"\n"),
            Err(TapeFileError::BadState(_))
        ));
        assert!(matches!(
            parse_tape_file("state = \"q1\"\nhead = \"Zombie\"\n"),
            Err(TapeFileError::UnknownSymbol(_))
        ));
        assert!(matches!(
            parse_tape_file("state = \"q1\"\n"),
            Err(TapeFileError::Syntax(_))
        ));
    }

    #[test]
    fn display_puts_head_in_brackets() {
        let t = TmTape::new([sym("Elf"), sym("Orc")], sym("Myr"), [sym("Kavu")]);
        assert_eq!(t.to_string(), "Orc Elf [Myr] Kavu");
    }

    fn arb_symbol() -> impl Strategy<Value = TmSymbol> {
        (1u8..=18).prop_map(|i| TmSymbol::new(i).unwrap())
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(
            left in prop::collection::vec(arb_symbol(), 0..10),
            head in arb_symbol(),
            right in prop::collection::vec(arb_symbol(), 0..10),
        ) {
            let once = TmTape::new(left.clone(), head, right.clone()).normalized();
            prop_assert!(once.is_normalized());
            prop_assert_eq!(once.clone().normalized(), once.clone());
            for offset in -12i64..=12 {
                prop_assert_eq!(once.read(offset), TmTape::new(left.clone(), head, right.clone()).read(offset));
            }
        }
    }
}
