// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use bitflags::bitflags;
use serde::{Serialize, Serializer};

bitflags! {
    /// A set of Magic colours. May be empty.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
    pub struct Colors: u8 {
        const WHITE = 1 << 0;
        const BLUE = 1 << 1;
        const BLACK = 1 << 2;
        const RED = 1 << 3;
        const GREEN = 1 << 4;
    }
}

impl Colors {
    /// White, black, red and green: what Prismatic Lace gives the infrastructure.
    pub const LACED: Colors = Colors::WHITE
        .union(Colors::BLACK)
        .union(Colors::RED)
        .union(Colors::GREEN);

    pub fn shares_with(self, other: Colors) -> bool {
        self.intersects(other)
    }

    pub fn names(self) -> Vec<&'static str> {
        self.iter_names()
            .map(|(name, _)| match name {
                "WHITE" => "white",
                "BLUE" => "blue",
                "BLACK" => "black",
                "RED" => "red",
                _ => "green",
            })
            .collect()
    }
}

impl fmt::Display for Colors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("colorless");
        }
        f.write_str(&self.names().join("+"))
    }
}

impl Serialize for Colors {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.names().serialize(s)
    }
}
