// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the benchmarks.

use rotlung_core::{BoardRecipe, Program, TmState, TmSymbol, TmTape};

/// A 7-cell tape that runs for well over a thousand steps without halting.
pub fn long_running_recipe() -> BoardRecipe {
    let sym = |n: &str| TmSymbol::from_type_name(n).expect("known symbol");
    let tape = TmTape::new(
        ["Orc", "Elf", "Faerie"].map(sym),
        sym("Myr"),
        ["Kavu", "Sliver", "Giant"].map(sym),
    );
    BoardRecipe::new(Program::canonical(), tape, TmState::Q1).expect("running state")
}
