// SPDX-License-Identifier: Apache-2.0

//! The order a player picks for simultaneous triggers never changes the tape.
//! On the compiled board no player ever has two triggers waiting at once, so
//! this guards against regressions that would introduce such a choice.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rotlung_core::engine::{EngineOptions, TriggerOrder};
use rotlung_core::verifier::{lockstep_verify, random_recipe};
use rotlung_core::{build_initial_state, extract_config, Engine, Program};

const STEPS: u64 = 12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shuffled_trigger_order_reads_the_same_tape(tape_seed in any::<u64>(), order_seed in any::<u64>()) {
        let program = Program::canonical();
        let recipe = random_recipe(&mut ChaCha8Rng::seed_from_u64(tape_seed), &program);
        prop_assume!(recipe.tape.left.len() + recipe.tape.right.len() < 12);

        let mut canonical = Engine::new(build_initial_state(&recipe), EngineOptions::default());
        let shuffled_options = EngineOptions {
            trigger_order: TriggerOrder::Shuffled(order_seed),
            ..EngineOptions::default()
        };
        let mut shuffled = Engine::new(build_initial_state(&recipe), shuffled_options);
        for step in 1..=STEPS {
            let a = canonical.run_computational_step().map(|(r, _)| r);
            let b = shuffled.run_computational_step().map(|(r, _)| r);
            prop_assert!(a.is_ok() && b.is_ok(), "step {step}: {a:?} vs {b:?}");
            let (a, b) = (a.unwrap(), b.unwrap());
            prop_assert_eq!(a, b);
            let ca = extract_config(canonical.state()).expect("canonical board readable");
            let cb = extract_config(shuffled.state()).expect("shuffled board readable");
            prop_assert_eq!(ca, cb, "step {}", step);
            if a.halted {
                break;
            }
        }

        // The shuffled engine also agrees with the interpreter outright.
        let report = lockstep_verify(&recipe, STEPS, shuffled_options);
        prop_assert!(report.ok(), "{}", report);
    }
}
