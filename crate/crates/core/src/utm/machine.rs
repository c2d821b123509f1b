// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use super::{Direction, Program, TmConfig, TmState, TmSymbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("cannot step a halted machine")]
    Halted,
    #[error("max_steps must be at least 1")]
    ZeroSteps,
}

/// Applies the rule for (state, head symbol). Halting counts as a step and
/// leaves the tape untouched.
pub fn tm_step(config: &TmConfig, program: &Program) -> Result<TmConfig, StepError> {
    if !config.state.is_running() {
        return Err(StepError::Halted);
    }
    let rule = program.rule(config.state, config.tape.head);
    let mut next = config.clone();
    next.steps += 1;
    next.state = rule.next_state();
    let (Some(written), Some(direction)) = (rule.written_symbol(), rule.direction()) else {
        return Ok(next);
    };
    let tape = &mut next.tape;
    match direction {
        Direction::Left => {
            tape.right.push_front(written);
            tape.head = tape.left.pop_front().unwrap_or(TmSymbol::BLANK);
        }
        Direction::Right => {
            tape.left.push_front(written);
            tape.head = tape.right.pop_front().unwrap_or(TmSymbol::BLANK);
        }
    }
    tape.normalize();
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOutcome {
    /// The machine halted on this (1-based) step.
    Halted { step: u64 },
    StillRunning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub outcome: RunOutcome,
    pub last: TmConfig,
    /// Configuration after each applied step, when requested.
    pub history: Option<Vec<TmConfig>>,
}

pub fn tm_run(
    config: &TmConfig,
    program: &Program,
    max_steps: u64,
    keep_history: bool,
) -> Result<RunResult, StepError> {
    if max_steps == 0 {
        return Err(StepError::ZeroSteps);
    }
    let mut history = keep_history.then(Vec::new);
    let mut current = config.clone();
    let mut outcome = RunOutcome::StillRunning;
    for _ in 0..max_steps {
        if current.state == TmState::Halted {
            break;
        }
        current = tm_step(&current, program)?;
        if let Some(h) = history.as_mut() {
            h.push(current.clone());
        }
        if current.state == TmState::Halted {
            outcome = RunOutcome::Halted {
                step: current.steps,
            };
            break;
        }
    }
    Ok(RunResult {
        outcome,
        last: current,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::utm::TmTape;
    use proptest::prelude::*;

    fn sym(name: &str) -> TmSymbol {
        TmSymbol::from_type_name(name).unwrap()
    }

    fn at(state: TmState, left: &[&str], head: &str, right: &[&str]) -> TmConfig {
        TmConfig::new(
            TmTape::new(
                left.iter().map(|n| sym(n)),
                sym(head),
                right.iter().map(|n| sym(n)),
            ),
            state,
        )
    }

    #[test]
    fn aetherborn_in_q1_writes_sliver_and_moves_left() {
        let program = Program::canonical();
        let next = tm_step(&at(TmState::Q1, &["Elf"], "Aetherborn", &[]), &program).unwrap();
        assert_eq!(next.state, TmState::Q1);
        assert_eq!(next.steps, 1);
        assert_eq!(next.tape, TmTape::new([], sym("Elf"), [sym("Sliver")]));
    }

    #[test]
    fn rhino_in_q1_halts_without_touching_tape() {
        let program = Program::canonical();
        let start = at(TmState::Q1, &["Elf"], "Rhino", &["Orc"]);
        let next = tm_step(&start, &program).unwrap();
        assert_eq!(next.state, TmState::Halted);
        assert_eq!(next.steps, 1);
        assert_eq!(next.tape, start.tape);
        assert_eq!(tm_step(&next, &program), Err(StepError::Halted));
    }

    #[test]
    fn kavu_in_q1_writes_leviathan_and_switches_state() {
        let program = Program::canonical();
        let next = tm_step(&at(TmState::Q1, &[], "Kavu", &[]), &program).unwrap();
        assert_eq!(next.state, TmState::Q2);
        assert_eq!(next.tape, TmTape::new([], TmSymbol::BLANK, [sym("Leviathan")]));
    }

    #[test]
    fn blank_in_q2_writes_basilisk_onto_fresh_blank() {
        let program = Program::canonical();
        let next = tm_step(&TmConfig::new(TmTape::blank(), TmState::Q2), &program).unwrap();
        assert_eq!(next.state, TmState::Q2);
        assert_eq!(next.tape, TmTape::new([], TmSymbol::BLANK, [sym("Basilisk")]));
    }

    #[test]
    fn blank_writes_are_normalized_away() {
        // q1 Sliver writes a green Cephalid: moving right leaves a blank on the left.
        let program = Program::canonical();
        let next = tm_step(&at(TmState::Q1, &[], "Sliver", &[]), &program).unwrap();
        assert_eq!(next.tape, TmTape::blank());
    }

    #[test]
    fn run_halts_on_first_step_for_rhino() {
        let program = Program::canonical();
        let r = tm_run(&at(TmState::Q1, &[], "Rhino", &[]), &program, 10, false).unwrap();
        assert_eq!(r.outcome, RunOutcome::Halted { step: 1 });
        assert!(r.history.is_none());
    }

    #[test]
    fn run_rejects_zero_steps() {
        let program = Program::canonical();
        assert_eq!(
            tm_run(&TmConfig::new(TmTape::blank(), TmState::Q1), &program, 0, false),
            Err(StepError::ZeroSteps)
        );
    }

    #[test]
    fn run_keeps_history_of_each_step() {
        let program = Program::canonical();
        let start = at(TmState::Q1, &[], "Aetherborn", &[]);
        let r = tm_run(&start, &program, 5, true).unwrap();
        assert_eq!(r.outcome, RunOutcome::StillRunning);
        let history = r.history.unwrap();
        assert_eq!(history.len(), 5);
        let mut c = start;
        for h in &history {
            c = tm_step(&c, &program).unwrap();
            assert_eq!(&c, h);
        }
        assert_eq!(r.last, c);
    }

    #[test]
    fn three_state_changes_follow_tapped_rows() {
        // q1 Kavu -> q2 (writes Leviathan, left), q2 on blank stays, then a hand-built
        // word that walks through q2 Faerie (tapped) and q1 Myr (tapped).
        let program = Program::canonical();
        let mut c = at(TmState::Q1, &["Faerie"], "Kavu", &[]);
        c = tm_step(&c, &program).unwrap();
        assert_eq!((c.state, c.tape.head), (TmState::Q2, sym("Faerie")));
        c = tm_step(&c, &program).unwrap();
        assert_eq!(c.state, TmState::Q1);
        // q2 Faerie wrote a green Kavu and moved right onto the Leviathan.
        assert_eq!(c.tape.head, sym("Leviathan"));
        c = tm_step(&c, &program).unwrap();
        assert_eq!(c.state, TmState::Q2);
        assert_eq!(c.steps, 3);
    }

    fn arb_config() -> impl Strategy<Value = TmConfig> {
        let s = || (1u8..=18).prop_map(|i| TmSymbol::new(i).unwrap());
        (
            prop::collection::vec(s(), 0..8),
            s(),
            prop::collection::vec(s(), 0..8),
            prop::bool::ANY,
        )
            .prop_map(|(l, h, r, q2)| {
                TmConfig::new(
                    TmTape::new(l, h, r),
                    if q2 { TmState::Q2 } else { TmState::Q1 },
                )
            })
    }

    proptest! {
        #[test]
        fn step_is_deterministic_and_grows_tape_by_at_most_one(c in arb_config()) {
            let program = Program::canonical();
            let a = tm_step(&c, &program).unwrap();
            let b = tm_step(&c, &program).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a.steps, c.steps + 1);
            prop_assert!(a.tape.len() <= c.tape.len() + 1);
            prop_assert!(a.tape.is_normalized());
            let rule = program.rule(c.state, c.tape.head);
            prop_assert_eq!(a.state != c.state && a.state.is_running(), rule.result_tapped);
        }
    }
}
