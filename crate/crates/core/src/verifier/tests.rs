// SPDX-License-Identifier: Apache-2.0

use super::*;
use crate::utm::tm_run;

fn sym(name: &str) -> TmSymbol {
    TmSymbol::from_type_name(name).unwrap()
}

fn recipe(left: &[&str], head: &str, right: &[&str], state: TmState) -> BoardRecipe {
    let tape = TmTape::new(left.iter().map(|s| sym(s)), sym(head), right.iter().map(|s| sym(s)));
    BoardRecipe::new(Program::canonical(), tape, state).unwrap()
}

#[test]
fn round_trip_fresh_board() {
    let r = recipe(&["Elf", "Orc"], "Myr", &["Kavu"], TmState::Q2);
    let got = extract_config(&build_initial_state(&r)).unwrap();
    assert_eq!(got, TmConfig::new(r.tape.clone(), TmState::Q2));
}

#[test]
fn round_trip_random_boards() {
    let program = Program::canonical();
    for (_, r) in random_cases(11, 50, &program) {
        let got = extract_config(&build_initial_state(&r)).unwrap();
        assert_eq!(got, TmConfig::new(r.tape.clone(), r.start_state));
    }
}

#[test]
fn one_step_matches_oracle() {
    let r = recipe(&["Elf"], "Aetherborn", &[], TmState::Q1);
    let report = lockstep_verify(&r, 1, EngineOptions::default());
    assert!(report.ok(), "{report}");
    assert_eq!(report.steps[0].alice_turns, 4);
}

#[test]
fn state_change_takes_three_turns() {
    let r = recipe(&[], "Kavu", &[], TmState::Q1);
    let report = lockstep_verify(&r, 1, EngineOptions::default());
    assert!(report.ok(), "{report}");
    assert_eq!(report.steps[0].alice_turns, 3);
    assert!(report.steps[0].rule_tapped);
}

#[test]
fn rhino_halts_at_step_one() {
    let r = recipe(&[], "Rhino", &[], TmState::Q1);
    let report = lockstep_verify(&r, 10, EngineOptions::default());
    assert!(report.ok(), "{report}");
    assert_eq!(report.result, CaseResult::Halted { step: 1 });
    let win = report.win.unwrap();
    assert_eq!(win.alice_turn, 3);
    assert!(win.via_coalition_victory && win.blue_assassin);
}

#[test]
fn small_random_corpus_agrees() {
    let program = Program::canonical();
    for (seed, r) in random_cases(5, 8, &program) {
        let report = lockstep_verify(&r, 60, EngineOptions::default());
        assert!(report.ok(), "seed {seed}: {report}");
        let oracle = tm_run(&TmConfig::new(r.tape.clone(), r.start_state), &program, 60, false).unwrap();
        if let crate::utm::RunOutcome::Halted { step } = oracle.outcome {
            assert_eq!(report.result, CaseResult::Halted { step });
        }
    }
}

#[test]
fn flipped_color_detected_at_step_one() {
    let r = recipe(&["Elf", "Orc"], "Myr", &["Kavu"], TmState::Q1);
    let mut state = build_initial_state(&r);
    faults::flip_side_token_color(&mut state).unwrap();
    let start = TmConfig::new(r.tape.clone(), r.start_state);
    let report = lockstep_from_state(state, &r.program, start, 5, EngineOptions::default());
    assert!(!report.ok());
    assert_eq!(report.first_divergence.as_ref().map(|d| d.step), Some(1), "{report}");
}

#[test]
fn missing_steely_resolve_flagged() {
    let r = recipe(&["Elf"], "Aetherborn", &[], TmState::Q1);
    let mut state = build_initial_state(&r);
    assert!(faults::remove_steely_resolve(&mut state));
    let start = TmConfig::new(r.tape.clone(), r.start_state);
    let report = lockstep_from_state(state, &r.program, start, 1, EngineOptions::lenient());
    assert!(report
        .audit
        .violations
        .iter()
        .any(|v| v.reason.contains("legal targets")));
}

#[test]
fn empty_trace_is_clean() {
    assert!(audit_forced_moves(&[]).is_clean());
}

#[test]
fn identical_runs_identical_digests() {
    let r = recipe(&["Elf"], "Cephalid", &["Sliver"], TmState::Q2);
    let a = lockstep_verify(&r, 20, EngineOptions::default());
    let b = lockstep_verify(&r, 20, EngineOptions::default());
    assert_eq!(a.trace_digest, b.trace_digest);
    assert_eq!(a, b);
}
