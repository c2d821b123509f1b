// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::{Command, Output};

const GOLDEN_CENSUS: &str = include_str!("../../core/tests/golden/infrastructure_census.txt");

fn tape(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../tapes").join(name)
}

fn rotlung(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotlung"))
        .args(args)
        .env_remove("ROTLUNG_MANIFEST")
        .output()
        .expect("spawn rotlung")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn halting_tape_wins_at_step_one() {
    let t = tape("halt1.tape");
    let out = rotlung(&["run", "--tape", t.to_str().unwrap(), "--max-steps", "10"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.starts_with("halted-alice-wins at step 1\n"), "{text}");
    assert!(text.contains("state: halted"), "{text}");
}

#[test]
fn step_limit_matches_interpreter() {
    use rotlung_core::utm::{parse_tape_file, tm_run};
    use rotlung_core::{Program, TmConfig};

    let t = tape("blank.tape");
    let out = rotlung(&["run", "--tape", t.to_str().unwrap(), "--max-steps", "50"]);
    assert!(out.status.success(), "{out:?}");

    let (start, state) = parse_tape_file(&std::fs::read_to_string(&t).unwrap()).unwrap();
    let oracle = tm_run(&TmConfig::new(start, state), &Program::canonical(), 50, false).unwrap();
    let want = format!("step-limit\nstate: {}\ntape: {}\n", oracle.last.state, oracle.last.tape);
    assert_eq!(stdout(&out), want);
}

#[test]
fn state_flag_overrides_tape_file() {
    let t = tape("blank.tape");
    let out = rotlung(&["run", "--tape", t.to_str().unwrap(), "--state", "q1", "--max-steps", "1"]);
    assert!(out.status.success(), "{out:?}");
    let q2 = rotlung(&["run", "--tape", t.to_str().unwrap(), "--max-steps", "1"]);
    assert_ne!(stdout(&out), stdout(&q2));
}

#[test]
fn missing_tape_flag_is_a_usage_error() {
    let out = rotlung(&["run", "--max-steps", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_tape_file_fails() {
    let out = rotlung(&["run", "--tape", "/nonexistent.tape", "--max-steps", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reading tape"));
}

#[test]
fn zero_cases_is_a_usage_error() {
    let out = rotlung(&["verify", "--cases", "0", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_turn_counts() {
    let out = rotlung(&["verify", "--cases", "1", "--steps", "1", "--seed", "7"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let case = text.lines().next().unwrap();
    assert!(case.starts_with("case 0 ok "), "{text}");
    assert!(case.contains("turns=4x1") || case.contains("turns=3x1"), "{case}");
    assert!(text.ends_with("1/1 ok\n"), "{text}");
}

#[test]
fn verify_small_corpus_passes() {
    let out = rotlung(&["verify", "--cases", "6", "--steps", "40", "--seed", "3"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("case ")).count(), 6);
    assert!(text.ends_with("6/6 ok\n"), "{text}");
}

#[test]
fn dump_board_is_deterministic() {
    let t = tape("sample.tape");
    for format in ["text", "json", "census"] {
        let a = rotlung(&["dump-board", "--tape", t.to_str().unwrap(), "--format", format]);
        let b = rotlung(&["dump-board", "--tape", t.to_str().unwrap(), "--format", format]);
        assert!(a.status.success(), "{a:?}");
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn dump_board_json_parses() {
    let t = tape("sample.tape");
    let out = rotlung(&["dump-board", "--tape", t.to_str().unwrap(), "--format", "json"]);
    let text = stdout(&out);
    assert!(text.trim_start().starts_with('{'), "{text}");
    assert!(text.contains("Rotlung Reanimator"));
}

#[test]
fn census_matches_golden_listing() {
    let t = tape("blank.tape");
    let out = rotlung(&["dump-board", "--tape", t.to_str().unwrap(), "--format", "census"]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout(&out), GOLDEN_CENSUS);
}

#[test]
fn traces_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let t = tape("sample.tape");
    let mut traces = Vec::new();
    for name in ["a.ndjson", "b.ndjson"] {
        let path = dir.path().join(name);
        let out = rotlung(&[
            "run",
            "--tape",
            t.to_str().unwrap(),
            "--max-steps",
            "15",
            "--trace",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{out:?}");
        traces.push(std::fs::read(&path).unwrap());
    }
    assert!(!traces[0].is_empty());
    assert_eq!(traces[0], traces[1]);
    let first = String::from_utf8(traces[0].clone()).unwrap();
    assert!(first.lines().all(|l| l.starts_with('{') && l.ends_with('}')));
}
