// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Direction, TmState, TmSymbol};

/// The bundled transcription of the 36-rule program.
pub const CANONICAL_MANIFEST: &str = include_str!("../../data/rogozhin_2_18.manifest");

const HEADER: [&str; 6] = ["state", "trigger_type", "tapped", "color", "result_type", "halt"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResultColor {
    White,
    Green,
    Blue,
}

impl ResultColor {
    pub fn direction(self) -> Option<Direction> {
        match self {
            ResultColor::White => Some(Direction::Left),
            ResultColor::Green => Some(Direction::Right),
            ResultColor::Blue => None,
        }
    }
}

impl fmt::Display for ResultColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResultColor::White => "white",
            ResultColor::Green => "green",
            ResultColor::Blue => "blue",
        })
    }
}

/// Creature type of the token a rule creates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResultType {
    Symbol(TmSymbol),
    Assassin,
}

impl fmt::Display for ResultType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResultType::Symbol(s) => write!(f, "{s}"),
            ResultType::Assassin => f.write_str("Assassin"),
        }
    }
}

/// One edited Reanimator/Necromancer: "whenever a `trigger_type` dies (in
/// `state`), create a (tapped) 2/2 `result_color` `result_type`".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleCardSpec {
    pub state: TmState,
    pub trigger_type: TmSymbol,
    pub result_tapped: bool,
    pub result_color: ResultColor,
    pub result_type: ResultType,
    pub is_halt: bool,
}

impl RuleCardSpec {
    pub fn direction(&self) -> Option<Direction> {
        self.result_color.direction()
    }

    /// Control state after this rule fires.
    pub fn next_state(&self) -> TmState {
        if self.is_halt {
            TmState::Halted
        } else if self.result_tapped {
            self.state.flipped()
        } else {
            self.state
        }
    }

    pub fn written_symbol(&self) -> Option<TmSymbol> {
        match self.result_type {
            ResultType::Symbol(s) => Some(s),
            ResultType::Assassin => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    MissingPair { state: TmState, trigger: TmSymbol },
    DuplicatePair { state: TmState, trigger: TmSymbol },
    HaltedStateRow { trigger: TmSymbol },
    NoHaltRule,
    MultipleHaltRules { count: usize },
    InconsistentHalt { state: TmState, trigger: TmSymbol },
    TappedHalt { state: TmState, trigger: TmSymbol },
    /// The end-of-tape relay hands the blank symbol's rule a death it only
    /// sees as a Rotlung Reanimator, so that rule cannot change state.
    BlankRuleChangesState { state: TmState },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingPair { state, trigger } => {
                write!(f, "missing rule for ({state}, {trigger})")
            }
            Violation::DuplicatePair { state, trigger } => {
                write!(f, "duplicate rule for ({state}, {trigger})")
            }
            Violation::HaltedStateRow { trigger } => {
                write!(f, "rule for {trigger} is keyed on the halted state")
            }
            Violation::NoHaltRule => f.write_str("no halt rule"),
            Violation::MultipleHaltRules { count } => write!(f, "{count} halt rules, expected 1"),
            Violation::InconsistentHalt { state, trigger } => write!(
                f,
                "rule ({state}, {trigger}): halt flag must match a blue Assassin result"
            ),
            Violation::TappedHalt { state, trigger } => {
                write!(f, "halt rule ({state}, {trigger}) must not be tapped")
            }
            Violation::BlankRuleChangesState { state } => {
                write!(f, "blank-symbol rule in {state} changes state")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub rules: usize,
    pub tapped_rows: usize,
    pub halt_rows: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks coverage of all 2×18 (state, symbol) pairs, a unique untapped halt
/// rule, and the halt/colour/tapped consistency of every row.
pub fn validate_program(specs: &[RuleCardSpec]) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen: BTreeMap<(TmState, TmSymbol), usize> = BTreeMap::new();
    for spec in specs {
        if spec.state == TmState::Halted {
            violations.push(Violation::HaltedStateRow {
                trigger: spec.trigger_type,
            });
            continue;
        }
        *seen.entry((spec.state, spec.trigger_type)).or_default() += 1;
        let blue_assassin =
            spec.result_color == ResultColor::Blue && spec.result_type == ResultType::Assassin;
        let half_blue =
            (spec.result_color == ResultColor::Blue) != (spec.result_type == ResultType::Assassin);
        if spec.is_halt != blue_assassin || half_blue {
            violations.push(Violation::InconsistentHalt {
                state: spec.state,
                trigger: spec.trigger_type,
            });
        }
        if spec.is_halt && spec.result_tapped {
            violations.push(Violation::TappedHalt {
                state: spec.state,
                trigger: spec.trigger_type,
            });
        }
        if spec.trigger_type.is_blank() && spec.result_tapped {
            violations.push(Violation::BlankRuleChangesState { state: spec.state });
        }
    }
    for state in [TmState::Q1, TmState::Q2] {
        for trigger in TmSymbol::all() {
            match seen.get(&(state, trigger)).copied().unwrap_or(0) {
                0 => violations.push(Violation::MissingPair { state, trigger }),
                1 => {}
                _ => violations.push(Violation::DuplicatePair { state, trigger }),
            }
        }
    }
    let halt_rows = specs.iter().filter(|s| s.is_halt).count();
    match halt_rows {
        0 => violations.push(Violation::NoHaltRule),
        1 => {}
        count => violations.push(Violation::MultipleHaltRules { count }),
    }
    ValidationReport {
        rules: specs.len(),
        tapped_rows: specs.iter().filter(|s| s.result_tapped).count(),
        halt_rows,
        violations,
    }
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("manifest header must be `{}`", HEADER.join(","))]
    BadHeader,
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("invalid program: {}", .0.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(ValidationReport),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_bool(field: &str, line: u64, what: &str) -> Result<bool, ManifestError> {
    match field.to_ascii_lowercase().as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(ManifestError::Parse {
            line,
            message: format!("{what} must be true or false, got `{other}`"),
        }),
    }
}

/// Parses manifest records without checking program-level validity.
pub fn parse_manifest<R: Read>(source: R) -> Result<Vec<RuleCardSpec>, ManifestError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);
    let header = reader.headers().map_err(|e| ManifestError::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(ManifestError::BadHeader);
    }
    let mut specs = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| ManifestError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != HEADER.len() {
            return Err(ManifestError::Parse {
                line,
                message: format!("expected {} fields, got {}", HEADER.len(), record.len()),
            });
        }
        let bad = |message: String| ManifestError::Parse { line, message };
        let state: TmState = record[0].parse().map_err(bad)?;
        let trigger_type = TmSymbol::from_type_name(&record[1])
            .ok_or_else(|| bad(format!("unknown trigger type `{}`", &record[1])))?;
        let result_tapped = parse_bool(&record[2], line, "tapped")?;
        let result_color = match record[3].to_ascii_lowercase().as_str() {
            "white" => ResultColor::White,
            "green" => ResultColor::Green,
            "blue" => ResultColor::Blue,
            other => return Err(bad(format!("unknown colour `{other}`"))),
        };
        let result_type = if record[4].eq_ignore_ascii_case("Assassin") {
            ResultType::Assassin
        } else {
            ResultType::Symbol(
                TmSymbol::from_type_name(&record[4])
                    .ok_or_else(|| bad(format!("unknown result type `{}`", &record[4])))?,
            )
        };
        let is_halt = parse_bool(&record[5], line, "halt")?;
        specs.push(RuleCardSpec {
            state,
            trigger_type,
            result_tapped,
            result_color,
            result_type,
            is_halt,
        });
    }
    Ok(specs)
}

/// Parses and validates a manifest. Any validation failure is an error.
pub fn load_manifest<R: Read>(source: R) -> Result<Vec<RuleCardSpec>, ManifestError> {
    let specs = parse_manifest(source)?;
    let report = validate_program(&specs);
    if report.is_valid() {
        Ok(specs)
    } else {
        Err(ManifestError::Invalid(report))
    }
}

/// A validated program indexed by (state, symbol).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    rules: Vec<RuleCardSpec>,
}

impl Program {
    pub fn new(mut specs: Vec<RuleCardSpec>) -> Result<Self, ManifestError> {
        let report = validate_program(&specs);
        if !report.is_valid() {
            return Err(ManifestError::Invalid(report));
        }
        specs.sort_by_key(|s| (s.state, s.trigger_type));
        Ok(Program { rules: specs })
    }

    pub fn canonical() -> Self {
        let specs = load_manifest(CANONICAL_MANIFEST.as_bytes()).expect("bundled manifest is valid");
        Program::new(specs).expect("bundled manifest is valid")
    }

    pub fn from_reader<R: Read>(source: R) -> Result<Self, ManifestError> {
        Program::new(load_manifest(source)?)
    }

    /// Rules ordered by state, then symbol index.
    pub fn rules(&self) -> &[RuleCardSpec] {
        &self.rules
    }

    pub fn rule(&self, state: TmState, symbol: TmSymbol) -> &RuleCardSpec {
        let row = match state {
            TmState::Q1 => 0,
            TmState::Q2 => 1,
            TmState::Halted => panic!("halted machines have no rules"),
        };
        &self.rules[row * 18 + usize::from(symbol.index() - 1)]
    }

    pub fn halt_rule(&self) -> &RuleCardSpec {
        self.rules.iter().find(|r| r.is_halt).expect("validated")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(name: &str) -> TmSymbol {
        TmSymbol::from_type_name(name).unwrap()
    }

    fn canonical_specs() -> Vec<RuleCardSpec> {
        load_manifest(CANONICAL_MANIFEST.as_bytes()).unwrap()
    }

    #[test]
    fn canonical_rows_match_table() {
        let program = Program::canonical();
        let r = program.rule(TmState::Q1, sym("Aetherborn"));
        assert_eq!(
            *r,
            RuleCardSpec {
                state: TmState::Q1,
                trigger_type: TmSymbol::new(1).unwrap(),
                result_tapped: false,
                result_color: ResultColor::White,
                result_type: ResultType::Symbol(sym("Sliver")),
                is_halt: false,
            }
        );
        let r = program.rule(TmState::Q1, sym("Rhino"));
        assert_eq!(r.trigger_type.index(), 17);
        assert!(r.is_halt && !r.result_tapped);
        assert_eq!(r.result_color, ResultColor::Blue);
        assert_eq!(r.result_type, ResultType::Assassin);
        let r = program.rule(TmState::Q2, sym("Kavu"));
        assert_eq!(r.trigger_type.index(), 11);
        assert!(r.result_tapped);
        assert_eq!(r.result_color, ResultColor::Green);
        assert_eq!(r.result_type, ResultType::Symbol(sym("Faerie")));
    }

    #[test]
    fn canonical_manifest_is_valid_with_seven_tapped_rows() {
        let report = validate_program(&canonical_specs());
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(report.rules, 36);
        assert_eq!(report.tapped_rows, 7);
        assert_eq!(report.halt_rows, 1);
    }

    #[test]
    fn colour_fixes_direction_for_every_rule() {
        for r in Program::canonical().rules() {
            match r.result_color {
                ResultColor::White => assert_eq!(r.direction(), Some(Direction::Left)),
                ResultColor::Green => assert_eq!(r.direction(), Some(Direction::Right)),
                ResultColor::Blue => assert!(r.is_halt),
            }
        }
    }

    #[test]
    fn missing_pair_reported() {
        let specs: Vec<_> = canonical_specs()
            .into_iter()
            .filter(|s| !(s.state == TmState::Q2 && s.trigger_type == sym("Sliver")))
            .collect();
        let report = validate_program(&specs);
        assert_eq!(
            report.violations,
            vec![Violation::MissingPair {
                state: TmState::Q2,
                trigger: sym("Sliver")
            }]
        );
    }

    #[test]
    fn duplicate_halt_reported() {
        let mut specs = canonical_specs();
        let idx = specs
            .iter()
            .position(|s| s.state == TmState::Q2 && s.trigger_type == sym("Myr"))
            .unwrap();
        specs[idx].result_color = ResultColor::Blue;
        specs[idx].result_type = ResultType::Assassin;
        specs[idx].is_halt = true;
        let report = validate_program(&specs);
        assert!(report
            .violations
            .contains(&Violation::MultipleHaltRules { count: 2 }));
    }

    #[test]
    fn duplicate_pair_reported_by_loader() {
        let mut text = CANONICAL_MANIFEST.to_string();
        text.push_str("q1,Aetherborn,false,green,Elf,false\n");
        let err = load_manifest(text.as_bytes()).unwrap_err();
        match err {
            ManifestError::Invalid(report) => assert!(report.violations.contains(
                &Violation::DuplicatePair {
                    state: TmState::Q1,
                    trigger: sym("Aetherborn")
                }
            )),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_fields_carry_line_numbers() {
        let text = "state,trigger_type,tapped,color,result_type,halt\nq1,Aetherborn,maybe,white,Sliver,false\n";
        match parse_manifest(text.as_bytes()).unwrap_err() {
            ManifestError::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("tapped"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = "state,trigger_type,tapped,color,result_type,halt\nq3,Aetherborn,false,white,Sliver,false\n";
        assert!(matches!(
            parse_manifest(text.as_bytes()),
            Err(ManifestError::Parse { .. })
        ));
        let text = "state,trigger,tapped,color,result_type,halt\n";
        assert!(matches!(
            parse_manifest(text.as_bytes()),
            Err(ManifestError::BadHeader)
        ));
        let text = "state,trigger_type,tapped,color,result_type,halt\nq1,Aetherborn,false,white\n";
        assert!(matches!(
            parse_manifest(text.as_bytes()),
            Err(ManifestError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn tapped_blank_rule_rejected() {
        let mut specs = canonical_specs();
        let idx = specs
            .iter()
            .position(|s| s.state == TmState::Q1 && s.trigger_type.is_blank())
            .unwrap();
        specs[idx].result_tapped = true;
        let report = validate_program(&specs);
        assert_eq!(
            report.violations,
            vec![Violation::BlankRuleChangesState { state: TmState::Q1 }]
        );
    }

    #[test]
    fn blue_non_assassin_is_inconsistent() {
        let mut specs = canonical_specs();
        specs[0].result_color = ResultColor::Blue;
        let report = validate_program(&specs);
        assert!(matches!(
            report.violations[0],
            Violation::InconsistentHalt { .. }
        ));
    }
}
