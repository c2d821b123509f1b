// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::Serialize;

use crate::model::{Event, TraceEvent};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditViolation {
    /// Position of the offending event in the audited trace.
    pub index: usize,
    pub turn: u32,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub events_checked: usize,
    pub violations: Vec<AuditViolation>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Audits a further chunk of the same trace.
    pub fn extend(&mut self, events: &[TraceEvent]) {
        for ev in events {
            let index = self.events_checked;
            self.events_checked += 1;
            if let Some(reason) = violation(&ev.event) {
                self.violations.push(AuditViolation {
                    index,
                    turn: ev.turn,
                    reason,
                });
            }
        }
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            return write!(f, "clean ({} events)", self.events_checked);
        }
        write!(f, "{} violation(s)", self.violations.len())?;
        if let Some(v) = self.violations.first() {
            write!(f, ", first at event {} turn {}: {}", v.index, v.turn, v.reason)?;
        }
        Ok(())
    }
}

fn violation(event: &Event) -> Option<String> {
    match event {
        Event::ForcedCast {
            card,
            hand_size,
            legal_targets,
            cast,
            ..
        } => {
            if *hand_size != 1 {
                Some(format!("{} revealed from a hand of {hand_size}", card.name()))
            } else if let Some(n) = legal_targets.filter(|n| *n != 1) {
                Some(format!("{} had {n} legal targets", card.name()))
            } else if !cast {
                Some(format!("{} could not be cast", card.name()))
            } else {
                None
            }
        }
        Event::Warning { message } => Some(message.clone()),
        _ => None,
    }
}

/// Checks that every cast was forced: one card in hand, one legal target.
pub fn audit_forced_moves(trace: &[TraceEvent]) -> AuditReport {
    let mut report = AuditReport::default();
    report.extend(trace);
    report
}
