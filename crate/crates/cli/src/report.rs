use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Violation,
    /// A documented mismatch between a stated result and its finite reading;
    /// reported, never counted as a violation.
    Discrepancy,
    /// Precondition not met; nothing was checked.
    Skipped,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Exhaustive,
    Random,
}

/// One record per instance. Field order is the serialization order.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub instance: usize,
    pub tier: Tier,
    pub verdict: Verdict,
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_us: Option<u64>,
}

impl Report {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

pub fn write_reports<W: Write + ?Sized>(out: &mut W, reports: &[Report]) -> io::Result<()> {
    for r in reports {
        writeln!(out, "{}", r.to_json_line())?;
    }
    Ok(())
}

pub fn has_violation(reports: &[Report]) -> bool {
    reports.iter().any(|r| r.verdict == Verdict::Violation)
}

#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
pub struct Tally {
    pub pass: usize,
    pub violation: usize,
    pub discrepancy: usize,
    pub skipped: usize,
}

impl Tally {
    pub fn of(reports: &[Report]) -> Self {
        let mut t = Tally::default();
        for r in reports {
            match r.verdict {
                Verdict::Pass => t.pass += 1,
                Verdict::Violation => t.violation += 1,
                Verdict::Discrepancy => t.discrepancy += 1,
                Verdict::Skipped => t.skipped += 1,
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_field_order() {
        let r = Report {
            suite: "a3".into(),
            instance: 7,
            tier: Tier::Random,
            verdict: Verdict::Pass,
            witness: None,
            timing_us: None,
        };
        assert_eq!(r.to_json_line(), r#"{"suite":"a3","instance":7,"tier":"random","verdict":"pass","witness":null}"#);
        let timed = Report { timing_us: Some(12), ..r };
        assert!(timed.to_json_line().ends_with(r#""witness":null,"timing_us":12}"#));
    }
}
