use serde::{Deserialize, Serialize};

use crate::gradedchar::{Comparison, Difference, GradedCharacter, Truncation, Verdict};
use crate::FieldMode;

/// Window as written in reports; `None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub q: i64,
    pub z: Option<i64>,
    pub u: Option<i64>,
}

impl From<Truncation> for WindowSpec {
    fn from(t: Truncation) -> Self {
        WindowSpec { q: t.q_max, z: t.z_max, u: t.u_max }
    }
}

impl From<WindowSpec> for Truncation {
    fn from(w: WindowSpec) -> Self {
        Truncation::new(w.q, w.z, w.u)
    }
}

/// What a case needs to count as passing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expectation {
    #[default]
    Equal,
    /// Left may be strictly smaller than right (only an upper bound is known).
    AtMost,
    /// Reported for information; never fails.
    Informational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: String,
    pub left: String,
    pub right: String,
    pub window: WindowSpec,
    pub verdict: Verdict,
    pub first_diff: Option<Difference>,
    pub millis: u64,
    pub field: String,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub expectation: Expectation,
}

impl VerificationReport {
    pub fn from_comparison(
        case: impl Into<String>,
        left: impl Into<String>,
        right: impl Into<String>,
        comparison: &Comparison,
        expectation: Expectation,
        mode: FieldMode,
        millis: u64,
    ) -> Self {
        VerificationReport {
            case: case.into(),
            left: left.into(),
            right: right.into(),
            window: comparison.window.into(),
            verdict: comparison.verdict,
            first_diff: comparison.first_diff,
            millis,
            field: mode.label().to_string(),
            seed: mode.seed(),
            expectation,
        }
    }

    pub fn compare(
        case: impl Into<String>,
        (left_name, left): (&str, &GradedCharacter),
        (right_name, right): (&str, &GradedCharacter),
        expectation: Expectation,
        mode: FieldMode,
        millis: u64,
    ) -> Self {
        Self::from_comparison(case, left_name, right_name, &left.compare(right), expectation, mode, millis)
    }

    pub fn passes(&self) -> bool {
        match self.expectation {
            Expectation::Equal => self.verdict == Verdict::Equal,
            Expectation::AtMost => self.verdict != Verdict::Mismatch,
            Expectation::Informational => true,
        }
    }

    pub fn csv_header() -> &'static str {
        "case,left,right,q,z,u,verdict,diff_z,diff_u,diff_q,diff_left,diff_right,millis,field,seed"
    }

    pub fn csv_record(&self) -> Vec<String> {
        let opt = |x: Option<i64>| x.map(|v| v.to_string()).unwrap_or_default();
        let d = self.first_diff;
        vec![
            self.case.clone(),
            self.left.clone(),
            self.right.clone(),
            self.window.q.to_string(),
            opt(self.window.z),
            opt(self.window.u),
            self.verdict.to_string(),
            opt(d.map(|d| d.z)),
            opt(d.map(|d| d.u)),
            opt(d.map(|d| d.q)),
            d.map(|d| d.left.to_string()).unwrap_or_default(),
            d.map(|d| d.right.to_string()).unwrap_or_default(),
            self.millis.to_string(),
            self.field.clone(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]
    }

    /// One line for terminal output.
    pub fn summary_line(&self) -> String {
        let mut s = format!("{:<9} {}  [{} vs {}]", self.verdict.to_string(), self.case, self.left, self.right);
        if let Some(d) = self.first_diff {
            s.push_str(&format!("  first diff z={} u={} q={}: {} vs {}", d.z, d.u, d.q, d.left, d.right));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_has_the_report_fields_only() {
        let a = GradedCharacter::one(Truncation::finite(2, 1, 0));
        let r = VerificationReport::compare("x", ("l", &a), ("r", &a), Expectation::Equal, FieldMode::Exact, 3);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(keys, ["case", "field", "first_diff", "left", "millis", "right", "seed", "verdict", "window"]);
        assert_eq!(v["window"], serde_json::json!({"q": 2, "z": 1, "u": 0}));
        assert_eq!(v["verdict"], "EQUAL");
        assert!(v["first_diff"].is_null());
        assert!(r.passes());
    }

    #[test]
    fn at_most_accepts_le_only() {
        let small = GradedCharacter::one(Truncation::finite(2, 1, 0));
        let big = small.add(&GradedCharacter::from_entries(Truncation::finite(2, 1, 0), [((1, 0, 1), 1)]));
        let le = VerificationReport::compare("x", ("l", &small), ("r", &big), Expectation::AtMost, FieldMode::Exact, 0);
        assert_eq!(le.verdict, Verdict::LessOrEqual);
        assert!(le.passes());
        let ge = VerificationReport::compare("x", ("l", &big), ("r", &small), Expectation::AtMost, FieldMode::Exact, 0);
        assert!(!ge.passes());
    }
}
