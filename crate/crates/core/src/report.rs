use serde::{Deserialize, Serialize};

/// Outcome of one numerical check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    PreconditionFailed,
    Error,
}

/// How `lhs` is supposed to compare with `rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    /// Signed slack: nonnegative when the relation holds exactly.
    ///
    /// For `=` this is `-|lhs - rhs|`.
    pub fn margin(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Relation::Eq => -(lhs - rhs).abs(),
            Relation::Le => rhs - lhs,
            Relation::Ge => lhs - rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

/// One check of an identity, bound or ordering implication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropositionReport {
    pub proposition_id: String,
    pub part: String,
    pub trial: usize,
    pub inputs: Vec<String>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub relation: Relation,
    pub passed: bool,
    pub status: Status,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl PropositionReport {
    /// Evaluate `lhs relation rhs` with slack `tolerance`.
    pub fn check(
        id: &str,
        part: &str,
        inputs: Vec<String>,
        lhs: f64,
        relation: Relation,
        rhs: f64,
        tolerance: f64,
    ) -> Self {
        let margin = relation.margin(lhs, rhs);
        let ok = margin.is_finite() && margin >= -tolerance;
        Self {
            proposition_id: id.to_string(),
            part: part.to_string(),
            trial: 0,
            inputs,
            lhs,
            rhs,
            margin,
            relation,
            passed: ok,
            status: if ok { Status::Pass } else { Status::Fail },
            tolerance,
            note: String::new(),
        }
    }

    pub fn skipped(id: &str, part: &str, inputs: Vec<String>, status: Status, note: impl Into<String>) -> Self {
        Self {
            proposition_id: id.to_string(),
            part: part.to_string(),
            trial: 0,
            inputs,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            relation: Relation::Eq,
            passed: status == Status::PreconditionFailed,
            status,
            tolerance: 0.0,
            note: note.into(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn with_trial(mut self, trial: usize) -> Self {
        self.trial = trial;
        self
    }

    /// Counts as a failure for exit-status purposes.
    pub fn is_failure(&self) -> bool {
        matches!(self.status, Status::Fail | Status::Error)
    }
}

/// Format with 9 significant digits; non-finite values print empty.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..9).contains(&e) {
        let s = format!("{:.*}", (8 - e).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.8e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(sig9(0.351501509123), "0.351501509");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(-2.5e-7), "-2.50000000e-7");
        assert_eq!(sig9(123456789.4), "123456789");
        assert_eq!(sig9(f64::NAN), "");
    }

    #[test]
    fn margins() {
        assert_eq!(Relation::Ge.margin(2.0, 1.0), 1.0);
        assert_eq!(Relation::Le.margin(2.0, 1.0), -1.0);
        assert_eq!(Relation::Eq.margin(2.0, 1.5), -0.5);
        let r = PropositionReport::check("x", "a", vec![], 1.0, Relation::Ge, 1.0 + 1e-9, 1e-6);
        assert!(r.passed);
        let r = PropositionReport::check("x", "a", vec![], f64::NAN, Relation::Ge, 0.0, 1e-6);
        assert!(!r.passed && r.is_failure());
    }

    #[test]
    fn json_line() {
        let r = PropositionReport::check("P", "i", vec!["a".into()], 1.0, Relation::Le, 2.0, 1e-6);
        let j = serde_json::to_string(&r).unwrap();
        assert!(j.contains(r#""relation":"<=""#), "{j}");
        assert!(j.contains(r#""status":"pass""#), "{j}");
    }
}
