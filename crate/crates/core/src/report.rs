//! Structured results for checks and experiment runs.

/// How a reference value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Exact by construction (integer or rational arithmetic).
    Exact,
    /// A closed-form expression evaluated in floating point.
    ClosedForm,
    /// An independent numerical route (different discretization or
    /// randomized method).
    Oracle,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Provenance::Exact => "exact",
            Provenance::ClosedForm => "closed-form",
            Provenance::Oracle => "oracle",
        };
        f.write_str(s)
    }
}

/// One check: a computed value against a reference with a pinned tolerance.
#[derive(Debug, Clone)]
pub struct CheckRow {
    /// Suite the check belongs to.
    pub suite: String,
    /// Stable identifier.
    pub check_id: String,
    /// Computed value.
    pub value: f64,
    /// Reference value.
    pub reference: f64,
    /// How the reference was obtained.
    pub provenance: Provenance,
    /// Tolerance used by the pass rule.
    pub tolerance: f64,
    /// Whether the check passed.
    pub pass: bool,
    /// Quadrature error estimate attached to the computed value (0 when
    /// not applicable).
    pub quad_err: f64,
}

impl CheckRow {
    /// Pass when `|value - reference| <= tolerance`.
    pub fn absolute(
        suite: impl Into<String>,
        check_id: impl Into<String>,
        value: f64,
        reference: f64,
        provenance: Provenance,
        tolerance: f64,
        quad_err: f64,
    ) -> CheckRow {
        CheckRow {
            suite: suite.into(),
            check_id: check_id.into(),
            value,
            reference,
            provenance,
            tolerance,
            pass: (value - reference).abs() <= tolerance,
            quad_err,
        }
    }

    /// Pass when `|value - reference| <= tolerance * |reference|`.
    pub fn relative(
        suite: impl Into<String>,
        check_id: impl Into<String>,
        value: f64,
        reference: f64,
        provenance: Provenance,
        tolerance: f64,
        quad_err: f64,
    ) -> CheckRow {
        CheckRow {
            suite: suite.into(),
            check_id: check_id.into(),
            value,
            reference,
            provenance,
            tolerance,
            pass: (value - reference).abs() <= tolerance * reference.abs(),
            quad_err,
        }
    }

    /// Pass when `value >= reference - tolerance`.
    pub fn lower_bound(
        suite: impl Into<String>,
        check_id: impl Into<String>,
        value: f64,
        reference: f64,
        provenance: Provenance,
        tolerance: f64,
        quad_err: f64,
    ) -> CheckRow {
        CheckRow {
            suite: suite.into(),
            check_id: check_id.into(),
            value,
            reference,
            provenance,
            tolerance,
            pass: value >= reference - tolerance,
            quad_err,
        }
    }

    /// Pass when `value <= reference + tolerance`.
    pub fn upper_bound(
        suite: impl Into<String>,
        check_id: impl Into<String>,
        value: f64,
        reference: f64,
        provenance: Provenance,
        tolerance: f64,
        quad_err: f64,
    ) -> CheckRow {
        CheckRow {
            suite: suite.into(),
            check_id: check_id.into(),
            value,
            reference,
            provenance,
            tolerance,
            pass: value <= reference + tolerance,
            quad_err,
        }
    }
}

/// A batch of check rows from one experiment run.
#[derive(Debug, Clone, Default)]
pub struct ExperimentReport {
    /// Hash of the driving configuration (empty when not run from one).
    pub config_hash: String,
    /// Seed used for any randomized component.
    pub seed: u64,
    /// All rows, in deterministic order.
    pub rows: Vec<CheckRow>,
}

impl ExperimentReport {
    /// Starts an empty report.
    pub fn new(config_hash: impl Into<String>, seed: u64) -> ExperimentReport {
        ExperimentReport {
            config_hash: config_hash.into(),
            seed,
            rows: Vec::new(),
        }
    }

    /// Appends a row.
    pub fn push(&mut self, row: CheckRow) {
        self.rows.push(row);
    }

    /// Appends all rows of another report.
    pub fn extend(&mut self, other: ExperimentReport) {
        self.rows.extend(other.rows);
    }

    /// Number of failing rows.
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    /// True when all rows pass.
    pub fn all_pass(&self) -> bool {
        self.failures() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rules() {
        assert!(CheckRow::absolute("s", "a", 1.0, 1.005, Provenance::Exact, 0.01, 0.0).pass);
        assert!(!CheckRow::absolute("s", "a", 1.0, 1.05, Provenance::Exact, 0.01, 0.0).pass);
        assert!(CheckRow::relative("s", "r", 100.0, 100.5, Provenance::Oracle, 0.01, 0.0).pass);
        assert!(CheckRow::lower_bound("s", "l", 0.2499, 0.25, Provenance::ClosedForm, 1e-3, 0.0).pass);
        assert!(!CheckRow::lower_bound("s", "l", 0.2, 0.25, Provenance::ClosedForm, 1e-3, 0.0).pass);
        assert!(CheckRow::upper_bound("s", "u", 0.25, 6.0, Provenance::Exact, 0.0, 0.0).pass);
    }

    #[test]
    fn report_counts_failures() {
        let mut rep = ExperimentReport::new("abc", 7);
        rep.push(CheckRow::absolute("s", "x", 1.0, 1.0, Provenance::Exact, 0.1, 0.0));
        rep.push(CheckRow::absolute("s", "y", 2.0, 1.0, Provenance::Exact, 0.1, 0.0));
        assert_eq!(rep.failures(), 1);
        assert!(!rep.all_pass());
    }

    #[test]
    fn provenance_labels() {
        assert_eq!(Provenance::Exact.to_string(), "exact");
        assert_eq!(Provenance::ClosedForm.to_string(), "closed-form");
        assert_eq!(Provenance::Oracle.to_string(), "oracle");
    }
}
