use std::fmt::Write as _;

/// What counts as "bounded" for a finite sweep: the estimated constant may
/// grow by at most `max_growth` per refinement step, and series whose
/// entries all sit below `zero_tol` pass as exact zeros.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stability {
    pub max_growth: f64,
    pub zero_tol: f64,
}

impl Default for Stability {
    fn default() -> Self {
        Self {
            max_growth: 0.25,
            zero_tol: 1e-9,
        }
    }
}

impl Stability {
    pub fn judge(&self, series: &[f64]) -> bool {
        if series.len() < 2 || series.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return false;
        }
        if series.iter().all(|&c| c <= self.zero_tol) {
            return true;
        }
        series.windows(2).all(|w| w[1] <= w[0] * (1.0 + self.max_growth) || w[1] <= self.zero_tol)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    pub check: String,
    /// Effective parameters in the order they were set.
    pub params: Vec<(String, String)>,
    pub samples: usize,
    /// Largest sampled ratio: the empirical constant.
    pub constant: f64,
    /// Point (and any companion data) attaining `constant`.
    pub witness: Vec<f64>,
    /// `constant` at successive refinements.
    pub series: Vec<f64>,
    pub pass: bool,
    /// Extra diagnostics such as skipped scales or fitted slopes.
    pub notes: Vec<(String, String)>,
}

impl VerificationReport {
    pub fn new(check: &str) -> Self {
        Self {
            check: check.to_string(),
            ..Self::default()
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    /// Sets `series`, `constant` (the last entry) and `pass`.
    pub fn finish(&mut self, series: Vec<f64>, rule: &Stability) {
        self.constant = series.last().copied().unwrap_or(0.0);
        self.pass = rule.judge(&series);
        self.series = series;
    }

    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        let _ = writeln!(s, "check={}", self.check);
        for (k, v) in &self.params {
            let _ = writeln!(s, "param.{k}={v}");
        }
        let _ = writeln!(s, "samples={}", self.samples);
        let _ = writeln!(s, "C={}", self.constant);
        let _ = writeln!(s, "series={}", list(&self.series));
        let _ = writeln!(s, "witness={}", list(&self.witness));
        for (k, v) in &self.notes {
            let _ = writeln!(s, "note.{k}={v}");
        }
        let _ = writeln!(s, "pass={}", self.pass);
        s
    }
}

/// Reports separated by blank lines.
pub fn reports_to_text(reports: &[VerificationReport]) -> String {
    reports.iter().map(VerificationReport::to_text).collect::<Vec<_>>().join("\n")
}
