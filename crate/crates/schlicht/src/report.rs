//! Verification report types and their byte-stable renderings.
//!
//! Reports carry no timestamps or environment data: the same configuration
//! and library version produce identical bytes, which makes diffing runs
//! and caching results trivial.  The configuration itself is pinned by a
//! SHA-256 digest of its canonical JSON form.

use crate::num::Mode;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Outcome of a single (map, functional) grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Inequality holds with slack beyond tolerance.
    Pass,
    /// Inequality holds and the margin vanishes to tolerance: an equality
    /// witness.
    Sharp,
    /// Inequality fails and the failure was confirmed (exactly, or beyond
    /// any tail allowance).
    Violation,
    /// The approximate margin is negative but the point cannot be replayed
    /// exactly, so the failure stays unconfirmed.
    Unconfirmed,
    /// Not evaluated; the note says why.
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Sharp => "sharp",
            Status::Violation => "violation",
            Status::Unconfirmed => "unconfirmed",
            Status::Skipped => "skipped",
        }
    }
}

/// One evaluated grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub family: String,
    pub functional: String,
    pub status: Status,
    /// |value| of the functional at the point (0 when skipped).
    pub value_abs: f64,
    pub bound: f64,
    /// bound - |value|; negative means the inequality would fail.
    pub margin: f64,
    /// Truncation allowance folded into the pass criterion.
    pub tail: f64,
    /// Reason for skip/unconfirmed, or confirmation detail.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
    /// Exact real/imaginary strings of the value when run exactly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<(String, String)>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub sharp: usize,
    pub violations: usize,
    pub unconfirmed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// SHA-256 hex digest of the canonical configuration JSON.
    pub config_digest: String,
    pub mode: Mode,
    pub order: i64,
    pub summary: Summary,
    pub records: Vec<PointRecord>,
}

impl VerificationReport {
    /// Tally the records into the summary (sharp points also count as
    /// passed).
    pub fn summarize(records: &[PointRecord]) -> Summary {
        let mut s = Summary { total: records.len(), ..Summary::default() };
        for r in records {
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Sharp => {
                    s.passed += 1;
                    s.sharp += 1;
                }
                Status::Violation => s.violations += 1,
                Status::Unconfirmed => s.unconfirmed += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }

    /// True when nothing failed and nothing was left unconfirmed.
    pub fn clean(&self) -> bool {
        self.summary.violations == 0 && self.summary.unconfirmed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> crate::error::Result<VerificationReport> {
        serde_json::from_str(s)
            .map_err(|e| crate::error::Error::Spec(format!("report parse: {e}")))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,functional,status,value_abs,bound,margin,tail,note\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{:?},{:?},{:?},{:?},{}\n",
                csv_field(&r.family),
                csv_field(&r.functional),
                r.status.as_str(),
                r.value_abs,
                r.bound,
                r.margin,
                r.tail,
                csv_field(&r.note),
            ));
        }
        out
    }

    /// Terminal-facing digest of the run.
    pub fn render_text(&self) -> String {
        let s = &self.summary;
        let mut out = format!(
            "mode {} order {} config {}\n{} points: {} passed ({} sharp), {} violations, {} unconfirmed, {} skipped\n",
            self.mode, self.order, &self.config_digest[..12.min(self.config_digest.len())],
            s.total, s.passed, s.sharp, s.violations, s.unconfirmed, s.skipped
        );
        for r in &self.records {
            if matches!(r.status, Status::Violation | Status::Unconfirmed) {
                out.push_str(&format!(
                    "  {} {} on {}: margin {:.3e} {}\n",
                    r.status.as_str(),
                    r.functional,
                    r.family,
                    r.margin,
                    r.note
                ));
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Canonical hex digest of any serializable configuration.
pub fn config_digest<T: Serialize>(cfg: &T) -> String {
    let canonical = serde_json::to_string(cfg).expect("config serializes");
    let mut h = Sha256::new();
    h.update(canonical.as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let records = vec![
            PointRecord {
                family: "koebe[0turn]".into(),
                functional: "zalcman[n=2]".into(),
                status: Status::Sharp,
                value_abs: 1.0,
                bound: 1.0,
                margin: 0.0,
                tail: 0.0,
                note: String::new(),
                exact: Some(("1".into(), "0".into())),
            },
            PointRecord {
                family: "root[m=2,c=1/2@0turn]".into(),
                functional: "bieberbach[n=3]".into(),
                status: Status::Pass,
                value_abs: 1.0,
                bound: 3.0,
                margin: 2.0,
                tail: 0.0,
                note: String::new(),
                exact: None,
            },
        ];
        VerificationReport {
            config_digest: config_digest(&42u32),
            mode: Mode::Exact,
            order: 64,
            summary: VerificationReport::summarize(&records),
            records,
        }
    }

    #[test]
    fn json_round_trips_and_is_stable() {
        let r = sample();
        let a = r.to_json();
        let back = VerificationReport::from_json(&a).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), a);
        assert!(!a.contains("time"), "reports must not embed timestamps");
    }

    #[test]
    fn summary_counts_add_up() {
        let r = sample();
        assert_eq!(r.summary.total, 2);
        assert_eq!(r.summary.passed, 2);
        assert_eq!(r.summary.sharp, 1);
        assert!(r.clean());
    }

    #[test]
    fn csv_has_a_row_per_record_and_escapes_commas() {
        let mut r = sample();
        r.records[0].note = "margin, exact".into();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].contains("\"margin, exact\""));
        assert!(lines[0].starts_with("family,functional,status"));
    }

    #[test]
    fn digest_tracks_content() {
        assert_eq!(config_digest(&1u32), config_digest(&1u32));
        assert_ne!(config_digest(&1u32), config_digest(&2u32));
        assert_eq!(config_digest(&1u32).len(), 64);
    }
}
