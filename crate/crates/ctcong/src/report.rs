//! Structured result reports shared by the CLI commands: a JSON shape with
//! stable field names and deterministic ordering, plus a text rendering
//! that carries exactly the same result set.

use serde::Serialize;

use crate::discover::{CongruenceClaim, DiscoverOutcome};
use crate::oeis::OeisSource;

/// Tool version stamped into every report.
pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One verification row: the three computed values for a (spec, r, p, k)
/// cell and whether they agree. `engine` is only populated at k = 1 (the
/// reduction works modulo p); higher powers compare the exact oracle
/// against the lifted prediction. `predicted` is absent for sequences with
/// no case table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub spec: String,
    pub r: Vec<u64>,
    pub p: u64,
    pub k: u8,
    pub engine: Option<i64>,
    pub oracle: i64,
    pub predicted: Option<i64>,
    pub pass: bool,
}

/// OEIS annotation attached to one family-valued case of a claim: the
/// family's first twelve values (leading index 1..12) and the catalogue
/// ids they match.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OeisAnnotation {
    pub class: u64,
    pub family: String,
    pub terms: Vec<String>,
    pub ids: Vec<String>,
    pub source: OeisSource,
}

/// A discovery result: the claim (or the no-pattern report) plus optional
/// OEIS annotations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimRecord {
    pub spec: String,
    pub r: Vec<u64>,
    pub claim: DiscoverOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oeis: Option<Vec<OeisAnnotation>>,
    pub pass: bool,
}

/// A single computed residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueRecord {
    pub spec: String,
    pub r: Vec<u64>,
    pub p: u64,
    pub k: u8,
    pub value: i64,
}

/// One acceptance-suite criterion outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionRecord {
    pub index: usize,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ResultRecord {
    Row(VerifyRow),
    Claim(ClaimRecord),
    Value(ValueRecord),
    Criterion(CriterionRecord),
}

impl ResultRecord {
    pub fn passes(&self) -> bool {
        match self {
            ResultRecord::Row(row) => row.pass,
            ResultRecord::Claim(claim) => claim.pass,
            ResultRecord::Value(_) => true,
            ResultRecord::Criterion(c) => c.pass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub results: Vec<ResultRecord>,
    pub summary: Summary,
}

impl Report {
    /// Assemble a report; the summary is derived from the records.
    pub fn new(command: impl Into<String>, results: Vec<ResultRecord>) -> Report {
        let pass = results.iter().filter(|r| r.passes()).count();
        let fail = results.len() - pass;
        Report {
            version: REPORT_VERSION.to_owned(),
            command: command.into(),
            results,
            summary: Summary { pass, fail },
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }
}

fn fmt_r(r: &[u64]) -> String {
    r.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn fmt_opt(v: Option<i64>) -> String {
    v.map_or_else(|| "-".to_owned(), |x| x.to_string())
}

fn render_claim(out: &mut String, rec: &ClaimRecord) {
    match &rec.claim {
        DiscoverOutcome::Claim(CongruenceClaim {
            modulus_class,
            cases,
            super_level,
            counterexamples,
            evidence,
            ..
        }) => {
            let case_text = cases
                .iter()
                .map(|(class, value)| format!("{class}: {value}"))
                .collect::<Vec<_>>()
                .join(", ");
            out.push_str(&format!(
                "{} r={}: p mod {} -> {{{}}}, super_level {}, {} primes scanned\n",
                rec.spec,
                fmt_r(&rec.r),
                modulus_class,
                case_text,
                super_level,
                evidence.len()
            ));
            for cx in counterexamples {
                out.push_str(&format!(
                    "  no lift to p^{}: p={} expected {} observed {}\n",
                    cx.level, cx.p, cx.expected, cx.observed
                ));
            }
        }
        DiscoverOutcome::NoPatternFound(report) => {
            out.push_str(&format!(
                "{} r={}: no pattern found over {} primes\n",
                rec.spec,
                fmt_r(&rec.r),
                report.evidence.len()
            ));
        }
    }
    if let Some(annotations) = &rec.oeis {
        for a in annotations {
            let ids = if a.ids.is_empty() {
                "no match".to_owned()
            } else {
                a.ids.join(", ")
            };
            out.push_str(&format!(
                "  class {} ~ {}: terms [{}] -> {} ({:?})\n",
                a.class,
                a.family,
                a.terms.join(", "),
                ids,
                a.source
            ));
        }
    }
}

/// Text rendering with the same result set as the JSON form.
pub fn render_text(report: &Report) -> String {
    let mut out = format!("ctcong {} — {}\n", report.version, report.command);
    for record in &report.results {
        match record {
            ResultRecord::Row(row) => {
                out.push_str(&format!(
                    "{} r={} p={} k={}: engine {} oracle {} predicted {} … {}\n",
                    row.spec,
                    fmt_r(&row.r),
                    row.p,
                    row.k,
                    fmt_opt(row.engine),
                    row.oracle,
                    fmt_opt(row.predicted),
                    if row.pass { "PASS" } else { "FAIL" }
                ));
            }
            ResultRecord::Claim(rec) => render_claim(&mut out, rec),
            ResultRecord::Value(v) => {
                out.push_str(&format!(
                    "{} r={} p={} k={}: {}\n",
                    v.spec,
                    fmt_r(&v.r),
                    v.p,
                    v.k,
                    v.value
                ));
            }
            ResultRecord::Criterion(c) => {
                out.push_str(&format!(
                    "acceptance criterion {} ({}): {} — {}\n",
                    c.index,
                    c.name,
                    if c.pass { "PASS" } else { "FAIL" },
                    c.detail
                ));
            }
        }
    }
    out.push_str(&format!(
        "summary: {} passed, {} failed\n",
        report.summary.pass, report.summary.fail
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn sample_row(pass: bool) -> ResultRecord {
        ResultRecord::Row(VerifyRow {
            spec: "catalan".into(),
            r: vec![1],
            p: 5,
            k: 1,
            engine: Some(-2),
            oracle: -2,
            predicted: Some(-2),
            pass,
        })
    }

    #[test]
    fn json_schema_has_stable_field_names() {
        let report = Report::new("verify --seq catalan", vec![sample_row(true)]);
        let v: Value = serde_json::from_str(&report.to_json()).unwrap();
        assert!(v["version"].is_string());
        assert_eq!(v["command"], "verify --seq catalan");
        let row = &v["results"][0];
        for key in ["spec", "r", "p", "k", "engine", "oracle", "predicted", "pass"] {
            assert!(row.get(key).is_some(), "missing field {key}");
        }
        assert_eq!(row["engine"], -2);
        assert_eq!(v["summary"]["pass"], 1);
        assert_eq!(v["summary"]["fail"], 0);
    }

    #[test]
    fn summary_counts_failures() {
        let report = Report::new("verify", vec![sample_row(true), sample_row(false)]);
        assert_eq!(report.summary, Summary { pass: 1, fail: 1 });
        assert!(!report.all_pass());
    }

    #[test]
    fn patternless_rows_serialize_null_fields() {
        let row = ResultRecord::Row(VerifyRow {
            spec: "central_trinomial".into(),
            r: vec![1],
            p: 7,
            k: 1,
            engine: Some(-1),
            oracle: -1,
            predicted: None,
            pass: true,
        });
        let v: Value = serde_json::from_str(&Report::new("verify", vec![row]).to_json()).unwrap();
        assert!(v["results"][0]["predicted"].is_null());
    }

    #[test]
    fn serialization_is_deterministic() {
        let make = || {
            Report::new(
                "verify --seq motzkin",
                vec![sample_row(true), sample_row(false)],
            )
        };
        assert_eq!(make().to_json(), make().to_json());
    }

    #[test]
    fn text_and_json_carry_the_same_results() {
        let report = Report::new(
            "verify",
            vec![
                sample_row(true),
                ResultRecord::Value(ValueRecord {
                    spec: "custom".into(),
                    r: vec![1],
                    p: 5,
                    k: 2,
                    value: -2,
                }),
                ResultRecord::Criterion(CriterionRecord {
                    index: 11,
                    name: "oeis fixtures".into(),
                    pass: true,
                    detail: "3 lookups".into(),
                }),
            ],
        );
        let text = render_text(&report);
        let body: Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(body["results"].as_array().unwrap().len(), 3);
        // One line per record plus header and summary.
        assert_eq!(text.lines().count(), 5);
        assert!(text.contains("catalan r=1 p=5 k=1"));
        assert!(text.contains("custom r=1 p=5 k=2: -2"));
        assert!(text.contains("acceptance criterion 11 (oeis fixtures): PASS — 3 lookups"));
        assert!(text.ends_with("summary: 3 passed, 0 failed\n"));
    }
}
