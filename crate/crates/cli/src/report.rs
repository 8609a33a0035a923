//! Query reports: a deterministic text form and a one-to-one JSON mirror.
//! Rationals travel as `num/den` strings; no timing or other run-varying
//! data is part of the canonical output.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct DotArtifact {
    pub kind: &'static str,
    #[serde(skip)]
    pub source: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct QueryReport {
    pub index: usize,
    pub line: usize,
    pub query: String,
    pub verdict: String,
    pub expect: Option<String>,
    /// False only when a stated expectation was missed.
    pub ok: bool,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dot: Option<DotArtifact>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub queries: usize,
    pub expectations: usize,
    pub expectations_met: usize,
    pub expectations_failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: String,
    pub backend: String,
    pub queries: Vec<QueryReport>,
    pub summary: Summary,
}

impl Report {
    pub fn new(scenario: String, backend: String, queries: Vec<QueryReport>) -> Report {
        let expectations = queries.iter().filter(|q| q.expect.is_some()).count();
        let expectations_failed = queries.iter().filter(|q| !q.ok).count();
        let summary = Summary {
            queries: queries.len(),
            expectations,
            expectations_met: expectations - expectations_failed,
            expectations_failed,
        };
        Report {
            scenario,
            backend,
            queries,
            summary,
        }
    }

    pub fn all_expectations_met(&self) -> bool {
        self.summary.expectations_failed == 0
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("scenario: {}\n", self.scenario));
        out.push_str(&format!("backend: {}\n", self.backend));
        for q in &self.queries {
            let expect = match &q.expect {
                Some(e) if q.ok => format!(" [expect {e}: ok]"),
                Some(e) => format!(" [expect {e}: FAILED]"),
                None => String::new(),
            };
            out.push_str(&format!(
                "query {} (line {}): {} -> {}{}\n",
                q.index, q.line, q.query, q.verdict, expect
            ));
            for w in &q.witnesses {
                out.push_str(&format!("  witness: {w}\n"));
            }
            for n in &q.notes {
                out.push_str(&format!("  {n}\n"));
            }
            if let Some(dot) = &q.dot {
                out.push_str(&format!("  dot: {} diagram available\n", dot.kind));
            }
        }
        out.push_str(&format!(
            "summary: {} queries, {} expectations, {} met, {} failed\n",
            self.summary.queries,
            self.summary.expectations,
            self.summary.expectations_met,
            self.summary.expectations_failed
        ));
        out
    }

    pub fn render_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        // Surface whether a diagram exists without embedding the source.
        if let Some(queries) = value.get_mut("queries").and_then(|v| v.as_array_mut()) {
            for q in queries {
                if let Some(dot) = q.get_mut("dot") {
                    if let Some(kind) = dot.get("kind").cloned() {
                        *dot = serde_json::json!({ "kind": kind });
                    }
                }
            }
        }
        serde_json::to_string_pretty(&value).expect("report serializes")
    }
}
