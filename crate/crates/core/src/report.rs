//! Serializable report models. Every CLI output is one of these structs
//! rendered either as JSON or as text derived from the same JSON value,
//! so the two formats can never drift apart.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;
use crate::grassmann::{CliqueCensus, CliqueClass, IndexReport, StarPropositionReport, TopBoundsReport};
use crate::recovery::{LemmaFReport, LemmaPairReport};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceJson {
    pub n: usize,
    pub k: usize,
    pub q: u64,
}

impl InstanceJson {
    pub fn new(n: usize, k: usize, q: u64) -> InstanceJson {
        InstanceJson { n, k, q }
    }
}

/// One named pass/fail line inside a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> CheckLine {
        CheckLine {
            name: name.into(),
            ok,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub gamma_vertices: usize,
    pub gamma_edges: usize,
    pub delta_vertices: usize,
    pub delta_edges: usize,
    pub stars: usize,
    pub tops: usize,
    pub special_sets: usize,
    pub degenerate_k_subspaces: usize,
}

/// The outcome of a recovery run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictReport {
    pub instance: InstanceJson,
    pub route: String,
    pub mode: String,
    pub exploratory: bool,
    /// False when the run only gathers diagnostics (q <= n-k).
    pub asserted: bool,
    pub counts: VerdictCounts,
    pub isomorphic: Option<bool>,
    pub checks: Vec<CheckLine>,
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl VerdictReport {
    pub fn all_ok(&self) -> bool {
        self.violations.is_empty()
            && self.checks.iter().all(|c| c.ok)
            && self.isomorphic != Some(false)
    }
}

/// Persistence format for graphs: payload keys plus sorted edges.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<(u32, u32)>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> GraphJson {
        GraphJson {
            vertices: g.keys().to_vec(),
            edges: g.edges(),
        }
    }

    pub fn to_graph(&self, name: &str) -> Result<Graph> {
        Graph::new(name, self.vertices.clone(), &self.edges)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationJson {
    pub n: usize,
    pub q: u64,
    pub d: usize,
    pub count: usize,
    pub bases: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusEntryJson {
    pub kind: String,
    pub defining: String,
    pub size: usize,
    pub maximal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub removed_sections: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusJson {
    pub instance: InstanceJson,
    pub total: usize,
    pub maximal_stars: usize,
    pub non_maximal_stars: usize,
    pub tops: usize,
    pub labelings_agree: bool,
    pub entries: Vec<CensusEntryJson>,
}

impl CensusJson {
    pub fn from_census(instance: InstanceJson, census: &CliqueCensus) -> CensusJson {
        let entries = census
            .entries
            .iter()
            .map(|e| CensusEntryJson {
                kind: match e.geometric {
                    CliqueClass::MaximalStar => "maximal-star".into(),
                    CliqueClass::NonMaximalStar => "non-maximal-star".into(),
                    CliqueClass::Top => "top".into(),
                },
                defining: e.defining.text(),
                size: e.size,
                // every census entry is a maximal clique of the subgraph;
                // this flag marks maximality in the full graph too
                maximal: e.geometric != CliqueClass::NonMaximalStar,
                l: e.top_deficiency,
                removed_sections: e.removed_sections.iter().map(|s| s.text()).collect(),
            })
            .collect();
        CensusJson {
            instance,
            total: census.total(),
            maximal_stars: census.maximal_stars,
            non_maximal_stars: census.non_maximal_stars,
            tops: census.tops,
            labelings_agree: true,
            entries,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaPairJson {
    pub lemma: String,
    pub pairs: u64,
    pub agree: u64,
    pub holds: bool,
    pub forward_failures: usize,
    pub backward_failures: usize,
    /// At most the first few failing pairs, as witnesses.
    pub examples: Vec<String>,
}

impl LemmaPairJson {
    pub fn from_report(r: &LemmaPairReport) -> LemmaPairJson {
        let mut examples: Vec<String> = r
            .forward_failures
            .iter()
            .chain(r.backward_failures.iter())
            .take(10)
            .cloned()
            .collect();
        examples.sort();
        LemmaPairJson {
            lemma: r.lemma.clone(),
            pairs: r.pairs,
            agree: r.agree,
            holds: r.holds(),
            forward_failures: r.forward_failures.len(),
            backward_failures: r.backward_failures.len(),
            examples,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaFJson {
    pub checked: u64,
    pub holds: bool,
    pub failures: usize,
    pub examples: Vec<String>,
}

impl LemmaFJson {
    pub fn from_report(r: &LemmaFReport) -> LemmaFJson {
        LemmaFJson {
            checked: r.checked,
            holds: r.holds(),
            failures: r.failures.len(),
            examples: r.failures.iter().take(10).cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StarPropJson {
    pub stars_total: usize,
    pub maximal_count: usize,
    pub remark_mode: bool,
    pub ok: bool,
    pub violations: Vec<String>,
}

impl StarPropJson {
    pub fn from_report(r: &StarPropositionReport) -> StarPropJson {
        StarPropJson {
            stars_total: r.stars_total,
            maximal_count: r.maximal_count,
            remark_mode: r.remark_mode,
            ok: r.ok(),
            violations: r.violations.iter().take(10).cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TopBoundsJson {
    pub nondegenerate_tops: usize,
    pub size_lo: usize,
    pub size_hi: usize,
    pub criterion_holds: bool,
    pub all_tops_maximal: bool,
    pub bounds_ok: bool,
    pub violations: Vec<String>,
}

impl TopBoundsJson {
    pub fn from_report(r: &TopBoundsReport) -> TopBoundsJson {
        TopBoundsJson {
            nondegenerate_tops: r.nondegenerate_tops,
            size_lo: r.size_lo,
            size_hi: r.size_hi,
            criterion_holds: r.criterion_holds,
            all_tops_maximal: r.all_tops_maximal,
            bounds_ok: r.bounds_ok,
            violations: r.violations.iter().take(10).cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexJson {
    pub lambda: usize,
    pub lines_total: usize,
    pub lines_inside_w: usize,
    pub witness_star: Option<String>,
    pub witness_top: Option<String>,
}

impl IndexJson {
    pub fn from_report(r: &IndexReport) -> IndexJson {
        IndexJson {
            lambda: r.lambda,
            lines_total: r.lines_total,
            lines_inside_w: r.lines_inside_w,
            witness_star: r.witness.as_ref().map(|l| l.star_subspace.text()),
            witness_top: r.witness.as_ref().map(|l| l.top_subspace.text()),
        }
    }
}

/// Renders any JSON value as indented `key: value` text. Keys come out in
/// serde_json's deterministic (sorted) map order.
pub fn render_text(value: &serde_json::Value) -> String {
    let mut out = String::new();
    render_into(value, 0, &mut out);
    out
}

fn render_into(value: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) | Value::Array(_) if !is_short(v) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_into(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(v))),
                }
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                match v {
                    Value::Object(_) | Value::Array(_) if !is_short(v) => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        render_into(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar(v))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(value))),
    }
}

fn is_short(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Array(items) => {
            items.len() <= 8 && items.iter().all(|i| !i.is_object() && !i.is_array())
        }
        serde_json::Value::Object(_) => false,
        _ => true,
    }
}

fn scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(scalar).collect();
            format!("[{}]", inner.join(", "))
        }
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_is_deterministic() {
        let v = serde_json::json!({
            "b": [1, 2, 3],
            "a": {"x": true, "y": "s"},
            "c": "done",
        });
        let t1 = render_text(&v);
        let t2 = render_text(&v);
        assert_eq!(t1, t2);
        assert!(t1.contains("x: true"));
        assert!(t1.contains("b: [1, 2, 3]"));
    }
}
