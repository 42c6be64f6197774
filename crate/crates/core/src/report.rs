//! JSON shapes shared by every command's output.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::checks::CheckOutcome;
use crate::series::{FactoredSeries, SparseSeries};

/// Top-level report. Contains nothing that varies between runs on the same
/// input and flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportDocument {
    pub command: String,
    pub input_digest: String,
    pub results: Value,
    pub checks: Vec<CheckOutcome>,
}

/// `{"lambda": {"<vertex>": count}}` over the nonzero entries.
pub fn witness_json(lambda: &[u64]) -> Value {
    let map: Map<String, Value> = lambda
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0)
        .map(|(i, &l)| ((i + 1).to_string(), json!(l)))
        .collect();
    json!({ "lambda": map })
}

/// `[{"v": [...], "e": k}, ...]`.
pub fn factored_json(f: &FactoredSeries) -> Value {
    serde_json::to_value(f.factors()).expect("factors serialize")
}

/// `[{"m": [...], "c": "<decimal>"}, ...]` in lexicographic order.
pub fn expanded_json(s: &SparseSeries) -> Value {
    Value::Array(s.terms().map(|(m, c)| json!({ "m": m, "c": c.to_string() })).collect())
}

/// Human-readable `(1 - t^v)^e` product.
pub fn factored_text(f: &FactoredSeries) -> String {
    if f.factors().is_empty() {
        return "1".into();
    }
    f.factors()
        .iter()
        .map(|x| {
            let v: Vec<String> = x.v.iter().map(u64::to_string).collect();
            format!("(1 - t^({}))^{}", v.join(","), x.e)
        })
        .collect::<Vec<_>>()
        .join(" * ")
}
