//! Browser bindings for the demo page in `www/`. Each export takes strings
//! and returns a JSON string; the plain functions underneath are what the
//! native tests exercise.

use serde_json::{json, Value};
use shuffle_compat::perm::Permutation;
use shuffle_compat::reduce::reduce_pair;
use shuffle_compat::shuffle::iter_shuffles;
use shuffle_compat::stats::{Distribution, Statistic};
use wasm_bindgen::prelude::*;

/// Largest m+n the page will enumerate.
pub const MAX_TOTAL: usize = 10;

fn parse_perm(s: &str) -> Result<Permutation, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_stat(s: &str) -> Result<Statistic, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_pair(pi: &str, sigma: &str) -> Result<(Permutation, Permutation), String> {
    let (pi, sigma) = (parse_perm(pi)?, parse_perm(sigma)?);
    pi.ensure_disjoint(&sigma).map_err(|e| e.to_string())?;
    if pi.len() + sigma.len() > MAX_TOTAL {
        return Err(format!("the demo enumerates at most m+n = {MAX_TOTAL}"));
    }
    Ok((pi, sigma))
}

/// Every named statistic evaluated on one permutation.
pub fn statistic_table_json(perm: &str) -> Result<Value, String> {
    let p = parse_perm(perm)?;
    let rows: Vec<Value> = Statistic::all_named()
        .iter()
        .map(|s| json!({"name": s.to_string(), "value": s.evaluate(&p).to_string()}))
        .collect();
    Ok(json!({"permutation": p, "rows": rows}))
}

/// Distribution of `stat` over the shuffle set, with the shuffles themselves.
pub fn distribution_json(stat: &str, pi: &str, sigma: &str) -> Result<Value, String> {
    let stat = parse_stat(stat)?;
    let (pi, sigma) = parse_pair(pi, sigma)?;
    let shuffles: Vec<Permutation> = iter_shuffles(&pi, &sigma)
        .map_err(|e| e.to_string())?
        .collect();
    let dist: Distribution = shuffles.iter().map(|t| stat.evaluate(t)).collect();
    let bars: Vec<Value> = dist
        .iter()
        .map(|(v, c)| json!({"value": v.to_string(), "count": c}))
        .collect();
    let listed: Vec<Value> = shuffles
        .iter()
        .take(200)
        .map(|t| json!({"shuffle": t, "value": stat.evaluate(t).to_string()}))
        .collect();
    Ok(json!({
        "statistic": stat,
        "total": shuffles.len(),
        "bars": bars,
        "text": dist.to_string(),
        "shuffles": listed,
    }))
}

/// Normalization and canonicalization trace for a pair.
pub fn reduce_json(stat: &str, pi: &str, sigma: &str) -> Result<Value, String> {
    let stat = parse_stat(stat)?;
    let (pi, sigma) = parse_pair(pi, sigma)?;
    let red = reduce_pair(&stat, &pi, &sigma).map_err(|e| e.to_string())?;
    let steps: Vec<Value> = red
        .normalization
        .steps()
        .iter()
        .chain(red.pipeline.steps())
        .map(|s| {
            json!({
                "kind": s.kind.to_string(),
                "source": s.source.to_string(),
                "target": s.target.to_string(),
                "measure_after": s.measure_after,
            })
        })
        .collect();
    Ok(json!({
        "statistic": stat,
        "normalization_steps": red.normalization.len(),
        "steps": steps,
        "canonical": red.target().to_string(),
        "text": format!("{}", red.pipeline),
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn statistic_table(perm: &str) -> Result<String, JsValue> {
    to_js(statistic_table_json(perm))
}

#[wasm_bindgen]
pub fn distribution(stat: &str, pi: &str, sigma: &str) -> Result<String, JsValue> {
    to_js(distribution_json(stat, pi, sigma))
}

#[wasm_bindgen]
pub fn reduce(stat: &str, pi: &str, sigma: &str) -> Result<String, JsValue> {
    to_js(reduce_json(stat, pi, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_has_every_statistic() {
        let v = statistic_table_json("6,8,5,9,3,4").unwrap();
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), Statistic::all_named().len());
        let udr = rows.iter().find(|r| r["name"] == "udr").unwrap();
        assert_eq!(udr["value"], "5");
    }

    #[test]
    fn distribution_bars() {
        let v = distribution_json("Pk", "2,4,1", "7,3").unwrap();
        assert_eq!(v["total"], 10);
        assert_eq!(v["text"], "{[2]:2, [3]:4, [4]:2, [2,4]:2}");
        assert_eq!(v["bars"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn reduce_trace() {
        let v = reduce_json("pk", "2,1,4,3", "5").unwrap();
        assert_eq!(v["canonical"], "(3,4,1,2 | 5)");
        assert_eq!(v["steps"][0]["kind"], "theta_pk j=3");
    }

    #[test]
    fn errors_are_messages() {
        assert!(distribution_json("pk", "1,2", "2,3")
            .unwrap_err()
            .contains("2 appears in both"));
        assert!(reduce_json("inv", "1", "2").is_err());
        assert!(statistic_table_json("1,x").is_err());
        assert!(distribution_json("maj", "1,2,3,4,5,6", "7,8,9,10,11").is_err());
    }
}
