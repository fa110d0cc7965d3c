//! Structural validation of the JSON report.

use serde_json::Value;

const CHECK_STRINGS: [&str; 4] = ["name", "paper_ref", "expected", "computed"];
const CONFIG_FIELDS: [&str; 4] = ["degree_bound", "seed", "sweep", "specializations"];

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a serde_json::Map<String, Value>, String> {
    v.as_object().ok_or_else(|| format!("{what} is not an object"))
}

fn exact_keys(map: &serde_json::Map<String, Value>, keys: &[&str], what: &str) -> Result<(), String> {
    for k in keys {
        if !map.contains_key(*k) {
            return Err(format!("{what} lacks `{k}`"));
        }
    }
    if let Some(extra) = map.keys().find(|k| !keys.contains(&k.as_str())) {
        return Err(format!("{what} has unexpected `{extra}`"));
    }
    Ok(())
}

/// Checks field names, types and the verdict vocabulary, and that `overall`
/// is `fail` exactly when some check fails.
pub fn validate_report(v: &Value) -> Result<(), String> {
    let top = object(v, "report")?;
    exact_keys(top, &["checks", "overall", "config"], "report")?;

    let config = object(&top["config"], "config")?;
    exact_keys(config, &CONFIG_FIELDS, "config")?;
    for k in CONFIG_FIELDS {
        if !config[k].is_u64() {
            return Err(format!("config `{k}` is not a nonnegative integer"));
        }
    }

    let checks = top["checks"].as_array().ok_or("`checks` is not an array")?;
    if checks.is_empty() {
        return Err("no checks".into());
    }
    let mut any_fail = false;
    for (i, c) in checks.iter().enumerate() {
        let what = format!("check {i}");
        let map = object(c, &what)?;
        let mut keys = CHECK_STRINGS.to_vec();
        keys.extend(["status", "degree_bound", "elapsed_ms"]);
        exact_keys(map, &keys, &what)?;
        for k in CHECK_STRINGS {
            if !map[k].is_string() {
                return Err(format!("{what} `{k}` is not a string"));
            }
        }
        match map["status"].as_str() {
            Some("pass" | "skipped") => {}
            Some("fail") => any_fail = true,
            _ => return Err(format!("{what} has an invalid status")),
        }
        if map["degree_bound"] != config["degree_bound"] {
            return Err(format!("{what} ran at a different degree bound"));
        }
        if !map["elapsed_ms"].is_u64() {
            return Err(format!("{what} `elapsed_ms` is not a nonnegative integer"));
        }
    }
    let expected = if any_fail { "fail" } else { "pass" };
    match top["overall"].as_str() {
        Some(o) if o == expected => Ok(()),
        Some(o) => Err(format!("overall is `{o}` but the checks say `{expected}`")),
        None => Err("`overall` is not a string".into()),
    }
}
