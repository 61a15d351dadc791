//! JSON file formats for set functions and joint distributions.
//!
//! Function file:
//!
//! ```json
//! { "ground": ["1", "2", "3"], "family": "coverage",
//!   "concepts": ["c1", "c2", "c3"],
//!   "gamma": { "1": ["c1", "c2"], "2": ["c1"], "3": ["c3"] },
//!   "weights": { "c1": 1, "c2": "1/2", "c3": "0.25" } }
//! ```
//!
//! Other families use `weights` keyed by element (`modular`), `k`
//! (`truncated_cardinality`), a row-major `similarity` matrix
//! (`facility_location`), `values` keyed by comma-joined labels
//! (`tabulated`) or an embedded `distribution` (`entropy`).
//!
//! Distribution file:
//!
//! ```json
//! { "variables": ["X1", "X2"], "arities": [2, 2],
//!   "pmf": [ { "x": [0, 0], "p": "1/2" }, { "x": [1, 1], "p": "1/2" } ] }
//! ```
//!
//! Numbers may be JSON integers, decimals, or strings holding an integer,
//! decimal or fraction; all are read as exact rationals. Exact values are
//! written back as fraction strings.

use std::collections::HashMap;

use serde_json::{json, Map, Value as Json};

use crate::entropy::{make_entropy_function, JointDistribution};
use crate::error::{Error, Result};
use crate::function::{table_by_labels, CoverageMap, Family, SetFunction};
use crate::sets::{subsets_of, GroundSet};
use crate::value::{parse_rational, Value};

fn field_err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("field `{path}`: {msg}"))
}

fn parse_json(text: &str) -> Result<Json> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("malformed JSON: {e}")))
}

fn get<'a>(obj: &'a Map<String, Json>, key: &str) -> Result<&'a Json> {
    obj.get(key).ok_or_else(|| field_err(key, "missing"))
}

fn as_object<'a>(v: &'a Json, path: &str) -> Result<&'a Map<String, Json>> {
    v.as_object()
        .ok_or_else(|| field_err(path, "expected an object"))
}

fn as_array<'a>(v: &'a Json, path: &str) -> Result<&'a Vec<Json>> {
    v.as_array()
        .ok_or_else(|| field_err(path, "expected an array"))
}

fn string_list(v: &Json, path: &str) -> Result<Vec<String>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| field_err(&format!("{path}[{i}]"), "expected a string"))
        })
        .collect()
}

fn number(v: &Json, path: &str) -> Result<Value> {
    let text = match v {
        Json::Number(n) => n.to_string(),
        Json::String(s) => s.clone(),
        _ => return Err(field_err(path, "expected a number or numeric string")),
    };
    parse_rational(&text)
        .map(Value::Exact)
        .map_err(|e| field_err(path, e))
}

fn count(v: &Json, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| field_err(path, "expected a nonnegative integer"))
}

fn value_json(v: &Value) -> Json {
    serde_json::to_value(v).expect("values serialize")
}

pub fn parse_function(text: &str) -> Result<SetFunction> {
    function_from_json(&parse_json(text)?)
}

pub fn function_from_json(doc: &Json) -> Result<SetFunction> {
    let obj = as_object(doc, "<root>")?;
    let family = get(obj, "family")?
        .as_str()
        .ok_or_else(|| field_err("family", "expected a string"))?;
    if family == "entropy" {
        let dist = distribution_from_json(get(obj, "distribution")?)?;
        return make_entropy_function(dist);
    }
    let ground = GroundSet::new(string_list(get(obj, "ground")?, "ground")?)
        .map_err(|e| field_err("ground", e))?;
    match family {
        "coverage" => coverage_from_json(obj, ground),
        "modular" => {
            let weights = per_label(get(obj, "weights")?, &ground, "weights")?;
            SetFunction::modular(ground, weights)
        }
        "truncated_cardinality" => {
            let k = count(get(obj, "k")?, "k")?;
            SetFunction::truncated_cardinality(ground, k)
        }
        "facility_location" => {
            let rows = as_array(get(obj, "similarity")?, "similarity")?;
            let n = ground.len();
            let matrix: Vec<Vec<Value>> = if rows.iter().all(Json::is_array) {
                rows.iter()
                    .enumerate()
                    .map(|(i, row)| {
                        let path = format!("similarity[{i}]");
                        as_array(row, &path)?
                            .iter()
                            .enumerate()
                            .map(|(j, x)| similarity(x, &format!("{path}[{j}]")))
                            .collect()
                    })
                    .collect::<Result<_>>()?
            } else {
                if rows.len() != n * n {
                    return Err(field_err(
                        "similarity",
                        format!("flat matrix has {} entries, expected {}", rows.len(), n * n),
                    ));
                }
                let flat: Vec<Value> = rows
                    .iter()
                    .enumerate()
                    .map(|(i, x)| similarity(x, &format!("similarity[{i}]")))
                    .collect::<Result<_>>()?;
                flat.chunks(n.max(1)).map(<[Value]>::to_vec).collect()
            };
            SetFunction::facility_location(ground, matrix)
        }
        "tabulated" => {
            let values = as_object(get(obj, "values")?, "values")?;
            let mut by_mask = vec![None; 1usize << ground.len().min(crate::sets::ENUMERATION_CAP)];
            for (key, v) in values {
                let path = format!("values.{key}");
                let s = ground.parse_subset(key).map_err(|e| field_err(&path, e))?;
                by_mask[s.mask().expect("small ground") as usize] = Some(number(v, &path)?);
            }
            let mut table = Vec::with_capacity(by_mask.len());
            for (mask, v) in by_mask.into_iter().enumerate() {
                match v {
                    Some(v) => table.push(v),
                    None if mask == 0 => table.push(Value::ZERO),
                    None => {
                        let s = crate::sets::Subset::from_mask(ground.len(), mask as u64);
                        return Err(field_err(
                            "values",
                            format!("no value for {{{}}}", ground.join(&s)),
                        ));
                    }
                }
            }
            SetFunction::tabulated(ground, table)
        }
        other => Err(field_err("family", format!("unknown family `{other}`"))),
    }
}

fn similarity(v: &Json, path: &str) -> Result<Value> {
    match number(v, path) {
        Ok(x) => Ok(x),
        Err(e) => v.as_f64().map(Value::Float).ok_or(e),
    }
}

fn per_label(v: &Json, ground: &GroundSet, path: &str) -> Result<Vec<Value>> {
    match v {
        Json::Array(items) => {
            if items.len() != ground.len() {
                return Err(field_err(
                    path,
                    format!("{} entries for {} elements", items.len(), ground.len()),
                ));
            }
            items
                .iter()
                .enumerate()
                .map(|(i, x)| number(x, &format!("{path}[{i}]")))
                .collect()
        }
        Json::Object(map) => {
            let mut out = vec![Value::ZERO; ground.len()];
            for (label, x) in map {
                let p = format!("{path}.{label}");
                let i = ground.index_of(label).map_err(|e| field_err(&p, e))?;
                out[i] = number(x, &p)?;
            }
            Ok(out)
        }
        _ => Err(field_err(
            path,
            "expected an array or an object keyed by label",
        )),
    }
}

fn coverage_from_json(obj: &Map<String, Json>, ground: GroundSet) -> Result<SetFunction> {
    let gamma_obj = as_object(get(obj, "gamma")?, "gamma")?;
    let mut gamma: Vec<Vec<String>> = vec![Vec::new(); ground.len()];
    for (label, covered) in gamma_obj {
        let path = format!("gamma.{label}");
        let i = ground.index_of(label).map_err(|e| field_err(&path, e))?;
        gamma[i] = string_list(covered, &path)?;
    }
    let concepts = match obj.get("concepts") {
        Some(c) => string_list(c, "concepts")?,
        None => {
            let mut seen = Vec::new();
            for c in gamma.iter().flatten() {
                if !seen.contains(c) {
                    seen.push(c.clone());
                }
            }
            seen
        }
    };
    let concepts = GroundSet::new(concepts).map_err(|e| field_err("concepts", e))?;
    let weights = match obj.get("weights") {
        Some(w) => per_label(w, &concepts, "weights").map_err(|e| {
            Error::Format(e.to_string().replace("unknown element", "unknown concept"))
        })?,
        None => vec![Value::int(1); concepts.len()],
    };
    let map = CoverageMap::new(ground, concepts, &gamma, weights)?;
    Ok(SetFunction::coverage(map))
}

pub fn function_to_json(f: &SetFunction) -> Result<Json> {
    use crate::function::SetFn;
    let ground = f.ground();
    let labels = ground.labels();
    Ok(match f.family() {
        Family::Modular { weights } => json!({
            "ground": labels,
            "family": "modular",
            "weights": labels.iter().zip(weights).map(|(l, w)| (l.clone(), value_json(w))).collect::<Map<_, _>>(),
        }),
        Family::Coverage(map) => {
            let concepts = map.concepts();
            let gamma: Map<String, Json> = (0..ground.len())
                .map(|i| {
                    (
                        labels[i].clone(),
                        json!(concepts.member_labels(map.covers(i))),
                    )
                })
                .collect();
            let weights: Map<String, Json> = concepts
                .labels()
                .iter()
                .zip(map.weights())
                .map(|(c, w)| (c.clone(), value_json(w)))
                .collect();
            json!({
                "ground": labels,
                "family": "coverage",
                "concepts": concepts.labels(),
                "gamma": gamma,
                "weights": weights,
            })
        }
        Family::TruncatedCardinality { k } => json!({
            "ground": labels,
            "family": "truncated_cardinality",
            "k": k,
        }),
        Family::FacilityLocation { similarity } => json!({
            "ground": labels,
            "family": "facility_location",
            "similarity": similarity.iter().map(|row| row.iter().map(value_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
        Family::Entropy(dist) => json!({
            "family": "entropy",
            "distribution": distribution_to_json(dist),
        }),
        Family::Tabulated { .. } => {
            let table: HashMap<String, Value> = table_by_labels(f)?;
            let values: Map<String, Json> = subsets_of(ground, None)?
                .map(|s| {
                    let key = ground.join(&s);
                    let v = value_json(&table[&key]);
                    (key, v)
                })
                .collect();
            json!({
                "ground": labels,
                "family": "tabulated",
                "values": values,
            })
        }
    })
}

pub fn parse_distribution(text: &str) -> Result<JointDistribution> {
    distribution_from_json(&parse_json(text)?)
}

pub fn distribution_from_json(doc: &Json) -> Result<JointDistribution> {
    let obj = as_object(doc, "<root>")?;
    let variables = GroundSet::new(string_list(get(obj, "variables")?, "variables")?)
        .map_err(|e| field_err("variables", e))?;
    let arities = as_array(get(obj, "arities")?, "arities")?
        .iter()
        .enumerate()
        .map(|(i, a)| count(a, &format!("arities[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let pmf = as_array(get(obj, "pmf")?, "pmf")?
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            let path = format!("pmf[{i}]");
            let e = as_object(entry, &path)?;
            let x = as_array(
                get(e, "x").map_err(|_| field_err(&format!("{path}.x"), "missing"))?,
                &format!("{path}.x"),
            )?
            .iter()
            .enumerate()
            .map(|(k, v)| count(v, &format!("{path}.x[{k}]")))
            .collect::<Result<Vec<_>>>()?;
            let p_path = format!("{path}.p");
            let p = get(e, "p").map_err(|_| field_err(&p_path, "missing"))?;
            let p = number(p, &p_path)?
                .as_exact()
                .expect("numbers parse as exact");
            Ok((x, p))
        })
        .collect::<Result<Vec<_>>>()?;
    JointDistribution::new(variables, arities, pmf)
}

pub fn distribution_to_json(d: &JointDistribution) -> Json {
    json!({
        "variables": d.ground().labels(),
        "arities": d.arities(),
        "pmf": d.pmf().iter().map(|(x, p)| json!({ "x": x, "p": value_json(&Value::Exact(*p)) })).collect::<Vec<_>>(),
    })
}
