//! Interchange document: one JSON object per scheme.
//!
//! ```text
//! { "model": "2rr1s", "N": 2, "K": 3, "s": 1, "L": 2, "field_m": 1,
//!   "placement": [ [[1,1,0,0], ...], ... ],
//!   "delivery": { "0,1,2": { "1": [[1,0], ...] }, ... } }
//! ```
//!
//! Rows are dense vectors of field elements; sender keys are 1-based user
//! indices; demand keys use 0 for non-requesting users.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{DeliveryRule, DemandVector, LinearScheme, ModelKind, SchemeShape};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldMatrix, FieldSpec};

fn matrix_to_json(m: &FieldMatrix) -> Value {
    Value::Array(m.to_dense_rows().into_iter().map(|r| json!(r)).collect())
}

fn get_count(doc: &Map<String, Value>, key: &str) -> Result<usize> {
    let v = doc
        .get(key)
        .ok_or_else(|| Error::format(key, "missing"))?;
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::format(key, format!("expected a nonnegative integer, got {v}")))
}

fn matrix_from_json(v: &Value, cols: usize, field: &FieldSpec, what: &str) -> Result<FieldMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::format(what, "expected an array of rows"))?;
    let mut m = FieldMatrix::empty(cols);
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| Error::format(what, format!("row {i} is not an array")))?;
        if entries.len() != cols {
            return Err(Error::format(
                what,
                format!("row {i} has {} entries, expected {cols}", entries.len()),
            ));
        }
        let mut dense: Vec<Elem> = Vec::with_capacity(cols);
        for e in entries {
            match e.as_u64() {
                Some(x) if field.contains(x) => dense.push(x as Elem),
                _ => {
                    return Err(Error::format(
                        what,
                        format!("row {i}: {e} is not an element of GF(2^{})", field.m()),
                    ))
                }
            }
        }
        m.push_dense(&dense);
    }
    Ok(m)
}

impl LinearScheme {
    pub fn to_json(&self) -> Value {
        let shape = self.shape();
        let delivery: Map<String, Value> = self
            .delivery()
            .iter()
            .map(|(d, per_sender)| {
                let senders: Map<String, Value> = per_sender
                    .iter()
                    .map(|(k, e)| ((k + 1).to_string(), matrix_to_json(e)))
                    .collect();
                (d.key(), Value::Object(senders))
            })
            .collect();
        json!({
            "model": shape.model.name(),
            "N": shape.n_files,
            "K": shape.n_users,
            "s": shape.senders,
            "L": shape.subpacketization,
            "field_m": self.field().m(),
            "placement": self.placements().iter().map(matrix_to_json).collect::<Vec<_>>(),
            "delivery": delivery,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("scheme serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_json(&v)
    }

    /// Parses and validates an interchange document. Errors name the
    /// offending field.
    pub fn from_json(v: &Value) -> Result<Self> {
        let doc = v
            .as_object()
            .ok_or_else(|| Error::format("(root)", "expected a JSON object"))?;
        let model_name = doc
            .get("model")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::format("model", "missing or not a string"))?;
        let model = ModelKind::from_name(model_name)
            .ok_or_else(|| Error::format("model", format!("unknown model `{model_name}`")))?;
        let shape = SchemeShape {
            model,
            n_files: get_count(doc, "N")?,
            n_users: get_count(doc, "K")?,
            senders: get_count(doc, "s")?,
            subpacketization: get_count(doc, "L")?,
        };
        let m = get_count(doc, "field_m")?;
        let field = u32::try_from(m)
            .map_err(|_| Error::format("field_m", "out of range"))
            .and_then(FieldSpec::new)
            .map_err(|e| Error::format("field_m", e.to_string()))?;

        let placement_json = doc
            .get("placement")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::format("placement", "missing or not an array"))?;
        if placement_json.len() != shape.n_users {
            return Err(Error::format(
                "placement",
                format!("{} matrices for K = {}", placement_json.len(), shape.n_users),
            ));
        }
        let placement = placement_json
            .iter()
            .enumerate()
            .map(|(k, p)| {
                matrix_from_json(p, shape.symbols(), &field, &format!("placement[{}]", k))
            })
            .collect::<Result<Vec<_>>>()?;

        let delivery_json = doc
            .get("delivery")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::format("delivery", "missing or not an object"))?;
        let mut delivery = DeliveryRule::new();
        for (key, per_sender) in delivery_json {
            let d = DemandVector::parse_key(key)?;
            let per_sender = per_sender
                .as_object()
                .ok_or_else(|| Error::format("delivery", format!("entry `{key}` is not an object")))?;
            let mut rule = BTreeMap::new();
            for (sender, rows) in per_sender {
                let k = match sender.parse::<usize>() {
                    Ok(k) if k >= 1 && k <= shape.n_users => k - 1,
                    _ => {
                        return Err(Error::format(
                            "delivery",
                            format!("demand `{key}`: bad sender index `{sender}`"),
                        ))
                    }
                };
                let what = format!("delivery[{key}][{sender}]");
                rule.insert(k, matrix_from_json(rows, placement[k].n_rows(), &field, &what)?);
            }
            if delivery.insert(d, rule).is_some() {
                return Err(Error::format("delivery", format!("duplicate demand `{key}`")));
            }
        }
        LinearScheme::new(shape, field, placement, delivery)
    }
}
