//! Versioned JSON model bundles.
//!
//! A bundle is one JSON object:
//!
//! ```text
//! {"schema": "screenml-model", "version": 1,
//!  "kind": "svm",
//!  "tfidf": {"vocabulary": {"terms": [...], "document_frequency": [...], "n_train_docs": N},
//!            "idf": [...], "normalize": true},
//!  "parameters": {"type": "svm", "weights": [...], "c": 1.0, "class_weight": [w0, w1]}}
//! ```
//!
//! Baselines store `"tfidf": null` and `"parameters": {"type": "none"}`.
//! Floats are written in shortest round-trip form and parsed with correct
//! rounding, so a reloaded model reproduces decision values bit for bit.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use screenml_core::TrainedModel;

use crate::error::{Error, Result};

pub const MODEL_SCHEMA: &str = "screenml-model";
pub const MODEL_VERSION: u64 = 1;

#[derive(Serialize)]
struct BundleOut<'a> {
    schema: &'static str,
    version: u64,
    #[serde(flatten)]
    model: &'a TrainedModel,
}

pub fn to_json(model: &TrainedModel) -> String {
    let mut s = serde_json::to_string(&BundleOut {
        schema: MODEL_SCHEMA,
        version: MODEL_VERSION,
        model,
    })
    .expect("model serialization is infallible");
    s.push('\n');
    s
}

pub fn from_json(text: &str, origin: &str) -> Result<TrainedModel> {
    let json_err = |source| Error::Json {
        origin: origin.to_string(),
        source,
    };
    let mut value: Value = serde_json::from_str(text).map_err(json_err)?;
    let Some(obj) = value.as_object_mut() else {
        return Err(Error::Format {
            origin: origin.to_string(),
            message: "model bundle must be a JSON object".into(),
        });
    };
    let schema = obj
        .remove("schema")
        .and_then(|v| v.as_str().map(str::to_string));
    let version = obj.remove("version").and_then(|v| v.as_u64());
    match (schema, version) {
        (Some(s), Some(v)) if s == MODEL_SCHEMA && v == MODEL_VERSION => {}
        (s, v) => {
            return Err(Error::Schema {
                schema: s.unwrap_or_else(|| "<missing>".into()),
                version: v.unwrap_or(0),
            })
        }
    }
    let model: TrainedModel = serde_json::from_value(value).map_err(json_err)?;
    model.check()?;
    Ok(model)
}

pub fn load(path: &Path) -> Result<TrainedModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json(&text, &path.display().to_string())
}
