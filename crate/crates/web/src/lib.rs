//! Browser bindings: validate a curve, certify it, or compute the ambient
//! dimension for a graph. Each export takes and returns JSON text.

use wasm_bindgen::prelude::*;

use tropcert::certify::ambient_dimension_for_graph;
use tropcert::curve::{check_balancing, check_smoothness, validate_embedding, MetricGraph, TropicalCurve};
use tropcert::certify_realizability;

fn curve(text: &str) -> Result<TropicalCurve, String> {
    serde_json::from_str(text).map_err(|e| format!("line {}, column {}: {e}", e.line(), e.column()))
}

pub fn validate_json(text: &str) -> Result<String, String> {
    let c = curve(text)?;
    let embedding = validate_embedding(&c);
    let doc = if embedding.passed {
        serde_json::json!({
            "schema": 1,
            "embedding": embedding,
            "balancing": check_balancing(&c),
            "smoothness": check_smoothness(&c),
        })
    } else {
        serde_json::json!({ "schema": 1, "embedding": embedding })
    };
    serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())
}

pub fn certify_json(text: &str, seed: u64) -> Result<String, String> {
    let cert = certify_realizability(&curve(text)?, seed);
    serde_json::to_string_pretty(&cert).map_err(|e| e.to_string())
}

pub fn ambient_dimension_json(text: &str) -> Result<usize, String> {
    let g: MetricGraph = serde_json::from_str(text).map_err(|e| e.to_string())?;
    ambient_dimension_for_graph(&g).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn validate(curve_json: &str) -> Result<String, JsError> {
    validate_json(curve_json).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn certify(curve_json: &str, seed: u64) -> Result<String, JsError> {
    certify_json(curve_json, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ambient_dimension(graph_json: &str) -> Result<usize, JsError> {
    ambient_dimension_json(graph_json).map_err(|e| JsError::new(&e))
}
