//! Host-side tests of the JSON builders behind the WebAssembly exports.

// Reference constants are written with full source precision so the
// nearest-double rounding is explicit.
#![allow(clippy::excessive_precision)]

use qorbit_web::{catalog, discretize, trace};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).expect("builders must emit valid JSON")
}

#[test]
fn catalog_lists_sorted_quantized_phases() {
    let doc = parse(&catalog(2, 1.0, 1.0).unwrap());
    let entries = doc["entries"].as_array().unwrap();
    assert!(entries.len() >= 8);
    let mut prev = f64::NEG_INFINITY;
    for e in entries {
        let theta = e["theta"].as_f64().unwrap();
        assert!(theta >= prev, "catalog not sorted by theta");
        prev = theta;
        assert!(e["period"].as_f64().unwrap() > 0.0);
        assert!(matches!(
            e["family"].as_str().unwrap(),
            "generic" | "hermitian" | "wrong-sign"
        ));
    }
    // The Hermitian oscillator sits at θ = 0 with its textbook period.
    let hermitian = entries
        .iter()
        .find(|e| e["family"] == "hermitian")
        .expect("catalog contains the Hermitian member");
    assert_eq!(hermitian["theta"].as_f64().unwrap(), 0.0);
    assert!((hermitian["period"].as_f64().unwrap() - 2.6220575542921198).abs() < 1e-12);
}

#[test]
fn catalog_rejects_bad_inputs() {
    assert!(catalog(0, 1.0, 1.0).is_err());
    assert!(catalog(2, -1.0, 1.0).is_err());
    assert!(catalog(2, 1.0, 0.0).is_err());
}

#[test]
fn discretize_reports_known_level() {
    let doc = parse(&discretize(1, 1.0, 1.0, 1, 1, -1.0, 1.0).unwrap());
    let levels = doc["levels"].as_array().unwrap();
    assert!(levels
        .iter()
        .any(|l| (l["energy"].as_f64().unwrap() - 0.27499).abs() < 5e-4));
    for l in levels {
        assert!(l["period"].as_f64().unwrap() > 0.0);
        assert!(l["residual"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn discretize_propagates_validation_errors() {
    assert!(discretize(3, 1.0, 1.0, 1, 1, -1.0, 1.0).is_err());
    assert!(discretize(1, 1.0, 1.0, 0, 0, -1.0, 1.0).is_err());
    assert!(discretize(1, 1.0, 1.0, 1, 1, 2.0, 1.0).is_err());
}

#[test]
fn trace_emits_one_closed_period() {
    let doc = parse(&trace(1, 1.0, 1.0, 0.27499416446252573, 257).unwrap());
    assert_eq!(doc["turning_points"].as_array().unwrap().len(), 4);
    let t = doc["t"].as_array().unwrap();
    let x = doc["x"].as_array().unwrap();
    assert_eq!(t.len(), 257);
    assert_eq!(x.len(), 257);
    assert_eq!(doc["p"].as_array().unwrap().len(), 257);
    assert!(doc["real_period"]["t"].as_f64().unwrap() > 0.0);

    // At a periodic energy the sampled orbit returns to its start.
    let first = x.first().unwrap().as_array().unwrap();
    let last = x.last().unwrap().as_array().unwrap();
    let dx = (first[0].as_f64().unwrap() - last[0].as_f64().unwrap()).abs()
        + (first[1].as_f64().unwrap() - last[1].as_f64().unwrap()).abs();
    assert!(dx < 1e-5, "orbit fails to close: gap {dx:.2e}");
}

#[test]
fn trace_clamps_sample_counts() {
    assert!(trace(1, 1.0, 1.0, 0.5, 8).is_err());
    assert!(trace(1, 1.0, 1.0, 0.5, 5000).is_err());
}
