//! Browser front end: three operations exposed through wasm-bindgen. The
//! plain functions carry the logic so they can be tested natively.

use serde_json::json;
use trace_hhh::cli::parse_braid;
use trace_hhh::hochschild::{q_window, Convention, HHHTable, HhhOptions};
use trace_hhh::multigrade::Substitution;
use trace_hhh::supports::support_report;
use wasm_bindgen::prelude::*;

/// Keeps a page request from running for minutes.
const MAX_STRANDS: usize = 3;
const MAX_Q: i64 = 8;

fn check(strands: usize, q_max: i64) -> Result<(), String> {
    if !(1..=MAX_STRANDS).contains(&strands) {
        return Err(format!("the demo handles 1 to {MAX_STRANDS} strands"));
    }
    if !(0..=MAX_Q).contains(&q_max) {
        return Err(format!("q cutoff must lie in 0..={MAX_Q}"));
    }
    Ok(())
}

/// Nonzero `(a, q2, t2)` entries of normalized `HHH` as JSON rows.
pub fn homology_rows(strands: usize, braid: &str, q_max: i64) -> Result<String, String> {
    check(strands, q_max)?;
    let b = parse_braid(braid, strands).map_err(|e| e.to_string())?;
    let t = HHHTable::compute(&b, &q_window(q_max), &HhhOptions::default()).map_err(|e| e.to_string())?;
    let qat = t.render(Convention::Qat).map_err(|e| e.to_string())?;
    let rows: Vec<_> = qat
        .entries()
        .filter(|(_, v)| *v > 0)
        .map(|(e, v)| json!({ "a": e[0], "q2": e[1], "t2": e[2], "dim": v }))
        .collect();
    Ok(json!({ "braid": b.to_string(), "cycles": b.cycle_type(), "rows": rows }).to_string())
}

pub fn support_json(strands: usize, braid: &str, q_max: i64) -> Result<String, String> {
    check(strands, q_max)?;
    let b = parse_braid(braid, strands).map_err(|e| e.to_string())?;
    let r = support_report(&b, q_max, 6, &HhhOptions::default()).map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

/// `(X, Y, C)` exponents in the `(Xt, Yt, C)` grading.
pub fn to_tilde(x: i64, y: i64, c: i64) -> Vec<i64> {
    Substitution::xy_to_tilde().apply(&[x, y, c])
}

#[wasm_bindgen]
pub fn homology(strands: usize, braid: &str, q_max: i32) -> Result<String, JsError> {
    homology_rows(strands, braid, q_max.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn support(strands: usize, braid: &str, q_max: i32) -> Result<String, JsError> {
    support_json(strands, braid, q_max.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn regrade(x: i32, y: i32, c: i32) -> Vec<i32> {
    to_tilde(x.into(), y.into(), c.into()).into_iter().map(|v| v as i32).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_rows() {
        let v: serde_json::Value = serde_json::from_str(&homology_rows(1, "", 2).unwrap()).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn bad_input_is_reported() {
        assert!(homology_rows(2, "1 0", 2).unwrap_err().contains("token 2"));
        assert!(homology_rows(5, "", 2).is_err());
        assert!(support_json(2, "", 9).is_err());
    }

    #[test]
    fn trefoil_support_passes() {
        let v: serde_json::Value = serde_json::from_str(&support_json(2, "1 1 1", 4).unwrap()).unwrap();
        assert_eq!(v["status"], "PASS");
    }

    #[test]
    fn tilde_images() {
        assert_eq!(to_tilde(2, 1, 0), vec![1, 0, 0]);
        assert_eq!(to_tilde(-2, 0, 0), vec![0, 2, 0]);
    }
}
