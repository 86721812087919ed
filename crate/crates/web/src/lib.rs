//! WebAssembly bindings for the browser demo in `www/`. Every function returns a
//! JSON string.

use ffincidence::cyclo::verify_gauss;
use ffincidence::incidence::{gen_instance, incidence_report};
use ffincidence::spectrum::{spectrum_verify_with, SweepOptions};
use ffincidence::{FieldCtx, Form, RadiusClass};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Keeps a sweep under a second or two in the browser.
pub const SWEEP_BUDGET: u64 = 50_000_000;

/// Largest point or sphere family accepted by [`incidence`].
pub const MAX_FAMILY: u64 = 2000;

fn field(p: u32, ell: u32) -> Result<FieldCtx, String> {
    FieldCtx::new(p, ell).map_err(|e| e.to_string())
}

pub fn gauss_json(p: u32, ell: u32) -> Result<String, String> {
    let ctx = field(p, ell)?;
    let r = verify_gauss(&ctx).map_err(|e| e.to_string())?;
    Ok(json!({
        "q": r.q,
        "g_1": r.g1.to_string(),
        "closed_form": r.explicit.to_string(),
        "g_1_times_conj": r.norm.to_string(),
        "g_1_squared": r.square.to_string(),
        "relative_phase_error": r.relative_phase_error,
        "passed": r.passed(),
    })
    .to_string())
}

pub fn spectrum_json(p: u32, ell: u32, k: usize, form: &str) -> Result<String, String> {
    let ctx = field(p, ell)?;
    let form: Form = form.parse()?;
    let opts = SweepOptions { budget: SWEEP_BUDGET, ..Default::default() };
    let r = spectrum_verify_with(form, &ctx, k, &opts).map_err(|e| e.to_string())?;
    let mut v = serde_json::to_value(&r).map_err(|e| e.to_string())?;
    v["passed"] = json!(r.passed());
    Ok(v.to_string())
}

pub fn incidence_json(p: u32, ell: u32, d: usize, np: u64, ns: u64, class: &str, seed: u64) -> Result<String, String> {
    if np > MAX_FAMILY || ns > MAX_FAMILY {
        return Err(format!("at most {MAX_FAMILY} points and spheres"));
    }
    let ctx = field(p, ell)?;
    let class: RadiusClass = class.parse()?;
    let (points, spheres) = gen_instance(&ctx, d, np, ns, class, false, seed).map_err(|e| e.to_string())?;
    let r = incidence_report(&points, &spheres, &ctx).map_err(|e| e.to_string())?;
    let mut v = serde_json::to_value(&r).map_err(|e| e.to_string())?;
    v["passed"] = json!(r.passed());
    Ok(v.to_string())
}

/// Gauss sum `G_1` over `GF(p^ell)`, computed directly and in closed form.
#[wasm_bindgen]
pub fn gauss(p: u32, ell: u32) -> Result<String, JsError> {
    gauss_json(p, ell).map_err(|e| JsError::new(&e))
}

/// Full eigenvalue sweep of the `form` graph (`"cone"` or `"norm"`) on `GF(p^ell)^k`.
#[wasm_bindgen]
pub fn spectrum(p: u32, ell: u32, k: usize, form: &str) -> Result<String, JsError> {
    spectrum_json(p, ell, k, form).map_err(|e| JsError::new(&e))
}

/// One random point-sphere instance in `GF(p^ell)^d` with every bound evaluated.
#[wasm_bindgen]
pub fn incidence(p: u32, ell: u32, d: usize, np: u32, ns: u32, radius_class: &str, seed: u32) -> Result<String, JsError> {
    incidence_json(p, ell, d, np as u64, ns as u64, radius_class, seed as u64).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn gauss_over_gf9() {
        let v = parse(&gauss_json(3, 2).unwrap());
        assert_eq!(v["g_1"], "3");
        assert_eq!(v["passed"], true);
        assert!(gauss_json(9, 1).is_err());
    }

    #[test]
    fn spectrum_sweep() {
        let v = parse(&spectrum_json(3, 1, 4, "cone").unwrap());
        assert_eq!(v["passed"], true);
        assert_eq!(v["spectrum"][0]["value"], -6);
        assert!(spectrum_json(3, 1, 4, "ellipse").is_err());
        assert!(spectrum_json(7, 1, 6, "norm").unwrap_err().contains("budget"));
    }

    #[test]
    fn incidence_instance() {
        let v = parse(&incidence_json(7, 1, 3, 50, 50, "square", 1).unwrap());
        assert_eq!(v["passed"], true);
        assert_eq!(v["lift"]["form"], "cone");
        assert!(incidence_json(7, 1, 3, 5000, 5, "square", 1).is_err());
    }
}
