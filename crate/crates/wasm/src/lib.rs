//! wasm-bindgen surface for the browser demo.
//!
//! Three operations, all returning JSON strings so the page stays free of
//! generated binding types: a single-point report, sweep curves over R₀,
//! and the dilation angle itself.

use wasm_bindgen::prelude::*;

use horizon_eur::{
    eigenbasis, full_report, spin_observables, state_bell_like, state_w_traced, BoundReport,
    DensityMatrix, HorizonParams, ProjectiveBasis,
};

fn state_density(label: &str) -> Result<DensityMatrix, String> {
    match label {
        "bell" => Ok(state_bell_like().to_density()),
        "w" => Ok(state_w_traced()),
        other => Err(format!("unknown state '{other}': expected bell or w")),
    }
}

fn basis_pair(spec: &str) -> Result<(ProjectiveBasis, ProjectiveBasis), String> {
    let (sx, sy, sz) = spin_observables();
    let pick = |label: &str| match label.trim() {
        "x" => eigenbasis(&sx).map_err(|e| e.to_string()),
        "y" => eigenbasis(&sy).map_err(|e| e.to_string()),
        "z" => eigenbasis(&sz).map_err(|e| e.to_string()),
        other => Err(format!("unknown observable '{other}': expected x, y or z")),
    };
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 {
        return Err(format!(
            "bases must be two comma-separated labels, got '{spec}'"
        ));
    }
    Ok((pick(parts[0])?, pick(parts[1])?))
}

fn report_value(r: &BoundReport) -> serde_json::Value {
    serde_json::json!({
        "state_label": r.state_label,
        "params": { "omega_ratio": r.params.omega_ratio(), "r_ratio": r.params.r_ratio() },
        "q_d": r.params.dilation_angle(),
        "lhs": r.lhs,
        "u1": r.u1,
        "u2": r.u2,
        "delta1": r.delta1,
        "delta2": r.delta2,
        "mu_bound": r.mu_bound,
        "berta_no_memory": r.berta_no_memory,
        "h_a": r.h_a,
        "mutual_info": r.mutual_info,
        "holevo_m1": r.holevo_m1,
        "holevo_m2": r.holevo_m2,
        "h_m1": r.h_m1,
        "h_m2": r.h_m2,
        "c1": r.c1,
    })
}

fn report_json_impl(state: &str, omega: f64, r0: f64, bases: &str) -> Result<String, String> {
    let rho = state_density(state)?;
    let (b1, b2) = basis_pair(bases)?;
    let params = HorizonParams::new(omega, r0).map_err(|e| e.to_string())?;
    let report = full_report(state, &rho, &b1, &b2, &params).map_err(|e| e.to_string())?;
    Ok(report_value(&report).to_string())
}

fn sweep_json_impl(
    state: &str,
    omega: f64,
    r0_min: f64,
    r0_max: f64,
    steps: usize,
    bases: &str,
) -> Result<String, String> {
    if steps < 2 {
        return Err("steps must be >= 2".into());
    }
    if r0_min >= r0_max {
        return Err(format!("need r0_min < r0_max, got {r0_min} .. {r0_max}"));
    }
    let rho = state_density(state)?;
    let (b1, b2) = basis_pair(bases)?;
    let mut r0s = Vec::with_capacity(steps);
    let mut curves: [Vec<f64>; 7] = Default::default();
    for k in 0..steps {
        let r0 = r0_min + (r0_max - r0_min) * k as f64 / (steps - 1) as f64;
        let params = HorizonParams::new(omega, r0).map_err(|e| e.to_string())?;
        let r = full_report(state, &rho, &b1, &b2, &params).map_err(|e| e.to_string())?;
        r0s.push(r0);
        for (curve, value) in curves.iter_mut().zip([
            params.dilation_angle(),
            r.lhs,
            r.u1,
            r.u2,
            r.delta1,
            r.delta2,
            r.mutual_info,
        ]) {
            curve.push(value);
        }
    }
    let [q_d, lhs, u1, u2, delta1, delta2, mutual_info] = curves;
    Ok(serde_json::json!({
        "state": state,
        "omega": omega,
        "r0": r0s,
        "q_d": q_d,
        "lhs": lhs,
        "u1": u1,
        "u2": u2,
        "delta1": delta1,
        "delta2": delta2,
        "mutual_info": mutual_info,
    })
    .to_string())
}

fn dilation_angle_impl(omega: f64, r0: f64) -> Result<f64, String> {
    Ok(HorizonParams::new(omega, r0)
        .map_err(|e| e.to_string())?
        .dilation_angle())
}

/// Full report for one (state, Ω, R₀) point as a JSON string.
#[wasm_bindgen]
pub fn report_json(state: &str, omega: f64, r0: f64, bases: &str) -> Result<String, JsValue> {
    report_json_impl(state, omega, r0, bases).map_err(|e| JsValue::from_str(&e))
}

/// Curves of every bound quantity over an R₀ interval, as a JSON string of
/// parallel arrays.
#[wasm_bindgen]
pub fn sweep_json(
    state: &str,
    omega: f64,
    r0_min: f64,
    r0_max: f64,
    steps: usize,
    bases: &str,
) -> Result<String, JsValue> {
    sweep_json_impl(state, omega, r0_min, r0_max, steps, bases).map_err(|e| JsValue::from_str(&e))
}

/// The dilation angle q = arctan(exp(-(Ω/2)√(1-1/R₀))).
#[wasm_bindgen]
pub fn dilation_angle(omega: f64, r0: f64) -> Result<f64, JsValue> {
    dilation_angle_impl(omega, r0).map_err(|e| JsValue::from_str(&e))
}
