//! Browser bindings. Parameters arrive as a JSON object with the same field
//! names the CLI config file uses; branch signs are `1` or `-1`.

use cnlse_verify::verify::{branch_sweep, inconsistency};
use cnlse_verify::{Ansatz, AnsatzParams, DiffConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Upper bound on grid sizes accepted from the page.
pub const MAX_POINTS: usize = 200_000;

#[derive(Debug, Serialize)]
pub struct BranchRow {
    pub sigma_z: i8,
    pub sigma_q: i8,
    #[serde(rename = "P")]
    pub p: Option<f64>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub notes: String,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

pub fn parse_params(json: &str) -> Result<AnsatzParams, String> {
    let params: AnsatzParams = if json.trim().is_empty() {
        AnsatzParams::baseline()
    } else {
        serde_json::from_str(json).map_err(|e| format!("bad parameters: {e}"))?
    };
    params.validate().map_err(|e| e.to_string())?;
    Ok(params)
}

fn ansatz(params_json: &str) -> Result<Ansatz, String> {
    Ansatz::new(parse_params(params_json)?).map_err(|e| e.to_string())
}

fn axis(min: f64, max: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(min.is_finite() && max.is_finite() && max > min) {
        return Err(format!("empty range [{min}, {max}]"));
    }
    if !(2..=MAX_POINTS).contains(&n) {
        return Err(format!("point count {n} outside 2..={MAX_POINTS}"));
    }
    let step = (max - min) / (n - 1) as f64;
    Ok((0..n).map(|i| min + step * i as f64).collect())
}

/// `P` and both algebraic residuals on all four branches, as a JSON array.
pub fn branch_table(params_json: &str, x: f64, t: f64) -> Result<String, String> {
    let params = parse_params(params_json)?;
    let reports = branch_sweep(&params, x, t, &DiffConfig::default()).map_err(|e| e.to_string())?;
    let rows: Vec<BranchRow> = reports
        .into_iter()
        .map(|r| BranchRow {
            sigma_z: r.sigma_z.into(),
            sigma_q: r.sigma_q.into(),
            p: finite(r.p),
            r1: finite(r.r1),
            r2: finite(r.r2),
            notes: r.notes,
        })
        .collect();
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

/// `Q(x, t)` across `[x_min, x_max]`; NaN where the evaluation hits a pole.
pub fn q_samples(
    params_json: &str,
    t: f64,
    x_min: f64,
    x_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let slice = ansatz(params_json)?.slice(t).map_err(|e| e.to_string())?;
    Ok(axis(x_min, x_max, n)?
        .into_iter()
        .map(|x| slice.q(x).unwrap_or(f64::NAN))
        .collect())
}

/// `z(s)` for `s` in `[0, t_max]`; NaN once `z` leaves the real domain.
pub fn z_samples(params_json: &str, t_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let a = ansatz(params_json)?;
    Ok(axis(0.0, t_max, n)?
        .into_iter()
        .map(|t| a.z(t).unwrap_or(f64::NAN))
        .collect())
}

/// `P(x, t)` on a grid, row-major with `t` as the slow index.
pub fn p_grid(
    params_json: &str,
    x_range: [f64; 2],
    nx: usize,
    t_range: [f64; 2],
    nt: usize,
) -> Result<Vec<f64>, String> {
    let a = ansatz(params_json)?;
    let xs = axis(x_range[0], x_range[1], nx)?;
    let ts = axis(t_range[0], t_range[1], nt)?;
    if nx * nt > MAX_POINTS {
        return Err(format!("grid of {} points is too large", nx * nt));
    }
    let cfg = DiffConfig::default();
    let mut out = Vec::with_capacity(nx * nt);
    for &t in &ts {
        for &x in &xs {
            out.push(inconsistency(&a, x, t, &cfg).unwrap_or(f64::NAN));
        }
    }
    Ok(out)
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

fn js_vec(r: Result<Vec<f64>, String>) -> Result<Vec<f64>, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn baseline_defaults() -> String {
    serde_json::to_string(&AnsatzParams::baseline()).unwrap_or_default()
}

#[wasm_bindgen]
pub fn check_point(params_json: &str, x: f64, t: f64) -> Result<String, JsError> {
    js(branch_table(params_json, x, t))
}

#[wasm_bindgen]
pub fn q_profile(
    params_json: &str,
    t: f64,
    x_min: f64,
    x_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    js_vec(q_samples(params_json, t, x_min, x_max, n))
}

#[wasm_bindgen]
pub fn z_profile(params_json: &str, t_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    js_vec(z_samples(params_json, t_max, n))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn p_heatmap(
    params_json: &str,
    x_min: f64,
    x_max: f64,
    nx: usize,
    t_min: f64,
    t_max: f64,
    nt: usize,
) -> Result<Vec<f64>, JsError> {
    js_vec(p_grid(params_json, [x_min, x_max], nx, [t_min, t_max], nt))
}
