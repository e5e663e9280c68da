//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each export builds a synthetic chain and returns an SVG document. The
//! plain `*_svg` functions hold the logic so they can be tested natively.

use bri::synth;
use bri::viz::{bib_svg, bid_svg, perturb_experiment, render_curve_svg};
use bri::{compute_bri, Backbone};
use wasm_bindgen::prelude::*;

/// Longest chain the page may request.
pub const MAX_RESIDUES: usize = 2000;

/// `helix`, `strand` or `random` (random bonds, angles and torsions).
pub fn demo_backbone(kind: &str, m: usize, seed: u32) -> Result<Backbone, String> {
    if !(2..=MAX_RESIDUES).contains(&m) {
        return Err(format!("length must be between 2 and {MAX_RESIDUES}"));
    }
    match kind {
        "helix" => Ok(synth::alpha_helix(m)),
        "strand" => Ok(synth::beta_strand(m)),
        "random" => Ok(synth::random_backbone(m, seed.into())),
        other => Err(format!("unknown chain kind `{other}`")),
    }
}

pub fn diagram_svg(kind: &str, m: usize, seed: u32) -> Result<String, String> {
    let bri = compute_bri(&demo_backbone(kind, m, seed)?).map_err(|e| e.to_string())?;
    bid_svg(&bri, &format!("{kind}, {m} residues")).map_err(|e| e.to_string())
}

pub fn barcode_svg(kind: &str, m: usize, seed: u32) -> Result<String, String> {
    let bri = compute_bri(&demo_backbone(kind, m, seed)?).map_err(|e| e.to_string())?;
    bib_svg(&bri, None, &format!("{kind}, {m} residues")).map_err(|e| e.to_string())
}

/// Ten noise levels evenly spaced up to `eps_max`.
pub fn perturbation_svg(kind: &str, m: usize, eps_max: f64, trials: usize, seed: u32) -> Result<String, String> {
    if !(eps_max > 0.0 && eps_max <= 1.0) {
        return Err("largest noise must be in (0, 1] Å".into());
    }
    if !(1..=200).contains(&trials) {
        return Err("trials must be between 1 and 200".into());
    }
    let s = demo_backbone(kind, m, seed)?;
    let eps: Vec<f64> = (1..=10).map(|k| eps_max * k as f64 / 10.0).collect();
    let curve = perturb_experiment(&s, &eps, trials, seed.into()).map_err(|e| e.to_string())?;
    Ok(render_curve_svg(&curve, &format!("{kind}, {m} residues")))
}

#[wasm_bindgen]
pub fn bid(kind: &str, m: usize, seed: u32) -> Result<String, JsValue> {
    diagram_svg(kind, m, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bib(kind: &str, m: usize, seed: u32) -> Result<String, JsValue> {
    barcode_svg(kind, m, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn perturb(kind: &str, m: usize, eps_max: f64, trials: usize, seed: u32) -> Result<String, JsValue> {
    perturbation_svg(kind, m, eps_max, trials, seed).map_err(|e| JsValue::from_str(&e))
}
