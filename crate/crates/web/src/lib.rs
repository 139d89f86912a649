//! Browser bindings: a pattern viewer, the cone table and the action of an
//! idempotent on the fiber over 0.
//!
//! The `*_text`/`pattern_points` functions are plain Rust so they can be
//! tested natively; the `#[wasm_bindgen]` wrappers only convert errors.

use wasm_bindgen::prelude::*;

use ellis_core::arrangement::ConeType;
use ellis_core::config::parse_vector;
use ellis_core::cps::{generate_pattern, Boundary, Region};
use ellis_core::ellis::{Ellis, TorusPoint};
use ellis_core::presets;

fn ellis(preset: &str) -> Result<Ellis, String> {
    let p = presets::load_preset(preset).map_err(|e| e.to_string())?;
    Ellis::new(p.scheme, p.window).map_err(|e| e.to_string())
}

/// Pattern of `w + W` on `B(0, radius)` as flat `x, y` pairs (y = 0 for
/// one-dimensional presets). An empty `w` means the preset's own shift.
pub fn pattern_points(preset: &str, w: &str, radius: u32) -> Result<Vec<f64>, String> {
    let p = presets::load_preset(preset).map_err(|e| e.to_string())?;
    let w = if w.trim().is_empty() {
        p.shift.clone()
    } else {
        let items: Vec<String> = w.split(',').map(|s| s.trim().to_string()).collect();
        parse_vector(&items, p.scheme.radicand()).map_err(|e| e.to_string())?
    };
    if w.len() != p.scheme.n() {
        return Err(format!("expected {} coordinates", p.scheme.n()));
    }
    let region = Region::centered(p.scheme.d(), radius.min(40) as i64);
    let pat = generate_pattern(&p.scheme, &p.window, &w, &region, Boundary::Closed);
    let mut out = Vec::with_capacity(2 * pat.len());
    for pt in &pat.points {
        out.push(pt.pos[0].to_f64());
        out.push(pt.pos.get(1).map_or(0.0, |y| y.to_f64()));
    }
    Ok(out)
}

pub fn cones_text(preset: &str) -> Result<String, String> {
    let e = ellis(preset)?;
    let mut out = String::from("type  dim  non-trivial  <C> dim\n");
    for a in e.analyses() {
        out.push_str(&format!(
            "{}  {}  {}  {}\n",
            a.t,
            a.span_dim(),
            if a.nontrivial { "yes" } else { "no" },
            a.plain_dim()
        ));
    }
    Ok(out)
}

/// Where `(0, t)` sends each hull point over 0.
pub fn fiber_action_text(preset: &str, cone: &str) -> Result<String, String> {
    let e = ellis(preset)?;
    let t: ConeType = cone
        .trim()
        .parse()
        .map_err(|e: ellis_core::error::Error| e.to_string())?;
    if t.len() != e.arrangement().len() {
        return Err(format!(
            "cone types here have {} signs",
            e.arrangement().len()
        ));
    }
    let g = e
        .element(TorusPoint::zero(e.scheme()), t)
        .map_err(|e| e.to_string())?;
    let mut out = String::new();
    let fiber = e.fiber(&TorusPoint::zero(e.scheme()));
    let mut images = Vec::new();
    for p in &fiber {
        let q = e.act(p, &g).map_err(|e| e.to_string())?;
        out.push_str(&format!("{}  ->  {}\n", p.c, q.c));
        images.push(q);
    }
    images.sort();
    images.dedup();
    out.push_str(&format!(
        "range: {} of {} points\n",
        images.len(),
        fiber.len()
    ));
    Ok(out)
}

#[wasm_bindgen(js_name = patternPoints)]
pub fn pattern_points_js(preset: &str, w: &str, radius: u32) -> Result<Vec<f64>, JsError> {
    pattern_points(preset, w, radius).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = cones)]
pub fn cones_js(preset: &str) -> Result<String, JsError> {
    cones_text(preset).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = fiberAction)]
pub fn fiber_action_js(preset: &str, cone: &str) -> Result<String, JsError> {
    fiber_action_text(preset, cone).map_err(|e| JsError::new(&e))
}
