//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export takes and returns JSON strings so the page stays plain
//! JavaScript.

use levy_chaos::orthopoly::recurrence_coefficients;
use levy_chaos::verify::{self, CheckRow};
use levy_chaos::{Lattice, MeasureField, MonteCarlo, PathSampler, SpectralMeasure};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_SAMPLES: u64 = 2_000_000;
const CURVE_POINTS: usize = 161;

#[derive(Debug, Deserialize)]
struct MeasureInput {
    #[serde(default)]
    zero_weight: f64,
    #[serde(default)]
    atoms: Vec<[f64; 2]>,
}

impl MeasureInput {
    fn build(&self) -> Result<SpectralMeasure, String> {
        SpectralMeasure::discrete(self.zero_weight, self.atoms.iter().map(|a| (a[0], a[1])).collect())
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Deserialize)]
struct CurvesInput {
    measure: MeasureInput,
    order: usize,
}

#[derive(Debug, Deserialize)]
struct CfInput {
    measure: MeasureInput,
    volumes: Vec<f64>,
    phi: Vec<f64>,
    samples: u64,
    seed: u64,
}

#[derive(Debug, Deserialize)]
struct IsometryInput {
    measure: MeasureInput,
    cells: usize,
    samples: u64,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct Row<'a> {
    quantity: &'a str,
    target: f64,
    estimate: f64,
    stderr: f64,
    pass: bool,
}

fn rows_json(rows: &[CheckRow]) -> Value {
    rows.iter()
        .map(|r| {
            serde_json::to_value(Row {
                quantity: &r.quantity,
                target: r.target,
                estimate: r.estimate,
                stderr: r.stderr,
                pass: r.pass,
            })
            .expect("plain struct")
        })
        .collect()
}

fn check_samples(samples: u64) -> Result<(), String> {
    if !(2..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must be between 2 and {MAX_SAMPLES}"));
    }
    Ok(())
}

fn parse<T: for<'de> Deserialize<'de>>(input: &str) -> Result<T, String> {
    serde_json::from_str(input).map_err(|e| e.to_string())
}

/// Recurrence table and the curves `q⁽ᵏ⁾(s)` for `k ≤ order`.
pub fn polynomial_curves_value(input: &str) -> Result<Value, String> {
    let input: CurvesInput = parse(input)?;
    let measure = input.measure.build()?;
    let table = recurrence_coefficients(&measure, input.order).map_err(|e| e.to_string())?;
    let support = measure.support().expect("discrete");
    let lo = support.iter().map(|p| p.0).fold(0.0, f64::min) - 0.5;
    let hi = support.iter().map(|p| p.0).fold(0.0, f64::max) + 0.5;
    let xs: Vec<f64> = (0..CURVE_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (CURVE_POINTS - 1) as f64)
        .collect();
    let curves: Vec<Value> = (0..=input.order)
        .filter(|&k| !table.is_degenerate(k))
        .map(|k| {
            let ys: Vec<f64> = xs.iter().map(|&s| table.evaluate_q(k, s).unwrap_or(f64::NAN)).collect();
            json!({ "k": k, "ys": ys })
        })
        .collect();
    Ok(json!({
        "b": table.b(),
        "a": table.a(),
        "gamma": table.gamma(),
        "support_size": table.support_size(),
        "atoms": support,
        "xs": xs,
        "curves": curves,
    }))
}

/// Closed-form characteristic functional against its Monte Carlo estimate.
pub fn cf_compare_value(input: &str) -> Result<Value, String> {
    let input: CfInput = parse(input)?;
    check_samples(input.samples)?;
    let lattice = Lattice::intervals(&input.volumes).map_err(|e| e.to_string())?;
    if input.phi.len() != lattice.len() {
        return Err(format!("phi has {} values for {} cells", input.phi.len(), lattice.len()));
    }
    let field = MeasureField::homogeneous(lattice, input.measure.build()?);
    let sampler = PathSampler::new(&field).map_err(|e| e.to_string())?;
    let thetas: Vec<f64> = (-24..=24).map(|i| i as f64 * 0.125).collect();
    let mc = MonteCarlo::new(input.samples, input.seed);
    let est = sampler.empirical_cf(&input.phi, &thetas, &mc).map_err(|e| e.to_string())?;
    let points: Vec<Value> = thetas
        .iter()
        .zip(&est)
        .map(|(&th, (z, se))| {
            let exact = sampler.char_functional(&input.phi, th);
            json!({
                "theta": th,
                "exact": [exact.re, exact.im],
                "estimate": [z.re, z.im],
                "stderr": se,
                "pass": (z - exact).norm() <= verify::SIGMA * se,
            })
        })
        .collect();
    Ok(json!({ "points": points }))
}

/// Fock-side and Monte Carlo chaos isometry rows on unit cells.
pub fn chaos_isometry_value(input: &str) -> Result<Value, String> {
    let input: IsometryInput = parse(input)?;
    check_samples(input.samples)?;
    if !(1..=8).contains(&input.cells) {
        return Err("cells must be between 1 and 8".into());
    }
    let lattice = Lattice::unit_intervals(input.cells).map_err(|e| e.to_string())?;
    let field = MeasureField::homogeneous(lattice, input.measure.build()?);
    let mc = MonteCarlo::new(input.samples, input.seed);
    let rows = verify::isometry_rows(&field, 2, 3, &mc).map_err(|e| e.to_string())?;
    Ok(json!({ "rows": rows_json(&rows), "all_pass": verify::all_pass(&rows) }))
}

fn to_js(result: Result<Value, String>) -> Result<String, JsError> {
    result.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn polynomial_curves(input: &str) -> Result<String, JsError> {
    to_js(polynomial_curves_value(input))
}

#[wasm_bindgen]
pub fn cf_compare(input: &str) -> Result<String, JsError> {
    to_js(cf_compare_value(input))
}

#[wasm_bindgen]
pub fn chaos_isometry(input: &str) -> Result<String, JsError> {
    to_js(chaos_isometry_value(input))
}
