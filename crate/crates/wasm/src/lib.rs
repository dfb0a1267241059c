//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Float64Array`; layouts are given per function.

use qgt_core::mixed::{bures_metric, zero_temperature_sweep};
use qgt_core::pure::fubini_study_metric;
use qgt_core::zoo::{paramagnet, paramagnet_bures_closed_form, twoband};
use qgt_core::{DifferentiationPlan, ParamPoint};
use wasm_bindgen::prelude::*;

fn js_err(e: qgt_core::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count.max(2) - 1) as f64).exp())
        .collect()
}

/// Paramagnet Bures metric against temperature at polar angle `theta`.
///
/// Rows of `[T, g_thth, g_phph, closed-form g_thth]`, `count` rows on a
/// logarithmic grid from `t_min` to `t_max`.
#[wasm_bindgen]
pub fn paramagnet_curve(theta: f64, omega0: f64, t_min: f64, t_max: f64, count: usize) -> Result<Vec<f64>, JsValue> {
    let plan = DifferentiationPlan::default();
    let r = ParamPoint::from([theta, 0.0]);
    let mut out = Vec::with_capacity(4 * count);
    for t in log_grid(t_min, t_max, count) {
        let m = paramagnet(omega0).with_temperature(t).map_err(js_err)?;
        let g = bures_metric(&m, &r, &plan).map_err(js_err)?;
        out.extend([t, g.get(0, 0), g.get(1, 1), paramagnet_bures_closed_form(theta, t, omega0).get(0, 0)]);
    }
    Ok(out)
}

/// Two-band Bures metric on an `n x n` Brillouin-zone grid over `[-pi, pi)`.
///
/// Row-major over `(kx, ky)` with `kx` slowest; each cell holds
/// `[g_xx, g_yy, g_xy]`. Points that fail (rank-deficient states at very low
/// temperature) are NaN.
#[wasm_bindgen]
pub fn twoband_zone(mu: f64, temperature: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    let plan = DifferentiationPlan::default();
    let m = twoband(mu).with_temperature(temperature).map_err(js_err)?;
    let k = |i: usize| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
    let mut out = Vec::with_capacity(3 * n * n);
    for i in 0..n {
        for j in 0..n {
            match bures_metric(&m, &ParamPoint::from([k(i), k(j)]), &plan) {
                Ok(g) => out.extend([g.get(0, 0), g.get(1, 1), g.get(0, 1)]),
                Err(_) => out.extend([f64::NAN; 3]),
            }
        }
    }
    Ok(out)
}

/// Two-band Bures metric at one momentum against temperature, with the
/// ground-state metric it approaches.
///
/// The first three entries are the ground-state `[g_xx, g_yy, g_xy]`; then
/// rows of `[T, g_xx, g_yy, g_xy]` on a logarithmic grid.
#[wasm_bindgen]
pub fn twoband_sweep(kx: f64, ky: f64, mu: f64, t_min: f64, t_max: f64, count: usize) -> Result<Vec<f64>, JsValue> {
    let plan = DifferentiationPlan::central4();
    let m = twoband(mu);
    let r = ParamPoint::from([kx, ky]);
    let temps = log_grid(t_min, t_max, count);
    let betas: Vec<f64> = temps.iter().map(|t| 1.0 / t).collect();
    let (fs, rows) = match zero_temperature_sweep(&m, &r, &betas, &plan) {
        Ok(x) => x,
        Err(_) => (fubini_study_metric(&m, &r, &plan).map_err(js_err)?, Vec::new()),
    };
    let mut out = vec![fs.get(0, 0), fs.get(1, 1), fs.get(0, 1)];
    for row in rows {
        out.extend([1.0 / row.beta, row.bures.get(0, 0), row.bures.get(1, 1), row.bures.get(0, 1)]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paramagnet_curve_matches_closed_form() {
        let v = paramagnet_curve(0.7, 1.0, 0.05, 5.0, 20).unwrap();
        assert_eq!(v.len(), 80);
        for row in v.chunks(4) {
            assert!((row[1] - row[3]).abs() < 1e-8);
        }
    }

    #[test]
    fn zone_has_vanishing_off_diagonal_on_axis() {
        let n = 8;
        let v = twoband_zone(1.0, 0.1, n).unwrap();
        assert_eq!(v.len(), 3 * n * n);
        // kx = 0 is row n/2
        for j in 0..n {
            assert!(v[3 * ((n / 2) * n + j) + 2].abs() < 1e-8);
        }
    }

    #[test]
    fn sweep_approaches_ground_state() {
        let v = twoband_sweep(0.6, -0.9, 1.0, 0.005, 1.0, 10).unwrap();
        let fs = &v[..3];
        let coldest = &v[3..7];
        for c in 0..3 {
            assert!((coldest[c + 1] - fs[c]).abs() < 1e-6);
        }
    }
}
