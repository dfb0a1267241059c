use rand::SeedableRng;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::config::{Quantity, ResolvedScan, ScanConfig};
use super::table::ResultTable;
use crate::error::{Error, Result};
use crate::linalg::{unitarity_error, ParamPoint};
use crate::mixed::{
    bures_distance_squared, check_mixed_pythagorean, sjoqvist_distance_squared, thermal_jet, uhlmann_form,
    uhlmann_holonomy, zero_temperature_sweep, GaugeField,
};
use crate::pure::{berry_phase, check_pure_pythagorean, fubini_study_qgt, ParamLoop};
use crate::tensor::MetricTensor;
use crate::zoo::ParameterizedModel;

/// Seed of the random draws (gauges, phase fields) belonging to one row.
pub fn row_seed(seed: u64, row: usize) -> u64 {
    seed ^ (row as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn tensor_columns(prefix: &str, k: usize) -> Vec<String> {
    (0..k)
        .flat_map(|i| (0..k).map(move |j| format!("{prefix}[{i}][{j}]")))
        .collect()
}

fn value_columns(q: Quantity, k: usize, n: usize) -> Vec<String> {
    match q {
        Quantity::FsQgt => [tensor_columns("g_FS", k), tensor_columns("Omega", k)].concat(),
        Quantity::BerryCurvature => tensor_columns("Omega", k),
        Quantity::BerryPhase => vec!["gamma".into()],
        Quantity::HsMetric => tensor_columns("g_HS", k),
        Quantity::BuresMetric => tensor_columns("g_B", k),
        Quantity::UhlmannMetric => tensor_columns("g_U", k),
        Quantity::UhlmannForm => tensor_columns("sigma_U", k),
        Quantity::BuresDistance => vec!["d_B2".into(), "d_B".into()],
        Quantity::SjoqvistDistance => vec!["d_S2".into(), "d_S".into()],
        Quantity::Holonomy => [
            tensor_columns("hol_re", n),
            tensor_columns("hol_im", n),
            vec!["unitarity_error".into()],
        ]
        .concat(),
        Quantity::PythagoreanPure | Quantity::PythagoreanMixed => vec!["residual".into()],
        Quantity::TSweep => [
            vec!["beta".into()],
            tensor_columns("g_B", k),
            tensor_columns("g_FS", k),
            vec!["deviation".into()],
        ]
        .concat(),
    }
}

/// Parameter points of the grid, first axis varying slowest.
fn grid_points(scan: &ResolvedScan) -> Vec<Vec<f64>> {
    let mut points = vec![scan.base_point.clone()];
    for (ax, &idx) in scan.config.axes.iter().zip(&scan.axis_params) {
        let vals = ax.values();
        points = points
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |&v| {
                    let mut q = p.clone();
                    q[idx] = v;
                    q
                })
            })
            .collect();
    }
    points
}

struct Task {
    temperature: Option<f64>,
    point: Vec<f64>,
}

/// Evaluates the configured quantity on the grid.
///
/// Runtime failures at a grid point fill that row's values with NaN and add
/// an entry to [`ResultTable::warnings`]; only configuration errors abort.
pub fn run_scan(config: &ScanConfig) -> Result<ResultTable> {
    let scan = config.validate()?;
    let q = config.quantity;
    let k = scan.model.k();
    let n = scan.model.dim();

    let mut columns = Vec::new();
    let per_row_temperature = q.is_thermal() || q == Quantity::TSweep;
    if per_row_temperature {
        columns.push("T".to_string());
    }
    if q == Quantity::TSweep {
        columns.extend(scan.model.param_names.iter().cloned());
    } else {
        columns.extend(config.axes.iter().map(|a| a.param.clone()));
    }
    let values = value_columns(q, k, n);
    let width = values.len();
    columns.extend(values);

    let points = grid_points(&scan);
    let mut table = ResultTable::new(columns);
    table.metadata = metadata(&scan);

    if q == Quantity::TSweep {
        let results = map_ordered(config.threads, &points, |p| sweep_rows(&scan, p))?;
        for (p, res) in points.iter().zip(results) {
            let rows = match res {
                Ok(rows) => rows,
                Err(e) => {
                    table.warnings.push((table.rows.len(), e.to_string()));
                    scan.temperatures
                        .iter()
                        .map(|&t| [vec![1.0 / t], vec![f64::NAN; width - 1]].concat())
                        .collect()
                }
            };
            for (t, vals) in scan.temperatures.iter().zip(rows) {
                table.push_row([vec![*t], p.clone(), vals].concat())?;
            }
        }
        return Ok(table);
    }

    let temps: Vec<Option<f64>> = if q.is_thermal() {
        scan.temperatures.iter().map(|&t| Some(t)).collect()
    } else {
        vec![None]
    };
    let models: Vec<ParameterizedModel> = temps
        .iter()
        .map(|t| match t {
            Some(t) => scan.model.clone().with_temperature(*t).map_err(|e| Error::config("temperature", e.to_string())),
            None => Ok(scan.model.clone()),
        })
        .collect::<Result<_>>()?;
    let tasks: Vec<Task> = temps
        .iter()
        .flat_map(|t| {
            points.iter().map(move |p| Task {
                temperature: *t,
                point: p.clone(),
            })
        })
        .collect();
    let indexed: Vec<(usize, &Task)> = tasks.iter().enumerate().collect();
    let results = map_ordered(config.threads, &indexed, |(i, task)| {
        let model = &models[temps.iter().position(|t| *t == task.temperature).expect("temperature listed")];
        evaluate(&scan, model, &task.point, row_seed(config.seed, *i))
    })?;

    for (task, res) in tasks.iter().zip(results) {
        let mut row = Vec::with_capacity(table.columns.len());
        if let Some(t) = task.temperature {
            row.push(t);
        }
        row.extend(scan.axis_params.iter().map(|&i| task.point[i]));
        match res {
            Ok(vals) => row.extend(vals),
            Err(e) => {
                table.warnings.push((table.rows.len(), e.to_string()));
                row.extend(std::iter::repeat(f64::NAN).take(width));
            }
        }
        table.push_row(row)?;
    }
    Ok(table)
}

fn metadata(scan: &ResolvedScan) -> std::collections::BTreeMap<String, String> {
    let c = &scan.config;
    let mut m = std::collections::BTreeMap::new();
    m.insert("tool".into(), format!("qgt {}", env!("CARGO_PKG_VERSION")));
    m.insert("quantity".into(), c.quantity.name().into());
    m.insert("seed".into(), c.seed.to_string());
    m.insert("plan".into(), scan.plan.describe());
    m.insert("model".into(), serde_json::to_string(&c.model).expect("model spec serializes"));
    m.insert(
        "timestamp".into(),
        c.timestamp.clone().unwrap_or_else(|| humantime::format_rfc3339_seconds(std::time::SystemTime::now()).to_string()),
    );
    m
}

#[cfg(feature = "parallel")]
fn map_ordered<T, R, F>(threads: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::config("threads", e.to_string()))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

#[cfg(not(feature = "parallel"))]
fn map_ordered<T, R, F>(_threads: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    F: Fn(&T) -> R,
{
    Ok(items.iter().map(f).collect())
}

fn flat(m: &MetricTensor) -> Vec<f64> {
    m.components()
}

fn evaluate(scan: &ResolvedScan, model: &ParameterizedModel, point: &[f64], seed: u64) -> Result<Vec<f64>> {
    let r = ParamPoint::from(point.to_vec());
    let plan = &scan.plan;
    let cfg = &scan.config;
    Ok(match cfg.quantity {
        Quantity::FsQgt => {
            let g = fubini_study_qgt(model, &r, plan)?;
            [flat(&g.metric()), g.curvature().components()].concat()
        }
        Quantity::BerryCurvature => fubini_study_qgt(model, &r, plan)?.curvature().components(),
        Quantity::BerryPhase => vec![berry_phase(model, &row_loop(scan, &r)?)?],
        Quantity::HsMetric => flat(&thermal_jet(model, &r, plan)?.hilbert_schmidt_metric()),
        Quantity::BuresMetric => flat(&thermal_jet(model, &r, plan)?.bures_metric()),
        Quantity::UhlmannMetric => flat(&thermal_jet(model, &r, plan)?.uhlmann_metric()),
        Quantity::UhlmannForm => uhlmann_form(model, &r, plan)?.components(),
        Quantity::BuresDistance | Quantity::SjoqvistDistance => {
            let pair = cfg.pair.as_ref().expect("validated");
            let other: Vec<f64> = match (&pair.reference, &pair.offset) {
                (Some(p), _) => p.clone(),
                (None, Some(o)) => point.iter().zip(o).map(|(a, b)| a + b).collect(),
                (None, None) => unreachable!("validated"),
            };
            let rho1 = model.rho(&r)?;
            let rho2 = model.rho(&ParamPoint::from(other))?;
            let d2 = if cfg.quantity == Quantity::BuresDistance {
                bures_distance_squared(&rho1, &rho2)?
            } else {
                sjoqvist_distance_squared(&rho1, &rho2)?
            };
            vec![d2, d2.sqrt()]
        }
        Quantity::Holonomy => {
            let hol = uhlmann_holonomy(model, &row_loop(scan, &r)?, plan)?;
            let n = hol.nrows();
            let re = (0..n * n).map(|i| hol[(i / n, i % n)].re);
            let im = (0..n * n).map(|i| hol[(i / n, i % n)].im);
            re.chain(im).chain([unitarity_error(&hol)]).collect()
        }
        Quantity::PythagoreanPure => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = r.dim();
            let a: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let b: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let theta = |p: &ParamPoint| {
                p.coords().iter().zip(a.iter().zip(&b)).map(|(x, (a, b))| a * x + b * x.sin()).sum::<f64>()
            };
            vec![check_pure_pythagorean(model, &r, theta, plan)?.residual]
        }
        Quantity::PythagoreanMixed => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gauge = GaugeField::random(&mut rng, model.dim(), r.clone());
            vec![check_mixed_pythagorean(model, &r, &gauge, plan)?.residual]
        }
        Quantity::TSweep => unreachable!("handled by sweep_rows"),
    })
}

fn row_loop(scan: &ResolvedScan, r: &ParamPoint) -> Result<ParamLoop> {
    let spec = scan.config.loop_spec.as_ref().expect("validated");
    match (&spec.param, &spec.points) {
        (Some(p), _) => {
            let mu = scan.model.param_names.iter().position(|n| n == p).expect("validated");
            ParamLoop::coordinate_circle(r, mu, spec.count)
        }
        (None, Some(points)) => ParamLoop::new(points.iter().map(|p| ParamPoint::from(p.clone())).collect()),
        (None, None) => unreachable!("validated"),
    }
}

fn sweep_rows(scan: &ResolvedScan, point: &[f64]) -> Result<Vec<Vec<f64>>> {
    let r = ParamPoint::from(point.to_vec());
    let betas: Vec<f64> = scan.temperatures.iter().map(|t| 1.0 / t).collect();
    let (fs, rows) = zero_temperature_sweep(&scan.model.clone().without_temperature(), &r, &betas, &scan.plan)?;
    Ok(rows
        .into_iter()
        .map(|row| [vec![row.beta], flat(&row.bures), flat(&fs), vec![row.deviation]].concat())
        .collect())
}

