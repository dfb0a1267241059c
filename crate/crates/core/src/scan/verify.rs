use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{fd_derivative, max_abs, spectral_decompose, unitarity_error, CMatrix, DifferentiationPlan, ParamPoint, C64};
use crate::mixed::{
    bures_distance, bures_distance_squared, bures_metric_bloch, density_jet, mixed_pythagorean_with_sign,
    sjoqvist_distance_squared, thermal_jet, uhlmann_form, uhlmann_holonomy, GaugeField,
};
use crate::pure::{
    berry_phase_of_states, check_pure_pythagorean, fubini_study_distance, fubini_study_qgt, ground_state,
    ground_state_field, qgt_from_state_field, ParamLoop,
};
use crate::states::{bloch_compose, bloch_decompose, gibbs_state, purify, sample, BlochVector, PureState};
use crate::tensor::MetricTensor;
use crate::zoo::{
    make_random_model, paramagnet, paramagnet_bures_closed_form, paramagnet_fs_closed_form, twoband,
    twoband_bures_closed_form, ParameterizedModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Pure,
    Mixed,
    Zoo,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "pure" => Ok(Suite::Pure),
            "mixed" => Ok(Suite::Mixed),
            "zoo" => Ok(Suite::Zoo),
            other => Err(Error::config("suite", format!("unknown suite `{other}` (expected all, pure, mixed or zoo)"))),
        }
    }
}

/// Options of [`run_verify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Flips the sign of the Uhlmann connection inside the mixed
    /// Pythagorean check. Only useful to see that check fail.
    pub corrupt_connection_sign: bool,
}

impl VerifyOptions {
    pub fn new(seed: u64) -> Self {
        VerifyOptions {
            seed,
            corrupt_connection_sign: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn record(&mut self, suite: &'static str, name: &str, tolerance: f64, outcome: Result<f64>) {
        let (residual, note) = match outcome {
            Ok(r) => (r, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        self.checks.push(Check {
            suite,
            name: name.to_string(),
            residual,
            tolerance,
            passed: residual.is_finite() && residual < tolerance,
            note,
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(
                f,
                "{:<5} {:<6} {:<36} residual {:>10.3e}  tolerance {:.0e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                c.residual,
                c.tolerance
            )?;
            if let Some(n) = &c.note {
                write!(f, "  ({n})")?;
            }
            writeln!(f)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Runs the invariant suites and collects one line per check.
pub fn run_verify(suite: Suite, options: VerifyOptions) -> VerifyReport {
    let mut report = VerifyReport::default();
    if matches!(suite, Suite::All | Suite::Pure) {
        pure_suite(&mut report, options);
    }
    if matches!(suite, Suite::All | Suite::Mixed) {
        mixed_suite(&mut report, options);
    }
    if matches!(suite, Suite::All | Suite::Zoo) {
        zoo_suite(&mut report, options);
    }
    report
}

fn plan() -> DifferentiationPlan {
    DifferentiationPlan::default()
}

fn rng_for(options: VerifyOptions, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    rng.set_stream(stream);
    rng
}

fn random_point(rng: &mut impl Rng, k: usize) -> ParamPoint {
    ParamPoint::from((0..k).map(|_| rng.gen_range(-PI..PI)).collect::<Vec<_>>())
}

fn unit_direction(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-3);
    v.into_iter().map(|x| x / n).collect()
}

fn worst(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0_f64, |acc, v| Ok(acc.max(v?)))
}

fn pure_models(options: VerifyOptions) -> Result<Vec<(ParameterizedModel, ParamPoint)>> {
    Ok(vec![
        (paramagnet(1.0), ParamPoint::from([1.1, 0.4])),
        (twoband(1.0), ParamPoint::from([0.6, -0.9])),
        (make_random_model(options.seed, 3, 2)?, ParamPoint::from([0.3, -0.2])),
    ])
}

fn pure_suite(report: &mut VerifyReport, options: VerifyOptions) {
    const S: &str = "pure";
    let models = match pure_models(options) {
        Ok(m) => m,
        Err(e) => return report.record(S, "model-construction", 0.0, Err(e)),
    };

    let mut rng = rng_for(options, 1);
    let gauge = worst(models.iter().flat_map(|(m, r)| {
        let chis: Vec<[f64; 3]> = (0..10)
            .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect();
        chis.into_iter().map(move |a| {
            let base = fubini_study_qgt(m, r, &plan())?;
            let field = ground_state_field(m, r)?;
            let dressed = |p: &ParamPoint| {
                let x = p.coords();
                let chi = a[0] + a[1] * x[0].sin() + a[2] * x[0] * x[1];
                Ok(field(p)? * C64::from_polar(1.0, chi))
            };
            Ok(qgt_from_state_field(dressed, r, &plan())?.max_abs_diff(&base))
        })
    }));
    report.record(S, "fs-qgt-gauge-invariance", 1e-8, gauge);

    let herm = worst(models.iter().map(|(m, r)| {
        let field = ground_state_field(m, r)?;
        let psi = field(r)?;
        let d: Vec<_> = (0..r.dim()).map(|mu| fd_derivative(&field, r, mu, &plan())).collect::<Result<_>>()?;
        let g = |i: usize, j: usize| d[i].dotc(&d[j]) - psi.dotc(&d[i]).conj() * psi.dotc(&d[j]);
        let mut e = 0.0_f64;
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                e = e.max((g(j, i) - g(i, j).conj()).norm());
            }
        }
        Ok(e)
    }));
    report.record(S, "fs-qgt-hermiticity", 1e-10, herm);

    let mut rng = rng_for(options, 2);
    for &h in &[1e-2, 1e-3] {
        let dirs: Vec<Vec<f64>> = (0..10).map(|_| unit_direction(&mut rng, 2)).collect();
        let res = worst(models.iter().flat_map(|(m, r)| {
            dirs.iter().map(move |d| {
                let g = fubini_study_qgt(m, r, &plan())?.metric();
                let a = ground_state(m, r)?;
                let b = ground_state(m, &r.displaced(d, h))?;
                let ratio = fubini_study_distance(&a, &b)? / (h * h * g.quadratic_form(d));
                Ok((ratio - 1.0).abs())
            })
        }));
        report.record(S, &format!("fs-distance-metric-h{h:e}"), 10.0 * h, res);
    }

    let mut rng = rng_for(options, 3);
    let berry = (|| {
        let m = paramagnet(1.0);
        let path = ParamLoop::coordinate_circle(&ParamPoint::from([0.9, 0.0]), 1, 64)?;
        let states: Vec<PureState> = path.open_points().iter().map(|p| ground_state(&m, p)).collect::<Result<_>>()?;
        let gamma = berry_phase_of_states(&states)?;
        let mut e = 0.0_f64;
        for _ in 0..10 {
            let dressed: Vec<PureState> = states.iter().map(|s| s.with_phase(rng.gen_range(-PI..PI))).collect();
            let g2 = berry_phase_of_states(&dressed)?;
            e = e.max(C64::from_polar(1.0, g2 - gamma).arg().abs());
        }
        Ok(e)
    })();
    report.record(S, "berry-phase-gauge-invariance", 1e-10, berry);

    let cp1 = (|| {
        let m = paramagnet(1.0);
        let mut metric = 0.0_f64;
        let mut curv = 0.0_f64;
        for i in 0..8 {
            let theta = 0.2 + 2.7 * i as f64 / 7.0;
            let r = ParamPoint::from([theta, 0.3 * i as f64]);
            let q = fubini_study_qgt(&m, &r, &plan())?;
            metric = metric.max(q.metric().max_abs_diff(&paramagnet_fs_closed_form(theta)));
            curv = curv.max((q.curvature().get(0, 1) - 0.25 * theta.sin()).abs());
        }
        Ok((metric, curv))
    })();
    report.record(S, "cp1-fubini-study-metric", 1e-8, cp1.clone().map(|x| x.0));
    report.record(S, "cp1-berry-curvature", 1e-8, cp1.map(|x| x.1));

    let mut rng = rng_for(options, 4);
    let pyth = worst(models.iter().flat_map(|(m, r)| {
        let fields: Vec<[f64; 4]> = (0..5).map(|_| [0; 4].map(|_| rng.gen_range(-1.0..1.0))).collect();
        fields.into_iter().map(move |a| {
            let theta = |p: &ParamPoint| {
                let x = p.coords();
                a[0] * x[0] + a[1] * x[1] + a[2] * x[0].sin() * x[1].cos() + a[3]
            };
            Ok(check_pure_pythagorean(m, r, theta, &plan())?.residual)
        })
    }));
    report.record(S, "pythagorean-pure", 1e-6, pyth);
}

fn random_thermal(seed: u64, i: usize) -> Result<(ParameterizedModel, usize)> {
    let n = 2 + i % 3;
    let k = 2 + (i / 3) % 2;
    let t = [0.2, 1.0, 5.0][(i / 6) % 3];
    Ok((make_random_model(seed.wrapping_add(i as u64), n, k)?.with_temperature(t)?, k))
}

fn random_bloch_field(rng: &mut impl Rng) -> impl Fn(&ParamPoint) -> Result<BlochVector> {
    let a0: [f64; 3] = [0; 3].map(|_| rng.gen_range(-0.15..0.15));
    let b: [[f64; 3]; 2] = [0; 2].map(|_| [0; 3].map(|_| rng.gen_range(-0.1..0.1)));
    move |p: &ParamPoint| {
        let x = p.coords();
        BlochVector::new([0, 1, 2].map(|i| a0[i] + x[0].sin() * b[0][i] + x[1].sin() * b[1][i]))
    }
}

fn mixed_suite(report: &mut VerifyReport, options: VerifyOptions) {
    const S: &str = "mixed";
    let mut rng = rng_for(options, 10);
    let draws: Vec<(ParameterizedModel, ParamPoint)> = match (0..200)
        .map(|i| {
            let (m, k) = random_thermal(options.seed.wrapping_mul(1000), i)?;
            Ok((m, random_point(&mut rng, k)))
        })
        .collect::<Result<_>>()
    {
        Ok(d) => d,
        Err(e) => return report.record(S, "model-construction", 0.0, Err(e)),
    };

    let mut uvb = 0.0_f64;
    let mut trace = 0.0_f64;
    let outcome: Result<()> = draws.iter().try_for_each(|(m, r)| {
        let jet = thermal_jet(m, r, &plan())?;
        uvb = uvb.max(jet.uhlmann_metric().max_abs_diff(&jet.bures_metric()));
        trace = jet.connection_traces().iter().fold(trace, |a, z| a.max(z.norm()));
        Ok(())
    });
    report.record(S, "uhlmann-equals-bures", 1e-8, outcome.clone().map(|_| uvb));
    report.record(S, "uhlmann-connection-trace", 1e-12, outcome.map(|_| trace));

    let mut form_cases: Vec<(ParameterizedModel, ParamPoint)> = Vec::new();
    for (m, t, r) in [
        (paramagnet(1.0), 0.5, [1.0, 0.4]),
        (paramagnet(1.0), 0.1, [2.2, 5.0]),
        (twoband(1.0), 0.3, [0.7, -1.9]),
        (twoband(1.0), 1.0, [-2.5, 0.1]),
    ] {
        if let Ok(m) = m.with_temperature(t) {
            form_cases.push((m, ParamPoint::from(r)));
        }
    }
    form_cases.extend(draws.iter().step_by(8).cloned());
    let form = worst(form_cases.iter().map(|(m, r)| Ok(uhlmann_form(m, r, &plan())?.max_abs())));
    report.record(S, "uhlmann-form-vanishes", 1e-8, form);

    let mut rng = rng_for(options, 11);
    let iso = worst((0..100).map(|_| {
        let n = rng.gen_range(2..=4);
        let a = sample::density_matrix(&mut rng, n);
        let b = sample::density_matrix(&mut rng, n);
        let v = sample::unitary(&mut rng, n);
        Ok((bures_distance(&a, &b)? - bures_distance(&a.conjugated(&v)?, &b.conjugated(&v)?)?).abs())
    }));
    report.record(S, "bures-unitary-invariance", 1e-10, iso);

    let mut rng = rng_for(options, 12);
    let hier = worst((0..1000).map(|_| {
        let n = rng.gen_range(2..=4);
        let a = sample::density_matrix(&mut rng, n);
        let b = sample::density_matrix(&mut rng, n);
        let db = bures_distance_squared(&a, &b)?;
        let ds = sjoqvist_distance_squared(&a, &b)?;
        Ok((-db).max(db - ds).max(ds - 2.0).max(0.0))
    }));
    report.record(S, "distance-hierarchy", 1e-12, hier);
    let commuting = worst((0..200).map(|_| {
        let n = rng.gen_range(2..=4);
        let (a, b) = sample::commuting_pair(&mut rng, n);
        Ok((bures_distance_squared(&a, &b)?.sqrt() - sjoqvist_distance_squared(&a, &b)?.sqrt()).abs())
    }));
    report.record(S, "commuting-bures-equals-sjoqvist", 1e-10, commuting);

    let mut rng = rng_for(options, 13);
    for &h in &[1e-2, 1e-3] {
        let res = worst(form_cases.iter().take(4).flat_map(|(m, r)| {
            let dirs: Vec<Vec<f64>> = (0..10).map(|_| unit_direction(&mut rng, 2)).collect();
            dirs.into_iter().map(move |d| {
                let g = thermal_jet(m, r, &plan())?.bures_metric();
                let moved = m.rho(&r.displaced(&d, h))?;
                let ratio = bures_distance_squared(&m.rho(r)?, &moved)? / (h * h * g.quadratic_form(&d));
                Ok((ratio - 1.0).abs())
            })
        }));
        report.record(S, &format!("bures-distance-metric-h{h:e}"), 10.0 * h, res);
    }

    let mut rng = rng_for(options, 14);
    let mut bloch = 0.0_f64;
    let mut a12 = 0.0_f64;
    let outcome: Result<()> = (0..20).try_for_each(|_| {
        let a = random_bloch_field(&mut rng);
        let r = random_point(&mut rng, 2);
        let g_bloch = bures_metric_bloch(&a, &r, &plan())?;
        let jet = density_jet(|p: &ParamPoint| bloch_compose(&a(p)?), &r, &plan())?;
        bloch = bloch.max(g_bloch.max_abs_diff(&jet.bures_metric()));
        let b = |p: &ParamPoint| -> Result<f64> { Ok((0.25 - a(p)?.norm().powi(2)).sqrt()) };
        let db: Vec<f64> = (0..2).map(|mu| fd_derivative(b, &r, mu, &plan())).collect::<Result<_>>()?;
        let hs = jet.hilbert_schmidt_metric();
        let sum = MetricTensor::from_fn(2, |m, n| hs.get(m, n) + db[m] * db[n]);
        a12 = a12.max(sum.max_abs_diff(&jet.bures_metric()));
        Ok(())
    });
    report.record(S, "bloch-bures-consistency", 1e-8, outcome.clone().map(|_| bloch));
    report.record(S, "bloch-determinant-identity", 1e-8, outcome.map(|_| a12));

    let hol = (|| {
        let m = paramagnet(1.0).with_temperature(0.5)?;
        let path = ParamLoop::coordinate_circle(&ParamPoint::from([1.0, 0.0]), 1, 64)?;
        let h = uhlmann_holonomy(&m, &path, &plan())?;
        let back = uhlmann_holonomy(&m, &path.reversed(), &plan())?;
        Ok((unitarity_error(&h), max_abs(&(back - h.adjoint()))))
    })();
    report.record(S, "holonomy-unitarity", 1e-8, hol.clone().map(|x| x.0));
    report.record(S, "holonomy-reverse-adjoint", 1e-8, hol.map(|x| x.1));

    let mut rng = rng_for(options, 15);
    let sign = if options.corrupt_connection_sign { -1.0 } else { 1.0 };
    let mut cases: Vec<(ParameterizedModel, ParamPoint)> = Vec::new();
    if let Ok(m) = paramagnet(1.0).with_temperature(0.7) {
        cases.push((m, ParamPoint::from([1.2, 0.5])));
    }
    if let Ok(m) = make_random_model(options.seed, 3, 2).and_then(|m| m.with_temperature(1.0)) {
        cases.push((m, ParamPoint::from([0.3, -0.4])));
    }
    let pyth = worst(cases.iter().flat_map(|(m, r)| {
        let gauges: Vec<GaugeField> = (0..10).map(|_| GaugeField::random(&mut rng, m.dim(), r.clone())).collect();
        gauges
            .into_iter()
            .map(move |g| Ok(mixed_pythagorean_with_sign(m, r, &g, &plan(), sign)?.residual))
    }));
    report.record(S, "pythagorean-mixed", 1e-6, pyth);
}

fn grid16(lo: f64, hi: f64, endpoint: bool) -> Vec<f64> {
    let d = if endpoint { 15.0 } else { 16.0 };
    (0..16).map(|i| lo + (hi - lo) * i as f64 / d).collect()
}

const ZOO_TEMPERATURES: [f64; 4] = [0.1, 0.5, 1.0, 5.0];

fn zoo_suite(report: &mut VerifyReport, options: VerifyOptions) {
    const S: &str = "zoo";

    let para = worst(ZOO_TEMPERATURES.iter().flat_map(|&t| {
        let thetas = grid16(0.05, PI - 0.05, true);
        let phis = grid16(0.0, 2.0 * PI, false);
        thetas.into_iter().flat_map(move |th| {
            let phis = phis.clone();
            phis.into_iter().map(move |ph| {
                let m = paramagnet(1.0).with_temperature(t)?;
                let g = thermal_jet(&m, &ParamPoint::from([th, ph]), &plan())?.bures_metric();
                Ok(g.max_abs_diff(&paramagnet_bures_closed_form(th, t, 1.0)))
            })
        })
    }));
    report.record(S, "paramagnet-bures-closed-form", 1e-8, para);

    let ks = grid16(-PI, PI, false);
    let mut closed = 0.0_f64;
    let mut sym_closed = 0.0_f64;
    let mut sym_numeric = 0.0_f64;
    let mut peaks = 0.0_f64;
    let mut offdiag = 0.0_f64;
    let outcome: Result<()> = ZOO_TEMPERATURES.iter().try_for_each(|&t| {
        let m = twoband(1.0).with_temperature(t)?;
        let mut num = vec![vec![MetricTensor::zeros(2); 16]; 16];
        for (i, &kx) in ks.iter().enumerate() {
            for (j, &ky) in ks.iter().enumerate() {
                let g = thermal_jet(&m, &ParamPoint::from([kx, ky]), &plan())?.bures_metric();
                closed = closed.max(g.max_abs_diff(&twoband_bures_closed_form(kx, ky, 1.0, t)));
                num[i][j] = g;
            }
        }
        // (kx, ky) -> (ky, kx) sits at (j, i); (kx, ky) -> (-ky, kx) at ((16 - j) % 16, i)
        for i in 0..16 {
            for j in 0..16 {
                let g = &num[i][j];
                let swap = &num[j][i];
                let rot = &num[(16 - j) % 16][i];
                let relations = [
                    g.get(0, 0) - swap.get(1, 1),
                    g.get(0, 1) - swap.get(0, 1),
                    g.get(0, 0) - rot.get(1, 1),
                    g.get(0, 1) + rot.get(0, 1),
                ];
                sym_numeric = relations.iter().fold(sym_numeric, |a, x| a.max(x.abs()));
                let (kx, ky) = (ks[i], ks[j]);
                let c = twoband_bures_closed_form(kx, ky, 1.0, t);
                let cs = twoband_bures_closed_form(ky, kx, 1.0, t);
                let cr = twoband_bures_closed_form(-ky, kx, 1.0, t);
                let relations = [c.get(0, 0) - cs.get(1, 1), c.get(0, 1) - cs.get(0, 1), c.get(0, 0) - cr.get(1, 1), c.get(0, 1) + cr.get(0, 1)];
                sym_closed = relations.iter().fold(sym_closed, |a, x| a.max(x.abs()));
            }
        }
        let trace = |i: usize, j: usize| num[i % 16][j % 16].get(0, 0) + num[i % 16][j % 16].get(1, 1);
        let mut maxima = Vec::new();
        for i in 0..16 {
            for j in 0..16 {
                let v = trace(i, j);
                let neighbours = [(i + 1, j), (i + 15, j), (i, j + 1), (i, j + 15)];
                if neighbours.iter().all(|&(a, b)| v > trace(a, b)) {
                    maxima.push((i, j));
                }
            }
        }
        let expected = [(0, 0), (0, 8), (8, 0), (8, 8)];
        let mismatched = maxima.iter().filter(|p| !expected.contains(p)).count()
            + expected.iter().filter(|p| !maxima.contains(p)).count();
        peaks = peaks.max(mismatched as f64);
        for (i, j) in expected {
            offdiag = offdiag.max(num[i][j].get(0, 1).abs());
        }
        Ok(())
    });
    report.record(S, "twoband-bures-closed-form", 1e-8, outcome.clone().map(|_| closed));
    report.record(S, "twoband-symmetry-closed-form", 1e-8, outcome.clone().map(|_| sym_closed));
    report.record(S, "twoband-symmetry-numerical", 1e-8, outcome.clone().map(|_| sym_numeric));
    report.record(S, "twoband-peaks-at-critical-momenta", 0.5, outcome.clone().map(|_| peaks));
    report.record(S, "twoband-offdiagonal-at-peaks", 1e-8, outcome.map(|_| offdiag));

    let mut rng = rng_for(options, 20);
    let gibbs = worst((0..50).map(|_| {
        let n = rng.gen_range(2..=5);
        let h = sample::hermitian(&mut rng, n);
        let t = rng.gen_range(0.05..5.0);
        let rho = gibbs_state(&h, t)?;
        let e = spectral_decompose(&h)?.eigenvalues;
        let z: f64 = e.iter().map(|x| (-(x - e[0]) / t).exp()).sum();
        let w = rho.eigenvalues();
        let mut err = (w.iter().sum::<f64>() - 1.0).abs();
        for (i, x) in e.iter().enumerate() {
            let expected = (-(x - e[0]) / t).exp() / z;
            err = err.max((w[n - 1 - i] - expected).abs());
        }
        if w.iter().any(|x| *x <= 0.0) || w.windows(2).any(|p| p[0] > p[1]) {
            err = f64::INFINITY;
        }
        Ok(err)
    }));
    report.record(S, "gibbs-spectrum", 1e-12, gibbs);

    let mut rng = rng_for(options, 21);
    let purif = worst((0..50).map(|_| {
        let n = rng.gen_range(2..=4);
        let rho = sample::density_matrix(&mut rng, n);
        let u: CMatrix = sample::unitary(&mut rng, n) * sample::unitary(&mut rng, n);
        let w = purify(&rho, &u)?;
        Ok(max_abs(&(w.rho() - rho.matrix())))
    }));
    report.record(S, "purification-gauge-freedom", 1e-10, purif);

    let bloch = worst([0.05, 0.3, 1.0, 4.0, 50.0].iter().map(|&t| {
        let m = paramagnet(1.0).with_temperature(t)?;
        let a = bloch_decompose(&m.rho(&ParamPoint::from([0.8, 1.3]))?)?;
        let expected = 0.5 * (0.5 / t).tanh();
        if a.norm() >= 0.5 {
            return Ok(f64::INFINITY);
        }
        Ok((a.norm() - expected).abs())
    }));
    report.record(S, "paramagnet-bloch-norm", 1e-12, bloch);
}
