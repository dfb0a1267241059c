use std::f64::consts::PI;

use qgt_core::scan::*;
use qgt_core::zoo::ModelSpec;
use qgt_core::Error;

const FIG1: &str = r#"
quantity = "bures-metric"
point = [0.7853981633974483, 0.0]
timestamp = "2026-01-01T00:00:00Z"

[model]
name = "paramagnet"

[temperature]
min = 0.01
max = 5.0
count = 200
"#;

#[test]
fn paramagnet_temperature_scan() {
    let cfg = ScanConfig::from_toml_str(FIG1).unwrap();
    let t = run_scan(&cfg).unwrap();
    assert_eq!(t.rows.len(), 200);
    assert_eq!(t.columns, ["T", "g_B[0][0]", "g_B[0][1]", "g_B[1][0]", "g_B[1][1]"]);
    let temps = t.column("T").unwrap();
    let g = t.column("g_B[0][0]").unwrap();
    for (temp, g) in temps.iter().zip(&g) {
        assert!((g - 0.25 * (0.5 / temp).tanh().powi(2)).abs() < 1e-8);
    }
    assert!(t.warnings.is_empty());
    assert_eq!(t.metadata["timestamp"], "2026-01-01T00:00:00Z");
}

#[test]
fn twoband_brillouin_zone_scan() {
    let mut cfg = ScanConfig::new(Quantity::BuresMetric, ModelSpec { temperature: Some(0.1), ..ModelSpec::named("twoband") });
    cfg.axes = ["kx", "ky"]
        .iter()
        .map(|p| Axis {
            param: p.to_string(),
            min: -PI,
            max: PI,
            count: 64,
            endpoint: false,
        })
        .collect();
    let t = run_scan(&cfg).unwrap();
    assert_eq!(t.rows.len(), 64 * 64);
    let kx = t.column("kx").unwrap();
    let gxy = t.column("g_B[0][1]").unwrap();
    let mut hits = 0;
    for (k, g) in kx.iter().zip(&gxy) {
        if k.abs() < 1e-12 || (k.abs() - PI).abs() < 1e-12 {
            assert!(g.abs() < 1e-8, "kx={k}: {g}");
            hits += 1;
        }
    }
    assert_eq!(hits, 2 * 64);
}

#[test]
fn one_point_axis_rejected() {
    let mut cfg = ScanConfig::new(Quantity::FsQgt, ModelSpec::named("paramagnet"));
    cfg.point = Some(vec![1.0, 0.0]);
    cfg.axes.push(Axis {
        param: "theta".into(),
        min: 0.1,
        max: 1.0,
        count: 1,
        endpoint: true,
    });
    match run_scan(&cfg) {
        Err(Error::Config { field, .. }) => assert_eq!(field, "axis[0].count"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn config_errors_name_the_field() {
    let cases = [
        ("quantity = \"bures-metric\"\npoint=[1.0,0.0]\n[model]\nname = \"paramagnet\"\n", "temperature"),
        ("quantity = \"fs-qgt\"\n[model]\nname = \"nope\"\n", "model.name"),
        ("quantity = \"berry-phase\"\npoint=[1.0,0.0]\n[model]\nname = \"paramagnet\"\n", "loop"),
        ("quantity = \"fs-qgt\"\n[model]\nname = \"paramagnet\"\n[[axis]]\nparam = \"x\"\nmin = 0\nmax = 1\ncount = 3\n", "axis[0].param"),
        ("quantity = \"fs-qgt\"\npoint=[1.0,0.0]\n[model]\nname = \"paramagnet\"\n[fd]\nscheme = \"forward\"\n", "fd.scheme"),
    ];
    for (text, field) in cases {
        match ScanConfig::from_toml_str(text).and_then(|c| run_scan(&c)) {
            Err(Error::Config { field: f, .. }) => assert_eq!(f, field, "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
    assert!(matches!(ScanConfig::from_toml_str("quantity = \"nope\""), Err(Error::Config { .. })));
}

#[test]
fn failing_rows_become_nan() {
    // at T = 1e-3 the excited weight underflows and the state is rank deficient
    let mut cfg = ScanConfig::new(Quantity::BuresMetric, ModelSpec::named("paramagnet"));
    cfg.point = Some(vec![1.0, 0.0]);
    cfg.temperature = Some(TemperatureGrid {
        values: Some(vec![1e-3, 0.5]),
        ..Default::default()
    });
    let t = run_scan(&cfg).unwrap();
    assert_eq!(t.rows.len(), 2);
    assert!(t.rows[0][1].is_nan());
    assert_eq!(t.failed_rows(), 1);
    assert_eq!(t.warnings.len(), 1);
    assert!(t.warnings_text().starts_with("row 0: density matrix is rank deficient"));
    assert!((t.rows[1][1] - 0.25 * 1.0_f64.tanh().powi(2)).abs() < 1e-8);
    assert!(t.to_csv().unwrap().lines().any(|l| l == "0.001,nan,nan,nan,nan"));
    assert!(t.to_json().unwrap().contains("null"));
}

#[test]
fn every_quantity_runs() {
    for q in Quantity::ALL {
        let mut cfg = ScanConfig::new(q, ModelSpec { temperature: Some(0.5), ..ModelSpec::named("paramagnet") });
        cfg.point = Some(vec![1.0, 0.3]);
        cfg.loop_spec = Some(LoopSpec {
            param: Some("phi".into()),
            count: 64,
            points: None,
        });
        cfg.pair = Some(PairSpec {
            reference: None,
            offset: Some(vec![0.1, 0.2]),
        });
        if q == Quantity::TSweep {
            cfg.temperature = Some(TemperatureGrid {
                values: Some(vec![1.0, 0.1]),
                ..Default::default()
            });
        }
        let t = run_scan(&cfg).unwrap_or_else(|e| panic!("{q}: {e}"));
        assert!(!t.rows.is_empty(), "{q}");
        assert!(t.warnings.is_empty(), "{q}: {:?}", t.warnings);
    }
}

#[test]
fn serial_and_parallel_agree() {
    let mut cfg = ScanConfig::new(Quantity::PythagoreanMixed, ModelSpec { temperature: Some(1.0), ..ModelSpec::named("random") });
    cfg.seed = 11;
    cfg.timestamp = Some("pinned".into());
    cfg.axes = ["r0", "r1"]
        .iter()
        .map(|p| Axis {
            param: p.to_string(),
            min: -1.0,
            max: 1.0,
            count: 4,
            endpoint: true,
        })
        .collect();
    cfg.threads = 1;
    let serial = run_scan(&cfg).unwrap();
    cfg.threads = 4;
    let parallel = run_scan(&cfg).unwrap();
    assert_eq!(serial.to_csv().unwrap(), parallel.to_csv().unwrap());
    assert!(serial.column("residual").unwrap().iter().all(|r| *r < 1e-6));
}

#[test]
fn verify_mixed_reports_uhlmann_line() {
    let report = run_verify(Suite::Mixed, VerifyOptions::new(7));
    let line = report.get("uhlmann-equals-bures").unwrap();
    assert!(line.passed && line.residual < 1e-8);
    assert!(report.to_string().contains("uhlmann-equals-bures"));
}

#[test]
fn verify_all_passes() {
    let report = run_verify(Suite::All, VerifyOptions::new(7));
    println!("{report}");
    assert!(report.passed());
}

#[test]
fn corrupted_connection_sign_fails_mixed_pythagorean() {
    let report = run_verify(
        Suite::Mixed,
        VerifyOptions {
            seed: 7,
            corrupt_connection_sign: true,
        },
    );
    assert!(!report.get("pythagorean-mixed").unwrap().passed);
    assert_eq!(report.failures().count(), 1);
}
