use super::*;
use crate::boundary::CellField;
use crate::state::CircuitState;

#[test]
fn closure_ghosts() {
    let cfg = RailgunConfig::preset(ExperimentCase::HighVoltage);
    let s = scheme(&cfg);
    let mut l = initial_layer(&cfg, &s).unwrap();
    let bc = boundary_closure();
    let k = cfg.kappa;
    assert_eq!(bc.cell_ghosts(CellField::Hy, &l, k).1, 0.0);
    l.circuit = Some(CircuitState { current: 0.5, voltage: 2.6 });
    let (left, right) = bc.cell_ghosts(CellField::Hy, &l, k);
    assert!((right - 2.0 * std::f64::consts::PI).abs() < 1e-14);
    assert_eq!(left, 0.0);
    l.p.fill(7.0);
    assert_eq!(bc.cell_ghosts(CellField::P, &l, k).0, 0.0);
    assert_eq!((bc.right.u, bc.right.ey), (Some(0.0), Some(0.0)));
}

#[test]
fn initial_bunch() {
    let cfg = RailgunConfig::preset(ExperimentCase::LowVoltage);
    let l = initial_layer(&cfg, &scheme(&cfg)).unwrap();
    assert_eq!(cfg.front_node(), 8);
    assert!((l.p[0] - 3.0).abs() < 1e-14 && (l.p[59] - 0.0056).abs() < 1e-14);
    assert!((l.u[0] - 0.75).abs() < 1e-14 && l.u[60] == 0.0);
    assert!(l.v.iter().all(|&v| v == 0.05));
    assert_eq!(l.circuit, Some(CircuitState { current: 0.0, voltage: 1.67 }));
}

#[test]
fn overrides() {
    let mut cfg = RailgunConfig::preset(ExperimentCase::HighVoltage);
    cfg.set("circuit.v0", "2.0").unwrap();
    cfg.set("cells", "30").unwrap();
    cfg.set("sigma.sigma0", "800").unwrap();
    assert_eq!(cfg.circuit.v0, 2.0);
    assert_eq!(cfg.cells, 30);
    assert!(matches!(cfg.sigma, crate::eos::ConductivityModel::Exponential { sigma0, .. } if sigma0 == 800.0));
    assert!(cfg.set("nonsense", "1").is_err());
    assert!(cfg.set("cells", "\"many\"").is_err());
    assert!(ExperimentCase::from_number(4).is_err());
}

#[test]
fn invalid_config_rejected() {
    let mut cfg = RailgunConfig::preset(ExperimentCase::LowVoltage);
    cfg.bunch_fraction = 0.0;
    assert!(run_case(&cfg).is_err());
}

#[test]
fn low_voltage_keeps_moving_high_voltage_reverses() {
    let low = run_case(&RailgunConfig::preset(ExperimentCase::LowVoltage)).unwrap();
    assert!(low.min_front_velocity() > 0.0);
    let high = run_case(&RailgunConfig::preset(ExperimentCase::HighVoltage)).unwrap();
    let t = high.reversal_time().expect("front reverses");
    assert!(t < 0.7);
    for a in [&low, &high] {
        let r = a.at_report.as_ref().unwrap();
        for l in r.laws.iter().filter(|l| l.audited()) {
            assert!(l.max_relative_drift < 1e-6, "{} {}", l.id, l.max_relative_drift);
        }
        assert!(a.circuit_drift < 1e-12);
    }
}

#[test]
fn longitudinal_sign_mirrors_transverse_motion() {
    let run = |sign| run_case(&RailgunConfig::preset(ExperimentCase::Longitudinal { sign })).unwrap();
    let (p, m) = (run(1.0), run(-1.0));
    let base = run_case(&RailgunConfig::preset(ExperimentCase::HighVoltage)).unwrap();
    let (a, b) = (&p.final_state, &m.final_state);
    let close = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(x, y)| (x - y).abs() <= 1e-8);
    assert!(close(&a.rho, &b.rho) && close(&a.p, &b.p) && close(&a.u, &b.u) && close(&a.x, &b.x));
    let v0 = p.config.v0;
    let t = a.t;
    for i in 0..a.nodes() {
        assert!((a.v[i] - v0 + (b.v[i] - v0)).abs() < 1e-8);
        assert!((a.y[i] - v0 * t + (b.y[i] - v0 * t)).abs() < 1e-8);
    }
    // the field drags the bunch sideways in the direction of H0
    let front = p.config.front_node();
    assert!(a.v[front - 2] > base.final_state.v[front - 2]);
    assert!(b.v[front - 2] < base.final_state.v[front - 2]);
}

#[test]
fn artifacts_written() {
    let mut cfg = RailgunConfig::preset(ExperimentCase::LowVoltage);
    cfg.t_max = 0.03;
    let a = run_case(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    a.write(dir.path()).unwrap();
    for f in ["circuit.csv", "trajectories.csv", "conservation.json", "case.json", "budgets.csv", "snapshots/0010.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let back: RailgunConfig = serde_json::from_str(&std::fs::read_to_string(dir.path().join("case.json")).unwrap()).unwrap();
    assert_eq!(back, cfg);
    assert_eq!(a.trajectory(0).len(), 11);
}
