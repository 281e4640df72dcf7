use super::*;

fn sol() -> (Scheme, Discrete) {
    regime_setup(Regime::ExtendedH0NonZero, 3).unwrap()
}

fn find(r: Regime, label: &str) -> SymmetryGenerator {
    generators(r).into_iter().map(|g| g.0).find(|g| g.label() == label).unwrap()
}

#[test]
fn space_translation_shifts_x_only() {
    let (_, d) = sol();
    let g = find(Regime::ExtendedH0NonZero, "X3");
    let t = transform_solution(&d, &g, 1.0).unwrap().sol;
    for (a, b) in d.layers.iter().zip(&t.layers) {
        assert!(a.x.iter().zip(&b.x).all(|(x, y)| (y - x - 1.0).abs() < 1e-14));
        assert_eq!(a.u, b.u);
        assert_eq!(a.rho, b.rho);
    }
    assert_eq!((t.h, t.tau), (d.h, d.tau));
}

#[test]
fn galilean_boost() {
    let (_, d) = sol();
    let g = find(Regime::ExtendedH0NonZero, "X4");
    let t = transform_solution(&d, &g, 0.3).unwrap().sol;
    let (a, b) = (&d.layers[2], &t.layers[2]);
    assert!((b.u[3] - a.u[3] - 0.3).abs() < 1e-14);
    assert!((b.x[3] - a.x[3] - 0.3 * a.t).abs() < 1e-14);
}

#[test]
fn quarter_rotation() {
    let (_, d) = sol();
    let g = find(Regime::ExtendedH0NonZero, "X5");
    let t = transform_solution(&d, &g, std::f64::consts::FRAC_PI_2).unwrap().sol;
    let (a, b) = (&d.layers[1], &t.layers[1]);
    let close = |x: f64, y: f64| (x - y).abs() < 1e-14;
    assert!(close(b.v[2], a.w[2]) && close(b.w[2], -a.v[2]));
    assert!(close(b.y[2], a.z[2]) && close(b.z[2], -a.y[2]));
    assert!(close(b.hy[2], a.hz[2]) && close(b.hz[2], -a.hy[2]));
    assert!(close(b.ey[2], a.ez[2]) && close(b.ez[2], -a.ey[2]));
}

fn max_diff(a: &Discrete, b: &Discrete) -> f64 {
    let mut d = (a.h - b.h).abs().max((a.tau - b.tau).abs()).max((a.s0 - b.s0).abs());
    for (x, y) in a.layers.iter().zip(&b.layers) {
        d = d.max((x.t - y.t).abs());
        for (f, g) in [(&x.u, &y.u), (&x.y, &y.y), (&x.ez, &y.ez), (&x.hy, &y.hy), (&x.p, &y.p), (&x.eps, &y.eps)] {
            d = f.iter().zip(g).fold(d, |m, (p, q)| m.max((p - q).abs()));
        }
    }
    d
}

#[test]
fn identity_and_group_law() {
    for r in Regime::ALL {
        let (_, d) = regime_setup(r, 5).unwrap();
        for (g, _) in generators(r) {
            let id = transform_solution(&d, &g, 0.0).unwrap().sol;
            assert!(max_diff(&d, &id) < 1e-15, "{}", g.label());
            let two = transform_solution(&transform_solution(&d, &g, 0.3).unwrap().sol, &g, 0.4).unwrap().sol;
            let one = transform_solution(&d, &g, 0.7).unwrap().sol;
            assert!(max_diff(&one, &two) < 1e-12, "{r:?} {}", g.label());
        }
    }
}

#[test]
fn coefficients_satisfy_mesh_conditions() {
    for r in Regime::ALL {
        let (_, d) = regime_setup(r, 5).unwrap();
        for (g, _) in generators(r) {
            assert!(transform_solution(&d, &g, 0.5).unwrap().mesh_residual < 1e-9, "{}", g.label());
        }
    }
}

#[test]
fn non_finite_parameter_rejected() {
    let (_, d) = sol();
    assert!(transform_solution(&d, &find(Regime::ExtendedH0NonZero, "X1"), f64::NAN).is_err());
    let x6 = find(Regime::IdealIsentropicH0NonZero, "X6");
    assert!(transform_solution(&d, &x6, 800.0).is_err());
}

#[test]
fn matrix_matches_expectations() {
    let m = symmetry_matrix(&Regime::ALL, 1e-10).unwrap();
    let failed: Vec<_> = m
        .entries
        .iter()
        .filter(|e| !e.pass)
        .map(|e| format!("{:?} {} expected={:?} base={:.1e} slope={:.1e} {:?}", e.regime, e.generator, e.expected, e.baseline, e.slope, e.residuals))
        .collect();
    assert!(failed.is_empty(), "{}", failed.join("\n"));
    assert!(m.to_json().unwrap().contains("X2a"));
    // the alternative one-component X6 is not a symmetry of the scheme
    let alt = m.entries.iter().find(|e| e.generator == "X6 alt").unwrap();
    assert!(alt.residuals[1].1 > 1e-3);
}
