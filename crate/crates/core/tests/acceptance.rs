//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Rows failing inside a criterion are listed under it.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use lagmhd::audit::{audit_law, SchemeRef};
use lagmhd::boundary::BoundaryClosure;
use lagmhd::circuit::{circuit_step, CircuitParams};
use lagmhd::config::Built;
use lagmhd::eos::EosKind;
use lagmhd::mesh::MeshSpec;
use lagmhd::profiles::{reference_state, SmoothRandom};
use lagmhd::railgun::{self, ExperimentCase, RailgunConfig};
use lagmhd::schemes::finite_sigma::{EnergyForm, FiniteSigma};
use lagmhd::schemes::infinite_sigma::{InfSigmaVariant, InfiniteSigma};
use lagmhd::state::{init_state, CircuitState, PhysicsParams, StateLayer, TimeWindow};
use lagmhd::suites::{self, SuiteReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

struct Verdict {
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self { pass, summary: summary.into(), notes: Vec::new() }
    }

    fn from_suite(rep: &SuiteReport, summary: impl Into<String>) -> Self {
        let notes = rep
            .rows
            .iter()
            .filter(|r| !r.pass)
            .map(|r| format!("{} / {}: {:e} vs {:?}", r.case, r.check, r.value, r.bound))
            .collect();
        Self { pass: rep.all_pass(), summary: summary.into(), notes }
    }
}

fn worst(rep: &SuiteReport, pick: impl Fn(&suites::SuiteRow) -> bool) -> f64 {
    rep.rows.iter().filter(|r| pick(r)).map(|r| r.value).fold(0.0, f64::max)
}

fn conservation() -> lagmhd::Result<Verdict> {
    let rep = suites::conservation_suite(TOL, 50)?;
    let asserted = rep.rows.iter().filter(|r| !matches!(r.bound, suites::Bound::Report)).count();
    let max = worst(&rep, |r| matches!(r.bound, suites::Bound::AtMost(_)));
    Ok(Verdict::from_suite(
        &rep,
        format!("{asserted} asserted laws over 50 steps, worst residual {max:.2e} <= {:.0e}", 100.0 * TOL),
    ))
}

fn angular() -> lagmhd::Result<Verdict> {
    let (mod1, mod0) = suites::angular_contrast(0.003, 100)?;
    let pass = mod1 <= 100.0 * TOL && mod0 >= 1e-4;
    Ok(Verdict::new(pass, format!("mod1 residual {mod1:.2e} <= 1e-8, mod0 drift {mod0:.2e} >= 1e-4")))
}

fn entropy() -> lagmhd::Result<Verdict> {
    let rep = suites::entropy_suite(TOL, 200)?;
    let ep = worst(&rep, |r| matches!(r.bound, suites::Bound::AtMost(_)));
    let cont = rep
        .rows
        .iter()
        .filter(|r| matches!(r.bound, suites::Bound::AtLeast(_)))
        .map(|r| r.value)
        .fold(f64::INFINITY, f64::min);
    Ok(Verdict::from_suite(&rep, format!("EP drift {ep:.2e} <= 1e-8, continuum drift {cont:.2e} >= 1e-5")))
}

fn convergence() -> lagmhd::Result<Verdict> {
    let rep = suites::convergence_suite()?;
    let centered = suites::observed_orders(0.5, 0.5)?;
    let generic = rep
        .rows
        .iter()
        .filter(|r| r.check.contains("tau/2)"))
        .map(|r| r.value)
        .fold(f64::INFINITY, f64::min);
    let mut v = Verdict::from_suite(
        &rep,
        format!(
            "combined order >= {generic:.2} (>= 0.8), alpha=beta=0.5: (h/2, tau/4) {:.2}, tau-halving {:.2} (>= 1.8)",
            centered.quarter_step, centered.temporal
        ),
    );
    v.pass &= centered.quarter_step >= 1.8;
    Ok(v)
}

fn symmetry() -> lagmhd::Result<Verdict> {
    let rep = suites::symmetry_suite(TOL)?;
    let admitted = rep.rows.iter().filter(|r| r.check.ends_with("Admitted")).count();
    let excluded = rep.rows.iter().filter(|r| r.check.ends_with("Excluded")).count();
    let max = worst(&rep, |r| r.check.ends_with("Admitted"));
    let ratio = rep
        .rows
        .iter()
        .filter(|r| r.check.ends_with("Excluded"))
        .map(|r| r.value)
        .fold(f64::INFINITY, f64::min);
    Ok(Verdict::from_suite(
        &rep,
        format!(
            "{admitted} admitted entries, worst residual {max:.2e} <= 1e-8; {excluded} excluded, weakest residual/eps {ratio:.2e} >= 1e-6"
        ),
    ))
}

fn kappa_scaling() -> lagmhd::Result<Verdict> {
    use lagmhd::eos::ConductivityModel;
    let k = 4.0 * PI;
    let mut worst = 0.0f64;
    for sigma in [
        ConductivityModel::Constant { sigma0: 2.0 * k },
        ConductivityModel::Exponential { sigma0: 2.0 * k, beta: 0.5, rho0: 1.0 },
    ] {
        worst = worst.max(suites::kappa_scaling_gap(k, sigma, 100)?);
    }
    Ok(Verdict::new(worst <= 1e-8, format!("kappa = 4pi vs rescaled kappa = 1 after 100 steps: {worst:.2e} <= 1e-8")))
}

fn spread(s: &FiniteSigma, cur: &StateLayer, next: &StateLayer, tau: f64) -> f64 {
    let forms: Vec<Vec<f64>> =
        [EnergyForm::Internal, EnergyForm::SemiDivergent, EnergyForm::Divergent].map(|f| s.energy_form(cur, next, tau, f)).into();
    let mut out = 0.0f64;
    for (i, a) in forms.iter().enumerate() {
        for b in &forms[i + 1..] {
            out = a.iter().zip(b).fold(out, |m, (x, y)| m.max((x - y).abs()));
        }
    }
    out
}

fn random_layers(base: &StateLayer, rng: &mut ChaCha8Rng) -> Vec<StateLayer> {
    (0..3)
        .map(|_| {
            let mut l = base.clone();
            for v in [&mut l.u, &mut l.v, &mut l.w, &mut l.hy, &mut l.hz, &mut l.p, &mut l.eps] {
                v.iter_mut().for_each(|x| *x += rng.gen_range(-0.1..0.1));
            }
            l.rho.iter_mut().for_each(|x| *x *= rng.gen_range(0.9..1.1));
            l
        })
        .collect()
}

fn energy_forms() -> lagmhd::Result<Verdict> {
    let mut finite_gap = 0.0f64;
    let mut windows = 0;
    for sc in suites::scenarios(TOL, 1)? {
        let (Built::OneComponent(s) | Built::Extended(s)) = &sc.built else { continue };
        for w in sc.run(50)?.windows(2) {
            finite_gap = finite_gap.max(spread(s, &w[0], &w[1], sc.mesh.tau));
            windows += 1;
        }
    }
    let cfg = RailgunConfig::preset(ExperimentCase::HighVoltage);
    let s = railgun::scheme(&cfg);
    let mut l = railgun::initial_layer(&cfg, &s)?;
    for _ in 0..40 {
        let next = s.step_extended(&l, cfg.tau)?.0;
        finite_gap = finite_gap.max(spread(&s, &l, &next, cfg.tau));
        windows += 1;
        l = next;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mesh = MeshSpec::new(1.0, 20, 0.004)?;
    let mut mod1_gap = 0.0f64;
    for eos in [
        EosKind::Continuum { gamma: 5.0 / 3.0 },
        EosKind::EntropyInteger { gamma: 2 },
        EosKind::EntropyInteger { gamma: 3 },
        EosKind::EntropyInteger { gamma: 4 },
    ] {
        let phys = PhysicsParams { gamma: eos.gamma(), kappa: 1.0, h0: 0.8 };
        let mut s = InfiniteSigma::new(InfSigmaVariant::Mod1 { eos }, phys, BoundaryClosure::walls(), mesh.h);
        s.alpha = 0.4;
        let base = init_state(&mesh, &phys, &SmoothRandom::new(3, reference_state(true), 1.0, 0.1))?;
        for _ in 0..20 {
            let ls = random_layers(&base, &mut rng);
            let win = TimeWindow { prev: Some(&ls[0]), cur: &ls[1], next: Some(&ls[2]), tau: mesh.tau };
            let law = audit_law("T3.10", &win, SchemeRef::Infinite(&s))?;
            let gap = s.energy_law_gap(&ls[0], &ls[1], &ls[2], mesh.tau)?;
            mod1_gap = law.iter().zip(&gap).fold(mod1_gap, |m, (a, b)| m.max((a - b).abs() / (1.0 + b.abs())));
        }
    }
    let pass = finite_gap <= 100.0 * TOL && mod1_gap <= 1e-11;
    Ok(Verdict::new(
        pass,
        format!(
            "finite-sigma form spread {finite_gap:.2e} <= 1e-8 over {windows} steps; mod1 three- vs two-layer {mod1_gap:.2e} <= 1e-11"
        ),
    ))
}

fn railgun_runs() -> lagmhd::Result<Verdict> {
    let run = |case| railgun::run_case(&RailgunConfig::preset(case));
    let low = run(ExperimentCase::LowVoltage)?;
    let high = run(ExperimentCase::HighVoltage)?;
    let plus = run(ExperimentCase::Longitudinal { sign: 1.0 })?;
    let minus = run(ExperimentCase::Longitudinal { sign: -1.0 })?;
    let mut notes = Vec::new();
    let min_low = low.min_front_velocity();
    if min_low <= 0.0 {
        notes.push(format!("case 1 front velocity drops to {min_low:e}"));
    }
    let reversal = high.reversal_time().filter(|t| *t < 0.7);
    if reversal.is_none() {
        notes.push("case 2 front never reverses".into());
    }
    let (a, b) = (&plus.final_state, &minus.final_state);
    let gap = |x: &[f64], y: &[f64]| x.iter().zip(y).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
    let x_gap = [gap(&a.rho, &b.rho), gap(&a.p, &b.p), gap(&a.u, &b.u), gap(&a.x, &b.x), gap(&a.hy, &b.hy)]
        .into_iter()
        .fold(0.0, f64::max);
    let drift = |l: &StateLayer, i: usize| (l.y[i] - plus.config.v0 * l.t, l.v[i] - plus.config.v0);
    let y_gap = (0..a.nodes())
        .map(|i| {
            let ((ya, va), (yb, vb)) = (drift(a, i), drift(b, i));
            (ya + yb).abs().max((va + vb).abs())
        })
        .fold(0.0, f64::max);
    let spread = (0..a.nodes()).map(|i| drift(a, i).0.abs()).fold(0.0, f64::max);
    if x_gap > 1e-8 || y_gap > 1e-8 || spread < 1e-6 {
        notes.push(format!("case 3 x-field gap {x_gap:e}, y mirror gap {y_gap:e}, transverse drift {spread:e}"));
    }
    let mut budget = 0.0f64;
    for (name, r) in [("case 1", &low), ("case 2", &high), ("case 3+", &plus), ("case 3-", &minus)] {
        let Some(rep) = &r.at_report else {
            notes.push(format!("{name} has no report at t = 0.64"));
            continue;
        };
        for l in rep.laws.iter().filter(|l| l.audited()) {
            budget = budget.max(l.max_relative_drift);
            if l.max_relative_drift > 1e-6 {
                notes.push(format!("{name} {} {} budget {:e}", l.id, l.name, l.max_relative_drift));
            }
        }
    }
    let summary = format!(
        "case 1 min front u {min_low:.3}, case 2 reversal at t = {}, case 3 x gap {x_gap:.1e} / y mirror {y_gap:.1e}, budgets at t = 0.64 {budget:.1e} <= 1e-6",
        reversal.map_or("never".into(), |t| format!("{t:.3}"))
    );
    Ok(Verdict { pass: notes.is_empty(), summary, notes })
}

fn circuit() -> lagmhd::Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut oracle = 0.0f64;
    for _ in 0..1000 {
        let p = CircuitParams {
            l0: rng.gen_range(1e-3..2.0),
            r0: rng.gen_range(0.0..3.0),
            c0: rng.gen_range(1e-2..3.0),
            v0: 0.0,
        };
        let cur = CircuitState { current: rng.gen_range(-2.0..2.0), voltage: rng.gen_range(-3.0..3.0) };
        let ez = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let tau = rng.gen_range(1e-4..0.1);
        // the residual is affine in the new state: sample it and solve by Cramer's rule
        let r = |j: f64, v: f64| p.residual(cur, CircuitState { current: j, voltage: v }, ez, tau);
        let r0 = r(0.0, 0.0);
        let (cj, cv) = (r(1.0, 0.0), r(0.0, 1.0));
        let a = [[cj[0] - r0[0], cv[0] - r0[0]], [cj[1] - r0[1], cv[1] - r0[1]]];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let j = (-r0[0] * a[1][1] + r0[1] * a[0][1]) / det;
        let v = (-r0[1] * a[0][0] + r0[0] * a[1][0]) / det;
        let got = circuit_step(cur, ez, tau, &p)?;
        let scale = 1.0 + j.abs().max(v.abs());
        oracle = oracle.max((got.current - j).abs().max((got.voltage - v).abs()) / scale);
    }
    let p = CircuitParams { l0: 0.0035, r0: 0.0, c0: 1.64, v0: 2.6 };
    let steps = 10_000;
    let round_off = steps as f64 * f64::EPSILON;
    let mut s = p.initial();
    let e0 = p.energy(s);
    let mut lc = 0.0f64;
    for _ in 0..steps {
        s = circuit_step(s, (0.0, 0.0), 0.003, &p)?;
        lc = lc.max((p.energy(s) - e0).abs() / e0);
    }
    let pass = oracle <= 1e-12 && lc <= round_off;
    Ok(Verdict::new(pass, format!("2x2 oracle gap {oracle:.1e} <= 1e-12, LC energy drift over 1e4 steps {lc:.1e} <= {round_off:.1e}")))
}

fn main() -> ExitCode {
    type Check = fn() -> lagmhd::Result<Verdict>;
    let criteria: [(&str, Check); 9] = [
        ("conservation catalogue", conservation),
        ("angular momentum contrast", angular),
        ("entropy preservation", entropy),
        ("convergence order", convergence),
        ("symmetry matrix", symmetry),
        ("kappa scaling", kappa_scaling),
        ("energy form equivalence", energy_forms),
        ("railgun reproduction", railgun_runs),
        ("circuit oracle", circuit),
    ];
    let results: Vec<_> = std::thread::scope(|sc| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                sc.spawn(move || {
                    let start = Instant::now();
                    (f(), start.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });
    let mut failed = 0;
    for (k, ((name, _), (res, dt))) in criteria.iter().zip(results).enumerate() {
        let v = res.unwrap_or_else(|e| Verdict::new(false, format!("error: {e}")));
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("{tag} {}. {name}: {} [{:.1}s]", k + 1, v.summary, dt.as_secs_f64());
        for n in &v.notes {
            println!("       {n}");
        }
        failed += !v.pass as usize;
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
