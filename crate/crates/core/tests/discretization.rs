use std::f64::consts::PI;

use glmclean::discretization::{evolve, EvolveConfig, NoObserver, Observer, RunStatus};
use glmclean::scenarios::{
    minkowski_init, perturb, toy_init, InductionWave, ToyInit, ToyVariant, WaveMode,
};
use glmclean::state::{Boundary, FieldSnapshot, GridSpec, InductionParams, ToyParams};
use glmclean::{
    Ccz4Params, ConstraintReport, Discretization, EvolveError, Foccz4System, InductionSystem,
    ToySystem,
};

fn line_grid(n: usize, boundary: Boundary) -> GridSpec<f64> {
    GridSpec::new([n, 1, 1], [0.0, 0.0, 0.0], [1.0, 1.0, 1.0], [boundary; 3]).unwrap()
}

fn sample(g: &GridSpec<f64>, f: impl Fn([f64; 3]) -> f64) -> Vec<f64> {
    (0..g.n_points())
        .map(|p| {
            let (i, j, k) = g.unindex(p);
            f(g.position(i, j, k))
        })
        .collect()
}

#[test]
fn quartic_gradient_is_exact() {
    let b = Boundary::Extrapolate;
    let g = GridSpec::new([10, 9, 8], [-1.0, -0.5, 0.0], [1.0, 1.0, 1.2], [b; 3]).unwrap();
    let f = sample(&g, |x| {
        x[0].powi(4) + 2.0 * x[1].powi(4) - x[2].powi(4) + x[0] * x[1] * x[2]
    });
    let d = Discretization::new(&g, 0.0).unwrap();
    let grad = d.gradient(&f);
    for p in 0..g.n_points() {
        let (i, j, k) = g.unindex(p);
        let x = g.position(i, j, k);
        let exact = [
            4.0 * x[0].powi(3) + x[1] * x[2],
            8.0 * x[1].powi(3) + x[0] * x[2],
            -4.0 * x[2].powi(3) + x[0] * x[1],
        ];
        for a in 0..3 {
            assert!(
                (grad[a][p] - exact[a]).abs() < 1e-11,
                "axis {a} point {p}: {} vs {}",
                grad[a][p],
                exact[a]
            );
        }
    }
}

#[test]
fn constant_field_has_zero_gradient_and_dissipation() {
    let g = GridSpec::periodic_cube(8, 0.0, 1.0).unwrap();
    let f = vec![3.25f64; g.n_points()];
    let d = Discretization::new(&g, 0.1).unwrap();
    let grad = d.gradient(&f);
    assert!(grad.iter().flatten().all(|v| v.abs() < 1e-12));
    assert!(d.dissipation(&f).iter().all(|v| v.abs() < 1e-12));
}

fn sine_error(n: usize) -> f64 {
    let g = line_grid(n, Boundary::Periodic);
    let f = sample(&g, |x| (2.0 * PI * x[0]).sin());
    let grad = Discretization::new(&g, 0.0).unwrap().gradient(&f);
    (0..n)
        .map(|i| (grad[0][i] - 2.0 * PI * (2.0 * PI * g.coord(0, i)).cos()).abs())
        .fold(0.0, f64::max)
}

#[test]
fn periodic_sine_converges_at_fourth_order() {
    let ratio = sine_error(32) / sine_error(64);
    assert!((ratio - 16.0).abs() <= 0.5, "ratio {ratio}");
}

#[test]
fn dissipation_annihilates_quintics_where_stencil_fits() {
    let g = line_grid(16, Boundary::Extrapolate);
    let f = sample(&g, |x| x[0].powi(5) - 3.0 * x[0].powi(2) + 1.0);
    let ko = Discretization::new(&g, 0.3).unwrap().dissipation(&f);
    for (i, v) in ko.iter().enumerate() {
        assert!(v.abs() < 1e-9, "point {i}: {v}");
    }
}

#[test]
fn nyquist_mode_dissipation_oracle() {
    let n = 16;
    let sigma = 0.05;
    let g = line_grid(n, Boundary::Periodic);
    let h = g.spacing(0);
    let f: Vec<f64> = (0..n)
        .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let ko = Discretization::new(&g, sigma).unwrap().dissipation(&f);
    // literal 7-point sum with periodic wrap
    let c = [1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0];
    for i in 0..n {
        let s: f64 = (0..7).map(|m| c[m] * f[(i + n + m - 3) % n]).sum();
        let expected = sigma / (64.0 * h) * s;
        assert!((ko[i] - expected).abs() < 1e-12);
        assert!(ko[i] * f[i] < 0.0, "dissipation must oppose the mode");
    }
}

#[test]
fn nyquist_mode_decays_under_advection() {
    // B_x alternating along x: the central derivative sees nothing, only the
    // dissipation acts
    let n = 16;
    let g = GridSpec::new([n, 1, 1], [0.0; 3], [1.0; 3], [Boundary::Periodic; 3]).unwrap();
    let sys = InductionSystem::new(InductionParams::default());
    let mut s = FieldSnapshot::zeros(
        g.clone(),
        glmclean::state::layout_for(glmclean::state::SystemKind::InductionGlm),
    );
    for i in 0..n {
        s.set(
            glmclean::state::layout::induction::B,
            i,
            if i % 2 == 0 { 1e-3 } else { -1e-3 },
        );
    }
    let l2 = |s: &FieldSnapshot<f64>| {
        s.component(glmclean::state::layout::induction::B)
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
    };
    let before = l2(&s);
    let out = evolve(&sys, s, &EvolveConfig::new(0.5), &mut NoObserver, None).unwrap();
    assert!(l2(&out.state) < before);
}

#[test]
fn minkowski_stays_stationary() {
    let g = GridSpec::periodic_cube(8, -0.5, 0.5).unwrap();
    let s = minkowski_init(&g, false);
    let sys = Foccz4System::vacuum(Ccz4Params::robust_stability());
    let mut c = EvolveConfig::new(1.0);
    c.fixed_dt = Some(0.01);
    let out = evolve(&sys, s.clone(), &c, &mut NoObserver, None).unwrap();
    assert_eq!(out.steps, 100);
    let drift = out
        .state
        .data()
        .iter()
        .zip(s.data())
        .map(|(a, b): (&f64, &f64)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(drift <= 1e-12, "drift {drift}");
    for r in &out.reports {
        assert_eq!(r.max_linf(), 0.0);
    }
}

fn induction_error(n: usize, t_end: f64) -> f64 {
    let g = GridSpec::periodic_cube(n, 0.0, 1.0).unwrap();
    let p = InductionParams {
        eps_d: 0.0,
        ..InductionParams::default()
    };
    let wave = InductionWave {
        modes: [1, 1, 0],
        amplitude: 1.0,
        polarization: [0.0, 0.0, 1.0],
        mode: WaveMode::Transverse,
    };
    let s = InductionWave::init(&[wave], &g, p.c_light, p.a_d, 0.0);
    let mut c = EvolveConfig::new(t_end);
    c.ko_sigma = 0.0;
    c.fixed_dt = Some(0.2 / n as f64);
    let out = evolve(&InductionSystem::new(p), s, &c, &mut NoObserver, None).unwrap();
    let exact = InductionWave::init(&[wave], &g, p.c_light, p.a_d, t_end);
    out.state
        .data()
        .iter()
        .zip(exact.data())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

#[test]
fn induction_wave_converges() {
    let coarse = induction_error(8, 0.25);
    let fine = induction_error(16, 0.25);
    let order = (coarse / fine).log2();
    assert!(
        order > 3.5,
        "observed order {order} ({coarse:e} -> {fine:e})"
    );
}

fn toy_curl_after(n: usize, t_end: f64) -> f64 {
    let g = GridSpec::periodic_cube(n, 0.0, 1.0).unwrap();
    let s = toy_init(&g, &ToyInit::new(ToyVariant::CurlFree));
    let sys = ToySystem::homogeneous(ToyParams {
        glm_enabled: false,
        ..ToyParams::default()
    });
    let out = evolve(&sys, s, &EvolveConfig::new(t_end), &mut NoObserver, None).unwrap();
    out.reports.last().unwrap().family("curlJ").unwrap().linf
}

#[test]
fn curl_free_toy_keeps_curl_at_truncation_level() {
    let coarse = toy_curl_after(12, 0.1);
    let fine = toy_curl_after(24, 0.1);
    assert!(coarse < 1e-2, "curl {coarse:e}");
    assert!((coarse / fine).log2() > 3.5, "curl {coarse:e} -> {fine:e}");
}

#[derive(Default)]
struct Recorder {
    reports: Vec<f64>,
    snapshots: Vec<f64>,
    steps: usize,
}

impl Observer<f64> for Recorder {
    fn report(&mut self, r: &ConstraintReport) {
        self.reports.push(r.time);
    }
    fn snapshot(&mut self, s: &FieldSnapshot<f64>) {
        self.snapshots.push(s.time());
    }
    fn step(&mut self, _step: usize, _time: f64, _dt: f64) {
        self.steps += 1;
    }
}

#[test]
fn output_schedule_is_honoured() {
    let g = GridSpec::periodic_cube(6, 0.0, 1.0).unwrap();
    let s = toy_init(&g, &ToyInit::new(ToyVariant::PureCurlError));
    let sys = ToySystem::homogeneous(ToyParams::default());
    let mut c = EvolveConfig::new(0.3);
    c.monitor_interval = Some(0.1);
    c.snapshot_times = vec![0.0, 0.15, 0.3];
    let mut rec = Recorder::default();
    let out = evolve(&sys, s, &c, &mut rec, None).unwrap();
    assert_eq!(rec.reports, vec![0.0, 0.1, 0.2, 0.3]);
    assert_eq!(rec.snapshots, vec![0.0, 0.15, 0.3]);
    assert_eq!(rec.steps, out.steps);
    assert_eq!(out.state.time(), 0.3);
}

#[test]
fn divergence_guard_stops_run() {
    let g = GridSpec::periodic_cube(6, 0.0, 1.0).unwrap();
    let sys = Foccz4System::vacuum(Ccz4Params::robust_stability());
    let mut c = EvolveConfig::new(1.0);
    c.divergence_threshold = 0.5;
    let out = evolve(&sys, minkowski_init(&g, false), &c, &mut NoObserver, None).unwrap();
    assert!(matches!(out.status, RunStatus::Diverged { step: 1, .. }));
    assert_eq!(out.reports.len(), 2);
}

#[test]
fn nan_aborts_with_location() {
    let g = GridSpec::periodic_cube(6, 0.0, 1.0).unwrap();
    let sys = Foccz4System::vacuum(Ccz4Params::robust_stability());
    let mut s = minkowski_init(&g, false);
    let p = g.index(1, 2, 3);
    s.set(glmclean::state::layout::ccz4::K, p, f64::NAN);
    match evolve(&sys, s, &EvolveConfig::new(1.0), &mut NoObserver, None) {
        Err(EvolveError::NonFinite {
            component, point, ..
        }) => {
            assert_eq!(component, "K");
            assert_eq!(point, [1, 2, 3]);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn too_small_axis_rejected() {
    let g = GridSpec::new([4, 8, 8], [0.0; 3], [1.0; 3], [Boundary::Periodic; 3]).unwrap();
    assert!(matches!(
        Discretization::new(&g, 0.05),
        Err(EvolveError::GridTooSmall { .. })
    ));
}

#[test]
fn results_independent_of_thread_count() {
    let g = GridSpec::periodic_cube(6, -0.5, 0.5).unwrap();
    let sys = Foccz4System::vacuum(Ccz4Params::robust_stability());
    let mut s = minkowski_init(&g, false);
    perturb(&mut s, 11, 1e-4);
    let mut c = EvolveConfig::new(0.2);
    c.monitor_interval = Some(0.05);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        evolve(&sys, s.clone(), &c, &mut NoObserver, Some(&pool)).unwrap()
    };
    let a = run(1);
    let b = run(3);
    assert_eq!(a.state.data(), b.state.data());
    let rows = |o: &glmclean::EvolveOutcome<f64>| {
        o.reports.iter().map(|r| r.csv_row()).collect::<Vec<_>>()
    };
    assert_eq!(rows(&a), rows(&b));
}

#[test]
fn fused_rk4_step_matches_plain_rk4() {
    use glmclean::discretization::{interleave, rk4_update, Rk4Buffers, Rk4Stages};
    let b = Boundary::Extrapolate;
    let g = GridSpec::new(
        [9, 7, 8],
        [-0.5, -0.5, -0.5],
        [0.5, 0.4, 0.6],
        [b, Boundary::Periodic, b],
    )
    .unwrap();
    let mut p = Ccz4Params::robust_stability();
    p.glm_enabled = false;
    let sys = Foccz4System::vacuum(p);
    let mut s = minkowski_init(&g, false);
    perturb(&mut s, 3, 1e-4);
    let d = Discretization::new(&g, 0.05).unwrap();
    let mut y: Vec<f64> = Vec::new();
    interleave(&s, &mut y);
    let mut z = y.clone();
    let mut plain = Rk4Buffers::new(y.len());
    let mut fused = Rk4Stages::default();
    for _ in 0..3 {
        rk4_update(&mut y, 0.01, &mut plain, |q, o| d.rhs(&sys, q, o)).unwrap();
        d.rk4_step(&sys, &mut z, 0.01, &mut fused).unwrap();
    }
    assert!(y.iter().zip(&z).all(|(a, b)| a.to_bits() == b.to_bits()));
}
