//! Worked examples for each module, checked against closed forms and the
//! independent oracles in `common`.

mod common;

use complexkit::geometry::{self, RotationMatrix3};
use complexkit::hamiltonian::{self, FieldConfiguration, FrameGenerator, ScalarFn};
use complexkit::krylov::{self, CMatrix, KrylovSource, SpreadWeights};
use complexkit::propagator::{self, IntegratorOptions, Method, PropagatorKind, Route, Trajectory};
use complexkit::scenarios::{run_scenario, RunOptions, ScenarioName, ScenarioParams, ScenarioSpec};
use complexkit::{igc, BlochVector, Complex64, Matrix2, PureQubitState, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a:.17e} vs {b:.17e} (tol {tol:e})");
}

fn close_amps(a: [Complex64; 2], b: [Complex64; 2], tol: f64) {
    let d = (a[0] - b[0]).norm().max((a[1] - b[1]).norm());
    assert!(d <= tol, "{a:?} vs {b:?}: {d:e}");
}

fn plus() -> PureQubitState {
    PureQubitState::plus()
}

fn plus_i() -> PureQubitState {
    PureQubitState::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)).unwrap()
}

fn report(name: ScenarioName, p: ScenarioParams) -> complexkit::scenarios::ComplexityReport {
    run_scenario(
        &ScenarioSpec::new(name, &p).unwrap(),
        &RunOptions::default(),
    )
    .unwrap()
}

fn spec(name: ScenarioName) -> ScenarioSpec {
    ScenarioSpec::new(name, &ScenarioParams::default()).unwrap()
}

// qstate

#[test]
fn states_from_angles() {
    close_amps(
        PureQubitState::from_angles(0.0, 1.234)
            .unwrap()
            .amplitudes(),
        [c(1.0, 0.0), c(0.0, 0.0)],
        0.0,
    );
    close_amps(
        PureQubitState::from_angles(FRAC_PI_2, 0.0)
            .unwrap()
            .amplitudes(),
        plus().amplitudes(),
        1e-15,
    );
    close_amps(
        PureQubitState::from_angles(FRAC_PI_2, FRAC_PI_2)
            .unwrap()
            .amplitudes(),
        plus_i().amplitudes(),
        1e-15,
    );
}

#[test]
fn angles_from_states() {
    let a = plus_i().to_angles();
    close(a.theta, FRAC_PI_2, 1e-15);
    close(a.phi, FRAC_PI_2, 1e-15);
    let a = PureQubitState::zero().to_angles();
    assert_eq!((a.theta, a.phi), (0.0, 0.0));

    // θ = 2·atan2(√3/2, 1/2) = 2π/3 and φ = −2.5, confirmed by the round trip.
    let s =
        PureQubitState::new(c(0.5, 0.0), Complex64::from_polar(3f64.sqrt() / 2.0, -2.5)).unwrap();
    let a = s.to_angles();
    close(a.theta, 2.0 * PI / 3.0, 1e-15);
    close(a.phi, -2.5, 1e-15);
    close_amps(
        PureQubitState::from_angles(a.theta, a.phi)
            .unwrap()
            .amplitudes(),
        s.amplitudes(),
        1e-15,
    );
}

#[test]
fn bloch_vectors_and_overlaps() {
    assert_eq!(
        PureQubitState::zero().to_bloch().vec(),
        Vec3::new(0.0, 0.0, 1.0)
    );
    assert!(
        plus()
            .to_bloch()
            .vec()
            .max_abs_diff(Vec3::new(1.0, 0.0, 0.0))
            < 1e-15
    );
    assert!(
        plus_i()
            .to_bloch()
            .vec()
            .max_abs_diff(Vec3::new(0.0, 1.0, 0.0))
            < 1e-15
    );
    let (zero, one) = (PureQubitState::zero(), PureQubitState::one());
    assert_eq!(zero.overlap(&zero), c(1.0, 0.0));
    close(zero.overlap(&plus()).re, FRAC_1_SQRT_2, 1e-16);
    assert_eq!(zero.overlap(&one).norm(), 0.0);
    assert!(plus().phase_equivalent(&plus().with_phase(PI / 7.0), 1e-10));
    assert!(!zero.phase_equivalent(&one, 1e-10));
    let s = spec(ScenarioName::StationaryNongeodesic);
    let end = propagator::evolve_stationary(&s.config, &s.psi0, s.t_f).unwrap();
    assert!(end.phase_equivalent(&plus(), 1e-9));
}

// hamiltonian

#[test]
fn field_examples() {
    let w = 1.7;
    let cfg = FieldConfiguration::Constant {
        h0: 0.0,
        h: Vec3::new(0.0, w / 6f64.sqrt(), 0.0),
    };
    for t in [0.0, 0.4, 9.0] {
        assert_eq!(
            cfg.field_at(t).unwrap(),
            (0.0, Vec3::new(0.0, w / 6f64.sqrt(), 0.0))
        );
    }
    let (h0, h) = FieldConfiguration::RotatingXY { omega: w, nu: 0.3 }
        .field_at(0.0)
        .unwrap();
    assert_eq!(h0, 0.0);
    assert!(h.max_abs_diff(Vec3::new(w / 2.0, 0.0, 0.0)) < 1e-15);

    let (ad, b0) = (0.8, 0.6);
    let cfg = FieldConfiguration::Parametric {
        alpha: ScalarFn::Linear { c0: 0.1, c1: ad },
        beta: ScalarFn::Constant(b0),
    };
    for t in [0.0, 0.7, 2.0] {
        let (_, h) = cfg.field_at(t).unwrap();
        assert!(h.max_abs_diff(Vec3::new(-ad * b0.sin(), ad * b0.cos(), 0.0)) < 1e-15);
    }
}

#[test]
fn matrices_of_simple_fields() {
    let sz = FieldConfiguration::Constant {
        h0: 0.0,
        h: Vec3::new(0.0, 0.0, 1.0),
    }
    .matrix_at(0.0)
    .unwrap();
    assert_eq!(*sz.matrix(), Matrix2::sigma_z());
    let sx = FieldConfiguration::Constant {
        h0: 0.0,
        h: Vec3::new(1.0, 0.0, 0.0),
    }
    .matrix_at(0.0)
    .unwrap();
    assert_eq!(*sx.matrix(), Matrix2::sigma_x());
}

#[test]
fn parametric_matrix_matches_direct_assembly() {
    // Direct evaluation: H = i(|ṁ⟩⟨m| − |m⟩⟨ṁ|) for the parallel-transported
    // m = e^{−iφ}(cos α, e^{iβ} sin α), φ̇ = β̇ sin²α.
    let (w0, b0, n0) = (1.3, 0.4, 0.9);
    let cfg = FieldConfiguration::Parametric {
        alpha: ScalarFn::Linear { c0: 0.0, c1: w0 },
        beta: ScalarFn::Linear { c0: b0, c1: n0 },
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let t: f64 = rng.gen_range(-2.0..2.0);
        let (al, be) = (w0 * t, b0 + n0 * t);
        let phid = n0 * al.sin().powi(2);
        let m = [c(al.cos(), 0.0), Complex64::from_polar(al.sin(), be)];
        let md = [
            c(-w0 * al.sin(), 0.0) - c(0.0, phid) * m[0],
            Complex64::from_polar(1.0, be) * c(w0 * al.cos(), n0 * al.sin()) - c(0.0, phid) * m[1],
        ];
        let i = c(0.0, 1.0);
        let want = Matrix2::new(
            i * (md[0] * m[0].conj() - m[0] * md[0].conj()),
            i * (md[0] * m[1].conj() - m[0] * md[1].conj()),
            i * (md[1] * m[0].conj() - m[1] * md[0].conj()),
            i * (md[1] * m[1].conj() - m[1] * md[1].conj()),
        );
        let got = *cfg.matrix_at(t).unwrap().matrix();
        assert!((got - want).max_abs() < 1e-12, "t = {t}");
    }
}

#[test]
fn uzdin_phase_examples() {
    let a = ScalarFn::Linear { c0: 0.0, c1: 1.3 };
    for t in [0.0, 0.5, 2.0] {
        assert_eq!(
            hamiltonian::uzdin_phase(&a, &ScalarFn::Constant(0.7), t).unwrap(),
            0.0
        );
    }
    let (w0, n0) = (1.3, 0.8);
    let b = ScalarFn::Linear { c0: 0.2, c1: n0 };
    for t in [0.3f64, 1.0, 2.5] {
        let want = n0 * (t / 2.0 - (2.0 * w0 * t).sin() / (4.0 * w0));
        close(hamiltonian::uzdin_phase(&a, &b, t).unwrap(), want, 1e-9);
        let oracle = common::simpson(|s| n0 * (w0 * s).sin().powi(2), 0.0, t, 2000);
        close(oracle, want, 1e-12);
    }
    let half_pi = ScalarFn::Constant(FRAC_PI_2);
    close(
        hamiltonian::uzdin_phase(&half_pi, &b, 1.7).unwrap(),
        n0 * 1.7,
        1e-10,
    );
}

#[test]
fn rotating_frame_examples() {
    let (w, nu) = (1.1, 0.7);
    let cfg = FieldConfiguration::RotatingXY { omega: w, nu };
    let want = Matrix2::from_field(0.0, Vec3::new(w / 2.0, 0.0, -nu / 2.0));
    for t in [0.0, 0.9, 3.3] {
        let h = hamiltonian::rotating_frame_transform(&cfg, &FrameGenerator::z_rotation(nu), t)
            .unwrap();
        assert!((*h.matrix() - want).max_abs() < 1e-12);
        let same =
            hamiltonian::rotating_frame_transform(&cfg, &FrameGenerator::Identity, t).unwrap();
        assert_eq!(same.matrix(), cfg.matrix_at(t).unwrap().matrix());
    }
    let h = hamiltonian::HermitianMatrix2::from_field(0.3, Vec3::new(0.2, -0.5, 0.9));
    let cfg = FieldConfiguration::Constant {
        h0: 0.3,
        h: Vec3::new(0.2, -0.5, 0.9),
    };
    let rf =
        hamiltonian::rotating_frame_transform(&cfg, &FrameGenerator::Exponential(h), 1.4).unwrap();
    assert!(rf.matrix().max_abs() < 1e-9);
}

#[test]
fn energy_uncertainty_examples() {
    let w = 1.9;
    let h = Vec3::new(0.0, w / 6f64.sqrt(), 0.0);
    close(
        hamiltonian::energy_uncertainty(&PureQubitState::zero().to_bloch(), h),
        w / 6f64.sqrt(),
        1e-15,
    );
    let n = Vec3::new(0.3, -0.4, 0.5).normalized().unwrap();
    let along = BlochVector::from_vec3(n).unwrap();
    assert!(hamiltonian::energy_uncertainty(&along, n * 2.0) < 1e-7);
    let (w0, n0) = (1.2, 0.7);
    let (a, b) = (
        ScalarFn::Linear { c0: 0.0, c1: w0 },
        ScalarFn::Linear { c0: 0.3, c1: n0 },
    );
    for t in [0.0, 0.4, 1.1] {
        let want = (w0 * w0 + 0.25 * n0 * n0 * (2.0 * w0 * t).sin().powi(2)).sqrt();
        close(
            hamiltonian::parametric_energy_uncertainty(&a, &b, t),
            want,
            1e-14,
        );
    }
}

// propagator

#[test]
fn stationary_examples() {
    let s = spec(ScenarioName::StationaryGeodesic);
    let end = propagator::evolve_stationary(&s.config, &s.psi0, s.t_f).unwrap();
    assert!(end.phase_equivalent(&plus(), 1e-14));
    close_amps(
        common::evolve_constant(
            0.0,
            [0.0, 1.0 / 6f64.sqrt(), 0.0],
            [c(1.0, 0.0), c(0.0, 0.0)],
            s.t_f,
        ),
        end.amplitudes(),
        1e-13,
    );
    let any = FieldConfiguration::Constant {
        h0: 0.4,
        h: Vec3::new(0.1, 0.2, 0.3),
    };
    assert_eq!(
        propagator::evolve_stationary(&any, &plus_i(), 0.0).unwrap(),
        plus_i()
    );
}

#[test]
fn commuting_examples() {
    // h(t) = 2ω₀²t n̂ with n̂ = (−sin β₀, cos β₀, 0): effective angle ω₀²t², so
    // |0⟩ is carried along a great circle to |1⟩ at ω₀²t² = π/2.
    let (w0, b0) = (1.2f64, 0.5f64);
    let n = Vec3::new(-b0.sin(), b0.cos(), 0.0);
    let cfg = FieldConfiguration::scaled_direction(
        ScalarFn::Linear {
            c0: 0.0,
            c1: 2.0 * w0 * w0,
        },
        n,
        ScalarFn::Constant(0.0),
    )
    .unwrap();
    let tf = (FRAC_PI_2).sqrt() / w0;
    let end = propagator::evolve_commuting(&cfg, &PureQubitState::zero(), tf).unwrap();
    assert!(end.phase_equivalent(&PureQubitState::one(), 1e-12));
    let traj = propagator::trajectory(&cfg, &PureQubitState::zero(), 0.0, tf, 257).unwrap();
    close(geometry::geodesic_efficiency(&traj).unwrap(), 1.0, 1e-8);

    let constant =
        FieldConfiguration::scaled_direction(ScalarFn::Constant(0.8), n, ScalarFn::Constant(0.1))
            .unwrap();
    let stat = FieldConfiguration::Constant {
        h0: 0.1,
        h: n * 0.8,
    };
    let a = propagator::evolve_commuting(&constant, &plus_i(), 1.3).unwrap();
    let b = propagator::evolve_stationary(&stat, &plus_i(), 1.3).unwrap();
    close_amps(a.amplitudes(), b.amplitudes(), 1e-12);

    let idle = FieldConfiguration::Constant {
        h0: 0.0,
        h: Vec3::new(0.0, 0.0, 0.0),
    };
    close_amps(
        propagator::evolve_commuting(&idle, &plus_i(), 2.0)
            .unwrap()
            .amplitudes(),
        plus_i().amplitudes(),
        0.0,
    );
}

#[test]
fn ordered_examples() {
    let cfg = FieldConfiguration::RotatingXY {
        omega: 1.0,
        nu: 1.0,
    };
    let o = IntegratorOptions::default();
    // Pointwise agreement is in fidelity; the raw amplitude error of the
    // second-order scheme reaches ~1e-6 by t = 2π at this step count.
    for i in 0..=16 {
        let t = 2.0 * PI * i as f64 / 16.0;
        let s = propagator::evolve_ordered(&cfg, &PureQubitState::zero(), 0.0, t, &o).unwrap();
        let f = common::inner(s.amplitudes(), common::rotating_state(1.0, 1.0, t)).norm_sqr();
        assert!(1.0 - f <= 1e-8, "t = {t}: {}", 1.0 - f);
    }
    let stat = FieldConfiguration::Constant {
        h0: 0.2,
        h: Vec3::new(0.5, -0.3, 0.7),
    };
    let a = propagator::evolve_ordered(&stat, &plus(), 0.0, 2.0, &o).unwrap();
    let b = propagator::evolve_stationary(&stat, &plus(), 2.0).unwrap();
    close_amps(a.amplitudes(), b.amplitudes(), 1e-10);
    assert_eq!(
        propagator::evolve_ordered(&cfg, &plus(), 1.0, 1.0, &o).unwrap(),
        plus()
    );
    let rk4 = IntegratorOptions::new(2048, Method::Rk4Renormalized, 1e-10).unwrap();
    let r = propagator::evolve_ordered(&cfg, &PureQubitState::zero(), 0.0, 2.0 * PI, &rk4).unwrap();
    close_amps(
        r.amplitudes(),
        common::rotating_state(1.0, 1.0, 2.0 * PI),
        1e-9,
    );
}

#[test]
fn rotating_closed_form_examples() {
    assert_eq!(
        propagator::rotating_field_state(0.7, 0.3, 0.0),
        PureQubitState::zero()
    );
    let w = 1.4;
    let s = propagator::rotating_field_state(w, 0.0, PI / w);
    close_amps(s.amplitudes(), [c(0.0, 0.0), c(0.0, -1.0)], 1e-15);
    assert!(s.phase_equivalent(&PureQubitState::one(), 1e-15));

    // At t = π/√2 with ω = ν = 1: Ωt/2 = π/2, so |⟨0|ψ⟩|² = ν²/Ω² = 1/2.
    let t = PI / 2f64.sqrt();
    let closed = propagator::rotating_field_state(1.0, 1.0, t);
    close(closed.c0().norm_sqr(), 0.5, 1e-15);
    let fine = IntegratorOptions::new(1 << 16, Method::MidpointExponential, 1e-10).unwrap();
    let cfg = FieldConfiguration::RotatingXY {
        omega: 1.0,
        nu: 1.0,
    };
    let oracle = propagator::evolve_ordered(&cfg, &PureQubitState::zero(), 0.0, t, &fine).unwrap();
    close_amps(closed.amplitudes(), oracle.amplitudes(), 1e-10);
    close_amps(
        closed.amplitudes(),
        common::rotating_state(1.0, 1.0, t),
        1e-13,
    );
}

#[test]
fn trajectory_examples() {
    let w = 1.0;
    let s = spec(ScenarioName::StationaryGeodesic);
    let traj = propagator::trajectory(&s.config, &s.psi0, 0.0, s.t_f, 9).unwrap();
    assert_eq!(traj.propagator_kind(), PropagatorKind::Stationary);
    for smp in traj.samples() {
        close(smp.angles.theta, 2.0 * w * smp.t / 6f64.sqrt(), 1e-14);
        assert_eq!(smp.angles.phi, 0.0);
    }
    let ends = propagator::trajectory(&s.config, &s.psi0, 0.0, s.t_f, 2).unwrap();
    assert_eq!(ends.times(), vec![0.0, s.t_f]);

    let (w0, b0, n0) = (1.0, FRAC_PI_4, 1.0);
    let p = spec(ScenarioName::NonstationaryNongeodesic);
    let traj = propagator::trajectory(&p.config, &p.psi0, 0.0, p.t_f, 33).unwrap();
    assert_eq!(traj.propagator_kind(), PropagatorKind::ParametricClosedForm);
    for smp in &traj.samples()[1..32] {
        close(smp.angles.theta, 2.0 * w0 * smp.t, 1e-9);
        close(smp.angles.phi, b0 + n0 * smp.t, 1e-9);
    }
}

// geometry

#[test]
fn distance_and_length_examples() {
    let (zero, one) = (PureQubitState::zero(), PureQubitState::one());
    assert_eq!(geometry::geodesic_distance(&zero, &zero), 0.0);
    close(
        geometry::geodesic_distance(&zero, &plus()),
        FRAC_PI_2,
        1e-15,
    );
    close(geometry::geodesic_distance(&zero, &one), PI, 1e-15);

    let s = spec(ScenarioName::StationaryGeodesic);
    let traj = propagator::trajectory(&s.config, &s.psi0, 0.0, s.t_f, 257).unwrap();
    close(geometry::path_length(&traj).unwrap(), FRAC_PI_2, 1e-12);
    close(geometry::geodesic_efficiency(&traj).unwrap(), 1.0, 1e-12);

    let n = spec(ScenarioName::StationaryNongeodesic);
    let traj = propagator::trajectory(&n.config, &n.psi0, 0.0, n.t_f, 257).unwrap();
    close(
        geometry::geodesic_efficiency(&traj).unwrap(),
        3.0 * 6f64.sqrt() / 8.0,
        1e-10,
    );

    let p = spec(ScenarioName::NonstationaryNongeodesic);
    let traj = propagator::trajectory(&p.config, &p.psi0, 0.0, p.t_f, 2049).unwrap();
    let len = geometry::path_length(&traj).unwrap();
    close(len, 3.33, 0.01);
    let oracle = common::simpson(
        |t| (4.0 + (2.0 * t).sin().powi(2)).sqrt(),
        0.0,
        FRAC_PI_2,
        20000,
    );
    close(len, oracle, 1e-8);
    close(
        geometry::geodesic_efficiency(&traj).unwrap(),
        PI / oracle,
        1e-8,
    );
    // η ≈ π/3.33 to the precision of s: ±0.01 in s is ±π·0.01/3.33² in η.
    close(PI / oracle, PI / 3.33, PI * 0.01 / (3.33 * 3.33));

    let still = propagator::trajectory(&s.config, &s.psi0, 0.3, 0.3, 1).unwrap();
    assert_eq!(geometry::path_length(&still).unwrap(), 0.0);
}

#[test]
fn curvature_examples() {
    let zero = PureQubitState::zero().to_bloch();
    let perp = Vec3::new(0.0, 0.8, 0.0);
    assert!(
        geometry::curvature_coefficient(&zero, perp, Vec3::new(0.0, 0.0, 0.0))
            .unwrap()
            .abs()
            < 1e-15
    );
    let w = 1.0;
    let h = Vec3::new(1.0, 1.0, 1.0) * (w / (2.0 * 3f64.sqrt()));
    close(
        geometry::curvature_coefficient(&zero, h, Vec3::new(0.0, 0.0, 0.0)).unwrap(),
        2.0,
        1e-12,
    );

    // Parametric nongeodesic: κ²(0⁺) → 4(ν₀/ω₀)², oracle from the Bloch path.
    for (w0, n0) in [(1.0, 1.0), (2.0, 1.0), (1.0, 0.5)] {
        let p = ScenarioParams {
            omega0: w0,
            nu0: n0,
            ..ScenarioParams::default()
        };
        let s = ScenarioSpec::new(ScenarioName::NonstationaryNongeodesic, &p).unwrap();
        let t = 1e-5;
        let a = propagator::evolve_commuting(&s.config, &s.psi0, t)
            .or_else(|_| {
                propagator::evolve_ordered(
                    &s.config,
                    &s.psi0,
                    0.0,
                    t,
                    &IntegratorOptions::default(),
                )
            })
            .unwrap()
            .to_bloch();
        let (_, h) = s.config.field_at(t).unwrap();
        let hd = s.config.field_derivative_at(t).unwrap();
        let want = 4.0 * (n0 / w0).powi(2);
        close(
            geometry::curvature_coefficient(&a, h, hd).unwrap(),
            want,
            1e-4 * want.max(1.0),
        );
        let path = |tt: f64| {
            let (th, ph) = (2.0 * w0 * tt, FRAC_PI_4 + n0 * tt);
            [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]
        };
        close(
            common::sphere_curvature_sq(path, 1e-3, 1e-4),
            want,
            1e-4 * want.max(1.0),
        );
    }
}

#[test]
fn metric_examples() {
    let family = |xi: [f64; 2]| {
        let (s, co) = (0.5 * xi[0]).sin_cos();
        [c(co, 0.0), Complex64::from_polar(s, xi[1])]
    };
    for xi in [[0.4, 1.0], [1.3, -2.0], [2.9, 0.2]] {
        let (fs, wy) = geometry::fs_and_wy_metrics(family, xi).unwrap();
        close(fs.g11, 0.25, 1e-8);
        close(fs.g12, 0.0, 1e-8);
        close(fs.g22, 0.25 * xi[0].sin().powi(2), 1e-8);
        assert!(wy.max_abs_diff(&fs.scale(4.0)) < 1e-8);
    }
    let fixed = |_: [f64; 2]| [c(0.6, 0.0), c(0.0, 0.8)];
    let (fs, wy) = geometry::fs_and_wy_metrics(fixed, [0.3, 0.3]).unwrap();
    assert!(fs.max_abs_diff(&fs.scale(0.0)) < 1e-12 && wy.max_abs_diff(&wy.scale(0.0)) < 1e-12);
}

#[test]
fn rotation_examples() {
    let w = 1.0;
    let a0 = PureQubitState::zero().to_bloch();
    for t in [0.0, 0.5, 1.9] {
        let ang = 2.0 * w * t / 6f64.sqrt();
        let r = geometry::rodrigues_rotate(Vec3::new(0.0, 1.0, 0.0), ang, &a0).unwrap();
        assert!(r.vec().max_abs_diff(Vec3::new(ang.sin(), 0.0, ang.cos())) < 1e-15);
    }
    let b = BlochVector::new(0.6, 0.0, 0.8).unwrap();
    assert_eq!(
        geometry::rodrigues_rotate(Vec3::new(0.0, 0.0, 1.0), 0.0, &b).unwrap(),
        b
    );
    let fixed = geometry::rodrigues_rotate(b.vec(), 2.2, &b).unwrap();
    assert!(fixed.vec().max_abs_diff(b.vec()) < 1e-15);

    assert!(
        geometry::su2_to_so3(&Matrix2::identity())
            .unwrap()
            .max_abs_diff(&RotationMatrix3::identity())
            < 1e-15
    );

    // e^{−i(π/4)σz} rotates by π/2 about z; oracle is ρ ↦ UρU†.
    let u = Matrix2::evolution(0.0, Vec3::new(0.0, 0.0, 1.0), FRAC_PI_4);
    let r = geometry::su2_to_so3(&u).unwrap();
    assert!(
        r.apply(Vec3::new(1.0, 0.0, 0.0))
            .max_abs_diff(Vec3::new(0.0, 1.0, 0.0))
            < 1e-15
    );
    let rotated = plus().apply(&u).unwrap().to_bloch().vec();
    assert!(rotated.max_abs_diff(Vec3::new(0.0, 1.0, 0.0)) < 1e-15);

    // The σy evolution gives the explicit rotation about y by 2ωt/√6.
    for t in [0.3, 1.2] {
        let u = Matrix2::evolution(0.0, Vec3::new(0.0, w / 6f64.sqrt(), 0.0), t);
        let ang = 2.0 * w * t / 6f64.sqrt();
        let want = RotationMatrix3 {
            m: [
                [ang.cos(), 0.0, ang.sin()],
                [0.0, 1.0, 0.0],
                [-ang.sin(), 0.0, ang.cos()],
            ],
        };
        assert!(geometry::su2_to_so3(&u).unwrap().max_abs_diff(&want) < 1e-15);
    }
}

// krylov

#[test]
fn lanczos_examples() {
    let w = 1.0;
    let h = Matrix2::from_field(0.0, Vec3::new(0.0, w / 6f64.sqrt(), 0.0));
    let kb = krylov::qubit_basis(&h, &PureQubitState::zero()).unwrap();
    assert_eq!(kb.dimension(), 2);
    assert_eq!(kb.a_coeffs, vec![0.0, 0.0]);
    close(kb.b(1), w / 6f64.sqrt(), 1e-15);
    close(kb.vectors[0][0].norm(), 1.0, 1e-15);
    close(kb.vectors[1][1].norm(), 1.0, 1e-15);

    let kb = krylov::qubit_basis(&Matrix2::sigma_z(), &PureQubitState::one()).unwrap();
    assert_eq!(kb.dimension(), 1);
    assert_eq!(kb.b(1), 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let d = 4;
    let mut data = vec![c(0.0, 0.0); d * d];
    for i in 0..d {
        data[i * d + i] = c(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..d {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            data[i * d + j] = z;
            data[j * d + i] = z.conj();
        }
    }
    let mut v: Vec<Complex64> = (0..d)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= nv);
    let m = CMatrix::new(d, data).unwrap();
    let kb = krylov::lanczos(&m, &v).unwrap();
    for (i, ki) in kb.vectors.iter().enumerate() {
        let hk = m.mul_vec(ki);
        for (j, kj) in kb.vectors.iter().enumerate() {
            let e: Complex64 = kj.iter().zip(&hk).map(|(a, b)| a.conj() * b).sum();
            let want = match i.abs_diff(j) {
                0 => kb.a_coeffs[i],
                1 => kb.b(i.max(j)),
                _ => 0.0,
            };
            assert!((e - c(want, 0.0)).norm() < 1e-12, "({i}, {j})");
        }
    }
}

#[test]
fn spread_complexity_examples() {
    let w = 1.0;
    let psi0 = PureQubitState::zero();
    let geo = Matrix2::from_field(0.0, Vec3::new(0.0, w / 6f64.sqrt(), 0.0));
    let kb = krylov::qubit_basis(&geo, &psi0).unwrap();
    assert_eq!(
        krylov::spread_complexity(&psi0.amplitudes(), &kb, &SpreadWeights::Linear).unwrap(),
        0.0
    );
    for t in [0.3, 1.0, 2.5] {
        let s = psi0
            .apply(&Matrix2::evolution(
                0.0,
                Vec3::new(0.0, w / 6f64.sqrt(), 0.0),
                t,
            ))
            .unwrap();
        let k = krylov::spread_complexity(&s.amplitudes(), &kb, &SpreadWeights::Linear).unwrap();
        close(k, (w * t / 6f64.sqrt()).sin().powi(2), 1e-14);
    }
    let hn = Vec3::new(1.0, 1.0, 1.0) * (w / (2.0 * 3f64.sqrt()));
    let kb = krylov::qubit_basis(&Matrix2::from_field(0.0, hn), &psi0).unwrap();
    for t in [0.3, 1.0, 2.5] {
        let s = psi0.apply(&Matrix2::evolution(0.0, hn, t)).unwrap();
        let k = krylov::spread_complexity(&s.amplitudes(), &kb, &SpreadWeights::Linear).unwrap();
        close(k, 2.0 / 3.0 * (w * t / 2.0).sin().powi(2), 1e-14);
        let n = hn.normalized().unwrap();
        close(
            krylov::krylov_qubit_stationary(&psi0.to_bloch(), n, w / 2.0, t),
            k,
            1e-14,
        );
    }
}

#[test]
fn geometric_complexity_examples() {
    let a0 = BlochVector::new(0.0, 0.6, 0.8).unwrap();
    let perp = Vec3::new(1.0, 0.0, 0.0);
    for t in [0.2, 1.0] {
        close(
            krylov::krylov_qubit_stationary(&a0, perp, 1.5, t),
            (1.5 * t).sin().powi(2),
            1e-15,
        );
        assert_eq!(krylov::krylov_qubit_stationary(&a0, a0.vec(), 1.5, t), 0.0);
    }
    assert_eq!(krylov::krylov_from_bloch(&a0, &a0), 0.0);
    let anti = BlochVector::from_vec3(-a0.vec()).unwrap();
    assert_eq!(krylov::krylov_from_bloch(&a0, &anti), 1.0);
    let n = Vec3::new(0.3, -0.2, 0.9).normalized().unwrap();
    for t in [0.4, 2.0] {
        let at = geometry::rodrigues_rotate(n, 2.0 * 0.7 * t, &a0).unwrap();
        close(
            krylov::krylov_from_bloch(&a0, &at),
            krylov::krylov_qubit_stationary(&a0, n, 0.7, t),
            1e-14,
        );
    }
}

#[test]
fn rotating_complexity_examples() {
    let w = 1.3;
    for t in [0.5, 1.5] {
        close(
            krylov::rotating_field_krylov(w, 0.0, t),
            (w * t / 2.0).sin().powi(2),
            1e-15,
        );
    }
    close(krylov::rotating_field_krylov(w, 0.0, PI / w), 1.0, 1e-15);
    assert_eq!(krylov::rotating_field_krylov(w, 0.4, 0.0), 0.0);
    let big = 2f64.sqrt();
    close(
        krylov::rotating_field_krylov(1.0, 1.0, PI / big),
        0.5,
        1e-15,
    );
}

#[test]
fn averaged_complexity_examples() {
    let a0 = PureQubitState::zero().to_bloch();
    let w = 1.0;
    let avg = |n: Vec3, h: f64, tf: f64| {
        krylov::time_averaged_krylov(&KrylovSource::Stationary { a0, n, h }, 0.0, tf).unwrap()
    };
    let geo = avg(
        Vec3::new(0.0, 1.0, 0.0),
        w / 6f64.sqrt(),
        PI * 6f64.sqrt() / (4.0 * w),
    );
    close(geo.value(), 0.5 - 1.0 / PI, 1e-12);
    close(geo.quadrature, 0.5 - 1.0 / PI, 1e-9);
    let non = avg(
        Vec3::new(1.0, 1.0, 1.0).normalized().unwrap(),
        w / 2.0,
        2.0 * PI / (3.0 * w),
    );
    close(non.value(), 1.0 / 3.0 - 3f64.sqrt() / (4.0 * PI), 1e-12);
    for name in [
        ScenarioName::NonstationaryGeodesic,
        ScenarioName::NonstationaryNongeodesic,
    ] {
        close(report(name, ScenarioParams::default()).avg_k, 0.5, 1e-9);
    }
    let f = |t: f64| t.sin().powi(2);
    close(
        krylov::time_averaged_krylov(&KrylovSource::Function(&f), 0.0, PI)
            .unwrap()
            .value(),
        0.5,
        1e-12,
    );
}

#[test]
fn eigenbasis_cost_bounds_krylov_complexity() {
    // Energy eigenbasis ordered (E₋, E₊): C_B = |⟨E₊|ψ⟩|², constant in time.
    let cases = [
        (ScenarioName::StationaryGeodesic, 0.5),
        (
            ScenarioName::StationaryNongeodesic,
            (3.0 - 3f64.sqrt()) / (12.0 - 6.0 * 3f64.sqrt()),
        ),
    ];
    for (name, want) in cases {
        let s = spec(name);
        let (_, h) = s.config.field_at(0.0).unwrap();
        let n = h.normalized().unwrap();
        let e_minus = BlochVector::from_vec3(-n)
            .unwrap()
            .to_state()
            .amplitudes()
            .to_vec();
        let e_plus = BlochVector::from_vec3(n)
            .unwrap()
            .to_state()
            .amplitudes()
            .to_vec();
        let basis = vec![e_minus, e_plus];
        let traj = propagator::trajectory(&s.config, &s.psi0, 0.0, s.t_f, 257).unwrap();
        let (ks, _) = complexkit::scenarios::krylov_series(&traj).unwrap();
        for (smp, k) in traj.samples().iter().zip(&ks) {
            let cb = krylov::basis_cost(&smp.state.amplitudes(), &basis, &SpreadWeights::Linear)
                .unwrap();
            close(cb, want, 1e-12);
            assert!(
                *k <= cb + 1e-12,
                "{name}: K = {k} > C_B = {cb} at t = {}",
                smp.t
            );
        }
    }
}

// igc

#[test]
fn instantaneous_volume_examples() {
    let w = 1.0;
    let s = spec(ScenarioName::StationaryGeodesic);
    let traj = propagator::trajectory(&s.config, &s.psi0, 0.0, s.t_f, 65).unwrap();
    assert_eq!(igc::instantaneous_volume(&traj, 0).unwrap(), 0.0);
    for (i, smp) in traj.samples().iter().enumerate() {
        close(
            igc::instantaneous_volume(&traj, i).unwrap(),
            w * smp.t / 6f64.sqrt(),
            1e-14,
        );
    }
    let (w0, n0) = (1.0, 1.0);
    let p = spec(ScenarioName::NonstationaryNongeodesic);
    let traj = propagator::trajectory(&p.config, &p.psi0, 0.0, p.t_f, 65).unwrap();
    for (i, smp) in traj.samples().iter().enumerate() {
        let want = 0.25 * n0 * (1.0 - (2.0 * w0 * smp.t).cos()) * smp.t;
        close(igc::instantaneous_volume(&traj, i).unwrap(), want, 1e-9);
    }
}

#[test]
fn volume_examples() {
    for w in [0.5, 1.0, 2.0] {
        let p = ScenarioParams {
            omega: w,
            ..ScenarioParams::default()
        };
        let geo = report(ScenarioName::StationaryGeodesic, p);
        close(geo.v_bar, PI / 8.0, 1e-9);
        close(geo.v_max, FRAC_PI_4, 1e-12);
        close(geo.c_igc, 0.5, 1e-9);
        let non = report(ScenarioName::StationaryNongeodesic, p);
        close(non.v_bar, 5.11e-2, 5e-4);
        close(non.v_max, PI / 16.0, 1e-9);
        close(non.c_igc, 0.74, 5e-3);
    }
    let vib = report(
        ScenarioName::NonstationaryGeodesic,
        ScenarioParams::default(),
    );
    close(vib.v_max, FRAC_PI_2, 1e-9);
    for (w0, n0) in [(1.0, 1.0), (2.0, 1.0), (1.0, 3.0)] {
        let r = report(
            ScenarioName::NonstationaryNongeodesic,
            ScenarioParams {
                omega0: w0,
                nu0: n0,
                ..Default::default()
            },
        );
        let ratio = n0 / w0;
        close(r.v_bar, (1.0 / (4.0 * PI) + PI / 16.0) * ratio, 1e-9);
        close(r.v_max, FRAC_PI_4 * ratio, 1e-9);
        close(r.c_igc, (3.0 * PI * PI - 4.0) / (4.0 * PI * PI), 1e-8);
    }
}

#[test]
fn length_scale_examples() {
    let geo = report(ScenarioName::StationaryGeodesic, ScenarioParams::default());
    close(geo.l_c.unwrap(), FRAC_PI_2 * 2f64.sqrt(), 1e-8);
    let vib = report(
        ScenarioName::NonstationaryGeodesic,
        ScenarioParams::default(),
    );
    close(vib.l_c.unwrap(), PI * 2f64.sqrt(), 1e-8);

    let cfg = FieldConfiguration::Constant {
        h0: 0.0,
        h: Vec3::new(0.0, 0.0, 1.0),
    };
    let traj = propagator::trajectory(&cfg, &plus(), 0.0, 1.0, 129).unwrap();
    let vr = igc::volume_report(&traj).unwrap();
    let s = geometry::path_length(&traj).unwrap();
    close(
        vr.length_scale.unwrap(),
        s * (vr.accessible / vr.accessed).sqrt(),
        1e-12,
    );
}

#[test]
fn numeric_route_agrees_with_closed_forms() {
    for name in ScenarioName::ALL {
        let s = spec(name);
        let best = Trajectory::build(
            &s.config,
            &s.psi0,
            0.0,
            s.t_f,
            129,
            IntegratorOptions::default(),
            Route::Best,
        )
        .unwrap();
        let num = Trajectory::build(
            &s.config,
            &s.psi0,
            0.0,
            s.t_f,
            129,
            IntegratorOptions::default(),
            Route::Numeric,
        )
        .unwrap();
        assert_eq!(num.propagator_kind(), PropagatorKind::Ordered);
        for (a, b) in best.samples().iter().zip(num.samples()) {
            assert!(
                a.state.phase_equivalent(&b.state, 1e-12),
                "{name} at t = {}",
                a.t
            );
        }
    }
}
