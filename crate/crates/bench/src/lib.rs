//! Benchmark bodies for the force engine, shared by the bench targets.

use std::hint::black_box;

use criterion::Criterion;
use num_complex::Complex64;
use udwf_core::asymptotics::{angular_integral, meijer_reduced, AngularKind, MeijerKind};
use udwf_core::correlator::ModeLabel;
use udwf_core::lorentz::TrajectorySpec;
use udwf_core::upsilon::upsilon_general;
use udwf_core::{force_free, force_plate, Boundary, DetectorParams, DetectorState, Regime, SwitchingWindow, ToleranceSpec};

fn unit() -> DetectorParams {
    DetectorParams::simple(1.0, 1.0).expect("valid parameters")
}

pub fn free_space(c: &mut Criterion) {
    let (p, tol) = (unit(), ToleranceSpec::default());
    let mut g = c.benchmark_group("force_free");
    for t in [0.1, 10.0, 300.0] {
        let w = SwitchingWindow::new(t).unwrap();
        g.bench_function(format!("ground/omega_dtau={t}"), |b| {
            b.iter(|| force_free(black_box(&p), &DetectorState::ground(), 0.5, &w, Regime::FiniteTime, &tol).unwrap())
        });
    }
    g.finish();
}

pub fn plate(c: &mut Criterion) {
    let (p, tol) = (unit(), ToleranceSpec::default());
    let r = Complex64::new(0.7, 0.7);
    let mut g = c.benchmark_group("force_plate");
    for d in [0.01, 1.0, 50.0] {
        let bd = Boundary::plate(d, r).unwrap();
        let short = SwitchingWindow::new(1e-3).unwrap();
        let long = SwitchingWindow::new(0.0).unwrap();
        g.bench_function(format!("ground/short/d={d}"), |b| {
            b.iter(|| force_plate(black_box(&p), &DetectorState::ground(), 0.999, &bd, &short, Regime::FiniteTime, &tol).unwrap())
        });
        g.bench_function(format!("excited/long/d={d}"), |b| {
            b.iter(|| force_plate(black_box(&p), &DetectorState::excited(), 0.999, &bd, &long, Regime::LongTime, &tol).unwrap())
        });
    }
    g.finish();
}

pub fn closed_forms(c: &mut Criterion) {
    let tol = ToleranceSpec::default();
    c.bench_function("angular_integral/I0/v=0.999/dt=50", |b| b.iter(|| angular_integral(AngularKind::I0, black_box(0.999), 50.0, &tol).unwrap()));
    c.bench_function("meijer_reduced/casimir/y=1", |b| b.iter(|| meijer_reduced(MeijerKind::Casimir, black_box(1.0)).unwrap()));
}

pub fn kernel(c: &mut Criterion) {
    let traj = TrajectorySpec::inertial_x(0.6).unwrap();
    let k = ModeLabel::new([0.8, -0.3, 0.5]).unwrap();
    let p = unit();
    c.bench_function("upsilon_general/dtau=5", |b| b.iter(|| upsilon_general(&traj, &p, black_box(&k), 5.0, 0.0).unwrap()));
}

pub fn benchmarks(c: &mut Criterion) {
    free_space(c);
    plate(c);
    closed_forms(c);
    kernel(c);
}
