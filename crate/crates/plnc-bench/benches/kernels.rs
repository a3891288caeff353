use criterion::{black_box, criterion_group, criterion_main, Criterion};

use plnc_core::geometry::{reserved_area_cr, reserved_area_plnc};
use plnc_core::interference::inr_breakdown;
use plnc_core::montecarlo::{estimate_inr, CountModel, McConfig};
use plnc_core::rate::end_to_end_rate_plnc;
use plnc_core::{distance_from_snr_db, NodeId, QuadratureSpec, SlotReservation, SystemParams};

fn dense_params() -> SystemParams {
    let r_n = distance_from_snr_db(20.0);
    SystemParams::new(r_n, 0.5, 10.0, 7.0).unwrap()
}

fn bench_reserved_areas(c: &mut Criterion) {
    let p = dense_params();
    c.bench_function("reserved_area_cr", |b| {
        b.iter(|| reserved_area_cr(black_box(&p)).unwrap())
    });
    c.bench_function("reserved_area_plnc", |b| {
        b.iter(|| reserved_area_plnc(black_box(&p)).unwrap())
    });
}

fn bench_inr_breakdown(c: &mut Criterion) {
    let p = dense_params();
    let quad = QuadratureSpec::default();
    c.bench_function("inr_breakdown", |b| {
        b.iter(|| inr_breakdown(black_box(&p), &quad).unwrap())
    });
}

fn bench_end_to_end_rate(c: &mut Criterion) {
    let p = dense_params();
    let quad = QuadratureSpec::default();
    c.bench_function("end_to_end_rate_plnc", |b| {
        b.iter(|| end_to_end_rate_plnc(black_box(&p), &quad).unwrap())
    });
}

fn bench_mc_estimate(c: &mut Criterion) {
    let r_n = distance_from_snr_db(20.0);
    let p = SystemParams::new(r_n, 0.5, 10.0, 0.2).unwrap();
    let mc = McConfig {
        trials: 200,
        seed: 42,
        count_model: CountModel::Poisson,
    };
    c.bench_function("estimate_inr_200_draws", |b| {
        b.iter(|| estimate_inr(black_box(&p), SlotReservation::Plnc, NodeId::B, &mc).unwrap())
    });
}

criterion_group!(
    benches,
    bench_reserved_areas,
    bench_inr_breakdown,
    bench_end_to_end_rate,
    bench_mc_estimate
);
criterion_main!(benches);
