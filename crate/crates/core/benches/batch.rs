use bottbord_core::charmatrix::Mode;
use bottbord_core::cobordism::{verdict, verify_with, VerifyParams};
use bottbord_core::enumerate::{enum_family, FamilyKind, FamilySpec};
use bottbord_core::par::{map_ordered, Execution};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn cube_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("thm_2_5_n5");
    group.sample_size(10);
    let params = VerifyParams {
        n: Some(5),
        ..VerifyParams::default()
    };
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_with("thm_2_5", &params, exec).unwrap())
        });
    }
    group.finish();
}

fn verdict_batch(c: &mut Criterion) {
    let spec = FamilySpec::new(&[2, 1, 1], Mode::Integer, FamilyKind::Triangular).with_bound(1);
    let family = enum_family(&spec).unwrap();
    let mut group = c.benchmark_group("verdicts_z_2_1_1");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| map_ordered(&family.matrices, exec, |a| verdict(a).unwrap().sw_all_zero))
        });
    }
    group.finish();
}

criterion_group!(benches, cube_sweep, verdict_batch);
criterion_main!(benches);
