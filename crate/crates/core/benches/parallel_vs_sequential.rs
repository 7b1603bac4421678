use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use toric_stab::polytope::{delta_j, lattice_count, obstruction};
use toric_stab::stabilize::audit_bounds;
use toric_stab::{ExecMode, Fan2D};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn random_fans(count: usize, len: usize, seed: u64) -> Vec<Fan2D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut fan = Fan2D::hirzebruch(rng.random_range(0..4));
            for _ in 0..len {
                let cone = rng.random_range(0..fan.len());
                fan = fan.blow_up(cone).unwrap().0;
            }
            fan
        })
        .collect()
}

fn bench_lattice_count(c: &mut Criterion) {
    let p = delta_j(3).unwrap();
    let mut group = c.benchmark_group("lattice_count_delta3_k64");
    for (name, mode) in MODES {
        group.bench_function(name, |b| b.iter(|| lattice_count(black_box(&p), 64, mode).unwrap()));
    }
    group.finish();
}

fn bench_obstruction(c: &mut Criterion) {
    let mut group = c.benchmark_group("obstruction");
    for j in [2u64, 3] {
        let p = delta_j(j).unwrap();
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, j), &p, |b, p| {
                b.iter(|| obstruction(black_box(p), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_audit(c: &mut Criterion) {
    let fans = random_fans(64, 10, 7);
    let mut group = c.benchmark_group("audit_bounds_64_fans");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(name, |b| b.iter(|| audit_bounds(black_box(&fans), mode)));
    }
    group.finish();
}

criterion_group!(benches, bench_lattice_count, bench_obstruction, bench_audit);
criterion_main!(benches);
