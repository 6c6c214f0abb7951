use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sal_core::dynamics::{evolve_batch, initial_state, Protocol, TargetInputs};
use sal_core::hamiltonians::TeleportSpec;
use sal_core::{cd_teleport, evolve, make_schedule, Family, QState};

fn teleport_starts(n: usize, count: usize) -> Vec<QState> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..count)
        .map(|_| {
            let psi = QState::random(n, &mut rng);
            initial_state(Protocol::TeleportState, TargetInputs::Teleport { psi: &psi, gate: None }).unwrap()
        })
        .collect()
}

fn single_vs_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("teleport_evolution");
    group.sample_size(10);
    for n in [1usize, 2] {
        let sa = cd_teleport(&TeleportSpec::new(n, make_schedule(Family::Linear)), 1.0).unwrap();
        let starts = teleport_starts(n, 8);
        let steps = 2000;
        group.bench_with_input(BenchmarkId::new("single", n), &n, |b, _| {
            b.iter(|| evolve(&sa, black_box(&starts[0]), 1.0, steps).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("batch8", n), &n, |b, _| {
            b.iter(|| evolve_batch(&sa, black_box(&starts), 1.0, steps).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, single_vs_batch);
criterion_main!(benches);
