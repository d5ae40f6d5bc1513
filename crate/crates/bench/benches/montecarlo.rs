use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use uwrelay_bench::scenario;
use uwrelay_core::metrics::CapacityOptions;
use uwrelay_core::montecarlo::{simulate_asep, simulate_asep_bitlevel, simulate_capacity, simulate_outage, SimConfig};

const TRIALS: u64 = 100_000;

fn throughput(c: &mut Criterion) {
    let mut group = c.benchmark_group("montecarlo");
    group.sample_size(10);
    group.throughput(Throughput::Elements(TRIALS));
    let s = scenario("salty-moderate", 2.0, 1.0, 15.0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    for w in [1, workers] {
        let cfg = SimConfig {
            trials: TRIALS,
            root_seed: 1,
            batch_size: 16 * 1024,
            workers: w,
        };
        group.bench_with_input(BenchmarkId::new("outage", w), &cfg, |b, cfg| {
            b.iter(|| simulate_outage(&s, cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("asep_conditional", w), &cfg, |b, cfg| {
            b.iter(|| simulate_asep(&s, cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("asep_bitlevel", w), &cfg, |b, cfg| {
            b.iter(|| simulate_asep_bitlevel(&s, cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("capacity", w), &cfg, |b, cfg| {
            b.iter(|| simulate_capacity(&s, cfg, &CapacityOptions::default()).unwrap())
        });
        if workers == 1 {
            break;
        }
    }
    group.finish();
}

criterion_group!(benches, throughput);
criterion_main!(benches);
