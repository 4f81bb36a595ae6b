//! The same workloads on the global thread pool and on a one-thread pool.
//! Without the `parallel` feature both variants run sequentially.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use subshift::entropy::{strip_table, StripOptions};
use subshift::solver::count_language;
use subshift::{box_support, zoo, SearchBudget, Shift};

fn with_threads<R: Send>(one: bool, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if one {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool");
            return pool.install(f);
        }
    }
    let _ = one;
    f()
}

fn workloads(c: &mut Criterion) {
    let hs = Shift::new(zoo::hard_squares()).unwrap();
    let xs = Shift::new(zoo::x_struct()).unwrap();
    let budget = SearchBudget::default();
    let mut g = c.benchmark_group("parallel_vs_sequential");
    g.sample_size(10);
    for (name, one) in [("parallel", false), ("sequential", true)] {
        g.bench_with_input(BenchmarkId::new("count_hard_squares_box3", name), &one, |b, &one| {
            let f = box_support(2, 3);
            b.iter(|| with_threads(one, || black_box(count_language(&hs, &f, 0, &budget).unwrap())))
        });
        g.bench_with_input(BenchmarkId::new("count_x_struct_box1_m1", name), &one, |b, &one| {
            let f = box_support(2, 1);
            b.iter(|| with_threads(one, || black_box(count_language(&xs, &f, 1, &budget).unwrap())))
        });
        g.bench_with_input(BenchmarkId::new("strip_hard_squares_w8", name), &one, |b, &one| {
            b.iter(|| with_threads(one, || black_box(strip_table(&hs, 8, &StripOptions::default()).unwrap())))
        });
    }
    g.finish();
}

criterion_group!(benches, workloads);
criterion_main!(benches);
