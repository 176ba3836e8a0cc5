use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lcs_core::lcs::{Engine, Ideal, Quotient};
use lcs_core::linalg::{reduce, SparseVec};
use lcs_core::Rational;
use std::hint::black_box;
use std::sync::Arc;

/// Rows of a banded integer matrix with a few dependent rows mixed in.
fn banded(rows: usize, width: usize) -> Vec<SparseVec> {
    (0..rows)
        .map(|r| {
            let items = (0..4).map(|j| ((r * 7 + j * 13) % width, Rational::from_int(((r + j) % 5) as i64 - 2)));
            SparseVec::new(items)
        })
        .collect()
}

fn dims_b3(n: usize, d: usize) -> usize {
    let e = Engine::symplectic(n);
    let w = Arc::new(Ideal::omega(n).unwrap());
    e.dim_in_degree(Quotient::B(3), d, Some(&w)).unwrap()
}

fn bench_rref(c: &mut Criterion) {
    let mut g = c.benchmark_group("reduction");
    for size in [200, 800] {
        let rows = banded(size, size / 2);
        g.bench_with_input(BenchmarkId::new("rref", size), &rows, |b, rows| b.iter(|| reduce(black_box(rows), size / 2).unwrap()));
    }
    g.sample_size(10);
    g.bench_function("b3 modulo omega, n=2, d=5", |b| b.iter(|| dims_b3(2, 5)));

    // the same engine call pinned to one worker, for the parallel speedup
    #[cfg(feature = "parallel")]
    {
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        g.bench_function("b3 modulo omega, n=2, d=5, one thread", |b| b.iter(|| single.install(|| dims_b3(2, 5))));
    }
    g.finish();
}

criterion_group!(benches, bench_rref);
criterion_main!(benches);
