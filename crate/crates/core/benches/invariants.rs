use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_rational::Ratio;
use poset_derived::field::{PrimeField, Rationals};
use poset_derived::fixtures::{exs_sum, fig1_left, fig1_right};
use poset_derived::homology::betti_with;
use poset_derived::invariants::{default_fields, distinguish_with, invariant_report_with};
use poset_derived::poset::random_poset;
use poset_derived::{Execution, Poset};

const PRIMES: &[u64] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

fn modes() -> Vec<(&'static str, Execution)> {
    let mut m = vec![("sequential", Execution::Sequential)];
    if Execution::parallel_available() {
        m.push(("parallel", Execution::Parallel));
    }
    m
}

fn inputs() -> Vec<(&'static str, Poset)> {
    vec![
        ("fig1l", fig1_left()),
        ("exs_sum", exs_sum()),
        ("random16", random_poset(16, Ratio::new(1, 3), 7).unwrap()),
    ]
}

fn report(c: &mut Criterion) {
    let mut g = c.benchmark_group("invariant_report");
    g.sample_size(10);
    let fields = default_fields(PRIMES);
    for (name, x) in inputs() {
        for (mode, exec) in modes() {
            g.bench_with_input(BenchmarkId::new(mode, name), &x, |b, x| {
                b.iter(|| invariant_report_with(black_box(x), PRIMES, &fields, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn distinguish(c: &mut Criterion) {
    let mut g = c.benchmark_group("distinguish_fig1");
    g.sample_size(10);
    let (l, r) = (fig1_left(), fig1_right());
    for (mode, exec) in modes() {
        g.bench_function(mode, |b| {
            b.iter(|| distinguish_with(black_box(&l), black_box(&r), PRIMES, exec).unwrap())
        });
    }
    g.finish();
}

fn betti(c: &mut Criterion) {
    let mut g = c.benchmark_group("betti");
    g.sample_size(10);
    for (name, x) in inputs() {
        for (mode, exec) in modes() {
            g.bench_with_input(BenchmarkId::new(format!("{mode}/Q"), name), &x, |b, x| {
                b.iter(|| betti_with(black_box(x), &Rationals, exec))
            });
            g.bench_with_input(BenchmarkId::new(format!("{mode}/F2"), name), &x, |b, x| {
                b.iter(|| betti_with(black_box(x), &PrimeField::new(2).unwrap(), exec))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, report, distinguish, betti);
criterion_main!(benches);
