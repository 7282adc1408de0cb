//! Parallel against sequential execution of the heavy kernels. The switch is
//! the runtime toggle in `par`; build with `--no-default-features` to compile
//! the rayon path out entirely.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use ito_hopf::fixtures::{lk_algebra, lk_r_series};
use ito_hopf::par;
use ito_hopf::prodint::double_fb;
use ito_hopf::quantise::{build_context, quasitriangularity_check};
use ito_hopf::random;
use ito_hopf::tensor::{coproduct, multi_ito_product};
use ito_hopf::ybe::qybe_check;

const MODES: [(&str, bool); 2] = [("parallel", true), ("sequential", false)];

fn bench_multi_product(c: &mut Criterion) {
    let alg = lk_algebra();
    let mut g = random::rng(11);
    let a = coproduct(&random::tensor(&mut g, 2, 5, 24));
    let b = coproduct(&random::tensor(&mut g, 2, 5, 24));
    let mut group = c.benchmark_group("multi_ito_product");
    for (mode, on) in MODES {
        par::set_parallel(on);
        group.bench_function(mode, |bch| bch.iter(|| multi_ito_product(&alg, black_box(&a), black_box(&b)).unwrap()));
    }
    group.finish();
}

fn bench_double_product(c: &mut Criterion) {
    let alg = lk_algebra();
    let mut group = c.benchmark_group("double_fb");
    group.sample_size(10);
    for order in [4, 5] {
        let r = random::generic_r(&mut random::rng(order as u64), 2, order);
        for (mode, on) in MODES {
            par::set_parallel(on);
            group.bench_with_input(BenchmarkId::new(mode, order), &r, |bch, r| bch.iter(|| double_fb(&alg, r).unwrap()));
        }
    }
    group.finish();
}

fn bench_qybe(c: &mut Criterion) {
    let alg = lk_algebra();
    let rr = double_fb(&alg, &lk_r_series(5)).unwrap().series;
    let mut group = c.benchmark_group("qybe_check_n5");
    group.sample_size(10);
    for (mode, on) in MODES {
        par::set_parallel(on);
        group.bench_function(mode, |bch| bch.iter(|| qybe_check(&alg, black_box(&rr)).unwrap()));
    }
    group.finish();
}

fn bench_quasitriangularity(c: &mut Criterion) {
    let alg = lk_algebra();
    let ctx = build_context(&alg, &random::generic_r(&mut random::rng(3), 2, 3)).unwrap();
    let mut group = c.benchmark_group("quasitriangularity_n3");
    group.sample_size(10);
    for (mode, on) in MODES {
        par::set_parallel(on);
        group.bench_function(mode, |bch| bch.iter(|| quasitriangularity_check(&ctx, 3)));
    }
    group.finish();
    par::set_parallel(true);
}

criterion_group!(benches, bench_multi_product, bench_double_product, bench_qybe, bench_quasitriangularity);
criterion_main!(benches);
