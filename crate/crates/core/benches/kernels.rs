use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cubic_circle::circle::{brute_count_with, CountPath};
use cubic_circle::field::MinkowskiVec;
use cubic_circle::forms::CubicForm;
use cubic_circle::sums::{weyl_sum, BoxSpec};
use cubic_circle::{Ctx, Exec};

fn modes() -> [(&'static str, Ctx); 2] {
    let big = |exec| Ctx { exec, ..Ctx::default() }.with_max_points(1u128 << 40);
    [("Sequential", big(Exec::Sequential)), ("Parallel", big(Exec::Parallel))]
}

fn bench_brute_count(c: &mut Criterion) {
    let form = CubicForm::diagonal_int(1, &[1, 2, 3]).unwrap();
    let b = BoxSpec::symmetric(3);
    let mut g = c.benchmark_group("brute_count_generic_s3_p3");
    g.sample_size(10);
    for (name, ctx) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &ctx, |bch, ctx| {
            bch.iter(|| brute_count_with(&form, 3.0, &b, ctx, CountPath::Generic).unwrap())
        });
    }
    g.finish();
}

fn bench_weyl_sum(c: &mut Criterion) {
    let form = CubicForm::diagonal_int(1, &[1, 1]).unwrap();
    let b = BoxSpec::symmetric(2);
    let alpha = MinkowskiVec::approx(0.1234567, 0.7654321);
    let mut g = c.benchmark_group("weyl_sum_s2_p6");
    g.sample_size(10);
    for (name, ctx) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &ctx, |bch, ctx| {
            bch.iter(|| weyl_sum(&form, &alpha, 6.0, &b, ctx).unwrap())
        });
    }
    g.finish();
}

fn bench_scan(c: &mut Criterion) {
    let form = CubicForm::diagonal_int(1, &[1, 1, 1]).unwrap();
    let mut g = c.benchmark_group("geometric_condition_scan_s3_h2");
    g.sample_size(10);
    for (name, ctx) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &ctx, |bch, ctx| {
            bch.iter(|| form.geometric_condition_scan(2, ctx).unwrap())
        });
    }
    g.finish();
}

criterion_group!(kernels, bench_brute_count, bench_weyl_sum, bench_scan);
criterion_main!(kernels);
