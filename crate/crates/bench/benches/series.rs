use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use resonance_core::{bilateral_sum, kernel, validate, GeometryConfig, KernelKind, Orientation};

fn kernel_eval(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel");
    // Taylor branch, asinh branch, far image
    for (z, a) in [(1.2, 1e-6), (1.2, 4.0), (1e5, 4.0)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("z={z},a={a}")), &(z, a), |b, &(z, a)| {
            b.iter(|| kernel(KernelKind::Cosine, black_box(z), black_box(a)))
        });
    }
    g.finish();
}

fn image_sum(c: &mut Criterion) {
    let mut g = c.benchmark_group("bilateral_sum");
    g.sample_size(20);
    for a in [0.0, 0.5, 4.0] {
        let cfg = validate(GeometryConfig::cavity(Orientation::Perpendicular, 0.5, 0.3, 1.2, a)).unwrap();
        g.bench_with_input(BenchmarkId::new("tol=1e-10", a), &cfg, |b, cfg| {
            b.iter(|| bilateral_sum(KernelKind::Cosine, black_box(cfg), 1e-10).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, kernel_eval, image_sum);
criterion_main!(benches);
