use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use tsmlab::injectivity::{assemble_operator, make_set, BasisSpec, Engine, OperatorConfig, RadiusGrid, SetKind};
use tsmlab::{Complex64, Exec};

const POLICIES: [(&str, Exec); 2] = [("serial", Exec::Serial), ("parallel", Exec::Parallel)];

fn operator_assembly(c: &mut Criterion) {
    let radii = RadiusGrid { count: 12, ..Default::default() }.radii().unwrap();
    let set = make_set(SetKind::CoxeterLines { lines: 2, extent: 4.0, per_ray: 9 }, radii).unwrap();
    let basis = BasisSpec::SpecialHermite { max_index: 6, scale: 1.0 };
    let config = OperatorConfig { circle_nodes: 128, ..Default::default() };

    let mut group = c.benchmark_group("assemble_twisted_sigma2");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| assemble_operator(black_box(&set), &basis, Engine::Twisted, &config, exec).unwrap())
        });
    }
    group.finish();
}

fn chunked_sum(c: &mut Criterion) {
    let len = 1 << 20;
    let mut group = c.benchmark_group("sum_complex");
    for (name, exec) in POLICIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                exec.sum_complex(black_box(len), |i| {
                    let t = i as f64 * 1e-3;
                    Complex64::new(t.cos(), t.sin()) * (-t * 1e-3).exp()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, operator_assembly, chunked_sum);
criterion_main!(benches);
