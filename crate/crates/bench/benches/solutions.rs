use criterion::{black_box, criterion_group, criterion_main, Criterion};
use gardner_core::{
    DoublePole, DoublePoleSpec, Eigen, Evaluator, GardnerParams, Kink, KinkSpec, MultiSoliton, SolitonSpec,
    StepBoundary, TwoSoliton,
};

fn sweep<M: Evaluator>(m: &M) -> f64 {
    (-50..=50).map(|n| m.u(n, black_box(0.3)).unwrap()).sum()
}

fn bench_symmetric(c: &mut Criterion) {
    let p = GardnerParams::new(1.0, -1.0, -1).unwrap();
    let spec = SolitonSpec::new(p, vec![Eigen { lambda: 2.3, c0: 1.0 }, Eigen { lambda: 2.5, c0: 1.0 }]).unwrap();
    let two = TwoSoliton::new(spec.clone()).unwrap();
    let multi = MultiSoliton::new(spec).unwrap();
    let three = MultiSoliton::new(
        SolitonSpec::new(p, [1.5, 2.0, 2.5].iter().map(|&lambda| Eigen { lambda, c0: 1.0 }).collect()).unwrap(),
    )
    .unwrap();
    let dp = DoublePole::new(DoublePoleSpec { params: p, lambda1: 1.5, b1_0: -1.0, d1_0: -1.0 }).unwrap();
    c.bench_function("two-soliton closed form, 101 sites", |b| b.iter(|| sweep(&two)));
    c.bench_function("two-soliton linear system, 101 sites", |b| b.iter(|| sweep(&multi)));
    c.bench_function("three-soliton linear system, 101 sites", |b| b.iter(|| sweep(&three)));
    c.bench_function("double pole, 101 sites", |b| b.iter(|| sweep(&dp)));
}

fn bench_kink(c: &mut Criterion) {
    let c0 = 0.7;
    let k = Kink::new(KinkSpec {
        params: GardnerParams::new(1.0, 1.0, 1).unwrap(),
        boundary: StepBoundary::regular_for(c0, 0.5),
        zeta_bar1: KinkSpec::default_zeta_bar(c0).unwrap(),
        c1_0: 0.5,
        radical: Default::default(),
    })
    .unwrap();
    c.bench_function("kink, 101 sites", |b| b.iter(|| sweep(&k)));
}

criterion_group!(benches, bench_symmetric, bench_kink);
criterion_main!(benches);
