use criterion::{black_box, criterion_group, criterion_main, Criterion};
use piq_core::qkernel::{q_pochhammer_inf, QParams};
use piq_core::registry::{committed_draws, verify, Catalog, IdentityParams, VerifyOptions};
use piq_core::series::terminating::term_7f6;
use piq_core::BigReal;

const P: usize = 192;

fn kernels(c: &mut Criterion) {
    let q = QParams::new(BigReal::from_ratio(9, 10, P)).unwrap();
    let x = BigReal::from_ratio(1, 3, P);
    let eps = BigReal::pow2(-150, P);
    c.bench_function("q_pochhammer_inf q=0.9", |b| b.iter(|| q_pochhammer_inf(black_box(&x), &q, &eps).unwrap()));

    let (a, bb, cc) = (BigReal::from_ratio(3, 7, P), BigReal::from_ratio(5, 11, P), BigReal::from_ratio(2, 13, P));
    c.bench_function("term_7f6 n=6 k=3", |b| b.iter(|| term_7f6(black_box(&a), &bb, &cc, 6, 3).unwrap()));
}

fn identities(c: &mut Criterion) {
    let catalog = Catalog::load().unwrap();
    let opts = VerifyOptions::default();
    c.bench_function("verify ramanujan", |b| b.iter(|| verify(&catalog, "ramanujan", &IdentityParams::new(), &opts).unwrap()));

    let draw = committed_draws().unwrap().params("eq3.3").unwrap()[0].clone();
    let exact = VerifyOptions { rational: true, ..VerifyOptions::default() };
    c.bench_function("verify eq3.3 exact draw", |b| b.iter(|| verify(&catalog, "eq3.3", &draw, &exact).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = kernels, identities
}
criterion_main!(benches);
