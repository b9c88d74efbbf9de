//! Criterion benchmarks for the exact-arithmetic kernels: scalar products,
//! torus products, canonical reduction, and the full knot trace.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use skeintrace::complex::figure_eight;
use skeintrace::qtorus::TorusElem;
use skeintrace::scalar::{default_constants, AngleId, Rat, Scalar};
use skeintrace::trace3d::{figure_eight_presentation, trace_3d, SqgmContext};

fn scalar_mul(c: &mut Criterion) {
    let a = Scalar::int(3)
        .mul(&Scalar::zeta_pow(1))
        .mul(&Scalar::a_quarters(5))
        .add(&Scalar::q_angle(
            AngleId::Tet { tet: 0, slot: 0 },
            Rat::new(1, 2),
        ))
        .add(&Scalar::ct_pow(-2));
    let b = Scalar::q_half_pow(3)
        .add(&Scalar::q_angle(
            AngleId::Tet { tet: 1, slot: 1 },
            Rat::new(-3, 4),
        ))
        .add(&Scalar::cb_pow(2).neg());
    c.bench_function("scalar mul (3x3 terms)", |bench| {
        bench.iter(|| black_box(&a).mul(black_box(&b)))
    });
}

fn torus_mul(c: &mut Criterion) {
    let m = figure_eight();
    let torus = m.big_sf_torus();
    let mut x = TorusElem::one(&torus);
    let mut y = TorusElem::one(&torus);
    for i in 0..torus.rank() {
        let k = (i as i64 % 5) - 2;
        if k != 0 {
            x = x.mul(&TorusElem::gen_pow(&torus, i, k)).unwrap();
            y = y
                .mul(&TorusElem::gen_pow(&torus, torus.rank() - 1 - i, -k))
                .unwrap();
        }
    }
    let sum = x.add(&y).unwrap();
    c.bench_function("torus mul (rank 24)", |bench| {
        bench.iter(|| black_box(&sum).mul(black_box(&sum)).unwrap())
    });
}

fn reduce_canonical(c: &mut Criterion) {
    let m = figure_eight();
    let ctx = SqgmContext::new(&m).unwrap();
    let e = TorusElem::monomial(&ctx.shape, vec![5, 2, 2, -3, 1, 4], Scalar::one())
        .unwrap()
        .add(
            &TorusElem::monomial(&ctx.shape, vec![-1, 0, 3, 2, -2, 1], Scalar::q_half_pow(1))
                .unwrap(),
        )
        .unwrap();
    c.bench_function("gluing-module reduce", |bench| {
        bench.iter(|| ctx.reduce(black_box(&e)).unwrap())
    });
}

fn knot_trace(c: &mut Criterion) {
    let m = figure_eight();
    let ctx = SqgmContext::new(&m).unwrap();
    let pres = figure_eight_presentation(&m);
    let (ct, cb) = default_constants();
    c.bench_function("figure-eight knot trace", |bench| {
        bench.iter(|| {
            trace_3d(&ctx, &pres, &Scalar::ct_pow(1), &Scalar::cb_pow(1))
                .unwrap()
                .substitute_constants(black_box(&ct), black_box(&cb))
                .unwrap()
        })
    });
}

criterion_group!(benches, scalar_mul, torus_mul, reduce_canonical, knot_trace);
criterion_main!(benches);
