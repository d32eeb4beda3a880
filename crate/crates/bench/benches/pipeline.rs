use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use agflag::field::Field;
use agflag::flag::build_flag;
use agflag::isodual::{isodual_flag, nullspace_full_weight, product_rows};
use agflag_bench::load_fixture;

fn field_mul(c: &mut Criterion) {
    let f = Field::new(2, 6, &[1, 1, 0, 1, 1, 0, 1], &[0, 1]).unwrap();
    let els: Vec<_> = f.elements().collect();
    c.bench_function("gf64_mul_4096", |b| {
        b.iter(|| {
            let mut acc = f.one();
            for &x in &els {
                for &y in &els {
                    acc = f.add(acc, f.mul(black_box(x), black_box(y)));
                }
            }
            acc
        })
    });
}

fn hermitian_flag_build(c: &mut Criterion) {
    let (_, curve, eval) = load_fixture("hermitian16", 1);
    c.bench_function("hermitian_build_flag_beta2", |b| {
        b.iter(|| build_flag(black_box(&curve), &[2], &eval).unwrap())
    });
}

fn hermitian_product_nullspace(c: &mut Criterion) {
    let (field, curve, eval) = load_fixture("hermitian16", 1);
    let flag = build_flag(&curve, &[2], &eval).unwrap();
    c.bench_function("hermitian_product_nullspace_n63", |b| {
        b.iter(|| {
            nullspace_full_weight(
                &field,
                product_rows(&field, black_box(&flag.bb)),
                63,
                0,
            )
        })
    });
}

fn koetter_l2_isodual(c: &mut Criterion) {
    let (_, curve, eval) = load_fixture("koetter_l2", 1);
    c.bench_function("koetter_l2_isodual_end_to_end", |b| {
        b.iter(|| isodual_flag(black_box(&curve), &[2], &eval, 0).unwrap())
    });
}

fn koetter_l3_isodual(c: &mut Criterion) {
    let (_, curve, eval) = load_fixture("koetter_l3", 1);
    let mut group = c.benchmark_group("large");
    group.sample_size(10);
    group.bench_function("koetter_l3_isodual_n255", |b| {
        b.iter(|| isodual_flag(black_box(&curve), &[4], &eval, 0).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    field_mul,
    hermitian_flag_build,
    hermitian_product_nullspace,
    koetter_l2_isodual,
    koetter_l3_isodual
);
criterion_main!(benches);
