use criterion::{black_box, criterion_group, criterion_main, Criterion};

use aclab::extend;
use aclab::pcseq::{self, PCSeq};
use aclab::setprops::{self, SetDescriptor};
use aclab::{chi, integrate, successor};
use aclab_bench::{field_inputs, group_inputs};

fn couple_maps(c: &mut Criterion) {
    let xs = group_inputs(256, 1);
    c.bench_function("integrate/successor/chi x256", |b| {
        b.iter(|| {
            for x in &xs {
                black_box((integrate(x), successor(x), chi(x)));
            }
        })
    });
}

fn field_ops(c: &mut Criterion) {
    let fs = field_inputs(32, 2);
    c.bench_function("frac mul+div x31", |b| {
        b.iter(|| {
            for w in fs.windows(2) {
                black_box((&(&w[0] * &w[1]) / &w[1]).unwrap());
            }
        })
    });
    c.bench_function("frac derivative+valuation x32", |b| {
        b.iter(|| {
            for f in &fs {
                black_box(f.derivative().valuation());
            }
        })
    });
}

fn set_properties(c: &mut Criterion) {
    let a = SetDescriptor::affine(aclab::GroupElem::basis(0), 3, SetDescriptor::PsiDown).unwrap();
    c.bench_function("is_jammed affine psidown", |b| b.iter(|| black_box(setprops::is_jammed(&a))));
    let lt = SetDescriptor::LessThan(aclab::GroupElem::basis(0));
    c.bench_function("has_yardstick lt e0", |b| b.iter(|| black_box(setprops::has_yardstick(&lt))));
}

fn steps_and_sequences(c: &mut Criterion) {
    let mut g = c.benchmark_group("extension");
    g.sample_size(10);
    g.bench_function("smallint 10 steps", |b| {
        b.iter(|| black_box(extend::step_chain(&extend::smallint(), 10).unwrap()))
    });
    g.finish();
    c.bench_function("lambda pc prefix 12", |b| b.iter(|| black_box(pcseq::is_pc_prefix(&PCSeq::lambda(), 12).unwrap())));
}

criterion_group!(benches, couple_maps, field_ops, set_properties, steps_and_sequences);
criterion_main!(benches);
