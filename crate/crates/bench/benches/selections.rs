use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hypersel_core::basebuilder::{base_at_cut, extreme_selection_at, wedge_cut, TransfiniteParams};
use hypersel_core::hyperspace::canonical_nets;
use hypersel_core::selection::{continuity_check, extremality_check, Mode, Selection};
use hypersel_core::selrel::derived_sets;
use hypersel_core::space::closed_family;
use hypersel_core::{ord, FamilyParams, PointSet, Space};

fn family(space: &Space, k: u64) -> Vec<PointSet> {
    closed_family(space, FamilyParams { grid_k: k, max_runs: 2 })
}

fn wedge(c: &mut Criterion) {
    let x = Space::wedge(2).unwrap();
    let hub = x.parse_point("w").unwrap();
    let fam = family(&x, 6);
    let f = extreme_selection_at(&x, &hub, Mode::Maximal, &fam).unwrap();
    c.bench_function("wedge/eval family", |b| {
        b.iter(|| fam.iter().map(|s| f.eval(&x, s).unwrap()).collect::<Vec<_>>())
    });
    c.bench_function("wedge/extremality", |b| {
        b.iter(|| extremality_check(&x, &f, &hub, Mode::Maximal, black_box(&fam), None).unwrap())
    });
    let nets = canonical_nets(&x, 6, 64);
    c.bench_function("wedge/continuity", |b| b.iter(|| continuity_check(&x, &f, black_box(&nets), 2).unwrap()));
    let cut = wedge_cut(&x, &hub).unwrap();
    let small = family(&x, 4);
    c.bench_function("wedge/cut base", |b| b.iter(|| base_at_cut(&x, &f, &cut, 8, &small).unwrap()));
}

fn ordinals(c: &mut Criterion) {
    let x = Space::ordinal(ord("w^2"));
    let opens: Vec<PointSet> = family(&x, 4)
        .iter()
        .map(|s| x.complement(s))
        .filter(|v| !v.is_empty())
        .take(50)
        .collect();
    c.bench_function("w^2/derived sets", |b| {
        b.iter(|| opens.iter().map(|v| derived_sets(&x, &Selection::OrderMax, v).unwrap()).collect::<Vec<_>>())
    });
    let y = Space::ordinal(ord("w*2"));
    let top = y.parse_point("w*2").unwrap();
    let fam = family(&y, 6);
    c.bench_function("w*2/roundtrip", |b| {
        b.iter(|| {
            hypersel_core::basebuilder::roundtrip(&y, &Selection::OrderMax, &top, &ord("w*2"), &TransfiniteParams::default(), &fam)
                .unwrap()
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = wedge, ordinals
}
criterion_main!(benches);
