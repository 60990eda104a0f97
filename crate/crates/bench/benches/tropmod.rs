use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use tropmod_core::matroid::{fano, mk4_matrix, realize_matroid_iso};
use tropmod_core::quadform::{classify_g2, delone_subdivision};
use tropmod_core::torelli::schottky_from_moduli;
use tropmod_core::{build_cover_a3, build_moduli_poset, enumerate_trivalent, QuadForm};

fn certificates(c: &mut Criterion) {
    let cells = build_moduli_poset(4).unwrap().cells;
    c.bench_function("certificates/genus4_cells", |b| {
        b.iter(|| cells.iter().map(|cell| cell.graph.canonical_certificate().unwrap()).collect::<Vec<_>>())
    });
}

fn trivalent(c: &mut Criterion) {
    let mut group = c.benchmark_group("trivalent");
    for g in [4usize, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(g), &g, |b, &g| {
            b.iter(|| enumerate_trivalent(g).unwrap().len())
        });
    }
    group.finish();
}

fn moduli(c: &mut Criterion) {
    let mut group = c.benchmark_group("moduli");
    group.sample_size(10);
    for g in [3usize, 4, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(g), &g, |b, &g| {
            b.iter(|| build_moduli_poset(g).unwrap().cells.len())
        });
    }
    group.finish();
}

fn schottky(c: &mut Criterion) {
    let mut group = c.benchmark_group("schottky_from_moduli");
    group.sample_size(10);
    for g in [4usize, 5] {
        let poset = build_moduli_poset(g).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(g), &poset, |b, p| {
            b.iter(|| schottky_from_moduli(p).unwrap().len())
        });
    }
    group.finish();
}

fn matroids(c: &mut Criterion) {
    let f7 = fano().to_matroid();
    c.bench_function("matroid/fano_automorphisms", |b| b.iter(|| f7.automorphism_group_order().unwrap()));
    let a = mk4_matrix();
    let auts = a.binary_matroid().to_matroid().automorphisms().unwrap();
    c.bench_function("matroid/realize_mk4_automorphisms", |b| {
        b.iter(|| auts.iter().map(|pi| realize_matroid_iso(&a, &a, pi).unwrap()).collect::<Vec<_>>())
    });
    c.bench_function("cover/a3", |b| b.iter(|| build_cover_a3().unwrap().overlap_count()));
}

fn forms(c: &mut Criterion) {
    let q2: QuadForm = "2,1;1,2".parse().unwrap();
    let q3: QuadForm = "2,1,1;1,2,1;1,1,2".parse().unwrap();
    let skew: QuadForm = "1,10;10,101".parse().unwrap();
    c.bench_function("delone/g2", |b| b.iter(|| delone_subdivision(black_box(&q2), 3).unwrap()));
    c.bench_function("delone/g3", |b| b.iter(|| delone_subdivision(black_box(&q3), 3).unwrap()));
    c.bench_function("classify_g2/skewed", |b| b.iter(|| classify_g2(black_box(&skew)).unwrap()));
}

criterion_group!(benches, certificates, trivalent, moduli, schottky, matroids, forms);
criterion_main!(benches);
