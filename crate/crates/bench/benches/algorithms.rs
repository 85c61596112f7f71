use ampleforge::amalgam::{Amalgam, Side, Tower, TowerVariant};
use ampleforge::autos::{anosov_candidate, extend_over_tower, genus2_candidate, growth_estimate, orbit_conjugacy};
use ampleforge::imaginaries::{canonical_conjugacy_rep, eq_double_coset};
use ampleforge::stallings::SubgroupAutomaton;
use ampleforge::witness::{run_all, Bounds};
use ampleforge::Word;
use ampleforge_bench::{random_word, random_words, rng};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn words(c: &mut Criterion) {
    let mut g = c.benchmark_group("word");
    for len in [16, 256, 4096] {
        let xs = random_words(1, 2, 4, len);
        g.bench_with_input(BenchmarkId::new("multiply", len), &xs, |b, xs| b.iter(|| xs[0].multiply(&xs[1])));
        g.bench_with_input(BenchmarkId::new("conjugacy_rep", len), &xs, |b, xs| b.iter(|| canonical_conjugacy_rep(&xs[0])));
        let p = xs[0].pow(3);
        g.bench_with_input(BenchmarkId::new("primitive_root", len), &p, |b, p| b.iter(|| p.primitive_root()));
    }
    g.finish();
}

fn stallings(c: &mut Criterion) {
    let mut g = c.benchmark_group("stallings");
    let gens = random_words(2, 4, 3, 12);
    g.bench_function("fold_4x12", |b| b.iter(|| SubgroupAutomaton::build(black_box(&gens))));
    let a = Tower::build(1, TowerVariant::Fig1);
    g.bench_function("root_closed_A_i1_L5", |b| b.iter(|| a.base().is_root_closed_bounded(5, 3)));
    g.finish();
}

fn imaginaries(c: &mut Criterion) {
    let mut r = rng(3);
    let tuples: Vec<[Word; 6]> =
        (0..64).map(|_| std::array::from_fn(|_| random_word(&mut r, 3, 6))).collect();
    c.bench_function("double_coset_64", |b| {
        b.iter(|| {
            tuples
                .iter()
                .filter(|t| eq_double_coset((&t[0], &t[1], &t[2]), (&t[0], &t[4], &t[2]), 2, 3))
                .count()
        })
    });
}

fn amalgams(c: &mut Criterion) {
    let g = Amalgam::new(3, 2, Word::parse("[e1,e2] e3").unwrap(), Word::parse("[e1,e2]").unwrap()).unwrap();
    let mut r = rng(4);
    let input: Vec<(Side, Word)> = (0..32)
        .map(|k| if k % 2 == 0 { (Side::L, random_word(&mut r, 3, 4)) } else { (Side::R, random_word(&mut r, 2, 4)) })
        .collect();
    c.bench_function("normal_form_32", |b| b.iter(|| g.normal_form(black_box(&input))));
    let x = g.normal_form(&input);
    let y = g.multiply(&g.normal_form(&[(Side::L, Word::generator(1))]), &x);
    let y = g.multiply(&y, &g.normal_form(&[(Side::L, Word::generator(1).inverse())]));
    c.bench_function("amalgam_conjugacy_32", |b| b.iter(|| g.conjugate_in_amalgam(&x, &y, 64)));
}

fn autos(c: &mut Criterion) {
    let tower = Tower::build(0, TowerVariant::Fig1);
    let f = extend_over_tower(&anosov_candidate(), &tower, 0).unwrap();
    c.bench_function("orbit_conjugacy_K8", |b| b.iter(|| orbit_conjugacy(&f, &Word::generator(4), 8)));
    let g2 = genus2_candidate();
    c.bench_function("genus2_growth_K8", |b| b.iter(|| growth_estimate(&g2, &Word::generator(1), 8)));
}

fn witness(c: &mut Criterion) {
    let mut g = c.benchmark_group("witness");
    g.sample_size(10);
    g.bench_function("run_all_n2", |b| b.iter(|| run_all(2, Bounds::default())));
    g.finish();
}

criterion_group!(benches, words, stallings, imaginaries, amalgams, autos, witness);
criterion_main!(benches);
