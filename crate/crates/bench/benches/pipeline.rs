use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use parity_learn::charsample::characteristic_sample;
use parity_learn::corpus;
use parity_learn::dpainf::dpainf;
use parity_learn::forc::{learn_forc, myhill_nerode_from_dpa};
use parity_learn::precise::{join_priority_word, precise_dpa, precise_fwpm_from_dpa};
use parity_learn::{Alphabet, Dpa, OmegaSample};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Sample of at least `size` symbols labelled by `target`.
fn labelled_sample(target: &Dpa, size: usize, seed: u64) -> OmegaSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = OmegaSample::empty(target.alphabet.clone());
    while s.total_size() < size {
        let w = corpus::random_upword(&mut rng, target.syms(), 6, 6);
        let sign = target.accepts(&w);
        s.insert(w, sign).expect("membership is a function");
    }
    s
}

fn learning(c: &mut Criterion) {
    let target = corpus::finitely_many_b_or_aba();
    let mut group = c.benchmark_group("learn");
    for size in [16, 32, 64, 128] {
        let s = labelled_sample(&target, size, 1);
        group.bench_with_input(BenchmarkId::new("forc", size), &s, |b, s| {
            b.iter(|| learn_forc(black_box(s)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dpainf", size), &s, |b, s| {
            b.iter(|| dpainf(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn precise(c: &mut Criterion) {
    let mut group = c.benchmark_group("precise");
    for d in 2..=4 {
        let a = corpus::all_symbols_tracking(d);
        group.bench_with_input(BenchmarkId::new("all_symbols", d), &a, |b, a| {
            b.iter(|| precise_dpa(black_box(a), None).unwrap())
        });
    }
    let a = corpus::finitely_many_b_or_aba();
    let f = precise_fwpm_from_dpa(&a, &myhill_nerode_from_dpa(&a)).unwrap();
    let w = Alphabet::from_chars("ab")
        .unwrap()
        .parse_upword("abba,abaab")
        .unwrap();
    group.bench_function("join_priority_word", |b| {
        b.iter(|| join_priority_word(black_box(&f), black_box(&w)).unwrap())
    });
    group.finish();
}

fn charsample(c: &mut Criterion) {
    let mut group = c.benchmark_group("charsample");
    group.sample_size(10);
    group.bench_function("aba", |b| {
        b.iter(|| characteristic_sample(black_box(&corpus::finitely_many_b_or_aba())).unwrap())
    });
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let random = corpus::random_dpa(&mut rng, &Alphabet::from_chars("ab").unwrap(), 4, 2);
    group.bench_function("random_4_states", |b| {
        b.iter(|| characteristic_sample(black_box(&random)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, learning, precise, charsample);
criterion_main!(benches);
