//! Shared helpers for the integration suites: a brute-force divergence
//! oracle and seeded sequence generators.

#![allow(dead_code)]

use std::path::PathBuf;

use compseg::{Alphabet, CountVector, WeightMode, WeightedSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// `D_n` for every interior split of `rows`, recomputed from scratch per split.
pub fn naive_profile(rows: &[Vec<u64>], mode: WeightMode) -> Vec<f64> {
    let len = rows.len();
    let k = rows[0].len();
    (1..len)
        .map(|n| {
            let mut left = vec![0u64; k];
            let mut right = vec![0u64; k];
            for row in &rows[..n] {
                for (a, b) in left.iter_mut().zip(row) {
                    *a += b;
                }
            }
            for row in &rows[n..] {
                for (a, b) in right.iter_mut().zip(row) {
                    *a += b;
                }
            }
            let ml: u64 = left.iter().sum();
            let mr: u64 = right.iter().sum();
            if ml == 0 || mr == 0 {
                return 0.0;
            }
            let f: Vec<f64> = left.iter().map(|&c| c as f64 / ml as f64).collect();
            let g: Vec<f64> = right.iter().map(|&c| c as f64 / mr as f64).collect();
            let wf = match mode {
                WeightMode::Positions => n as f64 / len as f64,
                WeightMode::Mass => ml as f64 / (ml + mr) as f64,
            };
            let wg = 1.0 - wf;
            let mix: Vec<f64> = f.iter().zip(&g).map(|(a, b)| wf * a + wg * b).collect();
            entropy(&mix) - wf * entropy(&f) - wg * entropy(&g)
        })
        .collect()
}

pub fn symbol_alphabet(k: usize) -> Alphabet {
    Alphabet::new((0..k).map(|i| format!("s{i}"))).unwrap()
}

pub fn sequence_from_rows(rows: &[Vec<u64>]) -> WeightedSequence {
    let rows_cv: Vec<CountVector> = rows.iter().cloned().map(CountVector::new).collect();
    WeightedSequence::from_counts(symbol_alphabet(rows[0].len()), &rows_cv).unwrap()
}

/// Random count rows: `N` in `[2, max_len]`, `k` in `[1, max_k]`, counts in `[0, max_count]`,
/// with at least one nonzero count overall.
pub fn random_rows(rng: &mut ChaCha8Rng, max_len: usize, max_k: usize, max_count: u64) -> Vec<Vec<u64>> {
    let len = rng.random_range(2..=max_len);
    let k = rng.random_range(1..=max_k);
    let one_hot = rng.random_bool(0.5);
    let mut rows: Vec<Vec<u64>> = (0..len)
        .map(|_| {
            if one_hot {
                let mut r = vec![0; k];
                r[rng.random_range(0..k)] = 1;
                r
            } else {
                (0..k).map(|_| rng.random_range(0..=max_count)).collect()
            }
        })
        .collect();
    if rows.iter().flatten().all(|&c| c == 0) {
        rows[0][0] = 1;
    }
    rows
}

/// One-hot rows drawn i.i.d. from `probs`.
pub fn multinomial_rows(rng: &mut ChaCha8Rng, probs: &[f64], len: usize) -> Vec<Vec<u64>> {
    (0..len)
        .map(|_| {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut pick = probs.len() - 1;
            for (i, p) in probs.iter().enumerate() {
                acc += p;
                if u < acc {
                    pick = i;
                    break;
                }
            }
            let mut r = vec![0; probs.len()];
            r[pick] = 1;
            r
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two regimes with disjoint symbol sets: symbols `0..a` then `a..a+b`, random lengths.
pub fn disjoint_regimes(rng: &mut ChaCha8Rng) -> (Vec<Vec<u64>>, usize) {
    let first_k = rng.random_range(1..=3);
    let second_k = rng.random_range(1..=3);
    let k = first_k + second_k;
    let boundary = rng.random_range(20..=400);
    let len = boundary + rng.random_range(20..=400);
    let rows = (0..len)
        .map(|i| {
            let s = if i < boundary {
                rng.random_range(0..first_k)
            } else {
                first_k + rng.random_range(0..second_k)
            };
            let mut r = vec![0; k];
            r[s] = 1;
            r
        })
        .collect();
    (rows, boundary)
}
