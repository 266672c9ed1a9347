//! Shared helpers for the integration suites: brute-force oracles and seeded
//! random inputs.
#![allow(dead_code)]

use std::collections::BTreeSet;

use mrees_core::quasimat::{BinaryQuasiMatrix, Binomial, Pos, QuasiMatrix};
use mrees_core::rees::ReesSpec;
use mrees_core::sseq::{SMonomial, SeqSpec};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Q = BigRational;

pub fn generic_spec(n: usize, ideals: Vec<Vec<usize>>, a: Vec<u32>) -> ReesSpec<Q> {
    let names = (1..=n).map(|i| format!("s{i}")).collect();
    ReesSpec::new(SeqSpec::generic(names).unwrap(), ideals, a, false).unwrap()
}

/// Every generic spec with `n <= 3`, `r <= 2`, `a_l <= 2`, one per unordered
/// choice of (ideal, exponent) items.
pub fn sweep_suite() -> Vec<(usize, Vec<Vec<usize>>, Vec<u32>)> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let mut items = Vec::new();
        for mask in 1..(1u32 << n) {
            let k: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            for a in 1..=2 {
                items.push((k.clone(), a));
            }
        }
        for i in 0..items.len() {
            out.push((n, vec![items[i].0.clone()], vec![items[i].1]));
            for j in i..items.len() {
                out.push((n, vec![items[i].0.clone(), items[j].0.clone()], vec![items[i].1, items[j].1]));
            }
        }
    }
    out
}

/// Quasi-determinants of a binary quasi-matrix by brute force: every perfect
/// matching of rows to columns through present entries, paired with the
/// matching on the complementary entries.
pub fn brute_force_quasi_determinants<E: Clone + Ord + std::hash::Hash + std::fmt::Debug + Send + Sync>(
    b: &BinaryQuasiMatrix<E>,
) -> BTreeSet<Binomial<E>> {
    let entries = b.entries();
    let rows: Vec<usize> = entries.keys().map(|p| p.0).collect::<BTreeSet<_>>().into_iter().collect();
    let cols: Vec<usize> = entries.keys().map(|p| p.1).collect::<BTreeSet<_>>().into_iter().collect();
    let mut matchings: Vec<BTreeSet<Pos>> = Vec::new();
    let mut used = vec![false; cols.len()];
    let mut cur = Vec::new();
    fn rec(
        i: usize,
        rows: &[usize],
        cols: &[usize],
        present: &dyn Fn(Pos) -> bool,
        used: &mut [bool],
        cur: &mut Vec<Pos>,
        out: &mut Vec<BTreeSet<Pos>>,
    ) {
        if i == rows.len() {
            out.push(cur.iter().copied().collect());
            return;
        }
        for (k, &c) in cols.iter().enumerate() {
            if !used[k] && present((rows[i], c)) {
                used[k] = true;
                cur.push((rows[i], c));
                rec(i + 1, rows, cols, present, used, cur, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let present = |p: Pos| entries.contains_key(&p);
    rec(0, &rows, &cols, &present, &mut used, &mut cur, &mut matchings);
    let all: BTreeSet<Pos> = entries.keys().copied().collect();
    let mut out = BTreeSet::new();
    for m in &matchings {
        let rest: BTreeSet<Pos> = all.difference(m).copied().collect();
        if !matchings.contains(&rest) {
            continue;
        }
        let plus = m.iter().map(|p| entries[p].clone()).collect();
        let minus = rest.iter().map(|p| entries[p].clone()).collect();
        out.insert(Binomial::new(plus, minus).normalized());
    }
    out
}

/// A random binary quasi-matrix with `size` rows made of cycles of random
/// lengths, placed at shuffled rows and columns of a `span x span` array.
/// Entries are distinct integers.
pub fn random_binary<R: Rng>(rng: &mut R, size: usize, span: usize) -> (QuasiMatrix<u32>, usize) {
    assert!(size >= 2 && span >= size);
    let mut lengths = Vec::new();
    let mut left = size;
    while left > 0 {
        let l = if left <= 3 { left } else { rng.gen_range(2..=left - 2).max(2) };
        lengths.push(l);
        left -= l;
    }
    let mut rows: Vec<usize> = (0..span).collect();
    let mut cols: Vec<usize> = (0..span).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let mut q = QuasiMatrix::new(span, span);
    let mut next = 0u32;
    let mut base = 0;
    for &l in &lengths {
        for i in 0..l {
            let r = rows[base + i];
            for c in [cols[base + i], cols[base + (i + 1) % l]] {
                q.insert((r, c), next).unwrap();
                next += 1;
            }
        }
        base += l;
    }
    (q, lengths.len())
}

pub fn random_smonomial<R: Rng>(rng: &mut R, n: usize, max_exp: u32) -> SMonomial {
    SMonomial::new((0..n).map(|_| rng.gen_range(0..=max_exp)).collect())
}
