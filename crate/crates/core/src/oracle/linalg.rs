//! Exact fraction-free linear algebra over the integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Sparse vector: strictly increasing column indices, nonzero entries.
pub type SparseVec = Vec<(usize, BigInt)>;

/// Row echelon form `E = U * M` produced by Bareiss elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: usize,
    pub cols: usize,
    pub reduced: Vec<Vec<BigInt>>,
    pub transform: Vec<Vec<BigInt>>,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

/// Fraction-free elimination of `m`, carrying the row transform.
pub fn bareiss(m: &[Vec<BigInt>]) -> Echelon {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..rows).map(|k| if i == k { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        u.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..rows {
            let f = a[i][c].clone();
            for j in c..cols {
                let v = &piv * &a[i][j] - &f * &a[r][j];
                a[i][j] = exact_div(v, &prev);
            }
            for k in 0..rows {
                let v = &piv * &u[i][k] - &f * &u[r][k];
                u[i][k] = exact_div(v, &prev);
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rows,
        cols,
        reduced: a,
        transform: u,
        pivots,
    }
}

fn exact_div(v: BigInt, d: &BigInt) -> BigInt {
    let (q, rem) = v.div_rem(d);
    assert!(rem.is_zero(), "inexact division in fraction-free elimination");
    q
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `U * M == E` on the given rows (all rows when `rows` is `None`).
    pub fn verify(&self, m: &[Vec<BigInt>], rows: Option<&[usize]>) -> bool {
        let all: Vec<usize> = (0..self.rows).collect();
        let rows = rows.unwrap_or(&all);
        rows.iter().all(|&i| {
            (0..self.cols).all(|j| {
                let s: BigInt = (0..self.rows).map(|k| &self.transform[i][k] * &m[k][j]).sum();
                s == self.reduced[i][j]
            })
        })
    }

    /// Primitive integer basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        let mut out = Vec::new();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &self.pivots {
                v[p] = true;
            }
            v
        };
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![BigRational::zero(); self.cols];
            x[f] = BigRational::one();
            for (i, &p) in self.pivots.iter().enumerate().rev() {
                let s: BigRational = (p + 1..self.cols)
                    .filter(|&c| !self.reduced[i][c].is_zero() && !x[c].is_zero())
                    .map(|c| BigRational::from(self.reduced[i][c].clone()) * &x[c])
                    .sum();
                x[p] = -s / BigRational::from(self.reduced[i][p].clone());
            }
            out.push(primitive_dense(&x));
        }
        out
    }
}

/// Clears denominators and removes the content; the first nonzero entry is positive.
pub fn primitive_dense(x: &[BigRational]) -> Vec<BigInt> {
    let den = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut v: Vec<BigInt> = x.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    normalize_content(v.iter_mut().collect());
    v
}

fn normalize_content(mut entries: Vec<&mut BigInt>) {
    let g = entries.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e));
    if g.is_zero() {
        return;
    }
    let neg = entries.iter().find(|e| !e.is_zero()).is_some_and(|e| e.is_negative());
    let g = if neg { -g } else { g };
    for e in entries.iter_mut() {
        **e = &**e / &g;
    }
}

/// Primitive form of a sparse vector.
pub fn primitive_sparse(mut v: SparseVec) -> SparseVec {
    normalize_content(v.iter_mut().map(|(_, c)| c).collect());
    v
}

/// `a * x - b * y` for sparse vectors.
fn combine(a: &BigInt, x: &SparseVec, b: &BigInt, y: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incrementally built echelon basis of a span of sparse vectors, kept
/// fraction-free with primitive rows.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after leading-entry reduction; zero iff `v` is in the span.
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        let mut v = primitive_sparse(v);
        while let Some((lead, c)) = v.first().cloned() {
            let Some(row) = self.rows.get(&lead) else {
                break;
            };
            let p = &row[0].1;
            let g = p.gcd(&c);
            v = primitive_sparse(combine(&(p / &g), &v, &(&c / &g), row));
        }
        v
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        match r.first() {
            None => false,
            Some(&(lead, _)) => {
                self.rows.insert(lead, r);
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn apply(m: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
        m.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn bareiss_rank_and_kernel() {
        let m = mat(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0], &[1, 0, 1, 4]]);
        let e = bareiss(&m);
        assert_eq!(e.rank(), 2);
        assert!(e.verify(&m, None));
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(apply(&m, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn bareiss_full_rank_and_skipped_columns() {
        let m = mat(&[&[0, 0, 2, 1], &[0, 3, 1, 1], &[0, 6, 2, 5]]);
        let e = bareiss(&m);
        assert_eq!(e.pivots, vec![1, 2, 3]);
        assert!(e.verify(&m, None));
        let ns = e.nullspace();
        assert_eq!(ns, vec![vec![BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::zero()]]);
    }

    #[test]
    fn sparse_echelon_span() {
        let v = |xs: &[(usize, i64)]| xs.iter().map(|&(i, c)| (i, BigInt::from(c))).collect::<SparseVec>();
        let mut e = SparseEchelon::new();
        assert!(e.insert(v(&[(0, 1), (1, -1)])));
        assert!(e.insert(v(&[(1, 1), (2, -1)])));
        assert!(!e.insert(v(&[(0, 2), (2, -2)])));
        assert!(e.contains(v(&[(0, 3), (1, -3)])));
        assert!(!e.contains(v(&[(0, 1)])));
        assert_eq!(e.rank(), 2);
    }
}
