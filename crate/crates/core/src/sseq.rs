//! The fixed sequence `s_1..s_n` as formal data.
//!
//! s-monomials are exponent vectors; equality, divisibility, lcm and gcd
//! are decided on the vectors alone and never consult concrete ring values.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::poly::{Block, Mono, Poly, VarUniverse};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeqMode {
    /// The `s_i` are independent formal symbols.
    Generic,
    /// The `s_i` are given elements of an ambient polynomial ring.
    Concrete,
}

/// The fixed weak regular sequence.
#[derive(Clone, Debug)]
pub struct SeqSpec<C: Coefficient> {
    pub names: Vec<String>,
    pub mode: SeqMode,
    /// Concrete values over `x_universe` (empty in generic mode).
    pub values: Vec<Poly<C>>,
    pub x_universe: Arc<VarUniverse>,
}

impl<C: Coefficient> SeqSpec<C> {
    pub fn generic(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidSpec("sequence must be nonempty".into()));
        }
        Ok(SeqSpec {
            names,
            mode: SeqMode::Generic,
            values: Vec::new(),
            x_universe: VarUniverse::builder().build()?,
        })
    }

    /// A concrete sequence. Values must be nonzero non-units.
    pub fn concrete(names: Vec<String>, values: Vec<Poly<C>>, x_universe: Arc<VarUniverse>) -> Result<Self> {
        if names.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: names.len(),
                got: values.len(),
            });
        }
        if values.is_empty() {
            return Err(Error::InvalidSpec("sequence must be nonempty".into()));
        }
        for (name, v) in names.iter().zip(&values) {
            if v.is_zero() {
                return Err(Error::InvalidSpec(format!("sequence element {name} is zero")));
            }
            if let Some(c) = v.coeff(&Mono::one()) {
                if v.len() == 1 && c.is_unit() {
                    return Err(Error::InvalidSpec(format!(
                        "sequence element {name} = {v} is a unit"
                    )));
                }
            }
        }
        Ok(SeqSpec {
            names,
            mode: SeqMode::Concrete,
            values,
            x_universe,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Best-effort warnings: pairs of concrete elements that are equal.
    pub fn lint(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..self.values.len() {
            for j in i + 1..self.values.len() {
                if self.values[i] == self.values[j] || self.values[i] == -&self.values[j] {
                    out.push(format!(
                        "{} and {} are associates; the sequence cannot be weak regular",
                        self.names[i], self.names[j]
                    ));
                }
            }
        }
        out
    }

    /// True when every concrete value is a squarefree monomial with coefficient
    /// 1 and the values have pairwise disjoint supports (hence form a regular
    /// sequence). Generic sequences qualify trivially.
    pub fn is_squarefree_monomial_sequence(&self) -> bool {
        match self.mode {
            SeqMode::Generic => true,
            SeqMode::Concrete => {
                let mut seen = Vec::new();
                for v in &self.values {
                    if v.len() != 1 {
                        return false;
                    }
                    let (m, c) = v.terms().next().expect("nonzero");
                    if !c.is_one() || m.is_one() || !m.is_squarefree() {
                        return false;
                    }
                    for (var, _) in m.iter() {
                        if seen.contains(&var) {
                            return false;
                        }
                        seen.push(var);
                    }
                }
                true
            }
        }
    }
}

/// A formal power product of the sequence elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SMonomial {
    pub exps: Vec<u32>,
}

impl SMonomial {
    pub fn one(n: usize) -> Self {
        SMonomial { exps: vec![0; n] }
    }

    pub fn new(exps: Vec<u32>) -> Self {
        SMonomial { exps }
    }

    /// `s_i` with a 0-based index.
    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.exps[i] = 1;
        m
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// 0-based indices with a positive exponent.
    pub fn support(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    fn check_len(&self, other: &SMonomial) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            })
        }
    }

    pub fn mul(&self, other: &SMonomial) -> Result<SMonomial> {
        self.check_len(other)?;
        Ok(SMonomial::new(
            self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn divides(&self, other: &SMonomial) -> bool {
        self.len() == other.len() && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &SMonomial) -> Option<SMonomial> {
        if !self.divides(other) {
            return None;
        }
        Some(SMonomial::new(
            other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn to_mono(&self, universe: &VarUniverse) -> Mono {
        let s = universe.s_vars();
        Mono::from_pairs(self.exps.iter().enumerate().map(|(i, &e)| (s[i], e)))
    }

    /// The s-block part of `m`, as an exponent vector of length `n`.
    pub fn from_mono(universe: &VarUniverse, m: &Mono) -> SMonomial {
        let mut out = SMonomial::one(universe.s_vars().len());
        for (v, e) in m.iter() {
            if universe.block(v) == Block::S {
                out.exps[universe.s_index(v).expect("s var")] += e;
            }
        }
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for SMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.len()).map(|i| format!("s{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

/// Canonical lcm: componentwise maximum of exponents.
pub fn s_lcm(a: &SMonomial, b: &SMonomial) -> Result<SMonomial> {
    a.check_len(b)?;
    Ok(SMonomial::new(
        a.exps.iter().zip(&b.exps).map(|(x, y)| *x.max(y)).collect(),
    ))
}

/// Canonical gcd: componentwise minimum of exponents.
pub fn s_gcd(a: &SMonomial, b: &SMonomial) -> Result<SMonomial> {
    a.check_len(b)?;
    Ok(SMonomial::new(
        a.exps.iter().zip(&b.exps).map(|(x, y)| *x.min(y)).collect(),
    ))
}

fn lcm_of(gens: &[SMonomial], idx: &[usize], n: usize) -> SMonomial {
    idx.iter().fold(SMonomial::one(n), |acc, &i| {
        s_lcm(&acc, &gens[i]).expect("lengths checked")
    })
}

/// A signed s-monomial entry of a differential.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedEntry {
    pub sign: i8,
    pub mono: SMonomial,
}

/// The differential `d_p : T_p -> T_{p-1}` as a sparse matrix.
#[derive(Clone, Debug, Serialize)]
pub struct Differential {
    pub p: usize,
    pub rows: usize,
    pub cols: usize,
    /// `(row, col) -> entry`, rows indexing `basis[p-1]`, cols `basis[p]`.
    pub entries: BTreeMap<(usize, usize), SignedEntry>,
}

/// The Taylor complex of a list of s-monomials.
#[derive(Clone, Debug, Serialize)]
pub struct TaylorComplex {
    pub generators: Vec<SMonomial>,
    /// `basis[p]` lists the index tuples `i_1 < ... < i_p` of `T_p`.
    pub basis: Vec<Vec<Vec<usize>>>,
    /// `differentials[p-1]` is `d_p`.
    pub differentials: Vec<Differential>,
}

pub const TAYLOR_MAX_GENERATORS: usize = 12;

fn subsets(m: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, p, &mut Vec::new(), &mut out);
    out
}

pub fn taylor_complex(gens: &[SMonomial]) -> Result<TaylorComplex> {
    let m = gens.len();
    if m == 0 {
        return Err(Error::Malformed("Taylor complex needs at least one generator".into()));
    }
    if m > TAYLOR_MAX_GENERATORS {
        return Err(Error::GuardExceeded {
            what: "Taylor complex generators",
            limit: TAYLOR_MAX_GENERATORS,
            requested: m,
        });
    }
    let n = gens[0].len();
    for g in gens {
        gens[0].check_len(g)?;
    }
    let basis: Vec<Vec<Vec<usize>>> = (0..=m).map(|p| subsets(m, p)).collect();
    let mut differentials = Vec::with_capacity(m);
    for p in 1..=m {
        let row_index: HashMap<&Vec<usize>, usize> =
            basis[p - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut entries = BTreeMap::new();
        for (col, tuple) in basis[p].iter().enumerate() {
            let u = lcm_of(gens, tuple, n);
            for r in 0..p {
                let mut face = tuple.clone();
                face.remove(r);
                let uf = lcm_of(gens, &face, n);
                let mono = uf.quotient_of(&u).expect("lcm of a subset divides");
                let sign = if r % 2 == 0 { 1 } else { -1 };
                entries.insert((row_index[&face], col), SignedEntry { sign, mono });
            }
        }
        differentials.push(Differential {
            p,
            rows: basis[p - 1].len(),
            cols: basis[p].len(),
            entries,
        });
    }
    Ok(TaylorComplex {
        generators: gens.to_vec(),
        basis,
        differentials,
    })
}

impl TaylorComplex {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn rank(&self, p: usize) -> usize {
        self.basis.get(p).map_or(0, Vec::len)
    }

    pub fn differential(&self, p: usize) -> &Differential {
        &self.differentials[p - 1]
    }

    /// `d_p ∘ d_{p+1}` as formal sums; returns the positions of nonzero entries.
    pub fn composition_defects(&self, p: usize) -> Vec<(usize, usize)> {
        let (dp, dq) = (self.differential(p), self.differential(p + 1));
        let mut by_row: HashMap<usize, Vec<(usize, &SignedEntry)>> = HashMap::new();
        for (&(r, c), e) in &dq.entries {
            by_row.entry(r).or_default().push((c, e));
        }
        let mut acc: BTreeMap<(usize, usize), HashMap<SMonomial, i64>> = BTreeMap::new();
        for (&(r, mid), e1) in &dp.entries {
            if let Some(nexts) = by_row.get(&mid) {
                for &(c, e2) in nexts {
                    let mono = e1.mono.mul(&e2.mono).expect("same length");
                    *acc.entry((r, c)).or_default().entry(mono).or_insert(0) +=
                        i64::from(e1.sign) * i64::from(e2.sign);
                }
            }
        }
        acc.into_iter()
            .filter(|(_, sums)| sums.values().any(|&k| k != 0))
            .map(|(pos, _)| pos)
            .collect()
    }

    /// True iff `d ∘ d = 0` in every degree.
    pub fn is_complex(&self) -> bool {
        (1..self.len()).all(|p| self.composition_defects(p).is_empty())
    }

    /// Hilbert function of `R/I` in degree `d` read off the complex, where
    /// `R` is the polynomial ring on the `n` formal symbols.
    pub fn euler_hilbert(&self, d: u32) -> i64 {
        let n = self.generators[0].len();
        let hf_free = |k: i64| -> i64 {
            if k < 0 {
                0
            } else {
                binomial(k as u64 + n as u64 - 1, n as u64 - 1) as i64
            }
        };
        let mut total = hf_free(i64::from(d));
        for p in 1..=self.len() {
            let sign = if p % 2 == 0 { 1 } else { -1 };
            for tuple in &self.basis[p] {
                let u = lcm_of(&self.generators, tuple, n);
                total += sign * hf_free(i64::from(d) - i64::from(u.degree()));
            }
        }
        total
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `lcm/a_i e_i - lcm/a_j e_j` for a pair `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairSyzygy {
    pub i: usize,
    pub j: usize,
    pub coeff_i: SMonomial,
    pub coeff_j: SMonomial,
}

impl PairSyzygy {
    /// Dense form: entry `k` is `(sign, monomial)` or `None`.
    pub fn as_dense(&self, m: usize) -> Vec<Option<(i8, SMonomial)>> {
        let mut v = vec![None; m];
        v[self.i] = Some((1, self.coeff_i.clone()));
        v[self.j] = Some((-1, self.coeff_j.clone()));
        v
    }

    /// True iff `Σ v_k a_k = 0` formally.
    pub fn annihilates(&self, gens: &[SMonomial]) -> bool {
        let left = self.coeff_i.mul(&gens[self.i]);
        let right = self.coeff_j.mul(&gens[self.j]);
        matches!((left, right), (Ok(a), Ok(b)) if a == b)
    }
}

/// The `C(m,2)` pairwise syzygies generating the syzygy module.
pub fn syzygy_generators(gens: &[SMonomial]) -> Result<Vec<PairSyzygy>> {
    if gens.is_empty() {
        return Err(Error::Malformed("need at least one generator".into()));
    }
    let mut out = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let l = s_lcm(&gens[i], &gens[j])?;
            out.push(PairSyzygy {
                i,
                j,
                coeff_i: gens[i].quotient_of(&l).expect("divides lcm"),
                coeff_j: gens[j].quotient_of(&l).expect("divides lcm"),
            });
        }
    }
    Ok(out)
}
