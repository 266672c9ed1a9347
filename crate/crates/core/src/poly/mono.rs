use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::universe::{Block, Var, VarUniverse};

/// A power product, stored as `(variable, exponent)` pairs sorted by variable.
///
/// Zero exponents are never stored, so the empty vector is the monomial 1
/// and structural equality is monomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mono(Vec<(Var, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Mono(vec![(v, 1)])
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(v, e)])
        }
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut v: Vec<(Var, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable_by_key(|&(var, _)| var);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(v.len());
        for (var, e) in v {
            match out.last_mut() {
                Some((last, le)) if *last == var => *le += e,
                _ => out.push((var, e)),
            }
        }
        Mono(out)
    }

    /// Product of the listed variables (with repetition).
    pub fn product<I: IntoIterator<Item = Var>>(vars: I) -> Self {
        Mono::from_pairs(vars.into_iter().map(|v| (v, 1)))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match self.0.binary_search_by_key(&v, |&(var, _)| var) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    pub fn pow(&self, e: u32) -> Mono {
        if e == 0 {
            return Mono::one();
        }
        Mono(self.0.iter().map(|&(v, x)| (v, x * e)).collect())
    }

    pub fn divides(&self, other: &Mono) -> bool {
        let mut j = 0;
        let b = &other.0;
        for &(v, e) in &self.0 {
            while j < b.len() && b[j].0 < v {
                j += 1;
            }
            if j == b.len() || b[j].0 != v || b[j].1 < e {
                return false;
            }
        }
        true
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Mono) -> Option<Mono> {
        if !self.divides(other) {
            return None;
        }
        let mut out = Vec::with_capacity(other.0.len());
        for &(v, e) in &other.0 {
            let d = e - self.exponent(v);
            if d > 0 {
                out.push((v, d));
            }
        }
        Some(Mono(out))
    }

    fn merge_with(&self, other: &Mono, f: impl Fn(u32, u32) -> u32) -> Mono {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        loop {
            let next = match (a.get(i), b.get(j)) {
                (None, None) => break,
                (Some(&(va, ea)), None) => {
                    i += 1;
                    (va, f(ea, 0))
                }
                (None, Some(&(vb, eb))) => {
                    j += 1;
                    (vb, f(0, eb))
                }
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        i += 1;
                        (va, f(ea, 0))
                    }
                    Ordering::Greater => {
                        j += 1;
                        (vb, f(0, eb))
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (va, f(ea, eb))
                    }
                },
            };
            if next.1 > 0 {
                out.push(next);
            }
        }
        Mono(out)
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        self.merge_with(other, u32::max)
    }

    pub fn gcd(&self, other: &Mono) -> Mono {
        self.merge_with(other, u32::min)
    }

    /// Splits into the part whose variables satisfy `pred` and the rest.
    pub fn split(&self, mut pred: impl FnMut(Var) -> bool) -> (Mono, Mono) {
        let (yes, no): (Vec<_>, Vec<_>) = self.0.iter().partition(|&&(v, _)| pred(v));
        (Mono(yes), Mono(no))
    }

    pub fn restrict(&self, mut pred: impl FnMut(Var) -> bool) -> Mono {
        Mono(self.0.iter().copied().filter(|&(v, _)| pred(v)).collect())
    }

    /// Splits into (ordered part, coefficient part) using the universe blocks.
    pub fn split_blocks(&self, universe: &VarUniverse) -> (Mono, Mono) {
        self.split(|v| !universe.block(v).is_coefficient())
    }

    pub fn only_block(&self, universe: &VarUniverse, block: Block) -> bool {
        self.0.iter().all(|&(v, _)| universe.block(v) == block)
    }

    pub fn block_degree(&self, universe: &VarUniverse, block: Block) -> u32 {
        self.0
            .iter()
            .filter(|&&(v, _)| universe.block(v) == block)
            .map(|&(_, e)| e)
            .sum()
    }

    pub fn display(&self, universe: &VarUniverse) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    universe.name(v).to_string()
                } else {
                    format!("{}^{}", universe.name(v), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}
