use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::mono::Mono;
use super::universe::{Var, VarUniverse};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Lex,
    GrLex,
    GrevLex,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Lex => "lex",
            OrderKind::GrLex => "grlex",
            OrderKind::GrevLex => "grevlex",
        })
    }
}

impl std::str::FromStr for OrderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lex" => Ok(OrderKind::Lex),
            "grlex" => Ok(OrderKind::GrLex),
            "grevlex" => Ok(OrderKind::GrevLex),
            other => Err(format!("unknown monomial order `{other}`")),
        }
    }
}

/// A monomial order on the ordered (T/t) block.
///
/// `ranking` lists the ordered variables from largest to smallest. Variables
/// not in the ranking are treated as coefficients and ignored by comparisons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    ranking: Vec<Var>,
    position: Vec<Option<u32>>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, ranking: Vec<Var>) -> Self {
        let size = ranking.iter().map(|v| v.index() + 1).max().unwrap_or(0);
        let mut position = vec![None; size];
        for (i, v) in ranking.iter().enumerate() {
            assert!(position[v.index()].is_none(), "variable ranked twice");
            position[v.index()] = Some(i as u32);
        }
        MonomialOrder {
            kind,
            ranking,
            position,
        }
    }

    /// The order over every T- and t-block variable of `universe`, in id order
    /// (the first listed T-variable is the largest).
    pub fn standard(kind: OrderKind, universe: &VarUniverse) -> Self {
        let ranking = universe
            .big_t_vars()
            .iter()
            .chain(universe.small_t_vars())
            .copied()
            .collect();
        Self::new(kind, ranking)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn ranking(&self) -> &[Var] {
        &self.ranking
    }

    pub fn with_kind(&self, kind: OrderKind) -> Self {
        Self::new(kind, self.ranking.clone())
    }

    pub fn is_ordered(&self, v: Var) -> bool {
        self.position.get(v.index()).is_some_and(Option::is_some)
    }

    /// The part of `m` the order sees.
    pub fn ordered_part(&self, m: &Mono) -> Mono {
        m.restrict(|v| self.is_ordered(v))
    }

    fn key(&self, m: &Mono) -> Vec<(u32, u32)> {
        let mut k: Vec<(u32, u32)> = m
            .iter()
            .filter_map(|(v, e)| self.position.get(v.index()).copied().flatten().map(|p| (p, e)))
            .collect();
        k.sort_unstable();
        k
    }

    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        let (ka, kb) = (self.key(a), self.key(b));
        match self.kind {
            OrderKind::Lex => lex(&ka, &kb),
            OrderKind::GrLex => degree(&ka)
                .cmp(&degree(&kb))
                .then_with(|| lex(&ka, &kb)),
            OrderKind::GrevLex => degree(&ka)
                .cmp(&degree(&kb))
                .then_with(|| revlex(&ka, &kb)),
        }
    }

    pub fn max<'a>(&self, a: &'a Mono, b: &'a Mono) -> &'a Mono {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

fn degree(k: &[(u32, u32)]) -> u32 {
    k.iter().map(|&(_, e)| e).sum()
}

// Keys are sorted by position; a smaller position is a larger variable.
fn lex(a: &[(u32, u32)], b: &[(u32, u32)]) -> Ordering {
    for i in 0.. {
        match (a.get(i), b.get(i)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(pa, ea)), Some(&(pb, eb))) => {
                if pa != pb {
                    return if pa < pb {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    };
                }
                if ea != eb {
                    return ea.cmp(&eb);
                }
            }
        }
    }
    unreachable!()
}

fn revlex(a: &[(u32, u32)], b: &[(u32, u32)]) -> Ordering {
    let (mut i, mut j) = (a.len(), b.len());
    loop {
        match (i, j) {
            (0, 0) => return Ordering::Equal,
            (_, 0) => return Ordering::Less,
            (0, _) => return Ordering::Greater,
            _ => {
                let (pa, ea) = a[i - 1];
                let (pb, eb) = b[j - 1];
                if pa != pb {
                    // whoever involves the smaller variable is smaller
                    return if pa > pb {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                }
                if ea != eb {
                    return eb.cmp(&ea);
                }
                i -= 1;
                j -= 1;
            }
        }
    }
}
