//! S-polynomials, reduction with standard-expression certificates, and the
//! pairwise Groebner criterion for polynomials of s-monomial type.
//!
//! Leading coefficients of the inputs must be single s-terms. Reduction
//! works term by term on the leading coefficient of the running remainder:
//! a term `c * m` at leading monomial `lm` is cancelled by any `g` with
//! `lm(g) | lm` and `s^{d_g} | m`.

use std::cmp::Ordering;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::poly::{Block, Mono, MonomialOrder, OrderKind, Poly, Var, VarUniverse};
use crate::quasimat::{ibin_generators, QuasiMatrix};

/// Leading data of an s-monomial-type polynomial.
#[derive(Clone, Debug)]
struct Lead<C> {
    unit: C,
    unit_inv: C,
    s_mono: Mono,
    lm: Mono,
}

fn lead<C: Coefficient>(f: &Poly<C>, ord: &MonomialOrder) -> Result<Lead<C>> {
    let (lc, lm) = f.leading(ord)?;
    let (unit, s_mono) = lc
        .as_s_term()
        .ok_or_else(|| Error::NotSMonomialType(format!("leading coefficient {lc} of {f}")))?;
    let unit_inv = unit.unit_inverse().expect("s-term coefficient is a unit");
    Ok(Lead {
        unit,
        unit_inv,
        s_mono,
        lm,
    })
}

/// `numerator / denominator` with an s-monomial denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalPoly<C: Coefficient> {
    pub numerator: Poly<C>,
    pub denominator: Mono,
}

/// `S'(f, g) = mult_f * f + mult_g * g`.
#[derive(Clone, Debug)]
pub struct SPair<C: Coefficient> {
    pub s_prime: Poly<C>,
    pub mult_f: Poly<C>,
    pub mult_g: Poly<C>,
    /// `lcm(lc(f), lc(g))` as an s-monomial.
    pub lc_lcm: Mono,
}

impl<C: Coefficient> SPair<C> {
    /// Re-derives `S'` from the multipliers.
    pub fn verify(&self, f: &Poly<C>, g: &Poly<C>) -> bool {
        (&(&self.mult_f * f) + &(&self.mult_g * g)) == self.s_prime
    }
}

pub fn s_prime_pair<C: Coefficient>(f: &Poly<C>, g: &Poly<C>, ord: &MonomialOrder) -> Result<SPair<C>> {
    if !f.same_universe(g) {
        return Err(Error::UniverseMismatch);
    }
    let (lf, lg) = (lead(f, ord)?, lead(g, ord)?);
    let m = lf.lm.lcm(&lg.lm);
    let l = lf.s_mono.lcm(&lg.s_mono);
    let u = f.universe();
    let mult_f = Poly::term(
        u,
        lf.unit_inv.clone(),
        lf.s_mono.quotient_of(&l).expect("divides lcm").mul(&lf.lm.quotient_of(&m).expect("divides lcm")),
    );
    let mult_g = Poly::term(
        u,
        -lg.unit_inv.clone(),
        lg.s_mono.quotient_of(&l).expect("divides lcm").mul(&lg.lm.quotient_of(&m).expect("divides lcm")),
    );
    let s_prime = &(&mult_f * f) + &(&mult_g * g);
    Ok(SPair {
        s_prime,
        mult_f,
        mult_g,
        lc_lcm: l,
    })
}

/// The S'-polynomial: the S-polynomial with denominators cleared.
pub fn s_prime_poly<C: Coefficient>(f: &Poly<C>, g: &Poly<C>, ord: &MonomialOrder) -> Result<Poly<C>> {
    Ok(s_prime_pair(f, g, ord)?.s_prime)
}

/// The S-polynomial over the total quotient ring.
pub fn s_poly<C: Coefficient>(f: &Poly<C>, g: &Poly<C>, ord: &MonomialOrder) -> Result<FractionalPoly<C>> {
    let pair = s_prime_pair(f, g, ord)?;
    Ok(FractionalPoly {
        numerator: pair.s_prime,
        denominator: pair.lc_lcm,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
pub enum ReductionStrategy {
    /// First usable reducer in list order.
    #[default]
    FirstMatch,
    /// Usable reducer with the smallest leading monomial.
    SmallestLeading,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionStatus {
    ReducedToZero,
    Inconclusive,
}

/// `f = Σ p_i f_i + residual`.
#[derive(Clone, Debug)]
pub struct ReductionCert<C: Coefficient> {
    /// `(index into G, p_i, f_i)` for every nonzero multiplier.
    pub multipliers: Vec<(usize, Poly<C>, Poly<C>)>,
    pub residual: Poly<C>,
    pub status: ReductionStatus,
}

impl<C: Coefficient> ReductionCert<C> {
    /// Checks the identity and, for a zero residual, the degree bound.
    pub fn verify(&self, f: &Poly<C>, ord: &MonomialOrder) -> bool {
        let mut acc = self.residual.clone();
        for (_, p, g) in &self.multipliers {
            acc = &acc + &(p * g);
        }
        if acc != *f {
            return false;
        }
        if self.status == ReductionStatus::ReducedToZero {
            if !self.residual.is_zero() {
                return false;
            }
            let Some(lm_f) = f.leading_monomial(ord) else {
                return self.multipliers.is_empty();
            };
            for (_, p, g) in &self.multipliers {
                let (Some(lp), Some(lg)) = (p.leading_monomial(ord), g.leading_monomial(ord)) else {
                    return false;
                };
                if ord.cmp(&lp.mul(&lg), &lm_f) == Ordering::Greater {
                    return false;
                }
            }
        }
        true
    }
}

/// Step limit for one reduction; exceeding it yields an inconclusive result.
pub const REDUCTION_STEP_LIMIT: usize = 200_000;

/// Top-reduces `f` modulo `gens`.
pub fn reduce<C: Coefficient>(
    f: &Poly<C>,
    gens: &[Poly<C>],
    ord: &MonomialOrder,
    strategy: ReductionStrategy,
) -> Result<ReductionCert<C>> {
    let leads: Vec<Lead<C>> = gens.iter().map(|g| lead(g, ord)).collect::<Result<_>>()?;
    let universe = f.universe();
    let mut mults: Vec<Poly<C>> = vec![Poly::zero(universe); gens.len()];
    let mut current = f.clone();
    let mut steps = 0;
    let status = loop {
        if current.is_zero() {
            break ReductionStatus::ReducedToZero;
        }
        if steps >= REDUCTION_STEP_LIMIT {
            break ReductionStatus::Inconclusive;
        }
        let (lc, lm) = current.leading(ord)?;
        let mut stuck = false;
        for (cm, c) in lc.terms() {
            let candidates = leads
                .iter()
                .enumerate()
                .filter(|(_, l)| l.lm.divides(&lm) && l.s_mono.divides(cm));
            let chosen = match strategy {
                ReductionStrategy::FirstMatch => candidates.map(|(i, _)| i).next(),
                ReductionStrategy::SmallestLeading => candidates
                    .min_by(|(i, a), (j, b)| {
                        ord.cmp(&a.lm, &b.lm)
                            .then_with(|| a.s_mono.degree().cmp(&b.s_mono.degree()))
                            .then_with(|| i.cmp(j))
                    })
                    .map(|(i, _)| i),
            };
            let Some(i) = chosen else {
                stuck = true;
                break;
            };
            let l = &leads[i];
            let q_mono = l
                .s_mono
                .quotient_of(cm)
                .expect("checked")
                .mul(&l.lm.quotient_of(&lm).expect("checked"));
            let q_coeff = c.clone() * l.unit_inv.clone();
            debug_assert!((q_coeff.clone() * l.unit.clone()) == *c);
            let q = Poly::term(universe, q_coeff, q_mono);
            current = &current - &(&q * &gens[i]);
            mults[i] = &mults[i] + &q;
            steps += 1;
        }
        if stuck {
            break ReductionStatus::Inconclusive;
        }
    };
    let multipliers = mults
        .into_iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| (i, p, gens[i].clone()))
        .collect();
    let cert = ReductionCert {
        multipliers,
        residual: current,
        status,
    };
    debug_assert!(cert.verify(f, ord));
    Ok(cert)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairOutcome {
    pub i: usize,
    pub j: usize,
    pub status: ReductionStatus,
    /// Display form of the residual when inconclusive.
    pub residual: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuchbergerReport {
    pub order: String,
    pub generators: usize,
    pub pairs_checked: usize,
    pub inconclusive: Vec<PairOutcome>,
    /// Pairs whose certificate failed re-verification (should be empty).
    pub certificate_failures: Vec<(usize, usize)>,
}

impl BuchbergerReport {
    pub fn passed(&self) -> bool {
        self.inconclusive.is_empty() && self.certificate_failures.is_empty()
    }
}

/// Reduces every S'-pair `i < j` and reports inconclusive pairs.
pub fn buchberger_check<C: Coefficient>(
    gens: &[Poly<C>],
    ord: &MonomialOrder,
    strategy: ReductionStrategy,
) -> Result<BuchbergerReport> {
    for g in gens {
        lead(g, ord)?;
    }
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|i| (i + 1..gens.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<(PairOutcome, bool)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let pair = s_prime_pair(&gens[i], &gens[j], ord)?;
            let cert = reduce(&pair.s_prime, gens, ord, strategy)?;
            let ok = pair.verify(&gens[i], &gens[j]) && cert.verify(&pair.s_prime, ord);
            let residual = (cert.status == ReductionStatus::Inconclusive).then(|| cert.residual.to_string());
            Ok((
                PairOutcome {
                    i,
                    j,
                    status: cert.status,
                    residual,
                },
                ok,
            ))
        })
        .collect();
    let mut inconclusive = Vec::new();
    let mut certificate_failures = Vec::new();
    for r in results {
        let (outcome, ok) = r?;
        if !ok {
            certificate_failures.push((outcome.i, outcome.j));
        }
        if outcome.status == ReductionStatus::Inconclusive {
            inconclusive.push(outcome);
        }
    }
    Ok(BuchbergerReport {
        order: ord.to_string(),
        generators: gens.len(),
        pairs_checked: pairs.len(),
        inconclusive,
        certificate_failures,
    })
}

/// LEX and GREVLEX, each under `perms` seeded random rankings of the
/// ordered variables (the first ranking of each kind is the standard one).
pub fn default_order_suite(universe: &VarUniverse, seed: u64, perms: usize) -> Vec<MonomialOrder> {
    let base = MonomialOrder::standard(OrderKind::Lex, universe);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for kind in [OrderKind::Lex, OrderKind::GrevLex] {
        for k in 0..perms {
            let mut ranking: Vec<Var> = base.ranking().to_vec();
            if k > 0 {
                ranking.shuffle(&mut rng);
            }
            out.push(MonomialOrder::new(kind, ranking));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct UniversalReport {
    pub generators: usize,
    pub reports: Vec<BuchbergerReport>,
}

impl UniversalReport {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(BuchbergerReport::passed)
    }
}

/// Checks that the binary quasi-minors of `b = (s | A)` pass the pairwise
/// criterion under every supplied order.
pub fn universal_gb_check<C: Coefficient>(
    b: &QuasiMatrix<Var>,
    universe: &Arc<VarUniverse>,
    orders: &[MonomialOrder],
    strategy: ReductionStrategy,
) -> Result<UniversalReport> {
    validate_s_bar_a(b, universe)?;
    let size = b.n_rows().min(b.n_cols());
    let gens: Vec<Poly<C>> = ibin_generators(b, size)?.iter().map(|g| g.to_poly(universe)).collect();
    let reports = orders
        .iter()
        .map(|ord| buchberger_check(&gens, ord, strategy))
        .collect::<Result<_>>()?;
    Ok(UniversalReport {
        generators: gens.len(),
        reports,
    })
}

/// `b` must have a full first column of distinct s-variables and distinct
/// ordered variables elsewhere.
pub fn validate_s_bar_a(b: &QuasiMatrix<Var>, universe: &VarUniverse) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for r in 0..b.n_rows() {
        match b.get((r, 0)) {
            Some(&v) if universe.block(v) == Block::S => {}
            _ => return Err(Error::Malformed(format!("row {r} of the first column is not an s-variable"))),
        }
    }
    for (&(_, c), &v) in b.entries() {
        if c > 0 && universe.block(v) != Block::BigT {
            return Err(Error::Malformed(format!("entry {} is not an ordered variable", universe.name(v))));
        }
        if !seen.insert(v) {
            return Err(Error::Malformed(format!("entry {} repeats; matrix is not generic", universe.name(v))));
        }
    }
    Ok(())
}

/// A universe and the matrix `(s | A)` with `A` generic of the given shape.
pub fn generic_s_bar_a(rows: usize, cols: usize) -> Result<(Arc<VarUniverse>, QuasiMatrix<Var>)> {
    let s_names: Vec<String> = (1..=rows).map(|i| format!("s{i}")).collect();
    let t_names: Vec<String> = (1..=rows)
        .flat_map(|i| (1..=cols).map(move |j| format!("a{i}_{j}")))
        .collect();
    let universe = VarUniverse::builder().s_vars(s_names).big_t_vars(t_names).build()?;
    let mut m = QuasiMatrix::new(rows, cols + 1);
    for i in 0..rows {
        m.insert((i, 0), universe.s_vars()[i])?;
        for j in 0..cols {
            m.insert((i, j + 1), universe.big_t_vars()[i * cols + j])?;
        }
    }
    Ok((universe, m))
}
