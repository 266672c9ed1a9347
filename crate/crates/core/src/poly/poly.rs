use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};

use super::mono::Mono;
use super::order::MonomialOrder;
use super::universe::{Block, Var, VarUniverse};

/// A sparse multivariate polynomial with exact coefficients.
///
/// Terms are kept in a sorted map with no zero coefficients, so two
/// polynomials over the same universe are equal iff their term maps are.
#[derive(Clone)]
pub struct Poly<C> {
    universe: Arc<VarUniverse>,
    terms: BTreeMap<Mono, C>,
}

impl<C: Coefficient> Poly<C> {
    pub fn zero(universe: &Arc<VarUniverse>) -> Self {
        Poly {
            universe: Arc::clone(universe),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(universe: &Arc<VarUniverse>) -> Self {
        Self::constant(universe, C::one())
    }

    pub fn constant(universe: &Arc<VarUniverse>, c: C) -> Self {
        Self::term(universe, c, Mono::one())
    }

    pub fn var(universe: &Arc<VarUniverse>, v: Var) -> Self {
        Self::term(universe, C::one(), Mono::var(v))
    }

    pub fn monomial(universe: &Arc<VarUniverse>, m: Mono) -> Self {
        Self::term(universe, C::one(), m)
    }

    pub fn term(universe: &Arc<VarUniverse>, c: C, m: Mono) -> Self {
        let mut p = Self::zero(universe);
        p.add_term(c, m);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (C, Mono)>>(universe: &Arc<VarUniverse>, terms: I) -> Self {
        let mut p = Self::zero(universe);
        for (c, m) in terms {
            p.add_term(c, m);
        }
        p
    }

    /// `plus - minus` for two power products.
    pub fn binomial(universe: &Arc<VarUniverse>, plus: Mono, minus: Mono) -> Self {
        Self::from_terms(universe, [(C::one(), plus), (-C::one(), minus)])
    }

    pub fn universe(&self) -> &Arc<VarUniverse> {
        &self.universe
    }

    pub fn same_universe(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.universe, &other.universe) || *self.universe == *other.universe
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn into_terms(self) -> BTreeMap<Mono, C> {
        self.terms
    }

    pub fn add_term(&mut self, c: C, m: Mono) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_universe(other) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(c.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(-c.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.universe);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ca.clone() * cb.clone(), ma.mul(mb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.universe);
        }
        Poly {
            universe: Arc::clone(&self.universe),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.clone() * c.clone()))
                .collect(),
        }
    }

    /// Multiplies by the single term `c * m`.
    pub fn mul_term(&self, c: &C, m: &Mono) -> Self {
        if c.is_zero() {
            return Self::zero(&self.universe);
        }
        Poly {
            universe: Arc::clone(&self.universe),
            terms: self
                .terms
                .iter()
                .map(|(x, k)| (x.mul(m), k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(&self.universe);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Leading monomial of the ordered block together with its full coefficient.
    ///
    /// The coefficient collects every term whose ordered part equals the
    /// leading monomial; it is a polynomial in the coefficient blocks.
    pub fn leading(&self, ord: &MonomialOrder) -> Result<(Poly<C>, Mono)> {
        let lm = self.leading_monomial(ord).ok_or(Error::ZeroPolynomial)?;
        let mut lc = Self::zero(&self.universe);
        for (m, c) in &self.terms {
            let (ordered, rest) = m.split(|v| ord.is_ordered(v));
            if ordered == lm {
                lc.add_term(c.clone(), rest);
            }
        }
        Ok((lc, lm))
    }

    pub fn leading_monomial(&self, ord: &MonomialOrder) -> Option<Mono> {
        let mut best: Option<Mono> = None;
        for m in self.terms.keys() {
            let part = ord.ordered_part(m);
            best = match best {
                None => Some(part),
                Some(b) => {
                    if ord.cmp(&part, &b) == std::cmp::Ordering::Greater {
                        Some(part)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }

    /// `(unit, s-monomial)` when the polynomial is a single s-term.
    pub fn as_s_term(&self) -> Option<(C, Mono)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        if c.is_unit() && m.only_block(&self.universe, Block::S) {
            Some((c.clone(), m.clone()))
        } else {
            None
        }
    }

    /// True iff the leading coefficient is a unit times an s-monomial.
    pub fn is_s_monomial_type(&self, ord: &MonomialOrder) -> Result<bool> {
        let (lc, _) = self.leading(ord)?;
        Ok(lc.as_s_term().is_some())
    }

    /// Maps every variable to a polynomial in `target` and multiplies out.
    pub fn substitute(
        &self,
        target: &Arc<VarUniverse>,
        mut image: impl FnMut(Var) -> Result<Poly<C>>,
    ) -> Result<Poly<C>> {
        let mut cache: BTreeMap<(Var, u32), Poly<C>> = BTreeMap::new();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(target, c.clone());
            for (v, e) in m.iter() {
                let factor = match cache.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = image(v)?.pow(e);
                        cache.insert((v, e), p.clone());
                        p
                    }
                };
                acc = acc.checked_mul(&factor)?;
            }
            for (m2, c2) in acc.terms {
                out.add_term(c2, m2);
            }
        }
        Ok(out)
    }

    /// Applies a monomial-to-monomial map; coefficients are kept.
    pub fn map_monomials(&self, target: &Arc<VarUniverse>, mut f: impl FnMut(&Mono) -> Mono) -> Poly<C> {
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            out.add_term(c.clone(), f(m));
        }
        out
    }

    pub fn degree_in(&self, block: Block) -> u32 {
        self.terms
            .keys()
            .map(|m| m.block_degree(&self.universe, block))
            .max()
            .unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Terms sorted for display: by degree descending, then structurally.
    pub fn display_terms(&self) -> Vec<(&Mono, &C)> {
        let mut t: Vec<(&Mono, &C)> = self.terms.iter().collect();
        t.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        t
    }
}

impl<C: Coefficient> PartialEq for Poly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.same_universe(other) && self.terms == other.terms
    }
}

impl<C: Coefficient> Eq for Poly<C> {}

impl<C: Coefficient> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<C: Coefficient> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.display_terms().into_iter().enumerate() {
            let text = c.to_string();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{magnitude}")?;
            } else if magnitude == "1" {
                write!(f, "{}", m.display(&self.universe))?;
            } else {
                write!(f, "{magnitude}*{}", m.display(&self.universe))?;
            }
        }
        Ok(())
    }
}

// Operator forms panic on a universe mismatch; use the `checked_*` methods
// when the operands come from different sources.
impl<C: Coefficient> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        self.checked_add(rhs).expect("universe mismatch in add")
    }
}

impl<C: Coefficient> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        self.checked_sub(rhs).expect("universe mismatch in sub")
    }
}

impl<C: Coefficient> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        self.checked_mul(rhs).expect("universe mismatch in mul")
    }
}

impl<C: Coefficient> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            universe: Arc::clone(&self.universe),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::order::OrderKind;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    type Q = Poly<BigRational>;

    fn universe() -> Arc<VarUniverse> {
        VarUniverse::builder()
            .s_vars(["s1", "s2", "s3"])
            .big_t_vars(["T1", "T2", "T3"])
            .build()
            .unwrap()
    }

    fn v(u: &Arc<VarUniverse>, name: &str) -> Q {
        Q::var(u, u.lookup(name).unwrap())
    }

    fn c(u: &Arc<VarUniverse>, k: i64) -> Q {
        Q::constant(u, BigRational::from_integer(k.into()))
    }

    #[test]
    fn add_identity_inverse_and_merge() {
        let u = universe();
        let (t1, t2) = (v(&u, "T1"), v(&u, "T2"));
        let p = &(&c(&u, 2) * &t1) + &t2;
        assert_eq!(&p + &Q::zero(&u), p);
        assert!((&p + &(-&p)).is_zero());
        let q = &(&c(&u, 3) * &t1) - &t2;
        assert_eq!(&p + &q, &c(&u, 5) * &t1);
    }

    #[test]
    fn mul_difference_of_squares() {
        let u = universe();
        let (t1, t2) = (v(&u, "T1"), v(&u, "T2"));
        assert_eq!(&(&t1 - &t2) * &(&t1 + &t2), &(&t1 * &t1) - &(&t2 * &t2));
        assert_eq!(&t1 * &Q::one(&u), t1);
    }

    #[test]
    fn universe_mismatch_is_an_error() {
        let u1 = universe();
        let u2 = VarUniverse::builder().big_t_vars(["T1"]).build().unwrap();
        let a = Q::var(&u1, Var(3));
        let b = Q::var(&u2, Var(0));
        assert_eq!(a.checked_add(&b), Err(Error::UniverseMismatch));
        assert_eq!(a.checked_mul(&b), Err(Error::UniverseMismatch));
    }

    #[test]
    fn leading_term_examples() {
        let u = universe();
        let lex = MonomialOrder::standard(OrderKind::Lex, &u);
        let grlex = MonomialOrder::standard(OrderKind::GrLex, &u);
        let (s1, s2) = (v(&u, "s1"), v(&u, "s2"));
        let (t1, t2, t3) = (v(&u, "T1"), v(&u, "T2"), v(&u, "T3"));

        let p = &(&s1 * &t1) + &(&s2 * &t2);
        let (lc, lm) = p.leading(&lex).unwrap();
        assert_eq!(lc, s1);
        assert_eq!(lm, Mono::var(u.lookup("T1").unwrap()));

        let five = c(&u, 5);
        assert_eq!(five.leading(&lex).unwrap(), (five.clone(), Mono::one()));

        let p = &(&(&s2 * &t1) * &t2) - &(&(&s1 * &t3) * &t3);
        let (lc, lm) = p.leading(&grlex).unwrap();
        assert_eq!(lc, s2);
        assert_eq!(lm, (&t1 * &t2).terms().next().unwrap().0.clone());

        assert_eq!(Q::zero(&u).leading(&lex), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn s_monomial_type_examples() {
        let u = universe();
        let lex = MonomialOrder::standard(OrderKind::Lex, &u);
        let (s1, s2) = (v(&u, "s1"), v(&u, "s2"));
        let (t1, t2) = (v(&u, "T1"), v(&u, "T2"));
        let p = &(&(&s1 * &s2) * &t1) + &t2;
        assert!(p.is_s_monomial_type(&lex).unwrap());
        let p = &(&(&s1 + &s2) * &t1) + &t2;
        assert!(!p.is_s_monomial_type(&lex).unwrap());
        // over Q every nonzero rational is a unit
        let p = &(&c(&u, -3) * &(&s1 * &t1)) + &t2;
        assert!(p.is_s_monomial_type(&lex).unwrap());
    }

    #[test]
    fn integer_units_are_only_plus_minus_one() {
        let u = universe();
        let lex = MonomialOrder::standard(OrderKind::Lex, &u);
        let t1 = Poly::<BigInt>::var(&u, u.lookup("T1").unwrap());
        let s1 = Poly::<BigInt>::var(&u, u.lookup("s1").unwrap());
        let two = Poly::<BigInt>::constant(&u, BigInt::from(2));
        assert!((&(-&s1) * &t1).is_s_monomial_type(&lex).unwrap());
        assert!(!(&(&two * &s1) * &t1).is_s_monomial_type(&lex).unwrap());
    }

    #[test]
    fn display_is_readable() {
        let u = universe();
        let p = &(&v(&u, "s1") * &v(&u, "T1")) - &(&c(&u, 2) * &v(&u, "T2"));
        assert_eq!(p.to_string(), "s1*T1 - 2*T2");
        assert_eq!(Q::zero(&u).to_string(), "0");
    }
}
