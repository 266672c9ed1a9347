//! Degree-bounded verification by exact linear algebra: graded pieces of
//! the kernel of the presentation map, spans of ideal pieces, and graded
//! pieces of monomial syzygy modules.

pub mod linalg;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{Coefficient, Domain};
use crate::error::{Error, Result};
use crate::poly::{Block, Mono, Poly, Var};
use crate::rees::ReesPresentation;
use crate::sseq::{binomial, syzygy_generators, SMonomial, SeqMode};
use linalg::{bareiss, primitive_sparse, SparseEchelon, SparseVec};

pub const DEFAULT_MONOMIAL_CAP: usize = 20_000;
pub const DEFAULT_T_DEGREE: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCaps {
    /// Largest number of source monomials in one piece.
    pub max_monomials: usize,
    /// Largest total t-degree enumerated.
    pub t_degree: u32,
    /// Bound on the degree in the coefficient variables; `None` means
    /// `3 * max(a) + 2`.
    pub aux_degree: Option<u32>,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_monomials: DEFAULT_MONOMIAL_CAP,
            t_degree: DEFAULT_T_DEGREE,
            aux_degree: None,
        }
    }
}

impl OracleCaps {
    pub fn aux_bound<C: Coefficient>(&self, pres: &ReesPresentation<C>) -> u32 {
        self.aux_degree
            .unwrap_or_else(|| pres.spec.a.iter().copied().max().unwrap_or(1) * 3 + 2)
    }
}

/// One graded piece: exact t-multidegree, bounded degree in the
/// coefficient variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MultiDegree {
    pub t_deg: Vec<u32>,
    pub aux_deg_bound: u32,
}

/// All multidegrees of total t-degree `1..=caps.t_degree`, ordered by
/// total degree and then lexicographically.
pub fn multidegrees<C: Coefficient>(pres: &ReesPresentation<C>, caps: &OracleCaps) -> Vec<MultiDegree> {
    let r = pres.spec.r();
    let bound = caps.aux_bound(pres);
    let mut out = Vec::new();
    for total in 1..=caps.t_degree {
        for exps in exponent_vectors(r, total) {
            out.push(MultiDegree {
                t_deg: exps,
                aux_deg_bound: bound,
            });
        }
    }
    out
}

/// Exponent vectors of length `k` and total degree `d`, lexicographically
/// descending.
fn exponent_vectors(k: usize, d: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for rest in exponent_vectors(k - 1, d - first) {
            let mut v = vec![first];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

fn monomials_of_degree(vars: &[Var], d: u32) -> Vec<Mono> {
    exponent_vectors(vars.len(), d)
        .into_iter()
        .map(|e| Mono::from_pairs(vars.iter().copied().zip(e)))
        .collect()
}

fn monomials_up_to(vars: &[Var], d: u32) -> Vec<Mono> {
    (0..=d).flat_map(|k| monomials_of_degree(vars, k)).collect()
}

fn count_of_degree(k: usize, d: u32) -> u64 {
    if k == 0 {
        u64::from(d == 0)
    } else {
        binomial(u64::from(d) + k as u64 - 1, k as u64 - 1)
    }
}

#[derive(Default)]
struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut y = x;
        while self.0[y] != root {
            let next = self.0[y];
            self.0[y] = root;
            y = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Sparse rational image of each source basis vector over interned keys.
type Images = Vec<Vec<(usize, BigRational)>>;

/// Kernel and span data of a linear map on one piece.
#[derive(Clone, Debug, Default)]
struct SpanOutcome {
    kernel_dim: usize,
    span_dim: usize,
    span_in_kernel: bool,
    kernel_in_span: bool,
    kernel_basis: Vec<SparseVec>,
    /// A kernel vector outside the span.
    kernel_witness: Option<SparseVec>,
    /// A spanning vector with nonzero image.
    span_witness: Option<SparseVec>,
}

fn image_of(images: &Images, v: &SparseVec) -> BTreeMap<usize, BigRational> {
    let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (j, c) in v {
        let c = BigRational::from(c.clone());
        for (key, x) in &images[*j] {
            let e = acc.entry(*key).or_insert_with(BigRational::zero);
            *e += &c * x;
        }
    }
    acc.retain(|_, x| !x.is_zero());
    acc
}

/// Compares `span(spanning)` with the kernel of the map given by `images`,
/// working independently on the connected pieces of the map.
fn compare_span(images: &Images, spanning: Vec<SparseVec>, want_basis: bool) -> SpanOutcome {
    let n = images.len();
    let mut uf = UnionFind::new(n);
    let mut by_key: HashMap<usize, usize> = HashMap::new();
    for (j, img) in images.iter().enumerate() {
        for (key, _) in img {
            match by_key.get(key) {
                Some(&first) => uf.union(first, j),
                None => {
                    by_key.insert(*key, j);
                }
            }
        }
    }
    for v in &spanning {
        for w in v.windows(2) {
            uf.union(w[0].0, w[1].0);
        }
    }
    let mut comp_of = vec![0; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut root_to_comp: HashMap<usize, usize> = HashMap::new();
    for j in 0..n {
        let root = uf.find(j);
        let c = *root_to_comp.entry(root).or_insert_with(|| {
            comps.push(Vec::new());
            comps.len() - 1
        });
        comps[c].push(j);
        comp_of[j] = c;
    }
    let mut vecs_of: Vec<Vec<SparseVec>> = vec![Vec::new(); comps.len()];
    for v in spanning {
        if let Some(&(j, _)) = v.first() {
            vecs_of[comp_of[j]].push(v);
        }
    }
    let parts: Vec<SpanOutcome> = comps
        .par_iter()
        .zip(vecs_of.into_par_iter())
        .map(|(sources, vecs)| compare_component(images, sources, vecs, want_basis))
        .collect();
    let mut out = SpanOutcome {
        span_in_kernel: true,
        kernel_in_span: true,
        ..Default::default()
    };
    for p in parts {
        out.kernel_dim += p.kernel_dim;
        out.span_dim += p.span_dim;
        out.span_in_kernel &= p.span_in_kernel;
        out.kernel_in_span &= p.kernel_in_span;
        out.kernel_basis.extend(p.kernel_basis);
        if out.kernel_witness.is_none() {
            out.kernel_witness = p.kernel_witness;
        }
        if out.span_witness.is_none() {
            out.span_witness = p.span_witness;
        }
    }
    out
}

fn compare_component(images: &Images, sources: &[usize], vecs: Vec<SparseVec>, want_basis: bool) -> SpanOutcome {
    // dense block: rows are image keys, columns are sources
    let mut keys: Vec<usize> = sources.iter().flat_map(|&j| images[j].iter().map(|(k, _)| *k)).collect();
    keys.sort_unstable();
    keys.dedup();
    let row_of: HashMap<usize, usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let scales: Vec<BigInt> = sources
        .iter()
        .map(|&j| images[j].iter().fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom())))
        .collect();
    let mut m = vec![vec![BigInt::zero(); sources.len()]; keys.len()];
    for (c, &j) in sources.iter().enumerate() {
        for (key, x) in &images[j] {
            m[row_of[key]][c] = x.numer() * (&scales[c] / x.denom());
        }
    }
    let ech = bareiss(&m);
    if !m.is_empty() {
        let spot = [0, m.len() - 1];
        assert!(ech.verify(&m, Some(&spot)), "elimination transform does not reproduce the block");
    }
    // M diag(scales) y = 0  <=>  x = diag(scales) y lies in the kernel
    let basis: Vec<SparseVec> = ech
        .nullspace()
        .into_iter()
        .map(|y| {
            let v: SparseVec = y
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(c, y)| (sources[c], y * &scales[c]))
                .collect();
            primitive_sparse(v)
        })
        .collect();
    let kernel_dim = basis.len();
    let mut span_witness = None;
    for v in &vecs {
        if !image_of(images, v).is_empty() {
            span_witness = Some(v.clone());
            break;
        }
    }
    let span_in_kernel = span_witness.is_none();
    let mut ech_span = SparseEchelon::new();
    for v in vecs {
        if span_in_kernel && ech_span.rank() == kernel_dim {
            break;
        }
        ech_span.insert(v);
    }
    let span_dim = ech_span.rank();
    let mut kernel_witness = None;
    if !(span_in_kernel && span_dim == kernel_dim) {
        kernel_witness = basis.iter().find(|b| !ech_span.contains((*b).clone())).cloned();
    }
    SpanOutcome {
        kernel_dim,
        span_dim,
        span_in_kernel,
        kernel_in_span: kernel_witness.is_none(),
        kernel_basis: if want_basis { basis } else { Vec::new() },
        kernel_witness,
        span_witness,
    }
}

/// Source basis of one piece together with the images of its elements.
struct PieceSpace<C: Coefficient> {
    monomials: Vec<Mono>,
    index: HashMap<Mono, usize>,
    images: Images,
    aux_vars: Vec<Var>,
    t_by_ideal: Vec<Vec<Var>>,
    _marker: std::marker::PhantomData<C>,
}

fn aux_vars<C: Coefficient>(pres: &ReesPresentation<C>) -> Vec<Var> {
    match pres.spec.seq.mode {
        SeqMode::Generic => pres.universe.s_vars().to_vec(),
        SeqMode::Concrete => pres.universe.x_vars().to_vec(),
    }
}

fn t_by_ideal<C: Coefficient>(pres: &ReesPresentation<C>) -> Vec<Vec<Var>> {
    let mut out = vec![Vec::new(); pres.spec.r()];
    for &v in &pres.t_variables {
        out[pres.phi[&v].l].push(v);
    }
    out
}

/// Number of source monomials in the piece.
pub fn piece_size<C: Coefficient>(pres: &ReesPresentation<C>, d: &MultiDegree) -> u64 {
    let aux = aux_vars(pres).len();
    let aux_count: u64 = (0..=d.aux_deg_bound).map(|k| count_of_degree(aux, k)).sum();
    t_by_ideal(pres)
        .iter()
        .zip(&d.t_deg)
        .fold(aux_count, |acc, (vars, &k)| acc.saturating_mul(count_of_degree(vars.len(), k)))
}

fn t_monomials(t_by_ideal: &[Vec<Var>], t_deg: &[u32]) -> Vec<Mono> {
    let mut out = vec![Mono::one()];
    for (vars, &k) in t_by_ideal.iter().zip(t_deg) {
        let part = monomials_of_degree(vars, k);
        out = out.iter().flat_map(|m| part.iter().map(move |p| m.mul(p))).collect();
    }
    out
}

fn to_rational_sparse<C: Coefficient>(p: &Poly<C>, keys: &mut HashMap<Mono, usize>) -> Vec<(usize, BigRational)> {
    let mut v: Vec<(usize, BigRational)> = p
        .terms()
        .map(|(m, c)| {
            let next = keys.len();
            (*keys.entry(m.clone()).or_insert(next), c.to_rational())
        })
        .collect();
    v.sort_by_key(|e| e.0);
    v
}

fn build_piece<C: Coefficient>(pres: &ReesPresentation<C>, d: &MultiDegree, caps: &OracleCaps) -> Result<PieceSpace<C>> {
    if d.t_deg.len() != pres.spec.r() {
        return Err(Error::LengthMismatch {
            expected: pres.spec.r(),
            got: d.t_deg.len(),
        });
    }
    let size = piece_size(pres, d);
    if size > caps.max_monomials as u64 {
        return Err(Error::CapExceeded {
            what: "monomials in a graded piece",
            cap: caps.max_monomials,
            needed: usize::try_from(size).unwrap_or(usize::MAX),
        });
    }
    let aux_vars = aux_vars(pres);
    let t_by_ideal = t_by_ideal(pres);
    let aux = monomials_up_to(&aux_vars, d.aux_deg_bound);
    let ts = t_monomials(&t_by_ideal, &d.t_deg);
    let image = |m: &Mono| pres.phi_apply(&Poly::monomial(&pres.universe, m.clone()));
    let aux_img = aux.iter().map(image).collect::<Result<Vec<_>>>()?;
    let t_img = ts.iter().map(image).collect::<Result<Vec<_>>>()?;
    let mut keys = HashMap::new();
    let mut monomials = Vec::with_capacity(aux.len() * ts.len());
    let mut images = Vec::with_capacity(aux.len() * ts.len());
    for (t, ti) in ts.iter().zip(&t_img) {
        for (u, ui) in aux.iter().zip(&aux_img) {
            monomials.push(u.mul(t));
            images.push(to_rational_sparse(&(ui * ti), &mut keys));
        }
    }
    let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    Ok(PieceSpace {
        monomials,
        index,
        images,
        aux_vars,
        t_by_ideal,
        _marker: std::marker::PhantomData,
    })
}

impl<C: Coefficient> PieceSpace<C> {
    fn to_poly(&self, pres: &ReesPresentation<C>, v: &SparseVec) -> Poly<C> {
        Poly::from_terms(
            &pres.universe,
            v.iter().map(|(j, c)| (C::from_bigint(c.clone()), self.monomials[*j].clone())),
        )
    }

    fn vector_of(&self, p: &Poly<C>) -> Option<SparseVec> {
        let den = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.to_rational().denom()));
        let mut v: SparseVec = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let q = c.to_rational();
            v.push((*self.index.get(m)?, q.numer() * (&den / q.denom())));
        }
        v.sort_by_key(|e| e.0);
        Some(v)
    }

    /// Every monomial multiple of a generator lying in the piece.
    fn multiples(&self, pres: &ReesPresentation<C>, gens: &[Poly<C>], d: &MultiDegree) -> Result<Vec<SparseVec>> {
        let mut out = Vec::new();
        for g in gens {
            let g = pres.concretize(g)?;
            let Some(tdeg) = t_multidegree(pres, &g)? else {
                continue;
            };
            let Some(rest): Option<Vec<u32>> = d.t_deg.iter().zip(&tdeg).map(|(&a, &b)| a.checked_sub(b)).collect() else {
                continue;
            };
            let aux_deg = g
                .terms()
                .map(|(m, _)| m.restrict(|v| self.aux_vars.contains(&v)).degree())
                .max()
                .unwrap_or(0);
            if aux_deg > d.aux_deg_bound {
                continue;
            }
            let aux = monomials_up_to(&self.aux_vars, d.aux_deg_bound - aux_deg);
            for w in t_monomials(&self.t_by_ideal, &rest) {
                for u in &aux {
                    let multiple = g.mul_term(&C::one(), &u.mul(&w));
                    let v = self
                        .vector_of(&multiple)
                        .ok_or_else(|| Error::Malformed(format!("multiple of {g} leaves the piece")))?;
                    out.push(v);
                }
            }
        }
        Ok(out)
    }
}

/// The common t-multidegree of the terms of `p`, `None` for zero.
fn t_multidegree<C: Coefficient>(pres: &ReesPresentation<C>, p: &Poly<C>) -> Result<Option<Vec<u32>>> {
    let mut common: Option<Vec<u32>> = None;
    for (m, _) in p.terms() {
        let mut deg = vec![0; pres.spec.r()];
        for (v, e) in m.iter() {
            if pres.universe.block(v) == Block::BigT {
                if !pres.is_presentation_var(v) {
                    return Err(Error::UnknownVariable(pres.universe.name(v).to_string()));
                }
                deg[pres.phi[&v].l] += e;
            }
        }
        match &common {
            None => common = Some(deg),
            Some(c) if *c != deg => {
                return Err(Error::Malformed(format!("{p} is not homogeneous in the t-grading")))
            }
            _ => {}
        }
    }
    Ok(common)
}

/// Kernel basis of the presentation map on one piece.
pub fn kernel_piece<C: Coefficient>(pres: &ReesPresentation<C>, d: &MultiDegree, caps: &OracleCaps) -> Result<Vec<Poly<C>>> {
    let space = build_piece(pres, d, caps)?;
    let out = compare_span(&space.images, Vec::new(), true);
    Ok(out.kernel_basis.iter().map(|v| space.to_poly(pres, v)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    /// In the kernel, outside the span of the generators.
    KernelNotInIdeal,
    /// In the span of the generators, not in the kernel.
    IdealNotInKernel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub polynomial: String,
    /// The witness was re-checked by substitution and span membership.
    pub rechecked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceReport {
    pub degree: MultiDegree,
    pub monomials: usize,
    pub kernel_dim: usize,
    pub ideal_dim: usize,
    pub ideal_in_kernel: bool,
    pub kernel_in_ideal: bool,
    pub equal: bool,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedKernelReport {
    pub coefficients: Domain,
    pub note: Option<String>,
    pub generators: usize,
    pub pieces: Vec<PieceReport>,
    pub equal: bool,
}

impl GradedKernelReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut s = format!(
            "{:<14} {:>9} {:>7} {:>7} {:>6}\n",
            "t-degree", "monomials", "kernel", "ideal", "equal"
        );
        for p in &self.pieces {
            let deg: Vec<String> = p.degree.t_deg.iter().map(u32::to_string).collect();
            s.push_str(&format!(
                "{:<14} {:>9} {:>7} {:>7} {:>6}\n",
                format!("({})", deg.join(",")),
                p.monomials,
                p.kernel_dim,
                p.ideal_dim,
                if p.equal { "yes" } else { "NO" }
            ));
            for w in &p.witnesses {
                s.push_str(&format!("    witness {:?}: {}\n", w.kind, w.polynomial));
            }
        }
        s
    }
}

/// Compares the span of all multiples of `gens` with the kernel of the
/// presentation map, piece by piece.
pub fn span_compare<C: Coefficient>(
    gens: &[Poly<C>],
    pres: &ReesPresentation<C>,
    degrees: &[MultiDegree],
    caps: &OracleCaps,
) -> Result<GradedKernelReport> {
    let pieces = degrees
        .par_iter()
        .map(|d| piece_report(gens, pres, d, caps))
        .collect::<Result<Vec<_>>>()?;
    let note = (C::DOMAIN == Domain::Integers)
        .then(|| "integer coefficients are embedded in the rationals; dimensions are over QQ".to_string());
    Ok(GradedKernelReport {
        coefficients: C::DOMAIN,
        note,
        generators: gens.len(),
        equal: pieces.iter().all(|p| p.equal),
        pieces,
    })
}

fn piece_report<C: Coefficient>(
    gens: &[Poly<C>],
    pres: &ReesPresentation<C>,
    d: &MultiDegree,
    caps: &OracleCaps,
) -> Result<PieceReport> {
    let space = build_piece(pres, d, caps)?;
    let multiples = space.multiples(pres, gens, d)?;
    let out = compare_span(&space.images, multiples.clone(), false);
    let mut witnesses = Vec::new();
    if let Some(w) = &out.kernel_witness {
        let p = space.to_poly(pres, w);
        let vanishes = pres.phi_apply(&p)?.is_zero();
        let outside = compare_span(&space.images, multiples.clone(), false).span_dim
            < compare_span(&space.images, [multiples.clone(), vec![w.clone()]].concat(), false).span_dim;
        witnesses.push(Witness {
            kind: WitnessKind::KernelNotInIdeal,
            polynomial: p.to_string(),
            rechecked: vanishes && outside,
        });
    }
    if let Some(w) = &out.span_witness {
        let p = space.to_poly(pres, w);
        witnesses.push(Witness {
            kind: WitnessKind::IdealNotInKernel,
            polynomial: p.to_string(),
            rechecked: !pres.phi_apply(&p)?.is_zero(),
        });
    }
    Ok(PieceReport {
        degree: d.clone(),
        monomials: space.monomials.len(),
        kernel_dim: out.kernel_dim,
        ideal_dim: out.span_dim,
        ideal_in_kernel: out.span_in_kernel,
        kernel_in_ideal: out.kernel_in_span,
        equal: out.span_in_kernel && out.kernel_dim == out.span_dim,
        witnesses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanPieceComparison {
    pub degree: MultiDegree,
    pub dim_first: usize,
    pub dim_second: usize,
    pub first_in_second: bool,
    pub second_in_first: bool,
}

impl SpanPieceComparison {
    pub fn equal(&self) -> bool {
        self.first_in_second && self.second_in_first
    }
}

/// Compares the ideal pieces generated by two generator lists directly.
pub fn compare_generated<C: Coefficient>(
    first: &[Poly<C>],
    second: &[Poly<C>],
    pres: &ReesPresentation<C>,
    degrees: &[MultiDegree],
    caps: &OracleCaps,
) -> Result<Vec<SpanPieceComparison>> {
    degrees
        .par_iter()
        .map(|d| {
            let space = build_piece(pres, d, caps)?;
            let a = space.multiples(pres, first, d)?;
            let b = space.multiples(pres, second, d)?;
            let (ea, eb) = (echelon_of(&a), echelon_of(&b));
            Ok(SpanPieceComparison {
                degree: d.clone(),
                dim_first: ea.rank(),
                dim_second: eb.rank(),
                first_in_second: a.iter().all(|v| eb.contains(v.clone())),
                second_in_first: b.iter().all(|v| ea.contains(v.clone())),
            })
        })
        .collect()
}

fn echelon_of(vs: &[SparseVec]) -> SparseEchelon {
    let mut e = SparseEchelon::new();
    for v in vs {
        e.insert(v.clone());
    }
    e
}

/// One term `coefficient * monomial * e_gen` of a syzygy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyzygyTerm {
    pub gen: usize,
    pub monomial: SMonomial,
    #[serde(serialize_with = "as_string")]
    pub coefficient: BigInt,
}

fn as_string<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub type SyzygyVector = Vec<SyzygyTerm>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyzygyPiece {
    /// Degree of `Σ c_i a_i`.
    pub degree: u32,
    pub sources: usize,
    pub kernel_dim: usize,
    pub pairwise_dim: usize,
    pub equal: bool,
    pub basis: Vec<SyzygyVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyzygyKernelReport {
    pub pieces: Vec<SyzygyPiece>,
    pub equal: bool,
}

/// Graded pieces of the first syzygy module of `gens` up to `degree_bound`,
/// each compared with the span of the pairwise syzygies.
pub fn monomial_syzygy_kernel(gens: &[SMonomial], degree_bound: u32, caps: &OracleCaps) -> Result<SyzygyKernelReport> {
    let Some(first) = gens.first() else {
        return Err(Error::Malformed("need at least one generator".into()));
    };
    let n = first.len();
    if gens.iter().any(|g| g.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            got: gens.iter().map(SMonomial::len).find(|&l| l != n).unwrap_or(n),
        });
    }
    let pairs = syzygy_generators(gens)?;
    let mut pieces = Vec::new();
    for deg in 0..=degree_bound {
        let size: u64 = gens
            .iter()
            .filter_map(|g| deg.checked_sub(g.degree()))
            .map(|k| count_of_degree(n, k))
            .sum();
        if size > caps.max_monomials as u64 {
            return Err(Error::CapExceeded {
                what: "syzygy sources in a degree",
                cap: caps.max_monomials,
                needed: usize::try_from(size).unwrap_or(usize::MAX),
            });
        }
        let mut sources = Vec::new();
        let mut index = HashMap::new();
        let mut images: Images = Vec::new();
        let mut keys: HashMap<SMonomial, usize> = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            let Some(k) = deg.checked_sub(g.degree()) else { continue };
            for e in exponent_vectors(n, k) {
                let u = SMonomial::new(e);
                let img = u.mul(g)?;
                let next = keys.len();
                let key = *keys.entry(img).or_insert(next);
                index.insert((i, u.clone()), sources.len());
                sources.push((i, u));
                images.push(vec![(key, BigRational::one())]);
            }
        }
        let mut spanning = Vec::new();
        for p in &pairs {
            let Some(k) = deg.checked_sub(p.coeff_i.degree() + gens[p.i].degree()) else { continue };
            for e in exponent_vectors(n, k) {
                let w = SMonomial::new(e);
                let a = index[&(p.i, w.mul(&p.coeff_i)?)];
                let b = index[&(p.j, w.mul(&p.coeff_j)?)];
                let mut v = vec![(a, BigInt::one()), (b, -BigInt::one())];
                v.sort_by_key(|x| x.0);
                if a != b {
                    spanning.push(v);
                }
            }
        }
        let out = compare_span(&images, spanning, true);
        pieces.push(SyzygyPiece {
            degree: deg,
            sources: sources.len(),
            kernel_dim: out.kernel_dim,
            pairwise_dim: out.span_dim,
            equal: out.span_in_kernel && out.kernel_dim == out.span_dim,
            basis: out
                .kernel_basis
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|(j, c)| SyzygyTerm {
                            gen: sources[*j].0,
                            monomial: sources[*j].1.clone(),
                            coefficient: c.clone(),
                        })
                        .collect()
                })
                .collect(),
        });
    }
    Ok(SyzygyKernelReport {
        equal: pieces.iter().all(|p| p.equal),
        pieces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rees::{build_presentation, Family, IndexingMode, ReesSpec};
    use crate::sseq::SeqSpec;

    type Q = BigRational;

    fn generic(n: usize, ideals: Vec<Vec<usize>>, a: Vec<u32>) -> ReesPresentation<Q> {
        let names = (1..=n).map(|i| format!("s{i}")).collect();
        let spec = ReesSpec::new(SeqSpec::generic(names).unwrap(), ideals, a, false).unwrap();
        build_presentation(&spec, IndexingMode::Primary).unwrap()
    }

    #[test]
    fn injective_map_has_no_kernel() {
        let pres = generic(1, vec![vec![0]], vec![1]);
        for d in multidegrees(&pres, &OracleCaps::default()) {
            assert!(kernel_piece(&pres, &d, &OracleCaps::default()).unwrap().is_empty());
        }
    }

    #[test]
    fn two_generator_piece() {
        let pres = generic(2, vec![vec![0, 1]], vec![1]);
        let d = MultiDegree {
            t_deg: vec![1],
            aux_deg_bound: 1,
        };
        let k = kernel_piece(&pres, &d, &OracleCaps::default()).unwrap();
        assert_eq!(k.len(), 1);
        let g = pres.defining_generators(Family::FullIbin, None).unwrap();
        assert!(k[0] == g[0] || k[0] == -&g[0]);
        for b in &k {
            assert!(pres.phi_apply(b).unwrap().is_zero());
        }
    }

    #[test]
    fn empty_generators_give_witness() {
        let pres = generic(2, vec![vec![0, 1]], vec![1]);
        let degs = multidegrees(&pres, &OracleCaps::default());
        let rep = span_compare(&[], &pres, &degs, &OracleCaps::default()).unwrap();
        assert!(!rep.equal);
        let bad = rep.pieces.iter().find(|p| !p.equal).unwrap();
        assert_eq!(bad.witnesses[0].kind, WitnessKind::KernelNotInIdeal);
        assert!(bad.witnesses[0].rechecked);
    }

    #[test]
    fn wrong_generator_gives_witness() {
        let pres = generic(2, vec![vec![0, 1]], vec![1]);
        let g = pres.defining_generators(Family::FullIbin, None).unwrap();
        let t = pres.universe.lookup("T[1;1]").unwrap();
        let bad = &g[0] + &Poly::var(&pres.universe, t).mul_term(&Q::one(), &Mono::var(pres.universe.s_vars()[0]));
        let degs = multidegrees(&pres, &OracleCaps::default());
        let rep = span_compare(&[bad], &pres, &degs, &OracleCaps::default()).unwrap();
        assert!(!rep.equal);
        assert!(rep
            .pieces
            .iter()
            .flat_map(|p| &p.witnesses)
            .any(|w| w.kind == WitnessKind::IdealNotInKernel && w.rechecked));
    }

    #[test]
    fn worked_example_cycle_in_kernel() {
        let names = ["p1", "p2", "x", "y"].iter().map(|s| s.to_string()).collect();
        let spec: ReesSpec<Q> = ReesSpec::new(
            SeqSpec::generic(names).unwrap(),
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3]],
            vec![1; 5],
            false,
        )
        .unwrap();
        let pres = build_presentation(&spec, IndexingMode::Primary).unwrap();
        let d = MultiDegree {
            t_deg: vec![1, 1, 1, 0, 0],
            aux_deg_bound: 0,
        };
        let k = kernel_piece(&pres, &d, &OracleCaps::default()).unwrap();
        let cyc: Poly<Q> = crate::poly::parse_poly(
            "T[1;1,1,1]*T[3;1,1,0]*T[2;1,0,0] - T[1;1,1,0]*T[2;1,1,1]*T[3;1,0,0]",
            &pres.universe,
        )
        .unwrap();
        assert_eq!(k.len(), 1);
        assert!(k[0] == cyc || k[0] == -&cyc);
    }

    #[test]
    fn small_specs_match_kernel() {
        let caps = OracleCaps::default();
        for (n, ideals, a) in [
            (2, vec![vec![0, 1]], vec![2]),
            (3, vec![vec![0, 1, 2]], vec![1]),
            (3, vec![vec![0, 1], vec![1, 2]], vec![1, 1]),
            (2, vec![vec![0, 1], vec![0]], vec![1, 2]),
        ] {
            let pres = generic(n, ideals, a);
            let gens = pres.defining_generators(Family::FullIbin, None).unwrap();
            let degs = multidegrees(&pres, &caps);
            let rep = span_compare(&gens, &pres, &degs, &caps).unwrap();
            assert!(rep.equal, "{}", rep.to_table());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let pres = generic(3, vec![vec![0, 1, 2]], vec![2]);
        let caps = OracleCaps {
            max_monomials: 10,
            ..Default::default()
        };
        let degs = multidegrees(&pres, &caps);
        assert!(matches!(
            span_compare(&[], &pres, &degs, &caps),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn syzygy_examples() {
        let caps = OracleCaps::default();
        let m = |e: &[u32]| SMonomial::new(e.to_vec());
        let rep = monomial_syzygy_kernel(&[m(&[1, 0]), m(&[0, 1])], 2, &caps).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.pieces[2].kernel_dim, 1);
        let rep = monomial_syzygy_kernel(&[m(&[2, 0]), m(&[1, 1]), m(&[0, 2])], 6, &caps).unwrap();
        assert!(rep.equal);
        let rep = monomial_syzygy_kernel(&[m(&[2, 1, 0]), m(&[0, 1, 2]), m(&[1, 0, 1])], 6, &caps).unwrap();
        assert!(rep.equal);
        let rep = monomial_syzygy_kernel(&[m(&[1, 1])], 4, &caps).unwrap();
        assert!(rep.pieces.iter().all(|p| p.kernel_dim == 0));
    }

    #[test]
    fn report_is_deterministic() {
        let pres = generic(3, vec![vec![0, 1], vec![1, 2]], vec![1, 2]);
        let caps = OracleCaps::default();
        let gens = pres.defining_generators(Family::Restricted, None).unwrap();
        let degs = multidegrees(&pres, &caps);
        let a = span_compare(&gens, &pres, &degs, &caps).unwrap().to_json();
        let b = span_compare(&gens, &pres, &degs, &caps).unwrap().to_json();
        assert_eq!(a, b);
    }
}
