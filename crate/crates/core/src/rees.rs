//! Presentation of a multi-Rees algebra of powers of ideals generated by
//! subsets of the fixed sequence.
//!
//! Index tuples are stored in display order `(j_{n-1}, ..., j_1)`. The
//! variable `T[l;j]` maps to `s^j t_l`, where `s^j` has exponent
//! `j_i - j_{i-1}` on `s_i` with `j_0 = 0` and `j_n = a`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::{Coefficient, Domain};
use crate::error::{Error, Result};
use crate::poly::{parse_poly, Block, Mono, MonomialOrder, OrderKind, Poly, TKey, Var, VarUniverse};
use crate::quasimat::{
    binary_subquasi_enumerate_with, ibin_generators_positioned, quasi_determinants_positioned, Binomial,
    CertTerm, CombinationCert, EnumOptions, PositionedBinomial, QuasiMatrix,
};
use crate::sseq::{SMonomial, SeqMode, SeqSpec};

/// An element of `𝒯_a`: `0 <= j_1 <= ... <= j_{n-1} <= a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexTuple {
    /// Display order `(j_{n-1}, ..., j_1)`.
    pub j: Vec<u32>,
    pub a: u32,
}

impl IndexTuple {
    pub fn new(j: Vec<u32>, a: u32) -> Result<Self> {
        let t = IndexTuple { j, a };
        let asc = t.ascending();
        if asc.windows(2).any(|w| w[0] > w[1]) || asc.last().is_some_and(|&x| x > a) {
            return Err(Error::InvalidTuple(format!("{t} is not nondecreasing up to {a}")));
        }
        Ok(t)
    }

    /// `n`, the length of the sequence the tuple indexes.
    pub fn n(&self) -> usize {
        self.j.len() + 1
    }

    /// `(j_1, ..., j_{n-1})`.
    pub fn ascending(&self) -> Vec<u32> {
        self.j.iter().rev().copied().collect()
    }

    /// `j_i` for `0 <= i <= n`, with `j_0 = 0` and `j_n = a`.
    pub fn get(&self, i: usize) -> u32 {
        let n = self.n();
        if i == 0 {
            0
        } else if i == n {
            self.a
        } else {
            self.j[n - 1 - i]
        }
    }

    /// Membership in `𝒯'_a`: `j_1 >= 1` (and `a >= 1` when `n = 1`).
    pub fn is_primed(&self) -> bool {
        if self.n() == 1 {
            self.a >= 1
        } else {
            self.get(1) >= 1
        }
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.j.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All of `𝒯_a` (or `𝒯'_a`) for a sequence of length `n`, in
/// colexicographic order of the display tuple.
#[allow(non_snake_case)]
pub fn enumerate_T(a: u32, n: usize, primed: bool) -> Result<Vec<IndexTuple>> {
    if a < 1 {
        return Err(Error::InvalidSpec("exponent must be at least 1".into()));
    }
    if n < 1 {
        return Err(Error::InvalidSpec("sequence length must be at least 1".into()));
    }
    let lo = u32::from(primed);
    let mut out = Vec::new();
    let mut asc = Vec::with_capacity(n - 1);
    fn rec(n: usize, a: u32, min: u32, asc: &mut Vec<u32>, out: &mut Vec<IndexTuple>) {
        if asc.len() == n - 1 {
            out.push(IndexTuple {
                j: asc.iter().rev().copied().collect(),
                a,
            });
            return;
        }
        for v in min..=a {
            asc.push(v);
            rec(n, a, v, asc, out);
            asc.pop();
        }
    }
    if n == 1 {
        out.push(IndexTuple { j: Vec::new(), a });
    } else {
        rec(n, a, lo, &mut asc, &mut out);
    }
    Ok(out)
}

/// `s^j`.
pub fn s_power(j: &IndexTuple) -> SMonomial {
    let n = j.n();
    SMonomial::new((1..=n).map(|i| j.get(i) - j.get(i - 1)).collect())
}

/// `s^j` with `j_0 = 1`, a monomial of degree `a - 1`; defined on `𝒯'_a`.
pub fn base_power(j: &IndexTuple) -> SMonomial {
    let n = j.n();
    SMonomial::new(
        (1..=n)
            .map(|i| j.get(i) - if i == 1 { 1 } else { j.get(i - 1) })
            .collect(),
    )
}

/// `j^{|k>}`: keeps `j_i` for `i >= k` and lowers `j_i` by one for `i < k`.
pub fn shift(j: &IndexTuple, k: usize) -> Result<IndexTuple> {
    let n = j.n();
    if k < 1 || k > n {
        return Err(Error::OutOfRange(format!("shift index {k} outside 1..={n}")));
    }
    if !j.is_primed() {
        return Err(Error::InvalidTuple(format!("{j} is not in the primed index set")));
    }
    let asc: Vec<u32> = (1..n).map(|i| if i < k { j.get(i) - 1 } else { j.get(i) }).collect();
    Ok(IndexTuple {
        j: asc.into_iter().rev().collect(),
        a: j.a,
    })
}

/// The multi-Rees data: sequence, generator index sets and exponents.
#[derive(Clone, Debug)]
pub struct ReesSpec<C: Coefficient> {
    pub seq: SeqSpec<C>,
    /// 0-based, sorted index sets `K_l`.
    pub ideals: Vec<Vec<usize>>,
    pub a: Vec<u32>,
    pub assume_weak_regular: bool,
}

/// `j ∈ ℱ_{a_l}^l`, decided as support containment in `K_l`.
#[allow(non_snake_case)]
pub fn membership_F<C: Coefficient>(j: &IndexTuple, l: usize, spec: &ReesSpec<C>) -> Result<bool> {
    let k = spec
        .ideals
        .get(l)
        .ok_or_else(|| Error::OutOfRange(format!("ideal index {l} outside 0..{}", spec.r())))?;
    Ok(s_power(j).support().iter().all(|i| k.contains(i)))
}

impl<C: Coefficient> ReesSpec<C> {
    pub fn new(seq: SeqSpec<C>, ideals: Vec<Vec<usize>>, a: Vec<u32>, assume_weak_regular: bool) -> Result<Self> {
        let n = seq.len();
        if ideals.is_empty() {
            return Err(Error::InvalidSpec("at least one ideal is required".into()));
        }
        if a.len() != ideals.len() {
            return Err(Error::InvalidSpec(format!(
                "{} exponents given for {} ideals",
                a.len(),
                ideals.len()
            )));
        }
        let mut sorted = Vec::with_capacity(ideals.len());
        for (l, k) in ideals.into_iter().enumerate() {
            if k.is_empty() {
                return Err(Error::InvalidSpec(format!("ideal {} has no generators", l + 1)));
            }
            let set: BTreeSet<usize> = k.iter().copied().collect();
            if set.len() != k.len() {
                return Err(Error::InvalidSpec(format!("ideal {} repeats a generator", l + 1)));
            }
            if let Some(&bad) = set.iter().find(|&&i| i >= n) {
                return Err(Error::InvalidSpec(format!(
                    "ideal {} uses generator {} but n = {n}",
                    l + 1,
                    bad + 1
                )));
            }
            sorted.push(set.into_iter().collect());
        }
        if let Some(l) = a.iter().position(|&x| x == 0) {
            return Err(Error::InvalidSpec(format!("exponent a_{} must be positive", l + 1)));
        }
        if seq.mode == SeqMode::Concrete && !assume_weak_regular {
            return Err(Error::InvalidSpec(
                "a concrete sequence needs \"assume_weak_regular\": true".into(),
            ));
        }
        Ok(ReesSpec {
            seq,
            ideals: sorted,
            a,
            assume_weak_regular,
        })
    }

    pub fn n(&self) -> usize {
        self.seq.len()
    }

    pub fn r(&self) -> usize {
        self.ideals.len()
    }

    pub fn from_file(file: &SpecFile) -> Result<Self> {
        if file.coefficients != C::DOMAIN {
            return Err(Error::InvalidSpec(format!(
                "spec declares {} coefficients but {} was requested",
                file.coefficients,
                C::DOMAIN
            )));
        }
        if file.n == 0 {
            return Err(Error::InvalidSpec("n must be positive".into()));
        }
        let names = match &file.names {
            Some(names) if names.len() != file.n => {
                return Err(Error::InvalidSpec(format!("{} names given for n = {}", names.len(), file.n)))
            }
            Some(names) => names.clone(),
            None => (1..=file.n).map(|i| format!("s{i}")).collect(),
        };
        let seq = match file.mode {
            SeqMode::Generic => {
                if !file.s.is_empty() {
                    return Err(Error::InvalidSpec("generic mode takes no concrete \"s\" values".into()));
                }
                SeqSpec::generic(names)?
            }
            SeqMode::Concrete => {
                if file.s.len() != file.n {
                    return Err(Error::InvalidSpec(format!(
                        "{} concrete values given for n = {}",
                        file.s.len(),
                        file.n
                    )));
                }
                let xu = VarUniverse::builder().x_vars(file.x_vars.iter().cloned()).build()?;
                let values = file
                    .s
                    .iter()
                    .map(|text| parse_poly::<C>(text, &xu).map_err(|e| Error::InvalidSpec(e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                SeqSpec::concrete(names, values, xu)?
            }
        };
        let ideals = file
            .ideals
            .iter()
            .enumerate()
            .map(|(l, k)| {
                k.iter()
                    .map(|&i| {
                        if i == 0 {
                            Err(Error::InvalidSpec(format!("ideal {} uses index 0; indices are 1-based", l + 1)))
                        } else {
                            Ok(i - 1)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(seq, ideals, file.a.clone(), file.assume_weak_regular)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&SpecFile::from_json(text)?)
    }

    pub fn to_file(&self) -> SpecFile {
        let default_names: Vec<String> = (1..=self.n()).map(|i| format!("s{i}")).collect();
        SpecFile {
            mode: self.seq.mode,
            coefficients: C::DOMAIN,
            n: self.n(),
            s: self.seq.values.iter().map(ToString::to_string).collect(),
            x_vars: self
                .seq
                .x_universe
                .x_vars()
                .iter()
                .map(|&v| self.seq.x_universe.name(v).to_string())
                .collect(),
            ideals: self.ideals.iter().map(|k| k.iter().map(|i| i + 1).collect()).collect(),
            a: self.a.clone(),
            names: (self.seq.names != default_names).then(|| self.seq.names.clone()),
            assume_weak_regular: self.assume_weak_regular,
        }
    }
}

/// The JSON spec file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub mode: SeqMode,
    pub coefficients: Domain,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s: Vec<String>,
    #[serde(default)]
    pub x_vars: Vec<String>,
    /// 1-based generator indices per ideal.
    pub ideals: Vec<Vec<usize>>,
    pub a: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default)]
    pub assume_weak_regular: bool,
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum IndexingMode {
    /// Tuples over the whole sequence.
    #[default]
    Primary,
    /// Tuples over the generators of each ideal only.
    Reduced,
}

/// Column label `(l, j)` with `j ∈ 𝒯'_{a_l}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ColumnLabel {
    /// 0-based ideal index.
    pub l: usize,
    pub j: IndexTuple,
}

/// Formal image `s^mono * t_l` of a presentation variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiImage {
    pub s: SMonomial,
    pub l: usize,
}

#[derive(Clone, Debug)]
pub struct ReesPresentation<C: Coefficient> {
    pub spec: ReesSpec<C>,
    pub indexing: IndexingMode,
    pub universe: Arc<VarUniverse>,
    /// `B_a`, with `n` rows.
    pub b: QuasiMatrix<Var>,
    pub b_columns: Vec<ColumnLabel>,
    /// `(s | B_a)`.
    pub c: QuasiMatrix<Var>,
    /// `D_a`, with `n` rows; rows outside `K_l` are empty in block `l`.
    pub d: QuasiMatrix<Var>,
    pub d_columns: Vec<ColumnLabel>,
    /// Column range of each block `D_{a_l}` inside `D_a`.
    pub d_blocks: Vec<Range<usize>>,
    /// `(s | D_a)`.
    pub e: QuasiMatrix<Var>,
    /// Variables of the presentation ring, in id order.
    pub t_variables: Vec<Var>,
    /// Image of every indexed variable of the universe.
    pub phi: BTreeMap<Var, PhiImage>,
    /// Concrete sequence values moved into `universe` (concrete mode).
    pub s_values: Vec<Poly<C>>,
    pub warnings: Vec<String>,
}

/// Lifts an exponent vector over `K` (sorted) to one over all `n` symbols.
fn lift(m: &SMonomial, k: &[usize], n: usize) -> SMonomial {
    let mut out = SMonomial::one(n);
    for (i, &e) in m.exps.iter().enumerate() {
        out.exps[k[i]] = e;
    }
    out
}

pub fn build_presentation<C: Coefficient>(spec: &ReesSpec<C>, indexing: IndexingMode) -> Result<ReesPresentation<C>> {
    let n = spec.n();
    let r = spec.r();
    // every indexed variable and its image
    let mut keyed: BTreeMap<TKey, PhiImage> = BTreeMap::new();
    for l in 0..r {
        let a = spec.a[l];
        match indexing {
            IndexingMode::Primary => {
                for j in enumerate_T(a, n, false)? {
                    keyed.insert(TKey { l: l + 1, j: j.j.clone() }, PhiImage { s: s_power(&j), l });
                }
            }
            IndexingMode::Reduced => {
                let k = &spec.ideals[l];
                for j in enumerate_T(a, k.len(), false)? {
                    let s = lift(&s_power(&j), k, n);
                    keyed.insert(TKey { l: l + 1, j: j.j.clone() }, PhiImage { s, l });
                }
            }
        }
    }
    let mut builder = VarUniverse::builder()
        .s_vars(spec.seq.names.iter().cloned())
        .big_t_keys(keyed.keys().cloned())
        .small_t_vars((1..=r).map(|l| format!("t{l}")));
    if spec.seq.mode == SeqMode::Concrete {
        let xu = &spec.seq.x_universe;
        builder = builder.x_vars(xu.x_vars().iter().map(|&v| xu.name(v).to_string()));
    }
    let universe = builder.build()?;
    let var_of = |l: usize, j: &IndexTuple| -> Var {
        universe
            .lookup_key(&TKey { l: l + 1, j: j.j.clone() })
            .expect("every tuple was registered")
    };

    let mut b_parts = Vec::new();
    let mut d_parts = Vec::new();
    let mut b_columns = Vec::new();
    let mut d_columns = Vec::new();
    let mut d_blocks = Vec::new();
    let mut warnings = Vec::new();
    for l in 0..r {
        let a = spec.a[l];
        let k = &spec.ideals[l];
        let (cols, rows_of): (Vec<IndexTuple>, Vec<usize>) = match indexing {
            IndexingMode::Primary => (enumerate_T(a, n, true)?, (0..n).collect()),
            IndexingMode::Reduced => (enumerate_T(a, k.len(), true)?, k.clone()),
        };
        let mut cols = cols;
        cols.sort_by(|x, y| x.j.cmp(&y.j));
        let mut b_l = QuasiMatrix::new(n, cols.len());
        let mut d_cols = Vec::new();
        for (c, j) in cols.iter().enumerate() {
            for (kk, &row) in rows_of.iter().enumerate() {
                b_l.insert((row, c), var_of(l, &shift(j, kk + 1)?))?;
            }
            let base = match indexing {
                IndexingMode::Primary => base_power(j),
                IndexingMode::Reduced => lift(&base_power(j), k, n),
            };
            if base.support().iter().all(|i| k.contains(i)) {
                d_cols.push(c);
            }
        }
        // D keeps only the rows of K_l
        let mut d_l = QuasiMatrix::new(n, d_cols.len());
        for (new_c, &c) in d_cols.iter().enumerate() {
            for &row in k {
                d_l.insert((row, new_c), *b_l.get((row, c)).expect("B is full on its rows"))?;
            }
            d_columns.push(ColumnLabel { l, j: cols[c].clone() });
        }
        let start = d_blocks.last().map_or(0, |rg: &Range<usize>| rg.end);
        d_blocks.push(start..start + d_cols.len());
        if d_l.len() == 1 {
            warnings.push(format!(
                "ideal {} has a single generator and exponent 1; it contributes no relations",
                l + 1
            ));
        }
        b_columns.extend(cols.into_iter().map(|j| ColumnLabel { l, j }));
        b_parts.push(b_l);
        d_parts.push(d_l);
    }
    let mut s_col = QuasiMatrix::new(n, 1);
    for (i, &v) in universe.s_vars().iter().enumerate() {
        s_col.insert((i, 0), v)?;
    }
    let b = QuasiMatrix::hconcat(&b_parts.iter().collect::<Vec<_>>())?;
    let d = QuasiMatrix::hconcat(&d_parts.iter().collect::<Vec<_>>())?;
    let c = QuasiMatrix::hconcat(&[&s_col, &b])?;
    let e = QuasiMatrix::hconcat(&[&s_col, &d])?;
    let t_variables: Vec<Var> = d.entries().map(|(_, &v)| v).collect::<BTreeSet<_>>().into_iter().collect();
    let phi = keyed
        .into_iter()
        .map(|(key, img)| (universe.lookup_key(&key).expect("registered"), img))
        .collect();
    let s_values = spec
        .seq
        .values
        .iter()
        .map(|v| move_poly(v, &universe))
        .collect::<Result<Vec<_>>>()?;
    warnings.extend(spec.seq.lint());
    Ok(ReesPresentation {
        spec: spec.clone(),
        indexing,
        universe,
        b,
        b_columns,
        c,
        d,
        d_columns,
        d_blocks,
        e,
        t_variables,
        phi,
        s_values,
        warnings,
    })
}

/// Re-expresses `p` over `target`, matching variables by name.
fn move_poly<C: Coefficient>(p: &Poly<C>, target: &Arc<VarUniverse>) -> Result<Poly<C>> {
    let src = p.universe();
    let mut map = BTreeMap::new();
    for v in p.variables() {
        let name = src.name(v);
        map.insert(v, target.lookup(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?);
    }
    Ok(p.map_monomials(target, |m| Mono::from_pairs(m.iter().map(|(v, e)| (map[&v], e)))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
pub enum Family {
    /// Every binary quasi-minor of `E_a`.
    FullIbin,
    /// s-minors, minors inside each block, and T-binary quasi-minors using
    /// at most one column of each block.
    #[default]
    Restricted,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" | "full_ibin" | "full-ibin" => Ok(Family::FullIbin),
            "restricted" => Ok(Family::Restricted),
            other => Err(Error::Parse(format!("unknown family `{other}`"))),
        }
    }
}

impl<C: Coefficient> ReesPresentation<C> {
    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn is_presentation_var(&self, v: Var) -> bool {
        self.t_variables.binary_search(&v).is_ok()
    }

    /// Largest useful minor size: the number of rows of `E_a`.
    pub fn default_max_size(&self) -> usize {
        self.n()
    }

    /// Generators as position pairs in `E_a`.
    pub fn generators_positioned(&self, family: Family, max_size: Option<usize>) -> Result<Vec<PositionedBinomial>> {
        let max_size = max_size.unwrap_or_else(|| self.default_max_size());
        let raw = match family {
            Family::FullIbin => ibin_generators_positioned(
                &self.e,
                &EnumOptions {
                    max_size,
                    column_groups: None,
                },
            )?,
            Family::Restricted => self.restricted_positioned(max_size)?,
        };
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for pb in raw {
            let b = pb.binomial(&self.e)?;
            if !b.is_zero() && seen.insert(b.normalized()) {
                out.push(pb);
            }
        }
        Ok(out)
    }

    fn restricted_positioned(&self, max_size: usize) -> Result<Vec<PositionedBinomial>> {
        let n = self.n();
        let mut out = Vec::new();
        // 2x2 minors with the s column
        for c in 1..self.e.n_cols() {
            for i in 0..n {
                for k in i + 1..n {
                    if self.e.get((i, c)).is_some() && self.e.get((k, c)).is_some() {
                        out.push(PositionedBinomial::new(vec![(i, 0), (k, c)], vec![(k, 0), (i, c)]));
                    }
                }
            }
        }
        // 2x2 minors inside each block
        for range in &self.d_blocks {
            for c1 in range.clone() {
                for c2 in c1 + 1..range.end {
                    for i in 0..n {
                        for k in i + 1..n {
                            let ps = [(i, c1 + 1), (k, c2 + 1), (i, c2 + 1), (k, c1 + 1)];
                            if ps.iter().all(|&p| self.e.get(p).is_some()) {
                                out.push(PositionedBinomial::new(vec![ps[0], ps[1]], vec![ps[2], ps[3]]));
                            }
                        }
                    }
                }
            }
        }
        // T-binary quasi-minors with at most one column per block
        let mut groups = vec![0; self.d.n_cols()];
        for (l, range) in self.d_blocks.iter().enumerate() {
            for c in range.clone() {
                groups[c] = l;
            }
        }
        let opts = EnumOptions {
            max_size,
            column_groups: Some(groups),
        };
        for b in binary_subquasi_enumerate_with(&self.d, &opts)? {
            for pb in quasi_determinants_positioned(&b) {
                let shift = |ps: &[(usize, usize)]| ps.iter().map(|&(r, c)| (r, c + 1)).collect::<Vec<_>>();
                out.push(PositionedBinomial::new(shift(&pb.plus), shift(&pb.minus)));
            }
        }
        Ok(out)
    }

    pub fn generator_binomials(&self, family: Family, max_size: Option<usize>) -> Result<Vec<Binomial<Var>>> {
        self.generators_positioned(family, max_size)?
            .iter()
            .map(|pb| pb.binomial(&self.e).map(|b| b.normalized()))
            .collect()
    }

    /// Defining generators as polynomials, sign-normalized.
    pub fn defining_generators(&self, family: Family, max_size: Option<usize>) -> Result<Vec<Poly<C>>> {
        Ok(self
            .generator_binomials(family, max_size)?
            .iter()
            .map(|b| b.to_poly(&self.universe))
            .collect())
    }

    /// `φ(v)` for a presentation variable.
    pub fn phi_image(&self, v: Var) -> Result<Poly<C>> {
        if !self.is_presentation_var(v) {
            return Err(Error::UnknownVariable(self.universe.name(v).to_string()));
        }
        let img = &self.phi[&v];
        let t = Poly::var(&self.universe, self.universe.small_t_vars()[img.l]);
        Ok(&self.s_monomial_value(&img.s) * &t)
    }

    /// The value of an s-monomial: itself in generic mode, the product of
    /// concrete values otherwise.
    pub fn s_monomial_value(&self, m: &SMonomial) -> Poly<C> {
        match self.spec.seq.mode {
            SeqMode::Generic => Poly::monomial(&self.universe, m.to_mono(&self.universe)),
            SeqMode::Concrete => m
                .exps
                .iter()
                .enumerate()
                .fold(Poly::one(&self.universe), |acc, (i, &e)| &acc * &self.s_values[i].pow(e)),
        }
    }

    /// Applies `T[l;j] -> s^j t_l`; s-symbols become their concrete values
    /// in concrete mode.
    pub fn phi_apply(&self, p: &Poly<C>) -> Result<Poly<C>> {
        if !Arc::ptr_eq(p.universe(), &self.universe) && **p.universe() != *self.universe {
            return Err(Error::UniverseMismatch);
        }
        p.substitute(&self.universe, |v| match self.universe.block(v) {
            Block::BigT => self.phi_image(v),
            Block::S => {
                let i = self.universe.s_index(v).expect("s var");
                Ok(self.s_monomial_value(&SMonomial::var(self.n(), i)))
            }
            Block::SmallT | Block::X => Ok(Poly::var(&self.universe, v)),
        })
    }

    /// Substitutes concrete values for the sequence symbols; the identity
    /// in generic mode.
    pub fn concretize(&self, p: &Poly<C>) -> Result<Poly<C>> {
        match self.spec.seq.mode {
            SeqMode::Generic => Ok(p.clone()),
            SeqMode::Concrete => p.substitute(&self.universe, |v| match self.universe.s_index(v) {
                Some(i) => Ok(self.s_values[i].clone()),
                None => Ok(Poly::var(&self.universe, v)),
            }),
        }
    }

    /// The `E_a` layout with blanks.
    pub fn render_e(&self) -> String {
        self.e.render(|&v| self.universe.name(v).to_string())
    }

    /// A ranking of the indexed variables: images with fewer distinct
    /// s-factors first (largest), then by index.
    pub fn pure_first_order(&self, kind: OrderKind) -> MonomialOrder {
        let mut t: Vec<Var> = self.universe.big_t_vars().to_vec();
        t.sort_by_key(|v| (self.phi[v].s.support().len(), *v));
        t.extend(self.universe.small_t_vars());
        MonomialOrder::new(kind, t)
    }
}

/// Rewrites an s-binary quasi-minor of `E_a` through 2x2 s-minors and
/// T-binary quasi-minors.
pub fn s_binary_reduction<C: Coefficient>(delta: &PositionedBinomial, pres: &ReesPresentation<C>) -> Result<CombinationCert> {
    if !delta.is_quasi_minor_of(&pres.e) {
        return Err(Error::NotBinary("not a binary quasi-minor of E_a".into()));
    }
    let s_in = |ps: &[(usize, usize)]| ps.iter().filter(|p| p.1 == 0).count();
    if s_in(&delta.plus) != 1 || s_in(&delta.minus) != 1 {
        return Err(Error::Malformed("both terms must contain exactly one s-entry".into()));
    }
    let mut terms = Vec::new();
    s_rec(delta.plus.clone(), delta.minus.clone(), Vec::new(), &pres.e, &mut terms);
    let cert = CombinationCert {
        target: delta.clone(),
        terms,
    };
    if !cert.verify(&pres.e) {
        return Err(Error::Malformed("s-binary rewriting failed to verify".into()));
    }
    Ok(cert)
}

type P = (usize, usize);

fn s_rec(plus: Vec<P>, minus: Vec<P>, mult: Vec<P>, e: &QuasiMatrix<Var>, out: &mut Vec<CertTerm>) {
    let si = *plus.iter().find(|p| p.1 == 0).expect("s entry");
    let sj = *minus.iter().find(|p| p.1 == 0).expect("s entry");
    let v: Vec<P> = plus.iter().copied().filter(|&p| p != si).collect();
    let w: Vec<P> = minus.iter().copied().filter(|&p| p != sj).collect();
    if v.len() == 1 {
        out.push(CertTerm {
            multiplier: mult,
            minor: PositionedBinomial { plus, minus },
        });
        return;
    }
    let w1 = *w.iter().find(|p| p.0 == si.0).expect("row of s_i");
    let v1 = *v.iter().find(|p| p.1 == w1.1).expect("column of W1");
    let v_rest: Vec<P> = v.iter().copied().filter(|&p| p != v1).collect();
    let w_rest: Vec<P> = w.iter().copied().filter(|&p| p != w1).collect();
    let mut m1 = mult.clone();
    m1.extend(&v_rest);
    if v1.0 == sj.0 {
        out.push(CertTerm {
            multiplier: m1,
            minor: PositionedBinomial {
                plus: vec![si, v1],
                minus: vec![sj, w1],
            },
        });
        let tail = PositionedBinomial::new(v_rest, w_rest);
        let is_zero = tail.binomial(e).map(|b| b.is_zero()).unwrap_or(false);
        if !is_zero {
            let mut m2 = mult;
            m2.extend([sj, w1]);
            out.push(CertTerm {
                multiplier: m2,
                minor: tail,
            });
        }
    } else {
        let sk = (v1.0, 0);
        out.push(CertTerm {
            multiplier: m1,
            minor: PositionedBinomial {
                plus: vec![si, v1],
                minus: vec![sk, w1],
            },
        });
        let mut m2 = mult;
        m2.push(w1);
        let mut next_plus = v_rest;
        next_plus.push(sk);
        let mut next_minus = w_rest;
        next_minus.push(sj);
        s_rec(next_plus, next_minus, m2, e, out);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NormalityVerdict {
    /// Every leading term is squarefree and the sequence hypothesis holds.
    NormalCm,
    /// The sufficient criterion does not apply.
    Indeterminate,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalityReport {
    pub order: String,
    pub generators: usize,
    pub non_squarefree: Vec<String>,
    pub hypothesis_met: bool,
    pub verdict: NormalityVerdict,
}

/// Checks squarefreeness of every generator's leading term under `ord`.
pub fn squarefree_normality_report<C: Coefficient>(
    pres: &ReesPresentation<C>,
    gens: &[Poly<C>],
    ord: &MonomialOrder,
) -> Result<NormalityReport> {
    let mut non_squarefree = Vec::new();
    for g in gens {
        let (lc, lm) = g.leading(ord)?;
        let lead_ok = lm.is_squarefree() && lc.terms().all(|(m, _)| lm.mul(m).is_squarefree());
        if !lead_ok {
            non_squarefree.push(g.to_string());
        }
    }
    let hypothesis_met = pres.spec.seq.is_squarefree_monomial_sequence();
    let verdict = if hypothesis_met && non_squarefree.is_empty() {
        NormalityVerdict::NormalCm
    } else {
        NormalityVerdict::Indeterminate
    };
    Ok(NormalityReport {
        order: ord.to_string(),
        generators: gens.len(),
        non_squarefree,
        hypothesis_met,
        verdict,
    })
}
