//! Quasi-matrices, binary subquasi-matrices and binary quasi-minors.
//!
//! A binary quasi-matrix is stored by the positions of its entries. Its
//! bipartite entry graph (rows and columns as vertices, one edge per entry)
//! is 2-regular, so enumeration works on vertex-disjoint unions of simple
//! cycles of the parent's entry graph.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::poly::{Mono, Poly, Var, VarUniverse};

/// `(row, column)`, both 0-based.
pub type Pos = (usize, usize);

/// Rows plus columns of an emitted binary quasi-matrix may not exceed this.
pub const MAX_BINARY_SPAN: usize = 12;

/// Bound on entry symbols.
pub trait Entry: Clone + Ord + Hash + Debug + Send + Sync {}
impl<T: Clone + Ord + Hash + Debug + Send + Sync> Entry for T {}

/// A rectangular array in which some positions may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiMatrix<E> {
    n_rows: usize,
    n_cols: usize,
    entries: BTreeMap<Pos, E>,
}

/// A quasi-matrix with empty rows and columns removed, plus index maps back.
#[derive(Clone, Debug)]
pub struct Canonical<E> {
    pub matrix: QuasiMatrix<E>,
    /// `rows[i]` is the original index of canonical row `i`.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl<E: Entry> QuasiMatrix<E> {
    pub fn new(n_rows: usize, n_cols: usize) -> Self {
        QuasiMatrix {
            n_rows,
            n_cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Option<E>>>) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::new(rows.len(), n_cols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::Malformed(format!("row {r} has {} columns, expected {n_cols}", row.len())));
            }
            for (c, e) in row.into_iter().enumerate() {
                if let Some(e) = e {
                    m.insert((r, c), e)?;
                }
            }
        }
        Ok(m)
    }

    /// A full matrix.
    pub fn full(rows: Vec<Vec<E>>) -> Result<Self> {
        Self::from_rows(rows.into_iter().map(|r| r.into_iter().map(Some).collect()).collect())
    }

    pub fn insert(&mut self, pos: Pos, e: E) -> Result<()> {
        if pos.0 >= self.n_rows || pos.1 >= self.n_cols {
            return Err(Error::OutOfRange(format!(
                "position {pos:?} outside {}x{}",
                self.n_rows, self.n_cols
            )));
        }
        if self.entries.contains_key(&pos) {
            return Err(Error::Malformed(format!("position {pos:?} already filled")));
        }
        self.entries.insert(pos, e);
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, pos: Pos) -> Option<&E> {
        self.entries.get(&pos)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Pos, &E)> {
        self.entries.iter()
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() == self.n_rows * self.n_cols
    }

    pub fn row_positions(&self, r: usize) -> Vec<Pos> {
        self.entries.range((r, 0)..(r + 1, 0)).map(|(p, _)| *p).collect()
    }

    pub fn col_positions(&self, c: usize) -> Vec<Pos> {
        self.entries.keys().filter(|p| p.1 == c).copied().collect()
    }

    /// Same shape, keeping only the listed positions.
    pub fn restrict(&self, positions: &[Pos]) -> Result<Self> {
        let mut out = Self::new(self.n_rows, self.n_cols);
        for &p in positions {
            let e = self
                .get(p)
                .ok_or_else(|| Error::Malformed(format!("no entry at {p:?}")))?;
            out.insert(p, e.clone())?;
        }
        Ok(out)
    }

    /// The listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::new(self.n_rows, cols.len());
        for (new_c, &c) in cols.iter().enumerate() {
            for p in self.col_positions(c) {
                out.entries.insert((p.0, new_c), self.entries[&p].clone());
            }
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hconcat(parts: &[&QuasiMatrix<E>]) -> Result<Self> {
        let n_rows = parts.first().map_or(0, |m| m.n_rows);
        let mut out = Self::new(n_rows, parts.iter().map(|m| m.n_cols).sum());
        let mut offset = 0;
        for m in parts {
            if m.n_rows != n_rows {
                return Err(Error::LengthMismatch {
                    expected: n_rows,
                    got: m.n_rows,
                });
            }
            for (&(r, c), e) in &m.entries {
                out.entries.insert((r, c + offset), e.clone());
            }
            offset += m.n_cols;
        }
        Ok(out)
    }

    /// Drops empty rows and columns.
    pub fn canonicalize(&self) -> Canonical<E> {
        let rows: Vec<usize> = self.entries.keys().map(|p| p.0).collect::<BTreeSet<_>>().into_iter().collect();
        let cols: Vec<usize> = self.entries.keys().map(|p| p.1).collect::<BTreeSet<_>>().into_iter().collect();
        let rmap: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let cmap: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut matrix = Self::new(rows.len(), cols.len());
        for (&(r, c), e) in &self.entries {
            matrix.entries.insert((rmap[&r], cmap[&c]), e.clone());
        }
        Canonical { matrix, rows, cols }
    }

    /// Aligned text layout with blanks for empty positions.
    pub fn render(&self, show: impl Fn(&E) -> String) -> String {
        let cells: Vec<Vec<String>> = (0..self.n_rows)
            .map(|r| {
                (0..self.n_cols)
                    .map(|c| self.get((r, c)).map(&show).unwrap_or_default())
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = (0..self.n_cols)
            .map(|c| cells.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, &w)| format!("{cell:<w$}"))
                .collect();
            out.push_str("[ ");
            out.push_str(&line.join("  "));
            out.push_str(" ]\n");
        }
        out
    }
}

/// A set of positions of a parent quasi-matrix with exactly two entries in
/// every row and column it touches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryQuasiMatrix<E> {
    entries: BTreeMap<Pos, E>,
    cycles: Vec<Vec<Pos>>,
}

impl<E: Entry> BinaryQuasiMatrix<E> {
    /// Validates the positions of `parent` as a binary subquasi-matrix.
    pub fn from_positions(parent: &QuasiMatrix<E>, positions: &[Pos]) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for &p in positions {
            let e = parent
                .get(p)
                .ok_or_else(|| Error::NotBinary(format!("no entry at {p:?}")))?;
            if entries.insert(p, e.clone()).is_some() {
                return Err(Error::NotBinary(format!("position {p:?} repeated")));
            }
        }
        Self::from_entries(entries)
    }

    /// Validates a whole quasi-matrix as binary.
    pub fn validate(q: &QuasiMatrix<E>) -> Result<Self> {
        Self::from_entries(q.entries.clone())
    }

    fn from_entries(entries: BTreeMap<Pos, E>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::NotBinary("no entries".into()));
        }
        let mut by_row: BTreeMap<usize, Vec<Pos>> = BTreeMap::new();
        let mut by_col: BTreeMap<usize, Vec<Pos>> = BTreeMap::new();
        for &p in entries.keys() {
            by_row.entry(p.0).or_default().push(p);
            by_col.entry(p.1).or_default().push(p);
        }
        if let Some((r, ps)) = by_row.iter().find(|(_, ps)| ps.len() != 2) {
            return Err(Error::NotBinary(format!("row {r} has {} entries", ps.len())));
        }
        if let Some((c, ps)) = by_col.iter().find(|(_, ps)| ps.len() != 2) {
            return Err(Error::NotBinary(format!("column {c} has {} entries", ps.len())));
        }
        let other = |group: &Vec<Pos>, p: Pos| if group[0] == p { group[1] } else { group[0] };
        let mut seen = HashSet::new();
        let mut cycles = Vec::new();
        for &start in entries.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut walk = vec![start];
            seen.insert(start);
            let mut cur = start;
            let mut along_row = true;
            loop {
                let next = if along_row {
                    other(&by_row[&cur.0], cur)
                } else {
                    other(&by_col[&cur.1], cur)
                };
                along_row = !along_row;
                if next == start {
                    break;
                }
                seen.insert(next);
                walk.push(next);
                cur = next;
            }
            cycles.push(walk);
        }
        Ok(BinaryQuasiMatrix { entries, cycles })
    }

    /// Number of rows (equal to the number of columns).
    pub fn size(&self) -> usize {
        self.entries.len() / 2
    }

    pub fn positions(&self) -> Vec<Pos> {
        self.entries.keys().copied().collect()
    }

    pub fn entries(&self) -> &BTreeMap<Pos, E> {
        &self.entries
    }

    /// Cycles of the entry graph. Each walk starts at its smallest position
    /// and moves along a row first, then alternates.
    pub fn cycles(&self) -> &[Vec<Pos>] {
        &self.cycles
    }

    pub fn to_quasi_matrix(&self) -> Canonical<E> {
        let n_rows = self.entries.keys().map(|p| p.0).max().map_or(0, |r| r + 1);
        let n_cols = self.entries.keys().map(|p| p.1).max().map_or(0, |c| c + 1);
        QuasiMatrix {
            n_rows,
            n_cols,
            entries: self.entries.clone(),
        }
        .canonicalize()
    }
}

/// `plus - minus` as products of entry symbols (sorted multisets).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binomial<E> {
    pub plus: Vec<E>,
    pub minus: Vec<E>,
    pub sign_normalized: bool,
}

impl<E: Entry> Binomial<E> {
    pub fn new(mut plus: Vec<E>, mut minus: Vec<E>) -> Self {
        plus.sort();
        minus.sort();
        Binomial {
            plus,
            minus,
            sign_normalized: false,
        }
    }

    /// The representative of `±self` whose `+` term is the smaller one.
    pub fn normalized(&self) -> Self {
        let (plus, minus) = if self.plus <= self.minus {
            (self.plus.clone(), self.minus.clone())
        } else {
            (self.minus.clone(), self.plus.clone())
        };
        Binomial {
            plus,
            minus,
            sign_normalized: true,
        }
    }

    pub fn negate(&self) -> Self {
        Binomial {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
            sign_normalized: false,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.plus == self.minus
    }

    /// Equality up to sign.
    pub fn same_up_to_sign(&self, other: &Self) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.plus == b.plus && a.minus == b.minus
    }

    pub fn display_with(&self, show: impl Fn(&E) -> String) -> String {
        let term = |t: &[E]| t.iter().map(&show).collect::<Vec<_>>().join("*");
        format!("{} - {}", term(&self.plus), term(&self.minus))
    }
}

impl Binomial<Var> {
    pub fn to_poly<C: Coefficient>(&self, universe: &Arc<VarUniverse>) -> Poly<C> {
        Poly::binomial(
            universe,
            Mono::product(self.plus.iter().copied()),
            Mono::product(self.minus.iter().copied()),
        )
    }
}

/// A binomial given by two disjoint perfect matchings of positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionedBinomial {
    pub plus: Vec<Pos>,
    pub minus: Vec<Pos>,
}

impl PositionedBinomial {
    pub fn new(mut plus: Vec<Pos>, mut minus: Vec<Pos>) -> Self {
        plus.sort_unstable();
        minus.sort_unstable();
        PositionedBinomial { plus, minus }
    }

    pub fn size(&self) -> usize {
        self.plus.len()
    }

    pub fn negate(&self) -> Self {
        PositionedBinomial {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    pub fn binomial<E: Entry>(&self, a: &QuasiMatrix<E>) -> Result<Binomial<E>> {
        let look = |ps: &[Pos]| -> Result<Vec<E>> {
            ps.iter()
                .map(|&p| a.get(p).cloned().ok_or_else(|| Error::NotBinary(format!("no entry at {p:?}"))))
                .collect()
        };
        Ok(Binomial::new(look(&self.plus)?, look(&self.minus)?))
    }

    /// True iff both terms are perfect matchings of the same rows and
    /// columns, disjoint, with every position present in `a`.
    pub fn is_quasi_minor_of<E: Entry>(&self, a: &QuasiMatrix<E>) -> bool {
        self.check(a).is_ok()
    }

    fn check<E: Entry>(&self, a: &QuasiMatrix<E>) -> Result<()> {
        let n = self.plus.len();
        if n == 0 || self.minus.len() != n {
            return Err(Error::NotBinary("terms must have equal positive length".into()));
        }
        let rows = |ps: &[Pos]| ps.iter().map(|p| p.0).collect::<BTreeSet<_>>();
        let cols = |ps: &[Pos]| ps.iter().map(|p| p.1).collect::<BTreeSet<_>>();
        let (rp, cp) = (rows(&self.plus), cols(&self.plus));
        if rp.len() != n || cp.len() != n {
            return Err(Error::NotBinary("plus term is not a matching".into()));
        }
        if rows(&self.minus) != rp || cols(&self.minus) != cp {
            return Err(Error::NotBinary("terms cover different rows or columns".into()));
        }
        if self.plus.iter().any(|p| self.minus.contains(p)) {
            return Err(Error::NotBinary("terms share a position".into()));
        }
        if let Some(p) = self.plus.iter().chain(&self.minus).find(|&&p| a.get(p).is_none()) {
            return Err(Error::NotBinary(format!("no entry at {p:?}")));
        }
        Ok(())
    }
}

/// Bitset over `Vec<u64>`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn with_capacity(bits: usize) -> Self {
        BitSet(vec![0; bits.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn intersects(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
}

#[derive(Clone, Debug)]
struct CycleInfo {
    positions: Vec<Pos>,
    vertices: BitSet,
    groups: BitSet,
    half: usize,
}

/// Simple cycles of the entry graph with at most `2 * max_half` edges.
fn simple_cycles<E: Entry>(a: &QuasiMatrix<E>, max_half: usize) -> Vec<Vec<Pos>> {
    let r = a.n_rows;
    let nv = r + a.n_cols;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for &(row, col) in a.entries.keys() {
        adj[row].push(r + col);
        adj[r + col].push(row);
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let to_pos = |u: usize, v: usize| if u < r { (u, v - r) } else { (v, u - r) };
    let mut out = Vec::new();
    let max_len = 2 * max_half;
    for start in 0..nv {
        let mut path = vec![start];
        let mut on_path = vec![false; nv];
        on_path[start] = true;
        // explicit stack of next-neighbour cursors
        let mut cursors = vec![0usize];
        while let Some(cursor) = cursors.last_mut() {
            let u = *path.last().expect("nonempty");
            if *cursor >= adj[u].len() {
                cursors.pop();
                on_path[u] = false;
                path.pop();
                continue;
            }
            let v = adj[u][*cursor];
            *cursor += 1;
            if v == start {
                if path.len() >= 4 && path[1] < path[path.len() - 1] {
                    let mut cyc: Vec<Pos> = path.windows(2).map(|w| to_pos(w[0], w[1])).collect();
                    cyc.push(to_pos(u, start));
                    cyc.sort_unstable();
                    out.push(cyc);
                }
                continue;
            }
            if v < start || on_path[v] || path.len() >= max_len {
                continue;
            }
            path.push(v);
            on_path[v] = true;
            cursors.push(0);
        }
    }
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    out
}

/// Streaming enumeration of binary subquasi-matrices, as position sets.
pub struct BinaryEnumerator<'a, E> {
    matrix: &'a QuasiMatrix<E>,
    cycles: Vec<CycleInfo>,
    max_size: usize,
    chosen: Vec<usize>,
    states: Vec<(BitSet, BitSet, usize)>,
    cursor: usize,
}

impl<E: Entry> Iterator for BinaryEnumerator<'_, E> {
    type Item = BinaryQuasiMatrix<E>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let (used_v, used_g, size) = self.states.last().cloned().expect("base state");
            let found = (self.cursor..self.cycles.len()).find(|&i| {
                let c = &self.cycles[i];
                size + c.half <= self.max_size && !c.vertices.intersects(&used_v) && !c.groups.intersects(&used_g)
            });
            match found {
                Some(i) => {
                    let c = &self.cycles[i];
                    let (mut v, mut g) = (used_v, used_g);
                    v.union_with(&c.vertices);
                    g.union_with(&c.groups);
                    self.states.push((v, g, size + c.half));
                    self.chosen.push(i);
                    self.cursor = i + 1;
                    let positions: Vec<Pos> = self
                        .chosen
                        .iter()
                        .flat_map(|&k| self.cycles[k].positions.iter().copied())
                        .collect();
                    return Some(
                        BinaryQuasiMatrix::from_positions(self.matrix, &positions)
                            .expect("disjoint cycles form a binary quasi-matrix"),
                    );
                }
                None => {
                    let last = self.chosen.pop()?;
                    self.states.pop();
                    self.cursor = last + 1;
                }
            }
        }
    }
}

/// Options for [`binary_subquasi_enumerate_with`].
#[derive(Clone, Debug, Default)]
pub struct EnumOptions {
    /// Largest number of rows of an emitted binary quasi-matrix.
    pub max_size: usize,
    /// Optional group id per column; at most one column per group is used.
    pub column_groups: Option<Vec<usize>>,
}

/// Every binary subquasi-matrix with at most `max_size` rows, each once.
pub fn binary_subquasi_enumerate<E: Entry>(a: &QuasiMatrix<E>, max_size: usize) -> Result<BinaryEnumerator<'_, E>> {
    binary_subquasi_enumerate_with(
        a,
        &EnumOptions {
            max_size,
            column_groups: None,
        },
    )
}

pub fn binary_subquasi_enumerate_with<'a, E: Entry>(
    a: &'a QuasiMatrix<E>,
    opts: &EnumOptions,
) -> Result<BinaryEnumerator<'a, E>> {
    let effective = opts.max_size.min(a.n_rows).min(a.n_cols);
    if 2 * effective > MAX_BINARY_SPAN {
        return Err(Error::GuardExceeded {
            what: "binary subquasi-matrix rows+columns",
            limit: MAX_BINARY_SPAN,
            requested: 2 * effective,
        });
    }
    if let Some(g) = &opts.column_groups {
        if g.len() != a.n_cols {
            return Err(Error::LengthMismatch {
                expected: a.n_cols,
                got: g.len(),
            });
        }
    }
    let nv = a.n_rows + a.n_cols;
    let n_groups = opts
        .column_groups
        .as_ref()
        .and_then(|g| g.iter().max().map(|m| m + 1))
        .unwrap_or(0);
    let mut cycles = Vec::new();
    'cycles: for positions in simple_cycles(a, effective) {
        let mut vertices = BitSet::with_capacity(nv);
        let mut groups = BitSet::with_capacity(n_groups);
        for &(r, c) in &positions {
            vertices.insert(r);
            vertices.insert(a.n_rows + c);
        }
        if let Some(g) = &opts.column_groups {
            let cols: BTreeSet<usize> = positions.iter().map(|p| p.1).collect();
            for c in cols {
                if groups.contains(g[c]) {
                    continue 'cycles;
                }
                groups.insert(g[c]);
            }
        }
        let half = positions.len() / 2;
        cycles.push(CycleInfo {
            positions,
            vertices,
            groups,
            half,
        });
    }
    Ok(BinaryEnumerator {
        matrix: a,
        cycles,
        max_size: effective,
        chosen: Vec::new(),
        states: vec![(BitSet::with_capacity(nv), BitSet::with_capacity(n_groups), 0)],
        cursor: 0,
    })
}

/// Quasi-determinants of `b` as position pairs, one per nonzero binomial up to sign.
pub fn quasi_determinants_positioned<E: Entry>(b: &BinaryQuasiMatrix<E>) -> Vec<PositionedBinomial> {
    let matchings: Vec<(Vec<Pos>, Vec<Pos>)> = b
        .cycles()
        .iter()
        .map(|walk| {
            let even = walk.iter().step_by(2).copied().collect();
            let odd = walk.iter().skip(1).step_by(2).copied().collect();
            (even, odd)
        })
        .collect();
    let c = matchings.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << (c - 1)) {
        let mut plus = matchings[0].0.clone();
        let mut minus = matchings[0].1.clone();
        for (i, (m0, m1)) in matchings.iter().enumerate().skip(1) {
            if mask >> (i - 1) & 1 == 0 {
                plus.extend(m0);
                minus.extend(m1);
            } else {
                plus.extend(m1);
                minus.extend(m0);
            }
        }
        let pb = PositionedBinomial::new(plus, minus);
        let sym = binomial_from_entries(b.entries(), &pb);
        if sym.is_zero() {
            continue;
        }
        if seen.insert(sym.normalized()) {
            out.push(pb);
        }
    }
    out
}

fn binomial_from_entries<E: Entry>(entries: &BTreeMap<Pos, E>, pb: &PositionedBinomial) -> Binomial<E> {
    Binomial::new(
        pb.plus.iter().map(|p| entries[p].clone()).collect(),
        pb.minus.iter().map(|p| entries[p].clone()).collect(),
    )
}

/// Sign-normalized quasi-determinants of `b`.
pub fn quasi_determinants<E: Entry>(b: &BinaryQuasiMatrix<E>) -> Vec<Binomial<E>> {
    quasi_determinants_positioned(b)
        .iter()
        .map(|pb| binomial_from_entries(b.entries(), pb).normalized())
        .collect()
}

/// Binary quasi-minors of `a` as position pairs, deduplicated up to sign
/// on their symbols, in enumeration order.
pub fn ibin_generators_positioned<E: Entry>(a: &QuasiMatrix<E>, opts: &EnumOptions) -> Result<Vec<PositionedBinomial>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for b in binary_subquasi_enumerate_with(a, opts)? {
        for pb in quasi_determinants_positioned(&b) {
            if seen.insert(binomial_from_entries(b.entries(), &pb).normalized()) {
                out.push(pb);
            }
        }
    }
    Ok(out)
}

/// Generators of `I_bin(a)`, sign-normalized and deduplicated.
pub fn ibin_generators<E: Entry>(a: &QuasiMatrix<E>, max_size: usize) -> Result<Vec<Binomial<E>>> {
    let opts = EnumOptions {
        max_size,
        column_groups: None,
    };
    ibin_generators_positioned(a, &opts)?
        .iter()
        .map(|pb| pb.binomial(a).map(|b| b.normalized()))
        .collect()
}

/// One summand `multiplier * (minor.plus - minor.minus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertTerm {
    pub multiplier: Vec<Pos>,
    pub minor: PositionedBinomial,
}

/// `target = Σ multiplier_i * minor_i` over the entries of a quasi-matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinationCert {
    pub target: PositionedBinomial,
    pub terms: Vec<CertTerm>,
}

impl CombinationCert {
    /// Expands both sides as formal sums of entry products and compares.
    pub fn verify<E: Entry>(&self, a: &QuasiMatrix<E>) -> bool {
        let mut acc: HashMap<Vec<E>, i64> = HashMap::new();
        let mut add = |ps: &mut dyn Iterator<Item = &Pos>, k: i64| -> bool {
            let mut key = Vec::new();
            for p in ps {
                match a.get(*p) {
                    Some(e) => key.push(e.clone()),
                    None => return false,
                }
            }
            key.sort();
            *acc.entry(key).or_insert(0) += k;
            true
        };
        let mut ok = add(&mut self.target.plus.iter(), 1) && add(&mut self.target.minus.iter(), -1);
        for t in &self.terms {
            ok &= add(&mut t.multiplier.iter().chain(&t.minor.plus), -1);
            ok &= add(&mut t.multiplier.iter().chain(&t.minor.minus), 1);
        }
        ok && acc.values().all(|&k| k == 0)
    }

    pub fn to_polys<C: Coefficient>(
        &self,
        a: &QuasiMatrix<Var>,
        universe: &Arc<VarUniverse>,
    ) -> Vec<(Poly<C>, Poly<C>)> {
        let mono = |ps: &[Pos]| Mono::product(ps.iter().map(|p| a.get(*p).copied().expect("entry")));
        self.terms
            .iter()
            .map(|t| {
                (
                    Poly::monomial(universe, mono(&t.multiplier)),
                    Poly::binomial(universe, mono(&t.minor.plus), mono(&t.minor.minus)),
                )
            })
            .collect()
    }
}

/// Writes a binary quasi-minor of a full matrix as a combination of 2x2
/// minors, following the induction on the size.
pub fn rewrite_as_two_minors<E: Entry>(delta: &PositionedBinomial, a: &QuasiMatrix<E>) -> Result<CombinationCert> {
    delta.check(a)?;
    if !a.is_full() {
        return Err(Error::Malformed("matrix has empty positions".into()));
    }
    let mut terms = Vec::new();
    rewrite_rec(delta.plus.clone(), delta.minus.clone(), Vec::new(), &mut terms);
    let cert = CombinationCert {
        target: delta.clone(),
        terms,
    };
    debug_assert!(cert.verify(a));
    Ok(cert)
}

fn rewrite_rec(v: Vec<Pos>, w: Vec<Pos>, mult: Vec<Pos>, out: &mut Vec<CertTerm>) {
    if v.len() == 2 {
        out.push(CertTerm {
            multiplier: mult,
            minor: PositionedBinomial::new(v, w),
        });
        return;
    }
    // W1: the W entry in the leftmost column
    let w1 = *w.iter().min_by_key(|p| (p.1, p.0)).expect("nonempty");
    let v1 = *v.iter().find(|p| p.0 == w1.0).expect("matching row");
    let v2 = *v.iter().find(|p| p.1 == w1.1).expect("matching column");
    let u = (v2.0, v1.1);
    let rest_v: Vec<Pos> = v.iter().copied().filter(|&p| p != v1 && p != v2).collect();
    let mut m1 = mult.clone();
    m1.extend(&rest_v);
    out.push(CertTerm {
        multiplier: m1,
        minor: PositionedBinomial {
            plus: vec![v1, v2],
            minus: vec![u, w1],
        },
    });
    let mut m2 = mult;
    m2.push(w1);
    let rest_w: Vec<Pos> = w.iter().copied().filter(|&p| p != w1).collect();
    if rest_w.contains(&u) {
        m2.push(u);
        let w_next = rest_w.into_iter().filter(|&p| p != u).collect();
        rewrite_rec(rest_v, w_next, m2, out);
    } else {
        let mut v_next = rest_v;
        v_next.push(u);
        v_next.sort_unstable();
        rewrite_rec(v_next, rest_w, m2, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full3() -> QuasiMatrix<char> {
        QuasiMatrix::full(vec![vec!['a', 'b', 'c'], vec!['d', 'e', 'f'], vec!['g', 'h', 'i']]).unwrap()
    }

    fn sym(plus: &str, minus: &str) -> Binomial<char> {
        Binomial::new(plus.chars().collect(), minus.chars().collect()).normalized()
    }

    #[test]
    fn full_three_by_three_counts() {
        let a = full3();
        let all: Vec<_> = binary_subquasi_enumerate(&a, 3).unwrap().collect();
        assert_eq!(all.iter().filter(|b| b.size() == 3).count(), 6);
        assert_eq!(all.iter().filter(|b| b.size() == 2).count(), 9);
        assert!(all.iter().all(|b| BinaryQuasiMatrix::from_positions(&a, &b.positions()).is_ok()));
        let small: Vec<_> = binary_subquasi_enumerate(&a, 2).unwrap().collect();
        assert_eq!(small.len(), 9);
    }

    #[test]
    fn diagonal_has_no_binary_submatrix() {
        let a = QuasiMatrix::from_rows(vec![
            vec![Some('a'), None, None],
            vec![None, Some('b'), None],
            vec![None, None, Some('c')],
        ])
        .unwrap();
        assert_eq!(binary_subquasi_enumerate(&a, 3).unwrap().count(), 0);
    }

    #[test]
    fn three_by_three_quasi_matrix_example() {
        let a = QuasiMatrix::from_rows(vec![
            vec![Some('a'), Some('b'), None],
            vec![Some('c'), Some('d'), Some('e')],
            vec![Some('f'), None, Some('g')],
        ])
        .unwrap();
        let gens: BTreeSet<_> = ibin_generators(&a, 3).unwrap().into_iter().collect();
        let expected: BTreeSet<_> = [sym("adg", "bef"), sym("ad", "bc"), sym("cg", "fe")].into_iter().collect();
        assert_eq!(gens, expected);
    }

    #[test]
    fn two_block_example_gives_two_determinants() {
        let a = QuasiMatrix::from_rows(vec![
            vec![Some('a'), Some('b'), None, None],
            vec![Some('c'), Some('d'), None, None],
            vec![None, None, Some('e'), Some('f')],
            vec![None, None, Some('g'), Some('h')],
        ])
        .unwrap();
        let b = BinaryQuasiMatrix::validate(&a).unwrap();
        assert_eq!(b.cycles().len(), 2);
        let dets: BTreeSet<_> = quasi_determinants(&b).into_iter().collect();
        let expected: BTreeSet<_> = [sym("adeh", "bcgf"), sym("adgf", "bceh")].into_iter().collect();
        assert_eq!(dets, expected);
    }

    #[test]
    fn two_by_two_is_the_determinant() {
        let a = QuasiMatrix::full(vec![vec!['a', 'b'], vec!['c', 'd']]).unwrap();
        assert_eq!(ibin_generators(&a, 2).unwrap(), vec![sym("ad", "bc")]);
    }

    #[test]
    fn two_by_three_has_only_its_minors() {
        let a = QuasiMatrix::full(vec![vec!['a', 'b', 'c'], vec!['d', 'e', 'f']]).unwrap();
        let gens: BTreeSet<_> = ibin_generators(&a, 3).unwrap().into_iter().collect();
        let expected: BTreeSet<_> = [sym("ae", "bd"), sym("af", "cd"), sym("bf", "ce")].into_iter().collect();
        assert_eq!(gens, expected);
    }

    #[test]
    fn validator_rejects_non_binary() {
        let a = QuasiMatrix::from_rows(vec![vec![Some('a'), Some('b'), Some('c')], vec![Some('d'), Some('e'), None]]).unwrap();
        assert!(matches!(BinaryQuasiMatrix::validate(&a), Err(Error::NotBinary(_))));
    }

    #[test]
    fn normalization_is_idempotent_and_sign_blind() {
        let b = Binomial::new(vec!['d', 'a'], vec!['c', 'b']);
        assert_eq!(b.normalized(), b.normalized().normalized());
        assert_eq!(b.normalized(), b.negate().normalized());
        assert_eq!(b.normalized().plus, vec!['a', 'd']);
    }

    #[test]
    fn rewrite_three_by_three() {
        let a = full3();
        // aei - bfg
        let delta = PositionedBinomial::new(vec![(0, 0), (1, 1), (2, 2)], vec![(0, 1), (1, 2), (2, 0)]);
        let cert = rewrite_as_two_minors(&delta, &a).unwrap();
        assert!(cert.verify(&a));
        // e(ai - cg) + g(ce - bf)
        let shown: Vec<(Vec<char>, Binomial<char>)> = cert
            .terms
            .iter()
            .map(|t| {
                (
                    t.multiplier.iter().map(|p| *a.get(*p).unwrap()).collect(),
                    t.minor.binomial(&a).unwrap(),
                )
            })
            .collect();
        assert_eq!(shown[0].0, vec!['e']);
        assert_eq!(shown[0].1, Binomial::new(vec!['a', 'i'], vec!['c', 'g']));
        assert_eq!(shown[1].0, vec!['g']);
        assert_eq!(shown[1].1, Binomial::new(vec!['c', 'e'], vec!['b', 'f']));
    }

    #[test]
    fn rewrite_rejects_non_minors() {
        let a = full3();
        let bad = PositionedBinomial::new(vec![(0, 0), (1, 1)], vec![(0, 0), (1, 1)]);
        assert!(rewrite_as_two_minors(&bad, &a).is_err());
    }

    #[test]
    fn guard_is_enforced() {
        let rows: Vec<Vec<u32>> = (0..7).map(|r| (0..7).map(|c| r * 7 + c).collect()).collect();
        let a = QuasiMatrix::full(rows).unwrap();
        assert!(matches!(
            binary_subquasi_enumerate(&a, 7),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(binary_subquasi_enumerate(&a, 2).is_ok());
    }

    #[test]
    fn column_groups_limit_columns() {
        let a = full3();
        let opts = EnumOptions {
            max_size: 3,
            column_groups: Some(vec![0, 0, 1]),
        };
        for b in binary_subquasi_enumerate_with(&a, &opts).unwrap() {
            let cols: BTreeSet<usize> = b.positions().iter().map(|p| p.1).collect();
            assert!(!(cols.contains(&0) && cols.contains(&1)));
        }
    }

    #[test]
    fn render_leaves_blanks() {
        let a = QuasiMatrix::from_rows(vec![vec![Some("a"), None], vec![None, Some("bb")]]).unwrap();
        assert_eq!(a.render(|s| s.to_string()), "[ a     ]\n[    bb ]\n");
    }
}
