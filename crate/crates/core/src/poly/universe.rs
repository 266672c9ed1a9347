use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a variable inside a [`VarUniverse`].
///
/// Ids are allocated block by block (s, then T, then t, then x), so the
/// natural order of ids is also the global symbol order used for sign
/// normalization: every s-symbol sorts before every T-symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    /// Formal symbols of the fixed sequence; always part of coefficients.
    S,
    /// Presentation variables `T[l;j]`; the block monomial orders act on.
    BigT,
    /// Grading symbols `t_l` of the multi-Rees algebra.
    SmallT,
    /// Ambient ring variables (concrete mode only); part of coefficients.
    X,
}

impl Block {
    /// Blocks whose variables live in the coefficient ring.
    pub fn is_coefficient(self) -> bool {
        matches!(self, Block::S | Block::X)
    }
}

/// Index of a presentation variable `T[l;j_{n-1},...,j_1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TKey {
    /// 1-based ideal index.
    pub l: usize,
    /// The tuple in display order `(j_{n-1}, ..., j_1)`.
    pub j: Vec<u32>,
}

impl TKey {
    pub fn name(&self) -> String {
        let parts: Vec<String> = self.j.iter().map(u32::to_string).collect();
        format!("T[{};{}]", self.l, parts.join(","))
    }
}

/// The symbols a polynomial may mention, split into blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarUniverse {
    names: Vec<String>,
    blocks: Vec<Block>,
    t_keys: Vec<Option<TKey>>,
    s_vars: Vec<Var>,
    big_t_vars: Vec<Var>,
    small_t_vars: Vec<Var>,
    x_vars: Vec<Var>,
    by_name: HashMap<String, Var>,
    by_key: HashMap<TKey, Var>,
}

#[derive(Default)]
pub struct UniverseBuilder {
    s: Vec<String>,
    big_t: Vec<(String, Option<TKey>)>,
    small_t: Vec<String>,
    x: Vec<String>,
}

impl UniverseBuilder {
    pub fn s_vars<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.s.extend(names.into_iter().map(Into::into));
        self
    }

    /// Plain T-block variables without an `(l, j)` index.
    pub fn big_t_vars<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.big_t
            .extend(names.into_iter().map(|n| (n.into(), None)));
        self
    }

    /// Indexed T-block variables, named `T[l;j]`.
    pub fn big_t_keys<I>(mut self, keys: I) -> Self
    where
        I: IntoIterator<Item = TKey>,
    {
        self.big_t
            .extend(keys.into_iter().map(|k| (k.name(), Some(k))));
        self
    }

    pub fn small_t_vars<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.small_t.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn x_vars<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.x.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn build(self) -> Result<Arc<VarUniverse>> {
        let mut u = VarUniverse {
            names: Vec::new(),
            blocks: Vec::new(),
            t_keys: Vec::new(),
            s_vars: Vec::new(),
            big_t_vars: Vec::new(),
            small_t_vars: Vec::new(),
            x_vars: Vec::new(),
            by_name: HashMap::new(),
            by_key: HashMap::new(),
        };
        for name in self.s {
            let v = u.push(name, Block::S, None)?;
            u.s_vars.push(v);
        }
        for (name, key) in self.big_t {
            let v = u.push(name, Block::BigT, key)?;
            u.big_t_vars.push(v);
        }
        for name in self.small_t {
            let v = u.push(name, Block::SmallT, None)?;
            u.small_t_vars.push(v);
        }
        for name in self.x {
            let v = u.push(name, Block::X, None)?;
            u.x_vars.push(v);
        }
        Ok(Arc::new(u))
    }
}

impl VarUniverse {
    pub fn builder() -> UniverseBuilder {
        UniverseBuilder::default()
    }

    fn push(&mut self, name: String, block: Block, key: Option<TKey>) -> Result<Var> {
        if name.is_empty() {
            return Err(Error::InvalidSpec("empty variable name".into()));
        }
        if self.by_name.contains_key(&name) {
            return Err(Error::InvalidSpec(format!("duplicate variable name `{name}`")));
        }
        let v = Var(self.names.len() as u32);
        if let Some(k) = &key {
            if self.by_key.insert(k.clone(), v).is_some() {
                return Err(Error::InvalidSpec(format!("duplicate T index {}", k.name())));
            }
        }
        self.by_name.insert(name.clone(), v);
        self.names.push(name);
        self.blocks.push(block);
        self.t_keys.push(key);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v.index()]
    }

    pub fn block(&self, v: Var) -> Block {
        self.blocks[v.index()]
    }

    pub fn t_key(&self, v: Var) -> Option<&TKey> {
        self.t_keys[v.index()].as_ref()
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.by_name.get(name).copied()
    }

    pub fn lookup_key(&self, key: &TKey) -> Option<Var> {
        self.by_key.get(key).copied()
    }

    pub fn s_vars(&self) -> &[Var] {
        &self.s_vars
    }

    pub fn big_t_vars(&self) -> &[Var] {
        &self.big_t_vars
    }

    pub fn small_t_vars(&self) -> &[Var] {
        &self.small_t_vars
    }

    pub fn x_vars(&self) -> &[Var] {
        &self.x_vars
    }

    /// Position of an s-variable in the sequence (0-based).
    pub fn s_index(&self, v: Var) -> Option<usize> {
        match self.block(v) {
            Block::S => Some(v.index() - self.s_vars[0].index()),
            _ => None,
        }
    }

    pub fn small_t_index(&self, v: Var) -> Option<usize> {
        match self.block(v) {
            Block::SmallT => Some(v.index() - self.small_t_vars[0].index()),
            _ => None,
        }
    }

    pub fn x_index(&self, v: Var) -> Option<usize> {
        match self.block(v) {
            Block::X => Some(v.index() - self.x_vars[0].index()),
            _ => None,
        }
    }
}

impl fmt::Display for VarUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_follow_block_order() {
        let u = VarUniverse::builder()
            .x_vars(["x"])
            .small_t_vars(["t1"])
            .big_t_keys([TKey { l: 1, j: vec![1, 0] }])
            .s_vars(["s1", "s2"])
            .build()
            .unwrap();
        let names: Vec<&str> = (0..u.len() as u32).map(|i| u.name(Var(i))).collect();
        assert_eq!(names, ["s1", "s2", "T[1;1,0]", "t1", "x"]);
        assert_eq!(u.s_index(Var(1)), Some(1));
        assert_eq!(u.block(Var(2)), Block::BigT);
        assert_eq!(u.lookup("T[1;1,0]"), Some(Var(2)));
    }

    #[test]
    fn duplicate_names_and_keys_are_rejected() {
        assert!(VarUniverse::builder().s_vars(["a", "a"]).build().is_err());
        let k = TKey { l: 1, j: vec![0] };
        assert!(VarUniverse::builder()
            .big_t_keys([k.clone(), k])
            .build()
            .is_err());
    }
}
