//! Exact multivariate polynomials over a two-block variable universe.
//!
//! Coefficient-block symbols (the sequence `s` and the ambient `x`
//! variables) always live in coefficients; monomial orders only look at the
//! T- and t-blocks, so `leading` returns a polynomial coefficient.

mod mono;
mod order;
mod parse;
#[allow(clippy::module_inception)]
mod poly;
mod universe;

pub use mono::Mono;
pub use order::{MonomialOrder, OrderKind};
pub use parse::parse_poly;
pub use poly::Poly;
pub use universe::{Block, TKey, Var, VarUniverse};
