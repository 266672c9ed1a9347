//! Defining equations of multi-Rees algebras of ideals generated by
//! subsets of a fixed sequence, built from binary quasi-minors, with
//! Groebner-basis and graded-kernel verification.

pub mod coeff;
pub mod error;
pub mod grobner;
pub mod oracle;
pub mod poly;
pub mod quasimat;
pub mod rees;
pub mod sseq;

pub use coeff::{Coefficient, Domain};
pub use error::{Error, Result};
pub use poly::{parse_poly, Block, Mono, MonomialOrder, OrderKind, Poly, TKey, Var, VarUniverse};

use num_bigint::BigInt;
use num_rational::BigRational;

pub type PolyZ = Poly<BigInt>;
pub type PolyQ = Poly<BigRational>;
