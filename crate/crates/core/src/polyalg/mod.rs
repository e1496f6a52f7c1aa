//! Exact polynomial arithmetic over the fixed Cox-and-parameter variable set.

mod groebner;
mod parse;
mod poly;
mod var;

pub use groebner::{combine, ideal_member, GroebnerBasis, GroebnerError, Limits, Membership};
pub use parse::{parse, ParseError};
pub use poly::{rat, ratio, Bidegree, Homogeneity, Polynomial, Rational, WeightTable};
pub use var::{Monomial, Var, NVARS};

/// Parse, panicking on malformed input. For literals in code and tests.
pub fn poly(text: &str) -> Polynomial {
    parse(text).unwrap_or_else(|e| panic!("bad polynomial literal {text:?}: {e}"))
}
