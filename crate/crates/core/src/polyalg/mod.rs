//! Exact rational arithmetic, sparse polynomials and the Gröbner kernel.

pub mod groebner;
pub mod parse;
pub mod poly;
pub mod rational;

pub use groebner::{
    buchberger, buchberger_with, ideal_equal, ideal_member, reduce, reduce_with_order,
    GroebnerBasis, MonomialOrder,
};
pub use parse::{parse_expr, Expr};
pub use poly::{var, Monomial, Poly, Var};
pub use rational::Rational;
