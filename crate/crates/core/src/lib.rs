//! Products of formal power series defined by product rules, the automata
//! that realize them, and decision procedures for zeroness, equivalence and
//! commutativity.

pub mod document;
pub mod error;
pub mod limits;
pub mod polyalg;
pub mod polyauto;
pub mod rules;
pub mod series;
pub mod termauto;

pub use document::Document;
pub use error::{Error, Result};
pub use limits::Limits;
pub use polyalg::{GroebnerBasis, MonomialOrder, Poly, Rational};
pub use polyauto::PolyAutomaton;
pub use rules::ProductRule;
pub use termauto::{Term, TermAutomaton, Word};
