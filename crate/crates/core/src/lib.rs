//! Exact combinatorics of multi-dendriform algebras and their Dias duals.
//!
//! The crate works at three levels that keep each other honest:
//!
//! * **Words** — shuffle and shifted-shuffle products on words of positive
//!   integers, the sylvester congruence on `m`-permutations, and the
//!   `(m+1)`-ary tree bijection ([`words`], [`sylvester`], [`ktrees`]).
//! * **Operators** — the algebra on `m`-permutations whose product splits
//!   into `m+1` operations along right-to-left minima ([`mfqsym`]), free
//!   operator trees rewritten to pattern-avoiding normal forms
//!   ([`dendriform`]), and the dual monomial rewriting system ([`dias`]).
//! * **Series** — truncated power series with exact rational coefficients
//!   used to certify dimension counts and the compositional inversion
//!   identity ([`series`]).
//!
//! Everything is exact: coefficients are arbitrary-precision integers,
//! series coefficients are rationals, and every check either passes
//! bit-for-bit or reports a concrete counterexample.

pub mod dendriform;
pub mod dias;
pub mod ktrees;
pub mod lincomb;
pub mod mfqsym;
pub mod relations;
pub mod series;
pub mod sylvester;
pub mod words;

pub use lincomb::LinComb;
pub use words::Word;
