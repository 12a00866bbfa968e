//! Growth series of languages defined by weighted context-free grammars.
//!
//! A grammar is translated into a polynomial system (one equation per
//! nonterminal), the auxiliary unknowns are eliminated with a Gröbner basis
//! under a block order, and the resulting functional equation for the start
//! symbol is turned into a closed form and a power series. A brute-force
//! enumerator provides independent word counts for cross-checking.

pub mod algebra;
pub mod cli;
pub mod corpus;
pub mod grammar;
pub mod groebner;
pub mod oracle;
pub mod solve;
