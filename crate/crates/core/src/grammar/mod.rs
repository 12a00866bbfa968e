//! Weighted context-free grammars: the text format, well-posedness checks and
//! the translation into a polynomial system.
//!
//! A terminal contributes its weight monomial, a nonterminal its unknown,
//! concatenation multiplies and alternation adds; `eps` contributes `1`.

mod parse;
mod system;
mod validate;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Monomial, Polynomial, VarTable};

pub use parse::{parse_grammar, ParseError, ParseErrorKind};
pub use system::{to_poly_system, PolySystem};
pub use validate::{validate, Diagnostic, DiagnosticKind, Severity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Terminal(usize),
    Nonterminal(usize),
}

/// One right-hand side. An empty symbol list is the `eps` alternative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alternative {
    pub symbols: Vec<Symbol>,
}

impl Alternative {
    pub fn eps() -> Self {
        Alternative {
            symbols: Vec::new(),
        }
    }

    pub fn is_eps(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = usize> + '_ {
        self.symbols.iter().filter_map(|s| match s {
            Symbol::Nonterminal(n) => Some(*n),
            Symbol::Terminal(_) => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Terminal {
    pub name: String,
    /// Exponent vector over the grammar's weight variables.
    pub weight: Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    start: usize,
    weight_vars: Vec<String>,
    terminals: Vec<Terminal>,
    nonterminals: Vec<String>,
    productions: Vec<Vec<Alternative>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrammarError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("grammar is not well-posed: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

impl Grammar {
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn start_name(&self) -> &str {
        &self.nonterminals[self.start]
    }

    pub fn weight_vars(&self) -> &[String] {
        &self.weight_vars
    }

    pub fn terminals(&self) -> &[Terminal] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn alternatives(&self, nonterminal: usize) -> &[Alternative] {
        &self.productions[nonterminal]
    }

    pub fn nonterminal_index(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|n| n == name)
    }

    pub fn terminal_index(&self, name: &str) -> Option<usize> {
        self.terminals.iter().position(|t| t.name == name)
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        match s {
            Symbol::Terminal(t) => &self.terminals[t].name,
            Symbol::Nonterminal(n) => &self.nonterminals[n],
        }
    }

    /// Weight of each terminal after substituting `s^exps[j]` for weight variable `j`.
    pub fn substituted_weights(&self, exps: &[u32]) -> Vec<u64> {
        assert_eq!(exps.len(), self.weight_vars.len());
        self.terminals
            .iter()
            .map(|t| {
                t.weight
                    .exponents()
                    .iter()
                    .zip(exps)
                    .map(|(&e, &k)| u64::from(e) * u64::from(k))
                    .sum()
            })
            .collect()
    }

    /// Nonterminals that derive the empty word.
    pub fn nullable(&self) -> Vec<bool> {
        let mut nullable = vec![false; self.nonterminals.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for (n, alts) in self.productions.iter().enumerate() {
                if nullable[n] {
                    continue;
                }
                let derives_eps = alts.iter().any(|a| {
                    a.symbols
                        .iter()
                        .all(|s| matches!(s, Symbol::Nonterminal(m) if nullable[*m]))
                });
                if derives_eps {
                    nullable[n] = true;
                    changed = true;
                }
            }
        }
        nullable
    }

    /// Number of derivations of weight zero from each nonterminal: the constant
    /// term of its generating function. Derivations may use `eps` and terminals
    /// of weight `1`. Only meaningful when there is no zero-weight cycle.
    pub fn weightless_derivations(&self) -> Vec<BigInt> {
        let weightless = |s: &Symbol| match *s {
            Symbol::Terminal(t) => self.terminals[t].weight.is_one(),
            Symbol::Nonterminal(_) => true,
        };
        // without zero-weight cycles the dependencies form a DAG, so this
        // settles after at most one round per nonterminal
        let mut count = vec![BigInt::zero(); self.nonterminals.len()];
        for _ in 0..=self.nonterminals.len() {
            count = self
                .productions
                .iter()
                .map(|alts| {
                    alts.iter()
                        .filter(|a| a.symbols.iter().all(weightless))
                        .map(|a| {
                            a.nonterminals()
                                .fold(BigInt::one(), |acc, m| acc * &count[m])
                        })
                        .sum()
                })
                .collect();
        }
        count
    }

    pub(crate) fn weight_table(&self) -> Arc<VarTable> {
        Arc::new(VarTable::lex(self.weight_vars.iter().cloned()).expect("validated at parse time"))
    }

    fn weight_text(&self, weight: &Monomial) -> String {
        Polynomial::term(self.weight_table(), weight.clone(), crate::algebra::rat(1)).to_string()
    }
}

impl fmt::Display for Grammar {
    /// Renders the grammar in the input format; parsing the output yields an
    /// identical grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start {}", self.start_name())?;
        writeln!(f, "weights {}", self.weight_vars.join(" "))?;
        for t in &self.terminals {
            writeln!(
                f,
                "terminal {} weight {}",
                t.name,
                self.weight_text(&t.weight)
            )?;
        }
        for (n, alts) in self.productions.iter().enumerate() {
            let rendered: Vec<String> = alts
                .iter()
                .map(|a| {
                    if a.is_eps() {
                        "eps".to_string()
                    } else {
                        a.symbols
                            .iter()
                            .map(|&s| self.symbol_name(s))
                            .collect::<Vec<_>>()
                            .join(" ")
                    }
                })
                .collect();
            writeln!(
                f,
                "rule {} -> {}",
                self.nonterminals[n],
                rendered.join(" | ")
            )?;
        }
        Ok(())
    }
}
