use std::sync::Arc;

use num_traits::One;

use super::{validate, Grammar, GrammarError, Symbol};
use crate::algebra::{Monomial, Polynomial, Rational, TermOrder, VarTable};

/// One equation `U - rhs(U)` per nonterminal, over a table whose blocks are
/// (auxiliary nonterminals | start symbol | weight variables).
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    pub equations: Vec<Polynomial>,
    pub var_table: Arc<VarTable>,
    /// Table position of each nonterminal's unknown, in grammar order.
    pub unknowns: Vec<usize>,
    /// Grammar index of the start symbol.
    pub start: usize,
}

impl PolySystem {
    pub const ELIMINATION_BLOCK: usize = 0;
    pub const START_BLOCK: usize = 1;
    pub const WEIGHT_BLOCK: usize = 2;

    pub fn order(&self) -> TermOrder {
        TermOrder::block_lex(self.var_table.clone())
    }

    pub fn start_var(&self) -> usize {
        self.unknowns[self.start]
    }

    pub fn weight_vars(&self) -> std::ops::Range<usize> {
        self.var_table.block(Self::WEIGHT_BLOCK)
    }

    /// A one-block table of just the weight variables.
    pub fn weight_table(&self) -> Arc<VarTable> {
        Arc::new(self.var_table.tail_table(Self::WEIGHT_BLOCK))
    }

    /// Maps system variables into [`Self::weight_table`]; unknowns map to `None`.
    pub fn weight_map(&self) -> Vec<Option<usize>> {
        let w = self.weight_vars();
        (0..self.var_table.len())
            .map(|v| w.contains(&v).then(|| v - w.start))
            .collect()
    }
}

/// Chomsky–Schützenberger translation of a validated grammar.
pub fn to_poly_system(g: &Grammar) -> Result<PolySystem, GrammarError> {
    let errors: Vec<_> = validate(g).into_iter().filter(|d| d.is_error()).collect();
    if !errors.is_empty() {
        return Err(GrammarError::Invalid(errors));
    }

    let aux: Vec<String> = g
        .nonterminals
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != g.start)
        .map(|(_, n)| n.clone())
        .collect();
    let table = Arc::new(
        VarTable::new([aux, vec![g.start_name().to_string()], g.weight_vars.clone()])
            .expect("names are checked for clashes at parse time"),
    );
    let nvars = table.len();
    let unknowns: Vec<usize> = g
        .nonterminals
        .iter()
        .map(|n| table.index_of(n).unwrap())
        .collect();
    let weight_offset = table.block(PolySystem::WEIGHT_BLOCK).start;

    let equations = g
        .productions
        .iter()
        .enumerate()
        .map(|(u, alts)| {
            let mut eq = Polynomial::var_at(table.clone(), unknowns[u]);
            for alt in alts {
                let mut e = vec![0u32; nvars];
                for s in &alt.symbols {
                    match *s {
                        Symbol::Terminal(t) => {
                            for (j, &x) in g.terminals[t].weight.exponents().iter().enumerate() {
                                e[weight_offset + j] += x;
                            }
                        }
                        Symbol::Nonterminal(m) => e[unknowns[m]] += 1,
                    }
                }
                eq.add_term(Monomial::from_exponents(e), -Rational::one());
            }
            eq
        })
        .collect();

    Ok(PolySystem {
        equations,
        var_table: table,
        unknowns,
        start: g.start,
    })
}
