use std::cmp::Ordering;
use std::sync::Arc;

use super::{Monomial, VarTable};

/// Block-lexicographic term order over a [`VarTable`].
///
/// Monomials are compared block by block, earliest block first; inside a
/// block the comparison is lexicographic by declaration position. Any
/// monomial that involves a variable of an earlier block therefore dominates
/// every monomial free of that block, which is what makes the order an
/// elimination order for each prefix of blocks.
///
/// Blocks are contiguous, so the order coincides with plain lex by table
/// position, which is also `Monomial`'s `Ord`. Polynomials rely on this to
/// keep their terms sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermOrder {
    table: Arc<VarTable>,
}

impl TermOrder {
    pub fn block_lex(table: Arc<VarTable>) -> Self {
        TermOrder { table }
    }

    pub fn var_table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), self.table.len());
        debug_assert_eq!(b.nvars(), self.table.len());
        for block in self.table.blocks() {
            for v in block {
                match a.exp(v).cmp(&b.exp(v)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
        }
        Ordering::Equal
    }
}
