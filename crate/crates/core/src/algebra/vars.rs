use std::collections::HashMap;
use std::ops::Range;

use super::AlgebraError;

/// Ordered variable names, partitioned into consecutive blocks.
///
/// Block `0` is ranked highest by the term order. Blocks may be empty, so
/// callers can rely on fixed block positions (for example "eliminate / keep /
/// weights") even when one of the groups has no members.
#[derive(Debug, Clone)]
pub struct VarTable {
    names: Vec<String>,
    block_ends: Vec<usize>,
    index: HashMap<String, usize>,
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.block_ends == other.block_ends
    }
}

impl Eq for VarTable {}

impl VarTable {
    pub fn new<I, B, S>(blocks: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = B>,
        B: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names = Vec::new();
        let mut block_ends = Vec::new();
        let mut index = HashMap::new();
        for block in blocks {
            for name in block {
                let name: String = name.into();
                if !is_identifier(&name) {
                    return Err(AlgebraError::InvalidVarTable(format!(
                        "`{name}` is not a valid variable name"
                    )));
                }
                if index.insert(name.clone(), names.len()).is_some() {
                    return Err(AlgebraError::InvalidVarTable(format!(
                        "variable `{name}` declared twice"
                    )));
                }
                names.push(name);
            }
            block_ends.push(names.len());
        }
        Ok(VarTable {
            names,
            block_ends,
            index,
        })
    }

    /// A single-block table: plain lexicographic order by position.
    pub fn lex<I, S>(names: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new([names])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn num_blocks(&self) -> usize {
        self.block_ends.len()
    }

    /// Variable positions of block `b`.
    pub fn block(&self, b: usize) -> Range<usize> {
        let start = if b == 0 { 0 } else { self.block_ends[b - 1] };
        start..self.block_ends[b]
    }

    pub fn blocks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.num_blocks()).map(|b| self.block(b))
    }

    pub fn block_of(&self, var: usize) -> usize {
        self.block_ends
            .iter()
            .position(|&end| var < end)
            .expect("variable index out of range")
    }

    /// A one-block table holding the variables of blocks `from..` in order.
    pub fn tail_table(&self, from: usize) -> VarTable {
        let start = if from == 0 {
            0
        } else {
            self.block_ends[from - 1]
        };
        VarTable::lex(self.names[start..].iter().cloned()).expect("names are already validated")
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
