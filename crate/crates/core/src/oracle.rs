//! Brute-force enumeration of a grammar's language by substituted weight.
//!
//! Sentential forms are expanded leftmost-first and processed in order of a
//! lower bound on the final weight of anything they can derive, so once the
//! forms of bound `w` are exhausted every word of weight `w` has been seen.
//! Word counts and derivation counts are kept separately; a gap between them
//! witnesses ambiguity.

use std::collections::HashSet;

use thiserror::Error;

use crate::grammar::{validate, Diagnostic, Grammar, Symbol};
use crate::solve::Substitution;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Counts per substituted degree `0..=bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightCounts {
    pub bound: usize,
    /// Distinct terminal strings per degree.
    pub words: Vec<u64>,
    /// Leftmost derivations per degree.
    pub derivations: Vec<u64>,
    /// Degrees `< complete_below` are exact. Equals `bound + 1` for a finished run.
    pub complete_below: usize,
}

impl WeightCounts {
    pub fn is_complete(&self) -> bool {
        self.complete_below > self.bound
    }

    /// First degree with more derivations than words, as
    /// `(degree, words, derivations)`.
    pub fn ambiguity_witness(&self) -> Option<(usize, u64, u64)> {
        (0..self.complete_below.min(self.bound + 1))
            .find(|&d| self.derivations[d] > self.words[d])
            .map(|d| (d, self.words[d], self.derivations[d]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("grammar is not well-posed: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("invalid substitution: {0}")]
    Substitution(String),
    #[error("terminal `{0}` has weight 0 under the substitution")]
    ZeroWeightTerminal(String),
    #[error("budget exceeded at weight {weight}")]
    BudgetExceeded {
        weight: usize,
        partial: WeightCounts,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    /// Maximum number of sentential forms expanded.
    pub node_budget: u64,
    /// Nonterminal to start from; the grammar's start symbol when `None`.
    pub from: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            from: None,
        }
    }
}

pub fn enumerate(g: &Grammar, subst: &Substitution, n: usize) -> Result<WeightCounts, OracleError> {
    enumerate_with(g, subst, n, EnumerateOptions::default())
}

/// First degree `≤ n` where the grammar is seen to be ambiguous.
pub fn ambiguity_witness(
    g: &Grammar,
    subst: &Substitution,
    n: usize,
) -> Result<Option<(usize, u64, u64)>, OracleError> {
    Ok(enumerate(g, subst, n)?.ambiguity_witness())
}

struct Form {
    word: Vec<u32>,
    /// Remaining symbols, leftmost last.
    rest: Vec<Symbol>,
}

pub fn enumerate_with(
    g: &Grammar,
    subst: &Substitution,
    n: usize,
    opts: EnumerateOptions,
) -> Result<WeightCounts, OracleError> {
    let errors: Vec<_> = validate(g)
        .into_iter()
        .filter(Diagnostic::is_error)
        .collect();
    if !errors.is_empty() {
        return Err(OracleError::Invalid(errors));
    }
    let exps = exponents(g, subst)?;
    let tw = g.substituted_weights(&exps);
    if let Some(t) = tw.iter().position(|&w| w == 0) {
        return Err(OracleError::ZeroWeightTerminal(
            g.terminals()[t].name.clone(),
        ));
    }
    let min_w = min_weights(g, &tw);
    let sym_w = |s: &Symbol| match *s {
        Symbol::Terminal(t) => tw[t],
        Symbol::Nonterminal(m) => min_w[m],
    };

    let mut counts = WeightCounts {
        bound: n,
        words: vec![0; n + 1],
        derivations: vec![0; n + 1],
        complete_below: 0,
    };
    let from = opts.from.unwrap_or(g.start());
    let mut buckets: Vec<Vec<Form>> = (0..=n).map(|_| Vec::new()).collect();
    if (min_w[from] as usize) <= n {
        buckets[min_w[from] as usize].push(Form {
            word: Vec::new(),
            rest: vec![Symbol::Nonterminal(from)],
        });
    }

    let mut nodes: u64 = 0;
    for w in 0..=n {
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        while let Some(mut form) = buckets[w].pop() {
            nodes += 1;
            if nodes > opts.node_budget {
                counts.complete_below = w;
                return Err(OracleError::BudgetExceeded {
                    weight: w,
                    partial: counts,
                });
            }
            while let Some(&Symbol::Terminal(t)) = form.rest.last() {
                form.word.push(t as u32);
                form.rest.pop();
            }
            let Some(Symbol::Nonterminal(a)) = form.rest.pop() else {
                debug_assert_eq!(
                    form.word.iter().map(|&t| tw[t as usize]).sum::<u64>(),
                    w as u64,
                    "word weight must be the sum of its terminal weights"
                );
                counts.derivations[w] += 1;
                seen.insert(form.word);
                continue;
            };
            let base = w as u64 - min_w[a];
            for alt in g.alternatives(a) {
                let lb = base + alt.symbols.iter().map(sym_w).sum::<u64>();
                if lb > n as u64 {
                    continue;
                }
                let mut rest = form.rest.clone();
                rest.extend(alt.symbols.iter().rev());
                buckets[lb as usize].push(Form {
                    word: form.word.clone(),
                    rest,
                });
            }
        }
        counts.words[w] = seen.len() as u64;
    }
    counts.complete_below = n + 1;
    Ok(counts)
}

fn exponents(g: &Grammar, subst: &Substitution) -> Result<Vec<u32>, OracleError> {
    for name in subst.keys() {
        if !g.weight_vars().contains(name) {
            return Err(OracleError::Substitution(format!(
                "`{name}` is not a weight variable"
            )));
        }
    }
    g.weight_vars()
        .iter()
        .map(|v| match subst.get(v) {
            None => Err(OracleError::Substitution(format!(
                "no exponent given for `{v}`"
            ))),
            Some(0) => Err(OracleError::Substitution(format!(
                "exponent for `{v}` must be at least 1"
            ))),
            Some(&k) => Ok(k),
        })
        .collect()
}

/// Least substituted weight of a word derivable from each nonterminal.
fn min_weights(g: &Grammar, tw: &[u64]) -> Vec<u64> {
    let n = g.nonterminals().len();
    let mut best = vec![u64::MAX; n];
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..n {
            for alt in g.alternatives(a) {
                let w = alt.symbols.iter().try_fold(0u64, |acc, s| {
                    let x = match *s {
                        Symbol::Terminal(t) => tw[t],
                        Symbol::Nonterminal(m) => best[m],
                    };
                    (x != u64::MAX).then(|| acc + x)
                });
                if let Some(w) = w {
                    if w < best[a] {
                        best[a] = w;
                        changed = true;
                    }
                }
            }
        }
    }
    best
}
