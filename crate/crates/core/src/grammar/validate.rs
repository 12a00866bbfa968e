use std::fmt;

use super::{Grammar, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// No finite derivation starts from this nonterminal.
    Unproductive,
    /// Not reachable from the start symbol.
    Unreachable,
    /// The listed nonterminals derive each other without producing any
    /// weight, so some words have infinitely many derivations.
    ZeroWeightCycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub symbols: Vec<String>,
}

impl Diagnostic {
    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        let what = match self.kind {
            DiagnosticKind::Unproductive => "unproductive",
            DiagnosticKind::Unreachable => "unreachable",
            DiagnosticKind::ZeroWeightCycle => "zero-weight cycle",
        };
        write!(f, "{sev}: {what}: {}", self.symbols.join(", "))
    }
}

/// Well-posedness checks.
///
/// Unproductive nonterminals and zero-weight cycles are errors, unreachable
/// nonterminals are warnings. Ambiguity is not checked here.
pub fn validate(g: &Grammar) -> Vec<Diagnostic> {
    let n = g.nonterminals.len();
    let mut out = Vec::new();

    let productive = fixpoint(g, |alt, set| {
        alt.symbols.iter().all(|s| match s {
            Symbol::Terminal(_) => true,
            Symbol::Nonterminal(m) => set[*m],
        })
    });
    for (i, ok) in productive.iter().enumerate() {
        if !ok {
            out.push(Diagnostic {
                severity: Severity::Error,
                kind: DiagnosticKind::Unproductive,
                symbols: vec![g.nonterminals[i].clone()],
            });
        }
    }

    let mut reachable = vec![false; n];
    let mut stack = vec![g.start];
    reachable[g.start] = true;
    while let Some(a) = stack.pop() {
        for alt in &g.productions[a] {
            for b in alt.nonterminals() {
                if !reachable[b] {
                    reachable[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    for (i, ok) in reachable.iter().enumerate() {
        if !ok {
            out.push(Diagnostic {
                severity: Severity::Warning,
                kind: DiagnosticKind::Unreachable,
                symbols: vec![g.nonterminals[i].clone()],
            });
        }
    }

    // nonterminals deriving some word of weight zero
    let zero_weight_term: Vec<bool> = g.terminals.iter().map(|t| t.weight.is_one()).collect();
    let zero = fixpoint(g, |alt, set| {
        alt.symbols.iter().all(|s| match s {
            Symbol::Terminal(t) => zero_weight_term[*t],
            Symbol::Nonterminal(m) => set[*m],
        })
    });
    // A -> B when some alternative of A is B surrounded only by symbols that
    // can contribute weight zero
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, alts) in g.productions.iter().enumerate() {
        for alt in alts {
            for (k, s) in alt.symbols.iter().enumerate() {
                let Symbol::Nonterminal(b) = *s else { continue };
                let rest_zero = alt.symbols.iter().enumerate().all(|(j, o)| {
                    j == k
                        || match o {
                            Symbol::Terminal(t) => zero_weight_term[*t],
                            Symbol::Nonterminal(m) => zero[*m],
                        }
                });
                if rest_zero && !edges[a].contains(&b) {
                    edges[a].push(b);
                }
            }
        }
    }
    for comp in cyclic_components(&edges) {
        out.push(Diagnostic {
            severity: Severity::Error,
            kind: DiagnosticKind::ZeroWeightCycle,
            symbols: comp.iter().map(|&i| g.nonterminals[i].clone()).collect(),
        });
    }
    out
}

fn fixpoint(g: &Grammar, holds: impl Fn(&super::Alternative, &[bool]) -> bool) -> Vec<bool> {
    let mut set = vec![false; g.nonterminals.len()];
    let mut changed = true;
    while changed {
        changed = false;
        for (a, alts) in g.productions.iter().enumerate() {
            if !set[a] && alts.iter().any(|alt| holds(alt, &set)) {
                set[a] = true;
                changed = true;
            }
        }
    }
    set
}

/// Strongly connected components that contain a cycle, each sorted, listed
/// by smallest member.
fn cyclic_components(edges: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = edges.len();
    let reach = |from: usize| {
        let mut seen = vec![false; n];
        let mut stack = edges[from].clone();
        while let Some(v) = stack.pop() {
            if !seen[v] {
                seen[v] = true;
                stack.extend(&edges[v]);
            }
        }
        seen
    };
    let closure: Vec<Vec<bool>> = (0..n).map(reach).collect();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for a in 0..n {
        if assigned[a] || !closure[a][a] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&b| closure[a][b] && closure[b][a]).collect();
        for &b in &comp {
            assigned[b] = true;
        }
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    fn diags(text: &str) -> Vec<String> {
        validate(&parse_grammar(text).unwrap())
            .iter()
            .map(|d| d.to_string())
            .collect()
    }

    #[test]
    fn balanced_pairs_are_clean() {
        assert!(diags("start S\nweights x y\nterminal a weight x\nterminal b weight y\nrule S -> eps | a S b\n").is_empty());
    }

    #[test]
    fn unproductive_is_an_error() {
        let d = diags("start A\nweights t\nterminal a\nrule A -> a A\n");
        assert_eq!(d, vec!["error: unproductive: A"]);
    }

    #[test]
    fn unreachable_is_a_warning() {
        let g = parse_grammar(
            "start S\nweights t\nterminal a\nterminal b\nrule S -> eps | a S\nrule B -> b\n",
        )
        .unwrap();
        let d = validate(&g);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);
        assert_eq!(d[0].to_string(), "warning: unreachable: B");
    }

    #[test]
    fn unit_cycles_are_errors() {
        let d = diags("start S\nweights t\nterminal a\nrule S -> eps | a | T\nrule T -> S\n");
        assert_eq!(d, vec!["error: zero-weight cycle: S, T"]);
        // a weight-1 terminal counts as weight zero
        let d = diags("start S\nweights t\nterminal e weight 1\nrule S -> eps | e S\n");
        assert_eq!(d, vec!["error: zero-weight cycle: S"]);
        // erasable neighbours close the cycle too
        let d = diags("start S\nweights t\nterminal a\nrule S -> eps | a | S S\n");
        assert_eq!(d, vec!["error: zero-weight cycle: S"]);
        // but weighted neighbours do not
        assert!(diags("start S\nweights t\nterminal a\nrule S -> eps | a S | S a\n").is_empty());
    }
}
