use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use super::{Alternative, Grammar, Symbol, Terminal};
use crate::algebra::{AlgebraError, Monomial, Polynomial, VarTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    NoStartSymbol,
    UnknownSymbol(String),
    DuplicateDeclaration(String),
    MalformedWeight(String),
    Syntax(String),
}

/// Parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.col)?;
        match &self.kind {
            ParseErrorKind::NoStartSymbol => f.write_str("no start symbol"),
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ParseErrorKind::DuplicateDeclaration(s) => write!(f, "duplicate declaration of `{s}`"),
            ParseErrorKind::MalformedWeight(s) => write!(f, "malformed weight monomial: {s}"),
            ParseErrorKind::Syntax(s) => f.write_str(s),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    col: usize,
}

impl Pos {
    fn err(self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            kind,
        }
    }
}

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    pos: Pos,
}

/// Splits a line on whitespace, with `|` always a token of its own.
fn tokenize(line: &str, lineno: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let col = |byte: usize| line[..byte].chars().count() + 1;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() || c == '|' {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    pos: Pos {
                        line: lineno,
                        col: col(s),
                    },
                });
            }
            if c == '|' {
                out.push(Token {
                    text: "|",
                    pos: Pos {
                        line: lineno,
                        col: col(i),
                    },
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            pos: Pos {
                line: lineno,
                col: col(s),
            },
        });
    }
    out
}

struct RawRule<'a> {
    lhs: Token<'a>,
    alts: Vec<Vec<Token<'a>>>,
}

/// Parses the line-oriented grammar format:
///
/// ```text
/// start    <nonterminal>
/// weights  <var> [<var> ...]
/// terminal <name> [weight <monomial>]
/// rule     <nonterminal> -> <alt> ( | <alt> )*
/// ```
///
/// Several `rule` lines for one nonterminal append alternatives, and a line
/// starting with `|` continues the rule above it. Symbols may be used before
/// their declaration.
pub fn parse_grammar(text: &str) -> Result<Grammar, ParseError> {
    let mut start: Option<Token> = None;
    let mut weights: Option<(Pos, Vec<String>)> = None;
    let mut terminals: Vec<(Token, Option<(Pos, String)>)> = Vec::new();
    let mut rules: Vec<RawRule> = Vec::new();
    let mut last_was_rule = false;

    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokenize(line, i + 1);
        let Some(head) = toks.first() else { continue };
        let rest = &toks[1..];
        if head.text != "rule" && head.text != "|" {
            last_was_rule = false;
        }
        match head.text {
            "start" => {
                if start.is_some() {
                    return Err(head
                        .pos
                        .err(ParseErrorKind::DuplicateDeclaration("start".into())));
                }
                match rest {
                    [name] => start = Some(name.clone()),
                    _ => return Err(head.pos.err(syntax("expected `start <nonterminal>`"))),
                }
            }
            "weights" => {
                if weights.is_some() {
                    return Err(head
                        .pos
                        .err(ParseErrorKind::DuplicateDeclaration("weights".into())));
                }
                if rest.is_empty() {
                    return Err(head
                        .pos
                        .err(syntax("expected at least one weight variable")));
                }
                let mut names = Vec::new();
                for t in rest {
                    if !crate::algebra::vars::is_identifier(t.text) {
                        return Err(t.pos.err(syntax(format!(
                            "`{}` is not a valid weight variable name",
                            t.text
                        ))));
                    }
                    if names.iter().any(|n| n == t.text) {
                        return Err(t
                            .pos
                            .err(ParseErrorKind::DuplicateDeclaration(t.text.into())));
                    }
                    names.push(t.text.to_string());
                }
                weights = Some((head.pos, names));
            }
            "terminal" => match rest {
                [name] => terminals.push((name.clone(), None)),
                [name, kw, w @ ..] if kw.text == "weight" && !w.is_empty() => {
                    let joined = w.iter().map(|t| t.text).collect::<Vec<_>>().join(" ");
                    terminals.push((name.clone(), Some((w[0].pos, joined))));
                }
                _ => {
                    return Err(head
                        .pos
                        .err(syntax("expected `terminal <name> [weight <monomial>]`")))
                }
            },
            "rule" | "|" => {
                let (lhs, arrow, body) = if head.text == "|" {
                    // continuation of the previous rule line
                    let Some(prev) = rules.last().filter(|_| last_was_rule) else {
                        return Err(head.pos.err(syntax("`|` continuation without a rule")));
                    };
                    (prev.lhs.clone(), head.clone(), &toks[..])
                } else {
                    let [lhs, arrow, body @ ..] = rest else {
                        return Err(head.pos.err(syntax("expected `rule <nonterminal> -> ...`")));
                    };
                    if arrow.text != "->" {
                        return Err(arrow.pos.err(syntax("expected `->`")));
                    }
                    (lhs.clone(), arrow.clone(), body)
                };
                let mut alts = vec![Vec::new()];
                if head.text == "|" {
                    alts.clear();
                }
                for t in body {
                    if t.text == "|" {
                        alts.push(Vec::new());
                    } else {
                        alts.last_mut().unwrap().push(t.clone());
                    }
                }
                for (k, alt) in alts.iter().enumerate() {
                    if alt.is_empty() {
                        let pos = body
                            .iter()
                            .filter(|t| t.text == "|")
                            .nth(k.saturating_sub(1))
                            .map_or(arrow.pos, |t| t.pos);
                        return Err(pos.err(syntax("empty alternative (write `eps`)")));
                    }
                    if alt.len() > 1 {
                        if let Some(e) = alt.iter().find(|t| t.text == "eps") {
                            return Err(e.pos.err(syntax("`eps` must stand alone")));
                        }
                    }
                }
                rules.push(RawRule { lhs, alts });
                last_was_rule = true;
                continue;
            }
            other => {
                return Err(head.pos.err(syntax(format!("unknown keyword `{other}`"))));
            }
        }
    }

    let Some(start) = start else {
        let line = text.lines().count().max(1);
        return Err(Pos { line, col: 1 }.err(ParseErrorKind::NoStartSymbol));
    };
    let Some((weights_pos, weight_vars)) = weights else {
        return Err(start.pos.err(syntax("missing `weights` declaration")));
    };
    let weight_table = Arc::new(
        VarTable::lex(weight_vars.iter().cloned())
            .map_err(|e| weights_pos.err(syntax(e.to_string())))?,
    );

    // nonterminals, in order of their first rule
    let mut nonterminals: Vec<String> = Vec::new();
    let mut nt_index: HashMap<&str, usize> = HashMap::new();
    for r in &rules {
        let name = r.lhs.text;
        if nt_index.contains_key(name) {
            continue;
        }
        if !crate::algebra::vars::is_identifier(name) || name == "eps" {
            return Err(r
                .lhs
                .pos
                .err(syntax(format!("`{name}` is not a valid nonterminal name"))));
        }
        if weight_vars.iter().any(|w| w == name) {
            return Err(r
                .lhs
                .pos
                .err(ParseErrorKind::DuplicateDeclaration(name.into())));
        }
        nt_index.insert(name, nonterminals.len());
        nonterminals.push(name.to_string());
    }

    let mut term_list: Vec<Terminal> = Vec::new();
    let mut term_index: HashMap<&str, usize> = HashMap::new();
    for (name, weight) in &terminals {
        if name.text == "eps" || name.text == "->" {
            return Err(name.pos.err(syntax(format!("`{}` is reserved", name.text))));
        }
        if term_index.contains_key(name.text) || nt_index.contains_key(name.text) {
            return Err(name
                .pos
                .err(ParseErrorKind::DuplicateDeclaration(name.text.into())));
        }
        let weight = match weight {
            None => Monomial::var(weight_vars.len(), 0, 1),
            Some((pos, text)) => parse_weight(&weight_table, text, *pos)?,
        };
        term_index.insert(name.text, term_list.len());
        term_list.push(Terminal {
            name: name.text.to_string(),
            weight,
        });
    }

    let start_idx = *nt_index.get(start.text).ok_or_else(|| {
        start
            .pos
            .err(ParseErrorKind::UnknownSymbol(start.text.into()))
    })?;

    let mut productions: Vec<Vec<Alternative>> = vec![Vec::new(); nonterminals.len()];
    for r in &rules {
        let lhs = nt_index[r.lhs.text];
        for alt in &r.alts {
            let symbols = if alt.len() == 1 && alt[0].text == "eps" {
                Vec::new()
            } else {
                alt.iter()
                    .map(|t| {
                        if let Some(&k) = term_index.get(t.text) {
                            Ok(Symbol::Terminal(k))
                        } else if let Some(&k) = nt_index.get(t.text) {
                            Ok(Symbol::Nonterminal(k))
                        } else {
                            Err(t.pos.err(ParseErrorKind::UnknownSymbol(t.text.into())))
                        }
                    })
                    .collect::<Result<_, _>>()?
            };
            productions[lhs].push(Alternative { symbols });
        }
    }

    Ok(Grammar {
        start: start_idx,
        weight_vars,
        terminals: term_list,
        nonterminals,
        productions,
    })
}

fn syntax(msg: impl Into<String>) -> ParseErrorKind {
    ParseErrorKind::Syntax(msg.into())
}

fn parse_weight(table: &Arc<VarTable>, text: &str, pos: Pos) -> Result<Monomial, ParseError> {
    let p = Polynomial::parse(table.clone(), text).map_err(|e| {
        let (col, msg) = match e {
            AlgebraError::Parse { col, msg } => (col, msg),
            other => (1, other.to_string()),
        };
        Pos {
            line: pos.line,
            col: pos.col + col - 1,
        }
        .err(ParseErrorKind::MalformedWeight(msg))
    })?;
    let mut terms = p.terms();
    match (terms.next(), terms.next()) {
        (Some((m, c)), None) if c.is_one() => Ok(m.clone()),
        _ => Err(pos.err(ParseErrorKind::MalformedWeight(format!(
            "`{text}` is not a single monomial with coefficient 1"
        )))),
    }
}
