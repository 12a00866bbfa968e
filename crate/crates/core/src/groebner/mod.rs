//! Reduced Gröbner bases by Buchberger's algorithm, elimination ideals and
//! ideal membership.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;

use thiserror::Error;

mod intpoly;

use crate::algebra::{self, AlgebraError, Monomial, Polynomial, TermOrder};
use intpoly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("zero ideal: every generator is zero")]
    ZeroIdeal,
    #[error("variables to keep must be a union of trailing blocks of the order")]
    NotBlockAligned,
    #[error("computation cancelled")]
    Cancelled,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Cooperative cancellation flag, checked between S-pair reductions.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, AtomicOrdering::SeqCst);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(AtomicOrdering::SeqCst)
    }
}

/// Reduced Gröbner basis: monic, inter-reduced generators sorted ascending by
/// leading monomial.
#[derive(Debug, Clone, PartialEq)]
pub struct GroebnerBasis {
    generators: Vec<Polynomial>,
    order: TermOrder,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Normal form of `f` modulo the basis.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial, AlgebraError> {
        algebra::reduce(f, &self.generators, &self.order)
    }

    /// One generator per line, in basis order.
    pub fn to_text(&self) -> String {
        self.generators.iter().map(|g| format!("{g}\n")).collect()
    }
}

/// Buchberger's algorithm. See [`buchberger_with_cancel`].
pub fn buchberger(
    generators: &[Polynomial],
    order: &TermOrder,
) -> Result<GroebnerBasis, GroebnerError> {
    buchberger_with_cancel(generators, order, &CancelToken::new())
}

struct Pair {
    lcm: Monomial,
    i: usize,
    j: usize,
}

/// Computes the reduced Gröbner basis of the ideal generated by `generators`.
///
/// Pairs are processed by the normal strategy (smallest lcm of leading
/// monomials first, ties by index). Pairs with coprime leading monomials, and
/// pairs covered by Buchberger's chain criterion, are skipped.
pub fn buchberger_with_cancel(
    generators: &[Polynomial],
    order: &TermOrder,
    cancel: &CancelToken,
) -> Result<GroebnerBasis, GroebnerError> {
    let table = order.var_table().clone();
    let mut basis: Vec<IntPoly> = Vec::new();
    for g in generators {
        if g.var_table() != &table {
            return Err(AlgebraError::VarTableMismatch.into());
        }
        if !g.is_zero() {
            basis.push(IntPoly::from_poly(g));
        }
    }
    if basis.is_empty() {
        return Err(GroebnerError::ZeroIdeal);
    }

    let mut leads: Vec<Monomial> = basis.iter().map(|g| g.lead().unwrap().0.clone()).collect();
    let mut pending: Vec<Pair> = Vec::new();
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.push(Pair {
                lcm: leads[i].lcm(&leads[j]),
                i,
                j,
            });
            pending_set.insert((i, j));
        }
    }

    while let Some(pos) = select_pair(&pending, order) {
        let Pair { lcm, i, j } = pending.swap_remove(pos);
        pending_set.remove(&(i, j));

        if leads[i].is_coprime(&leads[j]) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && leads[k].divides(&lcm)
                && !pending_set.contains(&(i.min(k), i.max(k)))
                && !pending_set.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        if cancel.is_cancelled() {
            return Err(GroebnerError::Cancelled);
        }

        let s = IntPoly::s_poly(&basis[i], &basis[j]);
        let divisors: Vec<&IntPoly> = basis.iter().collect();
        let r = s.reduce(&divisors);
        if r.is_zero() {
            continue;
        }
        let lm = r.lead().unwrap().0.clone();
        let n = basis.len();
        for (k, lead) in leads.iter().enumerate() {
            pending.push(Pair {
                lcm: lead.lcm(&lm),
                i: k,
                j: n,
            });
            pending_set.insert((k, n));
        }
        basis.push(r);
        leads.push(lm);
    }

    Ok(GroebnerBasis {
        generators: interreduce(basis, leads, order),
        order: order.clone(),
    })
}

fn select_pair(pending: &[Pair], order: &TermOrder) -> Option<usize> {
    (0..pending.len()).min_by(|&a, &b| {
        let (p, q) = (&pending[a], &pending[b]);
        order
            .compare(&p.lcm, &q.lcm)
            .then_with(|| (p.j, p.i).cmp(&(q.j, q.i)))
    })
}

fn interreduce(basis: Vec<IntPoly>, leads: Vec<Monomial>, order: &TermOrder) -> Vec<Polynomial> {
    // minimal basis: drop anything whose leading monomial is a multiple of
    // another kept one (equal leads: keep the earliest)
    let keep: Vec<usize> = (0..basis.len())
        .filter(|&g| {
            !(0..basis.len())
                .any(|h| h != g && leads[h].divides(&leads[g]) && (leads[h] != leads[g] || h < g))
        })
        .collect();

    let mut reduced: Vec<Polynomial> = keep
        .iter()
        .map(|&g| {
            let others: Vec<&IntPoly> = keep
                .iter()
                .filter(|&&h| h != g)
                .map(|&h| &basis[h])
                .collect();
            basis[g].reduce(&others).to_monic(order.var_table())
        })
        .collect();
    reduced.sort_by(|a, b| {
        order.compare(
            a.leading_monomial(order).unwrap(),
            b.leading_monomial(order).unwrap(),
        )
    });
    reduced
}

/// Basis elements involving only the variables in `keep`.
///
/// `keep` must be exactly the variables of some suffix of the order's blocks;
/// for such a set the result is a Gröbner basis of the elimination ideal.
pub fn elimination_ideal(
    basis: &GroebnerBasis,
    keep: &[usize],
) -> Result<Vec<Polynomial>, GroebnerError> {
    let table = basis.order.var_table();
    let keep_set: HashSet<usize> = keep.iter().copied().collect();
    let aligned = (0..=table.num_blocks()).any(|b| {
        let start = if b == table.num_blocks() {
            table.len()
        } else {
            table.block(b).start
        };
        keep_set.len() == table.len() - start && (start..table.len()).all(|v| keep_set.contains(&v))
    });
    if !aligned {
        return Err(GroebnerError::NotBlockAligned);
    }
    Ok(basis
        .generators
        .iter()
        .filter(|g| (0..table.len()).all(|v| keep_set.contains(&v) || !g.involves(v)))
        .cloned()
        .collect())
}

/// Whether `f` reduces to zero modulo the basis.
pub fn ideal_membership(f: &Polynomial, basis: &GroebnerBasis) -> Result<bool, AlgebraError> {
    Ok(basis.normal_form(f)?.is_zero())
}

/// Checks every S-polynomial of the basis reduces to zero.
pub fn satisfies_buchberger_criterion(basis: &GroebnerBasis) -> bool {
    let g = &basis.generators;
    (0..g.len()).all(|j| {
        (0..j).all(|i| {
            let s = algebra::s_polynomial(&g[i], &g[j], &basis.order).unwrap();
            basis.normal_form(&s).unwrap().is_zero()
        })
    })
}
