//! Integer-coefficient polynomials for the inner loop of Buchberger's
//! algorithm. Fraction-free reduction keeps coefficients integral, so the
//! loop does not pay for a gcd on every coefficient operation.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Monomial, Polynomial, Rational, VarTable};

/// `(a, b)` with `a > 0` and `a·lc = b·dc`, cheaply: the exact gcd is only
/// taken when it is free to find, coefficients are made primitive at the end.
fn cofactors(dc: &BigInt, lc: &BigInt) -> (BigInt, BigInt) {
    if dc.is_one() {
        (BigInt::one(), lc.clone())
    } else if dc.is_negative() {
        (-dc, -lc)
    } else {
        (dc.clone(), lc.clone())
    }
}

/// Terms are keyed by `Monomial`, whose `Ord` is the term order, so the
/// leading term is the last entry.
#[derive(Debug, Clone)]
pub(super) struct IntPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPoly {
    /// The primitive integer multiple of `p`.
    pub fn from_poly(p: &Polynomial) -> Self {
        let den = p
            .terms()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let terms = p
            .terms()
            .map(|(m, c)| (m.clone(), c.numer() * (&den / c.denom())))
            .collect();
        let mut out = IntPoly { terms };
        out.make_primitive();
        out
    }

    pub fn to_monic(&self, table: &Arc<VarTable>) -> Polynomial {
        let lc = self
            .lead()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigInt::one);
        Polynomial::from_terms(
            table.clone(),
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), Rational::new(c.clone(), lc.clone()))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.last_key_value()
    }

    /// Divides out the content and makes the leading coefficient positive.
    fn make_primitive(&mut self) {
        let mut content = BigInt::zero();
        for c in self.terms.values() {
            content = content.gcd(c);
            if content.is_one() {
                break;
            }
        }
        if self.lead().is_some_and(|(_, c)| c.is_negative()) {
            content = -content;
        }
        if !content.is_zero() && !content.is_one() {
            for c in self.terms.values_mut() {
                *c /= &content;
            }
        }
    }

    fn scale(&mut self, a: &BigInt) {
        if !a.is_one() {
            for c in self.terms.values_mut() {
                *c *= a;
            }
        }
    }

    /// `self -= b·shift·other`.
    fn sub_shifted(&mut self, b: &BigInt, shift: &Monomial, other: &IntPoly) {
        for (m, c) in &other.terms {
            match self.terms.entry(m.mul(shift)) {
                Entry::Vacant(e) => {
                    e.insert(-(b * c));
                }
                Entry::Occupied(mut e) => {
                    *e.get_mut() -= b * c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
    }

    /// A primitive multiple of the S-polynomial of `f` and `g`.
    pub fn s_poly(f: &IntPoly, g: &IntPoly) -> IntPoly {
        let (fm, fc) = f.lead().expect("nonzero");
        let (gm, gc) = g.lead().expect("nonzero");
        let l = fm.lcm(gm);
        let k = fc.gcd(gc);
        let mut s = IntPoly {
            terms: BTreeMap::new(),
        };
        s.sub_shifted(&-(gc / &k), &l.div(fm).unwrap(), f);
        s.sub_shifted(&(fc / &k), &l.div(gm).unwrap(), g);
        s.make_primitive();
        s
    }

    /// A primitive multiple of the fully reduced remainder of `self` modulo
    /// `divisors` (the first divisor whose leading monomial divides is used).
    pub fn reduce(&self, divisors: &[&IntPoly]) -> IntPoly {
        let mut p = self.clone();
        let mut r = IntPoly {
            terms: BTreeMap::new(),
        };
        let leads: Vec<(&Monomial, &BigInt)> = divisors.iter().map(|d| d.lead().unwrap()).collect();
        while let Some((lm, lc)) = p.lead().map(|(m, c)| (m.clone(), c.clone())) {
            match leads.iter().position(|(dm, _)| dm.divides(&lm)) {
                Some(i) => {
                    let (dm, dc) = leads[i];
                    let (a, b) = cofactors(dc, &lc);
                    p.scale(&a);
                    r.scale(&a);
                    p.sub_shifted(&b, &lm.div(dm).unwrap(), divisors[i]);
                }
                None => {
                    let c = p.terms.remove(&lm).unwrap();
                    r.terms.insert(lm, c);
                }
            }
        }
        r.make_primitive();
        r
    }
}
