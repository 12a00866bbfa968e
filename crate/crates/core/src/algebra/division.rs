use num_traits::Zero;

use super::{AlgebraError, Monomial, Polynomial, Rational, TermOrder};

/// Result of multivariate division: `f = Σ quotients[i]·divisors[i] + remainder`.
#[derive(Debug, Clone, PartialEq)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

/// Multivariate division with remainder.
///
/// At each step the leading term of the running dividend is cancelled by the
/// first divisor whose leading monomial divides it; otherwise it moves to the
/// remainder. No remainder monomial is divisible by any divisor's leading
/// monomial.
pub fn divide_reduce(
    f: &Polynomial,
    divisors: &[Polynomial],
    order: &TermOrder,
) -> Result<Division, AlgebraError> {
    check_divisors(f, divisors)?;
    let leads = leads_of(divisors, order);
    let mut quotients: Vec<Polynomial> = divisors
        .iter()
        .map(|_| Polynomial::zero(f.var_table().clone()))
        .collect();
    let remainder = run(f, divisors, &leads, order, Some(&mut quotients));
    Ok(Division {
        quotients,
        remainder,
    })
}

/// Remainder of [`divide_reduce`] without tracking quotients.
pub fn reduce(
    f: &Polynomial,
    divisors: &[Polynomial],
    order: &TermOrder,
) -> Result<Polynomial, AlgebraError> {
    check_divisors(f, divisors)?;
    let leads = leads_of(divisors, order);
    Ok(run(f, divisors, &leads, order, None))
}

fn check_divisors(f: &Polynomial, divisors: &[Polynomial]) -> Result<(), AlgebraError> {
    for d in divisors {
        if d.is_zero() {
            return Err(AlgebraError::ZeroDivisor);
        }
        if d.var_table() != f.var_table() {
            return Err(AlgebraError::VarTableMismatch);
        }
    }
    Ok(())
}

pub(crate) fn leads_of(divisors: &[Polynomial], order: &TermOrder) -> Vec<(Monomial, Rational)> {
    divisors
        .iter()
        .map(|d| {
            let (m, c) = d.leading_term(order).unwrap();
            (m.clone(), c.clone())
        })
        .collect()
}

pub(crate) fn run(
    f: &Polynomial,
    divisors: &[Polynomial],
    leads: &[(Monomial, Rational)],
    order: &TermOrder,
    mut quotients: Option<&mut Vec<Polynomial>>,
) -> Polynomial {
    let mut p = f.clone();
    let mut remainder = Polynomial::zero(f.var_table().clone());
    while let Some((lm, lc)) = p.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        let hit = leads.iter().position(|(dm, _)| dm.divides(&lm));
        match hit {
            Some(i) => {
                let (dm, dc) = &leads[i];
                let shift = lm.div(dm).unwrap();
                let c = &lc / dc;
                if let Some(q) = quotients.as_deref_mut() {
                    q[i].add_term(shift.clone(), c.clone());
                }
                p.sub_scaled(&c, &shift, &divisors[i]);
                // exact cancellation of the leading term
                debug_assert!(p.coefficient(&lm).is_zero());
            }
            None => {
                let c = p.remove_term(&lm).unwrap();
                remainder.add_term(lm, c);
            }
        }
    }
    remainder
}

/// `S(f, g) = (L/lt(f))·f − (L/lt(g))·g` with `L` the lcm of the leading monomials.
pub fn s_polynomial(
    f: &Polynomial,
    g: &Polynomial,
    order: &TermOrder,
) -> Result<Polynomial, AlgebraError> {
    if f.is_zero() || g.is_zero() {
        return Err(AlgebraError::ZeroInput);
    }
    if f.var_table() != g.var_table() {
        return Err(AlgebraError::VarTableMismatch);
    }
    let (fm, fc) = f.leading_term(order).unwrap();
    let (gm, gc) = g.leading_term(order).unwrap();
    let l = fm.lcm(gm);
    let mut s = f.mul_monomial(&l.div(fm).unwrap()).scale(&fc.recip());
    s.sub_scaled(&gc.recip(), &l.div(gm).unwrap(), g);
    Ok(s)
}
