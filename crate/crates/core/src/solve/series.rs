use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{
    substitution_exponents, FunctionalEquation, RationalFunction, SolveError, Substitution,
};
use crate::algebra::{Rational, UniPoly};

/// Coefficients `c_0..=c_N` of a power series in one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesExpansion {
    pub variable: String,
    pub coefficients: Vec<Rational>,
}

impl SeriesExpansion {
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// The coefficients as integers, if they all are.
    pub fn integers(&self) -> Option<Vec<BigInt>> {
        self.coefficients
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

impl fmt::Display for SeriesExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Name of the series variable: the weight variable itself when there is
/// exactly one and it maps to exponent 1, otherwise `s`.
fn series_variable(subst: &Substitution) -> String {
    match subst.iter().collect::<Vec<_>>().as_slice() {
        [(name, 1)] => (*name).clone(),
        _ => "s".to_string(),
    }
}

/// Expands `p/q` after substituting `s^k` for each weight variable, using the
/// recurrence `q_0 c_n = p_n − Σ_{i≥1} q_i c_{n−i}`.
pub fn series_rational(
    rf: &RationalFunction,
    subst: &Substitution,
    n: usize,
) -> Result<SeriesExpansion, SolveError> {
    let exps = substitution_exponents(rf.denominator().var_table(), subst)?;
    let p = rf.numerator().substitute_powers(&exps);
    let q = rf.denominator().substitute_powers(&exps);
    let q0 = q.coeff(0);
    if q0.is_zero() {
        return Err(SolveError::NotPowerSeries);
    }
    let q0_inv = q0.recip();
    let mut c: Vec<Rational> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut acc = p.coeff(k);
        for (i, qi) in q.coeffs().iter().enumerate().skip(1).take(k) {
            acc -= qi * &c[k - i];
        }
        c.push(acc * &q0_inv);
    }
    Ok(SeriesExpansion {
        variable: series_variable(subst),
        coefficients: c,
    })
}

/// Expands the branch of `P(F, s) = 0` with `F(0) = c0` by Newton iteration,
/// doubling the precision each step.
pub fn series_algebraic(
    eq: &FunctionalEquation,
    c0: Rational,
    subst: &Substitution,
    n: usize,
) -> Result<SeriesExpansion, SolveError> {
    let exps = substitution_exponents(&eq.weight_table(), subst)?;
    let coeffs: Vec<UniPoly> = eq
        .coefficients()?
        .iter()
        .map(|a| a.substitute_powers(&exps))
        .collect();
    let deriv: Vec<UniPoly> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| a.scale(&Rational::from_integer(BigInt::from(k))))
        .collect();

    let at_origin = |poly: &[UniPoly]| {
        let mut acc = Rational::zero();
        for a in poly.iter().rev() {
            acc = acc * &c0 + a.coeff(0);
        }
        acc
    };
    if !at_origin(&coeffs).is_zero() {
        return Err(SolveError::WrongInitialValue);
    }
    if at_origin(&deriv).is_zero() {
        return Err(SolveError::DegenerateBranch);
    }

    let mut f = vec![c0];
    let mut prec = 1;
    while prec < n + 1 {
        prec = (2 * prec).min(n + 1);
        f.resize(prec, Rational::zero());
        let r = horner(&coeffs, &f, prec);
        let d = horner(&deriv, &f, prec);
        let step = mul_trunc(&r, &inverse_trunc(&d, prec), prec);
        for (fi, si) in f.iter_mut().zip(step) {
            *fi -= si;
        }
    }
    f.truncate(n + 1);
    Ok(SeriesExpansion {
        variable: series_variable(subst),
        coefficients: f,
    })
}

/// `Σ_k a_k(s) f^k mod s^prec`.
fn horner(poly: &[UniPoly], f: &[Rational], prec: usize) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); prec];
    for a in poly.iter().rev() {
        acc = mul_trunc(&acc, f, prec);
        for (i, c) in a.coeffs().iter().enumerate().take(prec) {
            acc[i] += c;
        }
    }
    acc
}

pub(crate) fn mul_trunc(a: &[Rational], b: &[Rational], prec: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); prec];
    for (i, x) in a.iter().enumerate().take(prec) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(prec - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1/a mod s^prec`; requires `a_0 ≠ 0`.
pub(crate) fn inverse_trunc(a: &[Rational], prec: usize) -> Vec<Rational> {
    let a0_inv = a[0].recip();
    let mut inv: Vec<Rational> = Vec::with_capacity(prec);
    inv.push(a0_inv.clone());
    for k in 1..prec {
        let mut acc = Rational::zero();
        for i in 1..=k.min(a.len() - 1) {
            acc += &a[i] * &inv[k - i];
        }
        inv.push(-acc * &a0_inv);
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Polynomial, VarTable};
    use std::sync::Arc;

    fn subst(pairs: &[(&str, u32)]) -> Substitution {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn ints(s: &SeriesExpansion) -> Vec<i64> {
        s.integers()
            .unwrap()
            .iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect()
    }

    fn eq(text: &str) -> FunctionalEquation {
        let t = Arc::new(VarTable::new([vec!["F"], vec!["t"]]).unwrap());
        FunctionalEquation::new(Polynomial::parse(t, text).unwrap()).unwrap()
    }

    #[test]
    fn geometric_in_xy() {
        let t = Arc::new(VarTable::lex(["x", "y"]).unwrap());
        let rf = RationalFunction::new(
            Polynomial::one(t.clone()),
            Polynomial::parse(t, "1 - x*y").unwrap(),
        )
        .unwrap();
        let s = series_rational(&rf, &subst(&[("x", 1), ("y", 1)]), 6).unwrap();
        assert_eq!(ints(&s), vec![1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(s.variable, "s");
        let s = series_rational(&rf, &subst(&[("x", 1), ("y", 2)]), 6).unwrap();
        assert_eq!(ints(&s), vec![1, 0, 0, 1, 0, 0, 1]);
        assert!(series_rational(&rf, &subst(&[("x", 1)]), 3).is_err());
        assert!(series_rational(&rf, &subst(&[("x", 1), ("y", 1), ("z", 1)]), 3).is_err());
    }

    #[test]
    fn zero_exponent_can_break_power_series() {
        let t = Arc::new(VarTable::lex(["t"]).unwrap());
        let rf = RationalFunction::new(
            Polynomial::one(t.clone()),
            Polynomial::parse(t, "1 - t").unwrap(),
        )
        .unwrap();
        assert_eq!(
            series_rational(&rf, &subst(&[("t", 0)]), 3).unwrap_err(),
            SolveError::NotPowerSeries
        );
    }

    #[test]
    fn constant_branch() {
        let s = series_algebraic(&eq("F^2 - 1"), rat(1), &subst(&[("t", 1)]), 5).unwrap();
        assert_eq!(ints(&s), vec![1, 0, 0, 0, 0, 0]);
        assert_eq!(s.variable, "t");
    }

    #[test]
    fn branch_preconditions() {
        let e = eq("F - 1 - t^2*F^2");
        assert_eq!(
            series_algebraic(&e, rat(0), &subst(&[("t", 1)]), 4).unwrap_err(),
            SolveError::WrongInitialValue
        );
        assert_eq!(
            series_algebraic(&eq("F^2 - t"), rat(0), &subst(&[("t", 1)]), 4).unwrap_err(),
            SolveError::DegenerateBranch
        );
    }

    #[test]
    fn newton_agrees_with_recurrence_on_linear_equations() {
        let e = eq("4*F*t^3 - 8*F*t^2 - 4*t^3 + 5*F*t - 8*t^2 - F + 5*t + 1");
        let rf = crate::solve::extract_rational(&e).unwrap();
        let sub = subst(&[("t", 1)]);
        for n in [0, 1, 7, 18] {
            assert_eq!(
                series_algebraic(&e, rat(1), &sub, n).unwrap(),
                series_rational(&rf, &sub, n).unwrap()
            );
        }
    }

    #[test]
    fn truncated_inverse() {
        let a = vec![rat(1), rat(-1)];
        assert_eq!(inverse_trunc(&a, 4), vec![rat(1); 4]);
        let b = vec![rat(2), rat(3), rat(-1)];
        let prod = mul_trunc(&b, &inverse_trunc(&b, 6), 6);
        assert_eq!(prod[0], rat(1));
        assert!(prod[1..].iter().all(Zero::is_zero));
    }
}
