use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::SolveError;
use crate::algebra::{self, Polynomial, TermOrder, UniPoly, VarTable};
use crate::grammar::PolySystem;

/// Polynomial relation `P(F, w) = 0` between the start unknown `F` and the
/// weight variables.
///
/// Stored over the table `[F] | [weights]`, content-normalized: integer
/// coefficients with gcd 1 and a positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalEquation {
    poly: Polynomial,
    degree: u32,
}

impl FunctionalEquation {
    /// `poly` must live over a table whose variable 0 is the unknown and whose
    /// remaining variables are the weights.
    pub fn new(poly: Polynomial) -> Result<Self, SolveError> {
        let degree = poly.degree_in(0);
        if degree == 0 {
            return Err(SolveError::EliminationFailed);
        }
        let order = TermOrder::block_lex(poly.var_table().clone());
        Ok(FunctionalEquation {
            poly: poly.primitive(&order),
            degree,
        })
    }

    fn table_for(system: &PolySystem) -> Arc<VarTable> {
        let t = &system.var_table;
        let f = t.name(system.start_var()).to_string();
        let w: Vec<String> = system
            .weight_vars()
            .map(|v| t.name(v).to_string())
            .collect();
        Arc::new(VarTable::new([vec![f], w]).expect("subset of a valid table"))
    }

    /// Moves a system polynomial free of auxiliary unknowns into equation form.
    pub fn from_system_poly(system: &PolySystem, p: &Polynomial) -> Result<Self, SolveError> {
        let target = Self::table_for(system);
        let w = system.weight_vars();
        let map: Vec<Option<usize>> = (0..system.var_table.len())
            .map(|v| {
                if v == system.start_var() {
                    Some(0)
                } else if w.contains(&v) {
                    Some(1 + v - w.start)
                } else {
                    None
                }
            })
            .collect();
        Self::new(p.reindex(target, &map)?)
    }

    /// `F·den − num`.
    pub fn from_rational(system: &PolySystem, rf: &RationalFunction) -> Result<Self, SolveError> {
        let target = Self::table_for(system);
        let num = rf.numerator().reindex_by_name(target.clone())?;
        let den = rf.denominator().reindex_by_name(target.clone())?;
        let f = Polynomial::var_at(target, 0);
        Self::new(&(&f * &den) - &num)
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    /// Degree in the unknown.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn unknown_name(&self) -> &str {
        self.poly.var_table().name(0)
    }

    pub fn weight_table(&self) -> Arc<VarTable> {
        Arc::new(self.poly.var_table().tail_table(1))
    }

    /// Coefficients of `F^0, F^1, …, F^degree` as weight polynomials.
    pub fn coefficients(&self) -> Result<Vec<Polynomial>, SolveError> {
        let wt = self.weight_table();
        let n = self.poly.var_table().len();
        let map: Vec<Option<usize>> = (0..n).map(|v| v.checked_sub(1)).collect();
        let mut parts = self.poly.split_on(&[0], wt.clone(), &map)?;
        Ok((0..=self.degree)
            .map(|k| {
                parts
                    .remove(&vec![k])
                    .unwrap_or_else(|| Polynomial::zero(wt.clone()))
            })
            .collect())
    }

    /// `(q, b)` with `P = F·q + b`, for degree one.
    pub(crate) fn split_linear(&self) -> Result<(Polynomial, Polynomial), SolveError> {
        let mut c = self.coefficients()?;
        let q = c.pop().unwrap();
        let b = c.pop().unwrap();
        Ok((q, b))
    }
}

impl fmt::Display for FunctionalEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.poly)
    }
}

/// Quotient of weight polynomials in canonical form: common factors removed
/// as far as verified, denominator constant term equal to 1.
///
/// With a single weight variable the pair is made coprime by a univariate
/// gcd. With several, only common monomial factors and exact divisibility of
/// one side by the other are removed; `coprime_verified` records whether
/// coprimality is certain.
#[derive(Debug, Clone)]
pub struct RationalFunction {
    numerator: Polynomial,
    denominator: Polynomial,
    coprime_verified: bool,
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.numerator == other.numerator && self.denominator == other.denominator
    }
}

impl Eq for RationalFunction {}

impl RationalFunction {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self, SolveError> {
        if denominator.is_zero() {
            return Err(SolveError::Singular);
        }
        if numerator.var_table() != denominator.var_table() {
            return Err(algebra::AlgebraError::VarTableMismatch.into());
        }
        let table = denominator.var_table().clone();
        if numerator.is_zero() {
            return Ok(RationalFunction {
                numerator,
                denominator: Polynomial::one(table),
                coprime_verified: true,
            });
        }

        let common = numerator
            .monomial_content()
            .gcd(&denominator.monomial_content());
        let mut num = numerator.div_monomial(&common).unwrap();
        let mut den = denominator.div_monomial(&common).unwrap();
        let order = TermOrder::block_lex(table.clone());

        let coprime_verified = if table.len() == 1 {
            let (u, v) = (num.substitute_powers(&[1]), den.substitute_powers(&[1]));
            let g = u.gcd(&v);
            if g.degree().unwrap_or(0) > 0 {
                num = from_uni(&table, &u.div_rem(&g).0);
                den = from_uni(&table, &v.div_rem(&g).0);
            }
            true
        } else if num.is_constant() || den.is_constant() {
            true
        } else {
            let n_by_d = algebra::divide_reduce(&num, &[den.clone()], &order)?;
            if n_by_d.remainder.is_zero() {
                num = n_by_d.quotients.into_iter().next().unwrap();
                den = Polynomial::one(table.clone());
                true
            } else {
                let d_by_n = algebra::divide_reduce(&den, &[num.clone()], &order)?;
                if d_by_n.remainder.is_zero() {
                    den = d_by_n.quotients.into_iter().next().unwrap();
                    num = Polynomial::one(table.clone());
                    true
                } else {
                    false
                }
            }
        };

        let c0 = den.constant_term();
        if c0.is_zero() {
            return Err(SolveError::NotPowerSeries);
        }
        if !c0.is_one() {
            let inv = c0.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RationalFunction {
            numerator: num,
            denominator: den,
            coprime_verified,
        })
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn coprime_verified(&self) -> bool {
        self.coprime_verified
    }

    /// `self == num/den` by cross-multiplication. Both polynomials are
    /// matched to this function's table by variable name.
    pub fn cross_equals(&self, num: &Polynomial, den: &Polynomial) -> bool {
        let t = self.numerator.var_table().clone();
        match (num.reindex_by_name(t.clone()), den.reindex_by_name(t)) {
            (Ok(n), Ok(d)) => &self.numerator * &d == &n * &self.denominator,
            _ => false,
        }
    }
}

fn from_uni(table: &Arc<VarTable>, u: &UniPoly) -> Polynomial {
    Polynomial::from_terms(
        table.clone(),
        u.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (algebra::Monomial::var(1, 0, i as u32), c.clone())),
    )
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}
