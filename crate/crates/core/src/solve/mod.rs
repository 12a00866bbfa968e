//! From a polynomial system to a growth series.
//!
//! Two independent routes produce the start symbol's generating function:
//! Gröbner elimination of the auxiliary unknowns ([`solve_groebner`]) and,
//! for linear systems, exact Gaussian elimination over the weight polynomials
//! ([`solve_linear`]). Both results are brought to a canonical form so they
//! can be compared for equality.
//!
//! The counting interpretation assumes the grammar is unambiguous: the
//! translation counts derivations, which equal words only in that case.

mod forms;
mod linear;
mod series;

use std::collections::BTreeMap;
use thiserror::Error;

use crate::algebra::{AlgebraError, Rational, VarTable};
use crate::grammar::PolySystem;
use crate::groebner::{self, CancelToken, GroebnerBasis, GroebnerError};

pub use forms::{FunctionalEquation, RationalFunction};
pub use linear::solve_linear;
pub use series::{series_algebraic, series_rational, SeriesExpansion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("elimination failed: no basis element relates the start symbol to the weights")]
    EliminationFailed,
    #[error("not linear: use groebner path")]
    NotLinear,
    #[error("singular system")]
    Singular,
    #[error("algebraic, not rational: use series_algebraic")]
    Algebraic,
    #[error("not a power series at 0: denominator vanishes at the origin")]
    NotPowerSeries,
    #[error("degenerate branch: derivative vanishes at the initial value")]
    DegenerateBranch,
    #[error("wrong initial value: equation does not vanish at the initial value")]
    WrongInitialValue,
    #[error("invalid substitution: {0}")]
    Substitution(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Weight variable name → exponent of the series variable.
pub type Substitution = BTreeMap<String, u32>;

/// Every weight variable mapped to exponent 1.
pub fn default_substitution(weight_vars: &[String]) -> Substitution {
    weight_vars.iter().map(|v| (v.clone(), 1)).collect()
}

pub(crate) fn substitution_exponents(
    table: &VarTable,
    subst: &Substitution,
) -> Result<Vec<u32>, SolveError> {
    for name in subst.keys() {
        if table.index_of(name).is_none() {
            return Err(SolveError::Substitution(format!(
                "`{name}` is not a weight variable"
            )));
        }
    }
    table
        .names()
        .iter()
        .map(|n| {
            subst
                .get(n)
                .copied()
                .ok_or_else(|| SolveError::Substitution(format!("no exponent given for `{n}`")))
        })
        .collect()
}

/// Result of the Gröbner route: the functional equation plus the full basis.
#[derive(Debug, Clone)]
pub struct GroebnerSolution {
    pub equation: FunctionalEquation,
    pub basis: GroebnerBasis,
}

/// Eliminates the auxiliary unknowns. See [`solve_groebner_with`].
pub fn solve_groebner(system: &PolySystem) -> Result<FunctionalEquation, SolveError> {
    Ok(solve_groebner_with(system, &CancelToken::new())?.equation)
}

/// Runs Buchberger under the system's block order and picks, from the
/// generators free of auxiliary unknowns, the one of smallest degree in the
/// start unknown (then fewest terms, then canonical text order).
pub fn solve_groebner_with(
    system: &PolySystem,
    cancel: &CancelToken,
) -> Result<GroebnerSolution, SolveError> {
    let order = system.order();
    let basis = groebner::buchberger_with_cancel(&system.equations, &order, cancel)?;
    let table = &system.var_table;
    let keep: Vec<usize> = (table.block(PolySystem::START_BLOCK).start..table.len()).collect();
    let f = system.start_var();
    let candidates = groebner::elimination_ideal(&basis, &keep)?;
    let mut best: Option<FunctionalEquation> = None;
    for c in candidates.iter().filter(|c| c.involves(f)) {
        let eq = FunctionalEquation::from_system_poly(system, c)?;
        let better = match &best {
            None => true,
            Some(b) => (eq.degree(), eq.poly().num_terms())
                .cmp(&(b.degree(), b.poly().num_terms()))
                .then_with(|| eq.poly().cmp_canonical(b.poly()))
                .is_lt(),
        };
        if better {
            best = Some(eq);
        }
    }
    let equation = best.ok_or(SolveError::EliminationFailed)?;
    Ok(GroebnerSolution { equation, basis })
}

/// Closed form of a functional equation of degree one in the unknown:
/// writes it as `F·q + b` and returns `-b/q`.
pub fn extract_rational(eq: &FunctionalEquation) -> Result<RationalFunction, SolveError> {
    if eq.degree() != 1 {
        return Err(SolveError::Algebraic);
    }
    let (q, b) = eq.split_linear()?;
    RationalFunction::new(-b, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Groebner,
    Linear,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Groebner => "groebner",
            Method::Linear => "linear",
        }
    }
}

/// Outcome of [`solve_system`].
#[derive(Debug, Clone)]
pub struct Solution {
    /// The route that produced the result (never `Auto`).
    pub method: Method,
    pub equation: FunctionalEquation,
    pub closed_form: Option<RationalFunction>,
    pub basis: Option<GroebnerBasis>,
}

/// Solves with the requested method. `Auto` tries the linear route and falls
/// back to Gröbner elimination for nonlinear systems.
pub fn solve_system(
    system: &PolySystem,
    method: Method,
    cancel: &CancelToken,
) -> Result<Solution, SolveError> {
    match method {
        Method::Linear => linear_solution(system),
        Method::Groebner => {
            let g = solve_groebner_with(system, cancel)?;
            let closed_form = match extract_rational(&g.equation) {
                Ok(rf) => Some(rf),
                Err(SolveError::Algebraic) => None,
                Err(e) => return Err(e),
            };
            Ok(Solution {
                method: Method::Groebner,
                equation: g.equation,
                closed_form,
                basis: Some(g.basis),
            })
        }
        Method::Auto => match linear_solution(system) {
            Err(SolveError::NotLinear) => solve_system(system, Method::Groebner, cancel),
            other => other,
        },
    }
}

fn linear_solution(system: &PolySystem) -> Result<Solution, SolveError> {
    let rf = solve_linear(system)?;
    let equation = FunctionalEquation::from_rational(system, &rf)?;
    Ok(Solution {
        method: Method::Linear,
        equation,
        closed_form: Some(rf),
        basis: None,
    })
}

impl Solution {
    /// Power series of the start symbol. `c0` is the constant term (see
    /// [`Grammar::weightless_derivations`](crate::grammar::Grammar::weightless_derivations)),
    /// used to pick the branch when there is no closed form.
    pub fn series(
        &self,
        c0: Rational,
        subst: &Substitution,
        n: usize,
    ) -> Result<SeriesExpansion, SolveError> {
        match &self.closed_form {
            Some(rf) => series_rational(rf, subst, n),
            None => series_algebraic(&self.equation, c0, subst, n),
        }
    }
}
