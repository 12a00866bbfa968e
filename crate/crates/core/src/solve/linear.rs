use std::sync::Arc;

use super::{RationalFunction, SolveError};
use crate::algebra::{self, Polynomial, TermOrder, VarTable};
use crate::grammar::PolySystem;

/// Solves a system that is linear in the unknowns by Cramer's rule, with both
/// determinants computed by fraction-free (Bareiss) elimination over the
/// weight polynomials.
pub fn solve_linear(system: &PolySystem) -> Result<RationalFunction, SolveError> {
    let wt = system.weight_table();
    let map = system.weight_map();
    let n = system.unknowns.len();
    let mut matrix: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
    let mut rhs: Vec<Polynomial> = Vec::with_capacity(n);
    for eq in &system.equations {
        let parts = eq.split_on(&system.unknowns, wt.clone(), &map)?;
        let mut row = vec![Polynomial::zero(wt.clone()); n];
        let mut b = Polynomial::zero(wt.clone());
        for (key, coeff) in parts {
            match key.iter().sum::<u32>() {
                0 => b = -coeff,
                1 => row[key.iter().position(|&e| e == 1).unwrap()] = coeff,
                _ => return Err(SolveError::NotLinear),
            }
        }
        matrix.push(row);
        rhs.push(b);
    }

    let order = TermOrder::block_lex(wt.clone());
    let det = bareiss_det(matrix.clone(), &order, &wt);
    if det.is_zero() {
        return Err(SolveError::Singular);
    }
    let col = system.start;
    for (row, b) in matrix.iter_mut().zip(rhs) {
        row[col] = b;
    }
    let det_start = bareiss_det(matrix, &order, &wt);
    RationalFunction::new(det_start, det)
}

/// Determinant by Bareiss' fraction-free elimination; every division is exact.
pub(crate) fn bareiss_det(
    mut m: Vec<Vec<Polynomial>>,
    order: &TermOrder,
    table: &Arc<VarTable>,
) -> Polynomial {
    let n = m.len();
    let mut negate = false;
    let mut prev = Polynomial::one(table.clone());
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Polynomial::zero(table.clone()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = exact_div(&num, &prev, order);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

fn exact_div(a: &Polynomial, b: &Polynomial, order: &TermOrder) -> Polynomial {
    if b.is_constant() {
        return a.scale(&b.constant_term().recip());
    }
    let d = algebra::divide_reduce(a, std::slice::from_ref(b), order)
        .expect("Bareiss pivots are nonzero");
    debug_assert!(d.remainder.is_zero(), "Bareiss division must be exact");
    d.quotients.into_iter().next().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::grammar::{parse_grammar, to_poly_system};

    fn sys(text: &str) -> PolySystem {
        to_poly_system(&parse_grammar(text).unwrap()).unwrap()
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let t = Arc::new(VarTable::lex(["t"]).unwrap());
        let o = TermOrder::block_lex(t.clone());
        let p = |s: &str| Polynomial::parse(t.clone(), s).unwrap();
        let m = vec![
            vec![p("0"), p("1 - t"), p("2")],
            vec![p("t"), p("3"), p("t^2")],
            vec![p("1"), p("0"), p("1 + t")],
        ];
        // cofactor expansion along the first row
        let minor =
            |a: &Polynomial, b: &Polynomial, c: &Polynomial, d: &Polynomial| &(a * d) - &(b * c);
        let expected = &(&p("0") * &minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2]))
            - &(&m[0][1] * &minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2]));
        let expected = &expected + &(&m[0][2] * &minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1]));
        assert_eq!(bareiss_det(m, &o, &t), expected);
    }

    #[test]
    fn balanced_pairs_closed_form() {
        let s = sys("start S\nweights x y\nterminal a weight x\nterminal b weight y\nrule S -> eps | a S b\n");
        let rf = solve_linear(&s).unwrap();
        let wt = s.weight_table();
        assert_eq!(rf.numerator(), &Polynomial::one(wt.clone()));
        assert_eq!(rf.denominator(), &Polynomial::parse(wt, "1 - x*y").unwrap());
    }

    #[test]
    fn empty_word_only() {
        let s = sys("start S\nweights t\nrule S -> eps\n");
        let rf = solve_linear(&s).unwrap();
        assert_eq!(rf.numerator().constant_term(), rat(1));
        assert!(rf.numerator().is_constant() && rf.denominator().is_constant());
    }

    #[test]
    fn nonlinear_is_refused() {
        let s = sys("start S\nweights t\nterminal a\nterminal b\nrule S -> eps | a S b S\n");
        assert_eq!(solve_linear(&s).unwrap_err(), SolveError::NotLinear);
    }

    #[test]
    fn singular_system() {
        // valid grammars never yield one, so build the system by hand: S - S = 0
        let mut s = sys("start S\nweights t\nterminal a\nrule S -> eps | a S\n");
        s.equations[0] = Polynomial::zero(s.var_table.clone());
        assert_eq!(solve_linear(&s).unwrap_err(), SolveError::Singular);
        let wt = Arc::new(VarTable::lex(["t"]).unwrap());
        let o = TermOrder::block_lex(wt.clone());
        let one = Polynomial::one(wt.clone());
        assert!(bareiss_det(
            vec![vec![one.clone(), one.clone()], vec![one.clone(), one]],
            &o,
            &wt
        )
        .is_zero());
    }
}
