//! Invariants of reduced Gröbner bases on random ideals.

use std::sync::Arc;

use growthfn::algebra::{reduce, Monomial, Polynomial, Rational, TermOrder, VarTable};
use growthfn::groebner::{
    buchberger, elimination_ideal, ideal_membership, satisfies_buchberger_criterion,
};
use num_traits::One;
use proptest::prelude::*;

const NAMES: [&str; 4] = ["w", "x", "y", "z"];

#[derive(Debug, Clone)]
struct Ideal {
    /// Block sizes, summing to the number of variables.
    blocks: Vec<usize>,
    /// Generators as `(numerator, denominator, exponents)` terms.
    gens: Vec<Vec<(i64, i64, Vec<u32>)>>,
}

impl Ideal {
    fn order(&self) -> TermOrder {
        let mut names = NAMES.iter().map(|s| s.to_string());
        let blocks: Vec<Vec<String>> = self
            .blocks
            .iter()
            .map(|&k| names.by_ref().take(k).collect())
            .collect();
        TermOrder::block_lex(Arc::new(VarTable::new(blocks).unwrap()))
    }

    fn polys(&self, order: &TermOrder) -> Vec<Polynomial> {
        self.gens
            .iter()
            .map(|terms| {
                Polynomial::from_terms(
                    order.var_table().clone(),
                    terms.iter().map(|(n, d, e)| {
                        (
                            Monomial::from_exponents(e.clone()),
                            Rational::new((*n).into(), (*d).into()),
                        )
                    }),
                )
            })
            .collect()
    }
}

/// A monomial of total degree at most 3: pick the degree, then the variables.
fn exponents(nvars: usize) -> impl Strategy<Value = Vec<u32>> {
    (0usize..=3)
        .prop_flat_map(move |d| prop::collection::vec(0..nvars, d))
        .prop_map(move |vars| {
            let mut e = vec![0u32; nvars];
            for v in vars {
                e[v] += 1;
            }
            e
        })
}

fn ideal() -> impl Strategy<Value = Ideal> {
    (1usize..=4)
        .prop_flat_map(|n| {
            let blocks = prop::collection::vec(1usize..=n, 1..=n).prop_map(move |mut b| {
                // trim the random sizes into a partition of n
                let mut left = n;
                b.retain_mut(|k| {
                    *k = (*k).min(left);
                    left -= *k;
                    *k > 0
                });
                if left > 0 {
                    b.push(left);
                }
                b
            });
            let term = (-5i64..=5, 1i64..=3, exponents(n));
            // sparse generators: dense ones occasionally have lex bases with
            // enormous coefficients
            let gen = prop::collection::vec(term, 1..=3);
            (blocks, prop::collection::vec(gen, 1..=4))
        })
        .prop_map(|(blocks, gens)| Ideal { blocks, gens })
        .prop_filter("nonzero ideal", |i| {
            i.polys(&i.order()).iter().any(|p| !p.is_zero())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn output_is_a_groebner_basis_of_the_input(ideal in ideal()) {
        let order = ideal.order();
        let gens = ideal.polys(&order);
        let basis = buchberger(&gens, &order).unwrap();
        prop_assert!(satisfies_buchberger_criterion(&basis));
        for g in &gens {
            prop_assert!(ideal_membership(g, &basis).unwrap());
        }
    }

    #[test]
    fn output_is_reduced(ideal in ideal()) {
        let order = ideal.order();
        let basis = buchberger(&ideal.polys(&order), &order).unwrap();
        let g = basis.generators();
        for (i, gi) in g.iter().enumerate() {
            prop_assert!(gi.leading_coefficient(&order).unwrap().is_one());
            let others: Vec<Polynomial> =
                g.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
            if !others.is_empty() {
                prop_assert_eq!(&reduce(gi, &others, &order).unwrap(), gi);
            }
        }
        for w in g.windows(2) {
            let a = w[0].leading_monomial(&order).unwrap();
            let b = w[1].leading_monomial(&order).unwrap();
            prop_assert_eq!(order.compare(a, b), std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn basis_is_independent_of_presentation(
        ideal in ideal(),
        scales in prop::collection::vec((prop_oneof![-7i64..=-1, 1i64..=7], 1i64..=5), 4),
        rotate in 0usize..4,
    ) {
        let order = ideal.order();
        let gens = ideal.polys(&order);
        let reference = buchberger(&gens, &order).unwrap().to_text();

        let mut shuffled: Vec<Polynomial> = gens
            .iter()
            .zip(&scales)
            .map(|(g, &(n, d))| g.scale(&Rational::new(n.into(), d.into())))
            .collect();
        let k = rotate % shuffled.len();
        shuffled.rotate_left(k);
        shuffled.reverse();
        prop_assert_eq!(buchberger(&shuffled, &order).unwrap().to_text(), reference.clone());

        // adding redundant ideal members changes nothing either
        let mut extra = gens.clone();
        extra.push(gens.iter().fold(Polynomial::zero(order.var_table().clone()), |acc, g| &acc + g));
        prop_assert_eq!(buchberger(&extra, &order).unwrap().to_text(), reference);
    }

    #[test]
    fn basis_of_a_basis_is_itself(ideal in ideal()) {
        let order = ideal.order();
        let basis = buchberger(&ideal.polys(&order), &order).unwrap();
        let again = buchberger(basis.generators(), &order).unwrap();
        prop_assert_eq!(again.to_text(), basis.to_text());
    }

    #[test]
    fn elimination_keeps_exactly_the_trailing_variables(ideal in ideal()) {
        let order = ideal.order();
        let table = order.var_table().clone();
        let basis = buchberger(&ideal.polys(&order), &order).unwrap();
        for b in 0..table.num_blocks() {
            let keep: Vec<usize> = (table.block(b).start..table.len()).collect();
            let elim = elimination_ideal(&basis, &keep).unwrap();
            for p in &elim {
                prop_assert!((0..table.block(b).start).all(|v| !p.involves(v)));
                prop_assert!(ideal_membership(p, &basis).unwrap());
            }
            // a reduced basis member free of eliminated variables is kept
            let free = basis
                .generators()
                .iter()
                .filter(|p| (0..table.block(b).start).all(|v| !p.involves(v)))
                .count();
            prop_assert_eq!(elim.len(), free);
        }
        if table.len() > 1 && table.num_blocks() > 1 {
            let keep = vec![0];
            prop_assert!(elimination_ideal(&basis, &keep).is_err());
        }
    }

    #[test]
    fn normal_form_is_linear(ideal in ideal(), a in -3i64..=3) {
        let order = ideal.order();
        let gens = ideal.polys(&order);
        let basis = buchberger(&gens, &order).unwrap();
        let f = gens[0].clone();
        let g = gens[gens.len() - 1].mul_monomial(&Monomial::var(order.var_table().len(), 0, 1));
        let c = Rational::from_integer(a.into());
        let lhs = basis.normal_form(&(&f.scale(&c) + &g)).unwrap();
        let rhs = &basis.normal_form(&f).unwrap().scale(&c) + &basis.normal_form(&g).unwrap();
        prop_assert_eq!(lhs, rhs);
        // multiples of generators lie in the ideal
        prop_assert!(basis.normal_form(&(&f * &g)).unwrap().is_zero());
    }
}
