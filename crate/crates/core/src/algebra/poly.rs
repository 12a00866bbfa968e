use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Monomial, Rational, TermOrder, UniPoly, VarTable};

/// Sparse polynomial with exact rational coefficients.
///
/// Terms are kept in a map from monomial to nonzero coefficient, so two
/// polynomials over the same table are equal exactly when their maps are.
#[derive(Clone, Debug)]
pub struct Polynomial {
    table: Arc<VarTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Polynomial {
    pub fn zero(table: Arc<VarTable>) -> Self {
        Polynomial {
            table,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: Arc<VarTable>, c: Rational) -> Self {
        let n = table.len();
        Self::from_terms(table, [(Monomial::one(n), c)])
    }

    pub fn one(table: Arc<VarTable>) -> Self {
        Self::constant(table, Rational::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(table: Arc<VarTable>, name: &str) -> Result<Self, AlgebraError> {
        let i = table
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(Self::var_at(table, i))
    }

    pub fn var_at(table: Arc<VarTable>, var: usize) -> Self {
        let m = Monomial::var(table.len(), var, 1);
        Self::from_terms(table, [(m, Rational::one())])
    }

    pub fn term(table: Arc<VarTable>, mono: Monomial, c: Rational) -> Self {
        Self::from_terms(table, [(mono, c)])
    }

    /// Sums the given terms; repeated monomials are merged and zeros dropped.
    pub fn from_terms<I>(table: Arc<VarTable>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(table);
        for (m, c) in terms {
            assert_eq!(
                m.nvars(),
                p.table.len(),
                "monomial arity does not match the table"
            );
            p.add_term(m, c);
        }
        p
    }

    pub fn var_table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic exponent order (not the term order).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms sorted descending under `order`.
    pub fn terms_desc(&self, order: &TermOrder) -> Vec<(&Monomial, &Rational)> {
        debug_assert!(order.var_table().len() == self.table.len());
        // the map's key order is the term order (see `TermOrder`)
        self.terms.iter().rev().collect()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.table.len()))
    }

    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, &Rational)> {
        debug_assert!(order.var_table().len() == self.table.len());
        self.terms.last_key_value()
    }

    pub fn leading_monomial(&self, order: &TermOrder) -> Option<&Monomial> {
        self.leading_term(order).map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self, order: &TermOrder) -> Option<&Rational> {
        self.leading_term(order).map(|(_, c)| c)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Whether any term has a positive exponent in `var`.
    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self -= c * m * other`, in place.
    pub(crate) fn sub_scaled(&mut self, c: &Rational, m: &Monomial, other: &Polynomial) {
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), -(c * oc));
        }
    }

    pub(crate) fn remove_term(&mut self, m: &Monomial) -> Option<Rational> {
        self.terms.remove(m)
    }

    fn check_table(&self, other: &Polynomial) -> Result<(), AlgebraError> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(AlgebraError::VarTableMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_table(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_table(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c.clone());
        }
        Ok(r)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        self.check_table(other)?;
        let mut r = Polynomial::zero(self.table.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.table.clone());
        }
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = Polynomial::one(self.table.clone());
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Divides by the leading coefficient. The zero polynomial is returned as is.
    pub fn monic(&self, order: &TermOrder) -> Polynomial {
        match self.leading_coefficient(order) {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    /// Rescales to integer coefficients with gcd 1 and a positive leading
    /// coefficient under `order`.
    pub fn primitive(&self, order: &TermOrder) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut factor = Rational::new(den, num);
        if self.leading_coefficient(order).unwrap().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.table.len()),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Exact division by a monomial that divides every term.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(k.div(m)?, c.clone());
        }
        Some(Polynomial {
            table: self.table.clone(),
            terms,
        })
    }

    /// Moves the polynomial to `target`, sending variable `i` to `map[i]`.
    /// Variables mapped to `None` must not occur.
    pub fn reindex(
        &self,
        target: Arc<VarTable>,
        map: &[Option<usize>],
    ) -> Result<Polynomial, AlgebraError> {
        assert_eq!(map.len(), self.table.len());
        let n = target.len();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; n];
            for (i, &x) in m.exponents().iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] += x,
                    None => {
                        return Err(AlgebraError::VariableNotRepresentable(
                            self.table.name(i).to_string(),
                        ))
                    }
                }
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        Ok(out)
    }

    /// Moves the polynomial to a table with the same variable names in any
    /// order or block layout (extra target variables are allowed).
    pub fn reindex_by_name(&self, target: Arc<VarTable>) -> Result<Polynomial, AlgebraError> {
        let map: Vec<Option<usize>> = self
            .table
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect();
        self.reindex(target, &map)
    }

    /// Groups terms by their exponents in `vars`. Each group's cofactor is
    /// moved to `rest` via `rest_map` (see [`Polynomial::reindex`]); the
    /// exponents of `vars` are cleared before reindexing.
    pub fn split_on(
        &self,
        vars: &[usize],
        rest: Arc<VarTable>,
        rest_map: &[Option<usize>],
    ) -> Result<BTreeMap<Vec<u32>, Polynomial>, AlgebraError> {
        let mut groups: BTreeMap<Vec<u32>, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = vars.iter().map(|&v| m.exp(v)).collect();
            let mut e = m.exponents().to_vec();
            for &v in vars {
                e[v] = 0;
            }
            let cof = Polynomial::term(self.table.clone(), Monomial::from_exponents(e), c.clone())
                .reindex(rest.clone(), rest_map)?;
            let slot = groups
                .entry(key)
                .or_insert_with(|| Polynomial::zero(rest.clone()));
            for (cm, cc) in cof.terms {
                slot.add_term(cm, cc);
            }
        }
        Ok(groups)
    }

    /// Substitutes `s^exps[i]` for variable `i`, giving a univariate polynomial in `s`.
    pub fn substitute_powers(&self, exps: &[u32]) -> UniPoly {
        assert_eq!(exps.len(), self.table.len());
        let mut coeffs: Vec<Rational> = Vec::new();
        for (m, c) in &self.terms {
            let d: usize = m
                .exponents()
                .iter()
                .zip(exps)
                .map(|(&e, &k)| e as usize * k as usize)
                .sum();
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Rational::zero());
            }
            coeffs[d] += c;
        }
        UniPoly::new(coeffs)
    }

    /// Evaluates at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.table.len());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Canonical text, terms descending under the table's block-lex order.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(table: Arc<VarTable>, text: &str) -> Result<Polynomial, AlgebraError> {
        super::text::parse_polynomial(table, text)
    }

    pub(crate) fn ambient_order(&self) -> TermOrder {
        TermOrder::block_lex(self.table.clone())
    }

    /// Compares by the canonical descending term sequence; used for
    /// deterministic tie-breaking.
    pub fn cmp_canonical(&self, other: &Polynomial) -> Ordering {
        let order = self.ambient_order();
        let a = self.terms_desc(&order);
        let b = other.terms_desc(&order);
        for (x, y) in a.iter().zip(&b) {
            match order.compare(x.0, y.0).then_with(|| x.1.cmp(y.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        a.len().cmp(&b.len())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let order = self.ambient_order();
        for (i, (m, c)) in self.terms_desc(&order).into_iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.table.name(v).to_string()),
                    _ => factors.push(format!("{}^{}", self.table.name(v), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        /// Panics if the operands live over different variable tables; use
        /// the `checked_*` methods to get an error instead.
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs)
                    .expect("polynomial arithmetic across variable tables")
            }
        }

        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
