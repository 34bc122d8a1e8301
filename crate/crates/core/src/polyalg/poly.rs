use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{denominator_lcm, format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// A monomial as a sorted multiset of variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut vars: Vec<usize>) -> Self {
        vars.sort_unstable();
        Monomial(vars)
    }

    pub fn var(i: usize) -> Self {
        Monomial(vec![i])
    }

    pub fn pair(a: usize, b: usize) -> Self {
        Monomial::new(vec![a, b])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn vars(&self) -> &[usize] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                v.push(self.0[i]);
                i += 1;
            } else {
                v.push(other.0[j]);
                j += 1;
            }
        }
        v.extend_from_slice(&self.0[i..]);
        v.extend_from_slice(&other.0[j..]);
        Monomial(v)
    }

    pub fn exponent(&self, var: usize) -> usize {
        self.0.iter().filter(|&&v| v == var).count()
    }

    /// Removes one occurrence of `var`, if present.
    pub fn without_one(&self, var: usize) -> Option<Monomial> {
        let pos = self.0.iter().position(|&v| v == var)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(Monomial(v))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        let mut acc = Rational::one();
        for &v in &self.0 {
            acc *= point.get(v).ok_or(Error::UnboundVariable(v))?;
        }
        Ok(acc)
    }
}

// graded lexicographic
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_terms([(Monomial::one(), c)])
    }

    pub fn var(i: usize) -> Self {
        Poly::from_terms([(Monomial::var(i), Rational::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// The coefficient of the greatest monomial in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { terms: acc }
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * m.evaluate(point)?;
        }
        Ok(acc)
    }

    /// Evaluates with bindings given as a map from variable index to value.
    pub fn evaluate_map(&self, point: &BTreeMap<usize, Rational>) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &v in m.vars() {
                t *= point.get(&v).ok_or(Error::UnboundVariable(v))?;
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Composition: replaces variable `i` with `subs(i)`.
    pub fn substitute(&self, subs: &dyn Fn(usize) -> Poly) -> Poly {
        let mut cache: BTreeMap<usize, Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for &v in m.vars() {
                let s = cache.entry(v).or_insert_with(|| subs(v));
                t = t.mul(s);
            }
            out = out.add(&t);
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                let rest = m.without_one(var).expect("exponent > 0");
                out.add_term(rest, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// `P(z·u)` as a polynomial in `u`: every coefficient is multiplied by
    /// the value of its monomial at `z`.
    pub fn dilate(&self, z: &[Rational]) -> Result<Poly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = c * m.evaluate(z)?;
            if !v.is_zero() {
                terms.insert(m.clone(), v);
            }
        }
        Ok(Poly { terms })
    }

    /// Rescales to a primitive integer polynomial whose leading coefficient
    /// is positive.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = denominator_lcm(self.terms.values());
        let ints: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let lead_negative = self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false);
        let g = if lead_negative { -g } else { g };
        let terms = self
            .terms
            .keys()
            .zip(ints)
            .map(|(m, c)| (m.clone(), Rational::from_integer(c / &g)))
            .collect();
        Poly { terms }
    }

    /// True when `self = c·other` for some nonzero rational `c`.
    pub fn is_proportional_to(&self, other: &Poly) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.primitive() == other.primitive() || self.primitive() == other.primitive().scale(&-Rational::one())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let unit = a.is_one() && m.degree() > 0;
            if !unit {
                write!(f, "{}", a)?;
                if m.degree() > 0 {
                    write!(f, "*")?;
                }
            }
            let names: Vec<String> = m.vars().iter().map(|v| format!("x{v}")).collect();
            write!(f, "{}", names.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    monomial: Vec<usize>,
    coeff: String,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                monomial: m.vars().to_vec(),
                coeff: format_rational(c),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let mut p = Poly::zero();
        for t in terms {
            let c = parse_rational(&t.coeff).map_err(serde::de::Error::custom)?;
            p.add_term(Monomial::new(t.monomial), c);
        }
        Ok(p)
    }
}
