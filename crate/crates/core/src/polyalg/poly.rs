use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::var::{Monomial, Var, NVARS};

/// Exact rational coefficient, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse polynomial over the fixed variable set with exact rational
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Rational::one(), m)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant coefficient (zero if absent).
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn involves_parameters(&self) -> bool {
        self.terms.keys().any(Monomial::involves_parameters)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
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

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Multiply by `c * m`.
    pub fn mul_term(&self, c: &Rational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Homomorphic image under `var -> assignment[var]`; unassigned variables
    /// map to themselves.
    pub fn substitute(&self, assignment: &BTreeMap<Var, Polynomial>) -> Polynomial {
        let mut images: Vec<Option<&Polynomial>> = vec![None; NVARS];
        for (v, p) in assignment {
            images[v.index()] = Some(p);
        }
        // cache of powers per variable
        let mut powers: Vec<Vec<Polynomial>> = vec![Vec::new(); NVARS];
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut prod_mono = Monomial::one();
            let mut prod_poly = Polynomial::constant(c.clone());
            for (v, e) in m.support() {
                match images[v.index()] {
                    None => prod_mono = prod_mono.mul(&Monomial::var_pow(v, e)),
                    Some(img) => {
                        let cache = &mut powers[v.index()];
                        if cache.is_empty() {
                            cache.push(Polynomial::one());
                        }
                        while cache.len() <= e as usize {
                            let next = cache.last().unwrap() * img;
                            cache.push(next);
                        }
                        prod_poly = &prod_poly * &cache[e as usize];
                    }
                }
            }
            out += &prod_poly.mul_term(&Rational::one(), &prod_mono);
        }
        out
    }

    /// Substitute rational values for some variables.
    pub fn evaluate_partial(&self, values: &BTreeMap<Var, Rational>) -> Polynomial {
        let assignment = values
            .iter()
            .map(|(v, c)| (*v, Polynomial::constant(c.clone())))
            .collect();
        self.substitute(&assignment)
    }

    /// Formal partial derivative.
    pub fn differentiate(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut exps = *m.exponents();
            exps[v.index()] -= 1;
            out.add_term(
                Monomial::from_exponents(exps),
                c * Rational::from_integer(BigInt::from(e)),
            );
        }
        out
    }

    /// Rename `u, v, w` to `u', v', w'`.
    pub fn primed(&self) -> Polynomial {
        let assignment = Var::PARAMS
            .iter()
            .map(|v| (*v, Polynomial::var(v.primed())))
            .collect();
        self.substitute(&assignment)
    }

    /// Exact division by a single term, if every term is divisible.
    pub fn div_term(&self, c: &Rational, m: &Monomial) -> Option<Polynomial> {
        if c.is_zero() {
            return None;
        }
        let mut out = Polynomial::zero();
        for (n, k) in &self.terms {
            out.add_term(m.quotient_of(n)?, k / c);
        }
        Some(out)
    }

    /// Divide out the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => Polynomial::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Whether `self == c * other` for some nonzero rational `c`; returns `c`.
    pub fn scalar_multiple_of(&self, other: &Polynomial) -> Option<Rational> {
        let (m, c) = self.leading_term()?;
        let (n, d) = other.leading_term()?;
        if m != n {
            return None;
        }
        let k = c / d;
        (other.scale(&k) == *self).then_some(k)
    }

    pub fn bidegree_of(&self, weights: &WeightTable) -> Homogeneity {
        let mut found: Option<Bidegree> = None;
        for m in self.terms.keys() {
            let b = weights.of_monomial(m);
            match found {
                None => found = Some(b),
                Some(prev) if prev != b => return Homogeneity::Mixed,
                _ => {}
            }
        }
        match found {
            None => Homogeneity::Any,
            Some(b) => Homogeneity::Homogeneous(b),
        }
    }

    /// Largest absolute numerator or denominator, for diagnostics.
    pub fn max_coefficient_height(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs().max(c.denom().clone()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl From<Var> for Polynomial {
    fn from(v: Var) -> Self {
        Polynomial::var(v)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
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

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

/// Weight of a Cox monomial under the `(λ, μ)` torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub lambda: i64,
    pub mu: i64,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { lambda: 0, mu: 0 };

    pub fn new(lambda: i64, mu: i64) -> Self {
        Bidegree { lambda, mu }
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.lambda + rhs.lambda, self.mu + rhs.mu)
    }
}

impl std::fmt::Display for Bidegree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.lambda, self.mu)
    }
}

/// Result of a homogeneity query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero polynomial, homogeneous of every bidegree.
    Any,
    Homogeneous(Bidegree),
    Mixed,
}

impl Homogeneity {
    pub fn bidegree(self) -> Option<Bidegree> {
        match self {
            Homogeneity::Homogeneous(b) => Some(b),
            _ => None,
        }
    }
}

/// Bidegree assigned to each variable; parameters always weigh `(0,0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable([Bidegree; NVARS]);

impl WeightTable {
    pub fn new(cox: [Bidegree; 5]) -> Self {
        let mut w = [Bidegree::ZERO; NVARS];
        w[..5].copy_from_slice(&cox);
        WeightTable(w)
    }

    pub fn of(&self, v: Var) -> Bidegree {
        self.0[v.index()]
    }

    pub fn of_monomial(&self, m: &Monomial) -> Bidegree {
        m.support().fold(Bidegree::ZERO, |acc, (v, e)| {
            let w = self.of(v);
            acc + Bidegree::new(w.lambda * e as i64, w.mu * e as i64)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse;

    fn p(s: &str) -> Polynomial {
        parse(s).unwrap()
    }

    fn weights(d1: i64, d2: i64) -> WeightTable {
        WeightTable::new([
            Bidegree::new(1, 0),
            Bidegree::new(1, 0),
            Bidegree::new(d1, 1),
            Bidegree::new(d2, 1),
            Bidegree::new(0, 1),
        ])
    }

    #[test]
    fn zero_has_no_terms() {
        assert!(Polynomial::integer(0).is_zero());
        let q = p("t1 - t1");
        assert!(q.is_zero());
        assert_eq!(q.len(), 0);
    }

    #[test]
    fn substitute_group_identity() {
        let q = p("t2 + u*t1");
        let a = BTreeMap::from([(Var::U, Polynomial::zero())]);
        assert_eq!(q.substitute(&a), p("t2"));
    }

    #[test]
    fn substitute_shift() {
        let a = BTreeMap::from([(Var::X1, p("x1 + v*t1*x3"))]);
        assert_eq!(p("x1").substitute(&a), p("x1 + v*t1*x3"));
    }

    #[test]
    fn substitute_composes_translations() {
        let a = BTreeMap::from([(Var::X1, p("x1 + v'*t1*x3"))]);
        assert_eq!(p("x1 + v*t1*x3").substitute(&a), p("x1 + (v + v')*t1*x3"));
    }

    #[test]
    fn substitute_identity_assignment() {
        let q = p("3*t1^2*x3 - u*x1*x2 + 7");
        let id = Var::ALL.iter().map(|v| (*v, Polynomial::var(*v))).collect();
        assert_eq!(q.substitute(&id), q);
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("t2 + u*t1").differentiate(Var::U), p("t1"));
        assert_eq!(p("x1 + v*t1^2*x3").differentiate(Var::V), p("t1^2*x3"));
        assert_eq!(p("u^2*t1^2").differentiate(Var::U), p("2*u*t1^2"));
    }

    #[test]
    fn bidegrees() {
        assert_eq!(
            p("x3").bidegree_of(&weights(3, 1)),
            Homogeneity::Homogeneous(Bidegree::new(0, 1))
        );
        assert_eq!(
            p("t1*x3 + t2*x1").bidegree_of(&weights(1, 1)),
            Homogeneity::Mixed
        );
        assert_eq!(
            p("t1*x3 + t2*x1").bidegree_of(&weights(0, 0)),
            Homogeneity::Homogeneous(Bidegree::new(1, 1))
        );
        assert_eq!(
            Polynomial::zero().bidegree_of(&weights(0, 0)),
            Homogeneity::Any
        );
        // parameters carry no weight
        assert_eq!(
            p("u*v*t1").bidegree_of(&weights(0, 0)),
            Homogeneity::Homogeneous(Bidegree::new(1, 0))
        );
    }

    #[test]
    fn scalar_multiples() {
        assert_eq!(p("4*x3").scalar_multiple_of(&p("2*x3")), Some(rat(2)));
        assert_eq!(p("x3 + t1").scalar_multiple_of(&p("x3")), None);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let q = p("t2 + u*t1 - 2");
        assert_eq!(q.pow(3), &(&q * &q) * &q);
        assert_eq!(q.pow(0), Polynomial::one());
    }
}
