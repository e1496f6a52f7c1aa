//! Split P²-bundles `F(-d1,-d2,0)` over P¹ in Cox coordinates.
//!
//! The bundle is the quotient of `(A² \ 0) × (A³ \ 0)` with coordinates
//! `(t1,t2; x1,x2,x3)` by the torus acting as
//! `(λt1, λt2; λ^d1 μ x1, λ^d2 μ x2, μ x3)`. A bihomogeneous polynomial of
//! weight `(w_λ, w_μ)` cuts a divisor of class `w_μ·ξ + w_λ·F`, where `ξ` is
//! the tautological class (cut by `x3`) and `F` the fiber class (cut by `t1`).

mod automorphism;
mod text;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyalg::{Bidegree, Homogeneity, Monomial, Polynomial, WeightTable};

pub use automorphism::{normalize_boundary, CoxAutomorphism};
pub use text::{parse_bundle, parse_class};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("bundle type must satisfy d1 >= d2 >= 0, got ({0},{1})")]
    NotNormalized(i64, i64),
    #[error("polynomial is not bihomogeneous: {0}")]
    Heterogeneous(String),
    #[error("the zero polynomial does not define a divisor")]
    ZeroPolynomial,
    #[error("polynomial involves group parameters: {0}")]
    InvolvesParameters(String),
    #[error("expected a divisor of class {expected}, found {found}")]
    WrongClass {
        expected: DivisorClass,
        found: DivisorClass,
    },
    #[error("boundary divisor is not of the admissible shape: {0}")]
    Inadmissible(String),
    #[error("cannot parse bundle descriptor `{0}`")]
    BadDescriptor(String),
    #[error("cannot parse divisor class `{0}`")]
    BadClass(String),
}

/// The bundle `F(-d1,-d2,0)`, always with `d1 >= d2 >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BundleType {
    d1: u32,
    d2: u32,
}

impl BundleType {
    pub fn new(d1: u32, d2: u32) -> Result<Self, BundleError> {
        if d1 < d2 {
            return Err(BundleError::NotNormalized(d1 as i64, d2 as i64));
        }
        Ok(BundleType { d1, d2 })
    }

    /// `P¹ × P²`.
    pub fn product() -> Self {
        BundleType { d1: 0, d2: 0 }
    }

    pub fn d1(&self) -> u32 {
        self.d1
    }

    pub fn d2(&self) -> u32 {
        self.d2
    }

    /// The twist exponent of `x1, x2, x3` (`d1, d2, 0`).
    pub fn twist(&self, fiber_index: usize) -> u32 {
        [self.d1, self.d2, 0][fiber_index]
    }

    pub fn weights(&self) -> WeightTable {
        WeightTable::new([
            Bidegree::new(1, 0),
            Bidegree::new(1, 0),
            Bidegree::new(self.d1 as i64, 1),
            Bidegree::new(self.d2 as i64, 1),
            Bidegree::new(0, 1),
        ])
    }

    /// All normalized bundles with `d1 <= max_d1`.
    pub fn grid(max_d1: u32) -> impl Iterator<Item = BundleType> {
        (0..=max_d1).flat_map(|d1| (0..=d1).map(move |d2| BundleType { d1, d2 }))
    }
}

impl fmt::Display for BundleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({},{})", self.d1, self.d2)
    }
}

/// Result of bringing `F(e1,e2,e3)` into normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizedBundle {
    pub bundle: BundleType,
    /// The twist subtracted from every entry (the maximum entry).
    pub shift: i64,
    /// `permutation[k]` is the original position of the summand that becomes
    /// `x_{k+1}` in normal form.
    pub permutation: [usize; 3],
}

pub fn normalize_bundle(e1: i64, e2: i64, e3: i64) -> NormalizedBundle {
    let e = [e1, e2, e3];
    let shift = *e.iter().max().unwrap();
    // after the twist every entry is <= 0; sort by descending |entry|, stable
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&i| (e[i] - shift, i));
    let d = |i: usize| (shift - e[order[i]]) as u32;
    NormalizedBundle {
        bundle: BundleType { d1: d(0), d2: d(1) },
        shift,
        permutation: order,
    }
}

/// The class `a·ξ + b·F` in `Pic = Zξ ⊕ ZF`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    pub a: i64,
    pub b: i64,
}

impl DivisorClass {
    pub const XI: DivisorClass = DivisorClass { a: 1, b: 0 };
    pub const FIBER: DivisorClass = DivisorClass { a: 0, b: 1 };
    pub const ZERO: DivisorClass = DivisorClass { a: 0, b: 0 };

    pub fn new(a: i64, b: i64) -> Self {
        DivisorClass { a, b }
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(-self.a, -self.b)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, c: DivisorClass) -> DivisorClass {
        DivisorClass::new(self * c.a, self * c.b)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*xi + {}*f", self.a, self.b)
    }
}

/// Monomial basis `t1^b1 t2^b2 x1^a1 x2^a2 x3^a3` of `|a·ξ + b·F|`, ascending.
pub fn linear_system_basis(bundle: &BundleType, class: &DivisorClass) -> Vec<Monomial> {
    let (a, b) = (class.a, class.b);
    let (d1, d2) = (bundle.d1 as i64, bundle.d2 as i64);
    let mut out = Vec::new();
    if a < 0 {
        return out;
    }
    for a1 in 0..=a {
        for a2 in 0..=(a - a1) {
            let a3 = a - a1 - a2;
            let tdeg = b - d1 * a1 - d2 * a2;
            for b1 in 0..=tdeg {
                out.push(Monomial::cox(
                    b1 as u32,
                    (tdeg - b1) as u32,
                    a1 as u32,
                    a2 as u32,
                    a3 as u32,
                ));
            }
        }
    }
    out.sort();
    out
}

pub fn is_effective(_bundle: &BundleType, class: &DivisorClass) -> bool {
    class.a >= 0 && class.b >= 0
}

/// Whether `{d1, d2}` is exactly `{ξ, F}`, the generators of the effective cone.
pub fn generates_effective_cone(
    _bundle: &BundleType,
    d1: &DivisorClass,
    d2: &DivisorClass,
) -> bool {
    let (xi, f) = (DivisorClass::XI, DivisorClass::FIBER);
    (*d1 == xi && *d2 == f) || (*d1 == f && *d2 == xi)
}

/// `-K = 3ξ + (2 + d1 + d2)F`, from the relative Euler sequence.
pub fn anticanonical_class(bundle: &BundleType) -> DivisorClass {
    DivisorClass::new(3, 2 + bundle.d1 as i64 + bundle.d2 as i64)
}

/// Triple intersection from `ξ³ = -(d1+d2)`, `ξ²F = 1`, `ξF² = F³ = 0`.
pub fn intersection_number(
    bundle: &BundleType,
    c1: &DivisorClass,
    c2: &DivisorClass,
    c3: &DivisorClass,
) -> i64 {
    let s = bundle.d1 as i64 + bundle.d2 as i64;
    let xi3 = c1.a * c2.a * c3.a;
    let xi2f = c1.a * c2.a * c3.b + c1.a * c2.b * c3.a + c1.b * c2.a * c3.a;
    -s * xi3 + xi2f
}

/// Class of the divisor cut by a bihomogeneous, parameter-free polynomial.
pub fn class_of_divisor(bundle: &BundleType, p: &Polynomial) -> Result<DivisorClass, BundleError> {
    if p.is_zero() {
        return Err(BundleError::ZeroPolynomial);
    }
    if p.involves_parameters() {
        return Err(BundleError::InvolvesParameters(p.to_string()));
    }
    match p.bidegree_of(&bundle.weights()) {
        Homogeneity::Homogeneous(w) => Ok(DivisorClass::new(w.mu, w.lambda)),
        _ => Err(BundleError::Heterogeneous(p.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{poly, Var};

    fn b(d1: u32, d2: u32) -> BundleType {
        BundleType::new(d1, d2).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_bundle(0, 0, 0).bundle, b(0, 0));
        assert_eq!(normalize_bundle(-2, -1, 0).bundle, b(2, 1));
        let n = normalize_bundle(1, 0, 2);
        assert_eq!(n.bundle, b(2, 1));
        assert_eq!(n.shift, 2);
        assert_eq!(n.permutation, [1, 0, 2]);
        assert!(BundleType::new(1, 2).is_err());
    }

    #[test]
    fn linear_system_examples() {
        assert_eq!(
            linear_system_basis(&b(1, 1), &DivisorClass::XI),
            vec![Monomial::var(Var::X3)]
        );
        assert_eq!(
            linear_system_basis(&b(0, 0), &DivisorClass::XI),
            vec![
                Monomial::var(Var::X1),
                Monomial::var(Var::X2),
                Monomial::var(Var::X3)
            ]
        );
        for bt in [b(0, 0), b(3, 1)] {
            for bb in -2..4 {
                assert!(linear_system_basis(&bt, &DivisorClass::new(-1, bb)).is_empty());
            }
        }
    }

    #[test]
    fn effectivity_examples() {
        let bt = b(0, 0);
        assert!(is_effective(&bt, &DivisorClass::new(3, 2)));
        assert!(is_effective(&bt, &DivisorClass::ZERO));
        assert!(!is_effective(&bt, &DivisorClass::new(1, -1)));
        assert!(linear_system_basis(&bt, &DivisorClass::new(1, -1)).is_empty());
    }

    #[test]
    fn cone_generation() {
        let bt = b(2, 1);
        let (xi, f) = (DivisorClass::XI, DivisorClass::FIBER);
        assert!(generates_effective_cone(&bt, &xi, &f));
        assert!(!generates_effective_cone(&bt, &(xi + f), &f));
        assert!(!generates_effective_cone(&bt, &xi, &(2 * f)));
    }

    #[test]
    fn anticanonical() {
        assert_eq!(anticanonical_class(&b(0, 0)), DivisorClass::new(3, 2));
        assert_eq!(anticanonical_class(&b(2, 1)), DivisorClass::new(3, 5));
    }

    #[test]
    fn intersections() {
        let (xi, f) = (DivisorClass::XI, DivisorClass::FIBER);
        assert_eq!(intersection_number(&b(0, 0), &xi, &xi, &f), 1);
        assert_eq!(intersection_number(&b(3, 2), &f, &f, &f), 0);
        assert_eq!(intersection_number(&b(3, 2), &xi, &xi, &xi), -5);
        for bt in BundleType::grid(10) {
            let k = anticanonical_class(&bt);
            assert_eq!(intersection_number(&bt, &k, &k, &k), 54, "{bt}");
        }
    }

    #[test]
    fn divisor_classes() {
        let bt = b(3, 1);
        assert_eq!(
            class_of_divisor(&bt, &poly("x3")).unwrap(),
            DivisorClass::XI
        );
        assert_eq!(
            class_of_divisor(&bt, &poly("t1")).unwrap(),
            DivisorClass::FIBER
        );
        assert_eq!(
            class_of_divisor(&bt, &poly("x1")).unwrap(),
            DivisorClass::new(1, 3)
        );
        assert_eq!(
            class_of_divisor(&bt, &Polynomial::zero()),
            Err(BundleError::ZeroPolynomial)
        );
        assert!(matches!(
            class_of_divisor(&bt, &poly("x1 + x3")),
            Err(BundleError::Heterogeneous(_))
        ));
        assert!(matches!(
            class_of_divisor(&bt, &poly("u*x3")),
            Err(BundleError::InvolvesParameters(_))
        ));
    }
}
