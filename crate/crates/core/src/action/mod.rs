//! Candidate additive-group actions in Cox coordinates and their verifier.
//!
//! A candidate is a 5-tuple of polynomials in the Cox coordinates and the
//! group parameters `(u, v, w)`: the images of `t1, t2, x1, x2, x3` under
//! `σ_(u,v,w)`. Nothing about a candidate is assumed; [`verify_all`] checks
//! every axiom and necessary condition and records the outcome in a
//! [`Certificate`].

mod verify;

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bundle::{BundleError, BundleType};
use crate::polyalg::{Polynomial, Rational, Var};

pub use verify::{
    ht_coefficients, orbit_rank, verify_all, verify_all_with, verify_boundary_stability,
    verify_equivariance, verify_group_law, verify_identity, verify_irrelevant_locus, Certificate,
    CheckName, ComponentVerdict, HtCheck, RankCheck, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("base point must have (t1,t2) != 0 and (x1,x2,x3) != 0")]
    InvalidBasePoint,
    #[error("base point or its orbit leaves the chart t1 != 0, x3 != 0")]
    OutsideChart,
    #[error("boundary component is not bihomogeneous: {0}")]
    HeterogeneousBoundary(String),
    #[error("boundary classes are linearly dependent")]
    DegenerateClasses,
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

/// Images of the Cox coordinates under `σ_(u,v,w)` on a fixed bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionCandidate {
    bundle: BundleType,
    images: [Polynomial; 5],
}

impl ActionCandidate {
    pub fn new(bundle: BundleType, images: [Polynomial; 5]) -> Self {
        ActionCandidate { bundle, images }
    }

    /// The trivial action.
    pub fn identity(bundle: BundleType) -> Self {
        Self::new(bundle, Var::COX.map(Polynomial::var))
    }

    pub fn bundle(&self) -> BundleType {
        self.bundle
    }

    pub fn images(&self) -> &[Polynomial; 5] {
        &self.images
    }

    pub fn image(&self, v: Var) -> &Polynomial {
        assert!(v.is_cox(), "{v} is not a Cox coordinate");
        &self.images[v.index()]
    }

    /// Replace one image; used to build mutants.
    pub fn with_image(mut self, v: Var, p: Polynomial) -> Self {
        assert!(v.is_cox(), "{v} is not a Cox coordinate");
        self.images[v.index()] = p;
        self
    }

    pub fn assignment(&self) -> BTreeMap<Var, Polynomial> {
        Var::COX
            .iter()
            .copied()
            .zip(self.images.iter().cloned())
            .collect()
    }

    /// `σ*(p)`: substitute the images into `p`.
    pub fn pull_back(&self, p: &Polynomial) -> Polynomial {
        p.substitute(&self.assignment())
    }

    /// Images as printed text, keyed by coordinate name.
    pub fn to_map(&self) -> BTreeMap<&'static str, String> {
        Var::COX
            .iter()
            .zip(&self.images)
            .map(|(v, p)| (v.name(), p.to_string()))
            .collect()
    }

    /// Whether every point of the locus obtained by substituting `restriction`
    /// into the Cox coordinates is fixed, i.e. mapped to a torus multiple of
    /// itself. Checked through the weighted 2×2 minors
    /// `σ(x_i)·x_k·λ^{d_k} = σ(x_k)·x_i·λ^{d_i}` with `λ = σ(t_j)/t_j`
    /// cleared of denominators. On failure returns the moved image tuple.
    pub fn fixes_locus(&self, restriction: &BTreeMap<Var, Polynomial>) -> Result<(), String> {
        let z: Vec<Polynomial> = Var::COX
            .iter()
            .map(|v| Polynomial::var(*v).substitute(restriction))
            .collect();
        let s: Vec<Polynomial> = self
            .images
            .iter()
            .map(|p| p.substitute(restriction))
            .collect();
        let moved = || {
            let parts: Vec<String> = s.iter().map(|p| p.to_string()).collect();
            format!("({}) -> ({})", fmt_tuple(&z), parts.join(", "))
        };
        if &(&z[0] * &s[1]) - &(&z[1] * &s[0]) != Polynomial::zero() {
            return Err(moved());
        }
        let j = if z[0].is_zero() { 1 } else { 0 };
        if z[j].is_zero() || s[j].is_zero() {
            return Err(moved());
        }
        let d = |i: usize| self.bundle.twist(i);
        for i in 0..3 {
            for k in (i + 1)..3 {
                let lhs = &(&(&s[2 + i] * &z[2 + k]) * &s[j].pow(d(k))) * &z[j].pow(d(i));
                let rhs = &(&(&s[2 + k] * &z[2 + i]) * &s[j].pow(d(i))) * &z[j].pow(d(k));
                if lhs != rhs {
                    return Err(moved());
                }
            }
        }
        Ok(())
    }

    /// Fixedness of a single rational point.
    pub fn fixes_point(&self, point: &BasePoint) -> Result<(), String> {
        self.fixes_locus(&point.assignment())
    }
}

fn fmt_tuple(ps: &[Polynomial]) -> String {
    ps.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// The action `t2 ↦ t2 + u·t1`, `x1 ↦ x1 + v·t1^d1·x3`, `x2 ↦ x2 + w·t1^d2·x3`,
/// fixing `t1` and `x3`. On the chart `t1 = x3 = 1` it is translation by
/// `(u, v, w)`.
pub fn standard_action(bundle: &BundleType) -> ActionCandidate {
    let t1 = Polynomial::var(Var::T1);
    let x3 = Polynomial::var(Var::X3);
    let shift = |param: Var, d: u32| &(&Polynomial::var(param) * &t1.pow(d)) * &x3;
    ActionCandidate::new(
        *bundle,
        [
            t1.clone(),
            &Polynomial::var(Var::T2) + &(&Polynomial::var(Var::U) * &t1),
            &Polynomial::var(Var::X1) + &shift(Var::V, bundle.d1()),
            &Polynomial::var(Var::X2) + &shift(Var::W, bundle.d2()),
            x3.clone(),
        ],
    )
}

/// A rational point of `(A² \ 0) × (A³ \ 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasePoint {
    values: [Rational; 5],
}

impl BasePoint {
    pub fn new(values: [Rational; 5]) -> Result<Self, ActionError> {
        let t_zero = values[..2].iter().all(Zero::is_zero);
        let x_zero = values[2..].iter().all(Zero::is_zero);
        if t_zero || x_zero {
            return Err(ActionError::InvalidBasePoint);
        }
        Ok(BasePoint { values })
    }

    pub fn from_integers(values: [i64; 5]) -> Result<Self, ActionError> {
        Self::new(values.map(crate::polyalg::rat))
    }

    /// `(1, 0, 0, 0, 1)`, the origin of the chart `t1 = x3 = 1`.
    pub fn standard() -> Self {
        BasePoint {
            values: [
                Rational::one(),
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
                Rational::one(),
            ],
        }
    }

    pub fn values(&self) -> &[Rational; 5] {
        &self.values
    }

    pub fn in_standard_chart(&self) -> bool {
        !self.values[0].is_zero() && !self.values[4].is_zero()
    }

    pub fn assignment(&self) -> BTreeMap<Var, Polynomial> {
        Var::COX
            .iter()
            .zip(&self.values)
            .map(|(v, c)| (*v, Polynomial::constant(c.clone())))
            .collect()
    }
}

impl Serialize for BasePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.values.iter().map(|c| c.to_string()).collect();
        parts.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::poly;

    fn b(d1: u32, d2: u32) -> BundleType {
        BundleType::new(d1, d2).unwrap()
    }

    #[test]
    fn standard_action_formulas() {
        let a = standard_action(&b(1, 1));
        assert_eq!(a.image(Var::X1), &poly("x1 + v*t1*x3"));
        assert_eq!(a.image(Var::X2), &poly("x2 + w*t1*x3"));
        let a = standard_action(&b(2, 1));
        assert_eq!(a.image(Var::X1), &poly("x1 + v*t1^2*x3"));
        assert_eq!(a.image(Var::X2), &poly("x2 + w*t1*x3"));
        let a = standard_action(&b(0, 0));
        assert_eq!(a.image(Var::T2), &poly("t2 + u*t1"));
        assert_eq!(a.image(Var::X1), &poly("x1 + v*x3"));
    }

    #[test]
    fn base_points() {
        assert!(BasePoint::from_integers([0, 0, 1, 0, 0]).is_err());
        assert!(BasePoint::from_integers([1, 0, 0, 0, 0]).is_err());
        let p = BasePoint::from_integers([0, 1, 1, 0, 0]).unwrap();
        assert!(!p.in_standard_chart());
        assert!(BasePoint::standard().in_standard_chart());
    }

    #[test]
    fn fiber_over_infinity_is_fixed_when_twisted() {
        for bt in BundleType::grid(4).filter(|bt| bt.d2() >= 1) {
            let a = standard_action(&bt);
            let fiber = BTreeMap::from([(Var::T1, Polynomial::zero())]);
            assert_eq!(a.fixes_locus(&fiber), Ok(()), "{bt}");
        }
    }

    #[test]
    fn product_fixes_only_the_boundary_line_of_the_fiber() {
        let a = standard_action(&b(0, 0));
        let fiber = BTreeMap::from([(Var::T1, Polynomial::zero())]);
        assert!(a.fixes_locus(&fiber).is_err());
        let line = BTreeMap::from([(Var::T1, Polynomial::zero()), (Var::X3, Polynomial::zero())]);
        assert_eq!(a.fixes_locus(&line), Ok(()));
        // the point used as the first point-link center
        let t0 = BasePoint::from_integers([0, 1, 1, 0, 0]).unwrap();
        assert_eq!(a.fixes_point(&t0), Ok(()));
        // a point in the open orbit moves
        assert!(a.fixes_point(&BasePoint::standard()).is_err());
    }

    #[test]
    fn fixedness_accounts_for_torus_weights() {
        // on B(1,0) the torus rescales x1 by λ, so (t, x) and (2t, 2x1, x2, x3)
        // are the same point
        let bt = b(1, 0);
        let scaled = ActionCandidate::new(
            bt,
            [
                poly("2*t1"),
                poly("2*t2"),
                poly("2*x1"),
                poly("x2"),
                poly("x3"),
            ],
        );
        assert_eq!(
            scaled.fixes_point(&BasePoint::from_integers([1, 3, 1, 1, 1]).unwrap()),
            Ok(())
        );
        let wrong = scaled.clone().with_image(Var::X1, poly("x1"));
        assert!(wrong
            .fixes_point(&BasePoint::from_integers([1, 3, 1, 1, 1]).unwrap())
            .is_err());
    }
}
