//! Decision procedure: does a del Pezzo fibration over P¹ admit a
//! `G_a^3`-structure with the given boundary?
//!
//! Degree alone settles every case except degree 9. In degree 9 the total
//! space is a split P²-bundle and the answer depends on the boundary pair,
//! which must be a section class and a fiber spanning the effective cone.
//! A positive answer always carries a synthesized action with a valid
//! certificate.

use std::collections::BTreeMap;

use num::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::action::{verify_all_with, ActionCandidate, ActionError, BasePoint, Certificate};
use crate::bundle::{
    class_of_divisor, generates_effective_cone, normalize_boundary, BundleError, BundleType,
    DivisorClass,
};
use crate::links::{synthesize_with, LinkError, Synthesis};
use crate::polyalg::{Limits, Polynomial, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("degree must be between 1 and 9, got {0}")]
    DegreeOutOfRange(i64),
    #[error("boundary classes {0} and {1} are linearly dependent")]
    DegenerateClasses(DivisorClass, DivisorClass),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("conjugated action failed certification: {0}")]
    Conjugation(String),
}

/// A boundary component given by an equation or only by its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundarySpec {
    Equation(Polynomial),
    Class(DivisorClass),
}

impl BoundarySpec {
    pub fn class(&self, bundle: &BundleType) -> Result<DivisorClass, BundleError> {
        match self {
            BoundarySpec::Equation(p) => class_of_divisor(bundle, p),
            BoundarySpec::Class(c) => Ok(*c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FibrationDescriptor {
    Degree(i64),
    Bundle {
        bundle: BundleType,
        d1: BoundarySpec,
        d2: BoundarySpec,
    },
}

/// Why a fibration was ruled out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Degree at most 7.
    DegreeBelowEight,
    /// Degree exactly 8.
    DegreeEight,
    /// The second boundary component is not a fiber.
    NotFiberBoundary,
    /// The boundary classes do not span the effective cone.
    ConeNotGenerated,
}

impl Rule {
    pub fn statement(&self) -> &'static str {
        match self {
            Rule::DegreeBelowEight => "a G_a^3-fibration has degree at least 8",
            Rule::DegreeEight => "no del Pezzo fibration of degree 8 carries a G_a^3-structure",
            Rule::NotFiberBoundary => "the boundary must contain a fiber of the P^2-bundle",
            Rule::ConeNotGenerated => "the boundary components must generate the effective cone",
        }
    }
}

/// Certificate for the action moved back to the boundary as given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conjugation {
    pub automorphism: serde_json::Value,
    pub action: BTreeMap<&'static str, String>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum Decision {
    Yes {
        classes: [DivisorClass; 2],
        synthesis: Box<Synthesis>,
        #[serde(skip_serializing_if = "Option::is_none")]
        conjugation: Option<Box<Conjugation>>,
    },
    YesInPrinciple {
        note: String,
    },
    No {
        rule: Rule,
        reason: String,
    },
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes { .. } | Decision::YesInPrinciple { .. })
    }

    pub fn rule(&self) -> Option<Rule> {
        match self {
            Decision::No { rule, .. } => Some(*rule),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("decision serializes")
    }
}

fn no(rule: Rule, detail: String) -> Decision {
    Decision::No {
        rule,
        reason: format!("{}: {detail}", rule.statement()),
    }
}

pub fn classify(desc: &FibrationDescriptor) -> Result<Decision, ClassifyError> {
    classify_with(desc, &Limits::default())
}

pub fn classify_with(
    desc: &FibrationDescriptor,
    limits: &Limits,
) -> Result<Decision, ClassifyError> {
    match desc {
        FibrationDescriptor::Degree(d) => match d {
            1..=7 => Ok(no(Rule::DegreeBelowEight, format!("degree {d}"))),
            8 => Ok(no(Rule::DegreeEight, "degree 8".into())),
            9 => Ok(Decision::YesInPrinciple {
                note: "degree 9 fibrations are P^2-bundles; a certificate requires the bundle \
                       type and boundary"
                    .into(),
            }),
            _ => Err(ClassifyError::DegreeOutOfRange(*d)),
        },
        FibrationDescriptor::Bundle { bundle, d1, d2 } => classify_bundle(bundle, d1, d2, limits),
    }
}

fn classify_bundle(
    bundle: &BundleType,
    d1: &BoundarySpec,
    d2: &BoundarySpec,
    limits: &Limits,
) -> Result<Decision, ClassifyError> {
    let c1 = d1.class(bundle)?;
    let c2 = d2.class(bundle)?;
    if c1.a * c2.b - c2.a * c1.b == 0 {
        return Err(ClassifyError::DegenerateClasses(c1, c2));
    }
    if c2 != DivisorClass::FIBER {
        return Ok(no(
            Rule::NotFiberBoundary,
            format!("second component has class {c2}"),
        ));
    }
    if !generates_effective_cone(bundle, &c1, &c2) {
        return Ok(no(
            Rule::ConeNotGenerated,
            format!("{c1} and {c2} on {bundle}"),
        ));
    }
    let synthesis = synthesize_with(bundle, limits)?;
    let conjugation = match (d1, d2) {
        (BoundarySpec::Equation(e), BoundarySpec::Equation(f)) => Some(Box::new(conjugate(
            bundle,
            &synthesis.action,
            e,
            f,
            limits,
        )?)),
        _ => None,
    };
    Ok(Decision::Yes {
        classes: [c1, c2],
        synthesis: Box::new(synthesis),
        conjugation,
    })
}

// Move the synthesized action to the given boundary through the normalizing
// automorphism h: τ* = h* ∘ σ* ∘ (h⁻¹)*.
fn conjugate(
    bundle: &BundleType,
    sigma: &ActionCandidate,
    e: &Polynomial,
    f: &Polynomial,
    limits: &Limits,
) -> Result<Conjugation, ClassifyError> {
    let h = normalize_boundary(bundle, e, f)?;
    let pull: BTreeMap<Var, Polynomial> = Var::COX
        .iter()
        .copied()
        .zip(h.pullback_images().iter().cloned())
        .collect();
    let images = h
        .inverse_images()
        .clone()
        .map(|p| sigma.pull_back(&p).substitute(&pull));
    let tau = ActionCandidate::new(*bundle, images);
    let base = chart_base_point(&h.inverse_images().clone())
        .ok_or_else(|| ClassifyError::Conjugation("no base point in the chart".into()))?;
    let certificate = verify_all_with(&tau, &[e.clone(), f.clone()], &base, limits)?;
    if !certificate.valid {
        return Err(ClassifyError::Conjugation(format!(
            "rejected by {:?}",
            certificate.rejected_by
        )));
    }
    Ok(Conjugation {
        automorphism: h.to_json(),
        action: tau.to_map(),
        certificate,
    })
}

// Image under h⁻¹ of a small point of the standard open orbit, landing in
// the chart t1 ≠ 0, x3 ≠ 0.
fn chart_base_point(inverse: &[Polynomial; 5]) -> Option<BasePoint> {
    let candidates = [
        [1, 0, 0, 0, 1],
        [1, 1, 1, 1, 1],
        [1, 2, 1, 3, 1],
        [1, -1, 2, -1, 1],
    ];
    candidates.iter().find_map(|c| {
        let assign: BTreeMap<Var, Polynomial> = Var::COX
            .iter()
            .zip(c)
            .map(|(v, n)| (*v, Polynomial::integer(*n)))
            .collect();
        let values: [Rational; 5] = inverse
            .clone()
            .map(|p| p.substitute(&assign).constant_term());
        if values[0].is_zero() || values[4].is_zero() {
            return None;
        }
        BasePoint::new(values).ok()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::poly;

    fn b(d1: u32, d2: u32) -> BundleType {
        BundleType::new(d1, d2).unwrap()
    }

    fn eqs(bt: BundleType, e: &str, f: &str) -> FibrationDescriptor {
        FibrationDescriptor::Bundle {
            bundle: bt,
            d1: BoundarySpec::Equation(poly(e)),
            d2: BoundarySpec::Equation(poly(f)),
        }
    }

    #[test]
    fn by_degree() {
        for d in 1..=7 {
            let r = classify(&FibrationDescriptor::Degree(d)).unwrap();
            assert_eq!(r.rule(), Some(Rule::DegreeBelowEight));
        }
        let r = classify(&FibrationDescriptor::Degree(8)).unwrap();
        assert_eq!(r.rule(), Some(Rule::DegreeEight));
        assert!(classify(&FibrationDescriptor::Degree(9)).unwrap().is_yes());
        assert!(classify(&FibrationDescriptor::Degree(0)).is_err());
        assert!(classify(&FibrationDescriptor::Degree(10)).is_err());
    }

    #[test]
    fn standard_boundary() {
        let r = classify(&eqs(b(2, 1), "x3", "t1")).unwrap();
        match r {
            Decision::Yes {
                synthesis,
                conjugation,
                ..
            } => {
                assert!(synthesis.certificate.valid);
                assert_eq!(synthesis.plan.len(), 2);
                assert!(conjugation.unwrap().certificate.valid);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn class_pairs() {
        let by_class = |bt, c1, c2| FibrationDescriptor::Bundle {
            bundle: bt,
            d1: BoundarySpec::Class(c1),
            d2: BoundarySpec::Class(c2),
        };
        let (xi, f) = (DivisorClass::XI, DivisorClass::FIBER);
        let r = classify(&by_class(b(0, 0), xi + f, f)).unwrap();
        assert_eq!(r.rule(), Some(Rule::ConeNotGenerated));
        let r = classify(&by_class(b(0, 0), f, xi)).unwrap();
        assert_eq!(r.rule(), Some(Rule::NotFiberBoundary));
        assert!(matches!(
            classify(&by_class(b(0, 0), f, 2 * f)),
            Err(ClassifyError::DegenerateClasses(..))
        ));
        assert!(classify(&by_class(b(3, 1), xi, f)).unwrap().is_yes());
    }

    #[test]
    fn nonstandard_equations_are_conjugated() {
        for (bt, e, f) in [
            (b(0, 0), "x1 + x3", "t1"),
            (b(3, 1), "2*x3", "t1 + 5*t2"),
            (b(1, 0), "3*x2", "t2"),
            (b(0, 0), "x1 - x2", "2*t1 - t2"),
        ] {
            let r = classify(&eqs(bt, e, f)).unwrap();
            match r {
                Decision::Yes { conjugation, .. } => {
                    let c = conjugation.unwrap();
                    assert!(c.certificate.valid, "{bt} {e} {f}: {:?}", c.certificate);
                }
                other => panic!("{other:?}"),
            }
        }
    }
}
