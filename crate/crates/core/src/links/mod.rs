//! Elementary links between split P²-bundles and transport of actions and
//! divisor classes along them.
//!
//! A link `P ⇢ P'` is realized as a monomial rational map in Cox coordinates.
//! The blow-up in between is never built; it shows up only through the
//! multiplicity of a divisor along the center.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::action::{
    standard_action, verify_all_with, ActionCandidate, BasePoint, Certificate, CheckName,
};
use crate::bundle::{class_of_divisor, BundleError, BundleType, DivisorClass};
use crate::polyalg::{
    ideal_member, GroebnerError, Homogeneity, Limits, Membership, Monomial, Polynomial, Var,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("malformed link step: {0}")]
    Malformed(String),
    #[error("link map contract violated: {0}")]
    Contract(String),
    #[error("multiplicity {m} exceeds a+b for class {class}")]
    SuspiciousMultiplicity { class: DivisorClass, m: i64 },
    #[error("polynomial must be nonzero and bihomogeneous: {0}")]
    BadDivisor(String),
    #[error("source action is not certified: rejected by {0:?}")]
    InvalidSource(Option<CheckName>),
    #[error("center is not preserved by the action: {0}")]
    CenterNotStable(String),
    #[error("transported action differs from the target action: {0}")]
    ChartMismatch(String),
    #[error("transported action is not certified on {bundle}: rejected by {rejected_by:?}")]
    InvalidTarget {
        bundle: BundleType,
        rejected_by: Option<CheckName>,
    },
    #[error("boundary transported to ({e}, {f}), expected (xi, f)")]
    BoundaryMismatch { e: DivisorClass, f: DivisorClass },
    #[error("step {index}: {error}")]
    Step { index: usize, error: Box<LinkError> },
    #[error(transparent)]
    Resource(#[from] GroebnerError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Action(#[from] crate::action::ActionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkKind {
    Line,
    Point,
}

/// One elementary link centered in the fiber `{t1 = 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkStep {
    kind: LinkKind,
    source: BundleType,
    target: BundleType,
}

impl LinkStep {
    /// Checks that `target` is what a link of this kind produces from `source`.
    pub fn new(kind: LinkKind, source: BundleType, target: BundleType) -> Result<Self, LinkError> {
        let (d1, d2) = (source.d1(), source.d2());
        let expected = match kind {
            LinkKind::Line if d1 == d2 => BundleType::new(d1 + 1, d2 + 1)?,
            LinkKind::Point => BundleType::new(d1 + 1, d2)?,
            LinkKind::Line => {
                return Err(LinkError::Malformed(format!(
                    "line links start from B(d,d), not {source}"
                )))
            }
        };
        if target != expected {
            return Err(LinkError::Malformed(format!(
                "{kind:?} link from {source} lands on {expected}, not {target}"
            )));
        }
        Ok(LinkStep {
            kind,
            source,
            target,
        })
    }

    pub fn line(d: u32) -> Self {
        let source = BundleType::new(d, d).unwrap();
        Self::new(
            LinkKind::Line,
            source,
            BundleType::new(d + 1, d + 1).unwrap(),
        )
        .unwrap()
    }

    pub fn point(source: BundleType) -> Self {
        let target = BundleType::new(source.d1() + 1, source.d2()).unwrap();
        Self::new(LinkKind::Point, source, target).unwrap()
    }

    pub fn kind(&self) -> LinkKind {
        self.kind
    }

    pub fn source(&self) -> BundleType {
        self.source
    }

    pub fn target(&self) -> BundleType {
        self.target
    }

    /// Coordinates generating the ideal of the center.
    pub fn center_vars(&self) -> &'static [Var] {
        match self.kind {
            LinkKind::Line => &[Var::T1, Var::X3],
            LinkKind::Point => &[Var::T1, Var::X2, Var::X3],
        }
    }

    pub fn center_ideal(&self) -> Vec<Polynomial> {
        self.center_vars()
            .iter()
            .map(|v| Polynomial::var(*v))
            .collect()
    }
}

impl fmt::Display for LinkStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            LinkKind::Line => "Line",
            LinkKind::Point => "Point",
        };
        write!(f, "{kind}: {} -> {}", self.source, self.target)
    }
}

impl Serialize for LinkStep {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Record {
            kind: LinkKind,
            source: BundleType,
            target: BundleType,
            center: Vec<String>,
        }
        Record {
            kind: self.kind,
            source: self.source,
            target: self.target,
            center: self.center_ideal().iter().map(|p| p.to_string()).collect(),
        }
        .serialize(s)
    }
}

/// Ordered links from `P¹ × P²` to a target bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct LinkPlan {
    pub steps: Vec<LinkStep>,
}

impl LinkPlan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plan serializes")
    }
}

/// `d2` line links up to `B(d2,d2)`, then `d1 - d2` point links.
pub fn plan_links(target: &BundleType) -> LinkPlan {
    let (d1, d2) = (target.d1(), target.d2());
    let lines = (0..d2).map(LinkStep::line);
    let points = (d2..d1).map(|k| LinkStep::point(BundleType::new(k, d2).unwrap()));
    LinkPlan {
        steps: lines.chain(points).collect(),
    }
}

/// Target Cox coordinates as polynomials in the source ones. The torus of the
/// target is the torus of the source twisted by `torus_factor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap {
    pub source: BundleType,
    pub target: BundleType,
    pub images: [Polynomial; 5],
    pub torus_factor: Polynomial,
}

impl RationalMap {
    pub fn assignment(&self) -> BTreeMap<Var, Polynomial> {
        Var::COX
            .iter()
            .copied()
            .zip(self.images.iter().cloned())
            .collect()
    }

    /// `p ∘ φ` for a polynomial `p` in target coordinates.
    pub fn pull_back(&self, p: &Polynomial) -> Polynomial {
        p.substitute(&self.assignment())
    }
}

/// Build the map of a link and check its contract: it is defined exactly off
/// the center and the irrelevant locus, and it is the identity on the chart
/// `t1 = x3 = 1`.
pub fn link_map(step: &LinkStep) -> Result<RationalMap, LinkError> {
    let v = Polynomial::var;
    let t1 = v(Var::T1);
    let images = match step.kind {
        LinkKind::Line => [
            t1.clone(),
            v(Var::T2),
            &t1 * &v(Var::X1),
            &t1 * &v(Var::X2),
            v(Var::X3),
        ],
        LinkKind::Point => [
            t1.clone(),
            v(Var::T2),
            &t1 * &v(Var::X1),
            v(Var::X2),
            v(Var::X3),
        ],
    };
    let map = RationalMap {
        source: step.source,
        target: step.target,
        images,
        torus_factor: Polynomial::one(),
    };
    check_weights(&map)?;
    check_indeterminacy(step, &map, &Limits::default())?;
    check_chart_identity(&map)?;
    Ok(map)
}

fn check_weights(map: &RationalMap) -> Result<(), LinkError> {
    let (ws, wt) = (map.source.weights(), map.target.weights());
    for (v, img) in Var::COX.iter().zip(&map.images) {
        if img.bidegree_of(&ws) != Homogeneity::Homogeneous(wt.of(*v)) {
            return Err(LinkError::Contract(format!(
                "image {img} of {v} does not have the target weight {}",
                wt.of(*v)
            )));
        }
    }
    Ok(())
}

fn member(p: &Polynomial, gens: &[Polynomial], limits: &Limits) -> Result<bool, LinkError> {
    Ok(matches!(
        ideal_member(p, gens, limits)?,
        Membership::Member { .. }
    ))
}

// V(images) = V(center) ∪ V(x): the x-images lie in center ∩ (x) and every
// product center·x_i lies in their ideal. The t-images generate (t1, t2).
fn check_indeterminacy(
    step: &LinkStep,
    map: &RationalMap,
    limits: &Limits,
) -> Result<(), LinkError> {
    let t_ideal = [Polynomial::var(Var::T1), Polynomial::var(Var::T2)];
    let x_ideal = [Var::X1, Var::X2, Var::X3].map(Polynomial::var);
    let t_imgs = &map.images[..2];
    let x_imgs = &map.images[2..];
    let center = step.center_ideal();
    for g in &t_ideal {
        if !member(g, t_imgs, limits)? {
            return Err(LinkError::Contract(format!(
                "{g} not in the ideal of the t-images"
            )));
        }
    }
    for img in t_imgs {
        if !member(img, &t_ideal, limits)? {
            return Err(LinkError::Contract(format!(
                "t-image {img} not in (t1, t2)"
            )));
        }
    }
    for img in x_imgs {
        if !member(img, &center, limits)? || !member(img, &x_ideal, limits)? {
            return Err(LinkError::Contract(format!(
                "x-image {img} does not vanish on the center and at x = 0"
            )));
        }
    }
    for c in &center {
        for x in &x_ideal {
            let prod = c * x;
            if !member(&prod, x_imgs, limits)? {
                return Err(LinkError::Contract(format!(
                    "x-images define more than the center: {prod} not in their ideal"
                )));
            }
        }
    }
    Ok(())
}

fn check_chart_identity(map: &RationalMap) -> Result<(), LinkError> {
    let chart = BTreeMap::from([(Var::T1, Polynomial::one()), (Var::X3, Polynomial::one())]);
    for (v, img) in Var::COX.iter().zip(&map.images) {
        let want = match v {
            Var::T1 | Var::X3 => Polynomial::one(),
            _ => Polynomial::var(*v),
        };
        let got = img.substitute(&chart);
        if got != want {
            return Err(LinkError::Contract(format!(
                "on the chart t1 = x3 = 1 the image of {v} is {got}"
            )));
        }
    }
    Ok(())
}

/// Strict transform of a class under the link, for a divisor with
/// multiplicity `m` along the center: `(a, b) ↦ (a, a + b - m)`.
pub fn transport_class(
    _step: &LinkStep,
    class: &DivisorClass,
    m: i64,
) -> Result<DivisorClass, LinkError> {
    if m < 0 || m > class.a + class.b {
        return Err(LinkError::SuspiciousMultiplicity { class: *class, m });
    }
    Ok(DivisorClass::new(class.a, class.a + class.b - m))
}

/// All monomials of degree `k` in `vars`.
fn monomials_of_degree(vars: &[Var], k: u32) -> Vec<Polynomial> {
    if vars.is_empty() {
        return if k == 0 {
            vec![Polynomial::one()]
        } else {
            Vec::new()
        };
    }
    let (head, rest) = (vars[0], &vars[1..]);
    (0..=k)
        .flat_map(|e| {
            monomials_of_degree(rest, k - e)
                .into_iter()
                .map(move |m| &m * &Polynomial::monomial(Monomial::var_pow(head, e)))
        })
        .collect()
}

/// Largest `k` with `p` in the `k`-th power of the center ideal.
pub fn multiplicity_along_center(step: &LinkStep, p: &Polynomial) -> Result<u32, LinkError> {
    multiplicity_along_center_with(step, p, &Limits::default())
}

pub fn multiplicity_along_center_with(
    step: &LinkStep,
    p: &Polynomial,
    limits: &Limits,
) -> Result<u32, LinkError> {
    let homogeneous = matches!(
        p.bidegree_of(&step.source.weights()),
        Homogeneity::Homogeneous(_)
    );
    if p.is_zero() || !homogeneous {
        return Err(LinkError::BadDivisor(p.to_string()));
    }
    let mut k = 0;
    while k < p.total_degree().unwrap_or(0) {
        let gens = monomials_of_degree(step.center_vars(), k + 1);
        if !member(p, &gens, limits)? {
            break;
        }
        k += 1;
    }
    Ok(k)
}

/// Transport a certified action across one link.
///
/// The center must be preserved: the ideal `(t1, x3)` is stable for a line
/// link and the center point is fixed for a point link. The result is the
/// standard action of the target, accepted only if it is certified and
/// `φ ∘ σ = σ' ∘ φ` holds exactly.
pub fn transport_action(
    step: &LinkStep,
    a: &ActionCandidate,
) -> Result<ActionCandidate, LinkError> {
    transport_action_with(step, a, &Limits::default())
}

pub fn transport_action_with(
    step: &LinkStep,
    a: &ActionCandidate,
    limits: &Limits,
) -> Result<ActionCandidate, LinkError> {
    if a.bundle() != step.source {
        return Err(LinkError::Malformed(format!(
            "action lives on {}, link starts at {}",
            a.bundle(),
            step.source
        )));
    }
    let boundary = standard_boundary();
    let cert = verify_all_with(a, &boundary, &BasePoint::standard(), limits)?;
    if !cert.valid {
        return Err(resource_or(
            &cert,
            LinkError::InvalidSource(cert.rejected_by),
        ));
    }
    check_center_preserved(step, a, limits)?;

    let target = standard_action(&step.target);
    let cert = verify_all_with(&target, &boundary, &BasePoint::standard(), limits)?;
    if !cert.valid {
        return Err(resource_or(
            &cert,
            LinkError::InvalidTarget {
                bundle: step.target,
                rejected_by: cert.rejected_by,
            },
        ));
    }
    check_compatibility(&link_map(step)?, a, &target)?;
    Ok(target)
}

/// `x3` and `t1`, the boundary every certified action is checked against.
pub fn standard_boundary() -> Vec<Polynomial> {
    vec![Polynomial::var(Var::X3), Polynomial::var(Var::T1)]
}

/// The point `t1 = x2 = x3 = 0`, i.e. `[0:1; 1:0:0]`.
pub fn point_center() -> BasePoint {
    BasePoint::from_integers([0, 1, 1, 0, 0]).unwrap()
}

// A certificate that failed only for lack of resources is reported as such.
fn resource_or(cert: &Certificate, other: LinkError) -> LinkError {
    if cert.hit_resource_limit() {
        LinkError::Resource(GroebnerError::ResourceLimit(format!(
            "certificate on {} is inconclusive",
            cert.bundle
        )))
    } else {
        other
    }
}

fn check_center_preserved(
    step: &LinkStep,
    a: &ActionCandidate,
    limits: &Limits,
) -> Result<(), LinkError> {
    match step.kind {
        LinkKind::Line => {
            let center = step.center_ideal();
            for v in step.center_vars() {
                let img = a.image(*v);
                if !member(img, &center, limits)? {
                    return Err(LinkError::CenterNotStable(format!(
                        "σ*({v}) = {img} is not in (t1, x3)"
                    )));
                }
            }
            Ok(())
        }
        LinkKind::Point => a
            .fixes_point(&point_center())
            .map_err(LinkError::CenterNotStable),
    }
}

/// `φ ∘ σ = σ' ∘ φ`, with the torus factor of `φ` applied to both sides.
pub fn check_compatibility(
    map: &RationalMap,
    source: &ActionCandidate,
    target: &ActionCandidate,
) -> Result<(), LinkError> {
    let via_source: Vec<Polynomial> = map.images.iter().map(|img| source.pull_back(img)).collect();
    let via_target: Vec<Polynomial> = target
        .images()
        .iter()
        .map(|img| map.pull_back(img))
        .collect();
    for ((v, l), r) in Var::COX.iter().zip(&via_source).zip(&via_target) {
        let l = &map.torus_factor * l;
        let r = &map.torus_factor * r;
        if l != r {
            return Err(LinkError::ChartMismatch(format!("{v}: {l} != {r}")));
        }
    }
    Ok(())
}

/// Per-step record of a synthesis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: LinkStep,
    pub images: BTreeMap<&'static str, String>,
    pub e_multiplicity: u32,
    pub old_fiber_multiplicity: u32,
    pub old_fiber_class: DivisorClass,
    pub e_class: DivisorClass,
    pub f_class: DivisorClass,
    pub action: BTreeMap<&'static str, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Synthesis {
    pub bundle: BundleType,
    pub plan: LinkPlan,
    pub steps: Vec<StepRecord>,
    pub certificate: Certificate,
    #[serde(skip)]
    pub action: ActionCandidate,
}

impl Synthesis {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("synthesis serializes")
    }
}

/// Build and certify an action on `target` by transporting the product action
/// along [`plan_links`], tracking the boundary classes at every step.
pub fn synthesize(target: &BundleType) -> Result<Synthesis, LinkError> {
    synthesize_with(target, &Limits::default())
}

pub fn synthesize_with(target: &BundleType, limits: &Limits) -> Result<Synthesis, LinkError> {
    let plan = plan_links(target);
    let mut action = standard_action(&BundleType::product());
    let mut steps = Vec::with_capacity(plan.len());
    for (index, step) in plan.steps.iter().enumerate() {
        let wrap = |error: LinkError| LinkError::Step {
            index,
            error: Box::new(error),
        };
        let map = link_map(step).map_err(wrap)?;
        action = transport_action_with(step, &action, limits).map_err(wrap)?;
        let record = transport_boundary(step, &map, &action).map_err(wrap)?;
        steps.push(record);
    }
    let certificate = verify_all_with(
        &action,
        &standard_boundary(),
        &BasePoint::standard(),
        limits,
    )?;
    if !certificate.valid {
        return Err(resource_or(
            &certificate,
            LinkError::InvalidTarget {
                bundle: *target,
                rejected_by: certificate.rejected_by,
            },
        ));
    }
    Ok(Synthesis {
        bundle: *target,
        plan,
        steps,
        certificate,
        action,
    })
}

// E = {x3 = 0} contains the center, the old fiber {t1 = 0} is contracted and
// the new boundary fiber is a fiber of the target.
fn transport_boundary(
    step: &LinkStep,
    map: &RationalMap,
    action: &ActionCandidate,
) -> Result<StepRecord, LinkError> {
    let (x3, t1) = (Polynomial::var(Var::X3), Polynomial::var(Var::T1));
    let source_e = class_of_divisor(&step.source, &x3)?;
    let source_f = class_of_divisor(&step.source, &t1)?;
    let e_mult = multiplicity_along_center(step, &x3)?;
    let f_mult = multiplicity_along_center(step, &t1)?;
    let e_class = transport_class(step, &source_e, e_mult as i64)?;
    let old_fiber_class = transport_class(step, &source_f, f_mult as i64)?;
    let f_class = transport_class(step, &DivisorClass::FIBER, 0)?;
    let on_target = (
        class_of_divisor(&step.target, &x3)?,
        class_of_divisor(&step.target, &t1)?,
    );
    if (e_class, f_class) != (DivisorClass::XI, DivisorClass::FIBER)
        || on_target != (e_class, f_class)
        || old_fiber_class != DivisorClass::ZERO
    {
        return Err(LinkError::BoundaryMismatch {
            e: e_class,
            f: f_class,
        });
    }
    Ok(StepRecord {
        step: step.clone(),
        images: Var::COX
            .iter()
            .zip(&map.images)
            .map(|(v, p)| (v.name(), p.to_string()))
            .collect(),
        e_multiplicity: e_mult,
        old_fiber_multiplicity: f_mult,
        old_fiber_class,
        e_class,
        f_class,
        action: action.to_map(),
    })
}
