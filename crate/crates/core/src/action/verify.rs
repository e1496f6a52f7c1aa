use std::collections::BTreeMap;

use num::{Integer, Zero};
use serde::Serialize;

use super::{ActionCandidate, ActionError, BasePoint};
use crate::bundle::{
    anticanonical_class, class_of_divisor, generates_effective_cone, BundleType, DivisorClass,
};
use crate::linalg::rank;
use crate::polyalg::{
    rat, GroebnerBasis, GroebnerError, Homogeneity, Limits, Membership, Polynomial, Rational, Var,
};

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail {
        witness: String,
    },
    Inconclusive {
        reason: String,
        resource_limit: bool,
    },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            Verdict::Fail { witness } => Some(witness),
            _ => None,
        }
    }

    fn fail(witness: impl Into<String>) -> Self {
        Verdict::Fail {
            witness: witness.into(),
        }
    }

    fn from_groebner(e: GroebnerError) -> Self {
        Verdict::Inconclusive {
            reason: e.to_string(),
            resource_limit: true,
        }
    }

    fn hit_resource_limit(&self) -> bool {
        matches!(
            self,
            Verdict::Inconclusive {
                resource_limit: true,
                ..
            }
        )
    }
}

/// The checks of a certificate, in the order a candidate is rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Identity,
    Equivariance,
    GroupLaw,
    IrrelevantLocus,
    BoundaryStability,
    OrbitRank,
    HtCoefficients,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentVerdict {
    pub component: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub rank: Option<usize>,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// Necessary conditions on the boundary: its classes form a basis of Pic,
/// `-K = a1·D1 + a2·D2` with both `a_i >= 2`, and they span the effective cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HtCheck {
    pub classes: Vec<DivisorClass>,
    pub anticanonical: DivisorClass,
    pub coefficients: Option<[i64; 2]>,
    pub picard_basis: bool,
    pub generates_effective_cone: bool,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// Complete verification record for one candidate and boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub bundle: BundleType,
    pub action: BTreeMap<&'static str, String>,
    pub boundary: Vec<String>,
    pub base_point: BasePoint,
    pub identity: Verdict,
    pub equivariance: Verdict,
    pub group_law: Verdict,
    pub irrelevant_locus: Verdict,
    pub boundary_stability: Vec<ComponentVerdict>,
    pub orbit_rank: RankCheck,
    pub ht_coefficients: HtCheck,
    pub valid: bool,
    pub rejected_by: Option<CheckName>,
}

impl Certificate {
    /// Verdicts in rejection order; boundary components are folded into one.
    pub fn verdicts(&self) -> Vec<(CheckName, &Verdict)> {
        let stability = self
            .boundary_stability
            .iter()
            .map(|c| &c.verdict)
            .find(|v| !v.is_pass())
            .unwrap_or(&Verdict::Pass);
        vec![
            (CheckName::Identity, &self.identity),
            (CheckName::Equivariance, &self.equivariance),
            (CheckName::GroupLaw, &self.group_law),
            (CheckName::IrrelevantLocus, &self.irrelevant_locus),
            (CheckName::BoundaryStability, stability),
            (CheckName::OrbitRank, &self.orbit_rank.verdict),
            (CheckName::HtCoefficients, &self.ht_coefficients.verdict),
        ]
    }

    pub fn verdict(&self, check: CheckName) -> &Verdict {
        self.verdicts()
            .into_iter()
            .find(|(c, _)| *c == check)
            .map(|(_, v)| v)
            .unwrap()
    }

    pub fn hit_resource_limit(&self) -> bool {
        self.verdicts().iter().any(|(_, v)| v.hit_resource_limit())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificate serializes")
    }
}

fn params_zero() -> BTreeMap<Var, Polynomial> {
    Var::PARAMS
        .iter()
        .map(|v| (*v, Polynomial::zero()))
        .collect()
}

/// `σ_0` must be the identity.
pub fn verify_identity(a: &ActionCandidate) -> Verdict {
    let zero = params_zero();
    for (v, img) in Var::COX.iter().zip(a.images()) {
        let at_zero = img.substitute(&zero);
        if at_zero != Polynomial::var(*v) {
            return Verdict::fail(format!("{v}: image at u=v=w=0 is {at_zero}"));
        }
    }
    Verdict::Pass
}

/// Each image must be bihomogeneous of its coordinate's weight, so the family
/// commutes with the torus and descends to the bundle.
pub fn verify_equivariance(a: &ActionCandidate) -> Verdict {
    let w = a.bundle().weights();
    for (v, img) in Var::COX.iter().zip(a.images()) {
        let want = w.of(*v);
        match img.bidegree_of(&w) {
            Homogeneity::Homogeneous(b) if b == want => {}
            Homogeneity::Any => return Verdict::fail(format!("{v}: image is zero")),
            _ => {
                let (m, c) = img
                    .terms()
                    .rev()
                    .find(|(m, _)| w.of_monomial(m) != want)
                    .unwrap();
                let term = Polynomial::term(c.clone(), m.clone());
                return Verdict::fail(format!(
                    "{v}: term {term} has bidegree {}, expected {want}",
                    w.of_monomial(m)
                ));
            }
        }
    }
    Verdict::Pass
}

/// `σ_(u',v',w') ∘ σ_(u,v,w) = σ_(u+u',v+v',w+w')` as polynomial identities.
pub fn verify_group_law(a: &ActionCandidate) -> Verdict {
    let inner = a.assignment();
    let sum: BTreeMap<Var, Polynomial> = Var::PARAMS
        .iter()
        .map(|p| (*p, &Polynomial::var(*p) + &Polynomial::var(p.primed())))
        .collect();
    for (v, img) in Var::COX.iter().zip(a.images()) {
        let composed = img.primed().substitute(&inner);
        let added = img.substitute(&sum);
        if composed != added {
            return Verdict::fail(format!(
                "{v}: composite minus sum-parameter image is {}",
                &composed - &added
            ));
        }
    }
    Verdict::Pass
}

/// The images may never land in `{t = 0} ∪ {x = 0}`: `t1, t2` must lie in
/// `(σt1, σt2)` and each `x_i·t_j^k` in `(σx1, σx2, σx3)` for both `j`.
pub fn verify_irrelevant_locus(a: &ActionCandidate, limits: &Limits) -> Verdict {
    let imgs = a.images();
    let t_gens = [imgs[0].clone(), imgs[1].clone()];
    let x_gens = [imgs[2].clone(), imgs[3].clone(), imgs[4].clone()];
    let t_basis = match GroebnerBasis::compute(&t_gens, limits) {
        Ok(gb) => gb,
        Err(e) => return Verdict::from_groebner(e),
    };
    for v in [Var::T1, Var::T2] {
        if let Membership::NotProven { normal_form } = t_basis.member(&Polynomial::var(v)) {
            return not_proven(
                a,
                format!("{v} not in (σ(t1), σ(t2)); normal form {normal_form}"),
            );
        }
    }
    let x_basis = match GroebnerBasis::compute(&x_gens, limits) {
        Ok(gb) => gb,
        Err(e) => return Verdict::from_groebner(e),
    };
    // enough t-power to absorb any t-dependence of the images
    let kmax = imgs
        .iter()
        .map(|p| p.degree_in(Var::T1) + p.degree_in(Var::T2))
        .sum::<u32>()
        + 1;
    for xv in [Var::X1, Var::X2, Var::X3] {
        for tv in [Var::T1, Var::T2] {
            let found = (0..=kmax).any(|k| {
                let probe = &Polynomial::var(xv) * &Polynomial::var(tv).pow(k);
                x_basis.member(&probe).is_member()
            });
            if !found {
                return not_proven(
                    a,
                    format!("no {xv}*{tv}^k with k <= {kmax} in (σ(x1), σ(x2), σ(x3))"),
                );
            }
        }
    }
    Verdict::Pass
}

// Membership failed: look for a concrete point sent into the irrelevant locus,
// otherwise report the membership failure as inconclusive.
fn not_proven(a: &ActionCandidate, reason: String) -> Verdict {
    match irrelevant_witness(a) {
        Some(w) => Verdict::fail(w),
        None => Verdict::Inconclusive {
            reason,
            resource_limit: false,
        },
    }
}

fn irrelevant_witness(a: &ActionCandidate) -> Option<String> {
    let small = [0i64, 1, -1];
    let t_choices = [[0i64, 1], [1, 0], [1, 1], [1, -1]];
    for t in t_choices {
        for x1 in small {
            for x2 in small {
                for x3 in small {
                    if x1 == 0 && x2 == 0 && x3 == 0 {
                        continue;
                    }
                    for u in small {
                        for v in small {
                            for w in small {
                                let vals = [t[0], t[1], x1, x2, x3, u, v, w];
                                let assign: BTreeMap<Var, Rational> = Var::ALL[..8]
                                    .iter()
                                    .zip(vals)
                                    .map(|(var, n)| (*var, rat(n)))
                                    .collect();
                                let img: Vec<Rational> = a
                                    .images()
                                    .iter()
                                    .map(|p| p.evaluate_partial(&assign).constant_term())
                                    .collect();
                                let t_dead = img[..2].iter().all(Zero::is_zero);
                                let x_dead = img[2..].iter().all(Zero::is_zero);
                                if t_dead || x_dead {
                                    return Some(format!(
                                        "point ({}, {}, {}, {}, {}) at (u,v,w) = ({u}, {v}, {w}) maps to ({})",
                                        t[0],
                                        t[1],
                                        x1,
                                        x2,
                                        x3,
                                        img.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Every boundary component must be carried to itself: `σ*(p) = p` exactly.
pub fn verify_boundary_stability(
    a: &ActionCandidate,
    boundary: &[Polynomial],
) -> Result<Vec<ComponentVerdict>, ActionError> {
    let w = a.bundle().weights();
    boundary
        .iter()
        .map(|p| {
            if !matches!(p.bidegree_of(&w), Homogeneity::Homogeneous(_)) {
                return Err(ActionError::HeterogeneousBoundary(p.to_string()));
            }
            let moved = a.pull_back(p);
            let verdict = if moved == *p {
                Verdict::Pass
            } else {
                Verdict::fail(format!("σ*({p}) - ({p}) = {}", &moved - p))
            };
            Ok(ComponentVerdict {
                component: p.to_string(),
                verdict,
            })
        })
        .collect()
}

/// Rank of the differential at the group identity of `g ↦ g·p0`, in the chart
/// `(t2/t1, x1/(t1^d1 x3), x2/(t1^d2 x3))`.
pub fn orbit_rank(a: &ActionCandidate, p0: &BasePoint) -> Result<usize, ActionError> {
    if !p0.in_standard_chart() {
        return Err(ActionError::OutsideChart);
    }
    let bt = a.bundle();
    let at_p0: Vec<Polynomial> = a
        .images()
        .iter()
        .map(|p| p.substitute(&p0.assignment()))
        .collect();
    let (t1, t2, x1, x2, x3) = (&at_p0[0], &at_p0[1], &at_p0[2], &at_p0[3], &at_p0[4]);
    let charts = [
        (t2.clone(), t1.clone()),
        (x1.clone(), &t1.pow(bt.d1()) * x3),
        (x2.clone(), &t1.pow(bt.d2()) * x3),
    ];
    let zero = params_zero();
    let at_origin = |p: &Polynomial| p.substitute(&zero).constant_term();
    let mut jac = Vec::with_capacity(3);
    for (num, den) in &charts {
        let g0 = at_origin(den);
        if g0.is_zero() {
            return Err(ActionError::OutsideChart);
        }
        let n0 = at_origin(num);
        let row = Var::PARAMS
            .iter()
            .map(|p| {
                let dn = at_origin(&num.differentiate(*p));
                let dg = at_origin(&den.differentiate(*p));
                (dn * &g0 - &n0 * dg) / (&g0 * &g0)
            })
            .collect::<Vec<Rational>>();
        jac.push(row);
    }
    Ok(rank(&jac))
}

/// Solve `-K = a1·D1 + a2·D2` over the integers.
pub fn ht_coefficients(
    bundle: &BundleType,
    d1: &DivisorClass,
    d2: &DivisorClass,
) -> Result<Option<(i64, i64)>, ActionError> {
    let k = anticanonical_class(bundle);
    let det = d1.a * d2.b - d2.a * d1.b;
    if det == 0 {
        return Err(ActionError::DegenerateClasses);
    }
    let n1 = k.a * d2.b - d2.a * k.b;
    let n2 = d1.a * k.b - k.a * d1.b;
    if !n1.is_multiple_of(&det) || !n2.is_multiple_of(&det) {
        return Ok(None);
    }
    Ok(Some((n1 / det, n2 / det)))
}

fn ht_check(bundle: &BundleType, boundary: &[Polynomial]) -> HtCheck {
    let anticanonical = anticanonical_class(bundle);
    let mut out = HtCheck {
        classes: Vec::new(),
        anticanonical,
        coefficients: None,
        picard_basis: false,
        generates_effective_cone: false,
        verdict: Verdict::Pass,
    };
    for p in boundary {
        match class_of_divisor(bundle, p) {
            Ok(c) => out.classes.push(c),
            Err(e) => {
                out.verdict = Verdict::fail(format!("boundary component {p}: {e}"));
                return out;
            }
        }
    }
    let [c1, c2] = match out.classes.as_slice() {
        [c1, c2] => [*c1, *c2],
        other => {
            out.verdict = Verdict::fail(format!(
                "boundary has {} components; Pic has rank 2",
                other.len()
            ));
            return out;
        }
    };
    out.picard_basis = (c1.a * c2.b - c2.a * c1.b).abs() == 1;
    out.generates_effective_cone = generates_effective_cone(bundle, &c1, &c2);
    match ht_coefficients(bundle, &c1, &c2) {
        Err(e) => out.verdict = Verdict::fail(e.to_string()),
        Ok(None) => {
            out.verdict = Verdict::fail(format!("-K = {anticanonical} has no integral expansion"))
        }
        Ok(Some((a1, a2))) => {
            out.coefficients = Some([a1, a2]);
            if a1 < 2 || a2 < 2 {
                out.verdict = Verdict::fail(format!("coefficients ({a1}, {a2}) are not both >= 2"));
            } else if !out.picard_basis {
                out.verdict = Verdict::fail("boundary classes do not form a basis of Pic");
            } else if !out.generates_effective_cone {
                out.verdict = Verdict::fail("boundary classes do not span the effective cone");
            }
        }
    }
    out
}

pub fn verify_all(
    a: &ActionCandidate,
    boundary: &[Polynomial],
    p0: &BasePoint,
) -> Result<Certificate, ActionError> {
    verify_all_with(a, boundary, p0, &Limits::default())
}

pub fn verify_all_with(
    a: &ActionCandidate,
    boundary: &[Polynomial],
    p0: &BasePoint,
    limits: &Limits,
) -> Result<Certificate, ActionError> {
    let bt = a.bundle();
    let rank = orbit_rank(a, p0)?;
    let orbit = RankCheck {
        rank: Some(rank),
        verdict: if rank == 3 {
            Verdict::Pass
        } else {
            Verdict::fail(format!(
                "orbit differential at the base point has rank {rank} < 3"
            ))
        },
    };
    let mut cert = Certificate {
        bundle: bt,
        action: a.to_map(),
        boundary: boundary.iter().map(|p| p.to_string()).collect(),
        base_point: p0.clone(),
        identity: verify_identity(a),
        equivariance: verify_equivariance(a),
        group_law: verify_group_law(a),
        irrelevant_locus: verify_irrelevant_locus(a, limits),
        boundary_stability: verify_boundary_stability(a, boundary)?,
        orbit_rank: orbit,
        ht_coefficients: ht_check(&bt, boundary),
        valid: false,
        rejected_by: None,
    };
    cert.rejected_by = cert
        .verdicts()
        .into_iter()
        .find(|(_, v)| !v.is_pass())
        .map(|(c, _)| c);
    cert.valid = cert.rejected_by.is_none();
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::standard_action;
    use crate::polyalg::poly;

    fn b(d1: u32, d2: u32) -> BundleType {
        BundleType::new(d1, d2).unwrap()
    }

    fn std_boundary() -> Vec<Polynomial> {
        vec![poly("x3"), poly("t1")]
    }

    #[test]
    fn identity_axiom() {
        assert!(verify_identity(&standard_action(&b(3, 1))).is_pass());
        let shifted = standard_action(&b(0, 0)).with_image(Var::T2, poly("t2 + t1"));
        let v = verify_identity(&shifted);
        assert!(v.witness().unwrap().starts_with("t2"), "{v:?}");
        let squared = standard_action(&b(0, 0)).with_image(Var::T2, poly("t2 + u^2*t1"));
        assert!(verify_identity(&squared).is_pass());
    }

    #[test]
    fn equivariance() {
        for bt in BundleType::grid(4) {
            assert!(verify_equivariance(&standard_action(&bt)).is_pass());
        }
        let bad = standard_action(&b(1, 1)).with_image(Var::X1, poly("x1 + v*x3"));
        let v = verify_equivariance(&bad);
        assert_eq!(
            v.witness(),
            Some("x1: term x3*v has bidegree (0,1), expected (1,1)")
        );
        let ok = standard_action(&b(0, 0)).with_image(Var::X1, poly("x1 + v*x3"));
        assert!(verify_equivariance(&ok).is_pass());
    }

    #[test]
    fn group_law() {
        for bt in BundleType::grid(3) {
            assert!(verify_group_law(&standard_action(&bt)).is_pass());
        }
        let sq = standard_action(&b(1, 0)).with_image(Var::T2, poly("t2 + u^2*t1"));
        assert!(verify_group_law(&sq).is_fail());
        // reaches the group law only on d1 = 0
        let quad = |bt: BundleType| {
            let d = bt.d1();
            standard_action(&bt).with_image(
                Var::X1,
                poly(&format!("x1 + v*t1^{d}*x3 + v^2*t1^{}*x3^2", 2 * d)),
            )
        };
        assert!(verify_equivariance(&quad(b(1, 0))).is_fail());
        assert!(verify_equivariance(&quad(b(0, 0))).is_fail());
        // on P1 x P2 the quadratic x3^2 term is still not of weight (0,1)
        assert!(verify_group_law(&quad(b(0, 0))).is_fail());
    }

    #[test]
    fn irrelevant_locus() {
        let limits = Limits::default();
        for bt in BundleType::grid(3) {
            assert!(verify_irrelevant_locus(&standard_action(&bt), &limits).is_pass());
            assert!(verify_irrelevant_locus(&ActionCandidate::identity(bt), &limits).is_pass());
        }
        let collapsing = standard_action(&b(1, 1)).with_image(Var::X3, poly("t1*x3"));
        let v = verify_irrelevant_locus(&collapsing, &limits);
        assert!(v.is_fail(), "{v:?}");
        let tiny = Limits {
            max_basis: 1,
            max_degree: 1,
        };
        let v = verify_irrelevant_locus(&standard_action(&b(1, 1)), &tiny);
        assert!(v.hit_resource_limit() || v.is_pass());
    }

    #[test]
    fn boundary_stability() {
        let a = standard_action(&b(2, 1));
        let v = verify_boundary_stability(&a, &std_boundary()).unwrap();
        assert!(v.iter().all(|c| c.verdict.is_pass()));
        let v = verify_boundary_stability(&a, &[poly("t2")]).unwrap();
        assert!(v[0].verdict.is_fail());
        let id = ActionCandidate::identity(b(2, 1));
        let v = verify_boundary_stability(&id, &[poly("t2"), poly("x1 + t1^2*x3")]).unwrap();
        assert!(v.iter().all(|c| c.verdict.is_pass()));
        assert!(matches!(
            verify_boundary_stability(&a, &[poly("x1 + x3")]),
            Err(ActionError::HeterogeneousBoundary(_))
        ));
    }

    #[test]
    fn orbit_ranks() {
        let p0 = BasePoint::standard();
        for bt in BundleType::grid(4) {
            assert_eq!(orbit_rank(&standard_action(&bt), &p0), Ok(3));
            assert_eq!(orbit_rank(&ActionCandidate::identity(bt), &p0), Ok(0));
        }
        let dropped = standard_action(&b(1, 0)).with_image(Var::T2, poly("t2"));
        assert_eq!(orbit_rank(&dropped, &p0), Ok(2));
        let off = BasePoint::from_integers([0, 1, 0, 0, 1]).unwrap();
        assert_eq!(
            orbit_rank(&standard_action(&b(0, 0)), &off),
            Err(ActionError::OutsideChart)
        );
        // another chart point still sees the full translation group
        let p1 = BasePoint::from_integers([2, -1, 3, 1, -1]).unwrap();
        assert_eq!(orbit_rank(&standard_action(&b(2, 1)), &p1), Ok(3));
    }

    #[test]
    fn ht_solutions() {
        let (xi, f) = (DivisorClass::XI, DivisorClass::FIBER);
        for bt in BundleType::grid(5) {
            let s = (bt.d1() + bt.d2()) as i64;
            assert_eq!(ht_coefficients(&bt, &xi, &f), Ok(Some((3, 2 + s))));
        }
        assert_eq!(ht_coefficients(&b(0, 0), &xi, &f), Ok(Some((3, 2))));
        assert_eq!(ht_coefficients(&b(0, 0), &(xi + f), &f), Ok(Some((3, -1))));
        assert_eq!(
            ht_coefficients(&b(0, 0), &f, &(2 * f)),
            Err(ActionError::DegenerateClasses)
        );
        // 2ξ and F: 3 is not divisible by 2
        assert_eq!(ht_coefficients(&b(0, 0), &(2 * xi), &f), Ok(None));
    }

    #[test]
    fn full_certificates() {
        let p0 = BasePoint::standard();
        for bt in BundleType::grid(5) {
            let cert = verify_all(&standard_action(&bt), &std_boundary(), &p0).unwrap();
            assert!(cert.valid, "{bt}: {cert:?}");
            let s = (bt.d1() + bt.d2()) as i64;
            assert_eq!(cert.ht_coefficients.coefficients, Some([3, 2 + s]));
        }
        let a = standard_action(&b(1, 0));
        let cert = verify_all(&a, &[poly("x3"), poly("t2")], &p0).unwrap();
        assert!(!cert.valid);
        assert_eq!(cert.rejected_by, Some(CheckName::BoundaryStability));
        let cert = verify_all(&ActionCandidate::identity(b(1, 0)), &std_boundary(), &p0).unwrap();
        assert_eq!(cert.rejected_by, Some(CheckName::OrbitRank));
        assert_eq!(cert.orbit_rank.rank, Some(0));
    }
}
