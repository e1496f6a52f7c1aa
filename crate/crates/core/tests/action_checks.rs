use std::collections::BTreeMap;

use ga3_core::action::{
    orbit_rank, standard_action, verify_all, verify_group_law, ActionCandidate, BasePoint,
    CheckName,
};
use ga3_core::bundle::BundleType;
use ga3_core::polyalg::{poly, rat, Polynomial, Var};
use proptest::prelude::*;

fn b(d1: u32, d2: u32) -> BundleType {
    BundleType::new(d1, d2).unwrap()
}

fn std_boundary() -> Vec<Polynomial> {
    vec![poly("x3"), poly("t1")]
}

#[test]
fn standard_action_valid_on_grid() {
    for bt in BundleType::grid(5) {
        let cert = verify_all(
            &standard_action(&bt),
            &std_boundary(),
            &BasePoint::standard(),
        )
        .unwrap();
        assert!(cert.valid, "{bt}");
        assert_eq!(cert.orbit_rank.rank, Some(3));
    }
}

#[test]
fn mutants_rejected_by_intended_check() {
    let bt = b(1, 1);
    let std = standard_action(&bt);
    let cases = [
        (
            std.clone().with_image(Var::T2, poly("t2")),
            std_boundary(),
            CheckName::OrbitRank,
        ),
        (
            std.clone().with_image(Var::T2, poly("t2 + u^2*t1")),
            std_boundary(),
            CheckName::GroupLaw,
        ),
        (
            std.clone().with_image(Var::X1, poly("x1 + v*x3")),
            std_boundary(),
            CheckName::Equivariance,
        ),
        (
            std.clone().with_image(Var::T2, poly("t2 + t1")),
            std_boundary(),
            CheckName::Identity,
        ),
        (
            std.clone(),
            vec![poly("x3"), poly("t2")],
            CheckName::BoundaryStability,
        ),
    ];
    for (a, boundary, expected) in cases {
        let cert = verify_all(&a, &boundary, &BasePoint::standard()).unwrap();
        assert!(!cert.valid);
        assert_eq!(cert.rejected_by, Some(expected), "{:?}", a.to_map());
        assert!(cert.verdict(expected).witness().is_some());
    }
}

#[test]
fn certificate_json_is_stable() {
    let cert = verify_all(
        &standard_action(&b(2, 1)),
        &std_boundary(),
        &BasePoint::standard(),
    )
    .unwrap();
    let j = cert.to_json();
    assert_eq!(j["valid"], true);
    assert_eq!(j["identity"]["verdict"], "pass");
    assert_eq!(j["orbit_rank"]["rank"], 3);
    assert_eq!(
        j["ht_coefficients"]["coefficients"],
        serde_json::json!([3, 5])
    );
    assert_eq!(j["action"]["x1"], "t1^2*x3*v + x1");
    let again = verify_all(
        &standard_action(&b(2, 1)),
        &std_boundary(),
        &BasePoint::standard(),
    )
    .unwrap();
    assert_eq!(j.to_string(), again.to_json().to_string());
}

/// Another action on P¹ × P² with the same boundary:
/// `x2 ↦ x2 + v·x1 + (v²/2 + w)·x3`.
fn jet_action() -> ActionCandidate {
    ActionCandidate::new(
        b(0, 0),
        [
            poly("t1"),
            poly("t2 + u*t1"),
            poly("x1 + v*x3"),
            poly("x2 + v*x1 + (1/2*v^2 + w)*x3"),
            poly("x3"),
        ],
    )
}

#[test]
fn jet_action_is_valid() {
    let cert = verify_all(&jet_action(), &std_boundary(), &BasePoint::standard()).unwrap();
    assert!(cert.valid, "{cert:?}");
}

fn chart_restriction(a: &ActionCandidate) -> BTreeMap<Var, Polynomial> {
    let chart = BTreeMap::from([(Var::T1, Polynomial::one()), (Var::X3, Polynomial::one())]);
    Var::COX
        .iter()
        .map(|v| (*v, a.image(*v).substitute(&chart)))
        .collect()
}

proptest! {
    #[test]
    fn standard_action_is_translation_on_chart(d2 in 0u32..=6, gap in 0u32..=6) {
        let a = standard_action(&b(d2 + gap, d2));
        let r = chart_restriction(&a);
        prop_assert_eq!(&r[&Var::T1], &Polynomial::one());
        prop_assert_eq!(&r[&Var::X3], &Polynomial::one());
        prop_assert_eq!(&r[&Var::T2], &poly("t2 + u"));
        prop_assert_eq!(&r[&Var::X1], &poly("x1 + v"));
        prop_assert_eq!(&r[&Var::X2], &poly("x2 + w"));
    }

    #[test]
    fn full_rank_at_chart_points(d2 in 0u32..=4, gap in 0u32..=4,
                                 t1 in 1i64..=5, t2 in -5i64..=5,
                                 x1 in -5i64..=5, x2 in -5i64..=5, x3 in 1i64..=5,
                                 neg in any::<bool>()) {
        let s = if neg { -1 } else { 1 };
        let p = BasePoint::from_integers([s * t1, t2, x1, x2, x3]).unwrap();
        prop_assert_eq!(orbit_rank(&standard_action(&b(d2 + gap, d2)), &p), Ok(3));
    }

    #[test]
    fn scaled_translation_satisfies_group_law(c in -4i64..=4, d2 in 0u32..=3, gap in 0u32..=3) {
        // t2 ↦ t2 + c·u·t1 is a homomorphism for every constant c
        let bt = b(d2 + gap, d2);
        let img = &poly("t2") + &poly("u*t1").scale(&rat(c));
        let a = standard_action(&bt).with_image(Var::T2, img);
        prop_assert!(verify_group_law(&a).is_pass());
    }
}
