use std::collections::BTreeMap;

use num::{One, Zero};
use serde::Serialize;

use super::{class_of_divisor, BundleError, BundleType, DivisorClass};
use crate::linalg::invert;
use crate::polyalg::{Homogeneity, Monomial, Polynomial, Rational, Var};

/// Torus-equivariant automorphism of `(A² \ 0) × (A³ \ 0)`, stored by its
/// pullback on the five Cox coordinates together with the inverse pullback.
///
/// Pulling back the equation of a divisor by `inverse` gives the equation of
/// its image under the automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxAutomorphism {
    pullback: [Polynomial; 5],
    inverse: [Polynomial; 5],
}

#[derive(Serialize)]
struct AutomorphismRecord {
    pullback: BTreeMap<&'static str, String>,
    inverse: BTreeMap<&'static str, String>,
}

impl CoxAutomorphism {
    pub fn identity() -> Self {
        let id = Var::COX.map(Polynomial::var);
        CoxAutomorphism {
            pullback: id.clone(),
            inverse: id,
        }
    }

    /// Build from block-diagonal linear data: `h*(t_i) = Σ t_mat[i][j] t_j` and
    /// `h*(x_i) = Σ x_mat[i][j] x_j`. Fails if either block is singular.
    pub fn linear(t_mat: [[Rational; 2]; 2], x_mat: [[Rational; 3]; 3]) -> Option<Self> {
        let t_inv = invert(&t_mat.iter().map(|r| r.to_vec()).collect::<Vec<_>>())?;
        let x_inv = invert(&x_mat.iter().map(|r| r.to_vec()).collect::<Vec<_>>())?;
        let t_rows: Vec<Vec<Rational>> = t_mat.iter().map(|r| r.to_vec()).collect();
        let x_rows: Vec<Vec<Rational>> = x_mat.iter().map(|r| r.to_vec()).collect();
        let build = |t: &[Vec<Rational>], x: &[Vec<Rational>]| -> [Polynomial; 5] {
            let lin = |row: &[Rational], vars: &[Var]| {
                row.iter()
                    .zip(vars)
                    .fold(Polynomial::zero(), |acc, (c, v)| {
                        &acc + &Polynomial::term(c.clone(), Monomial::var(*v))
                    })
            };
            let tv = [Var::T1, Var::T2];
            let xv = [Var::X1, Var::X2, Var::X3];
            [
                lin(&t[0], &tv),
                lin(&t[1], &tv),
                lin(&x[0], &xv),
                lin(&x[1], &xv),
                lin(&x[2], &xv),
            ]
        };
        Some(CoxAutomorphism {
            pullback: build(&t_rows, &x_rows),
            inverse: build(&t_inv, &x_inv),
        })
    }

    pub fn pullback_images(&self) -> &[Polynomial; 5] {
        &self.pullback
    }

    pub fn inverse_images(&self) -> &[Polynomial; 5] {
        &self.inverse
    }

    /// `p ∘ h`: the equation of `h⁻¹({p = 0})`.
    pub fn pull_back(&self, p: &Polynomial) -> Polynomial {
        p.substitute(&assignment(&self.pullback))
    }

    /// Equation of `h({p = 0})`.
    pub fn push_divisor(&self, p: &Polynomial) -> Polynomial {
        p.substitute(&assignment(&self.inverse))
    }

    /// Both compositions of pullback and inverse give the identity substitution.
    pub fn inverse_checks(&self) -> bool {
        let fwd = assignment(&self.pullback);
        let back = assignment(&self.inverse);
        Var::COX.iter().enumerate().all(|(i, v)| {
            let id = Polynomial::var(*v);
            self.pullback[i].substitute(&back) == id && self.inverse[i].substitute(&fwd) == id
        })
    }

    /// Every image is bihomogeneous of the weight of its variable, so the
    /// automorphism descends to the bundle.
    pub fn is_equivariant(&self, bundle: &BundleType) -> bool {
        let w = bundle.weights();
        Var::COX.iter().enumerate().all(|(i, v)| {
            let want = Homogeneity::Homogeneous(w.of(*v));
            self.pullback[i].bidegree_of(&w) == want && self.inverse[i].bidegree_of(&w) == want
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map = |imgs: &[Polynomial; 5]| {
            Var::COX
                .iter()
                .zip(imgs)
                .map(|(v, p)| (v.name(), p.to_string()))
                .collect()
        };
        serde_json::to_value(AutomorphismRecord {
            pullback: map(&self.pullback),
            inverse: map(&self.inverse),
        })
        .expect("automorphism serializes")
    }
}

fn assignment(images: &[Polynomial; 5]) -> BTreeMap<Var, Polynomial> {
    Var::COX
        .iter()
        .copied()
        .zip(images.iter().cloned())
        .collect()
}

fn linear_coefficients(p: &Polynomial, vars: &[Var]) -> Option<Vec<Rational>> {
    let mut out = vec![Rational::zero(); vars.len()];
    for (m, c) in p.terms() {
        let (v, e) = {
            let mut it = m.support();
            let first = it.next()?;
            if it.next().is_some() {
                return None;
            }
            first
        };
        if e != 1 {
            return None;
        }
        let i = vars.iter().position(|w| *w == v)?;
        out[i] = c.clone();
    }
    Some(out)
}

/// Automorphism `h` taking a boundary pair `(E, F)` with `E ~ ξ` and `F ~ F`
/// to the standard pair `({x3 = 0}, {t1 = 0})`.
///
/// The pullback satisfies `h*(x3) = E / c` and `h*(t1) = F / c'`: a shear
/// `x3 ↦ c1·x1 + c2·x2 + x3` (only through `x_i` with twist 0), preceded by
/// the swap `x_i ↔ x3` when `E` has no `x3` term, and likewise
/// `t1 ↦ t1 + v·t2` or the swap `t1 ↔ t2` on the base.
pub fn normalize_boundary(
    bundle: &BundleType,
    e_poly: &Polynomial,
    f_poly: &Polynomial,
) -> Result<CoxAutomorphism, BundleError> {
    let e_class = class_of_divisor(bundle, e_poly)?;
    if e_class != DivisorClass::XI {
        return Err(BundleError::WrongClass {
            expected: DivisorClass::XI,
            found: e_class,
        });
    }
    let f_class = class_of_divisor(bundle, f_poly)?;
    if f_class != DivisorClass::FIBER {
        return Err(BundleError::WrongClass {
            expected: DivisorClass::FIBER,
            found: f_class,
        });
    }
    let xs = [Var::X1, Var::X2, Var::X3];
    let ucoef = linear_coefficients(e_poly, &xs)
        .ok_or_else(|| BundleError::Inadmissible(e_poly.to_string()))?;
    for (i, c) in ucoef[..2].iter().enumerate() {
        if !c.is_zero() && bundle.twist(i) != 0 {
            return Err(BundleError::Inadmissible(e_poly.to_string()));
        }
    }
    let tcoef = linear_coefficients(f_poly, &[Var::T1, Var::T2])
        .ok_or_else(|| BundleError::Inadmissible(f_poly.to_string()))?;

    let one = Rational::one;
    let zero = Rational::zero;
    let mut x_mat = [
        [one(), zero(), zero()],
        [zero(), one(), zero()],
        [zero(), zero(), one()],
    ];
    // row for x3 is E scaled to have a unit coefficient on the pivot variable
    let pivot = if !ucoef[2].is_zero() {
        2
    } else {
        (0..2).find(|&i| !ucoef[i].is_zero()).unwrap()
    };
    let scale = ucoef[pivot].recip();
    x_mat[2] = [&ucoef[0] * &scale, &ucoef[1] * &scale, &ucoef[2] * &scale];
    if pivot != 2 {
        x_mat[pivot] = [zero(), zero(), one()];
    }

    let t_mat = if !tcoef[0].is_zero() {
        [[one(), &tcoef[1] / &tcoef[0]], [zero(), one()]]
    } else {
        [[zero(), one()], [one(), zero()]]
    };

    let h = CoxAutomorphism::linear(t_mat, x_mat)
        .ok_or_else(|| BundleError::Inadmissible(e_poly.to_string()))?;
    debug_assert!(h.inverse_checks());
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::poly;

    fn b(d1: u32, d2: u32) -> BundleType {
        BundleType::new(d1, d2).unwrap()
    }

    fn assert_normalizes(bt: BundleType, e: &str, f: &str) -> CoxAutomorphism {
        let (e, f) = (poly(e), poly(f));
        let h = normalize_boundary(&bt, &e, &f).unwrap();
        assert!(h.inverse_checks());
        assert!(h.is_equivariant(&bt));
        assert!(h.push_divisor(&e).scalar_multiple_of(&poly("x3")).is_some());
        assert!(h.push_divisor(&f).scalar_multiple_of(&poly("t1")).is_some());
        h
    }

    #[test]
    fn standard_pair_gives_identity() {
        let h = assert_normalizes(b(2, 1), "x3", "t1");
        assert_eq!(h, CoxAutomorphism::identity());
    }

    #[test]
    fn shear_on_product() {
        let h = assert_normalizes(b(0, 0), "x1 + x3", "t1");
        assert_eq!(h.pullback_images()[4], poly("x1 + x3"));
        assert_eq!(
            &h.pullback_images()[..4],
            &Var::COX[..4]
                .iter()
                .map(|v| Polynomial::var(*v))
                .collect::<Vec<_>>()[..]
        );
    }

    #[test]
    fn base_shift() {
        let h = assert_normalizes(b(3, 1), "2*x3", "t1 + 5*t2");
        assert_eq!(h.pullback_images()[0], poly("t1 + 5*t2"));
        assert_eq!(
            &h.pullback_images()[1..],
            &Var::COX[1..]
                .iter()
                .map(|v| Polynomial::var(*v))
                .collect::<Vec<_>>()[..]
        );
    }

    #[test]
    fn swaps_when_needed() {
        // no x3 term: only possible through a twist-zero coordinate
        let h = assert_normalizes(b(1, 0), "3*x2", "t2");
        assert_eq!(h.push_divisor(&poly("3*x2")), poly("3*x3"));
        assert_normalizes(b(0, 0), "x1 - x2", "2*t1 - t2");
        assert_normalizes(b(0, 0), "x2", "t2");
    }

    #[test]
    fn rejects_bad_inputs() {
        let bt = b(1, 1);
        assert!(matches!(
            normalize_boundary(&bt, &poly("x1"), &poly("t1")),
            Err(BundleError::WrongClass { .. })
        ));
        assert!(matches!(
            normalize_boundary(&bt, &poly("x3"), &poly("t1^2")),
            Err(BundleError::WrongClass { .. })
        ));
        assert!(matches!(
            normalize_boundary(&bt, &poly("x3 + x1"), &poly("t1")),
            Err(BundleError::Heterogeneous(_))
        ));
    }
}
