use std::cmp::Ordering;
use std::fmt;

/// Number of variables in the fixed ring.
pub const NVARS: usize = 11;

/// The fixed, ordered variable set: Cox coordinates, action parameters, and
/// primed parameter copies used by the group-law check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T1,
    T2,
    X1,
    X2,
    X3,
    U,
    V,
    W,
    UPrime,
    VPrime,
    WPrime,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::T1,
        Var::T2,
        Var::X1,
        Var::X2,
        Var::X3,
        Var::U,
        Var::V,
        Var::W,
        Var::UPrime,
        Var::VPrime,
        Var::WPrime,
    ];

    /// The five Cox coordinates, in tuple order.
    pub const COX: [Var; 5] = [Var::T1, Var::T2, Var::X1, Var::X2, Var::X3];

    /// Group coordinates `(u, v, w)`.
    pub const PARAMS: [Var; 3] = [Var::U, Var::V, Var::W];

    pub const PRIMED: [Var; 3] = [Var::UPrime, Var::VPrime, Var::WPrime];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::T1 => "t1",
            Var::T2 => "t2",
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::X3 => "x3",
            Var::U => "u",
            Var::V => "v",
            Var::W => "w",
            Var::UPrime => "u'",
            Var::VPrime => "v'",
            Var::WPrime => "w'",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == name)
    }

    pub fn is_cox(self) -> bool {
        self.index() < 5
    }

    pub fn is_parameter(self) -> bool {
        !self.is_cox()
    }

    /// `u -> u'` etc.; identity on everything else.
    pub fn primed(self) -> Var {
        match self {
            Var::U => Var::UPrime,
            Var::V => Var::VPrime,
            Var::W => Var::WPrime,
            other => other,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector over the fixed variable set.
///
/// Ordered graded-lexicographically: total degree first, ties broken by the
/// exponent of the largest variable (`w'`) downwards to `t1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u32; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        let mut m = Monomial::one();
        m.0[v.index()] = e;
        m
    }

    pub fn from_exponents(exps: [u32; NVARS]) -> Self {
        Monomial(exps)
    }

    /// Build `t1^b1 t2^b2 x1^a1 x2^a2 x3^a3`.
    pub fn cox(b1: u32, b2: u32, a1: u32, a2: u32, a3: u32) -> Self {
        let mut m = Monomial::one();
        m.0[0] = b1;
        m.0[1] = b2;
        m.0[2] = a1;
        m.0[3] = a2;
        m.0[4] = a3;
        m
    }

    pub fn exponents(&self) -> &[u32; NVARS] {
        &self.0
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = [0; NVARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i] + other.0[i];
        }
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut out = [0; NVARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = other.0[i] - self.0[i];
        }
        Some(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = [0; NVARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i].max(other.0[i]);
        }
        Monomial(out)
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables with nonzero exponent, in fixed order.
    pub fn support(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| (Var::from_index(i), *e))
    }

    pub fn involves_parameters(&self) -> bool {
        self.support().any(|(v, _)| v.is_parameter())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.support() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_is_degree_first() {
        let a = Monomial::var_pow(Var::T1, 3);
        let b = Monomial::var(Var::W).mul(&Monomial::var(Var::X3));
        assert!(a > b);
    }

    #[test]
    fn ties_break_on_largest_variable() {
        // t1*x3 vs t2*x1: x3 is the larger variable
        let a = Monomial::cox(1, 0, 0, 0, 1);
        let b = Monomial::cox(0, 1, 1, 0, 0);
        assert!(a > b);
        assert!(Monomial::var(Var::U) > Monomial::var(Var::X3));
        assert!(Monomial::var(Var::T2) > Monomial::var(Var::T1));
    }

    #[test]
    fn quotient_and_lcm() {
        let a = Monomial::cox(1, 2, 0, 0, 1);
        let b = Monomial::cox(2, 0, 0, 0, 1);
        assert_eq!(a.lcm(&b), Monomial::cox(2, 2, 0, 0, 1));
        assert_eq!(
            Monomial::var(Var::T1).quotient_of(&b),
            Some(Monomial::cox(1, 0, 0, 0, 1))
        );
        assert_eq!(a.quotient_of(&b), None);
        assert!(Monomial::var(Var::T1).coprime(&Monomial::var(Var::X3)));
    }

    #[test]
    fn names_round_trip() {
        for v in Var::ALL {
            assert_eq!(Var::from_name(v.name()), Some(v));
        }
        assert_eq!(Var::from_name("y"), None);
    }
}
