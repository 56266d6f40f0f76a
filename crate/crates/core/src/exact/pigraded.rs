use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::Zero;

use super::{format_rational, to_f64, Rational};
use crate::{Error, Result};

/// A finite sum `sum_k c_k pi^k` with rational coefficients. Only even
/// powers occur in practice; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiGraded {
    terms: BTreeMap<u32, Rational>,
}

impl PiGraded {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c * pi^power`.
    pub fn monomial(power: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(power, c);
        }
        Self { terms }
    }

    pub fn rational(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, power: u32) -> Rational {
        self.terms.get(&power).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// The `(power, coefficient)` pair when exactly one grade is present.
    pub fn single_grade(&self) -> Option<(u32, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, v)| (*k, v))
        } else {
            None
        }
    }

    /// Exact quotient of two values living in the same single grade.
    pub fn ratio(&self, other: &PiGraded) -> Result<Rational> {
        if self.is_zero() {
            if other.is_zero() {
                return Err(Error::InvalidParameter("0/0 ratio of pi-graded values".into()));
            }
            return Ok(Rational::zero());
        }
        let (pa, ca) = self
            .single_grade()
            .ok_or_else(|| Error::InvalidParameter("numerator has mixed grades".into()))?;
        let (pb, cb) = other
            .single_grade()
            .ok_or_else(|| Error::InvalidParameter("denominator is zero or has mixed grades".into()))?;
        if pa != pb {
            return Err(Error::GradeMismatch(pa, pb));
        }
        Ok(ca / cb)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(k, v)| to_f64(v) * std::f64::consts::PI.powi(*k as i32))
            .sum()
    }

    fn add_term(&mut self, power: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(power).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&power);
        }
    }
}

impl From<Rational> for PiGraded {
    fn from(c: Rational) -> Self {
        PiGraded::rational(c)
    }
}

impl AddAssign<&PiGraded> for PiGraded {
    fn add_assign(&mut self, rhs: &PiGraded) {
        for (k, v) in &rhs.terms {
            self.add_term(*k, v.clone());
        }
    }
}

impl Add for &PiGraded {
    type Output = PiGraded;
    fn add(self, rhs: &PiGraded) -> PiGraded {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for PiGraded {
    type Output = PiGraded;
    fn add(mut self, rhs: PiGraded) -> PiGraded {
        self += &rhs;
        self
    }
}

impl Neg for PiGraded {
    type Output = PiGraded;
    fn neg(self) -> PiGraded {
        PiGraded {
            terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl Sub for &PiGraded {
    type Output = PiGraded;
    fn sub(self, rhs: &PiGraded) -> PiGraded {
        self + &(-rhs.clone())
    }
}

impl Mul for &PiGraded {
    type Output = PiGraded;
    fn mul(self, rhs: &PiGraded) -> PiGraded {
        let mut out = PiGraded::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                out.add_term(ka + kb, va * vb);
            }
        }
        out
    }
}

impl Mul for PiGraded {
    type Output = PiGraded;
    fn mul(self, rhs: PiGraded) -> PiGraded {
        &self * &rhs
    }
}

impl std::iter::Sum for PiGraded {
    fn sum<I: Iterator<Item = PiGraded>>(iter: I) -> Self {
        let mut acc = PiGraded::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl fmt::Display for PiGraded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| match k {
                0 => format_rational(v),
                _ => format!("{}*pi^{}", format_rational(v), k),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn arb_pg() -> impl Strategy<Value = PiGraded> {
        proptest::collection::vec((0u32..4, -20i64..20, 1i64..9), 0..4).prop_map(|ts| {
            ts.into_iter()
                .map(|(k, p, q)| PiGraded::monomial(2 * k, rat(p, q)))
                .sum()
        })
    }

    #[test]
    fn no_zero_terms_stored() {
        let a = PiGraded::monomial(2, rat(1, 3));
        let b = PiGraded::monomial(2, rat(-1, 3));
        assert!((&a + &b).is_zero());
        assert!(PiGraded::monomial(4, rat(0, 1)).is_zero());
    }

    #[test]
    fn ratio_requires_same_grade() {
        let a = PiGraded::monomial(6, rat(7, 27));
        let b = PiGraded::monomial(6, rat(1, 1));
        assert_eq!(a.ratio(&b).unwrap(), rat(7, 27));
        let c = PiGraded::monomial(4, rat(1, 1));
        assert_eq!(a.ratio(&c), Err(Error::GradeMismatch(6, 4)));
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_pg(), b in arb_pg(), c in arb_pg()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }
    }
}
