use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize};

use super::comb::falling;
use super::Rational;

/// Dense univariate polynomial over the rationals, coefficients in ascending
/// powers of `x`.
///
/// The zero polynomial has no coefficients; otherwise the last coefficient is
/// nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::monomial(1, Rational::one())
    }

    pub fn monomial(power: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = c;
        Poly::new(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Rational::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^i`; zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Rational::is_one)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `x`.
    pub fn shift(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// The `order`-th derivative; zero when `order` exceeds the degree.
    pub fn derivative(&self, order: usize) -> Poly {
        if order >= self.coeffs.len() {
            return Poly::zero();
        }
        let coeffs = (order..self.coeffs.len())
            .map(|j| &self.coeffs[j] * Rational::from(falling(j, order)))
            .collect();
        Poly::new(coeffs)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `self + c * other`, used by the recurrences.
    pub fn add_scaled(&self, other: &Poly, c: &Rational) -> Poly {
        if c.is_zero() {
            return self.clone();
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let mut v = self.coeff(i);
                if let Some(o) = other.coeffs.get(i) {
                    v += o * c;
                }
                v
            })
            .collect();
        Poly::new(coeffs)
    }

    /// Human-readable form in descending powers, e.g. `x^3 - 3/2*x`.
    pub fn pretty(&self) -> String {
        self.to_string()
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<Rational>::deserialize(deserializer).map(Poly::new)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match (power, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match power {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{power}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.add_scaled(rhs, &Rational::one())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.add_scaled(rhs, &-Rational::one())
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl From<Vec<Rational>> for Poly {
    fn from(coeffs: Vec<Rational>) -> Self {
        Poly::new(coeffs)
    }
}

impl From<BigInt> for Poly {
    fn from(c: BigInt) -> Self {
        Poly::constant(Rational::from(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn p(c: &[(i64, i64)]) -> Poly {
        Poly::new(c.iter().map(|&(a, b)| rat(a, b)).collect())
    }

    #[test]
    fn arithmetic_examples() {
        let x2p1 = Poly::from_ints(&[1, 0, 1]);
        assert_eq!(&x2p1 + &Poly::from_ints(&[-1]), Poly::from_ints(&[0, 0, 1]));
        assert_eq!(&Poly::x() * &Poly::x(), Poly::from_ints(&[0, 0, 1]));
        let h2 = p(&[(-1, 2), (0, 1), (1, 1)]);
        assert_eq!(h2.scale(&rat(2, 1)), Poly::from_ints(&[-1, 0, 2]));
        assert_eq!(&h2 - &h2, Poly::zero());
        assert!((&h2 - &h2).coeffs().is_empty());
    }

    #[test]
    fn derivative_examples() {
        let x3 = Poly::from_ints(&[0, 0, 0, 1]);
        assert_eq!(x3.derivative(1), Poly::from_ints(&[0, 0, 3]));
        assert_eq!(p(&[(-1, 2), (0, 1), (1, 1)]).derivative(2), Poly::from_ints(&[2]));
        assert_eq!(x3.derivative(4), Poly::zero());
        assert_eq!(x3.derivative(0), x3);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[(0, 1), (-3, 2), (0, 1), (1, 1)]).to_string(), "x^3 - 3/2*x");
        assert_eq!(Poly::from_ints(&[1, 1]).to_string(), "x + 1");
        assert_eq!(Poly::from_ints(&[-1, 0, -2]).to_string(), "-2*x^2 - 1");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn degree_and_monic() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::from_ints(&[3, 0, 0]).degree(), Some(0));
        assert!(Poly::from_ints(&[5, 1]).is_monic());
        assert!(!Poly::from_ints(&[5, 2]).is_monic());
    }

    fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((-6i64..=6, 1i64..=4), 0..=max_deg + 1)
            .prop_map(|v| Poly::new(v.into_iter().map(|(a, b)| rat(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn distributive(a in small_poly(6), b in small_poly(6), c in small_poly(6)) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        }

        #[test]
        fn leibniz_rule(a in small_poly(8), b in small_poly(8)) {
            let lhs = (&a * &b).derivative(1);
            let rhs = &(&a.derivative(1) * &b) + &(&a * &b.derivative(1));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn invariant_trailing_nonzero(a in small_poly(6), b in small_poly(6)) {
            for q in [&a + &b, &a - &b, &a * &b, a.derivative(2)] {
                prop_assert!(q.leading().is_none_or(|c| !c.is_zero()));
            }
        }
    }
}
