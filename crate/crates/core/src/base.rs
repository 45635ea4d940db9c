//! Elements of R = k[[pi]] and its fraction field at desk scale.
//!
//! A [`BaseElement`] is a Laurent polynomial in the uniformizer `pi` with
//! coefficients in F_p: a finite map from an integer exponent (possibly
//! negative) to a nonzero residue. Every computation in scope touches only
//! finitely many powers of `pi`, so no completion is carried around, and
//! the only denominators ever needed are powers of `pi`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Laurent polynomial in `pi` over F_p, canonical form (no zero coefficients).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseElement {
    p: u64,
    coeffs: BTreeMap<i64, u64>,
}

impl BaseElement {
    pub fn zero(p: u64) -> Self {
        BaseElement {
            p,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(p: u64) -> Self {
        Self::monomial(p, 1, 0)
    }

    /// The uniformizer itself.
    pub fn pi(p: u64) -> Self {
        Self::monomial(p, 1, 1)
    }

    /// `pi^e`, with `e` possibly negative.
    pub fn pi_pow(p: u64, e: i64) -> Self {
        Self::monomial(p, 1, e)
    }

    /// `c * pi^e` with `c` reduced mod p.
    pub fn monomial(p: u64, c: u64, e: i64) -> Self {
        let c = c % p;
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(e, c);
        }
        BaseElement { p, coeffs }
    }

    /// Scalar constant, reduced mod p (accepts negative integers).
    pub fn scalar(p: u64, n: i64) -> Self {
        let c = n.rem_euclid(p as i64) as u64;
        Self::monomial(p, c, 0)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0) == Some(&1)
    }

    /// True iff no negative power of `pi` occurs. Zero is integral.
    pub fn is_integral(&self) -> bool {
        self.coeffs.keys().next().is_none_or(|&e| e >= 0)
    }

    /// Least exponent with nonzero coefficient; `None` is the infinite
    /// marker reserved for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Iterate `(exponent, coefficient)` in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    /// `Some((c, e))` when the element is exactly `c * pi^e`.
    pub fn as_monomial(&self) -> Option<(u64, i64)> {
        if self.coeffs.len() == 1 {
            let (&e, &c) = self.coeffs.iter().next().unwrap();
            Some((c, e))
        } else {
            None
        }
    }

    /// `Some(c)` when the element is the scalar `c` (including zero).
    pub fn as_scalar(&self) -> Option<u64> {
        if self.is_zero() {
            Some(0)
        } else {
            match self.as_monomial() {
                Some((c, 0)) => Some(c),
                _ => None,
            }
        }
    }

    fn ctx(&self) -> crate::fp::PrimeCtx {
        crate::fp::PrimeCtx::new(self.p).expect("constructed with valid prime")
    }

    fn insert_reduced(p: u64, coeffs: &mut BTreeMap<i64, u64>, e: i64, c: u64) {
        let c = c % p;
        if c == 0 {
            return;
        }
        match coeffs.get_mut(&e) {
            Some(existing) => {
                let s = (*existing + c) % p;
                if s == 0 {
                    coeffs.remove(&e);
                } else {
                    *existing = s;
                }
            }
            None => {
                coeffs.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let mut coeffs = self.coeffs.clone();
        for (&e, &c) in &other.coeffs {
            Self::insert_reduced(self.p, &mut coeffs, e, c);
        }
        BaseElement { p: self.p, coeffs }
    }

    pub fn neg(&self) -> Self {
        let f = self.ctx();
        let coeffs = self.coeffs.iter().map(|(&e, &c)| (e, f.neg(c))).collect();
        BaseElement { p: self.p, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let f = self.ctx();
        let mut coeffs = BTreeMap::new();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &other.coeffs {
                Self::insert_reduced(self.p, &mut coeffs, e1 + e2, f.mul(c1, c2));
            }
        }
        BaseElement { p: self.p, coeffs }
    }

    pub fn mul_scalar(&self, c: u64) -> Self {
        let f = self.ctx();
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&e, &a)| (e, f.mul(a, c)))
            .collect();
        BaseElement { p: self.p, coeffs }
    }

    /// Multiply by `pi^e` (an exponent shift).
    pub fn mul_pi_pow(&self, e: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&k, &c)| (k + e, c)).collect();
        BaseElement { p: self.p, coeffs }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut acc = Self::one(self.p);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Inverse of a unit of R[1/pi], i.e. of a monomial `c * pi^e`.
    /// General Laurent polynomials (e.g. `1 + pi`) are invertible in
    /// k[[pi]] but their inverses are honest power series; they are
    /// rejected rather than truncated.
    pub fn try_inv(&self) -> Result<Self> {
        match self.as_monomial() {
            Some((c, e)) => {
                let f = self.ctx();
                Ok(Self::monomial(self.p, f.inv(c), -e))
            }
            None => Err(Error::NotAUnit(self.to_string())),
        }
    }

    /// Exact division by a monomial `c * pi^e`.
    pub fn div_monomial(&self, den: &Self) -> Result<Self> {
        Ok(self.mul(&den.try_inv()?))
    }

    /// Reduction mod pi: the constant coefficient. Errors on a non-integral
    /// element.
    pub fn reduce_mod_pi(&self) -> Result<u64> {
        if !self.is_integral() {
            return Err(Error::NotIntegral(self.to_string()));
        }
        Ok(self.coeffs.get(&0).copied().unwrap_or(0))
    }

    /// Coefficient of the least power of pi (zero for the zero element).
    pub fn leading_scalar(&self) -> u64 {
        self.coeffs.values().next().copied().unwrap_or(0)
    }
}

// Display uses the CLI syntax: `+`-separated monomials, ascending exponent,
// e.g. `2*pi^-3 + 1 + pi^2`. Parsing lives in the `text` module.
impl fmt::Display for BaseElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (c, e) {
                (_, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "pi")?,
                (1, _) => write!(f, "pi^{e}")?,
                (_, 1) => write!(f, "{c}*pi")?,
                (_, _) => write!(f, "{c}*pi^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi(p: u64) -> BaseElement {
        BaseElement::pi(p)
    }

    #[test]
    fn integrality_and_valuation() {
        let p = 3;
        // pi^2 + 1 -> integral, valuation 0
        let a = pi(p).pow(2).add(&BaseElement::one(p));
        assert!(a.is_integral());
        assert_eq!(a.valuation(), Some(0));
        // pi^-3 -> not integral, valuation -3
        let b = BaseElement::pi_pow(p, -3);
        assert!(!b.is_integral());
        assert_eq!(b.valuation(), Some(-3));
        // 0 -> integral, valuation = infinite marker
        let z = BaseElement::zero(p);
        assert!(z.is_integral());
        assert_eq!(z.valuation(), None);
    }

    #[test]
    fn scalar_reduction() {
        assert_eq!(BaseElement::scalar(3, 5), BaseElement::scalar(3, 2));
        assert_eq!(BaseElement::scalar(3, -1), BaseElement::scalar(3, 2));
        assert!(BaseElement::scalar(3, 3).is_zero());
    }

    #[test]
    fn arithmetic_cancels() {
        let p = 5;
        let a = pi(p).add(&BaseElement::scalar(p, 2));
        let b = a.sub(&a);
        assert!(b.is_zero());
        let c = a.mul(&a.neg()).add(&a.mul(&a));
        assert!(c.is_zero());
    }

    #[test]
    fn monomial_inverse_only() {
        let p = 7;
        let m = BaseElement::monomial(p, 3, -2);
        let inv = m.try_inv().unwrap();
        assert!(m.mul(&inv).is_one());
        let not_unit = BaseElement::one(p).add(&pi(p));
        assert!(matches!(not_unit.try_inv(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn display_canonical() {
        let p = 5;
        let x = BaseElement::monomial(p, 2, -3)
            .add(&BaseElement::one(p))
            .add(&BaseElement::monomial(p, 4, 1));
        assert_eq!(x.to_string(), "2*pi^-3 + 1 + 4*pi");
        assert_eq!(BaseElement::zero(p).to_string(), "0");
        assert_eq!(BaseElement::pi(p).to_string(), "pi");
    }

    #[test]
    fn reduce_mod_pi_constant_term() {
        let p = 3;
        let x = pi(p).add(&BaseElement::scalar(p, 2));
        assert_eq!(x.reduce_mod_pi().unwrap(), 2);
        assert_eq!(pi(p).reduce_mod_pi().unwrap(), 0);
        assert!(BaseElement::pi_pow(p, -1).reduce_mod_pi().is_err());
    }
}
