//! Length-2 Witt vector arithmetic, classical and twisted.
//!
//! The plane `Spec(R[u1,u2])` carries, for each lambda in R, the group law
//!
//! ```text
//! (u1,u2) + (v1,v2) = (u1 + v1, u2 + v2 + lambda * sum_k <p,k> u1^k v1^(p-k))
//! ```
//!
//! with `<p,k> = C(p,k)/p` reduced mod p. `lambda = 1` is the classical
//! W_2. All maps here are formal polynomial maps on pairs; identities about
//! them are checked by exact polynomial expansion, never numerically.

use num_bigint::BigUint;

use crate::base::BaseElement;
use crate::error::{Error, Result};
use crate::mpoly::{MPoly, VarSet, Vars};

/// `<p,k> = C(p,k)/p mod p`, computed exactly over the integers.
pub fn witt_binom(p: u64, k: u64) -> Result<u64> {
    if k == 0 || k >= p {
        return Err(Error::BinomialRange { k, max: p - 1 });
    }
    let mut c = BigUint::from(1u64);
    for i in 0..k {
        c = c * BigUint::from(p - i) / BigUint::from(i + 1);
    }
    let q = c / BigUint::from(p);
    let r = q % BigUint::from(p);
    Ok(r.iter_u64_digits().next().unwrap_or(0))
}

/// A point of the Witt plane: an ordered pair of polynomials sharing an
/// ambient ring.
#[derive(Debug, Clone, PartialEq)]
pub struct WittPair {
    pub first: MPoly,
    pub second: MPoly,
}

impl WittPair {
    pub fn new(first: MPoly, second: MPoly) -> Self {
        assert_eq!(first.vars(), second.vars(), "witt pair: ring mismatch");
        assert_eq!(first.p(), second.p());
        WittPair { first, second }
    }

    pub fn zero(p: u64, vars: &Vars) -> Self {
        WittPair {
            first: MPoly::zero(p, vars),
            second: MPoly::zero(p, vars),
        }
    }

    /// The pair of coordinate variables `(n1, n2)`.
    pub fn coords(p: u64, vars: &Vars, n1: &str, n2: &str) -> Result<Self> {
        Ok(WittPair {
            first: MPoly::var(p, vars, n1)?,
            second: MPoly::var(p, vars, n2)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.first.p()
    }

    pub fn vars(&self) -> &Vars {
        self.first.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }
}

/// Twist data `(lambda, mu, nu)` for the scalar maps between twisted forms.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistParams {
    pub lambda: BaseElement,
    pub mu: BaseElement,
    pub nu: BaseElement,
}

/// The symmetric correction cocycle `c(x, y) = sum_k <p,k> x^k y^(p-k)`.
pub fn cocycle(x: &MPoly, y: &MPoly) -> MPoly {
    let p = x.p();
    let mut acc = MPoly::zero(p, x.vars());
    for k in 1..p {
        let coeff = witt_binom(p, k).expect("k in range");
        let term = x
            .pow(k)
            .mul(&y.pow(p - k))
            .mul_base(&BaseElement::monomial(p, coeff, 0));
        acc = acc.add(&term);
    }
    acc
}

/// Addition in the twisted group `W_2^lambda`.
pub fn w2_add(lambda: &BaseElement, a: &WittPair, b: &WittPair) -> WittPair {
    let first = a.first.add(&b.first);
    let corr = cocycle(&a.first, &b.first).mul_base(lambda);
    let second = a.second.add(&b.second).add(&corr);
    WittPair::new(first, second)
}

/// Negation: the unique solution of `a + n = (0,0)`, namely
/// `n = (-a1, -a2 - lambda*c(a1, -a1))`, derived by solving rather than
/// given as a closed form; the solve is characteristic-agnostic.
pub fn w2_neg(lambda: &BaseElement, a: &WittPair) -> WittPair {
    let n1 = a.first.neg();
    let corr = cocycle(&a.first, &n1).mul_base(lambda);
    let n2 = a.second.neg().sub(&corr);
    WittPair::new(n1, n2)
}

pub fn w2_sub(lambda: &BaseElement, a: &WittPair, b: &WittPair) -> WittPair {
    w2_add(lambda, a, &w2_neg(lambda, b))
}

/// Coordinate-wise p-th power; a homomorphism `W_2^lambda -> W_2^(lambda^p)`.
pub fn frobenius(a: &WittPair) -> WittPair {
    let p = a.p();
    WittPair::new(a.first.pow(p), a.second.pow(p))
}

/// `I^nu_(lambda,mu) : W_2^lambda -> W_2^(lambda*mu)`,
/// `(u1, u2) -> (nu*u1, mu*nu^p*u2)`.
pub fn scalar_map(mu: &BaseElement, nu: &BaseElement, a: &WittPair) -> WittPair {
    let p = a.p();
    let first = a.first.mul_base(nu);
    let second = a.second.mul_base(&mu.mul(&nu.pow(p)));
    WittPair::new(first, second)
}

/// The isogeny `phi_(lambda,nu) = F_lambda - I^nu_(lambda,lambda^(p-1))`,
/// computed by group subtraction in the target twist `lambda^p`.
pub fn phi(lambda: &BaseElement, nu: &BaseElement, a: &WittPair) -> WittPair {
    let p = a.p();
    let target_twist = lambda.pow(p);
    let f = frobenius(a);
    let i = scalar_map(&lambda.pow(p - 1), nu, a);
    w2_sub(&target_twist, &f, &i)
}

/// The displayed closed form of `phi_(lambda,nu)`:
///
/// ```text
/// (u1^p - nu*u1,
///  u2^p - nu^p*lambda^(p-1)*u2 + lambda^p * sum_k <p,k> u1^(pk) (-nu*u1)^(p-k))
/// ```
///
/// This is an odd-p identity for [`phi`]; see `phi_matches_closed_form`.
pub fn phi_closed_form(lambda: &BaseElement, nu: &BaseElement, a: &WittPair) -> WittPair {
    let p = a.p();
    let first = a.first.pow(p).sub(&a.first.mul_base(nu));
    let c2 = nu.pow(p).mul(&lambda.pow(p - 1));
    let mut second = a.second.pow(p).sub(&a.second.mul_base(&c2));
    let lam_p = lambda.pow(p);
    for k in 1..p {
        let coeff = witt_binom(p, k).expect("k in range");
        let term = a
            .first
            .pow(p * k)
            .mul(&a.first.mul_base(nu).neg().pow(p - k))
            .mul_base(&lam_p.mul_scalar(coeff));
        second = second.add(&term);
    }
    WittPair::new(first, second)
}

/// Compare `phi` (by subtraction) against the displayed closed form on
/// fresh coordinates; returns the residual pair (zero iff they agree).
pub fn phi_closed_form_residual(
    p: u64,
    lambda: &BaseElement,
    nu: &BaseElement,
) -> Result<WittPair> {
    let vars = VarSet::new(vec!["u1", "u2"])?;
    let u = WittPair::coords(p, &vars, "u1", "u2")?;
    let by_sub = phi(lambda, nu, &u);
    let display = phi_closed_form(lambda, nu, &u);
    Ok(WittPair::new(
        by_sub.first.sub(&display.first),
        by_sub.second.sub(&display.second),
    ))
}

/// Independent derivation of the isogeny: solve `I(u) + d = F(u)` for `d`
/// directly in the twist `lambda^p` (second coordinate
/// `d2 = F2 - I2 - lambda^p * c(I1, d1)`), and return the residual against
/// [`phi`]. Valid in every characteristic, unlike the displayed closed
/// form; the two routes must agree identically.
pub fn phi_direct_solve_residual(
    p: u64,
    lambda: &BaseElement,
    nu: &BaseElement,
) -> Result<WittPair> {
    let vars = VarSet::new(vec!["u1", "u2"])?;
    let u = WittPair::coords(p, &vars, "u1", "u2")?;
    let f = frobenius(&u);
    let i = scalar_map(&lambda.pow(p - 1), nu, &u);
    let d1 = f.first.sub(&i.first);
    let corr = cocycle(&i.first, &d1).mul_base(&lambda.pow(p));
    let d2 = f.second.sub(&i.second).sub(&corr);
    let by_sub = phi(lambda, nu, &u);
    Ok(WittPair::new(by_sub.first.sub(&d1), by_sub.second.sub(&d2)))
}

/// Check that `f` is a group homomorphism `W_2^src -> W_2^tgt` as a
/// polynomial identity in four fresh variables.
pub fn check_hom(
    p: u64,
    src_twist: &BaseElement,
    tgt_twist: &BaseElement,
    f: impl Fn(&WittPair) -> WittPair,
) -> Result<bool> {
    let vars = VarSet::new(vec!["x1", "x2", "y1", "y2"])?;
    let a = WittPair::coords(p, &vars, "x1", "x2")?;
    let b = WittPair::coords(p, &vars, "y1", "y2")?;
    let lhs = f(&w2_add(src_twist, &a, &b));
    let rhs = w2_add(tgt_twist, &f(&a), &f(&b));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: integer binomial coefficients by Pascal's rule.
    fn pascal_binom(n: u64, k: u64) -> u128 {
        let mut row = vec![1u128];
        for _ in 0..n {
            let mut next = vec![1u128];
            for i in 1..row.len() {
                next.push(row[i - 1] + row[i]);
            }
            next.push(1);
            row = next;
        }
        row[k as usize]
    }

    #[test]
    fn witt_binom_against_pascal() {
        // (3,1): C(3,1)=3, /3 = 1, mod 3 -> 1
        assert_eq!(witt_binom(3, 1).unwrap(), 1);
        // (5,2): C(5,2)=10, /5 = 2, mod 5 -> 2
        assert_eq!(witt_binom(5, 2).unwrap(), 2);
        // (2,1): C(2,1)=2, /2 = 1, mod 2 -> 1
        assert_eq!(witt_binom(2, 1).unwrap(), 1);
        for p in [2u64, 3, 5, 7, 11, 13] {
            for k in 1..p {
                let expected = (pascal_binom(p, k) / p as u128 % p as u128) as u64;
                assert_eq!(witt_binom(p, k).unwrap(), expected, "p={p} k={k}");
            }
        }
        assert!(witt_binom(5, 0).is_err());
        assert!(witt_binom(5, 5).is_err());
    }

    fn fresh_pairs(p: u64) -> (Vars, WittPair, WittPair) {
        let vars = VarSet::new(vec!["u1", "u2", "v1", "v2"]).unwrap();
        let a = WittPair::coords(p, &vars, "u1", "u2").unwrap();
        let b = WittPair::coords(p, &vars, "v1", "v2").unwrap();
        (vars, a, b)
    }

    #[test]
    fn classical_add_p2() {
        // lambda=1, p=2: second coordinate gains u1*v1
        let (_, a, b) = fresh_pairs(2);
        let one = BaseElement::one(2);
        let s = w2_add(&one, &a, &b);
        assert_eq!(s.first.to_string(), "v1 + u1");
        assert_eq!(s.second.to_string(), "v2 + u2 + u1*v1");
    }

    #[test]
    fn identity_element() {
        let (vars, a, _) = fresh_pairs(5);
        let lam = BaseElement::pi(5);
        let zero = WittPair::zero(5, &vars);
        assert_eq!(w2_add(&lam, &a, &zero), a);
        assert_eq!(w2_add(&lam, &zero, &a), a);
    }

    #[test]
    fn twisted_add_p3() {
        // lambda=pi, p=3: correction pi*(u1*v1^2 + u1^2*v1)
        let (_, a, b) = fresh_pairs(3);
        let s = w2_add(&BaseElement::pi(3), &a, &b);
        assert_eq!(s.second.to_string(), "v2 + u2 + pi*u1*v1^2 + pi*u1^2*v1");
    }

    #[test]
    fn negation_formulas() {
        // odd p, lambda=1: -(u1,u2) = (-u1,-u2); p=2: (u1, u2+u1^2)
        for p in [3u64, 5, 7] {
            let (_, a, _) = fresh_pairs(p);
            let n = w2_neg(&BaseElement::one(p), &a);
            assert_eq!(n.first, a.first.neg());
            assert_eq!(n.second, a.second.neg());
        }
        let (_, a, _) = fresh_pairs(2);
        let n = w2_neg(&BaseElement::one(2), &a);
        assert_eq!(n.first, a.first);
        assert_eq!(n.second, a.second.add(&a.first.pow(2)));
    }

    #[test]
    fn neg_solves_add_to_zero() {
        for p in [2u64, 3, 5] {
            for lam in [
                BaseElement::zero(p),
                BaseElement::one(p),
                BaseElement::pi(p),
                BaseElement::one(p).add(&BaseElement::pi(p)),
            ] {
                let (_, a, _) = fresh_pairs(p);
                let s = w2_add(&lam, &a, &w2_neg(&lam, &a));
                assert!(s.is_zero(), "p={p} lambda={lam}");
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        let (vars, a, _) = fresh_pairs(3);
        let f = frobenius(&a);
        assert_eq!(f.first, a.first.pow(3));
        assert_eq!(f.second, a.second.pow(3));
        assert!(frobenius(&WittPair::zero(3, &vars)).is_zero());
        // p=3, (pi, 1) -> (pi^3, 1)
        let c = WittPair::new(
            MPoly::constant(BaseElement::pi(3), &vars),
            MPoly::one(3, &vars),
        );
        let fc = frobenius(&c);
        assert_eq!(fc.first, MPoly::constant(BaseElement::pi_pow(3, 3), &vars));
        assert_eq!(fc.second, MPoly::one(3, &vars));
    }

    #[test]
    fn scalar_map_examples() {
        let p = 3;
        let (_, a, _) = fresh_pairs(p);
        let one = BaseElement::one(p);
        // nu = mu = 1 is the identity
        assert_eq!(scalar_map(&one, &one, &a), a);
        // p=3, mu=pi^2, nu=pi: (u1,u2) -> (pi*u1, pi^5*u2) since mu*nu^p = pi^5
        let s = scalar_map(&BaseElement::pi_pow(p, 2), &BaseElement::pi(p), &a);
        assert_eq!(s.first, a.first.mul_pi_pow(1));
        assert_eq!(s.second, a.second.mul_pi_pow(5));
    }

    #[test]
    fn scalar_map_composes_multiplicatively() {
        // I_(lambda*mu,mu')^(nu') o I_(lambda,mu)^nu = I_(lambda,mu*mu')^(nu*nu')
        let p = 5;
        let (_, a, _) = fresh_pairs(p);
        let mu = BaseElement::pi_pow(p, 2);
        let mu2 = BaseElement::pi(p).add(&BaseElement::one(p));
        let nu = BaseElement::pi(p);
        let nu2 = BaseElement::scalar(p, 3);
        let lhs = scalar_map(&mu2, &nu2, &scalar_map(&mu, &nu, &a));
        let rhs = scalar_map(&mu.mul(&mu2), &nu.mul(&nu2), &a);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn phi_zero_at_origin() {
        let vars = VarSet::new(vec!["u1", "u2"]).unwrap();
        let z = WittPair::zero(3, &vars);
        assert!(phi(&BaseElement::pi(3), &BaseElement::one(3), &z).is_zero());
    }

    #[test]
    fn phi_matches_display_for_odd_p() {
        for p in [3u64, 5, 7] {
            for lam in [
                BaseElement::zero(p),
                BaseElement::one(p),
                BaseElement::pi(p),
            ] {
                for nu in [BaseElement::one(p), BaseElement::pi(p)] {
                    let res = phi_closed_form_residual(p, &lam, &nu).unwrap();
                    assert!(res.is_zero(), "p={p} lambda={lam} nu={nu}");
                }
            }
        }
    }

    #[test]
    fn phi_display_discrepancy_at_p2() {
        // At p = 2 group subtraction differs from the displayed closed form
        // by exactly lambda^2*nu^2*u1^2 in the second coordinate.
        let p = 2;
        let lam = BaseElement::one(p);
        let nu = BaseElement::one(p);
        let res = phi_closed_form_residual(p, &lam, &nu).unwrap();
        assert!(res.first.is_zero());
        assert_eq!(res.second.to_string(), "u1^2");
    }

    #[test]
    fn phi_agrees_with_direct_solve_every_p() {
        for p in [2u64, 3, 5, 7] {
            for lam in [
                BaseElement::zero(p),
                BaseElement::one(p),
                BaseElement::pi(p),
            ] {
                for nu in [BaseElement::one(p), BaseElement::pi(p)] {
                    let res = phi_direct_solve_residual(p, &lam, &nu).unwrap();
                    assert!(res.is_zero(), "p={p} lambda={lam} nu={nu}");
                }
            }
        }
    }

    #[test]
    fn homomorphism_checks() {
        for p in [2u64, 3, 5] {
            let lam = BaseElement::pi(p);
            let nu = BaseElement::one(p);
            // Frobenius: W_2^lambda -> W_2^(lambda^p)
            assert!(check_hom(p, &lam, &lam.pow(p), frobenius).unwrap());
            // scalar map: W_2^lambda -> W_2^(lambda*mu)
            let mu = BaseElement::pi_pow(p, 2);
            assert!(check_hom(p, &lam, &lam.mul(&mu), |a| scalar_map(&mu, &nu, a)).unwrap());
            // phi: W_2^lambda -> W_2^(lambda^p)
            assert!(check_hom(p, &lam, &lam.pow(p), |a| phi(&lam, &nu, a)).unwrap());
            // wrong target twist is detected
            let wrong = lam.mul(&mu).mul(&BaseElement::pi(p));
            assert!(!check_hom(p, &lam, &wrong, |a| scalar_map(&mu, &nu, a)).unwrap());
        }
    }

    #[test]
    fn classical_phi_is_untwisted_special_case() {
        // lambda = nu = 1 recovers F - Id
        let p = 3;
        let vars = VarSet::new(vec!["X1", "X2"]).unwrap();
        let x = WittPair::coords(p, &vars, "X1", "X2").unwrap();
        let one = BaseElement::one(p);
        let lhs = phi(&one, &one, &x);
        let rhs = w2_sub(&one, &frobenius(&x), &x);
        assert_eq!(lhs, rhs);
    }
}
