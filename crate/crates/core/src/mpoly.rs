//! Sparse multivariate polynomials over [`BaseElement`].
//!
//! An ambient ring is a declared, ordered list of variable names
//! ([`VarSet`]); a polynomial is a finite map from exponent vectors to
//! nonzero coefficients. Exponent vectors are ordered lexicographically in
//! the declared variable order, which fixes the canonical term order used
//! everywhere (printing, echelon bases, JSON output).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::base::BaseElement;
use crate::error::{Error, Result};

/// An ordered set of variable names defining an ambient polynomial ring.
/// `pi` is reserved for the uniformizer and may not be declared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

/// Shared handle to a variable set.
pub type Vars = Arc<VarSet>;

impl VarSet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Result<Vars> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for n in &names {
            if n.is_empty() || n == "pi" || !seen.insert(n.clone()) {
                return Err(Error::UnknownVariable(format!(
                    "invalid variable list: `{n}`"
                )));
            }
        }
        Ok(Arc::new(VarSet { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Concatenation, e.g. cover variables followed by group variables.
    pub fn join(&self, other: &VarSet) -> Result<Vars> {
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        VarSet::new(names)
    }

    fn describe(&self) -> String {
        self.names.join(",")
    }
}

/// Sparse polynomial in a fixed ambient ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    p: u64,
    vars: Vars,
    terms: BTreeMap<Vec<u32>, BaseElement>,
}

impl MPoly {
    pub fn zero(p: u64, vars: &Vars) -> Self {
        MPoly {
            p,
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(p: u64, vars: &Vars) -> Self {
        Self::constant(BaseElement::one(p), vars)
    }

    /// Embed a base-ring element as a constant polynomial.
    pub fn constant(c: BaseElement, vars: &Vars) -> Self {
        let p = c.p();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars.len()], c);
        }
        MPoly {
            p,
            vars: vars.clone(),
            terms,
        }
    }

    pub fn var(p: u64, vars: &Vars, name: &str) -> Result<Self> {
        let i = vars
            .index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BaseElement::one(p));
        Ok(MPoly {
            p,
            vars: vars.clone(),
            terms,
        })
    }

    /// Monomial `c * prod vars[i]^exps[i]`.
    pub fn monomial(c: BaseElement, vars: &Vars, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), vars.len());
        let p = c.p();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MPoly {
            p,
            vars: vars.clone(),
            terms,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BaseElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.vars != other.vars {
            return Err(Error::RingMismatch(
                self.vars.describe(),
                other.vars.describe(),
            ));
        }
        Ok(())
    }

    fn insert(p: u64, terms: &mut BTreeMap<Vec<u32>, BaseElement>, exps: Vec<u32>, c: BaseElement) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(c.p(), p);
        match terms.get_mut(&exps) {
            Some(existing) => {
                let s = existing.add(&c);
                if s.is_zero() {
                    terms.remove(&exps);
                } else {
                    *existing = s;
                }
            }
            None => {
                terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ring(other).expect("mpoly add: ring mismatch");
        let mut terms = self.terms.clone();
        for (exps, c) in &other.terms {
            Self::insert(self.p, &mut terms, exps.clone(), c.clone());
        }
        MPoly {
            p: self.p,
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.neg()))
            .collect();
        MPoly {
            p: self.p,
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other).expect("mpoly mul: ring mismatch");
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                Self::insert(self.p, &mut terms, exps, c1.mul(c2));
            }
        }
        MPoly {
            p: self.p,
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut acc = Self::one(self.p, &self.vars);
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

    pub fn mul_base(&self, c: &BaseElement) -> Self {
        let mut terms = BTreeMap::new();
        for (e, a) in &self.terms {
            let prod = a.mul(c);
            if !prod.is_zero() {
                terms.insert(e.clone(), prod);
            }
        }
        MPoly {
            p: self.p,
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn mul_pi_pow(&self, e: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(ex, c)| (ex.clone(), c.mul_pi_pow(e)))
            .collect();
        MPoly {
            p: self.p,
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&BaseElement) -> BaseElement) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let c = f(c);
            if !c.is_zero() {
                terms.insert(e.clone(), c);
            }
        }
        MPoly {
            p: self.p,
            vars: self.vars.clone(),
            terms,
        }
    }

    /// All coefficients lie in R (no negative powers of pi).
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(BaseElement::is_integral)
    }

    /// Reduce every coefficient mod pi. Errors if any coefficient is
    /// non-integral.
    pub fn reduce_mod_pi(&self) -> Result<Self> {
        let p = self.p;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let r = c.reduce_mod_pi()?;
            if r != 0 {
                terms.insert(e.clone(), BaseElement::monomial(p, r, 0));
            }
        }
        Ok(MPoly {
            p,
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// The constant coefficient (exponent vector zero).
    pub fn constant_coefficient(&self) -> BaseElement {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(|| BaseElement::zero(self.p))
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BaseElement> {
        if self.terms.is_empty() {
            return Some(BaseElement::zero(self.p));
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Substitute polynomials for variables. Variables not in `map` must
    /// exist in the target ring and are carried across. The images must all
    /// live in `target`.
    pub fn substitute(&self, target: &Vars, map: &BTreeMap<String, MPoly>) -> Result<Self> {
        for img in map.values() {
            if img.vars != *target {
                return Err(Error::RingMismatch(img.vars.describe(), target.describe()));
            }
        }
        let mut acc = MPoly::zero(self.p, target);
        for (exps, c) in &self.terms {
            let mut term = MPoly::constant(c.clone(), target);
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = self.vars.name(i);
                let factor = match map.get(name) {
                    Some(img) => img.pow(e as u64),
                    None => MPoly::var(self.p, target, name)?.pow(e as u64),
                };
                term = term.mul(&factor);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Re-embed into a ring containing (at least) the same variables.
    pub fn embed(&self, target: &Vars) -> Result<Self> {
        self.substitute(target, &BTreeMap::new())
    }

    /// Rename variables through `rename`, mapping into `target`.
    pub fn rename(&self, target: &Vars, rename: &BTreeMap<String, String>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (from, to) in rename {
            map.insert(from.clone(), MPoly::var(self.p, target, to)?);
        }
        self.substitute(target, &map)
    }

    /// Group the terms of `self` by their exponents on the variables where
    /// `outer[i]` is true. Keys are full-length exponent vectors with the
    /// inner positions zeroed; values collect the matching terms with the
    /// outer positions zeroed.
    pub fn split_by(&self, outer: &[bool]) -> BTreeMap<Vec<u32>, MPoly> {
        assert_eq!(outer.len(), self.vars.len());
        let mut out: BTreeMap<Vec<u32>, MPoly> = BTreeMap::new();
        for (exps, c) in &self.terms {
            let mut key = exps.clone();
            let mut inner = exps.clone();
            for i in 0..exps.len() {
                if outer[i] {
                    inner[i] = 0;
                } else {
                    key[i] = 0;
                }
            }
            let entry = out
                .entry(key)
                .or_insert_with(|| MPoly::zero(self.p, &self.vars));
            Self::insert(self.p, &mut entry.terms, inner, c.clone());
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Project into a subring; errors if a term involves a variable absent
    /// from `target`.
    pub fn project(&self, target: &Vars) -> Result<Self> {
        let mut positions = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            positions.push(target.index(name));
        }
        let mut terms = BTreeMap::new();
        for (exps, c) in &self.terms {
            let mut new_exps = vec![0u32; target.len()];
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match positions[i] {
                    Some(j) => new_exps[j] = e,
                    None => return Err(Error::UnknownVariable(self.vars.name(i).to_string())),
                }
            }
            Self::insert(self.p, &mut terms, new_exps, c.clone());
        }
        Ok(MPoly {
            p: self.p,
            vars: target.clone(),
            terms,
        })
    }

    /// Scale so that the first (lex-least) flat coefficient is 1; the zero
    /// polynomial is returned unchanged. Used to deduplicate generator
    /// lists up to scalars.
    pub fn monic(&self) -> Self {
        match self.terms.values().next() {
            Some(c) => {
                let lead = c.leading_scalar();
                if lead == 0 || lead == 1 {
                    self.clone()
                } else {
                    let f = crate::fp::PrimeCtx::new(self.p).unwrap();
                    self.map_coeffs(|x| x.mul_scalar(f.inv(lead)))
                }
            }
            None => self.clone(),
        }
    }
}

impl fmt::Display for MPoly {
    /// Canonical flat-term syntax: `2*pi^-3*u1^2*u2 + u2`, terms ordered by
    /// exponent vector (lex in declared variable order), then by pi-power.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in &self.terms {
            for (e, s) in c.iter() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                let mut pieces: Vec<String> = Vec::new();
                let has_vars = exps.iter().any(|&x| x > 0);
                if s != 1 || (e == 0 && !has_vars) {
                    pieces.push(s.to_string());
                }
                if e == 1 {
                    pieces.push("pi".to_string());
                } else if e != 0 {
                    pieces.push(format!("pi^{e}"));
                }
                for (i, &x) in exps.iter().enumerate() {
                    if x == 1 {
                        pieces.push(self.vars.name(i).to_string());
                    } else if x > 1 {
                        pieces.push(format!("{}^{}", self.vars.name(i), x));
                    }
                }
                if pieces.is_empty() {
                    pieces.push("1".to_string());
                }
                write!(f, "{}", pieces.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(_p: u64, names: &[&str]) -> Vars {
        VarSet::new(names.to_vec()).unwrap()
    }

    #[test]
    fn display_matches_cli_syntax() {
        let p = 5;
        let vars = ring(p, &["u1", "u2"]);
        let u1 = MPoly::var(p, &vars, "u1").unwrap();
        let u2 = MPoly::var(p, &vars, "u2").unwrap();
        let c = BaseElement::monomial(p, 2, -3);
        let t = u1.pow(2).mul(&u2).mul_base(&c);
        assert_eq!(t.to_string(), "2*pi^-3*u1^2*u2");
        let s = t.add(&u1).add(&MPoly::one(p, &vars));
        assert_eq!(s.to_string(), "1 + u1 + 2*pi^-3*u1^2*u2");
    }

    #[test]
    fn ring_ops() {
        let p = 3;
        let vars = ring(p, &["x", "y"]);
        let x = MPoly::var(p, &vars, "x").unwrap();
        let y = MPoly::var(p, &vars, "y").unwrap();
        // (x+y)^3 = x^3 + y^3 in characteristic 3
        let lhs = x.add(&y).pow(3);
        let rhs = x.pow(3).add(&y.pow(3));
        assert_eq!(lhs, rhs);
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn substitution_and_projection() {
        let p = 3;
        let small = ring(p, &["x"]);
        let big = ring(p, &["x", "t"]);
        let x = MPoly::var(p, &small, "x").unwrap();
        let q = x.pow(2).add(&MPoly::one(p, &small));
        let emb = q.embed(&big).unwrap();
        assert_eq!(emb.to_string(), "1 + x^2");
        let mut map = BTreeMap::new();
        map.insert(
            "x".to_string(),
            MPoly::var(p, &big, "t").unwrap().mul_pi_pow(1),
        );
        let sub = q.substitute(&big, &map).unwrap();
        assert_eq!(sub.to_string(), "1 + pi^2*t^2");
        // and back down
        let back = emb.project(&small).unwrap();
        assert_eq!(back, q);
        assert!(sub.project(&small).is_err());
    }

    #[test]
    fn split_by_groups_outer_monomials() {
        let p = 3;
        let vars = ring(p, &["z", "u"]);
        let z = MPoly::var(p, &vars, "z").unwrap();
        let u = MPoly::var(p, &vars, "u").unwrap();
        // z*u + z + u^2
        let q = z.mul(&u).add(&z).add(&u.pow(2));
        let parts = q.split_by(&[true, false]);
        assert_eq!(parts.len(), 2);
        let one_part = parts.get(&vec![0, 0]).unwrap();
        assert_eq!(one_part.to_string(), "u^2");
        let z_part = parts.get(&vec![1, 0]).unwrap();
        assert_eq!(z_part.to_string(), "1 + u");
    }
}
