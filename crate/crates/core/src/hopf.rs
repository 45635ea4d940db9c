//! Hopf-algebra presentations of the finite flat group schemes in play.
//!
//! A [`HopfPresentation`] is `R[u1,...,un] / (u_i^p - c_i u_i)` together
//! with comultiplication images in the doubled ring (`u_i (x) 1` written
//! `uL_i`, `1 (x) u_i` written `uR_i`) and a counit. The quotient is a free
//! R-module on the monomials with exponents `< p`, so the rank is `p^n`.
//!
//! The two families that occur are `R[Z/p^2]` (relations `u_i^p = u_i`,
//! comultiplication the length-2 Witt law) and the kernel
//! `K_(lambda,nu) = ker(phi_(lambda,nu))` with relations
//! `(u1^p - nu*u1, u2^p - nu^p*lambda^(p-1)*u2)` and the lambda-twisted
//! law, defined for p > 2. Nothing is assumed: coassociativity, counit,
//! relation compatibility and the antipode identity are all checked by
//! normal-form computation in the doubled and tripled quotient rings.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::base::BaseElement;
use crate::error::{Error, Result};
use crate::lattice::Row;
use crate::mpoly::{MPoly, VarSet, Vars};
use crate::rewrite::RewriteSystem;
use crate::witt::{w2_add, witt_binom, WittPair};

/// Split a generator name into alphabetic head and tail: `u1 -> (u, 1)`.
fn split_name(name: &str) -> (&str, &str) {
    let at = name
        .char_indices()
        .find(|(_, c)| !c.is_ascii_alphabetic())
        .map(|(i, _)| i)
        .unwrap_or(name.len());
    name.split_at(at)
}

/// `u1 -> uL1` (the `u_i (x) 1` leg).
pub fn left_name(gen: &str) -> String {
    let (head, tail) = split_name(gen);
    format!("{head}L{tail}")
}

/// `u1 -> uR1` (the `1 (x) u_i` leg).
pub fn right_name(gen: &str) -> String {
    let (head, tail) = split_name(gen);
    format!("{head}R{tail}")
}

fn leg_name(gen: &str, leg: char) -> String {
    let (head, tail) = split_name(gen);
    format!("{head}{leg}{tail}")
}

/// Outcome of a structural check; `residuals` names the offending
/// generators with the nonzero residual polynomials.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub ok: bool,
    pub residuals: Vec<(String, MPoly)>,
}

impl CheckOutcome {
    fn collect(residuals: Vec<(String, MPoly)>) -> Self {
        CheckOutcome {
            ok: residuals.is_empty(),
            residuals,
        }
    }

    pub fn describe(&self) -> String {
        if self.ok {
            "ok".to_string()
        } else {
            self.residuals
                .iter()
                .map(|(g, r)| format!("{g}: {r}"))
                .collect::<Vec<_>>()
                .join("; ")
        }
    }
}

/// Classification of a special fibre among the group schemes that occur.
#[derive(Debug, Clone, PartialEq)]
pub enum FiberClass {
    /// Kernel of `y^p - c*y` with `c != 0` over k: a form of Z/p, constant
    /// after base change.
    EtaleZp,
    /// `y^p = 0` with primitive comultiplication.
    AlphaP,
    /// The two-generator kernel form with the given reduced twist data.
    KernelForm {
        lambda: BaseElement,
        nu: BaseElement,
    },
    /// Split product of rank-p pieces (primitive comultiplication).
    Product(Vec<FiberClass>),
    Unknown,
}

impl fmt::Display for FiberClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberClass::EtaleZp => write!(f, "EtaleZp"),
            FiberClass::AlphaP => write!(f, "AlphaP"),
            FiberClass::KernelForm { lambda, nu } => {
                write!(f, "KernelForm(lambda={lambda}, nu={nu})")
            }
            FiberClass::Product(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "Product({})", inner.join(", "))
            }
            FiberClass::Unknown => write!(f, "Unknown"),
        }
    }
}

impl Serialize for FiberClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Result of pattern-matching a presentation against `K_(lambda,nu)`.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelForm {
    Known {
        lambda: BaseElement,
        nu: BaseElement,
    },
    NotOfKnownForm,
}

#[derive(Debug, Clone)]
pub struct HopfPresentation {
    p: u64,
    generators: Vec<String>,
    constants: Vec<BaseElement>,
    counit: Vec<BaseElement>,
    /// comultiplication images, in the doubled ring
    comul: Vec<MPoly>,
    vars: Vars,
    dvars: Vars,
}

impl HopfPresentation {
    /// Assemble without verifying the axioms (mutation tests want this).
    pub fn from_parts(
        p: u64,
        generators: Vec<String>,
        constants: Vec<BaseElement>,
        counit: Vec<BaseElement>,
        comul: Vec<MPoly>,
    ) -> Result<Self> {
        let vars = VarSet::new(generators.clone())?;
        let dnames: Vec<String> = generators
            .iter()
            .map(|g| left_name(g))
            .chain(generators.iter().map(|g| right_name(g)))
            .collect();
        let dvars = VarSet::new(dnames)?;
        if constants.len() != generators.len()
            || counit.len() != generators.len()
            || comul.len() != generators.len()
        {
            return Err(Error::Unsupported(
                "presentation parts have mismatched lengths".into(),
            ));
        }
        let comul = comul
            .into_iter()
            .map(|q| q.embed(&dvars))
            .collect::<Result<Vec<_>>>()?;
        Ok(HopfPresentation {
            p,
            generators,
            constants,
            counit,
            comul,
            vars,
            dvars,
        })
    }

    /// Presentation with the lambda-twisted Witt comultiplication on two
    /// generators, verified.
    pub fn witt_type(
        p: u64,
        names: (&str, &str),
        constants: (BaseElement, BaseElement),
        lambda: &BaseElement,
    ) -> Result<Self> {
        let generators = vec![names.0.to_string(), names.1.to_string()];
        let dnames: Vec<String> = generators
            .iter()
            .map(|g| left_name(g))
            .chain(generators.iter().map(|g| right_name(g)))
            .collect();
        let dvars = VarSet::new(dnames.clone())?;
        let left = WittPair::coords(p, &dvars, &dnames[0], &dnames[1])?;
        let right = WittPair::coords(p, &dvars, &dnames[2], &dnames[3])?;
        let sum = w2_add(lambda, &left, &right);
        let h = Self::from_parts(
            p,
            generators,
            vec![constants.0, constants.1],
            vec![BaseElement::zero(p), BaseElement::zero(p)],
            vec![sum.first, sum.second],
        )?;
        h.verify()?;
        Ok(h)
    }

    /// The Hopf algebra of `(Z/p^2)_R`:
    /// `R[u1,u2]/(u1^p - u1, u2^p - u2)`, comultiplication the W_2 law.
    pub fn make_zp2(p: u64) -> Result<Self> {
        crate::fp::PrimeCtx::new(p)?;
        Self::witt_type(
            p,
            ("u1", "u2"),
            (BaseElement::one(p), BaseElement::one(p)),
            &BaseElement::one(p),
        )
    }

    /// The Hopf algebra of `K_(lambda,nu)`:
    /// `R[u1,u2]/(u1^p - nu*u1, u2^p - nu^p*lambda^(p-1)*u2)` with the
    /// lambda-twisted law. The presentation is an odd-p form (at p = 2
    /// the subtraction carries an extra cocycle term into the second
    /// relation), so p = 2 is refused rather than guessed.
    pub fn make_kernel(lambda: &BaseElement, nu: &BaseElement, p: u64) -> Result<Self> {
        crate::fp::PrimeCtx::new(p)?;
        if p == 2 {
            return Err(Error::KernelCharTwo);
        }
        let c1 = nu.clone();
        let c2 = nu.pow(p).mul(&lambda.pow(p - 1));
        Self::witt_type(p, ("u1", "u2"), (c1, c2), lambda)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn constants(&self) -> &[BaseElement] {
        &self.constants
    }

    pub fn counit(&self) -> &[BaseElement] {
        &self.counit
    }

    pub fn comul(&self) -> &[MPoly] {
        &self.comul
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn doubled_vars(&self) -> &Vars {
        &self.dvars
    }

    /// The quotient rewrite rules `u_i^p -> c_i u_i` on the single ring.
    pub fn quotient_rules(&self) -> RewriteSystem {
        let rules: Vec<(&str, MPoly)> = self
            .generators
            .iter()
            .zip(&self.constants)
            .map(|(g, c)| {
                let v = MPoly::var(self.p, &self.vars, g).unwrap();
                (g.as_str(), v.mul_base(c))
            })
            .collect();
        RewriteSystem::new(self.p, &self.vars, rules).expect("diagonal rules are triangular")
    }

    /// Quotient rules on a ring containing one or more renamed copies of
    /// the generators (legs like `uL1`, `uA1`, ...).
    fn leg_rules(&self, vars: &Vars, legs: &[char]) -> RewriteSystem {
        let mut rules: Vec<(String, MPoly)> = Vec::new();
        for leg in legs {
            for (g, c) in self.generators.iter().zip(&self.constants) {
                let name = leg_name(g, *leg);
                let v = MPoly::var(self.p, vars, &name).unwrap();
                rules.push((name, v.mul_base(c)));
            }
        }
        let borrowed: Vec<(&str, MPoly)> =
            rules.iter().map(|(n, q)| (n.as_str(), q.clone())).collect();
        RewriteSystem::new(self.p, vars, borrowed).expect("diagonal rules are triangular")
    }

    /// Rules on the doubled ring (both tensor legs).
    pub fn doubled_rules(&self) -> RewriteSystem {
        self.leg_rules(&self.dvars, &['L', 'R'])
    }

    /// Monomials `u^a` with all exponents < p, in lex order: the module
    /// basis of the quotient.
    pub fn monomial_basis(&self) -> Vec<Vec<u32>> {
        let n = self.generators.len();
        let p = self.p as u32;
        let mut out = Vec::with_capacity((self.p as usize).pow(n as u32));
        let mut cur = vec![0u32; n];
        loop {
            out.push(cur.clone());
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < p {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Rank of the quotient as a free R-module (basis enumeration).
    pub fn rank(&self) -> u64 {
        self.monomial_basis().len() as u64
    }

    fn basis_index(&self, exps: &[u32]) -> usize {
        let mut idx = 0usize;
        for &e in exps {
            idx = idx * self.p as usize + e as usize;
        }
        idx
    }

    /// Expand a (normal-form) element of the quotient over the monomial
    /// basis as a lattice row.
    pub fn to_row(&self, q: &MPoly) -> Result<Row> {
        let nf = self.quotient_rules().normal_form(q);
        let mut row = Row::new();
        for (exps, c) in nf.terms() {
            row.insert(self.basis_index(exps), c.clone());
        }
        Ok(row)
    }

    /// Inverse of [`Self::to_row`].
    pub fn row_to_poly(&self, row: &Row) -> MPoly {
        let n = self.generators.len();
        let mut acc = MPoly::zero(self.p, &self.vars);
        for (&idx, c) in row {
            let mut exps = vec![0u32; n];
            let mut rest = idx;
            for i in (0..n).rev() {
                exps[i] = (rest % self.p as usize) as u32;
                rest /= self.p as usize;
            }
            acc = acc.add(&MPoly::monomial(c.clone(), &self.vars, exps));
        }
        acc
    }

    /// Printable labels of the monomial basis, lex order.
    pub fn basis_labels(&self) -> Vec<String> {
        self.monomial_basis()
            .iter()
            .map(|exps| {
                let m = MPoly::monomial(BaseElement::one(self.p), &self.vars, exps.clone());
                m.to_string()
            })
            .collect()
    }

    /// `(Delta (x) id)Delta = (id (x) Delta)Delta` on every generator, in
    /// the tripled quotient ring.
    pub fn check_coassoc(&self) -> CheckOutcome {
        let tnames: Vec<String> = ['A', 'B', 'C']
            .iter()
            .flat_map(|&l| self.generators.iter().map(move |g| leg_name(g, l)))
            .collect();
        let tvars = VarSet::new(tnames).expect("fresh tripled names");
        let rules = self.leg_rules(&tvars, &['A', 'B', 'C']);
        // uL_j -> Delta(u_j) in (A,B) legs, uR_j -> uC_j
        let mut left_map = BTreeMap::new();
        // uL_j -> uA_j, uR_j -> Delta(u_j) in (B,C) legs
        let mut right_map = BTreeMap::new();
        let mut ab = BTreeMap::new();
        let mut bc = BTreeMap::new();
        for g in &self.generators {
            ab.insert(left_name(g), leg_name(g, 'A'));
            ab.insert(right_name(g), leg_name(g, 'B'));
            bc.insert(left_name(g), leg_name(g, 'B'));
            bc.insert(right_name(g), leg_name(g, 'C'));
        }
        for (i, g) in self.generators.iter().enumerate() {
            let d_ab = self.comul[i]
                .rename(&tvars, &ab)
                .expect("rename into triple");
            let d_bc = self.comul[i]
                .rename(&tvars, &bc)
                .expect("rename into triple");
            left_map.insert(left_name(g), d_ab);
            left_map.insert(
                right_name(g),
                MPoly::var(self.p, &tvars, &leg_name(g, 'C')).unwrap(),
            );
            right_map.insert(
                left_name(g),
                MPoly::var(self.p, &tvars, &leg_name(g, 'A')).unwrap(),
            );
            right_map.insert(right_name(g), d_bc);
        }
        let mut residuals = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let lhs = self.comul[i]
                .substitute(&tvars, &left_map)
                .expect("substitute");
            let rhs = self.comul[i]
                .substitute(&tvars, &right_map)
                .expect("substitute");
            let res = rules.normal_form(&lhs.sub(&rhs));
            if !res.is_zero() {
                residuals.push((g.clone(), res));
            }
        }
        CheckOutcome::collect(residuals)
    }

    /// `(eps (x) id)Delta = id = (id (x) eps)Delta` on every generator.
    pub fn check_counit(&self) -> CheckOutcome {
        let rules = self.quotient_rules();
        let mut left_map = BTreeMap::new();
        let mut right_map = BTreeMap::new();
        for (j, g) in self.generators.iter().enumerate() {
            let eps = MPoly::constant(self.counit[j].clone(), &self.vars);
            let var = MPoly::var(self.p, &self.vars, g).unwrap();
            left_map.insert(left_name(g), eps.clone());
            left_map.insert(right_name(g), var.clone());
            right_map.insert(left_name(g), var);
            right_map.insert(right_name(g), eps);
        }
        let mut residuals = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let var = MPoly::var(self.p, &self.vars, g).unwrap();
            for map in [&left_map, &right_map] {
                let img = self.comul[i]
                    .substitute(&self.vars, map)
                    .expect("substitute");
                let res = rules.normal_form(&img.sub(&var));
                if !res.is_zero() {
                    residuals.push((g.clone(), res));
                }
            }
        }
        CheckOutcome::collect(residuals)
    }

    /// `Delta(u_i^p - c_i u_i)` normalizes to 0 in the doubled quotient:
    /// the comultiplication descends to the quotient. For the second Witt
    /// coordinate this is exactly the cocycle identity.
    pub fn check_relations(&self) -> CheckOutcome {
        let rules = self.doubled_rules();
        let mut residuals = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let d = &self.comul[i];
            let rel = d.pow(self.p).sub(&d.mul_base(&self.constants[i]));
            let res = rules.normal_form(&rel);
            if !res.is_zero() {
                residuals.push((g.clone(), res));
            }
        }
        CheckOutcome::collect(residuals)
    }

    /// The antipode, derived from the comultiplication by solving
    /// `m(S (x) id)Delta = unit . eps` generator by generator (for the
    /// Witt-type laws this is group negation). Regenerated on demand.
    pub fn antipode(&self) -> Vec<MPoly> {
        let mut images: Vec<MPoly> = Vec::with_capacity(self.generators.len());
        let mut map: BTreeMap<String, MPoly> = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            // cross part: Delta(u_i) - uL_i - uR_i
            let l = MPoly::var(self.p, &self.dvars, &left_name(g)).unwrap();
            let r = MPoly::var(self.p, &self.dvars, &right_name(g)).unwrap();
            let cross = self.comul[i].sub(&l).sub(&r);
            // substitute uL_j -> S(u_j), uR_j -> u_j (defined for j < i by
            // triangularity of the laws in play)
            let mut sub = map.clone();
            for h in &self.generators {
                sub.entry(right_name(h))
                    .or_insert_with(|| MPoly::var(self.p, &self.vars, h).unwrap());
            }
            let var = MPoly::var(self.p, &self.vars, g).unwrap();
            let eps = MPoly::constant(self.counit[i].clone(), &self.vars);
            let crossed = cross
                .substitute(&self.vars, &sub)
                .expect("antipode substitution");
            let s = eps.sub(&var).sub(&crossed);
            map.insert(left_name(g), s.clone());
            images.push(s);
        }
        images
    }

    /// Verify `m(S (x) id)Delta = unit . eps` and that S respects the
    /// relations, in the single quotient ring.
    pub fn check_antipode(&self) -> CheckOutcome {
        let rules = self.quotient_rules();
        let s = self.antipode();
        let mut map = BTreeMap::new();
        for (j, g) in self.generators.iter().enumerate() {
            map.insert(left_name(g), s[j].clone());
            map.insert(right_name(g), MPoly::var(self.p, &self.vars, g).unwrap());
        }
        let mut residuals = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let folded = self.comul[i]
                .substitute(&self.vars, &map)
                .expect("substitute");
            let eps = MPoly::constant(self.counit[i].clone(), &self.vars);
            let res = rules.normal_form(&folded.sub(&eps));
            if !res.is_zero() {
                residuals.push((g.clone(), res));
            }
            // S must send the relation ideal into itself
            let rel = s[i].pow(self.p).sub(&s[i].mul_base(&self.constants[i]));
            let res = rules.normal_form(&rel);
            if !res.is_zero() {
                residuals.push((format!("{g} (relation)"), res));
            }
        }
        CheckOutcome::collect(residuals)
    }

    /// Full axiom suite; errors carry the first offending residual.
    pub fn verify(&self) -> Result<()> {
        for (name, outcome) in [
            ("coassociativity", self.check_coassoc()),
            ("counit", self.check_counit()),
            ("relation compatibility", self.check_relations()),
            ("antipode", self.check_antipode()),
        ] {
            if !outcome.ok {
                return Err(Error::Verification {
                    stage: "hopf",
                    msg: format!("{name}: {}", outcome.describe()),
                });
            }
        }
        Ok(())
    }

    /// All structure constants lie in R.
    pub fn is_integral_model(&self) -> bool {
        self.constants.iter().all(BaseElement::is_integral)
            && self.counit.iter().all(BaseElement::is_integral)
            && self.comul.iter().all(MPoly::is_integral)
    }

    /// Reduce the presentation mod pi. Errors on a non-integral model.
    pub fn special_fiber(&self) -> Result<Self> {
        if !self.is_integral_model() {
            return Err(Error::NotIntegralModel(
                "cannot reduce a non-integral presentation mod pi".into(),
            ));
        }
        let reduce = |b: &BaseElement| -> BaseElement {
            BaseElement::monomial(self.p, b.reduce_mod_pi().expect("integral"), 0)
        };
        let constants = self.constants.iter().map(reduce).collect();
        let counit = self.counit.iter().map(reduce).collect();
        let comul = self
            .comul
            .iter()
            .map(|q| q.reduce_mod_pi())
            .collect::<Result<Vec<_>>>()?;
        Ok(HopfPresentation {
            p: self.p,
            generators: self.generators.clone(),
            constants,
            counit,
            comul,
            vars: self.vars.clone(),
            dvars: self.dvars.clone(),
        })
    }

    /// True iff every comultiplication image is `uL_i + uR_i` exactly.
    pub fn is_primitive(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, g)| {
            let l = MPoly::var(self.p, &self.dvars, &left_name(g)).unwrap();
            let r = MPoly::var(self.p, &self.dvars, &right_name(g)).unwrap();
            self.comul[i] == l.add(&r)
        })
    }

    /// Classify a special fibre among the named group schemes. Expects a
    /// pi-free presentation (as produced by [`Self::special_fiber`]).
    pub fn classify_fiber(&self) -> FiberClass {
        if self.is_primitive() {
            let parts: Vec<FiberClass> = self
                .constants
                .iter()
                .map(|c| {
                    if c.is_zero() {
                        FiberClass::AlphaP
                    } else {
                        FiberClass::EtaleZp
                    }
                })
                .collect();
            return match parts.len() {
                1 => parts.into_iter().next().unwrap(),
                _ => FiberClass::Product(parts),
            };
        }
        if self.p > 2 {
            if let Ok(KernelForm::Known { lambda, nu }) = self.identify_kernel_form() {
                return FiberClass::KernelForm { lambda, nu };
            }
        }
        FiberClass::Unknown
    }

    /// Pattern-match the presentation against `K_(lambda,nu)`: the cross
    /// coefficient on `uL1^k uR1^(p-k)` must be `lambda*<p,k>` for one
    /// lambda across all k, and the relation constants must be
    /// `(nu, nu^p*lambda^(p-1))`.
    pub fn identify_kernel_form(&self) -> Result<KernelForm> {
        if self.p == 2 {
            return Err(Error::UnsupportedCharTwo(
                "kernel-form identification follows the p>2 presentation",
            ));
        }
        if self.generators.len() != 2 {
            return Ok(KernelForm::NotOfKnownForm);
        }
        if self.counit.iter().any(|c| !c.is_zero()) {
            return Ok(KernelForm::NotOfKnownForm);
        }
        let g1 = &self.generators[0];
        let g2 = &self.generators[1];
        let l1 = MPoly::var(self.p, &self.dvars, &left_name(g1)).unwrap();
        let r1 = MPoly::var(self.p, &self.dvars, &right_name(g1)).unwrap();
        let l2 = MPoly::var(self.p, &self.dvars, &left_name(g2)).unwrap();
        let r2 = MPoly::var(self.p, &self.dvars, &right_name(g2)).unwrap();
        if self.comul[0] != l1.add(&r1) {
            return Ok(KernelForm::NotOfKnownForm);
        }
        // cross = Delta(u2) - uL2 - uR2 must equal lambda * sum <p,k> uL1^k uR1^(p-k)
        let cross = self.comul[1].sub(&l2).sub(&r2);
        let l1_idx = self.dvars.index(&left_name(g1)).unwrap();
        let r1_idx = self.dvars.index(&right_name(g1)).unwrap();
        // extract lambda from the k = 1 coefficient (<p,1> = 1)
        let mut exps = vec![0u32; self.dvars.len()];
        exps[l1_idx] = 1;
        exps[r1_idx] = (self.p - 1) as u32;
        let lambda = cross
            .terms()
            .find(|(e, _)| **e == exps)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| BaseElement::zero(self.p));
        let mut expected = MPoly::zero(self.p, &self.dvars);
        for k in 1..self.p {
            let coeff = lambda.mul_scalar(witt_binom(self.p, k)?);
            let mut e = vec![0u32; self.dvars.len()];
            e[l1_idx] = k as u32;
            e[r1_idx] = (self.p - k) as u32;
            expected = expected.add(&MPoly::monomial(coeff, &self.dvars, e));
        }
        if cross != expected {
            return Ok(KernelForm::NotOfKnownForm);
        }
        let nu = self.constants[0].clone();
        let c2_expected = nu.pow(self.p).mul(&lambda.pow(self.p - 1));
        if self.constants[1] != c2_expected {
            return Ok(KernelForm::NotOfKnownForm);
        }
        Ok(KernelForm::Known { lambda, nu })
    }
}
