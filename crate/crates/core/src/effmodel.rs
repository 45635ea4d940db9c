//! Effective models of degenerating group actions.
//!
//! Given the verified coaction of `G = (Z/p^2)_R` on an integral model of
//! the cover, the effective model is computed as the R-subalgebra of `RG`
//! generated by the coaction coefficients: the coefficients span a lattice
//! inside the rank-p^2 free module underlying `RG`, the lattice is
//! saturated under multiplication (normal forms after each product), and
//! the canonical generators are the minimal pi-power multiples of the
//! group coordinates lying in the saturated lattice. The comultiplication
//! of `RG` is rewritten in the new generators, with an integrality check —
//! failure means the coefficient subalgebra is not a sub-Hopf-algebra and
//! is surfaced, never repaired.
//!
//! On top of the model construction sit the diagnostics: domination
//! compatibility, generic-point stabilizers on the special fibre, the
//! operational faithfulness criterion (coefficient ideal = augmentation
//! ideal), invariant-ring comparison, and the effective model of the
//! kernel-of-reduction subgroup. [`degenerate`] orchestrates the whole
//! pipeline into a deterministic, JSON-serializable report.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::base::BaseElement;
use crate::coaction::Coaction;
use crate::cover::{build_cover, ConductorSpec};
use crate::error::{Error, Result};
use crate::fp::PrimeCtx;
use crate::hopf::{left_name, right_name, CheckOutcome, FiberClass, HopfPresentation, KernelForm};
use crate::lattice::{left_kernel, Lattice, Row};
use crate::mpoly::{MPoly, VarSet, Vars};
use crate::rewrite::RewriteSystem;

/// The computed effective model `G -> 𝒢`.
#[derive(Debug, Clone)]
pub struct EffectiveModel {
    /// Presentation of the effective model, generators `v1, ..., vn`.
    pub group: HopfPresentation,
    /// Domination images `v_i -> pi^(e_i) * u_i`, in the ring of `G`.
    pub domination: Vec<MPoly>,
    /// The pi-exponents `e_i` of the canonical generators.
    pub scalings: Vec<i64>,
    /// Saturated coefficient-subalgebra lattice inside the module of `RG`.
    pub lattice: Lattice,
}

fn stage(stage: &'static str, e: Error) -> Error {
    match e {
        e @ Error::Verification { .. } => e,
        other => Error::Verification {
            stage,
            msg: other.to_string(),
        },
    }
}

/// `nf = c * reference` for a base scalar `c`, when `reference` is a
/// single monomial.
fn as_base_multiple(nf: &MPoly, reference: &MPoly) -> Option<BaseElement> {
    let p = nf.p();
    if nf.is_zero() {
        return Some(BaseElement::zero(p));
    }
    if nf.num_terms() != 1 || reference.num_terms() != 1 {
        return None;
    }
    let (e1, c1) = nf.terms().next().unwrap();
    let (e2, c2) = reference.terms().next().unwrap();
    if e1 != e2 {
        return None;
    }
    c1.div_monomial(c2).ok()
}

/// Saturate a lattice of quotient-ring elements under multiplication.
/// The hard cap guards nontermination; the ambient module has finite rank
/// and pivot valuations are bounded below by 0, so a stable pass ends the
/// loop long before the cap in practice.
fn saturate_multiplicatively(
    h: &HopfPresentation,
    mut lat: Lattice,
    cap: usize,
) -> Result<Lattice> {
    for _ in 0..cap {
        let polys: Vec<MPoly> = lat.rows().iter().map(|r| h.row_to_poly(r)).collect();
        let mut grew = false;
        for i in 0..polys.len() {
            for j in i..polys.len() {
                let row = h.to_row(&polys[i].mul(&polys[j]))?;
                if lat.insert_row(row)? {
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(lat);
        }
    }
    Err(Error::SaturationDiverged(cap))
}

/// The raw coefficient lattice (R-span of the coaction coefficients and
/// the unit, no multiplicative saturation). Used to detect degeneration:
/// in the degenerate regimes this is a strict sublattice of the saturated
/// subalgebra lattice.
pub fn coefficient_span(c: &Coaction) -> Result<Lattice> {
    let h = c.hopf();
    let mut rows = vec![h.to_row(&MPoly::one(c.p(), h.vars()))?];
    for coeff in c.coefficients()? {
        rows.push(h.to_row(&coeff)?);
    }
    Lattice::reduce(c.p(), h.basis_labels(), rows)
}

/// Rewrite a polynomial over the doubled generator legs of `from` into the
/// doubled legs of scaled generators: the monomial with left exponents
/// `a`, right exponents `b` picks up `pi^(shift - sum e_j (a_j + b_j))`.
fn rescale_doubled(
    poly: &MPoly,
    from: &HopfPresentation,
    target: &Vars,
    scalings: &[i64],
    shift: i64,
) -> MPoly {
    let p = poly.p();
    let n = from.num_generators();
    let mut acc = MPoly::zero(p, target);
    for (exps, c) in poly.terms() {
        let mut total = shift;
        for j in 0..n {
            total -= scalings[j] * (exps[j] as i64 + exps[n + j] as i64);
        }
        acc = acc.add(&MPoly::monomial(c.mul_pi_pow(total), target, exps.clone()));
    }
    acc
}

/// Compute the effective model from a verified coaction of a rank-p^2
/// group on an integral model.
pub fn effective_model(c: &Coaction) -> Result<EffectiveModel> {
    let p = c.p();
    let g = c.hopf();
    if g.rank() != p * p {
        return Err(Error::Unsupported(format!(
            "effective model expects an acting group of rank p^2, got rank {}",
            g.rank()
        )));
    }
    let lat = coefficient_span(c)?;
    let cap = (p * p) as usize;
    let lat = saturate_multiplicatively(g, lat, cap)?;

    // canonical generators: minimal-valuation scalar multiples of the
    // group coordinates lying in the lattice
    let mut scalings = Vec::new();
    let mut domination = Vec::new();
    let mut names = Vec::new();
    for (i, gen) in g.generators().iter().enumerate() {
        let var = MPoly::var(p, g.vars(), gen)?;
        let row = g.to_row(&var)?;
        let e = lat.min_pi_scaling(&row)?.ok_or_else(|| Error::NotSubHopf {
            residual: format!("no pi-power multiple of {gen} lies in the coefficient subalgebra"),
        })?;
        scalings.push(e);
        domination.push(var.mul_pi_pow(e));
        names.push(format!("v{}", i + 1));
    }

    // relation constants: v_i^p must be a base multiple of v_i in RG
    let rules = g.quotient_rules();
    let mut constants = Vec::new();
    for dom in &domination {
        let nf = rules.normal_form(&dom.pow(p));
        let c = as_base_multiple(&nf, dom).ok_or_else(|| Error::NotSubHopf {
            residual: format!("p-th power {nf} is not a scalar multiple of its generator"),
        })?;
        constants.push(c);
    }

    // induced comultiplication: Delta(v_i) = pi^(e_i) Delta(u_i) rewritten
    // in the scaled legs; all coefficients must stay integral
    let dnames: Vec<String> = names
        .iter()
        .map(|n| left_name(n))
        .chain(names.iter().map(|n| right_name(n)))
        .collect();
    let dvars = VarSet::new(dnames)?;
    let mut comul = Vec::new();
    for (i, d) in g.comul().iter().enumerate() {
        let rescaled = rescale_doubled(d, g, &dvars, &scalings, scalings[i]);
        if !rescaled.is_integral() {
            return Err(Error::NotSubHopf {
                residual: format!("Delta(v{}) = {rescaled}", i + 1),
            });
        }
        comul.push(rescaled);
    }
    let counit = g
        .counit()
        .iter()
        .zip(&scalings)
        .map(|(eps, e)| eps.mul_pi_pow(*e))
        .collect();
    let group = HopfPresentation::from_parts(p, names.clone(), constants, counit, comul)?;
    group.verify().map_err(|e| stage("effective_model", e))?;

    // the domination must be a morphism of Hopf algebras:
    // (dom (x) dom) Delta_𝒢(v_i) = Delta_G(dom(v_i)) in the doubled ring
    let drules = g.doubled_rules();
    let mut dom_map = BTreeMap::new();
    for (j, gen) in g.generators().iter().enumerate() {
        let l = MPoly::var(p, g.doubled_vars(), &left_name(gen))?;
        let r = MPoly::var(p, g.doubled_vars(), &right_name(gen))?;
        dom_map.insert(left_name(&names[j]), l.mul_pi_pow(scalings[j]));
        dom_map.insert(right_name(&names[j]), r.mul_pi_pow(scalings[j]));
    }
    for (i, dv) in group.comul().iter().enumerate() {
        let lhs = dv.substitute(g.doubled_vars(), &dom_map)?;
        let rhs = g.comul()[i].mul_pi_pow(scalings[i]);
        if !drules.normal_form(&lhs.sub(&rhs)).is_zero() {
            return Err(Error::Verification {
                stage: "effective_model",
                msg: format!("domination is not a Hopf morphism at v{}", i + 1),
            });
        }
    }

    Ok(EffectiveModel {
        group,
        domination,
        scalings,
        lattice: lat,
    })
}

/// Rewrite the G-coaction through the effective model: group monomials
/// `u^a` become `v^a` with coefficients divided by `pi^(sum e_j a_j)`.
/// Integrality of the result is exactly the statement that the action of
/// `G` extends to an action of the effective model.
pub fn induced_coaction(c: &Coaction, em: &EffectiveModel) -> Result<Coaction> {
    let p = c.p();
    let cover = c.cover().clone();
    let joined_v = cover.vars().join(em.group.vars())?;
    let ncover = cover.vars().len();
    let n = em.group.num_generators();
    let mut images = Vec::new();
    for (i, img) in c.images().iter().enumerate() {
        let mut acc = MPoly::zero(p, &joined_v);
        for (exps, coeff) in img.terms() {
            let mut shift = 0i64;
            for j in 0..n {
                shift -= em.scalings[j] * exps[ncover + j] as i64;
            }
            acc = acc.add(&MPoly::monomial(
                coeff.mul_pi_pow(shift),
                &joined_v,
                exps.clone(),
            ));
        }
        if !acc.is_integral() {
            return Err(Error::Verification {
                stage: "induced_coaction",
                msg: format!(
                    "image of {} does not factor integrally through the effective model: {acc}",
                    cover.fiber_vars()[i]
                ),
            });
        }
        images.push(acc);
    }
    let induced = Coaction::new(em.group.clone(), cover, images)?;
    induced.verify().map_err(|e| stage("induced_coaction", e))?;
    Ok(induced)
}

/// Domination compatibility: substituting the domination images into the
/// effective-model coaction reproduces the original coaction identically.
pub fn check_domination(
    original: &Coaction,
    induced: &Coaction,
    domination: &[MPoly],
) -> Result<CheckOutcome> {
    let p = original.p();
    let joined_u = original.joined_vars();
    let mut map = BTreeMap::new();
    for (j, vname) in induced.hopf().generators().iter().enumerate() {
        map.insert(vname.clone(), domination[j].embed(joined_u)?);
    }
    let rules = original.joined_rules()?;
    let mut residuals = Vec::new();
    for (i, v) in original.cover().fiber_vars().iter().enumerate() {
        let substituted = induced.images()[i].substitute(joined_u, &map)?;
        let res = rules.normal_form(&substituted.sub(&original.images()[i]));
        if !res.is_zero() {
            residuals.push((v.clone(), res));
        }
    }
    let _ = p;
    Ok(CheckOutcome {
        ok: residuals.is_empty(),
        residuals,
    })
}

/// Stabilizer of a symbolic generic point of the special fibre.
#[derive(Debug, Clone)]
pub struct StabilizerReport {
    /// Generators of the stabilizer ideal in the group variables, with
    /// coefficients in the generic point coordinates.
    pub ideal: Vec<MPoly>,
    /// Rank of the quotient algebra: the order of the stabilizer.
    pub order: u64,
}

/// Compute the stabilizer of a generic point of the special fibre under a
/// mod-pi coaction. The point is adjoined symbolically: lower-case copies
/// of the fiber variables subject only to the mod-pi cover relations. The
/// stabilizer conditions must be linear in the group variables with some
/// scalar pivot available at each elimination step (true in the supported
/// regimes); anything else is surfaced as an error.
pub fn stabilizer(c_fiber: &Coaction) -> Result<StabilizerReport> {
    let p = c_fiber.p();
    let cover = c_fiber.cover();
    let h = c_fiber.hopf();
    let zname = |v: &str| v.to_lowercase();
    let mut names: Vec<String> = vec![cover.base_var().to_string()];
    names.extend(cover.fiber_vars().iter().map(|v| zname(v)));
    names.extend(h.generators().iter().cloned());
    let point_vars = VarSet::new(names)?;
    let group_pos: Vec<usize> = h
        .generators()
        .iter()
        .map(|g| point_vars.index(g).unwrap())
        .collect();

    // rewrite rules: mod-pi cover relations on the point coordinates plus
    // the group relations
    let mut rules: Vec<(String, MPoly)> = Vec::new();
    let mut lower = BTreeMap::new();
    for v in cover.fiber_vars() {
        lower.insert(v.clone(), zname(v));
    }
    for (v, rhs) in cover.rules().rules() {
        rules.push((zname(v), rhs.rename(&point_vars, &lower)?));
    }
    for (j, g) in h.generators().iter().enumerate() {
        let var = MPoly::var(p, &point_vars, g)?;
        rules.push((g.clone(), var.mul_base(&h.constants()[j])));
    }
    let borrowed: Vec<(&str, MPoly)> = rules.iter().map(|(n, q)| (n.as_str(), q.clone())).collect();
    let rules = RewriteSystem::new(p, &point_vars, borrowed)?;

    // conditions: action(v).(z) = z
    let mut ideal = Vec::new();
    for (i, v) in cover.fiber_vars().iter().enumerate() {
        let moved = c_fiber.images()[i].rename(&point_vars, &lower)?;
        let z = MPoly::var(p, &point_vars, &zname(v))?;
        let g = rules.normal_form(&moved.sub(&z));
        if !g.is_zero() {
            ideal.push(g);
        }
    }

    // linear solve with scalar pivots
    let group_degree = |exps: &[u32]| -> u32 { group_pos.iter().map(|&i| exps[i]).sum() };
    let mut active = ideal.clone();
    let mut eliminated: Vec<(usize, MPoly)> = Vec::new(); // (generator index, image)
    while let Some(cond) = active.first().cloned() {
        for (exps, _) in cond.terms() {
            match group_degree(exps) {
                0 => {
                    return Err(Error::Verification {
                        stage: "stabilizer",
                        msg: format!("condition has a group-free part: {cond}"),
                    })
                }
                1 => {}
                _ => return Err(Error::StabilizerNonLinear(cond.to_string())),
            }
        }
        // find a group variable whose coefficient in `cond` is a scalar
        let mut pivot: Option<(usize, u64)> = None;
        for (j, &pos) in group_pos.iter().enumerate() {
            if eliminated.iter().any(|(k, _)| *k == j) {
                continue;
            }
            let mut unit_exps = vec![0u32; point_vars.len()];
            unit_exps[pos] = 1;
            let coeff = cond
                .terms()
                .find(|(e, _)| **e == unit_exps)
                .map(|(_, c)| c.clone());
            if let Some(c) = coeff.and_then(|c| c.as_scalar()) {
                if c != 0 {
                    pivot = Some((j, c));
                    break;
                }
            }
        }
        let Some((j, cval)) = pivot else {
            return Err(Error::StabilizerNonLinear(format!(
                "no scalar pivot available in `{cond}`"
            )));
        };
        let f = PrimeCtx::new(p)?;
        let pos = group_pos[j];
        let vj = MPoly::var(p, &point_vars, &h.generators()[j])?;
        // cond = c*v_j + rest  =>  v_j = -c^(-1) * rest
        let rest = cond.sub(&vj.mul_base(&BaseElement::monomial(p, cval, 0)));
        let image = rest.mul_base(&BaseElement::monomial(p, f.neg(f.inv(cval)), 0));
        let mut sub = BTreeMap::new();
        sub.insert(h.generators()[j].clone(), image.clone());
        active.remove(0);
        active = active
            .into_iter()
            .map(|g| Ok(rules.normal_form(&g.substitute(&point_vars, &sub)?)))
            .collect::<Result<Vec<_>>>()?;
        active.retain(|g| !g.is_zero());
        eliminated = eliminated
            .into_iter()
            .map(|(k, img)| Ok((k, rules.normal_form(&img.substitute(&point_vars, &sub)?))))
            .collect::<Result<Vec<_>>>()?;
        eliminated.push((j, image));
        let _ = pos;
    }

    // consistency: substituted generators must satisfy their relations
    for (j, img) in &eliminated {
        let rel = img.pow(p).sub(&img.mul_base(&h.constants()[*j]));
        let res = rules.normal_form(&rel);
        if !res.is_zero() {
            return Err(Error::Verification {
                stage: "stabilizer",
                msg: format!(
                    "substitution for {} is inconsistent with its relation: {res}",
                    h.generators()[*j]
                ),
            });
        }
    }
    let free = h.num_generators() - eliminated.len();
    Ok(StabilizerReport {
        ideal,
        order: p.pow(free as u32),
    })
}

/// Operational faithfulness on the special fibre: the ideal generated by
/// the coaction coefficients minus their counit values must equal the
/// augmentation ideal of the fibre group.
pub fn faithfulness_check(c_fiber: &Coaction) -> Result<bool> {
    let p = c_fiber.p();
    let h = c_fiber.hopf();
    let mut gens = Vec::new();
    for coeff in c_fiber.coefficients()? {
        let eps = coeff.constant_coefficient();
        let shifted = coeff.sub(&MPoly::constant(eps, h.vars()));
        if !shifted.is_zero() {
            gens.push(shifted);
        }
    }
    // ideal(gens) as a k-lattice: span of gens * (every basis monomial)
    let mut rows = Vec::new();
    for g in &gens {
        for exps in h.monomial_basis() {
            let m = MPoly::monomial(BaseElement::one(p), h.vars(), exps);
            rows.push(h.to_row(&g.mul(&m))?);
        }
    }
    let lat = Lattice::reduce(p, h.basis_labels(), rows)?;
    for gen in h.generators() {
        let row = h.to_row(&MPoly::var(p, h.vars(), gen)?)?;
        if !lat.contains(&row) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Torsor verdict from the two special-fibre diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Torsor,
    FaithfulNotFree,
    NotFaithful,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Torsor => write!(f, "Torsor"),
            Verdict::FaithfulNotFree => write!(f, "FaithfulNotFree"),
            Verdict::NotFaithful => write!(f, "NotFaithful"),
        }
    }
}

pub fn torsor_verdict(faithful: bool, stabilizer_order: u64) -> Verdict {
    match (faithful, stabilizer_order) {
        (true, 1) => Verdict::Torsor,
        (true, _) => Verdict::FaithfulNotFree,
        (false, _) => Verdict::NotFaithful,
    }
}

/// Kernel lattice of `mu - incl (x) 1` on the span of the cover monomials
/// `w^c Z1^a Z2^b` with `a, b < p`, `c <= d`: the invariants of the
/// coaction inside that span, as coefficient rows over the cover basis.
fn invariant_kernel(c: &Coaction, d: u32) -> Result<Vec<Row>> {
    invariant_kernel_rows(c, d)
}

/// The invariants of a coaction inside the bounded monomial span, as an
/// echelon lattice over the cover basis (lex order).
pub fn invariant_lattice(c: &Coaction, d: u32) -> Result<Lattice> {
    let p = c.p();
    let basis = c.cover().monomial_basis(d);
    let labels: Vec<String> = basis
        .iter()
        .map(|e| MPoly::monomial(BaseElement::one(p), c.cover().vars(), e.clone()).to_string())
        .collect();
    Lattice::reduce(p, labels, invariant_kernel_rows(c, d)?)
}

fn invariant_kernel_rows(c: &Coaction, d: u32) -> Result<Vec<Row>> {
    let p = c.p();
    let cover = c.cover();
    let joined = c.joined_vars();
    let rules = c.joined_rules()?;
    let basis = cover.monomial_basis(d);
    let mut map = BTreeMap::new();
    for (j, v) in cover.fiber_vars().iter().enumerate() {
        map.insert(v.clone(), c.images()[j].clone());
    }
    // residual polynomials mu(m) - m (x) 1, then a common column indexing
    let mut residuals = Vec::new();
    let mut columns: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for exps in &basis {
        let m = MPoly::monomial(BaseElement::one(p), cover.vars(), exps.clone());
        let moved = m.embed(joined)?.substitute(joined, &map)?;
        let res = rules.normal_form(&moved.sub(&m.embed(joined)?));
        for (e, _) in res.terms() {
            let next = columns.len();
            columns.entry(e.clone()).or_insert(next);
        }
        residuals.push(res);
    }
    let rows: Vec<Row> = residuals
        .iter()
        .map(|res| {
            res.terms()
                .map(|(e, coeff)| (columns[e], coeff.clone()))
                .collect()
        })
        .collect();
    left_kernel(p, columns.len(), &rows)
}

/// Compare the invariants of two coactions on the same cover up to base
/// degree `d`, and require both to contain the base polynomials.
pub fn invariants_check(a: &Coaction, b: &Coaction, d: u32) -> Result<bool> {
    if a.cover().vars() != b.cover().vars() {
        return Err(Error::Unsupported(
            "invariants_check needs a common cover".into(),
        ));
    }
    let p = a.p();
    let basis = a.cover().monomial_basis(d);
    let labels: Vec<String> = basis
        .iter()
        .map(|e| MPoly::monomial(BaseElement::one(p), a.cover().vars(), e.clone()).to_string())
        .collect();
    let ka = Lattice::reduce(p, labels.clone(), invariant_kernel(a, d)?)?;
    let kb = Lattice::reduce(p, labels, invariant_kernel(b, d)?)?;
    if !ka.same_module(&kb) {
        return Ok(false);
    }
    // both contain the image of R[w]: the unit rows at the pure w^c monomials
    for (idx, exps) in basis.iter().enumerate() {
        if exps.iter().skip(1).all(|&e| e == 0) {
            let mut row = Row::new();
            row.insert(idx, BaseElement::one(p));
            if !ka.contains(&row) || !kb.contains(&row) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Which subgroup of `Z/p^2` to restrict to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subgroup {
    /// `H = p Z/p^2`, the kernel of reduction, presented as `RG/(u1)`.
    KernelOfReduction,
    FullGroup,
}

fn is_connected(h: &HopfPresentation) -> bool {
    h.constants()
        .iter()
        .all(|c| c.is_integral() && (c.reduce_mod_pi() == Ok(0)))
}

/// Effective model of the restricted action: the image of the effective
/// model's ring inside `RH`, with its connectedness verdict (all relation
/// constants vanish mod pi).
pub fn subgroup_effective_model(
    c: &Coaction,
    em: &EffectiveModel,
    sub: Subgroup,
) -> Result<(HopfPresentation, bool)> {
    let p = c.p();
    let g = c.hopf();
    if let Subgroup::FullGroup = sub {
        return Ok((em.group.clone(), is_connected(&em.group)));
    }
    // RH = RG/(u1): drop the first generator, substitute 0 for it
    let h_gens: Vec<String> = g.generators()[1..].to_vec();
    let h_constants: Vec<BaseElement> = g.constants()[1..].to_vec();
    let h_counit: Vec<BaseElement> = g.counit()[1..].to_vec();
    let dnames: Vec<String> = h_gens
        .iter()
        .map(|n| left_name(n))
        .chain(h_gens.iter().map(|n| right_name(n)))
        .collect();
    let h_dvars = VarSet::new(dnames)?;
    let dropped = &g.generators()[0];
    let mut kill = BTreeMap::new();
    kill.insert(left_name(dropped), MPoly::zero(p, g.doubled_vars()));
    kill.insert(right_name(dropped), MPoly::zero(p, g.doubled_vars()));
    let h_comul: Vec<MPoly> = g.comul()[1..]
        .iter()
        .map(|d| {
            d.substitute(g.doubled_vars(), &kill)
                .and_then(|q| q.project(&h_dvars))
        })
        .collect::<Result<Vec<_>>>()?;
    let rh = HopfPresentation::from_parts(p, h_gens.clone(), h_constants, h_counit, h_comul)?;
    rh.verify()
        .map_err(|e| stage("subgroup_effective_model", e))?;

    // image of the effective model's generators in RH
    let mut kill_single = BTreeMap::new();
    kill_single.insert(dropped.clone(), MPoly::zero(p, g.vars()));
    let mut rows = vec![rh.to_row(&MPoly::one(p, rh.vars()))?];
    for dom in &em.domination {
        let img = dom.substitute(g.vars(), &kill_single)?.project(rh.vars())?;
        if !img.is_zero() {
            rows.push(rh.to_row(&img)?);
        }
    }
    let lat = Lattice::reduce(p, rh.basis_labels(), rows)?;
    let lat = saturate_multiplicatively(&rh, lat, (p * p) as usize)?;

    // canonical generators of the image subalgebra
    let mut n_names = Vec::new();
    let mut n_scalings = Vec::new();
    let mut n_sources = Vec::new();
    for (j, gen) in rh.generators().iter().enumerate() {
        let var = MPoly::var(p, rh.vars(), gen)?;
        if let Some(e) = lat.min_pi_scaling(&rh.to_row(&var)?)? {
            n_names.push(em.group.generators()[j + 1].clone());
            n_scalings.push(e);
            n_sources.push(j);
        }
    }
    let n_constants = n_sources
        .iter()
        .zip(&n_scalings)
        .map(|(&j, &e)| {
            let dom = MPoly::var(p, rh.vars(), &rh.generators()[j])?.mul_pi_pow(e);
            let nf = rh.quotient_rules().normal_form(&dom.pow(p));
            as_base_multiple(&nf, &dom).ok_or_else(|| Error::NotSubHopf {
                residual: format!("{nf} is not a scalar multiple of its generator"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n_dnames: Vec<String> = n_names
        .iter()
        .map(|n| left_name(n))
        .chain(n_names.iter().map(|n| right_name(n)))
        .collect();
    let n_dvars = VarSet::new(n_dnames)?;
    let mut n_comul = Vec::new();
    for (idx, &j) in n_sources.iter().enumerate() {
        // restrict Delta_RH(u_j) to the generators kept, rescale
        let d = &rh.comul()[j];
        let full_scalings: Vec<i64> = rh
            .generators()
            .iter()
            .enumerate()
            .map(|(k, _)| {
                n_sources
                    .iter()
                    .position(|&s| s == k)
                    .map(|pos| n_scalings[pos])
                    .unwrap_or(0)
            })
            .collect();
        let rescaled = rescale_doubled(
            d,
            &rh,
            &rh.doubled_vars().clone(),
            &full_scalings,
            n_scalings[idx],
        );
        if !rescaled.is_integral() {
            return Err(Error::NotSubHopf {
                residual: format!("Delta({}) = {rescaled}", n_names[idx]),
            });
        }
        // rename RH legs to the kept generator legs
        let mut rename = BTreeMap::new();
        for (pos, &s) in n_sources.iter().enumerate() {
            rename.insert(left_name(&rh.generators()[s]), left_name(&n_names[pos]));
            rename.insert(right_name(&rh.generators()[s]), right_name(&n_names[pos]));
        }
        n_comul.push(rescaled.rename(&n_dvars, &rename)?);
    }
    let n_counit = n_sources
        .iter()
        .zip(&n_scalings)
        .map(|(&j, &e)| rh.counit()[j].mul_pi_pow(e))
        .collect();
    let nmodel = HopfPresentation::from_parts(p, n_names, n_constants, n_counit, n_comul)?;
    nmodel
        .verify()
        .map_err(|e| stage("subgroup_effective_model", e))?;
    let connected = is_connected(&nmodel);
    Ok((nmodel, connected))
}

/// Everything the pipeline produces, JSON-stable field names and order.
#[derive(Debug, Clone, Serialize)]
pub struct DegenerationReport {
    pub spec: SpecInfo,
    pub change_of_variables: Vec<String>,
    pub model_equations: Vec<String>,
    pub effective_model: EffModelInfo,
    pub identified: IdentifiedForm,
    pub domination: Vec<String>,
    pub fiber_class: FiberClass,
    pub stabilizer: StabilizerInfo,
    pub verdict: Verdict,
    pub faithful: bool,
    pub invariants_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecInfo {
    pub p: u64,
    pub m1: i64,
    pub m2: i64,
    pub n1: Option<i64>,
    pub m1_tilde: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EffModelInfo {
    pub generators: Vec<String>,
    pub relation_constants: Vec<String>,
    pub comul: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentifiedForm {
    pub lambda: String,
    pub nu: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilizerInfo {
    pub ideal: Vec<String>,
    pub order: u64,
}

impl DegenerationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.spec;
        out.push_str(&format!("conductors: p={} m1={} m2={}", s.p, s.m1, s.m2));
        if let (Some(n1), Some(mt)) = (s.n1, s.m1_tilde) {
            out.push_str(&format!(" (n1={n1}, m1~={mt})"));
        }
        out.push('\n');
        out.push_str(&format!(
            "change of variables: {}\n",
            self.change_of_variables.join(", ")
        ));
        out.push_str("model equations:\n");
        for eq in &self.model_equations {
            out.push_str(&format!("  {eq}\n"));
        }
        out.push_str(&format!(
            "effective model: generators ({}), relation constants ({})\n",
            self.effective_model.generators.join(", "),
            self.effective_model.relation_constants.join(", "),
        ));
        for (g, d) in &self.effective_model.comul {
            out.push_str(&format!("  Delta({g}) = {d}\n"));
        }
        out.push_str(&format!(
            "identified: lambda = {}, nu = {}\n",
            self.identified.lambda, self.identified.nu
        ));
        out.push_str(&format!("domination: {}\n", self.domination.join(", ")));
        out.push_str(&format!("special fibre: {}\n", self.fiber_class));
        out.push_str(&format!(
            "stabilizer: ideal ({}), order {}\n",
            self.stabilizer.ideal.join(", "),
            self.stabilizer.order
        ));
        out.push_str(&format!(
            "verdict: {} (faithful: {}, invariants agree: {})\n",
            self.verdict, self.faithful, self.invariants_ok
        ));
        out
    }
}

/// Run the full pipeline for a conductor spec: build the cover, compute
/// and identify the effective model, reduce to the special fibre, run the
/// stabilizer/faithfulness/invariant diagnostics, and assemble the report.
pub fn degenerate(spec: &ConductorSpec) -> Result<DegenerationReport> {
    let p = spec.p();
    if p == 2 {
        return Err(Error::UnsupportedCharTwo(
            "degeneration reports use the p>2 kernel-form identification",
        ));
    }
    let built = build_cover(spec).map_err(|e| stage("build_cover", e))?;
    let em = effective_model(&built.coaction).map_err(|e| stage("effective_model", e))?;
    let induced = induced_coaction(&built.coaction, &em)?;
    let dom_check = check_domination(&built.coaction, &induced, &em.domination)?;
    if !dom_check.ok {
        return Err(Error::Verification {
            stage: "check_domination",
            msg: dom_check.describe(),
        });
    }
    let identified = match em.group.identify_kernel_form()? {
        KernelForm::Known { lambda, nu } => IdentifiedForm {
            lambda: lambda.to_string(),
            nu: nu.to_string(),
        },
        KernelForm::NotOfKnownForm => {
            return Err(Error::Verification {
                stage: "identify_kernel_form",
                msg: "effective model is not of the known kernel form".into(),
            })
        }
    };
    let fiber = em
        .group
        .special_fiber()
        .map_err(|e| stage("special_fiber", e))?;
    let fiber_class = fiber.classify_fiber();
    let c_fiber = induced
        .special_fiber()
        .map_err(|e| stage("special_fiber", e))?;
    let stab = stabilizer(&c_fiber)?;
    let faithful = faithfulness_check(&c_fiber)?;
    let verdict = torsor_verdict(faithful, stab.order);
    let invariants_ok = invariants_check(&built.coaction, &induced, 3)?;
    let (_, connected) =
        subgroup_effective_model(&built.coaction, &em, Subgroup::KernelOfReduction)?;
    if !connected {
        return Err(Error::Verification {
            stage: "subgroup_effective_model",
            msg: "kernel-of-reduction effective model is not connected".into(),
        });
    }
    let comul_map: BTreeMap<String, String> = em
        .group
        .generators()
        .iter()
        .zip(em.group.comul())
        .map(|(g, d)| (g.clone(), d.to_string()))
        .collect();
    let domination_lines: Vec<String> = em
        .group
        .generators()
        .iter()
        .zip(&em.domination)
        .map(|(v, d)| format!("{v} = {d}"))
        .collect();
    Ok(DegenerationReport {
        spec: SpecInfo {
            p,
            m1: spec.m1(),
            m2: spec.m2(),
            n1: spec.n1(),
            m1_tilde: spec.m1_tilde(),
        },
        change_of_variables: built.change.lines(),
        model_equations: built.model.equation_lines(),
        effective_model: EffModelInfo {
            generators: em.group.generators().to_vec(),
            relation_constants: em.group.constants().iter().map(|c| c.to_string()).collect(),
            comul: comul_map,
        },
        identified,
        domination: domination_lines,
        fiber_class,
        stabilizer: StabilizerInfo {
            ideal: stab.ideal.iter().map(|q| q.to_string()).collect(),
            order: stab.order,
        },
        verdict,
        faithful,
        invariants_ok,
    })
}
