//! Coactions: group-scheme actions on covers, presented dually.
//!
//! A [`Coaction`] maps each fiber variable of a cover into the joined ring
//! `[cover variables] (x) [group variables]`; the base variable is fixed
//! (`w -> w (x) 1`). Verification checks the two coaction axioms
//! (coassociativity against the group comultiplication, counit) and that
//! the images preserve the cover's rewrite relations — this last check is
//! what it means for the action to extend to the integral model.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hopf::{left_name, right_name, HopfPresentation};
use crate::mpoly::{MPoly, VarSet, Vars};
use crate::rewrite::RewriteSystem;

#[derive(Debug, Clone)]
pub struct Coaction {
    hopf: HopfPresentation,
    cover: crate::cover::CoverPresentation,
    /// images of the fiber variables, normal forms in the joined ring
    images: Vec<MPoly>,
    joined: Vars,
}

impl Coaction {
    pub fn new(
        hopf: HopfPresentation,
        cover: crate::cover::CoverPresentation,
        images: Vec<MPoly>,
    ) -> Result<Self> {
        if hopf.p() != cover.p() {
            return Err(Error::PrimeMismatch(hopf.p(), cover.p()));
        }
        if images.len() != cover.fiber_vars().len() {
            return Err(Error::Unsupported(
                "one coaction image required per fiber variable".into(),
            ));
        }
        let joined = cover.vars().join(hopf.vars())?;
        let rules = joined_rules(&hopf, &cover, &joined)?;
        let images = images
            .into_iter()
            .map(|q| Ok(rules.normal_form(&q.embed(&joined)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Coaction {
            hopf,
            cover,
            images,
            joined,
        })
    }

    /// The trivial coaction `Z -> Z (x) 1`.
    pub fn trivial(hopf: HopfPresentation, cover: crate::cover::CoverPresentation) -> Result<Self> {
        let joined = cover.vars().join(hopf.vars())?;
        let p = cover.p();
        let images = cover
            .fiber_vars()
            .iter()
            .map(|v| MPoly::var(p, &joined, v))
            .collect::<Result<Vec<_>>>()?;
        Coaction::new(hopf, cover, images)
    }

    pub fn p(&self) -> u64 {
        self.cover.p()
    }

    pub fn hopf(&self) -> &HopfPresentation {
        &self.hopf
    }

    pub fn cover(&self) -> &crate::cover::CoverPresentation {
        &self.cover
    }

    pub fn images(&self) -> &[MPoly] {
        &self.images
    }

    pub fn joined_vars(&self) -> &Vars {
        &self.joined
    }

    pub fn joined_rules(&self) -> Result<RewriteSystem> {
        joined_rules(&self.hopf, &self.cover, &self.joined)
    }

    /// Counit axiom: evaluating the group leg at the counit returns the
    /// identity on each fiber variable.
    pub fn check_counit(&self) -> Result<bool> {
        let p = self.p();
        let mut map = BTreeMap::new();
        for (j, g) in self.hopf.generators().iter().enumerate() {
            map.insert(
                g.clone(),
                MPoly::constant(self.hopf.counit()[j].clone(), self.cover.vars()),
            );
        }
        let rules = self.cover.rules();
        for (i, v) in self.cover.fiber_vars().iter().enumerate() {
            let img = self.images[i].substitute(self.cover.vars(), &map)?;
            let var = MPoly::var(p, self.cover.vars(), v)?;
            if !rules.normal_form(&img.sub(&var)).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coassociativity: `(mu (x) id) . mu = (id (x) Delta) . mu` on each
    /// fiber variable, in the quotient of `[cover] (x) RG (x) RG`.
    pub fn check_coassoc(&self) -> Result<bool> {
        let p = self.p();
        let gens = self.hopf.generators();
        // ring [cover vars, uA*, uB*]
        let mut names: Vec<String> = self.cover.vars().names().to_vec();
        let a_names: Vec<String> = gens.iter().map(|g| leg(g, 'A')).collect();
        let b_names: Vec<String> = gens.iter().map(|g| leg(g, 'B')).collect();
        names.extend(a_names.iter().cloned());
        names.extend(b_names.iter().cloned());
        let big = VarSet::new(names)?;
        // rules: cover rules + quotient rules on both legs
        let mut rules: Vec<(String, MPoly)> = Vec::new();
        for (v, rhs) in self.cover.rules().rules() {
            rules.push((v.to_string(), rhs.embed(&big)?));
        }
        for j in 0..gens.len() {
            for leg_names in [&a_names, &b_names] {
                let var = MPoly::var(p, &big, &leg_names[j])?;
                rules.push((
                    leg_names[j].clone(),
                    var.mul_base(&self.hopf.constants()[j]),
                ));
            }
        }
        let borrowed: Vec<(&str, MPoly)> =
            rules.iter().map(|(n, q)| (n.as_str(), q.clone())).collect();
        let rules = RewriteSystem::new(p, &big, borrowed)?;

        // lhs: apply mu to the cover leg (Z_j -> image_j with group vars
        // renamed to A), original group vars renamed to B
        let mut lhs_map = BTreeMap::new();
        for (j, v) in self.cover.fiber_vars().iter().enumerate() {
            let mut rename = BTreeMap::new();
            for g in gens {
                rename.insert(g.clone(), leg(g, 'A'));
            }
            lhs_map.insert(v.clone(), self.images[j].rename(&big, &rename)?);
        }
        for g in gens {
            lhs_map.insert(g.clone(), MPoly::var(p, &big, &leg(g, 'B'))?);
        }
        // rhs: apply Delta to the group leg (u_j -> Delta(u_j) in (A,B))
        let mut rhs_map = BTreeMap::new();
        for (j, g) in gens.iter().enumerate() {
            let mut rename = BTreeMap::new();
            for h in gens {
                rename.insert(left_name(h), leg(h, 'A'));
                rename.insert(right_name(h), leg(h, 'B'));
            }
            rhs_map.insert(g.clone(), self.hopf.comul()[j].rename(&big, &rename)?);
        }
        for (i, _) in self.cover.fiber_vars().iter().enumerate() {
            let lhs = self.images[i].substitute(&big, &lhs_map)?;
            let rhs = self.images[i].substitute(&big, &rhs_map)?;
            if !rules.normal_form(&lhs.sub(&rhs)).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Relation preservation: `mu(Z_i^p - rhs_i)` normalizes to zero in
    /// the joined quotient ring.
    pub fn check_relations(&self) -> Result<bool> {
        let p = self.p();
        let rules = self.joined_rules()?;
        let mut map = BTreeMap::new();
        for (j, v) in self.cover.fiber_vars().iter().enumerate() {
            map.insert(v.clone(), self.images[j].clone());
        }
        for (i, v) in self.cover.fiber_vars().iter().enumerate() {
            let rhs = self.cover.rhs(v).unwrap().embed(&self.joined)?;
            let moved_rhs = rhs.substitute(&self.joined, &map)?;
            let rel = self.images[i].pow(p).sub(&moved_rhs);
            if !rules.normal_form(&rel).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Run all coaction checks; on an integral model also require integral
    /// images.
    pub fn verify(&self) -> Result<()> {
        if self.cover.is_integral_model() {
            for (i, img) in self.images.iter().enumerate() {
                if !img.is_integral() {
                    return Err(Error::Verification {
                        stage: "coaction",
                        msg: format!(
                            "image of {} is not integral: {img}",
                            self.cover.fiber_vars()[i]
                        ),
                    });
                }
            }
        }
        if !self.check_counit()? {
            return Err(Error::Verification {
                stage: "coaction",
                msg: "counit axiom fails".into(),
            });
        }
        if !self.check_coassoc()? {
            return Err(Error::Verification {
                stage: "coaction",
                msg: "coassociativity axiom fails".into(),
            });
        }
        if !self.check_relations()? {
            return Err(Error::Verification {
                stage: "coaction",
                msg: "images do not preserve the cover relations".into(),
            });
        }
        Ok(())
    }

    /// The group-side coefficient polynomials: expand each image over the
    /// cover's monomial basis and collect the nonscalar coefficients,
    /// scalar-normalized and deduplicated.
    pub fn coefficients(&self) -> Result<Vec<MPoly>> {
        let outer: Vec<bool> = self
            .joined
            .names()
            .iter()
            .map(|n| self.cover.vars().index(n).is_some())
            .collect();
        let mut seen: BTreeMap<String, MPoly> = BTreeMap::new();
        for img in &self.images {
            for (_, group_part) in img.split_by(&outer) {
                let coeff = group_part.project(self.hopf.vars())?;
                if coeff.as_constant().is_some() {
                    continue; // scalars contribute nothing beyond R
                }
                let normalized = coeff.monic();
                seen.entry(normalized.to_string()).or_insert(normalized);
            }
        }
        Ok(seen.into_values().collect())
    }

    /// Reduce the whole coaction mod pi.
    pub fn special_fiber(&self) -> Result<Coaction> {
        let hopf = self.hopf.special_fiber()?;
        let cover = self.cover.special_fiber()?;
        let images = self
            .images
            .iter()
            .map(|q| q.reduce_mod_pi())
            .collect::<Result<Vec<_>>>()?;
        Coaction::new(hopf, cover, images)
    }
}

fn leg(gen: &str, leg: char) -> String {
    let at = gen
        .char_indices()
        .find(|(_, c)| !c.is_ascii_alphabetic())
        .map(|(i, _)| i)
        .unwrap_or(gen.len());
    let (head, tail) = gen.split_at(at);
    format!("{head}{leg}{tail}")
}

fn joined_rules(
    hopf: &HopfPresentation,
    cover: &crate::cover::CoverPresentation,
    joined: &Vars,
) -> Result<RewriteSystem> {
    let p = cover.p();
    let mut rules: Vec<(String, MPoly)> = Vec::new();
    for (v, rhs) in cover.rules().rules() {
        rules.push((v.to_string(), rhs.embed(joined)?));
    }
    for (j, g) in hopf.generators().iter().enumerate() {
        let var = MPoly::var(p, joined, g)?;
        rules.push((g.clone(), var.mul_base(&hopf.constants()[j])));
    }
    let borrowed: Vec<(&str, MPoly)> = rules.iter().map(|(n, q)| (n.as_str(), q.clone())).collect();
    RewriteSystem::new(p, joined, borrowed)
}
