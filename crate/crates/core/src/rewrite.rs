//! Confluent p-th-power rewriting.
//!
//! A [`RewriteSystem`] holds rules `x_i^p -> r_i` over a fixed ambient
//! ring, one rule per "bound" variable. The system must be triangular in
//! the declared variable order: the rule for `x_i` may mention only bound
//! variables at positions `<= i` (itself with degree `< p`) and free
//! variables. Quotient rings like `R[u1,u2]/(u1^p - u1, u2^p - u2)` are
//! computed through normal forms, which are unique with every bound
//! exponent `< p`.

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Vars};

#[derive(Debug, Clone, PartialEq)]
pub struct RewriteSystem {
    p: u64,
    vars: Vars,
    /// `(variable index, rhs)` sorted by index; rule reads `var^p -> rhs`.
    rules: Vec<(usize, MPoly)>,
}

impl RewriteSystem {
    pub fn new(p: u64, vars: &Vars, rules: Vec<(&str, MPoly)>) -> Result<Self> {
        let mut indexed = Vec::with_capacity(rules.len());
        for (name, rhs) in rules {
            let idx = vars
                .index(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            if rhs.vars() != vars {
                return Err(Error::RingMismatch(
                    rhs.vars().names().join(","),
                    vars.names().join(","),
                ));
            }
            indexed.push((idx, rhs));
        }
        indexed.sort_by_key(|(i, _)| *i);
        for w in indexed.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::UnknownVariable(format!(
                    "duplicate rule for `{}`",
                    vars.name(w[0].0)
                )));
            }
        }
        let bound: Vec<usize> = indexed.iter().map(|(i, _)| *i).collect();
        for (i, rhs) in &indexed {
            if rhs.degree_in(*i) >= p as u32 {
                return Err(Error::RuleDegree(vars.name(*i).to_string()));
            }
            for &j in &bound {
                if j > *i && rhs.degree_in(j) > 0 {
                    return Err(Error::NonTriangular {
                        rule_var: vars.name(*i).to_string(),
                        offender: vars.name(j).to_string(),
                    });
                }
            }
        }
        Ok(RewriteSystem {
            p,
            vars: vars.clone(),
            rules: indexed,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn rules(&self) -> impl Iterator<Item = (&str, &MPoly)> {
        self.rules.iter().map(|(i, rhs)| (self.vars.name(*i), rhs))
    }

    pub fn is_bound(&self, idx: usize) -> bool {
        self.rules.iter().any(|(i, _)| *i == idx)
    }

    /// True iff every bound exponent of every term is `< p`.
    pub fn is_normal(&self, q: &MPoly) -> bool {
        q.terms()
            .all(|(exps, _)| self.rules.iter().all(|(i, _)| exps[*i] < self.p as u32))
    }

    /// The unique reduct of `q` with every bound exponent `< p`.
    ///
    /// Per pass each term is rewritten at its highest reducible bound
    /// variable, substituting `rhs^floor(e/p) * x^(e mod p)` in one step;
    /// triangularity makes the exponent tuple decrease lexicographically
    /// from the highest bound variable down, so the loop terminates.
    pub fn normal_form(&self, q: &MPoly) -> MPoly {
        assert_eq!(q.vars(), &self.vars, "normal_form: ambient ring mismatch");
        let p32 = self.p as u32;
        let mut cur = q.clone();
        loop {
            if self.is_normal(&cur) {
                return cur;
            }
            let mut out = MPoly::zero(self.p, &self.vars);
            for (exps, c) in cur.terms() {
                let hit = self.rules.iter().rev().find(|(i, _)| exps[*i] >= p32);
                match hit {
                    Some((i, rhs)) => {
                        let quot = (exps[*i] / p32) as u64;
                        let mut rest = exps.clone();
                        rest[*i] %= p32;
                        let stem = MPoly::monomial(c.clone(), &self.vars, rest);
                        out = out.add(&stem.mul(&rhs.pow(quot)));
                    }
                    None => {
                        out = out.add(&MPoly::monomial(c.clone(), &self.vars, exps.clone()));
                    }
                }
            }
            cur = out;
        }
    }

    /// Normal form where each single rewrite step (one `p`-chunk of one
    /// term at one bound variable) is chosen by `pick`, given the number
    /// of currently reducible (term, variable) pairs. Confluence tests
    /// drive this with randomized pickers and compare against
    /// [`Self::normal_form`].
    pub fn normal_form_with_picker(
        &self,
        q: &MPoly,
        mut pick: impl FnMut(usize) -> usize,
    ) -> MPoly {
        let p32 = self.p as u32;
        let mut cur = q.clone();
        loop {
            let mut candidates: Vec<(Vec<u32>, usize)> = Vec::new();
            for (exps, _) in cur.terms() {
                for (i, _) in &self.rules {
                    if exps[*i] >= p32 {
                        candidates.push((exps.clone(), *i));
                    }
                }
            }
            if candidates.is_empty() {
                return cur;
            }
            let (exps, vi) = candidates[pick(candidates.len()) % candidates.len()].clone();
            let coeff = cur
                .terms()
                .find(|(e, _)| **e == exps)
                .map(|(_, c)| c.clone())
                .expect("candidate term present");
            let rhs = &self.rules.iter().find(|(i, _)| *i == vi).unwrap().1;
            let mut reduced = exps.clone();
            reduced[vi] -= p32;
            let old = MPoly::monomial(coeff.clone(), &self.vars, exps);
            let new = MPoly::monomial(coeff, &self.vars, reduced).mul(rhs);
            cur = cur.sub(&old).add(&new);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::BaseElement;
    use crate::mpoly::VarSet;
    use crate::text::parse_mpoly;

    fn simple_system(p: u64) -> (Vars, RewriteSystem) {
        let vars = VarSet::new(vec!["u1"]).unwrap();
        let u1 = MPoly::var(p, &vars, "u1").unwrap();
        let rs = RewriteSystem::new(p, &vars, vec![("u1", u1)]).unwrap();
        (vars, rs)
    }

    #[test]
    fn single_rule_application() {
        // u1^p with rule u1^p -> u1 at p = 3 reduces to u1
        let (vars, rs) = simple_system(3);
        let q = MPoly::var(3, &vars, "u1").unwrap().pow(3);
        assert_eq!(rs.normal_form(&q).to_string(), "u1");
    }

    #[test]
    fn repeated_substitution_oracle() {
        // u1^4 -> u1^2: oracle is literal repeated substitution u1^3 -> u1
        // until all exponents are < 3.
        let (vars, rs) = simple_system(3);
        let q = MPoly::var(3, &vars, "u1").unwrap().pow(4);
        // oracle: 4 = 3 + 1, so u1^4 = u1^3 * u1 -> u1 * u1 = u1^2; stable.
        let expected = MPoly::var(3, &vars, "u1").unwrap().pow(2);
        assert_eq!(rs.normal_form(&q), expected);
    }

    #[test]
    fn constant_reduces_mod_p() {
        let (vars, rs) = simple_system(3);
        let q = MPoly::constant(BaseElement::scalar(3, 5), &vars);
        assert_eq!(rs.normal_form(&q).to_string(), "2");
    }

    #[test]
    fn idempotent_and_homomorphic() {
        let p = 3;
        let vars = VarSet::new(vec!["w", "u1", "u2"]).unwrap();
        let rules = vec![
            ("u1", parse_mpoly(p, &vars, "u1 + w").unwrap()),
            ("u2", parse_mpoly(p, &vars, "u2 + u1^4").unwrap()),
        ];
        let rs = RewriteSystem::new(p, &vars, rules).unwrap();
        let a = parse_mpoly(p, &vars, "u2^5 + u1^7*w").unwrap();
        let b = parse_mpoly(p, &vars, "u1^3 + 2*u2").unwrap();
        let na = rs.normal_form(&a);
        assert_eq!(rs.normal_form(&na), na);
        // nf(a*b) = nf(nf(a)*nf(b)); nf(a+b) = nf(nf(a)+nf(b))
        let nb = rs.normal_form(&b);
        assert_eq!(rs.normal_form(&a.mul(&b)), rs.normal_form(&na.mul(&nb)));
        assert_eq!(rs.normal_form(&a.add(&b)), rs.normal_form(&na.add(&nb)));
    }

    #[test]
    fn rejects_non_triangular() {
        let p = 3;
        let vars = VarSet::new(vec!["u1", "u2"]).unwrap();
        // u2 is bound by its own rule, so the rule for u1 may not mention it
        let bad = vec![
            ("u1", MPoly::var(p, &vars, "u2").unwrap()),
            ("u2", MPoly::var(p, &vars, "u2").unwrap()),
        ];
        assert!(matches!(
            RewriteSystem::new(p, &vars, bad),
            Err(Error::NonTriangular { .. })
        ));
        // a single rule whose rhs mentions only free variables is fine
        let free_ok = vec![("u1", MPoly::var(p, &vars, "u2").unwrap())];
        assert!(RewriteSystem::new(p, &vars, free_ok).is_ok());
        let too_big = vec![("u1", MPoly::var(p, &vars, "u1").unwrap().pow(3))];
        assert!(matches!(
            RewriteSystem::new(p, &vars, too_big),
            Err(Error::RuleDegree(_))
        ));
    }

    #[test]
    fn picker_order_agrees_on_example() {
        let p = 3;
        let vars = VarSet::new(vec!["w", "u1", "u2"]).unwrap();
        let rules = vec![
            ("u1", parse_mpoly(p, &vars, "u1 + w").unwrap()),
            ("u2", parse_mpoly(p, &vars, "u2 + u1^4").unwrap()),
        ];
        let rs = RewriteSystem::new(p, &vars, rules).unwrap();
        let q = parse_mpoly(p, &vars, "u2^4 + u1^6 + w*u2^3*u1^3").unwrap();
        let reference = rs.normal_form(&q);
        // a couple of fixed deterministic orders
        assert_eq!(rs.normal_form_with_picker(&q, |_| 0), reference);
        let mut step = 0usize;
        assert_eq!(
            rs.normal_form_with_picker(&q, |n| {
                step += 7;
                step % n.max(1)
            }),
            reference
        );
    }
}
