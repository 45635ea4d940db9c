//! The per-prime verification driver behind `verify`.
//!
//! Runs the identity suites of every module for each requested prime and
//! collects a pass/fail matrix: Witt group laws across the twist grid, the
//! cocycle identity, both isogeny cross-checks, the Hopf axiom sweeps, and
//! the two worked degeneration examples. Checks that require p > 2 (the
//! kernel presentation and the degeneration pipeline) are reported as
//! skipped at p = 2 rather than silently dropped.

use std::fmt::Write as _;

use crate::base::BaseElement;
use crate::cover::ConductorSpec;
use crate::effmodel::{degenerate, Verdict};
use crate::error::Result;
use crate::fp::PrimeCtx;
use crate::hopf::{HopfPresentation, KernelForm};
use crate::mpoly::{MPoly, VarSet};
use crate::witt::{
    cocycle, phi_closed_form_residual, phi_direct_solve_residual, w2_add, w2_neg, WittPair,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail(String),
    Skipped(String),
}

impl CheckStatus {
    pub fn cell(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail(_) => "FAIL",
            CheckStatus::Skipped(_) => "SKIP",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyRow {
    pub p: u64,
    pub checks: Vec<(String, CheckStatus)>,
}

#[derive(Debug, Clone)]
pub struct VerifySummary {
    pub rows: Vec<VerifyRow>,
}

pub const CHECK_NAMES: [&str; 8] = [
    "witt-laws",
    "cocycle",
    "phi-closed-form",
    "phi-direct-solve",
    "hopf-zp2",
    "hopf-kernel",
    "example-1",
    "example-2",
];

impl VerifySummary {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| {
            r.checks
                .iter()
                .all(|(_, s)| !matches!(s, CheckStatus::Fail(_)))
        })
    }

    pub fn failures(&self) -> Vec<(u64, String, String)> {
        let mut out = Vec::new();
        for row in &self.rows {
            for (name, status) in &row.checks {
                if let CheckStatus::Fail(msg) = status {
                    out.push((row.p, name.clone(), msg.clone()));
                }
            }
        }
        out
    }

    /// Matrix rendering: one line per check, one column per prime.
    pub fn to_text(&self) -> String {
        let name_width = CHECK_NAMES.iter().map(|n| n.len()).max().unwrap_or(8);
        let mut out = String::new();
        write!(out, "{:name_width$}", "check").unwrap();
        for row in &self.rows {
            write!(out, "  p={:<4}", row.p).unwrap();
        }
        out.push('\n');
        for (i, name) in CHECK_NAMES.iter().enumerate() {
            write!(out, "{name:name_width$}").unwrap();
            for row in &self.rows {
                write!(out, "  {:<6}", row.checks[i].1.cell()).unwrap();
            }
            out.push('\n');
        }
        for row in &self.rows {
            for (name, status) in &row.checks {
                match status {
                    CheckStatus::Skipped(reason) => {
                        writeln!(out, "note: p={} {name}: {reason}", row.p).unwrap();
                    }
                    CheckStatus::Fail(msg) => {
                        writeln!(out, "FAIL: p={} {name}: {msg}", row.p).unwrap();
                    }
                    CheckStatus::Pass => {}
                }
            }
        }
        out
    }
}

fn lambda_grid(p: u64) -> Vec<BaseElement> {
    vec![
        BaseElement::zero(p),
        BaseElement::one(p),
        BaseElement::pi(p),
        BaseElement::one(p).add(&BaseElement::pi(p)),
    ]
}

fn check_witt_laws(p: u64) -> Result<CheckStatus> {
    let vars = VarSet::new(vec!["x1", "x2", "y1", "y2", "z1", "z2"])?;
    let a = WittPair::coords(p, &vars, "x1", "x2")?;
    let b = WittPair::coords(p, &vars, "y1", "y2")?;
    let c = WittPair::coords(p, &vars, "z1", "z2")?;
    let zero = WittPair::zero(p, &vars);
    for lam in lambda_grid(p) {
        let assoc_l = w2_add(&lam, &w2_add(&lam, &a, &b), &c);
        let assoc_r = w2_add(&lam, &a, &w2_add(&lam, &b, &c));
        if assoc_l != assoc_r {
            return Ok(CheckStatus::Fail(format!(
                "associativity fails at lambda={lam}"
            )));
        }
        if w2_add(&lam, &a, &b) != w2_add(&lam, &b, &a) {
            return Ok(CheckStatus::Fail(format!(
                "commutativity fails at lambda={lam}"
            )));
        }
        if w2_add(&lam, &a, &zero) != a {
            return Ok(CheckStatus::Fail(format!("identity fails at lambda={lam}")));
        }
        if !w2_add(&lam, &a, &w2_neg(&lam, &a)).is_zero() {
            return Ok(CheckStatus::Fail(format!("negation fails at lambda={lam}")));
        }
    }
    Ok(CheckStatus::Pass)
}

fn check_cocycle(p: u64) -> Result<CheckStatus> {
    let vars = VarSet::new(vec!["x", "y", "z"])?;
    let x = MPoly::var(p, &vars, "x")?;
    let y = MPoly::var(p, &vars, "y")?;
    let z = MPoly::var(p, &vars, "z")?;
    let lhs = cocycle(&x, &y).add(&cocycle(&x.add(&y), &z));
    let rhs = cocycle(&y, &z).add(&cocycle(&x, &y.add(&z)));
    if lhs == rhs {
        Ok(CheckStatus::Pass)
    } else {
        Ok(CheckStatus::Fail("cocycle identity fails".into()))
    }
}

fn check_phi_closed_form(p: u64) -> Result<CheckStatus> {
    if p == 2 {
        return Ok(CheckStatus::Skipped(
            "skipped (p=2: the displayed closed form is an odd-p identity; see phi-direct-solve)"
                .into(),
        ));
    }
    for lam in lambda_grid(p) {
        for nu in [BaseElement::one(p), BaseElement::pi(p)] {
            let res = phi_closed_form_residual(p, &lam, &nu)?;
            if !res.is_zero() {
                return Ok(CheckStatus::Fail(format!(
                    "closed form mismatch at lambda={lam}, nu={nu}: ({}, {})",
                    res.first, res.second
                )));
            }
        }
    }
    Ok(CheckStatus::Pass)
}

fn check_phi_direct_solve(p: u64) -> Result<CheckStatus> {
    for lam in lambda_grid(p) {
        for nu in [BaseElement::one(p), BaseElement::pi(p)] {
            let res = phi_direct_solve_residual(p, &lam, &nu)?;
            if !res.is_zero() {
                return Ok(CheckStatus::Fail(format!(
                    "direct solve mismatch at lambda={lam}, nu={nu}"
                )));
            }
        }
    }
    Ok(CheckStatus::Pass)
}

fn check_hopf_zp2(p: u64) -> Result<CheckStatus> {
    let h = HopfPresentation::make_zp2(p)?;
    if h.rank() != p * p {
        return Ok(CheckStatus::Fail(format!("rank {} != p^2", h.rank())));
    }
    match h.verify() {
        Ok(()) => Ok(CheckStatus::Pass),
        Err(e) => Ok(CheckStatus::Fail(e.to_string())),
    }
}

fn check_hopf_kernel(p: u64) -> Result<CheckStatus> {
    if p == 2 {
        return Ok(CheckStatus::Skipped("skipped (p=2)".into()));
    }
    let lams = [
        BaseElement::zero(p),
        BaseElement::one(p),
        BaseElement::pi(p),
        BaseElement::pi_pow(p, 4),
    ];
    let nus = [
        BaseElement::zero(p),
        BaseElement::one(p),
        BaseElement::pi(p),
        BaseElement::pi_pow(p, 2),
    ];
    for lam in &lams {
        for nu in &nus {
            let h = match HopfPresentation::make_kernel(lam, nu, p) {
                Ok(h) => h,
                Err(e) => {
                    return Ok(CheckStatus::Fail(format!(
                        "construction failed at lambda={lam}, nu={nu}: {e}"
                    )))
                }
            };
            if h.rank() != p * p {
                return Ok(CheckStatus::Fail(format!(
                    "rank {} != p^2 at lambda={lam}, nu={nu}",
                    h.rank()
                )));
            }
            match h.identify_kernel_form()? {
                KernelForm::Known {
                    lambda,
                    nu: nu_found,
                } if lambda == *lam && nu_found == *nu => {}
                other => {
                    return Ok(CheckStatus::Fail(format!(
                        "identification of lambda={lam}, nu={nu} returned {other:?}"
                    )))
                }
            }
        }
    }
    Ok(CheckStatus::Pass)
}

fn check_example_1(p: u64) -> Result<CheckStatus> {
    if p == 2 {
        return Ok(CheckStatus::Skipped("skipped (p=2)".into()));
    }
    let spec = ConductorSpec::new(p, 0, -(p as i64))?;
    let report = match degenerate(&spec) {
        Ok(r) => r,
        Err(e) => return Ok(CheckStatus::Fail(e.to_string())),
    };
    if report.identified.lambda != "pi" || report.identified.nu != "1" {
        return Ok(CheckStatus::Fail(format!(
            "identified ({}, {}) instead of (pi, 1)",
            report.identified.lambda, report.identified.nu
        )));
    }
    if report.verdict != Verdict::Torsor {
        return Ok(CheckStatus::Fail(format!(
            "verdict {} instead of Torsor",
            report.verdict
        )));
    }
    Ok(CheckStatus::Pass)
}

fn check_example_2(p: u64) -> Result<CheckStatus> {
    if p == 2 {
        return Ok(CheckStatus::Skipped("skipped (p=2)".into()));
    }
    let spec = ConductorSpec::new(p, -((p * p) as i64), 0)?;
    let report = match degenerate(&spec) {
        Ok(r) => r,
        Err(e) => return Ok(CheckStatus::Fail(e.to_string())),
    };
    let lam = BaseElement::pi_pow(p, ((p - 1) * (p - 1)) as i64).to_string();
    let nu = BaseElement::pi_pow(p, (p - 1) as i64).to_string();
    if report.identified.lambda != lam || report.identified.nu != nu {
        return Ok(CheckStatus::Fail(format!(
            "identified ({}, {}) instead of ({lam}, {nu})",
            report.identified.lambda, report.identified.nu
        )));
    }
    if report.fiber_class.to_string() != "Product(AlphaP, AlphaP)" {
        return Ok(CheckStatus::Fail(format!("fibre {}", report.fiber_class)));
    }
    if report.stabilizer.order != p {
        return Ok(CheckStatus::Fail(format!(
            "stabilizer order {} instead of {p}",
            report.stabilizer.order
        )));
    }
    if report.verdict != Verdict::FaithfulNotFree {
        return Ok(CheckStatus::Fail(format!(
            "verdict {} instead of FaithfulNotFree",
            report.verdict
        )));
    }
    Ok(CheckStatus::Pass)
}

/// Run the full identity/example suite for each prime.
pub fn run_verify(primes: &[u64]) -> Result<VerifySummary> {
    let mut rows = Vec::new();
    for &p in primes {
        PrimeCtx::new(p)?;
        let checks = vec![
            ("witt-laws".to_string(), check_witt_laws(p)?),
            ("cocycle".to_string(), check_cocycle(p)?),
            ("phi-closed-form".to_string(), check_phi_closed_form(p)?),
            ("phi-direct-solve".to_string(), check_phi_direct_solve(p)?),
            ("hopf-zp2".to_string(), check_hopf_zp2(p)?),
            ("hopf-kernel".to_string(), check_hopf_kernel(p)?),
            ("example-1".to_string(), check_example_1(p)?),
            ("example-2".to_string(), check_example_2(p)?),
        ];
        rows.push(VerifyRow { p, checks });
    }
    Ok(VerifySummary { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_p3_all_pass() {
        let summary = run_verify(&[3]).unwrap();
        assert!(summary.all_pass(), "{}", summary.to_text());
        assert!(summary.to_text().contains("witt-laws"));
    }

    #[test]
    fn verify_matrix_is_deterministic() {
        let a = run_verify(&[2, 3]).unwrap().to_text();
        let b = run_verify(&[2, 3]).unwrap().to_text();
        assert_eq!(a, b);
        // one column per prime, in the requested order
        let header = a.lines().next().unwrap();
        assert!(header.contains("p=2"));
        assert!(header.contains("p=3"));
    }

    #[test]
    fn verify_p2_skips_kernel_rows() {
        let summary = run_verify(&[2]).unwrap();
        assert!(summary.all_pass(), "{}", summary.to_text());
        let row = &summary.rows[0];
        let by_name: std::collections::BTreeMap<&str, &CheckStatus> =
            row.checks.iter().map(|(n, s)| (n.as_str(), s)).collect();
        assert_eq!(by_name["witt-laws"], &CheckStatus::Pass);
        assert_eq!(by_name["phi-direct-solve"], &CheckStatus::Pass);
        assert!(matches!(by_name["hopf-kernel"], CheckStatus::Skipped(_)));
        assert!(matches!(by_name["example-1"], CheckStatus::Skipped(_)));
        assert!(by_name["hopf-zp2"] == &CheckStatus::Pass);
    }
}
