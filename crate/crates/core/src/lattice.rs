//! Echelon lattices over the valuation ring.
//!
//! Rows are coefficient vectors over a fixed finite monomial basis with
//! entries in R = k[[pi]] (represented as polynomials in pi). Echelon form
//! is leading-zero triangular: each row's pivot is its leftmost nonzero
//! entry, pivot columns strictly increase, and entries below a pivot are
//! zero. Since R is local, elimination only ever uses module-preserving
//! moves that stay inside polynomials:
//!
//!   * scaling a row by a unit of R (valuation-0 polynomial), and
//!   * `Q <- unit(P)*Q - (q/pi^e)*P`, where `pi^e*unit(P)` is `P`'s pivot
//!     and `q` is `Q`'s entry in the pivot column (requires val(q) >= e).
//!
//! Pivots are normalized to lowest coefficient 1; whenever pivots are
//! pi-monomials (which holds in every computation this crate performs end
//! to end) they are literal pi-powers. Membership testing is exact with no
//! pi-adic truncation anywhere: a vector lies in the lattice iff reduction
//! drives it to zero, because the leftmost nonzero entry of any element of
//! the module sits in a pivot column with valuation >= the pivot's.

use std::collections::BTreeMap;

use crate::base::BaseElement;
use crate::error::{Error, Result};
use crate::fp::PrimeCtx;

/// Sparse coefficient row over an indexed monomial basis.
pub type Row = BTreeMap<usize, BaseElement>;

fn row_normalize(r: &mut Row) {
    r.retain(|_, c| !c.is_zero());
}

/// `target <- target + c * source`
fn row_add_scaled(target: &mut Row, c: &BaseElement, source: &Row) {
    if c.is_zero() {
        return;
    }
    for (&col, val) in source {
        let add = val.mul(c);
        if add.is_zero() {
            continue;
        }
        match target.get_mut(&col) {
            Some(existing) => {
                let s = existing.add(&add);
                if s.is_zero() {
                    target.remove(&col);
                } else {
                    *existing = s;
                }
            }
            None => {
                target.insert(col, add);
            }
        }
    }
}

fn row_scale(r: &mut Row, c: &BaseElement) {
    let cols: Vec<usize> = r.keys().copied().collect();
    for col in cols {
        let v = r.get(&col).unwrap().mul(c);
        if v.is_zero() {
            r.remove(&col);
        } else {
            r.insert(col, v);
        }
    }
}

/// Leftmost nonzero entry: `(column, valuation)`. Assumes normalized.
fn row_lead(r: &Row) -> Option<(usize, i64)> {
    r.iter()
        .next()
        .map(|(&col, val)| (col, val.valuation().expect("normalized row")))
}

/// Eliminate `row`'s entry in `pivot_row`'s pivot column. Precondition:
/// `val(row[col]) >= pivot valuation`. May scale `row` by a unit.
fn eliminate(p: u64, row: &mut Row, col: usize, pivot_row: &Row) {
    let f = PrimeCtx::new(p).unwrap();
    let pivot_val = pivot_row.get(&col).expect("pivot entry");
    let e = pivot_val.valuation().unwrap();
    let q = row.get(&col).expect("entry to eliminate").clone();
    match pivot_val.as_monomial() {
        Some((c, _)) => {
            let cof = q.mul_pi_pow(-e).mul_scalar(f.inv(c)).neg();
            row_add_scaled(row, &cof, pivot_row);
        }
        None => {
            let unit = pivot_val.mul_pi_pow(-e);
            let cof = q.mul_pi_pow(-e).neg();
            row_scale(row, &unit);
            row_add_scaled(row, &cof, pivot_row);
        }
    }
    row_normalize(row);
    debug_assert!(!row.contains_key(&col));
}

/// A finitely generated R-submodule of the free module on `basis`,
/// held in echelon form.
#[derive(Debug, Clone)]
pub struct Lattice {
    p: u64,
    basis: Vec<String>,
    rows: Vec<Row>,
    /// pivot column and valuation per row, ascending in column
    pivots: Vec<(usize, i64)>,
}

impl Lattice {
    /// Echelonize integral rows over the ambient `basis`. Rows with any
    /// non-integral entry are rejected ("denominators not cleared").
    pub fn reduce(p: u64, basis: Vec<String>, rows: Vec<Row>) -> Result<Self> {
        let mut lat = Lattice {
            p,
            basis,
            rows: Vec::new(),
            pivots: Vec::new(),
        };
        for row in rows {
            lat.insert_row(row)?;
        }
        Ok(lat)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, i64)] {
        &self.pivots
    }

    pub fn pivot_of_column(&self, col: usize) -> Option<i64> {
        self.pivots.iter().find(|(c, _)| *c == col).map(|(_, v)| *v)
    }

    fn check_integral(row: &Row) -> Result<()> {
        for (col, val) in row {
            if !val.is_integral() {
                return Err(Error::DenominatorsNotCleared(format!(
                    "column {col}: {val}"
                )));
            }
        }
        Ok(())
    }

    /// Reduce `row` in place against the echelon rows. Afterwards the row
    /// is zero iff it was in the span; otherwise its lead is either at a
    /// pivot-free column or has strictly smaller valuation than the
    /// column's pivot.
    fn reduce_row(&self, row: &mut Row) {
        row_normalize(row);
        while let Some((col, val)) = row_lead(row) {
            match self.pivots.iter().position(|(c, _)| *c == col) {
                Some(idx) if self.pivots[idx].1 <= val => {
                    let pivot_row = self.rows[idx].clone();
                    eliminate(self.p, row, col, &pivot_row);
                }
                _ => return,
            }
        }
    }

    /// Insert a row, returning true iff the lattice grew. Errors if the
    /// row is not integral.
    pub fn insert_row(&mut self, mut row: Row) -> Result<bool> {
        row_normalize(&mut row);
        Self::check_integral(&row)?;
        let mut grew = false;
        loop {
            self.reduce_row(&mut row);
            let Some((col, val)) = row_lead(&row) else {
                break;
            };
            grew = true;
            // normalize lowest coefficient of the pivot to 1
            let lead = row.get(&col).unwrap().leading_scalar();
            if lead != 1 {
                let f = PrimeCtx::new(self.p).unwrap();
                row_scale(&mut row, &BaseElement::monomial(self.p, f.inv(lead), 0));
            }
            match self.pivots.iter().position(|(c, _)| *c == col) {
                Some(idx) => {
                    // strictly smaller valuation: replace, re-reduce the
                    // displaced pivot row
                    debug_assert!(val < self.pivots[idx].1);
                    std::mem::swap(&mut self.rows[idx], &mut row);
                    self.pivots[idx] = (col, val);
                }
                None => {
                    let at = self
                        .pivots
                        .iter()
                        .position(|(c, _)| *c > col)
                        .unwrap_or(self.pivots.len());
                    self.rows.insert(at, row);
                    self.pivots.insert(at, (col, val));
                    break;
                }
            }
        }
        if grew {
            self.reduce_upwards();
        }
        Ok(grew)
    }

    /// Cosmetic reduction of entries above each pi-monomial pivot.
    fn reduce_upwards(&mut self) {
        let f = PrimeCtx::new(self.p).unwrap();
        for i in 0..self.rows.len() {
            let (col, e) = self.pivots[i];
            let Some((c, _)) = self.rows[i].get(&col).and_then(BaseElement::as_monomial) else {
                continue;
            };
            let pivot_row = self.rows[i].clone();
            for j in 0..i {
                let Some(entry) = self.rows[j].get(&col).cloned() else {
                    continue;
                };
                if entry.valuation().unwrap() >= e {
                    let cof = entry.mul_pi_pow(-e).mul_scalar(f.inv(c)).neg();
                    row_add_scaled(&mut self.rows[j], &cof, &pivot_row);
                }
            }
        }
    }

    /// Exact R-linear membership. Non-integral vectors are never members
    /// of an integral lattice.
    pub fn contains(&self, row: &Row) -> bool {
        let mut r = row.clone();
        row_normalize(&mut r);
        if Self::check_integral(&r).is_err() {
            return false;
        }
        self.reduce_row(&mut r);
        r.is_empty()
    }

    /// Solve `row = sum a_i * rows[i]` over K = R[1/pi], returning the
    /// coefficients in echelon-row order, or `None` when the row is not in
    /// the K-span. Requires pi-monomial pivots (true in every lattice this
    /// crate builds); errors otherwise.
    pub fn solve(&self, row: &Row) -> Result<Option<Vec<BaseElement>>> {
        let f = PrimeCtx::new(self.p).unwrap();
        let mut r = row.clone();
        row_normalize(&mut r);
        let mut coeffs = vec![BaseElement::zero(self.p); self.rows.len()];
        loop {
            let Some((col, _)) = row_lead(&r) else {
                return Ok(Some(coeffs));
            };
            let Some(idx) = self.pivots.iter().position(|(c, _)| *c == col) else {
                return Ok(None);
            };
            let pivot_val = self.rows[idx].get(&col).unwrap();
            let Some((c, e)) = pivot_val.as_monomial() else {
                return Err(Error::Unsupported(format!(
                    "lattice solve: pivot in column {col} is not a pi-monomial"
                )));
            };
            let q = r.get(&col).unwrap().clone();
            let cof = q.mul_pi_pow(-e).mul_scalar(f.inv(c));
            coeffs[idx] = coeffs[idx].add(&cof);
            row_add_scaled(&mut r, &cof.neg(), &self.rows[idx]);
            row_normalize(&mut r);
        }
    }

    /// Least `e >= 0` such that `pi^e * row` lies in the lattice, or
    /// `None` when no scaling works. Uses the unique K-representation.
    pub fn min_pi_scaling(&self, row: &Row) -> Result<Option<i64>> {
        match self.solve(row)? {
            None => Ok(None),
            Some(coeffs) => {
                let shortfall = coeffs
                    .iter()
                    .filter_map(|c| c.valuation())
                    .map(|v| -v)
                    .max()
                    .unwrap_or(0);
                Ok(Some(shortfall.max(0)))
            }
        }
    }

    /// Mutual containment of generators.
    pub fn same_module(&self, other: &Lattice) -> bool {
        self.rows.iter().all(|r| other.contains(r)) && other.rows.iter().all(|r| self.contains(r))
    }
}

/// Left kernel of the matrix whose rows are `rows`: an echelon basis of
/// `{ x in R^n : sum_i x_i * rows[i] = 0 }`. Computed by tracking the
/// (unit-invertible) row transformation while echelonizing; transformation
/// rows facing zero echelon rows span the kernel.
pub fn left_kernel(p: u64, ncols: usize, rows: &[Row]) -> Result<Vec<Row>> {
    struct Work {
        mat: Row,
        tr: Row,
    }
    let f = PrimeCtx::new(p).unwrap();
    let mut echelon: Vec<(usize, i64)> = Vec::new();
    let mut kept: Vec<Work> = Vec::new();
    let mut kernel: Vec<Row> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut mat = r.clone();
        row_normalize(&mut mat);
        debug_assert!(mat.keys().all(|&c| c < ncols));
        let mut tr: Row = Row::new();
        tr.insert(i, BaseElement::one(p));
        let mut cur = Work { mat, tr };
        loop {
            let Some((col, val)) = row_lead(&cur.mat) else {
                row_normalize(&mut cur.tr);
                if !cur.tr.is_empty() {
                    kernel.push(cur.tr);
                }
                break;
            };
            match echelon.iter().position(|(c, _)| *c == col) {
                Some(idx) if echelon[idx].1 <= val => {
                    let pivot_val = kept[idx].mat.get(&col).unwrap().clone();
                    let e = echelon[idx].1;
                    let q = cur.mat.get(&col).unwrap().clone();
                    match pivot_val.as_monomial() {
                        Some((c0, _)) => {
                            let cof = q.mul_pi_pow(-e).mul_scalar(f.inv(c0)).neg();
                            row_add_scaled(&mut cur.mat, &cof, &kept[idx].mat);
                            row_add_scaled(&mut cur.tr, &cof, &kept[idx].tr);
                        }
                        None => {
                            let unit = pivot_val.mul_pi_pow(-e);
                            let cof = q.mul_pi_pow(-e).neg();
                            row_scale(&mut cur.mat, &unit);
                            row_scale(&mut cur.tr, &unit);
                            row_add_scaled(&mut cur.mat, &cof, &kept[idx].mat);
                            row_add_scaled(&mut cur.tr, &cof, &kept[idx].tr);
                        }
                    }
                    row_normalize(&mut cur.mat);
                    row_normalize(&mut cur.tr);
                }
                Some(idx) => {
                    std::mem::swap(&mut kept[idx], &mut cur);
                    echelon[idx] = (col, val);
                }
                None => {
                    let at = echelon
                        .iter()
                        .position(|(c, _)| *c > col)
                        .unwrap_or(echelon.len());
                    echelon.insert(at, (col, val));
                    kept.insert(at, cur);
                    break;
                }
            }
        }
    }
    // canonicalize the kernel as its own echelon lattice over n columns
    let lat = Lattice::reduce(
        p,
        (0..rows.len()).map(|i| format!("e{i}")).collect(),
        kernel,
    )?;
    Ok(lat.rows.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(p: u64, entries: &[(usize, BaseElement)]) -> Row {
        let _ = p;
        entries.iter().cloned().collect()
    }

    fn pi(p: u64, e: i64) -> BaseElement {
        BaseElement::pi_pow(p, e)
    }

    #[test]
    fn contains_spec_examples() {
        let p = 3;
        // rows {(1,0),(0,pi)}
        let basis = vec!["a".into(), "b".into()];
        let rows = vec![
            row(p, &[(0, BaseElement::one(p))]),
            row(p, &[(1, pi(p, 1))]),
        ];
        let lat = Lattice::reduce(p, basis, rows).unwrap();
        // (0, pi^2) is contained: pi * (0, pi)
        assert!(lat.contains(&row(p, &[(1, pi(p, 2))])));
        // (0, 1) is not: 1/pi is not in R
        assert!(!lat.contains(&row(p, &[(1, BaseElement::one(p))])));
    }

    #[test]
    fn contains_derived_example() {
        // rows {(pi,pi)}, query (pi^2,pi^2): solve a*pi = pi^2 over R
        let p = 3;
        let basis = vec!["a".into(), "b".into()];
        let rows = vec![row(p, &[(0, pi(p, 1)), (1, pi(p, 1))])];
        let lat = Lattice::reduce(p, basis, rows).unwrap();
        assert!(lat.contains(&row(p, &[(0, pi(p, 2)), (1, pi(p, 2))])));
        assert!(!lat.contains(&row(p, &[(0, pi(p, 2)), (1, pi(p, 3))])));
        assert!(!lat.contains(&row(
            p,
            &[(0, BaseElement::one(p)), (1, BaseElement::one(p))]
        )));
    }

    #[test]
    fn rejects_uncleared_denominators() {
        let p = 3;
        let basis = vec!["a".into()];
        let rows = vec![row(p, &[(0, pi(p, -1))])];
        assert!(matches!(
            Lattice::reduce(p, basis, rows),
            Err(Error::DenominatorsNotCleared(_))
        ));
    }

    #[test]
    fn unit_pivot_membership_is_exact() {
        // single row (1 + pi): over R = k[[pi]] this spans the whole rank-1
        // module since 1 + pi is a unit; membership of (1) must hold even
        // though the inverse is not a polynomial.
        let p = 3;
        let one_plus_pi = BaseElement::one(p).add(&pi(p, 1));
        let lat = Lattice::reduce(p, vec!["a".into()], vec![row(p, &[(0, one_plus_pi)])]).unwrap();
        assert!(lat.contains(&row(p, &[(0, BaseElement::one(p))])));
        assert!(!lat.contains(&row(p, &[(0, pi(p, -1))])));
    }

    #[test]
    fn binomial_entries_from_monomial_rows() {
        // rows (pi, pi) and (pi, pi^2): elimination leaves (0, pi^2 - pi),
        // a unit multiple of pi in the second column; membership stays
        // exact over k[[pi]].
        let p = 5;
        let basis = vec!["a".into(), "b".into()];
        let rows = vec![
            row(p, &[(0, pi(p, 1)), (1, pi(p, 1))]),
            row(p, &[(0, pi(p, 1)), (1, pi(p, 2))]),
        ];
        let lat = Lattice::reduce(p, basis, rows).unwrap();
        assert_eq!(lat.rank(), 2);
        assert!(lat.contains(&row(p, &[(1, pi(p, 1))])));
        assert!(!lat.contains(&row(p, &[(1, BaseElement::one(p))])));
        // (pi, 0) = 1/(1-pi) * [(pi,pi) - (pi,pi^2)] + ... lies in the span
        assert!(lat.contains(&row(p, &[(0, pi(p, 1))])));
    }

    #[test]
    fn pivot_replacement_keeps_module() {
        let p = 3;
        let basis = vec!["a".into(), "b".into()];
        // insert higher-valuation pivot first, then a better one
        let rows = vec![
            row(p, &[(0, pi(p, 3)), (1, BaseElement::one(p))]),
            row(p, &[(0, pi(p, 1))]),
        ];
        let lat = Lattice::reduce(p, basis, rows).unwrap();
        assert_eq!(lat.rank(), 2);
        assert!(lat.contains(&row(p, &[(0, pi(p, 1))])));
        assert!(lat.contains(&row(p, &[(0, pi(p, 3)), (1, BaseElement::one(p))])));
        assert!(lat.contains(&row(p, &[(1, BaseElement::one(p))])));
        assert!(!lat.contains(&row(p, &[(0, BaseElement::one(p))])));
    }

    #[test]
    fn solve_and_min_scaling() {
        let p = 3;
        let basis = vec!["a".into(), "b".into()];
        let rows = vec![row(p, &[(0, pi(p, 2))]), row(p, &[(1, pi(p, 3))])];
        let lat = Lattice::reduce(p, basis, rows).unwrap();
        let q = row(p, &[(0, BaseElement::one(p)), (1, pi(p, 1))]);
        // q = pi^-2 * r0 + pi^-2 * r1
        assert_eq!(lat.min_pi_scaling(&q).unwrap(), Some(2));
        let outside = row(p, &[(0, BaseElement::one(p)), (1, BaseElement::one(p))]);
        assert_eq!(lat.min_pi_scaling(&outside).unwrap(), Some(3));
        // vector outside the K-span
        let lat2 = Lattice::reduce(
            p,
            vec!["a".into(), "b".into()],
            vec![row(p, &[(0, pi(p, 2))])],
        )
        .unwrap();
        assert_eq!(
            lat2.min_pi_scaling(&row(p, &[(1, pi(p, 1))])).unwrap(),
            None
        );
    }

    #[test]
    fn left_kernel_simple() {
        // rows r0 = (1), r1 = (pi): kernel spanned by (pi, -1)
        let p = 3;
        let rows = vec![
            row(p, &[(0, BaseElement::one(p))]),
            row(p, &[(0, pi(p, 1))]),
        ];
        let ker = left_kernel(p, 1, &rows).unwrap();
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        let get = |i: usize| k.get(&i).cloned().unwrap_or_else(|| BaseElement::zero(p));
        let combo = get(0).add(&get(1).mul(&pi(p, 1)));
        assert!(combo.is_zero());
        assert!(!get(0).is_zero() || !get(1).is_zero());
    }

    #[test]
    fn left_kernel_rank() {
        // three rows in a rank-2 space: kernel rank 1
        let p = 5;
        let rows = vec![
            row(p, &[(0, BaseElement::one(p))]),
            row(p, &[(1, pi(p, 1))]),
            row(p, &[(0, pi(p, 2)), (1, pi(p, 1))]),
        ];
        let ker = left_kernel(p, 2, &rows).unwrap();
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        let get = |i: usize| k.get(&i).cloned().unwrap_or_else(|| BaseElement::zero(p));
        let c0 = get(0).add(&get(2).mul(&pi(p, 2)));
        let c1 = get(1).mul(&pi(p, 1)).add(&get(2).mul(&pi(p, 1)));
        assert!(c0.is_zero() && c1.is_zero());
        assert!(!(get(0).is_zero() && get(1).is_zero() && get(2).is_zero()));
    }

    #[test]
    fn same_module_detects_difference() {
        let p = 3;
        let basis: Vec<String> = vec!["a".into(), "b".into()];
        let l1 = Lattice::reduce(
            p,
            basis.clone(),
            vec![row(p, &[(0, pi(p, 1))]), row(p, &[(1, pi(p, 1))])],
        )
        .unwrap();
        let l2 = Lattice::reduce(
            p,
            basis.clone(),
            vec![
                row(p, &[(0, pi(p, 1)), (1, pi(p, 1))]),
                row(p, &[(1, pi(p, 1))]),
            ],
        )
        .unwrap();
        assert!(l1.same_module(&l2));
        let l3 = Lattice::reduce(p, basis, vec![row(p, &[(0, pi(p, 2))])]).unwrap();
        assert!(!l1.same_module(&l3));
    }
}
