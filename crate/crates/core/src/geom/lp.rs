//! Exact two-phase simplex with Bland's rule.
//!
//! Variables are free; each one is split into a positive and a negative part.
//! Strict inequalities share one gap variable `g` (`a.x + g <= b`) that is
//! maximised subject to `g <= 1`; the strict system is feasible iff the
//! optimum is positive.

use num_traits::{Signed, Zero};

use super::rat::{self, Rat};
use super::vector::RVec;
use crate::error::{check_dim, Error, Result};
use crate::limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Eq,
}

/// `coeffs . x  rel  rhs`
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: RVec,
    pub rel: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: RVec, rel: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn le(coeffs: RVec, rhs: Rat) -> Self {
        Self::new(coeffs, Relation::Le, rhs)
    }

    pub fn lt(coeffs: RVec, rhs: Rat) -> Self {
        Self::new(coeffs, Relation::Lt, rhs)
    }

    pub fn eq(coeffs: RVec, rhs: Rat) -> Self {
        Self::new(coeffs, Relation::Eq, rhs)
    }

    pub fn ge(coeffs: RVec, rhs: Rat) -> Self {
        Self::le(-&coeffs, -rhs)
    }

    pub fn gt(coeffs: RVec, rhs: Rat) -> Self {
        Self::lt(-&coeffs, -rhs)
    }

    pub fn is_satisfied(&self, x: &RVec) -> bool {
        let lhs = self.coeffs.dot(x);
        match self.rel {
            Relation::Lt => lhs < self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpStatus {
    Feasible(RVec),
    Infeasible,
}

impl LpStatus {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpStatus::Feasible(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOptimum {
    Infeasible,
    Unbounded,
    Optimal { point: RVec, value: Rat },
}

/// Exact feasibility of a mixed strict/non-strict system over `Q^dim`.
pub fn lp_feasible(dim: usize, constraints: &[Constraint]) -> Result<LpStatus> {
    for c in constraints {
        check_dim(dim, c.coeffs.dim())?;
    }
    if constraints.is_empty() {
        return Ok(LpStatus::Feasible(RVec::zeros(dim)));
    }
    let strict = constraints.iter().any(|c| c.rel == Relation::Lt);
    let mut lp = Simplex::build(dim, constraints, strict);
    if !lp.phase_one()? {
        return Ok(LpStatus::Infeasible);
    }
    if strict {
        let mut cost = vec![Rat::zero(); lp.ncols];
        cost[2 * dim] = rat::one();
        lp.optimize(&cost)?;
        let sol = lp.solution();
        if !sol[2 * dim].is_positive() {
            return Ok(LpStatus::Infeasible);
        }
    }
    let x = lp.point(dim);
    debug_assert!(constraints.iter().all(|c| c.is_satisfied(&x)));
    Ok(LpStatus::Feasible(x))
}

/// Maximises `objective . x` over a non-strict system.
pub fn lp_maximize(dim: usize, constraints: &[Constraint], objective: &RVec) -> Result<LpOptimum> {
    check_dim(dim, objective.dim())?;
    for c in constraints {
        check_dim(dim, c.coeffs.dim())?;
        if c.rel == Relation::Lt {
            return Err(Error::InvalidInput("strict constraints have no attained optimum".into()));
        }
    }
    let mut lp = Simplex::build(dim, constraints, false);
    if !lp.phase_one()? {
        return Ok(LpOptimum::Infeasible);
    }
    let mut cost = vec![Rat::zero(); lp.ncols];
    for i in 0..dim {
        cost[i] = objective[i].clone();
        cost[dim + i] = -objective[i].clone();
    }
    if !lp.optimize(&cost)? {
        return Ok(LpOptimum::Unbounded);
    }
    let point = lp.point(dim);
    let value = objective.dot(&point);
    Ok(LpOptimum::Optimal { point, value })
}

struct Simplex {
    /// Each row holds `ncols` coefficients followed by the right-hand side.
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
}

impl Simplex {
    fn build(dim: usize, constraints: &[Constraint], gap: bool) -> Self {
        let n_ineq = constraints.iter().filter(|c| c.rel != Relation::Eq).count() + usize::from(gap);
        let first_slack = 2 * dim + usize::from(gap);
        let ncols = first_slack + n_ineq;
        let mut rows = Vec::with_capacity(constraints.len() + 1);
        let mut basis = Vec::with_capacity(constraints.len() + 1);
        let mut slack = first_slack;
        let mut push = |row: Vec<Rat>, slack_col: Option<usize>| {
            rows.push(row);
            basis.push(slack_col.unwrap_or(usize::MAX));
        };
        for c in constraints {
            let mut row = vec![Rat::zero(); ncols + 1];
            for i in 0..dim {
                row[i] = c.coeffs[i].clone();
                row[dim + i] = -c.coeffs[i].clone();
            }
            if c.rel == Relation::Lt {
                row[2 * dim] = rat::one();
            }
            let mut slack_col = None;
            if c.rel != Relation::Eq {
                row[slack] = rat::one();
                slack_col = Some(slack);
                slack += 1;
            }
            row[ncols] = c.rhs.clone();
            if row[ncols].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                slack_col = None;
            }
            push(row, slack_col);
        }
        if gap {
            let mut row = vec![Rat::zero(); ncols + 1];
            row[2 * dim] = rat::one();
            row[slack] = rat::one();
            row[ncols] = rat::one();
            push(row, Some(slack));
        }
        Simplex { rows, basis, ncols, pivots: 0 }
    }

    /// Finds a basic feasible solution; false when the system is infeasible.
    fn phase_one(&mut self) -> Result<bool> {
        let needs: Vec<usize> = (0..self.rows.len()).filter(|&r| self.basis[r] == usize::MAX).collect();
        if needs.is_empty() {
            return Ok(true);
        }
        let n_struct = self.ncols;
        let n_art = needs.len();
        for row in self.rows.iter_mut() {
            let rhs = row.pop().expect("row has rhs");
            row.extend(std::iter::repeat_n(Rat::zero(), n_art));
            row.push(rhs);
        }
        for (a, &r) in needs.iter().enumerate() {
            self.rows[r][n_struct + a] = rat::one();
            self.basis[r] = n_struct + a;
        }
        self.ncols = n_struct + n_art;
        let mut cost = vec![Rat::zero(); self.ncols];
        for c in cost.iter_mut().skip(n_struct) {
            *c = -rat::one();
        }
        self.optimize(&cost)?;
        let infeasible = self
            .basis
            .iter()
            .zip(&self.rows)
            .any(|(&b, row)| b >= n_struct && !row[self.ncols].is_zero());
        if infeasible {
            return Ok(false);
        }
        // Drive zero-level artificials out of the basis, dropping redundant rows.
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= n_struct {
                match (0..n_struct).find(|&c| !self.rows[r][c].is_zero()) {
                    Some(c) => {
                        self.pivot(r, c, None);
                        r += 1;
                    }
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        for row in self.rows.iter_mut() {
            let rhs = row.pop().expect("row has rhs");
            row.truncate(n_struct);
            row.push(rhs);
        }
        self.ncols = n_struct;
        Ok(true)
    }

    /// Maximises `cost . x` from the current basis; false when unbounded.
    fn optimize(&mut self, cost: &[Rat]) -> Result<bool> {
        let n = self.ncols;
        let mut z: Vec<Rat> = cost.iter().cloned().chain(std::iter::once(Rat::zero())).collect();
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() {
                let cb = cost[b].clone();
                for (zj, a) in z.iter_mut().zip(&self.rows[r]) {
                    if !a.is_zero() {
                        *zj -= &cb * a;
                    }
                }
            }
        }
        loop {
            let Some(enter) = (0..n).find(|&j| z[j].is_positive()) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, Rat)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[n] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.pivot(r, enter, Some(&mut z));
            self.check_budget()?;
        }
    }

    fn pivot(&mut self, r: usize, c: usize, z: Option<&mut Vec<Rat>>) {
        self.pivots += 1;
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |row: &mut Vec<Rat>| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        if let Some(z) = z {
            eliminate(z);
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    fn solution(&self) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.ncols];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            x[b] = row[self.ncols].clone();
        }
        x
    }

    fn point(&self, dim: usize) -> RVec {
        let sol = self.solution();
        RVec::new((0..dim).map(|i| &sol[i] - &sol[dim + i]).collect()).expect("dim >= 1")
    }

    fn check_budget(&self) -> Result<()> {
        let cap = limits::max_lp_pivots();
        if self.pivots > cap {
            Err(Error::PivotLimit(cap))
        } else {
            Ok(())
        }
    }
}
