//! Dense two-phase simplex over exact rationals.
//!
//! Solves `minimize c·x subject to A x = b, x >= 0`. Bland's rule is used
//! for both entering and leaving variables, so the method terminates on
//! degenerate problems. Problem sizes in this crate are tiny (tens of
//! columns), which is why a dense tableau is fine.

use num::{Signed, Zero};

use super::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Rational>, value: Rational },
}

struct Tableau {
    /// `rows[i]` holds the coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut rc = cost[j].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                rc -= &cost[b] * &self.rows[i][j];
            }
        }
        rc
    }

    /// Runs simplex iterations on the columns flagged in `allowed`.
    /// Returns `false` if the objective is unbounded below.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.ncols).find(|&j| {
                allowed[j] && !self.basis.contains(&j) && self.reduced_cost(cost, j).is_negative()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Exact linear program `min c·x, A x = b, x >= 0`.
///
/// `a` is given row-major with `b.len()` rows and `c.len()` columns.
pub fn solve_lp(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = b.len();
    let n = c.len();
    debug_assert_eq!(a.len(), m);
    debug_assert!(a.iter().all(|row| row.len() == n));

    // Phase I: artificials n..n+m with nonnegative right-hand sides.
    let total = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut t = Vec::with_capacity(total + 1);
        for v in row {
            t.push(if flip { -v.clone() } else { v.clone() });
        }
        for k in 0..m {
            t.push(if k == i { Rational::from_integer(1.into()) } else { Rational::zero() });
        }
        t.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(t);
    }
    let mut tab = Tableau {
        rows,
        basis: (n..total).collect(),
        ncols: total,
    };
    let mut phase1_cost = vec![Rational::zero(); total];
    for v in phase1_cost.iter_mut().skip(n) {
        *v = Rational::from_integer(1.into());
    }
    let all = vec![true; total];
    let bounded = tab.optimize(&phase1_cost, &all);
    debug_assert!(bounded, "phase I objective is bounded below by zero");

    let infeasibility = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bcol)| bcol >= n)
        .fold(Rational::zero(), |acc, (i, _)| acc + tab.rhs(i));
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }

    // Drive artificials out of the basis; drop rows that are redundant.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase II on the original columns.
    let mut cost = c.to_vec();
    cost.resize(total, Rational::zero());
    let mut allowed = vec![true; total];
    for a in allowed.iter_mut().skip(n) {
        *a = false;
    }
    if !tab.optimize(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &bcol) in tab.basis.iter().enumerate() {
        if bcol < n {
            x[bcol] = tab.rhs(i).clone();
        }
    }
    let value = x.iter().zip(c).fold(Rational::zero(), |acc, (xi, ci)| acc + xi * ci);
    LpOutcome::Optimal { x, value }
}
