//! Exact feasibility by the two-phase simplex method (phase one only).
//!
//! Free variables are split into positive and negative parts unless the
//! system already carries an explicit `-x_j <= 0` row for them. Pivoting
//! follows Bland's smallest-index rule, which cannot cycle.

use num_traits::{Signed, Zero};

use crate::constraints::ConstraintSystem;
use crate::rational::{self, Rational};

/// A point satisfying every constraint of `system`, or `None` if there is none.
pub fn feasible(system: &ConstraintSystem) -> Option<Vec<Rational>> {
    let mut tableau = Tableau::build(system);
    tableau.minimize_artificials();
    if !tableau.objective_value().is_zero() {
        return None;
    }
    let x = tableau.primal_point();
    debug_assert!(
        system.contains(&x),
        "phase one returned an infeasible point"
    );
    Some(x)
}

/// Column bookkeeping for recovering the original variables.
enum Column {
    Plus(usize),
    Minus(usize),
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced costs; the last entry holds minus the objective value.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    columns: Vec<Column>,
    dimension: usize,
}

impl Tableau {
    fn build(system: &ConstraintSystem) -> Tableau {
        let dimension = system.dimension();
        let nonneg = system.sign_constrained();

        let mut columns = Vec::new();
        let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(dimension);
        for (j, &pos) in nonneg.iter().enumerate() {
            let plus = columns.len();
            columns.push(Column::Plus(j));
            let minus = (!pos).then(|| {
                columns.push(Column::Minus(j));
                columns.len() - 1
            });
            var_cols.push((plus, minus));
        }

        // Sign rows are implied by the column layout.
        let is_sign_row = |c: &crate::constraints::LinearConstraint| {
            c.rhs.is_zero()
                && c.coeffs.iter().filter(|a| !a.is_zero()).count() == 1
                && c.coeffs.iter().any(|a| a.is_negative())
        };

        struct Row {
            coeffs: Vec<Rational>,
            rhs: Rational,
            slack: bool,
        }
        let rows: Vec<Row> = system
            .equalities()
            .iter()
            .map(|c| Row {
                coeffs: c.coeffs.clone(),
                rhs: c.rhs.clone(),
                slack: false,
            })
            .chain(
                system
                    .inequalities()
                    .iter()
                    .filter(|c| !is_sign_row(c))
                    .map(|c| Row {
                        coeffs: c.coeffs.clone(),
                        rhs: c.rhs.clone(),
                        slack: true,
                    }),
            )
            .collect();

        let n_struct = columns.len();
        let n_slack = rows.iter().filter(|r| r.slack).count();
        let n_art = rows
            .iter()
            .filter(|r| !r.slack || r.rhs.is_negative())
            .count();
        let width = n_struct + n_slack + n_art;

        let mut tab = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let mut next_slack = n_struct;
        let mut next_art = n_struct + n_slack;
        for _ in 0..n_slack {
            columns.push(Column::Slack);
        }
        for _ in 0..n_art {
            columns.push(Column::Artificial);
        }
        for row in rows {
            let mut line = vec![Rational::zero(); width + 1];
            for (j, a) in row.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (plus, minus) = var_cols[j];
                line[plus] = a.clone();
                if let Some(minus) = minus {
                    line[minus] = -a.clone();
                }
            }
            let mut slack_col = None;
            if row.slack {
                line[next_slack] = rational::one();
                slack_col = Some(next_slack);
                next_slack += 1;
            }
            line[width] = row.rhs;
            if line[width].is_negative() {
                for x in line.iter_mut() {
                    *x = -x.clone();
                }
            }
            match slack_col {
                Some(s) if line[s].is_positive() => basis.push(s),
                _ => {
                    line[next_art] = rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            tab.push(line);
        }

        // Phase-one reduced costs: minus the sum of artificial rows on structural/slack columns.
        let mut cost = vec![Rational::zero(); width + 1];
        for (line, &b) in tab.iter().zip(&basis) {
            if matches!(columns[b], Column::Artificial) {
                for (c, x) in cost.iter_mut().zip(line) {
                    if !x.is_zero() {
                        *c -= x;
                    }
                }
            }
        }
        for &b in &basis {
            cost[b] = Rational::zero();
        }

        Tableau {
            rows: tab,
            cost,
            basis,
            columns,
            dimension,
        }
    }

    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn objective_value(&self) -> Rational {
        -self.cost[self.width()].clone()
    }

    fn minimize_artificials(&mut self) {
        let w = self.width();
        while let Some(enter) = (0..w).find(|&j| self.cost[j].is_negative()) {
            // Bland: minimum ratio, ties to the smallest basic variable index.
            let mut leave: Option<(usize, Rational)> = None;
            for (i, line) in self.rows.iter().enumerate() {
                if !line[enter].is_positive() {
                    continue;
                }
                let ratio = &line[w] / &line[enter];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            // Phase one is bounded below by zero, so an entering column always has a pivot.
            let (row, _) = leave.expect("phase-one objective is bounded");
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = rational::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        let eliminate = |line: &mut Vec<Rational>| {
            if line[c].is_zero() {
                return;
            }
            let f = line[c].clone();
            for &j in &nz {
                line[j] -= &f * &pivot_row[j];
            }
        };
        for line in self.rows.iter_mut() {
            if !line.is_empty() {
                eliminate(line);
            }
        }
        eliminate(&mut self.cost);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    fn primal_point(&self) -> Vec<Rational> {
        let w = self.width();
        let mut x = vec![Rational::zero(); self.dimension];
        for (line, &b) in self.rows.iter().zip(&self.basis) {
            match self.columns[b] {
                Column::Plus(j) => x[j] += &line[w],
                Column::Minus(j) => x[j] -= &line[w],
                Column::Slack | Column::Artificial => {}
            }
        }
        x
    }
}
