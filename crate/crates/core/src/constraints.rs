//! H-representation of polyhedra: `A_eq x = b_eq`, `A_le x <= b_le`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, dot};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        dot(&self.coeffs, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Equality,
    Inequality,
}

/// A constraint the point does not satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ConstraintKind,
    pub index: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            ConstraintKind::Equality => write!(
                f,
                "equality #{} has lhs {} != rhs {}",
                self.index, self.lhs, self.rhs
            ),
            ConstraintKind::Inequality => write!(
                f,
                "inequality #{} has lhs {} > rhs {}",
                self.index, self.lhs, self.rhs
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    dimension: usize,
    equalities: Vec<LinearConstraint>,
    inequalities: Vec<LinearConstraint>,
}

impl ConstraintSystem {
    pub fn new(dimension: usize) -> Self {
        ConstraintSystem {
            dimension,
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn equalities(&self) -> &[LinearConstraint] {
        &self.equalities
    }

    /// Inequalities in `coeffs . x <= rhs` form.
    pub fn inequalities(&self) -> &[LinearConstraint] {
        &self.inequalities
    }

    fn checked(&self, coeffs: Vec<Rational>, rhs: Rational) -> Result<LinearConstraint> {
        if coeffs.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: coeffs.len(),
            });
        }
        Ok(LinearConstraint { coeffs, rhs })
    }

    pub fn add_equality(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        let c = self.checked(coeffs, rhs)?;
        self.equalities.push(c);
        Ok(())
    }

    /// `coeffs . x <= rhs`
    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        let c = self.checked(coeffs, rhs)?;
        self.inequalities.push(c);
        Ok(())
    }

    /// `coeffs . x >= rhs`
    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        let coeffs = coeffs.into_iter().map(|c| -c).collect();
        self.add_le(coeffs, -rhs)
    }

    fn unit(&self, var: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dimension];
        v[var] = rational::one();
        v
    }

    /// `lower <= x[var] <= upper`, either side optional.
    pub fn add_bounds(
        &mut self,
        var: usize,
        lower: Option<Rational>,
        upper: Option<Rational>,
    ) -> Result<()> {
        if var >= self.dimension {
            return Err(Error::OutOfRange {
                name: "variable",
                value: var,
                range: format!("0..{}", self.dimension),
            });
        }
        if let Some(lo) = lower {
            self.add_ge(self.unit(var), lo)?;
        }
        if let Some(hi) = upper {
            self.add_le(self.unit(var), hi)?;
        }
        Ok(())
    }

    /// First violated constraint, equalities before inequalities.
    pub fn violation(&self, x: &[Rational]) -> Option<Violation> {
        let eq = self.equalities.iter().enumerate().find_map(|(index, c)| {
            let lhs = c.lhs(x);
            (lhs != c.rhs).then(|| Violation {
                kind: ConstraintKind::Equality,
                index,
                lhs,
                rhs: c.rhs.clone(),
            })
        });
        eq.or_else(|| {
            self.inequalities.iter().enumerate().find_map(|(index, c)| {
                let lhs = c.lhs(x);
                (lhs > c.rhs).then(|| Violation {
                    kind: ConstraintKind::Inequality,
                    index,
                    lhs,
                    rhs: c.rhs.clone(),
                })
            })
        })
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dimension && self.violation(x).is_none()
    }

    /// Indices of the inequalities that hold with equality at `x`.
    pub fn tight_inequalities(&self, x: &[Rational]) -> Vec<usize> {
        self.inequalities
            .iter()
            .enumerate()
            .filter(|(_, c)| c.lhs(x) == c.rhs)
            .map(|(i, _)| i)
            .collect()
    }

    /// Rank of the active constraint gradients (all equalities plus tight inequalities).
    pub fn active_rank(&self, x: &[Rational]) -> usize {
        let rows: Vec<Vec<Rational>> = self
            .equalities
            .iter()
            .map(|c| c.coeffs.clone())
            .chain(
                self.tight_inequalities(x)
                    .into_iter()
                    .map(|i| self.inequalities[i].coeffs.clone()),
            )
            .collect();
        linalg::rank(&rows)
    }

    /// Vertex criterion: `x` is feasible and its active constraints have full rank.
    pub fn is_vertex(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: x.len(),
            });
        }
        if let Some(v) = self.violation(x) {
            return Err(Error::InfeasiblePoint(v.to_string()));
        }
        Ok(self.active_rank(x) == self.dimension)
    }

    /// Embeds this system into a larger space, placing its variables at `offset`.
    pub fn embedded(&self, dimension: usize, offset: usize) -> Result<ConstraintSystem> {
        if offset + self.dimension > dimension {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: offset + self.dimension,
            });
        }
        let lift = |c: &LinearConstraint| {
            let mut coeffs = vec![Rational::zero(); dimension];
            coeffs[offset..offset + self.dimension].clone_from_slice(&c.coeffs);
            LinearConstraint {
                coeffs,
                rhs: c.rhs.clone(),
            }
        };
        Ok(ConstraintSystem {
            dimension,
            equalities: self.equalities.iter().map(lift).collect(),
            inequalities: self.inequalities.iter().map(lift).collect(),
        })
    }

    /// Appends all constraints of `other`, which must live in the same space.
    pub fn extend(&mut self, other: ConstraintSystem) -> Result<()> {
        if other.dimension != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        self.equalities.extend(other.equalities);
        self.inequalities.extend(other.inequalities);
        Ok(())
    }

    /// Variables carrying an explicit `-x_j <= 0` row.
    pub(crate) fn sign_constrained(&self) -> Vec<bool> {
        let mut nonneg = vec![false; self.dimension];
        for c in &self.inequalities {
            if !c.rhs.is_zero() {
                continue;
            }
            let mut support = c.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero());
            if let (Some((j, a)), None) = (support.next(), support.next()) {
                if a.is_negative() {
                    nonneg[j] = true;
                }
            }
        }
        nonneg
    }
}
