//! Points of the standard simplex and the majorization preorder on them.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A point of the simplex: nonnegative coordinates summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct SimplexVector {
    coords: Vec<Rational>,
}

impl SimplexVector {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid(
                "simplex vector",
                "needs at least one coordinate",
            ));
        }
        if let Some(i) = coords.iter().position(Signed::is_negative) {
            return Err(Error::invalid(
                "simplex vector",
                format!("coordinate {} is negative ({})", i + 1, coords[i]),
            ));
        }
        let total: Rational = coords.iter().sum();
        if total != rational::one() {
            return Err(Error::invalid(
                "simplex vector",
                format!(
                    "coordinates sum to {total}, deficit {} from 1",
                    rational::one() - &total
                ),
            ));
        }
        Ok(SimplexVector { coords })
    }

    /// The centre `(1/m, ..., 1/m)`.
    pub fn center(m: usize) -> Self {
        let c = rational::frac(1, m as i64);
        SimplexVector { coords: vec![c; m] }
    }

    /// Unit coordinate vector `e_i` (0-based).
    pub fn vertex(m: usize, i: usize) -> Self {
        let mut coords = vec![Rational::zero(); m];
        coords[i] = rational::one();
        SimplexVector { coords }
    }

    /// Uniform distribution on `support` (0-based indices, nonempty).
    pub fn uniform_on(m: usize, support: &[usize]) -> Self {
        let w = rational::frac(1, support.len() as i64);
        let mut coords = vec![Rational::zero(); m];
        for &i in support {
            coords[i] = w.clone();
        }
        SimplexVector { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    /// Coordinates reordered by `perm`: result[i] = self[perm[i]].
    pub fn permuted(&self, perm: &[usize]) -> Self {
        SimplexVector {
            coords: perm.iter().map(|&p| self.coords[p].clone()).collect(),
        }
    }

    /// Sum of the `k` largest coordinates.
    pub fn top_sum(&self, k: usize) -> Rational {
        rearrange_down(self).coords.iter().take(k).sum()
    }

    /// Sum of the `k` smallest coordinates.
    pub fn bottom_sum(&self, k: usize) -> Rational {
        rearrange_down(self).coords.iter().rev().take(k).sum()
    }
}

impl TryFrom<Vec<String>> for SimplexVector {
    type Error = Error;
    fn try_from(raw: Vec<String>) -> Result<Self> {
        let coords = raw
            .iter()
            .map(|s| rational::parse(s))
            .collect::<Result<Vec<_>>>()?;
        SimplexVector::new(coords)
    }
}

impl From<SimplexVector> for Vec<String> {
    fn from(v: SimplexVector) -> Self {
        v.coords.iter().map(rational::format).collect()
    }
}

/// Nonincreasing rearrangement. Equal coordinates keep their original order.
pub fn rearrange_down(x: &SimplexVector) -> SimplexVector {
    let mut coords = x.coords.clone();
    // Stable sort keeps ties in index order.
    coords.sort_by(|a, b| b.cmp(a));
    SimplexVector { coords }
}

/// `true` iff `x` is majorized by `y`: every prefix sum of the decreasing
/// rearrangement of `x` is at most the matching prefix sum for `y`.
pub fn majorizes(x: &SimplexVector, y: &SimplexVector) -> Result<bool> {
    Ok(first_majorization_failure(x, y)?.is_none())
}

/// The smallest `k` (1-based) whose prefix sum of `x` exceeds that of `y`.
pub fn first_majorization_failure(x: &SimplexVector, y: &SimplexVector) -> Result<Option<usize>> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    let xs = rearrange_down(x);
    let ys = rearrange_down(y);
    let mut px = Rational::zero();
    let mut py = Rational::zero();
    for (k, (a, b)) in xs
        .coords
        .iter()
        .zip(&ys.coords)
        .enumerate()
        .take(x.dim() - 1)
    {
        px += a;
        py += b;
        if px > py {
            return Ok(Some(k + 1));
        }
    }
    Ok(None)
}
