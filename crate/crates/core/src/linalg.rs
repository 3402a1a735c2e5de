//! Dense rational matrices and exact Gaussian elimination.

use num_traits::Zero;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix", "rows and cols must be at least 1"));
        }
        Ok(RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m[(i, i)] = rational::one();
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::invalid("matrix", "rows and cols must be at least 1"));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
            return Err(Error::invalid(
                "matrix",
                format!("row {} has {} entries, expected {c}", i + 1, row.len()),
            ));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| rational::int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.to_rows())
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", rational::Row(self.row(i)))?;
        }
        f.write_str("]")
    }
}

/// Reduced row echelon form in place. Returns the pivot column of each nonzero row.
pub fn row_reduce(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rational::one() / &rows[r][c];
        for x in rows[r].iter_mut().skip(c) {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Exact rank over the rationals of a list of equal-length rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    // Forward elimination only; no need for the reduced form.
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let n_cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..n_cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot = &top[r];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = &row[c] / &pivot[c];
            for (x, p) in row.iter_mut().zip(pivot).skip(c) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Affine solution set `{x0 + N y}` of `A x = b`.
#[derive(Debug, Clone)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    /// Basis of the null space of `A`, one vector per column of `N`.
    pub kernel: Vec<Vec<Rational>>,
}

/// Solves `A x = b` exactly. `None` when inconsistent. An empty `A` yields the whole space.
pub fn solve_affine(a: &[Vec<Rational>], b: &[Rational], dim: usize) -> Option<AffineSolution> {
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.last() == Some(&dim) {
        return None;
    }
    let mut particular = vec![Rational::zero(); dim];
    for (row, &pc) in aug.iter().zip(&pivots) {
        particular[pc] = row[dim].clone();
    }
    let mut is_pivot = vec![false; dim];
    for &pc in &pivots {
        is_pivot[pc] = true;
    }
    let kernel = (0..dim)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); dim];
            v[free] = rational::one();
            for (row, &pc) in aug.iter().zip(&pivots) {
                v[pc] = -row[free].clone();
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, kernel })
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(RatMatrix::identity(3).unwrap().rank(), 3);
        assert_eq!(RatMatrix::zeros(2, 3).unwrap().rank(), 0);
        assert_eq!(RatMatrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap().rank(), 1);
    }

    #[test]
    fn empty_shapes_rejected() {
        assert!(RatMatrix::zeros(0, 3).is_err());
        assert!(RatMatrix::from_rows(vec![vec![int(1)], vec![int(1), int(2)]]).is_err());
    }

    #[test]
    fn affine_solution_of_line() {
        // x + y = 1 in the plane
        let sol = solve_affine(&[vec![int(1), int(1)]], &[int(1)], 2).unwrap();
        assert_eq!(sol.kernel.len(), 1);
        assert_eq!(dot(&[int(1), int(1)], &sol.particular), int(1));
        assert_eq!(dot(&[int(1), int(1)], &sol.kernel[0]), int(0));
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(solve_affine(&a, &[int(1), int(3)], 2).is_none());
        assert!(solve_affine(&a, &[int(1), int(2)], 2).is_some());
        assert!(solve_affine(&[vec![frac(1, 2)]], &[int(1)], 1)
            .unwrap()
            .kernel
            .is_empty());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r)
        })
    }

    fn to_rat(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
        m.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    proptest! {
        #[test]
        fn rank_invariant_under_swaps_and_scaling(
            m in small_matrix(), i in 0usize..5, j in 0usize..5, s in 1i64..7, neg in any::<bool>()
        ) {
            let base = to_rat(&m);
            let r0 = rank(&base);
            let mut changed = base.clone();
            let (i, j) = (i % changed.len(), j % changed.len());
            changed.swap(i, j);
            let factor = if neg { frac(-s, 3) } else { frac(s, 2) };
            for x in changed[i].iter_mut() {
                *x *= &factor;
            }
            prop_assert_eq!(rank(&changed), r0);
            prop_assert!(r0 <= m.len().min(m[0].len()));
        }

        #[test]
        fn rank_plus_nullity(m in small_matrix()) {
            let a = to_rat(&m);
            let cols = a[0].len();
            let zeros = vec![int(0); a.len()];
            let sol = solve_affine(&a, &zeros, cols).unwrap();
            prop_assert_eq!(rank(&a) + sol.kernel.len(), cols);
            for v in &sol.kernel {
                for row in &a {
                    prop_assert!(dot(row, v).is_zero());
                }
            }
        }
    }
}
