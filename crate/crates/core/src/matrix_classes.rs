//! Symmetric nonnegative matrices, the row-sum classes `T_k`, their
//! symmetrizations `U_k`, and the equation `A = (T + T')/2`.
//!
//! `U_1` has a combinatorial description: `A` belongs to it exactly when
//! every principal block sums to at most its order and the whole matrix sums
//! to `m`. For `k >= 2` no such description is available, so membership in
//! `U_k` is decided as an exact linear feasibility problem over the entries
//! of `T`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::constraints::ConstraintSystem;
use crate::error::{Error, Result};
use crate::majorization::SimplexVector;
use crate::permutation::Permutation;
use crate::rational::{self, Rational};
use crate::simplex;

fn square_rows(rows: &[Vec<Rational>], what: &'static str) -> Result<usize> {
    let m = rows.len();
    if m == 0 {
        return Err(Error::invalid(what, "matrix must have at least one row"));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
        return Err(Error::invalid(
            what,
            format!("row {} has {} entries, expected {m}", i + 1, r.len()),
        ));
    }
    Ok(m)
}

fn parse_grid(raw: &[Vec<String>]) -> Result<Vec<Vec<Rational>>> {
    raw.iter()
        .map(|row| row.iter().map(|s| rational::parse(s)).collect())
        .collect()
}

fn format_grid(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(rational::format).collect())
        .collect()
}

fn quad(rows: &[Vec<Rational>], x: &SimplexVector) -> Result<Rational> {
    if x.dim() != rows.len() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            found: x.dim(),
        });
    }
    let x = x.coords();
    let mut total = Rational::zero();
    for (row, xi) in rows.iter().zip(x) {
        if xi.is_zero() {
            continue;
        }
        let inner: Rational = row
            .iter()
            .zip(x)
            .filter(|(a, xj)| !a.is_zero() && !xj.is_zero())
            .map(|(a, xj)| a * xj)
            .sum();
        total += inner * xi;
    }
    Ok(total)
}

/// Symmetric matrix with nonnegative rational entries.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<String>>", into = "Vec<Vec<String>>")]
pub struct SymMatrix {
    rows: Vec<Vec<Rational>>,
}

impl SymMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = square_rows(&rows, "symmetric matrix")?;
        for (i, j) in (0..m).flat_map(|i| (0..m).map(move |j| (i, j))) {
            if rows[i][j].is_negative() {
                return Err(Error::invalid(
                    "symmetric matrix",
                    format!("entry ({},{}) = {} is negative", i + 1, j + 1, rows[i][j]),
                ));
            }
            if j > i && rows[i][j] != rows[j][i] {
                return Err(Error::invalid(
                    "symmetric matrix",
                    format!(
                        "entry ({},{}) = {} differs from ({},{}) = {}",
                        i + 1,
                        j + 1,
                        rows[i][j],
                        j + 1,
                        i + 1,
                        rows[j][i]
                    ),
                ));
            }
        }
        Ok(SymMatrix { rows })
    }

    pub fn from_i64_ratios(rows: &[&[(i64, i64)]]) -> Result<Self> {
        SymMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| rational::frac(n, d)).collect())
                .collect(),
        )
    }

    pub fn identity(m: usize) -> Self {
        let mut rows = vec![vec![Rational::zero(); m]; m];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = rational::one();
        }
        SymMatrix { rows }
    }

    /// The all-ones matrix `E`.
    pub fn ones(m: usize) -> Self {
        SymMatrix {
            rows: vec![vec![rational::one(); m]; m],
        }
    }

    /// Zero diagonal, `1/2` everywhere else. For `m = 3` this is the matrix `M`
    /// that belongs to `U_1` without being one of its extreme points.
    pub fn half_off_diagonal(m: usize) -> Self {
        let mut rows = vec![vec![rational::half(); m]; m];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Rational::zero();
        }
        SymMatrix { rows }
    }

    /// Builds the matrix from its upper triangle listed row by row (`i <= j`).
    pub fn from_upper(m: usize, upper: &[Rational]) -> Result<Self> {
        if upper.len() != m * (m + 1) / 2 {
            return Err(Error::DimensionMismatch {
                expected: m * (m + 1) / 2,
                found: upper.len(),
            });
        }
        let mut rows = vec![vec![Rational::zero(); m]; m];
        for (idx, (i, j)) in upper_pairs(m).enumerate() {
            rows[i][j] = upper[idx].clone();
            rows[j][i] = upper[idx].clone();
        }
        SymMatrix::new(rows)
    }

    pub fn to_upper(&self) -> Vec<Rational> {
        upper_pairs(self.dim())
            .map(|(i, j)| self.rows[i][j].clone())
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn total(&self) -> Rational {
        self.rows.iter().flatten().sum()
    }

    /// `sum_{i,j in alpha} a_ij`.
    pub fn subset_sum(&self, alpha: &SubsetMask) -> Rational {
        let members = alpha.members();
        let mut s = Rational::zero();
        for &i in &members {
            for &j in &members {
                s += &self.rows[i][j];
            }
        }
        s
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn is_stochastic(&self) -> bool {
        self.row_sums().iter().all(|s| *s == rational::one())
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        if factor.is_negative() {
            return Err(Error::invalid("symmetric matrix", "negative scale factor"));
        }
        Ok(SymMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|a| a * factor).collect())
                .collect(),
        })
    }

    pub fn add(&self, other: &SymMatrix) -> Result<Self> {
        self.same_dim(other)?;
        Ok(SymMatrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        })
    }

    /// `self - other`, failing if an entry would turn negative.
    pub fn sub(&self, other: &SymMatrix) -> Result<Self> {
        self.same_dim(other)?;
        SymMatrix::new(
            self.rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
                .collect(),
        )
    }

    /// `E - self`; needs every entry at most 1.
    pub fn complement(&self) -> Result<Self> {
        SymMatrix::ones(self.dim()).sub(self)
    }

    /// Row and column permutation `A_g = (a_{g(i) g(j)})`.
    pub fn permuted(&self, g: &Permutation) -> Result<Self> {
        if g.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: g.len(),
            });
        }
        let m = self.dim();
        Ok(SymMatrix {
            rows: (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| self.rows[g.image(i)][g.image(j)].clone())
                        .collect()
                })
                .collect(),
        })
    }

    fn same_dim(&self, other: &SymMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", rational::Row(r))?;
        }
        f.write_str("]")
    }
}

impl TryFrom<Vec<Vec<String>>> for SymMatrix {
    type Error = Error;
    fn try_from(raw: Vec<Vec<String>>) -> Result<Self> {
        SymMatrix::new(parse_grid(&raw)?)
    }
}

impl From<SymMatrix> for Vec<Vec<String>> {
    fn from(a: SymMatrix) -> Self {
        format_grid(&a.rows)
    }
}

/// Upper-triangle index pairs `(i, j)`, `i <= j`, row by row.
pub fn upper_pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |i| (i..m).map(move |j| (i, j)))
}

/// Square matrix with entries in `[0, 1]` and every row summing to the integer `k`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<String>>", into = "Vec<Vec<String>>")]
pub struct RowSumMatrix {
    k: usize,
    rows: Vec<Vec<Rational>>,
}

impl RowSumMatrix {
    /// Validates the entries and infers `k` from the first row.
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let m = square_rows(&rows, "row-sum matrix")?;
        let first: Rational = rows[0].iter().sum();
        if !first.is_integer() || first < rational::one() || first > rational::int(m as i64) {
            return Err(Error::invalid(
                "row-sum matrix",
                format!("row 1 sums to {first}, expected an integer k with 1 <= k <= {m}"),
            ));
        }
        let k = first.to_integer().try_into().expect("k <= m fits in usize");
        RowSumMatrix::with_row_sum(rows, k)
    }

    pub fn with_row_sum(rows: Vec<Vec<Rational>>, k: usize) -> Result<Self> {
        let m = square_rows(&rows, "row-sum matrix")?;
        if k == 0 || k > m {
            return Err(Error::OutOfRange {
                name: "k",
                value: k,
                range: format!("1..={m}"),
            });
        }
        let target = rational::int(k as i64);
        for (i, row) in rows.iter().enumerate() {
            if let Some(j) = row
                .iter()
                .position(|t| t.is_negative() || *t > rational::one())
            {
                return Err(Error::invalid(
                    "row-sum matrix",
                    format!("entry ({},{}) = {} is outside [0, 1]", i + 1, j + 1, row[j]),
                ));
            }
            let s: Rational = row.iter().sum();
            if s != target {
                return Err(Error::invalid(
                    "row-sum matrix",
                    format!("row {} sums to {s}, expected {k}", i + 1),
                ));
            }
        }
        Ok(RowSumMatrix { k, rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row_sum(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    /// `(T + T') / 2`.
    pub fn symmetrize(&self) -> SymMatrix {
        let m = self.dim();
        let half = rational::half();
        SymMatrix {
            rows: (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| (&self.rows[i][j] + &self.rows[j][i]) * &half)
                        .collect()
                })
                .collect(),
        }
    }

    pub fn transpose(&self) -> Vec<Vec<Rational>> {
        let m = self.dim();
        (0..m)
            .map(|i| (0..m).map(|j| self.rows[j][i].clone()).collect())
            .collect()
    }

    pub fn is_doubly_stochastic(&self) -> bool {
        self.k == 1
            && self
                .transpose()
                .iter()
                .all(|col| col.iter().sum::<Rational>() == rational::one())
    }

    /// `T x` for a stochastic `T`; the result stays on the simplex when `T` is doubly stochastic.
    pub fn mul_vec(&self, x: &SimplexVector) -> Result<Vec<Rational>> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|r| r.iter().zip(x.coords()).map(|(t, xi)| t * xi).sum())
            .collect())
    }

    /// `(T x, x)`.
    pub fn quadratic_form(&self, x: &SimplexVector) -> Result<Rational> {
        quad(&self.rows, x)
    }

    pub fn permuted(&self, g: &Permutation) -> Result<Self> {
        if g.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: g.len(),
            });
        }
        let m = self.dim();
        Ok(RowSumMatrix {
            k: self.k,
            rows: (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| self.rows[g.image(i)][g.image(j)].clone())
                        .collect()
                })
                .collect(),
        })
    }
}

impl fmt::Debug for RowSumMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.k)?;
        f.debug_list()
            .entries(self.rows.iter().map(|r| rational::Row(r).to_string()))
            .finish()
    }
}

impl TryFrom<Vec<Vec<String>>> for RowSumMatrix {
    type Error = Error;
    fn try_from(raw: Vec<Vec<String>>) -> Result<Self> {
        RowSumMatrix::new(parse_grid(&raw)?)
    }
}

impl From<RowSumMatrix> for Vec<Vec<String>> {
    fn from(t: RowSumMatrix) -> Self {
        format_grid(&t.rows)
    }
}

/// Nonempty subset of `{0, .., m-1}`; serialized as a sorted 1-based array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    m: usize,
    bits: u64,
}

impl SubsetMask {
    pub const MAX_M: usize = 63;

    pub fn from_members(m: usize, members: &[usize]) -> Result<Self> {
        if m > Self::MAX_M {
            return Err(Error::OutOfRange {
                name: "m",
                value: m,
                range: format!("1..={}", Self::MAX_M),
            });
        }
        let mut bits = 0u64;
        for &i in members {
            if i >= m {
                return Err(Error::invalid(
                    "subset",
                    format!("index {} outside 1..={m}", i + 1),
                ));
            }
            bits |= 1 << i;
        }
        if bits == 0 {
            return Err(Error::invalid("subset", "subset must be nonempty"));
        }
        Ok(SubsetMask { m, bits })
    }

    pub fn full(m: usize) -> Self {
        SubsetMask {
            m,
            bits: if m == 64 { u64::MAX } else { (1u64 << m) - 1 },
        }
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.m).filter(|&i| self.bits >> i & 1 == 1).collect()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.members().into_iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn universe(&self) -> usize {
        self.m
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.m
    }

    /// Every nonempty subset, ordered lexicographically by sorted member list.
    pub fn all(m: usize) -> Vec<SubsetMask> {
        fn walk(m: usize, start: usize, bits: u64, out: &mut Vec<SubsetMask>) {
            for i in start..m {
                let b = bits | 1 << i;
                out.push(SubsetMask { m, bits: b });
                walk(m, i + 1, b, out);
            }
        }
        let mut out = Vec::with_capacity((1usize << m.min(20)) - 1);
        walk(m, 0, 0, &mut out);
        out
    }

    /// The point uniform on the subset, `x_i = 1/|alpha|` for `i` in `alpha`.
    pub fn uniform_point(&self) -> SimplexVector {
        SimplexVector::uniform_on(self.m, &self.members())
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_based())
    }
}

/// Why a symmetric matrix is not in `U_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum U1Violation {
    /// `sum_{i,j in alpha} a_ij > |alpha|`.
    Subset {
        subset: SubsetMask,
        #[serde(with = "rational::text")]
        sum: Rational,
    },
    /// The entries sum to less than `m`.
    TotalSum {
        #[serde(with = "rational::text")]
        sum: Rational,
        expected: usize,
    },
}

impl U1Violation {
    /// A simplex point where `(Ax, x)` leaves the interval `[x_min, x_max]`:
    /// uniform on the violating subset, or the centre for a total-sum deficit.
    pub fn witness_point(&self) -> SimplexVector {
        match self {
            U1Violation::Subset { subset, .. } => subset.uniform_point(),
            U1Violation::TotalSum { expected, .. } => SimplexVector::center(*expected),
        }
    }
}

impl fmt::Display for U1Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            U1Violation::Subset { subset, sum } => write!(
                f,
                "entries over subset {subset} sum to {sum} > {}",
                subset.len()
            ),
            U1Violation::TotalSum { sum, expected } => {
                write!(f, "entries sum to {sum}, expected {expected}")
            }
        }
    }
}

/// Subset-sum test for `U_1`. On failure reports the lexicographically
/// smallest violating subset, or the total-sum deficit if no subset is violated.
pub fn check_u1(a: &SymMatrix) -> std::result::Result<(), U1Violation> {
    let m = a.dim();
    for alpha in SubsetMask::all(m) {
        let sum = a.subset_sum(&alpha);
        if sum > rational::int(alpha.len() as i64) {
            return Err(U1Violation::Subset { subset: alpha, sum });
        }
    }
    let sum = a.total();
    if sum != rational::int(m as i64) {
        return Err(U1Violation::TotalSum { sum, expected: m });
    }
    Ok(())
}

pub fn in_u1(a: &SymMatrix) -> bool {
    check_u1(a).is_ok()
}

/// Linear system over the `m*m` entries of `T` (row-major) describing
/// `T in T_k` with `(T + T')/2 = A`.
pub fn uk_system(a: &SymMatrix, k: usize) -> Result<ConstraintSystem> {
    let m = a.dim();
    if k == 0 || k > m {
        return Err(Error::OutOfRange {
            name: "k",
            value: k,
            range: format!("1..={m}"),
        });
    }
    let var = |i: usize, j: usize| i * m + j;
    let mut sys = ConstraintSystem::new(m * m);
    for v in 0..m * m {
        sys.add_bounds(v, Some(Rational::zero()), Some(rational::one()))?;
    }
    for (i, j) in upper_pairs(m) {
        let mut c = vec![Rational::zero(); m * m];
        if i == j {
            c[var(i, i)] = rational::one();
            sys.add_equality(c, a.get(i, i).clone())?;
        } else {
            c[var(i, j)] = rational::one();
            c[var(j, i)] = rational::one();
            sys.add_equality(c, a.get(i, j) * rational::int(2))?;
        }
    }
    for i in 0..m {
        let mut c = vec![Rational::zero(); m * m];
        for j in 0..m {
            c[var(i, j)] = rational::one();
        }
        sys.add_equality(c, rational::int(k as i64))?;
    }
    Ok(sys)
}

/// The polytope of stochastic `T` with `(T + T')/2 = A`, over the entries of `T` in row-major order.
pub fn solution_polytope(a: &SymMatrix) -> ConstraintSystem {
    uk_system(a, 1).expect("k = 1 is always in range")
}

pub(crate) fn grid_from_flat(m: usize, flat: &[Rational]) -> Vec<Vec<Rational>> {
    flat.chunks(m).map(<[Rational]>::to_vec).collect()
}

/// Decides `A in U_k`, returning a witness `T in T_k` with `(T + T')/2 = A`.
pub fn in_uk(a: &SymMatrix, k: usize) -> Result<Option<RowSumMatrix>> {
    let sys = uk_system(a, k)?;
    let Some(t) = simplex::feasible(&sys) else {
        return Ok(None);
    };
    let t = RowSumMatrix::with_row_sum(grid_from_flat(a.dim(), &t), k)
        .expect("feasible point satisfies the T_k constraints");
    Ok(Some(t))
}

/// A stochastic `T` with `(T + T')/2 = A`. Any solution may be returned.
pub fn solve_symmetrization(a: &SymMatrix) -> Result<RowSumMatrix> {
    check_u1(a).map_err(Error::NotInU1)?;
    in_uk(a, 1)?.ok_or_else(|| {
        Error::Precondition("subset conditions hold but no stochastic solution was found".into())
    })
}

/// `(A x, x) = sum_{i,j} a_ij x_i x_j`.
pub fn quadratic_form(a: &SymMatrix, x: &SimplexVector) -> Result<Rational> {
    quad(&a.rows, x)
}

/// The two sides of `x_[m] + .. + x_[m-k+1] <= (Ax, x) <= x_[1] + .. + x_[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormBounds {
    #[serde(with = "rational::text")]
    pub lower: Rational,
    #[serde(with = "rational::text")]
    pub value: Rational,
    #[serde(with = "rational::text")]
    pub upper: Rational,
}

impl FormBounds {
    pub fn holds(&self) -> bool {
        self.lower <= self.value && self.value <= self.upper
    }
}

pub fn form_bounds(a: &SymMatrix, k: usize, x: &SimplexVector) -> Result<FormBounds> {
    let m = a.dim();
    if x.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: x.dim(),
        });
    }
    if k == 0 || k > m {
        return Err(Error::OutOfRange {
            name: "k",
            value: k,
            range: format!("1..={m}"),
        });
    }
    Ok(FormBounds {
        lower: x.bottom_sum(k),
        value: quadratic_form(a, x)?,
        upper: x.top_sum(k),
    })
}

pub fn check_form_bounds(a: &SymMatrix, k: usize, x: &SimplexVector) -> Result<bool> {
    Ok(form_bounds(a, k, x)?.holds())
}

pub fn permute_matrix(a: &SymMatrix, g: &Permutation) -> Result<SymMatrix> {
    a.permuted(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn example_matrix() -> SymMatrix {
        SymMatrix::from_i64_ratios(&[
            &[(1, 10), (3, 10), (4, 10)],
            &[(3, 10), (1, 10), (5, 10)],
            &[(4, 10), (5, 10), (4, 10)],
        ])
        .unwrap()
    }

    fn t_alpha(alpha: Rational) -> Vec<Vec<Rational>> {
        let d = |n| frac(n, 10);
        vec![
            vec![d(1), alpha.clone(), d(9) - &alpha],
            vec![d(6) - &alpha, d(1), d(3) + &alpha],
            vec![&alpha - d(1), d(7) - &alpha, d(4)],
        ]
    }

    #[test]
    fn subsets_in_lexicographic_order() {
        let names: Vec<Vec<usize>> = SubsetMask::all(3).iter().map(|s| s.one_based()).collect();
        assert_eq!(
            names,
            vec![
                vec![1],
                vec![1, 2],
                vec![1, 2, 3],
                vec![1, 3],
                vec![2],
                vec![2, 3],
                vec![3]
            ]
        );
        assert_eq!(SubsetMask::all(5).len(), 31);
    }

    #[test]
    fn u1_membership_examples() {
        for m in 1..5 {
            assert!(in_u1(&SymMatrix::identity(m)));
        }
        assert!(in_u1(&SymMatrix::half_off_diagonal(3)));
        assert!(in_u1(&example_matrix()));
        let d = SymMatrix::from_i64_ratios(&[&[(2, 1), (0, 1)], &[(0, 1), (0, 1)]]).unwrap();
        match check_u1(&d) {
            Err(U1Violation::Subset { subset, sum }) => {
                assert_eq!(subset.one_based(), vec![1]);
                assert_eq!(sum, int(2));
            }
            other => panic!("unexpected {other:?}"),
        }
        let small = SymMatrix::identity(3).scaled(&frac(1, 2)).unwrap();
        assert_eq!(
            check_u1(&small),
            Err(U1Violation::TotalSum {
                sum: frac(3, 2),
                expected: 3
            })
        );
    }

    #[test]
    fn hand_oracle_for_half_off_diagonal() {
        // Singletons sum to 0, pairs to 1, the whole matrix to 3.
        let m = SymMatrix::half_off_diagonal(3);
        for alpha in SubsetMask::all(3) {
            let expected = match alpha.len() {
                1 => int(0),
                2 => int(1),
                _ => int(3),
            };
            assert_eq!(m.subset_sum(&alpha), expected);
        }
    }

    #[test]
    fn uk_examples() {
        for m in 1..5 {
            let e = SymMatrix::ones(m);
            let t = in_uk(&e, m).unwrap().unwrap();
            assert_eq!(t.rows(), e.rows());
        }
        for m in 2..5 {
            let two_i = SymMatrix::identity(m).scaled(&int(2)).unwrap();
            assert!(in_uk(&two_i, 2).unwrap().is_none());
        }
        let a = example_matrix();
        let t = in_uk(&a.complement().unwrap(), 2).unwrap().unwrap();
        assert_eq!(t.symmetrize(), a.complement().unwrap());
        assert!(in_uk(&a, 0).is_err());
        assert!(in_uk(&a, 4).is_err());
    }

    #[test]
    fn symmetrization_examples() {
        let a = example_matrix();
        let t = solve_symmetrization(&a).unwrap();
        assert_eq!(t.symmetrize(), a);
        assert_eq!(t.row_sum(), 1);

        let a3 = SymMatrix::from_i64_ratios(&[&[(1, 1), (1, 2)], &[(1, 2), (0, 1)]]).unwrap();
        let t = solve_symmetrization(&a3).unwrap();
        assert_eq!(t.rows(), &[vec![int(1), int(0)], vec![int(1), int(0)]]);

        let id = SymMatrix::identity(3);
        assert_eq!(solve_symmetrization(&id).unwrap().rows(), id.rows());

        let bad = SymMatrix::from_i64_ratios(&[&[(2, 1), (0, 1)], &[(0, 1), (0, 1)]]).unwrap();
        assert!(matches!(solve_symmetrization(&bad), Err(Error::NotInU1(_))));
    }

    #[test]
    fn family_members_solve_the_example() {
        // Every T_alpha with alpha in [1/10, 6/10] is a stochastic solution.
        let a = example_matrix();
        let sys = solution_polytope(&a);
        for n in 1..=6 {
            let t = t_alpha(frac(n, 10));
            let flat: Vec<Rational> = t.iter().flatten().cloned().collect();
            assert!(sys.contains(&flat), "alpha = {n}/10");
            assert_eq!(RowSumMatrix::new(t).unwrap().symmetrize(), a);
        }
        for bad in [0, 7] {
            let flat: Vec<Rational> = t_alpha(frac(bad, 10)).into_iter().flatten().collect();
            assert!(!sys.contains(&flat));
        }
    }

    #[test]
    fn solution_polytope_shapes() {
        let sys = solution_polytope(&SymMatrix::identity(3));
        let only = crate::vertices::enumerate_vertices(&sys).unwrap();
        let flat: Vec<Rational> = SymMatrix::identity(3)
            .rows()
            .iter()
            .flatten()
            .cloned()
            .collect();
        assert_eq!(only, vec![flat]);

        let bad = SymMatrix::from_i64_ratios(&[&[(2, 1), (0, 1)], &[(0, 1), (0, 1)]]).unwrap();
        assert!(simplex::feasible(&solution_polytope(&bad)).is_none());
    }

    #[test]
    fn quadratic_form_examples() {
        let x = SimplexVector::new(vec![frac(1, 6), frac(1, 3), frac(1, 2)]).unwrap();
        assert_eq!(quadratic_form(&SymMatrix::ones(3), &x).unwrap(), int(1));
        for m in 1..6 {
            let c = SimplexVector::center(m);
            assert_eq!(
                quadratic_form(&SymMatrix::identity(m), &c).unwrap(),
                frac(1, m as i64)
            );
        }
        let c = SimplexVector::center(3);
        assert_eq!(
            quadratic_form(&SymMatrix::half_off_diagonal(3), &c).unwrap(),
            frac(1, 3)
        );
        assert!(quadratic_form(&SymMatrix::ones(2), &c).is_err());
    }

    #[test]
    fn form_bound_examples() {
        let x = SimplexVector::new(vec![frac(1, 6), frac(1, 3), frac(1, 2)]).unwrap();
        assert!(check_form_bounds(&example_matrix(), 1, &x).unwrap());
        let b = form_bounds(&SymMatrix::ones(3), 3, &x).unwrap();
        assert_eq!(
            (b.lower.clone(), b.value.clone(), b.upper.clone()),
            (int(1), int(1), int(1))
        );

        let d = SymMatrix::from_i64_ratios(&[&[(2, 1), (0, 1)], &[(0, 1), (0, 1)]]).unwrap();
        let mid = SimplexVector::center(2);
        let b = form_bounds(&d, 1, &mid).unwrap();
        assert_eq!(b.value, frac(1, 2));
        assert!(b.holds());
        assert!(!check_form_bounds(&d, 1, &SimplexVector::vertex(2, 0)).unwrap());
        assert!(check_form_bounds(&d, 3, &mid).is_err());
    }

    #[test]
    fn permutation_properties() {
        let a = example_matrix();
        assert_eq!(permute_matrix(&a, &Permutation::identity(3)).unwrap(), a);
        for g in Permutation::all(3) {
            let ag = permute_matrix(&a, &g).unwrap();
            assert_eq!(permute_matrix(&ag, &g.inverse()).unwrap(), a);
            assert!(in_u1(&ag));
        }
    }

    #[test]
    fn row_sum_validation() {
        assert!(
            RowSumMatrix::new(vec![vec![frac(1, 2), frac(1, 2)], vec![int(1), int(0)]]).is_ok()
        );
        let err = RowSumMatrix::new(vec![vec![frac(1, 2), frac(1, 2)], vec![int(1), int(1)]]);
        assert!(err.unwrap_err().to_string().contains("row 2 sums to 2"));
        assert!(RowSumMatrix::new(vec![vec![int(2), int(-1)], vec![int(1), int(0)]]).is_err());
        assert!(
            RowSumMatrix::new(vec![vec![frac(1, 2), int(0)], vec![frac(1, 2), int(0)]]).is_err()
        );
    }

    #[test]
    fn sym_matrix_validation_names_entry() {
        let err = SymMatrix::new(vec![vec![int(0), int(1)], vec![int(0), int(0)]]).unwrap_err();
        assert!(err.to_string().contains("(1,2)"), "{err}");
        let err = SymMatrix::new(vec![vec![int(-1)]]).unwrap_err();
        assert!(err.to_string().contains("negative"));
        let a: SymMatrix = serde_json::from_str(r#"[["0,1","0.3"],["3/10","1"]]"#).unwrap();
        assert_eq!(a.get(0, 1), &frac(3, 10));
    }
}
