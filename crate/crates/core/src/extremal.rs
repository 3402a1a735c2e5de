//! Extreme points of `U_1` and of the polytope `B` of doubly stochastic
//! quadratic operators.
//!
//! Both polytopes are enumerated twice: once over a small grid of candidate
//! coordinates filtered by the vertex criterion, once by the generic double
//! description method. The grids are `{0, 1}` on the diagonal and
//! `{0, 1/2, 1}` off it for `U_1`, and for `B` every pair `(i, j)` spreads its
//! unit mass over the slices in halves. Symmetric matrices use the upper
//! triangle `a_ij, i <= j` as coordinates; operators concatenate the slices.

use rayon::prelude::*;
use serde::Serialize;

use crate::constraints::ConstraintSystem;
use crate::error::{Error, Result};
use crate::matrix_classes::{
    in_u1, solution_polytope, upper_pairs, RowSumMatrix, SubsetMask, SymMatrix,
};
use crate::permutation::Permutation;
use crate::qso::{check_dsqo, QsoTensor};
use crate::rational::{self, Rational};
use crate::vertices::enumerate_vertices;

/// Largest `m` for which the `U_1` grid is enumerated.
pub const U1_GRID_CAP: usize = 4;

/// Which polytope a coordinate vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "polytope", rename_all = "snake_case")]
pub enum Provenance {
    U1 {
        m: usize,
    },
    B {
        m: usize,
    },
    /// Stochastic `T` with `(T + T')/2 = A`, entries row-major.
    SolutionSet {
        m: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PolytopePoint {
    #[serde(with = "rational::text::vec")]
    coords: Vec<Rational>,
    provenance: Provenance,
}

impl PolytopePoint {
    pub fn new(coords: Vec<Rational>, provenance: Provenance) -> Self {
        PolytopePoint { coords, provenance }
    }

    pub fn from_u1(a: &SymMatrix) -> Self {
        Self::new(a.to_upper(), Provenance::U1 { m: a.dim() })
    }

    pub fn from_operator(v: &QsoTensor) -> Self {
        Self::new(v.to_coords(), Provenance::B { m: v.dim() })
    }

    pub fn from_solution(t: &RowSumMatrix) -> Self {
        Self::new(
            t.rows().iter().flatten().cloned().collect(),
            Provenance::SolutionSet { m: t.dim() },
        )
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

/// Vertex criterion: the equalities together with the inequalities tight at
/// the point have rank equal to the ambient dimension.
pub fn is_extreme(point: &PolytopePoint, system: &ConstraintSystem) -> Result<bool> {
    system.is_vertex(point.coords())
}

fn subset_row(m: usize, alpha: &SubsetMask) -> Vec<Rational> {
    let members = alpha.members();
    upper_pairs(m)
        .map(|(i, j)| {
            if !(members.contains(&i) && members.contains(&j)) {
                rational::zero()
            } else if i == j {
                rational::one()
            } else {
                rational::int(2)
            }
        })
        .collect()
}

/// `U_1` over the upper-triangle coordinates: `a_ij >= 0`, one inequality
/// `sum_{i,j in alpha} a_ij <= |alpha|` per nonempty proper subset, and the
/// total `sum_{i,j} a_ij = m`. Off-diagonal coordinates count twice in sums.
pub fn u1_constraints(m: usize) -> ConstraintSystem {
    let n = m * (m + 1) / 2;
    let mut sys = ConstraintSystem::new(n);
    for v in 0..n {
        sys.add_bounds(v, Some(rational::zero()), None)
            .expect("variable in range");
    }
    for alpha in SubsetMask::all(m) {
        if alpha.is_full() {
            continue;
        }
        sys.add_le(subset_row(m, &alpha), rational::int(alpha.len() as i64))
            .expect("row length matches");
    }
    sys.add_equality(subset_row(m, &SubsetMask::full(m)), rational::int(m as i64))
        .expect("row length matches");
    sys
}

/// `B` over the coordinates `p_{ij,k}` (slice-major, upper triangle within
/// each slice): every slice in `U_1` and `sum_k p_{ij,k} = 1`.
pub fn b_constraints(m: usize) -> ConstraintSystem {
    let per = m * (m + 1) / 2;
    let n = m * per;
    let slice = u1_constraints(m);
    let mut sys = ConstraintSystem::new(n);
    for k in 0..m {
        sys.extend(slice.embedded(n, k * per).expect("slice fits"))
            .expect("same dimension");
    }
    for idx in 0..per {
        let mut c = vec![rational::zero(); n];
        for k in 0..m {
            c[k * per + idx] = rational::one();
        }
        sys.add_equality(c, rational::one())
            .expect("row length matches");
    }
    sys
}

/// Decodes `index` in the mixed radix given by `radices`, most significant first.
fn mixed_radix(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (d, &r) in digits.iter_mut().zip(radices).rev() {
        *d = index % r;
        index /= r;
    }
    digits
}

fn check_u1_grid_range(m: usize) -> Result<()> {
    if !(2..=U1_GRID_CAP).contains(&m) {
        return Err(Error::OutOfRange {
            name: "m",
            value: m,
            range: format!("2..={U1_GRID_CAP}"),
        });
    }
    Ok(())
}

/// Extreme points of `U_1` found on the `{0, 1/2, 1}` grid, ordered by
/// their upper-triangle coordinates.
pub fn enumerate_extreme_u1(m: usize) -> Result<Vec<SymMatrix>> {
    check_u1_grid_range(m)?;
    let pairs: Vec<(usize, usize)> = upper_pairs(m).collect();
    let radices: Vec<usize> = pairs
        .iter()
        .map(|&(i, j)| if i == j { 2 } else { 3 })
        .collect();
    let total: usize = radices.iter().product();
    let values = [rational::zero(), rational::half(), rational::one()];
    let system = u1_constraints(m);

    let mut found: Vec<SymMatrix> = (0..total)
        .into_par_iter()
        .filter_map(|index| {
            let digits = mixed_radix(index, &radices);
            let upper: Vec<Rational> = digits
                .iter()
                .zip(&pairs)
                .map(|(&d, &(i, j))| {
                    // Diagonal digits index {0, 1}.
                    let d = if i == j { 2 * d } else { d };
                    values[d].clone()
                })
                .collect();
            let a = SymMatrix::from_upper(m, &upper).expect("grid entries are valid");
            let point = PolytopePoint::from_u1(&a);
            (in_u1(&a) && is_extreme(&point, &system).expect("feasible point")).then_some(a)
        })
        .collect();
    sort_matrices(&mut found);
    Ok(found)
}

/// Extreme points of `U_1` from the double description oracle.
pub fn enumerate_extreme_u1_oracle(m: usize) -> Result<Vec<SymMatrix>> {
    let mut found = enumerate_vertices(&u1_constraints(m))?
        .iter()
        .map(|v| SymMatrix::from_upper(m, v))
        .collect::<Result<Vec<_>>>()?;
    sort_matrices(&mut found);
    Ok(found)
}

fn sort_matrices(list: &mut [SymMatrix]) {
    list.sort_by_cached_key(SymMatrix::to_upper);
}

fn sort_operators(list: &mut Vec<QsoTensor>) {
    list.sort_by_cached_key(QsoTensor::to_coords);
    list.dedup();
}

fn check_b_range(m: usize) -> Result<()> {
    if !(2..=3).contains(&m) {
        return Err(Error::Unsupported(format!(
            "extreme points of B are enumerated for m = 2 or 3 only, got m = {m}"
        )));
    }
    Ok(())
}

/// Ways to split unit mass over `m` slices in halves: every `e_k` and every
/// `(e_k + e_l)/2` with `k < l`.
fn half_splits(m: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for k in 0..m {
        let mut v = vec![rational::zero(); m];
        v[k] = rational::one();
        out.push(v);
    }
    for k in 0..m {
        for l in k + 1..m {
            let mut v = vec![rational::zero(); m];
            v[k] = rational::half();
            v[l] = rational::half();
            out.push(v);
        }
    }
    out
}

/// Extreme points of `B` for `m` in `{2, 3}` found on the half-split grid,
/// ordered by their coordinates.
pub fn enumerate_extreme_b(m: usize) -> Result<Vec<QsoTensor>> {
    check_b_range(m)?;
    let per = m * (m + 1) / 2;
    let splits = half_splits(m);
    let radices = vec![splits.len(); per];
    let total: usize = radices.iter().product();
    let system = b_constraints(m);

    let mut found: Vec<QsoTensor> = (0..total)
        .into_par_iter()
        .filter_map(|index| {
            let digits = mixed_radix(index, &radices);
            let slices = (0..m)
                .map(|k| {
                    let upper: Vec<Rational> =
                        digits.iter().map(|&d| splits[d][k].clone()).collect();
                    SymMatrix::from_upper(m, &upper).expect("grid entries are valid")
                })
                .collect::<Vec<_>>();
            if !slices.iter().all(in_u1) {
                return None;
            }
            let v = QsoTensor::new(slices).expect("splits sum to one");
            let point = PolytopePoint::from_operator(&v);
            is_extreme(&point, &system)
                .expect("feasible point")
                .then_some(v)
        })
        .collect();
    sort_operators(&mut found);
    Ok(found)
}

/// Extreme points of `B` from the double description oracle.
pub fn enumerate_extreme_b_oracle(m: usize) -> Result<Vec<QsoTensor>> {
    let mut found = enumerate_vertices(&b_constraints(m))?
        .iter()
        .map(|v| QsoTensor::from_coords(m, v))
        .collect::<Result<Vec<_>>>()?;
    sort_operators(&mut found);
    Ok(found)
}

/// Vertices of the set of stochastic `T` with `(T + T')/2 = A`.
pub fn solution_vertices(a: &SymMatrix) -> Result<Vec<RowSumMatrix>> {
    let m = a.dim();
    enumerate_vertices(&solution_polytope(a))?
        .into_iter()
        .map(|v| RowSumMatrix::with_row_sum(v.chunks(m).map(<[Rational]>::to_vec).collect(), 1))
        .collect()
}

/// Unordered triples `{A, B, C}` (repetition allowed) from `extremes` with
/// `A + B + C = E`.
pub fn extreme_triples(extremes: &[SymMatrix]) -> Vec<[SymMatrix; 3]> {
    let Some(m) = extremes.first().map(SymMatrix::dim) else {
        return Vec::new();
    };
    let ones = SymMatrix::ones(m);
    let n = extremes.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a..n {
            let Ok(ab) = extremes[a].add(&extremes[b]) else {
                continue;
            };
            for c in &extremes[b..] {
                if ab.add(c).is_ok_and(|s| s == ones) {
                    out.push([extremes[a].clone(), extremes[b].clone(), c.clone()]);
                }
            }
        }
    }
    out
}

/// Unordered triples `{M, X, Y}` with `X, Y` from `extremes` and
/// `M + X + Y = E`, `M` being the half-off-diagonal matrix.
pub fn half_matrix_triples(extremes: &[SymMatrix]) -> Vec<[SymMatrix; 3]> {
    let Some(m) = extremes.first().map(SymMatrix::dim) else {
        return Vec::new();
    };
    let half = SymMatrix::half_off_diagonal(m);
    let Ok(rest) = SymMatrix::ones(m).sub(&half) else {
        return Vec::new();
    };
    let n = extremes.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in &extremes[a..] {
            if extremes[a].add(b).is_ok_and(|s| s == rest) {
                out.push([half.clone(), extremes[a].clone(), b.clone()]);
            }
        }
    }
    out
}

/// `(all-extreme triples, triples containing M)` summing to `E`.
pub fn count_triples(extremes: &[SymMatrix]) -> (usize, usize) {
    (
        extreme_triples(extremes).len(),
        half_matrix_triples(extremes).len(),
    )
}

/// Every ordering of every counted triple as an operator, deduplicated and sorted.
pub fn triple_operators(extremes: &[SymMatrix]) -> Vec<QsoTensor> {
    let mut out: Vec<QsoTensor> = extreme_triples(extremes)
        .into_iter()
        .chain(half_matrix_triples(extremes))
        .flat_map(|triple| {
            Permutation::all(3).into_iter().map(move |p| {
                QsoTensor::new((0..3).map(|k| triple[p.image(k)].clone()).collect())
                    .expect("triple sums to E")
            })
        })
        .collect();
    sort_operators(&mut out);
    out
}

/// Number of slices of `v` that are extreme points of `U_1`.
pub fn extreme_slice_count(v: &QsoTensor) -> Result<usize> {
    let system = u1_constraints(v.dim());
    let mut count = 0;
    for a in v.slices() {
        if is_extreme(&PolytopePoint::from_u1(a), &system)? {
            count += 1;
        }
    }
    Ok(count)
}

/// For a doubly stochastic operator with `m = 3`, checks that it is extreme
/// in `B` exactly when at least two of its slices are extreme in `U_1`.
pub fn two_extreme_slices_criterion(v: &QsoTensor) -> Result<bool> {
    if v.dim() != 3 {
        return Err(Error::Precondition(format!(
            "the two-slice criterion applies to m = 3, got m = {}",
            v.dim()
        )));
    }
    if let Err(e) = check_dsqo(v) {
        return Err(Error::Precondition(format!(
            "operator is not doubly stochastic: {e}"
        )));
    }
    let extreme = is_extreme(&PolytopePoint::from_operator(v), &b_constraints(3))?;
    Ok(extreme == (extreme_slice_count(v)? >= 2))
}

/// Either every row of `a` sums to one, or some principal block of order
/// `m - 1` is saturated (sums to `m - 1`).
pub fn stochastic_or_saturated_minor(a: &SymMatrix) -> bool {
    let m = a.dim();
    if a.is_stochastic() {
        return true;
    }
    let target = rational::int(m as i64 - 1);
    SubsetMask::all(m)
        .iter()
        .filter(|alpha| alpha.len() + 1 == m)
        .any(|alpha| a.subset_sum(alpha) == target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn r(pairs: &[(i64, i64)]) -> Vec<Rational> {
        pairs.iter().map(|&(n, d)| frac(n, d)).collect()
    }

    #[test]
    fn u1_system_shape() {
        let s = u1_constraints(2);
        assert_eq!(s.dimension(), 3);
        assert_eq!(s.inequalities().len(), 3 + 2);
        assert_eq!(s.equalities().len(), 1);
        let s = u1_constraints(3);
        assert_eq!(s.dimension(), 6);
        assert_eq!(s.inequalities().len(), 6 + 6);
        assert_eq!(b_constraints(3).dimension(), 18);
    }

    #[test]
    fn extreme_examples() {
        let s = u1_constraints(2);
        let a = PolytopePoint::new(r(&[(1, 1), (1, 2), (0, 1)]), Provenance::U1 { m: 2 });
        assert!(is_extreme(&a, &s).unwrap());
        let m3 = PolytopePoint::from_u1(&SymMatrix::half_off_diagonal(3));
        assert!(!is_extreme(&m3, &u1_constraints(3)).unwrap());
        let center = PolytopePoint::from_u1(&SymMatrix::ones(3).scaled(&frac(1, 3)).unwrap());
        assert!(!is_extreme(&center, &u1_constraints(3)).unwrap());
        let outside = PolytopePoint::new(r(&[(2, 1), (0, 1), (0, 1)]), Provenance::U1 { m: 2 });
        assert!(matches!(
            is_extreme(&outside, &s),
            Err(Error::InfeasiblePoint(_))
        ));
    }

    #[test]
    fn m2_extremes_are_the_four_grid_matrices() {
        let list = enumerate_extreme_u1(2).unwrap();
        let expected: Vec<SymMatrix> = [
            [(0, 1), (1, 2), (1, 1)],
            [(0, 1), (1, 1), (0, 1)],
            [(1, 1), (0, 1), (1, 1)],
            [(1, 1), (1, 2), (0, 1)],
        ]
        .iter()
        .map(|u| SymMatrix::from_upper(2, &r(u)).unwrap())
        .collect();
        assert_eq!(list, expected);
        assert_eq!(enumerate_extreme_u1_oracle(2).unwrap(), expected);
    }

    #[test]
    fn grid_cap() {
        assert!(enumerate_extreme_u1(1).is_err());
        assert!(enumerate_extreme_u1(5).is_err());
        assert!(matches!(enumerate_extreme_b(4), Err(Error::Unsupported(_))));
    }

    #[test]
    fn m3_counts() {
        let list = enumerate_extreme_u1(3).unwrap();
        assert_eq!(list.len(), 25);
        assert!(!list.contains(&SymMatrix::half_off_diagonal(3)));
        assert_eq!(count_triples(&list), (31, 6));
    }

    #[test]
    fn b_for_m2_matches_oracle() {
        let grid = enumerate_extreme_b(2).unwrap();
        assert_eq!(grid, enumerate_extreme_b_oracle(2).unwrap());
        assert!(!grid.is_empty());
    }

    #[test]
    fn half_splits_count() {
        assert_eq!(half_splits(2).len(), 3);
        assert_eq!(half_splits(3).len(), 6);
    }

    #[test]
    fn mixed_radix_decoding() {
        assert_eq!(mixed_radix(5, &[2, 3]), vec![1, 2]);
        assert_eq!(mixed_radix(0, &[2, 3, 3]), vec![0, 0, 0]);
    }

    #[test]
    fn dichotomy_on_examples() {
        assert!(stochastic_or_saturated_minor(&SymMatrix::identity(3)));
        let corner = SymMatrix::from_i64_ratios(&[&[(1, 1), (1, 2)], &[(1, 2), (0, 1)]]).unwrap();
        assert!(stochastic_or_saturated_minor(&corner));
        let neither = SymMatrix::from_i64_ratios(&[
            &[(1, 2), (0, 1), (0, 1)],
            &[(0, 1), (1, 2), (0, 1)],
            &[(0, 1), (0, 1), (2, 1)],
        ])
        .unwrap();
        assert!(!stochastic_or_saturated_minor(&neither));
    }

    #[test]
    fn criterion_needs_m3_member() {
        assert!(two_extreme_slices_criterion(&QsoTensor::identity(2)).is_err());
        let uniform =
            QsoTensor::new(vec![SymMatrix::ones(3).scaled(&frac(1, 3)).unwrap(); 3]).unwrap();
        assert!(two_extreme_slices_criterion(&uniform).unwrap());
        assert_eq!(extreme_slice_count(&uniform).unwrap(), 0);
    }
}
