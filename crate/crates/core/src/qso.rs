//! Quadratic stochastic operators `(Vx)_k = sum_{i,j} p_{ij,k} x_i x_j`.
//!
//! An operator is stored as its coefficient slices `A_k = (p_{ij,k})`, one
//! symmetric matrix per output coordinate. It is doubly stochastic (`Vx` is
//! majorized by `x` on the whole simplex) exactly when every slice lies in
//! `U_1` and the slices add up to the all-ones matrix.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::majorization::{majorizes, SimplexVector};
use crate::matrix_classes::{
    self, check_u1, in_uk, upper_pairs, SubsetMask, SymMatrix, U1Violation,
};
use crate::permutation::Permutation;
use crate::rational::{self, Rational};
use crate::sampling;

/// Coefficients `p_{ij,k}` with `p_{ij,k} = p_{ji,k} >= 0` and `sum_k p_{ij,k} = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QsoJson", into = "QsoJson")]
pub struct QsoTensor {
    slices: Vec<SymMatrix>,
}

impl QsoTensor {
    pub fn new(slices: Vec<SymMatrix>) -> Result<Self> {
        let m = slices.len();
        if m == 0 {
            return Err(Error::invalid("operator", "needs at least one slice"));
        }
        if let Some(k) = slices.iter().position(|s| s.dim() != m) {
            return Err(Error::invalid(
                "operator",
                format!(
                    "slice {} is {}x{}, expected {m}x{m}",
                    k + 1,
                    slices[k].dim(),
                    slices[k].dim()
                ),
            ));
        }
        for (i, j) in upper_pairs(m) {
            let s: Rational = slices.iter().map(|a| a.get(i, j)).sum();
            if s != rational::one() {
                return Err(Error::invalid(
                    "operator",
                    format!(
                        "coefficients p_({},{}),k sum to {s} over k, expected 1",
                        i + 1,
                        j + 1
                    ),
                ));
            }
        }
        Ok(QsoTensor { slices })
    }

    pub fn dim(&self) -> usize {
        self.slices.len()
    }

    pub fn slices(&self) -> &[SymMatrix] {
        &self.slices
    }

    pub fn slice(&self, k: usize) -> &SymMatrix {
        &self.slices[k]
    }

    pub fn p(&self, i: usize, j: usize, k: usize) -> &Rational {
        self.slices[k].get(i, j)
    }

    /// `p_{ij,k} = (d_{ik} + d_{jk}) / 2`, which maps every point to itself.
    pub fn identity(m: usize) -> Self {
        Self::permutation_induced(&Permutation::identity(m))
    }

    /// `p_{ij,k} = (d_{g(i)k} + d_{g(j)k}) / 2`, so that `(Vx)_{g(i)} = x_i`.
    pub fn permutation_induced(g: &Permutation) -> Self {
        let m = g.len();
        let half = rational::half();
        let slices = (0..m)
            .map(|k| {
                let rows = (0..m)
                    .map(|i| {
                        (0..m)
                            .map(|j| {
                                let hits = (g.image(i) == k) as i64 + (g.image(j) == k) as i64;
                                rational::int(hits) * &half
                            })
                            .collect()
                    })
                    .collect();
                SymMatrix::new(rows).expect("symmetric by construction")
            })
            .collect();
        QsoTensor { slices }
    }

    /// Concatenated upper triangles of the slices, slice by slice.
    pub fn to_coords(&self) -> Vec<Rational> {
        self.slices.iter().flat_map(SymMatrix::to_upper).collect()
    }

    pub fn from_coords(m: usize, coords: &[Rational]) -> Result<Self> {
        let per = m * (m + 1) / 2;
        if coords.len() != m * per {
            return Err(Error::DimensionMismatch {
                expected: m * per,
                found: coords.len(),
            });
        }
        let slices = coords
            .chunks(per)
            .map(|c| SymMatrix::from_upper(m, c))
            .collect::<Result<Vec<_>>>()?;
        QsoTensor::new(slices)
    }
}

impl fmt::Debug for QsoTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, s) in self.slices.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{s:?}")?;
        }
        f.write_str(")")
    }
}

/// Wire form: `{"m": 3, "slices": [[["p11","p12","p13"],["p22","p23"],["p33"]], ...]}`.
#[derive(Serialize, Deserialize)]
struct QsoJson {
    m: usize,
    slices: Vec<Vec<Vec<String>>>,
}

impl TryFrom<QsoJson> for QsoTensor {
    type Error = Error;
    fn try_from(raw: QsoJson) -> Result<Self> {
        let m = raw.m;
        if raw.slices.len() != m {
            return Err(Error::invalid(
                "operator",
                format!("expected {m} slices, found {}", raw.slices.len()),
            ));
        }
        let mut slices = Vec::with_capacity(m);
        for (k, slice) in raw.slices.iter().enumerate() {
            if slice.len() != m {
                return Err(Error::invalid(
                    "operator",
                    format!("slice {} has {} rows, expected {m}", k + 1, slice.len()),
                ));
            }
            let mut upper = Vec::with_capacity(m * (m + 1) / 2);
            for (i, row) in slice.iter().enumerate() {
                if row.len() != m - i {
                    return Err(Error::invalid(
                        "operator",
                        format!(
                            "slice {} row {} has {} entries, expected {} (upper triangle)",
                            k + 1,
                            i + 1,
                            row.len(),
                            m - i
                        ),
                    ));
                }
                for s in row {
                    upper.push(rational::parse(s)?);
                }
            }
            let a = SymMatrix::from_upper(m, &upper).map_err(|e| match e {
                Error::Invalid { detail, .. } => {
                    Error::invalid("operator", format!("slice {}: {detail}", k + 1))
                }
                other => other,
            })?;
            slices.push(a);
        }
        QsoTensor::new(slices)
    }
}

impl From<QsoTensor> for QsoJson {
    fn from(v: QsoTensor) -> Self {
        let m = v.dim();
        QsoJson {
            m,
            slices: v
                .slices
                .iter()
                .map(|a| {
                    (0..m)
                        .map(|i| (i..m).map(|j| rational::format(a.get(i, j))).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

/// `Vx`; stays on the simplex because the coefficients sum to one over `k`.
pub fn apply(v: &QsoTensor, x: &SimplexVector) -> Result<SimplexVector> {
    if x.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: x.dim(),
        });
    }
    let coords = v
        .slices
        .iter()
        .map(|a| matrix_classes::quadratic_form(a, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(SimplexVector::new(coords).expect("a stochastic operator preserves the simplex"))
}

/// Why an operator is not doubly stochastic. Slice and entry indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DsqoViolation {
    SliceNotInU1 {
        slice: usize,
        violation: U1Violation,
    },
    SliceSumNotOne {
        i: usize,
        j: usize,
        #[serde(with = "rational::text")]
        sum: Rational,
    },
}

impl DsqoViolation {
    /// A point `x` with `Vx` not majorized by `x`, read off the certificate.
    pub fn counterexample(&self) -> Option<SimplexVector> {
        match self {
            DsqoViolation::SliceNotInU1 { violation, .. } => Some(violation.witness_point()),
            DsqoViolation::SliceSumNotOne { .. } => None,
        }
    }
}

impl fmt::Display for DsqoViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DsqoViolation::SliceNotInU1 { slice, violation } => {
                write!(f, "slice {slice} is not in U_1: {violation}")
            }
            DsqoViolation::SliceSumNotOne { i, j, sum } => {
                write!(f, "slices sum to {sum} at entry ({i},{j}), expected 1")
            }
        }
    }
}

/// Exact doubly-stochasticity test: every slice in `U_1` and `sum_k A_k = E`.
pub fn check_dsqo(v: &QsoTensor) -> std::result::Result<(), DsqoViolation> {
    let m = v.dim();
    for (i, j) in upper_pairs(m) {
        let sum: Rational = v.slices.iter().map(|a| a.get(i, j)).sum();
        if sum != rational::one() {
            return Err(DsqoViolation::SliceSumNotOne {
                i: i + 1,
                j: j + 1,
                sum,
            });
        }
    }
    for (k, a) in v.slices.iter().enumerate() {
        if let Err(violation) = check_u1(a) {
            return Err(DsqoViolation::SliceNotInU1 {
                slice: k + 1,
                violation,
            });
        }
    }
    Ok(())
}

pub fn is_dsqo(v: &QsoTensor) -> bool {
    check_dsqo(v).is_ok()
}

/// Outcome of one necessary condition, with the first failing instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition<W> {
    pub passed: bool,
    pub witness: Option<W>,
}

impl<W> Condition<W> {
    fn from_first_failure(w: Option<W>) -> Self {
        Condition {
            passed: w.is_none(),
            witness: w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceTotal {
    pub slice: usize,
    #[serde(with = "rational::text")]
    pub sum: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowHalf {
    pub slice: usize,
    pub row: usize,
    #[serde(with = "rational::text")]
    pub sum: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetExcess {
    pub slice: usize,
    pub subset: SubsetMask,
    #[serde(with = "rational::text")]
    pub sum: Rational,
}

/// The three coefficient conditions every doubly stochastic operator satisfies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecessaryReport {
    /// `sum_{i,j} p_{ij,k} = m` for every `k`.
    pub slice_totals: Condition<SliceTotal>,
    /// `sum_j p_{ij,k} >= 1/2` for every `i, k`.
    pub row_sums: Condition<RowHalf>,
    /// `sum_{i,j in alpha} p_{ij,k} <= |alpha|` for every `alpha, k`.
    pub subset_sums: Condition<SubsetExcess>,
}

impl NecessaryReport {
    pub fn all_passed(&self) -> bool {
        self.slice_totals.passed && self.row_sums.passed && self.subset_sums.passed
    }
}

pub fn check_necessary_conditions(v: &QsoTensor) -> NecessaryReport {
    let m = v.dim();
    let target = rational::int(m as i64);
    let half = rational::half();

    let totals = v.slices.iter().enumerate().find_map(|(k, a)| {
        let sum = a.total();
        (sum != target).then(|| SliceTotal { slice: k + 1, sum })
    });

    let rows = v.slices.iter().enumerate().find_map(|(k, a)| {
        a.row_sums()
            .into_iter()
            .enumerate()
            .find(|(_, s)| *s < half)
            .map(|(i, sum)| RowHalf {
                slice: k + 1,
                row: i + 1,
                sum,
            })
    });

    let subsets = SubsetMask::all(m);
    let excess = v.slices.iter().enumerate().find_map(|(k, a)| {
        subsets.iter().find_map(|alpha| {
            let sum = a.subset_sum(alpha);
            (sum > rational::int(alpha.len() as i64)).then(|| SubsetExcess {
                slice: k + 1,
                subset: *alpha,
                sum,
            })
        })
    });

    NecessaryReport {
        slice_totals: Condition::from_first_failure(totals),
        row_sums: Condition::from_first_failure(rows),
        subset_sums: Condition::from_first_failure(excess),
    }
}

/// Searches for `x` with `Vx` not majorized by `x`: first over the boundary
/// battery (vertices, pair midpoints, centre), then over `trials` random
/// points with denominator 720 drawn from `seed`.
pub fn majorization_witness(v: &QsoTensor, trials: usize, seed: u64) -> Option<SimplexVector> {
    majorization_witness_with(v, trials, seed, sampling::DEFAULT_DENOMINATOR)
}

pub fn majorization_witness_with(
    v: &QsoTensor,
    trials: usize,
    seed: u64,
    denominator: u32,
) -> Option<SimplexVector> {
    let m = v.dim();
    let fails = |x: &SimplexVector| {
        let y = apply(v, x).expect("dimensions agree");
        !majorizes(&y, x).expect("dimensions agree")
    };
    if let Some(x) = sampling::boundary_battery(m).into_iter().find(|x| fails(x)) {
        return Some(x);
    }
    let mut rng = sampling::seeded(seed);
    (0..trials)
        .map(|_| sampling::simplex_point(&mut rng, m, denominator))
        .find(|x| fails(x))
}

/// Extends `A_1..A_p` (each in `U_1`, their sum in `U_p`, `p < m`) to a
/// doubly stochastic operator by spreading `E - sum A_i` evenly over the
/// remaining `m - p` slices. For `p = 1` this is `A_i = (E - A_1)/(m - 1)`.
pub fn complete_to_dsqo(prefix: &[SymMatrix], m: usize) -> Result<QsoTensor> {
    let p = prefix.len();
    if p == 0 || p >= m {
        return Err(Error::Precondition(format!(
            "need between 1 and {} prefix slices for m = {m}, got {p}",
            m.saturating_sub(1)
        )));
    }
    if let Some(k) = prefix.iter().position(|a| a.dim() != m) {
        return Err(Error::Precondition(format!(
            "prefix slice {} is {}x{}, expected {m}x{m}",
            k + 1,
            prefix[k].dim(),
            prefix[k].dim()
        )));
    }
    for (k, a) in prefix.iter().enumerate() {
        if let Err(v) = check_u1(a) {
            return Err(Error::Precondition(format!(
                "prefix slice {} is not in U_1: {v}",
                k + 1
            )));
        }
    }
    let mut sum = prefix[0].clone();
    for a in &prefix[1..] {
        sum = sum.add(a)?;
    }
    if p > 1 && in_uk(&sum, p)?.is_none() {
        return Err(Error::Precondition(format!(
            "sum of the {p} prefix slices is not in U_{p}"
        )));
    }
    let rest = sum
        .complement()?
        .scaled(&rational::frac(1, (m - p) as i64))?;
    let mut slices = prefix.to_vec();
    slices.extend(std::iter::repeat_n(rest, m - p));
    QsoTensor::new(slices)
}

/// Reorders the slices: slice `k` of the result is slice `pi(k)` of `v`.
pub fn permute_qso(v: &QsoTensor, pi: &Permutation) -> Result<QsoTensor> {
    if pi.len() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: pi.len(),
        });
    }
    Ok(QsoTensor {
        slices: (0..v.dim())
            .map(|k| v.slices[pi.image(k)].clone())
            .collect(),
    })
}

/// Sum of all slices; equals `E` for every operator.
pub fn slice_sum(v: &QsoTensor) -> SymMatrix {
    let mut acc = SymMatrix::new(vec![vec![Rational::zero(); v.dim()]; v.dim()])
        .expect("zero matrix is valid");
    for a in &v.slices {
        acc = acc.add(a).expect("same dimension");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    pub(crate) fn example_operator() -> QsoTensor {
        let h = (1, 2);
        let z = (0, 1);
        let o = (1, 1);
        QsoTensor::new(vec![
            SymMatrix::from_i64_ratios(&[&[z, h, h], &[h, z, h], &[h, h, z]]).unwrap(),
            SymMatrix::from_i64_ratios(&[&[z, z, h], &[z, o, z], &[h, z, o]]).unwrap(),
            SymMatrix::from_i64_ratios(&[&[o, h, z], &[h, z, h], &[z, h, z]]).unwrap(),
        ])
        .unwrap()
    }

    fn non_member() -> QsoTensor {
        QsoTensor::new(vec![
            SymMatrix::from_i64_ratios(&[&[(1, 1), (1, 1)], &[(1, 1), (0, 1)]]).unwrap(),
            SymMatrix::from_i64_ratios(&[&[(0, 1), (0, 1)], &[(0, 1), (1, 1)]]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn example_operator_values() {
        let v = example_operator();
        assert_eq!(
            apply(&v, &SimplexVector::vertex(3, 0)).unwrap(),
            SimplexVector::vertex(3, 2)
        );
        // x1' = x1x2 + x1x3 + x2x3 at (1/2, 1/3, 1/6)
        let x = SimplexVector::new(vec![frac(1, 2), frac(1, 3), frac(1, 6)]).unwrap();
        let y = apply(&v, &x).unwrap();
        assert_eq!(y.coords()[0], frac(1, 6) + frac(1, 12) + frac(1, 18));
        assert_eq!(
            apply(&v, &SimplexVector::center(3)).unwrap(),
            SimplexVector::center(3)
        );
    }

    #[test]
    fn identity_operator_fixes_points() {
        let v = QsoTensor::identity(4);
        let x =
            SimplexVector::new(vec![frac(1, 10), frac(2, 10), frac(3, 10), frac(4, 10)]).unwrap();
        assert_eq!(apply(&v, &x).unwrap(), x);
        assert!(is_dsqo(&v));
        // Hand oracle: slice k has a_kk = 1, a_kj = 1/2 off the diagonal in row/column k.
        let a = v.slice(1);
        assert_eq!(a.get(1, 1), &int(1));
        assert_eq!(a.get(1, 3), &frac(1, 2));
        assert_eq!(a.get(0, 2), &int(0));
    }

    #[test]
    fn membership_examples() {
        assert_eq!(check_dsqo(&example_operator()), Ok(()));
        match check_dsqo(&non_member()) {
            Err(DsqoViolation::SliceNotInU1 {
                slice: 1,
                violation,
            }) => {
                let x = violation.witness_point();
                let y = apply(&non_member(), &x).unwrap();
                assert!(!majorizes(&y, &x).unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn necessary_conditions() {
        assert!(check_necessary_conditions(&example_operator()).all_passed());
        let r = check_necessary_conditions(&non_member());
        assert!(!r.slice_totals.passed);
        assert_eq!(r.slice_totals.witness.as_ref().unwrap().sum, int(3));
        assert!(!r.subset_sums.passed);
        // Row 1 of slice 2 is zero.
        let row = r.row_sums.witness.unwrap();
        assert_eq!((row.slice, row.row, row.sum), (2, 1, int(0)));
    }

    #[test]
    fn witness_search() {
        assert_eq!(majorization_witness(&example_operator(), 1000, 0), None);
        let x = majorization_witness(&non_member(), 10, 0).unwrap();
        let y = apply(&non_member(), &x).unwrap();
        assert!(!majorizes(&y, &x).unwrap());
        // (1/2, 1/2) maps to (3/4, 1/4) and is found in the fixed battery.
        assert_eq!(x, SimplexVector::center(2));
        assert_eq!(y.coords(), &[frac(3, 4), frac(1, 4)]);
        for g in Permutation::all(3) {
            assert_eq!(
                majorization_witness(&QsoTensor::permutation_induced(&g), 200, 3),
                None
            );
        }
    }

    #[test]
    fn completion_examples() {
        let m3 = SymMatrix::half_off_diagonal(3);
        let v = complete_to_dsqo(std::slice::from_ref(&m3), 3).unwrap();
        let expected = SymMatrix::from_i64_ratios(&[
            &[(1, 2), (1, 4), (1, 4)],
            &[(1, 4), (1, 2), (1, 4)],
            &[(1, 4), (1, 4), (1, 2)],
        ])
        .unwrap();
        assert_eq!(v.slice(1), &expected);
        assert_eq!(v.slice(2), &expected);
        assert!(is_dsqo(&v));

        let v = complete_to_dsqo(&[SymMatrix::identity(2)], 2).unwrap();
        assert_eq!(
            v.slice(1),
            &SymMatrix::from_i64_ratios(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]).unwrap()
        );
        assert!(is_dsqo(&v));

        for m in 2..6 {
            let uniform = SymMatrix::ones(m).scaled(&frac(1, m as i64)).unwrap();
            let v = complete_to_dsqo(std::slice::from_ref(&uniform), m).unwrap();
            assert!(v.slices().iter().all(|s| *s == uniform));
            assert!(is_dsqo(&v));
        }
    }

    #[test]
    fn completion_preconditions() {
        let id = SymMatrix::identity(3);
        assert!(complete_to_dsqo(&[], 3).is_err());
        assert!(complete_to_dsqo(&[id.clone(), id.clone(), id.clone()], 3).is_err());
        // I + I is not in U_2.
        let err = complete_to_dsqo(&[id.clone(), id.clone()], 3).unwrap_err();
        assert!(err.to_string().contains("U_2"), "{err}");
        let big = SymMatrix::identity(3).scaled(&int(2)).unwrap();
        assert!(complete_to_dsqo(&[big], 3)
            .unwrap_err()
            .to_string()
            .contains("slice 1"));
        // Two slices from a T_2 member split evenly.
        let half_e_minus_i = SymMatrix::half_off_diagonal(3);
        let v = complete_to_dsqo(&[half_e_minus_i.clone(), half_e_minus_i], 3).unwrap();
        assert_eq!(v.slice(2), &SymMatrix::identity(3));
        assert!(is_dsqo(&v));
    }

    #[test]
    fn slice_permutation() {
        let v = example_operator();
        assert_eq!(permute_qso(&v, &Permutation::identity(3)).unwrap(), v);
        for pi in Permutation::all(3) {
            let w = permute_qso(&v, &pi).unwrap();
            assert!(is_dsqo(&w));
            assert_eq!(permute_qso(&w, &pi.inverse()).unwrap(), v);
        }
        assert!(permute_qso(&v, &Permutation::identity(2)).is_err());
    }

    #[test]
    fn json_upper_triangular() {
        let v = example_operator();
        let text = serde_json::to_string(&v).unwrap();
        assert!(
            text.starts_with(r#"{"m":3,"slices":[[["0","1/2","1/2"],["0","1/2"],["0"]]"#),
            "{text}"
        );
        let back: QsoTensor = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);

        let bad = r#"{"m":2,"slices":[[["1","1"],["0"]],[["0","0"],["0"]]]}"#;
        let err = serde_json::from_str::<QsoTensor>(bad)
            .unwrap_err()
            .to_string();
        assert!(err.contains("p_(2,2),k sum to 0"), "{err}");
        let ragged = r#"{"m":2,"slices":[[["1","1","0"],["0"]],[["0","0"],["1"]]]}"#;
        assert!(serde_json::from_str::<QsoTensor>(ragged).is_err());
    }

    #[test]
    fn slices_sum_to_ones() {
        assert_eq!(slice_sum(&example_operator()), SymMatrix::ones(3));
    }
}
