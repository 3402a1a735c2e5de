//! Deterministic generation of exact rational test points and matrices.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::majorization::SimplexVector;
use crate::matrix_classes::RowSumMatrix;
use crate::rational::{self, Rational};

/// Default common denominator of sampled simplex points.
pub const DEFAULT_DENOMINATOR: u32 = 720;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random composition of `denominator` into `m` nonnegative parts, divided by `denominator`.
pub fn simplex_point<R: Rng>(rng: &mut R, m: usize, denominator: u32) -> SimplexVector {
    let mut cuts: Vec<u32> = (0..m.saturating_sub(1))
        .map(|_| rng.random_range(0..=denominator))
        .collect();
    cuts.push(0);
    cuts.push(denominator);
    cuts.sort_unstable();
    let d = denominator as i64;
    let coords = cuts
        .windows(2)
        .map(|w| rational::frac((w[1] - w[0]) as i64, d))
        .collect();
    SimplexVector::new(coords).expect("a composition sums to the denominator")
}

/// Fixed probe points: the vertices, the uniform points on every pair, the centre.
pub fn boundary_battery(m: usize) -> Vec<SimplexVector> {
    let mut out: Vec<SimplexVector> = (0..m).map(|i| SimplexVector::vertex(m, i)).collect();
    for i in 0..m {
        for j in i + 1..m {
            out.push(SimplexVector::uniform_on(m, &[i, j]));
        }
    }
    if m > 2 {
        out.push(SimplexVector::center(m));
    }
    out
}

/// A random member of `T_k`: each row is a random nonnegative weight vector
/// scaled to sum `k`, then entries above one are capped and the excess is
/// spread over the other entries in proportion to their remaining room.
pub fn row_sum_matrix<R: Rng>(rng: &mut R, m: usize, k: usize) -> RowSumMatrix {
    assert!(1 <= k && k <= m, "k must lie in 1..=m");
    let rows = (0..m).map(|_| row_with_sum(rng, m, k)).collect();
    RowSumMatrix::with_row_sum(rows, k).expect("generated row is in range")
}

fn row_with_sum<R: Rng>(rng: &mut R, m: usize, k: usize) -> Vec<Rational> {
    // Sparse rows now and then, so boundary cases get exercised too.
    let sparse = rng.random_bool(0.3);
    let mut weights: Vec<i64> = (0..m)
        .map(|_| {
            if sparse && rng.random_bool(0.5) {
                0
            } else {
                rng.random_range(1..=12)
            }
        })
        .collect();
    if weights.iter().all(|&w| w == 0) {
        weights[rng.random_range(0..m)] = 1;
    }
    let total: i64 = weights.iter().sum();
    let kk = rational::int(k as i64);
    let mut row: Vec<Rational> = weights
        .iter()
        .map(|&w| rational::frac(w, total) * &kk)
        .collect();

    let one = rational::one();
    let excess: Rational = row.iter().filter(|t| **t > one).map(|t| t - &one).sum();
    if excess.is_positive() {
        for t in row.iter_mut() {
            if *t > one {
                *t = one.clone();
            }
        }
        // Room left below the cap; it is at least the excess because k <= m.
        let room: Rational = row.iter().map(|t| &one - t).sum();
        let share = excess / room;
        for t in row.iter_mut() {
            let gap = &one - &*t;
            if !gap.is_zero() {
                *t += gap * &share;
            }
        }
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_are_on_the_simplex_and_reproducible() {
        let a: Vec<_> = {
            let mut rng = seeded(7);
            (0..20).map(|_| simplex_point(&mut rng, 4, 720)).collect()
        };
        let b: Vec<_> = {
            let mut rng = seeded(7);
            (0..20).map(|_| simplex_point(&mut rng, 4, 720)).collect()
        };
        assert_eq!(a, b);
        assert_eq!(
            simplex_point(&mut seeded(0), 1, 720),
            SimplexVector::vertex(1, 0)
        );
    }

    #[test]
    fn battery_size() {
        assert_eq!(boundary_battery(2).len(), 3);
        assert_eq!(boundary_battery(3).len(), 7);
    }

    #[test]
    fn generated_matrices_have_the_requested_row_sum() {
        let mut rng = seeded(11);
        for m in 1..6 {
            for k in 1..=m {
                for _ in 0..20 {
                    let t = row_sum_matrix(&mut rng, m, k);
                    assert_eq!(t.row_sum(), k);
                }
            }
        }
    }
}
