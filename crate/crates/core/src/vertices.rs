//! Vertex enumeration of bounded polyhedra by the double description method.
//!
//! The equalities are solved first, so the iteration runs in the affine hull
//! parametrisation `x = x0 + N y`. The remaining inequalities are
//! homogenised into a pointed cone `{(t, y) : t*(b - a.x0) - (aN).y >= 0, t >= 0}`
//! whose extreme rays with `t > 0` are the vertices. Rays are kept as primitive
//! integer vectors and adjacency is decided by the combinatorial test on
//! zero sets, which stays exact on degenerate inputs.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::constraints::ConstraintSystem;
use crate::error::{Error, Result};
use crate::linalg::{self, dot};
use crate::rational::{self, Rational};
use crate::simplex;

pub const DEFAULT_DIMENSION_CAP: usize = 20;

/// All vertices of the bounded polyhedron, each exactly once, in
/// lexicographic order of their coordinates.
pub fn enumerate_vertices(system: &ConstraintSystem) -> Result<Vec<Vec<Rational>>> {
    enumerate_vertices_capped(system, DEFAULT_DIMENSION_CAP)
}

pub fn enumerate_vertices_capped(
    system: &ConstraintSystem,
    cap: usize,
) -> Result<Vec<Vec<Rational>>> {
    let dim = system.dimension();
    if dim > cap {
        return Err(Error::DimensionCap {
            dimension: dim,
            cap,
        });
    }
    let (a_eq, b_eq): (Vec<_>, Vec<_>) = system
        .equalities()
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs.clone()))
        .unzip();
    let affine = linalg::solve_affine(&a_eq, &b_eq, dim).ok_or(Error::Empty)?;
    let x0 = &affine.particular;
    let kernel = &affine.kernel;

    if kernel.is_empty() {
        return if system.contains(x0) {
            Ok(vec![x0.clone()])
        } else {
            Err(Error::Empty)
        };
    }

    // Homogenised rows g with g.(t, y) >= 0.
    let n = kernel.len() + 1;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(system.inequalities().len() + 1);
    let mut t_row = vec![BigInt::zero(); n];
    t_row[0] = BigInt::one();
    rows.push(t_row);
    for c in system.inequalities() {
        let mut g = Vec::with_capacity(n);
        g.push(&c.rhs - c.lhs(x0));
        g.extend(kernel.iter().map(|k| -dot(&c.coeffs, k)));
        if g.iter().all(Zero::is_zero) {
            continue;
        }
        rows.push(rational::to_primitive_integers(&g));
    }

    let rays = match extreme_rays(&rows, n) {
        Some(rays) => rays,
        // The cone has a lineality space: the polyhedron contains a line.
        None => {
            return if simplex::feasible(system).is_some() {
                Err(Error::Unbounded)
            } else {
                Err(Error::Empty)
            };
        }
    };

    let mut vertices = Vec::new();
    let mut recession = false;
    for ray in &rays {
        if ray[0].is_zero() {
            recession = true;
            continue;
        }
        let t = Rational::from_integer(ray[0].clone());
        let mut x = x0.clone();
        for (yk, k) in ray[1..].iter().zip(kernel) {
            if yk.is_zero() {
                continue;
            }
            let coef = Rational::from_integer(yk.clone()) / &t;
            for (xi, ki) in x.iter_mut().zip(k) {
                if !ki.is_zero() {
                    *xi += &coef * ki;
                }
            }
        }
        vertices.push(x);
    }
    if vertices.is_empty() {
        return Err(Error::Empty);
    }
    if recession {
        return Err(Error::Unbounded);
    }
    vertices.sort();
    vertices.dedup();
    Ok(vertices)
}

struct Ray {
    coords: Vec<BigInt>,
    zeros: FixedBitSet,
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// Extreme rays of `{z : rows . z >= 0}`; `None` if the cone is not pointed.
fn extreme_rays(rows: &[Vec<BigInt>], n: usize) -> Option<Vec<Vec<BigInt>>> {
    let m = rows.len();

    // Initial simplicial cone from the first n independent rows.
    let mut basis: Vec<usize> = Vec::with_capacity(n);
    let mut basis_rows: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for (i, r) in rows.iter().enumerate() {
        let mut trial = basis_rows.clone();
        trial.push(r.iter().cloned().map(Rational::from_integer).collect());
        if linalg::rank(&trial) == trial.len() {
            basis.push(i);
            basis_rows = trial;
            if basis.len() == n {
                break;
            }
        }
    }
    if basis.len() < n {
        return None;
    }

    // Columns of the inverse: ray j is tight on every basis row except j.
    let mut rays = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = rational::one();
        let sol = linalg::solve_affine(&basis_rows, &e, n).expect("basis rows are independent");
        let coords = rational::to_primitive_integers(&sol.particular);
        let mut zeros = FixedBitSet::with_capacity(m);
        for (k, &bi) in basis.iter().enumerate() {
            if k != j {
                zeros.insert(bi);
            }
        }
        rays.push(Ray { coords, zeros });
    }

    let mut done = FixedBitSet::with_capacity(m);
    for &bi in &basis {
        done.insert(bi);
    }

    for (h, row) in rows.iter().enumerate() {
        if done.contains(h) {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| int_dot(row, &r.coords)).collect();
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();

        if !neg.is_empty() {
            let pairs: Vec<(usize, usize)> = pos
                .iter()
                .flat_map(|&p| neg.iter().map(move |&q| (p, q)))
                .collect();
            let rays_ref = &rays;
            let created: Vec<Ray> = pairs
                .par_iter()
                .filter_map(|&(p, q)| {
                    let mut common = rays_ref[p].zeros.clone();
                    common.intersect_with(&rays_ref[q].zeros);
                    if common.count_ones(..) + 2 < n {
                        return None;
                    }
                    let blocked = rays_ref
                        .iter()
                        .enumerate()
                        .any(|(k, r)| k != p && k != q && common.is_subset(&r.zeros));
                    if blocked {
                        return None;
                    }
                    let a = &values[p];
                    let b = -&values[q];
                    let coords: Vec<BigInt> = rays_ref[q]
                        .coords
                        .iter()
                        .zip(&rays_ref[p].coords)
                        .map(|(xq, xp)| a * xq + &b * xp)
                        .collect();
                    let mut zeros = common;
                    zeros.insert(h);
                    Some(Ray {
                        coords: primitive(coords),
                        zeros,
                    })
                })
                .collect();

            let mut keep = Vec::with_capacity(rays.len() - neg.len() + created.len());
            for (i, mut r) in rays.into_iter().enumerate() {
                if values[i].is_negative() {
                    continue;
                }
                if values[i].is_zero() {
                    r.zeros.insert(h);
                }
                keep.push(r);
            }
            keep.extend(created);
            rays = keep;
        } else {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.insert(h);
                }
            }
        }
        done.insert(h);
    }

    Some(rays.into_iter().map(|r| r.coords).collect())
}
