use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Permutation of `{0, .., m-1}`, stored as its image vector `g(i) = map[i]`.
/// On the wire it is a 1-based index array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let m = map.len();
        let mut seen = vec![false; m];
        for &g in &map {
            if g >= m || seen[g] {
                return Err(Error::invalid(
                    "permutation",
                    format!("{map:?} is not a permutation of 0..{m}"),
                ));
            }
            seen[g] = true;
        }
        Ok(Permutation(map))
    }

    pub fn from_one_based(map: &[usize]) -> Result<Self> {
        if map.contains(&0) {
            return Err(Error::invalid("permutation", "indices are 1-based"));
        }
        Permutation::new(map.iter().map(|&g| g - 1).collect())
    }

    pub fn identity(m: usize) -> Self {
        Permutation((0..m).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &g) in self.0.iter().enumerate() {
            inv[g] = i;
        }
        Permutation(inv)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|g| g + 1).collect()
    }

    /// All `m!` permutations in lexicographic order.
    pub fn all(m: usize) -> Vec<Permutation> {
        let mut current: Vec<usize> = (0..m).collect();
        let mut out = vec![Permutation(current.clone())];
        while next_permutation(&mut current) {
            out.push(Permutation(current.clone()));
        }
        out
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::from_one_based(&v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.to_one_based()
    }
}
