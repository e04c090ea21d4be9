use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use super::config::ConfigurationMatrix;
use super::linalg::det;
use crate::algebra::matrix::k_subsets;
use crate::error::{Error, Result};

/// Largest ground set for subset scans.
pub const MAX_GROUND_SET: usize = 20;

/// A representable matroid given by its bases, as bit masks over `E = {0..n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<u64>,
}

fn mask(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &e| m | 1 << e)
}

/// Elements of a mask in increasing order.
pub fn elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|e| mask >> e & 1 == 1).collect()
}

impl Matroid {
    /// Bases are the `r`-subsets with a nonzero maximal minor.
    pub fn from_columns(cfg: &ConfigurationMatrix) -> Result<Self> {
        let n = cfg.ground_size();
        if n > MAX_GROUND_SET {
            return Err(Error::OutOfRange {
                what: "ground set size",
                value: n,
                range: format!("1..={MAX_GROUND_SET}"),
            });
        }
        let bases = k_subsets(n, cfg.rank())
            .into_iter()
            .filter(|s| !det(&cfg.restrict(s)).is_zero())
            .map(|s| mask(&s))
            .collect();
        Ok(Matroid {
            n,
            rank: cfg.rank(),
            bases,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[u64] {
        &self.bases
    }

    /// Sorted 0-based bases.
    pub fn basis_sets(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<_> = self.bases.iter().map(|&b| elements(b)).collect();
        v.sort();
        v
    }

    /// `rank(S) = max over bases B of |S & B|`.
    pub fn rank_of(&self, s: u64) -> usize {
        self.bases.iter().map(|b| (b & s).count_ones() as usize).max().unwrap_or(0)
    }

    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1 << self.n) - 1
        }
    }

    /// A proper nonempty `S` with `rank(S) + rank(E - S) = rank(E)`, if any.
    /// Splits are enumerated with element 0 in `S`.
    pub fn separator(&self) -> Option<u64> {
        let full = self.full();
        (0..1u64 << (self.n - 1))
            .map(|rest| 1 | rest << 1)
            .filter(|&s| s != full)
            .find(|&s| self.rank_of(s) + self.rank_of(full & !s) == self.rank)
    }

    /// Checks basis exchange on every ordered pair of bases.
    pub fn satisfies_exchange(&self) -> bool {
        self.bases.iter().all(|&a| {
            self.bases.iter().all(|&b| {
                elements(a & !b).into_iter().all(|x| {
                    elements(b & !a)
                        .into_iter()
                        .any(|y| self.bases.contains(&(a & !(1 << x) | 1 << y)))
                })
            })
        })
    }
}

/// No separator exists. A one-element matroid is connected.
pub fn is_connected(m: &Matroid) -> bool {
    m.ground_size() <= 1 || m.separator().is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn matroid(rows: &[Vec<i64>]) -> Matroid {
        Matroid::from_columns(&ConfigurationMatrix::from_i64(rows).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        let t = matroid(&[vec![1, -1, 0], vec![0, 1, -1]]);
        assert_eq!(t.basis_sets(), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(is_connected(&t));
        let id = matroid(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(id.basis_sets(), vec![vec![0, 1]]);
        assert!(!is_connected(&id));
        assert_eq!(id.separator(), Some(1));
        let row = matroid(&[vec![1, 1]]);
        assert_eq!(row.basis_sets(), vec![vec![0], vec![1]]);
        assert!(is_connected(&row));
        assert!(is_connected(&matroid(&[vec![3]])));
        // a loop separates
        assert!(!is_connected(&matroid(&[vec![1, 0]])));
        assert!(t.satisfies_exchange() && id.satisfies_exchange());
    }
}
