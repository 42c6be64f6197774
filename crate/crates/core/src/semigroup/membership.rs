//! Reachability tables: which points of a box are nonnegative integer
//! combinations of a fixed list of generators.

use crate::error::{Error, Result};

pub const DEFAULT_CELL_CAP: u64 = 100_000_000;

/// Cell cap from `VALSEM_CELL_CAP`, falling back to [`DEFAULT_CELL_CAP`].
pub fn cell_cap_from_env() -> u64 {
    std::env::var("VALSEM_CELL_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CELL_CAP)
}

/// Bitmap over `[0, bound]` (inclusive, row-major, last coordinate fastest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachTable {
    bound: Vec<u64>,
    strides: Vec<usize>,
    bits: Vec<u64>,
}

pub fn cell_count(bound: &[u64]) -> u128 {
    bound.iter().map(|&b| b as u128 + 1).product()
}

impl ReachTable {
    /// Every generator must be nonzero; that makes each cell depend only on
    /// cells earlier in row-major order.
    pub fn build(generators: &[Vec<u64>], bound: &[u64], cap: u64) -> Result<Self> {
        let r = bound.len();
        let cells = cell_count(bound);
        if cells > cap as u128 {
            return Err(Error::BoxTooLarge { cells, cap });
        }
        let cells = cells as usize;
        let mut strides = vec![1usize; r];
        for i in (0..r.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (bound[i + 1] as usize + 1);
        }
        // Generators that fit in the box, with their linear offsets.
        let gens: Vec<(&[u64], usize)> = generators
            .iter()
            .filter(|g| g.iter().zip(bound).all(|(x, b)| x <= b))
            .map(|g| {
                assert!(g.iter().any(|&x| x > 0), "zero generator");
                let off = g.iter().zip(&strides).map(|(&x, &s)| x as usize * s).sum();
                (g.as_slice(), off)
            })
            .collect();

        let mut table = ReachTable { bound: bound.to_vec(), strides, bits: vec![0; cells.div_ceil(64)] };
        table.set(0);
        let mut coord = vec![0u64; r];
        for idx in 1..cells {
            increment(&mut coord, bound);
            let hit = gens.iter().any(|&(g, off)| {
                g.iter().zip(&coord).all(|(x, c)| x <= c) && table.get(idx - off)
            });
            if hit {
                table.set(idx);
            }
        }
        Ok(table)
    }

    pub fn bound(&self) -> &[u64] {
        &self.bound
    }

    /// True when `[0, m]` lies inside this table.
    pub fn covers(&self, m: &[u64]) -> bool {
        m.len() == self.bound.len() && m.iter().zip(&self.bound).all(|(x, b)| x <= b)
    }

    /// Membership of `m`, which must be covered.
    pub fn contains(&self, m: &[u64]) -> bool {
        debug_assert!(self.covers(m));
        self.get(self.index(m))
    }

    /// Membership of `m - g`, false when it has a negative coordinate.
    pub fn contains_difference(&self, m: &[u64], g: &[u64]) -> bool {
        if m.iter().zip(g).any(|(a, b)| a < b) {
            return false;
        }
        let d: Vec<u64> = m.iter().zip(g).map(|(a, b)| a - b).collect();
        self.contains(&d)
    }

    /// Number of members in the box.
    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Members in row-major order.
    pub fn members(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut coord = vec![0u64; self.bound.len()];
        let cells = cell_count(&self.bound) as usize;
        for idx in 0..cells {
            if idx > 0 {
                increment(&mut coord, &self.bound);
            }
            if self.get(idx) {
                out.push(coord.clone());
            }
        }
        out
    }

    /// Whether the two tables agree on the common box `[0, bound]`.
    pub fn agrees_on(&self, other: &ReachTable, bound: &[u64]) -> bool {
        debug_assert!(self.covers(bound) && other.covers(bound));
        let mut coord = vec![0u64; bound.len()];
        let cells = cell_count(bound) as usize;
        for idx in 0..cells {
            if idx > 0 {
                increment(&mut coord, bound);
            }
            if self.contains(&coord) != other.contains(&coord) {
                return false;
            }
        }
        true
    }

    /// Expresses a covered member `m` over `generators` (the list the table
    /// was built from), taking the smallest usable index at every step.
    pub fn witness(&self, generators: &[Vec<u64>], m: &[u64]) -> Option<Vec<u64>> {
        if !self.covers(m) || !self.contains(m) {
            return None;
        }
        let mut lambda = vec![0u64; generators.len()];
        let mut rest = m.to_vec();
        while rest.iter().any(|&x| x > 0) {
            let j = generators.iter().position(|g| self.contains_difference(&rest, g))?;
            for (x, g) in rest.iter_mut().zip(&generators[j]) {
                *x -= g;
            }
            lambda[j] += 1;
        }
        Some(lambda)
    }

    fn index(&self, m: &[u64]) -> usize {
        m.iter().zip(&self.strides).map(|(&x, &s)| x as usize * s).sum()
    }

    fn get(&self, idx: usize) -> bool {
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    fn set(&mut self, idx: usize) {
        self.bits[idx / 64] |= 1 << (idx % 64);
    }
}

/// Row-major successor inside `[0, bound]`.
pub(crate) fn increment(coord: &mut [u64], bound: &[u64]) {
    for i in (0..coord.len()).rev() {
        if coord[i] < bound[i] {
            coord[i] += 1;
            return;
        }
        coord[i] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerical_semigroup() {
        let t = ReachTable::build(&[vec![3], vec![5]], &[12], 1000).unwrap();
        let members: Vec<u64> = t.members().into_iter().map(|v| v[0]).collect();
        assert_eq!(members, vec![0, 3, 5, 6, 8, 9, 10, 11, 12]);
        assert_eq!(t.witness(&[vec![3], vec![5]], &[11]), Some(vec![2, 1]));
        assert_eq!(t.witness(&[vec![3], vec![5]], &[7]), None);
    }

    #[test]
    fn two_dimensional() {
        let gens = vec![vec![1, 2], vec![2, 1]];
        let t = ReachTable::build(&gens, &[4, 4], 1000).unwrap();
        assert!(t.contains(&[3, 3]));
        assert!(t.contains(&[0, 0]));
        assert!(!t.contains(&[1, 1]));
        assert!(!t.contains(&[0, 4]));
        assert_eq!(t.count(), 6); // 0, (1,2), (2,1), (2,4), (3,3), (4,2)
    }

    #[test]
    fn cap_is_enforced() {
        let err = ReachTable::build(&[vec![1, 1]], &[99, 99], 9999).unwrap_err();
        assert_eq!(err, Error::BoxTooLarge { cells: 10000, cap: 9999 });
    }
}
