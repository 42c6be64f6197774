//! Combinatorial model of a finite sequence of point blow-ups.
//!
//! Centers are numbered by creation order; blowing up center `j` creates the
//! exceptional divisor `E_j`, so vertex `j` of the dual graph is both.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bareiss;
use crate::error::{Error, Result};

/// Position of a blow-up center relative to the divisors existing when it is
/// blown up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CenterKind {
    /// The closed point of the base; always center 1.
    Origin,
    /// A point on exactly one divisor.
    Free(usize),
    /// The intersection point of two divisors, stored with the smaller id first.
    Satellite(usize, usize),
}

impl CenterKind {
    pub fn parents(&self) -> Vec<usize> {
        match *self {
            CenterKind::Origin => Vec::new(),
            CenterKind::Free(a) => vec![a],
            CenterKind::Satellite(a, b) => vec![a, b],
        }
    }

    pub fn satellite(a: usize, b: usize) -> Self {
        CenterKind::Satellite(a.min(b), a.max(b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Center {
    pub id: usize,
    pub kind: CenterKind,
}

impl Center {
    pub fn origin() -> Self {
        Center { id: 1, kind: CenterKind::Origin }
    }

    pub fn free(id: usize, on: usize) -> Self {
        Center { id, kind: CenterKind::Free(on) }
    }

    pub fn satellite(id: usize, a: usize, b: usize) -> Self {
        Center { id, kind: CenterKind::satellite(a, b) }
    }
}

/// Proximity structure, intersection matrix `M`, value matrix `A = -M^{-1}`
/// and dual graph of a modification. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionModel {
    centers: Vec<Center>,
    proximity: Vec<Vec<bool>>,
    intersection: Vec<Vec<i64>>,
    values: Vec<Vec<u64>>,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

/// Outcome of [`ResolutionModel::validate_minimality`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Minimality {
    pub minimal: bool,
    /// Leaves of the point tree that are not marked, i.e. blow-ups that could
    /// be dropped.
    pub offending: Vec<usize>,
}

/// Builds the model, validating the sequence as it goes.
pub fn build_model(centers: &[Center]) -> Result<ResolutionModel> {
    ResolutionModel::new(centers)
}

impl ResolutionModel {
    pub fn new(centers: &[Center]) -> Result<Self> {
        let s = centers.len();
        if s == 0 {
            return Err(Error::InvalidCenter { id: 0, reason: "empty center sequence".into() });
        }

        // Dual graph maintained blow-up by blow-up; satellite legality is
        // checked against it.
        let mut adjacency: Vec<BTreeSet<usize>> = Vec::with_capacity(s);
        let mut normalized = Vec::with_capacity(s);
        for (pos, c) in centers.iter().enumerate() {
            let id = pos + 1;
            if c.id != id {
                return Err(Error::InvalidCenter {
                    id: c.id,
                    reason: format!("ids must be 1..={s} in creation order, expected {id}"),
                });
            }
            let kind = match c.kind {
                CenterKind::Origin if id == 1 => CenterKind::Origin,
                CenterKind::Origin => {
                    return Err(Error::InvalidCenter { id, reason: "only center 1 may be the origin".into() })
                }
                _ if id == 1 => {
                    return Err(Error::InvalidCenter { id, reason: "center 1 must be the origin".into() })
                }
                CenterKind::Free(a) => {
                    check_parent(id, a)?;
                    CenterKind::Free(a)
                }
                CenterKind::Satellite(a, b) => {
                    check_parent(id, a)?;
                    check_parent(id, b)?;
                    if a == b {
                        return Err(Error::IllegalSatellite { id, a, b });
                    }
                    let (a, b) = (a.min(b), a.max(b));
                    if !adjacency[a - 1].contains(&b) {
                        return Err(Error::IllegalSatellite { id, a, b });
                    }
                    CenterKind::Satellite(a, b)
                }
            };
            adjacency.push(BTreeSet::new());
            match kind {
                CenterKind::Origin => {}
                CenterKind::Free(a) => {
                    adjacency[a - 1].insert(id);
                    adjacency[id - 1].insert(a);
                }
                CenterKind::Satellite(a, b) => {
                    adjacency[a - 1].remove(&b);
                    adjacency[b - 1].remove(&a);
                    for p in [a, b] {
                        adjacency[p - 1].insert(id);
                        adjacency[id - 1].insert(p);
                    }
                }
            }
            normalized.push(Center { id, kind });
        }

        let mut proximity = vec![vec![false; s]; s];
        for c in &normalized {
            for p in c.kind.parents() {
                proximity[c.id - 1][p - 1] = true;
            }
        }

        // Strict transforms in terms of total transforms: Q[i][i] = 1 and
        // Q[i][j] = -1 when j is proximate to i. Then M = -Q Q^T.
        let q = |i: usize, j: usize| -> i64 {
            if i == j {
                1
            } else if proximity[j][i] {
                -1
            } else {
                0
            }
        };
        let mut intersection = vec![vec![0i64; s]; s];
        for i in 0..s {
            for j in 0..s {
                intersection[i][j] = -(0..s).map(|k| q(i, k) * q(j, k)).sum::<i64>();
            }
        }

        let negated: Vec<Vec<i64>> =
            intersection.iter().map(|row| row.iter().map(|x| -x).collect()).collect();
        let inverse = bareiss::unimodular_inverse(&negated)
            .map_err(|det| Error::NonUnimodular { det: det.to_string() })?;
        let mut values = vec![vec![0u64; s]; s];
        for (i, row) in inverse.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let v = x.to_u64().ok_or_else(|| Error::Overflow(x.to_string()))?;
                if v == 0 {
                    return Err(Error::Internal(format!("value matrix entry ({},{}) is {x}", i + 1, j + 1)));
                }
                values[i][j] = v;
            }
        }

        let mut edges = Vec::new();
        for i in 0..s {
            for j in i + 1..s {
                match intersection[i][j] {
                    1 => edges.push((i + 1, j + 1)),
                    0 => {}
                    other => {
                        return Err(Error::Internal(format!(
                            "E{}.E{} = {other} for distinct divisors",
                            i + 1,
                            j + 1
                        )))
                    }
                }
            }
        }
        let mut neighbors = vec![Vec::new(); s];
        for &(a, b) in &edges {
            neighbors[a - 1].push(b);
            neighbors[b - 1].push(a);
        }
        for (i, n) in neighbors.iter_mut().enumerate() {
            n.sort_unstable();
            let tracked: Vec<usize> = adjacency[i].iter().copied().collect();
            if *n != tracked {
                return Err(Error::Internal(format!(
                    "adjacency of vertex {} from M is {n:?}, blow-up bookkeeping gives {tracked:?}",
                    i + 1
                )));
            }
        }

        let model = ResolutionModel { centers: normalized, proximity, intersection, values, edges, neighbors };
        if !model.is_tree() {
            return Err(Error::Internal("dual graph is not a tree".into()));
        }
        Ok(model)
    }

    /// Number of centers (and of vertices).
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[Center] {
        &self.centers
    }

    /// `p[j][i]`: center `j+1` is proximate to center `i+1`.
    pub fn proximity(&self) -> &[Vec<bool>] {
        &self.proximity
    }

    pub fn intersection_matrix(&self) -> &[Vec<i64>] {
        &self.intersection
    }

    /// `A[a][g]` is the value at `E_{g+1}` of a curvette at `E_{a+1}`.
    pub fn value_matrix(&self) -> &[Vec<u64>] {
        &self.values
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v - 1].len()
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.len()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.len() {
            Err(Error::VertexOutOfRange { vertex: v, count: self.len() })
        } else {
            Ok(())
        }
    }

    /// Full value vector of the curvette at `alpha`: row `alpha` of `A`.
    pub fn b_vector(&self, alpha: usize) -> Result<&[u64]> {
        self.check_vertex(alpha)?;
        Ok(&self.values[alpha - 1])
    }

    /// `A[alpha][gamma]` with 1-based vertices.
    pub fn value(&self, alpha: usize, gamma: usize) -> u64 {
        self.values[alpha - 1][gamma - 1]
    }

    /// Row `alpha` of `A` restricted to the coordinates in `marked`.
    pub fn projected(&self, alpha: usize, marked: &[usize]) -> Vec<u64> {
        marked.iter().map(|&g| self.value(alpha, g)).collect()
    }

    /// Centers that are the parent of no later center.
    pub fn leaves(&self) -> Vec<usize> {
        let mut is_parent = vec![false; self.len()];
        for c in &self.centers {
            for p in c.kind.parents() {
                is_parent[p - 1] = true;
            }
        }
        (1..=self.len()).filter(|&v| !is_parent[v - 1]).collect()
    }

    /// The model is the minimal resolution of `marked` iff every leaf of the
    /// point tree is marked.
    pub fn validate_minimality(&self, marked: &[usize]) -> Minimality {
        let offending: Vec<usize> = self.leaves().into_iter().filter(|v| !marked.contains(v)).collect();
        Minimality { minimal: offending.is_empty(), offending }
    }

    /// Marked list must be nonempty, in range and free of repeats.
    pub fn check_marked(&self, marked: &[usize]) -> Result<()> {
        if marked.is_empty() {
            return Err(Error::InvalidMarking("no marked vertices".into()));
        }
        let mut seen = BTreeSet::new();
        for &v in marked {
            self.check_vertex(v)?;
            if !seen.insert(v) {
                return Err(Error::InvalidMarking(format!("vertex {v} marked twice")));
            }
        }
        Ok(())
    }

    /// Restriction to the centers needed to create every marked divisor.
    /// Returns the submodel and, for each old vertex, its new id if kept.
    pub fn minimal_submodel(&self, marked: &[usize]) -> Result<(ResolutionModel, Vec<Option<usize>>)> {
        for &v in marked {
            self.check_vertex(v)?;
        }
        let mut keep = vec![false; self.len()];
        let mut stack: Vec<usize> = marked.to_vec();
        while let Some(v) = stack.pop() {
            if !keep[v - 1] {
                keep[v - 1] = true;
                stack.extend(self.centers[v - 1].kind.parents());
            }
        }
        let mut renumber = vec![None; self.len()];
        let mut next = 0;
        for v in 1..=self.len() {
            if keep[v - 1] {
                next += 1;
                renumber[v - 1] = Some(next);
            }
        }
        let map = |p: usize| renumber[p - 1].expect("parents of kept centers are kept");
        let centers: Vec<Center> = self
            .centers
            .iter()
            .filter(|c| keep[c.id - 1])
            .map(|c| Center {
                id: map(c.id),
                kind: match c.kind {
                    CenterKind::Origin => CenterKind::Origin,
                    CenterKind::Free(a) => CenterKind::Free(map(a)),
                    CenterKind::Satellite(a, b) => CenterKind::satellite(map(a), map(b)),
                },
            })
            .collect();
        Ok((ResolutionModel::new(&centers)?, renumber))
    }

    /// Unique path between two vertices of the tree, endpoints included.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        // Parent pointers from a traversal rooted at `to`, then walk up from `from`.
        let s = self.len();
        let mut parent = vec![0usize; s + 1];
        let mut seen = vec![false; s + 1];
        let mut stack = vec![to];
        seen[to] = true;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        let mut out = vec![from];
        let mut v = from;
        while v != to {
            v = parent[v];
            out.push(v);
        }
        out
    }

    fn is_tree(&self) -> bool {
        let s = self.len();
        if self.edges.len() + 1 != s {
            return false;
        }
        let mut seen = vec![false; s + 1];
        let mut stack = vec![1];
        seen[1] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == s
    }
}

fn check_parent(id: usize, parent: usize) -> Result<()> {
    if parent == 0 || parent >= id {
        Err(Error::DanglingParent { id, parent })
    } else {
        Ok(())
    }
}

/// A random legal sequence of `s` centers. Satellites are drawn with
/// probability `satellite_bias` whenever an intersection point exists.
pub fn random_centers<R: Rng + ?Sized>(rng: &mut R, s: usize, satellite_bias: f64) -> Vec<Center> {
    assert!(s >= 1);
    let mut centers = vec![Center::origin()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for id in 2..=s {
        if !edges.is_empty() && rng.gen_bool(satellite_bias) {
            let k = rng.gen_range(0..edges.len());
            let (a, b) = edges.swap_remove(k);
            edges.push((a, id));
            edges.push((b, id));
            centers.push(Center::satellite(id, a, b));
        } else {
            let a = rng.gen_range(1..id);
            edges.push((a, id));
            centers.push(Center::free(id, a));
        }
    }
    centers
}
