//! Shape of the dual graph: degrees, dead ends, star vertices, paths, and the
//! set of vertices whose curvettes give the indecomposable values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::resolution::{Minimality, ResolutionModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub adjacency: Vec<Vec<usize>>,
    /// `degree[v-1]` is the number of neighbors of `v`.
    pub degree: Vec<usize>,
    /// Vertices of degree at most one, ascending.
    pub dead_ends: Vec<usize>,
    /// Vertices of degree at least three, ascending.
    pub stars: Vec<usize>,
}

impl DualGraph {
    pub fn b(&self, v: usize) -> usize {
        self.degree[v - 1]
    }

    pub fn is_dead_end(&self, v: usize) -> bool {
        self.degree[v - 1] <= 1
    }
}

pub fn classify(model: &ResolutionModel) -> DualGraph {
    let adjacency: Vec<Vec<usize>> = model.vertices().map(|v| model.neighbors(v).to_vec()).collect();
    let degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let dead_ends = model.vertices().filter(|&v| degree[v - 1] <= 1).collect();
    let stars = model.vertices().filter(|&v| degree[v - 1] >= 3).collect();
    DualGraph { adjacency, degree, dead_ends, stars }
}

/// Unique path from `u` to `v`, endpoints included.
pub fn path(model: &ResolutionModel, u: usize, v: usize) -> Result<Vec<usize>> {
    model.check_vertex(u)?;
    model.check_vertex(v)?;
    Ok(model.path(u, v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HSet {
    pub omega: Vec<usize>,
    pub gamma: Vec<usize>,
    /// For each dead end `rho`, the vertex of `omega` closest to it.
    pub beta_of: BTreeMap<usize, usize>,
    pub h: Vec<usize>,
    pub minimality: Minimality,
}

/// Vertices whose curvette values are the indecomposables of the value
/// semigroup of the valuations at `marked` (for at least two valuations).
///
/// Minimality of the model is reported in the result rather than enforced.
pub fn h_set(model: &ResolutionModel, marked: &[usize]) -> Result<HSet> {
    model.check_marked(marked)?;
    let dead_ends = classify(model).dead_ends;
    let mut out = h_set_with_dead_ends(model, marked, &dead_ends);
    out.minimality = model.validate_minimality(marked);
    Ok(out)
}

/// Same formula with an explicit dead-end set; the curve version counts
/// arrows as edges.
pub fn h_set_with_dead_ends(model: &ResolutionModel, marked: &[usize], dead_ends: &[usize]) -> HSet {
    let paths: Vec<BTreeSet<usize>> = marked.iter().map(|&a| model.path(1, a).into_iter().collect()).collect();
    let omega: BTreeSet<usize> = paths.iter().flatten().copied().collect();
    let gamma: BTreeSet<usize> = paths
        .iter()
        .skip(1)
        .fold(paths[0].clone(), |acc, p| acc.intersection(p).copied().collect());

    let mut beta_of = BTreeMap::new();
    for &rho in dead_ends {
        // The path from rho towards 1 enters omega exactly once.
        let beta = model.path(rho, 1).into_iter().find(|v| omega.contains(v)).expect("1 is in omega");
        beta_of.insert(rho, beta);
    }

    let excluded: BTreeSet<usize> = gamma.iter().copied().chain(beta_of.values().copied()).collect();
    let mut h: BTreeSet<usize> = omega.difference(&excluded).copied().collect();
    h.insert(1);
    h.extend(dead_ends.iter().copied());

    HSet {
        omega: omega.into_iter().collect(),
        gamma: gamma.into_iter().collect(),
        beta_of,
        h: h.into_iter().collect(),
        minimality: Minimality { minimal: true, offending: Vec::new() },
    }
}

/// Graphviz rendering. Marked vertices are drawn as double circles, dead
/// ends are filled, and each arrow becomes an edge to a point node.
pub fn to_dot(model: &ResolutionModel, marked: &[usize], arrows: &BTreeMap<usize, usize>) -> String {
    let g = classify(model);
    let mut out = String::from("graph dual {\n  node [shape=circle];\n");
    for v in model.vertices() {
        let mut attrs = vec![format!("label=\"{v}\"")];
        if marked.contains(&v) {
            attrs.push("shape=doublecircle".into());
        }
        if g.is_dead_end(v) {
            attrs.push("style=filled".into());
            attrs.push("fillcolor=lightgray".into());
            attrs.push("xlabel=\"dead end\"".into());
        }
        let _ = writeln!(out, "  {v} [{}];", attrs.join(", "));
    }
    for &(a, b) in model.edges() {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    for (&v, &count) in arrows {
        for k in 1..=count {
            let _ = writeln!(out, "  arrow_{v}_{k} [shape=point];");
            let _ = writeln!(out, "  {v} -- arrow_{v}_{k} [dir=forward];");
        }
    }
    out.push_str("}\n");
    out
}
