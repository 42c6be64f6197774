//! Test-only oracles that share no code path with the library's semigroup
//! or series machinery, plus seeded random models.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valsem::resolution::random_centers;
use valsem::{build_model, Center, ResolutionModel};

pub fn example_centers() -> Vec<Center> {
    vec![
        Center::origin(),
        Center::free(2, 1),
        Center::free(3, 2),
        Center::satellite(4, 1, 2),
        Center::free(5, 4),
        Center::satellite(6, 4, 5),
        Center::free(7, 6),
    ]
}

pub fn example_model() -> ResolutionModel {
    build_model(&example_centers()).unwrap()
}

pub const EXAMPLE_MARKED: [usize; 3] = [3, 7, 6];

pub fn chain(n: usize) -> ResolutionModel {
    let mut c = vec![Center::origin()];
    c.extend((2..=n).map(|i| Center::free(i, i - 1)));
    build_model(&c).unwrap()
}

/// `dim R / J(m)` where `J(m) = {f : nu_i(f) >= m_i}`.
///
/// The marked values are raised to the least divisor `D >= sum m_i E_i`
/// with `D . E_g <= 0` for every exceptional component (unloading); the
/// multiplicities of the corresponding cluster are `Q^T c`, and the colength
/// is `sum k (k + 1) / 2`.
pub fn colength(model: &ResolutionModel, marked: &[usize], m: &[i64]) -> u64 {
    let s = model.len();
    let mm = model.intersection_matrix();
    let mut c = vec![0i64; s];
    for (&v, &x) in marked.iter().zip(m) {
        c[v - 1] = c[v - 1].max(x.max(0));
    }
    loop {
        let mut changed = false;
        for g in 0..s {
            let w = -mm[g][g];
            let around: i64 = (0..s).filter(|&d| d != g).map(|d| mm[d][g] * c[d]).sum();
            // D . E_g = around - w c_g must be <= 0.
            if around > w * c[g] {
                c[g] = (around + w - 1) / w;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let prox = model.proximity();
    let mut total = 0i64;
    for p in 0..s {
        let k = c[p] - (0..s).filter(|&i| prox[p][i]).map(|i| c[i]).sum::<i64>();
        assert!(k >= 0, "unloaded cluster has a negative multiplicity");
        total += k * (k + 1) / 2;
    }
    total as u64
}

fn shifted(m: &[i64], delta: &[i64]) -> Vec<i64> {
    m.iter().zip(delta).map(|(a, b)| a + b).collect()
}

/// `d(m) = dim J(m) / J(m + 1)`.
pub fn oracle_d(model: &ResolutionModel, marked: &[usize], m: &[i64]) -> u64 {
    let one = vec![1i64; m.len()];
    colength(model, marked, &shifted(m, &one)) - colength(model, marked, m)
}

/// `d_i(m) = dim J(m) / J(m + e_i)`.
pub fn oracle_di(model: &ResolutionModel, marked: &[usize], m: &[i64], i: usize) -> u64 {
    let mut e = vec![0i64; m.len()];
    e[i] = 1;
    colength(model, marked, &shifted(m, &e)) - colength(model, marked, m)
}

/// `m` is a value iff `d_i(m) > 0` for every `i`.
pub fn oracle_member(model: &ResolutionModel, marked: &[usize], m: &[u64]) -> bool {
    let mi: Vec<i64> = m.iter().map(|&x| x as i64).collect();
    (0..m.len()).all(|i| oracle_di(model, marked, &mi, i) > 0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random model with `r` distinct marked divisors, cut down to the
/// minimal resolution of those divisors. `None` when the draw has fewer
/// than `r` vertices.
pub fn random_minimal(rng: &mut ChaCha8Rng, s: usize, r: usize, satellite_bias: f64) -> Option<(ResolutionModel, Vec<usize>)> {
    let centers = random_centers(rng, s, satellite_bias);
    if centers.len() < r {
        return None;
    }
    let mut marked: Vec<usize> = Vec::new();
    while marked.len() < r {
        let v = rng.gen_range(1..=s);
        if !marked.contains(&v) {
            marked.push(v);
        }
    }
    let full = build_model(&centers).unwrap();
    let (model, renumber) = full.minimal_submodel(&marked).unwrap();
    let marked = marked.iter().map(|&v| renumber[v - 1].unwrap()).collect();
    Some((model, marked))
}

/// Componentwise sum of vectors.
pub fn sum(vs: &[Vec<u64>]) -> Vec<u64> {
    let r = vs.first().map_or(0, Vec::len);
    vs.iter().fold(vec![0; r], |acc, v| acc.iter().zip(v).map(|(a, b)| a + b).collect())
}
