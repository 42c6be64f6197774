//! Monomials in the dead-end curvettes realizing prescribed values.
//!
//! A monomial is an exponent map `rho -> lambda_rho` over dead ends; its value
//! at `E_gamma` is `sum lambda_rho * A[rho][gamma]`.

use std::collections::{BTreeMap, BTreeSet};

use crate::dualgraph::classify;
use crate::error::{Error, Result};
use crate::resolution::ResolutionModel;

pub type Monomial = BTreeMap<usize, u64>;

/// Value of a monomial at `E_gamma`.
pub fn monomial_value(model: &ResolutionModel, q: &Monomial, gamma: usize) -> u64 {
    q.iter().map(|(&rho, &l)| l * model.value(rho, gamma)).sum()
}

/// Connected components of the graph with `removed` deleted, each sorted,
/// ordered by smallest vertex.
pub fn components_without(model: &ResolutionModel, removed: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; model.len() + 1];
    seen[removed] = true;
    let mut out = Vec::new();
    for start in model.vertices() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in model.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Monomial in the dead ends of `delta` whose value equals that of the
/// curvette at `alpha` off `delta` and exceeds it on `delta`.
///
/// Candidates solving the equation at `E_alpha` are enumerated in
/// lexicographic order of the exponent vector (dead ends by id) and the first
/// one satisfying every constraint is returned.
pub fn monomial_for_component(model: &ResolutionModel, alpha: usize, delta: &[usize]) -> Result<Monomial> {
    model.check_vertex(alpha)?;
    let mut wanted: Vec<usize> = delta.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    if !components_without(model, alpha).contains(&wanted) {
        return Err(Error::NoComponent(delta.to_vec()));
    }
    let in_delta: BTreeSet<usize> = wanted.iter().copied().collect();
    let vars: Vec<usize> = classify(model).dead_ends.into_iter().filter(|v| in_delta.contains(v)).collect();
    let coeffs: Vec<u64> = vars.iter().map(|&rho| model.value(rho, alpha)).collect();
    let target = model.value(alpha, alpha);

    let accept = |lambda: &[u64]| {
        let q: Monomial = vars.iter().copied().zip(lambda.iter().copied()).filter(|&(_, l)| l > 0).collect();
        let ok = model.vertices().all(|gamma| {
            let got = monomial_value(model, &q, gamma);
            let want = model.value(alpha, gamma);
            if in_delta.contains(&gamma) {
                got > want
            } else {
                got == want
            }
        });
        ok.then_some(q)
    };

    let mut lambda = vec![0u64; vars.len()];
    search(&coeffs, target, 0, &mut lambda, &mut |l| accept(l)).ok_or_else(|| {
        Error::Internal(format!("no monomial on dead ends {vars:?} realizes the curvette at {alpha} off {wanted:?}"))
    })
}

/// Lexicographic enumeration of nonnegative solutions of
/// `sum coeffs[i] * lambda[i] = remaining` (positions `pos..`), stopping at
/// the first one `visit` accepts.
fn search<T>(
    coeffs: &[u64],
    remaining: u64,
    pos: usize,
    lambda: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64]) -> Option<T>,
) -> Option<T> {
    if pos == coeffs.len() {
        return if remaining == 0 { visit(lambda) } else { None };
    }
    let c = coeffs[pos];
    for k in 0..=remaining / c {
        lambda[pos] = k;
        if let Some(found) = search(coeffs, remaining - k * c, pos + 1, lambda, visit) {
            return Some(found);
        }
    }
    lambda[pos] = 0;
    None
}

/// Monomial matching the curvette at `alpha_h` exactly at `E_beta` and
/// dominating it elsewhere. For `beta != alpha_h` its support lies in the
/// component of `alpha_h` in the graph minus `beta`.
pub fn monomial_dominating(model: &ResolutionModel, beta: usize, alpha_h: usize) -> Result<Monomial> {
    model.check_vertex(beta)?;
    model.check_vertex(alpha_h)?;
    let dead_ends = classify(model).dead_ends;
    let q = if dead_ends.contains(&alpha_h) {
        Monomial::from([(alpha_h, 1)])
    } else {
        let delta = components_without(model, alpha_h)
            .into_iter()
            .find(|c| !c.contains(&beta))
            .ok_or_else(|| Error::Internal(format!("every component of the graph minus {alpha_h} contains {beta}")))?;
        monomial_for_component(model, alpha_h, &delta)?
    };

    let exact = monomial_value(model, &q, beta) == model.value(alpha_h, beta);
    let dominates = model.vertices().all(|g| monomial_value(model, &q, g) >= model.value(alpha_h, g));
    let supported = beta == alpha_h || {
        let comp = components_without(model, beta).into_iter().find(|c| c.contains(&alpha_h)).unwrap_or_default();
        q.keys().all(|rho| comp.contains(rho))
    };
    if exact && dominates && supported {
        Ok(q)
    } else {
        Err(Error::Internal(format!("monomial {q:?} fails the constraints for beta={beta}, h at {alpha_h}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::{build_model, Center};

    fn example() -> ResolutionModel {
        build_model(&[
            Center::origin(),
            Center::free(2, 1),
            Center::free(3, 2),
            Center::satellite(4, 1, 2),
            Center::free(5, 4),
            Center::satellite(6, 4, 5),
            Center::free(7, 6),
        ])
        .unwrap()
    }

    fn chain(n: usize) -> ResolutionModel {
        let mut c = vec![Center::origin()];
        c.extend((2..=n).map(|i| Center::free(i, i - 1)));
        build_model(&c).unwrap()
    }

    #[test]
    fn chain_component() {
        // A[1][2] = 1 and A[2][2] = 2, so the exponent must be 2.
        let m = chain(3);
        assert_eq!(monomial_for_component(&m, 2, &[1]).unwrap(), Monomial::from([(1, 2)]));
        assert_eq!(monomial_for_component(&m, 2, &[3]).unwrap(), Monomial::from([(3, 1)]));
    }

    #[test]
    fn example_component_of_seven() {
        let m = example();
        let q = monomial_for_component(&m, 6, &[7]).unwrap();
        let e = q[&7];
        assert_eq!(q.len(), 1);
        assert_eq!(e * m.value(7, 6), m.value(6, 6));
    }

    #[test]
    fn dead_end_alpha_uses_rest() {
        let m = example();
        let rest: Vec<usize> = (1..=6).collect();
        let q = monomial_for_component(&m, 7, &rest).unwrap();
        assert!(q.keys().all(|rho| [1, 3, 5].contains(rho)));
        assert_eq!(monomial_value(&m, &q, 7), m.value(7, 7));
    }

    #[test]
    fn malformed_component() {
        let m = example();
        assert_eq!(monomial_for_component(&m, 6, &[7, 5]), Err(Error::NoComponent(vec![7, 5])));
    }

    #[test]
    fn every_component_of_example() {
        let m = example();
        for alpha in m.vertices() {
            for delta in components_without(&m, alpha) {
                let q = monomial_for_component(&m, alpha, &delta).unwrap();
                assert!(q.keys().all(|v| delta.contains(v)));
            }
        }
    }

    #[test]
    fn dominating() {
        let m = example();
        assert_eq!(monomial_dominating(&m, 7, 7).unwrap(), Monomial::from([(7, 1)]));
        assert_eq!(monomial_dominating(&m, 3, 7).unwrap(), Monomial::from([(7, 1)]));
        assert_eq!(monomial_dominating(&chain(2), 1, 2).unwrap(), Monomial::from([(2, 1)]));
        for beta in m.vertices() {
            for ah in m.vertices() {
                monomial_dominating(&m, beta, ah).unwrap();
            }
        }
    }
}
