//! Maximal contact values of a single divisorial valuation.

use num_integer::Integer;
use serde::Serialize;

use super::membership::ReachTable;
use crate::dualgraph::classify;
use crate::error::{Error, Result};
use crate::resolution::ResolutionModel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalContactData {
    /// Dead ends other than the valuation's own divisor, 1 first, then by
    /// creation order.
    pub dead_end_order: Vec<usize>,
    /// `beta_bar[0..=g]` are the maximal contact values; `beta_bar[g+1]` is
    /// the value of the curvette at the valuation's divisor.
    pub beta_bar: Vec<u64>,
    /// `e[i] = gcd(beta_bar[0..=i])`.
    pub e: Vec<u64>,
    pub g: usize,
    /// Blow-ups after the last star on the way to the valuation's divisor.
    pub c: u64,
    /// Least element from which every integer is a value.
    pub conductor: u64,
    /// One expression of `beta_bar[g+1]` over `beta_bar[0..=g]`.
    pub lambda: Vec<u64>,
}

/// Requires the model to be the minimal resolution of the valuation at
/// `alpha`. With `g = 0` the convention `e_{-1} = 0` is used, so `c` is the
/// full length of the chain.
pub fn maximal_contact(model: &ResolutionModel, alpha: usize) -> Result<MaximalContactData> {
    model.check_vertex(alpha)?;
    if !model.validate_minimality(&[alpha]).minimal {
        return Err(Error::NotSingleMinimal { vertex: alpha });
    }
    let mut order = vec![1];
    order.extend(classify(model).dead_ends.into_iter().filter(|&v| v != 1 && v != alpha));
    let g = order.len() - 1;
    let mut beta_bar: Vec<u64> = order.iter().map(|&rho| model.value(rho, alpha)).collect();
    let last = model.value(alpha, alpha);
    beta_bar.push(last);

    let mut e = Vec::with_capacity(g + 1);
    let mut acc = 0u64;
    for &b in &beta_bar[..=g] {
        acc = acc.gcd(&b);
        e.push(acc);
    }
    if e[g] != 1 {
        return Err(Error::Internal(format!("maximal contact values {:?} are not coprime", &beta_bar[..=g])));
    }

    let to_alpha = model.path(1, alpha);
    let (e_prev, c) = if g == 0 {
        (0, to_alpha.len() as u64)
    } else {
        let toward = model.path(order[g], 1);
        let st = *toward.iter().find(|v| to_alpha.contains(v)).expect("1 lies on both paths");
        let pos = to_alpha.iter().position(|&v| v == st).expect("st on path");
        (e[g - 1], (to_alpha.len() - 1 - pos) as u64)
    };
    if g > 0 {
        // e_{g-1} is also the least n with n * beta_bar[g] in the previous semigroup.
        let gens: Vec<Vec<u64>> = beta_bar[..g].iter().map(|&b| vec![b]).collect();
        let top = e_prev * beta_bar[g];
        let t = ReachTable::build(&gens, &[top], u64::MAX)?;
        let n = (1..=e_prev).find(|&n| t.contains(&[n * beta_bar[g]]));
        if n != Some(e_prev) {
            return Err(Error::Internal(format!("order of beta_bar[{g}] is {n:?}, gcd chain gives {e_prev}")));
        }
    }
    if last != e_prev * beta_bar[g] + c {
        return Err(Error::Internal(format!(
            "beta_bar[g+1] = {last} but e[g-1] * beta_bar[g] + c = {e_prev} * {} + {c}",
            beta_bar[g]
        )));
    }

    let conductor = conductor(&beta_bar[..=g]);
    let gens: Vec<Vec<u64>> = beta_bar[..=g].iter().map(|&b| vec![b]).collect();
    let t = ReachTable::build(&gens, &[last], u64::MAX)?;
    let lambda = t
        .witness(&gens, &[last])
        .ok_or_else(|| Error::Internal(format!("{last} is not in the semigroup of maximal contact values")))?;

    Ok(MaximalContactData { dead_end_order: order, beta_bar, e, g, c, conductor, lambda })
}

/// Conductor of the numerical semigroup generated by `gens` (gcd 1): the
/// first run of `min(gens)` consecutive members starts there.
pub fn conductor(gens: &[u64]) -> u64 {
    let step = *gens.iter().min().expect("nonempty generators");
    let mut member = vec![true];
    let mut run = 0u64;
    let mut x = 0u64;
    loop {
        if x > 0 {
            let hit = gens.iter().any(|&g| g <= x && member[(x - g) as usize]);
            member.push(hit);
        }
        if member[x as usize] {
            run += 1;
            if run == step {
                return x + 1 - step;
            }
        } else {
            run = 0;
        }
        x += 1;
    }
}
