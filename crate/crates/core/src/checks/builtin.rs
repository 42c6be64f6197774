use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use super::{Check, CheckContext, Registry, Verdict};
use crate::dualgraph::{classify, h_set};
use crate::error::Result;
use crate::poincare::{check_tower_numerator, check_curve_identity, limit_profile, poincare_series};
use crate::semigroup::contact::maximal_contact;
use crate::semigroup::monomial::{components_without, monomial_dominating, monomial_for_component};
use crate::series::{dims_times_t_minus_one, p_prime, recover_dims};

pub(super) fn register_all(reg: &mut Registry) {
    reg.register(Box::new(Unimodular));
    reg.register(Box::new(Tree));
    reg.register(Box::new(Indecomposables));
    reg.register(Box::new(Decomposition));
    reg.register(Box::new(ShiftRules));
    reg.register(Box::new(Support));
    reg.register(Box::new(ExtremalShift));
    reg.register(Box::new(Dimensions));
    reg.register(Box::new(CurveIdentity));
    reg.register(Box::new(TowerNumerator));
    reg.register(Box::new(Limit));
    reg.register(Box::new(ExponentSum));
    reg.register(Box::new(Contact));
    reg.register(Box::new(Monomials));
}

const NOT_MINIMAL: &str = "model is not the minimal resolution of the marked set";

fn add(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn fits(m: &[u64], bound: &[u64]) -> bool {
    m.iter().zip(bound).all(|(x, b)| x <= b)
}

struct Unimodular;

impl Check for Unimodular {
    fn name(&self) -> &'static str {
        "model.unimodular"
    }
    fn description(&self) -> &'static str {
        "A * (-M) is the identity, A is symmetric with positive entries"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        let m = ctx.model().intersection_matrix();
        let a = ctx.model().value_matrix();
        let s = m.len();
        for i in 0..s {
            for j in 0..s {
                let prod: i128 = (0..s).map(|k| a[i][k] as i128 * -(m[k][j] as i128)).sum();
                if prod != (i == j) as i128 {
                    return Ok(Verdict::fail(json!({"entry": [i + 1, j + 1], "value": prod})));
                }
                if a[i][j] != a[j][i] || a[i][j] == 0 || m[i][j] != m[j][i] {
                    return Ok(Verdict::fail(json!({"entry": [i + 1, j + 1], "a": a[i][j], "aT": a[j][i]})));
                }
            }
        }
        Ok(Verdict::pass())
    }
}

struct Tree;

impl Check for Tree {
    fn name(&self) -> &'static str {
        "graph.tree"
    }
    fn description(&self) -> &'static str {
        "dual graph is a tree; degrees sum to 2(s-1); dead ends and stars are disjoint"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        let model = ctx.model();
        let g = classify(model);
        let s = model.len();
        if model.edges().len() + 1 != s || g.degree.iter().sum::<usize>() != 2 * (s - 1) {
            return Ok(Verdict::fail(json!({"edges": model.edges().len(), "vertices": s})));
        }
        // Every vertex is reachable from 1 along tree paths.
        for v in model.vertices() {
            let p = model.path(1, v);
            if p.first() != Some(&1) || p.last() != Some(&v) {
                return Ok(Verdict::fail(json!({"unreachable": v})));
            }
        }
        if g.dead_ends.iter().any(|v| g.stars.contains(v)) {
            return Ok(Verdict::fail("dead end that is also a star"));
        }
        Ok(Verdict::pass())
    }
}

struct Indecomposables;

impl Check for Indecomposables {
    fn name(&self) -> &'static str {
        "semigroup.indecomposables"
    }
    fn description(&self) -> &'static str {
        "brute-force indecomposables on the box 2 * sum B^i are the curvette values at the H vertices"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        if ctx.r() < 2 {
            return Ok(Verdict::Skipped("needs at least two valuations".into()));
        }
        if !ctx.minimality.minimal {
            return Ok(Verdict::Skipped(NOT_MINIMAL.into()));
        }
        let h = h_set(ctx.model(), ctx.handle.marked())?;
        let bound = ctx.handle.marked_bs().iter().fold(vec![0; ctx.r()], |acc, b| add(&acc, b));
        let bound: Vec<u64> = bound.iter().map(|x| 2 * x).collect();
        let brute = ctx.handle.indecomposables_bruteforce(&bound)?;
        let mut predicted: Vec<Vec<u64>> = h.h.iter().map(|&a| ctx.handle.proj_b()[a - 1].clone()).collect();
        predicted.sort();
        predicted.dedup();
        let mut brute_sorted = brute.clone();
        brute_sorted.sort();
        if predicted == brute_sorted {
            Ok(Verdict::Pass(Some(format!("{} indecomposables", brute.len()))))
        } else {
            Ok(Verdict::fail(json!({"bruteForce": brute_sorted, "predicted": predicted, "h": h.h})))
        }
    }
}

struct Decomposition;

impl Check for Decomposition {
    fn name(&self) -> &'static str {
        "semigroup.decomposition"
    }
    fn description(&self) -> &'static str {
        "every member in the box decomposes uniquely as n + sum a_i B^i with n - B^i outside S"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        let h = &ctx.handle;
        let table = h.table_for(&ctx.bound)?;
        let bs = h.marked_bs();
        let mut count = 0;
        for m in table.members() {
            if !fits(&m, &ctx.bound) {
                continue;
            }
            let d = h.decompose(&m)?;
            let mut total = d.n.clone();
            for (a, b) in d.a.iter().zip(&bs) {
                total = add(&total, &b.iter().map(|x| x * a).collect::<Vec<_>>());
            }
            if total != m {
                return Ok(Verdict::fail(json!({"m": m, "a": d.a, "n": d.n})));
            }
            // Recomputing a_i after removing the other multiples gives a_i again.
            for i in 0..h.r() {
                let mut rest = d.n.clone();
                rest = add(&rest, &bs[i].iter().map(|x| x * d.a[i]).collect::<Vec<_>>());
                if h.decompose(&rest)?.a[i] != d.a[i] {
                    return Ok(Verdict::fail(json!({"m": m, "i": i, "a": d.a})));
                }
            }
            count += 1;
        }
        Ok(Verdict::Pass(Some(format!("{count} members"))))
    }
}

struct ShiftRules;

impl Check for ShiftRules {
    fn name(&self) -> &'static str {
        "semigroup.shift_rules"
    }
    fn description(&self) -> &'static str {
        "d_i(m) >= 2 iff m - B^i in S; d_i(m + B^j) = d_i(m) for j != i; d_i(m + B^i) = d_i(m) + 1"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        let h = &ctx.handle;
        let bs = h.marked_bs();
        let outer = bs.iter().fold(ctx.bound.clone(), |acc, b| {
            acc.iter().zip(&ctx.bound).zip(b).map(|((a, n), x)| (*a).max(n + x)).collect()
        });
        let table = h.table_for(&outer)?;
        let mut tested = 0usize;
        for m in table.members() {
            if !fits(&m, &ctx.bound) {
                continue;
            }
            let d = h.decompose(&m)?;
            for i in 0..h.r() {
                let di = d.a[i] + 1;
                let below = table.contains_difference(&m, &bs[i]);
                if (di >= 2) != below {
                    return Ok(Verdict::fail(json!({"rule": "d_i >= 2 iff m - B^i in S", "m": m, "i": i, "d_i": di})));
                }
                for (j, bj) in bs.iter().enumerate() {
                    let shifted = add(&m, bj);
                    let dj = h.decompose(&shifted)?.a[i] + 1;
                    let want = if i == j { di + 1 } else { di };
                    if dj != want {
                        return Ok(Verdict::fail(json!({"rule": "shift by B^j", "m": m, "i": i, "j": j, "got": dj, "want": want})));
                    }
                    tested += 1;
                }
            }
        }
        Ok(Verdict::Pass(Some(format!("{tested} (m, i, j) triples"))))
    }
}

struct Support;

impl Check for Support {
    fn name(&self) -> &'static str {
        "series.support"
    }
    fn description(&self) -> &'static str {
        "every exponent with a nonzero coefficient in P_V is a value"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        let pv = poincare_series(ctx.model(), ctx.handle.marked())?.expand(&ctx.bound)?;
        let table = ctx.handle.table_for(&ctx.bound)?;
        for (m, c) in pv.terms() {
            if !table.contains(m) {
                return Ok(Verdict::fail(json!({"m": m, "c": c.to_string()})));
            }
        }
        Ok(Verdict::Pass(Some(format!("{} terms", pv.len()))))
    }
}

struct ExtremalShift;

impl Check for ExtremalShift {
    fn name(&self) -> &'static str {
        "series.extremal_shift"
    }
    fn description(&self) -> &'static str {
        "p(m) = p(m + B^j) for members m when the j-th divisor is a dead end"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        if ctx.r() < 2 {
            return Ok(Verdict::Skipped("needs at least two valuations".into()));
        }
        if !ctx.minimality.minimal {
            return Ok(Verdict::Skipped(NOT_MINIMAL.into()));
        }
        let g = classify(ctx.model());
        let extremal: Vec<usize> = (0..ctx.r()).filter(|&j| g.is_dead_end(ctx.handle.marked()[j])).collect();
        if extremal.is_empty() {
            return Ok(Verdict::Skipped("no marked divisor is a dead end".into()));
        }
        let pv = poincare_series(ctx.model(), ctx.handle.marked())?.expand(&ctx.bound)?;
        let table = ctx.handle.table_for(&ctx.bound)?;
        let mut tested = 0;
        for &j in &extremal {
            let bj = ctx.handle.marked_b(j).to_vec();
            for m in table.members() {
                let shifted = add(&m, &bj);
                if !fits(&shifted, &ctx.bound) {
                    continue;
                }
                if pv.coeff(&m) != pv.coeff(&shifted) {
                    return Ok(Verdict::fail(json!({"m": m, "j": j, "p(m)": pv.coeff(&m).to_string(), "p(m+B^j)": pv.coeff(&shifted).to_string()})));
                }
                tested += 1;
            }
        }
        Ok(Verdict::Pass(Some(format!("{tested} shifts"))))
    }
}

struct Dimensions;

impl Check for Dimensions {
    fn name(&self) -> &'static str {
        "series.dimensions"
    }
    fn description(&self) -> &'static str {
        "dimensions recovered from P_V: d(B^i) = 2, d(0) = 1, h(0) = 0, and the round trip to P'_V"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        let pv = poincare_series(ctx.model(), ctx.handle.marked())?;
        let bs = ctx.handle.marked_bs();
        let bound = bs.iter().fold(vec![1; ctx.r()], |acc, b| acc.iter().zip(b).map(|(x, y)| *x.max(y)).collect());
        let table = recover_dims(&pv, &bound)?;
        let r = ctx.r();
        let zero = vec![0i64; r];
        if table.query(&zero)? != BigInt::one() {
            return Ok(Verdict::fail(json!({"d(0)": table.query(&zero)?.to_string()})));
        }
        if !table.query(&vec![-1; r])?.is_zero() || !table.hilbert(&zero)?.is_zero() {
            return Ok(Verdict::fail("d(-1) or h(0) is nonzero"));
        }
        for (i, b) in bs.iter().enumerate() {
            let m: Vec<i64> = b.iter().map(|&x| x as i64).collect();
            let d = table.query(&m)?;
            if d != BigInt::from(2) {
                return Ok(Verdict::fail(json!({"i": i, "B^i": b, "d": d.to_string()})));
            }
        }
        let back = dims_times_t_minus_one(&table)?;
        let pp = p_prime(&pv, &bound)?;
        for (m, _) in pp.terms().chain(back.terms()) {
            if m.iter().all(|&x| x >= 1) && pp.coeff(m) != back.coeff(m) {
                return Ok(Verdict::fail(json!({"m": m, "P'": pp.coeff(m).to_string(), "from d": back.coeff(m).to_string()})));
            }
        }
        Ok(Verdict::pass())
    }
}

struct CurveIdentity;

impl Check for CurveIdentity {
    fn name(&self) -> &'static str {
        "poincare.curve_identity"
    }
    fn description(&self) -> &'static str {
        "P_V * prod (1 - t^{B^i}) equals the Poincare polynomial of the general curve on the box"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        if !ctx.minimality.minimal {
            return Ok(Verdict::Skipped(NOT_MINIMAL.into()));
        }
        let rep = check_curve_identity(&ctx.marking, &ctx.bound)?;
        Ok(if rep.equal { Verdict::pass() } else { Verdict::fail(rep.first_discrepancy) })
    }
}

struct TowerNumerator;

impl Check for TowerNumerator {
    fn name(&self) -> &'static str {
        "poincare.tower_numerator"
    }
    fn description(&self) -> &'static str {
        "P_{V^(k)} * prod (1 - t^{B^i_(k)}) does not depend on k for k <= kmax"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        if !ctx.minimality.minimal {
            return Ok(Verdict::Skipped(NOT_MINIMAL.into()));
        }
        let rep = check_tower_numerator(&ctx.marking, ctx.kmax, &ctx.bound)?;
        Ok(if rep.equal { Verdict::pass() } else { Verdict::fail(rep.first_discrepancy) })
    }
}

struct Limit;

impl Check for Limit {
    fn name(&self) -> &'static str {
        "poincare.limit"
    }
    fn description(&self) -> &'static str {
        "disagreements between P_{V^(k)} and the curve polynomial do not increase with k"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        if !ctx.minimality.minimal {
            return Ok(Verdict::Skipped(NOT_MINIMAL.into()));
        }
        let prof = limit_profile(&ctx.marking, &ctx.bound, ctx.kmax)?;
        if prof.disagreements.windows(2).any(|w| w[1] > w[0]) {
            return Ok(Verdict::fail(&prof));
        }
        let detail = match prof.k0 {
            Some(k) => format!("agreement from k = {k}; counts {:?}", prof.disagreements),
            None => format!("no agreement up to k = {}; counts {:?}", ctx.kmax, prof.disagreements),
        };
        Ok(Verdict::Pass(Some(detail)))
    }
}

struct ExponentSum;

impl Check for ExponentSum {
    fn name(&self) -> &'static str {
        "poincare.exponent_sum"
    }
    fn description(&self) -> &'static str {
        "the exponents b(alpha) - 2 add up to -2"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        let g = classify(ctx.model());
        let raw: i64 = g.degree.iter().map(|&b| b as i64 - 2).sum();
        let merged = poincare_series(ctx.model(), ctx.handle.marked())?.exponent_sum();
        if raw == -2 && merged == -2 {
            Ok(Verdict::pass())
        } else {
            Ok(Verdict::fail(json!({"sum": raw, "afterMerging": merged})))
        }
    }
}

struct Contact;

impl Check for Contact {
    fn name(&self) -> &'static str {
        "contact.relation"
    }
    fn description(&self) -> &'static str {
        "for each marked valuation on its own minimal resolution, beta_{g+1} = e_{g-1} beta_g + c and e_g = 1"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        let mut details = Vec::new();
        for &alpha in ctx.handle.marked() {
            let (sub, renumber) = ctx.model().minimal_submodel(&[alpha])?;
            let a = renumber[alpha - 1].expect("marked vertex is kept");
            let data = maximal_contact(&sub, a)?;
            details.push(format!("{alpha}: {:?}", data.beta_bar));
        }
        Ok(Verdict::Pass(Some(details.join("; "))))
    }
}

struct Monomials;

impl Check for Monomials {
    fn name(&self) -> &'static str {
        "monomials"
    }
    fn description(&self) -> &'static str {
        "dead-end monomials exist for every vertex and component, and for every dominating pair"
    }
    fn run(&self, ctx: &CheckContext) -> Result<Verdict> {
        let model = ctx.model();
        let mut count = 0;
        for alpha in model.vertices() {
            for delta in components_without(model, alpha) {
                monomial_for_component(model, alpha, &delta)?;
                count += 1;
            }
            for beta in model.vertices() {
                monomial_dominating(model, beta, alpha)?;
                count += 1;
            }
        }
        Ok(Verdict::Pass(Some(format!("{count} monomials verified"))))
    }
}
