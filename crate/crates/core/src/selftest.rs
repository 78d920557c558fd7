//! End-to-end self test over freshly generated parameter sets.

use num_bigint::BigUint;

use crate::fields::{Field, Fp, OpCounter};
use crate::huff::{CurveError, HuffCurve, HuffPoint};
use crate::pairing::{EvalPoint, Variant};
use crate::parallel::Exec;
use crate::params_io;
use crate::paramgen::{find_params, PairingParams, SearchConfig};
use crate::report::cost_rows;

/// Point addition under test; swapped out to check that the suite notices.
pub type Adder = dyn Fn(&HuffCurve, &HuffPoint<Fp>, &HuffPoint<Fp>) -> Result<HuffPoint<Fp>, CurveError> + Sync;

pub fn standard_adder(c: &HuffCurve, p1: &HuffPoint<Fp>, p2: &HuffPoint<Fp>) -> Result<HuffPoint<Fp>, CurveError> {
    c.add(c.field(), p1, p2, &OpCounter::new())
}

/// `standard_adder` with the sign of `X₃` flipped.
pub fn faulty_adder(c: &HuffCurve, p1: &HuffPoint<Fp>, p2: &HuffPoint<Fp>) -> Result<HuffPoint<Fp>, CurveError> {
    let s = standard_adder(c, p1, p2)?;
    Ok(HuffPoint::new(c.field().neg(&s.x), s.y, s.z))
}

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub q_max: u64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            q_max: 60,
            seed: 1,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "{tag} {}", self.name)
        } else {
            write!(f, "{tag} {} # {}", self.name, self.detail)
        }
    }
}

fn check(name: &'static str, failures: Vec<String>) -> CheckResult {
    CheckResult {
        name,
        passed: failures.is_empty(),
        detail: failures.join("; "),
    }
}

/// Multiples `[0]P .. [r-1]P`.
pub fn subgroup(curve: &HuffCurve, p: &HuffPoint<Fp>, r: u64) -> Vec<HuffPoint<Fp>> {
    let f = curve.field();
    let ctr = OpCounter::new();
    let mut out = vec![curve.identity(f)];
    for _ in 1..r {
        out.push(curve.add(f, out.last().expect("nonempty"), p, &ctr).expect("subgroup"));
    }
    out
}

fn label(p: &PairingParams) -> String {
    format!("q={} a={} b={} k={}", p.q, p.a, p.b, p.k)
}

/// Every pair of the `r`-subgroup against the chord-tangent oracle.
pub fn oracle_equivalence(p: &PairingParams, adder: &Adder, exec: Exec) -> Result<(), String> {
    let curve = p.curve().map_err(|e| e.to_string())?;
    let f = curve.field();
    let w = curve.weierstrass();
    let pts = subgroup(&curve, &p.p, p.r);
    let bad: usize = exec
        .map(&pts, |p1| {
            pts.iter()
                .filter(|p2| {
                    let expected = curve.psi(f, &w.add(f, &curve.phi(f, p1), &curve.phi(f, p2)));
                    match adder(&curve, p1, p2) {
                        Ok(s) => !curve.eq_projective(f, &s, &expected),
                        Err(_) => true,
                    }
                })
                .count()
        })
        .into_iter()
        .sum();
    if bad == 0 {
        Ok(())
    } else {
        Err(format!("{}: {bad} of {} sums differ", label(p), pts.len() * pts.len()))
    }
}

/// `e([i]P, [j]Q) = e(P, Q)^{ij}` for all `i, j ∈ [1, r)`.
pub fn bilinearity(p: &PairingParams, exec: Exec) -> Result<(), String> {
    let engine = p.engine();
    let curve = engine.curve();
    let ext = engine.tower().ext();
    let variant = p.default_variant();
    let base = p.pair().map_err(|e| e.to_string())?;
    let qpt = engine.eval_to_point(&p.q_point);
    let ctr = OpCounter::new();
    let ps = subgroup(curve, &p.p, p.r);
    let qs: Vec<EvalPoint> = (0..p.r)
        .map(|j| {
            let qj = curve.scalar_mul(ext, j, &qpt, &ctr).expect("subgroup");
            match (&p.q_point, engine.as_special(&qj)) {
                (EvalPoint::Special(_), Some(s)) => EvalPoint::Special(s),
                _ => EvalPoint::General(qj),
            }
        })
        .collect();
    let idx: Vec<u64> = (1..p.r).collect();
    let bad: Vec<String> = exec
        .map(&idx, |&i| {
            let ctr = OpCounter::new();
            let mut bad = Vec::new();
            for j in 1..p.r {
                let got = engine.reduced_tate(&ps[i as usize], &qs[j as usize], p.r, variant);
                let want = ext.pow(&base, &BigUint::from(i * j), &ctr);
                if got.map(|g| g.value) != Ok(want) {
                    bad.push(format!("(i={i}, j={j})"));
                }
            }
            bad
        })
        .into_iter()
        .flatten()
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(format!("{}: {} pairs fail, first {}", label(p), bad.len(), bad[0]))
    }
}

/// `e(P, Q) ≠ 1` and `e(P, Q)^r = 1`.
pub fn non_degeneracy(p: &PairingParams) -> Result<(), String> {
    let engine = p.engine();
    let ext = engine.tower().ext();
    let e = p.pair().map_err(|e| e.to_string())?;
    if e == ext.one() {
        return Err(format!("{}: e(P, Q) = 1", label(p)));
    }
    if ext.pow(&e, &BigUint::from(p.r), &OpCounter::new()) != ext.one() {
        return Err(format!("{}: e(P, Q)^r != 1", label(p)));
    }
    Ok(())
}

/// Huff-side pairing against the Weierstrass Miller loop on `φ(P), φ(Q)`.
pub fn oracle_pairing(p: &PairingParams) -> Result<(), String> {
    let engine = p.engine();
    let curve = engine.curve();
    let ext = engine.tower().ext();
    let w = curve.weierstrass();
    let wp = curve.phi(curve.field(), &p.p);
    let wq = curve.phi(ext, &engine.eval_to_point(&p.q_point));
    let oracle = w.tate(engine.tower(), &wp, &wq, p.r).map_err(|e| e.to_string())?;
    let ours = p.pair().map_err(|e| e.to_string())?;
    if oracle == ours {
        Ok(())
    } else {
        Err(format!("{}: oracle and Huff pairings differ", label(p)))
    }
}

/// Eliminated and full Miller loops agree after final exponentiation.
pub fn variant_agreement(p: &PairingParams) -> Result<(), String> {
    let engine = p.engine();
    if p.q_special().is_none() {
        return Err(format!("{}: Q is not in special form", label(p)));
    }
    let run = |v| engine.reduced_tate(&p.p, &p.q_point, p.r, v).map(|r| r.value);
    match (run(Variant::Eliminated), run(Variant::Full)) {
        (Ok(a), Ok(b)) if a == b => Ok(()),
        (Ok(_), Ok(_)) => Err(format!("{}: variants differ", label(p))),
        (Err(e), _) | (_, Err(e)) => Err(format!("{}: {e}", label(p))),
    }
}

pub fn op_counts(p: &PairingParams) -> Result<(), String> {
    let engine = p.engine();
    let q = p.q_special().ok_or_else(|| format!("{}: Q is not in special form", label(p)))?;
    let costs = engine.measure_costs(&p.p, &q, p.r).map_err(|e| e.to_string())?;
    let bad: Vec<String> = cost_rows(&costs)
        .into_iter()
        .filter(|r| !r.status.is_ok())
        .map(|r| format!("{}: {r}", label(p)))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad.join("; "))
    }
}

pub fn params_round_trip(p: &PairingParams) -> Result<(), String> {
    let text = params_io::to_text(p);
    let back = params_io::from_text(&text).map_err(|e| format!("{}: {e}", label(p)))?;
    if params_io::to_text(&back) == text {
        Ok(())
    } else {
        Err(format!("{}: rewritten file differs", label(p)))
    }
}

/// Runs every check on the parameter sets found for `k ∈ {2, 4, 6}` with
/// `q ≤ q_max`.
pub fn run(cfg: &SelftestConfig, adder: &Adder) -> Vec<CheckResult> {
    let sets: Vec<PairingParams> = [2usize, 4, 6]
        .iter()
        .filter_map(|&k| {
            let mut sc = SearchConfig::for_k(k);
            sc.q_max = cfg.q_max;
            sc.seed = cfg.seed;
            sc.exec = cfg.exec;
            find_params(&sc).ok()
        })
        .collect();
    let mut out = vec![CheckResult {
        name: "param-search",
        passed: !sets.is_empty(),
        detail: if sets.is_empty() {
            format!("no parameter set with q <= {}", cfg.q_max)
        } else {
            sets.iter().map(label).collect::<Vec<_>>().join(", ")
        },
    }];
    let per_set = |f: &dyn Fn(&PairingParams) -> Result<(), String>| -> Vec<String> {
        sets.iter().filter_map(|p| f(p).err()).collect()
    };
    if sets.is_empty() {
        return out;
    }
    out.push(check("oracle-equivalence", per_set(&|p| oracle_equivalence(p, adder, cfg.exec))));
    out.push(check("op-counts", per_set(&op_counts)));
    out.push(check("bilinearity", per_set(&|p| bilinearity(p, cfg.exec))));
    out.push(check("non-degeneracy", per_set(&non_degeneracy)));
    out.push(check("oracle-pairing", per_set(&oracle_pairing)));
    out.push(check("variant-agreement", per_set(&variant_agreement)));
    out.push(check("params-roundtrip", per_set(&params_round_trip)));
    out
}
