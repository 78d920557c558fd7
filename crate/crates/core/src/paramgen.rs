//! Desk-scale parameter discovery: curve search, embedding degree, base
//! point and evaluation point.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fields::{find_quadratic_nonresidue, is_prime, ExtElem, ExtField, Field, FieldError, Fp, OpCounter, PrimeField, Tower};
use crate::huff::{CurveError, HuffCurve, HuffPoint};
use crate::pairing::{EvalPoint, PairingEngine, PairingError, SpecialPoint, Variant};
use crate::parallel::Exec;
use crate::weierstrass::{OracleError, WPoint, WeierstrassCurve, ENUMERATION_LIMIT};

const BASE_POINT_RETRIES: usize = 64;
const EVAL_POINT_RETRIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("r = {r} divides q = {q}")]
    RDividesQ { q: u64, r: u64 },
    #[error("no candidate curve in the search range")]
    NoCandidate,
    #[error("no point of order {r} found after {tries} tries")]
    NoPointFound { r: u64, tries: usize },
    #[error("invalid {field}: {check}")]
    Invalid { field: &'static str, check: String },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
}

fn invalid(field: &'static str, check: impl Into<String>) -> ParamError {
    ParamError::Invalid {
        field,
        check: check.into(),
    }
}

/// Multiplicative order of `q` modulo `r`.
pub fn embedding_degree(q: u64, r: u64) -> Result<u64, ParamError> {
    if r <= 1 || q.is_multiple_of(r) {
        return Err(ParamError::RDividesQ { q, r });
    }
    let qm = q % r;
    if num_integer::gcd(qm, r) != 1 {
        return Err(ParamError::RDividesQ { q, r });
    }
    let (mut acc, mut k) = (qm, 1);
    while acc != 1 {
        acc = ((acc as u128 * qm as u128) % r as u128) as u64;
        k += 1;
    }
    Ok(k)
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub q_min: u64,
    pub q_max: u64,
    pub r_min: u64,
    pub k: u64,
    pub seed: u64,
    pub exec: Exec,
}

impl SearchConfig {
    pub fn new(q_max: u64, r_min: u64, k: u64, seed: u64) -> Self {
        Self {
            q_min: 5,
            q_max,
            r_min,
            k,
            seed,
            exec: Exec::default(),
        }
    }

    /// Small defaults used by tests and the self test.
    pub fn for_k(k: usize) -> Self {
        Self::new(200, 7, k as u64, 1)
    }
}

/// A curve with a large prime factor of its order and the requested
/// embedding degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeskCurve {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub n: u64,
    pub r: u64,
    pub k: u64,
}

/// Since `(a, b)` and `(λ²a, λ²b)` give isomorphic curves, `a` runs over
/// `{1, g}` with `g` the least non-residue, and `b` over the rest of `F_q`.
fn curves_for_q(q: u64, cfg: &SearchConfig) -> Result<Vec<DeskCurve>, ParamError> {
    let f = PrimeField::new(q)?;
    let g = find_quadratic_nonresidue(&f).value();
    let mut out = Vec::new();
    for a in [1, g] {
        for b in 1..q {
            if b == a {
                continue;
            }
            let w = crate::weierstrass::WeierstrassCurve::new(q, a, b)?;
            let n = w.group_order()?;
            for r in prime_factors(n) {
                if r < cfg.r_min || r <= 5 || r == q {
                    continue;
                }
                if embedding_degree(q, r)? == cfg.k && pairs_on_torsion(q, n, r, cfg.k) {
                    out.push(DeskCurve { q, a, b, n, r, k: cfg.k });
                }
            }
        }
    }
    Ok(out)
}

/// With `k > 1` all of `E[r]` is defined over `F_{q^k}`. If `r³` divides
/// `#E(F_{q^k})` then `E[r]` meets `rE(F_{q^k})` and `e(P, ·)` can be trivial
/// on every point of order `r`.
fn pairs_on_torsion(q: u64, n: u64, r: u64, k: u64) -> bool {
    let r3 = BigUint::from(r).pow(3);
    !(ext_group_order(q, n, k) % r3).is_zero()
}

/// All candidates with `q_min ≤ q ≤ q_max` in `(q, a, b, r)` order.
pub fn find_desk_curves(cfg: &SearchConfig) -> Result<Vec<DeskCurve>, ParamError> {
    if cfg.k == 0 || cfg.k % 2 == 1 {
        return Err(FieldError::OddDegree(cfg.k as usize).into());
    }
    if cfg.q_max > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge {
            q: cfg.q_max,
            limit: ENUMERATION_LIMIT,
        }
        .into());
    }
    let qs: Vec<u64> = (cfg.q_min.max(5)..=cfg.q_max).filter(|&q| is_prime(q)).collect();
    let per_q = cfg.exec.map(&qs, |&q| curves_for_q(q, cfg));
    let mut out = Vec::new();
    for c in per_q {
        out.extend(c?);
    }
    Ok(out)
}

/// The first candidate that can be completed to a full parameter set.
pub fn find_params(cfg: &SearchConfig) -> Result<PairingParams, ParamError> {
    for c in find_desk_curves(cfg)? {
        if let Ok(p) = complete(&c, cfg.seed) {
            return Ok(p);
        }
    }
    Err(ParamError::NoCandidate)
}

fn candidate_rng(seed: u64, c: &DeskCurve) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(c.q << 40 | c.a << 20 | c.b);
    rng
}

/// Base point, tower and evaluation point for a candidate.
pub fn complete(c: &DeskCurve, seed: u64) -> Result<PairingParams, ParamError> {
    let curve = HuffCurve::new(c.q, c.a, c.b)?;
    let tower = Tower::new(c.q, c.k as usize)?;
    let mut rng = candidate_rng(seed, c);
    let p = find_base_point(&curve, c.n, c.r, &mut rng)?;
    let q_point = find_eval_point(&curve, &tower, c.n, c.r, &p, &mut rng)?;
    let params = PairingParams {
        q: c.q,
        a: c.a,
        b: c.b,
        n: c.n,
        r: c.r,
        k: c.k,
        beta: tower.beta().coeffs().to_vec(),
        p,
        q_point,
    };
    params.validate()?;
    Ok(params)
}

/// `[n/r]·X` for random `X`, retried until nonzero. Returned with `Z = 1`.
pub fn find_base_point<R: Rng>(curve: &HuffCurve, n: u64, r: u64, rng: &mut R) -> Result<HuffPoint<Fp>, ParamError> {
    if !n.is_multiple_of(r) {
        return Err(invalid("r", "r does not divide n"));
    }
    let f = curve.field();
    let w = curve.weierstrass();
    let h = BigUint::from(n / r);
    for _ in 0..BASE_POINT_RETRIES {
        let x = w.random_point(f, rng);
        let p = w.scalar_mul(f, &h, &x);
        if p.is_infinity() || !w.scalar_mul(f, &BigUint::from(r), &p).is_infinity() {
            continue;
        }
        let hp = curve.psi(f, &p);
        if let Some(norm) = curve.normalize(f, &hp) {
            return Ok(norm);
        }
    }
    Err(ParamError::NoPointFound {
        r,
        tries: BASE_POINT_RETRIES,
    })
}

/// Trace of the `q^d`-power Frobenius from `t = q + 1 − n`.
fn frobenius_trace(q: u64, n: u64, d: u32) -> BigInt {
    let q = BigInt::from(q);
    let t1 = &q + BigInt::one() - BigInt::from(n);
    let (mut prev, mut cur) = (BigInt::from(2), t1.clone());
    for _ in 1..d {
        let next = &t1 * &cur - &q * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Order of the group of points `(1 : y : z·α)` (plus the identity), that
/// is `q^d + 1 + t_d` with `d = k/2`.
pub fn special_group_order(q: u64, n: u64, k: u64) -> BigUint {
    let d = (k / 2) as u32;
    let total = BigInt::from(q).pow(d) + BigInt::one() + frobenius_trace(q, n, d);
    total.to_biguint().expect("Hasse bound keeps this positive")
}

/// `#E(F_{q^k})`.
pub fn ext_group_order(q: u64, n: u64, k: u64) -> BigUint {
    let t = frobenius_trace(q, n, k as u32);
    (BigInt::from(q).pow(k as u32) + BigInt::one() - t).to_biguint().expect("positive")
}

/// A point of order `r` of the form `(1 : y : z·α)`: candidates are
/// enumerated by `y ∈ F_{q^{k/2}}` from a random start, kept when
/// `y(ay − b)/(1 − y)` is a non-residue, and cofactor-cleared. Falls back
/// to a general order-`r` point of `E(F_{q^k})` if none pairs
/// non-trivially with `P`.
pub fn find_eval_point<R: Rng>(
    curve: &HuffCurve,
    tower: &Tower,
    n: u64,
    r: u64,
    p: &HuffPoint<Fp>,
    rng: &mut R,
) -> Result<EvalPoint, ParamError> {
    let engine = PairingEngine::new(curve.clone(), tower.clone());
    let ext = tower.ext();
    let sub = tower.sub();
    let w = curve.weierstrass();
    let k = tower.k() as u64;
    let q = curve.field().modulus();
    let order = special_group_order(q, n, k);
    let rb = BigUint::from(r);
    if (&order % &rb).is_zero() {
        let h = strip_factor(order, &rb);
        let size = sub.order().to_u64().expect("desk scale");
        let start = rng.gen_range(0..size);
        let beta_inv = sub.inv(tower.beta(), &OpCounter::new())?;
        let mut tries = 0;
        for i in 0..size {
            if tries >= EVAL_POINT_RETRIES {
                break;
            }
            let y = sub.element_at((start + i) % size);
            let Some(rhs) = curve.chart_z_squared(sub, &y) else { continue };
            if sub.is_zero(&rhs) {
                continue;
            }
            let Some(zc) = sub.sqrt(&sub.mul(&rhs, &beta_inv, &OpCounter::new())) else {
                continue;
            };
            tries += 1;
            let q0 = engine.special_to_point(&SpecialPoint { y, z: zc });
            let Some(cleared) = clear_to_order_r(&w, ext, &h, &rb, &curve.phi(ext, &q0)) else {
                continue;
            };
            let Some(special) = engine.as_special(&curve.psi(ext, &cleared)) else {
                continue;
            };
            let cand = EvalPoint::Special(special);
            if accept_eval(&engine, p, &cand, r) {
                return Ok(cand);
            }
        }
    }
    general_eval_point(&engine, n, r, p, rng)
}

fn strip_factor(mut h: BigUint, r: &BigUint) -> BigUint {
    while (&h % r).is_zero() {
        h /= r;
    }
    h
}

/// `[h]X`, then multiplied by `r` while that stays finite. `h` must be
/// coprime to `r` and the group order must be `h·r^v`, so the result has
/// order exactly `r` unless `[h]X` is already the identity.
fn clear_to_order_r(
    w: &WeierstrassCurve,
    ext: &ExtField,
    h: &BigUint,
    r: &BigUint,
    x: &WPoint<ExtElem>,
) -> Option<WPoint<ExtElem>> {
    let mut x = w.scalar_mul(ext, h, x);
    if x.is_infinity() {
        return None;
    }
    loop {
        let next = w.scalar_mul(ext, r, &x);
        if next.is_infinity() {
            return Some(x);
        }
        x = next;
    }
}

fn accept_eval(engine: &PairingEngine, p: &HuffPoint<Fp>, q: &EvalPoint, r: u64) -> bool {
    let ext = engine.tower().ext();
    let pt = engine.eval_to_point(q);
    let ctr = OpCounter::new();
    let Ok(rq) = engine.curve().scalar_mul(ext, r, &pt, &ctr) else {
        return false;
    };
    if !engine.curve().on_curve(ext, &pt) || !engine.curve().is_identity(ext, &rq) {
        return false;
    }
    let variant = match q {
        EvalPoint::Special(_) => Variant::Eliminated,
        EvalPoint::General(_) => Variant::Full,
    };
    matches!(engine.reduced_tate(p, q, r, variant), Ok(v) if v.value != ext.one())
}

fn general_eval_point<R: Rng>(
    engine: &PairingEngine,
    n: u64,
    r: u64,
    p: &HuffPoint<Fp>,
    rng: &mut R,
) -> Result<EvalPoint, ParamError> {
    let curve = engine.curve();
    let ext = engine.tower().ext();
    let w = curve.weierstrass();
    let q = curve.field().modulus();
    let rb = BigUint::from(r);
    let h = strip_factor(ext_group_order(q, n, engine.tower().k() as u64), &rb);
    for _ in 0..EVAL_POINT_RETRIES {
        let Some(x) = clear_to_order_r(&w, ext, &h, &rb, &w.random_point(ext, rng)) else {
            continue;
        };
        let Some(pt) = curve.normalize_x(ext, &curve.psi(ext, &x)) else { continue };
        let cand = EvalPoint::General(pt);
        if accept_eval(engine, p, &cand, r) {
            return Ok(cand);
        }
    }
    Err(ParamError::NoPointFound {
        r,
        tries: EVAL_POINT_RETRIES,
    })
}

/// A complete, validated parameter set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingParams {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub n: u64,
    pub r: u64,
    pub k: u64,
    /// Non-residue `β = α²` of `F_{q^{k/2}}`, little-endian.
    pub beta: Vec<u64>,
    pub p: HuffPoint<Fp>,
    pub q_point: EvalPoint,
}

impl PairingParams {
    pub fn curve(&self) -> Result<HuffCurve, ParamError> {
        Ok(HuffCurve::new(self.q, self.a, self.b)?)
    }

    pub fn tower(&self) -> Result<Tower, ParamError> {
        Ok(Tower::with_beta(self.q, self.k as usize, &self.beta)?)
    }

    /// Panics on an unvalidated set.
    pub fn engine(&self) -> PairingEngine {
        PairingEngine::new(self.curve().expect("validated"), self.tower().expect("validated"))
    }

    pub fn q_special(&self) -> Option<SpecialPoint> {
        match &self.q_point {
            EvalPoint::Special(s) => Some(s.clone()),
            EvalPoint::General(_) => None,
        }
    }

    pub fn default_variant(&self) -> Variant {
        match self.q_point {
            EvalPoint::Special(_) => Variant::Eliminated,
            EvalPoint::General(_) => Variant::Full,
        }
    }

    pub fn pair(&self) -> Result<ExtElem, ParamError> {
        Ok(self.engine().reduced_tate(&self.p, &self.q_point, self.r, self.default_variant())?.value)
    }

    /// Checks every invariant; the error names the field and the check.
    pub fn validate(&self) -> Result<(), ParamError> {
        if !is_prime(self.q) || self.q <= 3 {
            return Err(invalid("q", "q is not a prime > 3"));
        }
        if self.q > ENUMERATION_LIMIT {
            return Err(invalid("q", format!("q exceeds the enumeration limit {ENUMERATION_LIMIT}")));
        }
        let curve = self.curve()?;
        if self.n != curve.weierstrass().group_order()? {
            return Err(invalid("n", "n is not the group order"));
        }
        if !is_prime(self.r) || self.r <= 5 {
            return Err(invalid("r", "r is not a prime > 5"));
        }
        if !self.n.is_multiple_of(self.r) {
            return Err(invalid("r", "r does not divide n"));
        }
        if !self.k.is_multiple_of(2) {
            return Err(invalid("k", "k is odd"));
        }
        if embedding_degree(self.q, self.r)? != self.k {
            return Err(invalid("k", "k is not the embedding degree of q modulo r"));
        }
        let tower = self
            .tower()
            .map_err(|e| invalid("beta", e.to_string()))?;
        let f = curve.field();
        let ctr = OpCounter::new();
        if !curve.on_curve(f, &self.p) {
            return Err(invalid("P", "P is not on the curve"));
        }
        if curve.is_identity(f, &self.p) {
            return Err(invalid("P", "P is the identity"));
        }
        if !curve.is_identity(f, &curve.scalar_mul(f, self.r, &self.p, &ctr).map_err(|e| invalid("P", e.to_string()))?) {
            return Err(invalid("P", "[r]P is not the identity"));
        }
        let engine = PairingEngine::new(curve.clone(), tower.clone());
        let ext = tower.ext();
        let qp = engine.eval_to_point(&self.q_point);
        if !curve.on_curve(ext, &qp) {
            return Err(invalid("Q", "Q is not on the curve"));
        }
        if [&qp.x, &qp.y, &qp.z].iter().all(|c| {
            let c = (*c).clone();
            ext.project_base(&c).is_some()
        }) {
            return Err(invalid("Q", "Q lies in E(F_q)"));
        }
        let rq = curve
            .scalar_mul(ext, self.r, &qp, &ctr)
            .map_err(|e| invalid("Q", e.to_string()))?;
        if !curve.is_identity(ext, &rq) {
            return Err(invalid("Q", "[r]Q is not the identity"));
        }
        let e = engine
            .reduced_tate(&self.p, &self.q_point, self.r, self.default_variant())
            .map_err(|e| invalid("Q", e.to_string()))?;
        if e.value == ext.one() {
            return Err(invalid("Q", "e(P, Q) = 1"));
        }
        Ok(())
    }
}

/// Signed trace `q + 1 − n`, for reports.
pub fn trace(q: u64, n: u64) -> i64 {
    let t = BigInt::from(q) + BigInt::one() - BigInt::from(n);
    let mag = t.abs().to_i64().expect("small");
    if t.is_negative() {
        -mag
    } else {
        mag
    }
}
