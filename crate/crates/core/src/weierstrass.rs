//! Reference model `y² = x(x + a)(x + b)` used to cross-check every
//! Huff-side computation.
//!
//! Everything here is affine with explicit case splits and is never
//! op-counted; it is meant to be obviously correct rather than fast.

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fields::{Field, FieldError, Fp, OpCounter, PrimeField, Tower};
use crate::huff::CurveError;

/// Largest modulus for which the group is enumerated.
pub const ENUMERATION_LIMIT: u64 = 10_000;

const AUX_RETRIES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("q = {q} is above the enumeration limit {limit}")]
    TooLarge { q: u64, limit: u64 },
    #[error("support collision: a line function vanished at the evaluation point")]
    SupportCollision,
    #[error("embedding degree data inconsistent: r does not divide q^k - 1")]
    BadExponent,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WPoint<E> {
    Infinity,
    Affine { x: E, y: E },
}

impl<E> WPoint<E> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, WPoint::Infinity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    field: PrimeField,
    a: Fp,
    b: Fp,
}

impl WeierstrassCurve {
    pub fn new(q: u64, a: u64, b: u64) -> Result<Self, CurveError> {
        let field = PrimeField::new(q)?;
        let (a, b) = (field.elem(a), field.elem(b));
        crate::huff::check_smooth(a, b)?;
        Ok(Self { field, a, b })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn a(&self) -> Fp {
        self.a
    }

    pub fn b(&self) -> Fp {
        self.b
    }

    /// `x(x + a)(x + b)`
    pub fn rhs<F: Field>(&self, f: &F, x: &F::Elem) -> F::Elem {
        let ctr = OpCounter::new();
        let xa = f.add(x, &f.from_base(self.a));
        let xb = f.add(x, &f.from_base(self.b));
        f.mul(&f.mul(x, &xa, &ctr), &xb, &ctr)
    }

    pub fn on_curve<F: Field>(&self, f: &F, p: &WPoint<F::Elem>) -> bool {
        match p {
            WPoint::Infinity => true,
            WPoint::Affine { x, y } => f.sqr(y, &OpCounter::new()) == self.rhs(f, x),
        }
    }

    pub fn lift<F: Field>(&self, f: &F, p: &WPoint<Fp>) -> WPoint<F::Elem> {
        match p {
            WPoint::Infinity => WPoint::Infinity,
            WPoint::Affine { x, y } => WPoint::Affine {
                x: f.from_base(*x),
                y: f.from_base(*y),
            },
        }
    }

    pub fn neg<F: Field>(&self, f: &F, p: &WPoint<F::Elem>) -> WPoint<F::Elem> {
        match p {
            WPoint::Infinity => WPoint::Infinity,
            WPoint::Affine { x, y } => WPoint::Affine {
                x: x.clone(),
                y: f.neg(y),
            },
        }
    }

    /// Slope of the chord or tangent through `p1`, `p2`; `None` when the
    /// line is vertical.
    fn slope<F: Field>(&self, f: &F, x1: &F::Elem, y1: &F::Elem, x2: &F::Elem, y2: &F::Elem) -> Option<F::Elem> {
        let ctr = OpCounter::new();
        if x1 != x2 {
            let inv = f.inv(&f.sub(x2, x1), &ctr).expect("x1 != x2");
            return Some(f.mul(&f.sub(y2, y1), &inv, &ctr));
        }
        if f.is_zero(&f.add(y1, y2)) {
            return None;
        }
        // (3x² + 2(a+b)x + ab) / 2y
        let x_sq = f.sqr(x1, &ctr);
        let a2 = f.from_base(self.field.elem(self.a.value() + self.b.value()));
        let a4 = f.from_base(self.field.elem(self.a.value() * self.b.value()));
        let num = f.add(
            &f.add(&f.add(&x_sq, &f.double(&x_sq)), &f.double(&f.mul(&a2, x1, &ctr))),
            &a4,
        );
        let inv = f.inv(&f.double(y1), &ctr).expect("y != 0");
        Some(f.mul(&num, &inv, &ctr))
    }

    pub fn add<F: Field>(&self, f: &F, p1: &WPoint<F::Elem>, p2: &WPoint<F::Elem>) -> WPoint<F::Elem> {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (WPoint::Infinity, p) | (p, WPoint::Infinity) => return p.clone(),
            (WPoint::Affine { x: x1, y: y1 }, WPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let Some(lambda) = self.slope(f, x1, y1, x2, y2) else {
            return WPoint::Infinity;
        };
        let ctr = OpCounter::new();
        let a2 = f.from_base(self.field.elem(self.a.value() + self.b.value()));
        let x3 = f.sub(&f.sub(&f.sub(&f.sqr(&lambda, &ctr), &a2), x1), x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(x1, &x3), &ctr), y1);
        WPoint::Affine { x: x3, y: y3 }
    }

    pub fn scalar_mul<F: Field>(&self, f: &F, n: &BigUint, p: &WPoint<F::Elem>) -> WPoint<F::Elem> {
        let mut acc = WPoint::Infinity;
        for i in (0..n.bits()).rev() {
            acc = self.add(f, &acc, &acc);
            if n.bit(i) {
                acc = self.add(f, &acc, p);
            }
        }
        acc
    }

    /// Order of a base-field point by repeated addition.
    pub fn point_order(&self, p: &WPoint<Fp>) -> u64 {
        let mut acc = p.clone();
        let mut n = 1;
        while !acc.is_infinity() {
            acc = self.add(&self.field, &acc, p);
            n += 1;
        }
        n
    }

    fn check_enumerable(&self) -> Result<(), OracleError> {
        let q = self.field.modulus();
        if q > ENUMERATION_LIMIT {
            return Err(OracleError::TooLarge {
                q,
                limit: ENUMERATION_LIMIT,
            });
        }
        Ok(())
    }

    /// `roots[s]` lists every `v` with `v² = s`.
    fn square_roots(&self) -> Vec<Vec<u64>> {
        let q = self.field.modulus();
        let mut roots = vec![Vec::new(); q as usize];
        for v in 0..q {
            roots[(v * v % q) as usize].push(v);
        }
        roots
    }

    /// Every point of `E(F_q)`, infinity first, then affine points ordered
    /// by `(x, y)`.
    pub fn enumerate_group(&self) -> Result<Vec<WPoint<Fp>>, OracleError> {
        self.check_enumerable()?;
        let roots = self.square_roots();
        let mut out = vec![WPoint::Infinity];
        for u in 0..self.field.modulus() {
            let x = self.field.elem(u);
            let rhs = self.rhs(&self.field, &x);
            for &v in &roots[rhs.value() as usize] {
                out.push(WPoint::Affine {
                    x,
                    y: self.field.elem(v),
                });
            }
        }
        Ok(out)
    }

    pub fn group_order(&self) -> Result<u64, OracleError> {
        self.check_enumerable()?;
        let roots = self.square_roots();
        let affine: usize = (0..self.field.modulus())
            .map(|u| {
                let x = self.field.elem(u);
                roots[self.rhs(&self.field, &x).value() as usize].len()
            })
            .sum();
        Ok(affine as u64 + 1)
    }

    /// Value at `q` of the line through `p1` and `p2` (tangent when equal):
    /// `λ(x_Q - x_1) + (y_1 - y_Q)`, or `x_Q - x_1` for a vertical line.
    pub fn line_eval<F: Field>(
        &self,
        f: &F,
        p1: &WPoint<F::Elem>,
        p2: &WPoint<F::Elem>,
        q: &WPoint<F::Elem>,
    ) -> Result<F::Elem, OracleError> {
        let (WPoint::Affine { x: x1, y: y1 }, WPoint::Affine { x: x2, y: y2 }) = (p1, p2) else {
            return Ok(f.one());
        };
        let WPoint::Affine { x: xq, y: yq } = q else {
            return Err(OracleError::SupportCollision);
        };
        let value = match self.slope(f, x1, y1, x2, y2) {
            Some(lambda) => f.add(
                &f.mul(&lambda, &f.sub(xq, x1), &OpCounter::new()),
                &f.sub(y1, yq),
            ),
            None => f.sub(xq, x1),
        };
        if f.is_zero(&value) {
            return Err(OracleError::SupportCollision);
        }
        Ok(value)
    }

    /// Vertical line through `s` evaluated at `q`; `1` when `s` is infinity.
    fn vertical_eval<F: Field>(&self, f: &F, s: &WPoint<F::Elem>, q: &WPoint<F::Elem>) -> Result<F::Elem, OracleError> {
        let WPoint::Affine { x: xs, .. } = s else {
            return Ok(f.one());
        };
        let WPoint::Affine { x: xq, .. } = q else {
            return Err(OracleError::SupportCollision);
        };
        let v = f.sub(xq, xs);
        if f.is_zero(&v) {
            return Err(OracleError::SupportCollision);
        }
        Ok(v)
    }

    /// `g_{P1,P2}(Q) = l_{P1,P2}(Q) / v_{P1+P2}(Q)` as a (numerator,
    /// denominator) pair, together with `P1 + P2`.
    #[allow(clippy::type_complexity)]
    pub fn g_eval<F: Field>(
        &self,
        f: &F,
        p1: &WPoint<F::Elem>,
        p2: &WPoint<F::Elem>,
        q: &WPoint<F::Elem>,
    ) -> Result<(F::Elem, F::Elem, WPoint<F::Elem>), OracleError> {
        let l = self.line_eval(f, p1, p2, q)?;
        let s = self.add(f, p1, p2);
        let v = self.vertical_eval(f, &s, q)?;
        Ok((l, v, s))
    }

    /// Miller's algorithm for `f_{m,P}(Q)` with numerator and denominator
    /// kept apart.
    pub fn miller<F: Field>(
        &self,
        f: &F,
        p: &WPoint<F::Elem>,
        q: &WPoint<F::Elem>,
        m: u64,
    ) -> Result<(F::Elem, F::Elem), OracleError> {
        let ctr = OpCounter::new();
        let mut num = f.one();
        let mut den = f.one();
        if m == 0 {
            return Ok((num, den));
        }
        let mut r = p.clone();
        for i in (0..63 - m.leading_zeros()).rev() {
            let (l, v, s) = self.g_eval(f, &r, &r, q)?;
            num = f.mul(&f.sqr(&num, &ctr), &l, &ctr);
            den = f.mul(&f.sqr(&den, &ctr), &v, &ctr);
            r = s;
            if (m >> i) & 1 == 1 {
                let (l, v, s) = self.g_eval(f, &r, p, q)?;
                num = f.mul(&num, &l, &ctr);
                den = f.mul(&den, &v, &ctr);
                r = s;
            }
        }
        Ok((num, den))
    }

    fn final_exponent(&self, tower: &Tower, r: u64) -> Result<BigUint, OracleError> {
        let order = tower.ext().order() - 1u32;
        let r = BigUint::from(r);
        if &order % &r != BigUint::from(0u32) {
            return Err(OracleError::BadExponent);
        }
        Ok(order / r)
    }

    /// Reduced Tate pairing `f_{r,P}(D_Q)^{(q^k-1)/r}`. Uses `D_Q = (Q) - (O)`
    /// and falls back to `(Q + S) - (S)` for seeded random `S` on a support
    /// collision.
    pub fn tate(&self, tower: &Tower, p: &WPoint<Fp>, q: &WPoint<crate::fields::ExtElem>, r: u64) -> Result<crate::fields::ExtElem, OracleError> {
        let ext = tower.ext();
        if p.is_infinity() || q.is_infinity() {
            return Ok(ext.one());
        }
        let e = self.final_exponent(tower, r)?;
        let p_ext = self.lift(ext, p);
        let ctr = OpCounter::new();
        let value = match self.miller(ext, &p_ext, q, r) {
            Ok((num, den)) => f_div(ext, &num, &den)?,
            Err(OracleError::SupportCollision) => {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                let mut found = None;
                for _ in 0..AUX_RETRIES {
                    let s = self.random_point(ext, &mut rng);
                    if let Ok(v) = self.eval_shifted(ext, &p_ext, q, &s, r) {
                        found = Some(v);
                        break;
                    }
                }
                found.ok_or(OracleError::SupportCollision)?
            }
            Err(e) => return Err(e),
        };
        Ok(ext.pow(&value, &e, &ctr))
    }

    /// `f_{r,P}((Q + S) - (S))` before final exponentiation.
    pub fn eval_shifted<F: Field>(
        &self,
        f: &F,
        p: &WPoint<F::Elem>,
        q: &WPoint<F::Elem>,
        s: &WPoint<F::Elem>,
        r: u64,
    ) -> Result<F::Elem, OracleError> {
        let qs = self.add(f, q, s);
        let (n1, d1) = self.miller(f, p, &qs, r)?;
        let (n2, d2) = self.miller(f, p, s, r)?;
        let ctr = OpCounter::new();
        f_div(f, &f.mul(&n1, &d2, &ctr), &f.mul(&d1, &n2, &ctr))
    }

    pub fn random_point<F: Field, R: rand::Rng>(&self, f: &F, rng: &mut R) -> WPoint<F::Elem> {
        loop {
            let x = f.random(rng);
            let rhs = self.rhs(f, &x);
            if let Some(y) = f.sqrt(&rhs) {
                let y = if rng.gen::<bool>() { f.neg(&y) } else { y };
                return WPoint::Affine { x, y };
            }
        }
    }
}

fn f_div<F: Field>(f: &F, num: &F::Elem, den: &F::Elem) -> Result<F::Elem, OracleError> {
    let ctr = OpCounter::new();
    if f.is_zero(num) {
        return Err(OracleError::SupportCollision);
    }
    Ok(f.mul(num, &f.inv(den, &ctr).map_err(|_| OracleError::SupportCollision)?, &ctr))
}
