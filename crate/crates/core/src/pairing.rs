//! Reduced Tate pairing on a generalized Huff curve.
//!
//! Two Miller loops share the same point arithmetic. The eliminated loop
//! evaluates at `Q = (1 : y_Q : z_Q·α)` and drops every factor that lies in
//! `F_{q^{k/2}}`. The full loop keeps numerator and denominator for any `Q`
//! and serves as a reference.

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fields::{ExtElem, Field, FieldError, Fp, OpCounter, OpReport, PolyElem, Tower};
use crate::huff::{AddScratch, CurveError, DoublingScratch, HuffCurve, HuffPoint};

const SHIFT_RETRIES: usize = 16;
const SHIFT_SEED: u64 = 0x7a7e;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("support collision: a line function vanished at the evaluation point")]
    SupportCollision,
    #[error("Q is not of the form (1 : y : z*alpha); use the full Miller loop")]
    NotSpecialForm,
    #[error("r = {r} does not divide q^k - 1")]
    BadExponent { r: u64 },
    #[error("final exponentiation of zero")]
    ZeroValue,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `(1 : y : z·α)` with `y, z ∈ F_{q^{k/2}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialPoint {
    pub y: PolyElem,
    pub z: PolyElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalPoint {
    Special(SpecialPoint),
    General(HuffPoint<ExtElem>),
}

/// `y'_Q = y_Q·X_P − Y_P` and `z'_Q = z_Q·X_P`, the latter standing for
/// the α-multiple `z_Q·α·X_P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecomputedEval {
    pub y_prime: PolyElem,
    pub z_prime: PolyElem,
}

#[derive(Clone, Debug)]
pub struct MillerState {
    pub f: ExtElem,
    /// Only tracked by the full loop.
    pub f_den: Option<ExtElem>,
    pub r: HuffPoint<Fp>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Doubling,
    Addition,
    /// The addition `R + P` with `R = −P` that ends every loop.
    FinalAddition,
}

#[derive(Clone, Debug)]
pub struct MillerOutput {
    pub num: ExtElem,
    pub den: ExtElem,
    pub steps: Vec<(StepKind, OpReport)>,
    pub ops: OpReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Eliminated,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingResult {
    pub value: ExtElem,
    /// Miller loop only.
    pub ops: OpReport,
    pub final_exp_ops: OpReport,
}

/// Huff curve together with the tower holding `Q`.
#[derive(Clone, Debug)]
pub struct PairingEngine {
    curve: HuffCurve,
    tower: Tower,
}

impl PairingEngine {
    pub fn new(curve: HuffCurve, tower: Tower) -> Self {
        assert_eq!(curve.field(), tower.base(), "curve and tower over different fields");
        Self { curve, tower }
    }

    pub fn curve(&self) -> &HuffCurve {
        &self.curve
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// `Q` as a projective point over `F_{q^k}`.
    pub fn special_to_point(&self, q: &SpecialPoint) -> HuffPoint<ExtElem> {
        let ext = self.tower.ext();
        HuffPoint::new(ext.one(), ext.from_sub(q.y.clone()), ext.alpha_multiple(q.z.clone()))
    }

    pub fn eval_to_point(&self, q: &EvalPoint) -> HuffPoint<ExtElem> {
        match q {
            EvalPoint::Special(s) => self.special_to_point(s),
            EvalPoint::General(p) => p.clone(),
        }
    }

    /// Recognizes `(X : Y : Z)` with `Y/X ∈ F_{q^{k/2}}` and `Z/X` a pure
    /// α-multiple.
    pub fn as_special(&self, q: &HuffPoint<ExtElem>) -> Option<SpecialPoint> {
        let ext = self.tower.ext();
        let xi = ext.inv(&q.x, &OpCounter::new()).ok()?;
        let ctr = OpCounter::new();
        let y = ext.mul(&q.y, &xi, &ctr);
        let z = ext.mul(&q.z, &xi, &ctr);
        if !y.in_subfield() || !z.is_pure_alpha() {
            return None;
        }
        Some(SpecialPoint {
            y: y.u().clone(),
            z: z.v().clone(),
        })
    }

    pub fn precompute_eval(&self, p: &HuffPoint<Fp>, q: &SpecialPoint) -> PrecomputedEval {
        let sub = self.tower.sub();
        let ctr = OpCounter::new();
        PrecomputedEval {
            y_prime: sub.sub(&sub.mul_base(&q.y, p.x, &ctr), &sub.from_base(p.y)),
            z_prime: sub.mul_base(&q.z, p.x, &ctr),
        }
    }

    /// `g_{R,P}(Q) = (z'_Q − Z_P)(m8 − m1 + m2) − y'_Q(m9 + m1 − m3)` with
    /// `m8 = (X_R + Y_R)(X_P − Y_P)` and `m9 = (X_P + Z_P)(Z_R − X_R)`.
    /// Costs `(k + 3)m`.
    pub fn line_add_eval(
        &self,
        r: &HuffPoint<Fp>,
        p: &HuffPoint<Fp>,
        scratch: &AddScratch<Fp>,
        pre: &PrecomputedEval,
        ctr: &OpCounter,
    ) -> Result<ExtElem, PairingError> {
        let fq = self.curve.field();
        let sub = self.tower.sub();
        let m8 = fq.mul(&fq.add(&r.x, &r.y), &fq.sub(&p.x, &p.y), ctr);
        let m9 = fq.mul(&fq.add(&p.x, &p.z), &fq.sub(&r.z, &r.x), ctr);
        let l1 = fq.add(&fq.sub(&m8, &scratch.m1), &scratch.m2);
        let l2 = fq.sub(&fq.add(&m9, &scratch.m1), &scratch.m3);
        let v = sub.mul_base(&pre.z_prime, l1, ctr);
        let zl1 = fq.mul(&p.z, &l1, ctr);
        let yl2 = sub.mul_base(&pre.y_prime, l2, ctr);
        let u = sub.sub(&sub.neg(&sub.from_base(zl1)), &yl2);
        self.nonzero(self.tower.ext().from_parts(u, v))
    }

    /// Tangent line at `R` in the chart `X = 1`:
    /// `g_{R,R}(Q) = z_Q·α·X_R·B − Z_R·B − y_Q·X_R·A + Y_R·A` with
    /// `A = 2a·X_R·Y_R − bX_R² + Z_R²` and `B = 2X_R·Z_R − 2Y_R·Z_R`.
    /// Costs `(k + 5)m + 1c` on top of the doubling scratch.
    pub fn line_dbl_eval(
        &self,
        r: &HuffPoint<Fp>,
        scratch: &DoublingScratch<Fp>,
        q: &SpecialPoint,
        ctr: &OpCounter,
    ) -> Result<ExtElem, PairingError> {
        let fq = self.curve.field();
        let sub = self.tower.sub();
        let xy = fq.mul(&r.x, &r.y, ctr);
        let axy = fq.mul_const(&xy, self.curve.a(), ctr);
        let a = fq.add(&fq.sub(&fq.double(&axy), &scratch.bx_sq), &scratch.z_sq);
        let b = fq.sub(&scratch.two_xz, &scratch.two_yz);
        let xb = fq.mul(&r.x, &b, ctr);
        let zb = fq.mul(&r.z, &b, ctr);
        let xa = fq.mul(&r.x, &a, ctr);
        let ya = fq.mul(&r.y, &a, ctr);
        let v = sub.mul_base(&q.z, xb, ctr);
        let yxa = sub.mul_base(&q.y, xa, ctr);
        let u = sub.sub(&sub.from_base(fq.sub(&ya, &zb)), &yxa);
        self.nonzero(self.tower.ext().from_parts(u, v))
    }

    fn nonzero(&self, g: ExtElem) -> Result<ExtElem, PairingError> {
        if self.tower.ext().is_zero(&g) {
            return Err(PairingError::SupportCollision);
        }
        Ok(g)
    }

    /// `f ← f²·g_{R,R}(Q)`, `R ← 2R`.
    pub fn doubling_step(&self, st: &mut MillerState, q: &SpecialPoint, ctr: &OpCounter) -> Result<(), PairingError> {
        let ext = self.tower.ext();
        let (r2, scratch) = self.curve.dbl(self.curve.field(), &st.r, ctr)?;
        let g = self.line_dbl_eval(&st.r, &scratch, q, ctr)?;
        st.f = ext.mul(&ext.sqr(&st.f, ctr), &g, ctr);
        st.r = r2;
        Ok(())
    }

    /// `f ← f·g_{R,P}(Q)`, `R ← R + P`.
    pub fn addition_step(
        &self,
        st: &mut MillerState,
        p: &HuffPoint<Fp>,
        pre: &PrecomputedEval,
        ctr: &OpCounter,
    ) -> Result<(), PairingError> {
        let ext = self.tower.ext();
        let (sum, scratch) = self.curve.add_with_scratch(self.curve.field(), &st.r, p, ctr)?;
        let g = self.line_add_eval(&st.r, p, &scratch, pre, ctr)?;
        st.f = ext.mul(&st.f, &g, ctr);
        st.r = sum;
        Ok(())
    }

    /// Miller loop with denominator elimination. Returns `f_{r,P}(Q)` up to
    /// factors in `F_{q^{k/2}}`.
    pub fn miller_loop_eliminated(&self, p: &HuffPoint<Fp>, q: &SpecialPoint, r: u64) -> Result<MillerOutput, PairingError> {
        let ext = self.tower.ext();
        let fq = self.curve.field();
        let ctr = OpCounter::new();
        let mut steps = Vec::new();
        let mut st = MillerState {
            f: ext.one(),
            f_den: None,
            r: p.clone(),
        };
        if r <= 1 {
            return Ok(MillerOutput {
                num: st.f,
                den: ext.one(),
                steps,
                ops: ctr.report(),
            });
        }
        let pre = self.precompute_eval(p, q);
        let neg_p = self.curve.neg(fq, p);
        for i in (0..63 - r.leading_zeros()).rev() {
            let scope = ctr.scope();
            self.doubling_step(&mut st, q, &ctr)?;
            steps.push((StepKind::Doubling, scope.delta()));
            if (r >> i) & 1 == 1 {
                let scope = ctr.scope();
                if self.curve.eq_projective(fq, &st.r, &neg_p) {
                    // The line through −P and P is y = Y_P/X_P and its value
                    // at Q lies in the subfield.
                    st.r = self.curve.add(fq, &st.r, p, &ctr)?;
                    steps.push((StepKind::FinalAddition, scope.delta()));
                } else {
                    self.addition_step(&mut st, p, &pre, &ctr)?;
                    steps.push((StepKind::Addition, scope.delta()));
                }
            }
        }
        Ok(MillerOutput {
            num: st.f,
            den: ext.one(),
            steps,
            ops: ctr.report(),
        })
    }

    /// Miller loop keeping every factor, evaluated at `Q = (X : Y : Z)` with
    /// `X ≠ 0` in the chart `X = 1`.
    pub fn miller_loop_full(&self, p: &HuffPoint<Fp>, q: &HuffPoint<ExtElem>, r: u64) -> Result<MillerOutput, PairingError> {
        let ext = self.tower.ext();
        let fq = self.curve.field();
        let ctr = OpCounter::new();
        let Some(qn) = self.curve.normalize_x(ext, q) else {
            return Err(PairingError::SupportCollision);
        };
        let (y, z) = (qn.y, qn.z);
        let mut steps = Vec::new();
        let mut st = MillerState {
            f: ext.one(),
            f_den: Some(ext.one()),
            r: p.clone(),
        };
        let mut den = ext.one();
        if r <= 1 {
            return Ok(MillerOutput {
                num: st.f,
                den,
                steps,
                ops: ctr.report(),
            });
        }
        let neg_p = self.curve.neg(fq, p);
        // (zX_T − Z_T)B − (yX_T − Y_T)A over B·X_T, then the vertical at S.
        let line = |t: &HuffPoint<Fp>, a: Fp, b: Fp, s: &HuffPoint<Fp>| -> Result<(ExtElem, ExtElem), PairingError> {
            let zt = ext.sub(&ext.mul_base(&z, t.x, &ctr), &ext.from_base(t.z));
            let yt = ext.sub(&ext.mul_base(&y, t.x, &ctr), &ext.from_base(t.y));
            let l_num = ext.sub(&ext.mul_base(&zt, b, &ctr), &ext.mul_base(&yt, a, &ctr));
            let l_den = ext.from_base(fq.mul(&b, &t.x, &ctr));
            let v_num = ext.from_base(s.x);
            let v_den = ext.sub(&ext.mul_base(&y, s.x, &ctr), &ext.from_base(s.y));
            let num = ext.mul(&l_num, &v_num, &ctr);
            let den = ext.mul(&l_den, &v_den, &ctr);
            if ext.is_zero(&num) || ext.is_zero(&den) {
                return Err(PairingError::SupportCollision);
            }
            Ok((num, den))
        };
        for i in (0..63 - r.leading_zeros()).rev() {
            let scope = ctr.scope();
            let rr = st.r.clone();
            let (r2, s) = self.curve.dbl(fq, &rr, &ctr)?;
            let xy = fq.mul(&rr.x, &rr.y, &ctr);
            let a = fq.add(
                &fq.sub(&fq.double(&fq.mul_const(&xy, self.curve.a(), &ctr)), &s.bx_sq),
                &s.z_sq,
            );
            let b = fq.sub(&s.two_xz, &s.two_yz);
            let (gn, gd) = line(&rr, a, b, &r2)?;
            st.f = ext.mul(&ext.sqr(&st.f, &ctr), &gn, &ctr);
            den = ext.mul(&ext.sqr(&den, &ctr), &gd, &ctr);
            st.r = r2;
            steps.push((StepKind::Doubling, scope.delta()));
            if (r >> i) & 1 == 1 {
                let scope = ctr.scope();
                let rr = st.r.clone();
                let sum = self.curve.add(fq, &rr, p, &ctr)?;
                let (gn, gd, kind) = if self.curve.eq_projective(fq, &rr, &neg_p) {
                    // l_{−P,P} / l_{O,O}: the line y = Y_P/X_P over the
                    // tangent Y = X at O.
                    let gn = ext.sub(&ext.mul_base(&y, p.x, &ctr), &ext.from_base(p.y));
                    let gd = ext.mul_base(&ext.sub(&y, &ext.one()), p.x, &ctr);
                    if ext.is_zero(&gn) || ext.is_zero(&gd) {
                        return Err(PairingError::SupportCollision);
                    }
                    (gn, gd, StepKind::FinalAddition)
                } else {
                    let a = fq.sub(&fq.mul(&rr.z, &p.x, &ctr), &fq.mul(&p.z, &rr.x, &ctr));
                    let b = fq.sub(&fq.mul(&rr.y, &p.x, &ctr), &fq.mul(&p.y, &rr.x, &ctr));
                    let (gn, gd) = line(p, a, b, &sum)?;
                    (gn, gd, StepKind::Addition)
                };
                st.f = ext.mul(&st.f, &gn, &ctr);
                den = ext.mul(&den, &gd, &ctr);
                st.r = sum;
                steps.push((kind, scope.delta()));
            }
        }
        st.f_den = Some(den.clone());
        Ok(MillerOutput {
            num: st.f,
            den,
            steps,
            ops: ctr.report(),
        })
    }

    /// `f^{(q^k − 1)/r}`.
    pub fn final_exponentiation(&self, f: &ExtElem, r: u64, ctr: &OpCounter) -> Result<ExtElem, PairingError> {
        let ext = self.tower.ext();
        if ext.is_zero(f) {
            return Err(PairingError::ZeroValue);
        }
        Ok(ext.pow(f, &self.final_exponent(r)?, ctr))
    }

    pub fn final_exponent(&self, r: u64) -> Result<BigUint, PairingError> {
        let order = self.tower.ext().order() - 1u32;
        let rb = BigUint::from(r);
        if r == 0 || &order % &rb != BigUint::from(0u32) {
            return Err(PairingError::BadExponent { r });
        }
        Ok(order / rb)
    }

    /// `e_r(P, Q)`. The full variant retries with `D_Q ~ (Q + S) − (S)` on
    /// a support collision.
    pub fn reduced_tate(&self, p: &HuffPoint<Fp>, q: &EvalPoint, r: u64, variant: Variant) -> Result<PairingResult, PairingError> {
        let ext = self.tower.ext();
        let fq = self.curve.field();
        let q_point = self.eval_to_point(q);
        if self.curve.is_identity(fq, p) || self.curve.is_identity(ext, &q_point) {
            self.final_exponent(r)?;
            return Ok(PairingResult {
                value: ext.one(),
                ops: OpReport::default(),
                final_exp_ops: OpReport::default(),
            });
        }
        let (f, ops) = match variant {
            Variant::Eliminated => {
                let special = match q {
                    EvalPoint::Special(s) => s.clone(),
                    EvalPoint::General(g) => self.as_special(g).ok_or(PairingError::NotSpecialForm)?,
                };
                let out = self.miller_loop_eliminated(p, &special, r)?;
                (out.num, out.ops)
            }
            Variant::Full => match self.miller_loop_full(p, &q_point, r) {
                Ok(out) => (self.divide(&out.num, &out.den)?, out.ops),
                Err(PairingError::SupportCollision) => self.full_shifted_retry(p, &q_point, r)?,
                Err(e) => return Err(e),
            },
        };
        let ctr = OpCounter::new();
        let value = self.final_exponentiation(&f, r, &ctr)?;
        Ok(PairingResult {
            value,
            ops,
            final_exp_ops: ctr.report(),
        })
    }

    fn full_shifted_retry(&self, p: &HuffPoint<Fp>, q: &HuffPoint<ExtElem>, r: u64) -> Result<(ExtElem, OpReport), PairingError> {
        let mut rng = ChaCha8Rng::seed_from_u64(SHIFT_SEED);
        for _ in 0..SHIFT_RETRIES {
            let s = self.random_ext_point(&mut rng);
            if let Ok(v) = self.full_shifted(p, q, &s, r) {
                return Ok(v);
            }
        }
        Err(PairingError::SupportCollision)
    }

    /// `f_{r,P}(Q + S) / f_{r,P}(S)`, unexponentiated.
    pub fn full_shifted(
        &self,
        p: &HuffPoint<Fp>,
        q: &HuffPoint<ExtElem>,
        s: &HuffPoint<ExtElem>,
        r: u64,
    ) -> Result<(ExtElem, OpReport), PairingError> {
        let ext = self.tower.ext();
        let qs = self.curve.add(ext, q, s, &OpCounter::new())?;
        let a = self.miller_loop_full(p, &qs, r)?;
        let b = self.miller_loop_full(p, s, r)?;
        let ctr = OpCounter::new();
        let num = ext.mul(&a.num, &b.den, &ctr);
        let den = ext.mul(&a.den, &b.num, &ctr);
        Ok((self.divide(&num, &den)?, a.ops + b.ops))
    }

    fn divide(&self, num: &ExtElem, den: &ExtElem) -> Result<ExtElem, PairingError> {
        let ext = self.tower.ext();
        let ctr = OpCounter::new();
        if ext.is_zero(num) {
            return Err(PairingError::SupportCollision);
        }
        let di = ext.inv(den, &ctr).map_err(|_| PairingError::SupportCollision)?;
        Ok(ext.mul(num, &di, &ctr))
    }

    /// A uniformly chosen affine point `(1 : y : z)` over `F_{q^k}`.
    pub fn random_ext_point<R: rand::Rng>(&self, rng: &mut R) -> HuffPoint<ExtElem> {
        let ext = self.tower.ext();
        loop {
            let y = ext.random(rng);
            if let Some(z) = self.curve.chart_z(ext, &y) {
                let z = if rng.gen::<bool>() { ext.neg(&z) } else { z };
                return HuffPoint::new(ext.one(), y, z);
            }
        }
    }
}

/// Measured costs of the individual operations of one Miller loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepCosts {
    pub k: u64,
    pub point_add: OpReport,
    pub point_dbl: OpReport,
    pub add_step: OpReport,
    pub dbl_step: OpReport,
    pub miller: OpReport,
    pub doublings: usize,
    pub additions: usize,
}

impl PairingEngine {
    /// Counts each operation once on fixed inputs (`R = P` for doubling,
    /// `R = [2]P` for addition) plus one whole eliminated Miller loop.
    pub fn measure_costs(&self, p: &HuffPoint<Fp>, q: &SpecialPoint, r: u64) -> Result<StepCosts, PairingError> {
        let fq = self.curve.field();
        let ext = self.tower.ext();
        let ctr = OpCounter::new();
        let (p2, _) = self.curve.dbl(fq, p, &OpCounter::new())?;

        let scope = ctr.scope();
        self.curve.add(fq, &p2, p, &ctr)?;
        let point_add = scope.delta();
        let scope = ctr.scope();
        self.curve.dbl(fq, p, &ctr)?;
        let point_dbl = scope.delta();

        let pre = self.precompute_eval(p, q);
        let mut st = MillerState {
            f: ext.one(),
            f_den: None,
            r: p2,
        };
        let scope = ctr.scope();
        self.addition_step(&mut st, p, &pre, &ctr)?;
        let add_step = scope.delta();
        st.r = p.clone();
        let scope = ctr.scope();
        self.doubling_step(&mut st, q, &ctr)?;
        let dbl_step = scope.delta();

        let out = self.miller_loop_eliminated(p, q, r)?;
        Ok(StepCosts {
            k: self.tower.k() as u64,
            point_add,
            point_dbl,
            add_step,
            dbl_step,
            miller: out.ops,
            doublings: out.steps.iter().filter(|s| s.0 == StepKind::Doubling).count(),
            additions: out.steps.iter().filter(|s| s.0 != StepKind::Doubling).count(),
        })
    }
}
