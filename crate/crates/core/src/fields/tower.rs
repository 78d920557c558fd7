//! The tower `F_q ⊂ F_{q^{k/2}} ⊂ F_{q^k} = F_{q^{k/2}}(α)`, `α² = β`.

use std::fmt;

use super::{find_quadratic_nonresidue, Field, FieldError, Fp, Op, OpCounter, PolyElem, PolyField, PrimeField};

/// `u + v·α` with `u, v ∈ F_{q^{k/2}}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtElem {
    pub(crate) u: PolyElem,
    pub(crate) v: PolyElem,
}

impl ExtElem {
    pub fn u(&self) -> &PolyElem {
        &self.u
    }

    pub fn v(&self) -> &PolyElem {
        &self.v
    }

    /// True iff the element lies in `F_{q^{k/2}}` (no α part).
    pub fn in_subfield(&self) -> bool {
        self.v.0.iter().all(|&c| c == 0)
    }

    /// True iff the element is a pure α-multiple.
    pub fn is_pure_alpha(&self) -> bool {
        self.u.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}+{:?}α", self.u, self.v)
    }
}

/// The quadratic top layer. Its `mul`/`sqr`/`inv` are tallied as a single
/// `M`/`S`/`I`; the subfield work inside them is not counted separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    sub: PolyField,
    beta: PolyElem,
}

impl ExtField {
    pub fn subfield(&self) -> &PolyField {
        &self.sub
    }

    pub fn beta(&self) -> &PolyElem {
        &self.beta
    }

    pub fn alpha(&self) -> ExtElem {
        ExtElem {
            u: self.sub.zero(),
            v: self.sub.one(),
        }
    }

    pub fn from_parts(&self, u: PolyElem, v: PolyElem) -> ExtElem {
        ExtElem { u, v }
    }

    pub fn from_sub(&self, u: PolyElem) -> ExtElem {
        ExtElem {
            u,
            v: self.sub.zero(),
        }
    }

    /// `w·α` for `w ∈ F_{q^{k/2}}`.
    pub fn alpha_multiple(&self, w: PolyElem) -> ExtElem {
        ExtElem {
            u: self.sub.zero(),
            v: w,
        }
    }

    pub fn project_sub(&self, a: &ExtElem) -> Option<PolyElem> {
        a.in_subfield().then(|| a.u.clone())
    }

    pub fn project_base(&self, a: &ExtElem) -> Option<Fp> {
        self.project_sub(a).and_then(|u| self.sub.project_base(&u))
    }

    /// The conjugate `u - v·α` (the `q^{k/2}`-power Frobenius).
    pub fn conjugate(&self, a: &ExtElem) -> ExtElem {
        ExtElem {
            u: a.u.clone(),
            v: self.sub.neg(&a.v),
        }
    }

    fn mul_raw(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let s = &self.sub;
        let uu = s.mul_raw(&a.u, &b.u);
        let vv = s.mul_raw(&a.v, &b.v);
        let cross = s.sub(
            &s.sub(
                &s.mul_raw(&s.add(&a.u, &a.v), &s.add(&b.u, &b.v)),
                &uu,
            ),
            &vv,
        );
        ExtElem {
            u: s.add(&uu, &s.mul_raw(&vv, &self.beta)),
            v: cross,
        }
    }
}

impl Field for ExtField {
    type Elem = ExtElem;

    fn base(&self) -> &PrimeField {
        self.sub.base()
    }

    fn degree(&self) -> usize {
        2 * self.sub.degree()
    }

    fn zero(&self) -> ExtElem {
        ExtElem {
            u: self.sub.zero(),
            v: self.sub.zero(),
        }
    }

    fn one(&self) -> ExtElem {
        ExtElem {
            u: self.sub.one(),
            v: self.sub.zero(),
        }
    }

    fn is_zero(&self, a: &ExtElem) -> bool {
        self.sub.is_zero(&a.u) && self.sub.is_zero(&a.v)
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            u: self.sub.add(&a.u, &b.u),
            v: self.sub.add(&a.v, &b.v),
        }
    }

    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            u: self.sub.sub(&a.u, &b.u),
            v: self.sub.sub(&a.v, &b.v),
        }
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem {
            u: self.sub.neg(&a.u),
            v: self.sub.neg(&a.v),
        }
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem, ctr: &OpCounter) -> ExtElem {
        ctr.record(Op::ExtMul, 1);
        self.mul_raw(a, b)
    }

    fn sqr(&self, a: &ExtElem, ctr: &OpCounter) -> ExtElem {
        ctr.record(Op::ExtSquare, 1);
        self.mul_raw(a, a)
    }

    fn mul_base(&self, a: &ExtElem, s: Fp, ctr: &OpCounter) -> ExtElem {
        ctr.record(Op::Mul, self.degree() as u64);
        ExtElem {
            u: self.sub.scale_raw(&a.u, s.value()),
            v: self.sub.scale_raw(&a.v, s.value()),
        }
    }

    fn mul_const(&self, a: &ExtElem, s: Fp, ctr: &OpCounter) -> ExtElem {
        ctr.record(Op::Const, 1);
        ExtElem {
            u: self.sub.scale_raw(&a.u, s.value()),
            v: self.sub.scale_raw(&a.v, s.value()),
        }
    }

    /// `(u + vα)^{-1} = (u - vα) / (u² - βv²)`.
    fn inv(&self, a: &ExtElem, ctr: &OpCounter) -> Result<ExtElem, FieldError> {
        let s = &self.sub;
        let norm = s.sub(
            &s.mul_raw(&a.u, &a.u),
            &s.mul_raw(&self.beta, &s.mul_raw(&a.v, &a.v)),
        );
        let n_inv = s.inv_raw(&norm)?;
        ctr.record(Op::ExtInv, 1);
        Ok(ExtElem {
            u: s.mul_raw(&a.u, &n_inv),
            v: s.neg(&s.mul_raw(&a.v, &n_inv)),
        })
    }

    fn from_base(&self, s: Fp) -> ExtElem {
        self.from_sub(self.sub.from_base(s))
    }

    /// `[u_0, .., u_{d-1}, v_0, .., v_{d-1}]`.
    fn coeffs(&self, a: &ExtElem) -> Vec<u64> {
        let mut out = a.u.0.clone();
        out.extend_from_slice(&a.v.0);
        out
    }

    fn from_coeffs(&self, coeffs: &[u64]) -> Result<ExtElem, FieldError> {
        let d = self.sub.degree();
        if coeffs.len() != 2 * d {
            return Err(FieldError::CoefficientCount {
                expected: 2 * d,
                got: coeffs.len(),
            });
        }
        Ok(ExtElem {
            u: self.sub.from_coeffs(&coeffs[..d])?,
            v: self.sub.from_coeffs(&coeffs[d..])?,
        })
    }
}

/// Field tower descriptor for an even embedding degree `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    base: PrimeField,
    ext: ExtField,
    k: usize,
}

impl Tower {
    /// Builds the tower with `β` the first non-residue of `F_{q^{k/2}}`.
    pub fn new(q: u64, k: usize) -> Result<Self, FieldError> {
        let (base, sub) = Self::layers(q, k)?;
        let beta = find_quadratic_nonresidue(&sub);
        Ok(Self {
            base,
            ext: ExtField { sub, beta },
            k,
        })
    }

    /// Builds the tower with a caller-supplied `β`, which must be a
    /// non-residue of `F_{q^{k/2}}`.
    pub fn with_beta(q: u64, k: usize, beta: &[u64]) -> Result<Self, FieldError> {
        let (base, sub) = Self::layers(q, k)?;
        let beta = sub.from_coeffs(beta)?;
        if sub.is_square(&beta) {
            return Err(FieldError::NotNonResidue(format!("{:?}", beta.0)));
        }
        Ok(Self {
            base,
            ext: ExtField { sub, beta },
            k,
        })
    }

    fn layers(q: u64, k: usize) -> Result<(PrimeField, PolyField), FieldError> {
        if k < 2 {
            return Err(FieldError::DegreeTooSmall);
        }
        if !k.is_multiple_of(2) {
            return Err(FieldError::OddDegree(k));
        }
        let base = PrimeField::new(q)?;
        let sub = PolyField::find(base, k / 2)?;
        Ok((base, sub))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn sub(&self) -> &PolyField {
        &self.ext.sub
    }

    pub fn ext(&self) -> &ExtField {
        &self.ext
    }

    pub fn beta(&self) -> &PolyElem {
        &self.ext.beta
    }

    pub fn embed_base(&self, x: Fp) -> ExtElem {
        self.ext.from_base(x)
    }

    pub fn embed_sub(&self, x: PolyElem) -> ExtElem {
        self.ext.from_sub(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    #[test]
    fn f49_uses_three() {
        let t = Tower::new(7, 2).unwrap();
        assert_eq!(t.beta().coeffs(), &[3]);
        let ctr = OpCounter::new();
        let a = t.ext().alpha();
        let a2 = t.ext().sqr(&a, &ctr);
        assert_eq!(a2, t.embed_base(t.base().elem(3)));
    }

    #[test]
    fn odd_k_rejected() {
        assert_eq!(Tower::new(7, 3), Err(FieldError::OddDegree(3)));
        assert_eq!(Tower::new(7, 0), Err(FieldError::DegreeTooSmall));
    }

    #[test]
    fn with_beta_rejects_squares() {
        assert!(Tower::with_beta(7, 2, &[2]).is_err());
        assert!(Tower::with_beta(7, 2, &[3]).is_ok());
    }

    #[test]
    fn embed_project_round_trip() {
        for k in [2, 4, 6] {
            let t = Tower::new(11, k).unwrap();
            for x in 0..11 {
                let x = t.base().elem(x);
                assert_eq!(t.ext().project_base(&t.embed_base(x)), Some(x));
            }
            assert_eq!(t.ext().project_base(&t.ext().alpha()), None);
        }
    }

    #[test]
    fn group_order_exhaustive() {
        // q^k ≤ 10^4: every nonzero element raised to q^k - 1 is 1.
        for (q, k) in [(7u64, 2usize), (7, 4), (5, 4), (11, 2), (5, 2)] {
            let t = Tower::new(q, k).unwrap();
            let order = q.pow(k as u32);
            let e = BigUint::from(order - 1);
            let ctr = OpCounter::new();
            for i in 1..order {
                let x = t.ext().element_at(i);
                assert_eq!(t.ext().pow(&x, &e, &ctr), t.ext().one(), "q={q} k={k} i={i}");
            }
        }
    }

    #[test]
    fn alpha_squared_is_beta_at_every_k() {
        let ctr = OpCounter::new();
        for k in [2, 4, 6] {
            let t = Tower::new(13, k).unwrap();
            let a2 = t.ext().mul(&t.ext().alpha(), &t.ext().alpha(), &ctr);
            assert_eq!(a2, t.embed_sub(t.beta().clone()));
        }
        assert_eq!(ctr.report().big_m, 3);
        assert_eq!(ctr.report().m, 0);
        assert_eq!(ctr.report().sub_m, 0);
    }

    #[test]
    fn sqrt_in_extension() {
        let t = Tower::new(13, 4).unwrap();
        let ctr = OpCounter::new();
        for i in (1..28561).step_by(97) {
            let x = t.ext().element_at(i);
            let sq = t.ext().sqr(&x, &ctr);
            let r = t.ext().sqrt(&sq).unwrap();
            assert_eq!(t.ext().sqr(&r, &ctr), sq);
        }
    }

    proptest! {
        #[test]
        fn axioms_and_subfield_closure(a in 0u64..(17u64.pow(6)), b in 0u64..(17u64.pow(6)), c in 0u64..(17u64.pow(6))) {
            let t = Tower::new(17, 6).unwrap();
            let f = t.ext();
            let ctr = OpCounter::new();
            let (a, b, c) = (f.element_at(a), f.element_at(b), f.element_at(c));
            prop_assert_eq!(f.mul(&f.mul(&a, &b, &ctr), &c, &ctr), f.mul(&a, &f.mul(&b, &c, &ctr), &ctr));
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c), &ctr), f.add(&f.mul(&a, &b, &ctr), &f.mul(&a, &c, &ctr)));
            if !f.is_zero(&a) {
                prop_assert_eq!(f.mul(&a, &f.inv(&a, &ctr).unwrap(), &ctr), f.one());
            }
            let su = t.embed_sub(a.u().clone());
            let sv = t.embed_sub(b.u().clone());
            prop_assert!(f.mul(&su, &sv, &ctr).in_subfield());
            prop_assert!(f.add(&su, &sv).in_subfield());
        }
    }
}
