//! `F_{q^d} = F_q[x]/(f)` for a monic irreducible `f` of degree `d`.
//!
//! With `d = 1` this is `F_q` itself (modulus `x`), which is how the
//! `k = 2` tower keeps a uniform shape.

use std::fmt;

use super::prime::{inv_mod, mul_mod};
use super::{Field, FieldError, Fp, Op, OpCounter, PrimeField};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyElem(pub(crate) Vec<u64>);

impl PolyElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Debug for PolyElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyField {
    base: PrimeField,
    /// Monic, little-endian, length `d + 1`.
    modulus: Vec<u64>,
}

impl PolyField {
    /// Deterministic search for the defining polynomial: binomials
    /// `x^d - c` for ascending `c`, then every monic polynomial in base-q
    /// index order of its lower coefficients.
    pub fn find(base: PrimeField, d: usize) -> Result<Self, FieldError> {
        if d == 0 {
            return Err(FieldError::DegreeTooSmall);
        }
        let q = base.modulus();
        if d == 1 {
            return Ok(Self {
                base,
                modulus: vec![0, 1],
            });
        }
        for c in 1..q {
            let mut f = vec![0; d + 1];
            f[0] = q - c;
            f[d] = 1;
            if is_irreducible(&f, q) {
                return Ok(Self { base, modulus: f });
            }
        }
        let total = (q as u128).pow(d as u32);
        for idx in 0..total {
            let mut rest = idx;
            let mut f = Vec::with_capacity(d + 1);
            for _ in 0..d {
                f.push((rest % q as u128) as u64);
                rest /= q as u128;
            }
            f.push(1);
            if f[0] != 0 && is_irreducible(&f, q) {
                return Ok(Self { base, modulus: f });
            }
        }
        Err(FieldError::NoIrreducible(d))
    }

    pub fn modulus_poly(&self) -> &[u64] {
        &self.modulus
    }

    fn d(&self) -> usize {
        self.modulus.len() - 1
    }

    fn q(&self) -> u64 {
        self.base.modulus()
    }

    pub(crate) fn mul_raw(&self, a: &PolyElem, b: &PolyElem) -> PolyElem {
        let q = self.q();
        let prod = poly_mul(&a.0, &b.0, q);
        PolyElem(reduce(prod, &self.modulus, q))
    }

    pub(crate) fn scale_raw(&self, a: &PolyElem, s: u64) -> PolyElem {
        let q = self.q();
        PolyElem(a.0.iter().map(|&x| mul_mod(x, s, q)).collect())
    }

    fn pow_raw(&self, a: &PolyElem, mut e: u128) -> PolyElem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &b);
            }
            b = self.mul_raw(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv_raw(&self, a: &PolyElem) -> Result<PolyElem, FieldError> {
        if a.0.iter().all(|&c| c == 0) {
            return Err(FieldError::ZeroInversion);
        }
        let order = (self.q() as u128).pow(self.d() as u32);
        Ok(self.pow_raw(a, order - 2))
    }

    /// `Some(x)` when the element lies in the prime subfield.
    pub fn project_base(&self, a: &PolyElem) -> Option<Fp> {
        a.0[1..]
            .iter()
            .all(|&c| c == 0)
            .then(|| self.base.elem(a.0[0]))
    }
}

impl Field for PolyField {
    type Elem = PolyElem;

    fn base(&self) -> &PrimeField {
        &self.base
    }

    fn degree(&self) -> usize {
        self.d()
    }

    fn zero(&self) -> PolyElem {
        PolyElem(vec![0; self.d()])
    }

    fn one(&self) -> PolyElem {
        let mut v = vec![0; self.d()];
        v[0] = 1;
        PolyElem(v)
    }

    fn is_zero(&self, a: &PolyElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &PolyElem, b: &PolyElem) -> PolyElem {
        let q = self.q();
        PolyElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % q).collect())
    }

    fn sub(&self, a: &PolyElem, b: &PolyElem) -> PolyElem {
        let q = self.q();
        PolyElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + q - y) % q).collect())
    }

    fn neg(&self, a: &PolyElem) -> PolyElem {
        let q = self.q();
        PolyElem(a.0.iter().map(|&x| (q - x) % q).collect())
    }

    fn mul(&self, a: &PolyElem, b: &PolyElem, ctr: &OpCounter) -> PolyElem {
        ctr.record(if self.d() == 1 { Op::Mul } else { Op::SubMul }, 1);
        self.mul_raw(a, b)
    }

    fn sqr(&self, a: &PolyElem, ctr: &OpCounter) -> PolyElem {
        ctr.record(if self.d() == 1 { Op::Square } else { Op::SubMul }, 1);
        self.mul_raw(a, a)
    }

    fn mul_base(&self, a: &PolyElem, s: Fp, ctr: &OpCounter) -> PolyElem {
        ctr.record(Op::Mul, self.d() as u64);
        self.scale_raw(a, s.value())
    }

    fn mul_const(&self, a: &PolyElem, s: Fp, ctr: &OpCounter) -> PolyElem {
        ctr.record(Op::Const, 1);
        self.scale_raw(a, s.value())
    }

    fn inv(&self, a: &PolyElem, ctr: &OpCounter) -> Result<PolyElem, FieldError> {
        let r = self.inv_raw(a)?;
        ctr.record(Op::Inv, 1);
        Ok(r)
    }

    fn from_base(&self, s: Fp) -> PolyElem {
        let mut v = vec![0; self.d()];
        v[0] = s.value();
        PolyElem(v)
    }

    fn coeffs(&self, a: &PolyElem) -> Vec<u64> {
        a.0.clone()
    }

    fn from_coeffs(&self, coeffs: &[u64]) -> Result<PolyElem, FieldError> {
        if coeffs.len() != self.d() {
            return Err(FieldError::CoefficientCount {
                expected: self.d(),
                got: coeffs.len(),
            });
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= self.q()) {
            return Err(FieldError::Unreduced {
                value: bad,
                q: self.q(),
            });
        }
        Ok(PolyElem(coeffs.to_vec()))
    }
}

fn poly_mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, q)) % q;
        }
    }
    out
}

/// Remainder modulo a monic polynomial, padded to `deg(modulus)` coefficients.
fn reduce(mut a: Vec<u64>, modulus: &[u64], q: u64) -> Vec<u64> {
    let d = modulus.len() - 1;
    while a.len() > d {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let shift = a.len() - d;
            for (i, &m) in modulus[..d].iter().enumerate() {
                let t = mul_mod(lead, m, q);
                a[shift + i] = (a[shift + i] + q - t) % q;
            }
        }
    }
    a.resize(d, 0);
    a
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` by an arbitrary nonzero `b`.
fn rem(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let lead_inv = inv_mod(*b.last().unwrap(), q);
    let mut a = trim(a.to_vec());
    while a.len() >= b.len() {
        let coef = mul_mod(*a.last().unwrap(), lead_inv, q);
        let shift = a.len() - b.len();
        for (i, &bc) in b.iter().enumerate() {
            let t = mul_mod(coef, bc, q);
            a[shift + i] = (a[shift + i] + q - t) % q;
        }
        a = trim(a);
    }
    a
}

fn gcd_degree(a: &[u64], b: &[u64], q: u64) -> usize {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, q);
        x = y;
        y = r;
    }
    x.len().saturating_sub(1)
}

fn prime_factors(mut n: usize) -> Vec<usize> {
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

/// Rabin's test: `f` (monic, degree d) is irreducible iff `x^{q^d} = x mod f`
/// and `gcd(x^{q^{d/p}} - x, f) = 1` for every prime `p | d`.
pub(crate) fn is_irreducible(f: &[u64], q: u64) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    let field = PolyField {
        base: PrimeField::new(q).expect("prime modulus"),
        modulus: f.to_vec(),
    };
    let mut x = vec![0u64; d];
    x[1] = 1;
    let x = PolyElem(x);
    // frob[i] = x^{q^i} mod f
    let mut frob = vec![x.clone()];
    for _ in 0..d {
        let next = field.pow_raw(frob.last().unwrap(), q as u128);
        frob.push(next);
    }
    if frob[d] != x {
        return false;
    }
    prime_factors(d).into_iter().all(|p| {
        let h = field.sub(&frob[d / p], &x);
        gcd_degree(&h.0, f, q) == 0
    })
}
