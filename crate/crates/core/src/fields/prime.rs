use std::fmt;

use super::{Field, FieldError, Op, OpCounter};

const MAX_MODULUS: u64 = 1 << 31;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime via Fermat; caller guarantees `a != 0`.
#[inline]
pub(crate) fn inv_mod(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

/// A residue modulo `q`, always fully reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u64,
    q: u64,
}

impl Fp {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Binary and unary operations accepted by [`PrimeField::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Neg,
    Mul,
    Square,
    /// Multiplication by a curve constant (tallied as `c`).
    MulConst,
    Inv,
}

/// The prime field `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        if q > MAX_MODULUS {
            return Err(FieldError::ModulusTooLarge(q));
        }
        if q <= 3 || !is_prime(q) {
            return Err(FieldError::BadModulus(q));
        }
        Ok(Self { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn elem(&self, v: u64) -> Fp {
        Fp {
            value: v % self.q,
            q: self.q,
        }
    }

    pub fn from_i64(&self, v: i64) -> Fp {
        self.elem(v.rem_euclid(self.q as i64) as u64)
    }

    /// Checked arithmetic entry point: verifies both operands live in this
    /// field before dispatching.
    pub fn apply(
        &self,
        op: ArithOp,
        x: Fp,
        y: Option<Fp>,
        ctr: &OpCounter,
    ) -> Result<Fp, FieldError> {
        self.check(x)?;
        if let Some(y) = y {
            self.check(y)?;
        }
        let rhs = |name| y.ok_or(FieldError::MissingOperand(name));
        Ok(match op {
            ArithOp::Add => Field::add(self, &x, &rhs("add")?),
            ArithOp::Sub => Field::sub(self, &x, &rhs("sub")?),
            ArithOp::Neg => Field::neg(self, &x),
            ArithOp::Mul => Field::mul(self, &x, &rhs("mul")?, ctr),
            ArithOp::Square => Field::sqr(self, &x, ctr),
            ArithOp::MulConst => Field::mul_const(self, &x, rhs("mul_const")?, ctr),
            ArithOp::Inv => Field::inv(self, &x, ctr)?,
        })
    }

    fn check(&self, x: Fp) -> Result<(), FieldError> {
        if x.q != self.q {
            return Err(FieldError::Mismatch {
                left: self.q,
                right: x.q,
            });
        }
        Ok(())
    }

    /// Legendre symbol as -1, 0 or 1.
    pub fn legendre(&self, x: Fp) -> i8 {
        match pow_mod(x.value, (self.q - 1) / 2, self.q) {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    pub fn pow_u64(&self, x: Fp, e: u64, ctr: &OpCounter) -> Fp {
        let mut acc = self.elem(1);
        for i in (0..u64::BITS - e.leading_zeros()).rev() {
            acc = Field::sqr(self, &acc, ctr);
            if (e >> i) & 1 == 1 {
                acc = Field::mul(self, &acc, &x, ctr);
            }
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = Fp;

    fn base(&self) -> &PrimeField {
        self
    }

    fn degree(&self) -> usize {
        1
    }

    fn zero(&self) -> Fp {
        self.elem(0)
    }

    fn one(&self) -> Fp {
        self.elem(1)
    }

    fn is_zero(&self, a: &Fp) -> bool {
        a.value == 0
    }

    #[inline]
    fn add(&self, a: &Fp, b: &Fp) -> Fp {
        debug_assert_eq!(a.q, b.q);
        let s = a.value + b.value;
        self.elem(if s >= self.q { s - self.q } else { s })
    }

    #[inline]
    fn sub(&self, a: &Fp, b: &Fp) -> Fp {
        debug_assert_eq!(a.q, b.q);
        let v = if a.value >= b.value {
            a.value - b.value
        } else {
            a.value + self.q - b.value
        };
        self.elem(v)
    }

    #[inline]
    fn neg(&self, a: &Fp) -> Fp {
        self.elem(if a.value == 0 { 0 } else { self.q - a.value })
    }

    #[inline]
    fn mul(&self, a: &Fp, b: &Fp, ctr: &OpCounter) -> Fp {
        debug_assert_eq!(a.q, b.q);
        ctr.record(Op::Mul, 1);
        self.elem(mul_mod(a.value, b.value, self.q))
    }

    #[inline]
    fn sqr(&self, a: &Fp, ctr: &OpCounter) -> Fp {
        ctr.record(Op::Square, 1);
        self.elem(mul_mod(a.value, a.value, self.q))
    }

    #[inline]
    fn mul_base(&self, a: &Fp, s: Fp, ctr: &OpCounter) -> Fp {
        self.mul(a, &s, ctr)
    }

    #[inline]
    fn mul_const(&self, a: &Fp, s: Fp, ctr: &OpCounter) -> Fp {
        ctr.record(Op::Const, 1);
        self.elem(mul_mod(a.value, s.value, self.q))
    }

    fn inv(&self, a: &Fp, ctr: &OpCounter) -> Result<Fp, FieldError> {
        if a.value == 0 {
            return Err(FieldError::ZeroInversion);
        }
        ctr.record(Op::Inv, 1);
        Ok(self.elem(inv_mod(a.value, self.q)))
    }

    fn from_base(&self, s: Fp) -> Fp {
        s
    }

    fn coeffs(&self, a: &Fp) -> Vec<u64> {
        vec![a.value]
    }

    fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fp, FieldError> {
        match coeffs {
            [v] if *v < self.q => Ok(self.elem(*v)),
            [v] => Err(FieldError::Unreduced {
                value: *v,
                q: self.q,
            }),
            _ => Err(FieldError::CoefficientCount {
                expected: 1,
                got: coeffs.len(),
            }),
        }
    }

    fn is_square(&self, a: &Fp) -> bool {
        self.legendre(*a) >= 0
    }
}
