//! Finite fields: the prime field `F_q`, the intermediate field
//! `F_{q^{k/2}}`, and the quadratic top layer `F_{q^k} = F_{q^{k/2}}(α)`.

mod counter;
mod poly;
mod prime;
mod tower;

pub use counter::{CounterScope, Op, OpCounter, OpReport};
pub use poly::{PolyElem, PolyField};
pub use prime::{is_prime, ArithOp, Fp, PrimeField};
pub use tower::{ExtElem, ExtField, Tower};

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime greater than 3")]
    BadModulus(u64),
    #[error("modulus {0} is above the supported bound 2^31")]
    ModulusTooLarge(u64),
    #[error("inversion of zero")]
    ZeroInversion,
    #[error("operands belong to different fields (F_{left} and F_{right})")]
    Mismatch { left: u64, right: u64 },
    #[error("{0} requires a second operand")]
    MissingOperand(&'static str),
    #[error("extension degree k = {0} is not even")]
    OddDegree(usize),
    #[error("extension degree must be at least 2")]
    DegreeTooSmall,
    #[error("no irreducible polynomial of degree {0} found")]
    NoIrreducible(usize),
    #[error("{0} is not a quadratic non-residue")]
    NotNonResidue(String),
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("coefficient {value} is not reduced modulo {q}")]
    Unreduced { value: u64, q: u64 },
}

/// Arithmetic over a finite field whose elements are `Self::Elem`.
///
/// Multiplicative operations take the [`OpCounter`] of the computation they
/// belong to; additions, subtractions and negations are free.
pub trait Field: Clone + Send + Sync + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn base(&self) -> &PrimeField;
    /// Degree over `F_q`.
    fn degree(&self) -> usize;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn double(&self, a: &Self::Elem) -> Self::Elem {
        self.add(a, a)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem, ctr: &OpCounter) -> Self::Elem;
    fn sqr(&self, a: &Self::Elem, ctr: &OpCounter) -> Self::Elem;
    /// Product with an `F_q` scalar; costs `degree()` base multiplications.
    fn mul_base(&self, a: &Self::Elem, s: Fp, ctr: &OpCounter) -> Self::Elem;
    /// Product with a curve constant; costs one `c`.
    fn mul_const(&self, a: &Self::Elem, s: Fp, ctr: &OpCounter) -> Self::Elem;
    fn inv(&self, a: &Self::Elem, ctr: &OpCounter) -> Result<Self::Elem, FieldError>;

    fn from_base(&self, s: Fp) -> Self::Elem;
    fn from_u64(&self, v: u64) -> Self::Elem {
        self.from_base(self.base().elem(v))
    }

    /// Little-endian coefficients over `F_q`.
    fn coeffs(&self, a: &Self::Elem) -> Vec<u64>;
    fn from_coeffs(&self, coeffs: &[u64]) -> Result<Self::Elem, FieldError>;

    fn order(&self) -> BigUint {
        BigUint::from(self.base().modulus()).pow(self.degree() as u32)
    }

    /// The element whose base-q digits (little-endian) are `index`.
    fn element_at(&self, mut index: u64) -> Self::Elem {
        let q = self.base().modulus();
        let coeffs: Vec<u64> = (0..self.degree())
            .map(|_| {
                let d = index % q;
                index /= q;
                d
            })
            .collect();
        self.from_coeffs(&coeffs).expect("digits are reduced")
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        let q = self.base().modulus();
        let coeffs: Vec<u64> = (0..self.degree()).map(|_| rng.gen_range(0..q)).collect();
        self.from_coeffs(&coeffs).expect("digits are reduced")
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint, ctr: &OpCounter) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.sqr(&acc, ctr);
            if e.bit(i) {
                acc = self.mul(&acc, a, ctr);
            }
        }
        acc
    }

    /// Euler's criterion; zero counts as a square.
    fn is_square(&self, a: &Self::Elem) -> bool {
        if self.is_zero(a) {
            return true;
        }
        let e = (self.order() - 1u32) >> 1;
        self.pow(a, &e, &OpCounter::new()) == self.one()
    }

    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        tonelli_shanks(self, a)
    }
}

/// First quadratic non-residue in the field's index order.
pub fn find_quadratic_nonresidue<F: Field>(field: &F) -> F::Elem {
    (1u64..)
        .map(|i| field.element_at(i))
        .find(|x| !field.is_square(x))
        .expect("odd-order fields have non-residues")
}

/// Square root in a field of odd order; `None` for non-residues.
fn tonelli_shanks<F: Field>(field: &F, a: &F::Elem) -> Option<F::Elem> {
    if field.is_zero(a) {
        return Some(field.zero());
    }
    if !field.is_square(a) {
        return None;
    }
    let ctr = OpCounter::new();
    let order_minus_one = field.order() - 1u32;
    let mut s = 0u64;
    let mut t = order_minus_one.clone();
    while t.is_even() {
        t >>= 1;
        s += 1;
    }
    let z = find_quadratic_nonresidue(field);
    let mut m = s;
    let mut c = field.pow(&z, &t, &ctr);
    let mut x = field.pow(a, &((&t + 1u32) >> 1), &ctr);
    let mut b = field.pow(a, &t, &ctr);
    let one = field.one();
    while b != one {
        let mut i = 0u64;
        let mut b2 = b.clone();
        while b2 != one {
            b2 = field.sqr(&b2, &ctr);
            i += 1;
        }
        let mut g = c.clone();
        for _ in 0..(m - i - 1) {
            g = field.sqr(&g, &ctr);
        }
        x = field.mul(&x, &g, &ctr);
        c = field.sqr(&g, &ctr);
        b = field.mul(&b, &c, &ctr);
        m = i;
    }
    debug_assert!(field.sqr(&x, &ctr) == *a);
    Some(x)
}

/// True iff `a^e = 1`.
pub fn pow_is_one<F: Field>(field: &F, a: &F::Elem, e: &BigUint) -> bool {
    field.pow(a, e, &OpCounter::new()) == field.one()
}
