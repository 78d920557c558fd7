//! Operation tallies in the units used for pairing cost analysis.
//!
//! Lower-case letters are base-field operations (`m`, `s`, `c`, `i`),
//! upper-case letters are operations in the full extension `F_{q^k}`
//! (`M`, `S`, `I`), and `sub_m` counts general multiplications inside
//! `F_{q^{k/2}}` when that field is a proper extension of `F_q`.
//!
//! A counter is owned by a single computation; it uses interior mutability
//! so arithmetic can take `&OpCounter`, and is deliberately `!Sync`.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Sub};

/// The kind of operation being tallied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    /// Base-field multiplication.
    Mul,
    /// Base-field squaring.
    Square,
    /// Multiplication by a curve constant.
    Const,
    /// Base-field (or subfield) inversion.
    Inv,
    /// General multiplication in the full extension.
    ExtMul,
    /// Squaring in the full extension.
    ExtSquare,
    /// Inversion in the full extension.
    ExtInv,
    /// General multiplication in the proper subfield `F_{q^{k/2}}`.
    SubMul,
}

/// A snapshot of a counter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpReport {
    pub m: u64,
    pub s: u64,
    pub c: u64,
    pub i: u64,
    pub big_m: u64,
    pub big_s: u64,
    pub big_i: u64,
    pub sub_m: u64,
}

impl OpReport {
    pub fn is_zero(&self) -> bool {
        *self == OpReport::default()
    }
}

impl Sub for OpReport {
    type Output = OpReport;

    fn sub(self, rhs: OpReport) -> OpReport {
        OpReport {
            m: self.m - rhs.m,
            s: self.s - rhs.s,
            c: self.c - rhs.c,
            i: self.i - rhs.i,
            big_m: self.big_m - rhs.big_m,
            big_s: self.big_s - rhs.big_s,
            big_i: self.big_i - rhs.big_i,
            sub_m: self.sub_m - rhs.sub_m,
        }
    }
}

impl Add for OpReport {
    type Output = OpReport;

    fn add(self, rhs: OpReport) -> OpReport {
        OpReport {
            m: self.m + rhs.m,
            s: self.s + rhs.s,
            c: self.c + rhs.c,
            i: self.i + rhs.i,
            big_m: self.big_m + rhs.big_m,
            big_s: self.big_s + rhs.big_s,
            big_i: self.big_i + rhs.big_i,
            sub_m: self.sub_m + rhs.sub_m,
        }
    }
}

impl fmt::Display for OpReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M={} S={} I={} m={} s={} c={} i={} sub_m={}",
            self.big_m, self.big_s, self.big_i, self.m, self.s, self.c, self.i, self.sub_m
        )
    }
}

#[derive(Debug, Default)]
pub struct OpCounter {
    m: Cell<u64>,
    s: Cell<u64>,
    c: Cell<u64>,
    i: Cell<u64>,
    big_m: Cell<u64>,
    big_s: Cell<u64>,
    big_i: Cell<u64>,
    sub_m: Cell<u64>,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn record(&self, op: Op, times: u64) {
        let cell = match op {
            Op::Mul => &self.m,
            Op::Square => &self.s,
            Op::Const => &self.c,
            Op::Inv => &self.i,
            Op::ExtMul => &self.big_m,
            Op::ExtSquare => &self.big_s,
            Op::ExtInv => &self.big_i,
            Op::SubMul => &self.sub_m,
        };
        cell.set(cell.get() + times);
    }

    pub fn report(&self) -> OpReport {
        OpReport {
            m: self.m.get(),
            s: self.s.get(),
            c: self.c.get(),
            i: self.i.get(),
            big_m: self.big_m.get(),
            big_s: self.big_s.get(),
            big_i: self.big_i.get(),
            sub_m: self.sub_m.get(),
        }
    }

    pub fn reset(&self) {
        for cell in [
            &self.m,
            &self.s,
            &self.c,
            &self.i,
            &self.big_m,
            &self.big_s,
            &self.big_i,
            &self.sub_m,
        ] {
            cell.set(0);
        }
    }

    /// Starts a measurement window; [`CounterScope::delta`] reports what was
    /// recorded since.
    pub fn scope(&self) -> CounterScope<'_> {
        CounterScope {
            counter: self,
            start: self.report(),
        }
    }
}

pub struct CounterScope<'a> {
    counter: &'a OpCounter,
    start: OpReport,
}

impl CounterScope<'_> {
    pub fn delta(&self) -> OpReport {
        self.counter.report() - self.start
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_counter_is_zero() {
        assert!(OpCounter::new().report().is_zero());
    }

    #[test]
    fn scope_reports_delta_only() {
        let ctr = OpCounter::new();
        ctr.record(Op::Mul, 3);
        let scope = ctr.scope();
        ctr.record(Op::Mul, 2);
        ctr.record(Op::ExtSquare, 1);
        let d = scope.delta();
        assert_eq!(d.m, 2);
        assert_eq!(d.big_s, 1);
        assert_eq!(ctr.report().m, 5);
        ctr.reset();
        assert!(ctr.report().is_zero());
    }
}
