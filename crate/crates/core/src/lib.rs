//! Reduced Tate pairing on generalized Huff curves `x(ay² − 1) = y(bx² − 1)`
//! over small prime fields, with every field operation counted.

pub mod fields;
pub mod huff;
pub mod pairing;
pub mod parallel;
pub mod paramgen;
pub mod params_io;
pub mod report;
pub mod selftest;
pub mod weierstrass;
