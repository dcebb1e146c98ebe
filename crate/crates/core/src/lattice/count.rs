//! Fixed-width and arbitrary-precision counters for the lattice DP.
//!
//! The width is picked from the worst-case count `(2d)^N`, so fixed-width
//! additions never overflow; overflow is still checked and treated as a bug.

use num_bigint::BigUint;
use num_traits::Zero;

pub(crate) trait Count: Clone + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add_assign(&mut self, rhs: &Self);
    fn is_zero(&self) -> bool;
    fn to_big(&self) -> BigUint;
}

impl Count for u64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self = self.checked_add(*rhs).expect("u64 counter overflow");
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Count for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self = self.checked_add(*rhs).expect("u128 counter overflow");
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

/// Little-endian 256-bit unsigned integer (addition only).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct U256([u64; 4]);

impl Count for U256 {
    fn zero() -> Self {
        U256([0; 4])
    }
    fn one() -> Self {
        U256([1, 0, 0, 0])
    }
    fn add_assign(&mut self, rhs: &Self) {
        let mut carry = false;
        for i in 0..4 {
            let (s1, c1) = self.0[i].overflowing_add(rhs.0[i]);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            self.0[i] = s2;
            carry = c1 || c2;
        }
        assert!(!carry, "U256 counter overflow");
    }
    fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }
    fn to_big(&self) -> BigUint {
        let mut digits = Vec::with_capacity(8);
        for w in self.0 {
            digits.push(w as u32);
            digits.push((w >> 32) as u32);
        }
        BigUint::new(digits)
    }
}

impl Count for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        BigUint::from(1u8)
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

/// Bits needed to hold any count of walks of length at most `n` in dimension `d`.
pub(crate) fn bits_needed(d: usize, n: usize) -> u64 {
    ((n as f64) * ((2 * d) as f64).log2()).ceil() as u64 + 1
}
