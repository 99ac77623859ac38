//! Multiplicative-order machinery: remainder cycles of powers of ten,
//! digit-position residue classes, forward/reverse residues and the block
//! divisibility rule.
//!
//! For a modulus `x` coprime to 10 the remainders `10^i mod x` repeat with
//! period `m`, the multiplicative order of 10 mod x. Positions `i` of a digit
//! string (counted from the right) then fall into `m` residue classes, and a
//! number's residue mod x depends only on the per-class digit sums weighted by
//! the cycle. Cycles are computed once per modulus and shared.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;

use crate::digits::DigitString;
use crate::error::{Error, Result};

fn check_modulus(x: u64) -> Result<()> {
    if x.is_multiple_of(2) || x.is_multiple_of(5) {
        return Err(Error::NotCoprimeToTen(x));
    }
    if x < 3 {
        return Err(Error::ModulusTooSmall(x));
    }
    Ok(())
}

/// Smallest m >= 1 with 10^m = 1 (mod x). Found by iterating the cycle; the
/// moduli of interest are small.
pub fn multiplicative_order(x: u64) -> Result<usize> {
    check_modulus(x)?;
    let mut r = 10 % x;
    let mut m = 1;
    while r != 1 {
        r = (r * 10) % x;
        m += 1;
    }
    Ok(m)
}

/// The cycle of remainders 10^i mod x, i = 0 .. m-1, with r_0 = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemainderCycle {
    modulus: u64,
    remainders: Vec<u64>,
}

impl RemainderCycle {
    fn compute(x: u64) -> Result<Self> {
        check_modulus(x)?;
        let mut remainders = vec![1u64];
        let mut r = 10 % x;
        while r != 1 {
            remainders.push(r);
            r = (r * 10) % x;
        }
        Ok(RemainderCycle { modulus: x, remainders })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.remainders.len()
    }

    pub fn remainders(&self) -> &[u64] {
        &self.remainders
    }

    /// r_{i mod m}, i.e. 10^i mod x for any exponent i.
    pub fn remainder(&self, i: usize) -> u64 {
        self.remainders[i % self.remainders.len()]
    }
}

/// Shared per-modulus cycle table. Read-only after first construction.
pub fn remainder_cycle(x: u64) -> Result<Arc<RemainderCycle>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<RemainderCycle>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cycle cache poisoned");
    if let Some(c) = guard.get(&x) {
        return Ok(Arc::clone(c));
    }
    let cycle = Arc::new(RemainderCycle::compute(x)?);
    guard.insert(x, Arc::clone(&cycle));
    Ok(cycle)
}

/// Per-residue-class digit sums: P_j = sum of digits at positions = j (mod m).
/// For m = 6 these are the A..F of the long-solution case analysis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassSumVector {
    sums: Vec<u64>,
}

impl ClassSumVector {
    pub fn new(sums: Vec<u64>) -> Self {
        assert!(!sums.is_empty(), "class-sum vector needs at least one class");
        ClassSumVector { sums }
    }

    pub fn order(&self) -> usize {
        self.sums.len()
    }

    pub fn sums(&self) -> &[u64] {
        &self.sums
    }

    pub fn get(&self, j: usize) -> u64 {
        self.sums[j]
    }

    pub fn total(&self) -> u64 {
        self.sums.iter().sum()
    }

    /// Class indices with a nonzero sum.
    pub fn nonzero_classes(&self) -> Vec<usize> {
        (0..self.sums.len()).filter(|&j| self.sums[j] != 0).collect()
    }

    pub fn is_single_class(&self) -> bool {
        self.nonzero_classes().len() == 1
    }

    /// P_j <-> P_{m-1-j}; swaps the forward and reverse residue conditions.
    pub fn mirrored(&self) -> ClassSumVector {
        ClassSumVector { sums: self.sums.iter().rev().copied().collect() }
    }

    /// Regroups the sums by class index mod `smaller`, which must divide the
    /// current order. This is how an order-m class vector is read against a
    /// modulus whose order divides m.
    pub fn collapse(&self, smaller: usize) -> ClassSumVector {
        debug_assert!(smaller >= 1 && self.sums.len().is_multiple_of(smaller));
        let mut out = vec![0u64; smaller];
        for (j, &p) in self.sums.iter().enumerate() {
            out[j % smaller] += p;
        }
        ClassSumVector { sums: out }
    }
}

impl std::fmt::Display for ClassSumVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.sums.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", s)?;
        }
        write!(f, ")")
    }
}

/// Digit sums per position class mod `order`, positions counted from the right.
pub fn class_sums(d: &DigitString, order: usize) -> ClassSumVector {
    assert!(order >= 1);
    let mut sums = vec![0u64; order];
    for i in 0..d.len() {
        sums[i % order] += u64::from(d.digit(i));
    }
    ClassSumVector::new(sums)
}

/// (sum_i digit_i * r_{i mod m}) mod x — equals base10_value(d) mod x.
pub fn forward_residue(d: &DigitString, x: u64) -> Result<u64> {
    let cycle = remainder_cycle(x)?;
    let mut acc = 0u64;
    for i in 0..d.len() {
        acc = (acc + u64::from(d.digit(i)) * cycle.remainder(i)) % x;
    }
    Ok(acc)
}

/// The pad that extends a length-s string to a whole number of periods:
/// the normalization under which the reverse coefficients are simply the
/// cycle reversed.
pub fn canonical_pad(len: usize, order: usize) -> usize {
    (order - len % order) % order
}

/// Residue mod x of the reversal of d extended by `pad` zeros:
/// (sum_i digit_i * r_{(s+pad-1-i) mod m}) mod x, which is rev(d)·10^pad mod x.
///
/// With the canonical pad this equals sum_j P_j * r_{(m-1-j) mod m} over the
/// class sums P of d, the reverse coefficient form used by the class-sum
/// systems. Divisibility by x is the same for every pad.
pub fn reverse_residue(d: &DigitString, x: u64, pad: usize) -> Result<u64> {
    let cycle = remainder_cycle(x)?;
    let m = cycle.order();
    let s = d.len();
    let mut acc = 0u64;
    for i in 0..s {
        acc = (acc + u64::from(d.digit(i)) * cycle.remainder((s + pad - 1 - i) % m)) % x;
    }
    Ok(acc)
}

/// Block divisibility rule: cut the digits into blocks of length m starting
/// from the right, sum the blocks, repeat until at most m digits remain, then
/// test divisibility directly. Valid because 10^m = 1 (mod x); agrees with
/// base10_value(d) mod x = 0 for all inputs.
pub fn block_sum_divisible(d: &DigitString, x: u64) -> Result<bool> {
    let m = multiplicative_order(x)?;
    let mut digits: Vec<u8> = d.digits().to_vec();
    while digits.len() > m {
        let mut sum = BigUint::ZERO;
        let mut end = digits.len();
        while end > 0 {
            let start = end.saturating_sub(m);
            sum += BigUint::from_radix_be(&digits[start..end], 10).expect("digits < 10");
            end = start;
        }
        // Block sums strictly shrink while more than m digits remain.
        digits = sum.to_radix_be(10);
    }
    let value = BigUint::from_radix_be(&digits, 10).expect("digits < 10");
    Ok((value % BigUint::from(x)) == BigUint::ZERO)
}
