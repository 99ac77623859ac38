//! Decimal digit strings with reversal, digit sums, palindrome tests and exact
//! big-integer readings.
//!
//! A [`DigitString`] stores digits most-significant first, but every operation
//! that talks about a *position* counts from the right: position `i` is the
//! distance from the right end, so position 0 is the least significant
//! digit. Search candidates are restricted to digits {0, 1} ("binary-like");
//! the type itself permits 0..9 so the reversal and gcd utilities stay general.
//!
//! All arithmetic is exact. Values are immutable after construction and safe
//! to share across threads.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};

/// A nonempty decimal digit sequence without leading zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    /// Most-significant first.
    digits: Vec<u8>,
}

impl DigitString {
    /// Builds from digits given most-significant first.
    pub fn new(msd_first: Vec<u8>) -> Result<Self> {
        if msd_first.is_empty() {
            return Err(Error::EmptyDigits);
        }
        if let Some(&d) = msd_first.iter().find(|&&d| d > 9) {
            return Err(Error::InvalidDigit(
                char::from_digit(u32::from(d), 36).unwrap_or('?'),
            ));
        }
        // A lone "0" is not a valid number here either.
        if msd_first[0] == 0 {
            return Err(Error::LeadingZero);
        }
        Ok(DigitString { digits: msd_first })
    }

    /// Builds a binary-like string of `len` digits with ones exactly at the
    /// given positions (counted from the right). The highest position must be
    /// `len - 1` so there is no leading zero.
    pub fn from_one_positions(len: usize, ones: &[usize]) -> Result<Self> {
        let mut digits = vec![0u8; len];
        for &p in ones {
            if p >= len {
                return Err(Error::InvalidClass { class: p, order: len });
            }
            digits[len - 1 - p] = 1;
        }
        Self::new(digits)
    }

    /// Reads a nonnegative value's binary expansion as a binary-like digit
    /// string (the inverse of [`base2_value`](Self::base2_value)).
    pub fn from_base2_value(value: &BigUint) -> Result<Self> {
        if value == &BigUint::ZERO {
            return Err(Error::EmptyDigits);
        }
        Self::new(value.to_radix_be(2))
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty strings
    }

    /// Digit at position `i` counted from the right (position 0 = least
    /// significant). Panics if `i >= len`.
    pub fn digit(&self, i: usize) -> u8 {
        self.digits[self.digits.len() - 1 - i]
    }

    /// Digits most-significant first.
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// True iff every digit is 0 or 1.
    pub fn is_binary_like(&self) -> bool {
        self.digits.iter().all(|&d| d <= 1)
    }

    /// Positions (from the right) of nonzero digits, ascending. Only
    /// meaningful for binary-like strings but defined for all.
    pub fn one_positions(&self) -> Vec<usize> {
        let n = self.digits.len();
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, _)| n - 1 - i)
            .rev()
            .collect()
    }

    pub fn zero_count(&self) -> usize {
        self.digits.iter().filter(|&&d| d == 0).count()
    }

    /// The digit sequence reversed, with any resulting leading zeros dropped
    /// so the result is again a number. rev(1100) = 11.
    pub fn reverse(&self) -> DigitString {
        let mut rev: Vec<u8> = self.digits.iter().rev().copied().collect();
        let lead = rev.iter().take_while(|&&d| d == 0).count();
        rev.drain(..lead);
        // rev cannot be empty: the original first digit is nonzero and ends
        // up at the back of the reversal.
        DigitString { digits: rev }
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().map(|&d| u64::from(d)).sum()
    }

    /// Exact positional base-10 value.
    pub fn base10_value(&self) -> BigUint {
        BigUint::from_radix_be(&self.digits, 10).expect("digits are < 10")
    }

    /// The digit string read as a base-2 numeral (the A348480 encoding).
    /// Rejects any digit above 1.
    pub fn base2_value(&self) -> Result<BigUint> {
        let n = self.digits.len();
        for (i, &d) in self.digits.iter().enumerate() {
            if d > 1 {
                return Err(Error::NonBinaryDigit { digit: d, position: n - 1 - i });
            }
        }
        Ok(BigUint::from_radix_be(&self.digits, 2).expect("digits are < 2"))
    }

    /// gcd of the value and the value of the reversal, computed exactly.
    pub fn gcd_with_reversal(&self) -> BigUint {
        self.base10_value().gcd(&self.reverse().base10_value())
    }

    pub fn is_palindrome(&self) -> bool {
        let n = self.digits.len();
        (0..n / 2).all(|i| self.digits[i] == self.digits[n - 1 - i])
    }
}

impl FromStr for DigitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or(Error::InvalidDigit(c)))
            .collect::<Result<Vec<u8>>>()?;
        Self::new(digits)
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            write!(f, "{}", d)?;
        }
        Ok(())
    }
}

impl fmt::Debug for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DigitString({})", self)
    }
}
