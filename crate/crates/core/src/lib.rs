//! Binary-like numbers b with gcd(b, rev(b)) equal to the digit sum of b.
//!
//! For x coprime to 10, the smallest binary-like b (decimal digits all 0 or 1)
//! with digit sum x and gcd(b, rev(b)) exactly x is the x-entry of A348480,
//! stored there as the digit string read in base 2. Most x have solutions with
//! few zeros; x = 7 and 13 admit only "long" solutions (more zeros than ones),
//! which this crate machine-checks by finite enumeration of digit-class
//! compositions, and x = 39 needs 55 digits.
//!
//! Modules:
//! - [`digits`]: digit strings, reversal, exact big-integer readings.
//! - [`residue`]: remainder cycles of powers of ten, class sums, residues,
//!   the block divisibility rule.
//! - [`constraints`]: the three necessary class-sum conditions per modulus
//!   and the derived sum/difference forms.
//! - [`proofkit`]: parity lemma, congruence families, composition
//!   enumeration, the exhaustive long-solution theorem checks.
//! - [`search`]: brute-force oracle, constraint-pruned search and
//!   single-class search for smallest solutions.
//! - [`sequence`]: term indexing, base-2 encoding, term cache, b-file
//!   crosschecks.

pub mod constraints;
pub mod digits;
mod error;
pub mod proofkit;
pub mod residue;
pub mod search;
pub mod sequence;

pub use digits::DigitString;
pub use error::{Error, Result};
pub use residue::{ClassSumVector, RemainderCycle};
