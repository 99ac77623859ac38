//! The three necessary conditions on digit-class sums for a solution for a
//! given x, plus the derived sum/difference forms used in the long-solution
//! proofs.
//!
//! For a binary-like b with digit sum x whose gcd with its reversal is exactly
//! x, the class sums P of b must satisfy: sum P_j = x, the forward coefficient
//! sum = 0 (mod x) and the reverse coefficient sum = 0 (mod x). The forward
//! coefficients are the remainder cycle; the reverse coefficients are the
//! cycle reversed as a sequence. The conditions are necessary only — exact gcd
//! is always confirmed by big-integer arithmetic in the search module.
//!
//! The integer multipliers witnessing each divisibility are never
//! materialized; the conditions are checked as congruences mod x directly.

use crate::error::{Error, Result};
use crate::residue::{remainder_cycle, ClassSumVector};

/// Forward/reverse coefficient system for one modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSumSystem {
    modulus: u64,
    forward: Vec<u64>,
    reverse: Vec<u64>,
}

/// System with coefficient vectors derived from the remainder cycle of x.
pub fn build_system(x: u64) -> Result<ClassSumSystem> {
    let cycle = remainder_cycle(x)?;
    let m = cycle.order();
    let forward = cycle.remainders().to_vec();
    let reverse: Vec<u64> = (0..m).map(|j| cycle.remainder((m - 1 - j) % m)).collect();
    Ok(ClassSumSystem { modulus: x, forward, reverse })
}

/// Outcome of the three per-composition conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompositionCheck {
    pub sum_ok: bool,
    pub forward_ok: bool,
    pub reverse_ok: bool,
}

impl CompositionCheck {
    pub fn all_ok(&self) -> bool {
        self.sum_ok && self.forward_ok && self.reverse_ok
    }
}

impl ClassSumSystem {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.forward.len()
    }

    /// The target digit sum; equal to the modulus.
    pub fn target_sum(&self) -> u64 {
        self.modulus
    }

    pub fn forward_coefficients(&self) -> &[u64] {
        &self.forward
    }

    pub fn reverse_coefficients(&self) -> &[u64] {
        &self.reverse
    }

    /// (forward, reverse) coefficient sums of P, reduced mod x.
    pub fn residues(&self, p: &ClassSumVector) -> Result<(u64, u64)> {
        if p.order() != self.order() {
            return Err(Error::LengthMismatch { expected: self.order(), actual: p.order() });
        }
        let x = self.modulus;
        let fwd = p
            .sums()
            .iter()
            .zip(&self.forward)
            .fold(0u64, |acc, (&pj, &cj)| (acc + pj % x * cj) % x);
        let rev = p
            .sums()
            .iter()
            .zip(&self.reverse)
            .fold(0u64, |acc, (&pj, &cj)| (acc + pj % x * cj) % x);
        Ok((fwd, rev))
    }

    pub fn check_composition(&self, p: &ClassSumVector) -> Result<CompositionCheck> {
        let (fwd, rev) = self.residues(p)?;
        Ok(CompositionCheck {
            sum_ok: p.total() == self.modulus,
            forward_ok: fwd == 0,
            reverse_ok: rev == 0,
        })
    }
}

/// R = P0 + P5, S = P2 + P3, U = P0 + P2 - P3 - P5, V = P1 - P4 for order-6
/// class sums — the quantities the long-solution case analysis branches on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedQuantities {
    pub r: u64,
    pub s: u64,
    pub u: i64,
    pub v: i64,
}

/// The derived forms are specific to order-6 moduli; rejects other orders.
pub fn derived_quantities(p: &ClassSumVector) -> Result<DerivedQuantities> {
    if p.order() != 6 {
        return Err(Error::LengthMismatch { expected: 6, actual: p.order() });
    }
    let s = p.sums();
    let as_i = |v: u64| i64::try_from(v).expect("class sums fit i64");
    Ok(DerivedQuantities {
        r: s[0] + s[5],
        s: s[2] + s[3],
        u: as_i(s[0]) + as_i(s[2]) - as_i(s[3]) - as_i(s[5]),
        v: as_i(s[1]) - as_i(s[4]),
    })
}

impl DerivedQuantities {
    /// Sum form: 6R + S = 0 (mod 7) for x = 7, 5R + 8S = 0 (mod 13) for x = 13.
    /// Equivalent to forward + reverse conditions added.
    pub fn plus_holds(&self, x: u64) -> Result<bool> {
        let (cr, cs) = match x {
            7 => (6u64, 1u64),
            13 => (5, 8),
            _ => return Err(Error::UnsupportedModulus(x)),
        };
        Ok((cr * self.r + cs * self.s).is_multiple_of(x))
    }

    /// Difference form: 4U + V = 0 (mod 7) for x = 7, 3U + 6V = 0 (mod 13)
    /// for x = 13. Equivalent to reverse minus forward.
    pub fn minus_holds(&self, x: u64) -> Result<bool> {
        let (cu, cv) = match x {
            7 => (4i64, 1i64),
            13 => (3, 6),
            _ => return Err(Error::UnsupportedModulus(x)),
        };
        let xi = i64::try_from(x).expect("modulus fits i64");
        Ok((cu * self.u + cv * self.v).rem_euclid(xi) == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::class_sums;

    fn vecsum(v: &[u64]) -> ClassSumVector {
        ClassSumVector::new(v.to_vec())
    }

    #[test]
    fn systems_match_known_coefficients() {
        let s7 = build_system(7).unwrap();
        assert_eq!(s7.forward_coefficients(), &[1, 3, 2, 6, 4, 5]);
        assert_eq!(s7.reverse_coefficients(), &[5, 4, 6, 2, 3, 1]);
        let s13 = build_system(13).unwrap();
        assert_eq!(s13.forward_coefficients(), &[1, 10, 9, 12, 3, 4]);
        assert_eq!(s13.reverse_coefficients(), &[4, 3, 12, 9, 10, 1]);
        let s39 = build_system(39).unwrap();
        assert_eq!(s39.forward_coefficients(), &[1, 10, 22, 25, 16, 4]);
        assert_eq!(s39.reverse_coefficients(), &[4, 16, 25, 22, 10, 1]);
    }

    #[test]
    fn reverse_is_forward_reversed() {
        for x in [3u64, 7, 11, 13, 21, 39] {
            let sys = build_system(x).unwrap();
            let mut f = sys.forward_coefficients().to_vec();
            f.reverse();
            assert_eq!(f, sys.reverse_coefficients());
        }
    }

    #[test]
    fn check_composition_examples() {
        let s7 = build_system(7).unwrap();
        let c = s7.check_composition(&vecsum(&[7, 0, 0, 0, 0, 0])).unwrap();
        assert!(c.all_ok());

        // 468 = 12*39 and 546 = 14*39
        let s39 = build_system(39).unwrap();
        let p = vecsum(&[10, 9, 9, 6, 0, 5]);
        let (fwd, rev) = s39.residues(&p).unwrap();
        assert_eq!((fwd, rev), (0, 0));
        assert!(s39.check_composition(&p).unwrap().all_ok());

        // 6 + 3 = 9, not divisible by 7
        let c = s7.check_composition(&vecsum(&[6, 1, 0, 0, 0, 0])).unwrap();
        assert!(c.sum_ok);
        assert!(!c.forward_ok);
    }

    #[test]
    fn check_composition_rejects_length_mismatch() {
        let s7 = build_system(7).unwrap();
        assert!(matches!(
            s7.check_composition(&vecsum(&[7])),
            Err(Error::LengthMismatch { expected: 6, actual: 1 })
        ));
    }

    #[test]
    fn derived_quantities_examples() {
        let q = derived_quantities(&vecsum(&[7, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!((q.r, q.s, q.u, q.v), (7, 0, 7, 0));
        assert!(q.plus_holds(7).unwrap()); // 42 = 0 (mod 7)
        assert!(q.minus_holds(7).unwrap()); // 28 = 0 (mod 7)

        let q = derived_quantities(&vecsum(&[0, 0, 7, 0, 0, 0])).unwrap();
        assert_eq!((q.r, q.s, q.u, q.v), (0, 7, 7, 0));

        // the n2 = -2 case: all ones in position E
        let q = derived_quantities(&vecsum(&[0, 0, 0, 0, 7, 0])).unwrap();
        assert_eq!(q.v, -7);
        assert_eq!(q.u, 0);
    }

    #[test]
    fn derived_quantities_rejects_other_orders() {
        assert!(derived_quantities(&vecsum(&[3])).is_err());
        assert!(derived_quantities(&vecsum(&[1, 2])).is_err());
    }

    #[test]
    fn plus_minus_rejects_unsupported_modulus() {
        let q = derived_quantities(&vecsum(&[7, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(q.plus_holds(39), Err(Error::UnsupportedModulus(39)));
        assert_eq!(q.minus_holds(11), Err(Error::UnsupportedModulus(11)));
    }

    #[test]
    fn mirror_swaps_forward_and_reverse() {
        let s13 = build_system(13).unwrap();
        for p in [
            vecsum(&[1, 2, 3, 4, 2, 1]),
            vecsum(&[0, 5, 1, 7, 0, 0]),
            vecsum(&[13, 0, 0, 0, 0, 0]),
        ] {
            let c = s13.check_composition(&p).unwrap();
            let cm = s13.check_composition(&p.mirrored()).unwrap();
            assert_eq!(c.forward_ok, cm.reverse_ok);
            assert_eq!(c.reverse_ok, cm.forward_ok);
        }
    }

    #[test]
    fn plus_and_minus_together_equal_forward_and_reverse() {
        // The plus/minus forms are the sum and difference of the two residue
        // conditions; with 2 invertible mod x they are jointly equivalent.
        for x in [7u64, 13] {
            let sys = build_system(x).unwrap();
            for p in crate::proofkit::enumerate_compositions(x, 6) {
                let c = sys.check_composition(&p).unwrap();
                let q = derived_quantities(&p).unwrap();
                let derived = q.plus_holds(x).unwrap() && q.minus_holds(x).unwrap();
                assert_eq!(
                    derived,
                    c.forward_ok && c.reverse_ok,
                    "x={} P={:?}",
                    x,
                    p.sums()
                );
            }
        }
    }

    #[test]
    fn class_sums_of_known_solution_pass() {
        let d: crate::digits::DigitString =
            "1000111000111000111001111101111101111101111101111101111".parse().unwrap();
        let s39 = build_system(39).unwrap();
        let p = class_sums(&d, s39.order());
        assert!(s39.check_composition(&p).unwrap().all_ok());
    }
}
