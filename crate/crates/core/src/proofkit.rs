//! Finite verification of the long-solution theorems for x = 7 and x = 13:
//! the parity lemma, linear congruence parameterization, exhaustive
//! composition enumeration and case classification.
//!
//! The theorem — every solution's ones occupy a single residue class — is
//! checked semantically: enumerate all compositions of x into 6 classes,
//! keep those passing the x system, and show each is either single-class or
//! forces divisibility of both the number and its reversal by the cofactor
//! (13 for 7, 7 for 13), which makes a gcd of exactly x impossible.
//! [`case_trace`] presents the same result as a Diophantine case analysis,
//! for didactic output.

use std::fmt;

use crate::constraints::{build_system, derived_quantities};
use crate::error::{Error, Result};
use crate::residue::{multiplicative_order, ClassSumVector};

/// Parity lemma: if x + y = p + q then x + p - y - q is even.
/// Returns the parity fact; a violated precondition is an error, not `false`.
pub fn parity_check(x: i64, y: i64, p: i64, q: i64) -> Result<bool> {
    if x + y != p + q {
        return Err(Error::ParityPrecondition { x, y, p, q });
    }
    Ok((x + p - y - q) % 2 == 0)
}

/// All integer solutions of a·r + b·s = 0 (mod x) for gcd(a, x) = 1,
/// parameterized as r = x·n + c·s with c = -b·a^(-1) reduced to the
/// representative in (-x/2, x/2].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruenceFamily {
    a: u64,
    b: u64,
    modulus: u64,
    coefficient: i64,
}

/// Parameterizes a·r + b·s = 0 (mod x). Errors if a is not invertible mod x.
pub fn solve_congruence(a: u64, b: u64, modulus: u64) -> Result<CongruenceFamily> {
    if modulus < 2 {
        return Err(Error::ModulusTooSmall(modulus));
    }
    let a_inv = mod_inverse(a % modulus, modulus)
        .ok_or(Error::NotInvertible { a: a % modulus, modulus })?;
    let c = (modulus - b % modulus) % modulus * a_inv % modulus;
    // Symmetric representative: -2 rather than 5 mod 7.
    let half = modulus / 2;
    let coefficient = if c > half { c as i64 - modulus as i64 } else { c as i64 };
    Ok(CongruenceFamily { a, b, modulus, coefficient })
}

fn mod_inverse(a: u64, modulus: u64) -> Option<u64> {
    // Extended Euclid on small values.
    let (mut r0, mut r1) = (modulus as i64, (a % modulus) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(modulus as i64) as u64)
}

impl CongruenceFamily {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The reduced coefficient c in r = x·n + c·s.
    pub fn coefficient(&self) -> i64 {
        self.coefficient
    }

    /// Membership: (r, s) solves the congruence.
    pub fn contains(&self, r: i64, s: i64) -> bool {
        let x = self.modulus as i64;
        (r - self.coefficient * s).rem_euclid(x) == 0
    }

    /// The parameter n with r = x·n + c·s, if (r, s) is in the family.
    pub fn parameter(&self, r: i64, s: i64) -> Option<i64> {
        let x = self.modulus as i64;
        let d = r - self.coefficient * s;
        (d % x == 0).then_some(d / x)
    }
}

impl fmt::Display for CongruenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r = {}n ", self.modulus)?;
        if self.coefficient >= 0 {
            write!(f, "+ {}s", self.coefficient)
        } else {
            write!(f, "- {}s", -self.coefficient)
        }
    }
}

/// Iterator over all vectors of `parts` nonnegative integers summing to
/// `total`, in lexicographic order, each exactly once.
pub fn enumerate_compositions(total: u64, parts: usize) -> Compositions {
    assert!(parts >= 1);
    let mut first = vec![0u64; parts];
    first[parts - 1] = total;
    Compositions { next: Some(first) }
}

pub struct Compositions {
    next: Option<Vec<u64>>,
}

impl Iterator for Compositions {
    type Item = ClassSumVector;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        // Successor in lexicographic order: find the rightmost position before
        // the last that can be incremented by moving one unit from the tail.
        let n = current.len();
        let mut succ = None;
        if n > 1 {
            let mut tail = current[n - 1];
            for i in (0..n - 1).rev() {
                if tail > 0 {
                    let mut v = current.clone();
                    v[i] += 1;
                    for w in v.iter_mut().take(n - 1).skip(i + 1) {
                        *w = 0;
                    }
                    v[n - 1] = tail - 1;
                    succ = Some(v);
                    break;
                }
                tail += current[i];
            }
        }
        self.next = succ;
        Some(ClassSumVector::new(current))
    }
}

/// C(total + parts - 1, parts - 1) without overflow for the sizes in use.
pub fn composition_count(total: u64, parts: usize) -> u128 {
    let n = total as u128 + parts as u128 - 1;
    let k = (parts - 1) as u128;
    let k = k.min(n - k);
    let mut num = 1u128;
    for i in 0..k {
        num = num * (n - i) / (i + 1);
    }
    num
}

/// Classification of one feasible composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionClass {
    /// Exactly one nonzero class: the long-solution shape.
    SingleClass,
    /// Forward and reverse sums vanish mod the cofactor too, so the gcd of
    /// any realization is divisible by x·cofactor and cannot be exactly x.
    CofactorDivisible,
    /// Neither — would contradict the theorem.
    Counterexample,
}

/// Outcome of the exhaustive machine check for one (x, cofactor) pair.
#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub modulus: u64,
    pub cofactor: u64,
    pub total_compositions: u64,
    pub feasible: Vec<(ClassSumVector, CompositionClass)>,
    pub counterexamples: Vec<ClassSumVector>,
}

impl TheoremReport {
    pub fn verified(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn feasible_count(&self) -> usize {
        self.feasible.len()
    }

    pub fn count(&self, class: CompositionClass) -> usize {
        self.feasible.iter().filter(|(_, c)| *c == class).count()
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theorem check: x = {}, cofactor = {}", self.modulus, self.cofactor)?;
        writeln!(f, "compositions examined: {}", self.total_compositions)?;
        writeln!(f, "feasible: {}", self.feasible_count())?;
        writeln!(f, "  single-class: {}", self.count(CompositionClass::SingleClass))?;
        writeln!(f, "  cofactor-divisible: {}", self.count(CompositionClass::CofactorDivisible))?;
        writeln!(f, "  counterexamples: {}", self.counterexamples.len())?;
        write!(f, "verified: {}", if self.verified() { "yes" } else { "NO" })
    }
}

/// Enumerates every composition of x into 6 classes, keeps the ones passing
/// the x system, and classifies each as single-class, cofactor-divisible or a
/// counterexample. The theorem holds iff there are no counterexamples.
/// Intended pairs: (7, 13) and (13, 7).
pub fn verify_long_solution_theorem(x: u64, cofactor: u64) -> Result<TheoremReport> {
    for v in [x, cofactor] {
        let order = multiplicative_order(v)?;
        if order != 6 {
            return Err(Error::OrderNotSix { x: v, order });
        }
    }
    let sys = build_system(x)?;
    let cosys = build_system(cofactor)?;
    let mut feasible = Vec::new();
    let mut counterexamples = Vec::new();
    let mut total = 0u64;
    for p in enumerate_compositions(x, 6) {
        total += 1;
        if !sys.check_composition(&p)?.all_ok() {
            continue;
        }
        let class = if p.is_single_class() {
            CompositionClass::SingleClass
        } else {
            let co = cosys.check_composition(&p)?;
            if co.forward_ok && co.reverse_ok {
                CompositionClass::CofactorDivisible
            } else {
                counterexamples.push(p.clone());
                CompositionClass::Counterexample
            }
        };
        feasible.push((p, class));
    }
    Ok(TheoremReport { modulus: x, cofactor, total_compositions: total, feasible, counterexamples })
}

/// One branch of a case analysis stage.
#[derive(Debug, Clone)]
pub struct BranchTrace {
    /// The parameter n of the stage's congruence family.
    pub parameter: i64,
    /// Pair forced by the box constraints, when the branch pins it down.
    pub forced: Option<ForcedBranch>,
    /// Facts carried forward by non-terminal branches.
    pub carried: Vec<String>,
}

/// A branch whose box constraints force the variable pair, hence a single
/// nonzero class.
#[derive(Debug, Clone)]
pub struct ForcedBranch {
    pub values: (i64, i64),
    /// The classes a realization can occupy (indices into A..F).
    pub classes: Vec<usize>,
}

/// One Diophantine stage: the congruence, its parameter range, its branches.
#[derive(Debug, Clone)]
pub struct StageTrace {
    /// Coefficients of the stage equation a·lhs + b·rhs = 0 (mod x).
    pub coefficients: (u64, u64),
    /// Variable names, e.g. ("R", "S") or ("U", "V").
    pub variables: (&'static str, &'static str),
    pub family: CongruenceFamily,
    pub branches: Vec<BranchTrace>,
}

/// The case-analysis branch structure for x = 7 or x = 13.
#[derive(Debug, Clone)]
pub struct CaseTrace {
    pub modulus: u64,
    pub cofactor: u64,
    pub stage_one: StageTrace,
    pub stage_two: StageTrace,
}

const CLASS_NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

/// Derives the case analysis: solve the sum-form congruence, bound the
/// parameter by the box constraints, branch; inside the n = 0 branch derive
/// the parity restriction and repeat with the difference form. Branch
/// conclusions are computed over the actual feasible compositions, so the
/// trace is a statement about the finite search space, not a transcription.
pub fn case_trace(x: u64) -> Result<CaseTrace> {
    let cofactor = match x {
        7 => 13,
        13 => 7,
        _ => return Err(Error::UnsupportedModulus(x)),
    };
    let sys = build_system(x)?;
    let feasible: Vec<ClassSumVector> = enumerate_compositions(x, 6)
        .filter(|p| sys.check_composition(p).map(|c| c.all_ok()).unwrap_or(false))
        .collect();

    // Stage-one coefficients come from forward + reverse reduced mod x: the
    // A/F coefficient and the C/D coefficient (B/E vanish).
    let f = sys.forward_coefficients();
    let g = sys.reverse_coefficients();
    let plus: Vec<u64> = (0..6).map(|j| (f[j] + g[j]) % x).collect();
    debug_assert!(plus[1] == 0 && plus[4] == 0 && plus[0] == plus[5] && plus[2] == plus[3]);
    let stage_one_coeffs = (plus[0], plus[2]);
    let family_one = solve_congruence(stage_one_coeffs.0, stage_one_coeffs.1, x)?;

    // Box 0 <= R, S and R + S <= x bounds the parameter to {-1, 0, 1}.
    let xi = x as i64;
    let mut one_branches = Vec::new();
    let mut covered = 0usize;
    for n in [-1i64, 0, 1] {
        let in_branch: Vec<&ClassSumVector> = feasible
            .iter()
            .filter(|p| {
                let q = derived_quantities(p).expect("order 6");
                family_one.parameter(q.r as i64, q.s as i64) == Some(n)
            })
            .collect();
        covered += in_branch.len();
        if n == 0 {
            let mut carried = vec!["R = S".to_string()];
            // Parity lemma instance: A + F = C + D makes U = A + C - D - F even.
            for p in &in_branch {
                let s = p.sums();
                let even = parity_check(s[0] as i64, s[5] as i64, s[2] as i64, s[3] as i64)?;
                debug_assert!(even);
            }
            carried.push("U = A + C - D - F is even".to_string());
            for p in &in_branch {
                let q = derived_quantities(p).expect("order 6");
                debug_assert!(q.plus_holds(cofactor)?);
            }
            carried.push(format!("the sum form for {} holds", cofactor));
            one_branches.push(BranchTrace { parameter: n, forced: None, carried });
        } else {
            // Forced by the box: n = -1 gives (0, x), n = +1 gives (x, 0).
            let values = if n < 0 { (0, xi) } else { (xi, 0) };
            let mut classes = Vec::new();
            for p in &in_branch {
                let q = derived_quantities(p).expect("order 6");
                debug_assert_eq!((q.r as i64, q.s as i64), values);
                debug_assert!(p.is_single_class());
                classes.extend(p.nonzero_classes());
            }
            classes.sort_unstable();
            classes.dedup();
            one_branches.push(BranchTrace {
                parameter: n,
                forced: Some(ForcedBranch { values, classes }),
                carried: Vec::new(),
            });
        }
    }

    debug_assert_eq!(covered, feasible.len(), "the three branches partition the feasible set");

    // Stage two, within R = S: difference form on (U, V).
    let minus_u = (g[0] + x - f[0]) % x;
    let minus_v = (g[1] + x - f[1]) % x;
    let family_two = solve_congruence(minus_u, minus_v, x)?;
    let rs_branch: Vec<&ClassSumVector> = feasible
        .iter()
        .filter(|p| {
            let q = derived_quantities(p).expect("order 6");
            q.r == q.s
        })
        .collect();
    let mut two_branches = Vec::new();
    let mut covered_two = 0usize;
    // U even halves the range; the box -x <= U, V <= x leaves {-2, 0, 2}.
    for n in [-2i64, 0, 2] {
        let in_branch: Vec<&&ClassSumVector> = rs_branch
            .iter()
            .filter(|p| {
                let q = derived_quantities(p).expect("order 6");
                family_two.parameter(q.u, q.v) == Some(n)
            })
            .collect();
        covered_two += in_branch.len();
        if n == 0 {
            for p in &in_branch {
                let q = derived_quantities(p).expect("order 6");
                debug_assert!(q.minus_holds(cofactor)?);
            }
            two_branches.push(BranchTrace {
                parameter: n,
                forced: None,
                carried: vec![
                    format!("U = {}V", family_two.coefficient()),
                    format!("the difference form for {} holds", cofactor),
                ],
            });
        } else {
            let mut pairs: Vec<(i64, i64)> = in_branch
                .iter()
                .map(|p| {
                    let q = derived_quantities(p).expect("order 6");
                    (q.u, q.v)
                })
                .collect();
            pairs.sort_unstable();
            pairs.dedup();
            debug_assert_eq!(pairs.len(), 1, "box constraints force the pair");
            let mut classes = Vec::new();
            for p in &in_branch {
                debug_assert!(p.is_single_class());
                classes.extend(p.nonzero_classes());
            }
            classes.sort_unstable();
            classes.dedup();
            two_branches.push(BranchTrace {
                parameter: n,
                forced: Some(ForcedBranch { values: pairs[0], classes }),
                carried: Vec::new(),
            });
        }
    }

    debug_assert_eq!(covered_two, rs_branch.len(), "even parameters cover the R = S branch");

    Ok(CaseTrace {
        modulus: x,
        cofactor,
        stage_one: StageTrace {
            coefficients: stage_one_coeffs,
            variables: ("R", "S"),
            family: family_one,
            branches: one_branches,
        },
        stage_two: StageTrace {
            coefficients: (minus_u, minus_v),
            variables: ("U", "V"),
            family: family_two,
            branches: two_branches,
        },
    })
}

impl fmt::Display for CaseTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case analysis for x = {} (cofactor {})", self.modulus, self.cofactor)?;
        for (label, stage) in [("stage 1", &self.stage_one), ("stage 2", &self.stage_two)] {
            let (a, b) = stage.coefficients;
            let (lv, rv) = stage.variables;
            writeln!(
                f,
                "{}: {}{} + {}{} = 0 (mod {}), solutions {} = {}n {} {}{}",
                label,
                a,
                lv,
                b,
                rv,
                self.modulus,
                lv,
                self.modulus,
                if stage.family.coefficient() >= 0 { "+" } else { "-" },
                stage.family.coefficient().abs(),
                rv,
            )?;
            for br in &stage.branches {
                write!(f, "  n = {:+}: ", br.parameter)?;
                match &br.forced {
                    Some(fb) => {
                        let names: Vec<&str> =
                            fb.classes.iter().map(|&j| CLASS_NAMES[j]).collect();
                        writeln!(
                            f,
                            "{} = {}, {} = {} forced; all ones in one position ({})",
                            lv,
                            fb.values.0,
                            rv,
                            fb.values.1,
                            names.join(" or "),
                        )?;
                    }
                    None => {
                        writeln!(f, "{}", br.carried.join("; "))?;
                    }
                }
            }
        }
        write!(
            f,
            "every branch forces a single class or divisibility of both b and rev(b) by {}",
            self.cofactor
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_examples() {
        assert!(parity_check(1, 2, 3, 0).unwrap());
        assert!(parity_check(5, 5, 5, 5).unwrap());
        assert!(matches!(
            parity_check(1, 2, 3, 1),
            Err(Error::ParityPrecondition { .. })
        ));
    }

    #[test]
    fn congruence_families_use_symmetric_representatives() {
        assert_eq!(solve_congruence(5, 8, 13).unwrap().coefficient(), 1);
        assert_eq!(solve_congruence(6, 1, 7).unwrap().coefficient(), 1);
        assert_eq!(solve_congruence(4, 1, 7).unwrap().coefficient(), -2);
        assert_eq!(solve_congruence(3, 6, 13).unwrap().coefficient(), -2);
    }

    #[test]
    fn congruence_rejects_noninvertible() {
        assert!(matches!(
            solve_congruence(7, 1, 7),
            Err(Error::NotInvertible { .. })
        ));
    }

    #[test]
    fn congruence_families_are_complete() {
        // brute force over the box finds no solution outside the family
        for (a, b, x) in [(5u64, 8u64, 13u64), (6, 1, 7), (4, 1, 7), (3, 6, 13), (2, 3, 11)] {
            let fam = solve_congruence(a, b, x).unwrap();
            for r in 0..=x as i64 {
                for s in 0..=x as i64 {
                    let solves = (a as i64 * r + b as i64 * s) % x as i64 == 0;
                    assert_eq!(fam.contains(r, s), solves, "a={} b={} x={} r={} s={}", a, b, x, r, s);
                }
            }
        }
    }

    #[test]
    fn composition_counts() {
        assert_eq!(enumerate_compositions(7, 6).count(), 792);
        assert_eq!(enumerate_compositions(13, 6).count(), 8568);
        assert_eq!(composition_count(7, 6), 792);
        assert_eq!(composition_count(13, 6), 8568);
        assert_eq!(composition_count(39, 6), 1_086_008);
    }

    #[test]
    fn compositions_are_lexicographic_and_sum_correctly() {
        let all: Vec<Vec<u64>> =
            enumerate_compositions(3, 3).map(|p| p.sums().to_vec()).collect();
        assert_eq!(all.first().unwrap(), &vec![0, 0, 3]);
        assert_eq!(all.last().unwrap(), &vec![3, 0, 0]);
        assert_eq!(all.len(), 10);
        for w in all.windows(2) {
            assert!(w[0] < w[1], "not strictly increasing: {:?}", w);
        }
        for p in &all {
            assert_eq!(p.iter().sum::<u64>(), 3);
        }

        let two: Vec<Vec<u64>> =
            enumerate_compositions(2, 2).map(|p| p.sums().to_vec()).collect();
        assert_eq!(two, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);

        let one: Vec<Vec<u64>> =
            enumerate_compositions(3, 1).map(|p| p.sums().to_vec()).collect();
        assert_eq!(one, vec![vec![3]]);
    }

    #[test]
    fn theorem_seven_with_cofactor_thirteen() {
        let rep = verify_long_solution_theorem(7, 13).unwrap();
        assert!(rep.verified());
        assert_eq!(rep.total_compositions, 792);
        // Frozen after the first run, cross-checked by independent enumeration.
        assert_eq!(rep.feasible_count(), 18);
        assert_eq!(rep.count(CompositionClass::SingleClass), 6);
        assert_eq!(rep.count(CompositionClass::CofactorDivisible), 12);
    }

    #[test]
    fn theorem_thirteen_with_cofactor_seven() {
        let rep = verify_long_solution_theorem(13, 7).unwrap();
        assert!(rep.verified());
        assert_eq!(rep.total_compositions, 8568);
        assert_eq!(rep.feasible_count(), 60);
        assert_eq!(rep.count(CompositionClass::SingleClass), 6);
        assert_eq!(rep.count(CompositionClass::CofactorDivisible), 54);
    }

    #[test]
    fn theorem_rejects_wrong_orders() {
        assert!(matches!(
            verify_long_solution_theorem(9, 13),
            Err(Error::OrderNotSix { x: 9, order: 1 })
        ));
        assert!(matches!(
            verify_long_solution_theorem(7, 11),
            Err(Error::OrderNotSix { x: 11, order: 2 })
        ));
    }

    #[test]
    fn case_trace_seven() {
        let t = case_trace(7).unwrap();
        assert_eq!(t.cofactor, 13);
        assert_eq!(t.stage_one.coefficients, (6, 1));
        let params: Vec<i64> = t.stage_one.branches.iter().map(|b| b.parameter).collect();
        assert_eq!(params, vec![-1, 0, 1]);
        let minus_one = &t.stage_one.branches[0].forced.as_ref().unwrap();
        assert_eq!(minus_one.values, (0, 7));
        assert_eq!(minus_one.classes, vec![2, 3]); // C or D
        let plus_one = &t.stage_one.branches[2].forced.as_ref().unwrap();
        assert_eq!(plus_one.values, (7, 0));
        assert_eq!(plus_one.classes, vec![0, 5]); // A or F

        assert_eq!(t.stage_two.coefficients, (4, 1));
        let params: Vec<i64> = t.stage_two.branches.iter().map(|b| b.parameter).collect();
        assert_eq!(params, vec![-2, 0, 2]);
        let minus_two = &t.stage_two.branches[0].forced.as_ref().unwrap();
        assert_eq!(minus_two.values, (0, -7));
        assert_eq!(minus_two.classes, vec![4]); // all ones in E
        let plus_two = &t.stage_two.branches[2].forced.as_ref().unwrap();
        assert_eq!(plus_two.values, (0, 7));
        assert_eq!(plus_two.classes, vec![1]); // all ones in B
    }

    #[test]
    fn case_trace_thirteen() {
        let t = case_trace(13).unwrap();
        assert_eq!(t.cofactor, 7);
        assert_eq!(t.stage_one.coefficients, (5, 8));
        assert_eq!(t.stage_two.coefficients, (3, 6));
        // n3 = 0 gives R' = S'
        let zero = &t.stage_one.branches[1];
        assert!(zero.forced.is_none());
        assert!(zero.carried.iter().any(|s| s.contains("R = S")));
    }

    #[test]
    fn case_trace_rejects_other_moduli() {
        assert!(matches!(case_trace(39), Err(Error::UnsupportedModulus(39))));
    }

    #[test]
    fn rs_equal_branch_has_even_u_and_cofactor_plus() {
        // enumeration-level invariants, both moduli
        for (x, cof) in [(7u64, 13u64), (13, 7)] {
            let sys = build_system(x).unwrap();
            for p in enumerate_compositions(x, 6) {
                if !sys.check_composition(&p).unwrap().all_ok() {
                    continue;
                }
                let q = derived_quantities(&p).unwrap();
                if q.r == q.s {
                    assert_eq!(q.u.rem_euclid(2), 0, "U even for {:?}", p.sums());
                    assert!(q.plus_holds(cof).unwrap());
                }
                if q.u == -2 * q.v {
                    assert!(q.minus_holds(cof).unwrap());
                }
            }
        }
    }
}
