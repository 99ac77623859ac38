//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test -p revgcd-cli --test acceptance -- --nocapture`.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use revgcd::proofkit::{verify_long_solution_theorem, CompositionClass};
use revgcd::residue::{
    block_sum_divisible, canonical_pad, forward_residue, multiplicative_order, remainder_cycle,
    reverse_residue,
};
use revgcd::search::{
    analyze_compositions, brute_force_smallest, pruned_smallest, single_class_scan,
    verify_solution, LengthClaim, SearchConfig, SearchOutcome, Verdict,
};
use revgcd::DigitString;

const SOL7: &str = "1000000000001000001000001000001000001000001";
const SOL39: &str = "1000111000111000111001111101111101111101111101111101111";

fn bin(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_revgcd"))
        .args(args)
        .env_remove("REVGCD_CACHE")
        .output()
        .expect("binary runs");
    (out, start.elapsed())
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {}: {} — {}",
        criterion,
        if pass { "PASS" } else { "FAIL" },
        detail
    );
    assert!(pass, "criterion {} failed: {}", criterion, detail);
}

#[test]
fn criterion_1_term_x3() {
    let (out, elapsed) = bin(&["term", "--x", "3"]);
    let text = stdout(&out);
    let ok = out.status.code() == Some(0)
        && text.contains("digits 1011")
        && text.contains("encoded 11")
        && elapsed < Duration::from_secs(1);
    report(
        "1",
        ok,
        &format!("term --x 3 gives 1011 encoded 11 in {:?}", elapsed),
    );
}

#[test]
fn criterion_2_remainder_cycles() {
    let c7 = remainder_cycle(7).unwrap();
    let c13 = remainder_cycle(13).unwrap();
    let c39 = remainder_cycle(39).unwrap();
    let ok = c7.remainders() == [1, 3, 2, 6, 4, 5]
        && c13.remainders() == [1, 10, 9, 12, 3, 4]
        && c39.remainders() == [1, 10, 22, 25, 16, 4];
    report("2", ok, "cycles for 7, 13, 39 match exactly");
}

#[test]
fn criterion_3_theorem_checks() {
    let start = Instant::now();
    let seven = verify_long_solution_theorem(7, 13).unwrap();
    let thirteen = verify_long_solution_theorem(13, 7).unwrap();
    let elapsed = start.elapsed();
    let classes_explained = |r: &revgcd::proofkit::TheoremReport| {
        r.count(CompositionClass::SingleClass) + r.count(CompositionClass::CofactorDivisible)
            == r.feasible_count()
    };
    let lib_ok = seven.total_compositions == 792
        && seven.verified()
        && classes_explained(&seven)
        && thirteen.total_compositions == 8568
        && thirteen.verified()
        && classes_explained(&thirteen)
        && elapsed < Duration::from_secs(1);

    let (out7, t7) = bin(&["prove", "7", "13"]);
    let (out13, t13) = bin(&["prove", "13", "7"]);
    let cli_ok = out7.status.code() == Some(0)
        && stdout(&out7).contains("counterexamples: 0")
        && t7 < Duration::from_secs(1)
        && out13.status.code() == Some(0)
        && stdout(&out13).contains("counterexamples: 0")
        && t13 < Duration::from_secs(1);
    report(
        "3",
        lib_ok && cli_ok,
        &format!(
            "792 and 8568 compositions, zero counterexamples ({:?} lib, {:?}/{:?} cli)",
            elapsed, t7, t13
        ),
    );
}

#[test]
fn criterion_4_x39_reproduction() {
    let analysis = analyze_compositions(39).unwrap();
    let witness = analysis
        .rows
        .iter()
        .find(|r| r.composition.sums() == [10, 9, 9, 6, 0, 5]);
    let analysis_ok = witness.is_some_and(|r| r.min_length == Some(55) && r.eliminated_by.is_none())
        && analysis.minimal_length() == Some(55);

    let (out, elapsed) = bin(&["search", "--x", "39"]);
    let text = stdout(&out);
    let search_ok = out.status.code() == Some(0)
        && text.contains(&format!("digits {}", SOL39))
        && text.contains("class_sums (10,9,9,6,0,5)")
        && text.contains("encoded 20016007615544303")
        && text.contains("gcd 39")
        && elapsed < Duration::from_secs(60);

    // independent big-integer confirmation
    let d: DigitString = SOL39.parse().unwrap();
    let gcd_ok = d.gcd_with_reversal() == BigUint::from(39u32);

    report(
        "4",
        analysis_ok && search_ok && gcd_ok,
        &format!("55-digit x=39 string reproduced in {:?}", elapsed),
    );
}

#[test]
fn criterion_5_x7_single_class() {
    let (out, elapsed) = bin(&["search", "--x", "7", "--mode", "single_class", "--class", "0"]);
    let text = stdout(&out);
    let rec = verify_solution(&SOL7.parse().unwrap(), 7).unwrap();
    let positions_ok = matches!(
        rec,
        Verdict::Accepted(ref r) if r.one_positions == vec![0, 6, 12, 18, 24, 30, 42]
    );
    let found_ok = out.status.code() == Some(0)
        && text.contains(&format!("digits {}", SOL7))
        && text.contains("gcd 7")
        && elapsed < Duration::from_secs(10);

    let (out42, _) = bin(&[
        "search", "--x", "7", "--mode", "single_class", "--class", "0", "--max-digits", "42",
    ]);
    let exhausts_ok =
        out42.status.code() == Some(3) && stdout(&out42).contains("exhausted");

    report(
        "5",
        found_ok && positions_ok && exhausts_ok,
        &format!(
            "43-digit x=7 string with ones at 0,6,12,18,24,30,42 in {:?}; cap 42 exhausts",
            elapsed
        ),
    );
}

#[test]
fn criterion_6_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xA348480);
    let moduli = [7u64, 11, 13, 39];
    let mut strings = 0u64;
    let mut mismatches = 0u64;
    for _ in 0..10_000 {
        let len = rng.gen_range(1..=120);
        let mut digits = vec![0u8; len];
        digits[0] = 1;
        for d in digits.iter_mut().skip(1) {
            *d = rng.gen_range(0..=1);
        }
        let d = DigitString::new(digits).unwrap();
        strings += 1;
        let value = d.base10_value();
        let rev = d.reverse().base10_value();
        for &x in &moduli {
            let big_x = BigUint::from(x);
            let direct: u64 = (&value % &big_x).try_into().unwrap();
            if forward_residue(&d, x).unwrap() != direct {
                mismatches += 1;
            }
            let m = multiplicative_order(x).unwrap();
            let pad = canonical_pad(d.len(), m);
            let rev_direct: u64 = (&rev * BigUint::from(10u32).pow(pad as u32) % &big_x)
                .try_into()
                .unwrap();
            if reverse_residue(&d, x, pad).unwrap() != rev_direct {
                mismatches += 1;
            }
            if block_sum_divisible(&d, x).unwrap() != (&value % &big_x == BigUint::ZERO) {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = strings >= 10_000 && mismatches == 0 && elapsed < Duration::from_secs(30);
    report(
        "6",
        ok,
        &format!(
            "{} strings x 4 moduli, {} mismatches, {:?}",
            strings, mismatches, elapsed
        ),
    );
}

#[test]
fn criterion_7_brute_vs_pruned() {
    let xs = [1u64, 3, 9, 11, 17, 19, 21, 23, 27, 29, 31, 33];
    let budget = Duration::from_secs(120);
    let mut compared = 0;
    let mut disagreements = 0;
    let mut skipped = Vec::new();
    for &x in &xs {
        let cfg = SearchConfig {
            max_digits: 80,
            time_budget: Some(budget),
            ..SearchConfig::default()
        };
        let brute = brute_force_smallest(x, &cfg).unwrap();
        match brute {
            SearchOutcome::Found(ref rb) => {
                let pruned = pruned_smallest(x, &cfg).unwrap();
                match pruned.record() {
                    Some(rp) if rp.digits == rb.digits => {
                        compared += 1;
                        println!("  x={}: identical ({} digits)", x, rb.length);
                    }
                    other => {
                        disagreements += 1;
                        println!("  x={}: DISAGREE brute={} pruned={:?}", x, rb.digits, other);
                    }
                }
            }
            SearchOutcome::BudgetExceeded { elapsed } => {
                skipped.push(x);
                println!("  x={}: brute force budget exceeded after {:?}, skipped", x, elapsed);
            }
            SearchOutcome::Exhausted { max_digits } => {
                skipped.push(x);
                println!("  x={}: brute force exhausted {} digits", x, max_digits);
            }
        }
    }
    let ok = disagreements == 0 && compared >= 1;
    report(
        "7",
        ok,
        &format!(
            "{} moduli compared identical, {} disagreements, skipped {:?}",
            compared, disagreements, skipped
        ),
    );
}

#[test]
fn criterion_8_x13_investigation() {
    let cfg = SearchConfig { max_digits: 80, ..SearchConfig::default() };
    let scan = single_class_scan(13, &cfg).unwrap();
    println!("{}", scan);

    // every reported solution re-verifies
    let all_verify = scan.classes.iter().filter_map(|c| c.outcome.record()).all(|r| {
        matches!(verify_solution(&r.digits, 13), Ok(Verdict::Accepted(_)))
    });
    let minimal = scan.minimal();
    let has_minimal = minimal.is_some();
    let claim = scan.check_length_claim(73);
    println!("  claimed 73 digits: {:?}", claim);
    let discrepancy_reported = matches!(
        claim,
        LengthClaim::Disagrees { palindrome_at_claimed: true, found: Some(_), .. }
    ) || matches!(claim, LengthClaim::Agrees { .. });

    report(
        "8",
        all_verify && has_minimal && discrepancy_reported,
        &format!(
            "minimal single-class find is {} digits; 73-digit claim checked openly",
            minimal.map(|r| r.length).unwrap_or(0)
        ),
    );
}

#[test]
fn criterion_9_bfile_crosscheck() {
    let fixture = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/b348480.txt");
    let (out, elapsed) = bin(&["crosscheck", &fixture.to_string_lossy()]);
    let text = stdout(&out);
    let ok = out.status.code() == Some(0)
        && text.contains("n=2 x=3: match")
        && text.contains("n=16 x=39: match")
        && text.contains("0 mismatched")
        && text.contains("0 parse errors");
    report(
        "9",
        ok,
        &format!("committed fixture fully agrees in {:?}", elapsed),
    );
}
