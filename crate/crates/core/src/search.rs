//! Searches for the smallest binary-like string with digit sum x whose gcd
//! with its reversal is exactly x.
//!
//! Three routes with one result contract ("smallest" = smallest base-10 value,
//! equivalently fewest digits then lexicographically smallest):
//!
//! - [`brute_force_smallest`] enumerates candidates by increasing length then
//!   value and verifies each. It is the oracle the pruned search is checked
//!   against and uses none of the class-sum machinery.
//! - [`pruned_smallest`] restricts candidates to class-sum compositions that
//!   pass the necessary conditions and cuts partial digit assignments that
//!   cannot realize any surviving composition. Compositions whose every
//!   realization is divisible both ways by a cofactor y coprime to x (a y
//!   whose multiplicative order divides x's) are dropped: the gcd of such a
//!   realization is a multiple of x·y and can never be exactly x. When the
//!   composition space is too large to enumerate, the same cut is computed
//!   from a per-length table of reachable (forward, reverse, ones) triples.
//! - [`single_class_smallest`] searches only strings whose ones share one
//!   position class mod m, the shape the long-solution theorems force.
//!
//! Candidates are anchored with first digit 1 (numbers have no leading zero)
//! and last digit 1: a solution ending in 0 strips to a shorter solution, so
//! the smallest never ends in 0. Survivors of every route are confirmed by
//! exact big-integer gcd before being reported.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;

use crate::constraints::{build_system, ClassSumSystem};
use crate::digits::DigitString;
use crate::error::{Error, Result};
use crate::proofkit::{composition_count, enumerate_compositions};
use crate::residue::{class_sums, multiplicative_order, remainder_cycle, ClassSumVector};

/// Compositions spaces up to this size are enumerated explicitly; beyond it
/// the reachability table provides the equivalent cut.
const COMPOSITION_ENUMERATION_LIMIT: u128 = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Brute,
    Pruned,
    SingleClass,
}

pub type ProgressHook = Arc<dyn Fn(u64) + Send + Sync>;

#[derive(Clone)]
pub struct SearchConfig {
    /// Explicit exhaustion cap, never a silent default.
    pub max_digits: usize,
    pub mode: SearchMode,
    /// Class index for single-class mode (default 0).
    pub class_hint: Option<usize>,
    pub workers: usize,
    /// Optional wall-clock bound; exceeding it is reported distinctly from
    /// exhausting the digit cap.
    pub time_budget: Option<Duration>,
    /// Heartbeat for long runs, called with the running candidate count.
    pub progress: Option<ProgressHook>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_digits: 80,
            mode: SearchMode::Pruned,
            class_hint: None,
            workers: 1,
            time_budget: None,
            progress: None,
        }
    }
}

impl fmt::Debug for SearchConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SearchConfig")
            .field("max_digits", &self.max_digits)
            .field("mode", &self.mode)
            .field("class_hint", &self.class_hint)
            .field("workers", &self.workers)
            .field("time_budget", &self.time_budget)
            .field("progress", &self.progress.is_some())
            .finish()
    }
}

/// A verified solution: digit sum x and gcd with the reversal exactly x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionRecord {
    pub modulus: u64,
    pub digits: DigitString,
    pub length: usize,
    pub one_positions: Vec<usize>,
    pub zero_count: usize,
    /// More zeros than ones.
    pub long: bool,
    pub digit_sum: u64,
    pub gcd: BigUint,
}

impl fmt::Display for SolutionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "x {}", self.modulus)?;
        writeln!(f, "digits {}", self.digits)?;
        writeln!(f, "length {}", self.length)?;
        writeln!(f, "ones {}", self.digit_sum)?;
        writeln!(f, "zeros {}", self.zero_count)?;
        writeln!(f, "long {}", if self.long { "yes" } else { "no" })?;
        write!(f, "gcd {}", self.gcd)
    }
}

/// Why a candidate fails: which conditions failed, with the actual values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub digit_sum_ok: bool,
    pub gcd_ok: bool,
    pub digit_sum: u64,
    pub gcd: BigUint,
    pub palindrome: bool,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.digit_sum_ok {
            parts.push(format!("digit sum is {}", self.digit_sum));
        }
        if !self.gcd_ok {
            if self.palindrome {
                parts.push(format!("palindrome, gcd = {}", self.gcd));
            } else {
                parts.push(format!("gcd = {}", self.gcd));
            }
        }
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted(SolutionRecord),
    Rejected(Rejection),
}

impl Verdict {
    pub fn record(&self) -> Option<&SolutionRecord> {
        match self {
            Verdict::Accepted(r) => Some(r),
            Verdict::Rejected(_) => None,
        }
    }
}

/// Accepts iff digit_sum(d) = x and gcd(d, rev(d)) = x exactly (not a proper
/// multiple). Exact big-integer arithmetic throughout; non-binary digits are
/// an error, not a rejection.
pub fn verify_solution(d: &DigitString, x: u64) -> Result<Verdict> {
    for p in 0..d.len() {
        let digit = d.digit(p);
        if digit > 1 {
            return Err(Error::NonBinaryDigit { digit, position: p });
        }
    }
    let digit_sum = d.digit_sum();
    let gcd = d.gcd_with_reversal();
    let palindrome = d.is_palindrome();
    let digit_sum_ok = digit_sum == x;
    let gcd_ok = gcd == BigUint::from(x);
    if !digit_sum_ok || !gcd_ok {
        return Ok(Verdict::Rejected(Rejection {
            digit_sum_ok,
            gcd_ok,
            digit_sum,
            gcd,
            palindrome,
        }));
    }
    let zero_count = d.zero_count();
    Ok(Verdict::Accepted(SolutionRecord {
        modulus: x,
        length: d.len(),
        one_positions: d.one_positions(),
        zero_count,
        long: zero_count > digit_sum as usize,
        digit_sum,
        gcd,
        digits: d.clone(),
    }))
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(SolutionRecord),
    Exhausted { max_digits: usize },
    BudgetExceeded { elapsed: Duration },
}

impl SearchOutcome {
    pub fn record(&self) -> Option<&SolutionRecord> {
        match self {
            SearchOutcome::Found(r) => Some(r),
            _ => None,
        }
    }
}

/// Shared candidate counter, heartbeat and wall-clock budget.
#[derive(Clone)]
struct Meter {
    start: Instant,
    budget: Option<Duration>,
    progress: Option<ProgressHook>,
    examined: Arc<AtomicU64>,
    stopped: Arc<AtomicBool>,
}

const HEARTBEAT_MASK: u64 = (1 << 18) - 1;

impl Meter {
    fn new(cfg: &SearchConfig) -> Self {
        Meter {
            start: Instant::now(),
            budget: cfg.time_budget,
            progress: cfg.progress.clone(),
            examined: Arc::new(AtomicU64::new(0)),
            stopped: Arc::new(AtomicBool::new(false)),
        }
    }

    /// Records `n` examined candidates; false once the budget is exceeded.
    fn bump(&self, n: u64) -> bool {
        let total = self.examined.fetch_add(n, Ordering::Relaxed) + n;
        if let Some(hook) = &self.progress {
            if n > 0 && (total & !HEARTBEAT_MASK) != ((total - n) & !HEARTBEAT_MASK) {
                hook(total);
            }
        }
        if let Some(budget) = self.budget {
            if self.start.elapsed() > budget {
                self.stopped.store(true, Ordering::Relaxed);
                return false;
            }
        }
        !self.stopped.load(Ordering::Relaxed)
    }

    fn stopped(&self) -> bool {
        self.stopped.load(Ordering::Relaxed)
    }

    fn budget_outcome(&self) -> SearchOutcome {
        SearchOutcome::BudgetExceeded { elapsed: self.start.elapsed() }
    }
}

fn check_coprime(x: u64) -> Result<()> {
    if x == 0 || x.is_multiple_of(2) || x.is_multiple_of(5) {
        return Err(Error::NotCoprimeToTen(x));
    }
    Ok(())
}

// Candidate masks live in u128 words.
fn check_cap(max_digits: usize) -> Result<()> {
    if max_digits > 128 {
        return Err(Error::UnsupportedCap { requested: max_digits, supported: 128 });
    }
    Ok(())
}

/// Same-popcount successor (Gosper); caller checks the window bound.
fn next_same_popcount(v: u128) -> u128 {
    debug_assert!(v != 0);
    let t = v | (v - 1);
    let low = (!t) & (!t).wrapping_neg();
    (t + 1) | ((low - 1) >> (v.trailing_zeros() + 1))
}

/// Enumerates binary-like strings by increasing length, then increasing
/// base-10 value, and returns the first accepted by [`verify_solution`].
/// Only candidates that can possibly verify are generated (digit sum exactly
/// x, first and last digit 1), and a cheap necessary-condition screen
/// (x | b and x | rev(b), by modular accumulation) precedes the exact check;
/// acceptance is always by exact gcd.
pub fn brute_force_smallest(x: u64, cfg: &SearchConfig) -> Result<SearchOutcome> {
    check_coprime(x)?;
    check_cap(cfg.max_digits)?;
    let meter = Meter::new(cfg);
    for s in 1..=cfg.max_digits {
        if (s as u64) < x {
            continue;
        }
        if s == 1 {
            // Digit sum x = 1: the only candidate is "1".
            let d: DigitString = "1".parse().expect("valid");
            if let Verdict::Accepted(rec) = verify_solution(&d, x)? {
                return Ok(SearchOutcome::Found(rec));
            }
            continue;
        }
        if x == 1 {
            // A single one at both ends is impossible for s >= 2.
            break;
        }
        match brute_scan_length(x, s, &meter)? {
            Scan::Found(rec) => return Ok(SearchOutcome::Found(rec)),
            Scan::Stopped => return Ok(meter.budget_outcome()),
            Scan::Continue => {}
        }
    }
    if meter.stopped() {
        return Ok(meter.budget_outcome());
    }
    Ok(SearchOutcome::Exhausted { max_digits: cfg.max_digits })
}

enum Scan {
    Found(SolutionRecord),
    Continue,
    Stopped,
}

fn brute_scan_length(x: u64, s: usize, meter: &Meter) -> Result<Scan> {
    let window = s - 2; // free positions 1..=s-2
    let ones_free = (x - 2) as usize;
    if ones_free > window {
        return Ok(Scan::Continue);
    }
    let pow10: Vec<u64> = {
        let mut v = Vec::with_capacity(s);
        let mut r = 1 % x;
        for _ in 0..s {
            v.push(r);
            r = r * 10 % x;
        }
        v
    };
    let repunit: u64 = pow10.iter().fold(0, |a, &b| (a + b) % x);
    let full_window: u128 = if window == 0 { 0 } else { (1u128 << window) - 1 };
    let zeros_free = window - ones_free;
    let by_zeros = zeros_free < ones_free;

    let mut mask: u128 = if ones_free == 0 { 0 } else { (1u128 << ones_free) - 1 };
    let mut batch = 0u64;
    loop {
        // Candidate one-positions: {0, s-1} plus mask bits shifted to 1..=s-2.
        let (mut fwd, mut rev) = if by_zeros {
            // Subtract the zero positions from the all-ones residues.
            let zmask = full_window & !mask;
            let mut zf = 0u64;
            let mut zr = 0u64;
            let mut zm = zmask;
            while zm != 0 {
                let p = zm.trailing_zeros() as usize + 1;
                zf += pow10[p];
                zr += pow10[s - 1 - p];
                zm &= zm - 1;
            }
            (
                (repunit + zeros_free as u64 * x - zf % x) % x,
                (repunit + zeros_free as u64 * x - zr % x) % x,
            )
        } else {
            let mut fwd = (pow10[0] + pow10[s - 1]) % x;
            let mut rev = fwd;
            let mut om = mask;
            while om != 0 {
                let p = om.trailing_zeros() as usize + 1;
                fwd += pow10[p];
                rev += pow10[s - 1 - p];
                om &= om - 1;
            }
            (fwd, rev)
        };
        fwd %= x;
        rev %= x;
        if fwd == 0 && rev == 0 {
            let mut ones: Vec<usize> = vec![0];
            let mut om = mask;
            while om != 0 {
                ones.push(om.trailing_zeros() as usize + 1);
                om &= om - 1;
            }
            ones.push(s - 1);
            let d = DigitString::from_one_positions(s, &ones)?;
            if let Verdict::Accepted(rec) = verify_solution(&d, x)? {
                meter.bump(batch + 1);
                return Ok(Scan::Found(rec));
            }
        }
        batch += 1;
        if batch == 1 << 14 {
            if !meter.bump(batch) {
                return Ok(Scan::Stopped);
            }
            batch = 0;
        }
        if mask == 0 {
            break;
        }
        let next = next_same_popcount(mask);
        if next > full_window {
            break;
        }
        mask = next;
    }
    meter.bump(batch);
    if meter.stopped() {
        return Ok(Scan::Stopped);
    }
    Ok(Scan::Continue)
}

/// Cofactor moduli used to discard doomed compositions: small prime powers y
/// coprime to x whose multiplicative order divides m, so 10^m = 1 (mod y) and
/// y-divisibility of every realization is decided by the class sums alone.
fn cofactor_screens(x: u64, m: usize) -> Vec<u64> {
    [3u64, 7, 9, 11, 13, 27, 37]
        .into_iter()
        .filter(|&y| y.gcd(&x) == 1)
        .filter(|&y| multiplicative_order(y).map(|o| m.is_multiple_of(o)).unwrap_or(false))
        .collect()
}

/// True when every realization of P is divisible by y forwards and backwards,
/// i.e. the class sums collapsed to y's order pass y's system.
fn composition_forces_cofactor(p: &ClassSumVector, ysys: &ClassSumSystem) -> bool {
    let q = p.collapse(ysys.order());
    match ysys.check_composition(&q) {
        Ok(c) => c.forward_ok && c.reverse_ok,
        Err(_) => false,
    }
}

fn class_count(s: usize, m: usize, j: usize) -> u64 {
    if j >= s {
        0
    } else {
        ((s - 1 - j) / m + 1) as u64
    }
}

/// Ones forced into class j by the first/last-digit anchoring at length s.
fn forced_in_class(s: usize, m: usize, j: usize) -> u64 {
    let mut f = 0;
    if j == 0 {
        f += 1; // position 0
    }
    if s >= 2 && (s - 1) % m == j {
        f += 1; // position s-1
    }
    f
}

fn composition_realizable(p: &ClassSumVector, s: usize, m: usize) -> bool {
    if s < 2 {
        return false;
    }
    (0..m).all(|j| {
        let pj = p.get(j);
        pj >= forced_in_class(s, m, j) && pj <= class_count(s, m, j)
    })
}

/// Smallest length at which P is realizable with the first/last-digit
/// anchoring, or None when P has no ones in class 0 (such a string would end
/// in 0 and strip to a shorter solution).
pub(crate) fn composition_min_length(p: &ClassSumVector, m: usize) -> Option<usize> {
    if p.get(0) == 0 {
        return None;
    }
    let needed = (0..m)
        .filter(|&j| p.get(j) > 0)
        .map(|j| j + m * (p.get(j) as usize - 1))
        .max()?;
    (needed + 1..=needed + 2 * m + 2).find(|&s| composition_realizable(p, s, m))
}

/// Reachable (forward, reverse, ones-count) triples over prefixes of the free
/// positions, lowest first. The exact form of the pruning cut when the
/// composition space is too large to enumerate.
struct ReachTable {
    x: u64,
    layers: Vec<Vec<u128>>,
}

impl ReachTable {
    /// `coeffs[i]` are the (forward, reverse) coefficients of the i-th free
    /// position in ascending position order.
    fn build(x: u64, coeffs: &[(u64, u64)]) -> ReachTable {
        let cells = (x * x) as usize;
        let mut layers = Vec::with_capacity(coeffs.len() + 1);
        let mut layer = vec![0u128; cells];
        layer[0] = 1; // (0, 0) with 0 ones
        layers.push(layer.clone());
        for &(f, g) in coeffs {
            let prev = layers.last().unwrap();
            let mut next = prev.clone();
            for a in 0..x {
                for b in 0..x {
                    let bits = prev[(a * x + b) as usize];
                    if bits != 0 {
                        let cell = (((a + f) % x) * x + (b + g) % x) as usize;
                        next[cell] |= bits << 1;
                    }
                }
            }
            layers.push(next);
        }
        ReachTable { x, layers }
    }

    fn contains(&self, prefix: usize, fwd: u64, rev: u64, ones: u64) -> bool {
        ones < 128 && (self.layers[prefix][(fwd * self.x + rev) as usize] >> ones) & 1 == 1
    }
}

enum Prune<'a> {
    /// Surviving compositions realizable at the current length.
    Comps(&'a [ClassSumVector]),
    Table(&'a ReachTable),
}

#[derive(Clone)]
struct DfsState {
    /// Free positions, descending (most significant first).
    free: Vec<usize>,
    /// Next index into `free` to assign.
    idx: usize,
    /// Current per-class ones, forced anchors included.
    class_ones: Vec<u64>,
    /// Free positions not yet assigned per class.
    class_free: Vec<u64>,
    ones_left: u64,
    fwd: u64,
    rev: u64,
    chosen: Vec<usize>,
}

struct LengthScan<'a> {
    x: u64,
    s: usize,
    m: usize,
    /// (forward, reverse) coefficient of each position mod x.
    coeff: Vec<(u64, u64)>,
    prune: Prune<'a>,
    meter: &'a Meter,
}

impl LengthScan<'_> {
    fn admits(&self, st: &DfsState) -> bool {
        match &self.prune {
            Prune::Comps(alive) => alive.iter().any(|p| {
                (0..self.m).all(|j| {
                    let pj = p.get(j);
                    st.class_ones[j] <= pj && pj <= st.class_ones[j] + st.class_free[j]
                })
            }),
            Prune::Table(t) => {
                let remaining = st.free.len() - st.idx;
                let nf = (self.x - st.fwd) % self.x;
                let nr = (self.x - st.rev) % self.x;
                t.contains(remaining, nf, nr, st.ones_left)
            }
        }
    }

    /// Depth-first in value order; the first accepted candidate is the
    /// smallest at this length within the pruned space.
    fn dfs(&self, st: &mut DfsState) -> Result<Option<SolutionRecord>> {
        if !self.admits(st) {
            return Ok(None);
        }
        if st.idx == st.free.len() {
            debug_assert_eq!(st.ones_left, 0);
            debug_assert_eq!((st.fwd, st.rev), (0, 0));
            if !self.meter.bump(1) {
                return Ok(None);
            }
            let mut ones = st.chosen.clone();
            ones.push(0);
            ones.push(self.s - 1);
            let d = DigitString::from_one_positions(self.s, &ones)?;
            if let Verdict::Accepted(rec) = verify_solution(&d, self.x)? {
                return Ok(Some(rec));
            }
            return Ok(None);
        }
        if self.meter.stopped() {
            return Ok(None);
        }
        let p = st.free[st.idx];
        let j = p % self.m;
        let (f, g) = self.coeff[p];
        st.idx += 1;
        st.class_free[j] -= 1;

        // Zero first: smaller value.
        if let Some(rec) = self.dfs(st)? {
            return Ok(Some(rec));
        }
        if st.ones_left > 0 {
            st.class_ones[j] += 1;
            st.ones_left -= 1;
            st.fwd = (st.fwd + f) % self.x;
            st.rev = (st.rev + g) % self.x;
            st.chosen.push(p);
            let found = self.dfs(st)?;
            st.chosen.pop();
            st.rev = (st.rev + self.x - g) % self.x;
            st.fwd = (st.fwd + self.x - f) % self.x;
            st.ones_left += 1;
            st.class_ones[j] -= 1;
            if let Some(rec) = found {
                return Ok(Some(rec));
            }
        }

        st.class_free[j] += 1;
        st.idx -= 1;
        Ok(None)
    }

    fn initial_state(&self) -> DfsState {
        let free: Vec<usize> = (1..self.s - 1).rev().collect();
        let mut class_ones = vec![0u64; self.m];
        let class_free: Vec<u64> = (0..self.m)
            .map(|j| class_count(self.s, self.m, j) - forced_in_class(self.s, self.m, j))
            .collect();
        class_ones[0] += 1;
        class_ones[(self.s - 1) % self.m] += 1;
        let (f0, g0) = self.coeff[0];
        let (f1, g1) = self.coeff[self.s - 1];
        DfsState {
            free,
            idx: 0,
            class_ones,
            class_free,
            ones_left: self.x - 2,
            fwd: (f0 + f1) % self.x,
            rev: (g0 + g1) % self.x,
            chosen: Vec::new(),
        }
    }

    /// Splits the search at a prefix depth giving at least `min_branches`
    /// admitted states, preserving value order across branches.
    fn branch_states(&self, min_branches: usize) -> Vec<DfsState> {
        let mut states = vec![self.initial_state()];
        while states.len() < min_branches {
            let depth = states[0].idx;
            if depth >= states[0].free.len() || depth >= 24 {
                break;
            }
            let mut next = Vec::with_capacity(states.len() * 2);
            for st in states {
                if !self.admits(&st) {
                    continue;
                }
                let p = st.free[st.idx];
                let j = p % self.m;
                let (f, g) = self.coeff[p];
                // zero branch first: smaller value
                let mut zero = st.clone();
                zero.idx += 1;
                zero.class_free[j] -= 1;
                next.push(zero);
                if st.ones_left > 0 {
                    let mut one = st;
                    one.idx += 1;
                    one.class_free[j] -= 1;
                    one.class_ones[j] += 1;
                    one.ones_left -= 1;
                    one.fwd = (one.fwd + f) % self.x;
                    one.rev = (one.rev + g) % self.x;
                    one.chosen.push(p);
                    next.push(one);
                }
            }
            if next.is_empty() {
                return next;
            }
            states = next;
        }
        states
    }
}

fn scan_length(scan: &LengthScan<'_>, workers: usize) -> Result<Scan> {
    let found = if workers <= 1 {
        let mut st = scan.initial_state();
        scan.dfs(&mut st)?
    } else {
        let states = scan.branch_states(workers * 4);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        // Branches are in value order; the first find in branch order is the
        // minimum, so scheduling cannot change the answer.
        pool.install(|| {
            states
                .into_par_iter()
                .find_map_first(|mut st| scan.dfs(&mut st).transpose())
        })
        .transpose()?
    };
    match found {
        Some(rec) => Ok(Scan::Found(rec)),
        None if scan.meter.stopped() => Ok(Scan::Stopped),
        None => Ok(Scan::Continue),
    }
}

/// Same result contract as [`brute_force_smallest`], but candidate class-sum
/// compositions must pass the necessary conditions and partial assignments
/// are cut when the remaining positions cannot realize any surviving
/// composition. Survivors still get the full big-integer gcd check.
pub fn pruned_smallest(x: u64, cfg: &SearchConfig) -> Result<SearchOutcome> {
    check_coprime(x)?;
    let meter = Meter::new(cfg);
    if x == 1 {
        if cfg.max_digits == 0 {
            return Ok(SearchOutcome::Exhausted { max_digits: 0 });
        }
        let d: DigitString = "1".parse().expect("valid");
        return match verify_solution(&d, 1)? {
            Verdict::Accepted(rec) => Ok(SearchOutcome::Found(rec)),
            Verdict::Rejected(_) => unreachable!("gcd(1, 1) = 1"),
        };
    }
    let m = multiplicative_order(x)?;
    let cycle = remainder_cycle(x)?;

    let comps: Option<Vec<ClassSumVector>> =
        if composition_count(x, m) <= COMPOSITION_ENUMERATION_LIMIT {
            let sys = build_system(x)?;
            let screens: Vec<ClassSumSystem> = cofactor_screens(x, m)
                .into_iter()
                .map(build_system)
                .collect::<Result<_>>()?;
            let mut kept = Vec::new();
            for p in enumerate_compositions(x, m) {
                if p.get(0) < 1 || !sys.check_composition(&p)?.all_ok() {
                    continue;
                }
                if screens.iter().any(|y| composition_forces_cofactor(&p, y)) {
                    continue;
                }
                kept.push(p);
            }
            Some(kept)
        } else {
            // The reachability table tracks ones-counts in u128 bits.
            if x > 127 && cfg.max_digits as u64 >= x {
                return Err(Error::CompositionSpaceTooLarge { total: x, parts: m });
            }
            None
        };

    for s in 2..=cfg.max_digits {
        if (s as u64) < x {
            continue;
        }
        let coeff: Vec<(u64, u64)> = (0..s)
            .map(|p| {
                let j = p % m;
                (cycle.remainder(j), cycle.remainder((m - 1 - j) % m))
            })
            .collect();

        let alive: Vec<ClassSumVector>;
        let table: ReachTable;
        let prune = match &comps {
            Some(f) => {
                alive = f
                    .iter()
                    .filter(|p| composition_realizable(p, s, m))
                    .cloned()
                    .collect();
                if alive.is_empty() {
                    continue;
                }
                Prune::Comps(&alive)
            }
            None => {
                let free_coeffs: Vec<(u64, u64)> = (1..s - 1).map(|p| coeff[p]).collect();
                table = ReachTable::build(x, &free_coeffs);
                Prune::Table(&table)
            }
        };
        let scan = LengthScan { x, s, m, coeff, prune, meter: &meter };
        match scan_length(&scan, cfg.workers)? {
            Scan::Found(rec) => return Ok(SearchOutcome::Found(rec)),
            Scan::Stopped => return Ok(meter.budget_outcome()),
            Scan::Continue => {}
        }
    }
    if meter.stopped() {
        return Ok(meter.budget_outcome());
    }
    Ok(SearchOutcome::Exhausted { max_digits: cfg.max_digits })
}

/// Searches only strings whose ones all lie at positions = class (mod m), by
/// increasing length then value. Palindromes are rejected without the gcd
/// (they verify-fail: gcd(b, rev(b)) = b).
pub fn single_class_smallest(x: u64, class: usize, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let (outcome, _) = single_class_search(x, class, cfg)?;
    Ok(outcome)
}

fn single_class_search(
    x: u64,
    class: usize,
    cfg: &SearchConfig,
) -> Result<(SearchOutcome, Vec<usize>)> {
    check_coprime(x)?;
    check_cap(cfg.max_digits)?;
    let m = multiplicative_order(x)?;
    if class >= m {
        return Err(Error::InvalidClass { class, order: m });
    }
    let meter = Meter::new(cfg);
    let mut palindromes = Vec::new();

    // Lengths with the leading digit in the class: s - 1 = class (mod m).
    let mut s = class + 1;
    while s <= cfg.max_digits {
        // Positions class, class + m, ..., s - 1.
        let pool: Vec<usize> = (0..).map(|k| class + k * m).take_while(|&p| p < s).collect();
        let q = pool.len();
        if (q as u64) >= x {
            // Choose x - 1 of the lower pool slots; the top one is fixed.
            let k = (x - 1) as usize;
            let window = q - 1;
            let mut mask: u128 = if k == 0 { 0 } else { (1u128 << k) - 1 };
            let full: u128 = if window == 0 { 0 } else { (1u128 << window) - 1 };
            loop {
                let mut ones: Vec<usize> = Vec::with_capacity(x as usize);
                let mut bm = mask;
                while bm != 0 {
                    ones.push(pool[bm.trailing_zeros() as usize]);
                    bm &= bm - 1;
                }
                ones.push(s - 1);
                if !meter.bump(1) {
                    return Ok((meter.budget_outcome(), palindromes));
                }
                if ones.iter().all(|&p| ones.binary_search(&(s - 1 - p)).is_ok()) {
                    palindromes.push(s);
                } else {
                    let d = DigitString::from_one_positions(s, &ones)?;
                    if let Verdict::Accepted(rec) = verify_solution(&d, x)? {
                        return Ok((SearchOutcome::Found(rec), palindromes));
                    }
                }
                if mask == 0 {
                    break;
                }
                let next = next_same_popcount(mask);
                if next > full {
                    break;
                }
                mask = next;
            }
        }
        s += m;
    }
    Ok((SearchOutcome::Exhausted { max_digits: cfg.max_digits }, palindromes))
}

/// One class's scan result.
#[derive(Debug)]
pub struct ClassScan {
    pub class: usize,
    pub outcome: SearchOutcome,
    /// Lengths at which a palindrome candidate was rejected.
    pub palindromes_rejected: Vec<usize>,
}

/// Single-class scan across all classes, for the x = 13 style investigation.
#[derive(Debug)]
pub struct ScanReport {
    pub modulus: u64,
    pub max_digits: usize,
    pub classes: Vec<ClassScan>,
}

/// Comparison of the scan against an externally claimed minimal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LengthClaim {
    Agrees { length: usize },
    Disagrees {
        claimed: usize,
        found: Option<usize>,
        /// A candidate of the claimed length existed but was a palindrome.
        palindrome_at_claimed: bool,
    },
}

impl ScanReport {
    pub fn minimal(&self) -> Option<&SolutionRecord> {
        self.classes
            .iter()
            .filter_map(|c| c.outcome.record())
            .min_by(|a, b| {
                (a.length, a.digits.to_string()).cmp(&(b.length, b.digits.to_string()))
            })
    }

    /// Checks a claimed minimal length against the scan, reporting any
    /// palindrome obstruction at the claimed length rather than suppressing
    /// the discrepancy.
    pub fn check_length_claim(&self, claimed: usize) -> LengthClaim {
        let found = self.minimal().map(|r| r.length);
        if found == Some(claimed) {
            return LengthClaim::Agrees { length: claimed };
        }
        let palindrome_at_claimed = self
            .classes
            .iter()
            .any(|c| c.palindromes_rejected.contains(&claimed));
        LengthClaim::Disagrees { claimed, found, palindrome_at_claimed }
    }
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "single-class scan for x = {} up to {} digits",
            self.modulus, self.max_digits
        )?;
        for c in &self.classes {
            write!(f, "  class {}: ", c.class)?;
            match &c.outcome {
                SearchOutcome::Found(r) => writeln!(f, "found {} digits: {}", r.length, r.digits)?,
                SearchOutcome::Exhausted { max_digits } => {
                    writeln!(f, "nothing up to {} digits", max_digits)?
                }
                SearchOutcome::BudgetExceeded { elapsed } => {
                    writeln!(f, "budget exceeded after {:?}", elapsed)?
                }
            }
            if !c.palindromes_rejected.is_empty() {
                writeln!(f, "    palindromes rejected at lengths {:?}", c.palindromes_rejected)?;
            }
        }
        match self.minimal() {
            Some(r) => write!(f, "minimal: {} digits", r.length),
            None => write!(f, "minimal: none found"),
        }
    }
}

pub fn single_class_scan(x: u64, cfg: &SearchConfig) -> Result<ScanReport> {
    let m = multiplicative_order(x)?;
    let mut classes = Vec::with_capacity(m);
    for class in 0..m {
        let (outcome, palindromes_rejected) = single_class_search(x, class, cfg)?;
        classes.push(ClassScan { class, outcome, palindromes_rejected });
    }
    Ok(ScanReport { modulus: x, max_digits: cfg.max_digits, classes })
}

/// Dispatch on the configured mode; single-class mode uses `class_hint`
/// (default 0).
pub fn smallest_solution(x: u64, cfg: &SearchConfig) -> Result<SearchOutcome> {
    match cfg.mode {
        SearchMode::Brute => brute_force_smallest(x, cfg),
        SearchMode::Pruned => pruned_smallest(x, cfg),
        SearchMode::SingleClass => single_class_smallest(x, cfg.class_hint.unwrap_or(0), cfg),
    }
}

/// Feasible compositions for x with elimination and minimal-length notes —
/// the data behind the analyze command.
#[derive(Debug, Clone)]
pub struct CompositionAnalysis {
    pub modulus: u64,
    pub order: usize,
    pub rows: Vec<AnalysisRow>,
}

#[derive(Debug, Clone)]
pub struct AnalysisRow {
    pub composition: ClassSumVector,
    pub single_class: bool,
    /// Smallest screen modulus whose divisibility is forced for every
    /// realization, making gcd = x impossible.
    pub eliminated_by: Option<u64>,
    /// Minimal realizable length under the first/last-digit anchoring.
    pub min_length: Option<usize>,
}

impl CompositionAnalysis {
    /// Minimal length over surviving compositions: no solution can be shorter.
    pub fn minimal_length(&self) -> Option<usize> {
        self.rows
            .iter()
            .filter(|r| r.eliminated_by.is_none())
            .filter_map(|r| r.min_length)
            .min()
    }
}

pub fn analyze_compositions(x: u64) -> Result<CompositionAnalysis> {
    check_coprime(x)?;
    let m = multiplicative_order(x)?;
    if composition_count(x, m) > COMPOSITION_ENUMERATION_LIMIT {
        return Err(Error::CompositionSpaceTooLarge { total: x, parts: m });
    }
    let sys = build_system(x)?;
    let screens: Vec<ClassSumSystem> = cofactor_screens(x, m)
        .into_iter()
        .map(build_system)
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for p in enumerate_compositions(x, m) {
        if !sys.check_composition(&p)?.all_ok() {
            continue;
        }
        let eliminated_by = screens
            .iter()
            .find(|y| composition_forces_cofactor(&p, y))
            .map(|y| y.modulus());
        rows.push(AnalysisRow {
            single_class: p.is_single_class(),
            eliminated_by,
            min_length: composition_min_length(&p, m),
            composition: p,
        });
    }
    Ok(CompositionAnalysis { modulus: x, order: m, rows })
}

/// Class sums of an accepted solution pass the composition check — used by
/// callers wanting the soundness cross-check.
pub fn record_passes_class_filter(rec: &SolutionRecord) -> Result<bool> {
    if rec.modulus == 1 {
        return Ok(true);
    }
    let sys = build_system(rec.modulus)?;
    let p = class_sums(&rec.digits, sys.order());
    Ok(sys.check_composition(&p)?.all_ok())
}
