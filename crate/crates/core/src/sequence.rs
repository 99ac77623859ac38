//! A348480 term indexing, base-2 encoding of terms, a persistent term cache,
//! and b-file cross-validation.
//!
//! Term n is the smallest solution for x = the n-th positive integer coprime
//! to 10, stored as the digit string read in base 2. The cache is plain text,
//! one record per line: `n <TAB> x <TAB> digits <TAB> base2 <TAB> status`,
//! diff-able and fixture-friendly. Terms beyond the search cap are stored as
//! unknown, never guessed.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::PathBuf;

use num_bigint::BigUint;

use crate::digits::DigitString;
use crate::error::{Error, Result};
use crate::search::{pruned_smallest, verify_solution, SearchConfig, SearchOutcome, Verdict};

/// The n-th positive integer whose last digit is 1, 3, 7 or 9:
/// 1, 3, 7, 9, 11, 13, 17, 19, 21, ...
pub fn coprime_index(n: u64) -> u64 {
    assert!(n >= 1, "term indices are 1-based");
    const LAST: [u64; 4] = [1, 3, 7, 9];
    10 * ((n - 1) / 4) + LAST[((n - 1) % 4) as usize]
}

/// Inverse of [`coprime_index`]: the 1-based position of x among integers
/// coprime to 10.
pub fn modulus_index(x: u64) -> Result<u64> {
    let rank = match x % 10 {
        1 => 1,
        3 => 2,
        7 => 3,
        9 => 4,
        _ => return Err(Error::NotCoprimeToTen(x)),
    };
    Ok(4 * (x / 10) + rank)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermStatus {
    /// Passed an independent verify_solution pass this session or at load.
    Verified,
    /// Present in a cache but not yet re-verified.
    CachedUnverified,
    /// Search exhausted the recorded digit cap without a result.
    Unknown { cap: usize },
}

impl fmt::Display for TermStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermStatus::Verified => write!(f, "verified"),
            TermStatus::CachedUnverified => write!(f, "cached-unverified"),
            TermStatus::Unknown { cap } => write!(f, "unknown(cap={})", cap),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermEntry {
    /// 1-based index into the sequence.
    pub index: u64,
    /// The n-th integer coprime to 10.
    pub modulus: u64,
    pub digits: Option<DigitString>,
    /// The digit string read in base 2.
    pub encoded: Option<BigUint>,
    pub status: TermStatus,
}

impl TermEntry {
    fn render_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.index,
            self.modulus,
            self.digits.as_ref().map_or("-".to_string(), |d| d.to_string()),
            self.encoded.as_ref().map_or("-".to_string(), |v| v.to_string()),
            self.status,
        )
    }

    fn parse_line(line_no: usize, line: &str) -> Result<TermEntry> {
        let bad = |message: &str| Error::CacheFormat { line: line_no, message: message.into() };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(bad("expected 5 tab-separated fields"));
        }
        let index: u64 = fields[0].parse().map_err(|_| bad("bad index"))?;
        let modulus: u64 = fields[1].parse().map_err(|_| bad("bad modulus"))?;
        let digits = match fields[2] {
            "-" => None,
            s => Some(s.parse::<DigitString>().map_err(|_| bad("bad digit string"))?),
        };
        let encoded = match fields[3] {
            "-" => None,
            s => Some(s.parse::<BigUint>().map_err(|_| bad("bad encoded value"))?),
        };
        let status = if fields[4] == "verified" {
            TermStatus::Verified
        } else if fields[4] == "cached-unverified" {
            TermStatus::CachedUnverified
        } else if let Some(rest) = fields[4].strip_prefix("unknown(cap=") {
            let cap = rest
                .strip_suffix(')')
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| bad("bad unknown status"))?;
            TermStatus::Unknown { cap }
        } else {
            return Err(bad("unrecognized status"));
        };
        Ok(TermEntry { index, modulus, digits, encoded, status })
    }

    /// Checks the entry's internal consistency: index/modulus pairing, the
    /// base-2 encoding round trip, and the solution conditions.
    fn verifies(&self) -> bool {
        if self.modulus != coprime_index(self.index) {
            return false;
        }
        let (Some(d), Some(v)) = (&self.digits, &self.encoded) else {
            return false;
        };
        if d.base2_value().ok().as_ref() != Some(v) {
            return false;
        }
        matches!(verify_solution(d, self.modulus), Ok(Verdict::Accepted(_)))
    }
}

/// In-memory term table, optionally bound to a cache file.
#[derive(Debug)]
pub struct TermStore {
    path: Option<PathBuf>,
    entries: BTreeMap<u64, TermEntry>,
}

impl TermStore {
    pub fn in_memory() -> TermStore {
        TermStore { path: None, entries: BTreeMap::new() }
    }

    /// Binds to a cache file, loading it when present. Entries claiming
    /// verified status are re-verified; a claim that fails is a corrupt cache
    /// and an error.
    pub fn open(path: impl Into<PathBuf>) -> Result<TermStore> {
        let path = path.into();
        let mut store = TermStore { path: Some(path.clone()), entries: BTreeMap::new() };
        if !path.exists() {
            return Ok(store);
        }
        let text = fs::read_to_string(&path)?;
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let entry = TermEntry::parse_line(i + 1, line)?;
            if entry.status == TermStatus::Verified && !entry.verifies() {
                return Err(Error::CacheFormat {
                    line: i + 1,
                    message: format!("entry n={} claims verified but fails verification", entry.index),
                });
            }
            store.entries.insert(entry.index, entry);
        }
        Ok(store)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, n: u64) -> Option<&TermEntry> {
        self.entries.get(&n)
    }

    pub fn entries(&self) -> impl Iterator<Item = &TermEntry> {
        self.entries.values()
    }

    pub fn insert(&mut self, entry: TermEntry) {
        self.entries.insert(entry.index, entry);
    }

    /// Writes all entries, sorted by index, one line each.
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Err(Error::Io("term store has no cache path".into()));
        };
        let mut out = String::new();
        for entry in self.entries.values() {
            out.push_str(&entry.render_line());
            out.push('\n');
        }
        fs::write(path, out)?;
        Ok(())
    }

    /// Returns the n-th term, computing (and caching) it if needed. Freshly
    /// computed terms carry verified status after an independent
    /// verify_solution pass; exhausted searches are recorded as unknown with
    /// the cap. A budget-exceeded search also reports unknown but is not
    /// cached, since a rerun might do better.
    pub fn term(&mut self, n: u64, cfg: &SearchConfig) -> Result<TermEntry> {
        if let Some(existing) = self.entries.get(&n) {
            match &existing.status {
                TermStatus::Verified => return Ok(existing.clone()),
                TermStatus::CachedUnverified => {
                    if existing.verifies() {
                        let mut upgraded = existing.clone();
                        upgraded.status = TermStatus::Verified;
                        self.entries.insert(n, upgraded.clone());
                        return Ok(upgraded);
                    }
                    // fall through to recompute
                }
                TermStatus::Unknown { cap } => {
                    if *cap >= cfg.max_digits {
                        return Ok(existing.clone());
                    }
                    // a larger cap is available: retry
                }
            }
        }
        let (entry, cacheable) = compute_term(n, cfg)?;
        if cacheable {
            self.entries.insert(n, entry.clone());
        }
        Ok(entry)
    }
}

/// Computes the n-th term without a store, returning the entry and whether it
/// is a stable fact worth caching (budget-limited unknowns are not: a rerun
/// might do better). Term computations for distinct n are independent and
/// safe to run concurrently; cache writes stay serialized through a single
/// [`TermStore`].
pub fn compute_term(n: u64, cfg: &SearchConfig) -> Result<(TermEntry, bool)> {
    let x = coprime_index(n);
    Ok(match pruned_smallest(x, cfg)? {
        SearchOutcome::Found(rec) => {
            // Independent of the search path: re-verify from the digits.
            let verdict = verify_solution(&rec.digits, x)?;
            let Verdict::Accepted(rec) = verdict else {
                unreachable!("search results pass verification");
            };
            let encoded = rec.digits.base2_value()?;
            let entry = TermEntry {
                index: n,
                modulus: x,
                digits: Some(rec.digits),
                encoded: Some(encoded),
                status: TermStatus::Verified,
            };
            (entry, true)
        }
        SearchOutcome::Exhausted { max_digits } => {
            let entry = TermEntry {
                index: n,
                modulus: x,
                digits: None,
                encoded: None,
                status: TermStatus::Unknown { cap: max_digits },
            };
            (entry, true)
        }
        SearchOutcome::BudgetExceeded { .. } => {
            let entry = TermEntry {
                index: n,
                modulus: x,
                digits: None,
                encoded: None,
                status: TermStatus::Unknown { cap: cfg.max_digits },
            };
            (entry, false)
        }
    })
}

/// One parsed "n a(n)" line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfileEntry {
    pub line_no: usize,
    pub index: u64,
    pub value: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfileIssue {
    pub line_no: usize,
    pub message: String,
}

/// Parses the standard two-column b-file format; '#' comment lines and blank
/// lines are tolerated. Malformed lines are reported with their line numbers
/// and do not affect the others.
pub fn parse_bfile(text: &str) -> (Vec<BfileEntry>, Vec<BfileIssue>) {
    let mut entries = Vec::new();
    let mut issues = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            issues.push(BfileIssue { line_no, message: "expected two columns".into() });
            continue;
        };
        let Ok(index) = a.parse::<u64>() else {
            issues.push(BfileIssue { line_no, message: format!("bad index {:?}", a) });
            continue;
        };
        if index == 0 {
            issues.push(BfileIssue { line_no, message: "index must be 1-based".into() });
            continue;
        }
        let Ok(value) = b.parse::<BigUint>() else {
            issues.push(BfileIssue { line_no, message: format!("bad value {:?}", b) });
            continue;
        };
        entries.push(BfileEntry { line_no, index, value });
    }
    (entries, issues)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrosscheckOutcome {
    Match,
    Mismatch { local: BigUint, bfile: BigUint },
    Skipped { reason: String },
}

#[derive(Debug, Clone)]
pub struct CrosscheckRow {
    pub index: u64,
    pub modulus: u64,
    pub outcome: CrosscheckOutcome,
}

#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    pub rows: Vec<CrosscheckRow>,
    pub issues: Vec<BfileIssue>,
}

impl CrosscheckReport {
    pub fn matches(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome == CrosscheckOutcome::Match).count()
    }

    pub fn mismatches(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.outcome, CrosscheckOutcome::Mismatch { .. }))
            .count()
    }

    pub fn skipped(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.outcome, CrosscheckOutcome::Skipped { .. }))
            .count()
    }

    /// Full agreement: at least one comparison, no mismatches, no parse
    /// errors. Skipped entries (beyond the cap or budget) are honest gaps,
    /// not disagreement.
    pub fn fully_agrees(&self) -> bool {
        self.matches() >= 1 && self.mismatches() == 0 && self.issues.is_empty()
    }
}

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            write!(f, "n={} x={}: ", row.index, row.modulus)?;
            match &row.outcome {
                CrosscheckOutcome::Match => writeln!(f, "match")?,
                CrosscheckOutcome::Mismatch { local, bfile } => {
                    writeln!(f, "MISMATCH local={} bfile={}", local, bfile)?
                }
                CrosscheckOutcome::Skipped { reason } => writeln!(f, "skipped ({})", reason)?,
            }
        }
        for issue in &self.issues {
            writeln!(f, "line {}: parse error: {}", issue.line_no, issue.message)?;
        }
        write!(
            f,
            "{} matched, {} mismatched, {} skipped, {} parse errors",
            self.matches(),
            self.mismatches(),
            self.skipped(),
            self.issues.len()
        )
    }
}

/// Compares b-file entries against locally computed terms where available.
pub fn crosscheck_bfile(
    text: &str,
    store: &mut TermStore,
    cfg: &SearchConfig,
) -> CrosscheckReport {
    let (entries, issues) = parse_bfile(text);
    let mut rows = Vec::with_capacity(entries.len());
    for e in entries {
        let modulus = coprime_index(e.index);
        let outcome = match store.term(e.index, cfg) {
            Ok(term) => match (&term.status, &term.encoded) {
                (TermStatus::Verified, Some(local)) => {
                    if *local == e.value {
                        CrosscheckOutcome::Match
                    } else {
                        CrosscheckOutcome::Mismatch { local: local.clone(), bfile: e.value }
                    }
                }
                (TermStatus::Unknown { cap }, _) => CrosscheckOutcome::Skipped {
                    reason: format!("term not computed within {} digits", cap),
                },
                _ => CrosscheckOutcome::Skipped { reason: "term unavailable".into() },
            },
            Err(err) => CrosscheckOutcome::Skipped { reason: err.to_string() },
        };
        rows.push(CrosscheckRow { index: e.index, modulus, outcome });
    }
    CrosscheckReport { rows, issues }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(max_digits: usize) -> SearchConfig {
        SearchConfig { max_digits, ..SearchConfig::default() }
    }

    #[test]
    fn coprime_index_pattern() {
        let first: Vec<u64> = (1..=9).map(coprime_index).collect();
        assert_eq!(first, vec![1, 3, 7, 9, 11, 13, 17, 19, 21]);
        assert_eq!(coprime_index(15), 37);
        assert_eq!(coprime_index(16), 39);
    }

    #[test]
    fn coprime_index_hits_exactly_the_coprimes() {
        let by_filter: Vec<u64> = (1..200).filter(|v| v % 2 != 0 && v % 5 != 0).collect();
        let by_index: Vec<u64> = (1..=by_filter.len() as u64).map(coprime_index).collect();
        assert_eq!(by_index, by_filter);
        for (i, &x) in by_filter.iter().enumerate() {
            assert_eq!(modulus_index(x).unwrap(), i as u64 + 1);
        }
        assert!(modulus_index(4).is_err());
        assert!(modulus_index(10).is_err());
    }

    #[test]
    fn term_two_is_1011() {
        let mut store = TermStore::in_memory();
        let t = store.term(2, &cfg(10)).unwrap();
        assert_eq!(t.modulus, 3);
        assert_eq!(t.digits.unwrap().to_string(), "1011");
        assert_eq!(t.encoded.unwrap(), BigUint::from(11u32));
        assert_eq!(t.status, TermStatus::Verified);
    }

    #[test]
    fn term_four_matches_brute_force_pin() {
        let mut store = TermStore::in_memory();
        let t = store.term(4, &cfg(12)).unwrap();
        assert_eq!(t.modulus, 9);
        assert_eq!(t.digits.unwrap().to_string(), "1011111111");
        assert_eq!(t.encoded.unwrap(), BigUint::from(767u32));
    }

    #[test]
    fn exhausted_terms_are_unknown_with_cap() {
        let mut store = TermStore::in_memory();
        // x = 9 needs 10 digits
        let t = store.term(4, &cfg(9)).unwrap();
        assert_eq!(t.status, TermStatus::Unknown { cap: 9 });
        assert!(t.digits.is_none());
        // a larger cap retries
        let t = store.term(4, &cfg(12)).unwrap();
        assert_eq!(t.status, TermStatus::Verified);
    }

    #[test]
    fn verified_terms_round_trip_through_base2() {
        let mut store = TermStore::in_memory();
        for n in [1u64, 2, 3, 4] {
            let t = store.term(n, &cfg(60)).unwrap();
            let digits = t.digits.expect("verified");
            let encoded = t.encoded.expect("verified");
            let decoded = DigitString::from_base2_value(&encoded).unwrap();
            assert_eq!(decoded, digits);
            assert!(matches!(
                verify_solution(&decoded, t.modulus),
                Ok(Verdict::Accepted(_))
            ));
        }
    }

    #[test]
    fn cache_reload_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("terms.tsv");
        let mut store = TermStore::open(&path).unwrap();
        store.term(1, &cfg(10)).unwrap();
        store.term(2, &cfg(10)).unwrap();
        store.term(4, &cfg(9)).unwrap(); // unknown entry
        store.save().unwrap();
        let first = fs::read(&path).unwrap();

        let reloaded = TermStore::open(&path).unwrap();
        assert_eq!(reloaded.len(), 3);
        reloaded.save().unwrap();
        let second = fs::read(&path).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn cache_rejects_corrupt_verified_entries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("terms.tsv");
        fs::write(&path, "2\t3\t1111\t15\tverified\n").unwrap();
        assert!(matches!(
            TermStore::open(&path),
            Err(Error::CacheFormat { line: 1, .. })
        ));
    }

    #[test]
    fn cached_unverified_entries_upgrade_on_demand() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("terms.tsv");
        fs::write(&path, "2\t3\t1011\t11\tcached-unverified\n").unwrap();
        let mut store = TermStore::open(&path).unwrap();
        assert_eq!(store.get(2).unwrap().status, TermStatus::CachedUnverified);
        let t = store.term(2, &cfg(10)).unwrap();
        assert_eq!(t.status, TermStatus::Verified);
    }

    #[test]
    fn bfile_parsing_reports_bad_lines() {
        let text = "# comment\n2 11\n\n16 20016007615544303\n16 20x16\nnope\n";
        let (entries, issues) = parse_bfile(text);
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].index, 2);
        assert_eq!(issues.len(), 2);
        assert_eq!(issues[0].line_no, 5);
        assert_eq!(issues[1].line_no, 6);
    }

    #[test]
    fn crosscheck_matches_known_fixture_rows() {
        let text = "2 11\n4 767\n";
        let mut store = TermStore::in_memory();
        let report = crosscheck_bfile(text, &mut store, &cfg(12));
        assert_eq!(report.matches(), 2);
        assert!(report.fully_agrees());
    }

    #[test]
    fn crosscheck_flags_mismatches_and_skips() {
        let text = "2 12\n15 1\n";
        let mut store = TermStore::in_memory();
        // x = 37 has no solution within 20 digits: honest skip
        let report = crosscheck_bfile(text, &mut store, &cfg(20));
        assert_eq!(report.mismatches(), 1);
        assert_eq!(report.skipped(), 1);
        assert!(!report.fully_agrees());
    }
}
