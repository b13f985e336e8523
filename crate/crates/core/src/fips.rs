//! FIPS 140-2 statistical tests: monobit, poker, runs and long run.
//!
//! Thresholds are configuration data in a line-oriented `test.parameter = value`
//! format. The defaults are the checked-in `data/fips140-2.conf`.

use std::fmt::Write as _;

use crate::cipher::BitStream;
use crate::{Error, Result};

const DEFAULT_CONFIG: &str = include_str!("../data/fips140-2.conf");

/// Longest run length with its own interval; longer runs share the last one.
pub const RUN_BUCKETS: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct FipsThresholds {
    pub stream_length: usize,
    /// Exclusive bounds on the number of ones.
    pub monobit: (u64, u64),
    /// Exclusive bounds on the poker statistic.
    pub poker: (f64, f64),
    /// Inclusive bounds on the run counts of lengths 1..=5 and 6+.
    pub runs: [(u64, u64); RUN_BUCKETS],
    /// A run this long or longer fails the long-run test.
    pub long_run_cutoff: usize,
}

impl Default for FipsThresholds {
    fn default() -> Self {
        Self::parse(DEFAULT_CONFIG).expect("bundled FIPS configuration is valid")
    }
}

/// Splits a `key = value` configuration into pairs, skipping blanks and `#` comments.
pub fn parse_config(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            line: i + 1,
            message: format!("expected `key = value`, got {line:?}"),
        })?;
        out.push((i + 1, key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config {
        line,
        message: format!("bad value {value:?} for {key}"),
    })
}

impl FipsThresholds {
    /// Parses a complete threshold file; every key must be present exactly once.
    pub fn parse(text: &str) -> Result<Self> {
        let mut stream_length = None;
        let mut monobit = (None, None);
        let mut poker = (None, None);
        let mut runs = [(None, None); RUN_BUCKETS];
        let mut long_run_cutoff = None;

        fn put<T>(slot: &mut Option<T>, v: T, line: usize, key: &str) -> Result<()> {
            if slot.replace(v).is_some() {
                return Err(Error::Config {
                    line,
                    message: format!("duplicate key {key}"),
                });
            }
            Ok(())
        }

        for (line, key, value) in parse_config(text)? {
            let k = key.as_str();
            match k {
                "stream.length" => put(&mut stream_length, parse_value(line, k, &value)?, line, k)?,
                "monobit.lower" => put(&mut monobit.0, parse_value(line, k, &value)?, line, k)?,
                "monobit.upper" => put(&mut monobit.1, parse_value(line, k, &value)?, line, k)?,
                "poker.lower" => put(&mut poker.0, parse_value(line, k, &value)?, line, k)?,
                "poker.upper" => put(&mut poker.1, parse_value(line, k, &value)?, line, k)?,
                "long_run.cutoff" => put(&mut long_run_cutoff, parse_value(line, k, &value)?, line, k)?,
                _ => {
                    let bucket = k
                        .strip_prefix("runs.")
                        .and_then(|rest| rest.split_once('.'))
                        .and_then(|(len, bound)| Some((len.parse::<usize>().ok()?, bound)))
                        .filter(|(len, _)| (1..=RUN_BUCKETS).contains(len));
                    match bucket {
                        Some((len, "lower")) => {
                            put(&mut runs[len - 1].0, parse_value(line, k, &value)?, line, k)?
                        }
                        Some((len, "upper")) => {
                            put(&mut runs[len - 1].1, parse_value(line, k, &value)?, line, k)?
                        }
                        _ => {
                            return Err(Error::Config {
                                line,
                                message: format!("unknown key {k}"),
                            })
                        }
                    }
                }
            }
        }

        fn need<T>(v: Option<T>, key: &str) -> Result<T> {
            v.ok_or_else(|| Error::Config {
                line: 0,
                message: format!("missing key {key}"),
            })
        }
        let mut run_bounds = [(0, 0); RUN_BUCKETS];
        for (i, (lo, hi)) in runs.into_iter().enumerate() {
            run_bounds[i] = (
                need(lo, &format!("runs.{}.lower", i + 1))?,
                need(hi, &format!("runs.{}.upper", i + 1))?,
            );
        }
        Ok(Self {
            stream_length: need(stream_length, "stream.length")?,
            monobit: (need(monobit.0, "monobit.lower")?, need(monobit.1, "monobit.upper")?),
            poker: (need(poker.0, "poker.lower")?, need(poker.1, "poker.upper")?),
            runs: run_bounds,
            long_run_cutoff: need(long_run_cutoff, "long_run.cutoff")?,
        })
    }

    /// Serialises back to the configuration format.
    pub fn to_config(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "stream.length = {}", self.stream_length);
        let _ = writeln!(out, "monobit.lower = {}", self.monobit.0);
        let _ = writeln!(out, "monobit.upper = {}", self.monobit.1);
        let _ = writeln!(out, "poker.lower = {}", self.poker.0);
        let _ = writeln!(out, "poker.upper = {}", self.poker.1);
        for (i, (lo, hi)) in self.runs.iter().enumerate() {
            let _ = writeln!(out, "runs.{}.lower = {lo}", i + 1);
            let _ = writeln!(out, "runs.{}.upper = {hi}", i + 1);
        }
        let _ = writeln!(out, "long_run.cutoff = {}", self.long_run_cutoff);
        out
    }
}

/// Outcome of one test: named values (statistics and the thresholds used)
/// and a verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct TestEntry {
    pub name: &'static str,
    pub values: Vec<(String, String)>,
    pub passed: bool,
}

impl TestEntry {
    pub fn value(&self, key: &str) -> Option<&str> {
        self.values
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestReport {
    pub entries: Vec<TestEntry>,
}

impl TestReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn entry(&self, name: &str) -> Option<&TestEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// `test.parameter = value` lines followed by one `test.result` line per
    /// test and an `overall.result` line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            for (k, v) in &e.values {
                let _ = writeln!(out, "{}.{k} = {v}", e.name);
            }
            let _ = writeln!(out, "{}.result = {}", e.name, verdict(e.passed));
        }
        let _ = writeln!(out, "overall.result = {}", verdict(self.passed()));
        out
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn check_length(stream: &BitStream, t: &FipsThresholds) -> Result<()> {
    if stream.len() != t.stream_length {
        return Err(Error::LengthMismatch {
            expected: t.stream_length,
            actual: stream.len(),
        });
    }
    Ok(())
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

pub fn monobit(stream: &BitStream, t: &FipsThresholds) -> Result<TestEntry> {
    check_length(stream, t)?;
    let ones = stream.count_ones() as u64;
    Ok(TestEntry {
        name: "monobit",
        values: vec![kv("ones", ones), kv("lower", t.monobit.0), kv("upper", t.monobit.1)],
        passed: t.monobit.0 < ones && ones < t.monobit.1,
    })
}

/// `16 / k * sum_i f(i)^2 - k` over `k` consecutive 4-bit nibbles, where
/// `f(i)` counts nibble value `i` (first bit most significant).
pub fn poker_statistic(bits: &[bool]) -> f64 {
    let mut counts = [0u64; 16];
    let nibbles = bits.len() / 4;
    for chunk in bits.chunks_exact(4) {
        let v = chunk.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        counts[v] += 1;
    }
    let sum_sq: u64 = counts.iter().map(|c| c * c).sum();
    16.0 / nibbles as f64 * sum_sq as f64 - nibbles as f64
}

pub fn poker(stream: &BitStream, t: &FipsThresholds) -> Result<TestEntry> {
    check_length(stream, t)?;
    let x = poker_statistic(stream.bits());
    Ok(TestEntry {
        name: "poker",
        values: vec![kv("statistic", x), kv("lower", t.poker.0), kv("upper", t.poker.1)],
        passed: t.poker.0 < x && x < t.poker.1,
    })
}

/// Maximal runs as `(bit, length)` pairs in stream order.
pub fn run_lengths(bits: &[bool]) -> Vec<(bool, usize)> {
    let mut runs: Vec<(bool, usize)> = Vec::new();
    for &b in bits {
        match runs.last_mut() {
            Some((v, len)) if *v == b => *len += 1,
            _ => runs.push((b, 1)),
        }
    }
    runs
}

/// Run counts by length bucket (1..=5, 6+), for zeros and ones.
pub fn run_histogram(bits: &[bool]) -> [[u64; RUN_BUCKETS]; 2] {
    let mut hist = [[0u64; RUN_BUCKETS]; 2];
    for (b, len) in run_lengths(bits) {
        hist[usize::from(b)][len.min(RUN_BUCKETS) - 1] += 1;
    }
    hist
}

pub fn runs(stream: &BitStream, t: &FipsThresholds) -> Result<TestEntry> {
    check_length(stream, t)?;
    let hist = run_histogram(stream.bits());
    let mut values = Vec::new();
    let mut passed = true;
    for (bit, name) in [(0, "zeros"), (1, "ones")] {
        for (i, &count) in hist[bit].iter().enumerate() {
            values.push(kv(&format!("{name}.{}", i + 1), count));
            let (lo, hi) = t.runs[i];
            passed &= lo <= count && count <= hi;
        }
    }
    for (i, (lo, hi)) in t.runs.iter().enumerate() {
        values.push(kv(&format!("{}.lower", i + 1), lo));
        values.push(kv(&format!("{}.upper", i + 1), hi));
    }
    Ok(TestEntry {
        name: "runs",
        values,
        passed,
    })
}

pub fn long_run(stream: &BitStream, t: &FipsThresholds) -> Result<TestEntry> {
    check_length(stream, t)?;
    let longest = run_lengths(stream.bits())
        .into_iter()
        .map(|(_, len)| len)
        .max()
        .unwrap_or(0);
    Ok(TestEntry {
        name: "long_run",
        values: vec![kv("longest", longest), kv("cutoff", t.long_run_cutoff)],
        passed: longest < t.long_run_cutoff,
    })
}

/// All four tests; the report passes iff every test passes.
pub fn fips_battery(stream: &BitStream, t: &FipsThresholds) -> Result<TestReport> {
    Ok(TestReport {
        entries: vec![
            monobit(stream, t)?,
            poker(stream, t)?,
            runs(stream, t)?,
            long_run(stream, t)?,
        ],
    })
}
