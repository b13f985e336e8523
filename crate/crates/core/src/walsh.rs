//! Walsh spectra of iterated rules and the exhaustive elementary-rule scan.
//!
//! Spectra use the 0/1 convention: `W(w) = sum_x F(x) * (-1)^<x, w>` where `F`
//! takes values in {0, 1}. Under this convention `W(0)` is the number of ones
//! of `F`, a balanced function has `W(0) = 2^(n-1)`, and Parseval reads
//! `sum_w W(w)^2 = 2^n * W(0)`. The more common signed spectrum
//! `S(w) = sum_x (-1)^(F(x) + <x, w>)` relates to it by `S(w) = 2^n [w = 0] - 2 W(w)`.
//!
//! Inputs are indexed by `x = sum_i x_i 2^i`. For functions built from rules,
//! bit `n - 1` is the leftmost cell of the window and bit 0 the rightmost.

use num_rational::Ratio;

use crate::algebra::{self, EquivalenceClass};
use crate::automaton::Rule;
use crate::{Error, Result};

/// Largest number of variables [`walsh_transform`] accepts.
pub const MAX_VARIABLES: u32 = 24;

/// Largest iteration order accepted by [`minmax_score`] and [`scan_rules`].
pub const MAX_ORDER: u32 = 8;

/// A Boolean function given by its full truth table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanFunction {
    n: u32,
    table: Vec<bool>,
}

impl BooleanFunction {
    pub fn new(n: u32, table: Vec<bool>) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::InvalidParameter(format!("unsupported variable count {n}")));
        }
        if table.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                actual: table.len(),
            });
        }
        Ok(Self { n, table })
    }

    pub fn from_fn(n: u32, f: impl Fn(usize) -> bool) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::InvalidParameter(format!("unsupported variable count {n}")));
        }
        Self::new(n, (0..1usize << n).map(f).collect())
    }

    /// The rule's own truth table as a function of `2r + 1` variables.
    pub fn from_rule(rule: Rule) -> Self {
        Self {
            n: rule.neighborhood_size() as u32,
            table: rule.truth_table(),
        }
    }

    pub fn variables(&self) -> u32 {
        self.n
    }

    pub fn truth_table(&self) -> &[bool] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn count_ones(&self) -> u64 {
        self.table.iter().filter(|&&b| b).count() as u64
    }
}

/// The Walsh spectrum of a [`BooleanFunction`], indexed by mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: u32,
    values: Vec<i64>,
}

impl WalshSpectrum {
    pub fn variables(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, mask: usize) -> i64 {
        self.values[mask]
    }

    /// `sum_w W(w)^2`.
    pub fn energy(&self) -> i128 {
        self.values.iter().map(|&v| i128::from(v) * i128::from(v)).sum()
    }
}

/// Composes `rule` with itself `order` times on an open segment.
///
/// The input window has `2 r order + 1` cells; each step shrinks it by `r`
/// cells per side, and the value left in the middle is the output.
pub fn iterate_rule(rule: Rule, order: u32) -> Result<BooleanFunction> {
    if order == 0 {
        return Err(Error::InvalidParameter("iteration order must be at least 1".into()));
    }
    let r = rule.radius();
    let n = 2 * r * order + 1;
    if n > MAX_VARIABLES {
        return Err(Error::InvalidParameter(format!(
            "order {order} needs {n} variables (max {MAX_VARIABLES})"
        )));
    }
    let hood_mask = (1u64 << (2 * r + 1)) - 1;
    let table = (0..1u64 << n)
        .map(|window| {
            let mut state = window;
            let mut width = n;
            while width > 1 {
                let out_width = width - 2 * r;
                let mut next = 0u64;
                for p in 0..out_width {
                    let hood = ((state >> p) & hood_mask) as usize;
                    next |= u64::from(rule.output(hood)) << p;
                }
                state = next;
                width = out_width;
            }
            state & 1 == 1
        })
        .collect();
    Ok(BooleanFunction { n, table })
}

/// Fast Walsh transform: `n` butterfly passes over `2^n` integers.
pub fn walsh_transform(f: &BooleanFunction) -> Result<WalshSpectrum> {
    if f.n > MAX_VARIABLES {
        return Err(Error::InvalidParameter(format!(
            "{} variables exceeds the transform limit of {MAX_VARIABLES}",
            f.n
        )));
    }
    let mut values: Vec<i64> = f.table.iter().map(|&b| i64::from(b)).collect();
    let mut half = 1;
    while half < values.len() {
        for block in values.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half *= 2;
    }
    Ok(WalshSpectrum { n: f.n, values })
}

/// True iff the function takes the value 1 on exactly half its inputs,
/// i.e. `W(0) = 2^(n-1)`.
pub fn is_balanced(f: &BooleanFunction) -> bool {
    f.count_ones() == 1u64 << (f.n - 1)
}

/// Largest `k` such that `W(w) = 0` for every nonzero mask of weight at most `k`.
pub fn correlation_immunity_order(f: &BooleanFunction) -> Result<u32> {
    let spectrum = walsh_transform(f)?;
    Ok(spectrum
        .values
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, &v)| v != 0)
        .map(|(w, _)| (w as u64).count_ones() - 1)
        .min()
        .unwrap_or(f.n))
}

/// `P[F = 1 | <x, w> = 1]` for uniform `x`, as an exact fraction.
///
/// With `A0`, `A1` the number of ones of `F` on each side of the hyperplane,
/// `W(w) = A0 - A1` and `W(0) = A0 + A1`, so the probability is
/// `(W(0) - W(w)) / 2^n`. For balanced `F` this is `1/2 - W(w) / 2^n`.
pub fn correlation_bias(f: &BooleanFunction, mask: usize) -> Result<Ratio<i64>> {
    if mask == 0 || mask >= f.table.len() {
        return Err(Error::InvalidParameter(format!(
            "mask {mask} must lie in 1..{}",
            f.table.len()
        )));
    }
    let (w0, w): (i64, i64) = f
        .table
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b)
        .fold((0, 0), |(w0, w), (x, _)| {
            let sign = if (x & mask).count_ones().is_multiple_of(2) { 1 } else { -1 };
            (w0 + 1, w + sign)
        });
    Ok(Ratio::new(w0 - w, 1i64 << f.n))
}

/// Largest single-variable correlation of an iterated rule.
///
/// `val` is `max_k |W(2^k)|` over the `2r * order + 1` input variables and
/// `cfg` the mask `2^k` attaining it. Ties go to the largest mask; a zero
/// maximum is reported as `cfg = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MinMaxScore {
    pub cfg: u64,
    pub val: u64,
}

pub fn minmax_score(rule: Rule, order: u32) -> Result<MinMaxScore> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::InvalidParameter(format!(
            "order {order} outside 1..={MAX_ORDER}"
        )));
    }
    let f = iterate_rule(rule, order)?;
    let spectrum = walsh_transform(&f)?;
    Ok(single_bit_maximum(&spectrum))
}

fn single_bit_maximum(spectrum: &WalshSpectrum) -> MinMaxScore {
    let mut best = MinMaxScore { cfg: 0, val: 0 };
    for k in 0..spectrum.n {
        let mask = 1u64 << k;
        let val = spectrum.get(mask as usize).unsigned_abs();
        if val > 0 && val >= best.val {
            best = MinMaxScore { cfg: mask, val };
        }
    }
    best
}

/// Everything the scan records about one elementary rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleScan {
    pub rule: u8,
    pub balanced: bool,
    pub affine: bool,
    pub conjugate: u8,
    pub reflection: u8,
    pub conjugate_reflection: u8,
    pub class: EquivalenceClass,
    /// One score per scanned order; empty for unbalanced rules.
    pub scores: Vec<MinMaxScore>,
}

impl RuleScan {
    /// Worst single-variable correlation over all scanned orders.
    pub fn worst_val(&self) -> Option<u64> {
        self.scores.iter().map(|s| s.val).max()
    }
}

/// The 256-rule scan, ordered by rule number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub orders: Vec<u32>,
    pub rules: Vec<RuleScan>,
}

fn scan_one(rule: u8, orders: &[u32]) -> Result<RuleScan> {
    let r = Rule::elementary(rule);
    let balanced = is_balanced(&BooleanFunction::from_rule(r));
    let scores = if balanced {
        orders
            .iter()
            .map(|&o| minmax_score(r, o))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(RuleScan {
        rule,
        balanced,
        affine: algebra::affine_decomposition(r).is_affine,
        conjugate: algebra::conjugate(r)?.number() as u8,
        reflection: algebra::reflect(r)?.number() as u8,
        conjugate_reflection: algebra::conjugate_reflect(r)?.number() as u8,
        class: algebra::equivalence_class(r)?,
        scores,
    })
}

/// Scans all 256 elementary rules at the given iteration orders.
pub fn scan_rules(orders: &[u32]) -> Result<ScanReport> {
    if let Some(&bad) = orders.iter().find(|o| !(1..=MAX_ORDER).contains(*o)) {
        return Err(Error::InvalidParameter(format!(
            "order {bad} outside 1..={MAX_ORDER}"
        )));
    }
    #[cfg(feature = "parallel")]
    let rules = {
        use rayon::prelude::*;
        (0..=255u8)
            .into_par_iter()
            .map(|n| scan_one(n, orders))
            .collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rules = (0..=255u8)
        .map(|n| scan_one(n, orders))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanReport {
        orders: orders.to_vec(),
        rules,
    })
}

impl ScanReport {
    pub fn rule(&self, rule: u8) -> &RuleScan {
        &self.rules[rule as usize]
    }

    pub fn balanced_rules(&self) -> impl Iterator<Item = &RuleScan> {
        self.rules.iter().filter(|r| r.balanced)
    }

    /// Balanced rules whose val is zero at every scanned order.
    pub fn uncorrelated_rules(&self) -> Vec<u8> {
        self.balanced_rules()
            .filter(|r| r.scores.iter().all(|s| s.val == 0))
            .map(|r| r.rule)
            .collect()
    }

    /// Balanced non-affine rules minimising val at the deepest scanned order.
    ///
    /// Earlier orders are not a reliable ranking: the class of rule 45 beats
    /// the class of rule 30 at orders 2 and 4 but loses from order 5 on.
    pub fn best_nonlinear_rules(&self) -> Vec<u8> {
        let Some(last) = self.orders.len().checked_sub(1) else {
            return Vec::new();
        };
        let candidates: Vec<&RuleScan> = self.balanced_rules().filter(|r| !r.affine).collect();
        let Some(min) = candidates.iter().map(|r| r.scores[last].val).min() else {
            return Vec::new();
        };
        candidates
            .iter()
            .filter(|r| r.scores[last].val == min)
            .map(|r| r.rule)
            .collect()
    }

    /// Comma-separated table: `rule`, a `cfg<o>,val<o>` pair per order, then
    /// the `conj,refl,cr` images. Unbalanced rules leave the pairs empty.
    pub fn to_csv(&self, only: Option<&[u8]>) -> String {
        let mut out = String::from("rule");
        for o in &self.orders {
            out.push_str(&format!(",cfg{o},val{o}"));
        }
        out.push_str(",conj,refl,cr\n");
        let rows: Box<dyn Iterator<Item = &RuleScan>> = match only {
            Some(list) => Box::new(list.iter().map(|&n| self.rule(n))),
            None => Box::new(self.balanced_rules()),
        };
        for row in rows {
            out.push_str(&row.rule.to_string());
            if row.scores.is_empty() {
                out.push_str(&",,".repeat(self.orders.len()));
            }
            for s in &row.scores {
                out.push_str(&format!(",{},{}", s.cfg, s.val));
            }
            out.push_str(&format!(
                ",{},{},{}\n",
                row.conjugate, row.reflection, row.conjugate_reflection
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(f: &BooleanFunction) -> Vec<i64> {
        let size = 1usize << f.variables();
        (0..size)
            .map(|w| {
                (0..size)
                    .filter(|&x| f.eval(x))
                    .map(|x| if (x & w).count_ones() % 2 == 0 { 1 } else { -1 })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn rule_30_spectrum() {
        let s = walsh_transform(&BooleanFunction::from_rule(Rule::elementary(30))).unwrap();
        assert_eq!((s.get(0), s.get(4), s.get(1), s.get(2)), (4, 2, 0, 0));
    }

    #[test]
    fn rule_90_spectrum() {
        let s = walsh_transform(&BooleanFunction::from_rule(Rule::elementary(90))).unwrap();
        assert_eq!(s.get(5), -4);
        assert_eq!((s.get(1), s.get(2), s.get(4)), (0, 0, 0));
    }

    #[test]
    fn constant_zero_spectrum() {
        let f = BooleanFunction::from_fn(3, |_| false).unwrap();
        assert!(walsh_transform(&f).unwrap().values().iter().all(|&v| v == 0));
        assert!(!is_balanced(&f));
    }

    #[test]
    fn transform_matches_naive_on_rules() {
        for n in 0..=255u8 {
            let f = BooleanFunction::from_rule(Rule::elementary(n));
            assert_eq!(walsh_transform(&f).unwrap().values(), naive(&f).as_slice());
        }
    }

    #[test]
    fn balancedness() {
        assert!(is_balanced(&BooleanFunction::from_rule(Rule::elementary(30))));
        assert!(!is_balanced(&BooleanFunction::from_rule(Rule::elementary(255))));
    }

    #[test]
    fn immunity_orders() {
        let ci = |n| correlation_immunity_order(&BooleanFunction::from_rule(Rule::elementary(n))).unwrap();
        assert_eq!(ci(30), 0);
        assert_eq!(ci(90), 1);
        let one = BooleanFunction::from_fn(3, |_| true).unwrap();
        assert_eq!(correlation_immunity_order(&one).unwrap(), 3);
    }

    #[test]
    fn bias_examples() {
        let r30 = BooleanFunction::from_rule(Rule::elementary(30));
        assert_eq!(correlation_bias(&r30, 4).unwrap(), Ratio::new(1, 4));
        assert_eq!(correlation_bias(&r30, 1).unwrap(), Ratio::new(1, 2));
        let r90 = BooleanFunction::from_rule(Rule::elementary(90));
        assert_eq!(correlation_bias(&r90, 5).unwrap(), Ratio::from_integer(1));
        // Unbalanced: the constant-zero function never outputs 1.
        let zero = BooleanFunction::from_rule(Rule::elementary(0));
        assert_eq!(correlation_bias(&zero, 1).unwrap(), Ratio::from_integer(0));
        assert!(correlation_bias(&r90, 0).is_err());
        assert!(correlation_bias(&r90, 8).is_err());
    }

    #[test]
    fn iterate_order_one_is_rule() {
        let f = iterate_rule(Rule::elementary(30), 1).unwrap();
        assert_eq!(f.truth_table(), Rule::elementary(30).truth_table().as_slice());
        assert!(iterate_rule(Rule::elementary(30), 0).is_err());
    }

    #[test]
    fn rule_90_squared() {
        let f = iterate_rule(Rule::elementary(90), 2).unwrap();
        assert_eq!(f.variables(), 5);
        for x in 0..32usize {
            assert_eq!(f.eval(x), ((x >> 4) ^ x) & 1 == 1, "window {x:05b}");
        }
    }

    #[test]
    fn radius_two_iteration_size() {
        let f = iterate_rule(Rule::from_number(869020563, 2).unwrap(), 2).unwrap();
        assert_eq!(f.variables(), 9);
        assert!(iterate_rule(Rule::from_number(1, 2).unwrap(), 6).is_err());
    }

    #[test]
    fn minmax_row_30() {
        let expected = [(4, 2), (16, 4), (64, 16), (256, 40), (1024, 80)];
        for (o, &(cfg, val)) in (1..=5).zip(&expected) {
            assert_eq!(minmax_score(Rule::elementary(30), o).unwrap(), MinMaxScore { cfg, val });
        }
        assert!(minmax_score(Rule::elementary(30), 0).is_err());
        assert!(minmax_score(Rule::elementary(30), 9).is_err());
    }

    #[test]
    fn csv_header() {
        let report = scan_rules(&[1, 2]).unwrap();
        let csv = report.to_csv(Some(&[30, 0]));
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("rule,cfg1,val1,cfg2,val2,conj,refl,cr"));
        assert_eq!(lines.next(), Some("30,4,2,16,4,135,86,149"));
        assert_eq!(lines.next(), Some("0,,,,,255,0,255"));
    }
}
