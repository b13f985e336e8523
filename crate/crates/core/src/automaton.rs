//! One-dimensional binary cellular automata on a ring.
//!
//! A neighbourhood `(x[i-r], ..., x[i+r])` is read as a binary number with the
//! leftmost cell as the most significant bit, so rule 30 on `(0, 0, 1)` looks
//! up entry 1 of its truth table and on `(1, 1, 1)` looks up entry 7. Rule
//! numbers follow Wolfram's convention: bit `x` of the number is the output for
//! neighbourhood `x`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Largest radius accepted by [`Rule::from_number`].
pub const MAX_RADIUS: u32 = 2;

/// A local transition function of radius 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    radius: u32,
    number: u32,
}

impl Rule {
    pub fn from_number(number: u64, radius: u32) -> Result<Self> {
        if radius == 0 || radius > MAX_RADIUS {
            return Err(Error::UnsupportedRadius(radius));
        }
        let table_len = 1u64 << (2 * radius + 1);
        if number >> table_len != 0 {
            return Err(Error::RuleOutOfRange { number, radius });
        }
        Ok(Self {
            radius,
            number: number as u32,
        })
    }

    /// Builds a rule from its truth table; entry `x` is the output for
    /// neighbourhood `x`.
    pub fn from_truth_table(table: &[bool]) -> Result<Self> {
        let radius = match table.len() {
            8 => 1,
            32 => 2,
            n => {
                return Err(Error::InvalidParameter(format!(
                    "truth table of length {n} is not 8 or 32 entries"
                )))
            }
        };
        let number = table
            .iter()
            .enumerate()
            .fold(0u32, |acc, (x, &b)| acc | (u32::from(b) << x));
        Ok(Self { radius, number })
    }

    /// An elementary (radius 1) rule.
    pub const fn elementary(number: u8) -> Self {
        Self {
            radius: 1,
            number: number as u32,
        }
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// The Wolfram number of the rule.
    pub fn number(&self) -> u64 {
        u64::from(self.number)
    }

    /// Number of cells in a neighbourhood, `2r + 1`.
    pub fn neighborhood_size(&self) -> usize {
        2 * self.radius as usize + 1
    }

    pub fn table_len(&self) -> usize {
        1 << self.neighborhood_size()
    }

    pub fn truth_table(&self) -> Vec<bool> {
        (0..self.table_len()).map(|x| self.output(x)).collect()
    }

    /// Output for the neighbourhood whose packed index is `index`.
    ///
    /// Panics if `index >= self.table_len()`.
    #[inline]
    pub fn output(&self, index: usize) -> bool {
        assert!(index < self.table_len(), "neighbourhood index out of range");
        (self.number >> index) & 1 == 1
    }

    /// Applies the rule to an explicit neighbourhood, leftmost cell first.
    pub fn apply(&self, neighborhood: &[bool]) -> Result<bool> {
        if neighborhood.len() != self.neighborhood_size() {
            return Err(Error::LengthMismatch {
                expected: self.neighborhood_size(),
                actual: neighborhood.len(),
            });
        }
        Ok(self.output(neighborhood_index(neighborhood)))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number)
    }
}

/// Packs a neighbourhood into its table index, leftmost cell most significant.
#[inline]
pub fn neighborhood_index(neighborhood: &[bool]) -> usize {
    neighborhood
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(b))
}

/// A ring of binary cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    cells: Vec<bool>,
}

impl Configuration {
    pub fn new(cells: Vec<bool>) -> Self {
        Self { cells }
    }

    pub fn zeros(width: usize) -> Self {
        Self {
            cells: vec![false; width],
        }
    }

    /// All zeros except the cell at `(width - 1) / 2`.
    pub fn single(width: usize) -> Self {
        let mut cells = vec![false; width];
        if width > 0 {
            cells[(width - 1) / 2] = true;
        }
        Self { cells }
    }

    pub fn random<R: rand::Rng + ?Sized>(width: usize, rng: &mut R) -> Self {
        Self {
            cells: (0..width).map(|_| rng.gen()).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<bool> {
        self.cells
    }

    /// Cell `index` taken modulo the width; negative indices wrap too.
    #[inline]
    pub fn get(&self, index: isize) -> bool {
        let n = self.cells.len() as isize;
        self.cells[index.rem_euclid(n) as usize]
    }

    /// Rotation by `shift` cells: the result's cell `i` is this ring's cell
    /// `i + shift`.
    pub fn rotate(&self, shift: isize) -> Self {
        let n = self.cells.len();
        if n == 0 {
            return self.clone();
        }
        let mut cells = self.cells.clone();
        cells.rotate_left(shift.rem_euclid(n as isize) as usize);
        Self { cells }
    }

    pub fn count_ones(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.cells {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_bits(s).map(Self::new)
    }
}

/// Parses a string of `'0'`/`'1'` characters, ignoring ASCII whitespace.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .filter(|c| !c.is_ascii_whitespace())
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidBit(other)),
        })
        .collect()
}

/// Formats bits as a `'0'`/`'1'` string.
pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// One rule per cell of a ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleAssignment {
    rules: Vec<Rule>,
}

impl RuleAssignment {
    pub fn new(rules: Vec<Rule>) -> Result<Self> {
        if let Some(first) = rules.first() {
            if let Some(other) = rules.iter().find(|r| r.radius != first.radius) {
                return Err(Error::MixedRadii(first.radius, other.radius));
            }
        }
        Ok(Self { rules })
    }

    /// Repeats `pattern` until `width` cells are covered.
    pub fn tiled(pattern: &[Rule], width: usize) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::InvalidParameter("empty rule pattern".into()));
        }
        Self::new(pattern.iter().copied().cycle().take(width).collect())
    }

    pub fn uniform(rule: Rule, width: usize) -> Self {
        Self {
            rules: vec![rule; width],
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn radius(&self) -> Option<u32> {
        self.rules.first().map(Rule::radius)
    }
}

/// Either a single rule for every cell or a per-cell assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleSet {
    Uniform(Rule),
    NonUniform(RuleAssignment),
}

impl From<Rule> for RuleSet {
    fn from(rule: Rule) -> Self {
        RuleSet::Uniform(rule)
    }
}

impl From<RuleAssignment> for RuleSet {
    fn from(assignment: RuleAssignment) -> Self {
        RuleSet::NonUniform(assignment)
    }
}

impl RuleSet {
    #[inline]
    fn rule_at(&self, cell: usize) -> Rule {
        match self {
            RuleSet::Uniform(rule) => *rule,
            RuleSet::NonUniform(assignment) => assignment.rules[cell],
        }
    }

    fn validate(&self, width: usize) -> Result<()> {
        let radius = match self {
            RuleSet::Uniform(rule) => rule.radius,
            RuleSet::NonUniform(assignment) => {
                if assignment.len() != width {
                    return Err(Error::LengthMismatch {
                        expected: width,
                        actual: assignment.len(),
                    });
                }
                match assignment.radius() {
                    Some(r) => r,
                    None => return Ok(()),
                }
            }
        };
        let neighborhood = 2 * radius as usize + 1;
        if width < neighborhood {
            return Err(Error::WidthTooSmall {
                width,
                neighborhood,
            });
        }
        Ok(())
    }

    fn step_unchecked(&self, config: &Configuration) -> Configuration {
        let n = config.width();
        let cells = (0..n)
            .map(|i| {
                let rule = self.rule_at(i);
                let r = rule.radius as isize;
                let index = (-r..=r).fold(0usize, |acc, d| {
                    (acc << 1) | usize::from(config.get(i as isize + d))
                });
                rule.output(index)
            })
            .collect();
        Configuration { cells }
    }
}

/// Successive configurations of a ring; row 0 is the initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceTimeDiagram {
    rows: Vec<Configuration>,
}

impl SpaceTimeDiagram {
    pub fn rows(&self) -> &[Configuration] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Configuration::width)
    }

    /// Number of time steps covered, i.e. rows minus one.
    pub fn steps(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn column(&self, cell: usize) -> Vec<bool> {
        self.rows.iter().map(|row| row.cells[cell]).collect()
    }

    /// One row per line, `'0'`/`'1'` characters.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * (self.width() + 1));
        for row in &self.rows {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }

    /// Plain (P1) portable bitmap; a live cell is a black pixel.
    pub fn to_pbm(&self) -> String {
        let mut out = format!("P1\n{} {}\n", self.width(), self.rows.len());
        for row in &self.rows {
            for chunk in row.cells.chunks(70) {
                out.push_str(&format_bits(chunk));
                out.push('\n');
            }
        }
        out
    }
}

/// One synchronous update of every cell with the same rule.
pub fn step(config: &Configuration, rule: Rule) -> Result<Configuration> {
    let rules = RuleSet::Uniform(rule);
    rules.validate(config.width())?;
    Ok(rules.step_unchecked(config))
}

/// One synchronous update where cell `i` uses `assignment.rules()[i]`.
pub fn step_nonuniform(config: &Configuration, assignment: &RuleAssignment) -> Result<Configuration> {
    let rules = RuleSet::NonUniform(assignment.clone());
    rules.validate(config.width())?;
    Ok(rules.step_unchecked(config))
}

/// Runs `steps` updates and keeps every intermediate configuration.
pub fn evolve(config: &Configuration, rules: &RuleSet, steps: usize) -> Result<SpaceTimeDiagram> {
    rules.validate(config.width())?;
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(config.clone());
    for t in 0..steps {
        let next = rules.step_unchecked(&rows[t]);
        rows.push(next);
    }
    Ok(SpaceTimeDiagram { rows })
}

/// Values of `cell` at times `0..length`, without storing the diagram.
pub fn temporal_sequence(
    config: &Configuration,
    rules: &RuleSet,
    cell: usize,
    length: usize,
) -> Result<Vec<bool>> {
    rules.validate(config.width())?;
    if cell >= config.width() {
        return Err(Error::CellOutOfRange {
            cell,
            width: config.width(),
        });
    }
    if length == 0 {
        return Err(Error::InvalidParameter("sequence length must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(length);
    let mut current = config.clone();
    out.push(current.cells[cell]);
    for _ in 1..length {
        current = rules.step_unchecked(&current);
        out.push(current.cells[cell]);
    }
    Ok(out)
}
