//! Equivalences between elementary rules and affine-rule detection.
//!
//! Two symmetries of radius-1 rules leave the statistics of the generated
//! sequences unchanged:
//!
//! * conjugation swaps the roles of 0 and 1: `g(x) = !f(!x)`;
//! * reflection mirrors the neighbourhood: `g(a, b, c) = f(c, b, a)`.
//!
//! Their composition gives the third non-trivial member of a rule's class.

use std::collections::BTreeSet;

use crate::automaton::Rule;
use crate::{Error, Result};

fn require_elementary(rule: Rule) -> Result<()> {
    if rule.radius() != 1 {
        return Err(Error::UnsupportedRadius(rule.radius()));
    }
    Ok(())
}

fn reverse3(x: usize) -> usize {
    ((x & 1) << 2) | (x & 2) | ((x >> 2) & 1)
}

fn transform(map: impl Fn(usize) -> bool) -> Rule {
    let table: Vec<bool> = (0..8).map(map).collect();
    Rule::from_truth_table(&table).expect("8-entry table")
}

/// `g(x) = NOT f(NOT x)`; maps rule 30 to 135.
pub fn conjugate(rule: Rule) -> Result<Rule> {
    require_elementary(rule)?;
    Ok(transform(|x| !rule.output(7 - x)))
}

/// `g(x) = f(reverse(x))`; maps rule 30 to 86.
pub fn reflect(rule: Rule) -> Result<Rule> {
    require_elementary(rule)?;
    Ok(transform(|x| rule.output(reverse3(x))))
}

/// `g(x) = NOT f(reverse(NOT x))`; maps rule 30 to 149.
pub fn conjugate_reflect(rule: Rule) -> Result<Rule> {
    require_elementary(rule)?;
    Ok(transform(|x| !rule.output(reverse3(7 - x))))
}

/// The set of rules reachable from one rule by the three transforms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivalenceClass {
    members: BTreeSet<u8>,
}

impl EquivalenceClass {
    pub fn members(&self) -> &BTreeSet<u8> {
        &self.members
    }

    pub fn contains(&self, rule: u8) -> bool {
        self.members.contains(&rule)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Smallest rule number in the class.
    pub fn representative(&self) -> u8 {
        *self.members.iter().next().expect("class is never empty")
    }
}

pub fn equivalence_class(rule: Rule) -> Result<EquivalenceClass> {
    let members = [
        rule,
        conjugate(rule)?,
        reflect(rule)?,
        conjugate_reflect(rule)?,
    ]
    .iter()
    .map(|r| r.number() as u8)
    .collect();
    Ok(EquivalenceClass { members })
}

/// Result of [`affine_decomposition`].
///
/// `mask` uses the neighbourhood bit order of [`Rule`]: bit `2r` is the
/// leftmost cell, bit 0 the rightmost. When `is_affine` holds, the rule's
/// output on neighbourhood `x` is `constant XOR parity(x & mask)`.
///
/// The constant may be 1, so rule 105 (`NOT (a XOR b XOR c)`) counts as
/// affine even though it is not linear in the strict sense.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineDecomposition {
    pub is_affine: bool,
    pub mask: u32,
    pub constant: bool,
}

impl AffineDecomposition {
    /// Evaluates the affine form on a packed neighbourhood.
    pub fn eval(&self, x: usize) -> bool {
        self.constant ^ ((x as u32 & self.mask).count_ones() & 1 == 1)
    }
}

/// Decides whether a rule is affine over GF(2).
///
/// The only affine candidate consistent with the outputs at zero and at the
/// unit vectors is checked against the full truth table.
pub fn affine_decomposition(rule: Rule) -> AffineDecomposition {
    let vars = rule.neighborhood_size();
    let constant = rule.output(0);
    let mask = (0..vars).fold(0u32, |m, i| {
        m | (u32::from(rule.output(1 << i) ^ constant) << i)
    });
    let candidate = AffineDecomposition {
        is_affine: true,
        mask,
        constant,
    };
    let is_affine = (0..rule.table_len()).all(|x| candidate.eval(x) == rule.output(x));
    AffineDecomposition {
        is_affine,
        ..candidate
    }
}
