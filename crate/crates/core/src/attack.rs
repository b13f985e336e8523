//! Meier-Staffelbach known-plaintext key recovery for left-permutive rules.
//!
//! Rule 30 is `f(a, b, c) = a XOR (b OR c)`, so the left input is determined
//! by the output and the two other inputs: `a = f(a, b, c) XOR (b OR c)`. Given
//! the `N` observed values of the tap cell, the attack:
//!
//! 1. guesses the `N - 1` cells to the right of the tap at time 0;
//! 2. fills the triangle to the right of the observed column by running the
//!    rule forward (every guess is consistent with the observation);
//! 3. fills the triangle to the left by solving for the left input, column by
//!    column, which yields the `N - 1` cells left of the tap at time 0;
//! 4. wraps that left row onto the ring and keeps the key if its keystream
//!    reproduces the observation.
//!
//! Coordinates in a [`PartialDiagram`] are `(time, offset)` where offset 0 is
//! the tap cell and offsets run from `-(N-1)` to `N-1`.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{self, Configuration, Rule};
use crate::{Error, Result};

/// True iff flipping the leftmost neighbour always flips the output, i.e. the
/// rule has the form `f(a, rest) = a XOR g(rest)`.
pub fn is_left_permutive(rule: Rule) -> bool {
    let left = 1usize << (rule.neighborhood_size() - 1);
    (0..left).all(|x| rule.output(x) != rule.output(x | left))
}

fn require_attackable(rule: Rule) -> Result<()> {
    if rule.radius() != 1 {
        return Err(Error::UnsupportedRadius(rule.radius()));
    }
    if !is_left_permutive(rule) {
        return Err(Error::NotLeftPermutive(rule.number()));
    }
    Ok(())
}

/// Solves `f(a, center, right) = next` for the left input `a`.
pub fn backward_step(rule: Rule, next: bool, center: bool, right: bool) -> Result<bool> {
    require_attackable(rule)?;
    Ok(solve_left(rule, next, center, right))
}

#[inline]
fn solve_left(rule: Rule, next: bool, center: bool, right: bool) -> bool {
    next ^ rule.output((usize::from(center) << 1) | usize::from(right))
}

#[inline]
fn forward_cell(rule: Rule, left: bool, center: bool, right: bool) -> bool {
    rule.output((usize::from(left) << 2) | (usize::from(center) << 1) | usize::from(right))
}

/// Triangular space-time array with unknown cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialDiagram {
    n: usize,
    cells: Vec<Option<bool>>,
}

impl PartialDiagram {
    /// An empty diagram for a ring of `n` cells: times `0..n`, offsets
    /// `-(n-1)..=n-1`.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            cells: vec![None; n * (2 * n - 1)],
        }
    }

    pub fn ring_width(&self) -> usize {
        self.n
    }

    fn slot(&self, time: usize, offset: isize) -> Option<usize> {
        let span = self.n as isize - 1;
        if time >= self.n || offset < -span || offset > span {
            return None;
        }
        Some(time * (2 * self.n - 1) + (offset + span) as usize)
    }

    pub fn get(&self, time: usize, offset: isize) -> Option<bool> {
        self.slot(time, offset).and_then(|i| self.cells[i])
    }

    pub fn set(&mut self, time: usize, offset: isize, value: bool) {
        let i = self
            .slot(time, offset)
            .expect("diagram coordinates out of range");
        self.cells[i] = Some(value);
    }

    fn need(&self, time: usize, offset: isize) -> Result<bool> {
        self.get(time, offset)
            .ok_or(Error::IncompleteDiagram { time, offset })
    }

    /// All known cells as `(time, offset, value)`.
    pub fn known(&self) -> impl Iterator<Item = (usize, isize, bool)> + '_ {
        let span = self.n as isize - 1;
        (0..self.n).flat_map(move |t| {
            (-span..=span).filter_map(move |j| self.get(t, j).map(|v| (t, j, v)))
        })
    }

    /// Wraps the time-0 row left of the tap onto a ring whose cell 0 is the
    /// tap: ring cell `m` takes offset `-(n - m)` for `m >= 1`.
    pub fn ring_key(&self) -> Result<Configuration> {
        let n = self.n as isize;
        let mut cells = Vec::with_capacity(self.n);
        cells.push(self.need(0, 0)?);
        for m in 1..n {
            cells.push(self.need(0, -(n - m))?);
        }
        Ok(Configuration::new(cells))
    }

    /// Renders the diagram with `.` for unknown cells, one time step per line.
    pub fn render(&self) -> String {
        let span = self.n as isize - 1;
        let mut out = String::new();
        for t in 0..self.n {
            for j in -span..=span {
                out.push(match self.get(t, j) {
                    Some(true) => '1',
                    Some(false) => '0',
                    None => '.',
                });
            }
            out.push('\n');
        }
        out
    }
}

/// Seeds the observed column and the right guess, then fills the triangle to
/// the right of the tap by forward evolution.
pub fn forward_completion(
    rule: Rule,
    observed: &[bool],
    right_guess: &[bool],
) -> Result<PartialDiagram> {
    if rule.radius() != 1 {
        return Err(Error::UnsupportedRadius(rule.radius()));
    }
    let n = observed.len();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "observed sequence of length {n} is shorter than 3"
        )));
    }
    if right_guess.len() != n - 1 {
        return Err(Error::LengthMismatch {
            expected: n - 1,
            actual: right_guess.len(),
        });
    }
    let mut d = PartialDiagram::new(n);
    for (t, &v) in observed.iter().enumerate() {
        d.set(t, 0, v);
    }
    for (j, &v) in right_guess.iter().enumerate() {
        d.set(0, j as isize + 1, v);
    }
    for k in 1..=n - 2 {
        for j in 1..=(n - k - 1) as isize {
            let v = forward_cell(
                rule,
                d.need(k - 1, j - 1)?,
                d.need(k - 1, j)?,
                d.need(k - 1, j + 1)?,
            );
            d.set(k, j, v);
        }
    }
    Ok(d)
}

/// Fills the left triangle of a forward-completed diagram in place.
pub fn complete_backward(rule: Rule, diagram: &mut PartialDiagram) -> Result<()> {
    require_attackable(rule)?;
    let n = diagram.n;
    for j in 1..n as isize {
        for k in (0..n - j as usize).rev() {
            let v = solve_left(
                rule,
                diagram.need(k + 1, 1 - j)?,
                diagram.need(k, 1 - j)?,
                diagram.need(k, 2 - j)?,
            );
            diagram.set(k, -j, v);
        }
    }
    Ok(())
}

/// Backward completion followed by wrapping the recovered row onto the ring.
pub fn backward_completion(rule: Rule, diagram: &PartialDiagram) -> Result<Configuration> {
    let mut filled = diagram.clone();
    complete_backward(rule, &mut filled)?;
    filled.ring_key()
}

/// One guess of the attack, for audit transcripts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub guess: Vec<bool>,
    pub candidate: Configuration,
    pub matched: bool,
}

impl TrialRecord {
    /// `trial=<t> guess=<bits> key=<bits> match=<0|1>`
    pub fn to_line(&self) -> String {
        format!(
            "trial={} guess={} key={} match={}",
            self.trial,
            automaton::format_bits(&self.guess),
            self.candidate,
            u8::from(self.matched)
        )
    }
}

/// A key that reproduces the observation from cell 0 of the ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackResult {
    pub recovered_key: Configuration,
    pub trials_used: u64,
    pub matched_length: usize,
}

/// The right-column guess of trial `trial`, drawn from its own ChaCha stream
/// so trials can be evaluated in any order.
pub fn trial_guess(seed: u64, trial: u64, len: usize) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    (0..len).map(|_| rng.gen()).collect()
}

/// Forward completion, backward completion and verification for one guess.
pub fn run_trial(rule: Rule, observed: &[bool], guess: &[bool]) -> Result<(Configuration, bool)> {
    let mut diagram = forward_completion(rule, observed, guess)?;
    complete_backward(rule, &mut diagram)?;
    let key = diagram.ring_key()?;
    let produced = automaton::temporal_sequence(&key, &rule.into(), 0, observed.len())?;
    let matched = produced == observed;
    Ok((key, matched))
}

fn check_attack_input(rule: Rule, observed: &[bool]) -> Result<()> {
    require_attackable(rule)?;
    if observed.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "observed sequence of length {} is shorter than 3",
            observed.len()
        )));
    }
    Ok(())
}

pub fn attack(rule: Rule, observed: &[bool], max_trials: u64, seed: u64) -> Result<AttackResult> {
    attack_with(rule, observed, max_trials, seed, |_| {})
}

/// [`attack`], reporting every trial to `on_trial`.
pub fn attack_with(
    rule: Rule,
    observed: &[bool],
    max_trials: u64,
    seed: u64,
    mut on_trial: impl FnMut(&TrialRecord),
) -> Result<AttackResult> {
    check_attack_input(rule, observed)?;
    if max_trials == 0 {
        return Err(Error::InvalidParameter("max_trials must be at least 1".into()));
    }
    let n = observed.len();
    for trial in 0..max_trials {
        let guess = trial_guess(seed, trial, n - 1);
        let (candidate, matched) = run_trial(rule, observed, &guess)?;
        on_trial(&TrialRecord {
            trial,
            guess,
            candidate: candidate.clone(),
            matched,
        });
        if matched {
            return Ok(AttackResult {
                recovered_key: candidate,
                trials_used: trial + 1,
                matched_length: n,
            });
        }
    }
    Err(Error::TrialsExhausted(max_trials))
}

/// Fraction of `trials` independent single guesses whose key reproduces the
/// observation.
pub fn success_rate(rule: Rule, observed: &[bool], trials: u64, seed: u64) -> Result<Ratio<u64>> {
    check_attack_input(rule, observed)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let n = observed.len();
    let one = |t: u64| -> Result<u64> {
        let guess = trial_guess(seed, t, n - 1);
        run_trial(rule, observed, &guess).map(|(_, ok)| u64::from(ok))
    };
    #[cfg(feature = "parallel")]
    let hits: u64 = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(one).sum::<Result<u64>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let hits: u64 = (0..trials).map(one).sum::<Result<u64>>()?;
    Ok(Ratio::new(hits, trials))
}
