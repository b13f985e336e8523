//! Cellular-automaton keystream generators and their cryptanalysis.
//!
//! The crate is organised around the life cycle of a CA-based stream cipher:
//!
//! * [`automaton`] evolves elementary (radius 1) and radius-2 rules on a ring,
//!   uniformly or with one rule per cell.
//! * [`algebra`] implements the complement and mirror equivalences between
//!   elementary rules and detects affine rules.
//! * [`walsh`] computes Walsh spectra of iterated rules, tests balancedness and
//!   correlation immunity, and ranks all 256 elementary rules.
//! * [`cipher`] taps one cell of a ring as a keystream and XORs it with data.
//! * [`attack`] recovers a ring key from an observed keystream of a
//!   left-permutive rule (rule 30 and friends) by forward/backward completion.
//! * [`fips`] is the FIPS 140-2 monobit/poker/runs/long-run battery.

pub mod algebra;
pub mod attack;
pub mod automaton;
pub mod cipher;
mod error;
pub mod fips;
pub mod walsh;

pub use error::{Error, Result};

pub use algebra::{AffineDecomposition, EquivalenceClass};
pub use attack::{AttackResult, PartialDiagram, TrialRecord};
pub use automaton::{Configuration, Rule, RuleAssignment, RuleSet, SpaceTimeDiagram};
pub use cipher::{BitStream, KeystreamSpec};
pub use fips::{FipsThresholds, TestReport};
pub use walsh::{BooleanFunction, MinMaxScore, ScanReport, WalshSpectrum};
