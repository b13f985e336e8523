//! Browser bindings for the interactive demo page in `www/`.
//!
//! Each export is a thin wrapper over a plain Rust function so the logic can
//! be tested natively.

use std::fmt::Write as _;

use cellcipher::attack;
use cellcipher::automaton::{evolve, temporal_sequence};
use cellcipher::walsh::minmax_score;
use cellcipher::{Configuration, Rule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

const MAX_CELLS: usize = 1 << 22;

fn initial_ring(init: &str, width: usize, seed: u32) -> Result<Configuration, String> {
    match init {
        "single" => Ok(Configuration::single(width)),
        "random" => Ok(Configuration::random(
            width,
            &mut ChaCha8Rng::seed_from_u64(u64::from(seed)),
        )),
        bits => bits.parse().map_err(|e: cellcipher::Error| e.to_string()),
    }
}

/// Space-time diagram as one byte per cell, row after row.
pub fn diagram(rule: u8, width: usize, steps: usize, init: &str, seed: u32) -> Result<Vec<u8>, String> {
    let ring = initial_ring(init, width, seed)?;
    if ring.width().saturating_mul(steps + 1) > MAX_CELLS {
        return Err("diagram too large".into());
    }
    let d = evolve(&ring, &Rule::elementary(rule).into(), steps).map_err(|e| e.to_string())?;
    Ok(d.rows()
        .iter()
        .flat_map(|r| r.cells().iter().map(|&b| u8::from(b)))
        .collect())
}

/// `[cfg1, val1, cfg2, val2, ...]` for orders `1..=max_order`.
pub fn profile(rule: u8, max_order: u32) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for o in 1..=max_order {
        let s = minmax_score(Rule::elementary(rule), o).map_err(|e| e.to_string())?;
        out.push(s.cfg as u32);
        out.push(s.val as u32);
    }
    Ok(out)
}

/// Encrypt-side view of the attack: derives the keystream of cell 0 from
/// `key`, then recovers a key from that keystream alone.
pub fn attack_transcript(rule: u8, key: &str, seed: u32, max_trials: u32) -> Result<String, String> {
    let rule = Rule::elementary(rule);
    let key: Configuration = key.parse().map_err(|e: cellcipher::Error| e.to_string())?;
    let n = key.width();
    let observed = temporal_sequence(&key, &rule.into(), 0, n).map_err(|e| e.to_string())?;
    let mut out = String::new();
    let _ = writeln!(out, "observed={}", cellcipher::automaton::format_bits(&observed));
    let result = attack::attack_with(rule, &observed, u64::from(max_trials), u64::from(seed), |t| {
        out.push_str(&t.to_line());
        out.push('\n');
    });
    match result {
        Ok(r) => {
            let _ = writeln!(
                out,
                "recovered={} trials={} exact={}",
                r.recovered_key,
                r.trials_used,
                r.recovered_key == key
            );
        }
        Err(e) => {
            let _ = writeln!(out, "failed: {e}");
        }
    }
    Ok(out)
}

#[wasm_bindgen(js_name = diagram)]
pub fn diagram_js(rule: u8, width: usize, steps: usize, init: &str, seed: u32) -> Result<Vec<u8>, JsError> {
    diagram(rule, width, steps, init, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = profile)]
pub fn profile_js(rule: u8, max_order: u32) -> Result<Vec<u32>, JsError> {
    profile(rule, max_order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = attackTranscript)]
pub fn attack_transcript_js(rule: u8, key: &str, seed: u32, max_trials: u32) -> Result<String, JsError> {
    attack_transcript(rule, key, seed, max_trials).map_err(|e| JsError::new(&e))
}
