use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cellcipher::attack::{run_trial, trial_guess};
use cellcipher::automaton::{parse_bits, temporal_sequence};
use cellcipher::{Configuration, Rule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_cellcipher");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn cellcipher")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn evolve_single_seed() {
    let out = stdout_of(&["evolve", "--rule", "30", "--width", "8", "--steps", "1", "--init", "single"]);
    assert_eq!(out.lines().nth(1), Some("00111000"));
}

#[test]
fn evolve_zero_steps_prints_initial_row() {
    let out = stdout_of(&["evolve", "--rule", "30", "--init", "10110", "--steps", "0"]);
    assert_eq!(out, "10110\n");
}

#[test]
fn evolve_center_column() {
    let out = stdout_of(&["evolve", "--rule", "30", "--width", "5", "--init", "01011", "--steps", "4"]);
    // The observed cell sits at index 0 of the ring key.
    let column: String = out.lines().map(|l| &l[..1]).collect();
    assert_eq!(column, "00100");
}

#[test]
fn evolve_pbm_and_random_init() {
    let out = stdout_of(&["evolve", "--rule", "30", "--width", "8", "--steps", "1", "--format", "pbm"]);
    assert_eq!(out, "P1\n8 2\n00010000\n00111000\n");
    let a = stdout_of(&["evolve", "--width", "32", "--init", "random", "--seed", "5", "--steps", "8"]);
    let b = stdout_of(&["evolve", "--width", "32", "--init", "random", "--seed", "5", "--steps", "8"]);
    assert_eq!(a, b);
    assert_eq!(run(&["evolve", "--width", "32", "--init", "random"]).status.code(), Some(2));
}

#[test]
fn keystream_of_five_cell_ring() {
    let out = stdout_of(&["keystream", "--width", "5", "--key", "01011", "--cell", "0", "--length", "5"]);
    assert_eq!(out.trim(), "00100");
}

#[test]
fn raw_round_trip_4096_bits() {
    let dir = TempDir::new().unwrap();
    let plain = dir.path().join("plain.bin");
    let key = dir.path().join("key.bin");
    let cipher = dir.path().join("cipher.bin");
    let back = dir.path().join("back.bin");
    let mut rng = ChaCha8Rng::seed_from_u64(4096);
    let bytes: Vec<u8> = (0..512).map(|_| rng.gen()).collect();
    fs::write(&plain, &bytes).unwrap();
    stdout_of(&[
        "keystream", "--width", "64", "--key", "random", "--seed", "9", "--cell", "31",
        "--length", "4096", "--format", "raw", "--out", path_str(&key),
    ]);
    stdout_of(&[
        "encrypt", "--in", path_str(&plain), "--keystream", path_str(&key), "--format", "raw",
        "--key-format", "raw", "--bits", "4096", "--out", path_str(&cipher),
    ]);
    assert_ne!(fs::read(&cipher).unwrap(), bytes);
    stdout_of(&[
        "decrypt", "--in", path_str(&cipher), "--keystream", path_str(&key), "--format", "raw",
        "--key-format", "raw", "--bits", "4096", "--out", path_str(&back),
    ]);
    assert_eq!(fs::read(&back).unwrap(), bytes);
}

#[test]
fn zero_keystream_copies_input_and_reuse_is_refused() {
    let dir = TempDir::new().unwrap();
    let plain = dir.path().join("plain.bits");
    let key = dir.path().join("zero.bits");
    fs::write(&plain, "1101001110\n").unwrap();
    fs::write(&key, "0000000000\n").unwrap();
    let args = ["encrypt", "--in", path_str(&plain), "--keystream", path_str(&key)];
    assert_eq!(stdout_of(&args), "1101001110\n");
    let again = run(&args);
    assert_eq!(again.status.code(), Some(2));
    let mut forced = args.to_vec();
    forced.push("--allow-key-reuse");
    assert_eq!(stdout_of(&forced), "1101001110\n");
    // Decryption never counts as reuse.
    stdout_of(&["decrypt", "--in", path_str(&plain), "--keystream", path_str(&key)]);
}

#[test]
fn length_mismatch_is_rejected() {
    let dir = TempDir::new().unwrap();
    let plain = dir.path().join("p.bits");
    let key = dir.path().join("k.bits");
    fs::write(&plain, "1010").unwrap();
    fs::write(&key, "101").unwrap();
    let out = run(&["decrypt", "--in", path_str(&plain), "--keystream", path_str(&key)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_input_is_io_error() {
    let out = run(&["fips", "--in", "/nonexistent/stream.bits"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn scan_reproduces_table() {
    let out = stdout_of(&[
        "scan", "--orders", "1..5", "--only", "30,60,86,90,102,105,135,149,150,153,165,195",
    ]);
    let expected = "\
rule,cfg1,val1,cfg2,val2,cfg3,val3,cfg4,val4,cfg5,val5,conj,refl,cr
30,4,2,16,4,64,16,256,40,1024,80,135,86,149
60,0,0,0,0,0,0,0,0,0,0,195,102,153
86,1,2,1,4,1,16,1,40,1,80,149,30,135
90,0,0,0,0,0,0,0,0,0,0,165,90,165
102,0,0,0,0,0,0,0,0,0,0,153,60,195
105,0,0,0,0,0,0,0,0,0,0,105,105,105
135,4,2,16,4,64,16,256,40,1024,80,30,149,86
149,1,2,1,4,1,16,1,40,1,80,86,135,30
150,0,0,0,0,0,0,0,0,0,0,150,150,150
153,0,0,0,0,0,0,0,0,0,0,102,195,60
165,0,0,0,0,0,0,0,0,0,0,90,165,90
195,0,0,0,0,0,0,0,0,0,0,60,153,102
";
    assert_eq!(out, expected);
}

#[test]
fn classify_rule_30() {
    let out = stdout_of(&["classify", "--rule", "30"]);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "30");
    assert_eq!(row[1], "30 86 135 149");
    assert_eq!(row[2], "true");
    assert_eq!(row[3], "false");
    assert_eq!(row[6], "0");
}

#[test]
fn spectrum_of_rule_zero_is_all_zero() {
    let out = stdout_of(&["spectrum", "--rule", "0"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("mask,value"));
    let values: Vec<&str> = lines.map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(values.len(), 8);
    assert!(values.iter().all(|v| *v == "0"));
}

#[test]
fn attack_recovers_five_cell_key() {
    let dir = TempDir::new().unwrap();
    let transcript = dir.path().join("trials.txt");
    let out = stdout_of(&[
        "attack", "--rule", "30", "--width", "5", "--sequence", "00100", "--seed", "1",
        "--transcript", path_str(&transcript),
    ]);
    let key: Configuration = out.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
    let ks = temporal_sequence(&key, &Rule::elementary(30).into(), 0, 5).unwrap();
    assert_eq!(ks, parse_bits("00100").unwrap());
    let log = fs::read_to_string(&transcript).unwrap();
    assert!(log.lines().last().unwrap().ends_with("match=1"));
}

#[test]
fn attack_exhaustion_exit_status() {
    let rule = Rule::elementary(30);
    let observed = parse_bits("0110100").unwrap();
    let seed = (0u64..)
        .find(|&s| !run_trial(rule, &observed, &trial_guess(s, 0, 6)).unwrap().1)
        .unwrap();
    let seed = seed.to_string();
    let out = run(&[
        "attack", "--rule", "30", "--sequence", "0110100", "--max-trials", "1", "--seed", &seed,
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn fips_on_zeros_fails() {
    let dir = TempDir::new().unwrap();
    let zeros = dir.path().join("zeros.bits");
    fs::write(&zeros, "0".repeat(20000)).unwrap();
    let out = run(&["fips", "--in", path_str(&zeros)]);
    assert_eq!(out.status.code(), Some(5));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("all,overall,result,fail\n"));
}

#[test]
fn fips_on_rule_30_keystream_passes() {
    let dir = TempDir::new().unwrap();
    let ks = dir.path().join("ks.bits");
    stdout_of(&[
        "keystream", "--width", "64", "--key", "random", "--seed", "3", "--cell", "32",
        "--length", "20000", "--out", path_str(&ks),
    ]);
    let out = stdout_of(&["fips", "--in", path_str(&ks)]);
    assert!(out.ends_with("all,overall,result,pass\n"));
}

#[test]
fn fips_custom_config() {
    let dir = TempDir::new().unwrap();
    let conf = dir.path().join("short.conf");
    let stream = dir.path().join("s.bits");
    let text = cellcipher::FipsThresholds::default().to_config().replace("stream.length = 20000", "stream.length = 100");
    fs::write(&conf, text).unwrap();
    fs::write(&stream, "01".repeat(50)).unwrap();
    let out = run(&["fips", "--in", path_str(&stream), "--config", path_str(&conf)]);
    assert!(out.status.code() == Some(5) || out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("window,test,field,value\n0,monobit,ones,50\n"));
}

#[test]
fn identical_command_lines_give_identical_bytes() {
    let args = ["keystream", "--width", "40", "--key", "random", "--seed", "77", "--length", "300"];
    assert_eq!(stdout_of(&args), stdout_of(&args));
    let scan = ["scan", "--orders", "1,3"];
    assert_eq!(stdout_of(&scan), stdout_of(&scan));
}
