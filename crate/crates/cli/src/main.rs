//! `cellcipher`: command-line front end for the cellcipher library.
//!
//! Exit statuses: 0 success, 2 usage error, 3 I/O error, 4 attack exhausted
//! its trial budget, 5 a statistical test failed.

mod bitfile;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cellcipher::algebra;
use cellcipher::attack;
use cellcipher::automaton::{self, parse_bits};
use cellcipher::cipher::{self, vernam_decrypt, vernam_encrypt};
use cellcipher::fips::{self, FipsThresholds};
use cellcipher::walsh::{self, BooleanFunction};
use cellcipher::{BitStream, Configuration, KeystreamSpec, Rule, RuleAssignment, RuleSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use bitfile::{encode_bits, read_bits, write_output, BitFormat};

/// Widest ring the CLI will build.
const MAX_WIDTH: usize = 1 << 20;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Exhausted(String),
    TestFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Exhausted(_) => 4,
            CliError::TestFailed => 5,
        }
    }
}

impl From<cellcipher::Error> for CliError {
    fn from(e: cellcipher::Error) -> Self {
        match e {
            cellcipher::Error::TrialsExhausted(_) => CliError::Exhausted(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "cellcipher", version, about = "Cellular-automaton keystreams: simulate, analyse, attack")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a space-time diagram.
    Evolve(EvolveArgs),
    /// Write the temporal sequence of one cell as a keystream.
    Keystream(KeystreamArgs),
    /// XOR a plaintext file with a keystream file.
    Encrypt(CryptArgs),
    /// XOR a ciphertext file with a keystream file.
    Decrypt(CryptArgs),
    /// Walsh spectrum of a rule or of its iterate.
    Spectrum(SpectrumArgs),
    /// Exhaustive min-max scan over the 256 elementary rules.
    Scan(ScanArgs),
    /// Equivalence class, balance, affinity and correlation immunity.
    Classify(ClassifyArgs),
    /// Recover a ring key from an observed keystream.
    Attack(AttackArgs),
    /// Run the FIPS 140-2 statistical battery on a bitstream.
    Fips(FipsArgs),
}

#[derive(Args, Debug)]
struct RuleArgs {
    /// Rule number applied to every cell.
    #[arg(long, conflicts_with = "rules")]
    rule: Option<u64>,
    /// Comma-separated per-cell rules, repeated to cover the ring.
    #[arg(long, value_delimiter = ',')]
    rules: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    radius: u32,
}

impl RuleArgs {
    fn rule_set(&self, width: usize) -> CliResult<RuleSet> {
        if !self.rules.is_empty() {
            let pattern = self
                .rules
                .iter()
                .map(|&n| Rule::from_number(n, self.radius))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(RuleAssignment::tiled(&pattern, width)?.into());
        }
        Ok(Rule::from_number(self.rule.unwrap_or(30), self.radius)?.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DiagramFormat {
    Text,
    Pbm,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    #[command(flatten)]
    rules: RuleArgs,
    /// Ring width; defaults to the length of a literal --init.
    #[arg(long)]
    width: Option<usize>,
    #[arg(long, default_value_t = 16)]
    steps: usize,
    /// `single`, `zero`, `random` (needs --seed) or a bit string.
    #[arg(long, default_value = "single")]
    init: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = DiagramFormat::Text)]
    format: DiagramFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct KeystreamArgs {
    #[command(flatten)]
    rules: RuleArgs,
    #[arg(long)]
    width: Option<usize>,
    /// Initial ring (the key): a bit string or `random` (needs --seed).
    #[arg(long)]
    key: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Tapped cell.
    #[arg(long, default_value_t = 0)]
    cell: usize,
    #[arg(long)]
    length: usize,
    #[arg(long, default_value_t = 0)]
    burn_in: usize,
    #[arg(long, value_enum, default_value_t = BitFormat::Ascii)]
    format: BitFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CryptArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Keystream file, exactly as long as the input.
    #[arg(long = "keystream")]
    keystream: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Format of the input and output files.
    #[arg(long, value_enum, default_value_t = BitFormat::Ascii)]
    format: BitFormat,
    #[arg(long, value_enum, default_value_t = BitFormat::Ascii)]
    key_format: BitFormat,
    /// Bit count of a raw input.
    #[arg(long)]
    bits: Option<usize>,
    /// Permit encrypting twice with the same keystream.
    #[arg(long)]
    allow_key_reuse: bool,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    rule: u64,
    #[arg(long, default_value_t = 1)]
    radius: u32,
    /// Iteration order; 1 is the rule itself.
    #[arg(long, default_value_t = 1)]
    order: u32,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// `a..b` or a comma-separated list.
    #[arg(long, default_value = "1..5")]
    orders: String,
    /// Rows to print, in this order; defaults to all balanced rules.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    rule: Vec<u8>,
}

#[derive(Args, Debug)]
struct AttackArgs {
    #[arg(long, default_value_t = 30)]
    rule: u8,
    /// Ring width; must equal the sequence length.
    #[arg(long)]
    width: Option<usize>,
    /// Observed keystream bits of the tapped cell.
    #[arg(long)]
    sequence: String,
    /// Ring index of the tapped cell in the printed key.
    #[arg(long, default_value_t = 0)]
    cell: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Defaults to 64 * 2^(N-1).
    #[arg(long)]
    max_trials: Option<u64>,
    /// Write one line per trial here.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FipsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = BitFormat::Ascii)]
    format: BitFormat,
    #[arg(long)]
    bits: Option<usize>,
    /// Threshold file; defaults to the bundled FIPS 140-2 values.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn initial_ring(spec: &str, width: Option<usize>, seed: Option<u64>) -> CliResult<Configuration> {
    let sized = |w: Option<usize>| {
        w.ok_or_else(|| CliError::Usage(format!("--width is required with `{spec}`")))
    };
    let ring = match spec {
        "single" => Configuration::single(sized(width)?),
        "zero" => Configuration::zeros(sized(width)?),
        "random" => {
            let seed = seed.ok_or_else(|| CliError::Usage("`random` requires --seed".into()))?;
            let width = sized(width)?;
            check_width(width)?;
            Configuration::random(width, &mut ChaCha8Rng::seed_from_u64(seed))
        }
        bits => {
            let ring: Configuration = bits.parse()?;
            if let Some(w) = width {
                if w != ring.width() {
                    return Err(CliError::Usage(format!(
                        "--width {w} disagrees with a {}-cell ring",
                        ring.width()
                    )));
                }
            }
            ring
        }
    };
    check_width(ring.width())?;
    Ok(ring)
}

fn check_width(width: usize) -> CliResult {
    if width > MAX_WIDTH {
        return Err(CliError::Usage(format!("width {width} exceeds {MAX_WIDTH}")));
    }
    Ok(())
}

fn cmd_evolve(a: &EvolveArgs) -> CliResult {
    let ring = initial_ring(&a.init, a.width, a.seed)?;
    let rules = a.rules.rule_set(ring.width())?;
    let diagram = automaton::evolve(&ring, &rules, a.steps)?;
    let text = match a.format {
        DiagramFormat::Text => diagram.to_text(),
        DiagramFormat::Pbm => diagram.to_pbm(),
    };
    write_output(a.out.as_deref(), text.as_bytes())
}

fn cmd_keystream(a: &KeystreamArgs) -> CliResult {
    let key = initial_ring(&a.key, a.width, a.seed)?;
    let rules = a.rules.rule_set(key.width())?;
    let spec = KeystreamSpec::new(rules, key.width(), a.cell)?.with_burn_in(a.burn_in);
    let stream = cipher::keystream(&key, &spec, a.length)?;
    write_output(a.out.as_deref(), &encode_bits(&stream, a.format))
}

fn key_digest(key: &BitStream) -> String {
    let mut hasher = Sha256::new();
    hasher.update((key.len() as u64).to_be_bytes());
    hasher.update(key.to_bytes());
    hex::encode(hasher.finalize())
}

/// Marker file recording the digests of keystreams already used to encrypt.
fn usage_ledger(keystream: &Path) -> PathBuf {
    let mut name = keystream.as_os_str().to_owned();
    name.push(".used");
    PathBuf::from(name)
}

fn cmd_crypt(a: &CryptArgs, encrypt: bool) -> CliResult {
    let data = read_bits(&a.input, a.format, a.bits)?;
    let key = read_bits(&a.keystream, a.key_format, None)?;
    if key.len() != data.len() {
        return Err(CliError::Usage(format!(
            "keystream has {} bits, input has {}",
            key.len(),
            data.len()
        )));
    }
    let out = if encrypt {
        let ledger = usage_ledger(&a.keystream);
        let digest = key_digest(&key);
        let seen = fs::read_to_string(&ledger).unwrap_or_default();
        if !a.allow_key_reuse && seen.lines().any(|l| l.trim() == digest) {
            return Err(CliError::Usage(format!(
                "keystream {} was already used for encryption (pass --allow-key-reuse to override)",
                a.keystream.display()
            )));
        }
        let out = vernam_encrypt(&data, &key)?;
        if !seen.lines().any(|l| l.trim() == digest) {
            fs::write(&ledger, format!("{seen}{digest}\n"))
                .map_err(|e| CliError::Io(format!("{}: {e}", ledger.display())))?;
        }
        out
    } else {
        vernam_decrypt(&data, &key)?
    };
    write_output(a.out.as_deref(), &encode_bits(&out, a.format))
}

fn cmd_spectrum(a: &SpectrumArgs) -> CliResult {
    let rule = Rule::from_number(a.rule, a.radius)?;
    let f = walsh::iterate_rule(rule, a.order)?;
    let spectrum = walsh::walsh_transform(&f)?;
    let mut out = String::from("mask,value\n");
    for (mask, v) in spectrum.values().iter().enumerate() {
        let _ = writeln!(out, "{mask},{v}");
    }
    write_output(None, out.as_bytes())
}

fn parse_orders(s: &str) -> CliResult<Vec<u32>> {
    let bad = || CliError::Usage(format!("bad --orders {s:?}"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect()
}

fn cmd_scan(a: &ScanArgs) -> CliResult {
    let orders = parse_orders(&a.orders)?;
    let report = walsh::scan_rules(&orders)?;
    let only = (!a.only.is_empty()).then_some(a.only.as_slice());
    write_output(None, report.to_csv(only).as_bytes())
}

fn cmd_classify(a: &ClassifyArgs) -> CliResult {
    let mut out = String::from(
        "rule,class,balanced,affine,affine_mask,affine_constant,ci_order,left_permutive\n",
    );
    for &n in &a.rule {
        let rule = Rule::elementary(n);
        let class = algebra::equivalence_class(rule)?;
        let members: Vec<String> = class.members().iter().map(u8::to_string).collect();
        let f = BooleanFunction::from_rule(rule);
        let affine = algebra::affine_decomposition(rule);
        let (mask, constant) = if affine.is_affine {
            (format!("{:03b}", affine.mask), u8::from(affine.constant).to_string())
        } else {
            (String::new(), String::new())
        };
        let _ = writeln!(
            out,
            "{n},{},{},{},{mask},{constant},{},{}",
            members.join(" "),
            walsh::is_balanced(&f),
            affine.is_affine,
            walsh::correlation_immunity_order(&f)?,
            attack::is_left_permutive(rule),
        );
    }
    write_output(None, out.as_bytes())
}

fn cmd_attack(a: &AttackArgs) -> CliResult {
    let observed = parse_bits(&a.sequence)?;
    let n = observed.len();
    if let Some(w) = a.width {
        if w != n {
            return Err(CliError::Usage(format!(
                "--width {w} but the sequence has {n} bits"
            )));
        }
    }
    if a.cell >= n {
        return Err(CliError::Usage(format!("--cell {} outside a {n}-cell ring", a.cell)));
    }
    let seed = a.seed.unwrap_or_else(|| {
        eprintln!("seed = 0");
        0
    });
    let max_trials = match a.max_trials {
        Some(t) => t,
        None => 64u64
            .checked_shl(n.saturating_sub(1) as u32)
            .filter(|_| n <= 40)
            .ok_or_else(|| CliError::Usage("sequence too long for the default budget; pass --max-trials".into()))?,
    };
    let rule = Rule::elementary(a.rule);
    let mut transcript = String::new();
    let result = attack::attack_with(rule, &observed, max_trials, seed, |t| {
        if a.transcript.is_some() {
            transcript.push_str(&t.to_line());
            transcript.push('\n');
        }
    });
    if let Some(path) = &a.transcript {
        fs::write(path, &transcript).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let result = result?;
    let key = result.recovered_key.rotate(-(a.cell as isize));
    let out = format!(
        "key,trials,matched_length\n{key},{},{}\n",
        result.trials_used, result.matched_length
    );
    write_output(None, out.as_bytes())
}

fn cmd_fips(a: &FipsArgs) -> CliResult {
    let thresholds = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            FipsThresholds::parse(&text)?
        }
        None => FipsThresholds::default(),
    };
    let stream = read_bits(&a.input, a.format, a.bits)?;
    let window = thresholds.stream_length;
    if stream.len() < window {
        return Err(CliError::Usage(format!(
            "stream has {} bits, the battery needs {window}",
            stream.len()
        )));
    }
    let verdict = |ok: bool| if ok { "pass" } else { "fail" };
    let mut out = String::from("window,test,field,value\n");
    let mut all_pass = true;
    // Each full window is tested on its own; a trailing partial window is ignored.
    for (i, chunk) in stream.bits().chunks_exact(window).enumerate() {
        let report = fips::fips_battery(&BitStream::new(chunk.to_vec()), &thresholds)?;
        all_pass &= report.passed();
        for e in &report.entries {
            for (k, v) in &e.values {
                let _ = writeln!(out, "{i},{},{k},{v}", e.name);
            }
            let _ = writeln!(out, "{i},{},result,{}", e.name, verdict(e.passed));
        }
    }
    let _ = writeln!(out, "all,overall,result,{}", verdict(all_pass));
    write_output(None, out.as_bytes())?;
    if all_pass {
        Ok(())
    } else {
        Err(CliError::TestFailed)
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Evolve(a) => cmd_evolve(a),
        Command::Keystream(a) => cmd_keystream(a),
        Command::Encrypt(a) => cmd_crypt(a, true),
        Command::Decrypt(a) => cmd_crypt(a, false),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Attack(a) => cmd_attack(a),
        Command::Fips(a) => cmd_fips(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Io(m) => eprintln!("i/o error: {m}"),
                CliError::Exhausted(m) => eprintln!("exhausted: {m}"),
                CliError::TestFailed => eprintln!("statistical test failed"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
