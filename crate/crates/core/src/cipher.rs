//! Wolfram-style keystream generation and the Vernam XOR cipher.

use std::fmt;
use std::str::FromStr;

use crate::automaton::{self, Configuration, RuleSet};
use crate::{Error, Result};

/// A sequence of bits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitStream {
    bits: Vec<bool>,
}

impl BitStream {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Packs bits most-significant-bit first; the last byte is zero padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)))
            })
            .collect()
    }

    /// Unpacks the first `len` bits of `bytes`, most-significant-bit first.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if len > bytes.len() * 8 {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: bytes.len() * 8,
            });
        }
        let bits = (0..len).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1 == 1).collect();
        Ok(Self { bits })
    }
}

impl From<Vec<bool>> for BitStream {
    fn from(bits: Vec<bool>) -> Self {
        Self { bits }
    }
}

impl fmt::Display for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&automaton::format_bits(&self.bits))
    }
}

impl FromStr for BitStream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        automaton::parse_bits(s).map(Self::new)
    }
}

/// How a keystream is tapped from a ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeystreamSpec {
    pub rules: RuleSet,
    pub width: usize,
    pub tap: usize,
    /// Steps discarded before the first output bit.
    pub burn_in: usize,
}

impl KeystreamSpec {
    pub fn new(rules: impl Into<RuleSet>, width: usize, tap: usize) -> Result<Self> {
        if tap >= width {
            return Err(Error::CellOutOfRange { cell: tap, width });
        }
        Ok(Self {
            rules: rules.into(),
            width,
            tap,
            burn_in: 0,
        })
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }
}

/// The tap cell's values at times `burn_in .. burn_in + length`.
pub fn keystream(key: &Configuration, spec: &KeystreamSpec, length: usize) -> Result<BitStream> {
    if key.width() != spec.width {
        return Err(Error::LengthMismatch {
            expected: spec.width,
            actual: key.width(),
        });
    }
    if length == 0 {
        return Err(Error::InvalidParameter("keystream length must be at least 1".into()));
    }
    let mut bits =
        automaton::temporal_sequence(key, &spec.rules, spec.tap, spec.burn_in + length)?;
    bits.drain(..spec.burn_in);
    Ok(BitStream { bits })
}

fn xor(a: &BitStream, b: &BitStream) -> Result<BitStream> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(BitStream {
        bits: a.bits.iter().zip(&b.bits).map(|(x, y)| x ^ y).collect(),
    })
}

/// `c_i = p_i XOR k_i`. The key must be exactly as long as the plaintext.
pub fn vernam_encrypt(plain: &BitStream, key: &BitStream) -> Result<BitStream> {
    xor(plain, key)
}

/// `p_i = c_i XOR k_i`.
pub fn vernam_decrypt(cipher: &BitStream, key: &BitStream) -> Result<BitStream> {
    xor(cipher, key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Rule;

    fn bits(s: &str) -> BitStream {
        s.parse().unwrap()
    }

    #[test]
    fn five_cell_keystream() {
        let spec = KeystreamSpec::new(Rule::elementary(30), 5, 0).unwrap();
        let ks = keystream(&"01011".parse().unwrap(), &spec, 5).unwrap();
        assert_eq!(ks.to_string(), "00100");
    }

    #[test]
    fn burn_in_drops_prefix() {
        let key: Configuration = "0110100111".parse().unwrap();
        let spec = KeystreamSpec::new(Rule::elementary(30), 10, 3).unwrap();
        let full = keystream(&key, &spec, 7 + 20).unwrap();
        let late = keystream(&key, &spec.clone().with_burn_in(7), 20).unwrap();
        assert_eq!(late.bits(), &full.bits()[7..]);
    }

    #[test]
    fn spec_errors() {
        assert!(KeystreamSpec::new(Rule::elementary(30), 5, 5).is_err());
        let spec = KeystreamSpec::new(Rule::elementary(30), 5, 0).unwrap();
        assert!(keystream(&"0101".parse().unwrap(), &spec, 3).is_err());
        assert!(keystream(&"01011".parse().unwrap(), &spec, 0).is_err());
    }

    #[test]
    fn xor_examples() {
        assert_eq!(vernam_encrypt(&bits("1010"), &bits("0110")).unwrap(), bits("1100"));
        assert_eq!(vernam_decrypt(&bits("1100"), &bits("0110")).unwrap(), bits("1010"));
        let p = bits("1101001");
        assert_eq!(vernam_encrypt(&p, &BitStream::zeros(7)).unwrap(), p);
        assert_eq!(vernam_encrypt(&p, &p).unwrap(), BitStream::zeros(7));
        assert_eq!(
            vernam_decrypt(&BitStream::default(), &BitStream::default()).unwrap(),
            BitStream::default()
        );
        assert_eq!(
            vernam_encrypt(&bits("10"), &bits("101")),
            Err(Error::LengthMismatch { expected: 2, actual: 3 })
        );
    }

    #[test]
    fn byte_packing() {
        let s = bits("10000000 1");
        assert_eq!(s.to_bytes(), vec![0x80, 0x80]);
        assert_eq!(BitStream::from_bytes(&[0x80, 0x80], 9).unwrap(), s);
        assert!(BitStream::from_bytes(&[0x80], 9).is_err());
    }
}
