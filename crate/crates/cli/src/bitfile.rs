//! Bitstream file formats.
//!
//! * `ascii`: characters `0`/`1`; whitespace and newlines are ignored.
//! * `raw`: packed bytes, most significant bit first. Without `--bits` every
//!   bit of the file is used; with it the trailing padding is dropped.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use cellcipher::BitStream;
use clap::ValueEnum;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BitFormat {
    Ascii,
    Raw,
}

fn read_all(path: &Path) -> Result<Vec<u8>, CliError> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_bits(path: &Path, format: BitFormat, bits: Option<usize>) -> Result<BitStream, CliError> {
    let data = read_all(path)?;
    let stream = match format {
        BitFormat::Ascii => {
            let text = String::from_utf8(data)
                .map_err(|_| CliError::Usage(format!("{}: not ASCII bit text", path.display())))?;
            text.parse::<BitStream>()
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        BitFormat::Raw => {
            let len = bits.unwrap_or(data.len() * 8);
            BitStream::from_bytes(&data, len)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
    };
    if let (BitFormat::Ascii, Some(n)) = (format, bits) {
        if n != stream.len() {
            return Err(CliError::Usage(format!(
                "{}: holds {} bits, --bits says {n}",
                path.display(),
                stream.len()
            )));
        }
    }
    Ok(stream)
}

pub fn encode_bits(stream: &BitStream, format: BitFormat) -> Vec<u8> {
    match format {
        BitFormat::Ascii => {
            let mut s = stream.to_string();
            s.push('\n');
            s.into_bytes()
        }
        BitFormat::Raw => stream.to_bytes(),
    }
}

/// Writes to `path`, or stdout when it is `None` or `-`.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}
