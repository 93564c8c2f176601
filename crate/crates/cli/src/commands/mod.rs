pub mod bound;
pub mod codecio;
pub mod construct;
pub mod exponent;
pub mod simulate;
pub mod spectrum;

use polarlab::channel::BmsChannel;

use crate::Failure;

/// Parses a channel spec: inline JSON or `@path` to a JSON file.
pub fn parse_channel(spec: &str) -> Result<BmsChannel, Failure> {
    let text = if let Some(path) = spec.strip_prefix('@') {
        std::fs::read_to_string(path)?
    } else {
        spec.to_string()
    };
    Ok(serde_json::from_str(&text)?)
}

/// Parses a bit string like "0110...".
pub fn parse_bits(s: &str) -> Result<Vec<u8>, Failure> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            other => Err(Failure::invalid(format!("invalid bit character {other:?}"))),
        })
        .collect()
}

/// Formats bits back into a "0110..." string.
pub fn format_bits(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}
