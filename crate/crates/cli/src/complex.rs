//! Amplitude lists on the command line.
//!
//! Grammar, whitespace ignored:
//!
//! ```text
//! list    := complex ("," complex)*
//! complex := real | imag | real sign imag
//! imag    := [unsigned] "i"        (a bare "i" means 1)
//! real    := decimal float, optional exponent
//! ```
//!
//! So `1`, `-0.5`, `2i`, `-i`, `1+2i` and `3e-2-4.5e1i` are all accepted. [`format_complex`]
//! writes the same grammar and round-trips exactly.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {token:?} as a complex number: {reason}")]
pub struct ParseComplexError {
    pub token: String,
    pub reason: &'static str,
}

fn err(token: &str, reason: &'static str) -> ParseComplexError {
    ParseComplexError { token: token.to_string(), reason }
}

fn real(token: &str, s: &str) -> Result<f64, ParseComplexError> {
    // Rust's float parser also accepts "inf" and "NaN"; amplitudes must be finite.
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit() || b".+-eE".contains(&b)) {
        return Err(err(token, "expected a decimal number"));
    }
    s.parse::<f64>().map_err(|_| err(token, "expected a decimal number"))
}

pub fn parse_complex(token: &str) -> Result<Complex64, ParseComplexError> {
    let s: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err(token, "empty entry"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(token, &s)?, 0.0));
    };
    // The real/imaginary split is the last sign that does not belong to an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(token, &body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => real(token, other)?,
    };
    Ok(Complex64::new(re, im))
}

/// Comma-separated amplitudes.
pub fn parse_state(list: &str) -> Result<Vec<Complex64>, ParseComplexError> {
    list.split(',').map(parse_complex).collect()
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

pub fn format_state(amps: &[Complex64]) -> String {
    amps.iter().map(|z| format_complex(*z)).collect::<Vec<_>>().join(",")
}
