//! Command-line companion to `paradox-core`: hit tables and checkpoints on
//! disk, block-parallel scans, reference record tables, reports, and the
//! reproduction scoreboard.

pub mod checkpoint;
pub mod commands;
pub mod dot;
pub mod hits;
pub mod paper;
pub mod report;
pub mod shard;
pub mod tables;

use anyhow::{bail, Context, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};

/// Parses a decimal number that may use `10^k` or `XeK` notation
/// (`1000000`, `10^6`, `1e6`, `2.8e19`, `1_000_000`) and must denote an
/// integer.
pub fn parse_natural(text: &str) -> Result<BigUint> {
    let value = parse_rational(text)?;
    if !value.is_integer() || value < BigRational::from_integer(0.into()) {
        bail!("{text:?} is not a non-negative integer");
    }
    Ok(value.to_integer().to_biguint().expect("checked non-negative"))
}

pub fn parse_u64(text: &str) -> Result<u64> {
    parse_natural(text)?.to_u64().with_context(|| format!("{text:?} does not fit in 64 bits"))
}

/// Parses `A`, `A.B`, `A^K`, `AeK`, `A.BeK` or `P/Q` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let clean: String = text.trim().chars().filter(|c| *c != '_').collect();
    let bad = || anyhow::anyhow!("cannot read {text:?} as a number");
    if let Some((p, q)) = clean.split_once('/') {
        let (p, q) = (parse_rational(p)?, parse_rational(q)?);
        if q == BigRational::from_integer(0.into()) {
            bail!("zero denominator in {text:?}");
        }
        return Ok(p / q);
    }
    if let Some((base, exp)) = clean.split_once('^') {
        let base = parse_rational(base)?;
        let exp: u32 = exp.parse().map_err(|_| bad())?;
        return Ok(Pow::pow(base, exp));
    }
    let (mantissa, exp) = match clean.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (clean.as_str(), 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num: num_bigint::BigInt = digits.parse().map_err(|_| bad())?;
    let shift = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(10.into());
    let scale = Pow::pow(ten, shift.unsigned_abs());
    let value = BigRational::from_integer(num);
    Ok(if shift >= 0 { value * scale } else { value / scale })
}

/// Parses `A..B` (inclusive) with either end in any [`parse_u64`] notation.
pub fn parse_range(text: &str) -> Result<(u64, u64)> {
    let (a, b) = text.split_once("..").with_context(|| format!("expected A..B, got {text:?}"))?;
    let (a, b) = (parse_u64(a)?, parse_u64(b.strip_prefix('=').unwrap_or(b))?);
    if a > b {
        bail!("empty range {text:?}");
    }
    Ok((a, b))
}
