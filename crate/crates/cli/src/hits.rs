//! Hit tables as CSV with exact integer columns.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use num_bigint::{BigInt, BigUint};
use paradox_core::{Dyadic, Formalism, Natural, ParadoxHit};

pub const HEADER: [&str; 11] =
    ["n", "j", "q", "C_num", "C_den", "E_num", "E_den", "d", "start_odd", "end_odd", "formalism"];

/// One CSV row; fractions are written in lowest terms.
pub fn hit_fields(h: &ParadoxHit) -> [String; 11] {
    let (c_num, c_den) = h.coefficient.to_parts();
    let (e_num, e_den) = h.remainder.to_parts();
    [
        h.n.to_string(),
        h.j.to_string(),
        h.q.to_string(),
        c_num.to_string(),
        c_den.to_string(),
        e_num.to_string(),
        e_den.to_string(),
        h.d.to_string(),
        u8::from(h.start_odd).to_string(),
        u8::from(h.end_odd).to_string(),
        h.formalism.to_string(),
    ]
}

fn exponent_of_two(den: &BigUint, what: &str) -> Result<u64> {
    let e = den.trailing_zeros().unwrap_or(0);
    if *den != BigUint::from(1u32) << e {
        bail!("{what} denominator {den} is not a power of two");
    }
    Ok(e)
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = rec.get(i).with_context(|| format!("missing column {}", HEADER[i]))?;
    raw.parse::<T>().map_err(|e| anyhow::anyhow!("column {}: {e}", HEADER[i]))
}

pub fn parse_hit(rec: &csv::StringRecord) -> Result<ParadoxHit> {
    if rec.len() != HEADER.len() {
        bail!("expected {} columns, found {}", HEADER.len(), rec.len());
    }
    let n: Natural = field(rec, 0)?;
    let c_den: BigUint = field(rec, 4)?;
    let e_num: BigInt = field(rec, 5)?;
    let e_den: BigUint = field(rec, 6)?;
    let d: BigInt = field(rec, 7)?;
    let formalism: Formalism = field::<String>(rec, 10)?.parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    let last = (BigInt::from(n.clone()) + &d).to_biguint().context("last term is negative")?;
    let e = exponent_of_two(&c_den, "coefficient")?;
    let hit = ParadoxHit {
        j: field(rec, 1)?,
        q: field(rec, 2)?,
        e,
        coefficient: Dyadic::new(field(rec, 3)?, e),
        remainder: Dyadic::new(e_num, exponent_of_two(&e_den, "remainder")?),
        start_odd: field::<u8>(rec, 8)? == 1,
        end_odd: field::<u8>(rec, 9)? == 1,
        n,
        last,
        d,
        formalism,
    };
    if hit.coefficient != Dyadic::coefficient(hit.q, hit.e) {
        bail!("row for n = {} has a coefficient other than 3^q / 2^e", hit.n);
    }
    let value = hit.coefficient.mul(&Dyadic::from_int(BigInt::from(hit.n.clone()))).add(&hit.remainder);
    if value != Dyadic::from_int(BigInt::from(hit.last.clone())) {
        bail!("row for n = {} violates C n + E = n + d", hit.n);
    }
    Ok(hit)
}

/// Writes the header and one row per hit. `preamble` lines are emitted
/// first as `#` comments.
pub fn write_hits<W: Write>(out: W, hits: &[ParadoxHit], preamble: &[String]) -> Result<()> {
    let mut out = out;
    for line in preamble {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for h in hits {
        w.write_record(hit_fields(h))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_hits<R: Read>(input: R) -> Result<Vec<ParadoxHit>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(HEADER) {
        bail!("unexpected header {:?}", header);
    }
    r.records()
        .enumerate()
        .map(|(i, rec)| parse_hit(&rec?).with_context(|| format!("data row {}", i + 1)))
        .collect()
}
