//! Census tables: an exact CSV form and a fixed-width text form whose
//! decimals are for reading only.

use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use paradox_core::dyadic::truncated_decimal;
use paradox_core::search::{Census, CensusRow};

pub const CENSUS_HEADER: [&str; 14] = [
    "j", "q", "C_num", "C_den", "N", "N_odd", "n_min", "n_max", "E_min_num", "E_min_den", "E_max_num", "E_max_den",
    "d_min", "d_max",
];

fn row_fields(r: &CensusRow) -> Vec<String> {
    let (c_num, c_den) = r.coefficient().to_parts();
    let (lo_num, lo_den) = r.e_min.to_parts();
    let (hi_num, hi_den) = r.e_max.to_parts();
    [
        r.j.to_string(),
        r.q.to_string(),
        c_num.to_string(),
        c_den.to_string(),
        r.count.to_string(),
        r.count_odd.to_string(),
        r.n_min.to_string(),
        r.n_max.to_string(),
        lo_num.to_string(),
        lo_den.to_string(),
        hi_num.to_string(),
        hi_den.to_string(),
        r.d_min.to_string(),
        r.d_max.to_string(),
    ]
    .into()
}

pub fn write_census_csv<W: Write>(out: W, census: &Census) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CENSUS_HEADER)?;
    for r in &census.rows {
        w.write_record(row_fields(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Text table with `decimals` places, truncated toward zero.
pub fn render_census(census: &Census, decimals: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>5} {:>4} {:>10} {:>5} {:>5} {:>13} {:>21} {:>11}",
        "j", "q", "C", "N", "N_odd", "n", "E", "d"
    );
    for r in &census.rows {
        let e = format!(
            "{} - {}",
            truncated_decimal(&r.e_min.to_rational(), decimals),
            truncated_decimal(&r.e_max.to_rational(), decimals)
        );
        let _ = writeln!(
            s,
            "{:>5} {:>4} {:>10} {:>5} {:>5} {:>13} {:>21} {:>11}",
            r.j,
            r.q,
            truncated_decimal(&r.coefficient().to_rational(), decimals + 1),
            r.count,
            r.count_odd,
            format!("{} - {}", r.n_min, r.n_max),
            e,
            format!("{} - {}", r.d_min, r.d_max),
        );
    }
    let _ = writeln!(s, "(decimals truncated toward zero; exact values in the census CSV)");
    s
}

/// One-line summary, e.g. `593 hits, 20 near-cycles, 550 distinct starts`.
pub fn summary_line(census: &Census) -> String {
    let s = &census.summary;
    let mut line = format!(
        "{} hits, {} near-cycles, {} distinct starts, {} even-even",
        s.total, s.near_cycles, s.distinct_starts, s.even_even
    );
    if let Some((d, n, last)) = &s.max_d {
        let _ = write!(line, ", max d = {d} ({n} -> {last})");
    }
    line
}
