//! Minimal CSV output: fixed headers, `{:.16e}` numbers (17 significant
//! digits), `'\n'` line endings.

use std::fmt::Write;

use crate::catmap::DenominatorStats;
use crate::experiments::{NontrapRow, SweepRow};

pub const TRAPPED_HEADER: &str = "N,h,k,re,im,modulus,target,abs_err";
pub const NONTRAP_HEADER: &str = "N,h,top_modulus,slope_vs_prev";
pub const CLASSICAL_HEADER: &str = "q,num_orbits,min_orbit_max_norm,all_escape";

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trapped_csv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{TRAPPED_HEADER}").unwrap();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.n,
            num(r.h),
            r.k,
            num(r.re),
            num(r.im),
            num(r.modulus),
            num(r.target),
            num(r.abs_err)
        )
        .unwrap();
    }
    out
}

pub fn nontrapping_csv(rows: &[NontrapRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{NONTRAP_HEADER}").unwrap();
    for r in rows {
        let slope = r.slope_vs_prev.map(num).unwrap_or_default();
        writeln!(out, "{},{},{},{}", r.n, num(r.h), num(r.top_modulus), slope).unwrap();
    }
    out
}

/// `all_escape` is cumulative: true iff no witness was found for any
/// denominator up to this row.
pub fn classical_csv(stats: &[DenominatorStats]) -> String {
    let mut out = String::new();
    writeln!(out, "{CLASSICAL_HEADER}").unwrap();
    let mut escaped = true;
    for s in stats {
        escaped &= s.all_escape();
        let min = if s.min_orbit_max_norm.is_finite() {
            num(s.min_orbit_max_norm)
        } else {
            String::new()
        };
        writeln!(out, "{},{},{},{}", s.q, s.num_orbits, min, escaped).unwrap();
    }
    out
}
