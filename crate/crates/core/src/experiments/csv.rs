use std::io::{self, Write};

use crate::evaluation::RiskRecord;

pub const CSV_HEADER: &str =
    "scenario,p,n,target_cond,realized_cond,eta,estimator,trials,mean_loss,stderr_loss,seed";

const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` with 12 significant digits, positional when the exponent is
/// in `[-5, 12)` and scientific otherwise.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}").to_lowercase();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..]
        .parse()
        .expect("exponent of scientific format");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn format_row(r: &RiskRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.scenario,
        r.p,
        r.n,
        format_significant(r.target_cond),
        format_significant(r.realized_cond),
        format_significant(r.eta),
        r.estimator,
        r.trials,
        format_significant(r.mean_loss),
        format_significant(r.stderr_loss),
        r.seed
    )
}

/// Writes the header and one row per record. Unless `deterministic`, a
/// comment line with the generation time precedes the header.
pub fn write_csv<W: Write>(
    mut w: W,
    records: &[RiskRecord],
    deterministic: bool,
) -> io::Result<()> {
    if !deterministic {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(w, "# generated by cholcov at unix time {secs}")?;
    }
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", format_row(r))?;
    }
    w.flush()
}
