//! The reference tables of thresholds and boosting factors, as CSV.

use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::ebh::{boost_lcs_ad, boost_lcs_pr};
use crate::error::{Error, Result};
use crate::merging::avg_threshold;
use crate::sim::format_sig;
use crate::threshold::{threshold, EClass, Kind};

/// Significance levels of the threshold tables.
pub const THRESHOLD_ALPHAS: [f64; 6] = [0.001, 0.01, 0.02, 0.05, 0.1, 0.2];
/// Significance levels of the boosting table.
pub const BOOST_ALPHAS: [f64; 4] = [0.01, 0.02, 0.05, 0.1];
/// Classes listed in the threshold table, in display order.
pub const THRESHOLD_CLASSES: [EClass; 11] = [
    EClass::E0,
    EClass::Ls,
    EClass::D,
    EClass::U,
    EClass::DGt1,
    EClass::Lcd,
    EClass::Lcs,
    EClass::Lus,
    EClass::Ld,
    EClass::LdGt0,
    EClass::Ln,
];
/// Numbers of averaged e-values in the averaging table.
pub const AVERAGE_COUNTS: [usize; 5] = [1, 2, 5, 10, 20];

/// Which reference table to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    /// Improved thresholds per class and level.
    Thresholds,
    /// Log-concave survival boosting bounds.
    Boosting,
    /// Thresholds for the average of independent decreasing-density
    /// e-values.
    Averages,
}

impl FromStr for Table {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Table::Thresholds),
            "2" => Ok(Table::Boosting),
            "7" => Ok(Table::Averages),
            _ => Err(Error::Invalid(format!(
                "unknown table `{s}`, expected 1, 2 or 7"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub class: EClass,
    pub alpha: f64,
    pub threshold: f64,
    pub kind: Kind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoostRow {
    pub alpha: f64,
    pub c1_ad: f64,
    pub c2_ad: f64,
    pub c1_pr: f64,
    pub c2_pr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageRow {
    pub t: usize,
    pub alpha: f64,
    pub threshold: f64,
}

pub fn threshold_table() -> Result<Vec<ThresholdRow>> {
    let mut rows = Vec::new();
    for class in THRESHOLD_CLASSES {
        for alpha in THRESHOLD_ALPHAS {
            let t = threshold(class, alpha)?;
            rows.push(ThresholdRow {
                class,
                alpha,
                threshold: t.value,
                kind: t.kind,
            });
        }
    }
    Ok(rows)
}

pub fn boost_table() -> Result<Vec<BoostRow>> {
    BOOST_ALPHAS
        .iter()
        .map(|&alpha| {
            let ad = boost_lcs_ad(alpha)?;
            let pr = boost_lcs_pr(alpha)?;
            Ok(BoostRow {
                alpha,
                c1_ad: ad.lower,
                c2_ad: ad.upper,
                c1_pr: pr.lower,
                c2_pr: pr.upper,
            })
        })
        .collect()
}

pub fn average_table() -> Result<Vec<AverageRow>> {
    let mut rows = Vec::new();
    for t in AVERAGE_COUNTS {
        for alpha in THRESHOLD_ALPHAS {
            rows.push(AverageRow {
                t,
                alpha,
                threshold: avg_threshold(t, alpha)?,
            });
        }
    }
    Ok(rows)
}

impl Table {
    /// Write the table as CSV with numbers at six significant digits.
    pub fn write_csv<W: Write>(self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        match self {
            Table::Thresholds => {
                w.write_record(["class", "alpha", "threshold", "kind"])?;
                for r in threshold_table()? {
                    w.write_record([
                        r.class.name().to_string(),
                        format_sig(r.alpha),
                        format_sig(r.threshold),
                        r.kind.to_string(),
                    ])?;
                }
            }
            Table::Boosting => {
                w.write_record(["alpha", "c1_ad", "c2_ad", "c1_pr", "c2_pr"])?;
                for r in boost_table()? {
                    w.write_record([r.alpha, r.c1_ad, r.c2_ad, r.c1_pr, r.c2_pr].map(format_sig))?;
                }
            }
            Table::Averages => {
                w.write_record(["t", "alpha", "threshold"])?;
                for r in average_table()? {
                    w.write_record([
                        r.t.to_string(),
                        format_sig(r.alpha),
                        format_sig(r.threshold),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_numbers() {
        assert_eq!("1".parse::<Table>().unwrap(), Table::Thresholds);
        assert_eq!("7".parse::<Table>().unwrap(), Table::Averages);
        assert!("3".parse::<Table>().is_err());
    }

    #[test]
    fn csv_shapes() {
        for (table, lines) in [
            (Table::Thresholds, 67),
            (Table::Boosting, 5),
            (Table::Averages, 31),
        ] {
            let mut buf = Vec::new();
            table.write_csv(&mut buf).unwrap();
            assert_eq!(String::from_utf8(buf).unwrap().lines().count(), lines);
        }
    }
}
