use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Distributional classes of e-variables.
///
/// All variants are subsets of the class `E0` of all e-variables. The `L*`
/// variants constrain `log E`, the `Lc*` variants ask for a log-concave
/// density, survival function or cdf of `E` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "&'static str")]
pub enum EClass {
    /// Every e-variable (Markov's inequality only).
    E0,
    /// Decreasing density on the support.
    D,
    /// Decreasing density on `[1, ∞)`.
    DGt1,
    /// Unimodal density on `[0, ∞)`.
    U,
    /// `log E` symmetric.
    Ls,
    /// `log E` unimodal.
    Lu,
    /// `log E` has a decreasing density on `[0, ∞)`.
    LdGt0,
    /// `log E` has a decreasing density.
    Ld,
    /// `log E` unimodal and symmetric.
    Lus,
    /// `E` log-normal.
    Ln,
    /// Log-concave density.
    Lcd,
    /// Log-concave survival function (increasing hazard rate).
    Lcs,
    /// Log-concave distribution function.
    Lcf,
}

/// Direct inclusions `(sub, sup)`; the full order is their transitive
/// closure plus `X ⊆ E0` for every class.
const INCLUSIONS: &[(EClass, EClass)] = &[
    (EClass::D, EClass::DGt1),
    (EClass::D, EClass::U),
    (EClass::Ln, EClass::Lus),
    (EClass::Lus, EClass::Ls),
    (EClass::Ld, EClass::LdGt0),
    (EClass::Lcd, EClass::Lcs),
    (EClass::Lcd, EClass::Lcf),
    (EClass::Lcd, EClass::U),
    (EClass::D, EClass::Lcf),
    (EClass::LdGt0, EClass::DGt1),
];

impl EClass {
    pub const ALL: [EClass; 13] = [
        EClass::E0,
        EClass::D,
        EClass::DGt1,
        EClass::U,
        EClass::Ls,
        EClass::Lu,
        EClass::LdGt0,
        EClass::Ld,
        EClass::Lus,
        EClass::Ln,
        EClass::Lcd,
        EClass::Lcs,
        EClass::Lcf,
    ];

    /// Short name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            EClass::E0 => "E0",
            EClass::D => "D",
            EClass::DGt1 => "DGT1",
            EClass::U => "U",
            EClass::Ls => "LS",
            EClass::Lu => "LU",
            EClass::LdGt0 => "LDGT0",
            EClass::Ld => "LD",
            EClass::Lus => "LUS",
            EClass::Ln => "LN",
            EClass::Lcd => "LCD",
            EClass::Lcs => "LCS",
            EClass::Lcf => "LCF",
        }
    }

    /// Whether `self ⊆ other` in the encoded inclusion order (reflexive).
    pub fn is_subset_of(self, other: EClass) -> bool {
        if self == other || other == EClass::E0 {
            return true;
        }
        let mut stack = vec![self];
        let mut seen = Vec::new();
        while let Some(c) = stack.pop() {
            if c == other {
                return true;
            }
            if seen.contains(&c) {
                continue;
            }
            seen.push(c);
            stack.extend(
                INCLUSIONS
                    .iter()
                    .filter(|(sub, _)| *sub == c)
                    .map(|&(_, sup)| sup),
            );
        }
        false
    }

    /// Classes for which only an upper bound on the worst-case error is
    /// known.
    pub fn is_conservative(self) -> bool {
        matches!(self, EClass::Lus | EClass::Ld | EClass::Lcd)
    }
}

impl fmt::Display for EClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl From<EClass> for &'static str {
    fn from(c: EClass) -> Self {
        c.name()
    }
}

impl TryFrom<String> for EClass {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for EClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '_' | '-' | ' '))
            .collect::<String>()
            .to_ascii_uppercase();
        let class = match norm.as_str() {
            "E0" | "E" => EClass::E0,
            "D" => EClass::D,
            "DGT1" | "D>1" => EClass::DGt1,
            "U" => EClass::U,
            "LS" => EClass::Ls,
            "LU" => EClass::Lu,
            "LDGT0" | "LD>0" => EClass::LdGt0,
            "LD" => EClass::Ld,
            "LUS" => EClass::Lus,
            "LN" => EClass::Ln,
            "LCD" => EClass::Lcd,
            "LCS" => EClass::Lcs,
            "LCF" => EClass::Lcf,
            _ => return Err(Error::Invalid(format!("unknown e-value class `{s}`"))),
        };
        Ok(class)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in EClass::ALL {
            assert_eq!(c.name().parse::<EClass>().unwrap(), c);
        }
        assert_eq!("ld>0".parse::<EClass>().unwrap(), EClass::LdGt0);
        assert!("XYZ".parse::<EClass>().is_err());
    }

    #[test]
    fn listed_inclusions_hold() {
        for &(a, b) in INCLUSIONS {
            assert!(a.is_subset_of(b), "{a} ⊆ {b}");
        }
        for c in EClass::ALL {
            assert!(c.is_subset_of(EClass::E0));
            assert!(c.is_subset_of(c));
        }
    }

    #[test]
    fn transitive_and_not_symmetric() {
        assert!(EClass::Ln.is_subset_of(EClass::Ls));
        assert!(EClass::Ld.is_subset_of(EClass::DGt1));
        assert!(!EClass::U.is_subset_of(EClass::D));
        assert!(!EClass::E0.is_subset_of(EClass::D));
        assert!(!EClass::Lcs.is_subset_of(EClass::Lcd));
    }
}
