use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default order cap for complete-monotonicity labels given without one.
pub const DEFAULT_ORDER_CAP: usize = 5;

/// A property a function on a cone may have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyLabel {
    /// `Φ(x+y) ≤ Φ(x) + Φ(y)`
    Subadd,
    /// `Φ(x+y) ≥ Φ(x) + Φ(y)`
    Superadd,
    /// Subadditive with nonpositive second differences.
    StrongSubadd,
    /// Superadditive with nonnegative second differences.
    StrongSuperadd,
    SecondDiffNonneg,
    SecondDiffNonpos,
    /// `Φ(x∨y) + Φ(x∧y) ≤ Φ(x) + Φ(y)`
    Submodular,
    Supermodular,
    /// `(−1)^k Δ_{x₁}⋯Δ_{x_k} Φ ≥ 0` for `k ≤ order_cap`, and `Φ ≥ 0`.
    CompletelyMonotone { order_cap: usize },
    /// Nonnegative second differences along comonotone pairs `x, y`.
    ComonotoneStrongSuperadd,
}

impl PropertyLabel {
    pub const ALL_NAMES: [&'static str; 10] = [
        "SUBADD",
        "SUPERADD",
        "STRONG_SUBADD",
        "STRONG_SUPERADD",
        "SECOND_DIFF_NONNEG",
        "SECOND_DIFF_NONPOS",
        "SUBMODULAR",
        "SUPERMODULAR",
        "COMPLETELY_MONOTONE",
        "COMONOTONE_STRONG_SUPERADD",
    ];

    pub fn completely_monotone() -> Self {
        PropertyLabel::CompletelyMonotone {
            order_cap: DEFAULT_ORDER_CAP,
        }
    }

    /// The name without the order cap.
    pub fn name(&self) -> &'static str {
        match self {
            PropertyLabel::Subadd => "SUBADD",
            PropertyLabel::Superadd => "SUPERADD",
            PropertyLabel::StrongSubadd => "STRONG_SUBADD",
            PropertyLabel::StrongSuperadd => "STRONG_SUPERADD",
            PropertyLabel::SecondDiffNonneg => "SECOND_DIFF_NONNEG",
            PropertyLabel::SecondDiffNonpos => "SECOND_DIFF_NONPOS",
            PropertyLabel::Submodular => "SUBMODULAR",
            PropertyLabel::Supermodular => "SUPERMODULAR",
            PropertyLabel::CompletelyMonotone { .. } => "COMPLETELY_MONOTONE",
            PropertyLabel::ComonotoneStrongSuperadd => "COMONOTONE_STRONG_SUPERADD",
        }
    }

    /// Labels that follow from this one by definition.
    pub fn implied(&self) -> &'static [PropertyLabel] {
        match self {
            PropertyLabel::StrongSubadd => &[PropertyLabel::Subadd, PropertyLabel::SecondDiffNonpos],
            PropertyLabel::StrongSuperadd => {
                &[PropertyLabel::Superadd, PropertyLabel::SecondDiffNonneg]
            }
            _ => &[],
        }
    }

    /// Same property, ignoring the order cap.
    pub fn same_kind(&self, other: &PropertyLabel) -> bool {
        self.name() == other.name()
    }
}

impl fmt::Display for PropertyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyLabel::CompletelyMonotone { order_cap } => {
                write!(f, "COMPLETELY_MONOTONE(K={order_cap})")
            }
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for PropertyLabel {
    type Err = Error;

    /// Accepts `STRONG_SUBADD`, `strong-subadd` and, for complete
    /// monotonicity, an optional cap as `completely-monotone:7` or
    /// `COMPLETELY_MONOTONE(K=7)`.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        let (head, cap) = split_cap(&norm).ok_or_else(|| unknown(s))?;
        let label = match head {
            "SUBADD" => PropertyLabel::Subadd,
            "SUPERADD" => PropertyLabel::Superadd,
            "STRONG_SUBADD" => PropertyLabel::StrongSubadd,
            "STRONG_SUPERADD" => PropertyLabel::StrongSuperadd,
            "SECOND_DIFF_NONNEG" => PropertyLabel::SecondDiffNonneg,
            "SECOND_DIFF_NONPOS" => PropertyLabel::SecondDiffNonpos,
            "SUBMODULAR" => PropertyLabel::Submodular,
            "SUPERMODULAR" => PropertyLabel::Supermodular,
            "COMPLETELY_MONOTONE" | "CM" => PropertyLabel::CompletelyMonotone {
                order_cap: cap.unwrap_or(DEFAULT_ORDER_CAP),
            },
            "COMONOTONE_STRONG_SUPERADD" => PropertyLabel::ComonotoneStrongSuperadd,
            _ => return Err(unknown(s)),
        };
        if cap.is_some() && !matches!(label, PropertyLabel::CompletelyMonotone { .. }) {
            return Err(unknown(s));
        }
        if let PropertyLabel::CompletelyMonotone { order_cap } = label {
            if order_cap == 0 || order_cap > crate::diff::MAX_ORDER {
                return Err(Error::param(
                    "order_cap",
                    format!("must lie in 1..={}", crate::diff::MAX_ORDER),
                ));
            }
        }
        Ok(label)
    }
}

fn split_cap(norm: &str) -> Option<(&str, Option<usize>)> {
    if let Some((head, rest)) = norm.split_once(':') {
        return Some((head, Some(rest.trim().parse().ok()?)));
    }
    if let Some((head, rest)) = norm.split_once('(') {
        let inner = rest.strip_suffix(')')?;
        let digits = inner.trim().trim_start_matches("K=").trim();
        return Some((head, Some(digits.parse().ok()?)));
    }
    Some((norm, None))
}

fn unknown(s: &str) -> Error {
    Error::param(
        "property",
        format!("unknown property `{s}`; expected one of {}", PropertyLabel::ALL_NAMES.join(", ")),
    )
}

impl Serialize for PropertyLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PropertyLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// How firmly a label is held.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelStatus {
    /// Claimed to hold; part of the must-pass suite.
    Asserted,
    /// Claimed in the literature but expected to fail; the refuter looks for
    /// a witness instead.
    RefutedCandidate,
}
