use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::connectives::ZMode;
use crate::error::{Error, Result};

/// The audited propositions. Statements are paraphrased in our own notation:
/// `neg x` is a negation of `x`, `->` is implication, `~` is equivalence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PropositionId {
    P01,
    P02,
    P03,
    P04,
    P05,
    P06,
    P07,
    P08,
    P09,
    P10,
    P11,
    P12,
    P13,
    P14,
    P15,
    P16,
}

/// What the bound variables of a proposition range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Domain {
    /// A single instance about the space itself.
    Space,
    /// Tuples of points, all combinations.
    Points,
    /// Ordered pairs of distinct points.
    DistinctPoints,
    /// Tuples from the bounded set domain.
    Sets,
}

use PropositionId::*;

impl PropositionId {
    pub const ALL: [PropositionId; 16] = [
        P01, P02, P03, P04, P05, P06, P07, P08, P09, P10, P11, P12, P13, P14, P15, P16,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            P01 => "P01",
            P02 => "P02",
            P03 => "P03",
            P04 => "P04",
            P05 => "P05",
            P06 => "P06",
            P07 => "P07",
            P08 => "P08",
            P09 => "P09",
            P10 => "P10",
            P11 => "P11",
            P12 => "P12",
            P13 => "P13",
            P14 => "P14",
            P15 => "P15",
            P16 => "P16",
        }
    }

    pub fn statement(&self) -> &'static str {
        match self {
            P01 => "the empty set is consistent",
            P02 => "if chi ~ gamma then chi ∪ kappa ~ gamma ∪ kappa",
            P03 => "a space built from a Boolean algebra is a Boolean consistency space",
            P04 => "any two negations of x are equivalent",
            P05 => "neg neg x ~ x",
            P06 => "{x, y, neg y} is inconsistent",
            P07 => "{x, y, neg y} ~ {x}",
            P08 => "{x} ~ {y} iff {neg x} ~ {neg y}",
            P09 => "x -> x",
            P10 => "x -> y and y -> x imply {x} ~ {y}",
            P11 => "{x} ~ {y} implies x -> y and y -> x",
            P12 => "x -> y and y -> z imply x -> z",
            P13 => "t -> x and t -> y imply t -> {x, y}",
            P14 => "x -> t and y -> t imply join(x, y) -> t",
            P15 => "x -> y iff neg y -> neg x",
            P16 => "x -> y implies {t, x} -> {t, y}",
        }
    }

    pub fn note(&self) -> Option<&'static str> {
        match self {
            P08 => Some("stated twice in the source; audited once"),
            P03 => Some("applies only to spaces whose origin is a Boolean algebra"),
            P07 => Some("instances with x = neg y are skipped as degenerate"),
            _ => None,
        }
    }

    /// Bound variables, in the order used for enumeration and for ordering
    /// counterexamples.
    pub fn variables(&self) -> &'static [&'static str] {
        match self {
            P01 | P03 => &[],
            P02 => &["chi", "gamma", "kappa"],
            P04 | P05 | P09 => &["x"],
            P06 | P07 | P08 | P10 | P11 | P15 => &["x", "y"],
            P12 => &["x", "y", "z"],
            P13 | P14 | P16 => &["x", "y", "t"],
        }
    }

    pub(crate) fn domain(&self) -> Domain {
        match self {
            P01 | P03 => Domain::Space,
            P02 => Domain::Sets,
            P06 | P07 => Domain::DistinctPoints,
            _ => Domain::Points,
        }
    }

    /// Whether auditing needs a walk over all subsets of the universe.
    pub fn needs_exhaustive(&self, mode: ZMode) -> bool {
        match self {
            P01 | P02 => false,
            P03 => true,
            _ => mode == ZMode::Subsets,
        }
    }
}

impl fmt::Display for PropositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropositionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        PropositionId::ALL
            .into_iter()
            .find(|p| p.as_str() == upper)
            .ok_or_else(|| Error::Malformed(format!("unknown proposition `{s}` (expected P01..P16)")))
    }
}

/// Parses a comma-separated list such as `P01,P07`.
pub fn parse_proposition_list(s: &str) -> Result<Vec<PropositionId>> {
    let mut out: Vec<PropositionId> = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}
