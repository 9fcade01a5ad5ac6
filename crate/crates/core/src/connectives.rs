//! Negation, implication, join and meet recovered from consistency alone.
//!
//! A point `y` negates a set `a` when
//!
//! 1. `a ∪ {y}` is inconsistent,
//! 2. whenever `a ∪ z` is inconsistent, `{y} ∪ z ~ z`, and
//! 3. whenever `{y} ∪ z` is inconsistent, `a ∪ z ~ z`.
//!
//! The range of `z` is selected by [`ZMode`]. Negations are only searched
//! among single points. `a → b` holds when `a` together with a negation of `b`
//! is inconsistent; the join of two points is the negation of their
//! negations; the meet of two sets is their union.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::equivalence::equiv;
use crate::error::{Error, Result};
use crate::space::{ExhaustiveCap, Space};
use crate::subset::Subset;

/// What `z` ranges over in the negation conditions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZMode {
    /// Singletons `{p}` for each point `p`.
    Elements,
    /// Every subset of the universe; needs the exhaustive cap.
    #[default]
    Subsets,
}

impl ZMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ZMode::Elements => "elements",
            ZMode::Subsets => "subsets",
        }
    }

    pub fn check(&self, space: &Space, cap: ExhaustiveCap) -> Result<()> {
        match self {
            ZMode::Elements => Ok(()),
            ZMode::Subsets => cap.check(space.len(), "negation search with z over all subsets"),
        }
    }
}

impl fmt::Display for ZMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ZMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "elements" => Ok(ZMode::Elements),
            "subsets" => Ok(ZMode::Subsets),
            other => Err(Error::Malformed(format!(
                "unknown z-mode `{other}` (expected `elements` or `subsets`)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegationResult {
    pub input: Subset,
    pub mode: ZMode,
    /// Point ids satisfying all three conditions, ascending.
    pub candidates: Vec<usize>,
    /// Every pair of candidates is equivalent as singletons.
    pub all_equivalent: bool,
    /// Lowest-id candidate.
    pub representative: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum TernaryVerdict {
    True,
    False,
    Undefined { reason: String },
}

impl TernaryVerdict {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            TernaryVerdict::True => Some(true),
            TernaryVerdict::False => Some(false),
            TernaryVerdict::Undefined { .. } => None,
        }
    }
}

/// Whether `y` absorbs into every `z` that `a` is inconsistent with, i.e.
/// condition 2 (and, with the roles swapped, condition 3).
fn absorbs(space: &Space, clash: &Subset, absorbed: &Subset, mode: ZMode) -> bool {
    let n = space.len();
    let holds = |z: &Subset| space.consistent(&clash.union(z)) || equiv(space, &absorbed.union(z), z);
    match mode {
        ZMode::Elements => (0..n).all(|p| holds(&space.singleton(p))),
        ZMode::Subsets => (0..1u64 << n).all(|mask| holds(&Subset::from_mask(n, mask))),
    }
}

/// Checks the three negation conditions for the point `y` against `a`.
pub fn is_negation(space: &Space, a: &Subset, y: usize, mode: ZMode, cap: ExhaustiveCap) -> Result<bool> {
    space.check_width(a)?;
    mode.check(space, cap)?;
    if y >= space.len() {
        return Err(Error::Malformed(format!("point id {y} out of range")));
    }
    Ok(negates(space, a, y, mode))
}

fn negates(space: &Space, a: &Subset, y: usize, mode: ZMode) -> bool {
    let ys = space.singleton(y);
    !space.consistent(&a.union(&ys)) && absorbs(space, a, &ys, mode) && absorbs(space, &ys, a, mode)
}

/// Scans every point for negations of `a`.
pub fn find_negations(space: &Space, a: &Subset, mode: ZMode, cap: ExhaustiveCap) -> Result<NegationResult> {
    space.check_width(a)?;
    mode.check(space, cap)?;
    let candidates: Vec<usize> = (0..space.len()).filter(|&y| negates(space, a, y, mode)).collect();
    let all_equivalent = candidates.iter().all(|&y1| {
        candidates
            .iter()
            .all(|&y2| equiv(space, &space.singleton(y1), &space.singleton(y2)))
    });
    Ok(NegationResult {
        input: *a,
        mode,
        representative: candidates.first().copied(),
        candidates,
        all_equivalent,
    })
}

/// `a → b` given the negation search result for `b`.
///
/// Every candidate must give the same answer; a disagreement would break the
/// equivalence with `k = a` and is reported as an invariant failure.
pub fn implies_given(space: &Space, a: &Subset, negation_of_b: &NegationResult) -> Result<TernaryVerdict> {
    let Some(rep) = negation_of_b.representative else {
        return Ok(TernaryVerdict::Undefined {
            reason: format!("no negation exists for {}", space.format_subset(&negation_of_b.input)),
        });
    };
    let verdict = |n: usize| !space.consistent(&a.with(n));
    let first = verdict(rep);
    if let Some(&other) = negation_of_b.candidates.iter().find(|&&n| verdict(n) != first) {
        return Err(Error::Invariant(format!(
            "negation candidates {} and {} of {} give different implication verdicts for {}",
            space.label(rep),
            space.label(other),
            space.format_subset(&negation_of_b.input),
            space.format_subset(a)
        )));
    }
    Ok(if first {
        TernaryVerdict::True
    } else {
        TernaryVerdict::False
    })
}

pub fn implies(space: &Space, a: &Subset, b: &Subset, mode: ZMode, cap: ExhaustiveCap) -> Result<TernaryVerdict> {
    space.check_width(a)?;
    let neg = find_negations(space, b, mode, cap)?;
    implies_given(space, a, &neg)
}

/// The negation of `{x̄, ȳ}`, using representatives throughout.
pub fn join(space: &Space, x: usize, y: usize, mode: ZMode, cap: ExhaustiveCap) -> Result<Option<usize>> {
    let Some(nx) = find_negations(space, &space.singleton(x), mode, cap)?.representative else {
        return Ok(None);
    };
    let Some(ny) = find_negations(space, &space.singleton(y), mode, cap)?.representative else {
        return Ok(None);
    };
    let both = space.singleton(nx).with(ny);
    Ok(find_negations(space, &both, mode, cap)?.representative)
}

/// Conjunction of two sets.
pub fn meet(a: &Subset, b: &Subset) -> Result<Subset> {
    if a.width() != b.width() {
        return Err(Error::WidthMismatch {
            expected: a.width(),
            found: b.width(),
        });
    }
    Ok(a.union(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum LubVerdict {
    Pass,
    Fail,
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LubEntry {
    pub t: usize,
    /// `x → t` and `y → t` imply `join(x, y) → t`.
    pub upper: LubVerdict,
    /// `t → x` and `t → y` imply `t → {x, y}`.
    pub lower: LubVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LubReport {
    pub x: usize,
    pub y: usize,
    pub join: Option<usize>,
    pub entries: Vec<LubEntry>,
}

impl LubReport {
    pub fn failures(&self) -> usize {
        self.entries
            .iter()
            .flat_map(|e| [&e.upper, &e.lower])
            .filter(|v| **v == LubVerdict::Fail)
            .count()
    }

    pub fn skips(&self) -> usize {
        self.entries
            .iter()
            .flat_map(|e| [&e.upper, &e.lower])
            .filter(|v| matches!(v, LubVerdict::Skipped { .. }))
            .count()
    }
}

fn implication_law(premises: [TernaryVerdict; 2], conclusion: TernaryVerdict) -> LubVerdict {
    let mut values = Vec::with_capacity(3);
    for v in premises.into_iter().chain([conclusion]) {
        match v {
            TernaryVerdict::Undefined { reason } => return LubVerdict::Skipped { reason },
            other => values.push(other.as_bool() == Some(true)),
        }
    }
    if values[0] && values[1] && !values[2] {
        LubVerdict::Fail
    } else {
        LubVerdict::Pass
    }
}

/// Checks, for every point `t`, that a common upper bound of `x` and `y` is
/// above `join(x, y)` and that a common lower bound is below `{x, y}`.
pub fn lub_check(space: &Space, x: usize, y: usize, mode: ZMode, cap: ExhaustiveCap) -> Result<LubReport> {
    mode.check(space, cap)?;
    let joined = join(space, x, y, mode, cap)?;
    let (xs, ys) = (space.singleton(x), space.singleton(y));
    let neg_x = find_negations(space, &xs, mode, cap)?;
    let neg_y = find_negations(space, &ys, mode, cap)?;
    let neg_xy = find_negations(space, &xs.union(&ys), mode, cap)?;
    let mut entries = Vec::with_capacity(space.len());
    for t in 0..space.len() {
        let ts = space.singleton(t);
        let neg_t = find_negations(space, &ts, mode, cap)?;
        let upper = match joined {
            None => LubVerdict::Skipped {
                reason: format!("join of {} and {} is undefined", space.label(x), space.label(y)),
            },
            Some(j) => implication_law(
                [implies_given(space, &xs, &neg_t)?, implies_given(space, &ys, &neg_t)?],
                implies_given(space, &space.singleton(j), &neg_t)?,
            ),
        };
        let lower = implication_law(
            [implies_given(space, &ts, &neg_x)?, implies_given(space, &ts, &neg_y)?],
            implies_given(space, &ts, &neg_xy)?,
        );
        entries.push(LubEntry { t, upper, lower });
    }
    Ok(LubReport {
        x,
        y,
        join: joined,
        entries,
    })
}
