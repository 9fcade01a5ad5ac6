//! Minimal inconsistent sets and recognition of Boolean consistency spaces.
//!
//! A Boolean consistency space is one whose minimal inconsistent sets are
//! disjoint doubletons covering the universe, with the consistent sets being
//! exactly those that contain no complete doubleton, and in which all minimal
//! inconsistent supersets of a consistent set are equivalent.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::equivalence::equiv;
use crate::error::Result;
use crate::space::{ExhaustiveCap, Space};
use crate::subset::{subsets_canonical, Subset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalInconsistentFamily {
    /// Canonically ordered antichain.
    pub sets: Vec<Subset>,
    /// False when the search stopped early because of the cap.
    pub complete: bool,
}

impl MinimalInconsistentFamily {
    /// Whether `a` contains a member, i.e. is inconsistent when the family is
    /// complete.
    pub fn covers(&self, a: &Subset) -> bool {
        self.sets.iter().any(|m| m.is_subset_of(a))
    }
}

/// Size-ordered search: a set is kept when it is inconsistent and contains
/// none of the sets already kept.
fn search(space: &Space, base: &Subset, max_extra: usize) -> Vec<Subset> {
    let free: Vec<usize> = base.complement().iter().collect();
    let mut found: Vec<Subset> = Vec::new();
    for extra in subsets_canonical(free.len(), Some(max_extra)) {
        let s = extra.iter().fold(*base, |acc, i| acc.with(free[i]));
        if !found.iter().any(|m| m.is_subset_of(&s)) && !space.consistent(&s) {
            found.push(s);
        }
    }
    found
}

/// Largest `k` such that all subsets of size at most `k` of an `n`-set number
/// no more than `2^cap`.
fn affordable_size(n: usize, cap: ExhaustiveCap) -> usize {
    let budget = 1u128 << cap.get();
    let (mut total, mut layer) = (0u128, 1u128);
    for k in 0..=n {
        total += layer;
        if total > budget {
            return k.saturating_sub(1);
        }
        layer = layer * (n - k) as u128 / (k + 1) as u128;
    }
    n
}

/// All minimal inconsistent sets.
///
/// Beyond the cap the search either refuses or, when `partial` is set, covers
/// as many size layers as `2^cap` subsets allow and reports `complete = false`.
pub fn minimal_inconsistent_sets(
    space: &Space,
    cap: ExhaustiveCap,
    partial: bool,
) -> Result<MinimalInconsistentFamily> {
    let n = space.len();
    if cap.admits(n) {
        return Ok(MinimalInconsistentFamily {
            sets: search(space, &space.empty(), n),
            complete: true,
        });
    }
    if !partial {
        cap.check(n, "minimal inconsistent set enumeration")?;
    }
    let k = affordable_size(n, cap);
    Ok(MinimalInconsistentFamily {
        sets: search(space, &space.empty(), k),
        complete: k == n,
    })
}

/// The minimal inconsistent sets containing `base`.
pub fn minimal_inconsistent_supersets(space: &Space, base: &Subset, cap: ExhaustiveCap) -> Result<Vec<Subset>> {
    space.check_width(base)?;
    let free = space.len() - base.len();
    cap.check(free, "minimal inconsistent superset enumeration")?;
    Ok(search(space, base, free))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckVerdict {
    pub passed: bool,
    /// Offending sets, as label lists, when the check failed.
    pub witness: Vec<Vec<String>>,
    pub message: String,
}

impl CheckVerdict {
    fn pass(message: impl Into<String>) -> Self {
        CheckVerdict {
            passed: true,
            witness: Vec::new(),
            message: message.into(),
        }
    }

    fn fail(space: &Space, witness: &[Subset], message: impl Into<String>) -> Self {
        CheckVerdict {
            passed: false,
            witness: witness.iter().map(|s| space.labels_of(s)).collect(),
            message: message.into(),
        }
    }
}

/// How the exactness condition is read; reported alongside the verdicts.
pub const EXACTNESS_READING: &str = "consistent sets are taken to be exactly the sets containing no complete doubleton";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BooleanDetectReport {
    pub is_boolean: bool,
    pub doubleton_check: CheckVerdict,
    pub disjoint_check: CheckVerdict,
    pub cover_check: CheckVerdict,
    pub exactness_check: CheckVerdict,
    pub equiv_supersets_check: CheckVerdict,
    /// Every inconsistent set is equivalent to every other, so the last
    /// check cannot fail.
    pub equiv_supersets_vacuous: bool,
    pub exactness_reading: &'static str,
    /// Each point's mate, in both directions; empty unless `is_boolean`.
    pub pairing: BTreeMap<String, String>,
    pub minimal_inconsistent: Vec<Vec<String>>,
}

/// Runs the five conditions in order. Every condition is evaluated even
/// after an earlier one fails.
pub fn detect_boolean(space: &Space, cap: ExhaustiveCap) -> Result<BooleanDetectReport> {
    cap.check(space.len(), "Boolean space detection")?;
    let family = minimal_inconsistent_sets(space, cap, false)?;
    let sets = &family.sets;

    let doubleton_check = match sets.iter().find(|s| s.len() != 2) {
        Some(s) => CheckVerdict::fail(
            space,
            &[*s],
            format!("minimal inconsistent set of size {} is not a doubleton", s.len()),
        ),
        None => CheckVerdict::pass("every minimal inconsistent set is a doubleton"),
    };

    let overlap = sets
        .iter()
        .enumerate()
        .find_map(|(i, a)| sets[i + 1..].iter().find(|b| a.intersects(b)).map(|b| (*a, *b)));
    let disjoint_check = match overlap {
        Some((a, b)) => CheckVerdict::fail(space, &[a, b], "minimal inconsistent sets overlap"),
        None => CheckVerdict::pass("minimal inconsistent sets are pairwise disjoint"),
    };

    let covered = sets.iter().fold(space.empty(), |acc, s| acc.union(s));
    let uncovered = covered.complement();
    let cover_check = if uncovered.is_empty() {
        CheckVerdict::pass("minimal inconsistent sets cover every point")
    } else {
        CheckVerdict::fail(space, &[uncovered], "points outside every minimal inconsistent set")
    };

    let doubletons: Vec<Subset> = sets.iter().filter(|s| s.len() == 2).copied().collect();
    let mismatch = subsets_canonical(space.len(), None)
        .find(|a| space.consistent(a) == doubletons.iter().any(|d| d.is_subset_of(a)));
    let exactness_check = match mismatch {
        Some(a) => CheckVerdict::fail(
            space,
            &[a],
            if space.consistent(&a) {
                "consistent set contains a complete doubleton"
            } else {
                "inconsistent set contains no complete doubleton"
            },
        ),
        None => CheckVerdict::pass("consistent sets are exactly the doubleton-free sets"),
    };

    let mut equiv_failure = None;
    'outer: for a in space.enumerate_consistent(None, cap)? {
        let sups = minimal_inconsistent_supersets(space, &a, cap)?;
        for (i, s) in sups.iter().enumerate() {
            if let Some(t) = sups[i + 1..].iter().find(|t| !equiv(space, s, t)) {
                equiv_failure = Some([a, *s, *t]);
                break 'outer;
            }
        }
    }
    let equiv_supersets_check = match equiv_failure {
        Some(w) => CheckVerdict::fail(
            space,
            &w,
            "a consistent set has inequivalent minimal inconsistent supersets",
        ),
        None => CheckVerdict::pass("minimal inconsistent supersets of each consistent set are equivalent"),
    };
    let full = space.full();
    let equiv_supersets_vacuous = subsets_canonical(space.len(), None)
        .filter(|a| !space.consistent(a))
        .all(|a| equiv(space, &a, &full));

    let is_boolean = [
        &doubleton_check,
        &disjoint_check,
        &cover_check,
        &exactness_check,
        &equiv_supersets_check,
    ]
    .iter()
    .all(|c| c.passed);
    let mut pairing = BTreeMap::new();
    if is_boolean {
        for d in sets {
            let (p, q) = (d.to_vec()[0], d.to_vec()[1]);
            pairing.insert(space.label(p).to_string(), space.label(q).to_string());
            pairing.insert(space.label(q).to_string(), space.label(p).to_string());
        }
    }
    Ok(BooleanDetectReport {
        is_boolean,
        doubleton_check,
        disjoint_check,
        cover_check,
        exactness_check,
        equiv_supersets_check,
        equiv_supersets_vacuous,
        exactness_reading: EXACTNESS_READING,
        pairing,
        minimal_inconsistent: sets.iter().map(|s| space.labels_of(s)).collect(),
    })
}
