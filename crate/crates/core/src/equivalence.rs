//! The equivalence `a ~ b`: for every `k`, `a ∪ k` is consistent exactly when
//! `b ∪ k` is.
//!
//! Two deciders are provided. [`equivalent_bruteforce`] walks every `k` and is
//! the ground truth. [`equivalent`] compares signatures, the sets of maximal
//! consistent sets containing each side: if `M ⊇ a` but `M ⊉ b` then `k = M`
//! separates them, and conversely equal signatures give equal answers for
//! every `k`. The two are cross-checked in the test suites.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::space::{ExhaustiveCap, Space};
use crate::subset::{subsets_canonical, Subset};

/// The maximal consistent sets containing a subset, in the space's canonical
/// maximal-set order. Empty exactly for inconsistent subsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(Vec<Subset>);

impl Signature {
    pub fn sets(&self) -> &[Subset] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_subset_of(&self, other: &Signature) -> bool {
        self.0.iter().all(|m| other.0.contains(m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    /// Smallest member in canonical order.
    pub representative: Subset,
    /// All members, canonically ordered.
    pub members: Vec<Subset>,
    pub signature: Signature,
}

pub fn signature(space: &Space, a: &Subset) -> Result<Signature> {
    space.check_width(a)?;
    Ok(signature_unchecked(space, a))
}

pub(crate) fn signature_unchecked(space: &Space, a: &Subset) -> Signature {
    Signature(
        space
            .maximal_consistent_sets()
            .iter()
            .filter(|m| a.is_subset_of(m))
            .copied()
            .collect(),
    )
}

/// Signature comparison; runs in `O(|maximal|)` word operations.
pub fn equivalent(space: &Space, a: &Subset, b: &Subset) -> Result<bool> {
    space.check_width(a)?;
    space.check_width(b)?;
    Ok(equiv(space, a, b))
}

#[inline]
pub(crate) fn equiv(space: &Space, a: &Subset, b: &Subset) -> bool {
    space
        .maximal_consistent_sets()
        .iter()
        .all(|m| a.is_subset_of(m) == b.is_subset_of(m))
}

/// Checks the definition directly over all `2^|X|` choices of `k`.
pub fn equivalent_bruteforce(space: &Space, a: &Subset, b: &Subset, cap: ExhaustiveCap) -> Result<bool> {
    space.check_width(a)?;
    space.check_width(b)?;
    cap.check(space.len(), "brute-force equivalence")?;
    let n = space.len();
    Ok((0..1u64 << n).all(|mask| {
        let k = Subset::from_mask(n, mask);
        space.consistent(&a.union(&k)) == space.consistent(&b.union(&k))
    }))
}

/// A set `k` on which `a ∪ k` and `b ∪ k` differ in consistency, or `None`
/// when `a ~ b`.
///
/// Within the cap this is the canonically smallest such `k`; beyond it, a
/// maximal set in the symmetric difference of the signatures is returned.
pub fn distinguishing_kappa(space: &Space, a: &Subset, b: &Subset, cap: ExhaustiveCap) -> Option<Subset> {
    if equiv(space, a, b) {
        return None;
    }
    if cap.admits(space.len()) {
        subsets_canonical(space.len(), None).find(|k| space.consistent(&a.union(k)) != space.consistent(&b.union(k)))
    } else {
        space
            .maximal_consistent_sets()
            .iter()
            .find(|m| a.is_subset_of(m) != b.is_subset_of(m))
            .copied()
    }
}

/// Partitions every subset with at most `max_size` members into classes.
/// Classes are ordered by representative.
pub fn classes(space: &Space, max_size: Option<usize>, cap: ExhaustiveCap) -> Result<Vec<EquivalenceClass>> {
    cap.check(space.len(), "equivalence classes")?;
    let mut by_sig: BTreeMap<Signature, Vec<Subset>> = BTreeMap::new();
    for s in subsets_canonical(space.len(), max_size) {
        by_sig.entry(signature_unchecked(space, &s)).or_default().push(s);
    }
    let mut out: Vec<EquivalenceClass> = by_sig
        .into_iter()
        .map(|(signature, members)| EquivalenceClass {
            representative: members[0],
            members,
            signature,
        })
        .collect();
    out.sort_by_key(|a| a.representative);
    Ok(out)
}
