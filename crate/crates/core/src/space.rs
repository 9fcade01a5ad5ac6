//! The consistency-space data model.
//!
//! A space is a finite universe of labeled points together with the family of
//! consistent subsets. The family is stored through its maximal members: a set
//! is consistent exactly when it lies under one of them, so closure under
//! subsets never has to be checked.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::{subsets_canonical, Subset, MAX_POINTS};

/// A point of the universe. Ids are contiguous from zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub id: usize,
    pub label: String,
}

/// How a space was produced. Only recorded as metadata; it never changes the
/// consistency predicate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    #[default]
    Explicit,
    Literal {
        vars: usize,
    },
    Boolean {
        vars: usize,
    },
    Formulas,
    Random {
        points: usize,
        maximal: usize,
        seed: u64,
    },
}

impl Origin {
    /// Whether the points are elements of a Boolean algebra with consistency
    /// meaning a nonzero meet.
    pub fn from_boolean_algebra(&self) -> bool {
        matches!(self, Origin::Literal { .. } | Origin::Boolean { .. } | Origin::Formulas)
    }

    pub fn describe(&self) -> String {
        match self {
            Origin::Explicit => "explicit".into(),
            Origin::Literal { vars } => format!("literal(vars={vars})"),
            Origin::Boolean { vars } => format!("boolean(vars={vars})"),
            Origin::Formulas => "formulas".into(),
            Origin::Random { points, maximal, seed } => {
                format!("random(points={points}, maximal={maximal}, seed={seed})")
            }
        }
    }
}

/// Upper bound on the universe size for operations that walk all `2^|X|`
/// subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustiveCap(usize);

impl ExhaustiveCap {
    pub const DEFAULT: usize = 20;
    /// Beyond this even a single pass over the power set is out of reach.
    pub const HARD_LIMIT: usize = 30;

    pub fn new(points: usize) -> Result<Self> {
        if points > Self::HARD_LIMIT {
            return Err(Error::OutOfRange {
                what: "exhaustive cap",
                min: 0,
                max: Self::HARD_LIMIT,
                got: points,
            });
        }
        Ok(ExhaustiveCap(points))
    }

    pub fn get(&self) -> usize {
        self.0
    }

    pub fn admits(&self, points: usize) -> bool {
        points <= self.0
    }

    pub fn check(&self, points: usize, what: impl Into<String>) -> Result<()> {
        if self.admits(points) {
            Ok(())
        } else {
            Err(Error::CapExceeded {
                what: what.into(),
                points,
                cap: self.0,
            })
        }
    }
}

impl Default for ExhaustiveCap {
    fn default() -> Self {
        ExhaustiveCap(Self::DEFAULT)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// The universe must have at least one point.
    NonemptyUniverse,
    /// The full universe is inconsistent.
    Axiom1,
    /// Every singleton is consistent.
    Axiom2,
    /// The stored maximal sets form an antichain.
    Antichain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<String>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return writeln!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "  {:?}: {} [{}]", v.axiom, v.message, v.witness.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Space {
    points: Vec<Point>,
    maximal: Vec<Subset>,
    origin: Origin,
    index: HashMap<String, usize>,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.maximal == other.maximal && self.origin == other.origin
    }
}

impl Eq for Space {}

impl Space {
    /// Builds a space and rejects it unless it satisfies every axiom.
    ///
    /// `maximal` may contain dominated or repeated sets; they are dropped.
    pub fn new(labels: Vec<String>, maximal: Vec<Subset>, origin: Origin) -> Result<Space> {
        let space = Space::from_parts(labels, maximal, origin)?;
        let report = space.validate();
        if report.ok {
            Ok(space)
        } else {
            Err(Error::Invalid(report))
        }
    }

    /// Structural construction without the axiom checks, for inspecting
    /// broken inputs. Labels must still be unique and widths must match.
    pub fn from_parts(labels: Vec<String>, maximal: Vec<Subset>, origin: Origin) -> Result<Space> {
        if labels.len() > MAX_POINTS {
            return Err(Error::OutOfRange {
                what: "number of points",
                min: 1,
                max: MAX_POINTS,
                got: labels.len(),
            });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (id, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::Malformed("point labels must be nonempty".into()));
            }
            if index.insert(label.clone(), id).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        let width = labels.len();
        if let Some(bad) = maximal.iter().find(|m| m.width() != width) {
            return Err(Error::WidthMismatch {
                expected: width,
                found: bad.width(),
            });
        }
        let points = labels
            .into_iter()
            .enumerate()
            .map(|(id, label)| Point { id, label })
            .collect();
        Ok(Space {
            points,
            maximal: normalize_antichain(maximal),
            origin,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn label(&self, id: usize) -> &str {
        &self.points[id].label
    }

    pub fn point_id(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// The subset named by `labels`.
    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        let mut s = self.empty();
        for l in labels {
            s.insert(self.point_id(l.as_ref())?);
        }
        Ok(s)
    }

    pub fn empty(&self) -> Subset {
        Subset::empty(self.len())
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn singleton(&self, id: usize) -> Subset {
        Subset::singleton(self.len(), id)
    }

    /// Labels of the members of `s`, in id order.
    pub fn labels_of(&self, s: &Subset) -> Vec<String> {
        s.iter().map(|id| self.points[id].label.clone()).collect()
    }

    pub fn format_subset(&self, s: &Subset) -> String {
        format!("{{{}}}", self.labels_of(s).join(", "))
    }

    pub fn check_width(&self, s: &Subset) -> Result<()> {
        if s.width() == self.len() {
            Ok(())
        } else {
            Err(Error::WidthMismatch {
                expected: self.len(),
                found: s.width(),
            })
        }
    }

    /// The maximal consistent sets, ordered by size descending and then
    /// lexicographically.
    pub fn maximal_consistent_sets(&self) -> &[Subset] {
        &self.maximal
    }

    pub fn is_consistent(&self, a: &Subset) -> Result<bool> {
        self.check_width(a)?;
        Ok(self.consistent(a))
    }

    /// Unchecked form of [`Space::is_consistent`] for hot loops.
    #[inline]
    pub fn consistent(&self, a: &Subset) -> bool {
        self.maximal.iter().any(|m| a.is_subset_of(m))
    }

    /// Checks the axioms. Closure under subsets holds by representation.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.points.is_empty() {
            violations.push(Violation {
                axiom: Axiom::NonemptyUniverse,
                witness: vec![],
                message: "the universe has no points, so the empty set would have to be both consistent and the inconsistent universe".into(),
            });
        } else {
            let full = self.full();
            if let Some(m) = self.maximal.iter().find(|m| **m == full) {
                violations.push(Violation {
                    axiom: Axiom::Axiom1,
                    witness: self.labels_of(m),
                    message: "the full universe is consistent".into(),
                });
            }
        }
        let covered = self.maximal.iter().fold(self.empty(), |acc, m| acc.union(m));
        for p in &self.points {
            if !covered.contains(p.id) {
                violations.push(Violation {
                    axiom: Axiom::Axiom2,
                    witness: vec![p.label.clone()],
                    message: format!("singleton {{{}}} is inconsistent", p.label),
                });
            }
        }
        for (i, a) in self.maximal.iter().enumerate() {
            for (j, b) in self.maximal.iter().enumerate() {
                if i != j && a.is_subset_of(b) {
                    violations.push(Violation {
                        axiom: Axiom::Antichain,
                        witness: self.labels_of(a),
                        message: format!("maximal set is contained in {}", self.format_subset(b)),
                    });
                }
            }
        }
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    /// Every consistent set with at most `max_size` members, each exactly once,
    /// in canonical order.
    pub fn enumerate_consistent(
        &self,
        max_size: Option<usize>,
        cap: ExhaustiveCap,
    ) -> Result<impl Iterator<Item = Subset> + '_> {
        cap.check(self.len(), "enumerating consistent sets")?;
        Ok(subsets_canonical(self.len(), max_size).filter(move |s| self.consistent(s)))
    }
}

/// Drops repeated and dominated sets and sorts the survivors by size
/// descending, then lexicographically.
pub fn normalize_antichain(mut sets: Vec<Subset>) -> Vec<Subset> {
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut kept: Vec<Subset> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| s.is_subset_of(k)) {
            kept.push(s);
        }
    }
    kept
}
