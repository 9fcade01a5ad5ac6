//! Constructors for the spaces the rest of the crate analyses.
//!
//! Every builder normalizes to the maximal-set form and returns only spaces
//! that pass validation.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{truth_table, Formula, LabeledFormula, TruthTable, MAX_VARS};
use crate::space::{Origin, Space};
use crate::subset::Subset;

pub const MAX_LITERAL_VARS: usize = 10;
pub const MAX_BOOLEAN_VARS: usize = 3;
pub const MAX_RANDOM_POINTS: usize = 20;
const RANDOM_ATTEMPTS: usize = 1000;

/// Names the variables of the full Boolean builders.
const BOOLEAN_VAR_NAMES: [&str; 3] = ["a", "b", "c"];

/// Declarative description of a space, used by campaigns and the CLI.
#[derive(Clone, Debug, PartialEq)]
pub enum BuilderConfig {
    Explicit {
        points: Vec<String>,
        maximal: Vec<Vec<String>>,
    },
    Literal {
        vars: usize,
    },
    Boolean {
        vars: usize,
    },
    Formulas(Vec<LabeledFormula>),
    Random {
        points: usize,
        maximal: usize,
        seed: u64,
    },
}

impl BuilderConfig {
    pub fn build(&self) -> Result<Space> {
        match self {
            BuilderConfig::Explicit { points, maximal } => build_explicit(points, maximal),
            BuilderConfig::Literal { vars } => build_literal(*vars),
            BuilderConfig::Boolean { vars } => build_full_boolean(*vars),
            BuilderConfig::Formulas(fs) => build_from_formulas(fs),
            BuilderConfig::Random { points, maximal, seed } => random_space(*points, *maximal, *seed),
        }
    }
}

fn in_range(what: &'static str, got: usize, min: usize, max: usize) -> Result<()> {
    if (min..=max).contains(&got) {
        Ok(())
    } else {
        Err(Error::OutOfRange { what, min, max, got })
    }
}

/// A space from labels and maximal sets given by label.
pub fn build_explicit<S: AsRef<str>>(points: &[S], maximal: &[Vec<S>]) -> Result<Space> {
    let labels: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
    let skeleton = Space::from_parts(labels.clone(), vec![], Origin::Explicit)?;
    let sets = maximal.iter().map(|m| skeleton.subset(m)).collect::<Result<Vec<_>>>()?;
    Space::new(labels, sets, Origin::Explicit)
}

/// The literal space on `n` variables: points `v1, not_v1, ..., vn, not_vn`,
/// a set being consistent when it holds no complementary pair.
pub fn build_literal(n: usize) -> Result<Space> {
    in_range("literal variable count", n, 1, MAX_LITERAL_VARS)?;
    let mut labels = Vec::with_capacity(2 * n);
    for i in 1..=n {
        labels.push(format!("v{i}"));
        labels.push(format!("not_v{i}"));
    }
    let width = 2 * n;
    let maximal = (0..1u64 << n)
        .map(|assignment| Subset::from_ids(width, (0..n).map(|i| 2 * i + usize::from(assignment >> i & 1 == 0))))
        .collect();
    Space::new(labels, maximal, Origin::Literal { vars: n })
}

/// The nonzero elements of the free Boolean algebra on `n` variables, in
/// point order, with their truth-table masks.
///
/// Each element is labeled by its shortest formula over `a`, `b`, `c` (ties
/// broken lexicographically), except the top element, which is labeled `1`.
/// Points are ordered by label length, then label.
pub fn full_boolean_elements(n: usize) -> Result<Vec<(String, u64)>> {
    in_range("boolean variable count", n, 1, MAX_BOOLEAN_VARS)?;
    let top = (1u64 << (1 << n)) - 1;
    let names = shortest_formulas(n);
    let mut elems: Vec<(String, u64)> = (1..=top)
        .map(|m| {
            let label = if m == top {
                "1".to_string()
            } else {
                names[m as usize].clone()
            };
            (label, m)
        })
        .collect();
    elems.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    Ok(elems)
}

/// The full Boolean space on `n` variables: every nonzero element is a point
/// and a set is consistent when the meet of its masks is nonzero.
pub fn build_full_boolean(n: usize) -> Result<Space> {
    let elems = full_boolean_elements(n)?;
    let width = elems.len();
    // The sets above each minterm are exactly the maximal consistent sets.
    let maximal = (0..1usize << n)
        .map(|minterm| {
            Subset::from_ids(
                width,
                elems
                    .iter()
                    .enumerate()
                    .filter(|(_, (_, m))| m >> minterm & 1 == 1)
                    .map(|(id, _)| id),
            )
        })
        .collect();
    let labels = elems.into_iter().map(|(l, _)| l).collect();
    Space::new(labels, maximal, Origin::Boolean { vars: n })
}

/// Shortest printed formula for every mask over `n <= 3` variables.
///
/// Relaxes `(mask, top precedence)` to a fixpoint. Composition is monotone in
/// (length, lexicographic) order, so the fixpoint is the true optimum.
fn shortest_formulas(n: usize) -> Vec<String> {
    const LEVELS: usize = 5;
    let size = 1usize << (1 << n);
    let top = (size - 1) as u64;
    let better = |cand: &str, cur: &Option<String>| match cur {
        None => true,
        Some(c) => (cand.len(), cand) < (c.len(), c.as_str()),
    };
    // exact[mask][p]: shortest string whose outermost operator has precedence p.
    let mut exact: Vec<[Option<String>; LEVELS]> = vec![Default::default(); size];
    for (i, name) in BOOLEAN_VAR_NAMES.iter().take(n).enumerate() {
        let mut m = 0u64;
        for j in 0..1u64 << n {
            if j >> i & 1 == 1 {
                m |= 1 << j;
            }
        }
        exact[m as usize][0] = Some(name.to_string());
    }
    let best_le = |exact: &Vec<[Option<String>; LEVELS]>, m: usize, level: usize| -> Option<String> {
        let mut best: Option<String> = None;
        for slot in exact[m].iter().take(level + 1).flatten() {
            if better(slot, &best) {
                best = Some(slot.clone());
            }
        }
        best
    };
    // (symbol, precedence, max left precedence, max right precedence, op)
    type Op = fn(u64, u64) -> u64;
    let ops: [(&str, usize, usize, usize, Op); 4] = [
        ("&", 1, 1, 0, |a, b| a & b),
        ("|", 2, 2, 1, |a, b| a | b),
        ("->", 3, 2, 3, |a, b| !a | b),
        ("<->", 4, 4, 3, |a, b| !(a ^ b)),
    ];
    loop {
        let mut changed = false;
        let snapshot: Vec<[Option<String>; LEVELS]> = exact.clone();
        let mut offer = |exact: &mut Vec<[Option<String>; LEVELS]>, m: u64, p: usize, s: String| {
            let slot = &mut exact[(m & top) as usize][p];
            if better(&s, slot) {
                *slot = Some(s);
                changed = true;
            }
        };
        for m in 0..size {
            if let Some(s) = best_le(&snapshot, m, 0) {
                offer(&mut exact, !(m as u64), 0, format!("!{s}"));
            }
            for s in snapshot[m][1..].iter().flatten() {
                offer(&mut exact, m as u64, 0, format!("({s})"));
            }
        }
        for &(sym, prec, left, right, op) in &ops {
            let lefts: Vec<(usize, String)> = (0..size)
                .filter_map(|m| best_le(&snapshot, m, left).map(|s| (m, s)))
                .collect();
            let rights: Vec<(usize, String)> = (0..size)
                .filter_map(|m| best_le(&snapshot, m, right).map(|s| (m, s)))
                .collect();
            for (ma, sa) in &lefts {
                for (mb, sb) in &rights {
                    let m = op(*ma as u64, *mb as u64);
                    let cur = &exact[(m & top) as usize][prec];
                    let len = sa.len() + sym.len() + sb.len();
                    if cur.as_ref().is_some_and(|c| c.len() < len) {
                        continue;
                    }
                    offer(&mut exact, m, prec, format!("{sa}{sym}{sb}"));
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..size)
        .map(|m| best_le(&exact, m, LEVELS - 1).unwrap_or_default())
        .collect()
}

/// One point per formula; a set of points is consistent when the conjunction
/// of their formulas is satisfiable.
///
/// Maximal sets come from assignments: each assignment contributes the set of
/// formulas it satisfies, and the antichain of those sets is kept.
pub fn build_from_formulas(formulas: &[LabeledFormula]) -> Result<Space> {
    if formulas.is_empty() {
        return Err(Error::Malformed("a formula space needs at least one formula".into()));
    }
    let vars = formula_vars(formulas.iter().map(|l| &l.formula));
    if vars.len() > MAX_VARS {
        return Err(Error::TooManyVariables(vars.len()));
    }
    let tables = formulas
        .iter()
        .map(|l| truth_table(&l.formula, &vars))
        .collect::<Result<Vec<TruthTable>>>()?;
    let width = formulas.len();
    let labels: Vec<String> = formulas.iter().map(|l| l.label.clone()).collect();
    // Surfaces duplicate labels and oversized lists before the assignment walk.
    Space::from_parts(labels.clone(), vec![], Origin::Formulas)?;

    let mut seen = HashSet::new();
    for j in 0..1usize << vars.len() {
        let m = Subset::from_ids(width, (0..width).filter(|&i| tables[i].bit(j)));
        if !m.is_empty() {
            seen.insert(m);
        }
    }
    Space::new(labels, seen.into_iter().collect(), Origin::Formulas)
}

/// Sorted union of the variables of `formulas`.
pub fn formula_vars<'a>(formulas: impl Iterator<Item = &'a Formula>) -> Vec<String> {
    let mut all = std::collections::BTreeSet::new();
    for f in formulas {
        all.extend(f.variables());
    }
    all.into_iter().collect()
}

/// A seeded random space: `num_maximal` proper subsets of the universe, each
/// of size between 1 and `|X| - 1`, resampled until they cover every point.
pub fn random_space(num_points: usize, num_maximal: usize, seed: u64) -> Result<Space> {
    in_range("random point count", num_points, 1, MAX_RANDOM_POINTS)?;
    if num_maximal == 0 {
        return Err(Error::OutOfRange {
            what: "random maximal-set count",
            min: 1,
            max: usize::MAX,
            got: 0,
        });
    }
    if num_points == 1 {
        return Err(Error::Generation(
            "a 1-point space cannot make its point consistent while keeping the universe inconsistent".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_ATTEMPTS {
        let sets: Vec<Subset> = (0..num_maximal)
            .map(|_| {
                let size = rng.random_range(1..num_points);
                Subset::from_ids(num_points, index::sample(&mut rng, num_points, size))
            })
            .collect();
        let covered = sets.iter().fold(Subset::empty(num_points), |acc, s| acc.union(s));
        if covered == Subset::full(num_points) {
            let labels = (1..=num_points).map(|i| format!("p{i}")).collect();
            return Space::new(
                labels,
                sets,
                Origin::Random {
                    points: num_points,
                    maximal: num_maximal,
                    seed,
                },
            );
        }
    }
    Err(Error::Generation(format!(
        "no covering family of {num_maximal} proper subsets of {num_points} points after {RANDOM_ATTEMPTS} attempts"
    )))
}

/// Labels of `space` keyed by mask, for full Boolean spaces.
pub fn boolean_label_map(n: usize) -> Result<BTreeMap<u64, String>> {
    Ok(full_boolean_elements(n)?.into_iter().map(|(l, m)| (m, l)).collect())
}
