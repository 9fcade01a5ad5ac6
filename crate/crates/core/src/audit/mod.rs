//! Checks the propositions of the theory against concrete spaces.
//!
//! Each proposition is evaluated on every instantiation of its variables.
//! An instance whose statement needs a negation that does not exist is
//! counted as skipped, never as holding. A refuted proposition carries the
//! smallest failing instance, ordered by total binding size and then
//! lexicographically, which [`replay`] can re-check.

mod campaign;
mod checks;
mod registry;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use itertools::Itertools;
use serde::Serialize;
use serde_json::Value;

use crate::connectives::ZMode;
use crate::equivalence::signature_unchecked;
use crate::error::{Error, Result};
use crate::io::canonical_json;
use crate::space::{ExhaustiveCap, Origin, Space};
use crate::subset::{subsets_canonical, Subset};

use checks::{evaluate, Ctx, Failure, Outcome};
use registry::Domain;

pub use campaign::{
    audit_campaign, CampaignConfig, CampaignMember, CampaignReport, CampaignSummaryEntry, ModeDivergence,
    SpaceCounterexample,
};
pub use registry::{parse_proposition_list, PropositionId};

/// Set-valued variables range over every subset up to this many points.
pub const FULL_SET_DOMAIN_POINTS: usize = 6;
/// Above [`FULL_SET_DOMAIN_POINTS`], sets of at most this size plus the
/// maximal consistent sets.
pub const BOUNDED_SET_SIZE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Refuted,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Refuted => "refuted",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Variable name to the labels of its value.
    pub bindings: BTreeMap<String, Vec<String>>,
    /// Negations, joins and unions computed along the way.
    pub derived: BTreeMap<String, Vec<String>>,
    /// A set separating two sets that should have been equivalent.
    pub distinguishing: Option<Vec<String>>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropositionReport {
    pub id: PropositionId,
    pub statement: &'static str,
    pub note: Option<&'static str>,
    pub status: Status,
    pub instances_total: u64,
    pub instances_checked: u64,
    pub refuted_count: u64,
    pub skipped_count: u64,
    pub skip_reasons: BTreeMap<String, u64>,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceDescriptor {
    pub name: Option<String>,
    pub origin: Origin,
    pub points: usize,
    pub maximal_consistent: usize,
    pub labels: Vec<String>,
}

impl SpaceDescriptor {
    pub fn of(space: &Space, name: Option<String>) -> Self {
        SpaceDescriptor {
            name,
            origin: space.origin().clone(),
            points: space.len(),
            maximal_consistent: space.maximal_consistent_sets().len(),
            labels: space.labels_of(&space.full()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditConfig {
    pub z_mode: ZMode,
    pub max_points: usize,
    pub seed: Option<u64>,
    pub set_domain: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub space: SpaceDescriptor,
    pub config: AuditConfig,
    pub propositions: Vec<PropositionReport>,
}

impl AuditReport {
    pub fn get(&self, id: PropositionId) -> Option<&PropositionReport> {
        self.propositions.iter().find(|p| p.id == id)
    }

    pub fn to_json(&self) -> Value {
        canonical_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let name = self.space.name.as_deref().unwrap_or("space");
        let _ = writeln!(
            out,
            "audit of {name}: {} ({} points, {} maximal sets), z-mode {}, set domain: {}",
            self.space.origin.describe(),
            self.space.points,
            self.space.maximal_consistent,
            self.config.z_mode,
            self.config.set_domain
        );
        for p in &self.propositions {
            let _ = writeln!(
                out,
                "{} {:<7} checked {:>6}/{:<6} skipped {:>6}  {}",
                p.id,
                p.status.as_str(),
                p.instances_checked,
                p.instances_total,
                p.skipped_count,
                p.statement
            );
            for (reason, n) in &p.skip_reasons {
                let _ = writeln!(out, "    skip: {reason} ({n})");
            }
            if let Some(cx) = &p.counterexample {
                let binds = cx
                    .bindings
                    .iter()
                    .map(|(k, v)| format!("{k} = {{{}}}", v.join(",")))
                    .join(", ");
                if binds.is_empty() {
                    let _ = writeln!(out, "    counterexample (space-level):");
                } else {
                    let _ = writeln!(out, "    counterexample: {binds}");
                }
                for (k, v) in &cx.derived {
                    let _ = writeln!(out, "      {k} = {{{}}}", v.join(","));
                }
                if let Some(k) = &cx.distinguishing {
                    let _ = writeln!(out, "      distinguishing kappa = {{{}}}", k.join(","));
                }
                let _ = writeln!(out, "      {}", cx.detail);
            }
        }
        out
    }
}

/// The range of set-valued variables, with its description.
pub fn set_domain(space: &Space) -> (Vec<Subset>, String) {
    let n = space.len();
    if n <= FULL_SET_DOMAIN_POINTS {
        (subsets_canonical(n, None).collect(), "all subsets".into())
    } else {
        let mut sets: Vec<Subset> = subsets_canonical(n, Some(BOUNDED_SET_SIZE)).collect();
        sets.extend(
            space
                .maximal_consistent_sets()
                .iter()
                .filter(|m| m.len() > BOUNDED_SET_SIZE),
        );
        sets.sort();
        sets.dedup();
        (
            sets,
            format!("subsets of size <= {BOUNDED_SET_SIZE} plus the maximal consistent sets"),
        )
    }
}

struct Tally {
    total: u64,
    checked: u64,
    refuted: u64,
    skips: BTreeMap<String, u64>,
    /// Smallest failure so far, keyed by (total size, bindings).
    best: Option<((usize, Vec<Subset>), Failure)>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            total: 0,
            checked: 0,
            refuted: 0,
            skips: BTreeMap::new(),
            best: None,
        }
    }

    fn record(&mut self, vals: &[Subset], outcome: Outcome) {
        self.total += 1;
        match outcome {
            Outcome::Holds => self.checked += 1,
            Outcome::Skipped(reason) => *self.skips.entry(reason.to_string()).or_default() += 1,
            Outcome::Fails(f) => {
                self.checked += 1;
                self.refuted += 1;
                self.offer(vals, f);
            }
        }
    }

    fn offer(&mut self, vals: &[Subset], f: Failure) {
        let key = (vals.iter().map(Subset::len).sum(), vals.to_vec());
        if self.best.as_ref().is_none_or(|(k, _)| key < *k) {
            self.best = Some((key, f));
        }
    }

    fn finish(self, ctx: &Ctx, id: PropositionId) -> PropositionReport {
        let skipped_count = self.skips.values().sum();
        let status = if self.refuted > 0 {
            Status::Refuted
        } else if self.checked > 0 {
            Status::Holds
        } else {
            Status::Skipped
        };
        let counterexample = self.best.map(|((_, vals), f)| Counterexample {
            bindings: id
                .variables()
                .iter()
                .zip(&vals)
                .map(|(k, v)| (k.to_string(), ctx.space.labels_of(v)))
                .collect(),
            derived: f.derived,
            distinguishing: f.distinguishing.map(|k| ctx.space.labels_of(&k)),
            detail: f.detail,
        });
        PropositionReport {
            id,
            statement: id.statement(),
            note: id.note(),
            status,
            instances_total: self.total,
            instances_checked: self.checked,
            refuted_count: self.refuted,
            skipped_count,
            skip_reasons: self.skips,
            counterexample,
        }
    }
}

/// Congruence over the set domain, evaluated class by class: pairs that are
/// not equivalent hold trivially and are counted without being visited.
fn audit_congruence(ctx: &Ctx, domain: &[Subset], tally: &mut Tally) -> Result<()> {
    let space = ctx.space;
    let d = domain.len() as u64;
    let mut classes: HashMap<_, Vec<Subset>> = HashMap::new();
    for s in domain {
        classes.entry(signature_unchecked(space, s)).or_default().push(*s);
    }
    tally.total = d * d * d;
    tally.checked = tally.total;
    for kappa in domain {
        for members in classes.values().filter(|m| m.len() > 1) {
            let sigs: Vec<_> = members
                .iter()
                .map(|m| signature_unchecked(space, &m.union(kappa)))
                .collect();
            for (i, chi) in members.iter().enumerate() {
                for (j, gamma) in members.iter().enumerate() {
                    if sigs[i] != sigs[j] {
                        tally.refuted += 1;
                        let vals = [*chi, *gamma, *kappa];
                        if let Outcome::Fails(f) = evaluate(ctx, PropositionId::P02, &vals)? {
                            tally.offer(&vals, f);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn audit_one(ctx: &Ctx, id: PropositionId, domain: &[Subset]) -> Result<PropositionReport> {
    let n = ctx.space.len();
    let mut tally = Tally::new();
    let arity = id.variables().len();
    match id.domain() {
        Domain::Space => tally.record(&[], evaluate(ctx, id, &[])?),
        Domain::Sets => audit_congruence(ctx, domain, &mut tally)?,
        Domain::Points | Domain::DistinctPoints => {
            let distinct = id.domain() == Domain::DistinctPoints;
            for ids in (0..arity).map(|_| 0..n).multi_cartesian_product() {
                if distinct && !ids.iter().all_unique() {
                    continue;
                }
                let vals: Vec<Subset> = ids.iter().map(|&i| ctx.space.singleton(i)).collect();
                tally.record(&vals, evaluate(ctx, id, &vals)?);
            }
        }
    }
    Ok(tally.finish(ctx, id))
}

/// Refuses before doing any work if a selected proposition needs more than
/// the cap allows.
fn check_caps(space: &Space, props: &[PropositionId], mode: ZMode, cap: ExhaustiveCap) -> Result<()> {
    for p in props {
        if p.needs_exhaustive(mode) {
            cap.check(space.len(), format!("auditing {p} with z-mode {mode}"))?;
        }
    }
    Ok(())
}

pub fn audit_space(space: &Space, props: &[PropositionId], mode: ZMode, cap: ExhaustiveCap) -> Result<AuditReport> {
    audit_named(space, None, props, mode, cap, None)
}

pub(crate) fn audit_named(
    space: &Space,
    name: Option<String>,
    props: &[PropositionId],
    mode: ZMode,
    cap: ExhaustiveCap,
    seed: Option<u64>,
) -> Result<AuditReport> {
    let mut props = props.to_vec();
    props.sort();
    props.dedup();
    check_caps(space, &props, mode, cap)?;
    let ctx = Ctx::new(space, mode, cap);
    let (domain, set_domain) = set_domain(space);
    let propositions = props
        .iter()
        .map(|&p| audit_one(&ctx, p, &domain))
        .collect::<Result<_>>()?;
    Ok(AuditReport {
        space: SpaceDescriptor::of(space, name),
        config: AuditConfig {
            z_mode: mode,
            max_points: cap.get(),
            seed,
            set_domain,
        },
        propositions,
    })
}

/// Re-evaluates a counterexample; true when the violation is reproduced.
pub fn replay(space: &Space, id: PropositionId, cx: &Counterexample, mode: ZMode, cap: ExhaustiveCap) -> Result<bool> {
    check_caps(space, &[id], mode, cap)?;
    let vals = id
        .variables()
        .iter()
        .map(|v| {
            let labels = cx
                .bindings
                .get(*v)
                .ok_or_else(|| Error::Malformed(format!("counterexample has no binding for `{v}`")))?;
            space.subset(labels)
        })
        .collect::<Result<Vec<_>>>()?;
    let ctx = Ctx::new(space, mode, cap);
    Ok(matches!(evaluate(&ctx, id, &vals)?, Outcome::Fails(_)))
}
