use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::builders::{build_full_boolean, build_literal, random_space};
use crate::connectives::{find_negations, ZMode};
use crate::error::Result;
use crate::io::canonical_json;
use crate::space::{ExhaustiveCap, Space};

use super::{audit_named, AuditReport, Counterexample, PropositionId, Status};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignConfig {
    pub z_mode: ZMode,
    pub max_points: ExhaustiveCap,
    /// Seed of the first random space; the rest follow consecutively.
    pub seed: u64,
    pub random_spaces: usize,
    pub propositions: Vec<PropositionId>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            z_mode: ZMode::Subsets,
            max_points: ExhaustiveCap::default(),
            seed: 0,
            random_spaces: 50,
            propositions: PropositionId::ALL.to_vec(),
        }
    }
}

impl CampaignConfig {
    /// L1..L3, B1, B2, then the random spaces with 4 to 6 points.
    pub fn corpus(&self) -> Vec<(String, Result<Space>)> {
        let mut out: Vec<(String, Result<Space>)> = (1..=3)
            .map(|n| (format!("L{n}"), build_literal(n)))
            .chain((1..=2).map(|n| (format!("B{n}"), build_full_boolean(n))))
            .collect();
        for i in 0..self.random_spaces {
            let seed = self.seed.wrapping_add(i as u64);
            let (points, maximal) = (4 + i % 3, 2 + i % 3);
            out.push((format!("random-{seed}"), random_space(points, maximal, seed)));
        }
        out
    }
}

/// A point whose negation candidates differ between the two z-modes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModeDivergence {
    pub point: String,
    pub elements: Vec<String>,
    pub subsets: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignMember {
    pub name: String,
    pub report: Option<AuditReport>,
    pub error: Option<String>,
    pub mode_divergences: Vec<ModeDivergence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceCounterexample {
    pub space: String,
    pub counterexample: Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignSummaryEntry {
    pub id: PropositionId,
    pub statement: &'static str,
    pub holds: usize,
    pub refuted: usize,
    pub skipped: usize,
    pub instances_checked: u64,
    pub skipped_count: u64,
    pub first_counterexample: Option<SpaceCounterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub members: Vec<CampaignMember>,
    pub summary: Vec<CampaignSummaryEntry>,
}

impl CampaignReport {
    pub fn member(&self, name: &str) -> Option<&CampaignMember> {
        self.members.iter().find(|m| m.name == name)
    }

    pub fn summary_for(&self, id: PropositionId) -> Option<&CampaignSummaryEntry> {
        self.summary.iter().find(|s| s.id == id)
    }

    pub fn to_json(&self) -> Value {
        canonical_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "campaign: {} spaces, z-mode {}, seed {}",
            self.members.len(),
            self.config.z_mode,
            self.config.seed
        );
        for s in &self.summary {
            let _ = writeln!(
                out,
                "{} holds {:>3} refuted {:>3} skipped {:>3}  {}",
                s.id, s.holds, s.refuted, s.skipped, s.statement
            );
            if let Some(first) = &s.first_counterexample {
                let _ = writeln!(
                    out,
                    "    first refutation on {}: {}",
                    first.space, first.counterexample.detail
                );
            }
        }
        for m in &self.members {
            if let Some(e) = &m.error {
                let _ = writeln!(out, "{}: not audited: {e}", m.name);
            }
            for d in &m.mode_divergences {
                let _ = writeln!(
                    out,
                    "{}: negations of {} differ: elements {:?}, subsets {:?}",
                    m.name, d.point, d.elements, d.subsets
                );
            }
        }
        out
    }
}

fn mode_divergences(space: &Space, cap: ExhaustiveCap) -> Result<Vec<ModeDivergence>> {
    if !cap.admits(space.len()) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for x in 0..space.len() {
        let a = space.singleton(x);
        let el = find_negations(space, &a, ZMode::Elements, cap)?.candidates;
        let su = find_negations(space, &a, ZMode::Subsets, cap)?.candidates;
        if el != su {
            let names = |c: &[usize]| c.iter().map(|&p| space.label(p).to_string()).collect();
            out.push(ModeDivergence {
                point: space.label(x).to_string(),
                elements: names(&el),
                subsets: names(&su),
            });
        }
    }
    Ok(out)
}

/// Audits every corpus member. A member that fails to build or to audit is
/// recorded with its error and the campaign continues.
pub fn audit_campaign(config: &CampaignConfig) -> CampaignReport {
    let members: Vec<CampaignMember> = config
        .corpus()
        .into_iter()
        .map(|(name, built)| {
            let audited = built.and_then(|space| {
                let report = audit_named(
                    &space,
                    Some(name.clone()),
                    &config.propositions,
                    config.z_mode,
                    config.max_points,
                    Some(config.seed),
                )?;
                Ok((report, mode_divergences(&space, config.max_points)?))
            });
            match audited {
                Ok((report, mode_divergences)) => CampaignMember {
                    name,
                    report: Some(report),
                    error: None,
                    mode_divergences,
                },
                Err(e) => CampaignMember {
                    name,
                    report: None,
                    error: Some(e.to_string()),
                    mode_divergences: Vec::new(),
                },
            }
        })
        .collect();

    let mut ids = config.propositions.clone();
    ids.sort();
    ids.dedup();
    let summary = ids
        .into_iter()
        .map(|id| {
            let mut entry = CampaignSummaryEntry {
                id,
                statement: id.statement(),
                holds: 0,
                refuted: 0,
                skipped: 0,
                instances_checked: 0,
                skipped_count: 0,
                first_counterexample: None,
            };
            for m in &members {
                let Some(p) = m.report.as_ref().and_then(|r| r.get(id)) else {
                    continue;
                };
                match p.status {
                    Status::Holds => entry.holds += 1,
                    Status::Refuted => entry.refuted += 1,
                    Status::Skipped => entry.skipped += 1,
                }
                entry.instances_checked += p.instances_checked;
                entry.skipped_count += p.skipped_count;
                if entry.first_counterexample.is_none() {
                    entry.first_counterexample = p.counterexample.clone().map(|counterexample| SpaceCounterexample {
                        space: m.name.clone(),
                        counterexample,
                    });
                }
            }
            entry
        })
        .collect();
    CampaignReport {
        config: config.clone(),
        members,
        summary,
    }
}
