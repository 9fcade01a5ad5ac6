use std::fs;
use std::io::Write;
use std::path::Path;

use cspace::audit::{audit_campaign, audit_space, parse_proposition_list, CampaignConfig, PropositionId};
use cspace::builders::{build_from_formulas, build_full_boolean, build_literal, random_space};
use cspace::connectives::{find_negations, implies, meet, TernaryVerdict, ZMode};
use cspace::equivalence::classes;
use cspace::formula::parse_formula_list;
use cspace::io::{canonical_json, load_space, space_to_json, to_pretty};
use cspace::structure::{detect_boolean, minimal_inconsistent_sets};
use cspace::{Error, ExhaustiveCap, Space, Subset};
use serde_json::{json, Value};

use crate::{BuildKind, Cli, Command, Global};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OutOfRange { .. } => 2,
            _ => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError {
        code: 2,
        message: e.to_string(),
    }
}

fn domain(e: impl ToString) -> CliError {
    CliError {
        code: 1,
        message: e.to_string(),
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn load(path: &Path, g: &Global) -> Result<Space> {
    load_space(path, g.force).map_err(|e| domain(format!("{}: {e}", path.display())))
}

/// Resolves a comma-separated label list; an unknown label is a usage error.
fn labels(space: &Space, text: &str) -> Result<Subset> {
    let names: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    space.subset(&names).map_err(usage)
}

fn point(space: &Space, text: &str) -> Result<usize> {
    space.point_id(text.trim()).map_err(usage)
}

fn fmt_set(space: &Space, s: &Subset) -> String {
    format!("{{{}}}", space.labels_of(s).join(","))
}

fn label_or_null(space: &Space, p: Option<usize>) -> Value {
    p.map_or(Value::Null, |p| Value::String(space.label(p).to_string()))
}

/// Writes to `-o` (through a temporary sibling and a rename) or stdout.
fn emit(g: &Global, text: &str) -> Result<()> {
    match &g.output {
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".tmp");
            fs::write(&tmp, text)
                .and_then(|_| fs::rename(&tmp, path))
                .map_err(|e| domain(format!("{}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(domain)
        }
    }
}

fn emit_either(g: &Global, value: Value, text: impl FnOnce() -> String) -> Result<()> {
    if g.json {
        emit(g, &to_pretty(&canonical_json(&value)))
    } else {
        emit(g, &text())
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    let cap = ExhaustiveCap::new(g.max_points).map_err(usage)?;
    let mode: ZMode = g.z_mode.into();
    match &cli.command {
        Command::Build { kind } => {
            let space = match kind {
                BuildKind::Literal { vars } => build_literal(*vars)?,
                BuildKind::Boolean { vars } => build_full_boolean(*vars)?,
                BuildKind::Formulas { file } => {
                    let text = fs::read_to_string(file).map_err(|e| domain(format!("{}: {e}", file.display())))?;
                    let formulas = parse_formula_list(&text).map_err(|e| domain(format!("{}: {e}", file.display())))?;
                    build_from_formulas(&formulas)?
                }
                BuildKind::Random { points, maximal } => random_space(*points, *maximal, g.seed)?,
            };
            emit(g, &space_to_json(&space))
        }
        Command::Validate { file } => {
            let space = load_space(file, true).map_err(|e| domain(format!("{}: {e}", file.display())))?;
            let report = space.validate();
            let value = json!({
                "ok": report.ok,
                "violations": report.violations,
                "points": space.len(),
                "maximal_consistent": space.maximal_consistent_sets().len(),
            });
            emit_either(g, value, || {
                if report.ok {
                    format!(
                        "ok: {} points, {} maximal consistent sets\n",
                        space.len(),
                        space.maximal_consistent_sets().len()
                    )
                } else {
                    format!("invalid:\n{report}")
                }
            })?;
            if report.ok {
                Ok(())
            } else {
                Err(domain("space violates the axioms"))
            }
        }
        Command::Classes { file, max_size } => {
            let space = load(file, g)?;
            let cls = classes(&space, *max_size, cap)?;
            let value = json!({
                "max_size": max_size,
                "count": cls.len(),
                "classes": cls.iter().map(|c| json!({
                    "representative": space.labels_of(&c.representative),
                    "members": c.members.iter().map(|m| space.labels_of(m)).collect::<Vec<_>>(),
                    "consistent": !c.signature.is_empty(),
                })).collect::<Vec<_>>(),
            });
            emit_either(g, value, || {
                let mut out = format!("{} classes\n", cls.len());
                for c in &cls {
                    out.push_str(&format!(
                        "{}  {} member(s), {}\n",
                        fmt_set(&space, &c.representative),
                        c.members.len(),
                        if c.signature.is_empty() {
                            "inconsistent"
                        } else {
                            "consistent"
                        }
                    ));
                }
                out
            })
        }
        Command::Negate { file, set } => {
            let space = load(file, g)?;
            let a = labels(&space, set)?;
            let r = find_negations(&space, &a, mode, cap)?;
            let names: Vec<&str> = r.candidates.iter().map(|&p| space.label(p)).collect();
            let value = json!({
                "input_set": space.labels_of(&a),
                "mode": mode,
                "candidates": names,
                "representative": label_or_null(&space, r.representative),
                "all_equivalent": r.all_equivalent,
            });
            emit_either(g, value, || match r.representative {
                None => format!("{}: no negation\n", fmt_set(&space, &a)),
                Some(rep) => format!(
                    "{}: negations {{{}}}, representative {}{}\n",
                    fmt_set(&space, &a),
                    names.join(","),
                    space.label(rep),
                    if r.all_equivalent {
                        ""
                    } else {
                        " (candidates NOT all equivalent)"
                    }
                ),
            })
        }
        Command::Implies { file, lhs, rhs } => {
            let space = load(file, g)?;
            let (a, b) = (labels(&space, lhs)?, labels(&space, rhs)?);
            let v = implies(&space, &a, &b, mode, cap)?;
            let (verdict, reason) = match &v {
                TernaryVerdict::True => ("true", None),
                TernaryVerdict::False => ("false", None),
                TernaryVerdict::Undefined { reason } => ("undefined", Some(reason.clone())),
            };
            let value = json!({
                "lhs": space.labels_of(&a),
                "rhs": space.labels_of(&b),
                "mode": mode,
                "verdict": verdict,
                "reason": reason,
            });
            emit_either(g, value, || {
                let mut out = format!("{} -> {}: {verdict}", fmt_set(&space, &a), fmt_set(&space, &b));
                if let Some(r) = &reason {
                    out.push_str(&format!(" ({r})"));
                }
                out.push('\n');
                out
            })
        }
        Command::Join { file, x, y } => {
            let space = load(file, g)?;
            let (px, py) = (point(&space, x)?, point(&space, y)?);
            let nx = find_negations(&space, &space.singleton(px), mode, cap)?.representative;
            let ny = find_negations(&space, &space.singleton(py), mode, cap)?.representative;
            let last = match (nx, ny) {
                (Some(nx), Some(ny)) => Some(find_negations(&space, &space.singleton(nx).with(ny), mode, cap)?),
                _ => None,
            };
            let joined = last.as_ref().and_then(|r| r.representative);
            let value = json!({
                "x": space.label(px),
                "y": space.label(py),
                "mode": mode,
                "neg_x": label_or_null(&space, nx),
                "neg_y": label_or_null(&space, ny),
                "input_set": last.as_ref().map(|r| space.labels_of(&r.input)),
                "candidates": last.as_ref().map_or(Vec::new(), |r| r.candidates.iter().map(|&p| space.label(p)).collect()),
                "representative": label_or_null(&space, joined),
                "all_equivalent": last.as_ref().is_none_or(|r| r.all_equivalent),
                "join": label_or_null(&space, joined),
            });
            emit_either(g, value, || match joined {
                Some(j) => format!("join({}, {}) = {}\n", space.label(px), space.label(py), space.label(j)),
                None => {
                    let why = match (nx, ny) {
                        (None, _) => format!("no negation exists for {}", space.label(px)),
                        (_, None) => format!("no negation exists for {}", space.label(py)),
                        _ => format!(
                            "no negation exists for {}",
                            fmt_set(&space, &last.as_ref().unwrap().input)
                        ),
                    };
                    format!("join({}, {}) is undefined: {why}\n", space.label(px), space.label(py))
                }
            })
        }
        Command::Meet { file, lhs, rhs } => {
            let space = load(file, g)?;
            let (a, b) = (labels(&space, lhs)?, labels(&space, rhs)?);
            let m = meet(&a, &b)?;
            let consistent = space.consistent(&m);
            let value = json!({
                "lhs": space.labels_of(&a),
                "rhs": space.labels_of(&b),
                "meet": space.labels_of(&m),
                "consistent": consistent,
            });
            emit_either(g, value, || {
                format!(
                    "{} ({})\n",
                    fmt_set(&space, &m),
                    if consistent { "consistent" } else { "inconsistent" }
                )
            })
        }
        Command::MinimalInconsistent { file, partial } => {
            let space = load(file, g)?;
            let f = minimal_inconsistent_sets(&space, cap, *partial)?;
            let sets: Vec<Vec<String>> = f.sets.iter().map(|s| space.labels_of(s)).collect();
            let value = json!({ "complete": f.complete, "sets": sets });
            emit_either(g, value, || {
                let mut out = String::new();
                for s in &f.sets {
                    out.push_str(&fmt_set(&space, s));
                    out.push('\n');
                }
                if !f.complete {
                    out.push_str("(incomplete: search stopped at the cap)\n");
                }
                out
            })
        }
        Command::DetectBoolean { file } => {
            let space = load(file, g)?;
            let r = detect_boolean(&space, cap)?;
            let value = serde_json::to_value(&r).map_err(domain)?;
            emit_either(g, value, || {
                let mut out = format!("boolean: {}\n", r.is_boolean);
                for (name, c) in [
                    ("doubletons", &r.doubleton_check),
                    ("disjoint", &r.disjoint_check),
                    ("cover", &r.cover_check),
                    ("exactness", &r.exactness_check),
                    ("equivalent supersets", &r.equiv_supersets_check),
                ] {
                    out.push_str(&format!(
                        "  {name}: {} - {}",
                        if c.passed { "pass" } else { "FAIL" },
                        c.message
                    ));
                    for w in &c.witness {
                        out.push_str(&format!(" {{{}}}", w.join(",")));
                    }
                    out.push('\n');
                }
                out.push_str(&format!(
                    "  equivalent-supersets condition vacuous: {}\n  exactness read as: {}\n",
                    r.equiv_supersets_vacuous, r.exactness_reading
                ));
                for (a, b) in &r.pairing {
                    if a < b {
                        out.push_str(&format!("  {a} <-> {b}\n"));
                    }
                }
                out
            })
        }
        Command::Audit {
            file,
            props,
            campaign,
            random_spaces,
        } => {
            let props = match props {
                Some(p) => parse_proposition_list(p).map_err(usage)?,
                None => PropositionId::ALL.to_vec(),
            };
            if *campaign {
                let config = CampaignConfig {
                    z_mode: mode,
                    max_points: cap,
                    seed: g.seed,
                    random_spaces: *random_spaces,
                    propositions: props,
                };
                let r = audit_campaign(&config);
                emit_either(g, r.to_json(), || r.to_text())
            } else {
                let file = file
                    .as_ref()
                    .ok_or_else(|| usage("audit needs a space file or --campaign"))?;
                let space = load(file, g)?;
                let r = audit_space(&space, &props, mode, cap)?;
                emit_either(g, r.to_json(), || r.to_text())
            }
        }
    }
}
