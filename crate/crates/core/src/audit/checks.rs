//! Per-instance evaluation of each proposition.

use std::cell::{OnceCell, RefCell};
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::connectives::{find_negations, implies_given, NegationResult, TernaryVerdict, ZMode};
use crate::equivalence::{distinguishing_kappa, equiv};
use crate::error::Result;
use crate::space::{ExhaustiveCap, Space};
use crate::structure::{detect_boolean, BooleanDetectReport};
use crate::subset::Subset;

use super::registry::PropositionId::{self, *};

/// Shared state for one audited space: negation searches are cached by set.
pub(crate) struct Ctx<'a> {
    pub space: &'a Space,
    pub mode: ZMode,
    pub cap: ExhaustiveCap,
    negs: RefCell<HashMap<Subset, Rc<NegationResult>>>,
    detect: OnceCell<BooleanDetectReport>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Failure {
    pub derived: BTreeMap<String, Vec<String>>,
    pub distinguishing: Option<Subset>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Holds,
    Skipped(&'static str),
    Fails(Failure),
}

/// Short-circuits an evaluation with a skip when a verdict is undefined.
macro_rules! defined {
    ($v:expr, $reason:expr) => {
        match $v {
            TernaryVerdict::True => true,
            TernaryVerdict::False => false,
            TernaryVerdict::Undefined { .. } => return Ok(Outcome::Skipped($reason)),
        }
    };
}

macro_rules! exists {
    ($v:expr, $reason:expr) => {
        match $v {
            Some(p) => p,
            None => return Ok(Outcome::Skipped($reason)),
        }
    };
}

impl<'a> Ctx<'a> {
    pub fn new(space: &'a Space, mode: ZMode, cap: ExhaustiveCap) -> Self {
        Ctx {
            space,
            mode,
            cap,
            negs: RefCell::new(HashMap::new()),
            detect: OnceCell::new(),
        }
    }

    pub fn negations(&self, a: &Subset) -> Result<Rc<NegationResult>> {
        if let Some(r) = self.negs.borrow().get(a) {
            return Ok(r.clone());
        }
        let r = Rc::new(find_negations(self.space, a, self.mode, self.cap)?);
        self.negs.borrow_mut().insert(*a, r.clone());
        Ok(r)
    }

    fn neg_of(&self, a: &Subset) -> Result<Option<usize>> {
        Ok(self.negations(a)?.representative)
    }

    fn neg(&self, x: usize) -> Result<Option<usize>> {
        self.neg_of(&self.space.singleton(x))
    }

    fn implies(&self, a: &Subset, b: &Subset) -> Result<TernaryVerdict> {
        implies_given(self.space, a, &*self.negations(b)?)
    }

    fn pt(&self, x: usize) -> Subset {
        self.space.singleton(x)
    }

    fn detect(&self) -> Result<&BooleanDetectReport> {
        if let Some(r) = self.detect.get() {
            return Ok(r);
        }
        let r = detect_boolean(self.space, self.cap)?;
        Ok(self.detect.get_or_init(|| r))
    }

    fn labels(&self, s: &Subset) -> Vec<String> {
        self.space.labels_of(s)
    }

    fn fail(&self, derived: &[(&str, Subset)], distinguishing: Option<Subset>, detail: impl Into<String>) -> Outcome {
        Outcome::Fails(Failure {
            derived: derived.iter().map(|(k, s)| (k.to_string(), self.labels(s))).collect(),
            distinguishing,
            detail: detail.into(),
        })
    }

    /// A failure of `a ~ b`, with the separating set.
    fn inequivalent(&self, derived: &[(&str, Subset)], a: &Subset, b: &Subset, detail: impl Into<String>) -> Outcome {
        let k = distinguishing_kappa(self.space, a, b, self.cap);
        self.fail(derived, k, detail)
    }
}

/// Evaluates one instance; `vals` follows `prop.variables()`. Point-valued
/// variables are passed as singletons.
pub(crate) fn evaluate(ctx: &Ctx, prop: PropositionId, vals: &[Subset]) -> Result<Outcome> {
    let space = ctx.space;
    let point = |i: usize| vals[i].first().expect("point variables are singletons");
    match prop {
        P01 => Ok(if space.consistent(&space.empty()) {
            Outcome::Holds
        } else {
            ctx.fail(&[], None, "the empty set is inconsistent")
        }),
        P02 => {
            let (chi, gamma, kappa) = (vals[0], vals[1], vals[2]);
            if !equiv(space, &chi, &gamma) {
                return Ok(Outcome::Holds);
            }
            let (a, b) = (chi.union(&kappa), gamma.union(&kappa));
            Ok(if equiv(space, &a, &b) {
                Outcome::Holds
            } else {
                ctx.inequivalent(
                    &[("chi ∪ kappa", a), ("gamma ∪ kappa", b)],
                    &a,
                    &b,
                    "chi ~ gamma but the extensions by kappa differ",
                )
            })
        }
        P03 => {
            if !space.origin().from_boolean_algebra() {
                return Ok(Outcome::Skipped("space does not arise from a Boolean algebra"));
            }
            let r = ctx.detect()?;
            if r.is_boolean {
                return Ok(Outcome::Holds);
            }
            let checks = [
                ("doubleton_check", &r.doubleton_check),
                ("disjoint_check", &r.disjoint_check),
                ("cover_check", &r.cover_check),
                ("exactness_check", &r.exactness_check),
                ("equiv_supersets_check", &r.equiv_supersets_check),
            ];
            let failed: Vec<_> = checks.iter().filter(|(_, c)| !c.passed).collect();
            let derived = failed
                .iter()
                .flat_map(|(name, c)| {
                    c.witness
                        .iter()
                        .enumerate()
                        .map(move |(i, w)| (format!("{name}_witness_{}", i + 1), w.clone()))
                })
                .collect();
            let detail = failed
                .iter()
                .map(|(name, c)| format!("{name} failed: {}", c.message))
                .collect::<Vec<_>>()
                .join("; ");
            Ok(Outcome::Fails(Failure {
                derived,
                distinguishing: None,
                detail,
            }))
        }
        P04 => {
            let r = ctx.negations(&vals[0])?;
            if r.candidates.is_empty() {
                return Ok(Outcome::Skipped("negation of x missing"));
            }
            for (i, &y1) in r.candidates.iter().enumerate() {
                for &y2 in &r.candidates[i + 1..] {
                    let (a, b) = (ctx.pt(y1), ctx.pt(y2));
                    if !equiv(space, &a, &b) {
                        return Ok(ctx.inequivalent(
                            &[("neg x (first)", a), ("neg x (second)", b)],
                            &a,
                            &b,
                            "two negations of x are not equivalent",
                        ));
                    }
                }
            }
            Ok(Outcome::Holds)
        }
        P05 => {
            let x = point(0);
            let nx = exists!(ctx.neg(x)?, "negation of x missing");
            let nnx = exists!(ctx.neg(nx)?, "negation of neg x missing");
            let (a, b) = (ctx.pt(nnx), ctx.pt(x));
            Ok(if equiv(space, &a, &b) {
                Outcome::Holds
            } else {
                ctx.inequivalent(
                    &[("neg x", ctx.pt(nx)), ("neg neg x", a)],
                    &a,
                    &b,
                    "neg neg x is not equivalent to x",
                )
            })
        }
        P06 | P07 => {
            let (x, y) = (point(0), point(1));
            let ny = exists!(ctx.neg(y)?, "negation of y missing");
            if prop == P07 && x == ny {
                return Ok(Outcome::Skipped("degenerate instance x = neg y"));
            }
            let triple = ctx.pt(x).with(y).with(ny);
            let derived = [("neg y", ctx.pt(ny)), ("{x, y, neg y}", triple)];
            if prop == P06 {
                return Ok(if space.consistent(&triple) {
                    ctx.fail(&derived, None, "{x, y, neg y} is consistent")
                } else {
                    Outcome::Holds
                });
            }
            let single = ctx.pt(x);
            Ok(if equiv(space, &triple, &single) {
                Outcome::Holds
            } else {
                ctx.inequivalent(&derived, &triple, &single, "{x, y, neg y} is not equivalent to {x}")
            })
        }
        P08 => {
            let (x, y) = (point(0), point(1));
            let nx = exists!(ctx.neg(x)?, "negation of x missing");
            let ny = exists!(ctx.neg(y)?, "negation of y missing");
            exists!(ctx.neg(nx)?, "negation of neg x missing");
            exists!(ctx.neg(ny)?, "negation of neg y missing");
            let (sx, sy, snx, sny) = (ctx.pt(x), ctx.pt(y), ctx.pt(nx), ctx.pt(ny));
            let lhs = equiv(space, &sx, &sy);
            if lhs == equiv(space, &snx, &sny) {
                return Ok(Outcome::Holds);
            }
            let derived = [("neg x", snx), ("neg y", sny)];
            Ok(if lhs {
                ctx.inequivalent(
                    &derived,
                    &snx,
                    &sny,
                    "{x} ~ {y} but {neg x} and {neg y} are not equivalent",
                )
            } else {
                ctx.inequivalent(
                    &derived,
                    &sx,
                    &sy,
                    "{neg x} ~ {neg y} but {x} and {y} are not equivalent",
                )
            })
        }
        P09 => {
            let x = ctx.pt(point(0));
            Ok(if defined!(ctx.implies(&x, &x)?, "negation of x missing") {
                Outcome::Holds
            } else {
                ctx.fail(&[], None, "x does not imply x")
            })
        }
        P10 | P11 => {
            let (x, y) = (ctx.pt(point(0)), ctx.pt(point(1)));
            let xy = defined!(ctx.implies(&x, &y)?, "negation of y missing");
            let yx = defined!(ctx.implies(&y, &x)?, "negation of x missing");
            let eq = equiv(space, &x, &y);
            Ok(match (prop, xy && yx, eq) {
                (P10, true, false) => {
                    ctx.inequivalent(&[], &x, &y, "x -> y and y -> x but {x} and {y} are not equivalent")
                }
                (P11, false, true) => ctx.fail(
                    &[],
                    None,
                    format!("{{x}} ~ {{y}} but x -> y is {xy} and y -> x is {yx}"),
                ),
                _ => Outcome::Holds,
            })
        }
        P12 => {
            let (x, y, z) = (ctx.pt(point(0)), ctx.pt(point(1)), ctx.pt(point(2)));
            let xy = defined!(ctx.implies(&x, &y)?, "negation of y missing");
            let yz = defined!(ctx.implies(&y, &z)?, "negation of z missing");
            let xz = defined!(ctx.implies(&x, &z)?, "negation of z missing");
            Ok(if xy && yz && !xz {
                ctx.fail(&[], None, "x -> y and y -> z but not x -> z")
            } else {
                Outcome::Holds
            })
        }
        P13 => {
            let (x, y, t) = (ctx.pt(point(0)), ctx.pt(point(1)), ctx.pt(point(2)));
            let xy = x.union(&y);
            let tx = defined!(ctx.implies(&t, &x)?, "negation of x missing");
            let ty = defined!(ctx.implies(&t, &y)?, "negation of y missing");
            let txy = defined!(ctx.implies(&t, &xy)?, "negation of {x, y} missing");
            Ok(if tx && ty && !txy {
                let n = ctx.neg_of(&xy)?.expect("defined verdict has a negation");
                ctx.fail(
                    &[("neg {x, y}", ctx.pt(n))],
                    None,
                    "t -> x and t -> y but not t -> {x, y}",
                )
            } else {
                Outcome::Holds
            })
        }
        P14 => {
            let (x, y, t) = (point(0), point(1), point(2));
            let nx = exists!(ctx.neg(x)?, "negation of x missing");
            let ny = exists!(ctx.neg(y)?, "negation of y missing");
            let j = exists!(ctx.neg_of(&ctx.pt(nx).with(ny))?, "join of x and y missing");
            let st = ctx.pt(t);
            let xt = defined!(ctx.implies(&ctx.pt(x), &st)?, "negation of t missing");
            let yt = defined!(ctx.implies(&ctx.pt(y), &st)?, "negation of t missing");
            let jt = defined!(ctx.implies(&ctx.pt(j), &st)?, "negation of t missing");
            Ok(if xt && yt && !jt {
                ctx.fail(
                    &[("join(x, y)", ctx.pt(j))],
                    None,
                    "x -> t and y -> t but not join(x, y) -> t",
                )
            } else {
                Outcome::Holds
            })
        }
        P15 => {
            let (x, y) = (point(0), point(1));
            let xy = defined!(ctx.implies(&ctx.pt(x), &ctx.pt(y))?, "negation of y missing");
            let ny = ctx.neg(y)?.expect("defined verdict has a negation");
            let nx = exists!(ctx.neg(x)?, "negation of x missing");
            let contra = defined!(ctx.implies(&ctx.pt(ny), &ctx.pt(nx))?, "negation of neg x missing");
            Ok(if xy == contra {
                Outcome::Holds
            } else {
                ctx.fail(
                    &[("neg x", ctx.pt(nx)), ("neg y", ctx.pt(ny))],
                    None,
                    format!("x -> y is {xy} but neg y -> neg x is {contra}"),
                )
            })
        }
        P16 => {
            let (x, y, t) = (ctx.pt(point(0)), ctx.pt(point(1)), ctx.pt(point(2)));
            let xy = defined!(ctx.implies(&x, &y)?, "negation of y missing");
            let (tx, ty) = (t.union(&x), t.union(&y));
            let mono = defined!(ctx.implies(&tx, &ty)?, "negation of {t, y} missing");
            Ok(if xy && !mono {
                let n = ctx.neg_of(&ty)?.expect("defined verdict has a negation");
                ctx.fail(&[("neg {t, y}", ctx.pt(n))], None, "x -> y but not {t, x} -> {t, y}")
            } else {
                Outcome::Holds
            })
        }
    }
}
