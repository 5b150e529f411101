//! Searches over the reduction rules: the sporadic enumeration, coverage
//! for large `r`, and certificate construction.

use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;
use std::sync::RwLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{AxiomSet, CertNode, Certificate, Justification, CERTIFICATE_VERSION};
use crate::constants::XEX;
use crate::erasability::{ErasabilityCache, RoleMode};
use crate::error::ProveError;
use crate::rules::{first_instance, for_each_instance, Instance, RuleId};
use crate::tuple::{good, Tuple};

/// What it takes for a subgoal to count as established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcceptMode {
    /// The subgoal is good or an axiom.
    #[default]
    Good,
    /// Additionally the subgoal must itself certify.
    Recursive,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub rules: Vec<RuleId>,
    pub accept: AcceptMode,
    pub axioms: AxiomSet,
    pub role_mode: RoleMode,
    pub r_min: i64,
    pub r_max: i64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            rules: RuleId::ALL.to_vec(),
            accept: AcceptMode::Good,
            axioms: AxiomSet::default(),
            role_mode: RoleMode::default(),
            r_min: 3,
            r_max: 13,
        }
    }
}

impl SearchConfig {
    pub fn without_rule(mut self, rule: RuleId) -> Self {
        self.rules.retain(|&r| r != rule);
        self
    }
}

/// `d <= g + 2r - 1`, `g <= r - 1`, `m <= r - 2 + eps0` with `eps0 = [g = 0]`.
pub fn in_box(t: &Tuple) -> bool {
    let eps0 = i64::from(t.g == 0);
    t.d < t.g + 2 * t.r && t.g < t.r && t.m <= t.r - 2 + eps0
}

/// Lowering `m` by `r - 1` lands in the excluded list.
pub fn to_exc(t: &Tuple) -> bool {
    XEX.contains(&Tuple::new(t.d, t.g, t.r, t.ell, t.m - (t.r - 1)))
}

/// `delta = 1` and `l = m = 0`.
pub fn is_delta1_family(t: &Tuple) -> bool {
    t.ell == 0 && t.m == 0 && t.r >= 2 && t.delta_numerator() == t.r - 1
}

/// Good box tuples (plus the shifted excluded list) for one `r`.
fn box_tuples(r: i64) -> Vec<Tuple> {
    let mut out = BTreeSet::new();
    for g in 0..r {
        let eps0 = i64::from(g == 0);
        for d in (g + r)..=(g + 2 * r - 1) {
            for ell in 0..=(r / 2) {
                for m in 0..=(r - 2 + eps0) {
                    let t = Tuple::new(d, g, r, ell, m);
                    if good(&t) && !is_delta1_family(&t) {
                        out.insert(t);
                    }
                }
            }
        }
    }
    for x in XEX.iter().filter(|x| x.r == r) {
        let t = Tuple::new(x.d, x.g, x.r, x.ell, x.m + (r - 1));
        if good(&t) && !is_delta1_family(&t) {
            out.insert(t);
        }
    }
    out.into_iter().collect()
}

/// All good tuples with `r_min <= r <= r_max` in the box or shifted into
/// the excluded list, minus the `delta = 1`, `l = m = 0` family. Sorted.
pub fn enumerate_sporadic_range(r_min: i64, r_max: i64) -> Vec<Tuple> {
    let mut v: Vec<Tuple> = (r_min.max(3)..=r_max).flat_map(box_tuples).collect();
    v.sort();
    v
}

pub fn enumerate_sporadic() -> Vec<Tuple> {
    enumerate_sporadic_range(3, 13)
}

/// One examined tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SporadicRow {
    pub tuple: Tuple,
    pub reducible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Instance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SporadicReport {
    pub examined: usize,
    pub reducible: usize,
    pub irreducible: Vec<Tuple>,
    pub rows: Vec<SporadicRow>,
}

/// Memoized search engine. Shareable across threads; concurrent inserts
/// for the same tuple always carry the same value.
pub struct Prover {
    cfg: SearchConfig,
    cache: ErasabilityCache,
    memo: RwLock<HashMap<Tuple, Option<Justification>>>,
}

const DELTA1_PROVISO: &str = "g > 0 or the characteristic is not 2";

impl Prover {
    pub fn new(cfg: SearchConfig) -> Self {
        let cache = ErasabilityCache::new(cfg.role_mode);
        Prover {
            cfg,
            cache,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    pub fn erasability(&self) -> &ErasabilityCache {
        &self.cache
    }

    fn admissible(&self, s: &Tuple) -> bool {
        good(s) || self.cfg.axioms.contains(s)
    }

    fn accepted(&self, s: &Tuple) -> bool {
        match self.cfg.accept {
            AcceptMode::Good => self.admissible(s),
            AcceptMode::Recursive => self.admissible(s) && self.prove(s).is_some(),
        }
    }

    /// First instance, in rule order, whose subgoals are all accepted.
    pub fn reduce(&self, t: &Tuple) -> Option<Instance> {
        let accept = |s: &Tuple| self.accepted(s);
        self.cfg
            .rules
            .iter()
            .find_map(|&rule| first_instance(rule, t, &self.cache, &accept))
    }

    pub fn run_sporadic(&self, tuples: &[Tuple]) -> SporadicReport {
        let rows: Vec<SporadicRow> = tuples
            .par_iter()
            .map(|t| {
                let witness = self.reduce(t);
                SporadicRow {
                    tuple: *t,
                    reducible: witness.is_some(),
                    witness,
                }
            })
            .collect();
        let mut irreducible: Vec<Tuple> = rows
            .iter()
            .filter(|r| !r.reducible)
            .map(|r| r.tuple)
            .collect();
        irreducible.sort();
        SporadicReport {
            examined: rows.len(),
            reducible: rows.len() - irreducible.len(),
            irreducible,
            rows,
        }
    }

    fn rule_order(&self, t: &Tuple) -> Vec<RuleId> {
        // delta = 1 tuples descend the dedicated chain first
        let mut order = self.cfg.rules.clone();
        if is_delta1_family(t) {
            if let Some(i) = order.iter().position(|&r| r == RuleId::Delta1Step) {
                order.remove(i);
                order.insert(0, RuleId::Delta1Step);
            }
        }
        order
    }

    /// Justification of `t`, if one exists; memoized.
    fn prove(&self, t: &Tuple) -> Option<Justification> {
        if let Some(j) = self.memo.read().expect("memo poisoned").get(t) {
            return j.clone();
        }
        let j = self.prove_uncached(t);
        self.memo
            .write()
            .expect("memo poisoned")
            .insert(*t, j.clone());
        j
    }

    fn prove_uncached(&self, t: &Tuple) -> Option<Justification> {
        if let Some(tag) = self.cfg.axioms.classify(t) {
            return Some(Justification::Axiom {
                tag,
                citation: self.cfg.axioms.citation(t).map(str::to_owned),
            });
        }
        if !good(t) {
            return None;
        }
        let admissible = |s: &Tuple| self.admissible(s);
        for rule in self.rule_order(t) {
            let found = for_each_instance(rule, t, &self.cache, &admissible, &mut |inst| {
                if inst.subgoals.iter().all(|s| self.prove(s).is_some()) {
                    ControlFlow::Break(inst)
                } else {
                    ControlFlow::Continue(())
                }
            });
            if let ControlFlow::Break(inst) = found {
                return Some(Justification::Rule {
                    proviso: (inst.rule == RuleId::Delta1Step).then(|| DELTA1_PROVISO.to_owned()),
                    rule: inst.rule,
                    params: inst.params,
                    children: inst.subgoals,
                });
            }
        }
        None
    }

    /// A good tuple below `t` with no admissible rule instance at all.
    fn blocking_tuple(&self, t: &Tuple) -> Tuple {
        let admissible = |s: &Tuple| self.admissible(s);
        for rule in self.rule_order(t) {
            if let Some(inst) = first_instance(rule, t, &self.cache, &admissible) {
                if let Some(s) = inst.subgoals.iter().find(|s| self.prove(s).is_none()) {
                    return self.blocking_tuple(s);
                }
            }
        }
        *t
    }

    /// Builds a certificate for `t` whose leaves are axioms.
    pub fn certify(&self, t: &Tuple) -> Result<Certificate, ProveError> {
        if !self.admissible(t) {
            return Err(ProveError::NotGood(*t));
        }
        if self.prove(t).is_none() {
            return Err(ProveError::Irreducible(self.blocking_tuple(t)));
        }
        let mut nodes = Vec::new();
        let mut seen = BTreeSet::new();
        let mut stack = vec![*t];
        while let Some(x) = stack.pop() {
            if !seen.insert(x) {
                continue;
            }
            let j = self
                .prove(&x)
                .expect("children of a proven node are proven");
            if let Justification::Rule { children, .. } = &j {
                for c in children.iter().rev() {
                    stack.push(*c);
                }
            }
            nodes.push(CertNode {
                tuple: x,
                justification: j,
            });
        }
        Ok(Certificate {
            version: CERTIFICATE_VERSION,
            root: *t,
            nodes,
        })
    }

    /// Like [`certify`](Self::certify) but refuses roots outside
    /// `r <= r_max`, `d <= d_max`. Rules never increase `d` or `r`, so the
    /// whole search stays inside the box.
    pub fn certify_bounded(
        &self,
        t: &Tuple,
        r_max: i64,
        d_max: i64,
    ) -> Result<Certificate, ProveError> {
        if t.r > r_max || t.d > d_max {
            return Err(ProveError::BoundsExceeded(*t));
        }
        self.certify(t)
    }
}

/// Runs the sporadic search over `r_min..=r_max` of `cfg`.
pub fn run_sporadic_search(cfg: SearchConfig) -> SporadicReport {
    let tuples = enumerate_sporadic_range(cfg.r_min, cfg.r_max);
    Prover::new(cfg).run_sporadic(&tuples)
}

/// Large-`r` coverage for one `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub r: i64,
    pub box_examined: usize,
    pub box_uncovered: Vec<Tuple>,
    pub outside_examined: usize,
    pub outside_uncovered: Vec<Tuple>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub r_min: i64,
    pub r_max: i64,
    pub rows: Vec<CoverageRow>,
}

impl CoverageReport {
    pub fn violators(&self) -> Vec<Tuple> {
        self.rows
            .iter()
            .flat_map(|r| r.box_uncovered.iter().chain(&r.outside_uncovered).copied())
            .collect()
    }
}

/// Rules of the inductive-arguments family only.
pub fn basic_rules() -> Vec<RuleId> {
    RuleId::ALL.into_iter().filter(|r| r.is_basic()).collect()
}

/// Good tuples just outside the box: `d` up to `g + 2r + 1`, `g` up to
/// `r + 1`, `m` up to `r + 1`.
fn outside_box_tuples(r: i64) -> Vec<Tuple> {
    let mut out = Vec::new();
    for g in 0..=(r + 1) {
        for d in (g + r)..=(g + 2 * r + 1) {
            for ell in 0..=(r / 2) {
                for m in 0..=(r + 1) {
                    let t = Tuple::new(d, g, r, ell, m);
                    if good(&t) && !in_box(&t) {
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

/// For each `r` in range: every good box tuple outside the `delta = 1`
/// family admits an instance of an inductive argument with good subgoals,
/// and every good tuple in a band around the box meets the hypotheses of
/// one of the large-parameter arguments with a good subgoal (or shifts into
/// the excluded list).
pub fn verify_thm14(r_min: i64, r_max: i64) -> CoverageReport {
    let cfg = SearchConfig {
        rules: basic_rules(),
        axioms: AxiomSet::default().without(crate::certificate::AxiomTag::Extra),
        ..SearchConfig::default()
    };
    let prover = Prover::new(cfg);
    let rows = (r_min..=r_max)
        .map(|r| {
            let boxed: Vec<Tuple> = box_tuples(r).into_iter().filter(in_box).collect();
            let box_uncovered: Vec<Tuple> =
                boxed
                    .par_iter()
                    .filter(|t| {
                        let ok = |s: &Tuple| good(s);
                        !prover.config().rules.iter().any(|&rule| {
                            first_instance(rule, t, prover.erasability(), &ok).is_some()
                        })
                    })
                    .copied()
                    .collect();
            let outside = outside_box_tuples(r);
            let large = [
                RuleId::GatherLines,
                RuleId::PeelOnion,
                RuleId::PancakeOnions,
            ];
            let outside_uncovered: Vec<Tuple> = outside
                .par_iter()
                .filter(|t| {
                    let ok = |s: &Tuple| good(s);
                    !(to_exc(t)
                        || large.iter().any(|&rule| {
                            first_instance(rule, t, prover.erasability(), &ok).is_some()
                        }))
                })
                .copied()
                .collect();
            CoverageRow {
                r,
                box_examined: boxed.len(),
                box_uncovered,
                outside_examined: outside.len(),
                outside_uncovered,
            }
        })
        .collect();
    CoverageReport { r_min, r_max, rows }
}
