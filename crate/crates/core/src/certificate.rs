//! Axiom sets, reduction certificates and the independent re-checker.
//!
//! The checker only calls [`rules::apply`](crate::rules::apply) and the
//! axiom predicates; it never consults the search.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::SPORADIC30;
use crate::erasability::ErasabilityCache;
use crate::rules::{apply_with, RuleId, RuleParams};
use crate::tuple::{good, Tuple};

pub const CERTIFICATE_VERSION: u32 = 1;

/// The geometric facts the reductions bottom out in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomTag {
    /// Good tuples with `r <= 2`.
    SmallR,
    /// `(5g + 1, g, 4g + 1, 0, 0)`.
    Delta1Base,
    /// The 30 irreducible sporadic tuples.
    Sporadic30,
    /// `(2r, r + 1, r, 0, 0)` with `r` odd.
    CanonicalEven,
    /// User-supplied tuples with a citation.
    Extra,
}

impl AxiomTag {
    pub const ALL: [AxiomTag; 5] = [
        AxiomTag::SmallR,
        AxiomTag::Delta1Base,
        AxiomTag::Sporadic30,
        AxiomTag::CanonicalEven,
        AxiomTag::Extra,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomTag::SmallR => "small-r",
            AxiomTag::Delta1Base => "delta1-base",
            AxiomTag::Sporadic30 => "sporadic30",
            AxiomTag::CanonicalEven => "canonical-even",
            AxiomTag::Extra => "extra",
        }
    }
}

impl fmt::Display for AxiomTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown axiom tag `{s}`"))
    }
}

/// One entry of an axiom override file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraAxiom {
    pub tuple: Tuple,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSet {
    enabled: [bool; 5],
    extra: HashMap<Tuple, String>,
}

impl Default for AxiomSet {
    fn default() -> Self {
        AxiomSet {
            enabled: [true; 5],
            extra: HashMap::new(),
        }
    }
}

impl AxiomSet {
    pub fn without(mut self, tag: AxiomTag) -> Self {
        self.enabled[tag as usize] = false;
        self
    }

    pub fn with_extra(mut self, extra: impl IntoIterator<Item = ExtraAxiom>) -> Self {
        for e in extra {
            self.extra.insert(e.tuple, e.citation);
        }
        self
    }

    /// Parses an override file: a JSON array of `{"tuple": [..], "citation": ".."}`.
    pub fn extra_from_json(s: &str) -> Result<Vec<ExtraAxiom>, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn extras(&self) -> impl Iterator<Item = (&Tuple, &String)> {
        self.extra.iter()
    }

    pub fn has(&self, tag: AxiomTag) -> bool {
        self.enabled[tag as usize]
    }

    /// Whether `t` is an instance of `tag` (ignoring whether it is enabled).
    pub fn matches(&self, tag: AxiomTag, t: &Tuple) -> bool {
        match tag {
            AxiomTag::SmallR => t.r <= 2 && good(t),
            AxiomTag::Delta1Base => {
                t.g >= 1 && *t == Tuple::new(5 * t.g + 1, t.g, 4 * t.g + 1, 0, 0)
            }
            AxiomTag::Sporadic30 => t.r <= 7 && SPORADIC30.contains(t),
            AxiomTag::CanonicalEven => {
                t.r % 2 == 1 && *t == Tuple::new(2 * t.r, t.r + 1, t.r, 0, 0)
            }
            AxiomTag::Extra => self.extra.contains_key(t),
        }
    }

    /// First enabled tag covering `t`.
    pub fn classify(&self, t: &Tuple) -> Option<AxiomTag> {
        AxiomTag::ALL
            .into_iter()
            .find(|&tag| self.has(tag) && self.matches(tag, t))
    }

    pub fn contains(&self, t: &Tuple) -> bool {
        self.classify(t).is_some()
    }

    pub fn citation(&self, t: &Tuple) -> Option<&str> {
        self.extra.get(t).map(String::as_str)
    }
}

/// Why a node holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Justification {
    Axiom {
        tag: AxiomTag,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        citation: Option<String>,
    },
    Rule {
        rule: RuleId,
        params: RuleParams,
        children: Vec<Tuple>,
        /// Hypothesis recorded but not checked arithmetically.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        proviso: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertNode {
    pub tuple: Tuple,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: u32,
    pub root: Tuple,
    pub nodes: Vec<CertNode>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn node(&self, t: &Tuple) -> Option<&CertNode> {
        self.nodes.iter().find(|n| n.tuple == *t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("unsupported certificate version {0}")]
    UnsupportedVersion(u32),
    #[error("root {0} has no node")]
    MissingRoot(Tuple),
    #[error("{0} has more than one node")]
    DuplicateNode(Tuple),
    #[error("{tuple} is not an instance of axiom `{tag}` in the active axiom set")]
    NotAnAxiom { tuple: Tuple, tag: AxiomTag },
    #[error("rule applied to {0}, which is neither good nor an axiom")]
    NotGood(Tuple),
    #[error("edge {parent} -> {child} does not decrease (r, d, m)")]
    MeasureViolation { parent: Tuple, child: Tuple },
    #[error("rule `{rule}` does not apply to {tuple}: {reason}")]
    RuleFailed {
        tuple: Tuple,
        rule: RuleId,
        reason: String,
    },
    #[error("rule at {tuple} yields {expected:?}, certificate lists {found:?}")]
    ChildMismatch {
        tuple: Tuple,
        expected: Vec<Tuple>,
        found: Vec<Tuple>,
    },
    #[error("child {child} of {parent} has no node")]
    MissingChild { parent: Tuple, child: Tuple },
}

/// Summary of a verified certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertStats {
    pub nodes: usize,
    pub rule_nodes: usize,
    pub axiom_nodes: usize,
    /// Longest root-to-leaf path, counted in edges.
    pub depth: usize,
}

/// Re-checks every node: axiom membership, rule hypotheses, agreement of
/// the listed children with a fresh application, strict decrease of
/// `(r, d, m)` on every edge, and that every child has a node.
pub fn verify_certificate(c: &Certificate, axioms: &AxiomSet) -> Result<CertStats, CertError> {
    verify_certificate_with(c, axioms, &ErasabilityCache::default())
}

pub fn verify_certificate_with(
    c: &Certificate,
    axioms: &AxiomSet,
    cache: &ErasabilityCache,
) -> Result<CertStats, CertError> {
    if c.version != CERTIFICATE_VERSION {
        return Err(CertError::UnsupportedVersion(c.version));
    }
    let mut by_tuple: BTreeMap<Tuple, &Justification> = BTreeMap::new();
    for n in &c.nodes {
        if by_tuple.insert(n.tuple, &n.justification).is_some() {
            return Err(CertError::DuplicateNode(n.tuple));
        }
    }
    if !by_tuple.contains_key(&c.root) {
        return Err(CertError::MissingRoot(c.root));
    }
    let (mut rule_nodes, mut axiom_nodes) = (0, 0);
    for n in &c.nodes {
        match &n.justification {
            Justification::Axiom { tag, .. } => {
                if !(axioms.has(*tag) && axioms.matches(*tag, &n.tuple)) {
                    return Err(CertError::NotAnAxiom {
                        tuple: n.tuple,
                        tag: *tag,
                    });
                }
                axiom_nodes += 1;
            }
            Justification::Rule {
                rule,
                params,
                children,
                ..
            } => {
                if !good(&n.tuple) && !axioms.contains(&n.tuple) {
                    return Err(CertError::NotGood(n.tuple));
                }
                for child in children {
                    if child.measure() >= n.tuple.measure() {
                        return Err(CertError::MeasureViolation {
                            parent: n.tuple,
                            child: *child,
                        });
                    }
                }
                let expected = apply_with(*rule, &n.tuple, params, cache).map_err(|e| {
                    CertError::RuleFailed {
                        tuple: n.tuple,
                        rule: *rule,
                        reason: e.to_string(),
                    }
                })?;
                if expected != *children {
                    return Err(CertError::ChildMismatch {
                        tuple: n.tuple,
                        expected,
                        found: children.clone(),
                    });
                }
                for child in children {
                    if !by_tuple.contains_key(child) {
                        return Err(CertError::MissingChild {
                            parent: n.tuple,
                            child: *child,
                        });
                    }
                }
                rule_nodes += 1;
            }
        }
    }
    // Edges strictly decrease the measure, so processing in increasing
    // measure order sees every child before its parent.
    let mut depth: BTreeMap<Tuple, usize> = BTreeMap::new();
    let mut order: Vec<Tuple> = by_tuple.keys().copied().collect();
    order.sort_by_key(Tuple::measure);
    for t in order {
        let dep = match by_tuple[&t] {
            Justification::Axiom { .. } => 0,
            Justification::Rule { children, .. } => {
                1 + children.iter().map(|c| depth[c]).max().unwrap_or(0)
            }
        };
        depth.insert(t, dep);
    }
    Ok(CertStats {
        nodes: c.nodes.len(),
        rule_nodes,
        axiom_nodes,
        depth: depth[&c.root],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axiom_membership() {
        let ax = AxiomSet::default();
        assert_eq!(
            ax.classify(&Tuple::new(16, 3, 13, 0, 0)),
            Some(AxiomTag::Delta1Base)
        );
        assert_eq!(
            ax.classify(&Tuple::new(9, 2, 5, 0, 0)),
            Some(AxiomTag::Sporadic30)
        );
        assert_eq!(
            ax.classify(&Tuple::new(10, 6, 5, 0, 0)),
            Some(AxiomTag::CanonicalEven)
        );
        assert_eq!(
            ax.classify(&Tuple::new(3, 0, 2, 1, 0)),
            Some(AxiomTag::SmallR)
        );
        assert_eq!(ax.classify(&Tuple::new(6, 1, 5, 3, 0)), None);
        let ax = ax
            .with_extra([ExtraAxiom {
                tuple: Tuple::new(6, 1, 5, 3, 0),
                citation: "reduces to (5, 1, 4, 0, 0) via master".into(),
            }])
            .without(AxiomTag::Sporadic30);
        assert_eq!(
            ax.classify(&Tuple::new(6, 1, 5, 3, 0)),
            Some(AxiomTag::Extra)
        );
        assert_eq!(ax.classify(&Tuple::new(9, 2, 5, 0, 0)), None);
    }

    #[test]
    fn extra_file_format() {
        let s = r#"[{"tuple": [6, 1, 5, 3, 0], "citation": "ad hoc"}]"#;
        let v = AxiomSet::extra_from_json(s).unwrap();
        assert_eq!(v[0].tuple, Tuple::new(6, 1, 5, 3, 0));
    }

    fn gather_cert() -> Certificate {
        Certificate {
            version: CERTIFICATE_VERSION,
            root: Tuple::new(13, 2, 6, 1, 0),
            nodes: vec![
                CertNode {
                    tuple: Tuple::new(13, 2, 6, 1, 0),
                    justification: Justification::Rule {
                        rule: RuleId::GatherLines,
                        params: RuleParams::default(),
                        children: vec![Tuple::new(8, 2, 6, 1, 0)],
                        proviso: None,
                    },
                },
                CertNode {
                    tuple: Tuple::new(8, 2, 6, 1, 0),
                    justification: Justification::Axiom {
                        tag: AxiomTag::Extra,
                        citation: Some("test".into()),
                    },
                },
            ],
        }
    }

    #[test]
    fn tamper_detection() {
        let ax = AxiomSet::default().with_extra([ExtraAxiom {
            tuple: Tuple::new(8, 2, 6, 1, 0),
            citation: "test".into(),
        }]);
        let c = gather_cert();
        assert_eq!(verify_certificate(&c, &ax).unwrap().depth, 1);

        let mut bad = c.clone();
        if let Justification::Rule { children, .. } = &mut bad.nodes[0].justification {
            children[0].d -= 1;
        }
        assert!(matches!(
            verify_certificate(&bad, &ax),
            Err(CertError::ChildMismatch { .. })
        ));

        let mut cyc = c.clone();
        cyc.nodes[1].justification = Justification::Rule {
            rule: RuleId::GatherLines,
            params: RuleParams::default(),
            children: vec![Tuple::new(13, 2, 6, 1, 0)],
            proviso: None,
        };
        assert!(matches!(
            verify_certificate(&cyc, &ax),
            Err(CertError::MeasureViolation { .. })
        ));

        assert!(matches!(
            verify_certificate(&c, &AxiomSet::default()),
            Err(CertError::NotAnAxiom { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let c = gather_cert();
        let s = c.to_json();
        assert!(s.contains("\"gather-lines\""));
        assert_eq!(Certificate::from_json(&s).unwrap(), c);
    }
}
