//! Derivations in GT and GT′, their JSON form and the checker.

mod build;
mod check;

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::sequent::{Multiset, Sequent};
use crate::syntax::{Choice, Formula, OccurrencePath};

pub use build::*;
pub use check::{check_derivation, check_inference, LocatedViolation, Violation};

/// Contexts of the first premise of an independent-context rule (Γ1 and Δ1);
/// the second premise gets the remainder.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContextSplit {
    pub antecedent: Multiset,
    pub succedent: Multiset,
}

/// A rule tag with its metadata. Positions index the conclusion's
/// antecedent (`ante`) or succedent (`succ`) in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", content = "meta")]
pub enum RuleApp {
    At { ante: usize, succ: usize },
    LBot { ante: usize },
    LNeg { ante: usize },
    RNeg { succ: usize },
    LAnd { ante: usize },
    /// `context` is the classical Λ shared by the premises, `weakening` the Δ
    /// added in the conclusion only.
    RAnd { succ: usize, context: Multiset, weakening: Multiset },
    LOr { ante: usize, context: Multiset, weakening: Multiset },
    ROr { succ: usize },
    LGd { ante: usize, path: OccurrencePath },
    RGd { succ: usize, path: OccurrencePath, side: Choice },
    Cut { formula: Formula },
    LOrI { ante: usize, split: ContextSplit },
    RAndI { succ: usize, split: ContextSplit },
    LC { ante: usize },
    RC { succ: usize },
}

pub const RULE_NAMES: [&str; 15] = [
    "At", "LBot", "LNeg", "RNeg", "LAnd", "RAnd", "LOr", "ROr", "LGd", "RGd", "Cut", "LOrI", "RAndI", "LC", "RC",
];

/// Normal-form phase of a rule: classical rules, then RGd, then LGd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    Classical,
    RightGd,
    LeftGd,
}

impl RuleApp {
    pub fn name(&self) -> &'static str {
        match self {
            RuleApp::At { .. } => "At",
            RuleApp::LBot { .. } => "LBot",
            RuleApp::LNeg { .. } => "LNeg",
            RuleApp::RNeg { .. } => "RNeg",
            RuleApp::LAnd { .. } => "LAnd",
            RuleApp::RAnd { .. } => "RAnd",
            RuleApp::LOr { .. } => "LOr",
            RuleApp::ROr { .. } => "ROr",
            RuleApp::LGd { .. } => "LGd",
            RuleApp::RGd { .. } => "RGd",
            RuleApp::Cut { .. } => "Cut",
            RuleApp::LOrI { .. } => "LOrI",
            RuleApp::RAndI { .. } => "RAndI",
            RuleApp::LC { .. } => "LC",
            RuleApp::RC { .. } => "RC",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            RuleApp::At { .. } | RuleApp::LBot { .. } => 0,
            RuleApp::RAnd { .. }
            | RuleApp::LOr { .. }
            | RuleApp::LGd { .. }
            | RuleApp::Cut { .. }
            | RuleApp::LOrI { .. }
            | RuleApp::RAndI { .. } => 2,
            _ => 1,
        }
    }

    pub fn phase(&self) -> Phase {
        match self {
            RuleApp::LGd { .. } => Phase::LeftGd,
            RuleApp::RGd { .. } => Phase::RightGd,
            _ => Phase::Classical,
        }
    }

    /// Rules of GT′ that are not rules of GT.
    pub fn is_gt_prime_only(&self) -> bool {
        matches!(self, RuleApp::LOrI { .. } | RuleApp::RAndI { .. } | RuleApp::LC { .. } | RuleApp::RC { .. })
    }

    /// Rules of GT that GT′ replaces.
    pub fn is_gt_only(&self) -> bool {
        matches!(self, RuleApp::LOr { .. } | RuleApp::RAnd { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Derivation {
    #[serde(flatten)]
    pub rule: RuleApp,
    pub conclusion: Sequent,
    #[serde(default)]
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Largest symbol count of a cutformula, 0 when cutfree.
    pub fn cutrank(&self) -> usize {
        let own = match &self.rule {
            RuleApp::Cut { formula } => formula.symbol_count(),
            _ => 0,
        };
        self.premises.iter().map(Derivation::cutrank).fold(own, usize::max)
    }

    pub fn cut_count(&self) -> usize {
        let own = usize::from(matches!(self.rule, RuleApp::Cut { .. }));
        own + self.premises.iter().map(Derivation::cut_count).sum::<usize>()
    }

    pub fn is_cutfree(&self) -> bool {
        self.cut_count() == 0
    }

    pub fn any_rule(&self, pred: &impl Fn(&RuleApp) -> bool) -> bool {
        pred(&self.rule) || self.premises.iter().any(|p| p.any_rule(pred))
    }

    /// Uses only rules of GT.
    pub fn is_gt(&self) -> bool {
        !self.any_rule(&RuleApp::is_gt_prime_only)
    }

    /// Uses only rules of GT′.
    pub fn is_gt_prime(&self) -> bool {
        !self.any_rule(&RuleApp::is_gt_only)
    }

    /// Only classical rules (no deep rules).
    pub fn is_classical_proof(&self) -> bool {
        !self.any_rule(&|r| r.phase() != Phase::Classical)
    }

    /// On every root-to-leaf path LGd nodes come first, then RGd, then
    /// classical rules.
    pub fn is_phase_ordered(&self) -> bool {
        fn go(d: &Derivation, bound: Phase) -> bool {
            let ph = d.rule.phase();
            ph <= bound && d.premises.iter().all(|p| go(p, ph))
        }
        go(self, Phase::LeftGd)
    }

    pub fn at_address(&self, address: &[usize]) -> Option<&Derivation> {
        let mut cur = self;
        for &i in address {
            cur = cur.premises.get(i)?;
        }
        Some(cur)
    }

    /// Leaves of the topmost maximal classical segments (nodes whose rule is
    /// classical and whose ancestors include a deep rule or the root).
    pub fn classical_parts(&self) -> Vec<&Derivation> {
        let mut out = Vec::new();
        fn go<'a>(d: &'a Derivation, out: &mut Vec<&'a Derivation>) {
            if d.rule.phase() == Phase::Classical {
                out.push(d);
            } else {
                for p in &d.premises {
                    go(p, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("derivations serialize")
    }

    /// Indented rule/sequent listing, root first.
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        fn go(d: &Derivation, depth: usize, s: &mut String) {
            s.push_str(&format!("{}{}  [{}]\n", "  ".repeat(depth), d.conclusion, d.rule.name()));
            for p in &d.premises {
                go(p, depth + 1, s);
            }
        }
        go(self, 0, &mut s);
        s
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error("at {address:?}: {violation}")]
    Violation { address: Vec<usize>, violation: Violation },
    #[error("at {address:?}: malformed node: {message}")]
    Malformed { address: Vec<usize>, message: String },
}

/// Reads derivation JSON node by node so that unknown rules are reported with
/// their tree address.
pub fn load_derivation(v: &Value) -> Result<Derivation, LoadError> {
    fn go(v: &Value, address: &mut Vec<usize>) -> Result<Derivation, LoadError> {
        let malformed = |address: &Vec<usize>, message: String| LoadError::Malformed {
            address: address.clone(),
            message,
        };
        let obj = v
            .as_object()
            .ok_or_else(|| malformed(address, "expected an object".into()))?;
        let name = obj
            .get("rule")
            .and_then(Value::as_str)
            .ok_or_else(|| malformed(address, "missing `rule`".into()))?;
        if !RULE_NAMES.contains(&name) {
            return Err(LoadError::Violation {
                address: address.clone(),
                violation: Violation::UnknownRule { name: name.to_string() },
            });
        }
        let mut head = serde_json::Map::new();
        head.insert("rule".into(), Value::String(name.to_string()));
        head.insert("meta".into(), obj.get("meta").cloned().unwrap_or(Value::Object(Default::default())));
        let rule: RuleApp =
            serde_json::from_value(Value::Object(head)).map_err(|e| malformed(address, e.to_string()))?;
        let conclusion: Sequent = serde_json::from_value(
            obj.get("conclusion")
                .cloned()
                .ok_or_else(|| malformed(address, "missing `conclusion`".into()))?,
        )
        .map_err(|e| malformed(address, e.to_string()))?;
        let mut premises = Vec::new();
        if let Some(ps) = obj.get("premises") {
            let ps = ps
                .as_array()
                .ok_or_else(|| malformed(address, "`premises` must be an array".into()))?;
            for (i, p) in ps.iter().enumerate() {
                address.push(i);
                premises.push(go(p, address)?);
                address.pop();
            }
        }
        Ok(Derivation {
            rule,
            conclusion,
            premises,
        })
    }
    go(v, &mut Vec::new())
}
