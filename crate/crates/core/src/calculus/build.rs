//! Forward constructors: build a node from its premises, computing the
//! conclusion and the position metadata. Every constructor runs the checker
//! on the new inference, so a successful build is a checked step.

use crate::sequent::{Multiset, Sequent};
use crate::syntax::{Choice, Formula, OccurrencePath};

use super::check::{check_inference, Violation};
use super::{ContextSplit, Derivation, RuleApp};

pub type BuildResult = Result<Derivation, Violation>;

/// Assembles and checks a node with explicit metadata.
pub fn node(conclusion: Sequent, rule: RuleApp, premises: Vec<Derivation>) -> BuildResult {
    {
        let prem: Vec<&Sequent> = premises.iter().map(|p| &p.conclusion).collect();
        check_inference(&conclusion, &rule, &prem)?;
    }
    Ok(Derivation {
        rule,
        conclusion,
        premises,
    })
}

fn missing(rule: &'static str, what: &Formula, place: &str) -> Violation {
    Violation::Rule {
        rule,
        reason: format!("active formula `{what}` missing from the premise {place}"),
    }
}

fn take(m: &Multiset, f: &Formula, rule: &'static str, place: &str) -> Result<Multiset, Violation> {
    m.without(f).ok_or_else(|| missing(rule, f, place))
}

fn ante_pos(s: &Sequent, f: &Formula) -> usize {
    s.antecedent.position(f).expect("principal formula was just inserted")
}

fn succ_pos(s: &Sequent, f: &Formula) -> usize {
    s.succedent.position(f).expect("principal formula was just inserted")
}

/// An axiom for `s` if one applies: LBot first, then At on the first shared
/// variable.
pub fn axiom(s: &Sequent) -> Option<Derivation> {
    if let Some(i) = s.antecedent.position(&Formula::Bot) {
        return Some(Derivation {
            rule: RuleApp::LBot { ante: i },
            conclusion: s.clone(),
            premises: vec![],
        });
    }
    for (i, f) in s.antecedent.iter().enumerate() {
        if matches!(f, Formula::Prop(_)) {
            if let Some(j) = s.succedent.position(f) {
                return Some(Derivation {
                    rule: RuleApp::At { ante: i, succ: j },
                    conclusion: s.clone(),
                    premises: vec![],
                });
            }
        }
    }
    None
}

pub fn l_neg(prem: Derivation, alpha: &Formula) -> BuildResult {
    let s = &prem.conclusion;
    let delta = take(&s.succedent, alpha, "LNeg", "succedent")?;
    let principal = Formula::try_neg(alpha.clone()).map_err(|e| Violation::Rule {
        rule: "LNeg",
        reason: e.to_string(),
    })?;
    let c = Sequent::new(s.antecedent.with(principal.clone()), delta);
    let rule = RuleApp::LNeg { ante: ante_pos(&c, &principal) };
    node(c, rule, vec![prem])
}

pub fn r_neg(prem: Derivation, alpha: &Formula) -> BuildResult {
    let s = &prem.conclusion;
    let gamma = take(&s.antecedent, alpha, "RNeg", "antecedent")?;
    let principal = Formula::try_neg(alpha.clone()).map_err(|e| Violation::Rule {
        rule: "RNeg",
        reason: e.to_string(),
    })?;
    let c = Sequent::new(gamma, s.succedent.with(principal.clone()));
    let rule = RuleApp::RNeg { succ: succ_pos(&c, &principal) };
    node(c, rule, vec![prem])
}

pub fn l_and(prem: Derivation, a: &Formula, b: &Formula) -> BuildResult {
    let s = &prem.conclusion;
    let gamma = take(&s.antecedent, a, "LAnd", "antecedent")?;
    let gamma = take(&gamma, b, "LAnd", "antecedent")?;
    let principal = Formula::and(a.clone(), b.clone());
    let c = Sequent::new(gamma.with(principal.clone()), s.succedent.clone());
    let rule = RuleApp::LAnd { ante: ante_pos(&c, &principal) };
    node(c, rule, vec![prem])
}

/// `p1: Γ ⇒ a, Λ` and `p2: Γ ⇒ b, Λ` give `Γ ⇒ a∧b, Λ, W`.
pub fn r_and(p1: Derivation, p2: Derivation, a: &Formula, b: &Formula, weakening: &Multiset) -> BuildResult {
    let context = take(&p1.conclusion.succedent, a, "RAnd", "succedent")?;
    let principal = Formula::and(a.clone(), b.clone());
    let c = Sequent::new(
        p1.conclusion.antecedent.clone(),
        context.union(weakening).with(principal.clone()),
    );
    let rule = RuleApp::RAnd {
        succ: succ_pos(&c, &principal),
        context,
        weakening: weakening.clone(),
    };
    node(c, rule, vec![p1, p2])
}

/// `p1: Γ, a ⇒ Λ` and `p2: Γ, b ⇒ Λ` give `Γ, a∨b ⇒ Λ, W`.
pub fn l_or(p1: Derivation, p2: Derivation, a: &Formula, b: &Formula, weakening: &Multiset) -> BuildResult {
    let gamma = take(&p1.conclusion.antecedent, a, "LOr", "antecedent")?;
    let context = p1.conclusion.succedent.clone();
    let principal = Formula::or(a.clone(), b.clone());
    let c = Sequent::new(gamma.with(principal.clone()), context.union(weakening));
    let rule = RuleApp::LOr {
        ante: ante_pos(&c, &principal),
        context,
        weakening: weakening.clone(),
    };
    node(c, rule, vec![p1, p2])
}

pub fn r_or(prem: Derivation, a: &Formula, b: &Formula) -> BuildResult {
    let s = &prem.conclusion;
    let delta = take(&s.succedent, a, "ROr", "succedent")?;
    let delta = take(&delta, b, "ROr", "succedent")?;
    let principal = Formula::or(a.clone(), b.clone());
    let c = Sequent::new(s.antecedent.clone(), delta.with(principal.clone()));
    let rule = RuleApp::ROr { succ: succ_pos(&c, &principal) };
    node(c, rule, vec![prem])
}

fn resolved(chi: &Formula, path: &OccurrencePath, side: Choice, rule: &'static str) -> Result<Formula, Violation> {
    chi.resolve_at(path, side).map_err(|e| Violation::Rule {
        rule,
        reason: e.to_string(),
    })
}

/// `chi` is the principal formula of the conclusion and `path` addresses the
/// principal `||` inside it.
pub fn l_gd(p1: Derivation, p2: Derivation, chi: &Formula, path: &OccurrencePath) -> BuildResult {
    let left = resolved(chi, path, Choice::L, "LGd")?;
    let gamma = take(&p1.conclusion.antecedent, &left, "LGd", "antecedent")?;
    let c = Sequent::new(gamma.with(chi.clone()), p1.conclusion.succedent.clone());
    let rule = RuleApp::LGd {
        ante: ante_pos(&c, chi),
        path: path.clone(),
    };
    node(c, rule, vec![p1, p2])
}

pub fn r_gd(prem: Derivation, chi: &Formula, path: &OccurrencePath, side: Choice) -> BuildResult {
    let active = resolved(chi, path, side, "RGd")?;
    let delta = take(&prem.conclusion.succedent, &active, "RGd", "succedent")?;
    let c = Sequent::new(prem.conclusion.antecedent.clone(), delta.with(chi.clone()));
    let rule = RuleApp::RGd {
        succ: succ_pos(&c, chi),
        path: path.clone(),
        side,
    };
    node(c, rule, vec![prem])
}

/// `p1: Γ ⇒ φ, Δ` and `p2: Π, φ ⇒ Σ` give `Π, Γ ⇒ Δ, Σ`.
pub fn cut(p1: Derivation, p2: Derivation, phi: &Formula) -> BuildResult {
    let delta = take(&p1.conclusion.succedent, phi, "Cut", "succedent")?;
    let pi = take(&p2.conclusion.antecedent, phi, "Cut", "antecedent")?;
    let c = Sequent::new(pi.union(&p1.conclusion.antecedent), delta.union(&p2.conclusion.succedent));
    node(c, RuleApp::Cut { formula: phi.clone() }, vec![p1, p2])
}

/// `p1: Γ1, a ⇒ Δ1` and `p2: Γ2, b ⇒ Δ2` give `Γ1, Γ2, a∨b ⇒ Δ1, Δ2`.
pub fn l_or_i(p1: Derivation, p2: Derivation, a: &Formula, b: &Formula) -> BuildResult {
    let g1 = take(&p1.conclusion.antecedent, a, "LOrI", "antecedent")?;
    let g2 = take(&p2.conclusion.antecedent, b, "LOrI", "antecedent")?;
    let principal = Formula::or(a.clone(), b.clone());
    let c = Sequent::new(
        g1.union(&g2).with(principal.clone()),
        p1.conclusion.succedent.union(&p2.conclusion.succedent),
    );
    let rule = RuleApp::LOrI {
        ante: ante_pos(&c, &principal),
        split: ContextSplit {
            antecedent: g1,
            succedent: p1.conclusion.succedent.clone(),
        },
    };
    node(c, rule, vec![p1, p2])
}

/// `p1: Γ1 ⇒ a, Δ1` and `p2: Γ2 ⇒ b, Δ2` give `Γ1, Γ2 ⇒ a∧b, Δ1, Δ2`.
pub fn r_and_i(p1: Derivation, p2: Derivation, a: &Formula, b: &Formula) -> BuildResult {
    let d1 = take(&p1.conclusion.succedent, a, "RAndI", "succedent")?;
    let d2 = take(&p2.conclusion.succedent, b, "RAndI", "succedent")?;
    let principal = Formula::and(a.clone(), b.clone());
    let c = Sequent::new(
        p1.conclusion.antecedent.union(&p2.conclusion.antecedent),
        d1.union(&d2).with(principal.clone()),
    );
    let rule = RuleApp::RAndI {
        succ: succ_pos(&c, &principal),
        split: ContextSplit {
            antecedent: p1.conclusion.antecedent.clone(),
            succedent: d1,
        },
    };
    node(c, rule, vec![p1, p2])
}

pub fn l_c(prem: Derivation, f: &Formula) -> BuildResult {
    let gamma = take(&prem.conclusion.antecedent, f, "LC", "antecedent")?;
    let c = Sequent::new(gamma, prem.conclusion.succedent.clone());
    let pos = c.antecedent.position(f).ok_or_else(|| missing("LC", f, "antecedent twice"))?;
    node(c, RuleApp::LC { ante: pos }, vec![prem])
}

pub fn r_c(prem: Derivation, f: &Formula) -> BuildResult {
    let delta = take(&prem.conclusion.succedent, f, "RC", "succedent")?;
    let c = Sequent::new(prem.conclusion.antecedent.clone(), delta);
    let pos = c.succedent.position(f).ok_or_else(|| missing("RC", f, "succedent twice"))?;
    node(c, RuleApp::RC { succ: pos }, vec![prem])
}
