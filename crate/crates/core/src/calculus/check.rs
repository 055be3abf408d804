use std::fmt;

use crate::sequent::{Multiset, Sequent};
use crate::syntax::{Formula, OccurrencePath};

use super::{ContextSplit, Derivation, RuleApp};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("{rule}: {reason}")]
    Rule { rule: &'static str, reason: String },
    #[error("{rule}: expected {expected} premise(s), found {found}")]
    Arity {
        rule: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("unknown rule `{name}`")]
    UnknownRule { name: String },
}

/// A violation together with the address (premise indices from the root) of
/// the offending node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocatedViolation {
    pub address: Vec<usize>,
    pub violation: Violation,
}

impl fmt::Display for LocatedViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {:?}: {}", self.address, self.violation)
    }
}

impl std::error::Error for LocatedViolation {}

struct Ctx<'a> {
    rule: &'static str,
    conclusion: &'a Sequent,
}

impl<'a> Ctx<'a> {
    fn fail<T>(&self, reason: impl Into<String>) -> Result<T, Violation> {
        Err(Violation::Rule {
            rule: self.rule,
            reason: reason.into(),
        })
    }

    fn ante(&self, i: usize) -> Result<(&'a Formula, Multiset), Violation> {
        match self.conclusion.antecedent.get(i) {
            Some(f) => Ok((f, self.conclusion.antecedent.remove_at(i))),
            None => self.fail(format!("antecedent position {i} out of range")),
        }
    }

    fn succ(&self, i: usize) -> Result<(&'a Formula, Multiset), Violation> {
        match self.conclusion.succedent.get(i) {
            Some(f) => Ok((f, self.conclusion.succedent.remove_at(i))),
            None => self.fail(format!("succedent position {i} out of range")),
        }
    }

    fn premise(&self, which: &str, found: &Sequent, expected: Sequent) -> Result<(), Violation> {
        if *found == expected {
            Ok(())
        } else {
            self.fail(format!("{which} premise is `{found}`, expected `{expected}`"))
        }
    }

    fn gd_at<'f>(&self, host: &'f Formula, path: &OccurrencePath) -> Result<(&'f Formula, &'f Formula), Violation> {
        match host.at(path) {
            Some(Formula::Gd(l, r)) => {
                if host.path_under_negation(path) {
                    self.fail("principal subformula lies under a negation")
                } else {
                    Ok((l, r))
                }
            }
            Some(_) => self.fail(format!("path {path} does not address a `||` in `{host}`")),
            None => self.fail(format!("path {path} is not valid in `{host}`")),
        }
    }
}

fn binary<'f>(f: &'f Formula, want: &str) -> Option<(&'f Formula, &'f Formula)> {
    match (f, want) {
        (Formula::And(a, b), "and") | (Formula::Or(a, b), "or") => Some((a, b)),
        _ => None,
    }
}

fn substituted(host: &Formula, path: &OccurrencePath, with: &Formula) -> Formula {
    host.substitute_at(path, with)
        .expect("replacing a || occurrence by one of its disjuncts is always well formed")
}

/// Checks a single inference against the rule tag and its metadata.
pub fn check_inference(conclusion: &Sequent, rule: &RuleApp, premises: &[&Sequent]) -> Result<(), Violation> {
    let name = rule.name();
    if premises.len() != rule.arity() {
        return Err(Violation::Arity {
            rule: name,
            expected: rule.arity(),
            found: premises.len(),
        });
    }
    let cx = Ctx { rule: name, conclusion };
    if let Some(bad) = conclusion
        .antecedent
        .iter()
        .chain(conclusion.succedent.iter())
        .find(|f| !f.well_formed())
    {
        return cx.fail(format!("ill-formed formula `{bad}` in conclusion"));
    }
    let gamma = &conclusion.antecedent;
    let delta = &conclusion.succedent;
    match rule {
        RuleApp::At { ante, succ } => {
            let (a, _) = cx.ante(*ante)?;
            let (s, _) = cx.succ(*succ)?;
            if !matches!(a, Formula::Prop(_)) {
                return cx.fail(format!("`{a}` is not a propositional variable"));
            }
            if a != s {
                return cx.fail(format!("`{a}` and `{s}` differ"));
            }
            Ok(())
        }
        RuleApp::LBot { ante } => match cx.ante(*ante)? {
            (Formula::Bot, _) => Ok(()),
            (f, _) => cx.fail(format!("`{f}` is not bot")),
        },
        RuleApp::LNeg { ante } => {
            let (f, rest) = cx.ante(*ante)?;
            let Formula::Neg(a) = f else {
                return cx.fail(format!("`{f}` is not a negation"));
            };
            if !a.is_classical() {
                return cx.fail("active formula is not classical");
            }
            cx.premise("the", premises[0], Sequent::new(rest, delta.with((**a).clone())))
        }
        RuleApp::RNeg { succ } => {
            let (f, rest) = cx.succ(*succ)?;
            let Formula::Neg(a) = f else {
                return cx.fail(format!("`{f}` is not a negation"));
            };
            if !a.is_classical() {
                return cx.fail("active formula is not classical");
            }
            cx.premise("the", premises[0], Sequent::new(gamma.with((**a).clone()), rest))
        }
        RuleApp::LAnd { ante } => {
            let (f, rest) = cx.ante(*ante)?;
            let Some((a, b)) = binary(f, "and") else {
                return cx.fail(format!("`{f}` is not a conjunction"));
            };
            cx.premise("the", premises[0], Sequent::new(rest.with(a.clone()).with(b.clone()), delta.clone()))
        }
        RuleApp::RAnd {
            succ,
            context,
            weakening,
        } => {
            let (f, rest) = cx.succ(*succ)?;
            let Some((a, b)) = binary(f, "and") else {
                return cx.fail(format!("`{f}` is not a conjunction"));
            };
            if !context.is_classical() {
                return cx.fail(format!("premise right context `{context}` is not classical"));
            }
            if rest != context.union(weakening) {
                return cx.fail(format!("side formulas `{rest}` are not context `{context}` plus weakening `{weakening}`"));
            }
            cx.premise("first", premises[0], Sequent::new(gamma.clone(), context.with(a.clone())))?;
            cx.premise("second", premises[1], Sequent::new(gamma.clone(), context.with(b.clone())))
        }
        RuleApp::LOr {
            ante,
            context,
            weakening,
        } => {
            let (f, rest) = cx.ante(*ante)?;
            let Some((a, b)) = binary(f, "or") else {
                return cx.fail(format!("`{f}` is not a split disjunction"));
            };
            if !context.is_classical() {
                return cx.fail(format!("premise right context `{context}` is not classical"));
            }
            if *delta != context.union(weakening) {
                return cx.fail(format!("succedent `{delta}` is not context `{context}` plus weakening `{weakening}`"));
            }
            cx.premise("first", premises[0], Sequent::new(rest.with(a.clone()), context.clone()))?;
            cx.premise("second", premises[1], Sequent::new(rest.with(b.clone()), context.clone()))
        }
        RuleApp::ROr { succ } => {
            let (f, rest) = cx.succ(*succ)?;
            let Some((a, b)) = binary(f, "or") else {
                return cx.fail(format!("`{f}` is not a split disjunction"));
            };
            cx.premise("the", premises[0], Sequent::new(gamma.clone(), rest.with(a.clone()).with(b.clone())))
        }
        RuleApp::LGd { ante, path } => {
            let (f, rest) = cx.ante(*ante)?;
            let (l, r) = cx.gd_at(f, path)?;
            cx.premise("first", premises[0], Sequent::new(rest.with(substituted(f, path, l)), delta.clone()))?;
            cx.premise("second", premises[1], Sequent::new(rest.with(substituted(f, path, r)), delta.clone()))
        }
        RuleApp::RGd { succ, path, side } => {
            let (f, rest) = cx.succ(*succ)?;
            let (l, r) = cx.gd_at(f, path)?;
            let chosen = match side {
                crate::syntax::Choice::L => l,
                crate::syntax::Choice::R => r,
            };
            cx.premise("the", premises[0], Sequent::new(gamma.clone(), rest.with(substituted(f, path, chosen))))
        }
        RuleApp::Cut { formula } => {
            let (p1, p2) = (premises[0], premises[1]);
            let Some(delta1) = p1.succedent.without(formula) else {
                return cx.fail(format!("cutformula `{formula}` missing from the first premise's succedent"));
            };
            let Some(pi) = p2.antecedent.without(formula) else {
                return cx.fail(format!("cutformula `{formula}` missing from the second premise's antecedent"));
            };
            let expected = Sequent::new(pi.union(&p1.antecedent), delta1.union(&p2.succedent));
            if *conclusion != expected {
                return cx.fail(format!("conclusion should be `{expected}`"));
            }
            Ok(())
        }
        RuleApp::LOrI { ante, split } => {
            let (f, rest) = cx.ante(*ante)?;
            let Some((a, b)) = binary(f, "or") else {
                return cx.fail(format!("`{f}` is not a split disjunction"));
            };
            let (g2, d2) = remainders(&cx, &rest, delta, split)?;
            cx.premise("first", premises[0], Sequent::new(split.antecedent.with(a.clone()), split.succedent.clone()))?;
            cx.premise("second", premises[1], Sequent::new(g2.with(b.clone()), d2))
        }
        RuleApp::RAndI { succ, split } => {
            let (f, rest) = cx.succ(*succ)?;
            let Some((a, b)) = binary(f, "and") else {
                return cx.fail(format!("`{f}` is not a conjunction"));
            };
            let (g2, d2) = remainders(&cx, gamma, &rest, split)?;
            cx.premise("first", premises[0], Sequent::new(split.antecedent.clone(), split.succedent.with(a.clone())))?;
            cx.premise("second", premises[1], Sequent::new(g2, d2.with(b.clone())))
        }
        RuleApp::LC { ante } => {
            let (f, _) = cx.ante(*ante)?;
            cx.premise("the", premises[0], Sequent::new(gamma.with(f.clone()), delta.clone()))
        }
        RuleApp::RC { succ } => {
            let (f, _) = cx.succ(*succ)?;
            if !f.is_classical() {
                return cx.fail(format!("right contraction on nonclassical `{f}`"));
            }
            cx.premise("the", premises[0], Sequent::new(gamma.clone(), delta.with(f.clone())))
        }
    }
}

fn remainders(
    cx: &Ctx<'_>,
    gamma: &Multiset,
    delta: &Multiset,
    split: &ContextSplit,
) -> Result<(Multiset, Multiset), Violation> {
    let Some(g2) = gamma.difference(&split.antecedent) else {
        return cx.fail(format!("declared left context `{}` is not part of `{gamma}`", split.antecedent));
    };
    let Some(d2) = delta.difference(&split.succedent) else {
        return cx.fail(format!("declared right context `{}` is not part of `{delta}`", split.succedent));
    };
    Ok((g2, d2))
}

/// Checks every node; on failure reports the address of the first bad node
/// in preorder.
pub fn check_derivation(d: &Derivation) -> Result<(), LocatedViolation> {
    fn go(d: &Derivation, address: &mut Vec<usize>) -> Result<(), LocatedViolation> {
        let prem: Vec<&Sequent> = d.premises.iter().map(|p| &p.conclusion).collect();
        check_inference(&d.conclusion, &d.rule, &prem).map_err(|violation| LocatedViolation {
            address: address.clone(),
            violation,
        })?;
        for (i, p) in d.premises.iter().enumerate() {
            address.push(i);
            go(p, address)?;
            address.pop();
        }
        Ok(())
    }
    go(d, &mut Vec::new())
}
