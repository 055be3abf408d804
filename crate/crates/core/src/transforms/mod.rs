//! Proof transformations: height-preserving weakening, inversion and
//! contraction, the derivation normal form, cut elimination, the resolution
//! decomposition of a derivation and the translation into GT′.

mod cut;
mod normal;
mod prime;
mod structural;

use crate::calculus::{self, Derivation, RuleApp, Violation};
use crate::sequent::Multiset;
use crate::syntax::{Choice, Formula, OccurrencePath, Side};

pub use cut::{classical_eliminate_cuts, eliminate_cuts};
pub use normal::{match_resolutions, normalize, reassemble, resolve_derivation, ResolvedEntry, ResolvedFamily};
pub use prime::to_gt_prime;
pub use structural::{contract, invert, weaken, weaken_all, Inversion, InversionItem};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("inversion of a right `||` needs a classical antecedent, found `{0}`")]
    NonClassicalAntecedent(Multiset),
    #[error("right contraction on nonclassical `{0}`")]
    NonClassicalRightContraction(Formula),
    #[error("`{0}` does not occur twice on the chosen side")]
    FormulaNotDuplicated(Formula),
    #[error("derivation contains a cut")]
    ContainsCut,
    #[error("nonclassical formula `{0}` given to classical cut elimination")]
    NonClassicalInput(Formula),
    #[error("rule {0} is not supported by this transformation")]
    Unsupported(&'static str),
    #[error(transparent)]
    Build(#[from] Violation),
}

pub(crate) fn shape<T>(msg: impl Into<String>) -> Result<T, TransformError> {
    Err(TransformError::ShapeMismatch(msg.into()))
}

pub(crate) fn choice(j: usize) -> Choice {
    if j == 0 {
        Choice::L
    } else {
        Choice::R
    }
}

pub(crate) fn index(c: Choice) -> usize {
    match c {
        Choice::L => 0,
        Choice::R => 1,
    }
}

/// Rejects GT′-only rules.
pub(crate) fn gt_only(d: &Derivation) -> Result<(), TransformError> {
    if d.is_gt() {
        Ok(())
    } else {
        Err(TransformError::Unsupported("GT′ rules"))
    }
}

/// The principal formula of a single-principal rule together with its side.
pub(crate) fn principal(d: &Derivation) -> Option<(Side, &Formula)> {
    let c = &d.conclusion;
    match &d.rule {
        RuleApp::LNeg { ante }
        | RuleApp::LAnd { ante }
        | RuleApp::LOr { ante, .. }
        | RuleApp::LGd { ante, .. }
        | RuleApp::LOrI { ante, .. }
        | RuleApp::LC { ante } => c.antecedent.get(*ante).map(|f| (Side::Left, f)),
        RuleApp::RNeg { succ }
        | RuleApp::RAnd { succ, .. }
        | RuleApp::ROr { succ }
        | RuleApp::RGd { succ, .. }
        | RuleApp::RAndI { succ, .. }
        | RuleApp::RC { succ } => c.succedent.get(*succ).map(|f| (Side::Right, f)),
        RuleApp::At { .. } | RuleApp::LBot { .. } | RuleApp::Cut { .. } => None,
    }
}

pub(crate) fn halves(f: &Formula) -> Result<(&Formula, &Formula), TransformError> {
    match f {
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Gd(a, b) => Ok((a, b)),
        _ => shape(format!("`{f}` is not binary")),
    }
}

fn negated(f: &Formula) -> Result<&Formula, TransformError> {
    match f {
        Formula::Neg(a) => Ok(a),
        _ => shape(format!("`{f}` is not a negation")),
    }
}

pub(crate) fn resolve(f: &Formula, path: &OccurrencePath, j: usize) -> Result<Formula, TransformError> {
    f.resolve_at(path, choice(j))
        .map_err(|e| TransformError::ShapeMismatch(e.to_string()))
}

/// Rebuilds the last inference of `d` on new premises, recomputing the
/// conclusion from them. The principal formula and metadata stay as in `d`.
pub(crate) fn reapply(d: &Derivation, premises: Vec<Derivation>) -> Result<Derivation, TransformError> {
    let arity = d.rule.arity();
    if premises.len() != arity {
        return shape(format!("{} expects {arity} premise(s)", d.rule.name()));
    }
    if arity == 0 {
        return Ok(d.clone());
    }
    let pf = principal(d).map(|(_, f)| f);
    let mut ps = premises.into_iter();
    let p1 = ps.next().expect("arity checked");
    let built = match &d.rule {
        RuleApp::LNeg { .. } | RuleApp::RNeg { .. } => {
            let a = negated(pf.expect("single principal"))?;
            if matches!(d.rule, RuleApp::LNeg { .. }) {
                calculus::l_neg(p1, a)
            } else {
                calculus::r_neg(p1, a)
            }
        }
        RuleApp::LAnd { .. } => {
            let (a, b) = halves(pf.expect("single principal"))?;
            calculus::l_and(p1, a, b)
        }
        RuleApp::ROr { .. } => {
            let (a, b) = halves(pf.expect("single principal"))?;
            calculus::r_or(p1, a, b)
        }
        RuleApp::RAnd { weakening, .. } => {
            let (a, b) = halves(pf.expect("single principal"))?;
            calculus::r_and(p1, ps.next().expect("arity checked"), a, b, weakening)
        }
        RuleApp::LOr { weakening, .. } => {
            let (a, b) = halves(pf.expect("single principal"))?;
            calculus::l_or(p1, ps.next().expect("arity checked"), a, b, weakening)
        }
        RuleApp::LOrI { .. } => {
            let (a, b) = halves(pf.expect("single principal"))?;
            calculus::l_or_i(p1, ps.next().expect("arity checked"), a, b)
        }
        RuleApp::RAndI { .. } => {
            let (a, b) = halves(pf.expect("single principal"))?;
            calculus::r_and_i(p1, ps.next().expect("arity checked"), a, b)
        }
        RuleApp::LGd { path, .. } => calculus::l_gd(p1, ps.next().expect("arity checked"), pf.expect("single principal"), path),
        RuleApp::RGd { path, side, .. } => calculus::r_gd(p1, pf.expect("single principal"), path, *side),
        RuleApp::Cut { formula } => calculus::cut(p1, ps.next().expect("arity checked"), formula),
        RuleApp::LC { .. } => calculus::l_c(p1, pf.expect("single principal")),
        RuleApp::RC { .. } => calculus::r_c(p1, pf.expect("single principal")),
        RuleApp::At { .. } | RuleApp::LBot { .. } => unreachable!("axioms handled above"),
    };
    Ok(built?)
}

/// `d` with its premises swapped for ones of identical conclusions.
pub(crate) fn with_premises(d: &Derivation, premises: Vec<Derivation>) -> Derivation {
    debug_assert!(d.premises.iter().zip(&premises).all(|(a, b)| a.conclusion == b.conclusion));
    Derivation {
        rule: d.rule.clone(),
        conclusion: d.conclusion.clone(),
        premises,
    }
}

/// RAnd/LOr node rebuilt on `premises` with a different implicit weakening.
pub(crate) fn rebuild_weakening(
    d: &Derivation,
    premises: Vec<Derivation>,
    weakening: &Multiset,
) -> Result<Derivation, TransformError> {
    let (_, pf) = principal(d).ok_or(TransformError::Unsupported("rule without principal formula"))?;
    let (a, b) = halves(pf)?;
    let mut ps = premises.into_iter();
    let (p1, p2) = match (ps.next(), ps.next()) {
        (Some(x), Some(y)) => (x, y),
        _ => return shape("binary rule needs two premises"),
    };
    Ok(match &d.rule {
        RuleApp::RAnd { .. } => calculus::r_and(p1, p2, a, b, weakening)?,
        RuleApp::LOr { .. } => calculus::l_or(p1, p2, a, b, weakening)?,
        _ => return Err(TransformError::Unsupported("implicit weakening outside RAnd/LOr")),
    })
}

#[cfg(test)]
mod tests;
