//! Translation of GT derivations into GT′.

use crate::calculus::{self, Derivation, RuleApp};
use crate::syntax::Side;

use super::structural::weaken_all;
use super::{halves, principal, reapply, TransformError};

/// Replaces every RAnd and LOr by its independent-context variant followed
/// by left and right contractions and a weakening for the implicit slot.
pub fn to_gt_prime(d: &Derivation) -> Result<Derivation, TransformError> {
    let ps = d.premises.iter().map(to_gt_prime).collect::<Result<Vec<_>, _>>()?;
    match &d.rule {
        RuleApp::RAnd { context, weakening, .. } | RuleApp::LOr { context, weakening, .. } => {
            let (_, pf) = principal(d).expect("binary rules have a principal formula");
            let (a, b) = halves(pf)?;
            let mut it = ps.into_iter();
            let (p1, p2) = (it.next().expect("binary"), it.next().expect("binary"));
            let shared = if matches!(d.rule, RuleApp::RAnd { .. }) {
                p1.conclusion.antecedent.clone()
            } else {
                p1.conclusion.antecedent.without(a).expect("active formula present")
            };
            let mut x = if matches!(d.rule, RuleApp::RAnd { .. }) {
                calculus::r_and_i(p1, p2, a, b)?
            } else {
                calculus::l_or_i(p1, p2, a, b)?
            };
            for g in &shared {
                x = calculus::l_c(x, g)?;
            }
            for l in context {
                x = calculus::r_c(x, l)?;
            }
            weaken_all(&x, Side::Right, weakening)
        }
        _ => reapply(d, ps),
    }
}
