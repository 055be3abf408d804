//! Cut elimination: the classical G3cp procedure, and the general one that
//! splices classical parts of normalized premises.

use crate::calculus::{self, Derivation, RuleApp};
use crate::sequent::{Multiset, Sequent};
use crate::syntax::{Choice, Formula, Side};

use super::normal::{family_of_normal, lift_succedent, match_resolutions, normalize, ResolvedFamily};
use super::structural::{contract, weaken_all};
use super::{gt_only, principal, reapply, rebuild_weakening, shape, with_premises, TransformError};

type Res<T> = Result<T, TransformError>;

fn first_nonclassical(d: &Derivation) -> Option<Formula> {
    let c = &d.conclusion;
    if let Some(f) = c.antecedent.iter().chain(c.succedent.iter()).find(|f| !f.is_classical()) {
        return Some(f.clone());
    }
    if let RuleApp::Cut { formula } = &d.rule {
        if !formula.is_classical() {
            return Some(formula.clone());
        }
    }
    d.premises.iter().find_map(first_nonclassical)
}

/// Cut elimination for derivations whose formulas are all classical.
/// Topmost cuts go first; each is removed by commuting it upwards until
/// the cutformula is principal on both sides, then reduced to cuts on its
/// immediate subformulas.
pub fn classical_eliminate_cuts(d: &Derivation) -> Res<Derivation> {
    if let Some(f) = first_nonclassical(d) {
        return Err(TransformError::NonClassicalInput(f));
    }
    gt_only(d)?;
    elim_with(d, &mut |p1, p2, phi| reduce(p1, p2, phi))
}

/// Removes every cut of a GT derivation.
pub fn eliminate_cuts(d: &Derivation) -> Res<Derivation> {
    gt_only(d)?;
    elim_with(d, &mut cut_pair)
}

fn elim_with(d: &Derivation, on_cut: &mut dyn FnMut(&Derivation, &Derivation, &Formula) -> Res<Derivation>) -> Res<Derivation> {
    if d.is_cutfree() {
        return Ok(d.clone());
    }
    let ps = d.premises.iter().map(|p| elim_with(p, on_cut)).collect::<Res<Vec<_>>>()?;
    match &d.rule {
        RuleApp::Cut { formula } => on_cut(&ps[0], &ps[1], formula),
        _ => Ok(with_premises(d, ps)),
    }
}

fn contract_all(mut d: Derivation, side: Side, fs: &Multiset) -> Res<Derivation> {
    for f in fs {
        d = contract(&d, side, f)?;
    }
    Ok(d)
}

/// Cutfree classical `d1: Γ ⇒ φ, Δ` and `d2: Π, φ ⇒ Σ` to a cutfree
/// derivation of `Π, Γ ⇒ Δ, Σ`.
fn reduce(d1: &Derivation, d2: &Derivation, phi: &Formula) -> Res<Derivation> {
    let (c1, c2) = (&d1.conclusion, &d2.conclusion);
    let Some(delta) = c1.succedent.without(phi) else {
        return shape(format!("cutformula `{phi}` missing from `{c1}`"));
    };
    let Some(pi) = c2.antecedent.without(phi) else {
        return shape(format!("cutformula `{phi}` missing from `{c2}`"));
    };
    let target = Sequent::new(pi.union(&c1.antecedent), delta.union(&c2.succedent));
    let axiom = |s: &Sequent| calculus::axiom(s).ok_or_else(|| TransformError::ShapeMismatch(format!("`{s}` is not an axiom")));

    // the cutformula is a side formula on the left
    if principal(d1) != Some((Side::Right, phi)) {
        return match &d1.rule {
            RuleApp::At { succ, .. } if c1.succedent.get(*succ) == Some(phi) => {
                let gamma = c1.antecedent.without(phi).expect("At shares its variable");
                weaken_all(&weaken_all(d2, Side::Left, &gamma)?, Side::Right, &delta)
            }
            RuleApp::At { .. } | RuleApp::LBot { .. } => axiom(&target),
            RuleApp::RAnd { weakening, .. } | RuleApp::LOr { weakening, .. } if weakening.contains(phi) => {
                let lean = rebuild_weakening(d1, d1.premises.clone(), &weakening.without(phi).expect("contains"))?;
                weaken_all(&weaken_all(&lean, Side::Left, &pi)?, Side::Right, &c2.succedent)
            }
            _ => {
                let ps = d1.premises.iter().map(|p| reduce(p, d2, phi)).collect::<Res<Vec<_>>>()?;
                reapply(d1, ps)
            }
        };
    }
    // principal on the left only
    if principal(d2) != Some((Side::Left, phi)) {
        return match &d2.rule {
            RuleApp::At { ante, .. } if c2.antecedent.get(*ante) == Some(phi) => {
                let sigma = c2.succedent.without(phi).expect("At shares its variable");
                weaken_all(&weaken_all(d1, Side::Left, &pi)?, Side::Right, &sigma)
            }
            RuleApp::At { .. } | RuleApp::LBot { .. } => axiom(&target),
            _ => {
                let ps = d2.premises.iter().map(|p| reduce(d1, p, phi)).collect::<Res<Vec<_>>>()?;
                reapply(d2, ps)
            }
        };
    }
    // principal on both sides
    match (phi, &d1.rule, &d2.rule) {
        (Formula::Neg(a), RuleApp::RNeg { .. }, RuleApp::LNeg { .. }) => reduce(&d2.premises[0], &d1.premises[0], a),
        (Formula::And(a, b), RuleApp::RAnd { context, weakening, .. }, RuleApp::LAnd { .. }) => {
            let x = reduce(&d1.premises[0], &d2.premises[0], a)?;
            let y = reduce(&d1.premises[1], &x, b)?;
            let y = contract_all(y, Side::Left, &c1.antecedent)?;
            let y = contract_all(y, Side::Right, context)?;
            weaken_all(&y, Side::Right, weakening)
        }
        (Formula::Or(a, b), RuleApp::ROr { .. }, RuleApp::LOr { context, weakening, .. }) => {
            let x = reduce(&d1.premises[0], &d2.premises[0], a)?;
            let y = reduce(&x, &d2.premises[1], b)?;
            let y = contract_all(y, Side::Left, &pi)?;
            let y = contract_all(y, Side::Right, context)?;
            weaken_all(&y, Side::Right, weakening)
        }
        _ => shape(format!("unexpected principal pair {} / {} on `{phi}`", d1.rule.name(), d2.rule.name())),
    }
}

/// A topmost cut with cutfree premises.
fn cut_pair(d1: &Derivation, d2: &Derivation, phi: &Formula) -> Res<Derivation> {
    if d1.conclusion.is_classical() && d2.conclusion.is_classical() {
        return reduce(d1, d2, phi);
    }
    let f1 = family_of_normal(&normalize(d1)?);
    let f2 = family_of_normal(&normalize(d2)?);
    let (c1, c2) = (&d1.conclusion, &d2.conclusion);
    let Some(delta) = c1.succedent.without(phi) else {
        return shape(format!("cutformula `{phi}` missing from `{c1}`"));
    };
    let Some(pi) = c2.antecedent.without(phi) else {
        return shape(format!("cutformula `{phi}` missing from `{c2}`"));
    };
    let succ = delta.union(&c2.succedent);
    let mut items: Vec<(Formula, bool)> = pi.iter().map(|f| (f.clone(), false)).collect();
    items.extend(c1.antecedent.iter().map(|f| (f.clone(), true)));
    tagged_left_tree(&mut items, 0, &succ, &mut |xi, theta| {
        let leaf = splice(&f1, &f2, xi, theta, phi, &delta)?;
        lift_succedent(leaf, &succ)
    })
}

/// For `Ξ ∈ R(Γ)` and `Θ ∈ R(Π)`: cut the classical part `Ξ ⇒ Λ, α` of the
/// first premise against `Θ, α ⇒ g` of the second on `α`, then eliminate.
fn splice(
    f1: &ResolvedFamily,
    f2: &ResolvedFamily,
    xi: &Multiset,
    theta: &Multiset,
    phi: &Formula,
    delta: &Multiset,
) -> Res<Derivation> {
    let Some(e1) = f1.get(xi) else {
        return shape(format!("no classical part for `{xi}`"));
    };
    let mut originals = vec![phi.clone()];
    originals.extend(delta.iter().cloned());
    let Some(m) = match_resolutions(&originals, &e1.image) else {
        return shape(format!("`{}` is not a resolution of `{phi}, {delta}`", e1.image));
    };
    let alpha = e1.image.as_slice()[m[0].0].clone();
    let key = theta.with(alpha.clone());
    let Some(e2) = f2.get(&key) else {
        return shape(format!("no classical part for `{key}`"));
    };
    let cut = calculus::cut(e1.derivation.clone(), e2.derivation.clone(), &alpha)?;
    classical_eliminate_cuts(&cut)
}

/// LGd tree over a tagged antecedent; leaves receive the resolved formulas
/// split by tag (`true` first).
fn tagged_left_tree(
    items: &mut Vec<(Formula, bool)>,
    start: usize,
    succ: &Multiset,
    leaf: &mut dyn FnMut(&Multiset, &Multiset) -> Res<Derivation>,
) -> Res<Derivation> {
    let Some(i) = (start..items.len()).find(|&i| !items[i].0.is_classical()) else {
        let pick = |tag: bool| items.iter().filter(|(_, t)| *t == tag).map(|(f, _)| f.clone()).collect::<Multiset>();
        return leaf(&pick(true), &pick(false));
    };
    let chi = items[i].0.clone();
    let path = chi.gd_paths().into_iter().next().expect("nonclassical formulas contain ||");
    let mut ps = Vec::with_capacity(2);
    for side in [Choice::L, Choice::R] {
        items[i].0 = chi.resolve_at(&path, side).expect("path from gd_paths");
        ps.push(tagged_left_tree(items, i, succ, leaf)?);
    }
    items[i].0 = chi.clone();
    let mut it = ps.into_iter();
    Ok(calculus::l_gd(it.next().expect("two"), it.next().expect("two"), &chi, &path)?)
}
