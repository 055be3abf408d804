//! Height-preserving weakening, inversion and contraction.

use crate::calculus::{self, Derivation, RuleApp};
use crate::sequent::{Multiset, Sequent};
use crate::syntax::{Choice, Formula, OccurrencePath, Side};

use super::{
    choice, gt_only, halves, index, principal, reapply, rebuild_weakening, resolve, shape, TransformError,
};

type Res<T> = Result<T, TransformError>;

/// Adds `f` to one side of the endsequent. Axioms absorb it; at RAnd and LOr
/// a right weakening goes into the implicit-weakening slot.
pub fn weaken(d: &Derivation, side: Side, f: &Formula) -> Res<Derivation> {
    let c = &d.conclusion;
    let target = c.with_side(side, c.side(side).with(f.clone()));
    match &d.rule {
        RuleApp::At { .. } | RuleApp::LBot { .. } => {
            calculus::axiom(&target).ok_or_else(|| TransformError::ShapeMismatch(format!("`{c}` is not an axiom")))
        }
        RuleApp::RAnd { weakening, .. } | RuleApp::LOr { weakening, .. } if side == Side::Right => {
            rebuild_weakening(d, d.premises.clone(), &weakening.with(f.clone()))
        }
        RuleApp::Cut { .. } => {
            let (p1, p2) = (&d.premises[0], &d.premises[1]);
            match side {
                Side::Left => reapply(d, vec![weaken(p1, side, f)?, p2.clone()]),
                Side::Right => reapply(d, vec![p1.clone(), weaken(p2, side, f)?]),
            }
        }
        RuleApp::LOrI { .. } | RuleApp::RAndI { .. } => {
            reapply(d, vec![weaken(&d.premises[0], side, f)?, d.premises[1].clone()])
        }
        _ => {
            let ps = d.premises.iter().map(|p| weaken(p, side, f)).collect::<Res<Vec<_>>>()?;
            reapply(d, ps)
        }
    }
}

pub fn weaken_all(d: &Derivation, side: Side, fs: &Multiset) -> Res<Derivation> {
    fs.iter().try_fold(d.clone(), |acc, f| weaken(&acc, side, f))
}

/// One of the eight inversion items, located in the endsequent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InversionItem {
    LNeg { ante: usize },
    RNeg { succ: usize },
    LAnd { ante: usize },
    RAnd { succ: usize },
    LOr { ante: usize },
    ROr { succ: usize },
    LGd { ante: usize, path: OccurrencePath },
    RGd { succ: usize, path: OccurrencePath },
}

/// Result of an inversion: one or two derivations in the order of the
/// item's premises; for RGd exactly one plus the disjunct it realizes.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub derivations: Vec<Derivation>,
    pub side: Option<Choice>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Neg,
    And,
    Or,
    Gd(OccurrencePath),
}

#[derive(Clone, Debug)]
struct Target {
    side: Side,
    formula: Formula,
    kind: Kind,
}

impl Target {
    fn is_right_gd(&self) -> bool {
        self.side == Side::Right && matches!(self.kind, Kind::Gd(_))
    }

    fn with_formula(&self, formula: Formula) -> Target {
        Target {
            side: self.side,
            formula,
            kind: self.kind.clone(),
        }
    }

    /// Per output index, the formulas replacing the target occurrence.
    fn components(&self) -> Res<Vec<Vec<(Side, Formula)>>> {
        use Side::{Left, Right};
        let f = &self.formula;
        Ok(match (&self.kind, self.side, f) {
            (Kind::Neg, Left, Formula::Neg(a)) => vec![vec![(Right, (**a).clone())]],
            (Kind::Neg, Right, Formula::Neg(a)) => vec![vec![(Left, (**a).clone())]],
            (Kind::And, Left, Formula::And(a, b)) => vec![vec![(Left, (**a).clone()), (Left, (**b).clone())]],
            (Kind::And, Right, Formula::And(a, b)) => vec![vec![(Right, (**a).clone())], vec![(Right, (**b).clone())]],
            (Kind::Or, Left, Formula::Or(a, b)) => vec![vec![(Left, (**a).clone())], vec![(Left, (**b).clone())]],
            (Kind::Or, Right, Formula::Or(a, b)) => vec![vec![(Right, (**a).clone()), (Right, (**b).clone())]],
            (Kind::Gd(p), s, f) => {
                if !matches!(f.at(p), Some(Formula::Gd(..))) || f.path_under_negation(p) {
                    return shape(format!("no `||` at {p} in `{f}`"));
                }
                vec![vec![(s, resolve(f, p, 0)?)], vec![(s, resolve(f, p, 1)?)]]
            }
            _ => return shape(format!("`{f}` does not fit the inversion item")),
        })
    }

    /// Both components land in the single output (LAnd, ROr).
    fn joint(&self) -> bool {
        matches!((&self.kind, self.side), (Kind::And, Side::Left) | (Kind::Or, Side::Right))
    }
}

fn target_sequent(c: &Sequent, t: &Target, comps: &[(Side, Formula)]) -> Res<Sequent> {
    let Some(rest) = c.side(t.side).without(&t.formula) else {
        return shape(format!("`{}` missing from `{c}`", t.formula));
    };
    let mut s = c.with_side(t.side, rest);
    for (side, g) in comps {
        s = s.with_side(*side, s.side(*side).with(g.clone()));
    }
    Ok(s)
}

fn child(f: &Formula, c: usize) -> Res<&Formula> {
    let (a, b) = halves(f)?;
    Ok(if c == 0 { a } else { b })
}

fn first_step(p: &OccurrencePath) -> Res<(usize, OccurrencePath)> {
    match p.0.split_first() {
        Some((c, rest)) => Ok((*c as usize, OccurrencePath(rest.to_vec()))),
        None => shape("empty path"),
    }
}

fn join(a: &OccurrencePath, b: &OccurrencePath) -> OccurrencePath {
    OccurrencePath(a.0.iter().chain(&b.0).copied().collect())
}

fn item_target(c: &Sequent, item: &InversionItem) -> Res<Target> {
    let (side, pos, kind) = match item {
        InversionItem::LNeg { ante } => (Side::Left, *ante, Kind::Neg),
        InversionItem::RNeg { succ } => (Side::Right, *succ, Kind::Neg),
        InversionItem::LAnd { ante } => (Side::Left, *ante, Kind::And),
        InversionItem::RAnd { succ } => (Side::Right, *succ, Kind::And),
        InversionItem::LOr { ante } => (Side::Left, *ante, Kind::Or),
        InversionItem::ROr { succ } => (Side::Right, *succ, Kind::Or),
        InversionItem::LGd { ante, path } => (Side::Left, *ante, Kind::Gd(path.clone())),
        InversionItem::RGd { succ, path } => (Side::Right, *succ, Kind::Gd(path.clone())),
    };
    let Some(formula) = c.side(side).get(pos) else {
        return shape(format!("position {pos} out of range in `{c}`"));
    };
    let t = Target {
        side,
        formula: formula.clone(),
        kind,
    };
    t.components()?;
    Ok(t)
}

/// Height-preserving inversion of `d` on the given item.
pub fn invert(d: &Derivation, item: &InversionItem) -> Res<Inversion> {
    gt_only(d)?;
    let t = item_target(&d.conclusion, item)?;
    if t.is_right_gd() && !d.conclusion.antecedent.is_classical() {
        return Err(TransformError::NonClassicalAntecedent(d.conclusion.antecedent.clone()));
    }
    let out = inv(d, &t)?;
    let side = t.is_right_gd().then(|| choice(out[0].0));
    Ok(Inversion {
        derivations: out.into_iter().map(|(_, x)| x).collect(),
        side,
    })
}

/// Outputs tagged with their index among the item's premises.
type Out = Vec<(usize, Derivation)>;

/// Inversion on the `||` at `path` in an occurrence of `chi`; no classicality
/// check on the antecedent.
pub(super) fn inv_gd(d: &Derivation, side: Side, chi: &Formula, path: &OccurrencePath) -> Res<Out> {
    inv(
        d,
        &Target {
            side,
            formula: chi.clone(),
            kind: Kind::Gd(path.clone()),
        },
    )
}

fn pick(out: &Out, j: usize) -> Res<Derivation> {
    match out.iter().find(|(k, _)| *k == j) {
        Some((_, d)) => Ok(d.clone()),
        None => shape(format!("inversion output {j} missing")),
    }
}

fn single(out: Out) -> Res<(usize, Derivation)> {
    match <[(usize, Derivation); 1]>::try_from(out) {
        Ok([x]) => Ok(x),
        Err(_) => shape("expected a single inversion output"),
    }
}

fn inv(d: &Derivation, t: &Target) -> Res<Out> {
    let c = &d.conclusion;
    let comps = t.components()?;
    let wanted: Vec<usize> = if t.is_right_gd() { vec![0] } else { (0..comps.len()).collect() };
    if d.premises.is_empty() {
        return wanted
            .into_iter()
            .map(|j| {
                let s = target_sequent(c, t, &comps[j])?;
                match calculus::axiom(&s) {
                    Some(ax) => Ok((j, ax)),
                    None => shape(format!("`{s}` is not an axiom")),
                }
            })
            .collect();
    }
    if let Some((side, f)) = principal(d) {
        if side == t.side && *f == t.formula && !d.rule.is_gt_prime_only() {
            return inv_principal(d, t);
        }
    }
    match &d.rule {
        RuleApp::RAnd { weakening, .. } | RuleApp::LOr { weakening, .. }
            if t.side == Side::Right && weakening.contains(&t.formula) =>
        {
            let w = weakening.without(&t.formula).expect("checked contains");
            wanted
                .into_iter()
                .map(|j| {
                    let mut ps = d.premises.clone();
                    let mut w = w.clone();
                    for (side, g) in &comps[j] {
                        match side {
                            Side::Left => {
                                ps = ps.iter().map(|p| weaken(p, Side::Left, g)).collect::<Res<_>>()?;
                            }
                            Side::Right => w.insert(g.clone()),
                        }
                    }
                    Ok((j, rebuild_weakening(d, ps, &w)?))
                })
                .collect()
        }
        RuleApp::Cut { formula } => {
            let (p1, p2) = (&d.premises[0], &d.premises[1]);
            let second = match t.side {
                Side::Left => p2.conclusion.antecedent.without(formula).is_some_and(|m| m.contains(&t.formula)),
                Side::Right => !p1.conclusion.succedent.without(formula).is_some_and(|m| m.contains(&t.formula)),
            };
            let (which, other) = if second { (p2, p1) } else { (p1, p2) };
            if t.is_right_gd() && !which.conclusion.antecedent.is_classical() {
                return Err(TransformError::NonClassicalAntecedent(which.conclusion.antecedent.clone()));
            }
            inv(which, t)?
                .into_iter()
                .map(|(j, x)| {
                    let ps = if second { vec![other.clone(), x] } else { vec![x, other.clone()] };
                    Ok((j, reapply(d, ps)?))
                })
                .collect()
        }
        r if r.is_gt_prime_only() => Err(TransformError::Unsupported(r.name())),
        _ => {
            let outs = d.premises.iter().map(|p| inv(p, t)).collect::<Res<Vec<Out>>>()?;
            if t.is_right_gd() {
                if outs.len() != 1 {
                    return shape(format!("right `||` in the context of binary {}", d.rule.name()));
                }
                let (j, x) = single(outs.into_iter().next().expect("one premise"))?;
                return Ok(vec![(j, reapply(d, vec![x])?)]);
            }
            wanted
                .into_iter()
                .map(|j| {
                    let ps = outs.iter().map(|o| pick(o, j)).collect::<Res<Vec<_>>>()?;
                    Ok((j, reapply(d, ps)?))
                })
                .collect()
        }
    }
}

/// The target occurrence is principal in the last rule of `d`.
fn inv_principal(d: &Derivation, t: &Target) -> Res<Out> {
    let a = &t.formula;
    let ps = &d.premises;
    match (&t.kind, &d.rule) {
        (Kind::Neg, RuleApp::LNeg { .. } | RuleApp::RNeg { .. })
        | (Kind::And, RuleApp::LAnd { .. })
        | (Kind::Or, RuleApp::ROr { .. }) => Ok(vec![(0, ps[0].clone())]),
        (Kind::And, RuleApp::RAnd { weakening, .. }) | (Kind::Or, RuleApp::LOr { weakening, .. }) => Ok(vec![
            (0, weaken_all(&ps[0], Side::Right, weakening)?),
            (1, weaken_all(&ps[1], Side::Right, weakening)?),
        ]),
        (Kind::And | Kind::Or, RuleApp::LGd { path: rho, .. }) => {
            let (c, tail) = first_step(rho)?;
            let comp = child(a, c)?;
            let r0 = inv(&ps[0], &t.with_formula(resolve(a, rho, 0)?))?;
            let r1 = inv(&ps[1], &t.with_formula(resolve(a, rho, 1)?))?;
            if t.joint() {
                return Ok(vec![(0, calculus::l_gd(pick(&r0, 0)?, pick(&r1, 0)?, comp, &tail)?)]);
            }
            (0..2)
                .map(|j| {
                    if j == c {
                        Ok((j, calculus::l_gd(pick(&r0, j)?, pick(&r1, j)?, comp, &tail)?))
                    } else {
                        Ok((j, pick(&r0, j)?))
                    }
                })
                .collect()
        }
        (Kind::And | Kind::Or, RuleApp::RGd { path: rho, side, .. }) => {
            let (c, tail) = first_step(rho)?;
            let comp = child(a, c)?;
            let s = index(*side);
            let r = inv(&ps[0], &t.with_formula(resolve(a, rho, s)?))?;
            if t.joint() {
                return Ok(vec![(0, calculus::r_gd(pick(&r, 0)?, comp, &tail, *side)?)]);
            }
            (0..2)
                .map(|j| {
                    if j == c {
                        Ok((j, calculus::r_gd(pick(&r, j)?, comp, &tail, *side)?))
                    } else {
                        Ok((j, pick(&r, j)?))
                    }
                })
                .collect()
        }
        (Kind::Gd(pi), RuleApp::LAnd { .. } | RuleApp::LOr { .. } | RuleApp::ROr { .. } | RuleApp::RAnd { .. }) => {
            let (c, tail) = first_step(pi)?;
            let (x, y) = halves(a)?;
            let comp = child(a, c)?;
            let sub = Target {
                side: t.side,
                formula: comp.clone(),
                kind: Kind::Gd(tail.clone()),
            };
            let parts = |j: usize| -> Res<(Formula, Formula)> {
                let r = resolve(comp, &tail, j)?;
                Ok(if c == 0 { (r, y.clone()) } else { (x.clone(), r) })
            };
            match &d.rule {
                RuleApp::LAnd { .. } | RuleApp::ROr { .. } => inv(&ps[0], &sub)?
                    .into_iter()
                    .map(|(j, q)| {
                        let (na, nb) = parts(j)?;
                        let built = if matches!(d.rule, RuleApp::LAnd { .. }) {
                            calculus::l_and(q, &na, &nb)?
                        } else {
                            calculus::r_or(q, &na, &nb)?
                        };
                        Ok((j, built))
                    })
                    .collect(),
                RuleApp::LOr { weakening, .. } | RuleApp::RAnd { weakening, .. } => inv(&ps[c], &sub)?
                    .into_iter()
                    .map(|(j, q)| {
                        let (na, nb) = parts(j)?;
                        let mut np = ps.clone();
                        np[c] = q;
                        let mut it = np.into_iter();
                        let (q1, q2) = (it.next().expect("binary"), it.next().expect("binary"));
                        let built = if matches!(d.rule, RuleApp::LOr { .. }) {
                            calculus::l_or(q1, q2, &na, &nb, weakening)?
                        } else {
                            calculus::r_and(q1, q2, &na, &nb, weakening)?
                        };
                        Ok((j, built))
                    })
                    .collect(),
                _ => unreachable!("matched above"),
            }
        }
        (Kind::Gd(pi), RuleApp::LGd { path: rho, .. }) => inv_left_deep(d, t, pi, rho),
        (Kind::Gd(pi), RuleApp::RGd { path: rho, side, .. }) => inv_right_deep(d, t, pi, rho, index(*side)),
        _ => shape(format!("{} does not match the inversion item on `{a}`", d.rule.name())),
    }
}

/// Left `||` item against an LGd on the same formula.
fn inv_left_deep(d: &Derivation, t: &Target, pi: &OccurrencePath, rho: &OccurrencePath) -> Res<Out> {
    let a = &t.formula;
    let ps = &d.premises;
    if pi == rho {
        return Ok(vec![(0, ps[0].clone()), (1, ps[1].clone())]);
    }
    let at = |f: Formula, p: &OccurrencePath| Target {
        side: Side::Left,
        formula: f,
        kind: Kind::Gd(p.clone()),
    };
    if pi.is_prefix_of(rho) {
        // the premise's || sits inside disjunct c of the item's ||
        let rest = OccurrencePath(rho.0[pi.len()..].to_vec());
        let (c, rest) = first_step(&rest)?;
        let r0 = inv(&ps[0], &at(resolve(a, rho, 0)?, pi))?;
        let r1 = inv(&ps[1], &at(resolve(a, rho, 1)?, pi))?;
        return (0..2)
            .map(|j| {
                if j == c {
                    let chi = resolve(a, pi, j)?;
                    Ok((j, calculus::l_gd(pick(&r0, j)?, pick(&r1, j)?, &chi, &join(pi, &rest))?))
                } else {
                    Ok((j, pick(&r0, j)?))
                }
            })
            .collect();
    }
    if rho.is_prefix_of(pi) {
        // the item's || sits inside disjunct c of the premise's ||
        let rest = OccurrencePath(pi.0[rho.len()..].to_vec());
        let (c, rest) = first_step(&rest)?;
        let r = inv(&ps[c], &at(resolve(a, rho, c)?, &join(rho, &rest)))?;
        return (0..2)
            .map(|j| {
                let mut np = ps.clone();
                np[c] = pick(&r, j)?;
                let mut it = np.into_iter();
                let chi = resolve(a, pi, j)?;
                let built = calculus::l_gd(it.next().expect("binary"), it.next().expect("binary"), &chi, rho)?;
                Ok((j, built))
            })
            .collect();
    }
    let r0 = inv(&ps[0], &at(resolve(a, rho, 0)?, pi))?;
    let r1 = inv(&ps[1], &at(resolve(a, rho, 1)?, pi))?;
    (0..2)
        .map(|j| {
            let chi = resolve(a, pi, j)?;
            Ok((j, calculus::l_gd(pick(&r0, j)?, pick(&r1, j)?, &chi, rho)?))
        })
        .collect()
}

/// Right `||` item against an RGd on the same formula.
fn inv_right_deep(d: &Derivation, t: &Target, pi: &OccurrencePath, rho: &OccurrencePath, s: usize) -> Res<Out> {
    let a = &t.formula;
    let p = &d.premises[0];
    if pi == rho {
        return Ok(vec![(s, p.clone())]);
    }
    let at = |f: Formula, path: &OccurrencePath| Target {
        side: Side::Right,
        formula: f,
        kind: Kind::Gd(path.clone()),
    };
    if pi.is_prefix_of(rho) {
        let rest = OccurrencePath(rho.0[pi.len()..].to_vec());
        let (c, rest) = first_step(&rest)?;
        let (j, q) = single(inv(p, &at(resolve(a, rho, s)?, pi))?)?;
        if j == c {
            let chi = resolve(a, pi, j)?;
            return Ok(vec![(j, calculus::r_gd(q, &chi, &join(pi, &rest), choice(s))?)]);
        }
        return Ok(vec![(j, q)]);
    }
    if rho.is_prefix_of(pi) {
        let rest = OccurrencePath(pi.0[rho.len()..].to_vec());
        let (c, rest) = first_step(&rest)?;
        if s == c {
            let (j, q) = single(inv(p, &at(resolve(a, rho, s)?, &join(rho, &rest)))?)?;
            let chi = resolve(a, pi, j)?;
            return Ok(vec![(j, calculus::r_gd(q, &chi, rho, choice(s))?)]);
        }
        // the premise already discarded the disjunct holding the item
        let chi = resolve(a, pi, 0)?;
        return Ok(vec![(0, calculus::r_gd(p.clone(), &chi, rho, choice(s))?)]);
    }
    let (j, q) = single(inv(p, &at(resolve(a, rho, s)?, pi))?)?;
    let chi = resolve(a, pi, j)?;
    Ok(vec![(j, calculus::r_gd(q, &chi, rho, choice(s))?)])
}

fn kind_of(rule: &RuleApp) -> Option<Kind> {
    Some(match rule {
        RuleApp::LNeg { .. } | RuleApp::RNeg { .. } => Kind::Neg,
        RuleApp::LAnd { .. } | RuleApp::RAnd { .. } => Kind::And,
        RuleApp::LOr { .. } | RuleApp::ROr { .. } => Kind::Or,
        RuleApp::LGd { path, .. } | RuleApp::RGd { path, .. } => Kind::Gd(path.clone()),
        _ => return None,
    })
}

/// Removes one of two occurrences of `f` on `side`. Right contraction is
/// only available for classical formulas.
pub fn contract(d: &Derivation, side: Side, f: &Formula) -> Res<Derivation> {
    if side == Side::Right && !f.is_classical() {
        return Err(TransformError::NonClassicalRightContraction(f.clone()));
    }
    if d.conclusion.side(side).count(f) < 2 {
        return Err(TransformError::FormulaNotDuplicated(f.clone()));
    }
    gt_only(d)?;
    contract_go(d, side, f)
}

fn contract_go(d: &Derivation, side: Side, f: &Formula) -> Res<Derivation> {
    let c = &d.conclusion;
    if d.premises.is_empty() {
        let rest = c.side(side).without(f).expect("duplicated");
        let s = c.with_side(side, rest);
        return calculus::axiom(&s).ok_or_else(|| TransformError::ShapeMismatch(format!("`{s}` is not an axiom")));
    }
    if let Some((ps, pf)) = principal(d) {
        if ps == side && pf == f {
            return contract_principal(d, side, f);
        }
    }
    match &d.rule {
        RuleApp::RAnd { weakening, .. } | RuleApp::LOr { weakening, .. }
            if side == Side::Right && weakening.contains(f) =>
        {
            rebuild_weakening(d, d.premises.clone(), &weakening.without(f).expect("checked contains"))
        }
        RuleApp::Cut { formula } => {
            let (p1, p2) = (&d.premises[0], &d.premises[1]);
            let (in1, in2) = match side {
                Side::Left => (
                    p1.conclusion.antecedent.count(f),
                    p2.conclusion.antecedent.without(formula).map_or(0, |m| m.count(f)),
                ),
                Side::Right => (
                    p1.conclusion.succedent.without(formula).map_or(0, |m| m.count(f)),
                    p2.conclusion.succedent.count(f),
                ),
            };
            if in1 >= 2 {
                reapply(d, vec![contract_go(p1, side, f)?, p2.clone()])
            } else if in2 >= 2 {
                reapply(d, vec![p1.clone(), contract_go(p2, side, f)?])
            } else {
                Err(TransformError::Unsupported("contraction across the premises of a cut"))
            }
        }
        _ => {
            let ps = d.premises.iter().map(|p| contract_go(p, side, f)).collect::<Res<Vec<_>>>()?;
            reapply(d, ps)
        }
    }
}

/// One copy of `f` is principal: invert the other copy in each premise,
/// contract the doubled components, then reapply the rule.
fn contract_principal(d: &Derivation, side: Side, f: &Formula) -> Res<Derivation> {
    if let RuleApp::RAnd { weakening, .. } = &d.rule {
        if weakening.contains(f) {
            return rebuild_weakening(d, d.premises.clone(), &weakening.without(f).expect("checked contains"));
        }
    }
    let Some(kind) = kind_of(&d.rule) else {
        return Err(TransformError::Unsupported(d.rule.name()));
    };
    let t = Target {
        side,
        formula: f.clone(),
        kind,
    };
    let comps = t.components()?;
    let mut ps = Vec::new();
    for (k, p) in d.premises.iter().enumerate() {
        let j = if comps.len() == 1 { 0 } else { k };
        let mut q = pick(&inv(p, &t)?, j)?;
        for (s, g) in &comps[j] {
            q = contract_go(&q, *s, g)?;
        }
        ps.push(q);
    }
    reapply(d, ps)
}
