//! Sequent interpolants from cutfree derivations. A partition sequent
//! `Γ1 ; Γ2 => Λ1 ; Δ2` with classical `Λ1` gets a formula φ together with
//! derivations of `Γ1 ⇒ Λ1, φ` and `Γ2, φ ⇒ Δ2`, built bottom-up along the
//! input derivation.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::calculus::{self, check_derivation, Derivation, RuleApp, Violation};
use crate::prover::{self, Outcome, ProverError};
use crate::semantics::{sequent_valid, Team};
use crate::sequent::{Multiset, PartitionSequent, Sequent};
use crate::syntax::{Formula, Side, Var};
use crate::transforms::{weaken, TransformError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InterpolationError {
    #[error("the Λ1 block must be classical, found `{0}`")]
    NonClassicalLambda1(Formula),
    #[error("partition `{partition}` does not match the endsequent `{conclusion}`")]
    PartitionMismatch { partition: Sequent, conclusion: Sequent },
    #[error("derivation contains a cut")]
    ContainsCut,
    #[error("rule {0} is not supported")]
    Unsupported(&'static str),
    #[error("inconsistent derivation: {0}")]
    Shape(String),
    #[error(transparent)]
    Build(#[from] Violation),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

type Res<T> = Result<T, InterpolationError>;

/// Signed variable sets of an interpolant and the bounds it must respect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarityReport {
    pub positive: BTreeSet<Var>,
    pub negative: BTreeSet<Var>,
    pub allowed_positive: BTreeSet<Var>,
    pub allowed_negative: BTreeSet<Var>,
}

impl PolarityReport {
    pub fn compute(phi: &Formula, p: &PartitionSequent) -> PolarityReport {
        let s = phi.signed_props();
        let (g1p, g1n) = signed(&p.gamma1);
        let (g2p, g2n) = signed(&p.gamma2);
        let (l1p, l1n) = signed(&p.delta1);
        let (d2p, d2n) = signed(&p.delta2);
        let meet = |a: &BTreeSet<Var>, b: &BTreeSet<Var>, c: &BTreeSet<Var>, d: &BTreeSet<Var>| {
            let left: BTreeSet<Var> = a.union(b).cloned().collect();
            let right: BTreeSet<Var> = c.union(d).cloned().collect();
            left.intersection(&right).cloned().collect()
        };
        PolarityReport {
            positive: s.positive,
            negative: s.negative,
            allowed_positive: meet(&g1p, &l1n, &g2n, &d2p),
            allowed_negative: meet(&g1n, &l1p, &g2p, &d2n),
        }
    }

    pub fn holds(&self) -> bool {
        self.positive.is_subset(&self.allowed_positive) && self.negative.is_subset(&self.allowed_negative)
    }
}

fn signed(m: &Multiset) -> (BTreeSet<Var>, BTreeSet<Var>) {
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    for f in m {
        let s = f.signed_props();
        pos.extend(s.positive);
        neg.extend(s.negative);
    }
    (pos, neg)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationResult {
    pub interpolant: Formula,
    /// `Γ1 ⇒ Λ1, φ`
    pub left_derivation: Derivation,
    /// `Γ2, φ ⇒ Δ2`
    pub right_derivation: Derivation,
    pub polarity_report: PolarityReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interpolation {
    Found(InterpolationResult),
    NotEntailed(Team),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Block {
    G1,
    G2,
    L1,
    D2,
}

fn block(p: &mut PartitionSequent, b: Block) -> &mut Multiset {
    match b {
        Block::G1 => &mut p.gamma1,
        Block::G2 => &mut p.gamma2,
        Block::L1 => &mut p.delta1,
        Block::D2 => &mut p.delta2,
    }
}

fn get(p: &PartitionSequent, b: Block) -> &Multiset {
    match b {
        Block::G1 => &p.gamma1,
        Block::G2 => &p.gamma2,
        Block::L1 => &p.delta1,
        Block::D2 => &p.delta2,
    }
}

/// The block holding the principal occurrence; the first block wins when
/// both contain the formula.
fn owner(p: &PartitionSequent, side: Side, f: &Formula) -> Block {
    match side {
        Side::Left if p.gamma1.contains(f) => Block::G1,
        Side::Left => Block::G2,
        Side::Right if p.delta1.contains(f) => Block::L1,
        Side::Right => Block::D2,
    }
}

fn remove(p: &mut PartitionSequent, b: Block, f: &Formula) -> Res<()> {
    let m = block(p, b);
    *m = m
        .without(f)
        .ok_or_else(|| InterpolationError::Shape(format!("`{f}` missing from its block")))?;
    Ok(())
}

fn add(p: &mut PartitionSequent, b: Block, f: &Formula) {
    block(p, b).insert(f.clone());
}

/// Premise partition: drop the principal occurrence and put each active
/// formula in `to`.
fn premise(p: &PartitionSequent, from: Block, principal: &Formula, to: Block, active: &[&Formula]) -> Res<PartitionSequent> {
    let mut q = p.clone();
    remove(&mut q, from, principal)?;
    for a in active {
        add(&mut q, to, a);
    }
    Ok(q)
}

fn axiom(s: Sequent) -> Res<Derivation> {
    calculus::axiom(&s).ok_or_else(|| InterpolationError::Shape(format!("`{s}` is not an axiom")))
}

fn left_seq(p: &PartitionSequent, phi: &Formula) -> Sequent {
    Sequent::new(p.gamma1.clone(), p.delta1.with(phi.clone()))
}

fn right_seq(p: &PartitionSequent, phi: &Formula) -> Sequent {
    Sequent::new(p.gamma2.with(phi.clone()), p.delta2.clone())
}

fn halves(f: &Formula) -> Res<(&Formula, &Formula)> {
    match f {
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Gd(a, b) => Ok((a, b)),
        _ => Err(InterpolationError::Shape(format!("`{f}` is not binary"))),
    }
}

/// Interpolant and component derivations for `d` under the partition `p`.
pub fn interpolate_partition(d: &Derivation, p: &PartitionSequent) -> Res<InterpolationResult> {
    let flat = p.flatten();
    if flat != d.conclusion {
        return Err(InterpolationError::PartitionMismatch {
            partition: flat,
            conclusion: d.conclusion.clone(),
        });
    }
    if let Some(f) = p.delta1.iter().find(|f| !f.is_classical()) {
        return Err(InterpolationError::NonClassicalLambda1(f.clone()));
    }
    if !d.is_cutfree() {
        return Err(InterpolationError::ContainsCut);
    }
    if let Some(r) = first_foreign(d) {
        return Err(InterpolationError::Unsupported(r));
    }
    let (interpolant, left_derivation, right_derivation) = go(d, p)?;
    let polarity_report = PolarityReport::compute(&interpolant, p);
    Ok(InterpolationResult {
        interpolant,
        left_derivation,
        right_derivation,
        polarity_report,
    })
}

fn first_foreign(d: &Derivation) -> Option<&'static str> {
    if d.rule.is_gt_prime_only() {
        return Some(d.rule.name());
    }
    d.premises.iter().find_map(first_foreign)
}

/// Proves the flattened sequent and interpolates the proof found.
pub fn interpolate(p: &PartitionSequent) -> Res<Interpolation> {
    if let Some(f) = p.delta1.iter().find(|f| !f.is_classical()) {
        return Err(InterpolationError::NonClassicalLambda1(f.clone()));
    }
    match prover::prove_or_countermodel(&p.flatten())? {
        Outcome::Proved(d) => Ok(Interpolation::Found(interpolate_partition(&d, p)?)),
        Outcome::Countermodel(t) => Ok(Interpolation::NotEntailed(t)),
    }
}

/// θ with `φ ⊨ θ ⊨ ψ` whose signed variables occur with the same sign in
/// both φ and ψ.
pub fn craig_lyndon(phi: &Formula, psi: &Formula) -> Res<Interpolation> {
    interpolate(&PartitionSequent {
        gamma1: Multiset::singleton(phi.clone()),
        gamma2: Multiset::empty(),
        delta1: Multiset::empty(),
        delta2: Multiset::singleton(psi.clone()),
    })
}

type Triple = (Formula, Derivation, Derivation);

fn go(d: &Derivation, p: &PartitionSequent) -> Res<Triple> {
    let c = &d.conclusion;
    match &d.rule {
        RuleApp::At { ante, .. } => {
            let v = c.antecedent.as_slice()[*ante].clone();
            let order = [(Block::G1, Block::L1), (Block::G2, Block::D2), (Block::G1, Block::D2), (Block::G2, Block::L1)];
            let (a, s) = order
                .into_iter()
                .find(|(a, s)| get(p, *a).contains(&v) && get(p, *s).contains(&v))
                .ok_or_else(|| InterpolationError::Shape(format!("`{v}` not shared by the partition")))?;
            let bot = Formula::Bot;
            let top = Formula::neg(Formula::Bot);
            match (a, s) {
                (Block::G1, Block::L1) => Ok((bot.clone(), axiom(left_seq(p, &bot))?, axiom(right_seq(p, &bot))?)),
                (Block::G1, _) => Ok((v.clone(), axiom(left_seq(p, &v))?, axiom(right_seq(p, &v))?)),
                (_, Block::L1) => {
                    let nv = Formula::neg(v.clone());
                    let l = calculus::r_neg(axiom(Sequent::new(p.gamma1.with(v.clone()), p.delta1.clone()))?, &v)?;
                    let r = calculus::l_neg(axiom(Sequent::new(p.gamma2.clone(), p.delta2.with(v.clone())))?, &v)?;
                    Ok((nv, l, r))
                }
                _ => {
                    let l = calculus::r_neg(axiom(Sequent::new(p.gamma1.with(bot.clone()), p.delta1.clone()))?, &bot)?;
                    Ok((top.clone(), l, axiom(right_seq(p, &top))?))
                }
            }
        }
        RuleApp::LBot { .. } => {
            let bot = Formula::Bot;
            if p.gamma1.contains(&bot) {
                Ok((bot.clone(), axiom(left_seq(p, &bot))?, axiom(right_seq(p, &bot))?))
            } else {
                let top = Formula::neg(Formula::Bot);
                let l = calculus::r_neg(axiom(Sequent::new(p.gamma1.with(bot.clone()), p.delta1.clone()))?, &bot)?;
                Ok((top.clone(), l, axiom(right_seq(p, &top))?))
            }
        }
        RuleApp::LNeg { ante } => {
            let f = &c.antecedent.as_slice()[*ante];
            let Formula::Neg(a) = f else { return shape(f) };
            let from = owner(p, Side::Left, f);
            let (to, left) = if from == Block::G1 { (Block::L1, true) } else { (Block::D2, false) };
            let (phi, l, r) = go(&d.premises[0], &premise(p, from, f, to, &[a])?)?;
            Ok(if left { (phi, calculus::l_neg(l, a)?, r) } else { (phi, l, calculus::l_neg(r, a)?) })
        }
        RuleApp::RNeg { succ } => {
            let f = &c.succedent.as_slice()[*succ];
            let Formula::Neg(a) = f else { return shape(f) };
            let from = owner(p, Side::Right, f);
            let (to, left) = if from == Block::L1 { (Block::G1, true) } else { (Block::G2, false) };
            let (phi, l, r) = go(&d.premises[0], &premise(p, from, f, to, &[a])?)?;
            Ok(if left { (phi, calculus::r_neg(l, a)?, r) } else { (phi, l, calculus::r_neg(r, a)?) })
        }
        RuleApp::LAnd { ante } => {
            let f = &c.antecedent.as_slice()[*ante];
            let (a, b) = halves(f)?;
            let from = owner(p, Side::Left, f);
            let (phi, l, r) = go(&d.premises[0], &premise(p, from, f, from, &[a, b])?)?;
            Ok(if from == Block::G1 { (phi, calculus::l_and(l, a, b)?, r) } else { (phi, l, calculus::l_and(r, a, b)?) })
        }
        RuleApp::ROr { succ } => {
            let f = &c.succedent.as_slice()[*succ];
            let (a, b) = halves(f)?;
            let from = owner(p, Side::Right, f);
            let (phi, l, r) = go(&d.premises[0], &premise(p, from, f, from, &[a, b])?)?;
            Ok(if from == Block::L1 { (phi, calculus::r_or(l, a, b)?, r) } else { (phi, l, calculus::r_or(r, a, b)?) })
        }
        RuleApp::RGd { succ, path, side } => {
            let f = &c.succedent.as_slice()[*succ];
            let active = f.resolve_at(path, *side).map_err(|e| InterpolationError::Shape(e.to_string()))?;
            // nonclassical, so it sits in Δ2
            let (phi, l, r) = go(&d.premises[0], &premise(p, Block::D2, f, Block::D2, &[&active])?)?;
            Ok((phi, l, calculus::r_gd(r, f, path, *side)?))
        }
        RuleApp::LGd { ante, path } => {
            let f = &c.antecedent.as_slice()[*ante];
            let from = owner(p, Side::Left, f);
            let mut parts = Vec::with_capacity(2);
            for (i, side) in [crate::syntax::Choice::L, crate::syntax::Choice::R].into_iter().enumerate() {
                let active = f.resolve_at(path, side).map_err(|e| InterpolationError::Shape(e.to_string()))?;
                parts.push(go(&d.premises[i], &premise(p, from, f, from, &[&active])?)?);
            }
            let (phi2, l2, r2) = parts.pop().expect("two premises");
            let (phi1, l1, r1) = parts.pop().expect("two premises");
            if from == Block::G2 {
                let phi = Formula::and(phi1.clone(), phi2.clone());
                let l = calculus::r_and(l1, l2, &phi1, &phi2, &Multiset::empty())?;
                let r1 = calculus::l_and(weaken(&r1, Side::Left, &phi2)?, &phi1, &phi2)?;
                let r2 = calculus::l_and(weaken(&r2, Side::Left, &phi1)?, &phi1, &phi2)?;
                return Ok((phi, l, calculus::l_gd(r1, r2, f, path)?));
            }
            if p.delta2.is_classical() {
                let phi = Formula::or(phi1.clone(), phi2.clone());
                let l1 = weaken(&l1, Side::Right, &phi2)?;
                let l2 = weaken(&l2, Side::Right, &phi1)?;
                let l = calculus::r_or(calculus::l_gd(l1, l2, f, path)?, &phi1, &phi2)?;
                let r = calculus::l_or(r1, r2, &phi1, &phi2, &Multiset::empty())?;
                Ok((phi, l, r))
            } else {
                let phi = Formula::gd(phi1.clone(), phi2.clone());
                let root = crate::syntax::OccurrencePath::root();
                let l1 = calculus::r_gd(l1, &phi, &root, crate::syntax::Choice::L)?;
                let l2 = calculus::r_gd(l2, &phi, &root, crate::syntax::Choice::R)?;
                let r = calculus::l_gd(r1, r2, &phi, &root)?;
                Ok((phi, calculus::l_gd(l1, l2, f, path)?, r))
            }
        }
        RuleApp::RAnd { succ, weakening, .. } => {
            let f = c.succedent.as_slice()[*succ].clone();
            let (a, b) = halves(&f)?;
            let from = owner(p, Side::Right, &f);
            let (d, rest) = settle_weakening(d, p, from, &f, weakening)?;
            let q1 = premise(&rest, from, &f, from, &[a])?;
            let q2 = premise(&rest, from, &f, from, &[b])?;
            let (x1, l1, r1) = go(&d.premises[0], &q1)?;
            let (x2, l2, r2) = go(&d.premises[1], &q2)?;
            let w = match &d.rule {
                RuleApp::RAnd { weakening, .. } => weakening.clone(),
                _ => unreachable!("settle_weakening keeps the rule"),
            };
            if from == Block::L1 {
                let phi = Formula::or(x1.clone(), x2.clone());
                let l1 = weaken(&l1, Side::Right, &x2)?;
                let l2 = weaken(&l2, Side::Right, &x1)?;
                let l = calculus::r_or(calculus::r_and(l1, l2, a, b, &Multiset::empty())?, &x1, &x2)?;
                let r = calculus::l_or(r1, r2, &x1, &x2, &w)?;
                Ok((phi, l, r))
            } else {
                let phi = Formula::and(x1.clone(), x2.clone());
                let l = calculus::r_and(l1, l2, &x1, &x2, &Multiset::empty())?;
                let r1 = weaken(&r1, Side::Left, &x2)?;
                let r2 = weaken(&r2, Side::Left, &x1)?;
                let r = calculus::l_and(calculus::r_and(r1, r2, a, b, &w)?, &x1, &x2)?;
                Ok((phi, l, r))
            }
        }
        RuleApp::LOr { ante, weakening, .. } => {
            let f = c.antecedent.as_slice()[*ante].clone();
            let (a, b) = halves(&f)?;
            let from = owner(p, Side::Left, &f);
            let (d, rest) = settle_weakening(d, p, from, &f, weakening)?;
            let q1 = premise(&rest, from, &f, from, &[a])?;
            let q2 = premise(&rest, from, &f, from, &[b])?;
            let (x1, l1, r1) = go(&d.premises[0], &q1)?;
            let (x2, l2, r2) = go(&d.premises[1], &q2)?;
            let w = match &d.rule {
                RuleApp::LOr { weakening, .. } => weakening.clone(),
                _ => unreachable!("settle_weakening keeps the rule"),
            };
            if from == Block::G1 {
                let phi = Formula::or(x1.clone(), x2.clone());
                let l1 = weaken(&l1, Side::Right, &x2)?;
                let l2 = weaken(&l2, Side::Right, &x1)?;
                let l = calculus::r_or(calculus::l_or(l1, l2, a, b, &Multiset::empty())?, &x1, &x2)?;
                let r = calculus::l_or(r1, r2, &x1, &x2, &w)?;
                Ok((phi, l, r))
            } else {
                let phi = Formula::and(x1.clone(), x2.clone());
                let l = calculus::r_and(l1, l2, &x1, &x2, &Multiset::empty())?;
                let r1 = calculus::l_and(weaken(&r1, Side::Left, &x2)?, &x1, &x2)?;
                let r2 = calculus::l_and(weaken(&r2, Side::Left, &x1)?, &x1, &x2)?;
                let r = calculus::l_or(r1, r2, a, b, &w)?;
                Ok((phi, l, r))
            }
        }
        RuleApp::Cut { .. } => Err(InterpolationError::ContainsCut),
        other => Err(InterpolationError::Unsupported(other.name())),
    }
}

fn shape<T>(f: &Formula) -> Res<T> {
    Err(InterpolationError::Shape(format!("unexpected principal formula `{f}`")))
}

/// Splits the implicit weakening of an RAnd or LOr node against the
/// partition. Copies found in Δ2 stay in the weakening; the remaining ones
/// can only come from the classical Λ1 and are moved into the shared context
/// by weakening both premises. Returns the (possibly rebuilt) node and the
/// partition with the principal formula still present but the weakening
/// removed from Δ2.
fn settle_weakening(
    d: &Derivation,
    p: &PartitionSequent,
    from: Block,
    principal: &Formula,
    weakening: &Multiset,
) -> Res<(Derivation, PartitionSequent)> {
    let mut rest = p.clone();
    // keep the principal out of the lookup while matching the weakening
    remove(&mut rest, from, principal)?;
    let mut kept = Vec::new();
    let mut lifted = Vec::new();
    for w in weakening {
        if rest.delta2.contains(w) {
            remove(&mut rest, Block::D2, w)?;
            kept.push(w.clone());
        } else {
            lifted.push(w.clone());
        }
    }
    add(&mut rest, from, principal);
    if lifted.is_empty() {
        return Ok((d.clone(), rest));
    }
    let mut ps = d.premises.clone();
    for x in &mut ps {
        for w in &lifted {
            *x = weaken(x, Side::Right, w)?;
        }
    }
    let kept = Multiset::new(kept);
    let mut it = ps.into_iter();
    let (p1, p2) = (it.next().expect("binary"), it.next().expect("binary"));
    let (a, b) = halves(principal)?;
    let rebuilt = match &d.rule {
        RuleApp::RAnd { .. } => calculus::r_and(p1, p2, a, b, &kept)?,
        _ => calculus::l_or(p1, p2, a, b, &kept)?,
    };
    Ok((rebuilt, rest))
}

/// Outcome of an independent check of an interpolation result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub left_checks: bool,
    pub right_checks: bool,
    pub left_valid: bool,
    pub right_valid: bool,
    pub polarity: bool,
    pub notes: Vec<String>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.left_checks && self.right_checks && self.left_valid && self.right_valid && self.polarity
    }
}

pub fn verify_interpolant(r: &InterpolationResult, p: &PartitionSequent) -> bool {
    verify_report(r, p).ok()
}

/// Rechecks both component derivations, their endsequents against the
/// partition, the validity of both sequents by team enumeration, and the
/// polarity bounds recomputed from scratch.
pub fn verify_report(r: &InterpolationResult, p: &PartitionSequent) -> Verification {
    let mut notes = Vec::new();
    let phi = &r.interpolant;
    let mut component = |name: &str, d: &Derivation, want: &Sequent| -> (bool, bool) {
        let mut checks = true;
        if let Err(e) = check_derivation(d) {
            notes.push(format!("{name} derivation: {e}"));
            checks = false;
        }
        if !d.is_cutfree() || !d.is_gt() {
            notes.push(format!("{name} derivation is not cutfree GT"));
            checks = false;
        }
        if &d.conclusion != want {
            notes.push(format!("{name} derivation ends in `{}`, expected `{want}`", d.conclusion));
            checks = false;
        }
        let valid = match sequent_valid(want) {
            Ok(v) => v,
            Err(e) => {
                notes.push(format!("{name} sequent: {e}"));
                false
            }
        };
        if !valid {
            notes.push(format!("`{want}` is not valid"));
        }
        (checks, valid)
    };
    let (left_checks, left_valid) = component("left", &r.left_derivation, &left_seq(p, phi));
    let (right_checks, right_valid) = component("right", &r.right_derivation, &right_seq(p, phi));
    let report = PolarityReport::compute(phi, p);
    let polarity = report.holds();
    if !polarity {
        notes.push(format!(
            "signed variables +{:?} -{:?} exceed +{:?} -{:?}",
            report.positive, report.negative, report.allowed_positive, report.allowed_negative
        ));
    }
    Verification {
        left_checks,
        right_checks,
        left_valid,
        right_valid,
        polarity,
        notes,
    }
}

/// Optional clean-up of `⊥` and `¬⊥` units; not applied by the algorithm.
pub fn simplify(f: &Formula) -> Formula {
    let top = Formula::neg(Formula::Bot);
    match f {
        Formula::Prop(_) | Formula::Bot => f.clone(),
        Formula::Neg(a) => Formula::neg(simplify(a)),
        Formula::And(a, b) => match (simplify(a), simplify(b)) {
            (Formula::Bot, _) | (_, Formula::Bot) => Formula::Bot,
            (x, y) if x == top => y,
            (x, y) if y == top => x,
            (x, y) => Formula::and(x, y),
        },
        Formula::Or(a, b) => match (simplify(a), simplify(b)) {
            (Formula::Bot, y) => y,
            (x, Formula::Bot) => x,
            (x, y) => Formula::or(x, y),
        },
        Formula::Gd(a, b) => match (simplify(a), simplify(b)) {
            (x, y) if x == y => x,
            (x, y) => Formula::gd(x, y),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequent::parse_partition_sequent;
    use crate::syntax::{parse_formula, Choice, OccurrencePath};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn part(s: &str) -> PartitionSequent {
        parse_partition_sequent(s).unwrap()
    }

    fn seq(s: &str) -> Sequent {
        s.parse().unwrap()
    }

    /// The annotated derivation of `(p||q)|r, ~p => r|s, q||x`.
    pub(crate) fn worked_derivation() -> Derivation {
        let branch = |v: &str| {
            let left = calculus::axiom(&seq(&format!("{v} => r, s, q, p"))).unwrap();
            let right = calculus::axiom(&seq("r => r, s, q, p")).unwrap();
            let d = calculus::l_or(left, right, &f(v), &f("r"), &Multiset::empty()).unwrap();
            let d = calculus::l_neg(d, &f("p")).unwrap();
            let d = calculus::r_or(d, &f("r"), &f("s")).unwrap();
            calculus::r_gd(d, &f("q||x"), &OccurrencePath::root(), Choice::L).unwrap()
        };
        calculus::l_gd(branch("p"), branch("q"), &f("(p||q)|r"), &OccurrencePath(vec![0])).unwrap()
    }

    #[test]
    fn worked_example() {
        let d = worked_derivation();
        check_derivation(&d).unwrap();
        let p = part("(p||q)|r ; ~p => r|s ; q||x");
        let r = interpolate_partition(&d, &p).unwrap();
        assert_eq!(r.interpolant, f("(p|bot)||(q|bot)"));
        assert!(verify_interpolant(&r, &p), "{:?}", verify_report(&r, &p));
        assert_eq!(simplify(&r.interpolant), f("p||q"));
    }

    #[test]
    fn bot_is_rejected_by_verification() {
        let p = part("(p||q)|r ; ~p => r|s ; q||x");
        let mut r = interpolate_partition(&worked_derivation(), &p).unwrap();
        r.interpolant = Formula::Bot;
        let v = verify_report(&r, &p);
        assert!(!v.ok());
        assert!(!v.left_valid);
    }

    #[test]
    fn trivial_axiom() {
        let p = part("p ; => ; p");
        let d = calculus::axiom(&p.flatten()).unwrap();
        let r = interpolate_partition(&d, &p).unwrap();
        assert_eq!(r.interpolant, f("p"));
        assert!(verify_interpolant(&r, &p));
    }

    #[test]
    fn axiom_table() {
        for (s, want) in [("p ; => p ;", "bot"), ("; p => p ;", "~p"), ("; p => ; p", "~bot"), ("bot ; => ;", "bot"), ("; bot => ;", "~bot")] {
            let p = part(s);
            let d = calculus::axiom(&p.flatten()).unwrap();
            let r = interpolate_partition(&d, &p).unwrap();
            assert_eq!(r.interpolant, f(want), "{s}");
            assert!(verify_interpolant(&r, &p), "{s}");
        }
    }

    #[test]
    fn preconditions() {
        let d = calculus::axiom(&seq("p => p")).unwrap();
        assert!(matches!(
            interpolate_partition(&d, &part("p ; => ; q")),
            Err(InterpolationError::PartitionMismatch { .. })
        ));
        let d = prover::prove(&seq("p||q => p||q")).unwrap().unwrap();
        assert!(matches!(
            interpolate_partition(&d, &part("p||q ; => p||q ;")),
            Err(InterpolationError::NonClassicalLambda1(_))
        ));
        let c = calculus::cut(
            calculus::axiom(&seq("p => p")).unwrap(),
            calculus::axiom(&seq("p => p")).unwrap(),
            &f("p"),
        )
        .unwrap();
        assert_eq!(interpolate_partition(&c, &part("p ; => ; p")), Err(InterpolationError::ContainsCut));
    }

    #[test]
    fn weakening_from_lambda1_is_moved_into_context() {
        // RAnd with weakening `r`, which the partition places in Λ1
        let d = calculus::r_and(
            calculus::axiom(&seq("p, q => p")).unwrap(),
            calculus::axiom(&seq("p, q => q")).unwrap(),
            &f("p"),
            &f("q"),
            &Multiset::singleton(f("r")),
        )
        .unwrap();
        for s in ["p ; q => r ; p&q", "p ; q => p&q, r ;", "q ; p => r ; p&q", "; p, q => r ; p&q"] {
            let p = part(s);
            let r = interpolate_partition(&d, &p).unwrap();
            assert!(verify_interpolant(&r, &p), "{s}: {:?}", verify_report(&r, &p));
        }
    }

    #[test]
    fn craig_cases() {
        let Interpolation::Found(r) = craig_lyndon(&f("p & q"), &f("p | r")).unwrap() else {
            panic!("entailed")
        };
        assert!(r.interpolant.props().iter().all(|v| v.to_string() == "p"));
        assert!(r.polarity_report.negative.is_empty());
        assert!(matches!(craig_lyndon(&f("p"), &f("q")).unwrap(), Interpolation::NotEntailed(_)));
    }
}
