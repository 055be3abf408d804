//! Seeded generators for randomized suites: formulas, sequents, non-normal
//! derivations and derivations with injected cuts.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{self, Derivation, RuleApp};
use crate::prover::{prove_or_countermodel_with, Outcome, ProverConfig};
use crate::sequent::{Multiset, Sequent};
use crate::syntax::{Formula, OccurrencePath};

#[derive(Clone, Debug)]
pub struct Shape {
    pub vars: Vec<&'static str>,
    pub max_depth: usize,
    /// Upper bound on `||` occurrences per side.
    pub max_gd: usize,
    pub max_ante: usize,
    pub max_succ: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            vars: vec!["p", "q", "r"],
            max_depth: 4,
            max_gd: 2,
            max_ante: 2,
            max_succ: 2,
        }
    }
}

pub struct Gen {
    pub rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn atom(&mut self, vars: &[&str]) -> Formula {
        if self.rng.gen_ratio(1, 12) {
            Formula::Bot
        } else {
            Formula::prop(vars.choose(&mut self.rng).expect("nonempty vocabulary"))
        }
    }

    pub fn classical(&mut self, vars: &[&str], depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_ratio(1, 3) {
            return self.atom(vars);
        }
        match self.rng.gen_range(0..3) {
            0 => Formula::neg(self.classical(vars, depth - 1)),
            1 => Formula::and(self.classical(vars, depth - 1), self.classical(vars, depth - 1)),
            _ => Formula::or(self.classical(vars, depth - 1), self.classical(vars, depth - 1)),
        }
    }

    /// A formula of depth at most `depth` with at most `*gd` inquisitive
    /// disjunctions; the allowance is consumed as they are placed.
    pub fn formula(&mut self, vars: &[&str], depth: usize, gd: &mut usize) -> Formula {
        if depth == 0 || self.rng.gen_ratio(1, 4) {
            return self.atom(vars);
        }
        let pick = if *gd > 0 { self.rng.gen_range(0..5) } else { self.rng.gen_range(0..3) };
        match pick {
            0 => Formula::neg(self.classical(vars, depth - 1)),
            1 => {
                let a = self.formula(vars, depth - 1, gd);
                Formula::and(a, self.formula(vars, depth - 1, gd))
            }
            2 => {
                let a = self.formula(vars, depth - 1, gd);
                Formula::or(a, self.formula(vars, depth - 1, gd))
            }
            _ => {
                *gd -= 1;
                let a = self.formula(vars, depth - 1, gd);
                Formula::gd(a, self.formula(vars, depth - 1, gd))
            }
        }
    }

    fn side(&mut self, shape: &Shape, min: usize, max: usize) -> Multiset {
        let n = self.rng.gen_range(min..=max);
        let mut gd = shape.max_gd;
        (0..n).map(|_| self.formula(&shape.vars, shape.max_depth, &mut gd)).collect()
    }

    pub fn sequent(&mut self, shape: &Shape) -> Sequent {
        let ante = self.side(shape, 0, shape.max_ante);
        let succ = self.side(shape, 1, shape.max_succ.max(1));
        Sequent::new(ante, succ)
    }

    pub fn classical_sequent(&mut self, vars: &[&str], depth: usize, max_side: usize) -> Sequent {
        let a = self.rng.gen_range(0..=max_side);
        let s = self.rng.gen_range(0..=max_side);
        Sequent::new(
            (0..a).map(|_| self.classical(vars, depth)).collect(),
            (0..s).map(|_| self.classical(vars, depth)).collect(),
        )
    }

    /// A sequent that tends to be valid: some antecedent material is copied
    /// (possibly resolved) into the succedent, or a tautology is added.
    pub fn likely_valid_sequent(&mut self, shape: &Shape) -> Sequent {
        let s = self.sequent(shape);
        match self.rng.gen_range(0..4) {
            0 => s,
            1 if !s.antecedent.is_empty() => {
                let f = s.antecedent.as_slice().choose(&mut self.rng).expect("nonempty").clone();
                Sequent::new(s.antecedent.clone(), s.succedent.with(f))
            }
            2 => {
                let p = Formula::prop(shape.vars.choose(&mut self.rng).expect("nonempty"));
                let taut = if self.rng.gen_bool(0.5) {
                    Formula::or(p.clone(), Formula::neg(p.clone()))
                } else {
                    Formula::gd(p.clone(), Formula::neg(p.clone()))
                };
                Sequent::new(s.antecedent.with(p), s.succedent.with(taut))
            }
            _ => {
                let mut gd = 1;
                let f = self.formula(&shape.vars, 2, &mut gd);
                Sequent::new(s.antecedent.with(f.clone()), s.succedent.with(f))
            }
        }
    }

    /// A valid sequent together with its prover derivation.
    pub fn proved(&mut self, shape: &Shape, tries: usize) -> Option<Derivation> {
        for _ in 0..tries {
            let s = self.likely_valid_sequent(shape);
            if let Ok(Outcome::Proved(d)) = prove_or_countermodel_with(&s, ProverConfig::default()) {
                return Some(d);
            }
        }
        None
    }

    /// Replaces up to `n` random subderivations by a cut against an identity
    /// derivation of one of their conclusion's formulas.
    pub fn inject_cuts(&mut self, d: &Derivation, n: usize) -> Derivation {
        let mut d = d.clone();
        for _ in 0..n {
            let size = d.size();
            let target = self.rng.gen_range(0..size);
            let left = self.rng.gen_bool(0.5);
            let pick = self.rng.gen::<u64>();
            d = replace_nth(&d, target, &mut |sub| identity_cut(sub, left, pick));
        }
        d
    }

    /// A derivation that applies classical rules and root-level LGd before
    /// deep rules wherever they are invertible, so it is usually not in
    /// normal form.
    pub fn eager(&mut self, s: &Sequent) -> Option<Derivation> {
        eager(s, 0)
    }
}

fn identity(f: &Formula) -> Derivation {
    match prove_or_countermodel_with(&Sequent::from_vecs(vec![f.clone()], vec![f.clone()]), ProverConfig::default()) {
        Ok(Outcome::Proved(d)) => d,
        other => panic!("identity sequent for `{f}` not proved: {other:?}"),
    }
}

/// `sub` with a cut on a formula of its conclusion against an identity.
fn identity_cut(sub: &Derivation, left: bool, pick: u64) -> Option<Derivation> {
    let c = &sub.conclusion;
    let (side, other) = if left {
        (&c.antecedent, &c.succedent)
    } else {
        (&c.succedent, &c.antecedent)
    };
    let pool = if side.is_empty() { other } else { side };
    if pool.is_empty() {
        return None;
    }
    let from_ante = if side.is_empty() { !left } else { left };
    let phi = pool.as_slice()[(pick % pool.len() as u64) as usize].clone();
    let id = identity(&phi);
    let d = if from_ante {
        calculus::cut(id, sub.clone(), &phi)
    } else {
        calculus::cut(sub.clone(), id, &phi)
    };
    Some(d.expect("identity cuts are well formed"))
}

/// Rewrites the `n`-th node in preorder with `f` (unchanged when `f` declines).
pub fn replace_nth(d: &Derivation, n: usize, f: &mut dyn FnMut(&Derivation) -> Option<Derivation>) -> Derivation {
    fn go(d: &Derivation, n: &mut usize, f: &mut dyn FnMut(&Derivation) -> Option<Derivation>) -> Derivation {
        if *n == 0 {
            *n = usize::MAX;
            return f(d).unwrap_or_else(|| d.clone());
        }
        *n -= 1;
        let premises = d.premises.iter().map(|p| go(p, n, f)).collect();
        Derivation {
            rule: d.rule.clone(),
            conclusion: d.conclusion.clone(),
            premises,
        }
    }
    let mut k = n;
    go(d, &mut k, f)
}

fn eager(s: &Sequent, depth: usize) -> Option<Derivation> {
    if depth > 64 {
        return None;
    }
    if let Some(ax) = calculus::axiom(s) {
        return Some(ax);
    }
    let g = &s.antecedent;
    let d = &s.succedent;
    let next = |p: &Sequent| eager(p, depth + 1);
    for (i, f) in g.iter().enumerate() {
        match f {
            Formula::And(a, b) => {
                let p = next(&Sequent::new(g.remove_at(i).with((**a).clone()).with((**b).clone()), d.clone()))?;
                return calculus::l_and(p, a, b).ok();
            }
            Formula::Gd(a, b) => {
                let rest = g.remove_at(i);
                let p1 = next(&Sequent::new(rest.with((**a).clone()), d.clone()))?;
                let p2 = next(&Sequent::new(rest.with((**b).clone()), d.clone()))?;
                return calculus::l_gd(p1, p2, f, &OccurrencePath::root()).ok();
            }
            Formula::Neg(a) => {
                let p = next(&Sequent::new(g.remove_at(i), d.with((**a).clone())))?;
                return calculus::l_neg(p, a).ok();
            }
            _ => {}
        }
    }
    for (i, f) in d.iter().enumerate() {
        match f {
            Formula::Or(a, b) => {
                let p = next(&Sequent::new(g.clone(), d.remove_at(i).with((**a).clone()).with((**b).clone())))?;
                return calculus::r_or(p, a, b).ok();
            }
            Formula::Neg(a) => {
                let p = next(&Sequent::new(g.with((**a).clone()), d.remove_at(i)))?;
                return calculus::r_neg(p, a).ok();
            }
            Formula::And(a, b) => {
                let rest = d.remove_at(i);
                let (ctx, weak): (Vec<Formula>, Vec<Formula>) = rest.iter().cloned().partition(Formula::is_classical);
                let (ctx, weak) = (Multiset::new(ctx), Multiset::new(weak));
                let p1 = Sequent::new(g.clone(), ctx.with((**a).clone()));
                let p2 = Sequent::new(g.clone(), ctx.with((**b).clone()));
                if weak.is_empty() || crate::semantics::sequent_valid(&p1).unwrap_or(false)
                    && crate::semantics::sequent_valid(&p2).unwrap_or(false)
                {
                    let (Some(d1), Some(d2)) = (next(&p1), next(&p2)) else {
                        continue;
                    };
                    return calculus::r_and(d1, d2, a, b, &weak).ok();
                }
            }
            _ => {}
        }
    }
    if d.is_classical() {
        if let Some(i) = g.iter().position(|f| matches!(f, Formula::Or(..))) {
            let Formula::Or(a, b) = &g.as_slice()[i] else { unreachable!() };
            let rest = g.remove_at(i);
            let p1 = next(&Sequent::new(rest.with((**a).clone()), d.clone()))?;
            let p2 = next(&Sequent::new(rest.with((**b).clone()), d.clone()))?;
            return calculus::l_or(p1, p2, a, b, &Multiset::empty()).ok();
        }
    }
    match prove_or_countermodel_with(s, ProverConfig::default()) {
        Ok(Outcome::Proved(d)) => Some(d),
        _ => None,
    }
}

/// Count of nodes whose rule matches `pred`.
pub fn count_rules(d: &Derivation, pred: &dyn Fn(&RuleApp) -> bool) -> usize {
    usize::from(pred(&d.rule)) + d.premises.iter().map(|p| count_rules(p, pred)).sum::<usize>()
}
