//! Decision procedure: a cutfree derivation for valid sequents, a countermodel
//! team for invalid ones.
//!
//! The search has three stages. Antecedent `||` occurrences are inverted with
//! LGd (leftmost formula, leftmost occurrence first) down to classical Ξ. For
//! each Ξ the succedent resolutions are tried in enumeration order, and each
//! candidate `Ξ ⇒ Λ` goes to the G3cp search. Successful leaves are rebuilt
//! with RGd chains and the LGd tree; failures are lifted back to a team.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::calculus::{self, Derivation, RuleApp};
use crate::resolutions::{list_resolutions, Move};
use crate::semantics::{satisfies, Team};
use crate::sequent::{Multiset, Sequent};
use crate::syntax::{Choice, Formula, Var};

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProverConfig {
    /// Maximum number of expanded search nodes.
    pub node_budget: usize,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProverError {
    #[error("search budget of {budget} nodes exceeded in the {stage} stage at `{pending}`")]
    ResourceLimit {
        budget: usize,
        stage: &'static str,
        pending: Sequent,
    },
    #[error("expected a classical sequent, got `{0}`")]
    NonClassicalInput(Sequent),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("cannot lift a countermodel through {rule}: {reason}")]
pub struct CaseMismatch {
    pub rule: &'static str,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Proved(Derivation),
    Countermodel(Team),
}

/// One step of a failed classical branch: the sequent, the rule inverted on
/// it, and the countermodel lifted to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub sequent: Sequent,
    pub rule: Option<RuleApp>,
    pub team: Team,
}

/// The failed branch of a classical search, root first. The last step is
/// the invalid atomic leaf (with `rule` empty); the first carries the
/// countermodel to the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalCountermodelTrace {
    pub steps: Vec<TraceStep>,
}

impl ClassicalCountermodelTrace {
    pub fn team(&self) -> &Team {
        &self.steps[0].team
    }

    pub fn leaf(&self) -> &Sequent {
        &self.steps.last().expect("traces are nonempty").sequent
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassicalOutcome {
    Proved(Derivation),
    Refuted(ClassicalCountermodelTrace),
}

/// Domain used for countermodels: the sequent's variables in sorted order.
pub fn sequent_domain(s: &Sequent) -> Vec<Var> {
    s.props().into_iter().collect()
}

/// `{v}` with `v(p) = 1` iff `p` occurs in the antecedent.
pub fn atomic_countermodel(s: &Sequent, domain: &[Var]) -> Team {
    let v = domain
        .iter()
        .map(|p| s.antecedent.contains(&Formula::Prop(p.clone())))
        .collect();
    Team::new(domain.to_vec(), [v])
}

/// Turns countermodels to premises into a countermodel to `conclusion`.
/// LNeg keeps the members falsifying the active formula, RGd takes the
/// union of the countermodels to both resolved premises, RAnd and LOr take
/// the countermodel of either premise, and the remaining invertible rules
/// pass the team through.
pub fn lift_countermodel(conclusion: &Sequent, rule: &RuleApp, premise_models: &[Team]) -> Result<Team, CaseMismatch> {
    let name = rule.name();
    let fail = |reason: String| CaseMismatch { rule: name, reason };
    let want = match rule {
        RuleApp::At { .. } | RuleApp::LBot { .. } => return Err(fail("axioms have no countermodels".into())),
        RuleApp::Cut { .. } | RuleApp::LOrI { .. } | RuleApp::RAndI { .. } => {
            return Err(fail("no lifting case for this rule".into()))
        }
        RuleApp::RGd { .. } => 2,
        _ => 1,
    };
    if premise_models.len() != want {
        return Err(fail(format!("expected {want} team(s), got {}", premise_models.len())));
    }
    let t = &premise_models[0];
    match rule {
        RuleApp::LNeg { ante } => {
            let Some(Formula::Neg(alpha)) = conclusion.antecedent.get(*ante) else {
                return Err(fail("principal formula is not a negation".into()));
            };
            let mut err = None;
            let out = t.filter(|v| match satisfies(&t.singleton(v), alpha) {
                Ok(b) => !b,
                Err(e) => {
                    err = Some(e);
                    false
                }
            });
            match err {
                Some(e) => Err(fail(e.to_string())),
                None => Ok(out),
            }
        }
        RuleApp::RGd { .. } => {
            let u = &premise_models[1];
            if t.domain() != u.domain() {
                return Err(fail("teams over different domains".into()));
            }
            Ok(t.union(u))
        }
        _ => Ok(t.clone()),
    }
}

/// Builds `Γ ⇒ Δ` from classical leaves by LGd inversion: the leftmost
/// antecedent formula with a `||` is resolved at its leftmost occurrence,
/// left premise first. `leaf` receives each classical `Ξ ⇒ Δ`.
pub fn left_gd_tree<E>(
    ante: &Multiset,
    succ: &Multiset,
    leaf: &mut dyn FnMut(&Sequent) -> Result<Derivation, E>,
) -> Result<Derivation, E> {
    fn go<E>(
        list: &mut Vec<Formula>,
        start: usize,
        succ: &Multiset,
        leaf: &mut dyn FnMut(&Sequent) -> Result<Derivation, E>,
    ) -> Result<Derivation, E> {
        let Some(i) = (start..list.len()).find(|&i| !list[i].is_classical()) else {
            return leaf(&Sequent::new(Multiset::new(list.clone()), succ.clone()));
        };
        let chi = list[i].clone();
        let path = chi.gd_paths().into_iter().next().expect("nonclassical formulas contain ||");
        list[i] = chi.resolve_at(&path, Choice::L).expect("path from gd_paths");
        let p1 = go(list, i, succ, leaf)?;
        list[i] = chi.resolve_at(&path, Choice::R).expect("path from gd_paths");
        let p2 = go(list, i, succ, leaf)?;
        list[i] = chi.clone();
        Ok(calculus::l_gd(p1, p2, &chi, &path).expect("LGd over its own resolutions"))
    }
    let mut list = ante.as_slice().to_vec();
    go(&mut list, 0, succ, leaf)
}

/// Applies RGd chains to `d`, turning each resolved succedent formula back
/// into `originals[k]` along `moves[k]`.
pub fn rebuild_succedent(mut d: Derivation, originals: &[Formula], moves: &[Vec<Move>]) -> calculus::BuildResult {
    for (orig, ms) in originals.iter().zip(moves) {
        let mut chain = vec![orig.clone()];
        for (path, side) in ms {
            let next = chain
                .last()
                .expect("chain starts nonempty")
                .resolve_at(path, *side)
                .map_err(|e| calculus::Violation::Rule {
                    rule: "RGd",
                    reason: e.to_string(),
                })?;
            chain.push(next);
        }
        for (j, (path, side)) in ms.iter().enumerate().rev() {
            d = calculus::r_gd(d, &chain[j], path, *side)?;
        }
    }
    Ok(d)
}

enum Fail {
    Counter(Team),
    Error(ProverError),
}

impl From<ProverError> for Fail {
    fn from(e: ProverError) -> Self {
        Fail::Error(e)
    }
}

struct Search {
    budget: usize,
    expanded: usize,
    domain: Vec<Var>,
    cache: HashMap<Sequent, ClassicalOutcome>,
}

impl Search {
    fn new(cfg: ProverConfig, domain: Vec<Var>) -> Search {
        Search {
            budget: cfg.node_budget,
            expanded: 0,
            domain,
            cache: HashMap::new(),
        }
    }

    fn tick(&mut self, s: &Sequent, stage: &'static str) -> Result<(), ProverError> {
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(ProverError::ResourceLimit {
                budget: self.budget,
                stage,
                pending: s.clone(),
            });
        }
        Ok(())
    }

    fn classical(&mut self, s: &Sequent) -> Result<ClassicalOutcome, ProverError> {
        if let Some(hit) = self.cache.get(s) {
            return Ok(hit.clone());
        }
        let out = self.g3(s)?;
        self.cache.insert(s.clone(), out.clone());
        Ok(out)
    }

    fn lifted(&self, s: &Sequent, rule: RuleApp, models: &[Team], mut tr: ClassicalCountermodelTrace) -> ClassicalOutcome {
        let team = lift_countermodel(s, &rule, models).expect("search rules have lifting cases");
        tr.steps.insert(
            0,
            TraceStep {
                sequent: s.clone(),
                rule: Some(rule),
                team,
            },
        );
        ClassicalOutcome::Refuted(tr)
    }

    fn unary(
        &mut self,
        s: &Sequent,
        rule: RuleApp,
        prem: Sequent,
        build: impl FnOnce(Derivation) -> calculus::BuildResult,
    ) -> Result<ClassicalOutcome, ProverError> {
        Ok(match self.g3(&prem)? {
            ClassicalOutcome::Proved(p) => {
                let d = build(p).expect("inverted rule rebuilds its conclusion");
                debug_assert_eq!(&d.conclusion, s);
                ClassicalOutcome::Proved(d)
            }
            ClassicalOutcome::Refuted(tr) => {
                let t = tr.team().clone();
                self.lifted(s, rule, &[t], tr)
            }
        })
    }

    fn binary(
        &mut self,
        s: &Sequent,
        rule: RuleApp,
        prems: [Sequent; 2],
        build: impl FnOnce(Derivation, Derivation) -> calculus::BuildResult,
    ) -> Result<ClassicalOutcome, ProverError> {
        let [p1, p2] = prems;
        let d1 = match self.g3(&p1)? {
            ClassicalOutcome::Proved(d) => d,
            ClassicalOutcome::Refuted(tr) => {
                let t = tr.team().clone();
                return Ok(self.lifted(s, rule, &[t], tr));
            }
        };
        let d2 = match self.g3(&p2)? {
            ClassicalOutcome::Proved(d) => d,
            ClassicalOutcome::Refuted(tr) => {
                let t = tr.team().clone();
                return Ok(self.lifted(s, rule, &[t], tr));
            }
        };
        let d = build(d1, d2).expect("inverted rule rebuilds its conclusion");
        debug_assert_eq!(&d.conclusion, s);
        Ok(ClassicalOutcome::Proved(d))
    }

    /// Root-first G3cp search with fixed priority: closure, LAnd, ROr, LNeg,
    /// RNeg, RAnd, LOr.
    fn g3(&mut self, s: &Sequent) -> Result<ClassicalOutcome, ProverError> {
        self.tick(s, "classical")?;
        if let Some(d) = calculus::axiom(s) {
            return Ok(ClassicalOutcome::Proved(d));
        }
        let g = &s.antecedent;
        let d = &s.succedent;
        if let Some(i) = g.iter().position(|f| matches!(f, Formula::And(..))) {
            let Formula::And(a, b) = &g.as_slice()[i] else { unreachable!() };
            let prem = Sequent::new(g.remove_at(i).with((**a).clone()).with((**b).clone()), d.clone());
            return self.unary(s, RuleApp::LAnd { ante: i }, prem, |p| calculus::l_and(p, a, b));
        }
        if let Some(i) = d.iter().position(|f| matches!(f, Formula::Or(..))) {
            let Formula::Or(a, b) = &d.as_slice()[i] else { unreachable!() };
            let prem = Sequent::new(g.clone(), d.remove_at(i).with((**a).clone()).with((**b).clone()));
            return self.unary(s, RuleApp::ROr { succ: i }, prem, |p| calculus::r_or(p, a, b));
        }
        if let Some(i) = g.iter().position(|f| matches!(f, Formula::Neg(_))) {
            let Formula::Neg(a) = &g.as_slice()[i] else { unreachable!() };
            let prem = Sequent::new(g.remove_at(i), d.with((**a).clone()));
            return self.unary(s, RuleApp::LNeg { ante: i }, prem, |p| calculus::l_neg(p, a));
        }
        if let Some(i) = d.iter().position(|f| matches!(f, Formula::Neg(_))) {
            let Formula::Neg(a) = &d.as_slice()[i] else { unreachable!() };
            let prem = Sequent::new(g.with((**a).clone()), d.remove_at(i));
            return self.unary(s, RuleApp::RNeg { succ: i }, prem, |p| calculus::r_neg(p, a));
        }
        if let Some(i) = d.iter().position(|f| matches!(f, Formula::And(..))) {
            let Formula::And(a, b) = &d.as_slice()[i] else { unreachable!() };
            let ctx = d.remove_at(i);
            let rule = RuleApp::RAnd {
                succ: i,
                context: ctx.clone(),
                weakening: Multiset::empty(),
            };
            let prems = [
                Sequent::new(g.clone(), ctx.with((**a).clone())),
                Sequent::new(g.clone(), ctx.with((**b).clone())),
            ];
            return self.binary(s, rule, prems, |p1, p2| calculus::r_and(p1, p2, a, b, &Multiset::empty()));
        }
        if let Some(i) = g.iter().position(|f| matches!(f, Formula::Or(..))) {
            let Formula::Or(a, b) = &g.as_slice()[i] else { unreachable!() };
            let rest = g.remove_at(i);
            let rule = RuleApp::LOr {
                ante: i,
                context: d.clone(),
                weakening: Multiset::empty(),
            };
            let prems = [
                Sequent::new(rest.with((**a).clone()), d.clone()),
                Sequent::new(rest.with((**b).clone()), d.clone()),
            ];
            return self.binary(s, rule, prems, |p1, p2| calculus::l_or(p1, p2, a, b, &Multiset::empty()));
        }
        let team = atomic_countermodel(s, &self.domain);
        Ok(ClassicalOutcome::Refuted(ClassicalCountermodelTrace {
            steps: vec![TraceStep {
                sequent: s.clone(),
                rule: None,
                team,
            }],
        }))
    }

    /// Stage 2 for one classical antecedent: first provable succedent
    /// resolution wins; if none is provable the countermodels are united.
    fn stage2(&mut self, xi: &Sequent) -> Result<Derivation, Fail> {
        let mut models: Option<Team> = None;
        for (lam, moves) in list_resolutions(xi.succedent.as_slice()) {
            let target = Sequent::new(xi.antecedent.clone(), Multiset::new(lam));
            self.tick(&target, "succedent resolution")?;
            match self.classical(&target)? {
                ClassicalOutcome::Proved(d) => {
                    let d = rebuild_succedent(d, xi.succedent.as_slice(), &moves)
                        .expect("RGd chain along resolution moves");
                    debug_assert_eq!(&d.conclusion, xi);
                    return Ok(d);
                }
                ClassicalOutcome::Refuted(tr) => {
                    let t = tr.team().clone();
                    models = Some(match models {
                        None => t,
                        Some(u) => u.union(&t),
                    });
                }
            }
        }
        Err(Fail::Counter(models.expect("every multiset has a resolution")))
    }
}

/// Classical G3cp search; countermodels are over the sequent's own variables.
pub fn prove_classical(s: &Sequent) -> Result<ClassicalOutcome, ProverError> {
    prove_classical_on(s, &sequent_domain(s), ProverConfig::default())
}

/// As `prove_classical`, with countermodels over `domain` (a superset of the
/// sequent's variables).
pub fn prove_classical_on(s: &Sequent, domain: &[Var], cfg: ProverConfig) -> Result<ClassicalOutcome, ProverError> {
    if !s.is_classical() {
        return Err(ProverError::NonClassicalInput(s.clone()));
    }
    Search::new(cfg, domain.to_vec()).g3(s)
}

pub fn prove_or_countermodel(s: &Sequent) -> Result<Outcome, ProverError> {
    prove_or_countermodel_with(s, ProverConfig::default())
}

pub fn prove_or_countermodel_with(s: &Sequent, cfg: ProverConfig) -> Result<Outcome, ProverError> {
    let mut search = Search::new(cfg, sequent_domain(s));
    match left_gd_tree(&s.antecedent, &s.succedent, &mut |xi| search.stage2(xi)) {
        Ok(d) => Ok(Outcome::Proved(d)),
        Err(Fail::Counter(t)) => Ok(Outcome::Countermodel(t)),
        Err(Fail::Error(e)) => Err(e),
    }
}

/// Derivation of `s`, or `None` when `s` is invalid.
pub fn prove(s: &Sequent) -> Result<Option<Derivation>, ProverError> {
    Ok(match prove_or_countermodel(s)? {
        Outcome::Proved(d) => Some(d),
        Outcome::Countermodel(_) => None,
    })
}
