//! Soundness of checked derivations, rejection of broken inferences, GT′
//! agreement and prover decisions on generated sequents.

use gt_core::calculus::{l_c, l_or_i, r_and_i, r_c};
use gt_core::prover::{prove, prove_classical, ClassicalOutcome};
use gt_core::semantics::sequent_valid;
use gt_core::testgen::{Gen, Shape};
use gt_core::transforms::{to_gt_prime, weaken};
use gt_core::{check_derivation, check_inference, Derivation, Formula, OccurrencePath, RuleApp, Sequent, Side};

fn nodes(d: &Derivation) -> Vec<&Derivation> {
    let mut out = vec![d];
    for p in &d.premises {
        out.extend(nodes(p));
    }
    out
}

fn sound(d: &Derivation) {
    check_derivation(d).unwrap_or_else(|e| panic!("{d}\n{e}"));
    assert!(sequent_valid(&d.conclusion).unwrap(), "unsound: {}", d.conclusion);
}

fn premise_refs(d: &Derivation) -> Vec<&Sequent> {
    d.premises.iter().map(|p| &p.conclusion).collect()
}

#[test]
fn prover_and_eager_outputs_are_sound() {
    let mut g = Gen::new(31);
    let shape = Shape::default();
    let mut n = 0;
    for _ in 0..150 {
        let Some(d) = g.proved(&shape, 50) else { continue };
        sound(&d);
        assert!(d.is_cutfree() && d.is_gt());
        if let Some(e) = g.eager(&d.conclusion) {
            sound(&e);
        }
        sound(&to_gt_prime(&d).unwrap());
        n += 1;
    }
    assert!(n > 100, "{n}");
}

#[test]
fn prover_decides_validity() {
    let mut g = Gen::new(32);
    let shape = Shape::default();
    let (mut yes, mut no) = (0, 0);
    for _ in 0..400 {
        let s = g.sequent(&shape);
        let valid = sequent_valid(&s).unwrap();
        match prove(&s).unwrap() {
            Some(d) => {
                assert!(valid, "proved an invalid sequent {s}");
                assert_eq!(d.conclusion, s);
                assert!(d.is_cutfree());
                check_derivation(&d).unwrap();
                yes += 1;
            }
            None => {
                assert!(!valid, "missed a valid sequent {s}");
                no += 1;
            }
        }
    }
    assert!(yes > 20 && no > 20, "{yes} / {no}");
}

#[test]
fn classical_completeness_small() {
    let mut g = Gen::new(33);
    let vars = ["p", "q", "r"];
    let mut proved = 0;
    for i in 0..500 {
        let s = g.classical_sequent(&vars, 1 + i % 4, 3);
        let valid = sequent_valid(&s).unwrap();
        match prove_classical(&s).unwrap() {
            ClassicalOutcome::Proved(d) => {
                assert!(valid, "{s}");
                check_derivation(&d).unwrap();
                assert!(d.is_classical_proof());
                proved += 1;
            }
            ClassicalOutcome::Refuted(t) => {
                assert!(!valid, "{s}");
                let team = t.team();
                assert!(team.len() <= 1);
            }
        }
    }
    assert!(proved > 50, "{proved}");
}

/// A fresh atom no generated formula mentions.
fn fresh() -> Formula {
    Formula::prop("zz")
}

#[test]
fn context_swaps_are_rejected() {
    let mut g = Gen::new(34);
    let shape = Shape::default();
    let mut tried = 0;
    for _ in 0..60 {
        let Some(d) = g.proved(&shape, 50) else { continue };
        for n in nodes(&d) {
            if n.premises.is_empty() {
                continue;
            }
            check_inference(&n.conclusion, &n.rule, &premise_refs(n)).unwrap();
            for side in [Side::Left, Side::Right] {
                let m = n.conclusion.side(side);
                for i in 0..m.len() {
                    let swapped = m.remove_at(i).with(fresh());
                    let c = n.conclusion.with_side(side, swapped);
                    assert!(
                        check_inference(&c, &n.rule, &premise_refs(n)).is_err(),
                        "accepted {c} from {:?}",
                        n.rule
                    );
                    tried += 1;
                }
            }
        }
    }
    assert!(tried > 500, "{tried}");
}

#[test]
fn widened_classical_context_is_rejected() {
    let mut g = Gen::new(35);
    let shape = Shape::default();
    let gd = Formula::gd(Formula::prop("p"), Formula::prop("q"));
    let mut tried = 0;
    for _ in 0..200 {
        let Some(d) = g.proved(&shape, 50) else { continue };
        for n in nodes(&d) {
            let rule = match &n.rule {
                RuleApp::RAnd { succ, context, weakening } => RuleApp::RAnd {
                    succ: *succ,
                    context: context.with(gd.clone()),
                    weakening: weakening.clone(),
                },
                RuleApp::LOr { ante, context, weakening } => RuleApp::LOr {
                    ante: *ante,
                    context: context.with(gd.clone()),
                    weakening: weakening.clone(),
                },
                _ => continue,
            };
            let widen = |s: &Sequent| Sequent::new(s.antecedent.clone(), s.succedent.with(gd.clone()));
            let prems: Vec<Sequent> = n.premises.iter().map(|p| widen(&p.conclusion)).collect();
            let c = widen(&n.conclusion);
            // positions shift when the conclusion gains a formula
            let rule = match rule {
                RuleApp::RAnd { context, weakening, .. } => {
                    let principal = &n.conclusion.succedent.as_slice()[n_pos(&n.rule)];
                    RuleApp::RAnd { succ: c.succedent.position(principal).unwrap(), context, weakening }
                }
                r => r,
            };
            let refs: Vec<&Sequent> = prems.iter().collect();
            assert!(check_inference(&c, &rule, &refs).is_err(), "accepted {c} via {rule:?}");
            tried += 1;
        }
    }
    assert!(tried > 10, "{tried}");
}

fn n_pos(r: &RuleApp) -> usize {
    match r {
        RuleApp::RAnd { succ, .. } => *succ,
        RuleApp::LOr { ante, .. } => *ante,
        _ => unreachable!(),
    }
}

/// Paths inside `f` that lead somewhere other than a `||` node.
fn non_gd_paths(f: &Formula) -> Vec<OccurrencePath> {
    fn go(f: &Formula, prefix: &mut Vec<u8>, out: &mut Vec<OccurrencePath>) {
        if !matches!(f, Formula::Gd(..)) {
            out.push(OccurrencePath(prefix.clone()));
        }
        match f {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Gd(a, b) => {
                for (i, c) in [a, b].into_iter().enumerate() {
                    prefix.push(i as u8);
                    go(c, prefix, out);
                    prefix.pop();
                }
            }
            Formula::Neg(a) => {
                prefix.push(0);
                go(a, prefix, out);
                prefix.pop();
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(f, &mut Vec::new(), &mut out);
    out
}

#[test]
fn gd_paths_off_target_are_rejected() {
    let mut g = Gen::new(36);
    let shape = Shape::default();
    let mut tried = 0;
    for _ in 0..100 {
        let Some(d) = g.proved(&shape, 50) else { continue };
        for n in nodes(&d) {
            let (principal, make): (&Formula, Box<dyn Fn(OccurrencePath) -> RuleApp>) = match &n.rule {
                RuleApp::LGd { ante, .. } => {
                    let a = *ante;
                    (&n.conclusion.antecedent.as_slice()[a], Box::new(move |path| RuleApp::LGd { ante: a, path }))
                }
                RuleApp::RGd { succ, side, .. } => {
                    let (s, side) = (*succ, *side);
                    (&n.conclusion.succedent.as_slice()[s], Box::new(move |path| RuleApp::RGd { succ: s, path, side }))
                }
                _ => continue,
            };
            for path in non_gd_paths(principal) {
                let rule = make(path);
                assert!(check_inference(&n.conclusion, &rule, &premise_refs(n)).is_err(), "accepted {rule:?}");
                tried += 1;
            }
        }
    }
    assert!(tried > 100, "{tried}");
}

/// Random GT′ steps over translated proofs stay sound, and every conclusion
/// they reach is also provable in GT.
#[test]
fn gt_prime_steps_agree_with_gt() {
    let mut g = Gen::new(37);
    let shape = Shape { max_gd: 1, ..Shape::default() };
    let mut pool: Vec<Derivation> = Vec::new();
    while pool.len() < 40 {
        if let Some(d) = g.proved(&shape, 50) {
            pool.push(to_gt_prime(&d).unwrap());
        }
    }
    let mut built = Vec::new();
    for (i, d1) in pool.iter().enumerate() {
        let d2 = &pool[(i * 7 + 3) % pool.len()];
        if let (Some(a), Some(b)) = (d1.conclusion.succedent.get(0), d2.conclusion.succedent.get(0)) {
            built.push(r_and_i(d1.clone(), d2.clone(), a, b).unwrap());
        }
        if let (Some(a), Some(b)) = (d1.conclusion.antecedent.get(0), d2.conclusion.antecedent.get(0)) {
            built.push(l_or_i(d1.clone(), d2.clone(), a, b).unwrap());
        }
        if let Some(f) = d1.conclusion.antecedent.get(0) {
            let w = weaken(d1, Side::Left, f).unwrap();
            built.push(l_c(w, f).unwrap());
        }
        if let Some(f) = d1.conclusion.succedent.iter().find(|f| f.is_classical()) {
            let w = weaken(d1, Side::Right, f).unwrap();
            built.push(r_c(w, f).unwrap());
        }
    }
    assert!(built.len() > 80, "{}", built.len());
    for d in &built {
        sound(d);
        assert!(d.is_gt_prime());
        let back = prove(&d.conclusion).unwrap();
        assert!(back.is_some(), "GT cannot prove {}", d.conclusion);
    }
}

#[test]
fn right_contraction_of_gd_is_not_a_rule() {
    let s: Sequent = "p || q => p || q".parse().unwrap();
    let d = prove(&s).unwrap().unwrap();
    let gd = s.succedent.as_slice()[0].clone();
    let w = weaken(&d, Side::Right, &gd).unwrap();
    assert!(r_c(w, &gd).is_err());
}
