use super::*;
use crate::calculus::{self, check_derivation, Derivation, Phase};
use crate::prover::prove;
use crate::semantics::sequent_valid;
use crate::sequent::{parse_plain_sequent, Sequent};
use crate::syntax::{parse_formula, Choice, Formula, OccurrencePath, Side};

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn seq(s: &str) -> Sequent {
    parse_plain_sequent(s).unwrap()
}

fn proof(s: &str) -> Derivation {
    prove(&seq(s)).unwrap().unwrap_or_else(|| panic!("`{s}` should be provable"))
}

fn ax(s: &str) -> Derivation {
    calculus::axiom(&seq(s)).unwrap()
}

#[test]
fn weaken_axiom_absorbs() {
    let d = weaken(&ax("p => p"), Side::Right, &f("q||r")).unwrap();
    assert_eq!(d.conclusion, seq("p => p, q||r"));
    assert_eq!(d.height(), 1);
}

#[test]
fn weaken_rand_uses_slot() {
    let d = calculus::r_and(ax("p, q => p"), ax("p, q => q"), &f("p"), &f("q"), &Multiset::empty()).unwrap();
    let w = weaken(&d, Side::Right, &f("p||q")).unwrap();
    assert_eq!(w.height(), d.height());
    assert_eq!(w.conclusion, seq("p, q => p&q, p||q"));
    match &w.rule {
        RuleApp::RAnd { weakening, .. } => assert!(weakening.contains(&f("p||q"))),
        other => panic!("expected RAnd, got {other:?}"),
    }
    check_derivation(&w).unwrap();
}

#[test]
fn weaken_left_by_bot() {
    let d = proof("p||q, ~p => q");
    let w = weaken(&d, Side::Left, &Formula::Bot).unwrap();
    assert!(w.height() <= d.height());
    check_derivation(&w).unwrap();
}

#[test]
fn invert_land() {
    let d = proof("r, p&q => q|r");
    let pos = d.conclusion.antecedent.position(&f("p&q")).unwrap();
    let out = invert(&d, &InversionItem::LAnd { ante: pos }).unwrap();
    assert_eq!(out.derivations.len(), 1);
    assert_eq!(out.derivations[0].conclusion, seq("r, p, q => q|r"));
    assert!(out.derivations[0].height() <= d.height());
    check_derivation(&out.derivations[0]).unwrap();
}

#[test]
fn invert_rgd_excluded_middle() {
    let d = proof("p => p||~p");
    let out = invert(
        &d,
        &InversionItem::RGd {
            succ: 0,
            path: OccurrencePath::root(),
        },
    )
    .unwrap();
    assert_eq!(out.side, Some(Choice::L));
    assert_eq!(out.derivations[0].conclusion, seq("p => p"));
    assert!(sequent_valid(&out.derivations[0].conclusion).unwrap());
}

#[test]
fn invert_rgd_needs_classical_antecedent() {
    let d = proof("p||q => p||q");
    let e = invert(
        &d,
        &InversionItem::RGd {
            succ: 0,
            path: OccurrencePath::root(),
        },
    );
    assert!(matches!(e, Err(TransformError::NonClassicalAntecedent(_))));
}

#[test]
fn invert_lgd_deep() {
    let d = proof("r & (p || q) => (r&p) || (r&q)");
    let out = invert(
        &d,
        &InversionItem::LGd {
            ante: 0,
            path: OccurrencePath(vec![1]),
        },
    )
    .unwrap();
    let got: Vec<_> = out.derivations.iter().map(|x| x.conclusion.clone()).collect();
    assert_eq!(got, vec![seq("r&p => (r&p)||(r&q)"), seq("r&q => (r&p)||(r&q)")]);
    for x in &out.derivations {
        check_derivation(x).unwrap();
        assert!(x.height() <= d.height());
    }
}

#[test]
fn invert_shape_mismatch() {
    let d = proof("p&q => p");
    assert!(matches!(
        invert(&d, &InversionItem::LOr { ante: 0 }),
        Err(TransformError::ShapeMismatch(_))
    ));
}

#[test]
fn contract_left_and_right() {
    let d = proof("p||q, p||q => p||q");
    let c = contract(&d, Side::Left, &f("p||q")).unwrap();
    assert_eq!(c.conclusion, seq("p||q => p||q"));
    assert!(c.height() <= d.height());
    check_derivation(&c).unwrap();

    let d = proof("~~p => p|q, p|q");
    let c = contract(&d, Side::Right, &f("p|q")).unwrap();
    assert_eq!(c.conclusion, seq("~~p => p|q"));
    assert!(c.height() <= d.height());
    check_derivation(&c).unwrap();
}

#[test]
fn contract_rejections() {
    let d = proof("p||~p, p => p||~p, p||~p");
    assert!(matches!(
        contract(&d, Side::Right, &f("p||~p")),
        Err(TransformError::NonClassicalRightContraction(_))
    ));
    assert!(matches!(
        contract(&d, Side::Left, &f("p")),
        Err(TransformError::FormulaNotDuplicated(_))
    ));
}

/// The example derivation ending in LAnd, ROr, RNeg and a deep LGd.
pub(crate) fn normal_form_example() -> Derivation {
    let d1 = proof("x, ~x|(~q|p), q => p");
    let d2 = proof("x, ~x|(~q|r), q => r");
    let pr = f("p||r");
    let d1 = calculus::r_gd(d1, &pr, &OccurrencePath::root(), Choice::L).unwrap();
    let d2 = calculus::r_gd(d2, &pr, &OccurrencePath::root(), Choice::R).unwrap();
    let d = calculus::l_gd(d1, d2, &f("~x|(~q|(p||r))"), &OccurrencePath(vec![1, 1])).unwrap();
    let d = calculus::r_neg(d, &f("q")).unwrap();
    let d = calculus::r_or(d, &pr, &f("~q")).unwrap();
    calculus::l_and(d, &f("x"), &f("~x|(~q|(p||r))")).unwrap()
}

#[test]
fn normal_form_example_parts() {
    let d = normal_form_example();
    check_derivation(&d).unwrap();
    assert_eq!(d.conclusion, seq("x&(~x|(~q|(p||r))) => (p||r)|~q"));
    assert!(!d.is_phase_ordered());
    let n = normalize(&d).unwrap();
    check_derivation(&n).unwrap();
    assert!(n.is_phase_ordered());
    assert_eq!(n.conclusion, d.conclusion);
    let parts: Vec<_> = n.classical_parts().iter().map(|p| p.conclusion.clone()).collect();
    assert_eq!(
        parts,
        vec![seq("x&(~x|(~q|p)) => p|~q"), seq("x&(~x|(~q|r)) => r|~q")]
    );
    assert_eq!(n.rule.phase(), Phase::LeftGd);
}

#[test]
fn normalize_classical_is_identity() {
    let d = proof("p&q => q|r");
    assert_eq!(normalize(&d).unwrap(), d);
}

#[test]
fn normalize_rejects_cut() {
    let d = calculus::cut(ax("p => p"), ax("p => p"), &f("p")).unwrap();
    assert_eq!(normalize(&d), Err(TransformError::ContainsCut));
}

#[test]
fn classical_cut_on_axioms() {
    let d = calculus::cut(ax("p => p"), ax("p => p"), &f("p")).unwrap();
    let e = classical_eliminate_cuts(&d).unwrap();
    assert!(e.is_cutfree());
    assert_eq!(e.conclusion, seq("p => p"));
    assert_eq!(e.height(), 1);
}

#[test]
fn classical_cut_on_conjunction() {
    // Γ ⇒ a∧b by RAnd against a∧b ⇒ b∧a by LAnd
    let left = calculus::r_and(ax("a, b => a"), ax("a, b => b"), &f("a"), &f("b"), &Multiset::empty()).unwrap();
    let right = calculus::l_and(
        calculus::r_and(ax("a, b => b"), ax("a, b => a"), &f("b"), &f("a"), &Multiset::empty()).unwrap(),
        &f("a"),
        &f("b"),
    )
    .unwrap();
    let d = calculus::cut(left, right, &f("a&b")).unwrap();
    check_derivation(&d).unwrap();
    let e = classical_eliminate_cuts(&d).unwrap();
    assert!(e.is_cutfree());
    check_derivation(&e).unwrap();
    assert_eq!(e.conclusion, seq("a, b => b&a"));
}

#[test]
fn classical_cut_rejects_gd() {
    let d = calculus::cut(proof("p||q => p||q"), proof("p||q => p||q"), &f("p||q")).unwrap();
    assert!(matches!(
        classical_eliminate_cuts(&d),
        Err(TransformError::NonClassicalInput(_))
    ));
}

#[test]
fn worked_cut_example() {
    let d1 = proof("a|(p||q) => p||q, a");
    let d2 = proof("b, p||q => (b&p)||(b&q)");
    let d = calculus::cut(d1, d2, &f("p||q")).unwrap();
    let e = eliminate_cuts(&d).unwrap();
    assert!(e.is_cutfree());
    check_derivation(&e).unwrap();
    assert_eq!(e.conclusion, seq("a|(p||q), b => a, (b&p)||(b&q)"));
    let fam = family_of(&e);
    let got: Vec<_> = fam.iter().map(|s| s.to_string()).collect();
    assert_eq!(got, vec!["a | p, b => a, b & p", "a | q, b => a, b & q"]);
}

fn family_of(d: &Derivation) -> Vec<Sequent> {
    normalize(d)
        .unwrap()
        .classical_parts()
        .iter()
        .map(|p| p.conclusion.clone())
        .collect()
}

#[test]
fn resolve_swap() {
    let d = proof("p||q => q||p");
    let fam = resolve_derivation(&d).unwrap();
    let rows: Vec<_> = fam
        .entries
        .iter()
        .map(|e| (e.resolution.to_string(), e.image.to_string()))
        .collect();
    assert_eq!(rows, vec![("p".into(), "p".into()), ("q".into(), "q".into())]);
    for e in &fam.entries {
        assert!(sequent_valid(&e.derivation.conclusion).unwrap());
    }
    let back = reassemble(&fam).unwrap();
    check_derivation(&back).unwrap();
    assert_eq!(back.conclusion, d.conclusion);
}

#[test]
fn reassemble_example_parts() {
    let n = normalize(&normal_form_example()).unwrap();
    let fam = resolve_derivation(&n).unwrap();
    assert_eq!(fam.entries.len(), 2);
    let back = reassemble(&fam).unwrap();
    check_derivation(&back).unwrap();
    assert_eq!(back.conclusion, seq("x&(~x|(~q|(p||r))) => (p||r)|~q"));
}

#[test]
fn gt_prime_translation() {
    for s in ["p, q => p&q", "p|q => q, p", "r & (p || q) => (r&p) || (r&q)", "p|q, ~p => q||r"] {
        let d = proof(s);
        let t = to_gt_prime(&d).unwrap();
        check_derivation(&t).unwrap();
        assert!(t.is_gt_prime());
        assert_eq!(t.conclusion, d.conclusion);
    }
}

#[test]
fn match_prefers_any_valid_assignment() {
    let originals = [f("p||q"), f("p")];
    let image = Multiset::new(vec![f("p"), f("q")]);
    let m = match_resolutions(&originals, &image).unwrap();
    assert_eq!(m[0].0, 1);
    assert_eq!(m[1].0, 0);
}
