//! Randomized checks of the proof transformations on prover output and on
//! non-normal derivations.

use gt_core::calculus::check_derivation;
use gt_core::semantics::sequent_valid;
use gt_core::syntax::{Formula, Side};
use gt_core::testgen::{Gen, Shape};
use gt_core::transforms::{
    contract, eliminate_cuts, invert, normalize, reassemble, resolve_derivation, to_gt_prime, weaken, InversionItem,
    TransformError,
};
use gt_core::{Derivation, Sequent};

fn items(s: &Sequent) -> Vec<InversionItem> {
    let mut out = Vec::new();
    for (i, f) in s.antecedent.iter().enumerate() {
        match f {
            Formula::Neg(_) => out.push(InversionItem::LNeg { ante: i }),
            Formula::And(..) => out.push(InversionItem::LAnd { ante: i }),
            Formula::Or(..) => out.push(InversionItem::LOr { ante: i }),
            _ => {}
        }
        for path in f.gd_paths() {
            out.push(InversionItem::LGd { ante: i, path });
        }
    }
    for (i, f) in s.succedent.iter().enumerate() {
        match f {
            Formula::Neg(_) => out.push(InversionItem::RNeg { succ: i }),
            Formula::And(..) => out.push(InversionItem::RAnd { succ: i }),
            Formula::Or(..) => out.push(InversionItem::ROr { succ: i }),
            _ => {}
        }
        if s.antecedent.is_classical() {
            for path in f.gd_paths() {
                out.push(InversionItem::RGd { succ: i, path });
            }
        }
    }
    out
}

fn samples(seed: u64, n: usize) -> Vec<Derivation> {
    let mut g = Gen::new(seed);
    let shape = Shape::default();
    let mut out = Vec::new();
    while out.len() < n {
        if let Some(d) = g.proved(&shape, 50) {
            if out.len() % 2 == 1 {
                if let Some(e) = g.eager(&d.conclusion) {
                    out.push(e);
                    continue;
                }
            }
            out.push(d);
        }
    }
    out
}

#[test]
fn inversion_on_every_item() {
    let mut tried = 0;
    for d in samples(11, 150) {
        check_derivation(&d).unwrap();
        for item in items(&d.conclusion) {
            let r = invert(&d, &item).unwrap_or_else(|e| panic!("{item:?} on\n{d}\n{e}"));
            for x in &r.derivations {
                check_derivation(x).unwrap_or_else(|e| panic!("{item:?} on\n{d}\ngave\n{x}\n{e}"));
                assert!(x.height() <= d.height(), "{item:?} grew\n{d}");
                assert!(sequent_valid(&x.conclusion).unwrap());
            }
            tried += 1;
        }
    }
    assert!(tried > 100, "only {tried} inversions");
}

#[test]
fn weakening_and_contraction() {
    for d in samples(12, 150) {
        let c = d.conclusion.clone();
        for f in c.antecedent.iter().chain(c.succedent.iter()) {
            for side in [Side::Left, Side::Right] {
                let w = weaken(&d, side, f).unwrap();
                check_derivation(&w).unwrap();
                assert!(w.height() <= d.height());
                let dup = c.side(side).contains(f);
                if !dup {
                    continue;
                }
                let r = contract(&w, side, f);
                if side == Side::Right && !f.is_classical() {
                    assert!(matches!(r, Err(TransformError::NonClassicalRightContraction(_))));
                    continue;
                }
                let r = r.unwrap_or_else(|e| panic!("contract {f} on\n{w}\n{e}"));
                check_derivation(&r).unwrap();
                assert_eq!(r.conclusion, c);
                assert!(r.height() <= w.height());
            }
        }
    }
}

#[test]
fn normal_form_and_resolution() {
    for d in samples(13, 120) {
        let n = normalize(&d).unwrap_or_else(|e| panic!("{d}\n{e}"));
        check_derivation(&n).unwrap();
        assert!(n.is_phase_ordered(), "{n}");
        assert_eq!(n.conclusion, d.conclusion);
        for part in n.classical_parts() {
            assert!(part.height() <= d.height());
            assert!(part.is_classical_proof());
        }
        let fam = resolve_derivation(&d).unwrap();
        let back = reassemble(&fam).unwrap();
        check_derivation(&back).unwrap();
        assert_eq!(back.conclusion, d.conclusion);
    }
}

#[test]
fn cut_elimination_with_injected_cuts() {
    let mut g = Gen::new(14);
    for d in samples(14, 80) {
        let c = g.inject_cuts(&d, 2);
        check_derivation(&c).unwrap();
        let e = eliminate_cuts(&c).unwrap_or_else(|e| panic!("{c}\n{e}"));
        assert!(e.is_cutfree());
        check_derivation(&e).unwrap();
        assert_eq!(e.conclusion, d.conclusion);
    }
}

#[test]
fn gt_prime_on_samples() {
    for d in samples(15, 100) {
        let t = to_gt_prime(&d).unwrap();
        check_derivation(&t).unwrap();
        assert!(t.is_gt_prime());
        assert_eq!(t.conclusion, d.conclusion);
    }
}

#[test]
fn deep_rgd_path_cases() {
    // nested and disjoint || on the right, inverted at every path
    let s: Sequent = "p, q => (p || r) & (q || (r || p))".parse().unwrap();
    let d = gt_core::prover::prove(&s).unwrap().unwrap();
    for path in d.conclusion.succedent.as_slice()[0].gd_paths() {
        let r = invert(&d, &InversionItem::RGd { succ: 0, path: path.clone() }).unwrap();
        check_derivation(&r.derivations[0]).unwrap();
        assert!(r.derivations[0].height() <= d.height());
    }
}

#[test]
fn samples_cover_hard_cases() {
    let ds = samples(13, 120);
    let unordered = ds.iter().filter(|d| !d.is_phase_ordered()).count();
    let mut g = Gen::new(14);
    let cuts: Vec<_> = samples(14, 80).iter().map(|d| g.inject_cuts(d, 2)).collect();
    let deep_cuts = cuts
        .iter()
        .filter(|c| c.any_rule(&|r| matches!(r, gt_core::RuleApp::Cut { formula } if !formula.is_classical())))
        .count();
    eprintln!("unordered {unordered}/120, nonclassical cuts {deep_cuts}/80");
    assert!(unordered >= 10);
    assert!(deep_cuts >= 10);
}
