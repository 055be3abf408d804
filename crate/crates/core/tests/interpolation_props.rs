//! Every classical-Λ1 partition of random provable sequents gets a verified
//! interpolant.

use gt_core::interpolation::{interpolate_partition, verify_report, InterpolationError};
use gt_core::testgen::{Gen, Shape};
use gt_core::{Multiset, PartitionSequent, Sequent};

fn partitions(s: &Sequent) -> Vec<PartitionSequent> {
    let a = s.antecedent.as_slice();
    let b = s.succedent.as_slice();
    let n = a.len() + b.len();
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        let pick = |xs: &[gt_core::Formula], off: usize, bit: bool| {
            Multiset::new(
                xs.iter()
                    .enumerate()
                    .filter(|(i, _)| (mask >> (off + i) & 1 == 1) == bit)
                    .map(|(_, f)| f.clone())
                    .collect(),
            )
        };
        let p = PartitionSequent {
            gamma1: pick(a, 0, false),
            gamma2: pick(a, 0, true),
            delta1: pick(b, a.len(), false),
            delta2: pick(b, a.len(), true),
        };
        out.push(p);
    }
    out
}

#[test]
fn all_partitions_of_random_proofs() {
    let mut g = Gen::new(21);
    let shape = Shape::default();
    let (mut done, mut rejected, mut classical_runs) = (0, 0, 0);
    for _ in 0..120 {
        let Some(d) = g.proved(&shape, 50) else { continue };
        for p in partitions(&d.conclusion) {
            match interpolate_partition(&d, &p) {
                Ok(r) => {
                    let v = verify_report(&r, &p);
                    assert!(v.ok(), "{p}\n{d}\n{}: {v:?}", r.interpolant);
                    if p.delta2.is_classical() {
                        assert!(r.interpolant.is_classical(), "{p}: {}", r.interpolant);
                        classical_runs += 1;
                    }
                    assert!(r.interpolant.symbol_count() <= 2 * d.size(), "{p}: {}", r.interpolant);
                    done += 1;
                }
                Err(InterpolationError::NonClassicalLambda1(_)) => {
                    assert!(!p.delta1.is_classical());
                    rejected += 1;
                }
                Err(e) => panic!("{p}\n{d}\n{e}"),
            }
        }
    }
    eprintln!("{done} interpolated, {rejected} rejected, {classical_runs} with classical Δ2");
    assert!(done > 500);
    assert!(classical_runs > 50);
}

#[test]
fn eager_derivations_interpolate_too() {
    // derivations with RAnd/LOr weakening slots and unordered phases
    let mut g = Gen::new(22);
    let shape = Shape::default();
    let mut done = 0;
    for _ in 0..80 {
        let Some(d) = g.proved(&shape, 50) else { continue };
        let Some(e) = g.eager(&d.conclusion) else { continue };
        for p in partitions(&e.conclusion) {
            if !p.delta1.is_classical() {
                continue;
            }
            let r = interpolate_partition(&e, &p).unwrap_or_else(|x| panic!("{p}\n{e}\n{x}"));
            let v = verify_report(&r, &p);
            assert!(v.ok(), "{p}\n{e}\n{}: {v:?}", r.interpolant);
            done += 1;
        }
    }
    assert!(done > 200, "{done}");
}
