//! Exhaustive search for sequent interpolants of bounded depth, with its own
//! team semantics. Every formula denotes a downward closed set of teams,
//! stored as the antichain of its maximal teams; a team over at most three
//! variables is a bitmask over the eight valuations.

#![allow(dead_code)]

use std::collections::HashSet;

use gt_core::{Formula, Multiset, PartitionSequent};

pub type Prop = Vec<u8>;

fn maximal(mut xs: Vec<u8>) -> Prop {
    xs.sort_unstable();
    xs.dedup();
    let keep: Vec<u8> = xs
        .iter()
        .copied()
        .filter(|&x| !xs.iter().any(|&y| y != x && x & y == x))
        .collect();
    keep
}

pub fn and(a: &Prop, b: &Prop) -> Prop {
    maximal(a.iter().flat_map(|x| b.iter().map(move |y| x & y)).collect())
}

pub fn split(a: &Prop, b: &Prop) -> Prop {
    maximal(a.iter().flat_map(|x| b.iter().map(move |y| x | y)).collect())
}

pub fn gd(a: &Prop, b: &Prop) -> Prop {
    maximal(a.iter().chain(b.iter()).copied().collect())
}

/// Negation of a flat property (a single maximal team).
pub fn neg(a: &Prop) -> Option<Prop> {
    match a.as_slice() {
        [v] => Some(vec![!v]),
        _ => None,
    }
}

pub fn atom(i: usize) -> Prop {
    vec![(0u8..8).filter(|v| v >> i & 1 == 1).fold(0u8, |m, v| m | 1 << v)]
}

pub fn bot() -> Prop {
    vec![0]
}

pub fn top() -> Prop {
    vec![0xFF]
}

pub fn subset(a: &Prop, b: &Prop) -> bool {
    a.iter().all(|x| b.iter().any(|y| x & y == *x))
}

/// Denotation over the variables `vars` (at most three).
pub fn denote(f: &Formula, vars: &[&str]) -> Prop {
    match f {
        Formula::Prop(v) => atom(vars.iter().position(|x| *x == v.to_string()).expect("variable in range")),
        Formula::Bot => bot(),
        Formula::Neg(a) => neg(&denote(a, vars)).expect("negation of a classical formula"),
        Formula::And(a, b) => and(&denote(a, vars), &denote(b, vars)),
        Formula::Or(a, b) => split(&denote(a, vars), &denote(b, vars)),
        Formula::Gd(a, b) => gd(&denote(a, vars), &denote(b, vars)),
    }
}

pub fn conj(m: &Multiset, vars: &[&str]) -> Prop {
    m.iter().fold(top(), |acc, f| and(&acc, &denote(f, vars)))
}

pub fn disj(m: &Multiset, vars: &[&str]) -> Prop {
    m.iter().fold(bot(), |acc, f| split(&acc, &denote(f, vars)))
}

/// Semantic classes of all formulas of depth at most `depth` built from the
/// given atoms, `bot`, negation of flat classes, `&`, `|` and `||`.
/// Allowing negation on every flat class only enlarges the search.
pub fn classes(nvars: usize, depth: usize) -> Vec<Prop> {
    let mut seen: HashSet<Prop> = HashSet::new();
    let mut all: Vec<Prop> = Vec::new();
    for p in (0..nvars).map(atom).chain([bot()]) {
        if seen.insert(p.clone()) {
            all.push(p);
        }
    }
    for _ in 0..depth {
        let mut next = Vec::new();
        for a in &all {
            if let Some(n) = neg(a) {
                next.push(n);
            }
            for b in &all {
                next.push(and(a, b));
                next.push(split(a, b));
                next.push(gd(a, b));
            }
        }
        for p in next {
            if seen.insert(p.clone()) {
                all.push(p);
            }
        }
    }
    all
}

/// `Γ1 ⊨ Λ1 ∨ φ` and `Γ2 ∧ φ ⊨ Δ2` as a test on the denotation of φ.
pub fn condition(p: &PartitionSequent, vars: &[&str]) -> impl Fn(&Prop) -> bool {
    let g1 = conj(&p.gamma1, vars);
    let g2 = conj(&p.gamma2, vars);
    let l1 = disj(&p.delta1, vars);
    let d2 = disj(&p.delta2, vars);
    move |s: &Prop| subset(&g1, &split(&l1, s)) && subset(&and(&g2, s), &d2)
}

pub struct Search {
    pub candidates: usize,
    pub found: Option<Prop>,
}

/// Looks for a property φ of depth at most `depth` with `Γ1 ⊨ Λ1 ∨ φ` and
/// `Γ2 ∧ φ ⊨ Δ2` (split disjunction over the succedent). The top level is
/// enumerated without storing it.
pub fn search(p: &PartitionSequent, vars: &[&str], depth: usize) -> Search {
    assert!(vars.len() <= 3 && depth >= 1);
    let ok = condition(p, vars);
    let base = classes(vars.len(), depth - 1);
    let mut candidates = 0;
    let mut tried: HashSet<Prop> = HashSet::new();
    let mut test = |s: Prop| -> Option<Prop> {
        candidates += 1;
        if tried.insert(s.clone()) && ok(&s) {
            Some(s)
        } else {
            None
        }
    };
    for a in &base {
        if let Some(found) = test(a.clone()) {
            return Search { candidates, found: Some(found) };
        }
        if let Some(n) = neg(a) {
            if let Some(found) = test(n) {
                return Search { candidates, found: Some(found) };
            }
        }
        for b in &base {
            for s in [and(a, b), split(a, b), gd(a, b)] {
                if let Some(found) = test(s) {
                    return Search { candidates, found: Some(found) };
                }
            }
        }
    }
    Search { candidates, found: None }
}
