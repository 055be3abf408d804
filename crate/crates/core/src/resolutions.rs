//! Resolutions, ⋁-labellings and partial resolutions.

use std::collections::BTreeMap;
use std::fmt;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::sequent::Multiset;
use crate::syntax::{Choice, Formula, OccurrencePath};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ResolutionError {
    #[error("degree {degree} exceeds the number of inquisitive disjunctions ({max})")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("label {label} does not occur in the formula")]
    LabelAbsent { label: usize },
    #[error("target {target} is outside the multiset")]
    TargetOutOfRange { target: usize },
}

/// A resolution step `[side/label]`, aimed at the formula at position `target`
/// of a multiset's canonical order (0 for single formulas).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResolutionStep {
    pub side: Choice,
    pub label: usize,
    #[serde(default)]
    pub target: usize,
}

/// One move of a resolution: resolve the `Gd` at `path` (in the current
/// formula) to the chosen disjunct.
pub type Move = (OccurrencePath, Choice);

/// All resolutions of `f`, each with a sequence of moves producing it from `f`.
/// Every choice function is listed (duplicates included), left disjunct first.
pub fn resolutions_with_moves(f: &Formula) -> Vec<(Formula, Vec<Move>)> {
    match f {
        Formula::Gd(a, b) => {
            let mut out = Vec::new();
            for (side, part) in [(Choice::L, a), (Choice::R, b)] {
                for (r, moves) in resolutions_with_moves(part) {
                    let mut all = vec![(OccurrencePath::root(), side)];
                    all.extend(moves);
                    out.push((r, all));
                }
            }
            out
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let left = resolutions_with_moves(a);
            let right = resolutions_with_moves(b);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for (ra, ma) in &left {
                for (rb, mb) in &right {
                    let r = match f {
                        Formula::And(..) => Formula::and(ra.clone(), rb.clone()),
                        _ => Formula::or(ra.clone(), rb.clone()),
                    };
                    let moves = ma
                        .iter()
                        .map(|(p, c)| (p.prepend(0), *c))
                        .chain(mb.iter().map(|(p, c)| (p.prepend(1), *c)))
                        .collect();
                    out.push((r, moves));
                }
            }
            out
        }
        _ => vec![(f.clone(), Vec::new())],
    }
}

/// `R(f)` without duplicates, in enumeration order.
pub fn resolutions(f: &Formula) -> Vec<Formula> {
    let set: IndexSet<Formula> = resolutions_with_moves(f).into_iter().map(|(r, _)| r).collect();
    set.into_iter().collect()
}

/// Moves turning `from` into its resolution `to`, if `to ∈ R(from)`.
pub fn moves_to(from: &Formula, to: &Formula) -> Option<Vec<Move>> {
    resolutions_with_moves(from)
        .into_iter()
        .find(|(r, _)| r == to)
        .map(|(_, m)| m)
}

/// Per-position resolutions of a list of formulas: the product of the
/// per-formula enumerations, first position outermost, deduplicated as
/// multisets. Each entry carries the resolved list and the moves per position.
pub fn list_resolutions(items: &[Formula]) -> Vec<(Vec<Formula>, Vec<Vec<Move>>)> {
    let per: Vec<Vec<(Formula, Vec<Move>)>> = items.iter().map(resolutions_with_moves).collect();
    let mut out = Vec::new();
    let mut seen: IndexSet<Multiset> = IndexSet::new();
    let mut idx = vec![0usize; per.len()];
    loop {
        let formulas: Vec<Formula> = idx.iter().zip(&per).map(|(&i, p)| p[i].0.clone()).collect();
        if seen.insert(Multiset::new(formulas.clone())) {
            let moves = idx.iter().zip(&per).map(|(&i, p)| p[i].1.clone()).collect();
            out.push((formulas, moves));
        }
        // odometer, last position fastest
        let mut k = per.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `R(Γ)`: images of the multiset under all resolution functions.
pub fn resolutions_multiset(g: &Multiset) -> Vec<Multiset> {
    list_resolutions(g.as_slice())
        .into_iter()
        .map(|(fs, _)| Multiset::new(fs))
        .collect()
}

/// A formula whose `Gd` occurrences carry labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledFormula {
    pub formula: Formula,
    pub labels: BTreeMap<OccurrencePath, usize>,
}

/// Labels every `Gd` occurrence by its left-to-right position.
pub fn gd_label(f: &Formula) -> LabelledFormula {
    LabelledFormula {
        formula: f.clone(),
        labels: f.gd_paths().into_iter().enumerate().map(|(i, p)| (p, i)).collect(),
    }
}

impl LabelledFormula {
    pub fn path_of(&self, label: usize) -> Option<&OccurrencePath> {
        self.labels.iter().find(|(_, l)| **l == label).map(|(p, _)| p)
    }

    fn render_into(&self, f: &Formula, path: &mut Vec<u8>, out: &mut String, min: u8) {
        let prec = match f {
            Formula::Gd(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        };
        if prec == 4 {
            let s = f.render();
            let needs = matches!(f, Formula::Neg(_)) && min > 4;
            if needs {
                out.push('(');
            }
            out.push_str(&s);
            if needs {
                out.push(')');
            }
            return;
        }
        let paren = prec < min;
        if paren {
            out.push('(');
        }
        let (a, b) = match f {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Gd(a, b) => (a, b),
            _ => unreachable!(),
        };
        path.push(0);
        self.render_into(a, path, out, prec + 1);
        path.pop();
        match f {
            Formula::And(..) => out.push_str(" & "),
            Formula::Or(..) => out.push_str(" | "),
            _ => {
                let label = self.labels.get(&OccurrencePath(path.clone()));
                match label {
                    Some(l) => out.push_str(&format!(" ||{l} ")),
                    None => out.push_str(" || "),
                }
            }
        }
        // labelled chains keep their grouping visible
        let right_min = if matches!(f, Formula::Gd(..)) { prec + 1 } else { prec };
        path.push(1);
        self.render_into(b, path, out, right_min);
        path.pop();
        if paren {
            out.push(')');
        }
    }
}

impl fmt::Display for LabelledFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render_into(&self.formula, &mut Vec::new(), &mut s, 0);
        f.write_str(&s)
    }
}

/// Resolve the `Gd` carrying `step.label`; labels of surviving occurrences
/// are kept, labels inside the discarded disjunct disappear.
pub fn apply_resolution_step(
    f: &LabelledFormula,
    step: ResolutionStep,
) -> Result<LabelledFormula, ResolutionError> {
    let path = f
        .path_of(step.label)
        .ok_or(ResolutionError::LabelAbsent { label: step.label })?
        .clone();
    let formula = f
        .formula
        .resolve_at(&path, step.side)
        .expect("labelled path addresses a Gd");
    let keep = step.side.index();
    let mut labels = BTreeMap::new();
    for (p, l) in &f.labels {
        if *p == path {
            continue;
        }
        if path.is_prefix_of(p) {
            if p.0[path.len()] == keep {
                let mut v = path.0.clone();
                v.extend_from_slice(&p.0[path.len() + 1..]);
                labels.insert(OccurrencePath(v), *l);
            }
        } else {
            labels.insert(p.clone(), *l);
        }
    }
    Ok(LabelledFormula { formula, labels })
}

/// A step on a label that is no longer present leaves the formula unchanged.
fn step_or_keep(f: &LabelledFormula, step: ResolutionStep) -> LabelledFormula {
    apply_resolution_step(f, step).unwrap_or_else(|_| f.clone())
}

/// `PR_n(f)`: results of `n` resolution steps with pairwise distinct labels.
pub fn partial_resolutions(f: &Formula, n: usize) -> Result<Vec<Formula>, ResolutionError> {
    let max = f.gd_count();
    if n > max {
        return Err(ResolutionError::DegreeOutOfRange { degree: n, max });
    }
    fn go(f: &LabelledFormula, n: usize, max: usize, used: &mut Vec<usize>, out: &mut IndexSet<Formula>) {
        if used.len() == n {
            out.insert(f.formula.clone());
            return;
        }
        for label in 0..max {
            if used.contains(&label) {
                continue;
            }
            for side in [Choice::L, Choice::R] {
                let next = step_or_keep(f, ResolutionStep { side, label, target: 0 });
                used.push(label);
                go(&next, n, max, used, out);
                used.pop();
            }
        }
    }
    let mut out = IndexSet::new();
    go(&gd_label(f), n, max, &mut Vec::new(), &mut out);
    Ok(out.into_iter().collect())
}

/// `PR_n(Γ)` for a multiset: steps address (target, label) pairs, each at most once.
pub fn partial_resolutions_multiset(g: &Multiset, n: usize) -> Result<Vec<Multiset>, ResolutionError> {
    let max = g.gd_count();
    if n > max {
        return Err(ResolutionError::DegreeOutOfRange { degree: n, max });
    }
    let slots: Vec<(usize, usize)> = g
        .iter()
        .enumerate()
        .flat_map(|(k, f)| (0..f.gd_count()).map(move |j| (k, j)))
        .collect();
    fn go(
        cur: &mut Vec<LabelledFormula>,
        n: usize,
        slots: &[(usize, usize)],
        used: &mut Vec<usize>,
        out: &mut IndexSet<Multiset>,
    ) {
        if used.len() == n {
            out.insert(cur.iter().map(|l| l.formula.clone()).collect());
            return;
        }
        for (i, &(k, label)) in slots.iter().enumerate() {
            if used.contains(&i) {
                continue;
            }
            for side in [Choice::L, Choice::R] {
                let before = cur[k].clone();
                cur[k] = step_or_keep(&before, ResolutionStep { side, label, target: k });
                used.push(i);
                go(cur, n, slots, used, out);
                used.pop();
                cur[k] = before;
            }
        }
    }
    let mut cur: Vec<LabelledFormula> = g.iter().map(gd_label).collect();
    let mut out = IndexSet::new();
    go(&mut cur, n, &slots, &mut Vec::new(), &mut out);
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn fs(xs: &[&str]) -> Vec<Formula> {
        xs.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn resolution_examples() {
        assert_eq!(resolutions(&f("p || (q || r)")), fs(&["p", "q", "r"]));
        assert_eq!(resolutions(&f("p & ~q")), fs(&["p & ~q"]));
        assert_eq!(resolutions(&f("(p||q) | s")), fs(&["p | s", "q | s"]));
    }

    #[test]
    fn multiset_examples() {
        let m = Multiset::new(fs(&["p||q", "p||q"]));
        let r = resolutions_multiset(&m);
        assert_eq!(r.len(), 3);
        let m = Multiset::new(fs(&["p & q"]));
        assert_eq!(resolutions_multiset(&m), vec![m.clone()]);
        assert_eq!(resolutions_multiset(&Multiset::empty()), vec![Multiset::empty()]);
    }

    #[test]
    fn labelled_steps() {
        let l = gd_label(&f("p || (q || r)"));
        assert_eq!(l.to_string(), "p ||0 (q ||1 r)");
        let r0 = apply_resolution_step(&l, ResolutionStep { side: Choice::R, label: 0, target: 0 }).unwrap();
        assert_eq!(r0.to_string(), "q ||1 r");
        let l1 = apply_resolution_step(&l, ResolutionStep { side: Choice::L, label: 1, target: 0 }).unwrap();
        assert_eq!(l1.to_string(), "p ||0 q");
        let both = apply_resolution_step(&r0, ResolutionStep { side: Choice::L, label: 1, target: 0 }).unwrap();
        assert_eq!(both.formula, f("q"));
        let gone = apply_resolution_step(&l, ResolutionStep { side: Choice::L, label: 0, target: 0 }).unwrap();
        assert_eq!(
            apply_resolution_step(&gone, ResolutionStep { side: Choice::L, label: 1, target: 0 }),
            Err(ResolutionError::LabelAbsent { label: 1 })
        );
    }

    #[test]
    fn partial_examples() {
        let phi = f("p||(q||r)");
        assert_eq!(partial_resolutions(&phi, 0).unwrap(), vec![phi.clone()]);
        assert_eq!(partial_resolutions(&phi, 1).unwrap(), fs(&["p", "q||r", "p||q", "p||r"]));
        assert_eq!(partial_resolutions(&phi, 2).unwrap(), fs(&["p", "q", "r"]));
        assert!(matches!(
            partial_resolutions(&phi, 3),
            Err(ResolutionError::DegreeOutOfRange { degree: 3, max: 2 })
        ));
    }

    #[test]
    fn moves_reach_their_resolution() {
        let phi = f("(p || x) & (q || (r | (s || t)))");
        for (r, moves) in resolutions_with_moves(&phi) {
            let mut cur = phi.clone();
            for (path, side) in moves {
                cur = cur.resolve_at(&path, side).unwrap();
            }
            assert_eq!(cur, r);
        }
    }
}
