//! Derivation normal form and the resolution decomposition.

use serde::{Deserialize, Serialize};

use crate::calculus::{self, Derivation};
use crate::prover::{left_gd_tree, rebuild_succedent};
use crate::resolutions::{moves_to, Move};
use crate::sequent::{Multiset, Sequent};
use crate::syntax::{Formula, Side};

use super::cut::eliminate_cuts;
use super::structural::inv_gd;
use super::{choice, gt_only, TransformError};

type Res<T> = Result<T, TransformError>;

/// Brings a cutfree derivation into normal form: LGd steps at the root,
/// then RGd steps, then classical subproofs of `Ξ ⇒ f[Ξ]`.
///
/// Each `||` of the endsequent is pushed to the bottom by inverting the
/// derivation on it (leftmost antecedent occurrence first, then the
/// succedent), so every classical part is an inverted piece of `d` and no
/// taller than `d`.
pub fn normalize(d: &Derivation) -> Res<Derivation> {
    if !d.is_cutfree() {
        return Err(TransformError::ContainsCut);
    }
    gt_only(d)?;
    left_phase(d)
}

fn left_phase(d: &Derivation) -> Res<Derivation> {
    let ante = &d.conclusion.antecedent;
    let Some(chi) = ante.iter().find(|f| !f.is_classical()).cloned() else {
        return right_phase(d);
    };
    let path = chi.gd_paths().into_iter().next().expect("nonclassical formulas contain ||");
    let out = inv_gd(d, Side::Left, &chi, &path)?;
    let mut parts = Vec::with_capacity(2);
    for (_, x) in &out {
        parts.push(left_phase(x)?);
    }
    let mut it = parts.into_iter();
    let (p1, p2) = (it.next().expect("two outputs"), it.next().expect("two outputs"));
    Ok(calculus::l_gd(p1, p2, &chi, &path)?)
}

fn right_phase(d: &Derivation) -> Res<Derivation> {
    let succ = &d.conclusion.succedent;
    let Some(chi) = succ.iter().find(|f| !f.is_classical()).cloned() else {
        return Ok(d.clone());
    };
    let path = chi.gd_paths().into_iter().next().expect("nonclassical formulas contain ||");
    let out = inv_gd(d, Side::Right, &chi, &path)?;
    let (j, x) = out.into_iter().next().expect("one output");
    Ok(calculus::r_gd(right_phase(&x)?, &chi, &path, choice(j))?)
}

/// One member `Ξ ⇒ f[Ξ]` of a resolution family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedEntry {
    pub resolution: Multiset,
    pub image: Multiset,
    pub derivation: Derivation,
}

/// Classical derivations indexed by the resolutions of the antecedent; the
/// entries double as the finite table of `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedFamily {
    pub endsequent: Sequent,
    pub entries: Vec<ResolvedEntry>,
}

impl ResolvedFamily {
    pub fn get(&self, resolution: &Multiset) -> Option<&ResolvedEntry> {
        self.entries.iter().find(|e| e.resolution == *resolution)
    }
}

/// Eliminates cuts, normalizes, and reads off the classical parts.
pub fn resolve_derivation(d: &Derivation) -> Res<ResolvedFamily> {
    let n = normalize(&eliminate_cuts(d)?)?;
    Ok(family_of_normal(&n))
}

pub(super) fn family_of_normal(n: &Derivation) -> ResolvedFamily {
    let mut entries: Vec<ResolvedEntry> = Vec::new();
    for part in n.classical_parts() {
        let c = &part.conclusion;
        if entries.iter().any(|e| e.resolution == c.antecedent) {
            continue;
        }
        entries.push(ResolvedEntry {
            resolution: c.antecedent.clone(),
            image: c.succedent.clone(),
            derivation: part.clone(),
        });
    }
    ResolvedFamily {
        endsequent: n.conclusion.clone(),
        entries,
    }
}

/// Pairs every formula of `originals` with a distinct member of `image` that
/// is one of its resolutions. Returns, per original, the image position and
/// the moves reaching it.
pub fn match_resolutions(originals: &[Formula], image: &Multiset) -> Option<Vec<(usize, Vec<Move>)>> {
    fn go(
        originals: &[Formula],
        image: &[Formula],
        used: &mut Vec<bool>,
        acc: &mut Vec<(usize, Vec<Move>)>,
    ) -> bool {
        let Some(first) = originals.first() else {
            return true;
        };
        for (i, g) in image.iter().enumerate() {
            if used[i] || (i > 0 && image[i - 1] == *g && !used[i - 1]) {
                continue;
            }
            if let Some(ms) = moves_to(first, g) {
                used[i] = true;
                acc.push((i, ms));
                if go(&originals[1..], image, used, acc) {
                    return true;
                }
                acc.pop();
                used[i] = false;
            }
        }
        false
    }
    if originals.len() != image.len() {
        return None;
    }
    let mut used = vec![false; image.len()];
    let mut acc = Vec::new();
    go(originals, image.as_slice(), &mut used, &mut acc).then_some(acc)
}

/// Lifts a classical derivation of `Ξ ⇒ Λ` with `Λ ∈ R(succ)` to `Ξ ⇒ succ`.
pub(super) fn lift_succedent(d: Derivation, succ: &Multiset) -> Res<Derivation> {
    let Some(m) = match_resolutions(succ.as_slice(), &d.conclusion.succedent) else {
        return Err(TransformError::ShapeMismatch(format!(
            "`{}` is not a resolution of `{succ}`",
            d.conclusion.succedent
        )));
    };
    let moves: Vec<Vec<Move>> = m.into_iter().map(|(_, ms)| ms).collect();
    Ok(rebuild_succedent(d, succ.as_slice(), &moves)?)
}

/// Reassembles a family into a derivation of its endsequent with RGd then
/// LGd steps.
pub fn reassemble(family: &ResolvedFamily) -> Res<Derivation> {
    let s = &family.endsequent;
    left_gd_tree(&s.antecedent, &s.succedent, &mut |leaf: &Sequent| {
        let Some(e) = family.get(&leaf.antecedent) else {
            return Err(TransformError::ShapeMismatch(format!(
                "no entry for resolution `{}`",
                leaf.antecedent
            )));
        };
        lift_succedent(e.derivation.clone(), &s.succedent)
    })
}
