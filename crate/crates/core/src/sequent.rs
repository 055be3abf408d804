//! Multisets of formulas, sequents and partition sequents.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::syntax::{Formula, ParseError, Parser, Side, Tok, Var};

/// A finite multiset of formulas kept in canonical order (by rendered text).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Multiset(Vec<Formula>);

fn canon_cmp(a: &Formula, b: &Formula) -> Ordering {
    if a == b {
        Ordering::Equal
    } else {
        a.render().cmp(&b.render())
    }
}

impl Multiset {
    pub fn new(mut items: Vec<Formula>) -> Multiset {
        items.sort_by_cached_key(|f| f.render());
        Multiset(items)
    }

    pub fn empty() -> Multiset {
        Multiset(Vec::new())
    }

    pub fn singleton(f: Formula) -> Multiset {
        Multiset(vec![f])
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Formula> {
        self.0.get(i)
    }

    pub fn into_vec(self) -> Vec<Formula> {
        self.0
    }

    pub fn insert(&mut self, f: Formula) {
        let key = f.render();
        let at = self.0.partition_point(|g| g == &f || g.render() <= key);
        self.0.insert(at, f);
    }

    pub fn with(&self, f: Formula) -> Multiset {
        let mut m = self.clone();
        m.insert(f);
        m
    }

    pub fn with_all<'a>(&self, fs: impl IntoIterator<Item = &'a Formula>) -> Multiset {
        let mut m = self.clone();
        for f in fs {
            m.insert(f.clone());
        }
        m
    }

    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.0.iter().position(|g| g == f)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.contains(f)
    }

    pub fn count(&self, f: &Formula) -> usize {
        self.0.iter().filter(|g| *g == f).count()
    }

    /// Removes one occurrence; `None` if absent.
    pub fn without(&self, f: &Formula) -> Option<Multiset> {
        let i = self.position(f)?;
        let mut v = self.0.clone();
        v.remove(i);
        Some(Multiset(v))
    }

    pub fn remove_at(&self, i: usize) -> Multiset {
        let mut v = self.0.clone();
        v.remove(i);
        Multiset(v)
    }

    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if canon_cmp(&self.0[i], &other.0[j]) != Ordering::Greater {
                v.push(self.0[i].clone());
                i += 1;
            } else {
                v.push(other.0[j].clone());
                j += 1;
            }
        }
        v.extend_from_slice(&self.0[i..]);
        v.extend_from_slice(&other.0[j..]);
        Multiset(v)
    }

    /// `self − other`, defined only when `other` is a sub-multiset.
    pub fn difference(&self, other: &Multiset) -> Option<Multiset> {
        let mut v = self.0.clone();
        for f in &other.0 {
            let i = v.iter().position(|g| g == f)?;
            v.remove(i);
        }
        Some(Multiset(v))
    }

    pub fn is_submultiset_of(&self, other: &Multiset) -> bool {
        other.difference(self).is_some()
    }

    pub fn is_classical(&self) -> bool {
        self.0.iter().all(Formula::is_classical)
    }

    pub fn props(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for f in &self.0 {
            f.collect_props(&mut out);
        }
        out
    }

    pub fn gd_count(&self) -> usize {
        self.0.iter().map(Formula::gd_count).sum()
    }
}

impl FromIterator<Formula> for Multiset {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        Multiset::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Multiset {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Formula::render).collect();
        f.write_str(&parts.join(", "))
    }
}

impl Serialize for Multiset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multiset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Multiset::new(Vec::<Formula>::deserialize(d)?))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub antecedent: Multiset,
    pub succedent: Multiset,
}

impl Sequent {
    pub fn new(antecedent: Multiset, succedent: Multiset) -> Sequent {
        Sequent {
            antecedent,
            succedent,
        }
    }

    pub fn from_vecs(ante: Vec<Formula>, succ: Vec<Formula>) -> Sequent {
        Sequent::new(Multiset::new(ante), Multiset::new(succ))
    }

    pub fn side(&self, side: Side) -> &Multiset {
        match side {
            Side::Left => &self.antecedent,
            Side::Right => &self.succedent,
        }
    }

    pub fn with_side(&self, side: Side, m: Multiset) -> Sequent {
        match side {
            Side::Left => Sequent::new(m, self.succedent.clone()),
            Side::Right => Sequent::new(self.antecedent.clone(), m),
        }
    }

    pub fn is_classical(&self) -> bool {
        self.antecedent.is_classical() && self.succedent.is_classical()
    }

    pub fn props(&self) -> BTreeSet<Var> {
        let mut p = self.antecedent.props();
        p.extend(self.succedent.props());
        p
    }

    pub fn gd_count(&self) -> usize {
        self.antecedent.gd_count() + self.succedent.gd_count()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.antecedent.to_string();
        let r = self.succedent.to_string();
        match (l.is_empty(), r.is_empty()) {
            (true, true) => f.write_str("=>"),
            (true, false) => write!(f, "=> {r}"),
            (false, true) => write!(f, "{l} =>"),
            (false, false) => write!(f, "{l} => {r}"),
        }
    }
}

impl std::str::FromStr for Sequent {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_plain_sequent(s)
    }
}

/// `Γ1 ; Γ2 => Δ1 ; Δ2`; in interpolation Δ1 plays the role of Λ1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSequent {
    pub gamma1: Multiset,
    pub gamma2: Multiset,
    pub delta1: Multiset,
    pub delta2: Multiset,
}

impl PartitionSequent {
    pub fn flatten(&self) -> Sequent {
        Sequent::new(self.gamma1.union(&self.gamma2), self.delta1.union(&self.delta2))
    }
}

impl fmt::Display for PartitionSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = format!("{} ; {}", self.gamma1, self.gamma2);
        let r = format!("{} ; {}", self.delta1, self.delta2);
        write!(f, "{} => {}", l.trim(), r.trim())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedSequent {
    Plain(Sequent),
    Partition(PartitionSequent),
}

fn formula_list(p: &mut Parser) -> Result<Vec<Formula>, ParseError> {
    let mut out = Vec::new();
    if matches!(p.peek(), Tok::Semi | Tok::Arrow | Tok::End) {
        return Ok(out);
    }
    loop {
        out.push(p.formula()?);
        if *p.peek() == Tok::Comma {
            p.bump();
        } else {
            return Ok(out);
        }
    }
}

fn sequent_side(p: &mut Parser) -> Result<(Vec<Formula>, Option<Vec<Formula>>), ParseError> {
    let first = formula_list(p)?;
    if *p.peek() == Tok::Semi {
        p.bump();
        let second = formula_list(p)?;
        Ok((first, Some(second)))
    } else {
        Ok((first, None))
    }
}

pub fn parse_sequent(text: &str) -> Result<ParsedSequent, ParseError> {
    let mut p = Parser::new(text)?;
    let (g1, g2) = sequent_side(&mut p)?;
    p.expect(Tok::Arrow, "`,`, `;` or `=>`")?;
    let right_start = p.offset();
    let (d1, d2) = sequent_side(&mut p)?;
    if *p.peek() != Tok::End {
        return Err(p.error("`,`, `;` or end of input"));
    }
    match (g2, d2) {
        (None, None) => Ok(ParsedSequent::Plain(Sequent::from_vecs(g1, d1))),
        (Some(g2), Some(d2)) => Ok(ParsedSequent::Partition(PartitionSequent {
            gamma1: Multiset::new(g1),
            gamma2: Multiset::new(g2),
            delta1: Multiset::new(d1),
            delta2: Multiset::new(d2),
        })),
        (Some(_), None) => Err(ParseError::Syntax {
            position: text.len(),
            expected: "`;` in the succedent of a partition sequent".into(),
            found: "end of input".into(),
        }),
        (None, Some(_)) => Err(ParseError::Syntax {
            position: right_start,
            expected: "`;` in the antecedent of a partition sequent".into(),
            found: "`;` only in the succedent".into(),
        }),
    }
}

pub fn parse_plain_sequent(text: &str) -> Result<Sequent, ParseError> {
    match parse_sequent(text)? {
        ParsedSequent::Plain(s) => Ok(s),
        ParsedSequent::Partition(_) => Err(ParseError::Syntax {
            position: 0,
            expected: "a sequent without `;`".into(),
            found: "a partition sequent".into(),
        }),
    }
}

pub fn parse_partition_sequent(text: &str) -> Result<PartitionSequent, ParseError> {
    match parse_sequent(text)? {
        ParsedSequent::Partition(s) => Ok(s),
        ParsedSequent::Plain(_) => Err(ParseError::Syntax {
            position: 0,
            expected: "a partition sequent `G1 ; G2 => D1 ; D2`".into(),
            found: "a plain sequent".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn parse_plain() {
        let s = parse_plain_sequent("p, p => p").unwrap();
        assert_eq!(s.antecedent.len(), 2);
        assert_eq!(s.succedent.len(), 1);
        let s = parse_plain_sequent("=> p || ~p").unwrap();
        assert!(s.antecedent.is_empty());
        assert_eq!(s.to_string(), "=> p || ~p");
        assert_eq!(parse_plain_sequent("=>").unwrap().to_string(), "=>");
        assert!(parse_plain_sequent("p => q =>").is_err());
        assert!(parse_plain_sequent("p, => q").is_err());
    }

    #[test]
    fn parse_partition() {
        let ParsedSequent::Partition(ps) = parse_sequent("(p||q)|r ; ~p => r|s ; q||x").unwrap() else {
            panic!("expected a partition sequent");
        };
        assert_eq!(ps.gamma1, Multiset::new(vec![f("(p||q)|r")]));
        assert_eq!(ps.gamma2, Multiset::new(vec![f("~p")]));
        assert_eq!(ps.delta1, Multiset::new(vec![f("r|s")]));
        assert_eq!(ps.delta2, Multiset::new(vec![f("q||x")]));
        let ps = parse_partition_sequent("p ; => ; p").unwrap();
        assert!(ps.gamma2.is_empty() && ps.delta1.is_empty());
        assert!(parse_sequent("p ; q => r").is_err());
    }

    #[test]
    fn multiset_order_and_arithmetic() {
        let m = Multiset::new(vec![f("s||r"), f("p||(q||r)")]);
        assert_eq!(m.get(0), Some(&f("p||(q||r)")));
        let mut n = m.clone();
        n.insert(f("q"));
        assert_eq!(n.get(1), Some(&f("q")));
        assert_eq!(n.difference(&Multiset::singleton(f("q"))), Some(m.clone()));
        assert_eq!(n.difference(&Multiset::singleton(f("z"))), None);
        assert_eq!(m.union(&Multiset::singleton(f("q"))), n);
        assert_eq!(Multiset::new(vec![f("q"), f("p")]), Multiset::new(vec![f("p"), f("q")]));
    }
}
