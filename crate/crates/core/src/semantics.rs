//! Brute-force team semantics: satisfaction, sequent validity, countermodel
//! search and closure properties. Everything here is exhaustive on purpose.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::sequent::{Multiset, Sequent};
use crate::syntax::{Formula, Var};

/// Upper bound on the number of variables the exhaustive procedures accept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_vars: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_vars: 4 }
    }
}

/// Dense tables are used up to this many variables; above it teams are
/// streamed one at a time.
const DENSE_MAX: usize = 4;
const STREAM_MAX: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("variables {missing:?} are not in the team's domain")]
    DomainMismatch { missing: Vec<String> },
    #[error("{vars} variables exceed the enumeration budget of {cap}")]
    ResourceLimit { vars: usize, cap: usize },
}

/// A valuation aligned with some ordered domain.
pub type Valuation = Vec<bool>;

/// A set of valuations over an explicit, ordered domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Team {
    domain: Vec<Var>,
    members: BTreeSet<Valuation>,
}

impl Team {
    /// Panics if a member's length differs from the domain's.
    pub fn new(domain: Vec<Var>, members: impl IntoIterator<Item = Valuation>) -> Team {
        let members: BTreeSet<Valuation> = members.into_iter().collect();
        assert!(members.iter().all(|m| m.len() == domain.len()), "valuation length differs from domain");
        Team { domain, members }
    }

    pub fn empty(domain: Vec<Var>) -> Team {
        Team {
            domain,
            members: BTreeSet::new(),
        }
    }

    pub fn domain(&self) -> &[Var] {
        &self.domain
    }

    pub fn members(&self) -> &BTreeSet<Valuation> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self, other: &Team) -> Team {
        assert_eq!(self.domain, other.domain, "union of teams over different domains");
        let mut members = self.members.clone();
        members.extend(other.members.iter().cloned());
        Team {
            domain: self.domain.clone(),
            members,
        }
    }

    pub fn filter(&self, mut keep: impl FnMut(&Valuation) -> bool) -> Team {
        Team {
            domain: self.domain.clone(),
            members: self.members.iter().filter(|v| keep(v)).cloned().collect(),
        }
    }

    pub fn singleton(&self, v: &Valuation) -> Team {
        Team::new(self.domain.clone(), [v.clone()])
    }

    fn index_of(&self, v: &Var) -> Option<usize> {
        self.domain.iter().position(|d| d == v)
    }
}

impl fmt::Display for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for m in &self.members {
            let bits: Vec<String> = self
                .domain
                .iter()
                .zip(m)
                .map(|(x, b)| format!("{x}={}", u8::from(*b)))
                .collect();
            parts.push(format!("[{}]", bits.join(" ")));
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct TeamJson {
    vars: Vec<Var>,
    team: Vec<Vec<u8>>,
}

impl Serialize for Team {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TeamJson {
            vars: self.domain.clone(),
            team: self
                .members
                .iter()
                .map(|m| m.iter().map(|b| u8::from(*b)).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Team {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = TeamJson::deserialize(d)?;
        let mut members = BTreeSet::new();
        for row in j.team {
            if row.len() != j.vars.len() || row.iter().any(|b| *b > 1) {
                return Err(D::Error::custom("team rows must be 0/1 vectors as long as `vars`"));
            }
            members.insert(row.into_iter().map(|b| b == 1).collect());
        }
        Ok(Team {
            domain: j.vars,
            members,
        })
    }
}

// ---------------------------------------------------------------------------
// Literal satisfaction on a given team

/// Formula flattened into an arena so subteam results can be memoised.
struct Arena {
    nodes: Vec<Node>,
}

enum Node {
    Prop(usize),
    Bot,
    Neg(usize),
    And(usize, usize),
    Or(usize, usize),
    Gd(usize, usize),
}

impl Arena {
    fn build(f: &Formula, index: &impl Fn(&Var) -> usize) -> (Arena, usize) {
        let mut a = Arena { nodes: Vec::new() };
        let root = a.add(f, index);
        (a, root)
    }

    fn add(&mut self, f: &Formula, index: &impl Fn(&Var) -> usize) -> usize {
        let node = match f {
            Formula::Prop(v) => Node::Prop(index(v)),
            Formula::Bot => Node::Bot,
            Formula::Neg(a) => Node::Neg(self.add(a, index)),
            Formula::And(a, b) => {
                let (x, y) = (self.add(a, index), self.add(b, index));
                Node::And(x, y)
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.add(a, index), self.add(b, index));
                Node::Or(x, y)
            }
            Formula::Gd(a, b) => {
                let (x, y) = (self.add(a, index), self.add(b, index));
                Node::Gd(x, y)
            }
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }
}

/// Subteams of an explicit member list, addressed by bitmask over members.
struct Literal<'a> {
    arena: &'a Arena,
    members: &'a [Vec<bool>],
    memo: HashMap<(usize, u64), bool>,
}

impl Literal<'_> {
    fn sat(&mut self, node: usize, sub: u64) -> bool {
        if let Some(&r) = self.memo.get(&(node, sub)) {
            return r;
        }
        let r = match self.arena.nodes[node] {
            Node::Prop(i) => ones(sub).all(|m| self.members[m][i]),
            Node::Bot => sub == 0,
            Node::Neg(a) => ones(sub).all(|m| !self.sat(a, 1 << m)),
            Node::And(a, b) => self.sat(a, sub) && self.sat(b, sub),
            Node::Gd(a, b) => self.sat(a, sub) || self.sat(b, sub),
            Node::Or(a, b) => {
                // every s ⊆ sub, every u with sub \ s ⊆ u ⊆ sub
                let mut found = false;
                let mut s = sub;
                'outer: loop {
                    if self.sat(a, s) {
                        let rest = sub & !s;
                        let mut w = s;
                        loop {
                            if self.sat(b, rest | w) {
                                found = true;
                                break 'outer;
                            }
                            if w == 0 {
                                break;
                            }
                            w = (w - 1) & s;
                        }
                    }
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & sub;
                }
                found
            }
        };
        self.memo.insert((node, sub), r);
        r
    }
}

fn ones(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

fn check_domain(t: &Team, vars: &BTreeSet<Var>) -> Result<(), SemanticsError> {
    let missing: Vec<String> = vars
        .iter()
        .filter(|v| t.index_of(v).is_none())
        .map(|v| v.to_string())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(SemanticsError::DomainMismatch { missing })
    }
}

/// `t ⊨ f`, following the satisfaction clauses literally. Teams with more
/// than 63 members are refused with `ResourceLimit`.
pub fn satisfies(t: &Team, f: &Formula) -> Result<bool, SemanticsError> {
    check_domain(t, &f.props())?;
    if t.len() > 63 {
        return Err(SemanticsError::ResourceLimit { vars: t.domain.len(), cap: 63 });
    }
    let (arena, root) = Arena::build(f, &|v| t.index_of(v).expect("domain checked"));
    let members: Vec<Vec<bool>> = t.members.iter().cloned().collect();
    let mut lit = Literal {
        arena: &arena,
        members: &members,
        memo: HashMap::new(),
    };
    let all = if members.len() == 64 { u64::MAX } else { (1u64 << members.len()) - 1 };
    Ok(lit.sat(root, all))
}

/// The split disjunction of a multiset (⊥ when empty).
pub fn big_or(m: &Multiset) -> Formula {
    let mut it = m.iter().rev();
    match it.next() {
        None => Formula::Bot,
        Some(last) => it.fold(last.clone(), |acc, f| Formula::or(f.clone(), acc)),
    }
}

/// The conjunction of a multiset (¬⊥ when empty).
pub fn big_and(m: &Multiset) -> Formula {
    let mut it = m.iter().rev();
    match it.next() {
        None => Formula::top(),
        Some(last) => it.fold(last.clone(), |acc, f| Formula::and(f.clone(), acc)),
    }
}

/// True iff `t` satisfies every antecedent formula but not the succedent.
pub fn is_countermodel(t: &Team, s: &Sequent) -> Result<bool, SemanticsError> {
    for g in &s.antecedent {
        if !satisfies(t, g)? {
            return Ok(false);
        }
    }
    Ok(!satisfies(t, &big_or(&s.succedent))?)
}

// ---------------------------------------------------------------------------
// Exhaustive tables over a whole domain

/// All teams over a domain of at most four variables, as dense bitsets.
/// Valuation `v` (an index below `2^n`) sets `domain[i]` iff bit `i` of `v` is set;
/// a team is a bitmask over valuation indices.
pub struct Universe {
    domain: Vec<Var>,
    valuations: usize,
}

/// A set of teams over a `Universe`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeamSet {
    bits: Vec<u64>,
}

impl TeamSet {
    fn new(teams: usize) -> TeamSet {
        TeamSet {
            bits: vec![0; teams.div_ceil(64)],
        }
    }

    pub fn contains(&self, t: u64) -> bool {
        self.bits[(t / 64) as usize] >> (t % 64) & 1 == 1
    }

    fn insert(&mut self, t: u64) {
        self.bits[(t / 64) as usize] |= 1 << (t % 64);
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| ones(word).map(move |b| (w * 64 + b) as u64))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn intersect(&self, o: &TeamSet) -> TeamSet {
        TeamSet {
            bits: self.bits.iter().zip(&o.bits).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn unite(&self, o: &TeamSet) -> TeamSet {
        TeamSet {
            bits: self.bits.iter().zip(&o.bits).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn is_subset(&self, o: &TeamSet) -> bool {
        self.bits.iter().zip(&o.bits).all(|(a, b)| a & !b == 0)
    }
}

impl Universe {
    pub fn new(domain: Vec<Var>) -> Result<Universe, SemanticsError> {
        if domain.len() > DENSE_MAX {
            return Err(SemanticsError::ResourceLimit {
                vars: domain.len(),
                cap: DENSE_MAX,
            });
        }
        let valuations = 1usize << domain.len();
        Ok(Universe { domain, valuations })
    }

    pub fn domain(&self) -> &[Var] {
        &self.domain
    }

    pub fn team_count(&self) -> usize {
        1usize << self.valuations
    }

    pub fn full(&self) -> TeamSet {
        let mut s = TeamSet::new(self.team_count());
        for t in 0..self.team_count() as u64 {
            s.insert(t);
        }
        s
    }

    pub fn to_team(&self, t: u64) -> Team {
        let n = self.domain.len();
        let members = ones(t).map(|v| (0..n).map(|i| v >> i & 1 == 1).collect());
        Team::new(self.domain.clone(), members)
    }

    pub fn from_team(&self, t: &Team) -> Option<u64> {
        if t.domain != self.domain {
            return None;
        }
        let mut mask = 0u64;
        for m in &t.members {
            let v: usize = m.iter().enumerate().map(|(i, b)| usize::from(*b) << i).sum();
            mask |= 1 << v;
        }
        Some(mask)
    }

    /// Every team satisfying `f`. Panics if `f` mentions a variable outside the domain.
    pub fn sat_set(&self, f: &Formula) -> TeamSet {
        let teams = self.team_count();
        match f {
            Formula::Prop(x) => {
                let i = self.domain.iter().position(|d| d == x).expect("variable outside domain");
                let allowed: u64 = (0..self.valuations).filter(|v| v >> i & 1 == 1).map(|v| 1u64 << v).sum();
                let mut s = TeamSet::new(teams);
                for t in 0..teams as u64 {
                    if t & !allowed == 0 {
                        s.insert(t);
                    }
                }
                s
            }
            Formula::Bot => {
                let mut s = TeamSet::new(teams);
                s.insert(0);
                s
            }
            Formula::Neg(a) => {
                let inner = self.sat_set(a);
                let allowed: u64 = (0..self.valuations)
                    .filter(|v| !inner.contains(1u64 << v))
                    .map(|v| 1u64 << v)
                    .sum();
                let mut s = TeamSet::new(teams);
                for t in 0..teams as u64 {
                    if t & !allowed == 0 {
                        s.insert(t);
                    }
                }
                s
            }
            Formula::And(a, b) => self.sat_set(a).intersect(&self.sat_set(b)),
            Formula::Gd(a, b) => self.sat_set(a).unite(&self.sat_set(b)),
            Formula::Or(a, b) => self.split(&self.sat_set(a), &self.sat_set(b)),
        }
    }

    /// `{ s ∪ u : s ∈ a, u ∈ b }`
    pub fn split(&self, a: &TeamSet, b: &TeamSet) -> TeamSet {
        let mut s = TeamSet::new(self.team_count());
        let bs: Vec<u64> = b.iter().collect();
        for x in a.iter() {
            for &y in &bs {
                s.insert(x | y);
            }
        }
        s
    }

    pub fn conj(&self, m: &Multiset) -> TeamSet {
        m.iter().fold(self.full(), |acc, f| acc.intersect(&self.sat_set(f)))
    }

    pub fn disj(&self, m: &Multiset) -> TeamSet {
        m.iter()
            .fold(self.sat_set(&Formula::Bot), |acc, f| self.split(&acc, &self.sat_set(f)))
    }

    /// Position of a valuation in the lexicographic order on bit vectors.
    fn lex_rank(&self, v: usize) -> usize {
        let n = self.domain.len();
        (0..n).map(|i| (v >> i & 1) << (n - 1 - i)).sum()
    }

    fn order_key(&self, t: u64) -> (u32, Vec<usize>) {
        let mut ranks: Vec<usize> = ones(t).map(|v| self.lex_rank(v)).collect();
        ranks.sort_unstable();
        (t.count_ones(), ranks)
    }
}

fn sequent_domain(s: &Sequent, budget: &Budget) -> Result<Vec<Var>, SemanticsError> {
    let domain: Vec<Var> = s.props().into_iter().collect();
    let cap = budget.max_vars.min(STREAM_MAX);
    if domain.len() > cap {
        return Err(SemanticsError::ResourceLimit {
            vars: domain.len(),
            cap,
        });
    }
    Ok(domain)
}

/// Streams every team over a domain too large for dense tables.
fn stream_countermodel(domain: Vec<Var>, s: &Sequent) -> Result<Option<Team>, SemanticsError> {
    let n = domain.len();
    let valuations: Vec<Valuation> = (0..1usize << n).map(|v| (0..n).map(|i| v >> i & 1 == 1).collect()).collect();
    let count = valuations.len();
    let mut best: Option<(u32, Team)> = None;
    for mask in 0..(1u64 << count) {
        let size = mask.count_ones();
        if best.as_ref().is_some_and(|(k, _)| *k <= size) {
            continue;
        }
        let t = Team::new(domain.clone(), ones(mask).map(|v| valuations[v].clone()));
        if is_countermodel(&t, s)? {
            match &best {
                Some((k, b)) if *k == size && b.members <= t.members => {}
                _ => best = Some((size, t)),
            }
        }
    }
    Ok(best.map(|(_, t)| t))
}

/// The first countermodel in (size, lexicographic) order, or `None` if valid.
pub fn find_countermodel_bruteforce(s: &Sequent) -> Result<Option<Team>, SemanticsError> {
    find_countermodel_with(s, &Budget::default())
}

pub fn find_countermodel_with(s: &Sequent, budget: &Budget) -> Result<Option<Team>, SemanticsError> {
    let domain = sequent_domain(s, budget)?;
    if domain.len() > DENSE_MAX {
        return stream_countermodel(domain, s);
    }
    let u = Universe::new(domain)?;
    let ante = u.conj(&s.antecedent);
    let succ = u.disj(&s.succedent);
    let best = ante
        .iter()
        .filter(|t| !succ.contains(*t))
        .min_by_key(|t| u.order_key(*t));
    Ok(best.map(|t| u.to_team(t)))
}

pub fn sequent_valid(s: &Sequent) -> Result<bool, SemanticsError> {
    sequent_valid_with(s, &Budget::default())
}

pub fn sequent_valid_with(s: &Sequent, budget: &Budget) -> Result<bool, SemanticsError> {
    let domain = sequent_domain(s, budget)?;
    if domain.len() > DENSE_MAX {
        return Ok(stream_countermodel(domain, s)?.is_none());
    }
    let u = Universe::new(domain)?;
    Ok(u.conj(&s.antecedent).is_subset(&u.disj(&s.succedent)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureProperties {
    pub empty_team: bool,
    pub downward_closed: bool,
    pub union_closed: bool,
    pub flat: bool,
}

pub fn closure_properties(f: &Formula, domain: &[Var]) -> Result<ClosureProperties, SemanticsError> {
    let probe = Team::empty(domain.to_vec());
    check_domain(&probe, &f.props())?;
    let u = Universe::new(domain.to_vec())?;
    let sat = u.sat_set(f);
    let empty_team = sat.contains(0);
    let members: Vec<u64> = sat.iter().collect();
    let downward_closed = members.iter().all(|&t| {
        let mut s = t;
        loop {
            if !sat.contains(s) {
                return false;
            }
            if s == 0 {
                return true;
            }
            s = (s - 1) & t;
        }
    });
    let union_closed = members
        .iter()
        .all(|&a| members.iter().all(|&b| sat.contains(a | b)));
    let flat = (0..u.team_count() as u64).all(|t| sat.contains(t) == ones(t).all(|v| sat.contains(1 << v)));
    assert_eq!(
        flat,
        empty_team && downward_closed && union_closed,
        "flatness disagrees with the conjunction of the other closure properties"
    );
    Ok(ClosureProperties {
        empty_team,
        downward_closed,
        union_closed,
        flat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequent::parse_plain_sequent;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn team_p(rows: &[bool]) -> Team {
        Team::new(vec![Var::new("p").unwrap()], rows.iter().map(|b| vec![*b]))
    }

    #[test]
    fn satisfaction_examples() {
        assert!(!satisfies(&team_p(&[true, false]), &f("p || ~p")).unwrap());
        assert!(satisfies(&team_p(&[true]), &f("p || ~p")).unwrap());
        assert!(satisfies(&team_p(&[]), &f("p & ~p")).unwrap());
        assert!(satisfies(&team_p(&[true, false]), &f("p | ~p")).unwrap());
        assert!(matches!(
            satisfies(&team_p(&[true]), &f("q")),
            Err(SemanticsError::DomainMismatch { .. })
        ));
    }

    #[test]
    fn validity_examples() {
        let v = |s: &str| sequent_valid(&parse_plain_sequent(s).unwrap()).unwrap();
        assert!(v("(p||~p)|(p||~p) => p||~p, p||~p"));
        assert!(!v("(p||~p)|(p||~p) => p||~p"));
        assert!(!v("p | ~p => p || ~p"));
        assert!(v("p => p"));
        assert!(!v("=>"));
        assert!(v("bot =>"));
    }

    #[test]
    fn countermodel_examples() {
        let s = parse_plain_sequent("p||(p|~p) => p||~p").unwrap();
        let t = find_countermodel_bruteforce(&s).unwrap().unwrap();
        assert_eq!(t, team_p(&[true, false]));
        assert!(is_countermodel(&t, &s).unwrap());
        assert!(find_countermodel_bruteforce(&parse_plain_sequent("p => p").unwrap()).unwrap().is_none());
        let t = find_countermodel_bruteforce(&parse_plain_sequent("=> bot").unwrap()).unwrap().unwrap();
        assert!(t.domain().is_empty());
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let s = parse_plain_sequent("a, b, c, d, e => a").unwrap();
        assert!(matches!(sequent_valid(&s), Err(SemanticsError::ResourceLimit { .. })));
        let tight = Budget { max_vars: 1 };
        let s = parse_plain_sequent("a, b => a").unwrap();
        assert!(sequent_valid_with(&s, &tight).is_err());
    }

    #[test]
    fn closure_examples() {
        let p = vec![Var::new("p").unwrap()];
        let c = closure_properties(&f("p || ~p"), &p).unwrap();
        assert!(c.empty_team && c.downward_closed && !c.union_closed && !c.flat);
        let c = closure_properties(&f("p | ~p & p"), &p).unwrap();
        assert!(c.flat);
        let c = closure_properties(&Formula::Bot, &[]).unwrap();
        assert!(c.empty_team && c.downward_closed && c.union_closed && c.flat);
    }

    #[test]
    fn team_json() {
        let t = Team::new(
            vec![Var::new("p").unwrap(), Var::new("q").unwrap()],
            [vec![true, false], vec![false, true]],
        );
        let j = serde_json::to_value(&t).unwrap();
        assert_eq!(j, serde_json::json!({"vars":["p","q"],"team":[[0,1],[1,0]]}));
        let back: Team = serde_json::from_value(j).unwrap();
        assert_eq!(back, t);
    }
}
