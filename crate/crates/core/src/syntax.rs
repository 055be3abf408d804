//! Formulas, occurrence paths, parsing and printing.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A propositional variable, `[a-z][a-zA-Z0-9_]*`, never the keyword `bot`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(String);

impl Var {
    pub fn new(name: &str) -> Option<Var> {
        if is_identifier(name) {
            Some(Var(name.to_string()))
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Var::new(&s).ok_or_else(|| D::Error::custom(format!("invalid variable name {s:?}")))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    s != "bot" && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Which side of a sequent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

/// Which disjunct of an inquisitive disjunction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Choice {
    L,
    R,
}

impl Choice {
    pub fn index(self) -> u8 {
        match self {
            Choice::L => 0,
            Choice::R => 1,
        }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Choice::L => "L",
            Choice::R => "R",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Prop(Var),
    Bot,
    /// Classical negation; the child never contains `Gd`.
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// Split (tensor) disjunction `|`.
    Or(Box<Formula>, Box<Formula>),
    /// Inquisitive (global) disjunction `||`.
    Gd(Box<Formula>, Box<Formula>),
}

/// Child-index address of a subformula occurrence: 0 is the left (or only)
/// child, 1 the right child.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OccurrencePath(pub Vec<u8>);

impl OccurrencePath {
    pub fn root() -> Self {
        OccurrencePath(Vec::new())
    }

    pub fn child(&self, i: u8) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        OccurrencePath(v)
    }

    pub fn prepend(&self, i: u8) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i);
        v.extend_from_slice(&self.0);
        OccurrencePath(v)
    }

    pub fn is_prefix_of(&self, other: &OccurrencePath) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for OccurrencePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {position}: expected {expected}, found {found}")]
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("negation at offset {position} scopes over an inquisitive disjunction")]
    NonClassicalNegation { position: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("occurrence path {0} does not address a subformula")]
    InvalidPath(OccurrencePath),
    #[error("substitution would place an inquisitive disjunction under a negation")]
    NonClassicalNegation,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedProps {
    pub positive: BTreeSet<Var>,
    pub negative: BTreeSet<Var>,
}

impl Formula {
    /// Panics when `name` is not a valid identifier.
    pub fn prop(name: &str) -> Formula {
        Formula::Prop(Var::new(name).unwrap_or_else(|| panic!("invalid variable name {name:?}")))
    }

    /// Panics when `f` is not classical.
    pub fn neg(f: Formula) -> Formula {
        assert!(f.is_classical(), "negation of a nonclassical formula");
        Formula::Neg(Box::new(f))
    }

    pub fn try_neg(f: Formula) -> Result<Formula, FormulaError> {
        if f.is_classical() {
            Ok(Formula::Neg(Box::new(f)))
        } else {
            Err(FormulaError::NonClassicalNegation)
        }
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn gd(a: Formula, b: Formula) -> Formula {
        Formula::Gd(Box::new(a), Box::new(b))
    }

    /// `¬⊥`
    pub fn top() -> Formula {
        Formula::Neg(Box::new(Formula::Bot))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prop(_) | Formula::Bot => vec![],
            Formula::Neg(a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Gd(a, b) => vec![a, b],
        }
    }

    pub fn is_classical(&self) -> bool {
        match self {
            Formula::Prop(_) | Formula::Bot => true,
            Formula::Neg(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_classical() && b.is_classical(),
            Formula::Gd(..) => false,
        }
    }

    /// Checks the negation invariant everywhere, including below `Neg`.
    pub fn well_formed(&self) -> bool {
        match self {
            Formula::Prop(_) | Formula::Bot => true,
            Formula::Neg(a) => a.gd_count() == 0 && a.well_formed(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Gd(a, b) => {
                a.well_formed() && b.well_formed()
            }
        }
    }

    pub fn props(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    pub(crate) fn collect_props(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Prop(v) => {
                out.insert(v.clone());
            }
            Formula::Bot => {}
            Formula::Neg(a) => a.collect_props(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Gd(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
        }
    }

    pub fn signed_props(&self) -> SignedProps {
        let mut out = SignedProps::default();
        self.collect_signed(true, &mut out);
        out
    }

    pub(crate) fn collect_signed(&self, positive: bool, out: &mut SignedProps) {
        match self {
            Formula::Prop(v) => {
                if positive {
                    out.positive.insert(v.clone());
                } else {
                    out.negative.insert(v.clone());
                }
            }
            Formula::Bot => {}
            Formula::Neg(a) => a.collect_signed(!positive, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Gd(a, b) => {
                a.collect_signed(positive, out);
                b.collect_signed(positive, out);
            }
        }
    }

    /// Connectives plus atom occurrences (`bot` counts as an atom).
    pub fn symbol_count(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::Bot => 1,
            Formula::Neg(a) => 1 + a.symbol_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Gd(a, b) => {
                1 + a.symbol_count() + b.symbol_count()
            }
        }
    }

    pub fn gd_count(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::Bot | Formula::Neg(_) => 0,
            Formula::And(a, b) | Formula::Or(a, b) => a.gd_count() + b.gd_count(),
            Formula::Gd(a, b) => 1 + a.gd_count() + b.gd_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::Bot => 0,
            Formula::Neg(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Gd(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    pub fn at(&self, path: &OccurrencePath) -> Option<&Formula> {
        let mut cur = self;
        for &step in &path.0 {
            cur = match (cur, step) {
                (Formula::Neg(a), 0) => a,
                (Formula::And(a, _) | Formula::Or(a, _) | Formula::Gd(a, _), 0) => a,
                (Formula::And(_, b) | Formula::Or(_, b) | Formula::Gd(_, b), 1) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// True when some proper prefix of `path` addresses a negation.
    pub fn path_under_negation(&self, path: &OccurrencePath) -> bool {
        let mut cur = self;
        for &step in &path.0 {
            if let Formula::Neg(_) = cur {
                return true;
            }
            cur = match cur.children().get(step as usize) {
                Some(c) => c,
                None => return false,
            };
        }
        false
    }

    pub fn substitute_at(
        &self,
        path: &OccurrencePath,
        replacement: &Formula,
    ) -> Result<Formula, FormulaError> {
        fn go(
            f: &Formula,
            steps: &[u8],
            repl: &Formula,
            full: &OccurrencePath,
        ) -> Result<Formula, FormulaError> {
            let Some((&s, rest)) = steps.split_first() else {
                return Ok(repl.clone());
            };
            let bad = || FormulaError::InvalidPath(full.clone());
            match (f, s) {
                (Formula::Neg(a), 0) => {
                    let inner = go(a, rest, repl, full)?;
                    Formula::try_neg(inner)
                }
                (Formula::And(a, b), 0) => Ok(Formula::and(go(a, rest, repl, full)?, (**b).clone())),
                (Formula::And(a, b), 1) => Ok(Formula::and((**a).clone(), go(b, rest, repl, full)?)),
                (Formula::Or(a, b), 0) => Ok(Formula::or(go(a, rest, repl, full)?, (**b).clone())),
                (Formula::Or(a, b), 1) => Ok(Formula::or((**a).clone(), go(b, rest, repl, full)?)),
                (Formula::Gd(a, b), 0) => Ok(Formula::gd(go(a, rest, repl, full)?, (**b).clone())),
                (Formula::Gd(a, b), 1) => Ok(Formula::gd((**a).clone(), go(b, rest, repl, full)?)),
                _ => Err(bad()),
            }
        }
        go(self, &path.0, replacement, path)
    }

    /// Paths of all `Gd` nodes in left-to-right (written) order.
    pub fn gd_paths(&self) -> Vec<OccurrencePath> {
        fn go(f: &Formula, prefix: &mut Vec<u8>, out: &mut Vec<OccurrencePath>) {
            match f {
                Formula::Prop(_) | Formula::Bot | Formula::Neg(_) => {}
                Formula::And(a, b) | Formula::Or(a, b) => {
                    prefix.push(0);
                    go(a, prefix, out);
                    prefix.pop();
                    prefix.push(1);
                    go(b, prefix, out);
                    prefix.pop();
                }
                Formula::Gd(a, b) => {
                    prefix.push(0);
                    go(a, prefix, out);
                    prefix.pop();
                    out.push(OccurrencePath(prefix.clone()));
                    prefix.push(1);
                    go(b, prefix, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Replace the `Gd` at `path` by the chosen disjunct.
    pub fn resolve_at(&self, path: &OccurrencePath, side: Choice) -> Result<Formula, FormulaError> {
        match self.at(path) {
            Some(Formula::Gd(a, b)) => {
                let pick = if side == Choice::L { a } else { b };
                self.substitute_at(path, pick)
            }
            _ => Err(FormulaError::InvalidPath(path.clone())),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Gd(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Neg(_) => 4,
            Formula::Prop(_) | Formula::Bot => 5,
        }
    }

    fn write_prec(&self, out: &mut String, min: u8) {
        let paren = self.precedence() < min;
        if paren {
            out.push('(');
        }
        match self {
            Formula::Prop(v) => out.push_str(v.as_str()),
            Formula::Bot => out.push_str("bot"),
            Formula::Neg(a) => {
                out.push('~');
                a.write_prec(out, 4);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Gd(a, b) => {
                let p = self.precedence();
                a.write_prec(out, p + 1);
                out.push_str(match self {
                    Formula::And(..) => " & ",
                    Formula::Or(..) => " | ",
                    _ => " || ",
                });
                b.write_prec(out, p);
            }
        }
        if paren {
            out.push(')');
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write_prec(&mut s, 0);
        s
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

// ---------------------------------------------------------------------------
// Lexer and parser

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Bot,
    Tilde,
    Amp,
    Bar,
    BarBar,
    LParen,
    RParen,
    Comma,
    Semi,
    Arrow,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Bot => "`bot`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::BarBar => "`||`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Arrow => "`=>`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

pub(crate) fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => {
                if bytes.get(i + 1) == Some(&b'|') {
                    i += 1;
                    Tok::BarBar
                } else {
                    Tok::Bar
                }
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b';' => Tok::Semi,
            b'=' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'a'..=b'z' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                let word = &text[i..j];
                i = j - 1;
                if word == "bot" {
                    Tok::Bot
                } else {
                    Tok::Ident(word.to_string())
                }
            }
            _ => {
                let found = text[i..].chars().next().unwrap_or(' ');
                return Err(ParseError::Syntax {
                    position: i,
                    expected: "a formula token".into(),
                    found: format!("`{found}`"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            position: self.offset(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        }
    }

    pub(crate) fn expect(&mut self, t: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::BarBar {
            self.bump();
            let right = self.formula()?;
            Ok(Formula::gd(left, right))
        } else {
            Ok(left)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let left = self.conjunction()?;
        if *self.peek() == Tok::Bar {
            self.bump();
            let right = self.disjunction()?;
            Ok(Formula::or(left, right))
        } else {
            Ok(left)
        }
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let left = self.unary()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            let right = self.conjunction()?;
            Ok(Formula::and(left, right))
        } else {
            Ok(left)
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                let inner = self.unary()?;
                Formula::try_neg(inner)
                    .map_err(|_| ParseError::NonClassicalNegation { position: at })
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Prop(Var(name)))
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error("a variable, `bot`, `~` or `(`")),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.error("an operator or end of input"));
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum ReprRef<'a> {
    Prop { name: &'a Var },
    Bot,
    Neg { arg: &'a Formula },
    And { l: &'a Formula, r: &'a Formula },
    Or { l: &'a Formula, r: &'a Formula },
    Gd { l: &'a Formula, r: &'a Formula },
}

#[derive(Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum Repr {
    Prop { name: Var },
    Bot,
    Neg { arg: Box<Formula> },
    And { l: Box<Formula>, r: Box<Formula> },
    Or { l: Box<Formula>, r: Box<Formula> },
    Gd { l: Box<Formula>, r: Box<Formula> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Input {
    Text(String),
    Tree(Repr),
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = match self {
            Formula::Prop(v) => ReprRef::Prop { name: v },
            Formula::Bot => ReprRef::Bot,
            Formula::Neg(a) => ReprRef::Neg { arg: a },
            Formula::And(l, r) => ReprRef::And { l, r },
            Formula::Or(l, r) => ReprRef::Or { l, r },
            Formula::Gd(l, r) => ReprRef::Gd { l, r },
        };
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Formula {
    /// Accepts the tagged-object encoding or a surface-syntax string.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Input::deserialize(d)? {
            Input::Text(s) => parse_formula(&s).map_err(D::Error::custom),
            Input::Tree(r) => Ok(match r {
                Repr::Prop { name } => Formula::Prop(name),
                Repr::Bot => Formula::Bot,
                Repr::Neg { arg } => Formula::try_neg(*arg).map_err(D::Error::custom)?,
                Repr::And { l, r } => Formula::And(l, r),
                Repr::Or { l, r } => Formula::Or(l, r),
                Repr::Gd { l, r } => Formula::Gd(l, r),
            }),
        }
    }
}
