//! Formulas of arbitrary arrow update logic with common knowledge.
//!
//! The AST keeps only the primitive connectives. Conjunction, implication,
//! the diamonds and falsum are built through constructor functions that expand
//! to primitives, and the printer folds the expansions back into sugar.

mod lexer;
mod parser;
mod print;

use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use parser::{parse_formula, parse_update};
pub use print::print_formula;

/// Returns true when `s` belongs to the identifier class shared by agents and atoms.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Identifiers that the lexer claims for constants and the common knowledge operator.
pub const RESERVED_WORDS: [&str; 3] = ["T", "F", "C"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("parse error at offset {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("invalid identifier {0:?}")]
    BadIdentifier(String),
    #[error("clause body {0} contains the arbitrary update operator")]
    NonAulcClause(String),
}

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Result<Self, SyntaxError> {
                let name = name.into();
                if is_identifier(&name) && !RESERVED_WORDS.contains(&name.as_str()) {
                    Ok(Self(name))
                } else {
                    Err(SyntaxError::BadIdentifier(name))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

name_type!(
    /// An agent name. Agents index the accessibility relations of a model.
    Agent
);
name_type!(
    /// A propositional atom.
    Atom
);

/// A formula tree. Only primitive connectives appear here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Atom(Atom),
    Neg(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Box(Agent, Box<Formula>),
    Common(Box<Formula>),
    Update(ArrowUpdate, Box<Formula>),
    Arbitrary(Box<Formula>),
}

/// One clause `(pre, agent, post)` of an arrow update. Both bodies are free of
/// the arbitrary update operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pre: Formula,
    agent: Agent,
    post: Formula,
}

impl Clause {
    pub fn new(pre: Formula, agent: Agent, post: Formula) -> Result<Self, SyntaxError> {
        for body in [&pre, &post] {
            if !body.is_aulc() {
                return Err(SyntaxError::NonAulcClause(print_formula(body)));
            }
        }
        Ok(Self { pre, agent, post })
    }

    /// Builds a clause without checking the bodies. Only useful for exercising
    /// code paths that must cope with malformed trees.
    pub fn new_unchecked(pre: Formula, agent: Agent, post: Formula) -> Self {
        Self { pre, agent, post }
    }

    pub fn pre(&self) -> &Formula {
        &self.pre
    }

    pub fn agent(&self) -> &Agent {
        &self.agent
    }

    pub fn post(&self) -> &Formula {
        &self.post
    }
}

/// An arrow update: an ordered list of clauses. The empty update removes every arrow.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ArrowUpdate {
    clauses: Vec<Clause>,
}

impl ArrowUpdate {
    pub fn new(clauses: Vec<Clause>) -> Self {
        Self { clauses }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Drops repeated clauses, keeping the first occurrence of each.
    pub fn normalized(&self) -> Self {
        let mut out: Vec<Clause> = Vec::with_capacity(self.clauses.len());
        for c in &self.clauses {
            if !out.contains(c) {
                out.push(c.clone());
            }
        }
        Self { clauses: out }
    }

    /// The update keeping every arrow of the given agents.
    pub fn trivial<'a>(agents: impl IntoIterator<Item = &'a Agent>) -> Self {
        Self {
            clauses: agents
                .into_iter()
                .map(|a| Clause::new_unchecked(Formula::Top, a.clone(), Formula::Top))
                .collect(),
        }
    }
}

impl Formula {
    pub fn atom(name: &str) -> Result<Self, SyntaxError> {
        Ok(Formula::Atom(Atom::new(name)?))
    }

    pub fn bottom() -> Self {
        Formula::Top.not()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Neg(Box::new(self))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    /// `a & b`, expanded to `~(~a | ~b)`.
    pub fn and(self, other: Formula) -> Self {
        self.not().or(other.not()).not()
    }

    /// `a -> b`, expanded to `~a | b`.
    pub fn implies(self, other: Formula) -> Self {
        self.not().or(other)
    }

    pub fn boxed(agent: Agent, body: Formula) -> Self {
        Formula::Box(agent, Box::new(body))
    }

    /// `<a>φ`, expanded to `~[a]~φ`.
    pub fn diamond(agent: Agent, body: Formula) -> Self {
        Formula::boxed(agent, body.not()).not()
    }

    pub fn common(body: Formula) -> Self {
        Formula::Common(Box::new(body))
    }

    pub fn update(update: ArrowUpdate, body: Formula) -> Self {
        Formula::Update(update, Box::new(body))
    }

    pub fn arbitrary(body: Formula) -> Self {
        Formula::Arbitrary(Box::new(body))
    }

    /// `<*>φ`, expanded to `~[*]~φ`.
    pub fn diamond_arbitrary(body: Formula) -> Self {
        Formula::arbitrary(body.not()).not()
    }

    /// Left-nested conjunction; the empty conjunction is `T`.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; the empty disjunction is `F`.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::bottom)
    }

    /// Matches the expansion of `a & b`.
    pub fn as_and(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Neg(inner) => match inner.as_ref() {
                Formula::Or(l, r) => match (l.as_ref(), r.as_ref()) {
                    (Formula::Neg(a), Formula::Neg(b)) => Some((a, b)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Matches the expansion of `a -> b`.
    pub fn as_implies(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Or(l, r) => match l.as_ref() {
                Formula::Neg(a) => Some((a, r)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Splits a left-nested conjunction into its components.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Some((l, r)) = cur.as_and() {
            out.push(r);
            cur = l;
        }
        out.push(cur);
        out.reverse();
        out
    }

    /// True iff no arbitrary update operator occurs, including inside update clauses.
    pub fn is_aulc(&self) -> bool {
        match self {
            Formula::Top | Formula::Atom(_) => true,
            Formula::Neg(f) | Formula::Box(_, f) | Formula::Common(f) => f.is_aulc(),
            Formula::Or(l, r) => l.is_aulc() && r.is_aulc(),
            Formula::Update(u, f) => {
                u.clauses()
                    .iter()
                    .all(|c| c.pre.is_aulc() && c.post.is_aulc())
                    && f.is_aulc()
            }
            Formula::Arbitrary(_) => false,
        }
    }

    pub fn contains_common(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Common(_)));
        found
    }

    /// Pre-order traversal over every node, descending into update clauses.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Top | Formula::Atom(_) => {}
            Formula::Neg(g) | Formula::Box(_, g) | Formula::Common(g) | Formula::Arbitrary(g) => {
                g.visit(f)
            }
            Formula::Or(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            Formula::Update(u, g) => {
                for c in u.clauses() {
                    c.pre.visit(f);
                    c.post.visit(f);
                }
                g.visit(f);
            }
        }
    }

    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.visit(&mut |f| out.push(f));
        out
    }

    /// Number of primitive nodes, clause bodies included.
    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Nesting depth of primitive nodes; atoms and `T` have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Atom(_) => 0,
            Formula::Neg(f) | Formula::Box(_, f) | Formula::Common(f) | Formula::Arbitrary(f) => {
                1 + f.depth()
            }
            Formula::Or(l, r) => 1 + l.depth().max(r.depth()),
            Formula::Update(u, f) => {
                let clauses = u
                    .clauses()
                    .iter()
                    .map(|c| c.pre.depth().max(c.post.depth()))
                    .max()
                    .unwrap_or(0);
                1 + clauses.max(f.depth())
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Agents mentioned by boxes and update clauses.
    pub fn agents(&self) -> BTreeSet<Agent> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Box(a, _) => {
                out.insert(a.clone());
            }
            Formula::Update(u, _) => {
                out.extend(u.clauses().iter().map(|c| c.agent.clone()));
            }
            _ => {}
        });
        out
    }

    /// Removes duplicate clauses from every update in the tree.
    pub fn normalized(&self) -> Formula {
        match self {
            Formula::Top | Formula::Atom(_) => self.clone(),
            Formula::Neg(f) => f.normalized().not(),
            Formula::Or(l, r) => l.normalized().or(r.normalized()),
            Formula::Box(a, f) => Formula::boxed(a.clone(), f.normalized()),
            Formula::Common(f) => Formula::common(f.normalized()),
            Formula::Arbitrary(f) => Formula::arbitrary(f.normalized()),
            Formula::Update(u, f) => {
                let clauses = u
                    .normalized()
                    .clauses
                    .into_iter()
                    .map(|c| Clause {
                        pre: c.pre.normalized(),
                        agent: c.agent,
                        post: c.post.normalized(),
                    })
                    .collect();
                Formula::update(ArrowUpdate::new(clauses).normalized(), f.normalized())
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p").unwrap()
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("_x1"));
        assert!(is_identifier("st_s_end"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("1x"));
        assert!(!is_identifier("a-b"));
        assert!(Agent::new("T").is_err());
        assert!(Atom::new("C").is_err());
        assert!(Atom::new("Cp").is_ok());
    }

    #[test]
    fn aulc_detection() {
        assert!(p().is_aulc());
        assert!(!Formula::arbitrary(p()).is_aulc());
        let a = Agent::new("a").unwrap();
        let raw = Clause::new_unchecked(Formula::arbitrary(Formula::Top), a.clone(), Formula::Top);
        let f = Formula::update(ArrowUpdate::new(vec![raw]), p());
        assert!(!f.is_aulc());
        assert!(Clause::new(Formula::arbitrary(Formula::Top), a, Formula::Top).is_err());
    }

    #[test]
    fn conjunct_splitting() {
        let f = Formula::conjunction([p(), Formula::Top, p().not()]);
        assert_eq!(f.conjuncts(), vec![&p(), &Formula::Top, &p().not()]);
        assert_eq!(Formula::conjunction([]), Formula::Top);
        assert_eq!(Formula::disjunction([]), Formula::bottom());
    }

    #[test]
    fn normalization_drops_duplicate_clauses() {
        let a = Agent::new("a").unwrap();
        let c = Clause::new(Formula::Top, a, p()).unwrap();
        let f = Formula::update(ArrowUpdate::new(vec![c.clone(), c.clone()]), p());
        let g = Formula::update(ArrowUpdate::new(vec![c]), p());
        assert_eq!(f.normalized(), g);
    }
}
