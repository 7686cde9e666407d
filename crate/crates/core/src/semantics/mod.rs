//! Truth of formulas on finite models.
//!
//! Evaluation computes whole extensions bottom-up: an update needs its clause
//! bodies at every world, and the quantifier needs the body at every world of
//! each candidate model. Extensions are three-valued so that a quantifier the
//! configured strategy cannot settle yields [`Truth::Unknown`] instead of a
//! guess; the other connectives combine unknowns the Kleene way.

mod quantifier;
mod sat;

use thiserror::Error;

use crate::kripke::{Model, ModelError};
use crate::syntax::{ArrowUpdate, Formula};

pub use sat::{sat_search, SatOutcome};

/// Default cap on the number of update profiles enumerated by the exact strategy.
pub const DEFAULT_MAX_PROFILES: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantMode {
    /// Enumerate every semantic update over the bisimulation quotient.
    Exact { max_profiles: u64 },
    /// Enumerate concrete updates with at most `max_clauses` clauses over a
    /// finite pool of bodies. Can only refute `[*]`.
    BoundedSyntactic {
        max_clauses: usize,
        max_depth: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantStrategy {
    pub mode: QuantMode,
    /// Admit bodies containing `C` in the bounded pool. The exact strategy
    /// ranges over semantic updates and ignores this.
    pub allow_c_in_updates: bool,
    /// Exact mode only: enumerate arrows of the agents occurring in the body
    /// and leave the others untouched. Ignored when the body contains `C` or a
    /// nested quantifier, since both see every agent.
    pub formula_agents_only: bool,
}

impl QuantStrategy {
    pub fn exact() -> Self {
        Self {
            mode: QuantMode::Exact {
                max_profiles: DEFAULT_MAX_PROFILES,
            },
            allow_c_in_updates: false,
            formula_agents_only: false,
        }
    }

    pub fn bounded(max_clauses: usize, max_depth: usize) -> Self {
        Self {
            mode: QuantMode::BoundedSyntactic {
                max_clauses,
                max_depth,
            },
            allow_c_in_updates: false,
            formula_agents_only: false,
        }
    }
}

impl Default for QuantStrategy {
    fn default() -> Self {
        Self::exact()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalConfig {
    pub quantifier: QuantStrategy,
    /// Read `C` over the reflexive-transitive closure instead of the transitive one.
    pub c_reflexive: bool,
}

impl EvalConfig {
    pub fn with_strategy(quantifier: QuantStrategy) -> Self {
        Self {
            quantifier,
            c_reflexive: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    fn from_bool(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    fn not(self) -> Self {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }

    fn or(self, other: Self) -> Self {
        match (self, other) {
            (Truth::True, _) | (_, Truth::True) => Truth::True,
            (Truth::False, Truth::False) => Truth::False,
            _ => Truth::Unknown,
        }
    }

    fn and(self, other: Self) -> Self {
        self.not().or(other.not()).not()
    }

    pub fn is_true(self) -> bool {
        self == Truth::True
    }
}

/// Outcome of evaluating a formula at a world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Undecided(String),
}

impl Verdict {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Undecided(_) => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("formula mentions agent {0:?}, which the model does not have")]
    UnknownAgent(String),
    #[error("update clause body is not free of the arbitrary update operator")]
    NonAulcClause,
}

/// Truth value of `f` at world `world`.
pub fn eval(m: &Model, world: &str, f: &Formula, cfg: &EvalConfig) -> Result<Verdict, EvalError> {
    let w = m.world_index(world)?;
    eval_at(m, w, f, cfg)
}

pub fn eval_at(m: &Model, w: usize, f: &Formula, cfg: &EvalConfig) -> Result<Verdict, EvalError> {
    if w >= m.world_count() {
        return Err(ModelError::UnknownWorld(format!("#{w}")).into());
    }
    check_agents(m, f)?;
    let mut ev = Evaluator::new(cfg);
    let ext = ev.extension(m, f)?;
    Ok(ev.verdict(ext[w]))
}

/// Truth value of `f` at every world, in world index order.
pub fn extension(m: &Model, f: &Formula, cfg: &EvalConfig) -> Result<Vec<Truth>, EvalError> {
    check_agents(m, f)?;
    Evaluator::new(cfg).extension(m, f)
}

/// `M * U`: keeps an `a`-arrow `(w1, w2)` iff some clause `(pre, a, post)` has
/// `pre` true at `w1` and `post` true at `w2`, both evaluated on `m`. Agents
/// without clauses lose every arrow.
pub fn apply_update(m: &Model, u: &ArrowUpdate, cfg: &EvalConfig) -> Result<Model, EvalError> {
    for c in u.clauses() {
        if m.agent_index(c.agent().as_str()).is_none() {
            return Err(EvalError::UnknownAgent(c.agent().to_string()));
        }
        check_agents(m, c.pre())?;
        check_agents(m, c.post())?;
    }
    Evaluator::new(cfg).update(m, u)
}

/// Truth of `[*]f` at `world`.
pub fn check_arbitrary(
    m: &Model,
    world: &str,
    f: &Formula,
    cfg: &EvalConfig,
) -> Result<Verdict, EvalError> {
    eval(m, world, &Formula::arbitrary(f.clone()), cfg)
}

fn check_agents(m: &Model, f: &Formula) -> Result<(), EvalError> {
    match f
        .agents()
        .into_iter()
        .find(|a| m.agent_index(a.as_str()).is_none())
    {
        Some(a) => Err(EvalError::UnknownAgent(a.to_string())),
        None => Ok(()),
    }
}

pub(crate) struct Evaluator<'c> {
    cfg: &'c EvalConfig,
    reason: Option<String>,
}

impl<'c> Evaluator<'c> {
    pub(crate) fn new(cfg: &'c EvalConfig) -> Self {
        Self { cfg, reason: None }
    }

    fn note_unknown(&mut self, reason: String) {
        self.reason.get_or_insert(reason);
    }

    fn verdict(&self, t: Truth) -> Verdict {
        match t {
            Truth::True => Verdict::True,
            Truth::False => Verdict::False,
            Truth::Unknown => Verdict::Undecided(
                self.reason
                    .clone()
                    .unwrap_or_else(|| "quantifier not settled".into()),
            ),
        }
    }

    pub(crate) fn extension(&mut self, m: &Model, f: &Formula) -> Result<Vec<Truth>, EvalError> {
        let n = m.world_count();
        Ok(match f {
            Formula::Top => vec![Truth::True; n],
            Formula::Atom(p) => (0..n)
                .map(|w| Truth::from_bool(m.holds(w, p.as_str())))
                .collect(),
            Formula::Neg(g) => self.extension(m, g)?.into_iter().map(Truth::not).collect(),
            Formula::Or(l, r) => {
                let l = self.extension(m, l)?;
                let r = self.extension(m, r)?;
                l.into_iter().zip(r).map(|(x, y)| x.or(y)).collect()
            }
            Formula::Box(a, g) => {
                let a = m
                    .agent_index(a.as_str())
                    .ok_or_else(|| EvalError::UnknownAgent(a.to_string()))?;
                let body = self.extension(m, g)?;
                (0..n)
                    .map(|w| {
                        m.successors(a, w)
                            .iter()
                            .fold(Truth::True, |acc, &v| acc.and(body[v]))
                    })
                    .collect()
            }
            Formula::Common(g) => {
                let body = self.extension(m, g)?;
                (0..n)
                    .map(|w| {
                        let mut reach = m.reachable_from(w);
                        if self.cfg.c_reflexive {
                            reach[w] = true;
                        }
                        reach
                            .iter()
                            .zip(&body)
                            .filter(|(r, _)| **r)
                            .fold(Truth::True, |acc, (_, &t)| acc.and(t))
                    })
                    .collect()
            }
            Formula::Update(u, g) => {
                let updated = self.update(m, u)?;
                self.extension(&updated, g)?
            }
            Formula::Arbitrary(g) => self.arbitrary(m, g)?,
        })
    }

    pub(crate) fn update(&mut self, m: &Model, u: &ArrowUpdate) -> Result<Model, EvalError> {
        let agents = m.agents().len();
        let mut by_agent: Vec<Vec<(Vec<bool>, Vec<bool>)>> = vec![Vec::new(); agents];
        for c in u.clauses() {
            if !(c.pre().is_aulc() && c.post().is_aulc()) {
                return Err(EvalError::NonAulcClause);
            }
            let a = m
                .agent_index(c.agent().as_str())
                .ok_or_else(|| EvalError::UnknownAgent(c.agent().to_string()))?;
            let pre = self.decided(m, c.pre())?;
            let post = self.decided(m, c.post())?;
            by_agent[a].push((pre, post));
        }
        Ok(m.filter_arrows(|a, w, v| by_agent[a].iter().any(|(pre, post)| pre[w] && post[v])))
    }

    fn decided(&mut self, m: &Model, f: &Formula) -> Result<Vec<bool>, EvalError> {
        self.extension(m, f)?
            .into_iter()
            .map(|t| match t {
                Truth::True => Ok(true),
                Truth::False => Ok(false),
                Truth::Unknown => Err(EvalError::NonAulcClause),
            })
            .collect()
    }
}
