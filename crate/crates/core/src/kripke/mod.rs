//! Finite multi-agent Kripke models.
//!
//! Worlds carry opaque string ids but are addressed internally by index.
//! Relations are stored as sorted successor lists per agent. World names and
//! the valuation sit behind `Arc` so that the many relation-only variants
//! produced while evaluating updates share them.

mod bisim;
mod doc;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{Agent, Atom};

pub use bisim::{bisim_partition, quotient, Partition};
pub use doc::ModelDoc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("duplicate world id {0:?}")]
    DuplicateWorld(String),
    #[error("unknown world id {0:?}")]
    UnknownWorld(String),
    #[error("unknown agent {0:?}")]
    UnknownAgent(String),
    #[error("invalid identifier {0:?}")]
    BadIdentifier(String),
    #[error("valuation differs inside block {block}")]
    NotBisimulationPartition { block: usize },
    #[error("malformed model document: {0}")]
    Document(String),
}

/// A finite Kripke model `(W, R, V)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    names: Arc<Vec<String>>,
    index: Arc<HashMap<String, usize>>,
    agents: Vec<Agent>,
    // succ[agent][world] = sorted successors
    succ: Vec<Vec<Vec<usize>>>,
    valuation: Arc<Vec<BTreeSet<Atom>>>,
}

impl Model {
    /// A model with the given worlds and agents, no arrows and an empty valuation.
    pub fn new<S: Into<String>>(
        worlds: impl IntoIterator<Item = S>,
        agents: impl IntoIterator<Item = Agent>,
    ) -> Result<Self, ModelError> {
        let names: Vec<String> = worlds.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(ModelError::DuplicateWorld(n.clone()));
            }
        }
        let agents: BTreeSet<Agent> = agents.into_iter().collect();
        let agents: Vec<Agent> = agents.into_iter().collect();
        let n = names.len();
        Ok(Self {
            succ: vec![vec![Vec::new(); n]; agents.len()],
            valuation: Arc::new(vec![BTreeSet::new(); n]),
            names: Arc::new(names),
            index: Arc::new(index),
            agents,
        })
    }

    pub fn world_count(&self) -> usize {
        self.names.len()
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn world_names(&self) -> &[String] {
        &self.names
    }

    pub fn world_index(&self, name: &str) -> Result<usize, ModelError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownWorld(name.to_owned()))
    }

    /// Agents in sorted order.
    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent_index(&self, agent: &str) -> Option<usize> {
        self.agents.binary_search_by(|a| a.as_str().cmp(agent)).ok()
    }

    fn require_agent(&self, agent: &str) -> Result<usize, ModelError> {
        self.agent_index(agent)
            .ok_or_else(|| ModelError::UnknownAgent(agent.to_owned()))
    }

    pub fn successors(&self, agent: usize, w: usize) -> &[usize] {
        &self.succ[agent][w]
    }

    pub fn has_arrow(&self, agent: usize, from: usize, to: usize) -> bool {
        self.succ[agent][from].binary_search(&to).is_ok()
    }

    pub fn add_arrow(&mut self, agent: &str, from: &str, to: &str) -> Result<(), ModelError> {
        let a = self.require_agent(agent)?;
        let (from, to) = (self.world_index(from)?, self.world_index(to)?);
        self.add_arrow_idx(a, from, to);
        Ok(())
    }

    pub fn add_arrow_idx(&mut self, agent: usize, from: usize, to: usize) {
        let list = &mut self.succ[agent][from];
        if let Err(at) = list.binary_search(&to) {
            list.insert(at, to);
        }
    }

    /// Every arrow as `(agent, from, to)` in index order.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(a, rows)| {
            rows.iter()
                .enumerate()
                .flat_map(move |(w, succ)| succ.iter().map(move |&v| (a, w, v)))
        })
    }

    pub fn arrow_count(&self) -> usize {
        self.succ.iter().flatten().map(Vec::len).sum()
    }

    /// The relation of one agent as `(from, to)` index pairs.
    pub fn relation(&self, agent: usize) -> BTreeSet<(usize, usize)> {
        self.succ[agent]
            .iter()
            .enumerate()
            .flat_map(|(w, s)| s.iter().map(move |&v| (w, v)))
            .collect()
    }

    pub fn holds(&self, w: usize, atom: &str) -> bool {
        self.valuation[w].contains(atom)
    }

    pub fn label(&self, w: usize) -> &BTreeSet<Atom> {
        &self.valuation[w]
    }

    pub fn set_atom(&mut self, w: usize, atom: Atom, value: bool) {
        let val = Arc::make_mut(&mut self.valuation);
        if value {
            val[w].insert(atom);
        } else {
            val[w].remove(&atom);
        }
    }

    /// Same worlds, agents and valuation; relations replaced by `keep`'s choice.
    pub fn filter_arrows(&self, mut keep: impl FnMut(usize, usize, usize) -> bool) -> Model {
        let succ = self
            .succ
            .iter()
            .enumerate()
            .map(|(a, rows)| {
                rows.iter()
                    .enumerate()
                    .map(|(w, s)| s.iter().copied().filter(|&v| keep(a, w, v)).collect())
                    .collect()
            })
            .collect();
        Model {
            names: Arc::clone(&self.names),
            index: Arc::clone(&self.index),
            agents: self.agents.clone(),
            succ,
            valuation: Arc::clone(&self.valuation),
        }
    }

    /// Worlds reachable from `w` in one or more steps of the union of all relations.
    pub fn reachable_from(&self, w: usize) -> Vec<bool> {
        let mut seen = vec![false; self.world_count()];
        let mut stack: Vec<usize> = Vec::new();
        let push_succ = |v: usize, seen: &mut Vec<bool>, stack: &mut Vec<usize>| {
            for rows in &self.succ {
                for &x in &rows[v] {
                    if !seen[x] {
                        seen[x] = true;
                        stack.push(x);
                    }
                }
            }
        };
        push_succ(w, &mut seen, &mut stack);
        while let Some(v) = stack.pop() {
            push_succ(v, &mut seen, &mut stack);
        }
        seen
    }

    /// Named variant of [`Model::reachable_from`].
    pub fn reachable(&self, world: &str) -> Result<BTreeSet<String>, ModelError> {
        let w = self.world_index(world)?;
        Ok(self
            .reachable_from(w)
            .into_iter()
            .enumerate()
            .filter(|&(_, r)| r)
            .map(|(v, _)| self.names[v].clone())
            .collect())
    }

    /// The submodel induced by `worlds`, keeping arrows between retained worlds.
    pub fn induced(&self, worlds: &[usize]) -> Model {
        let names: Vec<String> = worlds.iter().map(|&w| self.names[w].clone()).collect();
        let mut m = Model::new(names, self.agents.iter().cloned())
            .expect("source model has distinct world ids");
        let pos: HashMap<usize, usize> = worlds.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        for (a, w, v) in self.arrows() {
            if let (Some(&i), Some(&j)) = (pos.get(&w), pos.get(&v)) {
                m.add_arrow_idx(a, i, j);
            }
        }
        let val = Arc::make_mut(&mut m.valuation);
        for (i, &w) in worlds.iter().enumerate() {
            val[i] = self.valuation[w].clone();
        }
        m
    }
}
