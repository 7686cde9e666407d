use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Model, ModelError};
use crate::syntax::{Agent, Atom};

/// JSON form of a model:
///
/// ```json
/// {"worlds": ["w1"], "agents": ["a"], "relations": {"a": [["w1","w1"]]}, "valuation": {"w1": ["p"]}}
/// ```
///
/// Missing relations and valuation entries default to empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub agents: Vec<String>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

impl ModelDoc {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model documents always serialize")
    }
}

impl Model {
    /// Validates a document and builds the model.
    pub fn from_doc(doc: &ModelDoc) -> Result<Model, ModelError> {
        let agents = doc
            .agents
            .iter()
            .map(|a| Agent::new(a.as_str()).map_err(|_| ModelError::BadIdentifier(a.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut m = Model::new(doc.worlds.iter().cloned(), agents)?;
        for (agent, pairs) in &doc.relations {
            for (from, to) in pairs {
                m.add_arrow(agent, from, to)?;
            }
        }
        for (world, atoms) in &doc.valuation {
            let w = m.world_index(world)?;
            for p in atoms {
                let atom =
                    Atom::new(p.as_str()).map_err(|_| ModelError::BadIdentifier(p.clone()))?;
                m.set_atom(w, atom, true);
            }
        }
        Ok(m)
    }

    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        Model::from_doc(&ModelDoc::from_json(text)?)
    }

    pub fn to_doc(&self) -> ModelDoc {
        let relations = self
            .agents
            .iter()
            .enumerate()
            .map(|(a, name)| {
                let pairs = self
                    .relation(a)
                    .into_iter()
                    .map(|(w, v)| (self.names[w].clone(), self.names[v].clone()))
                    .collect();
                (name.to_string(), pairs)
            })
            .collect();
        let valuation = (0..self.world_count())
            .filter(|&w| !self.valuation[w].is_empty())
            .map(|w| {
                (
                    self.names[w].clone(),
                    self.valuation[w].iter().map(|p| p.to_string()).collect(),
                )
            })
            .collect();
        ModelDoc {
            worlds: self.names.as_ref().clone(),
            agents: self.agents.iter().map(|a| a.to_string()).collect(),
            relations,
            valuation,
        }
    }

    pub fn to_json(&self) -> String {
        self.to_doc().to_json()
    }
}
