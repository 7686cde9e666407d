//! Bisimulation by naive signature refinement, and the quotient model.
//!
//! Starting from the partition induced by the valuation, each round splits
//! blocks by the signature `(block, {blocks reachable by agent a} for each a)`
//! until the number of blocks stops growing.

use std::collections::{BTreeSet, HashMap};

use super::{Model, ModelError};

/// A partition of a model's worlds into blocks. Blocks are numbered by their
/// smallest world index, and members are listed in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Builds a partition from a block label per world, renumbering labels by
    /// first occurrence.
    pub fn from_labels<L: std::hash::Hash + Eq>(labels: impl IntoIterator<Item = L>) -> Self {
        let mut ids: HashMap<L, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = Vec::new();
        for (w, l) in labels.into_iter().enumerate() {
            let next = ids.len();
            let b = *ids.entry(l).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(w);
            block_of.push(b);
        }
        Self { blocks, block_of }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, w: usize) -> usize {
        self.block_of[w]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn same_block(&self, u: usize, v: usize) -> bool {
        self.block_of[u] == self.block_of[v]
    }
}

/// The coarsest partition whose blocks agree on the valuation and, for every
/// agent, on the set of blocks reachable in one step.
pub fn bisim_partition(m: &Model) -> Partition {
    let n = m.world_count();
    let mut part = Partition::from_labels((0..n).map(|w| m.label(w).clone()));
    loop {
        let signatures = (0..n).map(|w| {
            let per_agent: Vec<BTreeSet<usize>> = (0..m.agents().len())
                .map(|a| {
                    m.successors(a, w)
                        .iter()
                        .map(|&v| part.block_of(v))
                        .collect()
                })
                .collect();
            (part.block_of(w), per_agent)
        });
        let next = Partition::from_labels(signatures);
        if next.len() == part.len() {
            return next;
        }
        part = next;
    }
}

/// Collapses each block of `p` into one world named after its first member.
/// A block goes to another under agent `a` iff some member has an `a`-arrow into it.
pub fn quotient(m: &Model, p: &Partition) -> Result<Model, ModelError> {
    if p.block_of.len() != m.world_count() {
        return Err(ModelError::Document(format!(
            "partition covers {} worlds but the model has {}",
            p.block_of.len(),
            m.world_count()
        )));
    }
    for (b, members) in p.blocks.iter().enumerate() {
        let first = m.label(members[0]);
        if members.iter().any(|&w| m.label(w) != first) {
            return Err(ModelError::NotBisimulationPartition { block: b });
        }
    }
    let reps: Vec<usize> = p.blocks.iter().map(|b| b[0]).collect();
    let mut q = m.induced(&reps);
    for (a, w, v) in m.arrows() {
        q.add_arrow_idx(a, p.block_of(w), p.block_of(v));
    }
    Ok(q)
}
