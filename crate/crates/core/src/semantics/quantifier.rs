//! The arbitrary update quantifier.
//!
//! Exact mode works on the bisimulation quotient. Clause bodies are
//! bisimulation invariant, so any update keeps a union of block-to-block
//! "rectangles" of each relation; conversely every block of a finite model is
//! definable, so every such union is realised by some update. Enumerating the
//! subsets of the quotient's arrows therefore enumerates exactly the models
//! `M * U` up to bisimulation. The realised quotient submodel is bisimilar to
//! the realised submodel of `M`, which lets evaluation stay on the quotient.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::{EvalError, Evaluator, QuantMode, Truth};
use crate::kripke::{bisim_partition, quotient, Model};
use crate::syntax::Formula;

impl Evaluator<'_> {
    pub(super) fn arbitrary(&mut self, m: &Model, body: &Formula) -> Result<Vec<Truth>, EvalError> {
        match self.cfg.quantifier.mode {
            QuantMode::Exact { max_profiles } => self.exact(m, body, max_profiles),
            QuantMode::BoundedSyntactic {
                max_clauses,
                max_depth,
            } => self.bounded(m, body, max_clauses, max_depth),
        }
    }

    fn exact(
        &mut self,
        m: &Model,
        body: &Formula,
        max_profiles: u64,
    ) -> Result<Vec<Truth>, EvalError> {
        let part = bisim_partition(m);
        let q = quotient(m, &part)?;

        let restrict = self.cfg.quantifier.formula_agents_only
            && !body.contains_common()
            && body
                .subformulas()
                .iter()
                .all(|g| !matches!(g, Formula::Arbitrary(_)));
        let relevant: Vec<bool> = if restrict {
            let used = body.agents();
            q.agents().iter().map(|a| used.contains(a)).collect()
        } else {
            vec![true; q.agents().len()]
        };

        let bit_of: HashMap<(usize, usize, usize), u32> = q
            .arrows()
            .filter(|&(a, _, _)| relevant[a])
            .enumerate()
            .map(|(i, arrow)| (arrow, i as u32))
            .collect();
        let bits = bit_of.len() as u32;
        let profiles = 1u64.checked_shl(bits).filter(|&n| n <= max_profiles);
        let Some(profiles) = profiles else {
            self.note_unknown(format!(
                "exact quantifier needs 2^{bits} update profiles, budget is {max_profiles}"
            ));
            return Ok(vec![Truth::Unknown; m.world_count()]);
        };

        let mut acc = vec![Truth::True; q.world_count()];
        for mask in 0..profiles {
            let realised = q.filter_arrows(|a, w, v| match bit_of.get(&(a, w, v)) {
                Some(&bit) => mask >> bit & 1 == 1,
                None => true,
            });
            let ext = self.extension(&realised, body)?;
            for (slot, t) in acc.iter_mut().zip(ext) {
                *slot = slot.and(t);
            }
            if acc.iter().all(|&t| t == Truth::False) {
                break;
            }
        }
        Ok((0..m.world_count())
            .map(|w| acc[part.block_of(w)])
            .collect())
    }

    fn bounded(
        &mut self,
        m: &Model,
        body: &Formula,
        max_clauses: usize,
        max_depth: usize,
    ) -> Result<Vec<Truth>, EvalError> {
        let pool = self.body_pool(m, body, max_depth)?;

        // Index every arrow of m so clause effects become bitsets.
        let arrows: Vec<(usize, usize, usize)> = m.arrows().collect();
        let words = arrows.len().div_ceil(64).max(1);
        let arrow_id: HashMap<(usize, usize, usize), usize> =
            arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();

        let mut effects: Vec<Vec<u64>> = Vec::new();
        let mut seen_effect: HashSet<Vec<u64>> = HashSet::new();
        for a in 0..m.agents().len() {
            for pre in &pool {
                for post in &pool {
                    let mut set = vec![0u64; words];
                    for (w, v) in m.relation(a) {
                        if pre[w] && post[v] {
                            let i = arrow_id[&(a, w, v)];
                            set[i / 64] |= 1 << (i % 64);
                        }
                    }
                    if set.iter().any(|&x| x != 0) && seen_effect.insert(set.clone()) {
                        effects.push(set);
                    }
                }
            }
        }

        let mut result = vec![Truth::Unknown; m.world_count()];
        let mut tried: HashSet<Vec<u64>> = HashSet::new();
        let mut chosen: Vec<usize> = Vec::new();
        let mut stack_sets: Vec<Vec<u64>> = vec![vec![0u64; words]];
        // Depth-first over index-increasing clause combinations.
        loop {
            let kept = stack_sets.last().expect("stack never empties").clone();
            if tried.insert(kept.clone()) {
                let realised = m.filter_arrows(|a, w, v| {
                    let i = arrow_id[&(a, w, v)];
                    kept[i / 64] >> (i % 64) & 1 == 1
                });
                let ext = self.extension(&realised, body)?;
                for (slot, t) in result.iter_mut().zip(ext) {
                    if t == Truth::False {
                        *slot = Truth::False;
                    }
                }
                if result.iter().all(|&t| t == Truth::False) {
                    return Ok(result);
                }
            }
            // advance to the next combination
            let next_start = chosen.last().map_or(0, |&i| i + 1);
            if chosen.len() < max_clauses && next_start < effects.len() {
                chosen.push(next_start);
                stack_sets.push(union(&kept, &effects[next_start]));
                continue;
            }
            loop {
                let Some(last) = chosen.pop() else {
                    if result.contains(&Truth::Unknown) {
                        self.note_unknown(format!(
                            "bounded search found no refuting update among {} candidates",
                            tried.len()
                        ));
                    }
                    return Ok(result);
                };
                stack_sets.pop();
                if last + 1 < effects.len() {
                    chosen.push(last + 1);
                    let base = stack_sets.last().expect("base set present");
                    let next = union(base, &effects[last + 1]);
                    stack_sets.push(next);
                    break;
                }
            }
        }
    }

    /// Extensions of the candidate clause bodies, deduplicated by extension.
    fn body_pool(
        &mut self,
        m: &Model,
        body: &Formula,
        max_depth: usize,
    ) -> Result<Vec<Vec<bool>>, EvalError> {
        let allow_c = self.cfg.quantifier.allow_c_in_updates;
        let mut candidates: Vec<Formula> = vec![Formula::Top];
        let atoms: BTreeSet<_> = (0..m.world_count()).flat_map(|w| m.label(w)).collect();
        candidates.extend(atoms.into_iter().map(|p| Formula::Atom(p.clone())));
        for g in body.subformulas() {
            if g.is_aulc() && g.depth() <= max_depth && (allow_c || !g.contains_common()) {
                candidates.push(g.clone());
            }
        }
        let negated: Vec<Formula> = candidates
            .iter()
            .map(|g| match g {
                Formula::Neg(inner) => inner.as_ref().clone(),
                _ => g.clone().not(),
            })
            .collect();
        candidates.extend(negated);

        let mut seen = HashSet::new();
        let mut pool = Vec::new();
        for g in &candidates {
            let ext = self.decided(m, g)?;
            if seen.insert(ext.clone()) {
                pool.push(ext);
            }
        }
        Ok(pool)
    }
}

fn union(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}
