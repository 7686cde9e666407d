//! Best-effort witness search over small models.
//!
//! Enumerates models over the formula's own atoms and agents, rooted at world
//! 0, in increasing size. Two cheap symmetry cuts apply: every world must be
//! reachable from the root (truth is preserved under generated submodels),
//! and the valuations of the non-root worlds are enumerated in non-decreasing
//! order. Failing to find a witness says nothing about satisfiability.

use super::{check_agents, EvalConfig, EvalError, Evaluator, Truth};
use crate::kripke::Model;
use crate::syntax::{Agent, Atom, Formula};

#[derive(Debug, Clone, PartialEq)]
pub enum SatOutcome {
    Found {
        model: Model,
        world: String,
    },
    /// Every model up to `bound` worlds was checked without success.
    /// `undecided` counts models where the quantifier could not be settled.
    NoneFound {
        bound: usize,
        undecided: u64,
    },
    /// The next size would exceed the model budget.
    BudgetExhausted {
        completed_bound: usize,
        explored: u64,
    },
}

pub fn sat_search(
    f: &Formula,
    max_worlds: usize,
    max_models: u64,
    cfg: &EvalConfig,
) -> Result<SatOutcome, EvalError> {
    let atoms: Vec<Atom> = f.atoms().into_iter().collect();
    let agents: Vec<Agent> = f.agents().into_iter().collect();
    let mut explored = 0u64;
    let mut undecided = 0u64;

    for n in 1..=max_worlds {
        let Some(count) = models_of_size(n, atoms.len(), agents.len()) else {
            return Ok(SatOutcome::BudgetExhausted {
                completed_bound: n - 1,
                explored,
            });
        };
        if explored.saturating_add(count) > max_models {
            return Ok(SatOutcome::BudgetExhausted {
                completed_bound: n - 1,
                explored,
            });
        }

        let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let mut base = Model::new(names, agents.iter().cloned())?;
        check_agents(&base, f)?;
        let label_count = 1usize << atoms.len();
        let arrow_bits = n * n * agents.len();

        let mut labels = vec![0usize; n];
        loop {
            for (w, &code) in labels.iter().enumerate() {
                for (i, p) in atoms.iter().enumerate() {
                    base.set_atom(w, p.clone(), code >> i & 1 == 1);
                }
            }
            for rel in 0..1u64 << arrow_bits {
                let m = with_arrows(base.clone(), n, agents.len(), rel);
                if n > 1 && !m.reachable_from(0).iter().skip(1).all(|&r| r) {
                    continue;
                }
                explored += 1;
                let mut ev = Evaluator::new(cfg);
                match ev.extension(&m, f)?[0] {
                    Truth::True => {
                        return Ok(SatOutcome::Found {
                            model: m,
                            world: "w0".into(),
                        })
                    }
                    Truth::Unknown => undecided += 1,
                    Truth::False => {}
                }
            }
            if !next_labels(&mut labels, label_count) {
                break;
            }
        }
    }
    Ok(SatOutcome::NoneFound {
        bound: max_worlds,
        undecided,
    })
}

/// Upper bound on the models enumerated at size `n`, if it fits in a u64.
fn models_of_size(n: usize, atoms: usize, agents: usize) -> Option<u64> {
    let arrow_bits = u32::try_from(n * n * agents).ok()?;
    let label_bits = u32::try_from(n * atoms).ok()?;
    1u64.checked_shl(arrow_bits)?
        .checked_mul(1u64.checked_shl(label_bits)?)
        .filter(|&c| c < u64::MAX / 2)
}

fn with_arrows(mut m: Model, n: usize, agents: usize, rel: u64) -> Model {
    for a in 0..agents {
        for w in 0..n {
            for v in 0..n {
                let bit = (a * n + w) * n + v;
                if rel >> bit & 1 == 1 {
                    m.add_arrow_idx(a, w, v);
                }
            }
        }
    }
    m
}

/// Advances the root label freely and keeps the others non-decreasing.
fn next_labels(labels: &mut [usize], count: usize) -> bool {
    let n = labels.len();
    for i in (1..n).rev() {
        if labels[i] + 1 < count {
            labels[i] += 1;
            for j in i + 1..n {
                labels[j] = labels[i];
            }
            return true;
        }
    }
    if labels[0] + 1 < count {
        labels[0] += 1;
        labels[1..].fill(0);
        return true;
    }
    false
}
