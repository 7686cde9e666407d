//! Finite windows of the grid model of a machine's run, and a checker for the
//! run-encoding conjuncts on them.
//!
//! World `"n,m"` is tape cell `n` at time `m`. `right`/`left` step `n` by one,
//! `up`/`down` step `m` by one, `a` is the identity and every other agent is
//! empty. Arrows leaving the window are dropped, so only worlds far enough
//! from the border see their true modal neighbourhood; the checker only
//! evaluates there. The `[*]`-bearing grid conjuncts are not checked here.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::encoder::{
    directions, grid_conjuncts, sane_conjuncts, transition_conjuncts, EncodingVocabulary, Named,
    AGENT_REF, DOWN, LEFT, RIGHT, UP,
};
use crate::kripke::Model;
use crate::semantics::{extension, EvalConfig, Truth};
use crate::syntax::{Atom, Formula};
use crate::turing::{run, RunTable, StateRef, TmError, TuringMachine};

/// Margin for conjuncts of modal depth two.
pub const DEEP_MARGIN: u64 = 2;
/// Margin for the one-step diamond checks.
pub const SHALLOW_MARGIN: u64 = 1;

#[derive(Debug, Clone)]
pub struct GridWindow {
    model: Model,
    table: RunTable,
}

pub fn world_name(n: i64, m: i64) -> String {
    format!("{n},{m}")
}

impl GridWindow {
    pub fn model(&self) -> &Model {
        &self.model
    }

    /// For fault injection and other experiments on the valuation.
    pub fn model_mut(&mut self) -> &mut Model {
        &mut self.model
    }

    pub fn run_table(&self) -> &RunTable {
        &self.table
    }

    pub fn n_range(&self) -> RangeInclusive<i64> {
        self.table.n_range()
    }

    pub fn m_range(&self) -> RangeInclusive<i64> {
        self.table.m_range()
    }

    pub fn world(&self, n: i64, m: i64) -> Option<usize> {
        if !self.n_range().contains(&n) || !self.m_range().contains(&m) {
            return None;
        }
        let width = self.n_range().end() - self.n_range().start() + 1;
        Some(((m - self.m_range().start()) * width + (n - self.n_range().start())) as usize)
    }

    pub fn coords(&self, w: usize) -> (i64, i64) {
        let width = self.n_range().end() - self.n_range().start() + 1;
        let w = w as i64;
        (
            self.n_range().start() + w % width,
            self.m_range().start() + w / width,
        )
    }

    pub fn holds(&self, n: i64, m: i64, atom: &str) -> bool {
        self.world(n, m).is_some_and(|w| self.model.holds(w, atom))
    }

    /// Sets one atom at `(n, m)`.
    pub fn set_atom(&mut self, n: i64, m: i64, atom: &str, value: bool) {
        let w = self.world(n, m).expect("world inside the window");
        let atom = Atom::new(atom).expect("valid atom name");
        self.model.set_atom(w, atom, value);
    }

    /// Worlds at least `margin` cells away from every border, ordered by `(n, m)`.
    pub fn interior_worlds(&self, margin: u64) -> Vec<(i64, i64)> {
        let margin = i64::try_from(margin).unwrap_or(i64::MAX);
        let (n_lo, n_hi) = (
            self.n_range().start().saturating_add(margin),
            self.n_range().end().saturating_sub(margin),
        );
        let (m_lo, m_hi) = (
            self.m_range().start().saturating_add(margin),
            self.m_range().end().saturating_sub(margin),
        );
        (n_lo..=n_hi)
            .flat_map(|n| (m_lo..=m_hi).map(move |m| (n, m)))
            .collect()
    }
}

pub fn build_grid_model(
    tm: &TuringMachine,
    voc: &EncodingVocabulary,
    n_range: RangeInclusive<i64>,
    m_range: RangeInclusive<i64>,
) -> Result<GridWindow, TmError> {
    let table = run(tm, n_range.clone(), m_range.clone())?;
    let names: Vec<String> = m_range
        .clone()
        .flat_map(|m| n_range.clone().map(move |n| world_name(n, m)))
        .collect();
    let model = Model::new(names, voc.agents()).expect("grid world names are distinct");
    let mut g = GridWindow { model, table };

    let idx = |name: &str| g.model.agent_index(name).expect("grid agent present");
    let (a, left, right, up, down) = (idx(AGENT_REF), idx(LEFT), idx(RIGHT), idx(UP), idx(DOWN));
    let atom = |name: String| Atom::new(name).expect("vocabulary atoms are identifiers");
    for m in m_range.clone() {
        let head = g.table.head_position(m);
        for n in n_range.clone() {
            let w = g.world(n, m).expect("in window");
            g.model.add_arrow_idx(a, w, w);
            for (agent, (dn, dm)) in [
                (left, (-1, 0)),
                (right, (1, 0)),
                (up, (0, 1)),
                (down, (0, -1)),
            ] {
                if let Some(v) = g.world(n + dn, m + dm) {
                    g.model.add_arrow_idx(agent, w, v);
                }
            }
            let cell = g.table.cell(n, m).expect("in window");
            g.model
                .set_atom(w, atom(voc.symbol_name(cell.symbol)), true);
            g.model.set_atom(w, atom(voc.state_name(cell.state)), true);
            if let Some(h) = head {
                let which = match h.cmp(&n) {
                    std::cmp::Ordering::Equal => "pos",
                    std::cmp::Ordering::Greater => "lpos",
                    std::cmp::Ordering::Less => "rpos",
                };
                g.model.set_atom(w, atom(which.into()), true);
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjunctResult {
    pub name: String,
    pub margin: u64,
    pub worlds_checked: usize,
    pub pass: bool,
    /// First failing world in `(n, m)` order.
    pub counterexample: Option<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub entries: Vec<ConjunctResult>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConjunctResult> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn entry(&self, name: &str) -> Option<&ConjunctResult> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match e.counterexample {
                None => out.push_str(&format!("CONJUNCT {} PASS\n", e.name)),
                Some((n, m)) => out.push_str(&format!("CONJUNCT {} FAIL world {n},{m}\n", e.name)),
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Checks of the modal-depth-bounded content of the run encoding: the run
/// sanity and transition conjuncts at depth-two interiors, plus `no_other` and
/// each direction's `<x>T` one step in.
pub fn verification_targets(tm: &TuringMachine, voc: &EncodingVocabulary) -> Vec<(Named, u64)> {
    let mut out: Vec<(Named, u64)> = sane_conjuncts(tm, voc)
        .into_iter()
        .chain(transition_conjuncts(tm, voc))
        .map(|n| (n, DEEP_MARGIN))
        .collect();
    if let Some(no_other) = grid_conjuncts(voc)
        .into_iter()
        .find(|n| n.name == "no_other")
    {
        out.push((no_other, SHALLOW_MARGIN));
    }
    for x in directions() {
        out.push((
            Named {
                name: format!("direction_{x}"),
                formula: Formula::diamond(x, Formula::Top),
            },
            SHALLOW_MARGIN,
        ));
    }
    out
}

pub fn verify_run_encoding(tm: &TuringMachine, voc: &EncodingVocabulary, g: &GridWindow) -> Report {
    let cfg = EvalConfig::default();
    let entries = verification_targets(tm, voc)
        .into_iter()
        .map(|(target, margin)| {
            let ext = extension(g.model(), &target.formula, &cfg)
                .expect("verification formulas use the grid vocabulary");
            let worlds = g.interior_worlds(margin);
            let counterexample = worlds
                .iter()
                .copied()
                .find(|&(n, m)| ext[g.world(n, m).expect("interior world")] != Truth::True);
            ConjunctResult {
                name: target.name,
                margin,
                worlds_checked: worlds.len(),
                pass: counterexample.is_none(),
                counterexample,
            }
        })
        .collect();
    Report { entries }
}

/// The state name a world carries, read back from the valuation.
pub fn state_at(g: &GridWindow, voc: &EncodingVocabulary, n: i64, m: i64) -> Option<StateRef> {
    voc.all_states()
        .into_iter()
        .find(|&s| g.holds(n, m, &voc.state_name(s)))
}
