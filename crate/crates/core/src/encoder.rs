//! Compiles a Turing machine into the formula describing its run on the
//! `Z x Z` grid, and into the two halting reduction formulas.
//!
//! Atoms are namespaced: symbol `x` becomes `sym_x`, state `s` becomes `st_s`,
//! so tape symbols and states may share names.

use crate::syntax::{Agent, Atom, Formula, SyntaxError};
use crate::turing::{Move, StateRef, TuringMachine, VOID_STATE};

pub const AGENT_REF: &str = "a";
pub const LEFT: &str = "left";
pub const RIGHT: &str = "right";
pub const UP: &str = "up";
pub const DOWN: &str = "down";

fn agent(name: &str) -> Agent {
    Agent::new(name).expect("fixed agent names are identifiers")
}

fn atom(name: String) -> Formula {
    Formula::Atom(Atom::new(name).expect("namespaced names are identifiers"))
}

/// The four grid directions.
pub fn directions() -> [Agent; 4] {
    [LEFT, RIGHT, UP, DOWN].map(agent)
}

/// Pairs of opposite directions.
pub fn inverse_pairs() -> [(Agent, Agent); 4] {
    [(LEFT, RIGHT), (RIGHT, LEFT), (UP, DOWN), (DOWN, UP)].map(|(x, y)| (agent(x), agent(y)))
}

/// Pairs of perpendicular directions, vertical-first then horizontal-first.
pub fn commuting_pairs() -> [(Agent, Agent); 8] {
    [
        (UP, LEFT),
        (UP, RIGHT),
        (DOWN, LEFT),
        (DOWN, RIGHT),
        (LEFT, UP),
        (LEFT, DOWN),
        (RIGHT, UP),
        (RIGHT, DOWN),
    ]
    .map(|(x, y)| (agent(x), agent(y)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingVocabulary {
    symbols: Vec<String>,
    states: Vec<String>,
    extra_agents: Vec<Agent>,
    no_other: bool,
}

impl EncodingVocabulary {
    pub fn new(tm: &TuringMachine) -> Self {
        Self {
            symbols: tm.alphabet().to_vec(),
            states: tm.states().to_vec(),
            extra_agents: Vec::new(),
            no_other: true,
        }
    }

    /// Adds agents outside the grid vocabulary. They only appear in `no_other`.
    pub fn with_extra_agents(
        mut self,
        names: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self, SyntaxError> {
        for n in names {
            let a = Agent::new(n)?;
            if self.agents().contains(&a) {
                return Err(SyntaxError::BadIdentifier(a.to_string()));
            }
            self.extra_agents.push(a);
        }
        Ok(self)
    }

    /// Whether `no_other` is part of the grid formula.
    pub fn with_no_other(mut self, on: bool) -> Self {
        self.no_other = on;
        self
    }

    pub fn includes_no_other(&self) -> bool {
        self.no_other
    }

    /// All agents: `a`, the four directions, then any extras.
    pub fn agents(&self) -> Vec<Agent> {
        let mut out = vec![agent(AGENT_REF)];
        out.extend(directions());
        out.extend(self.extra_agents.iter().cloned());
        out
    }

    pub fn extra_agents(&self) -> &[Agent] {
        &self.extra_agents
    }

    pub fn symbol_name(&self, symbol: usize) -> String {
        format!("sym_{}", self.symbols[symbol])
    }

    pub fn state_name(&self, state: StateRef) -> String {
        match state {
            StateRef::Machine(i) => format!("st_{}", self.states[i]),
            StateRef::Void => format!("st_{VOID_STATE}"),
        }
    }

    pub fn symbol(&self, symbol: usize) -> Formula {
        atom(self.symbol_name(symbol))
    }

    pub fn state(&self, state: StateRef) -> Formula {
        atom(self.state_name(state))
    }

    pub fn pos(&self) -> Formula {
        atom("pos".into())
    }

    pub fn lpos(&self) -> Formula {
        atom("lpos".into())
    }

    pub fn rpos(&self) -> Formula {
        atom("rpos".into())
    }

    /// Machine states followed by the void state.
    pub fn all_states(&self) -> Vec<StateRef> {
        (0..self.states.len())
            .map(StateRef::Machine)
            .chain([StateRef::Void])
            .collect()
    }

    pub fn atom_names(&self) -> Vec<String> {
        let mut out: Vec<String> = (0..self.symbols.len())
            .map(|i| self.symbol_name(i))
            .collect();
        out.extend(self.all_states().into_iter().map(|s| self.state_name(s)));
        out.extend(["pos", "lpos", "rpos"].map(String::from));
        out
    }
}

/// A conjunct of an encoding formula, with its conventional name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Named {
    pub name: String,
    pub formula: Formula,
}

fn named(name: &str, formula: Formula) -> Named {
    Named {
        name: name.to_owned(),
        formula,
    }
}

fn dia_top(x: &Agent) -> Formula {
    Formula::diamond(x.clone(), Formula::Top)
}

fn dia_a() -> Formula {
    dia_top(&agent(AGENT_REF))
}

/// `ref_a`, `no_other` (if enabled), `direction`, `inverse`, `commute`.
pub fn grid_conjuncts(voc: &EncodingVocabulary) -> Vec<Named> {
    let a = agent(AGENT_REF);
    let ref_a = dia_a().and(Formula::arbitrary(Formula::boxed(a, dia_a())));
    let no_other = Formula::conjunction(
        voc.extra_agents
            .iter()
            .map(|x| Formula::boxed(x.clone(), Formula::bottom())),
    );
    let direction = Formula::conjunction(directions().iter().map(|x| {
        dia_top(x).and(Formula::arbitrary(
            Formula::diamond(x.clone(), dia_a()).implies(Formula::boxed(x.clone(), dia_a())),
        ))
    }));
    let inverse = Formula::arbitrary(
        dia_a().implies(Formula::conjunction(
            inverse_pairs()
                .into_iter()
                .map(|(x, y)| Formula::boxed(x, Formula::boxed(y, dia_a()))),
        )),
    );
    let commute = Formula::arbitrary(Formula::conjunction(commuting_pairs().into_iter().map(
        |(x, y)| {
            Formula::diamond(x.clone(), Formula::diamond(y.clone(), dia_a()))
                .implies(Formula::boxed(y, Formula::boxed(x, dia_a())))
        },
    )));

    let mut out = vec![named("ref_a", ref_a)];
    if voc.no_other {
        out.push(named("no_other", no_other));
    }
    out.push(named("direction", direction));
    out.push(named("inverse", inverse));
    out.push(named("commute", commute));
    out
}

/// "Exactly one of" over the given atoms.
fn exactly_one(items: &[Formula]) -> Formula {
    Formula::disjunction(items.iter().enumerate().map(|(i, x)| {
        x.clone().and(Formula::conjunction(
            items
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, y)| y.clone().not()),
        ))
    }))
}

pub fn sane_conjuncts(tm: &TuringMachine, voc: &EncodingVocabulary) -> Vec<Named> {
    let (pos, lpos, rpos) = (voc.pos(), voc.lpos(), voc.rpos());
    let states: Vec<Formula> = voc.all_states().into_iter().map(|s| voc.state(s)).collect();
    let symbols: Vec<Formula> = (0..tm.alphabet().len()).map(|i| voc.symbol(i)).collect();
    let s0 = voc.state(StateRef::Machine(tm.initial()));
    let void = voc.state(StateRef::Void);

    let position_1 = Formula::conjunction([
        pos.clone().and(lpos.clone()).not(),
        pos.clone().and(rpos.clone()).not(),
        rpos.clone().and(lpos.clone()).not(),
    ]);
    let position_2 = pos
        .clone()
        .or(rpos.clone())
        .implies(Formula::boxed(agent(RIGHT), rpos))
        .and(
            pos.clone()
                .or(lpos.clone())
                .implies(Formula::boxed(agent(LEFT), lpos)),
        );
    let same_state = Formula::conjunction(states.iter().map(|s| {
        s.clone().implies(
            Formula::boxed(agent(LEFT), s.clone()).and(Formula::boxed(agent(RIGHT), s.clone())),
        )
    }));
    let void_state = s0
        .clone()
        .or(void.clone())
        .implies(Formula::boxed(agent(DOWN), void));
    let initial_symbol = s0.implies(voc.symbol(tm.blank()));
    let unchanged = Formula::conjunction(symbols.iter().map(|x| {
        pos.clone()
            .not()
            .and(x.clone())
            .implies(Formula::boxed(agent(UP), x.clone()))
    }));

    vec![
        named("position_1", position_1),
        named("position_2", position_2),
        named("one_state", exactly_one(&states)),
        named("same_state", same_state),
        named("one_symbol", exactly_one(&symbols)),
        named("void_state", void_state),
        named("initial_symbol", initial_symbol),
        named("unchanged", unchanged),
    ]
}

fn head_at(voc: &EncodingVocabulary, state: usize, symbol: usize) -> Formula {
    Formula::conjunction([
        voc.pos(),
        voc.state(StateRef::Machine(state)),
        voc.symbol(symbol),
    ])
}

/// `position_change`, `state_change`, `symbol_change`: one implication per
/// rule in each.
pub fn transition_conjuncts(tm: &TuringMachine, voc: &EncodingVocabulary) -> Vec<Named> {
    let up = |f: Formula| Formula::boxed(agent(UP), f);

    let mut moves = Vec::new();
    for (dir, target) in [
        (Move::Left, up(Formula::boxed(agent(LEFT), voc.pos()))),
        (Move::Right, up(Formula::boxed(agent(RIGHT), voc.pos()))),
        (Move::Remain, up(voc.pos())),
    ] {
        moves.extend(
            tm.rules()
                .filter(|(_, _, t)| t.movement == dir)
                .map(|(s, a, _)| head_at(voc, s, a).implies(target.clone())),
        );
    }

    let mut states = Vec::new();
    for next in 0..tm.states().len() {
        states.extend(
            tm.rules()
                .filter(|(_, _, t)| t.next == next)
                .map(|(s, a, _)| {
                    head_at(voc, s, a).implies(up(voc.state(StateRef::Machine(next))))
                }),
        );
    }

    let mut symbols = Vec::new();
    for written in 0..tm.alphabet().len() {
        symbols.extend(
            tm.rules()
                .filter(|(_, _, t)| t.write == written)
                .map(|(s, a, _)| head_at(voc, s, a).implies(up(voc.symbol(written)))),
        );
    }

    vec![
        named("position_change", Formula::conjunction(moves)),
        named("state_change", Formula::conjunction(states)),
        named("symbol_change", Formula::conjunction(symbols)),
    ]
}

fn join(parts: Vec<Named>) -> Formula {
    Formula::conjunction(parts.into_iter().map(|n| n.formula))
}

pub fn encode_grid(voc: &EncodingVocabulary) -> Formula {
    join(grid_conjuncts(voc))
}

pub fn encode_sane(tm: &TuringMachine, voc: &EncodingVocabulary) -> Formula {
    join(sane_conjuncts(tm, voc))
}

pub fn encode_transitions(tm: &TuringMachine, voc: &EncodingVocabulary) -> Formula {
    join(transition_conjuncts(tm, voc))
}

/// `C grid & C sane & C transitions & s0 & pos`.
pub fn encode_phi(tm: &TuringMachine, voc: &EncodingVocabulary) -> Formula {
    Formula::conjunction([
        Formula::common(encode_grid(voc)),
        Formula::common(encode_sane(tm, voc)),
        Formula::common(encode_transitions(tm, voc)),
        voc.state(StateRef::Machine(tm.initial())),
        voc.pos(),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// Valid iff the machine never halts.
    NonHalting,
    /// Valid iff the machine halts.
    Halting,
}

pub fn reduction_formula(
    tm: &TuringMachine,
    voc: &EncodingVocabulary,
    variant: Reduction,
) -> Formula {
    let never_end = Formula::common(voc.state(StateRef::Machine(tm.halt())).not());
    let consequent = match variant {
        Reduction::NonHalting => never_end,
        Reduction::Halting => never_end.not(),
    };
    encode_phi(tm, voc).implies(consequent)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FormulaStats {
    pub nodes: usize,
    pub depth: usize,
    pub top_level_conjuncts: usize,
    pub atoms: usize,
    pub agents: usize,
}

pub fn stats(f: &Formula) -> FormulaStats {
    FormulaStats {
        nodes: f.node_count(),
        depth: f.depth(),
        top_level_conjuncts: f.conjuncts().len(),
        atoms: f.atoms().len(),
        agents: f.agents().len(),
    }
}
