//! Deterministic single-tape Turing machines and their runs.
//!
//! A run starts on a tape filled with the first alphabet symbol, in the
//! initial state, with the head at position 0. Rows with negative time are
//! filled with the blank symbol and the dummy state `s_void`, head absent.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::is_identifier;

/// Name of the dummy state adjoined for negative times.
pub const VOID_STATE: &str = "s_void";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TmError {
    #[error("malformed machine document: {0}")]
    Document(String),
    #[error("the alphabet is empty")]
    EmptyAlphabet,
    #[error("a machine needs an initial and a halting state")]
    MissingStates,
    #[error("{0:?} is not a valid symbol or state name")]
    BadName(String),
    #[error("{0:?} is listed twice")]
    Duplicate(String),
    #[error("state name {VOID_STATE:?} is reserved")]
    ReservedState,
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("more than one rule for state {state:?} reading {symbol:?}")]
    DuplicateRule { state: String, symbol: String },
    #[error("transition function is not total: no rule for state {state:?} reading {symbol:?}")]
    MissingRule { state: String, symbol: String },
    #[error("the initial and halting states must differ")]
    InitialIsHalt,
    #[error("move must be one of L, N, R; got {0:?}")]
    BadMove(String),
    #[error("empty or inverted window")]
    BadWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Remain,
    Right,
}

impl Move {
    pub fn offset(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Remain => 0,
            Move::Right => 1,
        }
    }

    fn code(self) -> &'static str {
        match self {
            Move::Left => "L",
            Move::Remain => "N",
            Move::Right => "R",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub write: usize,
    pub next: usize,
    pub movement: Move,
}

/// Things that are legal but violate the conventions the grid encoding
/// relies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TmWarning {
    InitialReoccurs { state: String, symbol: String },
}

impl fmt::Display for TmWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TmWarning::InitialReoccurs { state, symbol } => write!(
                f,
                "rule for state {state:?} reading {symbol:?} re-enters the initial state"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub state: String,
    pub read: String,
    pub write: String,
    pub next: String,
    #[serde(rename = "move")]
    pub movement: String,
}

/// JSON form of a machine. The first alphabet entry is the blank symbol.
/// `initial` and `halt` default to the first and second listed states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TmDoc {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub delta: Vec<RuleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halt: Option<String>,
}

/// A machine `(alphabet, states, delta)` with total `delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: usize,
    halt: usize,
    // indexed by state * |alphabet| + symbol
    delta: Vec<Transition>,
}

fn check_names(names: &[String]) -> Result<HashMap<&str, usize>, TmError> {
    let mut index = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if !is_identifier(n) {
            return Err(TmError::BadName(n.clone()));
        }
        if index.insert(n.as_str(), i).is_some() {
            return Err(TmError::Duplicate(n.clone()));
        }
    }
    Ok(index)
}

impl TuringMachine {
    /// Builds a machine from a rule table given as `(state, symbol) -> transition`.
    pub fn new(
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: usize,
        halt: usize,
        rules: impl Fn(usize, usize) -> Transition,
    ) -> Result<Self, TmError> {
        let doc = TmDoc {
            delta: (0..states.len())
                .flat_map(|s| (0..alphabet.len()).map(move |a| (s, a)))
                .map(|(s, a)| {
                    let t = rules(s, a);
                    RuleDoc {
                        state: states[s].clone(),
                        read: alphabet[a].clone(),
                        write: alphabet[t.write].clone(),
                        next: states[t.next].clone(),
                        movement: t.movement.code().into(),
                    }
                })
                .collect(),
            initial: states.get(initial).cloned(),
            halt: states.get(halt).cloned(),
            alphabet,
            states,
        };
        Self::from_doc(&doc)
    }

    pub fn from_doc(doc: &TmDoc) -> Result<Self, TmError> {
        if doc.alphabet.is_empty() {
            return Err(TmError::EmptyAlphabet);
        }
        let syms = check_names(&doc.alphabet)?;
        let sts = check_names(&doc.states)?;
        if sts.contains_key(VOID_STATE) {
            return Err(TmError::ReservedState);
        }
        let lookup_state = |name: &str| {
            sts.get(name)
                .copied()
                .ok_or_else(|| TmError::UnknownState(name.to_owned()))
        };
        let lookup_symbol = |name: &str| {
            syms.get(name)
                .copied()
                .ok_or_else(|| TmError::UnknownSymbol(name.to_owned()))
        };
        let initial = match &doc.initial {
            Some(s) => lookup_state(s)?,
            None if !doc.states.is_empty() => 0,
            None => return Err(TmError::MissingStates),
        };
        let halt = match &doc.halt {
            Some(s) => lookup_state(s)?,
            None if doc.states.len() >= 2 => 1,
            None => return Err(TmError::MissingStates),
        };
        if initial == halt {
            return Err(TmError::InitialIsHalt);
        }

        let width = doc.alphabet.len();
        let mut table: Vec<Option<Transition>> = vec![None; doc.states.len() * width];
        for r in &doc.delta {
            let s = lookup_state(&r.state)?;
            let a = lookup_symbol(&r.read)?;
            let movement = match r.movement.as_str() {
                "L" => Move::Left,
                "N" => Move::Remain,
                "R" => Move::Right,
                other => return Err(TmError::BadMove(other.to_owned())),
            };
            let t = Transition {
                write: lookup_symbol(&r.write)?,
                next: lookup_state(&r.next)?,
                movement,
            };
            let slot = &mut table[s * width + a];
            if slot.is_some() {
                return Err(TmError::DuplicateRule {
                    state: r.state.clone(),
                    symbol: r.read.clone(),
                });
            }
            *slot = Some(t);
        }
        let delta = table
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                t.ok_or_else(|| TmError::MissingRule {
                    state: doc.states[i / width].clone(),
                    symbol: doc.alphabet[i % width].clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            alphabet: doc.alphabet.clone(),
            states: doc.states.clone(),
            initial,
            halt,
            delta,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, TmError> {
        let doc: TmDoc =
            serde_json::from_str(text).map_err(|e| TmError::Document(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Index of the blank symbol, always 0.
    pub fn blank(&self) -> usize {
        0
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn halt(&self) -> usize {
        self.halt
    }

    pub fn delta(&self, state: usize, symbol: usize) -> Transition {
        self.delta[state * self.alphabet.len() + symbol]
    }

    /// All rules as `(state, symbol, transition)`, states major.
    pub fn rules(&self) -> impl Iterator<Item = (usize, usize, Transition)> + '_ {
        (0..self.states.len())
            .flat_map(move |s| (0..self.alphabet.len()).map(move |a| (s, a, self.delta(s, a))))
    }

    pub fn warnings(&self) -> Vec<TmWarning> {
        self.rules()
            .filter(|(_, _, t)| t.next == self.initial)
            .map(|(s, a, _)| TmWarning::InitialReoccurs {
                state: self.states[s].clone(),
                symbol: self.alphabet[a].clone(),
            })
            .collect()
    }

    pub fn state_name(&self, s: StateRef) -> &str {
        match s {
            StateRef::Machine(i) => &self.states[i],
            StateRef::Void => VOID_STATE,
        }
    }
}

/// A machine configuration during a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub time: u64,
    pub state: usize,
    pub head: i64,
    tape: HashMap<i64, usize>,
}

impl Configuration {
    pub fn symbol_at(&self, n: i64) -> usize {
        self.tape.get(&n).copied().unwrap_or(0)
    }
}

/// Iterator over the configurations of a run, starting at time 0. Never ends:
/// the machine keeps stepping after reaching the halting state.
pub struct Execution<'t> {
    machine: &'t TuringMachine,
    current: Configuration,
}

impl<'t> Execution<'t> {
    pub fn new(machine: &'t TuringMachine) -> Self {
        Self {
            machine,
            current: Configuration {
                time: 0,
                state: machine.initial,
                head: 0,
                tape: HashMap::new(),
            },
        }
    }
}

impl Iterator for Execution<'_> {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        let out = self.current.clone();
        let c = &mut self.current;
        let t = self.machine.delta(c.state, c.symbol_at(c.head));
        if t.write == 0 {
            c.tape.remove(&c.head);
        } else {
            c.tape.insert(c.head, t.write);
        }
        c.state = t.next;
        c.head += t.movement.offset();
        c.time += 1;
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateRef {
    Machine(usize),
    Void,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub symbol: usize,
    pub state: StateRef,
    pub head: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Row {
    state: StateRef,
    head: Option<i64>,
    symbols: Vec<usize>,
}

/// A finite window of the run, `n` for tape position and `m` for time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTable {
    n_range: RangeInclusive<i64>,
    m_range: RangeInclusive<i64>,
    rows: Vec<Row>,
}

impl RunTable {
    pub fn n_range(&self) -> RangeInclusive<i64> {
        self.n_range.clone()
    }

    pub fn m_range(&self) -> RangeInclusive<i64> {
        self.m_range.clone()
    }

    fn row(&self, m: i64) -> Option<&Row> {
        if !self.m_range.contains(&m) {
            return None;
        }
        self.rows.get((m - self.m_range.start()) as usize)
    }

    pub fn cell(&self, n: i64, m: i64) -> Option<Cell> {
        if !self.n_range.contains(&n) {
            return None;
        }
        let row = self.row(m)?;
        Some(Cell {
            symbol: row.symbols[(n - self.n_range.start()) as usize],
            state: row.state,
            head: row.head == Some(n),
        })
    }

    /// The true head position at time `m`, which may lie outside the window.
    pub fn head_position(&self, m: i64) -> Option<i64> {
        self.row(m)?.head
    }

    pub fn state(&self, m: i64) -> Option<StateRef> {
        self.row(m).map(|r| r.state)
    }

    /// Renders rows as `symbol/state/head` triples, latest time first.
    pub fn render(&self, tm: &TuringMachine) -> String {
        let mut out = String::new();
        for m in self.m_range.clone().rev() {
            out.push_str(&format!("{m:>4} |"));
            for n in self.n_range.clone() {
                let c = self.cell(n, m).expect("in window");
                out.push_str(&format!(
                    " {}/{}/{}",
                    tm.alphabet()[c.symbol],
                    tm.state_name(c.state),
                    u8::from(c.head)
                ));
            }
            out.push('\n');
        }
        out
    }
}

/// Computes the run on the window `n_range x m_range`. The tape is stored
/// sparsely, so cells in the window are exact wherever the head wanders.
pub fn run(
    tm: &TuringMachine,
    n_range: RangeInclusive<i64>,
    m_range: RangeInclusive<i64>,
) -> Result<RunTable, TmError> {
    if n_range.is_empty() || m_range.is_empty() || *m_range.end() < 0 {
        return Err(TmError::BadWindow);
    }
    let width = (n_range.end() - n_range.start() + 1) as usize;
    let mut rows = Vec::new();
    for _ in *m_range.start()..0.min(*m_range.end() + 1) {
        rows.push(Row {
            state: StateRef::Void,
            head: None,
            symbols: vec![tm.blank(); width],
        });
    }
    let first = (*m_range.start()).max(0) as u64;
    let last = *m_range.end() as u64;
    for c in Execution::new(tm)
        .skip(first as usize)
        .take((last - first + 1) as usize)
    {
        rows.push(Row {
            state: StateRef::Machine(c.state),
            head: Some(c.head),
            symbols: n_range.clone().map(|n| c.symbol_at(n)).collect(),
        });
    }
    Ok(RunTable {
        n_range,
        m_range,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaltResult {
    /// The halting state first appears at this time.
    Halts(u64),
    /// Not reached within the bound. Not a proof of non-halting.
    NoHaltWithinBound(u64),
}

pub fn halts_within(tm: &TuringMachine, steps: u64) -> HaltResult {
    Execution::new(tm)
        .take_while(|c| c.time <= steps)
        .find(|c| c.state == tm.halt)
        .map_or(HaltResult::NoHaltWithinBound(steps), |c| {
            HaltResult::Halts(c.time)
        })
}

/// Symbol counts on the tape at time `m`, for diagnostics.
pub fn tape_summary(tm: &TuringMachine, m: u64) -> BTreeMap<String, usize> {
    let c = Execution::new(tm).nth(m as usize).expect("runs never end");
    let mut counts = BTreeMap::new();
    for &s in c.tape.values() {
        *counts.entry(tm.alphabet[s].clone()).or_insert(0) += 1;
    }
    counts
}
