//! Seeded random generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use aaulc::kripke::Model;
use aaulc::syntax::{Agent, ArrowUpdate, Atom, Clause, Formula};
use aaulc::turing::{Move, Transition, TuringMachine};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn machine(name: &str) -> TuringMachine {
    TuringMachine::from_json(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

pub fn acceptance_machines() -> Vec<(&'static str, TuringMachine)> {
    ["t_halt.json", "t_loop.json", "t_mark.json"]
        .into_iter()
        .map(|n| (n, machine(n)))
        .collect()
}

pub const ATOMS: [&str; 2] = ["p", "q"];
pub const AGENTS: [&str; 3] = ["a", "b", "c"];

pub fn agent(name: &str) -> Agent {
    Agent::new(name).unwrap()
}

pub fn atom(name: &str) -> Formula {
    Formula::atom(name).unwrap()
}

pub fn random_model(
    rng: &mut impl Rng,
    max_worlds: usize,
    max_agents: usize,
    density: f64,
) -> Model {
    let n = rng.gen_range(1..=max_worlds);
    let k = rng.gen_range(1..=max_agents);
    let mut m = Model::new(
        (0..n).map(|i| format!("w{i}")),
        AGENTS[..k].iter().map(|a| agent(a)),
    )
    .unwrap();
    for w in 0..n {
        for p in ATOMS {
            if rng.gen_bool(0.5) {
                m.set_atom(w, Atom::new(p).unwrap(), true);
            }
        }
        for a in 0..k {
            for v in 0..n {
                if rng.gen_bool(density) {
                    m.add_arrow_idx(a, w, v);
                }
            }
        }
    }
    m
}

/// A random AULC formula of depth at most `depth` over [`ATOMS`] and `agents`.
pub fn random_aulc(rng: &mut impl Rng, agents: &[Agent], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..5) {
            0 => Formula::Top,
            1 => Formula::bottom(),
            _ => atom(ATOMS.choose(rng).unwrap()),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..7) {
        0 => random_aulc(rng, agents, d).not(),
        1 => random_aulc(rng, agents, d).or(random_aulc(rng, agents, d)),
        2 => random_aulc(rng, agents, d).and(random_aulc(rng, agents, d)),
        3 | 4 => Formula::boxed(
            agents.choose(rng).unwrap().clone(),
            random_aulc(rng, agents, d),
        ),
        5 => Formula::common(random_aulc(rng, agents, d)),
        _ => Formula::update(
            random_update(rng, agents, d.min(1)),
            random_aulc(rng, agents, d),
        ),
    }
}

pub fn random_update(rng: &mut impl Rng, agents: &[Agent], body_depth: usize) -> ArrowUpdate {
    let count = rng.gen_range(0..=3);
    ArrowUpdate::new(
        (0..count)
            .map(|_| {
                Clause::new(
                    random_aulc(rng, agents, body_depth),
                    agents.choose(rng).unwrap().clone(),
                    random_aulc(rng, agents, body_depth),
                )
                .unwrap()
            })
            .collect(),
    )
}

/// Total machine with 2..=max_states states and 1..=max_symbols symbols.
pub fn random_machine(rng: &mut impl Rng, max_states: usize, max_symbols: usize) -> TuringMachine {
    let states: Vec<String> = (0..rng.gen_range(2..=max_states))
        .map(|i| match i {
            0 => "s0".into(),
            1 => "s_end".into(),
            i => format!("s{i}"),
        })
        .collect();
    let symbols: Vec<String> = (0..rng.gen_range(1..=max_symbols))
        .map(|i| format!("x{i}"))
        .collect();
    let table: HashMap<(usize, usize), Transition> = (0..states.len())
        .flat_map(|s| (0..symbols.len()).map(move |a| (s, a)))
        .map(|key| {
            let t = Transition {
                write: rng.gen_range(0..symbols.len()),
                next: rng.gen_range(0..states.len()),
                movement: *[Move::Left, Move::Remain, Move::Right].choose(rng).unwrap(),
            };
            (key, t)
        })
        .collect();
    TuringMachine::new(symbols, states, 0, 1, |s, a| table[&(s, a)]).unwrap()
}

/// Largest bisimulation as a set of world pairs, by removing pairs from the
/// full same-label relation until nothing changes.
pub fn bisimulation_oracle(m: &Model) -> BTreeSet<(usize, usize)> {
    let n = m.world_count();
    let mut rel: BTreeSet<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| m.label(u) == m.label(v))
        .collect();
    loop {
        let bad: Vec<(usize, usize)> = rel
            .iter()
            .copied()
            .filter(|&(u, v)| {
                (0..m.agents().len()).any(|a| {
                    let forth = m
                        .successors(a, u)
                        .iter()
                        .all(|&x| m.successors(a, v).iter().any(|&y| rel.contains(&(x, y))));
                    let back = m
                        .successors(a, v)
                        .iter()
                        .all(|&y| m.successors(a, u).iter().any(|&x| rel.contains(&(x, y))));
                    !(forth && back)
                })
            })
            .collect();
        if bad.is_empty() {
            return rel;
        }
        for p in bad {
            rel.remove(&p);
        }
    }
}

/// Dense-tape simulation used as a second opinion on run tables. Returns,
/// per time step, the state index, head position and the tape on `lo..=hi`.
pub fn dense_run(
    tm: &TuringMachine,
    steps: usize,
    lo: i64,
    hi: i64,
) -> Vec<(usize, i64, Vec<usize>)> {
    let pad = steps as i64 + 1;
    let origin = -(lo.min(0) - pad);
    let width = (hi.max(0) + pad + origin + 1) as usize;
    let mut tape = vec![0usize; width];
    let mut head = 0i64;
    let mut state = tm.initial();
    let mut rows = Vec::new();
    for _ in 0..=steps {
        let window = (lo..=hi).map(|n| tape[(n + origin) as usize]).collect();
        rows.push((state, head, window));
        let cell = (head + origin) as usize;
        let t = tm.delta(state, tape[cell]);
        tape[cell] = t.write;
        state = t.next;
        head += match t.movement {
            Move::Left => -1,
            Move::Remain => 0,
            Move::Right => 1,
        };
    }
    rows
}

/// Disjoint union of `m` with a copy of itself; every world gets a bisimilar twin.
pub fn doubled(m: &Model) -> Model {
    let n = m.world_count();
    let names = (0..2 * n).map(|i| format!("w{i}"));
    let mut d = Model::new(names, m.agents().iter().cloned()).unwrap();
    for w in 0..n {
        for p in m.label(w) {
            d.set_atom(w, p.clone(), true);
            d.set_atom(w + n, p.clone(), true);
        }
    }
    for (a, w, v) in m.arrows() {
        d.add_arrow_idx(a, w, v);
        d.add_arrow_idx(a, w + n, v + n);
    }
    d
}
