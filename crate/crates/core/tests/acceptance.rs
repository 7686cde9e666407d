//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use aaulc::cli;
use aaulc::encoder::{encode_phi, transition_conjuncts, EncodingVocabulary};
use aaulc::gridmodel::{build_grid_model, state_at, verify_run_encoding};
use aaulc::kripke::{bisim_partition, quotient, Model};
use aaulc::semantics::{
    apply_update, check_arbitrary, eval_at, extension, EvalConfig, QuantStrategy, Truth, Verdict,
};
use aaulc::syntax::{parse_formula, parse_update, print_formula, ArrowUpdate, Formula};
use aaulc::turing::{run, StateRef, TuringMachine};
use common::*;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn truth_at(m: &Model, w: usize, f: &Formula, cfg: &EvalConfig) -> Result<Verdict, String> {
    eval_at(m, w, f, cfg).map_err(|e| e.to_string())
}

fn grid_verification() -> Outcome {
    let mut slowest = Duration::ZERO;
    for (name, tm) in acceptance_machines() {
        let start = Instant::now();
        let voc = EncodingVocabulary::new(&tm);
        let g = build_grid_model(&tm, &voc, -8..=8, -2..=12).map_err(|e| e.to_string())?;
        let report = verify_run_encoding(&tm, &voc, &g);
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        ensure(report.all_pass(), || {
            format!("{name}:\n{}", report.to_text())
        })?;
        ensure(report.entries.iter().all(|e| e.worlds_checked > 0), || {
            format!("{name}: empty interior")
        })?;
        ensure(elapsed < Duration::from_secs(5), || {
            format!("{name} took {elapsed:?}")
        })?;

        // Off-head symbol flip at cell 5, time 3.
        let mut flipped = g.clone();
        let current = g.run_table().cell(5, 3).unwrap().symbol;
        flipped.set_atom(5, 3, &voc.symbol_name(current), false);
        if tm.alphabet().len() > 1 {
            flipped.set_atom(
                5,
                3,
                &voc.symbol_name((current + 1) % tm.alphabet().len()),
                true,
            );
        }
        let r = verify_run_encoding(&tm, &voc, &flipped);
        ensure(r.entry("unchanged").is_some_and(|e| !e.pass), || {
            format!("{name}: symbol flip not caught\n{}", r.to_text())
        })?;

        // Row 2 carries a state the transition at time 1 does not produce.
        let mut corrupted = g.clone();
        let Some(StateRef::Machine(true_state)) = state_at(&g, &voc, 0, 2) else {
            return Err(format!("{name}: no machine state at time 2"));
        };
        let wrong = (1..tm.states().len())
            .map(|k| (true_state + k) % tm.states().len())
            .find(|&s| s != tm.initial())
            .unwrap_or((true_state + 1) % tm.states().len());
        for n in g.n_range() {
            corrupted.set_atom(n, 2, &voc.state_name(StateRef::Machine(true_state)), false);
            corrupted.set_atom(n, 2, &voc.state_name(StateRef::Machine(wrong)), true);
        }
        let r = verify_run_encoding(&tm, &voc, &corrupted);
        ensure(r.entry("state_change").is_some_and(|e| !e.pass), || {
            format!("{name}: corrupted transition not caught\n{}", r.to_text())
        })?;
    }
    Ok(format!(
        "3 machines, all conjuncts pass, slowest {slowest:?}; both fault injections caught"
    ))
}

fn halting_visibility() -> Outcome {
    let tm = machine("t_halt.json");
    let voc = EncodingVocabulary::new(&tm);
    let end = voc.state_name(StateRef::Machine(tm.halt()));
    let g = build_grid_model(&tm, &voc, -8..=8, -2..=12).map_err(|e| e.to_string())?;
    let hits = (0..g.model().world_count())
        .filter(|&w| g.model().holds(w, &end))
        .count();
    ensure(hits > 0, || {
        "halting machine window has no halting-state world".into()
    })?;

    let tm = machine("t_loop.json");
    let voc = EncodingVocabulary::new(&tm);
    let end = voc.state_name(StateRef::Machine(tm.halt()));
    for m_max in [0, 12, 50, 100, 200] {
        let g =
            build_grid_model(&tm, &voc, -8..=m_max + 8, -2..=m_max).map_err(|e| e.to_string())?;
        let bad = (0..g.model().world_count()).find(|&w| g.model().holds(w, &end));
        ensure(bad.is_none(), || {
            format!(
                "looping machine reaches {end} at {}",
                g.model().world_name(bad.unwrap())
            )
        })?;
    }
    Ok(format!(
        "halting window has {hits} halting worlds; looping windows up to time 200 have none"
    ))
}

fn card_example() -> Outcome {
    let cards = data("cards.json");
    let update = "[{(T,b,T),(aceSpades,a,aceSpades),(kingHearts,a,kingHearts)}]";
    let mut seen = Vec::new();
    for (world, card) in [("AS", "aceSpades"), ("KH", "kingHearts")] {
        for (agent, expected) in [("a", "TRUE"), ("b", "FALSE")] {
            let formula = format!("{update}[{agent}]{card}");
            let mut out = Vec::new();
            let mut err = Vec::new();
            let code = cli::run(
                [
                    "aaulc",
                    "check",
                    "--model",
                    cards.to_str().unwrap(),
                    "--world",
                    world,
                    "--formula",
                    &formula,
                ],
                &mut out,
                &mut err,
            );
            let printed = String::from_utf8_lossy(&out).trim().to_string();
            ensure(printed == expected, || {
                format!(
                    "{world} {agent}: got {printed:?} ({})",
                    String::from_utf8_lossy(&err)
                )
            })?;
            ensure(code == if expected == "TRUE" { 0 } else { 1 }, || {
                format!("exit code {code}")
            })?;
            seen.push(format!("{world}:[{agent}]={printed}"));
        }
    }

    // The updated relations against the definition worked out by hand.
    let m =
        Model::from_json(&std::fs::read_to_string(&cards).unwrap()).map_err(|e| e.to_string())?;
    let u = parse_update(&update[1..update.len() - 1]).map_err(|e| e.to_string())?;
    let updated = apply_update(&m, &u, &EvalConfig::default()).map_err(|e| e.to_string())?;
    let a = updated.agent_index("a").unwrap();
    let b = updated.agent_index("b").unwrap();
    let (as_, kh) = (m.world_index("AS").unwrap(), m.world_index("KH").unwrap());
    ensure(
        updated.relation(a) == BTreeSet::from([(as_, as_), (kh, kh)]),
        || "a keeps cross arrows".into(),
    )?;
    ensure(updated.relation(b) == m.relation(b), || {
        "b lost arrows".into()
    })?;
    Ok(seen.join(" "))
}

fn update_laws() -> Outcome {
    let mut rng = rng(4);
    let cfg = EvalConfig::default();
    let mut arrows_checked = 0usize;
    for i in 0..200 {
        let m = random_model(&mut rng, 6, 3, 0.35);
        let agents = m.agents().to_vec();
        let u = random_update(&mut rng, &agents, 2);
        let updated = apply_update(&m, &u, &cfg).map_err(|e| e.to_string())?;
        // Oracle: the keep condition evaluated clause by clause on the original model.
        for (a, name) in agents.iter().enumerate() {
            let kept = updated.relation(a);
            ensure(kept.is_subset(&m.relation(a)), || {
                format!("model {i}: update added arrows")
            })?;
            for (w, v) in m.relation(a) {
                let mut should_keep = false;
                for c in u.clauses().iter().filter(|c| c.agent() == name) {
                    let pre = extension(&m, c.pre(), &cfg).map_err(|e| e.to_string())?;
                    let post = extension(&m, c.post(), &cfg).map_err(|e| e.to_string())?;
                    should_keep |= pre[w] == Truth::True && post[v] == Truth::True;
                }
                ensure(kept.contains(&(w, v)) == should_keep, || {
                    format!(
                        "model {i}: arrow {a}:{w}->{v} kept={} expected={should_keep}",
                        !should_keep
                    )
                })?;
                arrows_checked += 1;
            }
        }

        let f = random_aulc(&mut rng, &agents, 4);
        let triv = Formula::update(ArrowUpdate::trivial(&agents), f.clone());
        ensure(
            extension(&m, &triv, &cfg).map_err(|e| e.to_string())?
                == extension(&m, &f, &cfg).map_err(|e| e.to_string())?,
            || format!("model {i}: trivial update changes {f}"),
        )?;

        let emptied = apply_update(&m, &ArrowUpdate::default(), &cfg).map_err(|e| e.to_string())?;
        ensure(emptied.arrow_count() == 0, || {
            format!("model {i}: empty update left arrows")
        })?;
    }
    Ok(format!(
        "200 models, {arrows_checked} arrows checked against the clause definition, 0 violations"
    ))
}

fn bisimulation() -> Outcome {
    let mut rng = rng(5);
    let cfg = EvalConfig::default();
    let mut merged = 0;
    for i in 0..200 {
        let m = random_model(&mut rng, 6, 3, 0.3);
        let m = if i % 2 == 0 {
            m
        } else {
            doubled(&m.induced(&(0..m.world_count().min(3)).collect::<Vec<_>>()))
        };
        let p = bisim_partition(&m);
        let oracle = common::bisimulation_oracle(&m);
        for u in 0..m.world_count() {
            for v in 0..m.world_count() {
                ensure(p.same_block(u, v) == oracle.contains(&(u, v)), || {
                    format!("model {i}: worlds {u},{v} disagree with the fixpoint oracle")
                })?;
            }
        }
        merged += m.world_count() - p.len();
        let q = quotient(&m, &p).map_err(|e| e.to_string())?;
        let f = random_aulc(&mut rng, m.agents(), 4);
        let on_m = extension(&m, &f, &cfg).map_err(|e| e.to_string())?;
        let on_q = extension(&q, &f, &cfg).map_err(|e| e.to_string())?;
        for w in 0..m.world_count() {
            ensure(on_m[w] == on_q[p.block_of(w)], || {
                format!("model {i}: quotient changes {f} at w{w}")
            })?;
        }
    }
    Ok(format!("200 models agree with the oracle ({merged} worlds merged); quotient preserves 200 formulas"))
}

fn exact_quantifier() -> Outcome {
    let loop1 = Model::from_json(&std::fs::read_to_string(data("loop1.json")).unwrap())
        .map_err(|e| e.to_string())?;
    let exact = EvalConfig::default();
    let bounded = EvalConfig::with_strategy(QuantStrategy::bounded(3, 2));
    let diamond = parse_formula("<a>T").unwrap();
    let box_diamond = parse_formula("[a]<a>T").unwrap();
    ensure(
        check_arbitrary(&loop1, "w", &diamond, &exact) == Ok(Verdict::False),
        || "[*]<a>T should be false".into(),
    )?;
    ensure(
        check_arbitrary(&loop1, "w", &box_diamond, &exact) == Ok(Verdict::True),
        || "[*][a]<a>T should be true".into(),
    )?;

    let mut rng = rng(6);
    let (mut models, mut refuted, mut confirmed, mut instantiations) = (0, 0, 0, 0);
    while models < 100 {
        let m = random_model(&mut rng, 5, 2, 0.3);
        if bisim_partition(&m).len() > 3 {
            continue;
        }
        models += 1;
        let f = random_aulc(&mut rng, m.agents(), 2);
        let arb = Formula::arbitrary(f.clone());
        let ex = extension(&m, &arb, &exact).map_err(|e| e.to_string())?;
        let bd = extension(&m, &arb, &bounded).map_err(|e| e.to_string())?;
        for w in 0..m.world_count() {
            ensure(ex[w] != Truth::Unknown, || {
                format!("exact undecided on {f}")
            })?;
            if bd[w] == Truth::False {
                refuted += 1;
                ensure(ex[w] == Truth::False, || {
                    format!("bounded refutes [*]{f} at w{w}, exact says true")
                })?;
            }
            if ex[w] == Truth::True {
                confirmed += 1;
                for _ in 0..100 {
                    let depth = rng.gen_range(0..=2);
                    let u = random_update(&mut rng, m.agents(), depth);
                    let inst = Formula::update(u.clone(), f.clone());
                    ensure(truth_at(&m, w, &inst, &exact)? == Verdict::True, || {
                        format!(
                            "[*]{f} true at w{w} but fails after {}",
                            Formula::update(u, Formula::Top)
                        )
                    })?;
                    instantiations += 1;
                }
            }
        }
    }
    Ok(format!(
        "loop cases match; {models} models, {refuted} bounded refutations confirmed, {confirmed} exact truths survive {instantiations} instantiations"
    ))
}

fn common_fixpoint() -> Outcome {
    let mut rng = rng(7);
    let cfg = EvalConfig::default();
    for i in 0..100 {
        let m = random_model(&mut rng, 6, 3, 0.3);
        let f = random_aulc(&mut rng, m.agents(), 3);
        let c = Formula::common(f.clone());
        let unfolded = Formula::conjunction(
            m.agents()
                .iter()
                .map(|a| Formula::boxed(a.clone(), f.clone().and(c.clone()))),
        );
        let lhs = extension(&m, &c, &cfg).map_err(|e| e.to_string())?;
        let rhs = extension(&m, &unfolded, &cfg).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || {
            format!("pair {i}: C{f} differs from its unfolding")
        })?;
    }
    Ok("100 model/formula pairs, 0 violations".into())
}

fn run_contract() -> Outcome {
    let mut rng = rng(8);
    let mut machines: Vec<(String, TuringMachine)> = acceptance_machines()
        .into_iter()
        .map(|(n, t)| (n.to_string(), t))
        .collect();
    machines.extend((0..20).map(|i| (format!("random {i}"), random_machine(&mut rng, 4, 3))));
    const STEPS: i64 = 50;
    for (name, tm) in &machines {
        let big = run(tm, -(STEPS + 5)..=STEPS + 5, -3..=STEPS).map_err(|e| e.to_string())?;
        let oracle = dense_run(tm, STEPS as usize, -(STEPS + 5), STEPS + 5);
        for m in big.m_range() {
            let cells: Vec<_> = big.n_range().map(|n| big.cell(n, m).unwrap()).collect();
            let state = cells[0].state;
            ensure(cells.iter().all(|c| c.state == state), || {
                format!("{name}: row {m} mixes states")
            })?;
            let heads: Vec<i64> = big
                .n_range()
                .filter(|&n| big.cell(n, m).unwrap().head)
                .collect();
            if m < 0 {
                ensure(
                    cells
                        .iter()
                        .all(|c| c.symbol == 0 && c.state == StateRef::Void && !c.head),
                    || format!("{name}: row {m} is not the dummy row"),
                )?;
                continue;
            }
            let (o_state, o_head, o_tape) = &oracle[m as usize];
            ensure(heads == vec![*o_head], || {
                format!("{name}: row {m} heads {heads:?}, expected {o_head}")
            })?;
            ensure(state == StateRef::Machine(*o_state), || {
                format!("{name}: row {m} state")
            })?;
            let symbols: Vec<usize> = cells.iter().map(|c| c.symbol).collect();
            ensure(&symbols == o_tape, || {
                format!("{name}: row {m} tape differs from dense simulation")
            })?;
        }
        for (n_range, m_range) in [(-3..=3, -2..=10), (0..=7, 20..=STEPS), (-20..=-10, 5..=30)] {
            let small = run(tm, n_range.clone(), m_range.clone()).map_err(|e| e.to_string())?;
            for m in m_range.clone() {
                ensure(small.head_position(m) == big.head_position(m), || {
                    format!("{name}: head at {m}")
                })?;
                for n in n_range.clone() {
                    ensure(small.cell(n, m) == big.cell(n, m), || {
                        format!("{name}: window mismatch at {n},{m}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{} machines, {STEPS} steps each, 0 violations",
        machines.len()
    ))
}

fn encoder_shape() -> Outcome {
    let tm = machine("t_mark.json");
    let voc = EncodingVocabulary::new(&tm);
    ensure(
        voc.all_states().len() == 4 && tm.alphabet().len() == 2,
        || "wrong machine shape".into(),
    )?;
    let phi = encode_phi(&tm, &voc);
    let top = phi.conjuncts().len();
    ensure(top == 5, || format!("{top} top-level conjuncts"))?;
    let implications: usize = transition_conjuncts(&tm, &voc)
        .iter()
        .flat_map(|n| n.formula.conjuncts())
        .filter(|g| g.as_implies().is_some())
        .count();
    let expected = 3 * tm.alphabet().len() * tm.states().len();
    ensure(implications == expected, || {
        format!("{implications} implications, expected {expected}")
    })?;
    let once = print_formula(&phi);
    let reparsed = parse_formula(&once).map_err(|e| e.to_string())?;
    let twice = print_formula(&reparsed);
    ensure(once == twice, || "printing is not stable".into())?;
    ensure(reparsed == phi, || {
        "parse(print(phi)) differs from phi".into()
    })?;
    Ok(format!(
        "5 conjuncts, {implications} transition implications, {} bytes round-trip",
        once.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "grid run-encoding verification with fault injection",
            grid_verification,
        ),
        (
            "halting state visible only for the halting machine",
            halting_visibility,
        ),
        ("card update semantics", card_example),
        ("arrow update laws", update_laws),
        ("bisimulation partition and quotient", bisimulation),
        (
            "exact arbitrary update quantifier soundness",
            exact_quantifier,
        ),
        ("common knowledge fixpoint law", common_fixpoint),
        ("run table contract", run_contract),
        ("encoder shape and round trip", encoder_shape),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!(
                "criterion {} PASS {name} ({detail}; {:?})",
                i + 1,
                start.elapsed()
            ),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
