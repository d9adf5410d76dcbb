use agenda_control::gen::{random_instance, rng_from_seed, InstanceShape};
use agenda_control::io::{self, parse_instance, serialize_instance};
use agenda_control::reductions::{build_reduction, random_source, ReductionKind, ReductionTag, SourceBounds};
use agenda_control::solvers::{brute_force_solve_with, dispatch_solve_with, solve_ccdc_full_amendment, Caps, SolveOptions};
use agenda_control::{
    amendment_winner_via_paths, mcgarvey_election, verify_solution, winner, Agenda, Election, OrientedGraph,
    ProcedureSpec, Problem,
};
use proptest::prelude::*;
use proptest::sample::subsequence;

const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Election over the first `m` names plus a random agenda over it.
fn election_and_agenda() -> impl Strategy<Value = (Election, Vec<String>)> {
    (1usize..=6)
        .prop_flat_map(|m| {
            let base: Vec<String> = NAMES[..m].iter().map(|s| s.to_string()).collect();
            let vote = Just(base.clone()).prop_shuffle();
            (prop::collection::vec((vote, 1u64..=2), 1..=5), Just(base).prop_shuffle())
        })
        .prop_map(|(votes, agenda)| {
            let mut cands = agenda.clone();
            cands.sort();
            (Election::new(&cands, &votes).unwrap(), agenda)
        })
}

fn spec_strategy(m: usize) -> impl Strategy<Value = ProcedureSpec> {
    let top = m.max(2);
    prop_oneof![
        Just(ProcedureSpec::Successive),
        (1..top).prop_map(|h| ProcedureSpec::absolute(h).unwrap()),
        (1..top).prop_map(|d| ProcedureSpec::relative(d).unwrap()),
    ]
}

fn with_spec() -> impl Strategy<Value = (Election, Vec<String>, ProcedureSpec)> {
    election_and_agenda().prop_flat_map(|(e, a)| {
        let m = a.len();
        (Just(e), Just(a), spec_strategy(m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn head_wins_iff_condorcet((e, agenda) in election_and_agenda(), h in 1usize..6) {
        let w = winner(&e, &Agenda::new(&agenda).unwrap(), ProcedureSpec::absolute(h).unwrap()).unwrap().0;
        let cw = e.condorcet_winner().unwrap();
        prop_assert_eq!(w == agenda[0], cw.as_deref() == Some(agenda[0].as_str()));
    }

    #[test]
    fn winner_is_condorcet_among_its_successors((e, agenda, spec) in with_spec()) {
        let w = winner(&e, &Agenda::new(&agenda).unwrap(), spec).unwrap().0;
        let at = agenda.iter().position(|c| *c == w).unwrap();
        let sub = e.restrict(&agenda[at..]).unwrap();
        prop_assert_eq!(sub.condorcet_winner().unwrap(), Some(w));
    }

    #[test]
    fn full_amendment_dominates((e, agenda) in election_and_agenda()) {
        let ag = Agenda::new(&agenda).unwrap();
        let f = winner(&e, &ag, ProcedureSpec::FULL).unwrap().0;
        for spec in [ProcedureSpec::AMENDMENT, ProcedureSpec::Successive] {
            let w = winner(&e, &ag, spec).unwrap().0;
            prop_assert!(f == w || e.beats(&f, &w).unwrap());
            prop_assert!(ag.position(&f) <= ag.position(&w));
        }
    }

    #[test]
    fn last_condorcet_winner_wins_successive((e, agenda) in election_and_agenda()) {
        if e.condorcet_winner().unwrap().as_deref() == agenda.last().map(String::as_str) {
            let w = winner(&e, &Agenda::new(&agenda).unwrap(), ProcedureSpec::Successive).unwrap().0;
            prop_assert_eq!(Some(&w), agenda.last());
        }
    }

    #[test]
    fn paths_agree_with_rounds((e, agenda) in election_and_agenda()) {
        let ag = Agenda::new(&agenda).unwrap();
        let w = winner(&e, &ag, ProcedureSpec::AMENDMENT).unwrap().0;
        for c in e.candidates() {
            prop_assert_eq!(amendment_winner_via_paths(&e, &ag, c).unwrap(), *c == w);
        }
    }

    #[test]
    fn trace_partitions_the_losers((e, agenda, spec) in with_spec()) {
        let (w, t) = winner(&e, &Agenda::new(&agenda).unwrap(), spec).unwrap();
        let mut out: Vec<String> = t.rounds.iter().flat_map(|(_, gone)| gone.clone()).collect();
        out.sort();
        let mut losers: Vec<String> = agenda.iter().filter(|c| **c != w).cloned().collect();
        losers.sort();
        prop_assert_eq!(out, losers);
        prop_assert_eq!(t.winner, w);
    }

    #[test]
    fn mcgarvey_round_trips(n in 1usize..=6, arcs in subsequence((0..15usize).collect::<Vec<_>>(), 0..=15), flips in any::<u16>()) {
        let names: Vec<String> = NAMES[..n].iter().map(|s| s.to_string()).collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let chosen: Vec<(usize, usize)> = arcs
            .into_iter()
            .filter(|&i| i < pairs.len())
            .map(|i| if flips >> i & 1 == 1 { (pairs[i].1, pairs[i].0) } else { pairs[i] })
            .collect();
        let g = OrientedGraph::from_indices(names, &chosen).unwrap();
        let back = OrientedGraph::majority_graph(&mcgarvey_election(&g).unwrap());
        prop_assert_eq!(back.arcs(), g.arcs());
    }
}

fn random_control(seed: u64, problem: Problem, spec: ProcedureSpec) -> agenda_control::ControlInstance {
    let mut rng = rng_from_seed(seed);
    let m = 2 + (seed % 5) as usize;
    let mut shape = InstanceShape::new(problem, spec, m, 1 + (seed % 4) as usize);
    shape.max_budget = 2;
    random_instance(&mut rng, &shape).unwrap()
}

fn problem_strategy() -> impl Strategy<Value = Problem> {
    prop::sample::select(Problem::STANDARD.to_vec())
}

fn control_spec() -> impl Strategy<Value = ProcedureSpec> {
    prop_oneof![
        Just(ProcedureSpec::Successive),
        (1usize..=2).prop_map(|h| ProcedureSpec::absolute(h).unwrap()),
        (1usize..=2).prop_map(|d| ProcedureSpec::relative(d).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_instances_are_valid(seed in any::<u64>(), problem in problem_strategy(), spec in control_spec()) {
        let inst = random_control(seed, problem, spec);
        let text = serialize_instance(&inst);
        prop_assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn dispatch_is_sound_and_matches_oracle(seed in any::<u64>(), problem in problem_strategy(), spec in control_spec()) {
        let inst = random_control(seed, problem, spec);
        let s = dispatch_solve_with(&inst, SolveOptions::default()).unwrap();
        prop_assert!(verify_solution(&inst, &s).is_ok());
        let b = brute_force_solve_with(&inst, Caps::default(), 1).unwrap();
        prop_assert_eq!(s.decision, b.decision);
        if let (true, Some(w), Some(o)) = (s.minimal, &s.witness, &b.witness) {
            prop_assert_eq!(w.size(), o.size());
        }
    }

    #[test]
    fn constructive_budgets_are_monotone(seed in any::<u64>(), problem in prop::sample::select(vec![Problem::Ccav, Problem::Ccdv, Problem::Ccac, Problem::Ccdc]), spec in control_spec()) {
        let inst = random_control(seed, problem, spec);
        let k = inst.budgets().total();
        let more = inst.with_budgets(agenda_control::Budgets::for_problem(problem, k + 1)).unwrap();
        let at_k = brute_force_solve_with(&inst, Caps::default(), 1).unwrap().decision;
        let at_k1 = brute_force_solve_with(&more, Caps::default(), 1).unwrap().decision;
        prop_assert!(!at_k || at_k1);
    }

    #[test]
    fn parallel_oracle_is_deterministic(seed in any::<u64>(), problem in problem_strategy(), spec in control_spec()) {
        let inst = random_control(seed, problem, spec);
        let one = brute_force_solve_with(&inst, Caps::default(), 1).unwrap();
        let three = brute_force_solve_with(&inst, Caps::default(), 3).unwrap();
        prop_assert_eq!(one, three);
    }

    #[test]
    fn canonicalization_is_idempotent(seed in any::<u64>(), problem in problem_strategy(), spec in control_spec()) {
        let text = serialize_instance(&random_control(seed, problem, spec));
        let once = io::canonicalize(&text).unwrap();
        prop_assert_eq!(io::canonicalize(&once).unwrap(), once.clone());
        prop_assert_eq!(once, text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn catalog_outputs_round_trip(tag in prop::sample::select(ReductionTag::ALL.to_vec()), seed in any::<u64>(), lifted in any::<bool>()) {
        let h = if lifted && tag.family() != agenda_control::reductions::TargetFamily::Successive { 2 } else { 1 };
        let kind = ReductionKind::with_h(tag, h);
        let src = random_source(&mut rng_from_seed(seed), kind, SourceBounds::default()).unwrap();
        let inst = build_reduction(kind, &src).unwrap();
        prop_assert_eq!(inst.problem(), tag.target());
        prop_assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }
}

#[test]
fn full_amendment_rules_refuse_relative_two() {
    let inst = random_control(3, Problem::Ccdc, ProcedureSpec::relative(2).unwrap());
    assert!(solve_ccdc_full_amendment(&inst).is_err());
}
