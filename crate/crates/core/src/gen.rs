//! Seeded random elections, instances and graphs for fuzzing and the CLI.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::election::Election;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Graph, GraphInstance, GraphProblem};
use crate::procedures::ProcedureSpec;
use crate::reductions::OrientedGraph;
use crate::solvers::{Budgets, ControlInstance, Goal, Problem};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a`, `b`, ... for up to 26 candidates, `c1`, `c2`, ... beyond.
pub fn candidate_names(m: usize) -> Vec<String> {
    if m <= 26 {
        (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=m).map(|i| format!("c{i}")).collect()
    }
}

fn shuffled<R: Rng>(rng: &mut R, names: &[String]) -> Vec<String> {
    let mut v = names.to_vec();
    v.shuffle(rng);
    v
}

/// `n` uniformly random votes over `m` candidates.
pub fn random_election<R: Rng>(rng: &mut R, m: usize, n: usize) -> Election {
    let names = candidate_names(m);
    let votes: Vec<(Vec<String>, u64)> = (0..n).map(|_| (shuffled(rng, &names), 1)).collect();
    Election::new(&names, &votes).expect("generated ids are valid")
}

/// Random agenda over the candidates of `election`.
pub fn random_agenda<R: Rng>(rng: &mut R, election: &Election) -> Vec<String> {
    shuffled(rng, election.candidates())
}

/// Each unordered pair gets an arc with probability `density`, oriented
/// uniformly.
pub fn random_oriented_graph<R: Rng>(rng: &mut R, vertices: usize, density: f64) -> OrientedGraph {
    let names = candidate_names(vertices);
    let mut arcs = Vec::new();
    for a in 0..vertices {
        for b in a + 1..vertices {
            if rng.gen_bool(density) {
                arcs.push(if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
            }
        }
    }
    OrientedGraph::from_indices(names, &arcs).expect("generated arcs are oriented")
}

/// Shape of a random control instance.
#[derive(Debug, Clone)]
pub struct InstanceShape {
    pub problem: Problem,
    pub procedure: ProcedureSpec,
    /// `|C ∪ D|`.
    pub candidates: usize,
    /// Registered vote entries.
    pub votes: usize,
    /// Unregistered vote entries for vote-adding problems.
    pub unregistered_votes: usize,
    /// Upper bound for each budget.
    pub max_budget: usize,
    /// Agenda position of `p`, random when absent.
    pub p_position: Option<usize>,
}

impl InstanceShape {
    pub fn new(problem: Problem, procedure: ProcedureSpec, candidates: usize, votes: usize) -> Self {
        InstanceShape {
            problem,
            procedure,
            candidates,
            votes,
            unregistered_votes: votes.min(4),
            max_budget: 3,
            p_position: None,
        }
    }
}

fn random_votes<R: Rng>(rng: &mut R, names: &[String], entries: usize) -> Vec<(Vec<String>, u64)> {
    (0..entries)
        .map(|_| (shuffled(rng, names), if rng.gen_bool(0.2) { 2 } else { 1 }))
        .collect()
}

/// Random instance obeying the problem's shape rules.
pub fn random_instance<R: Rng>(rng: &mut R, shape: &InstanceShape) -> Result<ControlInstance> {
    let m = shape.candidates;
    if m < 1 {
        return Err(Error::input("need at least one candidate"));
    }
    let problem = shape.problem;
    let adds_candidates = matches!(problem, Problem::Ccac | Problem::Dcac | Problem::Multimode);
    let adds_votes = matches!(problem, Problem::Ccav | Problem::Dcav | Problem::Multimode);
    let names = candidate_names(m);
    let agenda = shuffled(rng, &names);
    let p_pos = match shape.p_position {
        Some(i) if i < m => i,
        Some(_) => return Err(Error::input("p position outside the agenda")),
        None => rng.gen_range(0..m),
    };
    let p = agenda[p_pos].clone();
    let unregistered: Vec<String> = if adds_candidates && m > 1 {
        let count = rng.gen_range(1..m);
        let mut others: Vec<String> = names.iter().filter(|c| **c != p).cloned().collect();
        others.shuffle(rng);
        others.truncate(count);
        others.sort();
        others
    } else {
        Vec::new()
    };
    let registered: Vec<String> = names.iter().filter(|c| !unregistered.contains(c)).cloned().collect();
    let mut k = || rng.gen_range(0..=shape.max_budget);
    let budgets = match problem {
        Problem::Multimode => Budgets { av: k(), dv: k(), ac: k(), dc: k() },
        other => Budgets::for_problem(other, k()),
    };
    let goal = match problem.implied_goal() {
        Some(g) => g,
        None if rng.gen_bool(0.5) => Goal::Constructive,
        None => Goal::Destructive,
    };
    let mut b = ControlInstance::builder(problem)
        .goal(goal)
        .procedure(shape.procedure)
        .candidates(&registered)
        .unregistered_candidates(&unregistered)
        .agenda(&agenda)
        .distinguished(&p)
        .budgets(budgets);
    for (order, count) in random_votes(rng, &names, shape.votes) {
        b = b.registered_vote(&order, count);
    }
    if adds_votes {
        for (order, count) in random_votes(rng, &names, shape.unregistered_votes) {
            b = b.unregistered_vote(&order, count);
        }
    }
    b.build()
}

/// Random source instance for a graph problem.
pub fn random_graph_instance<R: Rng>(
    rng: &mut R,
    problem: GraphProblem,
    max_part: usize,
    max_kappa: usize,
) -> GraphInstance {
    let kappa = rng.gen_range(1..=max_kappa.max(1));
    match problem {
        GraphProblem::Rbds | GraphProblem::Biclique => {
            let nr = rng.gen_range(1..=max_part);
            let nb = rng.gen_range(1..=max_part);
            let mut edges = Vec::new();
            for r in 0..nr {
                for bl in 0..nb {
                    if rng.gen_bool(0.45) {
                        edges.push((r, bl));
                    }
                }
            }
            if problem == GraphProblem::Rbds {
                // Reduction sources never have isolated vertices.
                for r in 0..nr {
                    if !edges.iter().any(|e| e.0 == r) {
                        edges.push((r, rng.gen_range(0..nb)));
                    }
                }
                for bl in 0..nb {
                    if !edges.iter().any(|e| e.1 == bl) {
                        edges.push((rng.gen_range(0..nr), bl));
                    }
                }
                GraphInstance::rbds(BipartiteGraph::from_indices(nr, nb, &edges), kappa)
            } else {
                GraphInstance::biclique(BipartiteGraph::from_indices(nr, nb, &edges), kappa)
            }
        }
        GraphProblem::Clique | GraphProblem::PerfectCode => {
            let n = rng.gen_range(1..=max_part);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((a, b));
                    }
                }
            }
            let g = Graph::from_indices(n, &edges);
            if problem == GraphProblem::Clique {
                GraphInstance::clique(g, kappa)
            } else {
                GraphInstance::perfect_code(g, kappa)
            }
        }
    }
}
