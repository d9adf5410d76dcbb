//! Control instances, solutions, and the exact solvers.
//!
//! Every solver works on universe indices of a [`ControlInstance`]; names
//! only appear at the edges. [`dispatch_solve`] picks the most specific
//! algorithm and re-simulates every YES witness before returning it.

mod amendment;
mod brute;
mod context;
mod dispatch;
mod first_position;
mod full;
mod mh;
mod successive;
mod voters;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::election::{check_ids, Vote};
use crate::error::{Error, ParseCode, Result};
use crate::procedures::{trace_index, winner_index, IndexTrace, ProcedureSpec};
use crate::Profile;

pub use amendment::{solve_ccac_amendment, solve_ccdc_amendment, solve_dcac_dcdc_amendment};
pub use brute::{brute_force_solve, brute_force_solve_with, Caps};
pub use dispatch::{dispatch_solve, dispatch_solve_with, routing_table, Route, SolveOptions};
pub use first_position::solve_first_position;
pub use full::{solve_ccdc_full_amendment, solve_dcdc_full_amendment};
pub use mh::{solve_ccac_m_minus_h_fpt, solve_dcac_m_minus_h};
pub use successive::{solve_ccdc_successive_fpt, solve_dcac_successive_fpt};
pub use voters::{
    solve_ccav_ccdv_successive, solve_dcav_dcdv_h_amendment, solve_dcav_dcdv_successive,
    solve_eccev_successive, solve_edcev_h_amendment, solve_edcev_successive, solve_mgcev,
    EditChoice, ExactEditInstance, MgcevInstance,
};

/// The eight standard control problems plus multimode control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Problem {
    Ccav,
    Ccdv,
    Ccac,
    Ccdc,
    Dcav,
    Dcdv,
    Dcac,
    Dcdc,
    Multimode,
}

impl Problem {
    pub const STANDARD: [Problem; 8] = [
        Problem::Ccav,
        Problem::Ccdv,
        Problem::Ccac,
        Problem::Ccdc,
        Problem::Dcav,
        Problem::Dcdv,
        Problem::Dcac,
        Problem::Dcdc,
    ];

    /// Goal implied by the problem name; `None` for multimode.
    pub fn implied_goal(self) -> Option<Goal> {
        match self {
            Problem::Ccav | Problem::Ccdv | Problem::Ccac | Problem::Ccdc => Some(Goal::Constructive),
            Problem::Dcav | Problem::Dcdv | Problem::Dcac | Problem::Dcdc => Some(Goal::Destructive),
            Problem::Multimode => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Ccav => "CCAV",
            Problem::Ccdv => "CCDV",
            Problem::Ccac => "CCAC",
            Problem::Ccdc => "CCDC",
            Problem::Dcav => "DCAV",
            Problem::Dcdv => "DCDV",
            Problem::Dcac => "DCAC",
            Problem::Dcdc => "DCDC",
            Problem::Multimode => "MULTIMODE",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Problem::Multimode]
            .into_iter()
            .chain(Problem::STANDARD)
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::input(format!("unknown problem `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Goal {
    Constructive,
    Destructive,
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Goal::Constructive => "constructive",
            Goal::Destructive => "destructive",
        })
    }
}

impl FromStr for Goal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constructive" => Ok(Goal::Constructive),
            "destructive" => Ok(Goal::Destructive),
            _ => Err(Error::input(format!("unknown goal `{s}`"))),
        }
    }
}

/// Edit budgets: added votes, deleted votes, added candidates, deleted candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Budgets {
    pub av: usize,
    pub dv: usize,
    pub ac: usize,
    pub dc: usize,
}

impl Budgets {
    pub fn av(k: usize) -> Self {
        Budgets { av: k, ..Self::default() }
    }

    pub fn dv(k: usize) -> Self {
        Budgets { dv: k, ..Self::default() }
    }

    pub fn ac(k: usize) -> Self {
        Budgets { ac: k, ..Self::default() }
    }

    pub fn dc(k: usize) -> Self {
        Budgets { dc: k, ..Self::default() }
    }

    /// The single budget that the named problem uses.
    pub fn for_problem(problem: Problem, k: usize) -> Self {
        match problem {
            Problem::Ccav | Problem::Dcav => Budgets::av(k),
            Problem::Ccdv | Problem::Dcdv => Budgets::dv(k),
            Problem::Ccac | Problem::Dcac => Budgets::ac(k),
            Problem::Ccdc | Problem::Dcdc => Budgets::dc(k),
            Problem::Multimode => Budgets { av: k, dv: k, ac: k, dc: k },
        }
    }

    pub fn total(&self) -> usize {
        self.av + self.dv + self.ac + self.dc
    }
}

/// A control problem instance over the universe `C ∪ D`.
///
/// Candidates are stored sorted by id; votes, agenda and witnesses use
/// indices into that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlInstance {
    problem: Problem,
    goal: Goal,
    procedure: ProcedureSpec,
    candidates: Vec<String>,
    registered: Vec<bool>,
    distinguished: usize,
    agenda: Vec<usize>,
    registered_votes: Vec<Vote>,
    unregistered_votes: Vec<Vote>,
    budgets: Budgets,
}

impl ControlInstance {
    pub fn builder(problem: Problem) -> ControlInstanceBuilder {
        ControlInstanceBuilder {
            problem,
            goal: None,
            procedure: ProcedureSpec::AMENDMENT,
            registered: Vec::new(),
            unregistered: Vec::new(),
            agenda: None,
            distinguished: None,
            budgets: Budgets::default(),
            registered_votes: Vec::new(),
            unregistered_votes: Vec::new(),
        }
    }

    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn goal(&self) -> Goal {
        self.goal
    }

    pub fn procedure(&self) -> ProcedureSpec {
        self.procedure
    }

    /// The sorted universe `C ∪ D`.
    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn name(&self, c: usize) -> &str {
        &self.candidates[c]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.candidates.binary_search_by(|c| c.as_str().cmp(id)).ok()
    }

    pub fn is_registered(&self, c: usize) -> bool {
        self.registered[c]
    }

    pub fn registered_candidates(&self) -> Vec<usize> {
        (0..self.candidates.len()).filter(|&c| self.registered[c]).collect()
    }

    pub fn unregistered_candidates(&self) -> Vec<usize> {
        (0..self.candidates.len()).filter(|&c| !self.registered[c]).collect()
    }

    pub fn distinguished(&self) -> usize {
        self.distinguished
    }

    pub fn distinguished_name(&self) -> &str {
        &self.candidates[self.distinguished]
    }

    /// Agenda over the whole universe.
    pub fn agenda(&self) -> &[usize] {
        &self.agenda
    }

    pub fn agenda_names(&self) -> Vec<&str> {
        self.agenda.iter().map(|&c| self.name(c)).collect()
    }

    pub fn registered_votes(&self) -> &[Vote] {
        &self.registered_votes
    }

    pub fn unregistered_votes(&self) -> &[Vote] {
        &self.unregistered_votes
    }

    pub fn budgets(&self) -> Budgets {
        self.budgets
    }

    /// Same instance with other budgets, re-checked against the problem shape.
    pub fn with_budgets(&self, budgets: Budgets) -> Result<Self> {
        let mut out = self.clone();
        out.budgets = budgets;
        out.check_shape()?;
        Ok(out)
    }

    /// Same instance with another problem label and budgets.
    pub fn with_problem(&self, problem: Problem, budgets: Budgets) -> Result<Self> {
        let mut out = self.clone();
        out.problem = problem;
        out.budgets = budgets;
        if let Some(goal) = problem.implied_goal() {
            out.goal = goal;
        }
        out.check_shape()?;
        Ok(out)
    }

    fn check_shape(&self) -> Result<()> {
        let b = self.budgets;
        let has_d = self.registered.iter().any(|r| !r);
        let has_w = !self.unregistered_votes.is_empty();
        let shape = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::invalid(
                    ParseCode::BudgetShape,
                    format!("{} requires {what}", self.problem),
                ))
            }
        };
        match self.problem {
            Problem::Ccav | Problem::Dcav => {
                shape(b.dv == 0 && b.ac == 0 && b.dc == 0, "dv=ac=dc=0")?;
                shape(!has_d, "no unregistered candidates")
            }
            Problem::Ccdv | Problem::Dcdv => {
                shape(b.av == 0 && b.ac == 0 && b.dc == 0, "av=ac=dc=0")?;
                shape(!has_d, "no unregistered candidates")?;
                shape(!has_w, "no unregistered votes")
            }
            Problem::Ccac | Problem::Dcac => {
                shape(b.av == 0 && b.dv == 0 && b.dc == 0, "av=dv=dc=0")?;
                shape(!has_w, "no unregistered votes")
            }
            Problem::Ccdc | Problem::Dcdc => {
                shape(b.av == 0 && b.dv == 0 && b.ac == 0, "av=dv=ac=0")?;
                shape(!has_d, "no unregistered candidates")?;
                shape(!has_w, "no unregistered votes")
            }
            Problem::Multimode => Ok(()),
        }
    }

    /// Winner of the unedited election over `C`.
    pub fn current_winner(&self) -> usize {
        self.outcome(&Witness::default())
            .expect("the empty witness is always applicable")
    }

    /// Whether `w` is applicable: indices in range, no repeats, `p` kept,
    /// vote counts within multiplicities, budgets respected.
    pub fn check_witness(&self, w: &Witness) -> Result<()> {
        let m = self.candidates.len();
        let mut seen = BTreeSet::new();
        for &c in &w.deleted_candidates {
            if c >= m || !self.registered[c] || c == self.distinguished || !seen.insert(c) {
                return Err(Error::invariant(format!("cannot delete candidate index {c}")));
            }
        }
        for &c in &w.added_candidates {
            if c >= m || self.registered[c] || !seen.insert(c) {
                return Err(Error::invariant(format!("cannot add candidate index {c}")));
            }
        }
        let check_votes = |edits: &[(usize, u64)], pool: &[Vote], what: &str| -> Result<()> {
            let mut used: HashMap<usize, u64> = HashMap::new();
            for &(i, k) in edits {
                let e = used.entry(i).or_default();
                *e += k;
                if i >= pool.len() || k == 0 || *e > pool[i].multiplicity() {
                    return Err(Error::invariant(format!("cannot {what} vote index {i} x{k}")));
                }
            }
            Ok(())
        };
        check_votes(&w.deleted_votes, &self.registered_votes, "delete")?;
        check_votes(&w.added_votes, &self.unregistered_votes, "add")?;
        let b = self.budgets;
        let over = w.deleted_candidates.len() > b.dc
            || w.added_candidates.len() > b.ac
            || w.deleted_vote_count() > b.dv as u64
            || w.added_vote_count() > b.av as u64;
        if over {
            return Err(Error::invariant("witness exceeds a budget"));
        }
        Ok(())
    }

    fn active_after(&self, w: &Witness) -> Vec<bool> {
        let mut active = self.registered.clone();
        for &c in &w.deleted_candidates {
            active[c] = false;
        }
        for &c in &w.added_candidates {
            active[c] = true;
        }
        active
    }

    fn vote_counts_after(&self, w: &Witness) -> (Vec<u64>, Vec<u64>) {
        let mut reg: Vec<u64> = self.registered_votes.iter().map(|v| v.multiplicity()).collect();
        let mut unreg = vec![0; self.unregistered_votes.len()];
        for &(i, k) in &w.deleted_votes {
            reg[i] -= k;
        }
        for &(i, k) in &w.added_votes {
            unreg[i] += k;
        }
        (reg, unreg)
    }

    fn edited_profile(&self, w: &Witness) -> Profile<'_> {
        let (reg, unreg) = self.vote_counts_after(w);
        let m = self.candidates.len();
        Profile::new(
            m,
            self.registered_votes
                .iter()
                .zip(reg)
                .chain(self.unregistered_votes.iter().zip(unreg))
                .map(|(v, k)| (v.rank(), k)),
        )
    }

    /// Agenda restricted to the candidates active after `w`.
    pub fn edited_agenda(&self, w: &Witness) -> Vec<usize> {
        let active = self.active_after(w);
        self.agenda.iter().copied().filter(|&c| active[c]).collect()
    }

    /// Winner after applying `w`.
    pub fn outcome(&self, w: &Witness) -> Result<usize> {
        self.check_witness(w)?;
        let seq = self.edited_agenda(w);
        Ok(winner_index(&self.edited_profile(w), &seq, self.procedure))
    }

    /// Elimination trace after applying `w`.
    pub fn outcome_trace(&self, w: &Witness) -> Result<IndexTrace> {
        self.check_witness(w)?;
        let seq = self.edited_agenda(w);
        Ok(trace_index(&self.edited_profile(w), &seq, self.procedure))
    }

    pub fn goal_met_by(&self, winner: usize) -> bool {
        match self.goal {
            Goal::Constructive => winner == self.distinguished,
            Goal::Destructive => winner != self.distinguished,
        }
    }

    /// Applies `w`, re-simulates, and reports whether the goal holds.
    pub fn achieves_goal(&self, w: &Witness) -> Result<bool> {
        Ok(self.goal_met_by(self.outcome(w)?))
    }
}

/// Collects string-level fields and validates them into a [`ControlInstance`].
#[derive(Debug, Clone)]
pub struct ControlInstanceBuilder {
    problem: Problem,
    goal: Option<Goal>,
    procedure: ProcedureSpec,
    registered: Vec<String>,
    unregistered: Vec<String>,
    agenda: Option<Vec<String>>,
    distinguished: Option<String>,
    budgets: Budgets,
    registered_votes: Vec<(Vec<String>, u64)>,
    unregistered_votes: Vec<(Vec<String>, u64)>,
}

fn owned<S: AsRef<str>>(ids: &[S]) -> Vec<String> {
    ids.iter().map(|s| s.as_ref().to_string()).collect()
}

impl ControlInstanceBuilder {
    pub fn goal(mut self, goal: Goal) -> Self {
        self.goal = Some(goal);
        self
    }

    pub fn procedure(mut self, procedure: ProcedureSpec) -> Self {
        self.procedure = procedure;
        self
    }

    pub fn candidates<S: AsRef<str>>(mut self, ids: &[S]) -> Self {
        self.registered = owned(ids);
        self
    }

    pub fn unregistered_candidates<S: AsRef<str>>(mut self, ids: &[S]) -> Self {
        self.unregistered = owned(ids);
        self
    }

    /// Defaults to the sorted universe when not given.
    pub fn agenda<S: AsRef<str>>(mut self, ids: &[S]) -> Self {
        self.agenda = Some(owned(ids));
        self
    }

    pub fn distinguished(mut self, id: &str) -> Self {
        self.distinguished = Some(id.to_string());
        self
    }

    pub fn budgets(mut self, budgets: Budgets) -> Self {
        self.budgets = budgets;
        self
    }

    pub fn registered_vote<S: AsRef<str>>(mut self, order: &[S], count: u64) -> Self {
        self.registered_votes.push((owned(order), count));
        self
    }

    pub fn unregistered_vote<S: AsRef<str>>(mut self, order: &[S], count: u64) -> Self {
        self.unregistered_votes.push((owned(order), count));
        self
    }

    /// Registered votes given as whitespace-separated orders, one vote each.
    pub fn registered_orders(mut self, orders: &[&str]) -> Self {
        for o in orders {
            let ids: Vec<&str> = o.split_whitespace().collect();
            self = self.registered_vote(&ids, 1);
        }
        self
    }

    pub fn unregistered_orders(mut self, orders: &[&str]) -> Self {
        for o in orders {
            let ids: Vec<&str> = o.split_whitespace().collect();
            self = self.unregistered_vote(&ids, 1);
        }
        self
    }

    pub fn build(self) -> Result<ControlInstance> {
        let all: Vec<&str> = self
            .registered
            .iter()
            .chain(&self.unregistered)
            .map(|s| s.as_str())
            .collect();
        check_ids(all.iter().copied())?;
        if self.registered.is_empty() {
            return Err(Error::input("no registered candidates"));
        }
        let mut candidates: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        candidates.sort();
        let index: HashMap<&str, usize> = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let registered_set: BTreeSet<&str> = self.registered.iter().map(|s| s.as_str()).collect();
        let registered: Vec<bool> = candidates
            .iter()
            .map(|c| registered_set.contains(c.as_str()))
            .collect();
        let permutation = |ids: &[String], what: &str| -> Result<Vec<usize>> {
            let wrong = || {
                Error::invalid(
                    ParseCode::WrongUniverse,
                    format!("{what} is not a permutation of the candidates"),
                )
            };
            if ids.len() != candidates.len() {
                return Err(wrong());
            }
            let mut seen = vec![false; candidates.len()];
            ids.iter()
                .map(|id| {
                    let i = *index.get(id.as_str()).ok_or_else(wrong)?;
                    if std::mem::replace(&mut seen[i], true) {
                        return Err(wrong());
                    }
                    Ok(i)
                })
                .collect()
        };
        let agenda = match &self.agenda {
            Some(a) => permutation(a, "agenda")?,
            None => (0..candidates.len()).collect(),
        };
        let p = self
            .distinguished
            .as_deref()
            .ok_or_else(|| Error::input("no distinguished candidate"))?;
        let distinguished = *index
            .get(p)
            .ok_or_else(|| Error::input(format!("distinguished candidate `{p}` is unknown")))?;
        if !registered[distinguished] {
            return Err(Error::input(format!(
                "distinguished candidate `{p}` must be registered"
            )));
        }
        let votes = |list: &[(Vec<String>, u64)]| -> Result<Vec<Vote>> {
            list.iter()
                .map(|(order, count)| {
                    if *count == 0 {
                        return Err(Error::invalid(ParseCode::BadNumber, "vote count must be positive"));
                    }
                    Vote::new(permutation(order, "vote")?, *count)
                })
                .collect()
        };
        let goal = match (self.problem.implied_goal(), self.goal) {
            (Some(implied), None) => implied,
            (Some(implied), Some(g)) if g == implied => implied,
            (Some(_), Some(g)) => {
                return Err(Error::input(format!("{} cannot have goal {g}", self.problem)))
            }
            (None, Some(g)) => g,
            (None, None) => return Err(Error::input("MULTIMODE needs an explicit goal")),
        };
        let instance = ControlInstance {
            problem: self.problem,
            goal,
            procedure: self.procedure,
            registered_votes: votes(&self.registered_votes)?,
            unregistered_votes: votes(&self.unregistered_votes)?,
            candidates,
            registered,
            distinguished,
            agenda,
            budgets: self.budgets,
        };
        instance.check_shape()?;
        Ok(instance)
    }
}

/// Concrete edits certifying a YES answer.
///
/// Vote edits are `(index, count)` pairs into the registered or unregistered
/// vote lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Witness {
    pub deleted_candidates: Vec<usize>,
    pub added_candidates: Vec<usize>,
    pub deleted_votes: Vec<(usize, u64)>,
    pub added_votes: Vec<(usize, u64)>,
}

impl Witness {
    pub fn delete_candidates(set: Vec<usize>) -> Self {
        Witness {
            deleted_candidates: set,
            ..Self::default()
        }
    }

    pub fn add_candidates(set: Vec<usize>) -> Self {
        Witness {
            added_candidates: set,
            ..Self::default()
        }
    }

    pub fn deleted_vote_count(&self) -> u64 {
        self.deleted_votes.iter().map(|v| v.1).sum()
    }

    pub fn added_vote_count(&self) -> u64 {
        self.added_votes.iter().map(|v| v.1).sum()
    }

    /// Total number of edits, counting votes with multiplicity.
    pub fn size(&self) -> u64 {
        (self.deleted_candidates.len() + self.added_candidates.len()) as u64
            + self.deleted_vote_count()
            + self.added_vote_count()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// Sorts every list so equal witnesses compare equal.
    pub fn normalized(mut self) -> Self {
        self.deleted_candidates.sort_unstable();
        self.added_candidates.sort_unstable();
        self.deleted_votes.sort_unstable();
        self.added_votes.sort_unstable();
        self
    }

    /// Human-readable edit lines such as `delete-candidate b`.
    pub fn lines(&self, instance: &ControlInstance) -> Vec<String> {
        let order = |v: &Vote| -> String {
            v.order()
                .iter()
                .map(|&c| instance.name(c))
                .collect::<Vec<_>>()
                .join(">")
        };
        let mut out = Vec::new();
        for &c in &self.deleted_candidates {
            out.push(format!("delete-candidate {}", instance.name(c)));
        }
        for &c in &self.added_candidates {
            out.push(format!("add-candidate {}", instance.name(c)));
        }
        for &(i, k) in &self.deleted_votes {
            let v = &instance.registered_votes()[i];
            out.push(format!("delete-vote index={i} count={k}: {}", order(v)));
        }
        for &(i, k) in &self.added_votes {
            let v = &instance.unregistered_votes()[i];
            out.push(format!("add-vote index={i} count={k}: {}", order(v)));
        }
        out
    }
}

/// Decision plus witness and provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub decision: bool,
    /// Present exactly when `decision` is true.
    pub witness: Option<Witness>,
    /// No strictly smaller witness exists.
    pub minimal: bool,
    pub algorithm: String,
    pub rationale: String,
}

impl Solution {
    pub fn yes(witness: Witness, minimal: bool, algorithm: &str) -> Self {
        Solution {
            decision: true,
            witness: Some(witness.normalized()),
            minimal,
            algorithm: algorithm.to_string(),
            rationale: String::new(),
        }
    }

    pub fn no(algorithm: &str) -> Self {
        Solution {
            decision: false,
            witness: None,
            minimal: false,
            algorithm: algorithm.to_string(),
            rationale: String::new(),
        }
    }

    pub fn with_rationale(mut self, rationale: impl Into<String>) -> Self {
        self.rationale = rationale.into();
        self
    }

    fn from_option(found: Option<Witness>, minimal: bool, algorithm: &str) -> Self {
        match found {
            Some(w) => Solution::yes(w, minimal, algorithm),
            None => Solution::no(algorithm),
        }
    }
}

/// Fails with an invariant error unless a YES witness achieves the goal.
pub fn verify_solution(instance: &ControlInstance, solution: &Solution) -> Result<()> {
    match (&solution.decision, &solution.witness) {
        (true, Some(w)) => {
            if instance.achieves_goal(w)? {
                Ok(())
            } else {
                Err(Error::invariant(format!(
                    "{} returned a witness that does not achieve the goal",
                    solution.algorithm
                )))
            }
        }
        (true, None) => Err(Error::invariant("YES without a witness")),
        (false, Some(_)) => Err(Error::invariant("NO with a witness")),
        (false, None) => Ok(()),
    }
}
