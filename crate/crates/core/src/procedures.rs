//! Winner determination for the successive procedure and the h-amendment
//! family, plus beating-path queries.
//!
//! The index-level functions take a `seq`: the agenda restricted to the
//! active candidates, as universe indices of a [`Profile`]. Solvers call
//! these directly on candidate subsets without materialising elections.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::election::{Agenda, Election, Profile};
use crate::error::{Error, Result};

/// How `h` is chosen for an amendment-family procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HMode {
    /// Fixed `h`; falls back to `m - 1` when `m <= h`.
    Absolute(usize),
    /// `h = m - d`; when `m <= d` the first agenda candidate wins outright.
    Relative(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProcedureSpec {
    Successive,
    Amendment(HMode),
}

impl ProcedureSpec {
    /// Plain amendment, `h = 1`.
    pub const AMENDMENT: ProcedureSpec = ProcedureSpec::Amendment(HMode::Absolute(1));
    /// Full amendment, `h = m - 1`.
    pub const FULL: ProcedureSpec = ProcedureSpec::Amendment(HMode::Relative(1));

    pub fn absolute(h: usize) -> Result<Self> {
        if h == 0 {
            return Err(Error::input("amendment h must be at least 1"));
        }
        Ok(ProcedureSpec::Amendment(HMode::Absolute(h)))
    }

    pub fn relative(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::input("amendment h=m-d needs d at least 1"));
        }
        Ok(ProcedureSpec::Amendment(HMode::Relative(d)))
    }

    /// True when the step is `m - 1` for every candidate count.
    pub fn is_full_amendment(&self) -> bool {
        matches!(self, ProcedureSpec::Amendment(HMode::Relative(1)))
    }
}

impl fmt::Display for ProcedureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcedureSpec::Successive => write!(f, "successive"),
            ProcedureSpec::Amendment(HMode::Absolute(h)) => write!(f, "amendment h={h}"),
            ProcedureSpec::Amendment(HMode::Relative(d)) => write!(f, "amendment h=m-{d}"),
        }
    }
}

impl FromStr for ProcedureSpec {
    type Err = Error;

    /// Accepts `successive`, `amendment h=<int>` and `amendment h=m-<int>`.
    fn from_str(s: &str) -> Result<Self> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            ["successive"] => Ok(ProcedureSpec::Successive),
            ["amendment"] => Ok(ProcedureSpec::AMENDMENT),
            ["amendment", h] => {
                let h = h
                    .strip_prefix("h=")
                    .ok_or_else(|| Error::input(format!("expected `h=...`, found `{h}`")))?;
                if let Some(d) = h.strip_prefix("m-") {
                    let d = d
                        .parse::<usize>()
                        .map_err(|_| Error::input(format!("bad relative h `{h}`")))?;
                    ProcedureSpec::relative(d)
                } else {
                    let h = h
                        .parse::<usize>()
                        .map_err(|_| Error::input(format!("bad h `{h}`")))?;
                    ProcedureSpec::absolute(h)
                }
            }
            _ => Err(Error::input(format!("unknown procedure `{s}`"))),
        }
    }
}

/// Effective behaviour of a procedure on `m` candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Each round compares the head with its next `step` candidates.
    Window(usize),
    /// The first agenda candidate wins without any comparison.
    FirstCandidate,
}

pub fn resolve_h(spec: ProcedureSpec, m: usize) -> Step {
    match spec {
        ProcedureSpec::Successive => Step::Window(m.saturating_sub(1)),
        ProcedureSpec::Amendment(HMode::Absolute(h)) => Step::Window(h.min(m.saturating_sub(1))),
        ProcedureSpec::Amendment(HMode::Relative(d)) => {
            if m > d {
                Step::Window(m - d)
            } else {
                Step::FirstCandidate
            }
        }
    }
}

/// Rounds of a winner determination, as universe indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexTrace {
    pub rounds: Vec<(usize, Vec<usize>)>,
    pub winner: usize,
}

/// Rounds of a winner determination, as candidate ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationTrace {
    pub rounds: Vec<(String, Vec<String>)>,
    pub winner: String,
}

impl EliminationTrace {
    fn from_index(t: &IndexTrace, e: &Election) -> Self {
        EliminationTrace {
            rounds: t
                .rounds
                .iter()
                .map(|(c, out)| {
                    (
                        e.name(*c).to_string(),
                        out.iter().map(|&x| e.name(x).to_string()).collect(),
                    )
                })
                .collect(),
            winner: e.name(t.winner).to_string(),
        }
    }
}

impl fmt::Display for EliminationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, out)) in self.rounds.iter().enumerate() {
            if out.len() == 1 && out[0] == *c {
                writeln!(f, "round {}: {} is eliminated", i + 1, c)?;
            } else {
                writeln!(f, "round {}: {} eliminates {}", i + 1, c, out.join(" "))?;
            }
        }
        write!(f, "winner {}", self.winner)
    }
}

/// Earliest candidate of `seq` that majority-dominates all its successors.
pub fn successive_index(p: &Profile, seq: &[usize]) -> usize {
    assert!(!seq.is_empty(), "winner of an empty agenda");
    (0..seq.len())
        .find(|&i| p.dominates(seq[i], &seq[i + 1..]))
        .map(|i| seq[i])
        .unwrap_or(seq[seq.len() - 1])
}

/// Amendment-family winner with a fixed window.
pub fn amendment_index(p: &Profile, seq: &[usize], step: Step) -> usize {
    assert!(!seq.is_empty(), "winner of an empty agenda");
    let step = match step {
        Step::FirstCandidate => return seq[0],
        Step::Window(s) => s,
    };
    if step == 0 {
        return seq[0];
    }
    let mut queue: VecDeque<usize> = seq.iter().copied().collect();
    while queue.len() > 1 {
        let head = queue[0];
        let end = queue.len().min(step + 1);
        if (1..end).all(|i| p.beats(head, queue[i])) {
            queue.drain(1..end);
        } else {
            queue.pop_front();
        }
    }
    queue[0]
}

/// Winner of `seq` under `spec`, with the step derived from `seq.len()`.
pub fn winner_index(p: &Profile, seq: &[usize], spec: ProcedureSpec) -> usize {
    match spec {
        ProcedureSpec::Successive => successive_index(p, seq),
        ProcedureSpec::Amendment(_) => amendment_index(p, seq, resolve_h(spec, seq.len())),
    }
}

/// First candidate of `seq` that beats every successor.
pub fn full_amendment_index(p: &Profile, seq: &[usize]) -> usize {
    amendment_index(p, seq, Step::Window(seq.len().saturating_sub(1)))
}

pub fn successive_trace(p: &Profile, seq: &[usize]) -> IndexTrace {
    let mut rounds = Vec::new();
    for i in 0..seq.len() {
        let rest = &seq[i + 1..];
        if p.dominates(seq[i], rest) {
            if !rest.is_empty() {
                rounds.push((seq[i], rest.to_vec()));
            }
            return IndexTrace {
                rounds,
                winner: seq[i],
            };
        }
        rounds.push((seq[i], vec![seq[i]]));
    }
    unreachable!("the last candidate dominates the empty set")
}

pub fn amendment_trace(p: &Profile, seq: &[usize], step: Step) -> IndexTrace {
    let step = match step {
        Step::FirstCandidate => {
            return IndexTrace {
                rounds: Vec::new(),
                winner: seq[0],
            }
        }
        Step::Window(s) => s,
    };
    let mut rounds = Vec::new();
    let mut queue: VecDeque<usize> = seq.iter().copied().collect();
    while queue.len() > 1 && step > 0 {
        let head = queue[0];
        let end = queue.len().min(step + 1);
        if (1..end).all(|i| p.beats(head, queue[i])) {
            rounds.push((head, queue.drain(1..end).collect()));
        } else {
            queue.pop_front();
            rounds.push((head, vec![head]));
        }
    }
    IndexTrace {
        rounds,
        winner: queue[0],
    }
}

pub fn trace_index(p: &Profile, seq: &[usize], spec: ProcedureSpec) -> IndexTrace {
    match spec {
        ProcedureSpec::Successive => successive_trace(p, seq),
        ProcedureSpec::Amendment(_) => amendment_trace(p, seq, resolve_h(spec, seq.len())),
    }
}

/// Whether a `(seq[from] <- seq[to])`-beating path exists, where `seq` is the
/// agenda restricted to the candidate subset under consideration.
///
/// Sweeps right to left. Position `i` reaches `to` through the first `j > i`
/// that `seq[i]` fails to beat: every earlier `j` is beaten, and every later
/// one would leave that `j` unbeaten in between.
pub fn beating_path_index(p: &Profile, seq: &[usize], from: usize, to: usize) -> bool {
    assert!(from <= to && to < seq.len());
    let mut reach = vec![false; to + 1];
    reach[to] = true;
    for i in (from..to).rev() {
        let ci = seq[i];
        for j in i + 1..=to {
            let cj = seq[j];
            let beats = p.beats(ci, cj);
            if !beats {
                reach[i] = reach[j];
                break;
            }
        }
    }
    reach[from]
}

/// Amendment winner test: beats all successors and has a beating path from
/// the agenda head.
pub fn amendment_winner_via_paths_index(p: &Profile, seq: &[usize], pos: usize) -> bool {
    let c = seq[pos];
    seq[pos + 1..].iter().all(|&s| p.beats(c, s)) && beating_path_index(p, seq, 0, pos)
}

fn checked_seq(election: &Election, agenda: &Agenda) -> Result<Vec<usize>> {
    if election.num_candidates() == 0 {
        return Err(Error::input("empty universe"));
    }
    agenda.indices(election)
}

pub fn successive_winner(election: &Election, agenda: &Agenda) -> Result<(String, EliminationTrace)> {
    let seq = checked_seq(election, agenda)?;
    let t = successive_trace(&election.profile(), &seq);
    Ok((election.name(t.winner).to_string(), EliminationTrace::from_index(&t, election)))
}

pub fn h_amendment_winner(
    election: &Election,
    agenda: &Agenda,
    spec: ProcedureSpec,
) -> Result<(String, EliminationTrace)> {
    if spec == ProcedureSpec::Successive {
        return Err(Error::input("h_amendment_winner needs an amendment procedure"));
    }
    let seq = checked_seq(election, agenda)?;
    let t = amendment_trace(&election.profile(), &seq, resolve_h(spec, seq.len()));
    Ok((election.name(t.winner).to_string(), EliminationTrace::from_index(&t, election)))
}

/// Winner under any procedure.
pub fn winner(election: &Election, agenda: &Agenda, spec: ProcedureSpec) -> Result<(String, EliminationTrace)> {
    match spec {
        ProcedureSpec::Successive => successive_winner(election, agenda),
        ProcedureSpec::Amendment(_) => h_amendment_winner(election, agenda, spec),
    }
}

pub fn beating_path_exists<S: AsRef<str>>(
    election: &Election,
    agenda: &Agenda,
    subset: &[S],
    c: &str,
    c_prime: &str,
) -> Result<bool> {
    let full = checked_seq(election, agenda)?;
    let mut member = vec![false; election.num_candidates()];
    for s in subset {
        member[election.index_of(s.as_ref())?] = true;
    }
    let (ci, cj) = (election.index_of(c)?, election.index_of(c_prime)?);
    if !member[ci] || !member[cj] {
        return Err(Error::input("beating path endpoints must lie in the subset"));
    }
    let seq: Vec<usize> = full.into_iter().filter(|&x| member[x]).collect();
    let from = seq.iter().position(|&x| x == ci).unwrap();
    let to = seq.iter().position(|&x| x == cj).unwrap();
    if from > to {
        return Err(Error::input(format!("`{c}` must not come after `{c_prime}` on the agenda")));
    }
    Ok(beating_path_index(&election.profile(), &seq, from, to))
}

pub fn amendment_winner_via_paths(election: &Election, agenda: &Agenda, c: &str) -> Result<bool> {
    let seq = checked_seq(election, agenda)?;
    let ci = election.index_of(c)?;
    let pos = seq.iter().position(|&x| x == ci).unwrap();
    Ok(amendment_winner_via_paths_index(&election.profile(), &seq, pos))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> Election {
        Election::from_orders(&["b d c a", "c a b d", "a d b c"]).unwrap()
    }

    fn win(e: &Election, agenda: &str, spec: ProcedureSpec) -> String {
        winner(e, &Agenda::parse(agenda).unwrap(), spec).unwrap().0
    }

    fn amd(h: usize) -> ProcedureSpec {
        ProcedureSpec::absolute(h).unwrap()
    }

    #[test]
    fn resolve() {
        assert_eq!(resolve_h(amd(3), 4), Step::Window(3));
        assert_eq!(resolve_h(amd(5), 4), Step::Window(3));
        let rel2 = ProcedureSpec::relative(2).unwrap();
        assert_eq!(resolve_h(rel2, 3), Step::Window(1));
        assert_eq!(resolve_h(rel2, 2), Step::FirstCandidate);
    }

    #[test]
    fn parse_spec() {
        for s in ["successive", "amendment h=2", "amendment h=m-3"] {
            assert_eq!(s.parse::<ProcedureSpec>().unwrap().to_string(), s);
        }
        assert!("amendment h=0".parse::<ProcedureSpec>().is_err());
        assert!("amendment h=m-0".parse::<ProcedureSpec>().is_err());
        assert!("plurality".parse::<ProcedureSpec>().is_err());
    }

    #[test]
    fn example1_agenda_abcd() {
        let e = example1();
        assert_eq!(win(&e, "a b c d", ProcedureSpec::Successive), "d");
        assert_eq!(win(&e, "a b c d", amd(1)), "d");
        assert_eq!(win(&e, "a b c d", amd(2)), "b");
        assert_eq!(win(&e, "a b c d", amd(3)), "b");
    }

    #[test]
    fn example1_agenda_dcba() {
        let e = example1();
        assert_eq!(win(&e, "d c b a", ProcedureSpec::Successive), "a");
        for h in 1..=3 {
            assert_eq!(win(&e, "d c b a", amd(h)), "a");
        }
    }

    #[test]
    fn example1_agenda_badc() {
        let e = example1();
        assert_eq!(win(&e, "b a d c", ProcedureSpec::Successive), "d");
        assert_eq!(win(&e, "b a d c", amd(1)), "c");
        assert_eq!(win(&e, "b a d c", amd(2)), "d");
        assert_eq!(win(&e, "b a d c", amd(3)), "d");
    }

    #[test]
    fn successive_three_votes() {
        let e = Election::from_orders(&["a b c d", "d a b c", "b c a d"]).unwrap();
        assert_eq!(win(&e, "a b c d", ProcedureSpec::Successive), "b");
    }

    #[test]
    fn first_candidate_rule_has_empty_trace() {
        let e = example1();
        let (w, t) = winner(&e, &Agenda::parse("c a b d").unwrap(), ProcedureSpec::relative(4).unwrap()).unwrap();
        assert_eq!(w, "c");
        assert!(t.rounds.is_empty());
    }

    #[test]
    fn agenda_mismatch() {
        let e = example1();
        assert!(winner(&e, &Agenda::parse("a b c").unwrap(), ProcedureSpec::Successive).is_err());
        assert!(winner(&e, &Agenda::parse("a b c z").unwrap(), ProcedureSpec::Successive).is_err());
    }

    #[test]
    fn paths() {
        let e = example1();
        let ag = Agenda::parse("a b c d").unwrap();
        assert!(beating_path_exists(&e, &ag, &["a"], "a", "a").unwrap());
        assert!(amendment_winner_via_paths(&e, &ag, "d").unwrap());
        assert!(!amendment_winner_via_paths(&e, &ag, "a").unwrap());
        assert!(beating_path_exists(&e, &ag, &["a", "b"], "b", "a").is_err());
    }

    #[test]
    fn trace_partitions_universe() {
        let e = example1();
        for spec in [ProcedureSpec::Successive, amd(1), amd(2), amd(3)] {
            let (w, t) = winner(&e, &Agenda::parse("b a d c").unwrap(), spec).unwrap();
            let mut all: Vec<String> = t.rounds.iter().flat_map(|(_, o)| o.clone()).collect();
            all.push(w);
            all.sort();
            assert_eq!(all, vec!["a", "b", "c", "d"]);
        }
    }
}
