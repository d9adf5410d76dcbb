//! Candidates, votes, elections, agendas and pairwise-majority queries.
//!
//! Candidates are kept sorted by id so that every iteration order is
//! reproducible. Index-based [`Profile`] views back all hot loops; the
//! name-based methods on [`Election`] validate input and delegate to them.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, ParseCode, Result};

/// Ids are tokens of ASCII letters, digits, underscore, and (after the first
/// character) `#`, which marks ordered-block copies such as `c#1`.
pub fn is_valid_id(id: &str) -> bool {
    let mut chars = id.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '#')
}

pub(crate) fn check_ids<'a>(ids: impl IntoIterator<Item = &'a str>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !is_valid_id(id) {
            return Err(Error::invalid(ParseCode::Syntax, format!("invalid candidate id `{id}`")));
        }
        if !seen.insert(id) {
            return Err(Error::invalid(
                ParseCode::DuplicateCandidate,
                format!("duplicate candidate `{id}`"),
            ));
        }
    }
    Ok(())
}

/// One strict linear order over the universe with a positive multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vote {
    order: Vec<usize>,
    rank: Vec<usize>,
    multiplicity: u64,
}

impl Vote {
    /// Builds a vote from a permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>, multiplicity: u64) -> Result<Self> {
        if multiplicity == 0 {
            return Err(Error::input("vote multiplicity must be positive"));
        }
        let m = order.len();
        let mut rank = vec![usize::MAX; m];
        for (pos, &c) in order.iter().enumerate() {
            if c >= m || rank[c] != usize::MAX {
                return Err(Error::input("vote is not a permutation of the universe"));
            }
            rank[c] = pos;
        }
        Ok(Vote {
            order,
            rank,
            multiplicity,
        })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `rank()[c]` is the 0-based position of candidate `c`.
    pub fn rank(&self) -> &[usize] {
        &self.rank
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn with_multiplicity(&self, multiplicity: u64) -> Result<Self> {
        Vote::new(self.order.clone(), multiplicity)
    }

    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }
}

/// A candidate universe plus a multiset of votes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    names: Vec<String>,
    index: HashMap<String, usize>,
    votes: Vec<Vote>,
}

impl Election {
    /// Votes are given as candidate-id sequences with multiplicities.
    pub fn new<S: AsRef<str>>(candidates: &[S], votes: &[(Vec<S>, u64)]) -> Result<Self> {
        check_ids(candidates.iter().map(|s| s.as_ref()))?;
        let mut names: Vec<String> = candidates.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        let index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut out = Vec::with_capacity(votes.len());
        for (order, count) in votes {
            if order.len() != names.len() {
                return Err(Error::input(format!(
                    "vote has {} entries, universe has {}",
                    order.len(),
                    names.len()
                )));
            }
            let idx = order
                .iter()
                .map(|s| {
                    index
                        .get(s.as_ref())
                        .copied()
                        .ok_or_else(|| Error::input(format!("unknown candidate `{}`", s.as_ref())))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(Vote::new(idx, *count)?);
        }
        Ok(Election {
            names,
            index,
            votes: out,
        })
    }

    /// Builds an election from whitespace-separated orders, one vote each.
    /// The universe is taken from the first order.
    pub fn from_orders(orders: &[&str]) -> Result<Self> {
        let parsed: Vec<Vec<&str>> = orders.iter().map(|o| o.split_whitespace().collect()).collect();
        let universe = parsed
            .first()
            .cloned()
            .ok_or_else(|| Error::input("no votes to infer a universe from"))?;
        let votes: Vec<(Vec<&str>, u64)> = parsed.into_iter().map(|o| (o, 1)).collect();
        Election::new(&universe, &votes)
    }

    pub(crate) fn from_parts(names: Vec<String>, votes: Vec<Vote>) -> Self {
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Election {
            names,
            index,
            votes,
        }
    }

    pub fn candidates(&self) -> &[String] {
        &self.names
    }

    pub fn num_candidates(&self) -> usize {
        self.names.len()
    }

    pub fn votes(&self) -> &[Vote] {
        &self.votes
    }

    /// Total vote count, multiplicities included.
    pub fn n(&self) -> u64 {
        self.votes.iter().map(|v| v.multiplicity).sum()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown candidate `{id}`")))
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn profile(&self) -> Profile<'_> {
        Profile::new(
            self.names.len(),
            self.votes.iter().map(|v| (v.rank(), v.multiplicity)),
        )
    }

    pub fn pairwise_support(&self, a: &str, b: &str) -> Result<u64> {
        let (a, b) = (self.index_of(a)?, self.index_of(b)?);
        if a == b {
            return Err(Error::input("pairwise support needs two distinct candidates"));
        }
        Ok(self.profile().support(a, b))
    }

    pub fn beats(&self, a: &str, b: &str) -> Result<bool> {
        let (sab, sba) = (self.pairwise_support(a, b)?, self.pairwise_support(b, a)?);
        Ok(sab > sba)
    }

    pub fn majority_dominates<S: AsRef<str>>(&self, c: &str, set: &[S]) -> Result<bool> {
        let ci = self.index_of(c)?;
        let mut idx = Vec::with_capacity(set.len());
        for s in set {
            let si = self.index_of(s.as_ref())?;
            if si == ci {
                return Err(Error::input(format!("`{c}` cannot dominate a set containing itself")));
            }
            idx.push(si);
        }
        Ok(self.profile().dominates(ci, &idx))
    }

    pub fn condorcet_winner(&self) -> Result<Option<String>> {
        if self.names.is_empty() {
            return Err(Error::input("empty universe has no Condorcet winner"));
        }
        let all: Vec<usize> = (0..self.names.len()).collect();
        Ok(self
            .profile()
            .condorcet_winner(&all)
            .map(|c| self.names[c].clone()))
    }

    pub fn majority_record(&self) -> MajorityRecord {
        let m = self.names.len();
        let p = self.profile();
        let mut support = vec![0; m * m];
        for a in 0..m {
            for b in 0..m {
                if a != b {
                    support[a * m + b] = p.support(a, b);
                }
            }
        }
        MajorityRecord {
            candidates: self.names.clone(),
            support,
            n: p.n(),
        }
    }

    /// Keeps only the candidates in `subset`; votes keep their relative order.
    pub fn restrict<S: AsRef<str>>(&self, subset: &[S]) -> Result<Election> {
        if subset.is_empty() {
            return Err(Error::input("restriction to an empty candidate set"));
        }
        let mut keep = vec![false; self.names.len()];
        for s in subset {
            keep[self.index_of(s.as_ref())?] = true;
        }
        let names: Vec<String> = self
            .names
            .iter()
            .enumerate()
            .filter(|(i, _)| keep[*i])
            .map(|(_, n)| n.clone())
            .collect();
        let mut remap = vec![usize::MAX; self.names.len()];
        let mut next = 0;
        for (i, k) in keep.iter().enumerate() {
            if *k {
                remap[i] = next;
                next += 1;
            }
        }
        let votes = self
            .votes
            .iter()
            .map(|v| {
                let order = v.order.iter().filter(|&&c| keep[c]).map(|&c| remap[c]).collect();
                Vote::new(order, v.multiplicity)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Election::from_parts(names, votes))
    }

    /// Votes as candidate-id sequences, in stored order.
    pub fn vote_orders(&self) -> Vec<(Vec<&str>, u64)> {
        self.votes
            .iter()
            .map(|v| {
                (
                    v.order.iter().map(|&c| self.names[c].as_str()).collect(),
                    v.multiplicity,
                )
            })
            .collect()
    }
}

/// Weighted majority graph: `support(a, b)` votes rank `a` before `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorityRecord {
    candidates: Vec<String>,
    support: Vec<u64>,
    n: u64,
}

impl MajorityRecord {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn support(&self, a: usize, b: usize) -> u64 {
        self.support[a * self.candidates.len() + b]
    }

    pub fn beats(&self, a: usize, b: usize) -> bool {
        2 * self.support(a, b) > self.n
    }

    /// Arcs `(a, b)` with `a` beating `b`, in index order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let m = self.candidates.len();
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if a != b && self.beats(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Index-level view of a weighted vote multiset over a fixed universe.
///
/// Ballots are borrowed rank arrays, so re-weighting a vote pool (as voter
/// control does) never copies orders.
#[derive(Debug, Clone)]
pub struct Profile<'a> {
    m: usize,
    n: u64,
    support: Vec<u64>,
    ranks: Vec<&'a [usize]>,
    counts: Vec<u64>,
}

impl<'a> Profile<'a> {
    pub fn new(m: usize, ballots: impl IntoIterator<Item = (&'a [usize], u64)>) -> Self {
        let mut support = vec![0u64; m * m];
        let mut ranks = Vec::new();
        let mut counts = Vec::new();
        let mut n = 0;
        for (rank, count) in ballots {
            if count == 0 {
                continue;
            }
            debug_assert_eq!(rank.len(), m);
            n += count;
            for a in 0..m {
                for b in 0..m {
                    if rank[a] < rank[b] {
                        support[a * m + b] += count;
                    }
                }
            }
            ranks.push(rank);
            counts.push(count);
        }
        Profile {
            m,
            n,
            support,
            ranks,
            counts,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn support(&self, a: usize, b: usize) -> u64 {
        self.support[a * self.m + b]
    }

    pub fn beats(&self, a: usize, b: usize) -> bool {
        2 * self.support(a, b) > self.n
    }

    pub fn ties(&self, a: usize, b: usize) -> bool {
        a != b && 2 * self.support(a, b) == self.n
    }

    /// Number of votes ranking `c` before every member of `set`.
    pub fn count_first(&self, c: usize, set: &[usize]) -> u64 {
        self.ranks
            .iter()
            .zip(&self.counts)
            .filter(|(r, _)| set.iter().all(|&s| r[c] < r[s]))
            .map(|(_, &k)| k)
            .sum()
    }

    /// Strict majority ranks `c` before all of `set`; true for an empty set.
    pub fn dominates(&self, c: usize, set: &[usize]) -> bool {
        set.is_empty() || 2 * self.count_first(c, set) > self.n
    }

    /// Condorcet winner among `active`.
    pub fn condorcet_winner(&self, active: &[usize]) -> Option<usize> {
        active
            .iter()
            .copied()
            .find(|&c| active.iter().all(|&d| d == c || self.beats(c, d)))
    }
}

/// Consideration order over a candidate universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agenda {
    order: Vec<String>,
    position: HashMap<String, usize>,
}

impl Agenda {
    pub fn new<S: AsRef<str>>(order: &[S]) -> Result<Self> {
        check_ids(order.iter().map(|s| s.as_ref()))?;
        let order: Vec<String> = order.iter().map(|s| s.as_ref().to_string()).collect();
        let position = order
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i + 1))
            .collect();
        Ok(Agenda { order, position })
    }

    /// Parses a whitespace-separated agenda such as `"a b c d"`.
    pub fn parse(text: &str) -> Result<Self> {
        let ids: Vec<&str> = text.split_whitespace().collect();
        Agenda::new(&ids)
    }

    pub fn order(&self) -> &[String] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 1-based position.
    pub fn position(&self, c: &str) -> Option<usize> {
        self.position.get(c).copied()
    }

    pub fn restrict<S: AsRef<str>>(&self, subset: &[S]) -> Result<Agenda> {
        let mut keep = BTreeSet::new();
        for s in subset {
            let s = s.as_ref();
            if !self.position.contains_key(s) {
                return Err(Error::input(format!("`{s}` is not on the agenda")));
            }
            keep.insert(s);
        }
        let order: Vec<&str> = self
            .order
            .iter()
            .filter(|c| keep.contains(c.as_str()))
            .map(|c| c.as_str())
            .collect();
        Agenda::new(&order)
    }

    /// Agenda as universe indices of `election`, checking that it covers it.
    pub fn indices(&self, election: &Election) -> Result<Vec<usize>> {
        if self.order.len() != election.num_candidates() {
            return Err(Error::input(format!(
                "agenda has {} candidates, election has {}",
                self.order.len(),
                election.num_candidates()
            )));
        }
        self.order.iter().map(|c| election.index_of(c)).collect()
    }
}
