//! Oriented graphs and election synthesis from a prescribed majority graph.

use std::collections::BTreeSet;
use std::fmt;

use crate::election::{check_ids, Election, Vote};
use crate::error::{Error, Result};

/// Vertices plus at most one arc per unordered pair. Vertices are kept
/// sorted so the vertex index matches the candidate index of an election
/// over the same ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedGraph {
    vertices: Vec<String>,
    arcs: BTreeSet<(usize, usize)>,
    weights: Option<Vec<((usize, usize), u64)>>,
}

impl OrientedGraph {
    pub fn new<S: AsRef<str>>(vertices: &[S], arcs: &[(S, S)]) -> Result<Self> {
        check_ids(vertices.iter().map(|v| v.as_ref()))?;
        let mut names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        names.sort();
        let idx = |id: &str| {
            names
                .binary_search_by(|n| n.as_str().cmp(id))
                .map_err(|_| Error::input(format!("arc endpoint `{id}` is not a vertex")))
        };
        let mut pairs = Vec::new();
        for (a, b) in arcs {
            pairs.push((idx(a.as_ref())?, idx(b.as_ref())?));
        }
        Self::from_indices(names, &pairs)
    }

    /// Vertices must already be sorted.
    pub fn from_indices(vertices: Vec<String>, arcs: &[(usize, usize)]) -> Result<Self> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input("oriented-graph vertices must be distinct and sorted"));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in arcs {
            if a >= vertices.len() || b >= vertices.len() {
                return Err(Error::input("arc endpoint out of range"));
            }
            if a == b {
                return Err(Error::input(format!("loop at `{}`", vertices[a])));
            }
            if set.contains(&(b, a)) {
                return Err(Error::input(format!(
                    "both arcs between `{}` and `{}`",
                    vertices[a], vertices[b]
                )));
            }
            if !set.insert((a, b)) {
                return Err(Error::input(format!("duplicate arc {}->{}", vertices[a], vertices[b])));
            }
        }
        Ok(OrientedGraph { vertices, arcs: set, weights: None })
    }

    /// Majority graph of `votes` over `candidates` (indices into it).
    pub fn from_votes(candidates: &[String], votes: &[Vote]) -> Self {
        let profile = crate::Profile::new(candidates.len(), votes.iter().map(|v| (v.rank(), v.multiplicity())));
        let mut arcs = BTreeSet::new();
        for a in 0..candidates.len() {
            for b in 0..candidates.len() {
                if a != b && profile.beats(a, b) {
                    arcs.insert((a, b));
                }
            }
        }
        OrientedGraph { vertices: candidates.to_vec(), arcs, weights: None }
    }

    /// Weighted majority graph: each arc carries `n(a, b)`.
    pub fn weighted_majority_graph(election: &Election) -> Self {
        let mut g = Self::majority_graph(election);
        let profile = election.profile();
        g.weights = Some(g.arcs.iter().map(|&(a, b)| ((a, b), profile.support(a, b))).collect());
        g
    }

    pub fn majority_graph(election: &Election) -> Self {
        Self::from_votes(election.candidates(), election.votes())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.arcs.iter().copied().collect()
    }

    pub fn arc_names(&self) -> Vec<(&str, &str)> {
        self.arcs
            .iter()
            .map(|&(a, b)| (self.vertices[a].as_str(), self.vertices[b].as_str()))
            .collect()
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        self.arcs.contains(&(a, b))
    }

    pub fn weights(&self) -> Option<&[((usize, usize), u64)]> {
        self.weights.as_deref()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }
}

impl fmt::Display for OrientedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arcs: Vec<String> = self.arc_names().iter().map(|(a, b)| format!("{a}->{b}")).collect();
        write!(f, "{{{}}} [{}]", self.vertices.join(","), arcs.join(", "))
    }
}

/// Two votes per arc `a -> b`: `a b rest` and `reverse(rest) a b`. Every
/// other pair is split evenly, so non-arcs end up tied.
pub fn mcgarvey_election(graph: &OrientedGraph) -> Result<Election> {
    if graph.is_weighted() {
        return Err(Error::input("McGarvey synthesis takes an unweighted graph"));
    }
    let names = graph.vertices();
    let mut votes: Vec<(Vec<&str>, u64)> = Vec::new();
    for (a, b) in graph.arcs() {
        let rest: Vec<&str> = (0..names.len())
            .filter(|&c| c != a && c != b)
            .map(|c| names[c].as_str())
            .collect();
        let mut first = vec![names[a].as_str(), names[b].as_str()];
        first.extend(&rest);
        let mut second: Vec<&str> = rest.iter().rev().copied().collect();
        second.push(&names[a]);
        second.push(&names[b]);
        votes.push((first, 1));
        votes.push((second, 1));
    }
    let cands: Vec<&str> = names.iter().map(String::as_str).collect();
    Election::new(&cands, &votes)
}
