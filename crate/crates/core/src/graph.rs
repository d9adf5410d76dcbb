//! Exact solvers for the auxiliary graph problems: red-blue dominating set,
//! clique, biclique and perfect code. Desk-scale branch and bound with a
//! node budget; every witness is re-validated by the `is_*` checkers.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::election::is_valid_id;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphProblem {
    Rbds,
    Clique,
    Biclique,
    PerfectCode,
}

impl fmt::Display for GraphProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphProblem::Rbds => "rbds",
            GraphProblem::Clique => "clique",
            GraphProblem::Biclique => "biclique",
            GraphProblem::PerfectCode => "perfect-code",
        })
    }
}

impl FromStr for GraphProblem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rbds" => Ok(GraphProblem::Rbds),
            "clique" => Ok(GraphProblem::Clique),
            "biclique" => Ok(GraphProblem::Biclique),
            "perfect-code" => Ok(GraphProblem::PerfectCode),
            _ => Err(Error::input(format!("unknown graph problem `{s}`"))),
        }
    }
}

impl GraphProblem {
    pub fn is_bipartite(self) -> bool {
        matches!(self, GraphProblem::Rbds | GraphProblem::Biclique)
    }
}

fn sorted_unique(ids: &[String], what: &str) -> Result<Vec<String>> {
    let mut v = ids.to_vec();
    v.sort();
    for w in v.windows(2) {
        if w[0] == w[1] {
            return Err(Error::input(format!("duplicate {what} `{}`", w[0])));
        }
    }
    if let Some(bad) = v.iter().find(|s| !is_valid_id(s)) {
        return Err(Error::input(format!("invalid vertex id `{bad}`")));
    }
    Ok(v)
}

/// Simple undirected graph. Vertices are sorted by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let ids: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let vertices = sorted_unique(&ids, "vertex")?;
        let n = vertices.len();
        let mut g = Graph {
            vertices,
            adj: vec![vec![false; n]; n],
        };
        for (a, b) in edges {
            let (a, b) = (g.index_of(a.as_ref())?, g.index_of(b.as_ref())?);
            if a == b {
                return Err(Error::input(format!("self-loop on `{}`", g.vertices[a])));
            }
            g.adj[a][b] = true;
            g.adj[b][a] = true;
        }
        Ok(g)
    }

    pub fn from_indices(n: usize, edges: &[(usize, usize)]) -> Self {
        let vertices = (0..n).map(|i| format!("v{i:02}")).collect();
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a != b {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
        Graph { vertices, adj }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.vertices
            .binary_search_by(|v| v.as_str().cmp(id))
            .map_err(|_| Error::input(format!("unknown vertex `{id}`")))
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.adj[v][u]).collect()
    }

    /// Closed neighbourhood, sorted.
    pub fn closed_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&u| u == v || self.adj[v][u]).collect()
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.adj[a][b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn names(&self, set: &[usize]) -> Vec<String> {
        set.iter().map(|&v| self.vertices[v].clone()).collect()
    }
}

/// Bipartite graph with parts `red` and `blue`, each sorted by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    red: Vec<String>,
    blue: Vec<String>,
    adj: Vec<Vec<bool>>,
}

impl BipartiteGraph {
    pub fn new<S: AsRef<str>>(red: &[S], blue: &[S], edges: &[(S, S)]) -> Result<Self> {
        let r: Vec<String> = red.iter().map(|s| s.as_ref().to_string()).collect();
        let b: Vec<String> = blue.iter().map(|s| s.as_ref().to_string()).collect();
        let red = sorted_unique(&r, "red vertex")?;
        let blue = sorted_unique(&b, "blue vertex")?;
        if let Some(x) = red.iter().find(|x| blue.binary_search(x).is_ok()) {
            return Err(Error::input(format!("`{x}` is both red and blue")));
        }
        let mut g = BipartiteGraph {
            adj: vec![vec![false; blue.len()]; red.len()],
            red,
            blue,
        };
        for (x, y) in edges {
            let (x, y) = (x.as_ref(), y.as_ref());
            let (ri, bi) = match (g.red_index(x), g.blue_index(y)) {
                (Some(r), Some(b)) => (r, b),
                _ => match (g.red_index(y), g.blue_index(x)) {
                    (Some(r), Some(b)) => (r, b),
                    _ => {
                        return Err(Error::input(format!(
                            "edge `{x}`-`{y}` does not join a red and a blue vertex"
                        )))
                    }
                },
            };
            g.adj[ri][bi] = true;
        }
        Ok(g)
    }

    pub fn from_indices(nr: usize, nb: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![false; nb]; nr];
        for &(r, b) in edges {
            adj[r][b] = true;
        }
        BipartiteGraph {
            red: (0..nr).map(|i| format!("r{i:02}")).collect(),
            blue: (0..nb).map(|i| format!("b{i:02}")).collect(),
            adj,
        }
    }

    pub fn red(&self) -> &[String] {
        &self.red
    }

    pub fn blue(&self) -> &[String] {
        &self.blue
    }

    pub fn red_index(&self, id: &str) -> Option<usize> {
        self.red.binary_search_by(|v| v.as_str().cmp(id)).ok()
    }

    pub fn blue_index(&self, id: &str) -> Option<usize> {
        self.blue.binary_search_by(|v| v.as_str().cmp(id)).ok()
    }

    pub fn adjacent(&self, r: usize, b: usize) -> bool {
        self.adj[r][b]
    }

    pub fn red_neighbors(&self, r: usize) -> Vec<usize> {
        (0..self.blue.len()).filter(|&b| self.adj[r][b]).collect()
    }

    pub fn blue_neighbors(&self, b: usize) -> Vec<usize> {
        (0..self.red.len()).filter(|&r| self.adj[r][b]).collect()
    }

    pub fn red_degree(&self, r: usize) -> usize {
        self.adj[r].iter().filter(|&&x| x).count()
    }

    /// Edges as `(red, blue)` index pairs, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.red.len() {
            for b in 0..self.blue.len() {
                if self.adj[r][b] {
                    out.push((r, b));
                }
            }
        }
        out
    }

    pub fn has_isolated_vertex(&self) -> bool {
        (0..self.red.len()).any(|r| self.red_degree(r) == 0)
            || (0..self.blue.len()).any(|b| self.blue_neighbors(b).is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphShape {
    General(Graph),
    Bipartite(BipartiteGraph),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInstance {
    pub problem: GraphProblem,
    pub graph: GraphShape,
    pub kappa: usize,
}

impl GraphInstance {
    pub fn new(problem: GraphProblem, graph: GraphShape, kappa: usize) -> Result<Self> {
        match (&graph, problem.is_bipartite()) {
            (GraphShape::Bipartite(_), true) | (GraphShape::General(_), false) => Ok(GraphInstance {
                problem,
                graph,
                kappa,
            }),
            _ => Err(Error::input(format!(
                "{problem} needs a {} graph",
                if problem.is_bipartite() { "bipartite" } else { "general" }
            ))),
        }
    }

    pub fn rbds(graph: BipartiteGraph, kappa: usize) -> Self {
        GraphInstance {
            problem: GraphProblem::Rbds,
            graph: GraphShape::Bipartite(graph),
            kappa,
        }
    }

    pub fn biclique(graph: BipartiteGraph, kappa: usize) -> Self {
        GraphInstance {
            problem: GraphProblem::Biclique,
            graph: GraphShape::Bipartite(graph),
            kappa,
        }
    }

    pub fn clique(graph: Graph, kappa: usize) -> Self {
        GraphInstance {
            problem: GraphProblem::Clique,
            graph: GraphShape::General(graph),
            kappa,
        }
    }

    pub fn perfect_code(graph: Graph, kappa: usize) -> Self {
        GraphInstance {
            problem: GraphProblem::PerfectCode,
            graph: GraphShape::General(graph),
            kappa,
        }
    }

    pub fn bipartite(&self) -> Option<&BipartiteGraph> {
        match &self.graph {
            GraphShape::Bipartite(g) => Some(g),
            GraphShape::General(_) => None,
        }
    }

    pub fn general(&self) -> Option<&Graph> {
        match &self.graph {
            GraphShape::General(g) => Some(g),
            GraphShape::Bipartite(_) => None,
        }
    }

    fn expect_bipartite(&self, want: GraphProblem) -> Result<&BipartiteGraph> {
        if self.problem != want {
            return Err(Error::input(format!("expected a {want} instance, found {}", self.problem)));
        }
        self.bipartite()
            .ok_or_else(|| Error::input(format!("{want} needs a bipartite graph")))
    }

    fn expect_general(&self, want: GraphProblem) -> Result<&Graph> {
        if self.problem != want {
            return Err(Error::input(format!("expected a {want} instance, found {}", self.problem)));
        }
        self.general()
            .ok_or_else(|| Error::input(format!("{want} needs a general graph")))
    }
}

/// Certificate returned by [`solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphWitness {
    Set(Vec<String>),
    Pair(Vec<String>, Vec<String>),
}

const DEFAULT_NODES: u64 = 20_000_000;

struct Counter {
    nodes: u64,
    limit: u64,
}

impl Counter {
    fn new(limit: u64) -> Self {
        Counter { nodes: 0, limit }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::resource(format!("graph search exceeded {} nodes", self.limit)));
        }
        Ok(())
    }
}

/// Minimum blue set dominating every red vertex, or `None` if some red
/// vertex has no neighbour.
pub fn min_dominating_blue(g: &BipartiteGraph) -> Result<Option<Vec<usize>>> {
    min_dominating_blue_with(g, DEFAULT_NODES)
}

fn min_dominating_blue_with(g: &BipartiteGraph, limit: u64) -> Result<Option<Vec<usize>>> {
    let nr = g.red().len();
    let nbrs: Vec<Vec<usize>> = (0..nr).map(|r| g.red_neighbors(r)).collect();
    if nbrs.iter().any(|n| n.is_empty()) {
        return Ok(None);
    }
    let mut best: Vec<usize> = {
        let mut all: BTreeSet<usize> = BTreeSet::new();
        for n in &nbrs {
            all.insert(n[0]);
        }
        all.into_iter().collect()
    };
    let mut counter = Counter::new(limit);
    let mut chosen = Vec::new();
    let mut covered = vec![0usize; nr];
    branch_dom(g, &nbrs, &mut chosen, &mut covered, &mut best, &mut counter)?;
    best.sort();
    Ok(Some(best))
}

fn branch_dom(
    g: &BipartiteGraph,
    nbrs: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    covered: &mut [usize],
    best: &mut Vec<usize>,
    counter: &mut Counter,
) -> Result<()> {
    counter.tick()?;
    let pick = (0..nbrs.len())
        .filter(|&r| covered[r] == 0)
        .min_by_key(|&r| (nbrs[r].len(), r));
    let Some(r) = pick else {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return Ok(());
    };
    if chosen.len() + 1 >= best.len() {
        return Ok(());
    }
    for &b in &nbrs[r] {
        chosen.push(b);
        for rr in g.blue_neighbors(b) {
            covered[rr] += 1;
        }
        branch_dom(g, nbrs, chosen, covered, best, counter)?;
        for rr in g.blue_neighbors(b) {
            covered[rr] -= 1;
        }
        chosen.pop();
    }
    Ok(())
}

pub fn is_red_dominated(g: &BipartiteGraph, blue: &[usize]) -> bool {
    (0..g.red().len()).all(|r| blue.iter().any(|&b| g.adjacent(r, b)))
}

/// Blue set of size exactly `kappa` dominating all red vertices.
pub fn solve_rbds(instance: &GraphInstance) -> Result<Option<Vec<String>>> {
    let g = instance.expect_bipartite(GraphProblem::Rbds)?;
    Ok(rbds_indices(g, instance.kappa)?.map(|s| s.iter().map(|&b| g.blue()[b].clone()).collect()))
}

pub fn rbds_indices(g: &BipartiteGraph, kappa: usize) -> Result<Option<Vec<usize>>> {
    if kappa > g.blue().len() {
        return Ok(None);
    }
    let Some(mut set) = min_dominating_blue(g)? else {
        return Ok(None);
    };
    if set.len() > kappa {
        return Ok(None);
    }
    let mut b = 0;
    while set.len() < kappa {
        if !set.contains(&b) {
            set.push(b);
        }
        b += 1;
    }
    set.sort();
    Ok(Some(set))
}

/// Result of [`normalize_rbds`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    Instance(GraphInstance),
    /// The source is a no-instance that padding could turn into a yes-instance.
    Unsatisfiable(String),
}

/// Pads every red vertex with fresh degree-1 blue leaves up to the maximum
/// red degree.
///
/// Sources with an isolated red vertex or `kappa > |B|` are reported as
/// unsatisfiable: both are no-instances, and the new leaves would change that.
pub fn normalize_rbds(instance: &GraphInstance) -> Result<Normalized> {
    let g = instance.expect_bipartite(GraphProblem::Rbds)?;
    let nr = g.red().len();
    if let Some(r) = (0..nr).find(|&r| g.red_degree(r) == 0) {
        return Ok(Normalized::Unsatisfiable(format!("red vertex `{}` is isolated", g.red()[r])));
    }
    if instance.kappa > g.blue().len() {
        return Ok(Normalized::Unsatisfiable(format!(
            "kappa {} exceeds the {} blue vertices",
            instance.kappa,
            g.blue().len()
        )));
    }
    let ell = (0..nr).map(|r| g.red_degree(r)).max().unwrap_or(0);
    if (0..nr).all(|r| g.red_degree(r) == ell) {
        return Ok(Normalized::Instance(instance.clone()));
    }
    let mut taken: BTreeSet<String> = g.red().iter().chain(g.blue()).cloned().collect();
    let mut blue: Vec<String> = g.blue().to_vec();
    let mut edges: Vec<(String, String)> = g
        .edges()
        .into_iter()
        .map(|(r, b)| (g.red()[r].clone(), g.blue()[b].clone()))
        .collect();
    for r in 0..nr {
        let mut i = 1;
        for _ in g.red_degree(r)..ell {
            let name = loop {
                let cand = format!("pad_{}_{}", g.red()[r], i);
                i += 1;
                if !taken.contains(&cand) {
                    break cand;
                }
            };
            taken.insert(name.clone());
            blue.push(name.clone());
            edges.push((g.red()[r].clone(), name));
        }
    }
    let ng = BipartiteGraph::new(g.red(), &blue, &edges)?;
    Ok(Normalized::Instance(GraphInstance::rbds(ng, instance.kappa)))
}

pub fn is_clique(g: &Graph, set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &a)| set[i + 1..].iter().all(|&b| a != b && g.adjacent(a, b)))
}

pub fn clique_indices(g: &Graph, kappa: usize) -> Result<Option<Vec<usize>>> {
    let mut counter = Counter::new(DEFAULT_NODES);
    let cand: Vec<usize> = (0..g.len()).collect();
    let mut cur = Vec::new();
    if grow_clique(g, kappa, &cand, &mut cur, &mut counter)? {
        Ok(Some(cur))
    } else {
        Ok(None)
    }
}

fn grow_clique(
    g: &Graph,
    kappa: usize,
    cand: &[usize],
    cur: &mut Vec<usize>,
    counter: &mut Counter,
) -> Result<bool> {
    counter.tick()?;
    if cur.len() == kappa {
        return Ok(true);
    }
    if cur.len() + cand.len() < kappa {
        return Ok(false);
    }
    for (i, &v) in cand.iter().enumerate() {
        if cur.len() + cand.len() - i < kappa {
            break;
        }
        let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&u| g.adjacent(v, u)).collect();
        cur.push(v);
        if grow_clique(g, kappa, &next, cur, counter)? {
            return Ok(true);
        }
        cur.pop();
    }
    Ok(false)
}

pub fn solve_clique(instance: &GraphInstance) -> Result<Option<Vec<String>>> {
    let g = instance.expect_general(GraphProblem::Clique)?;
    Ok(clique_indices(g, instance.kappa)?.map(|s| g.names(&s)))
}

pub fn is_biclique(g: &BipartiteGraph, xs: &[usize], ys: &[usize]) -> bool {
    xs.iter().all(|&x| ys.iter().all(|&y| g.adjacent(x, y)))
}

/// `kappa` red vertices and `kappa` blue vertices inducing `K_{kappa,kappa}`.
pub fn biclique_indices(g: &BipartiteGraph, kappa: usize) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let mut counter = Counter::new(DEFAULT_NODES);
    let common: Vec<usize> = (0..g.blue().len()).collect();
    let mut cur = Vec::new();
    Ok(grow_biclique(g, kappa, 0, &common, &mut cur, &mut counter)?
        .map(|ys| (cur.clone(), ys[..kappa].to_vec())))
}

fn grow_biclique(
    g: &BipartiteGraph,
    kappa: usize,
    start: usize,
    common: &[usize],
    cur: &mut Vec<usize>,
    counter: &mut Counter,
) -> Result<Option<Vec<usize>>> {
    counter.tick()?;
    if common.len() < kappa {
        return Ok(None);
    }
    if cur.len() == kappa {
        return Ok(Some(common.to_vec()));
    }
    let nr = g.red().len();
    for x in start..nr {
        if cur.len() + (nr - x) < kappa {
            break;
        }
        let next: Vec<usize> = common.iter().copied().filter(|&y| g.adjacent(x, y)).collect();
        cur.push(x);
        if let Some(ys) = grow_biclique(g, kappa, x + 1, &next, cur, counter)? {
            return Ok(Some(ys));
        }
        cur.pop();
    }
    Ok(None)
}

pub fn solve_biclique(instance: &GraphInstance) -> Result<Option<(Vec<String>, Vec<String>)>> {
    let g = instance.expect_bipartite(GraphProblem::Biclique)?;
    Ok(biclique_indices(g, instance.kappa)?.map(|(xs, ys)| {
        (
            xs.iter().map(|&x| g.red()[x].clone()).collect(),
            ys.iter().map(|&y| g.blue()[y].clone()).collect(),
        )
    }))
}

pub fn is_perfect_code(g: &Graph, set: &[usize]) -> bool {
    let mut hits = vec![0usize; g.len()];
    for &v in set {
        for u in g.closed_neighbors(v) {
            hits[u] += 1;
        }
    }
    hits.iter().all(|&h| h == 1)
}

pub fn perfect_code_indices(g: &Graph, kappa: usize) -> Result<Option<Vec<usize>>> {
    let mut counter = Counter::new(DEFAULT_NODES);
    let closed: Vec<Vec<usize>> = (0..g.len()).map(|v| g.closed_neighbors(v)).collect();
    let mut covered = vec![false; g.len()];
    let mut cur = Vec::new();
    if grow_code(&closed, kappa, &mut covered, &mut cur, &mut counter)? {
        cur.sort();
        Ok(Some(cur))
    } else {
        Ok(None)
    }
}

fn grow_code(
    closed: &[Vec<usize>],
    kappa: usize,
    covered: &mut [bool],
    cur: &mut Vec<usize>,
    counter: &mut Counter,
) -> Result<bool> {
    counter.tick()?;
    let Some(u) = covered.iter().position(|&c| !c) else {
        return Ok(cur.len() == kappa);
    };
    if cur.len() == kappa {
        return Ok(false);
    }
    for &v in &closed[u] {
        if closed[v].iter().any(|&w| covered[w]) {
            continue;
        }
        for &w in &closed[v] {
            covered[w] = true;
        }
        cur.push(v);
        if grow_code(closed, kappa, covered, cur, counter)? {
            return Ok(true);
        }
        cur.pop();
        for &w in &closed[v] {
            covered[w] = false;
        }
    }
    Ok(false)
}

pub fn solve_perfect_code(instance: &GraphInstance) -> Result<Option<Vec<String>>> {
    let g = instance.expect_general(GraphProblem::PerfectCode)?;
    Ok(perfect_code_indices(g, instance.kappa)?.map(|s| g.names(&s)))
}

/// Solves whichever problem `instance` names.
pub fn solve(instance: &GraphInstance) -> Result<Option<GraphWitness>> {
    Ok(match instance.problem {
        GraphProblem::Rbds => solve_rbds(instance)?.map(GraphWitness::Set),
        GraphProblem::Clique => solve_clique(instance)?.map(GraphWitness::Set),
        GraphProblem::PerfectCode => solve_perfect_code(instance)?.map(GraphWitness::Set),
        GraphProblem::Biclique => solve_biclique(instance)?.map(|(x, y)| GraphWitness::Pair(x, y)),
    })
}
