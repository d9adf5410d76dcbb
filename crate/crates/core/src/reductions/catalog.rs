//! The hardness constructions as generators of control instances.
//!
//! Each tag maps a source instance of an auxiliary graph problem to a control
//! instance with the same answer. Fixed linear orders on vertex sets follow
//! the sorted vertex names. Lifting to `h > 1` either replaces candidates by
//! ordered blocks `c, c#1, ..., c#(h-1)` or, for the `(m-h)` constructions,
//! appends `p#1, ..., p#(h-1)` right after `p` in every vote.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::election::is_valid_id;
use crate::error::{Error, Result};
use crate::gen::{random_graph_instance, rng_from_seed};
use crate::graph::{self, normalize_rbds, BipartiteGraph, Graph, GraphInstance, GraphProblem, GraphWitness, Normalized};
use crate::procedures::ProcedureSpec;
use crate::solvers::{brute_force_solve_with, Budgets, Caps, ControlInstance, Problem, Solution};

use super::mcgarvey::{mcgarvey_election, OrientedGraph};

/// One catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReductionTag {
    CcavAmd,
    CcdvAmd,
    CcdvAmdDual,
    DcavAmd,
    DcdvAmd,
    DcdvAmdDual,
    CcavMh,
    CcdvMh,
    CcdvMhDual,
    DcavMh,
    DcdvMh,
    DcdvMhDual,
    CcacMh,
    CcavSucc,
    CcdvSucc,
    CcdvSuccDual,
    CcacSucc,
    CcdcSuccClique,
    CcdcSuccBiclique,
    DcacSucc,
    DcdcSuccClique,
    DcdcSuccBiclique,
}

/// Procedure family of a catalog target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetFamily {
    /// `h`-amendment, lifted with ordered blocks.
    Amendment,
    /// `(m-h)`-amendment, lifted with appended `p#i`.
    MMinusH,
    Successive,
}

impl ReductionTag {
    pub const ALL: [ReductionTag; 22] = [
        ReductionTag::CcavAmd,
        ReductionTag::CcdvAmd,
        ReductionTag::CcdvAmdDual,
        ReductionTag::DcavAmd,
        ReductionTag::DcdvAmd,
        ReductionTag::DcdvAmdDual,
        ReductionTag::CcavMh,
        ReductionTag::CcdvMh,
        ReductionTag::CcdvMhDual,
        ReductionTag::DcavMh,
        ReductionTag::DcdvMh,
        ReductionTag::DcdvMhDual,
        ReductionTag::CcacMh,
        ReductionTag::CcavSucc,
        ReductionTag::CcdvSucc,
        ReductionTag::CcdvSuccDual,
        ReductionTag::CcacSucc,
        ReductionTag::CcdcSuccClique,
        ReductionTag::CcdcSuccBiclique,
        ReductionTag::DcacSucc,
        ReductionTag::DcdcSuccClique,
        ReductionTag::DcdcSuccBiclique,
    ];

    pub fn as_str(self) -> &'static str {
        use ReductionTag::*;
        match self {
            CcavAmd => "ccav_amd",
            CcdvAmd => "ccdv_amd",
            CcdvAmdDual => "ccdv_amd_dual",
            DcavAmd => "dcav_amd",
            DcdvAmd => "dcdv_amd",
            DcdvAmdDual => "dcdv_amd_dual",
            CcavMh => "ccav_mh",
            CcdvMh => "ccdv_mh",
            CcdvMhDual => "ccdv_mh_dual",
            DcavMh => "dcav_mh",
            DcdvMh => "dcdv_mh",
            DcdvMhDual => "dcdv_mh_dual",
            CcacMh => "ccac_mh",
            CcavSucc => "ccav_succ",
            CcdvSucc => "ccdv_succ",
            CcdvSuccDual => "ccdv_succ_dual",
            CcacSucc => "ccac_succ",
            CcdcSuccClique => "ccdc_succ_clique",
            CcdcSuccBiclique => "ccdc_succ_biclique",
            DcacSucc => "dcac_succ",
            DcdcSuccClique => "dcdc_succ_clique",
            DcdcSuccBiclique => "dcdc_succ_biclique",
        }
    }

    pub fn source(self) -> GraphProblem {
        use ReductionTag::*;
        match self {
            DcavAmd | CcavMh | DcavMh | CcavSucc => GraphProblem::PerfectCode,
            CcdcSuccClique | DcdcSuccClique => GraphProblem::Clique,
            CcdcSuccBiclique | DcdcSuccBiclique => GraphProblem::Biclique,
            _ => GraphProblem::Rbds,
        }
    }

    pub fn target(self) -> Problem {
        use ReductionTag::*;
        match self {
            CcavAmd | CcavMh | CcavSucc => Problem::Ccav,
            CcdvAmd | CcdvAmdDual | CcdvMh | CcdvMhDual | CcdvSucc | CcdvSuccDual => Problem::Ccdv,
            DcavAmd | DcavMh => Problem::Dcav,
            DcdvAmd | DcdvAmdDual | DcdvMh | DcdvMhDual => Problem::Dcdv,
            CcacMh | CcacSucc => Problem::Ccac,
            CcdcSuccClique | CcdcSuccBiclique => Problem::Ccdc,
            DcacSucc => Problem::Dcac,
            DcdcSuccClique | DcdcSuccBiclique => Problem::Dcdc,
        }
    }

    pub fn family(self) -> TargetFamily {
        use ReductionTag::*;
        match self {
            CcavAmd | CcdvAmd | CcdvAmdDual | DcavAmd | DcdvAmd | DcdvAmdDual => TargetFamily::Amendment,
            CcavMh | CcdvMh | CcdvMhDual | DcavMh | DcdvMh | DcdvMhDual | CcacMh => TargetFamily::MMinusH,
            _ => TargetFamily::Successive,
        }
    }

    /// Whether the construction depends on the seed.
    pub fn is_seeded(self) -> bool {
        matches!(self, ReductionTag::DcavMh | ReductionTag::DcdvMh)
    }
}

impl fmt::Display for ReductionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReductionTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReductionTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::input(format!("unknown reduction `{s}`")))
    }
}

/// A catalog tag plus the procedure parameter for liftable targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReductionKind {
    pub tag: ReductionTag,
    pub h: Option<usize>,
}

impl ReductionKind {
    pub fn new(tag: ReductionTag) -> Self {
        ReductionKind { tag, h: None }
    }

    pub fn with_h(tag: ReductionTag, h: usize) -> Self {
        ReductionKind { tag, h: Some(h) }
    }

    fn resolved_h(&self) -> Result<usize> {
        match (self.tag.family(), self.h) {
            (_, Some(0)) => Err(Error::input("h must be at least 1")),
            (TargetFamily::Successive, Some(h)) if h != 1 => {
                Err(Error::input(format!("{} targets the successive procedure and takes no h", self.tag)))
            }
            (_, h) => Ok(h.unwrap_or(1)),
        }
    }

    fn procedure(&self, h: usize) -> Result<ProcedureSpec> {
        match self.tag.family() {
            TargetFamily::Amendment => ProcedureSpec::absolute(h),
            TargetFamily::MMinusH => ProcedureSpec::relative(h),
            TargetFamily::Successive => Ok(ProcedureSpec::Successive),
        }
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.h {
            Some(h) => write!(f, "{} h={h}", self.tag),
            None => write!(f, "{}", self.tag),
        }
    }
}

type Order = Vec<String>;

fn one(name: &str) -> Order {
    vec![name.to_string()]
}

fn cat(parts: &[&[String]]) -> Order {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// `(all[sel], all \ sel)` in the order of `all`.
fn split(all: &[String], sel: &[usize]) -> (Order, Order) {
    let sel: BTreeSet<usize> = sel.iter().copied().collect();
    let inside = all.iter().enumerate().filter(|(i, _)| sel.contains(i)).map(|(_, c)| c.clone()).collect();
    let outside = all.iter().enumerate().filter(|(i, _)| !sel.contains(i)).map(|(_, c)| c.clone()).collect();
    (inside, outside)
}

fn block_names(c: &str, h: usize) -> Order {
    std::iter::once(c.to_string()).chain((1..h).map(|i| format!("{c}#{i}"))).collect()
}

/// Construction over base candidates, expanded into blocks on `finish`.
struct Draft {
    problem: Problem,
    procedure: ProcedureSpec,
    registered: Order,
    unregistered: Order,
    agenda: Order,
    p: String,
    k: usize,
    v: Vec<(Order, usize)>,
    w: Vec<(Order, usize)>,
    blocks: BTreeMap<String, usize>,
    /// Agenda already spelled out over the expanded candidates.
    raw_agenda: Option<Order>,
}

impl Draft {
    fn new(problem: Problem, procedure: ProcedureSpec, registered: Order, agenda: Order, p: &str, k: usize) -> Self {
        Draft {
            problem,
            procedure,
            registered,
            unregistered: Vec::new(),
            agenda,
            p: p.to_string(),
            k,
            v: Vec::new(),
            w: Vec::new(),
            blocks: BTreeMap::new(),
            raw_agenda: None,
        }
    }

    fn vote(&mut self, count: usize, order: Order) {
        if count > 0 {
            self.v.push((order, count));
        }
    }

    fn unregistered_vote(&mut self, order: Order) {
        self.w.push((order, 1));
    }

    fn lift(&mut self, names: &[String], h: usize) {
        if h > 1 {
            for c in names {
                self.blocks.insert(c.clone(), h);
            }
        }
    }

    /// Appends `p#1..p#(h-1)` after `p` in every vote and places them just
    /// before `p` in reverse order in the agenda.
    fn append_p(&mut self, h: usize) {
        if h <= 1 {
            return;
        }
        self.blocks.insert(self.p.clone(), h);
        let mut agenda = Vec::new();
        for c in self.agenda.clone() {
            if c == self.p {
                agenda.extend((1..h).rev().map(|i| format!("{c}#{i}")));
                agenda.push(c);
            } else {
                agenda.extend(self.expand(&[c]));
            }
        }
        self.raw_agenda = Some(agenda);
    }

    fn expand(&self, order: &[String]) -> Order {
        order
            .iter()
            .flat_map(|c| match self.blocks.get(c) {
                Some(&h) => block_names(c, h),
                None => vec![c.clone()],
            })
            .collect()
    }

    fn finish(self) -> Result<ControlInstance> {
        let registered = self.expand(&self.registered);
        let unregistered = self.expand(&self.unregistered);
        let mut seen = BTreeSet::new();
        for c in registered.iter().chain(&unregistered) {
            if !is_valid_id(c) {
                return Err(Error::input(format!("vertex name yields the invalid candidate id `{c}`")));
            }
            if !seen.insert(c.as_str()) {
                return Err(Error::input(format!(
                    "vertex name `{c}` collides with another candidate of the construction"
                )));
            }
        }
        let agenda = match &self.raw_agenda {
            Some(a) => a.clone(),
            None => self.expand(&self.agenda),
        };
        let mut b = ControlInstance::builder(self.problem)
            .procedure(self.procedure)
            .candidates(&registered)
            .unregistered_candidates(&unregistered)
            .agenda(&agenda)
            .distinguished(&self.p)
            .budgets(Budgets::for_problem(self.problem, self.k));
        for (order, count) in &self.v {
            b = b.registered_vote(&self.expand(order), *count as u64);
        }
        for (order, count) in &self.w {
            b = b.unregistered_vote(&self.expand(order), *count as u64);
        }
        b.build()
    }
}

fn violated(tag: ReductionTag, assumption: impl fmt::Display) -> Error {
    Error::precondition(format!("{tag}: source must satisfy {assumption}"))
}

/// RBDS source without isolated vertices and with `1 <= kappa <= |B|`.
fn rbds_source(tag: ReductionTag, src: &GraphInstance) -> Result<BipartiteGraph> {
    let g = src
        .bipartite()
        .filter(|_| src.problem == GraphProblem::Rbds)
        .ok_or_else(|| Error::input(format!("{tag} needs an rbds source, found {}", src.problem)))?;
    if g.red().is_empty() || g.has_isolated_vertex() {
        return Err(violated(tag, "no isolated vertices and at least one red vertex"));
    }
    if src.kappa < 1 || src.kappa > g.blue().len() {
        return Err(violated(tag, "1 <= kappa <= |B|"));
    }
    Ok(g.clone())
}

/// RBDS source padded to a uniform red degree; returns the graph and `ell`.
fn uniform_rbds(tag: ReductionTag, src: &GraphInstance) -> Result<(BipartiteGraph, usize)> {
    let original = rbds_source(tag, src)?;
    match normalize_rbds(src)? {
        Normalized::Instance(inst) => {
            let g = inst.bipartite().expect("rbds is bipartite").clone();
            let ell = g.red_degree(0);
            if g.blue().len() != original.blue().len() {
                log::info!("{tag}: padded to uniform red degree {ell} with {} blue leaves", g.blue().len() - original.blue().len());
            }
            Ok((g, ell))
        }
        Normalized::Unsatisfiable(why) => Err(violated(tag, format!("padding to a uniform red degree ({why})"))),
    }
}

fn general_source(tag: ReductionTag, src: &GraphInstance, want: GraphProblem) -> Result<Graph> {
    src.general()
        .filter(|_| src.problem == want)
        .cloned()
        .ok_or_else(|| Error::input(format!("{tag} needs a {want} source, found {}", src.problem)))
}

fn biclique_source(tag: ReductionTag, src: &GraphInstance) -> Result<BipartiteGraph> {
    src.bipartite()
        .filter(|_| src.problem == GraphProblem::Biclique)
        .cloned()
        .ok_or_else(|| Error::input(format!("{tag} needs a biclique source, found {}", src.problem)))
}

/// Builds the catalog instance with lexicographic free agenda positions.
pub fn build_reduction(kind: ReductionKind, source: &GraphInstance) -> Result<ControlInstance> {
    build(kind, source, None)
}

/// As [`build_reduction`], with `seed` permuting the free agenda positions of
/// the seeded constructions.
pub fn build_reduction_seeded(kind: ReductionKind, source: &GraphInstance, seed: u64) -> Result<ControlInstance> {
    build(kind, source, Some(seed))
}

fn build(kind: ReductionKind, src: &GraphInstance, seed: Option<u64>) -> Result<ControlInstance> {
    use ReductionTag::*;
    let tag = kind.tag;
    let h = kind.resolved_h()?;
    let proc = kind.procedure(h)?;
    let kappa = src.kappa;
    match tag {
        CcavAmd => {
            let g = rbds_source(tag, src)?;
            let r = g.red().to_vec();
            let mut d = Draft::new(Problem::Ccav, proc, cat(&[&r, &one("p"), &one("q")]), cat(&[&one("q"), &r, &one("p")]), "p", kappa);
            d.vote(kappa + 1, cat(&[&one("q"), &r, &one("p")]));
            d.vote(1, cat(&[&one("p"), &r, &one("q")]));
            d.vote(1, cat(&[&r, &one("p"), &one("q")]));
            for b in 0..g.blue().len() {
                let (nb, rest) = split(&r, &g.blue_neighbors(b));
                d.unregistered_vote(cat(&[&rest, &one("p"), &one("q"), &nb]));
            }
            d.lift(&r, h);
            d.finish()
        }
        CcdvAmd | DcdvAmd => {
            let (g, ell) = uniform_rbds(tag, src)?;
            let nb_count = g.blue().len();
            if !(nb_count > kappa && kappa > 1) {
                return Err(violated(tag, "|B| > kappa > 1"));
            }
            if ell + kappa > nb_count {
                return Err(violated(tag, "ell + kappa <= |B|"));
            }
            let r = g.red().to_vec();
            let problem = if tag == CcdvAmd { Problem::Ccdv } else { Problem::Dcdv };
            let mut d = Draft::new(problem, proc, cat(&[&r, &one("p"), &one("q")]), cat(&[&one("q"), &r, &one("p")]), "p", kappa);
            let filler = nb_count + 1 - ell - kappa;
            if tag == CcdvAmd {
                d.vote(filler, cat(&[&r, &one("p"), &one("q")]));
                d.vote(ell, cat(&[&one("p"), &one("q"), &r]));
            } else {
                d.vote(filler, cat(&[&r, &one("q"), &one("p")]));
                d.vote(ell, cat(&[&one("q"), &one("p"), &r]));
            }
            for b in 0..nb_count {
                let (nb, rest) = split(&r, &g.blue_neighbors(b));
                if tag == CcdvAmd {
                    d.vote(1, cat(&[&nb, &one("q"), &rest, &one("p")]));
                } else {
                    d.vote(1, cat(&[&one("p"), &nb, &one("q"), &rest]));
                }
            }
            d.lift(&r, h);
            d.finish()
        }
        CcdvAmdDual => {
            let g = rbds_source(tag, src)?;
            let r = g.red().to_vec();
            let qq = one("q_prime");
            let k = g.blue().len() - kappa;
            let mut d = Draft::new(
                Problem::Ccdv,
                proc,
                cat(&[&r, &one("p"), &one("q"), &qq]),
                cat(&[&one("q"), &qq, &r, &one("p")]),
                "p",
                k,
            );
            d.vote(kappa, cat(&[&one("p"), &one("q"), &r, &qq]));
            d.vote(1, cat(&[&r, &one("p"), &one("q"), &qq]));
            for b in 0..g.blue().len() {
                let (nb, rest) = split(&r, &g.blue_neighbors(b));
                d.vote(1, cat(&[&qq, &rest, &one("q"), &nb, &one("p")]));
            }
            d.lift(&cat(&[&r, &qq]), h);
            d.finish()
        }
        DcdvAmdDual | DcdvMhDual | CcdvMhDual | CcdvSuccDual => {
            let g = rbds_source(tag, src)?;
            let nb_count = g.blue().len();
            let min_blue = if tag == DcdvMhDual { kappa + 2 } else { kappa + 1 };
            if nb_count < min_blue {
                return Err(violated(tag, if tag == DcdvMhDual { "|B| >= kappa + 2" } else { "kappa < |B|" }));
            }
            let r = g.red().to_vec();
            let constructive = matches!(tag, CcdvMhDual | CcdvSuccDual);
            let problem = if constructive { Problem::Ccdv } else { Problem::Dcdv };
            let mut d = Draft::new(problem, proc, cat(&[&r, &one("p"), &one("q")]), cat(&[&one("q"), &r, &one("p")]), "p", nb_count - kappa);
            if constructive {
                d.vote(kappa - 1, cat(&[&one("p"), &one("q"), &r]));
                d.vote(1, cat(&[&r, &one("p"), &one("q")]));
            } else {
                d.vote(kappa, cat(&[&one("q"), &one("p"), &r]));
                d.vote(1, cat(&[&r, &one("q"), &one("p")]));
            }
            for b in 0..nb_count {
                let (nb, rest) = split(&r, &g.blue_neighbors(b));
                if constructive {
                    d.vote(1, cat(&[&one("q"), &rest, &one("p"), &nb]));
                } else {
                    d.vote(1, cat(&[&one("p"), &rest, &one("q"), &nb]));
                }
            }
            match tag {
                DcdvAmdDual => d.lift(&r, h),
                CcdvMhDual => d.append_p(h),
                DcdvMhDual => {
                    d.blocks.insert("p".into(), h);
                    d.raw_agenda = Some(p_block_at_end(&d, h, &r, None));
                }
                _ => {}
            }
            d.finish()
        }
        DcavAmd | DcavMh => {
            let g = general_source(tag, src, GraphProblem::PerfectCode)?;
            if kappa < 2 {
                return Err(violated(tag, "kappa >= 2"));
            }
            let x: Order = g.vertices().iter().map(|v| format!("x_{v}")).collect();
            let y: Order = g.vertices().iter().map(|v| format!("y_{v}")).collect();
            let all = cat(&[&x, &y, &one("p"), &one("q")]);
            let mut d = Draft::new(Problem::Dcav, proc, all, cat(&[&one("q"), &x, &y, &one("p")]), "p", kappa);
            d.vote(1, cat(&[&one("p"), &one("q"), &x, &y]));
            d.vote(kappa + 2, cat(&[&one("q"), &one("p"), &x, &y]));
            d.vote(kappa - 2, cat(&[&one("p"), &x, &one("q"), &y]));
            d.vote(kappa + 2, cat(&[&one("p"), &x, &y, &one("q")]));
            for i in 0..g.len() {
                let nbhd = g.closed_neighbors(i);
                let (nx, rx) = split(&x, &nbhd);
                let (ny, ry) = split(&y, &nbhd);
                d.unregistered_vote(cat(&[&nx, &ry, &one("q"), &one("p"), &rx, &ny]));
            }
            if tag == DcavAmd {
                d.lift(&cat(&[&x, &y]), h);
            } else {
                d.blocks.insert("p".into(), h);
                d.raw_agenda = Some(p_block_at_end(&d, h, &cat(&[&x, &y]), seed));
            }
            d.finish()
        }
        DcdvMh => {
            // Same votes as the h = 1 deletion construction, with `p` as a block.
            let base = build(ReductionKind::with_h(DcdvAmd, 1), src, None).map_err(|e| retag(e, DcdvAmd, tag))?;
            let (g, _) = uniform_rbds(tag, src)?;
            let r = g.red().to_vec();
            let mut d = Draft::new(Problem::Dcdv, proc, cat(&[&r, &one("p"), &one("q")]), Vec::new(), "p", kappa);
            for v in base.registered_votes() {
                let order: Order = v.order().iter().map(|&c| base.name(c).to_string()).collect();
                d.vote(v.multiplicity() as usize, order);
            }
            d.blocks.insert("p".into(), h);
            d.raw_agenda = Some(p_block_at_end(&d, h, &r, seed));
            d.finish()
        }
        CcavMh | CcavSucc => {
            let g = general_source(tag, src, GraphProblem::PerfectCode)?;
            if kappa < 3 {
                return Err(violated(tag, "kappa >= 3"));
            }
            let x: Order = g.vertices().iter().map(|v| format!("x_{v}")).collect();
            let y: Order = g.vertices().iter().map(|v| format!("y_{v}")).collect();
            let mut d = Draft::new(Problem::Ccav, proc, cat(&[&x, &y, &one("p")]), cat(&[&x, &y, &one("p")]), "p", kappa);
            d.vote(kappa + 2, cat(&[&one("p"), &x, &y]));
            d.vote(kappa - 2, cat(&[&x, &one("p"), &y]));
            d.vote(kappa + 2, cat(&[&x, &y, &one("p")]));
            for i in 0..g.len() {
                let nbhd = g.closed_neighbors(i);
                let (nx, rx) = split(&x, &nbhd);
                let (ny, ry) = split(&y, &nbhd);
                d.unregistered_vote(cat(&[&nx, &ry, &one("p"), &rx, &ny]));
            }
            d.append_p(h);
            d.finish()
        }
        CcdvMh => {
            let (g, ell) = uniform_rbds(tag, src)?;
            let nb_count = g.blue().len();
            if kappa < 3 {
                return Err(violated(tag, "kappa >= 3"));
            }
            let r = g.red().to_vec();
            let mut d = Draft::new(Problem::Ccdv, proc, cat(&[&r, &one("p"), &one("q")]), cat(&[&one("q"), &r, &one("p")]), "p", kappa);
            d.vote(nb_count + 1 - kappa, cat(&[&r, &one("p"), &one("q")]));
            d.vote(ell, cat(&[&one("q"), &one("p"), &r]));
            d.vote(ell - 1, cat(&[&one("p"), &one("q"), &r]));
            for b in 0..nb_count {
                let (nb, rest) = split(&r, &g.blue_neighbors(b));
                d.vote(1, cat(&[&one("q"), &nb, &one("p"), &rest]));
            }
            d.append_p(h);
            d.finish()
        }
        CcacMh => {
            let g = rbds_source(tag, src)?;
            let r = g.red().to_vec();
            let b = g.blue().to_vec();
            let pblock = block_names("p", h);
            let mut verts = cat(&[&r, &b, &pblock]);
            verts.sort();
            let mut arcs: Vec<(String, String)> = Vec::new();
            for (i, ri) in r.iter().enumerate() {
                for rj in &r[i + 1..] {
                    arcs.push((ri.clone(), rj.clone()));
                }
                for pc in &pblock {
                    arcs.push((ri.clone(), pc.clone()));
                }
                for (j, bj) in b.iter().enumerate() {
                    if g.adjacent(i, j) {
                        arcs.push((bj.clone(), ri.clone()));
                    } else {
                        arcs.push((ri.clone(), bj.clone()));
                    }
                }
            }
            for (i, bi) in b.iter().enumerate() {
                for bj in &b[i + 1..] {
                    arcs.push((bi.clone(), bj.clone()));
                }
                for pc in &pblock {
                    arcs.push((pc.clone(), bi.clone()));
                }
            }
            for (i, pi) in pblock.iter().enumerate() {
                for pj in &pblock[i + 1..] {
                    arcs.push((pi.clone(), pj.clone()));
                }
            }
            let taken: BTreeSet<&String> = verts.iter().collect();
            if taken.len() != verts.len() {
                return Err(Error::input("vertex names collide with the construction candidates"));
            }
            let og = OrientedGraph::new(&verts, &arcs)?;
            let e = mcgarvey_election(&og)?;
            let mut d = Draft::new(Problem::Ccac, proc, cat(&[&r, &pblock]), cat(&[&r, &b, &pblock]), "p", kappa);
            d.unregistered = b.clone();
            for (order, count) in e.vote_orders() {
                d.vote(count as usize, order.into_iter().map(str::to_string).collect());
            }
            d.finish()
        }
        CcdvSucc => {
            let (g, ell) = uniform_rbds(tag, src)?;
            let nb_count = g.blue().len();
            let r = g.red().to_vec();
            let (p, pp, q) = (one("p"), one("p_prime"), one("q"));
            let mut d = Draft::new(Problem::Ccdv, proc, cat(&[&r, &p, &pp, &q]), cat(&[&q, &r, &pp, &p]), "p", kappa);
            d.vote(nb_count - kappa, cat(&[&r, &p, &pp, &q]));
            d.vote(ell - 1, cat(&[&q, &p, &pp, &r]));
            d.vote(1, cat(&[&q, &r, &p, &pp]));
            d.vote(ell, cat(&[&pp, &p, &q, &r]));
            for b in 0..nb_count {
                let (nb, rest) = split(&r, &g.blue_neighbors(b));
                d.vote(1, cat(&[&q, &nb, &pp, &p, &rest]));
            }
            d.finish()
        }
        CcacSucc | DcacSucc => {
            let g = rbds_source(tag, src)?;
            let b = g.blue().to_vec();
            let (p, q) = (one("p"), one("q"));
            let mut d = if tag == CcacSucc {
                let mut d = Draft::new(Problem::Ccac, proc, cat(&[&p, &q]), cat(&[&q, &b, &p]), "p", kappa);
                d.vote(1, cat(&[&p, &b, &q]));
                d.vote(g.red().len(), cat(&[&q, &p, &b]));
                for r in 0..g.red().len() {
                    let (nr, rest) = split(&b, &g.red_neighbors(r));
                    d.vote(1, cat(&[&nr, &q, &p, &rest]));
                }
                d
            } else {
                let mut d = Draft::new(Problem::Dcac, proc, p.clone(), cat(&[&p, &b]), "p", kappa);
                d.vote(g.red().len() - 1, cat(&[&p, &b]));
                for r in 0..g.red().len() {
                    let (nr, rest) = split(&b, &g.red_neighbors(r));
                    d.vote(1, cat(&[&nr, &p, &rest]));
                }
                d
            };
            d.unregistered = b;
            d.finish()
        }
        CcdcSuccClique | DcdcSuccClique => {
            let g = general_source(tag, src, GraphProblem::Clique)?;
            let verts = g.vertices().to_vec();
            let m = g.edges().len();
            let pairs = kappa * kappa.saturating_sub(1);
            if kappa < 1 || kappa > verts.len() {
                return Err(violated(tag, "1 <= kappa <= |V(G)|"));
            }
            let (p, q) = (one("p"), one("q"));
            let d = if tag == CcdcSuccClique {
                if m < pairs {
                    return Err(violated(tag, "|E(G)| >= kappa * (kappa - 1)"));
                }
                let mut d = Draft::new(Problem::Ccdc, proc, cat(&[&verts, &p]), cat(&[&p, &verts]), "p", kappa);
                d.vote(m - pairs + 1, cat(&[&p, &verts]));
                for (a, b) in g.edges() {
                    let (e, rest) = split(&verts, &[a, b]);
                    d.vote(1, cat(&[&e, &p, &rest]));
                }
                d
            } else {
                if kappa < 2 || m < pairs / 2 {
                    return Err(violated(tag, "|E(G)| >= kappa * (kappa - 1) / 2 > 0"));
                }
                let mut d = Draft::new(Problem::Dcdc, proc, cat(&[&verts, &p, &q]), cat(&[&q, &p, &verts]), "p", kappa);
                d.vote(m - pairs / 2 + 1, cat(&[&q, &p, &verts]));
                d.vote(pairs / 2, cat(&[&p, &verts, &q]));
                for (a, b) in g.edges() {
                    let (e, rest) = split(&verts, &[a, b]);
                    d.vote(1, cat(&[&e, &q, &p, &rest]));
                }
                d
            };
            d.finish()
        }
        CcdcSuccBiclique | DcdcSuccBiclique => {
            let g = biclique_source(tag, src)?;
            let x = g.red().to_vec();
            let (nx, ny) = (g.red().len(), g.blue().len());
            let (p, q) = (one("p"), one("q"));
            let d = if tag == CcdcSuccBiclique {
                if !(kappa >= 1 && nx > kappa && ny > 2 * kappa) {
                    return Err(violated(tag, "|X| > kappa, |Y| > 2 * kappa and kappa >= 1"));
                }
                let mut d = Draft::new(Problem::Ccdc, proc, cat(&[&x, &p]), cat(&[&p, &x]), "p", nx - kappa);
                for y in 0..ny {
                    let (nb, rest) = split(&x, &g.blue_neighbors(y));
                    d.vote(1, cat(&[&rest, &p, &nb]));
                }
                d.vote(ny - 2 * kappa + 1, cat(&[&p, &x]));
                d
            } else {
                if !(nx.min(ny) > kappa && kappa > 1) {
                    return Err(violated(tag, "min(|X|, |Y|) > kappa > 1"));
                }
                let mut d = Draft::new(Problem::Dcdc, proc, cat(&[&x, &p, &q]), cat(&[&q, &p, &x]), "p", nx - kappa);
                d.vote(kappa, cat(&[&p, &x, &q]));
                d.vote(ny - kappa + 1, cat(&[&q, &p, &x]));
                for y in 0..ny {
                    let (nb, rest) = split(&x, &g.blue_neighbors(y));
                    d.vote(1, cat(&[&rest, &q, &p, &nb]));
                }
                d
            };
            d.finish()
        }
    }
}

fn retag(e: Error, from: ReductionTag, to: ReductionTag) -> Error {
    match e {
        Error::Precondition(m) => Error::Precondition(m.replacen(from.as_str(), to.as_str(), 1)),
        other => other,
    }
}

/// Agenda `q, middle.., p#1..p#(h-1)` with `p` inserted after `q`.
///
/// Without a seed, `middle` keeps its order and `p` goes last; a seed
/// shuffles `middle` and picks the position of `p`.
fn p_block_at_end(d: &Draft, h: usize, middle: &[String], seed: Option<u64>) -> Order {
    let mut mid = middle.to_vec();
    let mut agenda = vec!["q".to_string()];
    let tail: Order = (1..h).map(|i| format!("p#{i}")).collect();
    match seed {
        None => {
            agenda.extend(mid);
            agenda.extend(tail);
            agenda.push(d.p.clone());
        }
        Some(s) => {
            let mut rng = rng_from_seed(s);
            mid.shuffle(&mut rng);
            agenda.extend(mid);
            agenda.extend(tail);
            let at = rng.gen_range(1..=agenda.len());
            agenda.insert(at, d.p.clone());
        }
    }
    agenda
}

/// Outcome of solving both sides of a reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionCheck {
    pub source_answer: bool,
    pub target_answer: bool,
    pub agree: bool,
    pub source_witness: Option<GraphWitness>,
    pub target: Solution,
}

impl fmt::Display for ReductionCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "YES" } else { "NO" };
        writeln!(f, "{}", if self.agree { "AGREE" } else { "DISAGREE" })?;
        writeln!(f, "source {}", yn(self.source_answer))?;
        match &self.source_witness {
            Some(GraphWitness::Set(s)) => writeln!(f, "source-witness {}", s.join(" "))?,
            Some(GraphWitness::Pair(a, b)) => writeln!(f, "source-witness {} | {}", a.join(" "), b.join(" "))?,
            None => {}
        }
        write!(f, "target {}", yn(self.target_answer))
    }
}

/// Oracle limits used on reduction targets.
pub const TARGET_CAPS: Caps = Caps { m: 64, n: 24, k: 6 };

/// Builds the target and solves both sides exhaustively.
pub fn verify_reduction(kind: ReductionKind, source: &GraphInstance) -> Result<ReductionCheck> {
    let target = build_reduction(kind, source)?;
    verify_pair(source, &target)
}

/// Solves `source` and `target` exhaustively and compares the answers.
pub fn verify_pair(source: &GraphInstance, target: &ControlInstance) -> Result<ReductionCheck> {
    let source_witness = graph::solve(source)?;
    let solution = brute_force_solve_with(target, TARGET_CAPS, 1)?;
    let source_answer = source_witness.is_some();
    Ok(ReductionCheck {
        source_answer,
        target_answer: solution.decision,
        agree: source_answer == solution.decision,
        source_witness,
        target: solution,
    })
}

/// Size bounds for random reduction sources.
#[derive(Debug, Clone, Copy)]
pub struct SourceBounds {
    /// Maximum size of each side of a bipartite source.
    pub max_part: usize,
    /// Maximum vertex count of a general source.
    pub max_vertices: usize,
    pub max_kappa: usize,
}

impl Default for SourceBounds {
    fn default() -> Self {
        SourceBounds { max_part: 5, max_vertices: 6, max_kappa: 3 }
    }
}

/// Rejection-samples a source that `kind` accepts.
///
/// A fair coin picks the wanted source answer; sampling keeps the first
/// admissible source with that answer and falls back to any admissible one.
pub fn random_source<R: Rng>(rng: &mut R, kind: ReductionKind, bounds: SourceBounds) -> Result<GraphInstance> {
    let problem = kind.tag.source();
    let part = if problem.is_bipartite() { bounds.max_part } else { bounds.max_vertices };
    let want = rng.gen_bool(0.5);
    let mut fallback = None;
    for _ in 0..20_000 {
        let src = random_graph_instance(rng, problem, part, bounds.max_kappa);
        match build_reduction(kind, &src) {
            Ok(_) => {}
            Err(Error::Precondition(_)) => continue,
            Err(e) => return Err(e),
        }
        if graph::solve(&src)?.is_some() == want {
            return Ok(src);
        }
        fallback.get_or_insert(src);
    }
    fallback.ok_or_else(|| Error::resource(format!("no admissible source found for {kind}")))
}
