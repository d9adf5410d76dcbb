//! Voter control through exact-size vote selection.
//!
//! The exact problems fix `|V'| = k` and `|W'| = k'`; the standard problems
//! sweep those sizes in order of edit count, so the first hit is a minimum
//! witness.

use std::collections::BTreeMap;

use crate::election::{Profile, Vote};
use crate::error::{Error, Result};
use crate::ilp::{solve_feasibility, IntegerProgram, Relation};
use crate::procedures::{HMode, ProcedureSpec, Step};
use crate::reductions::OrientedGraph;

use super::context::{pools, take, Pool};
use super::{ControlInstance, Goal, Problem, Solution, Witness};

/// Largest candidate count accepted by [`solve_mgcev`].
pub const MGCEV_MAX_CANDIDATES: usize = 5;
/// Largest focus prefix enumerated by [`solve_edcev_h_amendment`].
pub const EDCEV_MAX_FOCUS: usize = 6;
/// Largest predecessor count (plus one) for [`solve_eccev_successive`].
pub const ECCEV_MAX_PREFIX: usize = 8;

/// Target majority graph to realise with exactly `k` registered and `k'`
/// unregistered votes. Votes are over the indices of `candidates`.
#[derive(Debug, Clone)]
pub struct MgcevInstance {
    pub candidates: Vec<String>,
    pub registered_votes: Vec<Vote>,
    pub unregistered_votes: Vec<Vote>,
    pub target: OrientedGraph,
    pub k: u64,
    pub k_prime: u64,
}

/// Chosen votes as `(vote index, count)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditChoice {
    /// `V'`, drawn from the registered votes.
    pub kept: Vec<(usize, u64)>,
    /// `W'`, drawn from the unregistered votes.
    pub added: Vec<(usize, u64)>,
}

/// Voter-control instance with exact selection sizes. The goal, agenda and
/// procedure come from `base`.
#[derive(Debug, Clone)]
pub struct ExactEditInstance {
    pub base: ControlInstance,
    pub k: u64,
    pub k_prime: u64,
}

impl ExactEditInstance {
    pub fn new(base: ControlInstance, k: u64, k_prime: u64) -> Result<Self> {
        let nv: u64 = base.registered_votes().iter().map(|v| v.multiplicity()).sum();
        let nw: u64 = base.unregistered_votes().iter().map(|v| v.multiplicity()).sum();
        if k > nv || k_prime > nw {
            return Err(Error::input(format!(
                "exact sizes ({k}, {k_prime}) exceed the vote pools ({nv}, {nw})"
            )));
        }
        if !base.unregistered_candidates().is_empty() {
            return Err(Error::input("voter control takes no unregistered candidates"));
        }
        Ok(ExactEditInstance { base, k, k_prime })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Want {
    Beats,
    Loses,
    Ties,
    NotBeats,
}

/// Vote pools over one candidate universe, with per-pair support ranges.
struct Pools<'a> {
    m: usize,
    vvotes: &'a [Vote],
    wvotes: &'a [Vote],
    vpools: Vec<Pool>,
    wpools: Vec<Pool>,
}

impl<'a> Pools<'a> {
    fn new(m: usize, vvotes: &'a [Vote], wvotes: &'a [Vote]) -> Self {
        Pools {
            m,
            vvotes,
            wvotes,
            vpools: pools(vvotes),
            wpools: pools(wvotes),
        }
    }

    fn choice(&self, vcounts: &[u64], wcounts: &[u64]) -> EditChoice {
        EditChoice {
            kept: take(&self.vpools, vcounts),
            added: take(&self.wpools, wcounts),
        }
    }

    /// Feasible range of `#{a before b}` in a selection of exact sizes.
    fn support_range(&self, a: usize, b: usize, k: u64, k2: u64) -> (u64, u64) {
        let side = |votes: &[Vote], pools: &[Pool], want: u64| {
            let total: u64 = pools.iter().map(|p| p.total).sum();
            let ab: u64 = pools
                .iter()
                .filter(|p| votes[p.rep].prefers(a, b))
                .map(|p| p.total)
                .sum();
            (want.saturating_sub(total - ab), want.min(ab))
        };
        let (l1, h1) = side(self.vvotes, &self.vpools, k);
        let (l2, h2) = side(self.wvotes, &self.wpools, k2);
        (l1 + l2, h1 + h2)
    }

    /// Integer program over the orders restricted to `focus`; returns pool
    /// counts for `V'` and `W'`.
    fn solve(&self, focus: &[usize], k: u64, k2: u64, reqs: &[(usize, usize, Want)]) -> Result<Option<(Vec<u64>, Vec<u64>)>> {
        let key = |v: &Vote| -> Vec<usize> {
            let mut f = focus.to_vec();
            f.sort_by_key(|&c| v.rank()[c]);
            f
        };
        let mut groups: BTreeMap<Vec<usize>, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (i, p) in self.vpools.iter().enumerate() {
            groups.entry(key(&self.vvotes[p.rep])).or_default().0.push(i);
        }
        for (i, p) in self.wpools.iter().enumerate() {
            groups.entry(key(&self.wvotes[p.rep])).or_default().1.push(i);
        }
        let mut ip = IntegerProgram::new();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (g, (vi, wi)) in groups.values().enumerate() {
            let vcap: u64 = vi.iter().map(|&i| self.vpools[i].total).sum();
            let wcap: u64 = wi.iter().map(|&i| self.wpools[i].total).sum();
            xs.push(if vcap > 0 { Some(ip.add_variable(format!("x{g}"), 0, vcap as i64)?) } else { None });
            ys.push(if wcap > 0 { Some(ip.add_variable(format!("y{g}"), 0, wcap as i64)?) } else { None });
        }
        let all_x: Vec<(usize, i64)> = xs.iter().flatten().map(|&v| (v, 1)).collect();
        let all_y: Vec<(usize, i64)> = ys.iter().flatten().map(|&v| (v, 1)).collect();
        ip.add_constraint(&all_x, Relation::Eq, k as i64, 1)?;
        ip.add_constraint(&all_y, Relation::Eq, k2 as i64, 1)?;
        let total = (k + k2) as i64;
        for &(a, b, want) in reqs {
            let coeffs: Vec<(usize, i64)> = groups
                .keys()
                .enumerate()
                .filter(|(_, order)| {
                    order.iter().position(|&c| c == a) < order.iter().position(|&c| c == b)
                })
                .flat_map(|(g, _)| xs[g].into_iter().chain(ys[g]))
                .map(|v| (v, 1))
                .collect();
            let rel = match want {
                Want::Beats => Relation::Gt,
                Want::Loses => Relation::Lt,
                Want::Ties => Relation::Eq,
                Want::NotBeats => Relation::Le,
            };
            ip.add_constraint(&coeffs, rel, total, 2)?;
        }
        let Some(sol) = solve_feasibility(&ip)? else {
            return Ok(None);
        };
        let mut vcounts = vec![0u64; self.vpools.len()];
        let mut wcounts = vec![0u64; self.wpools.len()];
        for (g, (vi, wi)) in groups.values().enumerate() {
            let spread = |var: Option<usize>, members: &[usize], pools: &[Pool], out: &mut [u64]| {
                let mut left = var.map_or(0, |v| sol.values[v] as u64);
                for &i in members {
                    let t = left.min(pools[i].total);
                    out[i] = t;
                    left -= t;
                }
            };
            spread(xs[g], vi, &self.vpools, &mut vcounts);
            spread(ys[g], wi, &self.wpools, &mut wcounts);
        }
        Ok(Some((vcounts, wcounts)))
    }

    fn profile(&self, vcounts: &[u64], wcounts: &[u64]) -> Profile<'a> {
        let v = self.vpools.iter().zip(vcounts).map(|(pl, &k)| (self.vvotes[pl.rep].rank(), k));
        let w = self.wpools.iter().zip(wcounts).map(|(pl, &k)| (self.wvotes[pl.rep].rank(), k));
        Profile::new(self.m, v.chain(w))
    }
}

/// Exact majority-graph realisation by integer programming over the
/// occurring preference orders.
pub fn solve_mgcev(instance: &MgcevInstance) -> Result<Option<EditChoice>> {
    let m = instance.candidates.len();
    if m > MGCEV_MAX_CANDIDATES {
        return Err(Error::resource(format!(
            "MGCEV accepts at most {MGCEV_MAX_CANDIDATES} candidates, got {m}"
        )));
    }
    if instance.target.vertices() != instance.candidates.as_slice() {
        return Err(Error::input("target graph must span exactly the candidates"));
    }
    for v in instance.registered_votes.iter().chain(&instance.unregistered_votes) {
        if v.order().len() != m {
            return Err(Error::input("vote is not over the candidate set"));
        }
    }
    let pools = Pools::new(m, &instance.registered_votes, &instance.unregistered_votes);
    let nv: u64 = pools.vpools.iter().map(|p| p.total).sum();
    let nw: u64 = pools.wpools.iter().map(|p| p.total).sum();
    if instance.k > nv || instance.k_prime > nw {
        return Ok(None);
    }
    let focus: Vec<usize> = (0..m).collect();
    let mut reqs = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let want = if instance.target.has_arc(a, b) {
                Want::Beats
            } else if instance.target.has_arc(b, a) {
                Want::Loses
            } else {
                Want::Ties
            };
            reqs.push((a, b, want));
        }
    }
    Ok(pools
        .solve(&focus, instance.k, instance.k_prime, &reqs)?
        .map(|(v, w)| pools.choice(&v, &w)))
}

/// Amendment simulation on a relation given as a closure.
fn amendment_on(beats: impl Fn(usize, usize) -> bool, seq: &[usize], step: usize) -> usize {
    let mut queue: std::collections::VecDeque<usize> = seq.iter().copied().collect();
    if step == 0 {
        return seq[0];
    }
    while queue.len() > 1 {
        let head = queue[0];
        let end = queue.len().min(step + 1);
        if (1..end).all(|i| beats(head, queue[i])) {
            queue.drain(1..end);
        } else {
            queue.pop_front();
        }
    }
    queue[0]
}

struct ConfigSearch<'s, 'a> {
    pools: &'s Pools<'a>,
    focus: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    tail: Vec<usize>,
    p: usize,
    step: usize,
    k: u64,
    k2: u64,
}

impl ConfigSearch<'_, '_> {
    fn options(&self, a: usize, b: usize) -> Vec<Want> {
        let (lo, hi) = self.pools.support_range(a, b, self.k, self.k2);
        let total = self.k + self.k2;
        let mut out = Vec::new();
        if 2 * hi > total {
            out.push(Want::Beats);
        }
        if 2 * lo < total {
            out.push(Want::Loses);
        }
        if total.is_multiple_of(2) && 2 * lo <= total && total <= 2 * hi {
            out.push(Want::Ties);
        }
        out
    }

    fn dfs(&self, reqs: &mut Vec<(usize, usize, Want)>) -> Result<Option<(Vec<u64>, Vec<u64>)>> {
        let depth = reqs.len();
        if depth == self.pairs.len() {
            return self.leaf(reqs);
        }
        let (a, b) = self.pairs[depth];
        for want in self.options(a, b) {
            reqs.push((a, b, want));
            let feasible = self.pools.solve(&self.focus, self.k, self.k2, reqs)?.is_some();
            if feasible {
                if let Some(hit) = self.dfs(reqs)? {
                    return Ok(Some(hit));
                }
            }
            reqs.pop();
        }
        Ok(None)
    }

    fn leaf(&self, reqs: &[(usize, usize, Want)]) -> Result<Option<(Vec<u64>, Vec<u64>)>> {
        let beats = |x: usize, y: usize| {
            reqs.iter().any(|&(a, b, w)| {
                (a == x && b == y && w == Want::Beats) || (a == y && b == x && w == Want::Loses)
            })
        };
        if amendment_on(beats, &self.focus, self.step) != self.p {
            return self.pools.solve(&self.focus, self.k, self.k2, reqs);
        }
        for &q in &self.tail {
            let mut with_q = reqs.to_vec();
            with_q.push((self.p, q, Want::NotBeats));
            let mut focus = self.focus.clone();
            focus.push(q);
            if let Some(hit) = self.pools.solve(&focus, self.k, self.k2, &with_q)? {
                return Ok(Some(hit));
            }
        }
        Ok(None)
    }
}

/// Destructive exact editing under `h`-amendment by enumerating the
/// majority relation on the agenda prefix that decides `p`.
pub fn solve_edcev_h_amendment(instance: &ExactEditInstance) -> Result<Option<EditChoice>> {
    let inst = &instance.base;
    let h = match inst.procedure() {
        ProcedureSpec::Amendment(HMode::Absolute(h)) => h,
        other => {
            return Err(Error::precondition(format!(
                "E-DCEV amendment solver needs `amendment h=<int>`, got `{other}`"
            )))
        }
    };
    if inst.goal() != Goal::Destructive {
        return Err(Error::precondition("E-DCEV needs a destructive goal"));
    }
    let m = inst.num_candidates();
    let seq = inst.agenda().to_vec();
    let p = inst.distinguished();
    let l = seq.iter().position(|&c| c == p).unwrap();
    let focus_len = (l + h + 1).min(m);
    if focus_len > EDCEV_MAX_FOCUS {
        return Err(Error::resource(format!(
            "configuration enumeration over {focus_len} candidates exceeds the cap of {EDCEV_MAX_FOCUS}"
        )));
    }
    let pools = Pools::new(m, inst.registered_votes(), inst.unregistered_votes());
    let focus = seq[..focus_len].to_vec();
    let mut pairs = Vec::new();
    for i in 0..focus_len {
        for j in i + 1..focus_len {
            pairs.push((focus[i], focus[j]));
        }
    }
    let step = match crate::procedures::resolve_h(inst.procedure(), focus_len) {
        Step::Window(s) => s,
        Step::FirstCandidate => 0,
    };
    let search = ConfigSearch {
        pools: &pools,
        focus,
        pairs,
        tail: seq[focus_len..].to_vec(),
        p,
        step,
        k: instance.k,
        k2: instance.k_prime,
    };
    let found = if search.pools.solve(&search.focus, instance.k, instance.k_prime, &[])?.is_some() {
        search.dfs(&mut Vec::new())?
    } else {
        None
    };
    Ok(found.map(|(v, w)| pools.choice(&v, &w)))
}

/// Constructive exact editing under the successive procedure via the
/// signature-class program.
pub fn solve_eccev_successive(instance: &ExactEditInstance) -> Result<Option<EditChoice>> {
    let inst = &instance.base;
    if inst.procedure() != ProcedureSpec::Successive || inst.goal() != Goal::Constructive {
        return Err(Error::precondition("E-CCEV solver needs a constructive successive instance"));
    }
    let seq = inst.agenda().to_vec();
    let p = inst.distinguished();
    let l = seq.iter().position(|&c| c == p).unwrap();
    if l + 1 > ECCEV_MAX_PREFIX {
        return Err(Error::resource(format!(
            "{} signature bits exceed the cap of {ECCEV_MAX_PREFIX}",
            l + 1
        )));
    }
    let pools = Pools::new(inst.num_candidates(), inst.registered_votes(), inst.unregistered_votes());
    let signature = |v: &Vote| -> u32 {
        (0..=l)
            .filter(|&i| seq[i + 1..].iter().any(|&s| v.prefers(s, seq[i])))
            .fold(0u32, |acc, i| acc | (1 << i))
    };
    let mut classes: BTreeMap<u32, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, pl) in pools.vpools.iter().enumerate() {
        classes.entry(signature(&pools.vvotes[pl.rep])).or_default().0.push(i);
    }
    for (i, pl) in pools.wpools.iter().enumerate() {
        classes.entry(signature(&pools.wvotes[pl.rep])).or_default().1.push(i);
    }
    let mut ip = IntegerProgram::new();
    let mut vars: Vec<(u32, Option<usize>, Option<usize>)> = Vec::new();
    for (&sig, (vi, wi)) in &classes {
        let vcap: u64 = vi.iter().map(|&i| pools.vpools[i].total).sum();
        let wcap: u64 = wi.iter().map(|&i| pools.wpools[i].total).sum();
        let x = if vcap > 0 { Some(ip.add_variable(format!("x{sig}"), 0, vcap as i64)?) } else { None };
        let y = if wcap > 0 { Some(ip.add_variable(format!("y{sig}"), 0, wcap as i64)?) } else { None };
        vars.push((sig, x, y));
    }
    let xs: Vec<(usize, i64)> = vars.iter().filter_map(|v| v.1).map(|v| (v, 1)).collect();
    let ys: Vec<(usize, i64)> = vars.iter().filter_map(|v| v.2).map(|v| (v, 1)).collect();
    ip.add_constraint(&xs, Relation::Eq, instance.k as i64, 1)?;
    ip.add_constraint(&ys, Relation::Eq, instance.k_prime as i64, 1)?;
    let total = (instance.k + instance.k_prime) as i64;
    let with_bit = |i: usize| -> Vec<(usize, i64)> {
        vars.iter()
            .filter(|(sig, _, _)| sig & (1 << i) != 0)
            .flat_map(|&(_, x, y)| x.into_iter().chain(y))
            .map(|v| (v, 1))
            .collect()
    };
    for i in 0..l {
        ip.add_constraint(&with_bit(i), Relation::Ge, total, 2)?;
    }
    // A last-placed p has no successors and wins whenever nobody before it does.
    if l + 1 < seq.len() {
        ip.add_constraint(&with_bit(l), Relation::Lt, total, 2)?;
    }
    let Some(sol) = solve_feasibility(&ip)? else {
        return Ok(None);
    };
    let mut vcounts = vec![0u64; pools.vpools.len()];
    let mut wcounts = vec![0u64; pools.wpools.len()];
    for ((_, (vi, wi)), &(_, x, y)) in classes.iter().zip(&vars) {
        let mut left = x.map_or(0, |v| sol.values[v] as u64);
        for &i in vi {
            let t = left.min(pools.vpools[i].total);
            vcounts[i] = t;
            left -= t;
        }
        let mut left = y.map_or(0, |v| sol.values[v] as u64);
        for &i in wi {
            let t = left.min(pools.wpools[i].total);
            wcounts[i] = t;
            left -= t;
        }
    }
    Ok(Some(pools.choice(&vcounts, &wcounts)))
}

/// Exact-size selection that favours pools accepted by `prefer`.
fn greedy_counts(pools: &[Pool], votes: &[Vote], want: u64, prefer: impl Fn(&Vote) -> bool) -> Vec<u64> {
    let mut counts = vec![0u64; pools.len()];
    let mut left = want;
    for pass in [true, false] {
        for (i, pl) in pools.iter().enumerate() {
            if prefer(&votes[pl.rep]) == pass && left > 0 {
                let t = left.min(pl.total);
                counts[i] = t;
                left -= t;
            }
        }
    }
    counts
}

/// Destructive exact editing under the successive procedure by two greedy
/// selections.
pub fn solve_edcev_successive(instance: &ExactEditInstance) -> Result<Option<EditChoice>> {
    let inst = &instance.base;
    if inst.procedure() != ProcedureSpec::Successive || inst.goal() != Goal::Destructive {
        return Err(Error::precondition("E-DCEV solver needs a destructive successive instance"));
    }
    let seq = inst.agenda().to_vec();
    let p = inst.distinguished();
    let l = seq.iter().position(|&c| c == p).unwrap();
    let pools = Pools::new(inst.num_candidates(), inst.registered_votes(), inst.unregistered_votes());
    let try_sel = |prefer: &dyn Fn(&Vote) -> bool| {
        let v = greedy_counts(&pools.vpools, pools.vvotes, instance.k, prefer);
        let w = greedy_counts(&pools.wpools, pools.wvotes, instance.k_prime, prefer);
        (v, w)
    };
    let succ = &seq[l + 1..];
    if !succ.is_empty() {
        let (v, w) = try_sel(&|vote: &Vote| succ.iter().any(|&s| vote.prefers(s, p)));
        if !pools.profile(&v, &w).dominates(p, succ) {
            return Ok(Some(pools.choice(&v, &w)));
        }
    }
    for i in 0..l {
        let c = seq[i];
        let rest = &seq[i + 1..];
        let (v, w) = try_sel(&|vote: &Vote| rest.iter().all(|&s| vote.prefers(c, s)));
        if pools.profile(&v, &w).dominates(c, rest) {
            return Ok(Some(pools.choice(&v, &w)));
        }
    }
    Ok(None)
}

type ExactSolver = fn(&ExactEditInstance) -> Result<Option<EditChoice>>;

/// Standard AV/DV problem through an exact solver, sweeping edit sizes
/// upwards.
pub(crate) fn sweep_voter_problem(inst: &ControlInstance, solver: ExactSolver, label: &str) -> Result<Solution> {
    let nv: u64 = inst.registered_votes().iter().map(|v| v.multiplicity()).sum();
    let nw: u64 = inst.unregistered_votes().iter().map(|v| v.multiplicity()).sum();
    let adding = matches!(inst.problem(), Problem::Ccav | Problem::Dcav);
    let limit = if adding {
        (inst.budgets().av as u64).min(nw)
    } else {
        (inst.budgets().dv as u64).min(nv)
    };
    for t in 0..=limit {
        let (k, k2) = if adding { (nv, t) } else { (nv - t, 0) };
        let exact = ExactEditInstance::new(inst.clone(), k, k2)?;
        if let Some(choice) = solver(&exact)? {
            let w = if adding {
                Witness { added_votes: choice.added, ..Witness::default() }
            } else {
                let mut kept = vec![0u64; inst.registered_votes().len()];
                for (i, c) in choice.kept {
                    kept[i] += c;
                }
                let deleted = inst
                    .registered_votes()
                    .iter()
                    .enumerate()
                    .filter_map(|(i, v)| {
                        let d = v.multiplicity() - kept[i];
                        (d > 0).then_some((i, d))
                    })
                    .collect();
                Witness { deleted_votes: deleted, ..Witness::default() }
            };
            return Ok(Solution::yes(w, true, label));
        }
    }
    Ok(Solution::no(label))
}

/// DCAV/DCDV under `h`-amendment through exact configuration search.
pub fn solve_dcav_dcdv_h_amendment(instance: &ControlInstance) -> Result<Solution> {
    require_voter(instance, &[Problem::Dcav, Problem::Dcdv])?;
    sweep_voter_problem(instance, solve_edcev_h_amendment, "edcev-h-amendment (configurations + mgcev ilp)")
}

/// CCAV/CCDV under the successive procedure through the signature program.
pub fn solve_ccav_ccdv_successive(instance: &ControlInstance) -> Result<Solution> {
    require_voter(instance, &[Problem::Ccav, Problem::Ccdv])?;
    sweep_voter_problem(instance, solve_eccev_successive, "eccev-successive (signature ilp)")
}

/// DCAV/DCDV under the successive procedure through the greedy selections.
pub fn solve_dcav_dcdv_successive(instance: &ControlInstance) -> Result<Solution> {
    require_voter(instance, &[Problem::Dcav, Problem::Dcdv])?;
    sweep_voter_problem(instance, solve_edcev_successive, "edcev-successive (greedy)")
}

fn require_voter(inst: &ControlInstance, problems: &[Problem]) -> Result<()> {
    if problems.contains(&inst.problem()) {
        Ok(())
    } else {
        Err(Error::precondition(format!("voter-control solver does not cover {}", inst.problem())))
    }
}
