//! Exhaustive multimode oracle.
//!
//! Edits are enumerated by total size, so the first hit is a minimum
//! witness. Identical votes are pooled, which keeps reduction outputs with
//! many copies of one order cheap.

use std::env;

use crate::error::{Error, Result};
use crate::procedures::winner_index;
use crate::Profile;

use super::context::{compositions, pools, subsets_of_size, take, Pool};
use super::{ControlInstance, Solution, Witness};

/// Size limits for the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum `|C ∪ D|`.
    pub m: usize,
    /// Maximum number of distinct vote orders in `V` plus `W`.
    pub n: usize,
    /// Maximum effective budget per edit type.
    pub k: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { m: 7, n: 8, k: 4 }
    }
}

impl Caps {
    /// Defaults overridden by `AGENDA_CONTROL_CAPS=m=<int>,n=<int>,k=<int>`.
    pub fn from_env() -> Result<Self> {
        match env::var("AGENDA_CONTROL_CAPS") {
            Ok(spec) => Caps::parse(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }

    /// Parses `m=7,n=8,k=4`; omitted keys keep their defaults.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut caps = Caps::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::input(format!("bad cap `{part}`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("bad cap value `{part}`")))?;
            match key.trim() {
                "m" => caps.m = value,
                "n" => caps.n = value,
                "k" => caps.k = value,
                other => return Err(Error::input(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }
}

pub fn brute_force_solve(instance: &ControlInstance) -> Result<Solution> {
    brute_force_solve_with(instance, Caps::from_env()?, 1)
}

struct Search<'a> {
    inst: &'a ControlInstance,
    deletable: Vec<usize>,
    addable: Vec<usize>,
    vpools: Vec<Pool>,
    wpools: Vec<Pool>,
    limits: [usize; 4],
}

/// One size level's edit lists: candidate deletions, candidate additions,
/// vote deletions per pool, vote additions per pool.
struct Level {
    dc: Vec<Vec<usize>>,
    ac: Vec<Vec<usize>>,
    dv: Vec<Vec<u64>>,
    av: Vec<Vec<u64>>,
}

impl Search<'_> {
    fn levels(&self, s: usize) -> Vec<Level> {
        let [ldc, lac, ldv, lav] = self.limits;
        let vcap: Vec<u64> = self.vpools.iter().map(|p| p.total).collect();
        let wcap: Vec<u64> = self.wpools.iter().map(|p| p.total).collect();
        let mut out = Vec::new();
        for dc in 0..=ldc.min(s) {
            for ac in 0..=lac.min(s - dc) {
                for dv in 0..=ldv.min(s - dc - ac) {
                    let av = s - dc - ac - dv;
                    if av > lav {
                        continue;
                    }
                    out.push(Level {
                        dc: subsets_of_size(&self.deletable, dc),
                        ac: subsets_of_size(&self.addable, ac),
                        dv: compositions(&vcap, dv as u64),
                        av: compositions(&wcap, av as u64),
                    });
                }
            }
        }
        out
    }

    /// First hit at size `s` among items with `index % stride == offset`.
    fn scan(&self, levels: &[Level], stride: usize, offset: usize) -> Option<(usize, Witness)> {
        let inst = self.inst;
        let m = inst.num_candidates();
        let vvotes = inst.registered_votes();
        let wvotes = inst.unregistered_votes();
        let mut idx = 0usize;
        let mut active = vec![false; m];
        for level in levels {
            for dc in &level.dc {
                for ac in &level.ac {
                    for c in 0..m {
                        active[c] = inst.is_registered(c);
                    }
                    dc.iter().for_each(|&c| active[c] = false);
                    ac.iter().for_each(|&c| active[c] = true);
                    let seq: Vec<usize> = inst.agenda().iter().copied().filter(|&c| active[c]).collect();
                    for dv in &level.dv {
                        for av in &level.av {
                            let mine = idx % stride == offset;
                            idx += 1;
                            if !mine {
                                continue;
                            }
                            let ballots = self
                                .vpools
                                .iter()
                                .zip(dv)
                                .map(|(p, &d)| (vvotes[p.rep].rank(), p.total - d))
                                .chain(
                                    self.wpools
                                        .iter()
                                        .zip(av)
                                        .map(|(p, &a)| (wvotes[p.rep].rank(), a)),
                                );
                            let profile = Profile::new(m, ballots);
                            let w = winner_index(&profile, &seq, inst.procedure());
                            if inst.goal_met_by(w) {
                                let witness = Witness {
                                    deleted_candidates: dc.clone(),
                                    added_candidates: ac.clone(),
                                    deleted_votes: take(&self.vpools, dv),
                                    added_votes: take(&self.wpools, av),
                                };
                                return Some((idx - 1, witness));
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

/// Oracle with explicit caps; `jobs > 1` shards each size level across
/// threads by enumeration index and keeps the lowest-index hit.
pub fn brute_force_solve_with(instance: &ControlInstance, caps: Caps, jobs: usize) -> Result<Solution> {
    let inst = instance;
    let m = inst.num_candidates();
    if m > caps.m {
        return Err(Error::resource(format!(
            "brute force needs |C ∪ D| <= {}, instance has {m}",
            caps.m
        )));
    }
    let vpools = pools(inst.registered_votes());
    let wpools = pools(inst.unregistered_votes());
    let p = inst.distinguished();
    let deletable: Vec<usize> = inst
        .registered_candidates()
        .into_iter()
        .filter(|&c| c != p)
        .collect();
    let addable = inst.unregistered_candidates();
    let b = inst.budgets();
    let vtotal: u64 = vpools.iter().map(|p| p.total).sum();
    let wtotal: u64 = wpools.iter().map(|p| p.total).sum();
    let limits = [
        b.dc.min(deletable.len()),
        b.ac.min(addable.len()),
        (b.dv as u64).min(vtotal) as usize,
        (b.av as u64).min(wtotal) as usize,
    ];
    // Only pools that the search draws from count against the vote cap.
    let enumerated = if limits[2] > 0 { vpools.len() } else { 0 } + if limits[3] > 0 { wpools.len() } else { 0 };
    if enumerated > caps.n {
        return Err(Error::resource(format!(
            "brute force needs at most {} distinct editable votes, instance has {enumerated}",
            caps.n
        )));
    }
    if let Some(&l) = limits.iter().find(|&&l| l > caps.k) {
        return Err(Error::resource(format!(
            "brute force needs effective budgets <= {}, instance has {l}",
            caps.k
        )));
    }
    let search = Search {
        inst,
        deletable,
        addable,
        vpools,
        wpools,
        limits,
    };
    let jobs = jobs.max(1);
    for s in 0..=limits.iter().sum::<usize>() {
        let levels = search.levels(s);
        let hit = if jobs == 1 {
            search.scan(&levels, 1, 0)
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..jobs)
                    .map(|t| {
                        let search = &search;
                        let levels = &levels;
                        scope.spawn(move || search.scan(levels, jobs, t))
                    })
                    .collect();
                handles
                    .into_iter()
                    .filter_map(|h| h.join().expect("brute-force worker panicked"))
                    .min_by_key(|(i, _)| *i)
            })
        };
        if let Some((_, w)) = hit {
            return Ok(Solution::yes(w, true, "brute-force"));
        }
    }
    Ok(Solution::no("brute-force"))
}

#[cfg(test)]
mod tests {
    use super::super::tests::example2;
    use super::super::{Budgets, Problem};
    use super::*;
    use crate::ProcedureSpec;

    #[test]
    fn example2_unique_witness_b() {
        let inst = example2();
        let sol = brute_force_solve_with(&inst, Caps::default(), 1).unwrap();
        assert!(sol.decision);
        let w = sol.witness.unwrap();
        assert_eq!(w.lines(&inst), vec!["delete-candidate b"]);
        assert!(sol.minimal);
    }

    #[test]
    fn already_winning_gives_empty_witness() {
        let inst = ControlInstance::builder(Problem::Ccav)
            .candidates(&["a", "p"])
            .distinguished("p")
            .budgets(Budgets::av(2))
            .registered_orders(&["p a"])
            .unregistered_orders(&["a p"])
            .build()
            .unwrap();
        let sol = brute_force_solve_with(&inst, Caps::default(), 1).unwrap();
        assert!(sol.decision);
        assert!(sol.witness.unwrap().is_empty());
    }

    #[test]
    fn jobs_do_not_change_the_answer() {
        let inst = ControlInstance::builder(Problem::Multimode)
            .goal(crate::solvers::Goal::Constructive)
            .procedure(ProcedureSpec::Successive)
            .candidates(&["a", "b", "p"])
            .unregistered_candidates(&["d"])
            .agenda(&["a", "d", "b", "p"])
            .distinguished("p")
            .budgets(Budgets { av: 1, dv: 1, ac: 1, dc: 1 })
            .registered_orders(&["a b p d", "b a d p", "d p a b"])
            .unregistered_orders(&["p d a b"])
            .build()
            .unwrap();
        let one = brute_force_solve_with(&inst, Caps::default(), 1).unwrap();
        for jobs in 2..5 {
            assert_eq!(brute_force_solve_with(&inst, Caps::default(), jobs).unwrap(), one);
        }
    }

    #[test]
    fn caps_are_enforced_and_parsed() {
        let inst = example2();
        let tight = Caps { m: 3, ..Caps::default() };
        assert!(matches!(
            brute_force_solve_with(&inst, tight, 1),
            Err(Error::Resource(_))
        ));
        assert_eq!(Caps::parse("m=9,k=2").unwrap(), Caps { m: 9, n: 8, k: 2 });
        assert!(Caps::parse("x=1").is_err());
    }
}
