//! Candidate control under the plain amendment procedure (`h = 1`).
//!
//! Both dynamic programs rest on the beating-path characterisation: a
//! candidate wins iff it beats all its successors and is reachable from the
//! agenda head by a beating path. Paths are deterministic (each element
//! jumps to the first later candidate it fails to beat), so the programs only
//! choose where the path lands.

use crate::election::Profile;
use crate::error::{Error, Result};
use crate::procedures::{amendment_index, beating_path_index, HMode, ProcedureSpec, Step};

use super::context::registered_profile;
use super::{ControlInstance, Problem, Solution, Witness};

fn require(inst: &ControlInstance, problems: &[Problem], what: &str) -> Result<()> {
    if !problems.contains(&inst.problem()) {
        return Err(Error::precondition(format!("{what} does not cover {}", inst.problem())));
    }
    if inst.procedure() != ProcedureSpec::Amendment(HMode::Absolute(1)) {
        return Err(Error::precondition(format!("{what} needs the amendment procedure with h=1")));
    }
    Ok(())
}

fn restricted(agenda: &[usize], keep: impl Fn(usize) -> bool) -> Vec<usize> {
    agenda.iter().copied().filter(|&c| keep(c)).collect()
}

fn path_in(profile: &Profile, seq: &[usize], from: usize, to: usize) -> bool {
    let i = seq.iter().position(|&c| c == from).expect("path start is active");
    let j = seq.iter().position(|&c| c == to).expect("path end is active");
    i <= j && beating_path_index(profile, seq, i, j)
}

/// Minimum set of `addable` candidates whose addition makes `target` the
/// amendment winner of `present ∪ added`, if one of size at most `budget`
/// exists.
pub(crate) fn ccac_core(
    profile: &Profile,
    agenda: &[usize],
    present: &[bool],
    addable: &[bool],
    target: usize,
    budget: usize,
) -> Option<Vec<usize>> {
    let seq = restricted(agenda, |c| present[c]);
    let tpos = seq.iter().position(|&c| c == target)?;
    if seq[tpos + 1..].iter().any(|&s| !profile.beats(target, s)) {
        return None;
    }
    if amendment_index(profile, &seq, Step::Window(1)) == target {
        return Some(Vec::new());
    }
    let agenda_tpos = agenda.iter().position(|&c| c == target)?;
    let d1: Vec<usize> = agenda[..agenda_tpos]
        .iter()
        .copied()
        .filter(|&c| addable[c] && !present[c])
        .collect();
    let c_star = seq[0];
    let with = |extra: &[usize]| restricted(agenda, |c| present[c] || extra.contains(&c));
    // h[i]: candidates added on a path from d1[i] to the target, d1[i] included.
    let mut h: Vec<Option<usize>> = vec![None; d1.len()];
    let mut next: Vec<Option<usize>> = vec![None; d1.len()];
    for i in (0..d1.len()).rev() {
        let d = d1[i];
        if path_in(profile, &with(&[d]), d, target) {
            h[i] = Some(1);
            continue;
        }
        for j in i + 1..d1.len() {
            let Some(hj) = h[j] else { continue };
            if path_in(profile, &with(&[d, d1[j]]), d, d1[j]) && h[i].is_none_or(|hi| hj + 1 < hi) {
                h[i] = Some(hj + 1);
                next[i] = Some(j);
            }
        }
    }
    let agenda_pos = |c: usize| agenda.iter().position(|&x| x == c).unwrap();
    let mut best: Option<(usize, usize)> = None;
    for (i, &d) in d1.iter().enumerate() {
        let Some(hi) = h[i] else { continue };
        if hi > budget {
            continue;
        }
        let ok = agenda_pos(d) < agenda_pos(c_star) || path_in(profile, &with(&[d]), c_star, d);
        if ok && best.is_none_or(|(b, _)| hi < b) {
            best = Some((hi, i));
        }
    }
    let (_, mut i) = best?;
    let mut added = vec![d1[i]];
    while let Some(j) = next[i] {
        added.push(d1[j]);
        i = j;
    }
    Some(added)
}

/// Minimum set of deletable candidates whose removal makes `target` the
/// amendment winner, within `budget`.
pub(crate) fn ccdc_core(
    profile: &Profile,
    agenda: &[usize],
    present: &[bool],
    protected: &[bool],
    target: usize,
    budget: usize,
) -> Option<Vec<usize>> {
    let seq = restricted(agenda, |c| present[c]);
    let tpos = seq.iter().position(|&c| c == target)?;
    let forced: Vec<usize> = seq[tpos + 1..]
        .iter()
        .copied()
        .filter(|&s| !profile.beats(target, s))
        .collect();
    if forced.iter().any(|&c| protected[c]) || forced.len() > budget {
        return None;
    }
    // preds[0..t] then the target at index t.
    let preds = &seq[..=tpos];
    let t = tpos;
    let mut h: Vec<Option<usize>> = vec![None; t + 1];
    let mut next: Vec<usize> = vec![0; t + 1];
    h[t] = Some(0);
    for i in (0..t).rev() {
        let ci = preds[i];
        let mut gap = 0usize;
        let mut gap_blocked = false;
        for j in i + 1..=t {
            let cj = preds[j];
            if !profile.beats(ci, cj) {
                if let (Some(hj), false) = (h[j], gap_blocked) {
                    if h[i].is_none_or(|hi| hj + gap < hi) {
                        h[i] = Some(hj + gap);
                        next[i] = j;
                    }
                }
                // Any later landing point requires deleting cj.
                gap += 1;
                gap_blocked |= protected[cj];
            }
        }
    }
    let mut best: Option<(usize, usize)> = None;
    for i in 0..=t {
        if preds[..i].iter().any(|&c| protected[c]) {
            break;
        }
        if let Some(hi) = h[i] {
            let total = i + hi;
            if best.is_none_or(|(b, _)| total < b) {
                best = Some((total, i));
            }
        }
    }
    let (total, start) = best?;
    if forced.len() + total > budget {
        return None;
    }
    let mut deleted = forced;
    deleted.extend_from_slice(&preds[..start]);
    let mut i = start;
    while i < t {
        let j = next[i];
        let ci = preds[i];
        deleted.extend(preds[i + 1..j].iter().filter(|&&cl| !profile.beats(ci, cl)));
        i = j;
    }
    Some(deleted)
}

pub fn solve_ccac_amendment(instance: &ControlInstance) -> Result<Solution> {
    let inst = instance;
    require(inst, &[Problem::Ccac], "CCAC amendment solver")?;
    let profile = registered_profile(inst);
    let present: Vec<bool> = (0..inst.num_candidates()).map(|c| inst.is_registered(c)).collect();
    let addable: Vec<bool> = present.iter().map(|r| !r).collect();
    let found = ccac_core(
        &profile,
        inst.agenda(),
        &present,
        &addable,
        inst.distinguished(),
        inst.budgets().ac,
    );
    Ok(Solution::from_option(found.map(Witness::add_candidates), true, "ccac-amendment-dp"))
}

pub fn solve_ccdc_amendment(instance: &ControlInstance) -> Result<Solution> {
    let inst = instance;
    require(inst, &[Problem::Ccdc], "CCDC amendment solver")?;
    let profile = registered_profile(inst);
    let present: Vec<bool> = (0..inst.num_candidates()).map(|c| inst.is_registered(c)).collect();
    let mut protected = vec![false; inst.num_candidates()];
    protected[inst.distinguished()] = true;
    let found = ccdc_core(
        &profile,
        inst.agenda(),
        &present,
        &protected,
        inst.distinguished(),
        inst.budgets().dc,
    );
    Ok(Solution::from_option(found.map(Witness::delete_candidates), true, "ccdc-amendment-dp"))
}

/// DCAC and DCDC by trying every rival as a constructive target.
pub fn solve_dcac_dcdc_amendment(instance: &ControlInstance) -> Result<Solution> {
    let inst = instance;
    require(inst, &[Problem::Dcac, Problem::Dcdc], "DCAC/DCDC amendment solver")?;
    let label = "turing-reduction (amendment dp)";
    let p = inst.distinguished();
    let present: Vec<bool> = (0..inst.num_candidates()).map(|c| inst.is_registered(c)).collect();
    let profile = registered_profile(inst);
    if inst.current_winner() != p {
        return Ok(Solution::yes(Witness::default(), true, label));
    }
    let mut best: Option<Witness> = None;
    let mut consider = |w: Witness| {
        if best.as_ref().is_none_or(|b| w.size() < b.size()) {
            best = Some(w);
        }
    };
    if inst.problem() == Problem::Dcdc {
        let mut protected = vec![false; inst.num_candidates()];
        protected[p] = true;
        for c in inst.registered_candidates().into_iter().filter(|&c| c != p) {
            protected[c] = true;
            if let Some(del) = ccdc_core(&profile, inst.agenda(), &present, &protected, c, inst.budgets().dc) {
                consider(Witness::delete_candidates(del));
            }
            protected[c] = false;
        }
    } else {
        let k = inst.budgets().ac;
        for c in (0..inst.num_candidates()).filter(|&c| c != p) {
            let mut now = present.clone();
            let mut addable: Vec<bool> = present.iter().map(|r| !r).collect();
            let mut budget = k;
            if !present[c] {
                if k == 0 {
                    continue;
                }
                now[c] = true;
                addable[c] = false;
                budget -= 1;
            }
            if let Some(mut add) = ccac_core(&profile, inst.agenda(), &now, &addable, c, budget) {
                if !present[c] {
                    add.push(c);
                }
                consider(Witness::add_candidates(add));
            }
        }
    }
    Ok(Solution::from_option(best, true, label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::Budgets;

    #[test]
    fn ccac_hand_instance() {
        // q beats p, p beats d, d beats q; agenda (q, d, p).
        let inst = ControlInstance::builder(Problem::Ccac)
            .candidates(&["q", "p"])
            .unregistered_candidates(&["d"])
            .agenda(&["q", "d", "p"])
            .distinguished("p")
            .budgets(Budgets::ac(1))
            .registered_orders(&["q p d", "p d q", "d q p"])
            .build()
            .unwrap();
        let sol = solve_ccac_amendment(&inst).unwrap();
        assert!(sol.decision);
        assert_eq!(sol.witness.clone().unwrap().lines(&inst), vec!["add-candidate d"]);
        assert!(inst.achieves_goal(sol.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn ccdc_example1_already_wins() {
        let inst = ControlInstance::builder(Problem::Ccdc)
            .candidates(&["a", "b", "c", "d"])
            .agenda(&["a", "b", "c", "d"])
            .distinguished("d")
            .registered_orders(&["b d c a", "c a b d", "a d b c"])
            .build()
            .unwrap();
        let sol = solve_ccdc_amendment(&inst).unwrap();
        assert!(sol.decision);
        assert!(sol.witness.unwrap().is_empty());
    }

    #[test]
    fn ccdc_dominant_p_needs_nothing() {
        let inst = ControlInstance::builder(Problem::Ccdc)
            .candidates(&["a", "b", "p"])
            .agenda(&["a", "b", "p"])
            .distinguished("p")
            .registered_orders(&["p a b", "p b a", "a p b"])
            .build()
            .unwrap();
        assert!(solve_ccdc_amendment(&inst).unwrap().decision);
    }

    #[test]
    fn dcac_adds_unbeaten_successor() {
        let inst = ControlInstance::builder(Problem::Dcac)
            .candidates(&["p", "c"])
            .unregistered_candidates(&["d"])
            .agenda(&["c", "p", "d"])
            .distinguished("p")
            .budgets(Budgets::ac(1))
            .registered_orders(&["p c d", "d p c", "d p c"])
            .build()
            .unwrap();
        assert_eq!(inst.name(inst.current_winner()), "p");
        let sol = solve_dcac_dcdc_amendment(&inst).unwrap();
        assert!(sol.decision);
        assert!(inst.achieves_goal(sol.witness.as_ref().unwrap()).unwrap());
    }
}
