//! Candidate control under the successive procedure, parameterised by the
//! number of successors of the distinguished candidate.

use crate::error::{Error, Result};
use crate::procedures::{winner_index, ProcedureSpec};

use super::context::{agenda_positions, registered_profile, subsets_up_to};
use super::{ControlInstance, Problem, Solution, Witness};

fn require(inst: &ControlInstance, problem: Problem) -> Result<()> {
    if inst.problem() != problem || inst.procedure() != ProcedureSpec::Successive {
        return Err(Error::precondition(format!(
            "successive {problem} solver does not cover {} under `{}`",
            inst.problem(),
            inst.procedure()
        )));
    }
    Ok(())
}

/// Guesses the deleted successors; every predecessor that then wins has to
/// go as well.
pub fn solve_ccdc_successive_fpt(instance: &ControlInstance) -> Result<Solution> {
    let inst = instance;
    require(inst, Problem::Ccdc)?;
    let p = inst.distinguished();
    let k = inst.budgets().dc;
    let profile = registered_profile(inst);
    let pos = agenda_positions(inst);
    let registered = inst.registered_candidates();
    let succ: Vec<usize> = registered.iter().copied().filter(|&c| pos[c] > pos[p]).collect();
    let mut best: Option<Vec<usize>> = None;
    for s in subsets_up_to(&succ, k) {
        let mut deleted = s.clone();
        loop {
            let seq: Vec<usize> = inst
                .agenda()
                .iter()
                .copied()
                .filter(|&c| inst.is_registered(c) && !deleted.contains(&c))
                .collect();
            let w = winner_index(&profile, &seq, ProcedureSpec::Successive);
            if w == p {
                if best.as_ref().is_none_or(|b| deleted.len() < b.len()) {
                    best = Some(deleted);
                }
                break;
            }
            if pos[w] > pos[p] || deleted.len() >= k {
                break;
            }
            deleted.push(w);
        }
    }
    Ok(Solution::from_option(best.map(Witness::delete_candidates), true, "ccdc-successive-fpt"))
}

/// Guesses the added successors; at most one extra added predecessor is
/// ever needed once `p` still wins.
pub fn solve_dcac_successive_fpt(instance: &ControlInstance) -> Result<Solution> {
    let inst = instance;
    require(inst, Problem::Dcac)?;
    let label = "dcac-successive-fpt";
    let p = inst.distinguished();
    let k = inst.budgets().ac;
    let profile = registered_profile(inst);
    let pos = agenda_positions(inst);
    let loses = |added: &[usize]| {
        let seq: Vec<usize> = inst
            .agenda()
            .iter()
            .copied()
            .filter(|&c| inst.is_registered(c) || added.contains(&c))
            .collect();
        winner_index(&profile, &seq, ProcedureSpec::Successive) != p
    };
    if loses(&[]) {
        return Ok(Solution::yes(Witness::default(), true, label));
    }
    let unreg = inst.unregistered_candidates();
    let (after, before): (Vec<usize>, Vec<usize>) = unreg.iter().partition(|&&c| pos[c] > pos[p]);
    let mut best: Option<Vec<usize>> = None;
    for s in subsets_up_to(&after, k) {
        if best.as_ref().is_some_and(|b| b.len() <= s.len()) {
            break;
        }
        if loses(&s) {
            best = Some(s);
            break;
        }
        if s.len() < k && best.as_ref().is_none_or(|b| s.len() + 1 < b.len()) {
            for &d in &before {
                let mut with_d = s.clone();
                with_d.push(d);
                if loses(&with_d) {
                    best = Some(with_d);
                    break;
                }
            }
        }
    }
    Ok(Solution::from_option(best.map(Witness::add_candidates), true, label))
}
