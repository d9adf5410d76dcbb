//! Candidate deletion under the full-amendment procedure.
//!
//! Two forced deletions are applied until the target wins: a successor the
//! target fails to beat, and a current winner that precedes the target. Both
//! are unavoidable, so the deleted set is a minimum witness.

use crate::election::Profile;
use crate::error::{Error, Result};
use crate::procedures::{full_amendment_index, HMode, ProcedureSpec};

use super::context::registered_profile;
use super::{ControlInstance, Problem, Solution, Witness};

fn require(inst: &ControlInstance, problem: Problem) -> Result<()> {
    if inst.problem() != problem {
        return Err(Error::precondition(format!(
            "full-amendment {problem} solver does not cover {}",
            inst.problem()
        )));
    }
    let full = match inst.procedure() {
        ProcedureSpec::Amendment(HMode::Relative(1)) => true,
        ProcedureSpec::Amendment(HMode::Absolute(h)) => h + 1 >= inst.registered_candidates().len(),
        _ => false,
    };
    if !full {
        return Err(Error::precondition(
            "deletion rules are only sound when every round compares against all remaining candidates",
        ));
    }
    Ok(())
}

pub(crate) fn ccdc_full_core(
    profile: &Profile,
    agenda: &[usize],
    present: &[bool],
    protected: &[bool],
    target: usize,
    budget: usize,
) -> Option<Vec<usize>> {
    let mut active = present.to_vec();
    let mut deleted = Vec::new();
    loop {
        let seq: Vec<usize> = agenda.iter().copied().filter(|&c| active[c]).collect();
        let tpos = seq.iter().position(|&c| c == target)?;
        let victim = match seq[tpos + 1..].iter().find(|&&s| !profile.beats(target, s)) {
            Some(&q) => q,
            None => {
                let w = full_amendment_index(profile, &seq);
                if w == target {
                    return Some(deleted);
                }
                w
            }
        };
        if protected[victim] || deleted.len() == budget {
            return None;
        }
        active[victim] = false;
        deleted.push(victim);
    }
}

pub fn solve_ccdc_full_amendment(instance: &ControlInstance) -> Result<Solution> {
    let inst = instance;
    require(inst, Problem::Ccdc)?;
    let present: Vec<bool> = (0..inst.num_candidates()).map(|c| inst.is_registered(c)).collect();
    let mut protected = vec![false; inst.num_candidates()];
    protected[inst.distinguished()] = true;
    let found = ccdc_full_core(
        &registered_profile(inst),
        inst.agenda(),
        &present,
        &protected,
        inst.distinguished(),
        inst.budgets().dc,
    );
    Ok(Solution::from_option(found.map(Witness::delete_candidates), true, "ccdc-full-amendment-rules"))
}

pub fn solve_dcdc_full_amendment(instance: &ControlInstance) -> Result<Solution> {
    let inst = instance;
    require(inst, Problem::Dcdc)?;
    let label = "turing-reduction (full-amendment rules)";
    let p = inst.distinguished();
    if inst.current_winner() != p {
        return Ok(Solution::yes(Witness::default(), true, label));
    }
    let profile = registered_profile(inst);
    let present: Vec<bool> = (0..inst.num_candidates()).map(|c| inst.is_registered(c)).collect();
    let mut protected = vec![false; inst.num_candidates()];
    protected[p] = true;
    let mut best: Option<Vec<usize>> = None;
    for c in inst.registered_candidates().into_iter().filter(|&c| c != p) {
        protected[c] = true;
        if let Some(del) = ccdc_full_core(&profile, inst.agenda(), &present, &protected, c, inst.budgets().dc) {
            if best.as_ref().is_none_or(|b| del.len() < b.len()) {
                best = Some(del);
            }
        }
        protected[c] = false;
    }
    Ok(Solution::from_option(best.map(Witness::delete_candidates), true, label))
}
