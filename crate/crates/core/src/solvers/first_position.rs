//! The distinguished candidate heads the agenda.
//!
//! Under the amendment family the head wins exactly when it is the
//! Condorcet winner (or, for `h = m - d`, when at most `d` candidates
//! remain), which makes every problem here a counting question.

use crate::error::{Error, Result};
use crate::procedures::{HMode, ProcedureSpec};

use super::context::registered_profile;
use super::{ControlInstance, Problem, Solution, Witness};

const IMMUNE: &str = "first-position (immune)";
const NAME: &str = "first-position";

pub fn solve_first_position(instance: &ControlInstance) -> Result<Solution> {
    let inst = instance;
    let p = inst.distinguished();
    if inst.agenda()[0] != p {
        return Err(Error::precondition(
            "first-position solver needs the distinguished candidate first on the agenda",
        ));
    }
    let immune_problem = matches!(inst.problem(), Problem::Ccac | Problem::Dcdc);
    if inst.procedure() == ProcedureSpec::Successive && !immune_problem {
        return Err(Error::precondition(
            "first-position solver covers the successive procedure only for CCAC and DCDC",
        ));
    }
    let relative = match inst.procedure() {
        ProcedureSpec::Amendment(HMode::Relative(d)) => Some(d),
        _ => None,
    };
    let profile = registered_profile(inst);
    let registered = inst.registered_candidates();
    let others: Vec<usize> = registered.iter().copied().filter(|&c| c != p).collect();
    let unbeaten: Vec<usize> = others.iter().copied().filter(|&c| !profile.beats(p, c)).collect();
    let p_wins = inst.current_winner() == p;
    match inst.problem() {
        Problem::Ccac | Problem::Dcdc => Ok(if inst.goal_met_by(inst.current_winner()) {
            Solution::yes(Witness::default(), true, IMMUNE)
        } else {
            Solution::no(IMMUNE)
        }
        .with_rationale("a head-of-agenda candidate is immune to this control type")),
        Problem::Ccdc => {
            let mut best = unbeaten.clone();
            if let Some(d) = relative {
                let need = registered.len().saturating_sub(d);
                if need < best.len() {
                    // Shrinking to at most `d` candidates hands the win to the head.
                    let mut pick: Vec<usize> = unbeaten.clone();
                    pick.extend(others.iter().filter(|c| !unbeaten.contains(c)));
                    pick.truncate(need);
                    best = pick;
                }
            }
            Ok(if best.len() <= inst.budgets().dc {
                Solution::yes(Witness::delete_candidates(best), true, NAME)
            } else {
                Solution::no(NAME)
            })
        }
        Problem::Dcac => {
            if !p_wins {
                return Ok(Solution::yes(Witness::default(), true, NAME));
            }
            let d_list = inst.unregistered_candidates();
            let d_unbeaten: Vec<usize> = d_list.iter().copied().filter(|&c| !profile.beats(p, c)).collect();
            let size_need = match relative {
                Some(d) => (d + 1).saturating_sub(registered.len()),
                None => 0,
            };
            let mut pick = Vec::new();
            if unbeaten.is_empty() {
                match d_unbeaten.first() {
                    Some(&u) => pick.push(u),
                    None => return Ok(Solution::no(NAME)),
                }
            }
            for &c in &d_list {
                if pick.len() >= size_need {
                    break;
                }
                if !pick.contains(&c) {
                    pick.push(c);
                }
            }
            let enough = pick.len() >= size_need.max(usize::from(unbeaten.is_empty()));
            Ok(if enough && pick.len() <= inst.budgets().ac {
                Solution::yes(Witness::add_candidates(pick), true, NAME)
            } else {
                Solution::no(NAME)
            })
        }
        Problem::Dcav | Problem::Dcdv => {
            if !p_wins {
                return Ok(Solution::yes(Witness::default(), true, NAME));
            }
            if relative.is_some_and(|d| registered.len() <= d) {
                return Ok(Solution::no(NAME)
                    .with_rationale("the head wins outright at this candidate count"));
            }
            let adding = inst.problem() == Problem::Dcav;
            let (pool, budget) = if adding {
                (inst.unregistered_votes(), inst.budgets().av as u64)
            } else {
                (inst.registered_votes(), inst.budgets().dv as u64)
            };
            let mut best: Option<(u64, usize)> = None;
            for &c in &others {
                // p beats c: 2 s > n. Each useful edit lowers 2 s - n by one.
                let need = 2 * profile.support(p, c) - profile.n();
                let useful: u64 = pool
                    .iter()
                    .filter(|v| v.prefers(c, p) == adding)
                    .map(|v| v.multiplicity())
                    .sum();
                if need <= useful && need <= budget && best.is_none_or(|(b, _)| need < b) {
                    best = Some((need, c));
                }
            }
            let Some((need, c)) = best else {
                return Ok(Solution::no(NAME));
            };
            let mut edits = Vec::new();
            let mut left = need;
            for (i, v) in pool.iter().enumerate() {
                if left == 0 {
                    break;
                }
                if v.prefers(c, p) == adding {
                    let t = left.min(v.multiplicity());
                    edits.push((i, t));
                    left -= t;
                }
            }
            let w = if adding {
                Witness { added_votes: edits, ..Witness::default() }
            } else {
                Witness { deleted_votes: edits, ..Witness::default() }
            };
            Ok(Solution::yes(w, true, NAME))
        }
        Problem::Ccav | Problem::Ccdv | Problem::Multimode => Err(Error::precondition(format!(
            "first-position solver does not cover {}",
            inst.problem()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::Budgets;

    #[test]
    fn condorcet_head_is_immune_to_dcdc() {
        let inst = ControlInstance::builder(Problem::Dcdc)
            .candidates(&["p", "a", "b"])
            .agenda(&["p", "a", "b"])
            .distinguished("p")
            .budgets(Budgets::dc(2))
            .registered_orders(&["p a b", "p b a", "a p b"])
            .build()
            .unwrap();
        let sol = solve_first_position(&inst).unwrap();
        assert!(!sol.decision);
    }

    #[test]
    fn tie_forces_deletion() {
        let inst = ControlInstance::builder(Problem::Ccdc)
            .candidates(&["p", "r"])
            .agenda(&["p", "r"])
            .distinguished("p")
            .budgets(Budgets::dc(1))
            .registered_orders(&["p r", "r p"])
            .build()
            .unwrap();
        let sol = solve_first_position(&inst).unwrap();
        assert!(sol.decision);
        assert_eq!(sol.witness.unwrap().lines(&inst), vec!["delete-candidate r"]);
    }

    #[test]
    fn rejects_non_head() {
        let inst = ControlInstance::builder(Problem::Ccdc)
            .candidates(&["p", "r"])
            .agenda(&["r", "p"])
            .distinguished("p")
            .registered_orders(&["p r"])
            .build()
            .unwrap();
        assert!(matches!(solve_first_position(&inst), Err(Error::Precondition(_))));
    }

    #[test]
    fn dcav_adds_rival_votes() {
        let inst = ControlInstance::builder(Problem::Dcav)
            .candidates(&["p", "r"])
            .agenda(&["p", "r"])
            .distinguished("p")
            .budgets(Budgets::av(1))
            .registered_orders(&["p r"])
            .unregistered_orders(&["p r", "r p"])
            .build()
            .unwrap();
        let sol = solve_first_position(&inst).unwrap();
        assert!(sol.decision);
        assert_eq!(sol.witness.unwrap().added_votes, vec![(1, 1)]);
    }
}
