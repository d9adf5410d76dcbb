//! Candidate addition under `h = m - d` amendment procedures.

use crate::error::{Error, Result};
use crate::graph::{min_dominating_blue, BipartiteGraph};
use crate::procedures::{winner_index, HMode, ProcedureSpec};

use super::context::{agenda_positions, registered_profile, subsets_of_size, subsets_up_to};
use super::{ControlInstance, Problem, Solution, Witness};

fn relative_d(inst: &ControlInstance, problem: Problem) -> Result<usize> {
    if inst.problem() != problem {
        return Err(Error::precondition(format!(
            "{problem} (m-h)-amendment solver does not cover {}",
            inst.problem()
        )));
    }
    match inst.procedure() {
        ProcedureSpec::Amendment(HMode::Relative(d)) => Ok(d),
        ProcedureSpec::Amendment(HMode::Absolute(h)) if h + 1 >= inst.num_candidates() => Ok(1),
        other => Err(Error::precondition(format!(
            "{problem} (m-h)-amendment solver needs `amendment h=m-<d>`, got `{other}`"
        ))),
    }
}

/// Winner over the registered candidates plus `added`.
fn winner_with(inst: &ControlInstance, profile: &crate::Profile, added: &[usize]) -> usize {
    let seq: Vec<usize> = inst
        .agenda()
        .iter()
        .copied()
        .filter(|&c| inst.is_registered(c) || added.contains(&c))
        .collect();
    winner_index(profile, &seq, inst.procedure())
}

/// Fixed-parameter algorithm in the number of predecessors of `p`.
///
/// Guesses the added predecessors `S` and the last `h - 1` added successors
/// `S'`; the remaining additions only have to knock out every predecessor
/// that would otherwise eliminate `p`, which is a red-blue domination
/// question.
pub fn solve_ccac_m_minus_h_fpt(instance: &ControlInstance) -> Result<Solution> {
    let inst = instance;
    let h = relative_d(inst, Problem::Ccac)?;
    let label = "ccac-(m-h)-fpt";
    let p = inst.distinguished();
    let profile = registered_profile(inst);
    let pos = agenda_positions(inst);
    let k = inst.budgets().ac;
    let before_p = |c: usize| pos[c] < pos[p];
    // Covers the regime where the head wins outright.
    if inst.current_winner() == p {
        return Ok(Solution::yes(Witness::default(), true, label));
    }
    if inst
        .registered_candidates()
        .into_iter()
        .any(|c| !before_p(c) && c != p && !profile.beats(p, c))
    {
        return Ok(Solution::no(label).with_rationale("p fails to beat a registered successor"));
    }
    let unreg = inst.unregistered_candidates();
    let d1: Vec<usize> = unreg.iter().copied().filter(|&c| before_p(c)).collect();
    let d2b: Vec<usize> = unreg
        .iter()
        .copied()
        .filter(|&c| !before_p(c) && profile.beats(p, c))
        .collect();
    let mut best: Option<Vec<usize>> = None;
    for s in subsets_up_to(&d1, k) {
        let max_tail = (h - 1).min(d2b.len()).min(k - s.len());
        for s2 in subsets_up_to(&d2b, max_tail) {
            let base_cost = s.len() + s2.len();
            if best.as_ref().is_some_and(|b| b.len() <= base_cost) {
                continue;
            }
            let mut added: Vec<usize> = s.iter().chain(&s2).copied().collect();
            let blue: Vec<usize> = if s2.len() < h - 1 {
                Vec::new()
            } else {
                let first_tail = s2.iter().map(|&c| pos[c]).min().unwrap_or(usize::MAX);
                d2b.iter()
                    .copied()
                    .filter(|&c| pos[c] < first_tail && !s2.contains(&c))
                    .collect()
            };
            let seq: Vec<usize> = inst
                .agenda()
                .iter()
                .copied()
                .filter(|&c| inst.is_registered(c) || added.contains(&c))
                .collect();
            let m1 = seq.len();
            let ppos = seq.iter().position(|&c| c == p).unwrap();
            let in_tail = ppos + h > m1; // p among the last h - 1
            if in_tail || blue.is_empty() {
                if winner_index(&profile, &seq, inst.procedure()) == p {
                    best = Some(added);
                }
                continue;
            }
            let red: Vec<usize> = (0..ppos)
                .filter(|&i| {
                    let c = seq[i];
                    let window_end = if i + 1 < h { i + m1 - h } else { m1 - 1 };
                    seq[i + 1..=window_end].iter().all(|&x| profile.beats(c, x))
                })
                .collect();
            let mut edges = Vec::new();
            for (ri, &i) in red.iter().enumerate() {
                for (bi, &b) in blue.iter().enumerate() {
                    if !profile.beats(seq[i], b) {
                        edges.push((ri, bi));
                    }
                }
            }
            let g = BipartiteGraph::from_indices(red.len(), blue.len(), &edges);
            let kappa = (k - base_cost).min(blue.len());
            if let Some(dom) = min_dominating_blue(&g)? {
                if dom.len() <= kappa {
                    added.extend(dom.iter().map(|&bi| blue[bi]));
                    if best.as_ref().is_none_or(|b| added.len() < b.len()) {
                        best = Some(added);
                    }
                }
            }
        }
    }
    Ok(Solution::from_option(best.map(Witness::add_candidates), true, label))
}

/// Polynomial for every fixed `h`: small additions are tried exhaustively,
/// larger ones are pinned down by their first and last `h - 1` members.
pub fn solve_dcac_m_minus_h(instance: &ControlInstance) -> Result<Solution> {
    let inst = instance;
    let h = relative_d(inst, Problem::Dcac)?;
    let label = "dcac-(m-h)";
    let p = inst.distinguished();
    let profile = registered_profile(inst);
    let k = inst.budgets().ac;
    let d = inst.unregistered_candidates();
    if winner_with(inst, &profile, &[]) != p {
        return Ok(Solution::yes(Witness::default(), true, label));
    }
    let small = (2 * h - 1).min(k);
    for size in 1..=small {
        for s in subsets_of_size(&d, size) {
            if winner_with(inst, &profile, &s) != p {
                return Ok(Solution::yes(Witness::add_candidates(s), true, label)
                    .with_rationale("constant-size addition"));
            }
        }
    }
    if d.len() < 2 * h || k < 2 * h {
        return Ok(Solution::no(label));
    }
    let pos = agenda_positions(inst);
    let k1 = k - 2 * h + 2;
    let mut best: Option<Vec<usize>> = None;
    for left in subsets_of_size(&d, h - 1) {
        let d_lr = left.iter().map(|&c| pos[c]).max();
        let rest: Vec<usize> = d
            .iter()
            .copied()
            .filter(|c| !left.contains(c) && d_lr.is_none_or(|x| pos[*c] > x))
            .collect();
        for right in subsets_of_size(&rest, h - 1) {
            let d_rl = right.iter().map(|&c| pos[c]).min();
            let both: Vec<usize> = left.iter().chain(&right).copied().collect();
            let between = |c: usize| {
                d_lr.is_none_or(|x| pos[c] > x) && d_rl.is_none_or(|x| pos[c] < x)
            };
            let middle: Vec<usize> = d
                .iter()
                .copied()
                .filter(|&c| !both.contains(&c) && between(c))
                .collect();
            let succ = inst
                .agenda()
                .iter()
                .filter(|&&c| pos[c] > pos[p] && (inst.is_registered(c) || both.contains(&c)))
                .count();
            if succ >= h - 1 {
                continue;
            }
            let k2 = (h - succ).min(k1);
            for z in subsets_up_to(&middle, k2) {
                let mut added = both.clone();
                added.extend(&z);
                if winner_with(inst, &profile, &added) != p {
                    if best.as_ref().is_none_or(|b| added.len() < b.len()) {
                        best = Some(added);
                    }
                    break;
                }
            }
        }
    }
    Ok(Solution::from_option(best.map(Witness::add_candidates), false, label))
}
