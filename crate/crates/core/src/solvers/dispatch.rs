//! Routing from an instance to the most specific exact algorithm.

use crate::error::{Error, Result};
use crate::procedures::{HMode, ProcedureSpec};

use super::brute::{brute_force_solve_with, Caps};
use super::voters;
use super::{
    amendment, first_position, full, mh, successive, verify_solution, ControlInstance, Problem,
    Solution,
};

type SolverFn = fn(&ControlInstance) -> Result<Solution>;

/// Settings for [`dispatch_solve_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub caps: Caps,
    /// Worker threads for the brute-force oracle.
    pub jobs: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { caps: Caps::default(), jobs: 1 }
    }
}

/// One row of the routing table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub problem: Problem,
    /// `amendment h=1`, `absolute h>=2`, `full-amendment`, `relative d>=2`
    /// or `successive`.
    pub family: &'static str,
    /// `any`, `p first` or `p not first`.
    pub position: &'static str,
    /// `P`, `FPT(predecessors)`, `FPT(successors)`, `immune`, `W[1]-hard`,
    /// `W[2]-hard`, `NP-hard` or `OPEN`.
    pub complexity: &'static str,
    pub algorithm: &'static str,
}

const AMD: &str = "amendment h=1";
const ABS: &str = "absolute h>=2";
const FULL: &str = "full-amendment";
const REL: &str = "relative d>=2";
const SUC: &str = "successive";

struct Cell {
    complexity: &'static str,
    algorithm: &'static str,
    solver: Option<SolverFn>,
}

fn cell(complexity: &'static str, algorithm: &'static str, solver: Option<SolverFn>) -> Cell {
    Cell { complexity, algorithm, solver }
}

fn family_of(inst: &ControlInstance) -> &'static str {
    match inst.procedure() {
        ProcedureSpec::Successive => SUC,
        ProcedureSpec::Amendment(HMode::Absolute(1)) => AMD,
        // Every round already spans all remaining candidates.
        ProcedureSpec::Amendment(HMode::Absolute(h)) if h + 1 >= inst.num_candidates() => FULL,
        ProcedureSpec::Amendment(HMode::Absolute(_)) => ABS,
        ProcedureSpec::Amendment(HMode::Relative(1)) => FULL,
        ProcedureSpec::Amendment(HMode::Relative(_)) => REL,
    }
}

/// Cell for a problem in a family when `p` is not the agenda head.
fn general_cell(problem: Problem, family: &str) -> Cell {
    use Problem::*;
    let brute = |c| cell(c, "brute-force", None);
    match (family, problem) {
        (AMD, Ccac) => cell("P", "ccac-amendment-dp", Some(amendment::solve_ccac_amendment)),
        (AMD, Ccdc) => cell("P", "ccdc-amendment-dp", Some(amendment::solve_ccdc_amendment)),
        (AMD, Dcac | Dcdc) => cell("P", "turing-reduction (amendment dp)", Some(amendment::solve_dcac_dcdc_amendment)),
        (AMD | ABS, Dcav | Dcdv) => cell("FPT(predecessors)", "edcev-h-amendment", Some(voters::solve_dcav_dcdv_h_amendment)),
        (AMD, Ccav | Ccdv) => brute("W[2]-hard"),
        (ABS, Ccav | Ccdv) => brute("NP-hard"),
        (ABS, _) => brute("OPEN"),
        (FULL, Ccav | Dcav) => brute("W[1]-hard"),
        (FULL, Ccdv | Dcdv) => brute("W[2]-hard"),
        (REL, Ccav | Ccdv | Dcav | Dcdv) => brute("NP-hard"),
        (FULL, Ccdc) => cell("P", "ccdc-full-amendment-rules", Some(full::solve_ccdc_full_amendment)),
        (FULL, Dcdc) => cell("P", "turing-reduction (full-amendment rules)", Some(full::solve_dcdc_full_amendment)),
        (FULL | REL, Dcac) => cell("P", "dcac-(m-h)", Some(mh::solve_dcac_m_minus_h)),
        (FULL | REL, Ccac) => cell("FPT(predecessors)", "ccac-(m-h)-fpt", Some(mh::solve_ccac_m_minus_h_fpt)),
        (REL, Ccdc | Dcdc) => brute("OPEN"),
        (SUC, Ccav | Ccdv) => cell("FPT(predecessors)", "eccev-successive", Some(voters::solve_ccav_ccdv_successive)),
        (SUC, Dcav | Dcdv) => cell("P", "edcev-successive", Some(voters::solve_dcav_dcdv_successive)),
        (SUC, Ccac) => brute("W[2]-hard"),
        (SUC, Dcdc) => brute("W[1]-hard"),
        (SUC, Ccdc) => cell("FPT(successors)", "ccdc-successive-fpt", Some(successive::solve_ccdc_successive_fpt)),
        (SUC, Dcac) => cell("FPT(successors)", "dcac-successive-fpt", Some(successive::solve_dcac_successive_fpt)),
        _ => brute("NP-hard"),
    }
}

/// Cell when `p` heads the agenda.
fn head_cell(problem: Problem, family: &str) -> Cell {
    use Problem::*;
    let fp: Option<SolverFn> = Some(first_position::solve_first_position);
    match (family, problem) {
        (_, Ccac | Dcdc) => cell("immune", "first-position (immune)", fp),
        (SUC, _) => general_cell(problem, family),
        (ABS | REL, Ccav | Ccdv) => cell("NP-hard", "brute-force", None),
        (_, Ccav | Ccdv) => cell("W[1]-hard", "brute-force", None),
        _ => cell("P", "first-position", fp),
    }
}

/// Snapshot of every routing decision, one row per problem, family and
/// agenda position.
pub fn routing_table() -> Vec<Route> {
    let mut rows = Vec::new();
    for family in [AMD, ABS, FULL, REL, SUC] {
        for problem in Problem::STANDARD {
            for (position, c) in [
                ("p first", head_cell(problem, family)),
                ("p not first", general_cell(problem, family)),
            ] {
                rows.push(Route {
                    problem,
                    family,
                    position,
                    complexity: c.complexity,
                    algorithm: c.algorithm,
                });
            }
        }
    }
    rows
}

pub fn dispatch_solve(instance: &ControlInstance) -> Result<Solution> {
    dispatch_solve_with(instance, SolveOptions { caps: Caps::from_env()?, jobs: 1 })
}

/// Routes, solves, and re-simulates any YES witness.
pub fn dispatch_solve_with(instance: &ControlInstance, options: SolveOptions) -> Result<Solution> {
    let inst = instance;
    let family = family_of(inst);
    let head = inst.agenda()[0] == inst.distinguished();
    let (c, position) = if inst.problem() == Problem::Multimode {
        (cell("multimode", "brute-force", None), "any")
    } else if head {
        (head_cell(inst.problem(), family), "p first")
    } else {
        (general_cell(inst.problem(), family), "p not first")
    };
    let why = format!("{} / {} / {}: {}", inst.problem(), family, position, c.complexity);
    let mut solution = None;
    if let Some(solver) = c.solver {
        match solver(inst) {
            Ok(s) => solution = Some(s),
            Err(Error::Resource(msg)) => {
                log::info!("{} exceeded its limits ({msg}); falling back to brute force", c.algorithm);
            }
            Err(e) => return Err(e),
        }
    }
    let solution = match solution {
        Some(s) => s,
        None => {
            let mut s = brute_force_solve_with(inst, options.caps, options.jobs).map_err(|e| match e {
                Error::Resource(msg) => Error::resource(format!(
                    "{why}; the dedicated route is unavailable and brute force is capped: {msg}"
                )),
                other => other,
            })?;
            s.algorithm = match c.complexity {
                "OPEN" => "brute-force (OPEN cell)".to_string(),
                "multimode" => "brute-force".to_string(),
                x if x.ends_with("hard") => format!("brute-force ({x} cell)"),
                _ => "brute-force (fallback)".to_string(),
            };
            s
        }
    };
    verify_solution(inst, &solution)?;
    let rationale = if solution.rationale.is_empty() {
        why
    } else {
        format!("{why}; {}", solution.rationale)
    };
    Ok(solution.with_rationale(rationale))
}
