//! Shared dedicated-solver cases checked against the brute-force oracle.

#![allow(dead_code)]

use agenda_control::gen::{random_instance, rng_from_seed, InstanceShape};
use agenda_control::solvers::{self, Caps, ControlInstance, Problem, Solution};
use agenda_control::{verify_solution, ProcedureSpec, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Solver = fn(&ControlInstance) -> Result<Solution>;

pub struct Case {
    pub name: &'static str,
    pub problems: &'static [Problem],
    pub procedures: fn(&mut ChaCha8Rng) -> ProcedureSpec,
    pub head: bool,
    pub solver: Solver,
}

fn amd(_: &mut ChaCha8Rng) -> ProcedureSpec {
    ProcedureSpec::AMENDMENT
}

fn full(_: &mut ChaCha8Rng) -> ProcedureSpec {
    ProcedureSpec::FULL
}

fn succ(_: &mut ChaCha8Rng) -> ProcedureSpec {
    ProcedureSpec::Successive
}

fn relative_1_2(rng: &mut ChaCha8Rng) -> ProcedureSpec {
    ProcedureSpec::relative(rng.gen_range(1..=2)).unwrap()
}

fn absolute_1_2(rng: &mut ChaCha8Rng) -> ProcedureSpec {
    ProcedureSpec::absolute(rng.gen_range(1..=2)).unwrap()
}

fn any_amendment(rng: &mut ChaCha8Rng) -> ProcedureSpec {
    if rng.gen_bool(0.5) {
        absolute_1_2(rng)
    } else {
        relative_1_2(rng)
    }
}

pub fn cases() -> Vec<Case> {
    use Problem::*;
    vec![
        Case { name: "first-position", problems: &[Ccac, Ccdc, Dcac, Dcdc, Dcav, Dcdv], procedures: any_amendment, head: true, solver: solvers::solve_first_position },
        Case { name: "ccac-amendment", problems: &[Ccac], procedures: amd, head: false, solver: solvers::solve_ccac_amendment },
        Case { name: "ccdc-amendment", problems: &[Ccdc], procedures: amd, head: false, solver: solvers::solve_ccdc_amendment },
        Case { name: "dcac-dcdc-amendment", problems: &[Dcac, Dcdc], procedures: amd, head: false, solver: solvers::solve_dcac_dcdc_amendment },
        Case { name: "ccdc-full-amendment", problems: &[Ccdc], procedures: full, head: false, solver: solvers::solve_ccdc_full_amendment },
        Case { name: "dcdc-full-amendment", problems: &[Dcdc], procedures: full, head: false, solver: solvers::solve_dcdc_full_amendment },
        Case { name: "dcac-m-minus-h", problems: &[Dcac], procedures: relative_1_2, head: false, solver: solvers::solve_dcac_m_minus_h },
        Case { name: "ccac-m-minus-h", problems: &[Ccac], procedures: relative_1_2, head: false, solver: solvers::solve_ccac_m_minus_h_fpt },
        Case { name: "dcav-dcdv-h-amendment", problems: &[Dcav, Dcdv], procedures: absolute_1_2, head: false, solver: solvers::solve_dcav_dcdv_h_amendment },
        Case { name: "ccav-ccdv-successive", problems: &[Ccav, Ccdv], procedures: succ, head: false, solver: solvers::solve_ccav_ccdv_successive },
        Case { name: "dcav-dcdv-successive", problems: &[Dcav, Dcdv], procedures: succ, head: false, solver: solvers::solve_dcav_dcdv_successive },
        Case { name: "ccdc-successive", problems: &[Ccdc], procedures: succ, head: false, solver: solvers::solve_ccdc_successive_fpt },
        Case { name: "dcac-successive", problems: &[Dcac], procedures: succ, head: false, solver: solvers::solve_dcac_successive_fpt },
    ]
}

pub fn random_case_instance(rng: &mut ChaCha8Rng, case: &Case) -> ControlInstance {
    let problem = case.problems[rng.gen_range(0..case.problems.len())];
    let procedure = (case.procedures)(rng);
    let m = rng.gen_range(2..=6);
    let mut shape = InstanceShape::new(problem, procedure, m, rng.gen_range(1..=5));
    shape.unregistered_votes = rng.gen_range(1..=3);
    shape.max_budget = 3;
    shape.p_position = if case.head { Some(0) } else { None };
    random_instance(rng, &shape).unwrap()
}

/// Runs `count` instances; returns the mismatch descriptions and the number
/// of YES answers.
pub fn check_case(case: &Case, count: usize, seed: u64) -> (Vec<String>, usize) {
    let caps = Caps { m: 7, n: 8, k: 4 };
    let mut rng = rng_from_seed(seed);
    let mut bad = Vec::new();
    let mut yes = 0;
    for i in 0..count {
        let inst = random_case_instance(&mut rng, case);
        let fast = (case.solver)(&inst).unwrap();
        let slow = solvers::brute_force_solve_with(&inst, caps, 1).unwrap();
        yes += usize::from(slow.decision);
        let mut problems = Vec::new();
        if fast.decision != slow.decision {
            problems.push(format!("decision {} vs oracle {}", fast.decision, slow.decision));
        }
        if let Err(e) = verify_solution(&inst, &fast) {
            problems.push(format!("witness fails: {e}"));
        }
        if let (true, Some(w), Some(o)) = (fast.minimal, &fast.witness, &slow.witness) {
            if w.size() != o.size() {
                problems.push(format!("minimal flag but size {} vs {}", w.size(), o.size()));
            }
        }
        if !problems.is_empty() {
            bad.push(format!("#{i} {}: {}\n{}", case.name, problems.join("; "), agenda_control::io::serialize_instance(&inst)));
        }
    }
    (bad, yes)
}
