pub mod solver_cases;
