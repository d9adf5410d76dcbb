//! Exact toolkit for sequential parliamentary voting.
//!
//! Winner determination under the successive and h-amendment procedures,
//! exact solvers for the eight standard election-control problems, and a
//! catalog of hardness-reduction generators used to cross-check the solvers
//! against brute force.
//!
//! ```
//! use agenda_control::{Agenda, Election, ProcedureSpec, winner};
//!
//! let e = Election::from_orders(&["b d c a", "c a b d", "a d b c"]).unwrap();
//! let agenda = Agenda::parse("a b c d").unwrap();
//! let spec: ProcedureSpec = "amendment h=2".parse().unwrap();
//! assert_eq!(winner(&e, &agenda, spec).unwrap().0, "b");
//! ```

pub mod election;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod ilp;
pub mod procedures;
pub mod reductions;
pub mod solvers;

pub use election::{is_valid_id, Agenda, Election, MajorityRecord, Profile, Vote};
pub use error::{Error, ParseCode, Result};
pub use procedures::{
    amendment_winner_via_paths, beating_path_exists, h_amendment_winner, resolve_h,
    successive_winner, winner, EliminationTrace, HMode, ProcedureSpec, Step,
};
pub use reductions::{mcgarvey_election, OrientedGraph};
pub use solvers::{
    brute_force_solve, dispatch_solve, verify_solution, Budgets, ControlInstance, Goal, Problem,
    Solution, Witness,
};
