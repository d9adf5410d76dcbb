//! Exact feasibility and optimisation for small bounded integer programs.
//!
//! Depth-first search in declaration order with interval propagation. All
//! arithmetic is integral: rational right-hand sides are cleared by their
//! denominator and strict relations are tightened by one.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: i64,
    pub upper: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, i64)>,
    pub relation: Relation,
    /// Right-hand side `num / den` with `den > 0`.
    pub rhs: (i64, i64),
}

impl Constraint {
    fn holds(&self, values: &[i64]) -> bool {
        let lhs: i128 = self
            .coeffs
            .iter()
            .map(|&(v, c)| c as i128 * values[v] as i128)
            .sum();
        let (num, den) = (self.rhs.0 as i128, self.rhs.1 as i128);
        let scaled = lhs * den;
        match self.relation {
            Relation::Lt => scaled < num,
            Relation::Le => scaled <= num,
            Relation::Eq => scaled == num,
            Relation::Ge => scaled >= num,
            Relation::Gt => scaled > num,
        }
    }
}

/// Limits on the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_variables: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 5_000_000,
            max_variables: 2048,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntegerProgram {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Option<(Vec<(usize, i64)>, Sense)>,
}

/// A satisfying assignment, indexed like the program's variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub values: Vec<i64>,
    names: Vec<String>,
}

impl Assignment {
    pub fn get(&self, name: &str) -> Option<i64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i])
    }
}

impl IntegerProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>, lower: i64, upper: i64) -> Result<usize> {
        if lower < 0 || lower > upper {
            return Err(Error::input(format!("bad bounds [{lower}, {upper}]")));
        }
        self.variables.push(Variable {
            name: name.into(),
            lower,
            upper,
        });
        Ok(self.variables.len() - 1)
    }

    pub fn add_constraint(
        &mut self,
        coeffs: &[(usize, i64)],
        relation: Relation,
        num: i64,
        den: i64,
    ) -> Result<()> {
        if den <= 0 {
            return Err(Error::input("right-hand side denominator must be positive"));
        }
        if let Some(&(v, _)) = coeffs.iter().find(|(v, _)| *v >= self.variables.len()) {
            return Err(Error::input(format!("constraint names undeclared variable {v}")));
        }
        self.constraints.push(Constraint {
            coeffs: coeffs.to_vec(),
            relation,
            rhs: (num, den),
        });
        Ok(())
    }

    pub fn set_objective(&mut self, coeffs: &[(usize, i64)], sense: Sense) -> Result<()> {
        if coeffs.iter().any(|(v, _)| *v >= self.variables.len()) {
            return Err(Error::input("objective names an undeclared variable"));
        }
        self.objective = Some((coeffs.to_vec(), sense));
        Ok(())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Independent re-check of bounds and constraints.
    pub fn is_satisfied_by(&self, values: &[i64]) -> bool {
        values.len() == self.variables.len()
            && self
                .variables
                .iter()
                .zip(values)
                .all(|(v, &x)| v.lower <= x && x <= v.upper)
            && self.constraints.iter().all(|c| c.holds(values))
    }

    pub fn objective_value(&self, values: &[i64]) -> Option<i64> {
        self.objective
            .as_ref()
            .map(|(c, _)| c.iter().map(|&(v, k)| k * values[v]).sum())
    }

    fn assignment(&self, values: Vec<i64>) -> Assignment {
        Assignment {
            values,
            names: self.variables.iter().map(|v| v.name.clone()).collect(),
        }
    }

    /// Rows of the form `sum <= bound`.
    fn rows(&self) -> Vec<Row> {
        let mut rows = Vec::new();
        for c in &self.constraints {
            let den = c.rhs.1 as i128;
            let num = c.rhs.0 as i128;
            let pos: Vec<(usize, i128)> = c.coeffs.iter().map(|&(v, k)| (v, k as i128 * den)).collect();
            let neg: Vec<(usize, i128)> = pos.iter().map(|&(v, k)| (v, -k)).collect();
            match c.relation {
                Relation::Le => rows.push(Row { coeffs: pos, bound: num }),
                Relation::Lt => rows.push(Row { coeffs: pos, bound: num - 1 }),
                Relation::Ge => rows.push(Row { coeffs: neg, bound: -num }),
                Relation::Gt => rows.push(Row { coeffs: neg, bound: -num - 1 }),
                Relation::Eq => {
                    rows.push(Row { coeffs: pos, bound: num });
                    rows.push(Row { coeffs: neg, bound: -num });
                }
            }
        }
        rows
    }

    fn check_budget(&self, budget: &SearchBudget) -> Result<()> {
        if self.variables.len() > budget.max_variables {
            return Err(Error::resource(format!(
                "integer program has {} variables, cap is {}",
                self.variables.len(),
                budget.max_variables
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<(usize, i128)>,
    bound: i128,
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// Tightens `lo`/`hi` to a fixpoint. Returns false on an empty domain.
fn propagate(rows: &[Row], lo: &mut [i128], hi: &mut [i128]) -> bool {
    loop {
        let mut changed = false;
        for row in rows {
            let min_act: i128 = row
                .coeffs
                .iter()
                .map(|&(v, c)| if c > 0 { c * lo[v] } else { c * hi[v] })
                .sum();
            if min_act > row.bound {
                return false;
            }
            for &(v, c) in &row.coeffs {
                if c == 0 {
                    continue;
                }
                let own = if c > 0 { c * lo[v] } else { c * hi[v] };
                let slack = row.bound - (min_act - own);
                if c > 0 {
                    let ub = div_floor(slack, c);
                    if ub < hi[v] {
                        hi[v] = ub;
                        changed = true;
                    }
                } else {
                    let lb = div_ceil(slack, c);
                    if lb > lo[v] {
                        lo[v] = lb;
                        changed = true;
                    }
                }
                if lo[v] > hi[v] {
                    return false;
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

struct Search<'a> {
    rows: Vec<Row>,
    objective: Option<&'a [(usize, i64)]>,
    nodes: u64,
    budget: SearchBudget,
    best: Option<(Vec<i64>, i128)>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Error::resource(format!(
                "integer program search exceeded {} nodes",
                self.budget.max_nodes
            )));
        }
        Ok(())
    }

    /// Depth-first search; returns true to stop (first feasible point found
    /// in feasibility mode).
    fn dfs(&mut self, lo: Vec<i128>, hi: Vec<i128>) -> Result<bool> {
        self.tick()?;
        let (mut lo, mut hi) = (lo, hi);
        if let (Some(obj), Some((_, best))) = (self.objective, &self.best) {
            let cut = Row {
                coeffs: obj.iter().map(|&(v, c)| (v, c as i128)).collect(),
                bound: best - 1,
            };
            let mut rows = self.rows.clone();
            rows.push(cut);
            if !propagate(&rows, &mut lo, &mut hi) {
                return Ok(false);
            }
        } else if !propagate(&self.rows, &mut lo, &mut hi) {
            return Ok(false);
        }
        match (0..lo.len()).find(|&v| lo[v] < hi[v]) {
            None => {
                let values: Vec<i64> = lo.iter().map(|&x| x as i64).collect();
                match self.objective {
                    None => {
                        self.best = Some((values, 0));
                        Ok(true)
                    }
                    Some(obj) => {
                        let val: i128 = obj.iter().map(|&(v, c)| c as i128 * lo[v]).sum();
                        if self.best.as_ref().is_none_or(|(_, b)| val < *b) {
                            self.best = Some((values, val));
                        }
                        Ok(false)
                    }
                }
            }
            Some(v) => {
                for x in lo[v]..=hi[v] {
                    let (mut l2, mut h2) = (lo.clone(), hi.clone());
                    l2[v] = x;
                    h2[v] = x;
                    if self.dfs(l2, h2)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }
}

fn run(program: &IntegerProgram, budget: SearchBudget, optimise: bool) -> Result<Option<(Vec<i64>, i128)>> {
    program.check_budget(&budget)?;
    let sign = match &program.objective {
        Some((_, Sense::Maximize)) => -1,
        _ => 1,
    };
    let negated: Vec<(usize, i64)>;
    let objective = match (&program.objective, optimise) {
        (Some((c, _)), true) => {
            negated = c.iter().map(|&(v, k)| (v, sign * k)).collect();
            Some(negated.as_slice())
        }
        (None, true) => Some(&[][..]),
        _ => None,
    };
    let mut search = Search {
        rows: program.rows(),
        objective,
        nodes: 0,
        budget,
        best: None,
    };
    let lo = program.variables.iter().map(|v| v.lower as i128).collect();
    let hi = program.variables.iter().map(|v| v.upper as i128).collect();
    search.dfs(lo, hi)?;
    Ok(search.best.map(|(x, v)| (x, v * sign as i128)))
}

pub fn solve_feasibility(program: &IntegerProgram) -> Result<Option<Assignment>> {
    solve_feasibility_with(program, SearchBudget::default())
}

pub fn solve_feasibility_with(program: &IntegerProgram, budget: SearchBudget) -> Result<Option<Assignment>> {
    Ok(run(program, budget, false)?.map(|(x, _)| program.assignment(x)))
}

/// Optimises the program's objective (an absent objective counts as zero).
pub fn solve_minimize(program: &IntegerProgram) -> Result<Option<(Assignment, i64)>> {
    solve_minimize_with(program, SearchBudget::default())
}

pub fn solve_minimize_with(program: &IntegerProgram, budget: SearchBudget) -> Result<Option<(Assignment, i64)>> {
    Ok(run(program, budget, true)?.map(|(x, v)| (program.assignment(x), v as i64)))
}
