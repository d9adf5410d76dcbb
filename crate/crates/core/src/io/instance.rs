use crate::error::{Error, ParseCode, Result};
use crate::procedures::ProcedureSpec;
use crate::solvers::{Budgets, ControlInstance, Goal, Problem};

use super::{check_unique, lines, missing, parse_vote, Line, Seen};

fn parse_budgets(line: &Line) -> Result<Budgets> {
    let mut b = Budgets::default();
    let mut given = Vec::new();
    for word in line.words() {
        let (key, value) = word
            .split_once('=')
            .ok_or_else(|| line.err(ParseCode::Syntax, format!("expected `<kind>=<int>`, found `{word}`")))?;
        let v: usize = line.number(value, key)?;
        if given.contains(&key) {
            return Err(line.err(ParseCode::RepeatedKey, format!("budget `{key}` given twice")));
        }
        given.push(key);
        match key {
            "av" => b.av = v,
            "dv" => b.dv = v,
            "ac" => b.ac = v,
            "dc" => b.dc = v,
            other => return Err(line.err(ParseCode::Syntax, format!("unknown budget `{other}`"))),
        }
    }
    Ok(b)
}

pub fn parse_instance(text: &str) -> Result<ControlInstance> {
    let lines = lines(text, "control-instance")?;
    let mut seen = Seen::default();
    let mut problem: Option<(Problem, usize)> = None;
    let mut goal = None;
    let mut procedure = ProcedureSpec::AMENDMENT;
    let mut registered: Option<Vec<String>> = None;
    let mut unregistered: Vec<String> = Vec::new();
    let mut agenda: Option<(Vec<String>, usize)> = None;
    let mut distinguished: Option<(String, usize)> = None;
    let mut budgets = Budgets::default();
    let mut budget_line = None;
    let mut votes: Vec<(&Line, bool, &str)> = Vec::new();
    for line in &lines {
        match line.key {
            "problem" => {
                seen.once(line, "problem")?;
                let p: Problem = line.single("problem")?.parse().map_err(|e| line.lift(e))?;
                problem = Some((p, line.no));
            }
            "goal" => {
                seen.once(line, "goal")?;
                goal = Some(line.single("goal")?.parse::<Goal>().map_err(|e| line.lift(e))?);
            }
            "procedure" => {
                seen.once(line, "procedure")?;
                procedure = line.rest.parse().map_err(|e| line.lift(e))?;
            }
            "candidates" => {
                seen.once(line, "candidates")?;
                let ids = line.ids()?;
                check_unique(line, &ids, &unregistered)?;
                registered = Some(ids);
            }
            "unregistered-candidates" => {
                seen.once(line, "unregistered-candidates")?;
                let ids = line.ids()?;
                check_unique(line, &ids, registered.as_deref().unwrap_or(&[]))?;
                unregistered = ids;
            }
            "agenda" => {
                seen.once(line, "agenda")?;
                agenda = Some((line.words().into_iter().map(str::to_string).collect(), line.no));
            }
            "distinguished" => {
                seen.once(line, "distinguished")?;
                distinguished = Some((line.single("distinguished candidate")?.to_string(), line.no));
            }
            "budgets" => {
                seen.once(line, "budgets")?;
                budgets = parse_budgets(line)?;
                budget_line = Some(line.no);
            }
            "vote" => {
                let (kind, rest) = line
                    .rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| line.err(ParseCode::Syntax, "expected `vote registered|unregistered <count>: ...`"))?;
                let reg = match kind {
                    "registered" => true,
                    "unregistered" => false,
                    other => {
                        return Err(line.err(ParseCode::Syntax, format!("expected `registered` or `unregistered`, found `{other}`")))
                    }
                };
                votes.push((line, reg, rest.trim()));
            }
            other => return Err(line.err(ParseCode::UnknownKey, format!("unknown key `{other}`"))),
        }
    }
    let last = lines.last().map_or(1, |l| l.no);
    let (problem, problem_line) = problem.ok_or_else(|| missing("problem", last))?;
    let registered = registered.ok_or_else(|| missing("candidates", last))?;
    let (agenda, agenda_line) = agenda.ok_or_else(|| missing("agenda", last))?;
    let (p, p_line) = distinguished.ok_or_else(|| missing("distinguished", last))?;
    let universe: Vec<String> = registered.iter().chain(&unregistered).cloned().collect();
    {
        let mut a = agenda.clone();
        a.sort();
        let mut u = universe.clone();
        u.sort();
        if a != u {
            return Err(Error::parse(
                ParseCode::WrongUniverse,
                agenda_line,
                "agenda must list every candidate exactly once",
            ));
        }
    }
    if !universe.contains(&p) {
        return Err(Error::parse(ParseCode::WrongUniverse, p_line, format!("`{p}` is not a candidate")));
    }
    if !registered.contains(&p) {
        return Err(Error::parse(ParseCode::Syntax, p_line, format!("distinguished `{p}` must be registered")));
    }
    let mut b = ControlInstance::builder(problem)
        .procedure(procedure)
        .candidates(&registered)
        .unregistered_candidates(&unregistered)
        .agenda(&agenda)
        .distinguished(&p)
        .budgets(budgets);
    if let Some(g) = goal {
        b = b.goal(g);
    }
    for (line, reg, rest) in votes {
        let (order, count) = parse_vote(line, rest, &universe)?;
        b = if reg { b.registered_vote(&order, count) } else { b.unregistered_vote(&order, count) };
    }
    b.build().map_err(|e| match e {
        Error::Invalid { code, message } => {
            let at = if code == ParseCode::BudgetShape { budget_line.unwrap_or(problem_line) } else { problem_line };
            Error::parse(code, at, message)
        }
        Error::Input(message) => Error::parse(ParseCode::Syntax, problem_line, message),
        other => other,
    })
}

pub fn serialize_instance(inst: &ControlInstance) -> String {
    let names = |ids: &[usize]| ids.iter().map(|&c| inst.name(c)).collect::<Vec<_>>().join(" ");
    let mut out = String::from("format control-instance v1\n");
    out += &format!("problem {}\n", inst.problem());
    if inst.problem() == Problem::Multimode {
        out += &format!("goal {}\n", inst.goal());
    }
    out += &format!("procedure {}\n", inst.procedure());
    out += &format!("candidates {}\n", names(&inst.registered_candidates()));
    let d = inst.unregistered_candidates();
    if !d.is_empty() {
        out += &format!("unregistered-candidates {}\n", names(&d));
    }
    out += &format!("agenda {}\n", names(inst.agenda()));
    out += &format!("distinguished {}\n", inst.distinguished_name());
    let b = inst.budgets();
    out += &format!("budgets av={} dv={} ac={} dc={}\n", b.av, b.dv, b.ac, b.dc);
    for (kind, votes) in [("registered", inst.registered_votes()), ("unregistered", inst.unregistered_votes())] {
        for v in votes {
            let order: Vec<&str> = v.order().iter().map(|&c| inst.name(c)).collect();
            out += &format!("vote {kind} {}: {}\n", v.multiplicity(), order.join(">"));
        }
    }
    out
}
