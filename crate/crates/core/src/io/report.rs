use crate::error::{Error, ParseCode, Result};
use crate::solvers::{ControlInstance, Solution};

use super::{lines, missing, Seen};

/// Solver output in document form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub decision: bool,
    pub algorithm: String,
    pub minimal: bool,
    pub rationale: String,
    /// Edit lines such as `delete-candidate b`.
    pub witness: Vec<String>,
}

impl Report {
    pub fn from_solution(instance: &ControlInstance, solution: &Solution) -> Self {
        Report {
            decision: solution.decision,
            algorithm: solution.algorithm.clone(),
            minimal: solution.minimal,
            rationale: solution.rationale.clone(),
            witness: solution.witness.as_ref().map(|w| w.lines(instance)).unwrap_or_default(),
        }
    }
}

pub fn parse_report(text: &str) -> Result<Report> {
    let lines = lines(text, "report")?;
    let mut seen = Seen::default();
    let (mut decision, mut algorithm, mut minimal) = (None, None, None);
    let mut rationale = String::new();
    let mut witness = Vec::new();
    for line in &lines {
        match line.key {
            "decision" => {
                seen.once(line, "decision")?;
                decision = Some(match line.single("decision")? {
                    "YES" => true,
                    "NO" => false,
                    other => return Err(line.err(ParseCode::Syntax, format!("expected YES or NO, found `{other}`"))),
                });
            }
            "algorithm" => {
                seen.once(line, "algorithm")?;
                algorithm = Some(line.rest.to_string());
            }
            "minimal" => {
                seen.once(line, "minimal")?;
                minimal = Some(match line.single("flag")? {
                    "true" => true,
                    "false" => false,
                    other => return Err(line.err(ParseCode::Syntax, format!("expected true or false, found `{other}`"))),
                });
            }
            "rationale" => {
                seen.once(line, "rationale")?;
                rationale = line.rest.to_string();
            }
            "witness" => witness.push(line.rest.to_string()),
            other => return Err(line.err(ParseCode::UnknownKey, format!("unknown key `{other}`"))),
        }
    }
    let last = lines.last().map_or(1, |l| l.no);
    let decision = decision.ok_or_else(|| missing("decision", last))?;
    if !decision && !witness.is_empty() {
        return Err(Error::parse(ParseCode::Syntax, last, "a NO report carries no witness"));
    }
    Ok(Report {
        decision,
        algorithm: algorithm.ok_or_else(|| missing("algorithm", last))?,
        minimal: minimal.unwrap_or(false),
        rationale,
        witness,
    })
}

pub fn serialize_report(r: &Report) -> String {
    let mut out = String::from("format report v1\n");
    out += &format!("decision {}\n", if r.decision { "YES" } else { "NO" });
    out += &format!("algorithm {}\n", r.algorithm);
    out += &format!("minimal {}\n", r.minimal);
    if !r.rationale.is_empty() {
        out += &format!("rationale {}\n", r.rationale);
    }
    for w in &r.witness {
        out += &format!("witness {w}\n");
    }
    out
}
