//! Line-oriented text formats: elections, control instances, graphs and
//! solution reports.
//!
//! Every document opens with `format <kind> v1`. A `#` at the start of a line
//! or after whitespace starts a comment; `#` inside an id is literal.
//! Parse errors carry the 1-based line number and a stable code.

mod instance;
mod report;

use std::collections::HashSet;

use crate::election::{check_ids, Election};
use crate::error::{Error, ParseCode, Result};
use crate::graph::{BipartiteGraph, Graph, GraphInstance, GraphProblem, GraphShape};

pub use instance::{parse_instance, serialize_instance};
pub use report::{parse_report, serialize_report, Report};

/// A parsed document of any kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Election(Election),
    Instance(crate::solvers::ControlInstance),
    Graph(GraphDocument),
    Report(Report),
}

/// Graph plus the optional problem tag and `kappa` used by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDocument {
    pub problem: Option<GraphProblem>,
    pub graph: GraphShape,
    pub kappa: Option<usize>,
}

impl GraphDocument {
    pub fn from_instance(instance: &GraphInstance) -> Self {
        GraphDocument {
            problem: Some(instance.problem),
            graph: instance.graph.clone(),
            kappa: Some(instance.kappa),
        }
    }

    /// Instance with command-line overrides taking precedence.
    pub fn to_instance(&self, problem: Option<GraphProblem>, kappa: Option<usize>) -> Result<GraphInstance> {
        let problem = problem
            .or(self.problem)
            .ok_or_else(|| Error::input("graph problem not given in the document or on the command line"))?;
        let kappa = kappa
            .or(self.kappa)
            .ok_or_else(|| Error::input("kappa not given in the document or on the command line"))?;
        GraphInstance::new(problem, self.graph.clone(), kappa)
    }
}

pub(crate) struct Line<'a> {
    pub no: usize,
    pub key: &'a str,
    pub rest: &'a str,
}

impl Line<'_> {
    pub fn err(&self, code: ParseCode, msg: impl Into<String>) -> Error {
        Error::parse(code, self.no, msg)
    }

    pub fn words(&self) -> Vec<&str> {
        self.rest.split_whitespace().collect()
    }

    pub fn ids(&self) -> Result<Vec<String>> {
        let words = self.words();
        check_ids(words.iter().copied()).map_err(|e| self.lift(e))?;
        Ok(words.into_iter().map(str::to_string).collect())
    }

    pub fn single(&self, what: &str) -> Result<&str> {
        match self.words().as_slice() {
            [one] => Ok(one),
            _ => Err(self.err(ParseCode::Syntax, format!("expected exactly one {what}"))),
        }
    }

    pub fn number<T: std::str::FromStr>(&self, text: &str, what: &str) -> Result<T> {
        text.parse()
            .map_err(|_| self.err(ParseCode::BadNumber, format!("expected a nonnegative integer for {what}, found `{text}`")))
    }

    /// Re-tags a structural error with this line.
    pub fn lift(&self, e: Error) -> Error {
        match e {
            Error::Invalid { code, message } => self.err(code, message),
            Error::Input(message) => self.err(ParseCode::Syntax, message),
            other => other,
        }
    }
}

fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'#' && (i == 0 || bytes[i - 1].is_ascii_whitespace()) {
            return &line[..i];
        }
    }
    line
}

/// Content lines after the header, which must name `kind`.
pub(crate) fn lines<'a>(text: &'a str, kind: &str) -> Result<Vec<Line<'a>>> {
    let mut out = Vec::new();
    let mut header_seen = false;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        if !header_seen {
            let words: Vec<&str> = content.split_whitespace().collect();
            if words != ["format", kind, "v1"] {
                return Err(Error::parse(
                    ParseCode::Header,
                    no,
                    format!("expected `format {kind} v1`, found `{content}`"),
                ));
            }
            header_seen = true;
            continue;
        }
        let (key, rest) = match content.find(char::is_whitespace) {
            Some(at) => (&content[..at], content[at..].trim()),
            None => (content, ""),
        };
        out.push(Line { no, key, rest });
    }
    if !header_seen {
        return Err(Error::parse(ParseCode::Header, 1, format!("missing `format {kind} v1` header")));
    }
    Ok(out)
}

/// Tracks singleton keys.
#[derive(Default)]
pub(crate) struct Seen(HashSet<&'static str>);

impl Seen {
    pub fn once(&mut self, line: &Line, key: &'static str) -> Result<()> {
        if self.0.insert(key) {
            Ok(())
        } else {
            Err(line.err(ParseCode::RepeatedKey, format!("`{key}` given twice")))
        }
    }
}

pub(crate) fn missing(key: &str, last_line: usize) -> Error {
    Error::parse(ParseCode::MissingKey, last_line, format!("missing `{key}` line"))
}

pub(crate) fn check_unique(line: &Line, ids: &[String], also: &[String]) -> Result<()> {
    let mut seen: HashSet<&str> = also.iter().map(String::as_str).collect();
    for id in ids {
        if !seen.insert(id) {
            return Err(line.err(ParseCode::DuplicateCandidate, format!("candidate `{id}` declared twice")));
        }
    }
    Ok(())
}

/// `<count>: a>b>c` checked against `universe`.
pub(crate) fn parse_vote(line: &Line, text: &str, universe: &[String]) -> Result<(Vec<String>, u64)> {
    let (count, order) = text
        .split_once(':')
        .ok_or_else(|| line.err(ParseCode::Syntax, "expected `<count>: <id>><id>>...`"))?;
    let count: u64 = line.number(count.trim(), "the vote count")?;
    if count == 0 {
        return Err(line.err(ParseCode::BadNumber, "vote count must be positive"));
    }
    let order: Vec<String> = order.split('>').map(|s| s.trim().to_string()).collect();
    let mut sorted = order.clone();
    sorted.sort();
    let mut want = universe.to_vec();
    want.sort();
    if sorted != want {
        return Err(line.err(
            ParseCode::WrongUniverse,
            format!("vote `{}` is not a linear order over the candidates", order.join(">")),
        ));
    }
    Ok((order, count))
}

pub fn parse_election(text: &str) -> Result<Election> {
    let lines = lines(text, "election")?;
    let mut seen = Seen::default();
    let mut candidates: Option<Vec<String>> = None;
    let mut votes = Vec::new();
    for line in &lines {
        match line.key {
            "candidates" => {
                seen.once(line, "candidates")?;
                let ids = line.ids()?;
                check_unique(line, &ids, &[])?;
                candidates = Some(ids);
            }
            "vote" => {
                let universe = candidates
                    .as_ref()
                    .ok_or_else(|| line.err(ParseCode::MissingKey, "`candidates` must precede votes"))?;
                votes.push(parse_vote(line, line.rest, universe)?);
            }
            other => return Err(line.err(ParseCode::UnknownKey, format!("unknown key `{other}`"))),
        }
    }
    let last = lines.last().map_or(1, |l| l.no);
    let candidates = candidates.ok_or_else(|| missing("candidates", last))?;
    Election::new(&candidates, &votes)
}

pub fn serialize_election(election: &Election) -> String {
    let mut out = String::from("format election v1\n");
    out += &format!("candidates {}\n", election.candidates().join(" "));
    for (order, count) in election.vote_orders() {
        out += &format!("vote {count}: {}\n", order.join(">"));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<GraphDocument> {
    let lines = lines(text, "graph")?;
    let mut seen = Seen::default();
    let (mut red, mut blue, mut verts): (Option<Vec<String>>, Option<Vec<String>>, Option<Vec<String>>) =
        (None, None, None);
    let mut edges: Vec<(String, String, usize)> = Vec::new();
    let mut problem = None;
    let mut kappa = None;
    for line in &lines {
        match line.key {
            "problem" => {
                seen.once(line, "problem")?;
                let word = line.single("graph problem")?;
                problem = Some(word.parse::<GraphProblem>().map_err(|e| line.lift(e))?);
            }
            "kappa" => {
                seen.once(line, "kappa")?;
                kappa = Some(line.number(line.single("kappa")?, "kappa")?);
            }
            "red" => {
                seen.once(line, "red")?;
                red = Some(line.ids()?);
            }
            "blue" => {
                seen.once(line, "blue")?;
                blue = Some(line.ids()?);
            }
            "vertex" | "vertices" => {
                seen.once(line, "vertex")?;
                verts = Some(line.ids()?);
            }
            "edge" => match line.words().as_slice() {
                [a, b] => edges.push((a.to_string(), b.to_string(), line.no)),
                _ => return Err(line.err(ParseCode::Syntax, "expected `edge <id> <id>`")),
            },
            other => return Err(line.err(ParseCode::UnknownKey, format!("unknown key `{other}`"))),
        }
    }
    let last = lines.last().map_or(1, |l| l.no);
    let pairs: Vec<(String, String)> = edges.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
    let at_edges = |e: Error| {
        let no = edges.first().map_or(last, |x| x.2);
        match e {
            Error::Input(m) => Error::parse(ParseCode::Syntax, no, m),
            other => other,
        }
    };
    let graph = match (red, blue, verts) {
        (Some(r), Some(b), None) => GraphShape::Bipartite(BipartiteGraph::new(&r, &b, &pairs).map_err(at_edges)?),
        (None, None, Some(v)) => GraphShape::General(Graph::new(&v, &pairs).map_err(at_edges)?),
        (None, None, None) => return Err(missing("vertex` or `red`/`blue", last)),
        _ => {
            return Err(Error::parse(
                ParseCode::Syntax,
                last,
                "use either `vertex` or both `red` and `blue`",
            ))
        }
    };
    if let Some(p) = problem {
        GraphInstance::new(p, graph.clone(), 0).map_err(|e| Error::parse(ParseCode::Syntax, last, e.to_string()))?;
    }
    Ok(GraphDocument { problem, graph, kappa })
}

pub fn serialize_graph(doc: &GraphDocument) -> String {
    let mut out = String::from("format graph v1\n");
    if let Some(p) = doc.problem {
        out += &format!("problem {p}\n");
    }
    if let Some(k) = doc.kappa {
        out += &format!("kappa {k}\n");
    }
    match &doc.graph {
        GraphShape::Bipartite(g) => {
            out += &format!("red {}\n", g.red().join(" "));
            out += &format!("blue {}\n", g.blue().join(" "));
            for (r, b) in g.edges() {
                out += &format!("edge {} {}\n", g.red()[r], g.blue()[b]);
            }
        }
        GraphShape::General(g) => {
            out += &format!("vertex {}\n", g.vertices().join(" "));
            for (a, b) in g.edges() {
                out += &format!("edge {} {}\n", g.vertices()[a], g.vertices()[b]);
            }
        }
    }
    out
}

/// Parses any document by its header.
pub fn parse_document(text: &str) -> Result<Document> {
    let kind = text
        .lines()
        .map(|l| strip_comment(l).trim())
        .find(|l| !l.is_empty())
        .and_then(|l| {
            let w: Vec<&str> = l.split_whitespace().collect();
            (w.len() == 3 && w[0] == "format" && w[2] == "v1").then(|| w[1].to_string())
        });
    match kind.as_deref() {
        Some("election") => parse_election(text).map(Document::Election),
        Some("control-instance") => parse_instance(text).map(Document::Instance),
        Some("graph") => parse_graph(text).map(Document::Graph),
        Some("report") => parse_report(text).map(Document::Report),
        _ => Err(Error::parse(
            ParseCode::Header,
            1,
            "expected `format election|control-instance|graph|report v1`",
        )),
    }
}

pub fn serialize_document(doc: &Document) -> String {
    match doc {
        Document::Election(e) => serialize_election(e),
        Document::Instance(i) => serialize_instance(i),
        Document::Graph(g) => serialize_graph(g),
        Document::Report(r) => serialize_report(r),
    }
}

/// Parse then serialize.
pub fn canonicalize(text: &str) -> Result<String> {
    parse_document(text).map(|d| serialize_document(&d))
}
