//! Command-line front end: the evidence-file format, its renderer, and the
//! `measure`, `combine`, `bench` and `marginal` commands.
//!
//! File format (line oriented, `#` starts a comment):
//!
//! ```text
//! frame x: a b c
//! body E1 over x:
//!   {a b} 0.6
//!   {b c} 0.4
//! body J over x y:
//!   {(a,0) (b,1)} 1
//! markov:
//!   node n1: x y body J
//!   node n2: x body E1
//!   edge n1 n2
//! ```
//!
//! `{}` is the empty set. A body over several frames treats each frame as a
//! variable of the same name; its elements are tuples. Markov node variables
//! are frame names and a node body may cover only some of them.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::body::{bel_brute, complement_body_counted, normalize, pl_brute, q_brute, Body, BodyOfEvidence};
use crate::combine::{
    choose_strategy, combine, predicted_q_strategy_cost, worst_case_combination_cost, Strategy,
};
use crate::error::EvidenceError;
use crate::frame::{Frame, ProductFrame, Space, Variable};
use crate::hierarchy::{
    bel_via_complement, build_tree, pl_via_complement, q_tree, q_via_tree, worst_case_construction_cost,
    worst_case_q_cost,
};
use crate::metrics::{predicted_partition_cost, Measure, OpCounter, Phase};
use crate::partition::{bel_partition, build_partition, pl_partition, q_partition, CardinalityPartition};
use crate::propagate::{extend, lift, marginal, MarkovTree};
use crate::set::{ConfigSet, FocalSet, SetLike};

/// Largest `--omega` accepted by `bench`.
pub const MAX_BENCH_OMEGA: u32 = 12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown label {label}")]
    UnknownLabel { line: usize, label: String },
    #[error("line {line}: unknown frame {name}")]
    UnknownFrame { line: usize, name: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: EvidenceError },
    #[error("unknown body {0}")]
    UnknownBody(String),
    #[error("unknown label {0} in set expression")]
    BadSet(String),
    #[error("file has no markov block")]
    NoMarkov,
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Evidence(#[from] EvidenceError),
}

impl CliError {
    /// 2 for malformed input, 3 when the mathematics refuses the request.
    pub fn exit_code(&self) -> i32 {
        let math = |e: &EvidenceError| {
            matches!(
                e,
                EvidenceError::UnnormalizedBody { .. }
                    | EvidenceError::TotalConflict
                    | EvidenceError::FrameTooLarge { .. }
                    | EvidenceError::NegativeMass { .. }
            )
        };
        match self {
            CliError::Evidence(e) if math(e) => 3,
            _ => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Frames whose sets can be written as element lists.
pub trait ElementSyntax: Space {
    fn element(&self, token: &str) -> Option<usize>;
    fn set_of(&self, indices: &[usize]) -> Self::Set;
}

impl ElementSyntax for Frame {
    fn element(&self, token: &str) -> Option<usize> {
        self.index_of(token)
    }
    fn set_of(&self, indices: &[usize]) -> FocalSet {
        FocalSet::from_indices(indices.iter().copied())
    }
}

impl ElementSyntax for ProductFrame {
    fn element(&self, token: &str) -> Option<usize> {
        self.parse_config(token).ok()
    }
    fn set_of(&self, indices: &[usize]) -> ConfigSet {
        ConfigSet::from_indices(self.size(), indices.iter().copied())
    }
}

/// Splits on whitespace and commas that are not inside parentheses.
fn split_elements(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(ch);
            }
            c if depth == 0 && (c.is_whitespace() || c == ',') => {
                if !current.is_empty() {
                    out.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

/// Parses `{a,b}`, `{a b}`, `a,b` or `{}`. On failure returns the offending
/// token.
pub fn parse_set<F: ElementSyntax>(frame: &F, text: &str) -> Result<F::Set, String> {
    let text = text.trim();
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .unwrap_or(text);
    let indices = split_elements(inner)
        .into_iter()
        .map(|tok| frame.element(&tok).ok_or(tok))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(frame.set_of(&indices))
}

fn fmt_mass(x: f64) -> String {
    // keep "-0.000000000" out of the output
    let x = if x.abs() < 5e-10 { 0.0 } else { x };
    format!("{x:.9}")
}

fn render_with<F: Space>(frame: &F, set: &F::Set, sep: &str) -> String {
    format!("{{{}}}", frame.atom_labels(set).join(sep))
}

/// One line per non-empty focal set in canonical order, then the conflict.
pub fn render_masses<F: Space>(body: &Body<F>) -> String {
    let mut out = String::new();
    for (s, m) in body.iter().filter(|(s, _)| !s.is_empty()) {
        let _ = writeln!(out, "{} {}", render_with(body.frame(), s, " "), fmt_mass(m));
    }
    let _ = writeln!(out, "conflict {}", fmt_mass(body.empty_mass()));
    out
}

/// A `body` block that [`parse`] reads back to the same masses.
pub fn render_body_block<F: Space>(name: &str, frames: &[&str], body: &Body<F>) -> String {
    let mut out = format!("body {name} over {}:\n", frames.join(" "));
    for (s, m) in body.iter() {
        let _ = writeln!(out, "  {} {m}", render_with(body.frame(), s, " "));
    }
    out
}

/// A frame declaration line.
pub fn render_frame(name: &str, frame: &Frame) -> String {
    format!("frame {name}: {}\n", frame.labels().join(" "))
}

#[derive(Clone, Debug)]
pub enum FileBody {
    Single(BodyOfEvidence),
    Product(Body<ProductFrame>),
}

impl FileBody {
    fn as_product(&self, variable: &str) -> Body<ProductFrame> {
        match self {
            FileBody::Single(b) => lift(b, variable),
            FileBody::Product(b) => b.clone(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct EvidenceFile {
    frames: Vec<(String, Frame)>,
    bodies: Vec<(String, Vec<String>, FileBody)>,
    markov: Option<MarkovTree>,
}

impl EvidenceFile {
    pub fn frame(&self, name: &str) -> Option<&Frame> {
        self.frames.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn frames(&self) -> impl Iterator<Item = (&str, &Frame)> {
        self.frames.iter().map(|(n, f)| (n.as_str(), f))
    }

    pub fn body(&self, name: &str) -> CliResult<&FileBody> {
        self.bodies
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|(_, _, b)| b)
            .ok_or_else(|| CliError::UnknownBody(name.into()))
    }

    pub fn body_names(&self) -> impl Iterator<Item = &str> {
        self.bodies.iter().map(|(n, _, _)| n.as_str())
    }

    pub fn markov(&self) -> Option<&MarkovTree> {
        self.markov.as_ref()
    }
}

struct PendingBody {
    name: String,
    line: usize,
    frames: Vec<String>,
    entries: Vec<(usize, String, f64)>,
}

enum Block {
    None,
    Body(PendingBody),
    Markov,
}

struct PendingNode {
    line: usize,
    name: String,
    vars: Vec<String>,
    body: Option<String>,
}

fn syntax(line: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax {
        line,
        message: message.into(),
    }
}

fn invalid(line: usize) -> impl Fn(EvidenceError) -> CliError {
    move |source| CliError::Invalid { line, source }
}

fn build_entries<F: ElementSyntax>(frame: &F, p: &PendingBody) -> CliResult<Vec<(F::Set, f64)>> {
    p.entries
        .iter()
        .map(|(line, text, m)| {
            parse_set(frame, text)
                .map(|s| (s, *m))
                .map_err(|label| CliError::UnknownLabel { line: *line, label })
        })
        .collect()
}

impl EvidenceFile {
    fn product_frame(&self, names: &[String], line: usize) -> CliResult<ProductFrame> {
        let vars = names
            .iter()
            .map(|n| {
                self.frame(n)
                    .map(|f| Variable {
                        name: n.clone(),
                        frame: f.clone(),
                    })
                    .ok_or_else(|| CliError::UnknownFrame {
                        line,
                        name: n.clone(),
                    })
            })
            .collect::<CliResult<Vec<_>>>()?;
        ProductFrame::new(vars).map_err(invalid(line))
    }

    fn finish_body(&mut self, p: PendingBody) -> CliResult<()> {
        let body = if let [single] = p.frames.as_slice() {
            let frame = self.frame(single).ok_or_else(|| CliError::UnknownFrame {
                line: p.line,
                name: single.clone(),
            })?;
            let entries = build_entries(frame, &p)?;
            FileBody::Single(Body::new(frame.clone(), entries).map_err(invalid(p.line))?)
        } else {
            let frame = self.product_frame(&p.frames, p.line)?;
            let entries = build_entries(&frame, &p)?;
            FileBody::Product(Body::new(frame, entries).map_err(invalid(p.line))?)
        };
        self.bodies.push((p.name, p.frames, body));
        Ok(())
    }

    fn finish_markov(&mut self, nodes: Vec<PendingNode>, edges: Vec<(usize, String, String)>) -> CliResult<()> {
        let mut tree = MarkovTree::new();
        for node in nodes {
            let frame = self.product_frame(&node.vars, node.line)?;
            let body = match &node.body {
                None => Body::vacuous(frame),
                Some(b) => {
                    let (_, frames, fb) = self
                        .bodies
                        .iter()
                        .find(|(n, _, _)| n == b)
                        .ok_or_else(|| syntax(node.line, format!("unknown body {b}")))?;
                    extend(&fb.as_product(&frames[0]), &frame).map_err(invalid(node.line))?
                }
            };
            tree.add_node(node.name, body).map_err(invalid(node.line))?;
        }
        for (line, a, b) in edges {
            tree.add_edge(&a, &b).map_err(invalid(line))?;
        }
        self.markov = Some(tree);
        Ok(())
    }
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
}

/// Reads an evidence file.
pub fn parse(text: &str) -> CliResult<EvidenceFile> {
    let mut file = EvidenceFile::default();
    let mut block = Block::None;
    let mut names: Vec<String> = Vec::new();
    let mut nodes: Vec<PendingNode> = Vec::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    let mut saw_markov = false;

    let mut claim = |name: &str, line: usize| -> CliResult<()> {
        if !is_name(name) {
            return Err(syntax(line, format!("invalid name {name:?}")));
        }
        if names.iter().any(|n| n == name) {
            return Err(syntax(line, format!("duplicate name {name}")));
        }
        names.push(name.to_string());
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indented = content.starts_with(char::is_whitespace);
        let content = content.trim();

        if indented {
            match &mut block {
                Block::None => return Err(syntax(line, "indented line outside a block")),
                Block::Body(p) => {
                    let close = content
                        .strip_prefix('{')
                        .and_then(|rest| rest.find('}'))
                        .ok_or_else(|| syntax(line, "expected {elements} mass"))?;
                    let set = &content[..close + 2];
                    let mass_text = content[close + 2..].trim();
                    let mass: f64 = mass_text
                        .parse()
                        .map_err(|_| syntax(line, format!("invalid mass {mass_text:?}")))?;
                    p.entries.push((line, set.to_string(), mass));
                }
                Block::Markov => {
                    let mut words = content.split_whitespace();
                    match words.next() {
                        Some("node") => {
                            let rest = content["node".len()..].trim();
                            let (name, tail) = rest
                                .split_once(':')
                                .ok_or_else(|| syntax(line, "expected node <name>: <var> ..."))?;
                            let name = name.trim();
                            if !is_name(name) {
                                return Err(syntax(line, format!("invalid node name {name:?}")));
                            }
                            let words: Vec<&str> = tail.split_whitespace().collect();
                            let (vars, body) = match words.iter().position(|w| *w == "body") {
                                Some(p) if p + 2 == words.len() => (&words[..p], Some(words[p + 1].to_string())),
                                Some(_) => return Err(syntax(line, "expected body <name> at the end")),
                                None => (&words[..], None),
                            };
                            if vars.is_empty() {
                                return Err(syntax(line, "node without variables"));
                            }
                            nodes.push(PendingNode {
                                line,
                                name: name.to_string(),
                                vars: vars.iter().map(|v| v.to_string()).collect(),
                                body,
                            });
                        }
                        Some("edge") => {
                            let ends: Vec<&str> = words.collect();
                            let [a, b] = ends.as_slice() else {
                                return Err(syntax(line, "expected edge <node> <node>"));
                            };
                            edges.push((line, a.to_string(), b.to_string()));
                        }
                        _ => return Err(syntax(line, "expected node or edge")),
                    }
                }
            }
            continue;
        }

        if let Block::Body(p) = std::mem::replace(&mut block, Block::None) {
            file.finish_body(p)?;
        }
        let (head, tail) = content
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected ':'"))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        match head.as_slice() {
            ["frame", name] => {
                claim(name, line)?;
                let frame = Frame::new(tail.split_whitespace()).map_err(invalid(line))?;
                file.frames.push((name.to_string(), frame));
            }
            ["body", name, "over", frames @ ..] if !frames.is_empty() => {
                if !tail.trim().is_empty() {
                    return Err(syntax(line, "unexpected text after ':'"));
                }
                claim(name, line)?;
                block = Block::Body(PendingBody {
                    name: name.to_string(),
                    line,
                    frames: frames.iter().map(|f| f.to_string()).collect(),
                    entries: Vec::new(),
                });
            }
            ["markov"] => {
                if saw_markov {
                    return Err(syntax(line, "second markov block"));
                }
                if !tail.trim().is_empty() {
                    return Err(syntax(line, "unexpected text after ':'"));
                }
                saw_markov = true;
                block = Block::Markov;
            }
            _ => return Err(syntax(line, "expected frame, body or markov declaration")),
        }
    }
    if let Block::Body(p) = block {
        file.finish_body(p)?;
    }
    if saw_markov {
        file.finish_markov(nodes, edges)?;
    }
    Ok(file)
}

pub fn read_file(path: &std::path::Path) -> CliResult<EvidenceFile> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureStrategy {
    Brute,
    Partition,
    Tree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CombineStrategy {
    Brute,
    Q,
    Tree,
    Auto,
}

impl CombineStrategy {
    pub fn fixed(self) -> Option<Strategy> {
        match self {
            CombineStrategy::Brute => Some(Strategy::Brute),
            CombineStrategy::Q => Some(Strategy::Q),
            CombineStrategy::Tree => Some(Strategy::Tree),
            CombineStrategy::Auto => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum BenchStrategy {
    Brute,
    Partition,
    Tree,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Bel,
    Pl,
    Q,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Measure {
        match m {
            MeasureArg::Bel => Measure::Bel,
            MeasureArg::Pl => Measure::Pl,
            MeasureArg::Q => Measure::Q,
        }
    }
}

fn measure_on<F: ElementSyntax>(
    body: &Body<F>,
    measure: Measure,
    set_text: &str,
    strategy: MeasureStrategy,
    count: bool,
) -> CliResult<String> {
    let a = parse_set(body.frame(), set_text).map_err(CliError::BadSet)?;
    let c = &mut OpCounter::new();
    let value = match strategy {
        MeasureStrategy::Brute => match measure {
            Measure::Bel => bel_brute(body, &a, c)?,
            Measure::Pl => pl_brute(body, &a, c)?,
            Measure::Q => q_brute(body, &a, c)?,
        },
        MeasureStrategy::Partition => {
            let p = build_partition(body, c);
            match measure {
                Measure::Bel => bel_partition(&p, &a, c)?,
                Measure::Pl => pl_partition(&p, &a, c)?,
                Measure::Q => q_partition(&p, &a, c)?,
            }
        }
        MeasureStrategy::Tree => match measure {
            Measure::Bel => bel_via_complement(body, &a, c)?,
            Measure::Pl => pl_via_complement(body, &a, c)?,
            Measure::Q => q_via_tree(body, &a, c)?,
        },
    };
    let mut out = format!(
        "{}({}) = {}\n",
        measure.name(),
        render_with(body.frame(), &a, ","),
        fmt_mass(value)
    );
    if count {
        out.push_str(&c.report());
    }
    Ok(out)
}

pub fn cmd_measure(
    file: &EvidenceFile,
    body: &str,
    measure: Measure,
    set: &str,
    strategy: MeasureStrategy,
    count: bool,
) -> CliResult<String> {
    match file.body(body)? {
        FileBody::Single(b) => measure_on(b, measure, set, strategy, count),
        FileBody::Product(b) => measure_on(b, measure, set, strategy, count),
    }
}

fn combine_on<F: Space>(
    b1: &Body<F>,
    b2: &Body<F>,
    strategy: CombineStrategy,
    normalize_result: bool,
    count: bool,
) -> CliResult<String> {
    let chosen = strategy.fixed().unwrap_or_else(|| choose_strategy(b1, b2));
    let r = combine(b1, b2, chosen)?;
    let mut out = String::new();
    if normalize_result {
        let (normalized, k) = normalize(&r.body)?;
        for (s, m) in normalized.iter() {
            let _ = writeln!(out, "{} {}", render_with(b1.frame(), s, " "), fmt_mass(m));
        }
        let _ = writeln!(out, "conflict {}", fmt_mass(r.conflict));
        let _ = writeln!(out, "K {}", fmt_mass(k));
    } else {
        out.push_str(&render_masses(&r.body));
    }
    if count {
        let _ = writeln!(out, "strategy  {}", r.strategy);
        out.push_str(&r.counter.report());
    }
    Ok(out)
}

pub fn cmd_combine(
    file: &EvidenceFile,
    body1: &str,
    body2: &str,
    strategy: CombineStrategy,
    normalize_result: bool,
    count: bool,
) -> CliResult<String> {
    match (file.body(body1)?, file.body(body2)?) {
        (FileBody::Single(a), FileBody::Single(b)) => combine_on(a, b, strategy, normalize_result, count),
        (FileBody::Product(a), FileBody::Product(b)) => combine_on(a, b, strategy, normalize_result, count),
        _ => Err(EvidenceError::FrameMismatch.into()),
    }
}

pub fn cmd_marginal<S: AsRef<str>>(
    file: &EvidenceFile,
    variables: &[S],
    strategy: CombineStrategy,
) -> CliResult<String> {
    let tree = file.markov().ok_or(CliError::NoMarkov)?;
    let body = marginal(tree, variables, strategy.fixed())?;
    Ok(render_masses(&body))
}

fn bench_frame(n: u32) -> Frame {
    let labels: Vec<String> = if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..n).map(|i| format!("e{i}")).collect()
    };
    Frame::new(labels).expect("bench frames are well formed")
}

fn bench_row(out: &mut String, name: &str, measured: u64, predicted: Option<u128>, detail: &[(Phase, u64)]) {
    let predicted = predicted.map_or_else(|| "-".to_string(), |p| p.to_string());
    let _ = write!(out, "  {name:<10} measured {measured:>8}  predicted {predicted:>8}");
    for (phase, v) in detail {
        let _ = write!(out, "  {} {v}", phase.name());
    }
    out.push('\n');
}

/// Counters for every focal element's measure on the tree strategy: Q on the
/// body itself, Bel and Pl on the complement body with probe nodes.
fn tree_measure_all(body: &BodyOfEvidence, measure: Measure, c: &mut OpCounter) -> CliResult<()> {
    let frame = body.frame();
    let (target, probes): (BodyOfEvidence, Vec<FocalSet>) = match measure {
        Measure::Q => (body.clone(), Vec::new()),
        Measure::Bel => {
            let comp = complement_body_counted(body, c);
            let probes = body.focal_sets().map(|s| frame.complement(s)).filter(|s| !s.is_empty()).collect();
            (comp, probes)
        }
        Measure::Pl => {
            let comp = complement_body_counted(body, c);
            (comp, body.focal_sets().cloned().collect())
        }
    };
    let p = CardinalityPartition::with_probes(&target, &probes, &mut OpCounter::new());
    let tree = build_tree(&p, c);
    q_tree(&tree, &p, c)?;
    Ok(())
}

/// Runs the requested strategies on the complete body over `omega` elements
/// and prints measured against predicted counters.
pub fn cmd_bench(omega: u32, complete: bool, measure: Measure, strategies: &[BenchStrategy]) -> CliResult<String> {
    if !complete {
        return Err(CliError::Usage("bench only supports --complete bodies".into()));
    }
    if !(1..=MAX_BENCH_OMEGA).contains(&omega) {
        return Err(CliError::Usage(format!("--omega must be between 1 and {MAX_BENCH_OMEGA}")));
    }
    let body = BodyOfEvidence::complete(bench_frame(omega))?;
    let k = body.len() as u128;
    let wants = |s: BenchStrategy| strategies.contains(&s);
    let mut out = format!("omega {omega}  focal {k}\n");

    let _ = writeln!(out, "{} over all focal elements", measure.name());
    if wants(BenchStrategy::Brute) {
        let c = &mut OpCounter::new();
        for a in body.focal_sets() {
            match measure {
                Measure::Bel => bel_brute(&body, a, c)?,
                Measure::Pl => pl_brute(&body, a, c)?,
                Measure::Q => q_brute(&body, a, c)?,
            };
        }
        bench_row(&mut out, "brute", c.phase(Phase::Query), Some(k * k), &[]);
    }
    if wants(BenchStrategy::Partition) {
        let p = build_partition(&body, &mut OpCounter::new());
        let c = &mut OpCounter::new();
        for a in body.focal_sets() {
            match measure {
                Measure::Bel => bel_partition(&p, a, c)?,
                Measure::Pl => pl_partition(&p, a, c)?,
                Measure::Q => q_partition(&p, a, c)?,
            };
        }
        let predicted = predicted_partition_cost(&p.class_sizes(), measure);
        bench_row(&mut out, "partition", c.phase(Phase::Query), Some(predicted), &[]);
    }
    if wants(BenchStrategy::Tree) {
        let c = &mut OpCounter::new();
        tree_measure_all(&body, measure, c)?;
        let predicted =
            (measure == Measure::Q).then(|| worst_case_construction_cost(omega) + worst_case_q_cost(omega));
        let mut detail = Vec::new();
        if measure != Measure::Q {
            detail.push((Phase::Complement, c.phase(Phase::Complement)));
        }
        detail.push((Phase::Construction, c.phase(Phase::Construction)));
        detail.push((Phase::Query, c.phase(Phase::Query)));
        bench_row(&mut out, "tree", c.pair_visits(), predicted, &detail);
    }

    out.push_str("combination with itself\n");
    if wants(BenchStrategy::Brute) {
        let r = combine(&body, &body, Strategy::Brute)?;
        bench_row(&mut out, "brute", r.counter.total(), Some(k * k), &[]);
    }
    if wants(BenchStrategy::Q) {
        let r = combine(&body, &body, Strategy::Q)?;
        bench_row(&mut out, "q", r.counter.total(), Some(predicted_q_strategy_cost(omega, true)), &[]);
    }
    if wants(BenchStrategy::Tree) {
        let r = combine(&body, &body, Strategy::Tree)?;
        let predicted = 1 + worst_case_construction_cost(omega) + worst_case_combination_cost(omega, omega);
        let detail: Vec<(Phase, u64)> = [Phase::Preprocess, Phase::Construction, Phase::Combination]
            .into_iter()
            .map(|p| (p, r.counter.phase(p)))
            .collect();
        bench_row(&mut out, "tree", r.counter.total(), Some(predicted), &detail);
    }
    let _ = writeln!(out, "auto choice  {}", choose_strategy(&body, &body));
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(name = "evtree", version, about = "Belief measures, Dempster's rule and Markov-tree propagation")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate Bel, Pl or Q of one set.
    Measure {
        file: PathBuf,
        body: String,
        measure: MeasureArg,
        /// e.g. "{a,b}"
        set: String,
        #[arg(long, value_enum, default_value_t = MeasureStrategy::Brute)]
        strategy: MeasureStrategy,
        /// Append the operation counters.
        #[arg(long)]
        count: bool,
    },
    /// Combine two bodies with Dempster's rule.
    Combine {
        file: PathBuf,
        body1: String,
        body2: String,
        #[arg(long, value_enum, default_value_t = CombineStrategy::Auto)]
        strategy: CombineStrategy,
        /// Divide by K = 1 - conflict.
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        count: bool,
    },
    /// Measured against predicted operation counts on a complete body.
    Bench {
        #[arg(long)]
        omega: u32,
        #[arg(long)]
        complete: bool,
        #[arg(long, value_enum, default_value_t = MeasureArg::Q)]
        measure: MeasureArg,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [BenchStrategy::Brute, BenchStrategy::Partition, BenchStrategy::Tree, BenchStrategy::Q])]
        strategy: Vec<BenchStrategy>,
    },
    /// Marginal of the file's markov tree on some variables.
    Marginal {
        file: PathBuf,
        #[arg(required = true)]
        variables: Vec<String>,
        #[arg(long, value_enum, default_value_t = CombineStrategy::Auto)]
        strategy: CombineStrategy,
    },
}

fn dispatch(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Measure {
            file,
            body,
            measure,
            set,
            strategy,
            count,
        } => cmd_measure(&read_file(&file)?, &body, measure.into(), &set, strategy, count),
        Command::Combine {
            file,
            body1,
            body2,
            strategy,
            normalize,
            count,
        } => cmd_combine(&read_file(&file)?, &body1, &body2, strategy, normalize, count),
        Command::Bench {
            omega,
            complete,
            measure,
            mut strategy,
        } => {
            strategy.sort();
            strategy.dedup();
            cmd_bench(omega, complete, measure.into(), &strategy)
        }
        Command::Marginal {
            file,
            variables,
            strategy,
        } => cmd_marginal(&read_file(&file)?, &variables, strategy),
    }
}

/// Parses arguments, runs the command, prints the result and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::MASS_TOLERANCE;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest};

    const E1E2: &str = "\
# two sources over the same frame
frame x: a b c

body E1 over x:
  {a b} 0.6
  {b c} 0.4
body E2 over x:
  {b} 0.5
  {a c} 0.5   # trailing comment
body A over x:
  {a} 1
body B over x:
  {b} 1
body U over x:
  {} 0.2
  {a} 0.8
";

    #[test]
    fn parses_bodies() {
        let f = parse(E1E2).unwrap();
        let FileBody::Single(e1) = f.body("E1").unwrap() else { panic!() };
        assert_eq!(e1.len(), 2);
        assert_eq!(f.body_names().collect::<Vec<_>>(), ["E1", "E2", "A", "B", "U"]);
        assert!(f.markov().is_none());
        let FileBody::Single(u) = f.body("U").unwrap() else { panic!() };
        assert_eq!(u.empty_mass(), 0.2);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = "frame x: a b c\nbody E over x:\n  {a q} 0.5\n  {b} 0.5\n";
        match parse(bad) {
            Err(CliError::UnknownLabel { line: 3, label }) => assert_eq!(label, "q"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("body E over y:\n  {a} 1\n"),
            Err(CliError::UnknownFrame { line: 1, .. })
        ));
        assert!(matches!(parse("frame x a b\n"), Err(CliError::Syntax { line: 1, .. })));
        assert!(matches!(parse("  {a} 1\n"), Err(CliError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse("frame x: a b\nbody E over x:\n  {a} 0.5\n"),
            Err(CliError::Invalid { line: 2, source: EvidenceError::MassSumViolation { .. } })
        ));
        assert!(matches!(
            parse("frame x: a b\nframe x: c\n"),
            Err(CliError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse("frame x: a b\nbody E over x:\n  {a} lots\n"),
            Err(CliError::Syntax { line: 3, .. })
        ));
        assert!(matches!(parse("frame x: a a\n"), Err(CliError::Invalid { line: 1, .. })));
    }

    #[test]
    fn parses_markov_block() {
        let text = "\
frame x: a b
frame y: 0 1
frame z: u v
body J over x y:
  {(a,0) (b,1)} 0.5
  {(a,1)} 0.5
body Z over z:
  {u} 1
markov:
  node n1: x y body J
  node n2: y
  node n3: y z body Z
  edge n1 n2
  edge n2 n3
";
        let f = parse(text).unwrap();
        let t = f.markov().unwrap();
        assert_eq!(t.nodes().len(), 3);
        assert_eq!(t.edges().len(), 2);
        assert_eq!(t.nodes()[2].body.len(), 1);
        assert_eq!(t.nodes()[2].frame().size(), 4);
        let out = cmd_marginal(&f, &["z"], CombineStrategy::Brute).unwrap();
        assert_eq!(out, "{u} 1.000000000\nconflict 0.000000000\n");

        let bad_edge = text.replace("edge n2 n3", "edge n2 n9");
        assert!(matches!(parse(&bad_edge), Err(CliError::Invalid { .. })));
    }

    #[test]
    fn measure_outputs() {
        let f = parse(E1E2).unwrap();
        for s in [MeasureStrategy::Brute, MeasureStrategy::Partition, MeasureStrategy::Tree] {
            assert_eq!(cmd_measure(&f, "E1", Measure::Q, "{b}", s, false).unwrap(), "q({b}) = 1.000000000\n");
            assert_eq!(
                cmd_measure(&f, "E1", Measure::Bel, "{a,b}", s, false).unwrap(),
                "bel({a,b}) = 0.600000000\n"
            );
            assert_eq!(
                cmd_measure(&f, "E1", Measure::Pl, "a", s, false).unwrap(),
                "pl({a}) = 0.600000000\n"
            );
        }
        let err = cmd_measure(&f, "U", Measure::Pl, "{a}", MeasureStrategy::Partition, false).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let err = cmd_measure(&f, "E1", Measure::Q, "{d}", MeasureStrategy::Brute, false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let counted = cmd_measure(&f, "E1", Measure::Q, "{b}", MeasureStrategy::Brute, true).unwrap();
        assert!(counted.contains("query  2\n"));
    }

    #[test]
    fn combine_outputs() {
        let f = parse(E1E2).unwrap();
        for s in [CombineStrategy::Brute, CombineStrategy::Q, CombineStrategy::Tree, CombineStrategy::Auto] {
            assert_eq!(
                cmd_combine(&f, "E1", "E2", s, false, false).unwrap(),
                "{a} 0.300000000\n{b} 0.500000000\n{c} 0.200000000\nconflict 0.000000000\n"
            );
        }
        let plain = cmd_combine(&f, "A", "B", CombineStrategy::Brute, false, false).unwrap();
        assert_eq!(plain, "conflict 1.000000000\n");
        let err = cmd_combine(&f, "A", "B", CombineStrategy::Tree, true, false).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let norm = cmd_combine(&f, "U", "E1", CombineStrategy::Brute, true, false).unwrap();
        assert_eq!(norm, "{a} 1.000000000\nconflict 0.520000000\nK 0.480000000\n");
        assert!(matches!(
            cmd_combine(&f, "E1", "nope", CombineStrategy::Brute, false, false),
            Err(CliError::UnknownBody(_))
        ));
    }

    #[test]
    fn bench_rows() {
        let out = cmd_bench(5, true, Measure::Q, &[BenchStrategy::Brute, BenchStrategy::Partition, BenchStrategy::Tree, BenchStrategy::Q]).unwrap();
        let row = |prefix: &str, section: usize| -> String {
            out.split("combination with itself\n")
                .nth(section)
                .unwrap()
                .lines()
                .find(|l| l.trim_start().starts_with(prefix))
                .unwrap()
                .to_string()
        };
        assert!(row("brute", 0).contains("measured      961  predicted      961"));
        assert!(row("partition", 0).contains("measured      386  predicted      386"));
        assert!(row("tree", 0).contains("measured      211  predicted      211  construction 74  query 137"));
        assert!(row("tree", 1).contains("measured      496  predicted      496"));
        assert!(row("brute", 1).contains("measured      961"));
        let four = cmd_bench(4, true, Measure::Q, &[BenchStrategy::Tree]).unwrap();
        assert!(four.contains("construction 22"));
        assert!(cmd_bench(5, false, Measure::Q, &[]).is_err());
        assert!(cmd_bench(40, true, Measure::Q, &[]).is_err());
        for m in [Measure::Bel, Measure::Pl] {
            assert!(cmd_bench(4, true, m, &[BenchStrategy::Brute, BenchStrategy::Partition, BenchStrategy::Tree]).is_ok());
        }
    }

    #[test]
    fn set_syntax() {
        let x = Frame::new(["a", "b", "c"]).unwrap();
        assert_eq!(parse_set(&x, "{a,b}").unwrap(), x.set(["a", "b"]).unwrap());
        assert_eq!(parse_set(&x, "{a b}").unwrap(), x.set(["a", "b"]).unwrap());
        assert_eq!(parse_set(&x, " a, c ").unwrap(), x.set(["a", "c"]).unwrap());
        assert_eq!(parse_set(&x, "{}").unwrap(), FocalSet::EMPTY);
        assert_eq!(parse_set(&x, "{z}").unwrap_err(), "z");
        let p = ProductFrame::new(vec![
            Variable { name: "x".into(), frame: x.clone() },
            Variable { name: "y".into(), frame: Frame::new(["0", "1"]).unwrap() },
        ])
        .unwrap();
        let s = parse_set(&p, "{(a,0),(c, 1)}").unwrap();
        assert_eq!(s.cardinality(), 2);
        assert_eq!(render_with(&p, &s, " "), "{(a,0) (c,1)}");
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(raw in proptest::collection::btree_map(0u64..64, 1u32..1000, 1..12)) {
            let x = Frame::new(["a", "b", "c", "d", "e", "f"]).unwrap();
            let total: u32 = raw.values().sum();
            let body = Body::new(
                x.clone(),
                raw.into_iter().map(|(m, w)| (FocalSet::from_mask(m), w as f64 / total as f64)),
            ).unwrap();
            let text = render_frame("x", &x) + &render_body_block("B", &["x"], &body);
            let back = parse(&text).unwrap();
            let FileBody::Single(b) = back.body("B").unwrap() else { panic!() };
            prop_assert_eq!(b, &body);

            let lines = render_masses(&body);
            prop_assert_eq!(lines.lines().count(), body.len() + usize::from(body.empty_mass() == 0.0));
            let sum: f64 = lines.lines().map(|l| l.rsplit(' ').next().unwrap().parse::<f64>().unwrap()).sum();
            prop_assert!((sum - 1.0).abs() < 1e-8 + MASS_TOLERANCE);
        }
    }
}
