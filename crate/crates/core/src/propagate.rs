//! Bodies over product frames: vacuous extension, projection, projection of
//! hierarchical trees, and collect-to-root propagation on Markov trees.
//!
//! Messages are never normalized between hops. Conflict produced anywhere in
//! the tree is carried as mass on the empty set up to the root.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::body::Body;
use crate::combine::{choose_strategy, combine, Strategy};
use crate::error::{EvidenceError, Result};
use crate::frame::{Frame, ProductFrame, Space};
use crate::hierarchy::HierarchicalTree;
use crate::set::{ConfigSet, FocalSet, SetLike};
use crate::transform::MAX_POWER_SET_FRAME;

/// For every configuration of `from`, the configuration of `to` obtained by
/// dropping the variables `to` lacks. Every variable of `to` must be in `from`.
fn config_map(from: &ProductFrame, to: &ProductFrame) -> Vec<usize> {
    let positions: Vec<usize> = from
        .positions_in(to)
        .into_iter()
        .map(|p| p.expect("target variables are a subset"))
        .collect();
    let mut picked = vec![0; positions.len()];
    (0..from.size())
        .map(|c| {
            let values = from.decode(c);
            for (slot, &p) in picked.iter_mut().zip(&positions) {
                *slot = values[p];
            }
            to.encode(&picked)
        })
        .collect()
}

fn covers(outer: &ProductFrame, inner: &ProductFrame) -> bool {
    inner.variables().iter().all(|v| {
        outer
            .position(&v.name)
            .is_some_and(|p| outer.variables()[p].frame == v.frame)
    })
}

/// Cylindrical extension: each focal set `f` becomes `f × Ω_{J−G}`.
pub fn extend(body: &Body<ProductFrame>, target: &ProductFrame) -> Result<Body<ProductFrame>> {
    if !covers(target, body.frame()) {
        return Err(EvidenceError::NotASuperset);
    }
    let map = config_map(target, body.frame());
    let masses = body
        .iter()
        .map(|(f, m)| {
            let set = ConfigSet::from_indices(
                target.size(),
                map.iter().enumerate().filter(|(_, &g)| f.contains(g)).map(|(j, _)| j),
            );
            (set, m)
        })
        .collect();
    Ok(Body::from_masses(target.clone(), masses))
}

/// Projection onto the variables `names` (in that order); focal sets with the
/// same projection pool their mass.
pub fn project<S: AsRef<str>>(body: &Body<ProductFrame>, names: &[S]) -> Result<Body<ProductFrame>> {
    let target = body.frame().sub_frame(names)?;
    Ok(project_onto(body, &target))
}

fn project_onto(body: &Body<ProductFrame>, target: &ProductFrame) -> Body<ProductFrame> {
    let map = config_map(body.frame(), target);
    let mut masses: BTreeMap<ConfigSet, f64> = BTreeMap::new();
    for (f, m) in body.iter() {
        let set = ConfigSet::from_indices(target.size(), f.indices().map(|c| map[c]));
        *masses.entry(set).or_insert(0.0) += m;
    }
    Body::from_masses(target.clone(), masses)
}

/// Projects a hierarchical tree node by node, from the root down.
///
/// Each projected node hangs below the projection of its father; nodes whose
/// projections coincide are merged, the first one keeping its father. A final
/// pass moves any node whose father is no longer of minimal cardinality, and
/// the dummy root is rebuilt only if several roots remain.
pub fn project_tree<S: AsRef<str>>(
    tree: &HierarchicalTree<ProductFrame>,
    names: &[S],
) -> Result<HierarchicalTree<ProductFrame>> {
    let target = tree.frame().sub_frame(names)?;
    let map = config_map(tree.frame(), &target);
    let down = |s: &ConfigSet| ConfigSet::from_indices(target.size(), s.indices().map(|c| map[c]));

    let mut nodes: Vec<ConfigSet> = Vec::new();
    let mut masses: Vec<f64> = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    let mut index: BTreeMap<ConfigSet, usize> = BTreeMap::new();
    let mut image = vec![None; tree.len()];
    for old in tree.preorder() {
        if tree.is_dummy(old) {
            continue;
        }
        let set = down(tree.set(old));
        let father = tree.parent(old).and_then(|p| image[p]);
        let new = *index.entry(set.clone()).or_insert_with(|| {
            nodes.push(set);
            masses.push(0.0);
            parent.push(father);
            nodes.len() - 1
        });
        masses[new] += tree.mass(old);
        image[old] = Some(new);
    }

    // fathers of minimal cardinality, first in canonical order among equals
    for i in 0..nodes.len() {
        let best = (0..nodes.len())
            .filter(|&j| nodes[i].is_strict_subset(&nodes[j]))
            .min_by(|&a, &b| {
                let key = |k: usize| (nodes[k].cardinality(), &nodes[k]);
                key(a).cmp(&key(b))
            });
        let keep = match (parent[i], best) {
            (Some(p), Some(b)) => nodes[p].cardinality() == nodes[b].cardinality(),
            (None, None) => true,
            _ => false,
        };
        if !keep {
            parent[i] = best;
        }
    }

    let roots: Vec<usize> = (0..nodes.len()).filter(|&i| parent[i].is_none()).collect();
    let mut dummy = None;
    if roots.len() > 1 {
        let union = roots
            .iter()
            .fold(target.empty_set(), |acc, &r| acc.union(&nodes[r]));
        nodes.push(union);
        masses.push(0.0);
        parent.push(None);
        let d = nodes.len() - 1;
        for r in roots {
            parent[r] = Some(d);
        }
        dummy = Some(d);
    }
    Ok(HierarchicalTree::from_parts(target, nodes, masses, parent, dummy))
}

/// A body over a plain frame seen as a body over the one-variable product
/// frame named `variable`.
pub fn lift(body: &Body<Frame>, variable: &str) -> Body<ProductFrame> {
    let frame = ProductFrame::single(variable, body.frame().clone());
    let masses = body
        .iter()
        .map(|(f, m)| (ConfigSet::from_indices(frame.size(), f.indices()), m))
        .collect();
    Body::from_masses(frame, masses)
}

/// Inverse of [`lift`] for bodies over a single variable.
pub fn lower(body: &Body<ProductFrame>) -> Result<Body<Frame>> {
    match body.frame().variables() {
        [v] => {
            let masses = body
                .iter()
                .map(|(f, m)| (FocalSet::from_indices(f.indices()), m))
                .collect();
            Ok(Body::from_masses(v.frame.clone(), masses))
        }
        _ => Err(EvidenceError::FrameMismatch),
    }
}

#[derive(Clone, Debug)]
pub struct MarkovNode {
    pub name: String,
    pub body: Body<ProductFrame>,
}

impl MarkovNode {
    pub fn frame(&self) -> &ProductFrame {
        self.body.frame()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.body.frame().variable_names()
    }
}

/// Clusters of variables joined by undirected edges.
#[derive(Clone, Debug, Default)]
pub struct MarkovTree {
    nodes: Vec<MarkovNode>,
    edges: Vec<(usize, usize)>,
}

impl MarkovTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: impl Into<String>, body: Body<ProductFrame>) -> Result<usize> {
        let name = name.into();
        if self.node_index(&name).is_some() {
            return Err(EvidenceError::InvalidMarkovTree(format!("duplicate node {name}")));
        }
        self.nodes.push(MarkovNode { name, body });
        Ok(self.nodes.len() - 1)
    }

    /// A node carrying the vacuous body over `frame`.
    pub fn add_vacuous_node(&mut self, name: impl Into<String>, frame: ProductFrame) -> Result<usize> {
        self.add_node(name, Body::vacuous(frame))
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<()> {
        let find = |n: &str| self.node_index(n).ok_or_else(|| EvidenceError::UnknownNode(n.into()));
        let edge = (find(a)?, find(b)?);
        self.edges.push(edge);
        Ok(())
    }

    pub fn nodes(&self) -> &[MarkovNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Breadth-first order from `root` with each node's predecessor.
    fn bfs(&self, root: usize, allowed: impl Fn(usize) -> bool) -> (Vec<usize>, Vec<Option<usize>>) {
        let adj = self.neighbours();
        let mut order = vec![root];
        let mut pred = vec![None; self.nodes.len()];
        let mut seen = vec![false; self.nodes.len()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] && allowed(v) {
                    seen[v] = true;
                    pred[v] = Some(u);
                    order.push(v);
                    queue.push_back(v);
                }
            }
        }
        (order, pred)
    }

    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let (_, pred) = self.bfs(from, |_| true);
        let mut path = vec![to];
        let mut cur = to;
        while let Some(p) = pred[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

/// Why a Markov tree was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MarkovViolation {
    Empty,
    SelfLoop(String),
    EdgeCount { nodes: usize, edges: usize },
    Disconnected(String),
    InconsistentFrame(String),
    RunningIntersection { variable: String, path: Vec<String> },
}

impl fmt::Display for MarkovViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkovViolation::Empty => write!(f, "markov tree has no nodes"),
            MarkovViolation::SelfLoop(n) => write!(f, "edge from {n} to itself"),
            MarkovViolation::EdgeCount { nodes, edges } => {
                write!(f, "{nodes} nodes need {} edges, found {edges}", nodes - 1)
            }
            MarkovViolation::Disconnected(n) => write!(f, "node {n} is not connected"),
            MarkovViolation::InconsistentFrame(v) => {
                write!(f, "variable {v} has different frames in different nodes")
            }
            MarkovViolation::RunningIntersection { variable, path } => write!(
                f,
                "running intersection violated: {variable} (path {})",
                path.join(" - ")
            ),
        }
    }
}

impl From<MarkovViolation> for EvidenceError {
    fn from(v: MarkovViolation) -> Self {
        EvidenceError::InvalidMarkovTree(v.to_string())
    }
}

/// Checks that the edges form a tree and that every variable's nodes form a
/// connected subtree.
pub fn validate_markov(tree: &MarkovTree) -> Result<(), MarkovViolation> {
    let n = tree.nodes.len();
    if n == 0 {
        return Err(MarkovViolation::Empty);
    }
    if let Some(&(a, _)) = tree.edges.iter().find(|(a, b)| a == b) {
        return Err(MarkovViolation::SelfLoop(tree.nodes[a].name.clone()));
    }
    if tree.edges.len() != n - 1 {
        return Err(MarkovViolation::EdgeCount { nodes: n, edges: tree.edges.len() });
    }
    let (order, _) = tree.bfs(0, |_| true);
    if order.len() != n {
        let mut reached = vec![false; n];
        order.iter().for_each(|&i| reached[i] = true);
        let lost = reached.iter().position(|r| !r).expect("some node is unreached");
        return Err(MarkovViolation::Disconnected(tree.nodes[lost].name.clone()));
    }

    let mut variables: Vec<(&str, &Frame)> = Vec::new();
    for node in &tree.nodes {
        for v in node.frame().variables() {
            match variables.iter().find(|(name, _)| *name == v.name) {
                Some((_, frame)) if **frame != v.frame => {
                    return Err(MarkovViolation::InconsistentFrame(v.name.clone()))
                }
                Some(_) => {}
                None => variables.push((&v.name, &v.frame)),
            }
        }
    }
    for (var, _) in variables {
        let holds = |i: usize| tree.nodes[i].frame().has_variable(var);
        let first = (0..n).find(|&i| holds(i)).expect("variable comes from some node");
        let (reached, _) = tree.bfs(first, holds);
        if let Some(far) = (0..n).find(|&i| holds(i) && !reached.contains(&i)) {
            let path = tree.path(first, far).into_iter().map(|i| tree.nodes[i].name.clone()).collect();
            return Err(MarkovViolation::RunningIntersection { variable: var.into(), path });
        }
    }
    Ok(())
}

fn combine_for(
    b1: &Body<ProductFrame>,
    b2: &Body<ProductFrame>,
    strategy: Option<Strategy>,
) -> Result<Body<ProductFrame>> {
    let s = match strategy.unwrap_or_else(|| choose_strategy(b1, b2)) {
        // the commonality route enumerates the power set of the cluster
        Strategy::Q if b1.frame().size() > MAX_POWER_SET_FRAME => Strategy::Brute,
        s => s,
    };
    Ok(combine(b1, b2, s)?.body)
}

/// The message a node sends to its neighbour, already extended to the
/// neighbour's frame. With no shared variable only the split between the
/// empty set and the rest survives.
fn message(body: &Body<ProductFrame>, to: &ProductFrame) -> Result<Body<ProductFrame>> {
    let shared: Vec<&str> = body.frame().variable_names().filter(|v| to.has_variable(v)).collect();
    if shared.is_empty() {
        let empty = body.empty_mass();
        let mut masses = BTreeMap::new();
        masses.insert(to.full_set(), body.total_mass() - empty);
        masses.insert(to.empty_set(), empty);
        return Ok(Body::from_masses(to.clone(), masses));
    }
    extend(&project(body, &shared)?, to)
}

/// Collects every node's evidence towards `root` in post-order and returns the
/// combined body over the root's frame. `None` picks a strategy per step with
/// [`choose_strategy`]; the commonality strategy falls back to brute force on
/// clusters with more than 20 configurations.
pub fn propagate_to_root(
    tree: &MarkovTree,
    root: &str,
    strategy: Option<Strategy>,
) -> Result<Body<ProductFrame>> {
    validate_markov(tree)?;
    let root = tree.node_index(root).ok_or_else(|| EvidenceError::UnknownNode(root.into()))?;
    let (order, pred) = tree.bfs(root, |_| true);
    let mut acc: Vec<Option<Body<ProductFrame>>> = tree.nodes.iter().map(|n| Some(n.body.clone())).collect();
    for &node in order.iter().rev() {
        let Some(parent) = pred[node] else { continue };
        let body = acc[node].take().expect("each node sends once");
        let target = tree.nodes[parent].frame();
        let msg = message(&body, target)?;
        let current = acc[parent].take().expect("parent not yet sent");
        acc[parent] = Some(combine_for(&current, &msg, strategy)?);
    }
    Ok(acc[root].take().expect("root keeps its body"))
}

/// The marginal on `variables`, computed at the first node (in declaration
/// order) whose cluster contains them all.
pub fn marginal<S: AsRef<str>>(
    tree: &MarkovTree,
    variables: &[S],
    strategy: Option<Strategy>,
) -> Result<Body<ProductFrame>> {
    if variables.is_empty() {
        return Err(EvidenceError::NoCoveringNode);
    }
    let node = tree
        .nodes
        .iter()
        .find(|n| variables.iter().all(|v| n.frame().has_variable(v.as_ref())))
        .ok_or(EvidenceError::NoCoveringNode)?;
    let at_root = propagate_to_root(tree, &node.name, strategy)?;
    project(&at_root, variables)
}

/// Reference computation on the joint frame of all clusters: extend every
/// body, combine them all by brute force, project onto `variables`.
pub fn global_marginal<S: AsRef<str>>(tree: &MarkovTree, variables: &[S]) -> Result<Body<ProductFrame>> {
    let mut nodes = tree.nodes.iter();
    let first = nodes.next().ok_or(EvidenceError::NoCoveringNode)?;
    let mut joint = first.frame().clone();
    for n in nodes {
        joint = joint.join(n.frame())?;
    }
    let mut acc = Body::vacuous(joint.clone());
    for n in &tree.nodes {
        acc = combine(&acc, &extend(&n.body, &joint)?, Strategy::Brute)?.body;
    }
    project(&acc, variables)
}
