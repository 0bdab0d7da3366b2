//! Marked reachability graph sequences (MRGS) and the perfectness check.
//!
//! An MRGS `M0 a1 M1 … ak Mk` constrains runs to follow strongly connected
//! reachability graphs `Gj` between input/output states, with input/output
//! constraints pinning some coordinates. [`is_perfect`] decides the perfect
//! condition through its algebraic characterisation (large solution
//! condition plus loop conditions); [`realize_accepted`] turns a perfect MRGS
//! into explicit accepted sequences whose witnesses grow with a level `c`.

mod charsys;
mod euler;
mod loops;
mod realize;

use std::collections::VecDeque;

use num_bigint::BigInt;
use thiserror::Error;

use crate::diophantine::IntVector;
use crate::vas::{ExtConfig, Transition, VasError, VasSystem, VassSystem};

pub use charsys::{build_characteristic, large_solution_condition, BlockLayout, CharSystem};
pub use euler::{euler_path, kirchhoff_check};
pub use loops::{input_loop_condition, input_loop_witness, output_loop_condition, output_loop_witness};
pub use realize::{check_accepted, check_large_acceptance, realize_accepted, AcceptedSequence, AcceptedTuple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MrgsError {
    #[error("invalid reachability graph: {0}")]
    InvalidGraph(String),
    #[error("reachability graph is not strongly connected")]
    NotStronglyConnected,
    #[error("constraint mismatch: {0}")]
    Constraint(String),
    #[error("every edge must be used at least once (edge {0} has count 0)")]
    ZeroCount(usize),
    #[error(transparent)]
    Vas(#[from] VasError),
    #[error("internal error: {0}")]
    Internal(String),
}

/// An edge `(from, action, to)` between node indices.
pub type Edge = Transition;

/// A strongly connected graph over extended configurations whose edges are
/// steps of the underlying VAS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachGraph {
    vas: VasSystem,
    nodes: Vec<ExtConfig>,
    edges: Vec<Edge>,
}

impl ReachGraph {
    pub fn new(vas: VasSystem, nodes: Vec<ExtConfig>, edges: Vec<Edge>) -> Result<Self, MrgsError> {
        if nodes.is_empty() {
            return Err(MrgsError::InvalidGraph("no nodes".into()));
        }
        for (i, q) in nodes.iter().enumerate() {
            if q.dim() != vas.dim() {
                return Err(MrgsError::InvalidGraph(format!("node {i} has the wrong dimension")));
            }
            if nodes[..i].contains(q) {
                return Err(MrgsError::InvalidGraph(format!("node {q} is listed twice")));
            }
        }
        for (k, e) in edges.iter().enumerate() {
            if e.from >= nodes.len() || e.to >= nodes.len() || e.action >= vas.num_actions() {
                return Err(MrgsError::InvalidGraph(format!("edge {k} is out of range")));
            }
            let next = nodes[e.from].add_displacement(vas.displacement(e.action));
            if next.as_ref() != Some(&nodes[e.to]) {
                return Err(MrgsError::InvalidGraph(format!(
                    "edge {} -{}-> {} is not a step",
                    nodes[e.from],
                    vas.action_name(e.action),
                    nodes[e.to]
                )));
            }
        }
        let g = ReachGraph { vas, nodes, edges };
        if !g.strongly_connected() {
            return Err(MrgsError::NotStronglyConnected);
        }
        Ok(g)
    }

    /// The single all-⊤ node with one self-loop per action.
    pub fn all_top(vas: VasSystem) -> Self {
        let edges = (0..vas.num_actions())
            .map(|a| Edge {
                from: 0,
                action: a,
                to: 0,
            })
            .collect();
        let nodes = vec![ExtConfig::top(vas.dim())];
        ReachGraph::new(vas, nodes, edges).expect("all-⊤ graph is well formed")
    }

    pub fn vas(&self) -> &VasSystem {
        &self.vas
    }

    pub fn nodes(&self) -> &[ExtConfig] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_index(&self, q: &ExtConfig) -> Option<usize> {
        self.nodes.iter().position(|n| n == q)
    }

    fn strongly_connected(&self) -> bool {
        let n = self.nodes.len();
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            seen[0] = true;
            let mut queue = VecDeque::from([0]);
            while let Some(v) = queue.pop_front() {
                for e in &self.edges {
                    let (a, b) = if forward { (e.from, e.to) } else { (e.to, e.from) };
                    if a == v && !seen[b] {
                        seen[b] = true;
                        queue.push_back(b);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(true) && reach(false)
    }

    /// The graph as a VASS (states = nodes, transitions = edges).
    pub(crate) fn as_vass(&self) -> VassSystem {
        VassSystem::new(
            (0..self.nodes.len()).map(|i| format!("n{i}")).collect(),
            self.edges.clone(),
            self.vas.clone(),
        )
        .expect("graph edges are valid transitions")
    }

    /// Edge-reversed graph over the displacement-negated VAS, as a VASS.
    pub(crate) fn reversed_vass(&self) -> VassSystem {
        let negated = VasSystem::new(
            self.vas.dim(),
            (0..self.vas.num_actions())
                .map(|a| {
                    (
                        self.vas.action_name(a).to_string(),
                        self.vas.displacement(a).iter().map(|d| -d).collect(),
                    )
                })
                .collect(),
        )
        .expect("same alphabet");
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                from: e.to,
                action: e.action,
                to: e.from,
            })
            .collect();
        VassSystem::new(
            (0..self.nodes.len()).map(|i| format!("n{i}")).collect(),
            edges,
            negated,
        )
        .expect("reversed edges are valid transitions")
    }

    /// Replays an edge path from a concrete configuration, checking that the
    /// edges chain from node `start`. Returns the end node and configuration.
    pub fn replay(&self, start: usize, cfg: &[BigInt], path: &[usize]) -> Option<(usize, IntVector)> {
        let vass = self.as_vass();
        let from = ExtConfig::from_config(cfg).ok()?;
        let (q, end) = vass.replay(start, &from, path)?;
        Some((q, end.to_config()?))
    }
}

/// A reachability graph with input/output states and constraints `(m, x, G, x', m')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedGraph {
    pub input_constraint: ExtConfig,
    pub input_state: usize,
    pub graph: ReachGraph,
    pub output_state: usize,
    pub output_constraint: ExtConfig,
}

impl MarkedGraph {
    pub fn new(
        input_constraint: ExtConfig,
        input_state: usize,
        graph: ReachGraph,
        output_state: usize,
        output_constraint: ExtConfig,
    ) -> Result<Self, MrgsError> {
        let nodes = graph.nodes();
        if input_state >= nodes.len() || output_state >= nodes.len() {
            return Err(MrgsError::InvalidGraph("input/output state is not a node".into()));
        }
        let n = graph.vas().dim();
        if input_constraint.dim() != n || output_constraint.dim() != n {
            return Err(MrgsError::Constraint("constraint has the wrong dimension".into()));
        }
        if !input_constraint.unlhd(&nodes[input_state]) {
            return Err(MrgsError::Constraint(format!(
                "input constraint {input_constraint} is not ⊴ input state {}",
                nodes[input_state]
            )));
        }
        if !output_constraint.unlhd(&nodes[output_state]) {
            return Err(MrgsError::Constraint(format!(
                "output constraint {output_constraint} is not ⊴ output state {}",
                nodes[output_state]
            )));
        }
        Ok(MarkedGraph {
            input_constraint,
            input_state,
            graph,
            output_state,
            output_constraint,
        })
    }

    pub fn input_node(&self) -> &ExtConfig {
        &self.graph.nodes()[self.input_state]
    }

    pub fn output_node(&self) -> &ExtConfig {
        &self.graph.nodes()[self.output_state]
    }
}

/// `M0 a1 M1 … ak Mk` together with the outer constraints `(m, m')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mrgs {
    blocks: Vec<MarkedGraph>,
    joins: Vec<usize>,
    outer: (ExtConfig, ExtConfig),
}

impl Mrgs {
    pub fn new(
        blocks: Vec<MarkedGraph>,
        joins: Vec<usize>,
        outer: (ExtConfig, ExtConfig),
    ) -> Result<Self, MrgsError> {
        let Some(first) = blocks.first() else {
            return Err(MrgsError::InvalidGraph("an MRGS needs at least one marked graph".into()));
        };
        if joins.len() + 1 != blocks.len() {
            return Err(MrgsError::InvalidGraph(format!(
                "{} marked graphs need {} joining actions, got {}",
                blocks.len(),
                blocks.len() - 1,
                joins.len()
            )));
        }
        let vas = first.graph.vas();
        if blocks.iter().any(|b| b.graph.vas() != vas) {
            return Err(MrgsError::InvalidGraph("marked graphs use different VASs".into()));
        }
        if joins.iter().any(|&a| a >= vas.num_actions()) {
            return Err(MrgsError::InvalidGraph("joining action out of range".into()));
        }
        let last = blocks.last().expect("nonempty");
        if outer.0.dim() != vas.dim() || outer.1.dim() != vas.dim() {
            return Err(MrgsError::Constraint("outer constraint has the wrong dimension".into()));
        }
        if !first.input_constraint.unlhd(&outer.0) {
            return Err(MrgsError::Constraint("m0 is not ⊴ m".into()));
        }
        if !last.output_constraint.unlhd(&outer.1) {
            return Err(MrgsError::Constraint("mk' is not ⊴ m'".into()));
        }
        Ok(Mrgs {
            blocks,
            joins,
            outer,
        })
    }

    /// One marked graph whose outer constraints are its own.
    pub fn single(block: MarkedGraph) -> Self {
        let outer = (block.input_constraint.clone(), block.output_constraint.clone());
        Mrgs::new(vec![block], vec![], outer).expect("single block is well formed")
    }

    pub fn vas(&self) -> &VasSystem {
        self.blocks[0].graph.vas()
    }

    pub fn blocks(&self) -> &[MarkedGraph] {
        &self.blocks
    }

    /// The joining actions `a1 … ak` as indices.
    pub fn joins(&self) -> &[usize] {
        &self.joins
    }

    pub fn outer(&self) -> &(ExtConfig, ExtConfig) {
        &self.outer
    }
}

/// The MRGS recognising exactly the runs from `s` to `s_prime`: the all-⊤
/// node with every action as a self-loop, constrained by `(s, s')`.
pub fn trivial_mrgs(vas: &VasSystem, s: &[BigInt], s_prime: &[BigInt]) -> Result<Mrgs, MrgsError> {
    let m = ExtConfig::from_config(s)?;
    let m_prime = ExtConfig::from_config(s_prime)?;
    if m.dim() != vas.dim() || m_prime.dim() != vas.dim() {
        return Err(VasError::DimensionMismatch {
            expected: vas.dim(),
            found: if m.dim() != vas.dim() { m.dim() } else { m_prime.dim() },
        }
        .into());
    }
    let block = MarkedGraph::new(m, 0, ReachGraph::all_top(vas.clone()), 0, m_prime)?;
    Ok(Mrgs::single(block))
}

/// Perfect iff the large solution condition holds and every marked graph
/// satisfies its input and output loop conditions.
pub fn is_perfect(u: &Mrgs) -> Result<bool, MrgsError> {
    if !large_solution_condition(u) {
        return Ok(false);
    }
    for b in u.blocks() {
        if !input_loop_condition(b)? || !output_loop_condition(b)? {
            return Ok(false);
        }
    }
    Ok(true)
}
