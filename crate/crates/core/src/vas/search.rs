use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Signed;

use super::{ExtConfig, VasError, VassSystem};
use crate::diophantine::IntVector;

/// A run found by search: the transitions taken and the word they spell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub transitions: Vec<usize>,
    pub word: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Witness),
    /// The node budget ran out without reaching the target.
    Exhausted,
}

type Node = (usize, IntVector);

/// Resumable breadth-first search for a concrete target configuration.
///
/// [`advance`](Self::advance) takes a cumulative budget, so repeated calls
/// with growing budgets continue where the previous call stopped.
pub struct ForwardSearch<'a> {
    sys: &'a VassSystem,
    target: Node,
    nodes: Vec<Node>,
    parent: Vec<Option<(usize, usize)>>,
    visited: HashMap<Node, usize>,
    queue: VecDeque<usize>,
    expanded: u64,
    found: Option<usize>,
}

impl<'a> ForwardSearch<'a> {
    pub fn new(
        sys: &'a VassSystem,
        source: (usize, IntVector),
        target: (usize, IntVector),
    ) -> Result<Self, VasError> {
        for (q, cfg) in [&source, &target] {
            if *q >= sys.num_states() {
                return Err(VasError::UnknownState(q.to_string()));
            }
            if cfg.len() != sys.dim() {
                return Err(VasError::DimensionMismatch {
                    expected: sys.dim(),
                    found: cfg.len(),
                });
            }
            if cfg.iter().any(Signed::is_negative) {
                return Err(VasError::NegativeComponent);
            }
        }
        let found = (source == target).then_some(0);
        let mut visited = HashMap::new();
        visited.insert(source.clone(), 0);
        Ok(ForwardSearch {
            sys,
            target,
            nodes: vec![source],
            parent: vec![None],
            visited,
            queue: VecDeque::from([0]),
            expanded: 0,
            found,
        })
    }

    /// Number of nodes expanded so far.
    pub fn expanded(&self) -> u64 {
        self.expanded
    }

    /// True once every reachable configuration has been expanded.
    pub fn space_exhausted(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn witness(&self) -> Option<Witness> {
        let mut at = self.found?;
        let mut path = Vec::new();
        while let Some((p, t)) = self.parent[at] {
            path.push(t);
            at = p;
        }
        path.reverse();
        Some(Witness {
            word: self.sys.word_of(&path),
            transitions: path,
        })
    }

    /// Expands nodes until the target is found, the total number of expansions
    /// reaches `budget`, or the reachable space is exhausted.
    pub fn advance(&mut self, budget: u64) -> SearchOutcome {
        while self.found.is_none() && self.expanded < budget {
            let Some(id) = self.queue.pop_front() else {
                break;
            };
            self.expanded += 1;
            let (q, cfg) = self.nodes[id].clone();
            for &t in self.sys.outgoing(q) {
                let delta = self.sys.transition_displacement(t);
                let next: IntVector = cfg.iter().zip(delta).map(|(a, b)| a + b).collect();
                if next.iter().any(Signed::is_negative) {
                    continue;
                }
                let node = (self.sys.transitions()[t].to, next);
                if self.visited.contains_key(&node) {
                    continue;
                }
                let nid = self.nodes.len();
                self.visited.insert(node.clone(), nid);
                let hit = node == self.target;
                self.nodes.push(node);
                self.parent.push(Some((id, t)));
                self.queue.push_back(nid);
                if hit {
                    self.found = Some(nid);
                    break;
                }
            }
        }
        match self.witness() {
            Some(w) => SearchOutcome::Found(w),
            None => SearchOutcome::Exhausted,
        }
    }
}

/// Breadth-first reachability with a budget on expanded nodes. A found
/// witness is a shortest one.
pub fn bfs_reach(
    sys: &VassSystem,
    source: (usize, IntVector),
    target: (usize, IntVector),
    budget: i64,
) -> Result<SearchOutcome, VasError> {
    if budget <= 0 {
        return Err(VasError::InvalidBudget);
    }
    let mut search = ForwardSearch::new(sys, source, target)?;
    Ok(search.advance(budget as u64))
}

/// All `(state, configuration)` pairs reachable from `source` by runs of
/// length at most `max_depth` whose every configuration satisfies `keep`.
pub fn explore_forward(
    sys: &VassSystem,
    source: (usize, IntVector),
    max_depth: usize,
    keep: impl Fn(usize, &[BigInt]) -> bool,
) -> HashSet<(usize, IntVector)> {
    explore(sys, source, max_depth, keep, false)
}

/// Like [`explore_forward`] but along reversed transitions, so the result is
/// the set of pairs that reach `target`.
pub fn explore_backward(
    sys: &VassSystem,
    target: (usize, IntVector),
    max_depth: usize,
    keep: impl Fn(usize, &[BigInt]) -> bool,
) -> HashSet<(usize, IntVector)> {
    explore(sys, target, max_depth, keep, true)
}

fn explore(
    sys: &VassSystem,
    start: (usize, IntVector),
    max_depth: usize,
    keep: impl Fn(usize, &[BigInt]) -> bool,
    backward: bool,
) -> HashSet<(usize, IntVector)> {
    let mut seen = HashSet::new();
    if !keep(start.0, &start.1) {
        return seen;
    }
    seen.insert(start.clone());
    let mut layer = vec![start];
    for _ in 0..max_depth {
        let mut next_layer = Vec::new();
        for (q, cfg) in &layer {
            let ts = if backward {
                sys.incoming(*q)
            } else {
                sys.outgoing(*q)
            };
            for &t in ts {
                let delta = sys.transition_displacement(t);
                let next: IntVector = if backward {
                    cfg.iter().zip(delta).map(|(a, b)| a - b).collect()
                } else {
                    cfg.iter().zip(delta).map(|(a, b)| a + b).collect()
                };
                if next.iter().any(Signed::is_negative) {
                    continue;
                }
                let tr = sys.transitions()[t];
                let nq = if backward { tr.from } else { tr.to };
                if !keep(nq, &next) {
                    continue;
                }
                let node = (nq, next);
                if seen.insert(node.clone()) {
                    next_layer.push(node);
                }
            }
        }
        if next_layer.is_empty() {
            break;
        }
        layer = next_layer;
    }
    seen
}

/// Replays a witness and checks that it connects `source` to `target`.
pub(crate) fn witness_is_valid(
    sys: &VassSystem,
    source: &(usize, IntVector),
    target: &(usize, IntVector),
    w: &Witness,
) -> bool {
    let Ok(start) = ExtConfig::from_config(&source.1) else {
        return false;
    };
    match sys.replay(source.0, &start, &w.transitions) {
        Some((q, cfg)) => q == target.0 && cfg.to_config().as_ref() == Some(&target.1),
        None => false,
    }
}
