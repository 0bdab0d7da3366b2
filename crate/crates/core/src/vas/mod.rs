//! Vector addition systems (with states) over ⊤-extended configurations.

mod coverability;
mod search;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::diophantine::IntVector;

pub use coverability::{cover_witness, karp_miller_covers};
pub(crate) use search::witness_is_valid;
pub use search::{bfs_reach, explore_backward, explore_forward, ForwardSearch, SearchOutcome, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VasError {
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate action `{0}`")]
    DuplicateAction(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("the alphabet must not be empty")]
    EmptyAlphabet,
    #[error("a VASS needs at least one state")]
    NoStates,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("configuration has a negative component")]
    NegativeComponent,
    #[error("expected a concrete configuration (no ⊤ components)")]
    NotConcrete,
    #[error("search budget must be positive")]
    InvalidBudget,
}

/// A natural number or the "don't care" value ⊤.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Fin(BigInt),
    Top,
}

impl ExtNat {
    pub fn fin(v: i64) -> Self {
        assert!(v >= 0, "ExtNat must be nonnegative");
        ExtNat::Fin(BigInt::from(v))
    }

    pub fn is_top(&self) -> bool {
        matches!(self, ExtNat::Top)
    }

    pub fn as_fin(&self) -> Option<&BigInt> {
        match self {
            ExtNat::Fin(v) => Some(v),
            ExtNat::Top => None,
        }
    }

    /// `self + z`, with `⊤ + z = ⊤`; `None` when a finite result would be negative.
    pub fn add(&self, z: &BigInt) -> Option<ExtNat> {
        match self {
            ExtNat::Top => Some(ExtNat::Top),
            ExtNat::Fin(v) => {
                let r = v + z;
                (!r.is_negative()).then_some(ExtNat::Fin(r))
            }
        }
    }

    /// The order `≤` with `k ≤ ⊤`.
    pub fn le(&self, other: &ExtNat) -> bool {
        match (self, other) {
            (_, ExtNat::Top) => true,
            (ExtNat::Top, ExtNat::Fin(_)) => false,
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a <= b,
        }
    }

    /// The "don't care" order `⊴`: equal, or the right side is ⊤.
    pub fn unlhd(&self, other: &ExtNat) -> bool {
        other.is_top() || self == other
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(v) => write!(f, "{v}"),
            ExtNat::Top => write!(f, "T"),
        }
    }
}

/// A vector over ℕ ∪ {⊤}. Configurations are the ⊤-free special case.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtConfig(pub Vec<ExtNat>);

impl ExtConfig {
    pub fn from_config(values: &[BigInt]) -> Result<Self, VasError> {
        if values.iter().any(Signed::is_negative) {
            return Err(VasError::NegativeComponent);
        }
        Ok(ExtConfig(values.iter().cloned().map(ExtNat::Fin).collect()))
    }

    pub fn from_i64(values: &[i64]) -> Self {
        ExtConfig(values.iter().map(|&v| ExtNat::fin(v)).collect())
    }

    pub fn top(n: usize) -> Self {
        ExtConfig(vec![ExtNat::Top; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_concrete(&self) -> bool {
        self.0.iter().all(|v| !v.is_top())
    }

    /// The underlying configuration, if there is no ⊤ component.
    pub fn to_config(&self) -> Option<IntVector> {
        self.0.iter().map(|v| v.as_fin().cloned()).collect()
    }

    pub fn top_positions(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.0[i].is_top()).collect()
    }

    pub fn add_displacement(&self, delta: &[BigInt]) -> Option<ExtConfig> {
        debug_assert_eq!(delta.len(), self.dim());
        self.0
            .iter()
            .zip(delta)
            .map(|(v, d)| v.add(d))
            .collect::<Option<Vec<_>>>()
            .map(ExtConfig)
    }

    pub fn le(&self, other: &ExtConfig) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.le(b))
    }

    pub fn unlhd(&self, other: &ExtConfig) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.unlhd(b))
    }
}

impl fmt::Display for ExtConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Alphabet, dimension and displacement function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VasSystem {
    dim: usize,
    names: Vec<String>,
    displacements: Vec<IntVector>,
    index: HashMap<String, usize>,
}

impl VasSystem {
    pub fn new(dim: usize, actions: Vec<(String, IntVector)>) -> Result<Self, VasError> {
        if actions.is_empty() {
            return Err(VasError::EmptyAlphabet);
        }
        let mut names = Vec::with_capacity(actions.len());
        let mut displacements = Vec::with_capacity(actions.len());
        let mut index = HashMap::new();
        for (name, delta) in actions {
            if delta.len() != dim {
                return Err(VasError::DimensionMismatch {
                    expected: dim,
                    found: delta.len(),
                });
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(VasError::DuplicateAction(name));
            }
            names.push(name);
            displacements.push(delta);
        }
        Ok(VasSystem {
            dim,
            names,
            displacements,
            index,
        })
    }

    /// Convenience constructor from `(name, displacement)` pairs of machine integers.
    pub fn from_i64(dim: usize, actions: &[(&str, &[i64])]) -> Result<Self, VasError> {
        Self::new(
            dim,
            actions
                .iter()
                .map(|(n, d)| (n.to_string(), d.iter().map(|&v| BigInt::from(v)).collect()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_actions(&self) -> usize {
        self.names.len()
    }

    pub fn action_names(&self) -> &[String] {
        &self.names
    }

    pub fn action_name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn action_index(&self, name: &str) -> Result<usize, VasError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| VasError::UnknownAction(name.to_string()))
    }

    pub fn displacement(&self, a: usize) -> &IntVector {
        &self.displacements[a]
    }

    fn check_dim(&self, cfg: &ExtConfig) -> Result<(), VasError> {
        if cfg.dim() != self.dim {
            return Err(VasError::DimensionMismatch {
                expected: self.dim,
                found: cfg.dim(),
            });
        }
        Ok(())
    }

    /// One step `cfg →a`; `Ok(None)` when the action is not enabled.
    pub fn step(&self, cfg: &ExtConfig, action: &str) -> Result<Option<ExtConfig>, VasError> {
        self.check_dim(cfg)?;
        let a = self.action_index(action)?;
        Ok(cfg.add_displacement(&self.displacements[a]))
    }

    /// Left fold of [`step`](Self::step) over a word; the empty word is the identity.
    pub fn run<S: AsRef<str>>(
        &self,
        cfg: &ExtConfig,
        word: &[S],
    ) -> Result<Option<ExtConfig>, VasError> {
        self.check_dim(cfg)?;
        let indices = word
            .iter()
            .map(|s| self.action_index(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.run_indices(cfg, &indices))
    }

    pub fn run_indices(&self, cfg: &ExtConfig, word: &[usize]) -> Option<ExtConfig> {
        let mut cur = cfg.clone();
        for &a in word {
            cur = cur.add_displacement(&self.displacements[a])?;
        }
        Some(cur)
    }

    /// Total displacement δ(σ) of a word given as action indices.
    pub fn word_displacement(&self, word: &[usize]) -> IntVector {
        let mut total = vec![BigInt::zero(); self.dim];
        for &a in word {
            for (t, d) in total.iter_mut().zip(&self.displacements[a]) {
                *t += d;
            }
        }
        total
    }
}

/// Occurrence counts of each alphabet symbol in a word.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ParikhVector {
    pub counts: BTreeMap<String, u64>,
}

impl ParikhVector {
    pub fn get(&self, symbol: &str) -> u64 {
        self.counts.get(symbol).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// The Parikh image of `word` over `alphabet`.
pub fn parikh<S: AsRef<str>, T: AsRef<str>>(
    word: &[S],
    alphabet: &[T],
) -> Result<ParikhVector, VasError> {
    let mut counts: BTreeMap<String, u64> = alphabet
        .iter()
        .map(|a| (a.as_ref().to_string(), 0))
        .collect();
    for s in word {
        match counts.get_mut(s.as_ref()) {
            Some(c) => *c += 1,
            None => return Err(VasError::UnknownAction(s.as_ref().to_string())),
        }
    }
    Ok(ParikhVector { counts })
}

/// A control-graph transition `(from, action, to)`, all as indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: usize,
    pub action: usize,
    pub to: usize,
}

/// A VAS driven by a finite control graph. A plain VAS is the one-state case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VassSystem {
    states: Vec<String>,
    transitions: Vec<Transition>,
    vas: VasSystem,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl VassSystem {
    pub fn new(
        states: Vec<String>,
        transitions: Vec<Transition>,
        vas: VasSystem,
    ) -> Result<Self, VasError> {
        if states.is_empty() {
            return Err(VasError::NoStates);
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(VasError::DuplicateState(s.clone()));
            }
        }
        let mut outgoing = vec![Vec::new(); states.len()];
        let mut incoming = vec![Vec::new(); states.len()];
        for (ti, t) in transitions.iter().enumerate() {
            for q in [t.from, t.to] {
                if q >= states.len() {
                    return Err(VasError::UnknownState(q.to_string()));
                }
            }
            if t.action >= vas.num_actions() {
                return Err(VasError::UnknownAction(t.action.to_string()));
            }
            outgoing[t.from].push(ti);
            incoming[t.to].push(ti);
        }
        Ok(VassSystem {
            states,
            transitions,
            vas,
            outgoing,
            incoming,
        })
    }

    /// The VAS seen as a VASS with a single state carrying one self-loop per action.
    pub fn single_state(vas: VasSystem) -> Self {
        let transitions = (0..vas.num_actions())
            .map(|a| Transition {
                from: 0,
                action: a,
                to: 0,
            })
            .collect();
        VassSystem::new(vec!["q".to_string()], transitions, vas).expect("well-formed")
    }

    pub fn vas(&self) -> &VasSystem {
        &self.vas
    }

    pub fn dim(&self) -> usize {
        self.vas.dim()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Result<usize, VasError> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| VasError::UnknownState(name.to_string()))
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, state: usize) -> &[usize] {
        &self.outgoing[state]
    }

    pub fn incoming(&self, state: usize) -> &[usize] {
        &self.incoming[state]
    }

    pub fn transition_displacement(&self, t: usize) -> &IntVector {
        self.vas.displacement(self.transitions[t].action)
    }

    /// Replays a transition sequence from `(state, cfg)`; `None` if a step is
    /// disabled or the transitions do not chain.
    pub fn replay(
        &self,
        state: usize,
        cfg: &ExtConfig,
        path: &[usize],
    ) -> Option<(usize, ExtConfig)> {
        let mut q = state;
        let mut cur = cfg.clone();
        for &t in path {
            let tr = self.transitions.get(t)?;
            if tr.from != q {
                return None;
            }
            cur = cur.add_displacement(self.vas.displacement(tr.action))?;
            q = tr.to;
        }
        Some((q, cur))
    }

    pub fn word_of(&self, path: &[usize]) -> Vec<String> {
        path.iter()
            .map(|&t| self.vas.action_name(self.transitions[t].action).to_string())
            .collect()
    }
}
