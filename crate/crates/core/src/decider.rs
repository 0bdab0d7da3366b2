//! The dovetailed decision procedure.
//!
//! Round `k` first extends a breadth-first search for a run (cumulative
//! budget `(k+1)·step_budget`), then optionally tries half-space templates,
//! then checks canonical formulas of size at most `k` as candidate forward
//! invariants. A run and a valid certificate cannot both exist, so the first
//! success in either branch decides the instance.

use num_bigint::BigInt;
use thiserror::Error;

use crate::diophantine::{dot, IntVector};
use crate::invariant::{check_certificate, embed, embedding_dim, Certificate};
use crate::presburger::{CmpOp, FormulaEnumerator, Formula, LinAtom};
use crate::vas::witness_is_valid;
use crate::vas::{ForwardSearch, SearchOutcome, VasError, VassSystem, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeciderConfig {
    /// `None` runs until one branch succeeds.
    pub max_rounds: Option<u64>,
    /// Node expansions added to the search each round.
    pub step_budget: u64,
    /// Formulas checked per round at most.
    pub formula_budget: u64,
    pub templates: bool,
    /// Largest `|c|∞` tried by template search.
    pub template_bound: u64,
}

impl Default for DeciderConfig {
    fn default() -> Self {
        DeciderConfig {
            max_rounds: Some(12),
            step_budget: 10_000,
            formula_budget: 20_000,
            templates: true,
            template_bound: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeciderError {
    #[error(transparent)]
    Vas(#[from] VasError),
    #[error("budgets must be at least 1")]
    InvalidConfig,
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub rounds: u64,
    pub expanded: u64,
    pub formulas_checked: u64,
    pub templates_checked: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Reachable(Witness),
    Unreachable(Certificate),
    BudgetExhausted(Stats),
}

/// Half-space certificates `c·x ≤ c·s` with `|c|∞ ≤ bound` and
/// `c·δ(t) ≤ 0` for every transition, tried in order of `|c|₁` then
/// lexicographically. Only candidates accepted by `check_certificate` are
/// returned.
pub fn template_invariant_search(
    sys: &VassSystem,
    source: (usize, &[BigInt]),
    target: (usize, &[BigInt]),
    bound: u64,
) -> Option<Certificate> {
    template_search(sys, source, target, bound, &mut 0)
}

fn template_search(
    sys: &VassSystem,
    source: (usize, &[BigInt]),
    target: (usize, &[BigInt]),
    bound: u64,
    checked: &mut u64,
) -> Option<Certificate> {
    let dim = embedding_dim(sys);
    let s = embed(sys, source.0, source.1);
    let t = embed(sys, target.0, target.1);
    let deltas: Vec<IntVector> = sys
        .transitions()
        .iter()
        .enumerate()
        .map(|(k, tr)| {
            let mut d = sys.transition_displacement(k).clone();
            if dim > sys.dim() {
                d.push(BigInt::from(tr.to as i64 - tr.from as i64));
            }
            d
        })
        .collect();
    let b = bound as i64;
    for norm in 1..=(b * dim as i64) {
        for c in vectors_with_norm(dim, norm, b) {
            let c: IntVector = c.into_iter().map(BigInt::from).collect();
            if deltas.iter().any(|d| dot(&c, d) > BigInt::from(0)) {
                continue;
            }
            let d = dot(&c, &s);
            if dot(&c, &t) <= d {
                continue;
            }
            *checked += 1;
            let cert = Certificate {
                formula: Formula::Lin(LinAtom::new(c, CmpOp::Le, d)),
                source: s.clone(),
                target: t.clone(),
            };
            if check_certificate(&cert, sys).is_valid() {
                return Some(cert);
            }
        }
    }
    None
}

/// Integer vectors with `Σ|cᵢ| = norm` and entries in `[−cap, cap]`, in
/// lexicographic order.
fn vectors_with_norm(n: usize, norm: i64, cap: i64) -> Vec<Vec<i64>> {
    fn go(n: usize, left: i64, cap: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            if left == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let m = left.min(cap);
        for v in -m..=m {
            prefix.push(v);
            go(n, left - v.abs(), cap, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, norm, cap, &mut Vec::new(), &mut out);
    out
}

/// Runs the dovetailed procedure. Every returned witness has been replayed
/// and every certificate re-checked.
pub fn decide_reach(
    sys: &VassSystem,
    source: (usize, IntVector),
    target: (usize, IntVector),
    cfg: &DeciderConfig,
) -> Result<Verdict, DeciderError> {
    if cfg.step_budget == 0 || cfg.formula_budget == 0 || cfg.max_rounds == Some(0) {
        return Err(DeciderError::InvalidConfig);
    }
    let mut search = ForwardSearch::new(sys, source.clone(), target.clone())?;
    let dim = embedding_dim(sys);
    let s = embed(sys, source.0, &source.1);
    let t = embed(sys, target.0, &target.1);
    let mut formulas = FormulaEnumerator::new(dim);
    // next formula to check: (size, index within the size bucket)
    let mut cursor = (0usize, 0usize);
    let mut template_done = 0u64;
    let mut stats = Stats::default();

    let mut k = 0u64;
    loop {
        if cfg.max_rounds.is_some_and(|m| k >= m) {
            stats.expanded = search.expanded();
            return Ok(Verdict::BudgetExhausted(stats));
        }
        stats.rounds = k + 1;

        let budget = cfg.step_budget.saturating_mul(k + 1);
        if let SearchOutcome::Found(w) = search.advance(budget) {
            if !witness_is_valid(sys, &source, &target, &w) {
                return Err(DeciderError::SelfCheck("witness does not replay".into()));
            }
            return Ok(Verdict::Reachable(w));
        }

        if cfg.templates {
            let bound = (k + 1).min(cfg.template_bound);
            if bound > template_done {
                template_done = bound;
                let found = template_search(
                    sys,
                    (source.0, &source.1),
                    (target.0, &target.1),
                    bound,
                    &mut stats.templates_checked,
                );
                if let Some(cert) = found {
                    return surface(cert, sys);
                }
            }
        }

        let mut checked = 0;
        while checked < cfg.formula_budget && cursor.0 as u64 <= k {
            let bucket = formulas.bucket(cursor.0);
            let Some(f) = bucket.get(cursor.1) else {
                cursor = (cursor.0 + 1, 0);
                continue;
            };
            cursor.1 += 1;
            checked += 1;
            stats.formulas_checked += 1;
            // cheap clauses first
            if !f.eval(&s).expect("embedded dimension") || f.eval(&t).expect("embedded dimension") {
                continue;
            }
            let cert = Certificate {
                formula: f.clone(),
                source: s.clone(),
                target: t.clone(),
            };
            if check_certificate(&cert, sys).is_valid() {
                return surface(cert, sys);
            }
        }
        k += 1;
    }
}

fn surface(cert: Certificate, sys: &VassSystem) -> Result<Verdict, DeciderError> {
    match check_certificate(&cert, sys) {
        c if c.is_valid() => Ok(Verdict::Unreachable(cert)),
        c => Err(DeciderError::SelfCheck(format!("certificate rejected: {c:?}"))),
    }
}
