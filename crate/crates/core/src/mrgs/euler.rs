//! Kirchhoff balance and Euler paths over edge multiplicities.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{MrgsError, ReachGraph};

/// Does `μ` (one count per edge) balance every node, with one extra unit
/// leaving `q` and one extra unit entering `q_prime`?
pub fn kirchhoff_check(g: &ReachGraph, q: usize, q_prime: usize, mu: &[BigInt]) -> bool {
    if mu.len() != g.edges().len() || q >= g.nodes().len() || q_prime >= g.nodes().len() {
        return false;
    }
    let mut balance = vec![BigInt::zero(); g.nodes().len()];
    for (e, m) in g.edges().iter().zip(mu) {
        balance[e.to] += m;
        balance[e.from] -= m;
    }
    balance[q_prime] -= 1;
    balance[q] += 1;
    balance.iter().all(Zero::is_zero)
}

/// A path from `q` to `q_prime` using edge `t` exactly `μ(t)` times.
///
/// Every count must be at least one; together with strong connectivity this
/// makes Kirchhoff balance sufficient, so `None` means the balance fails.
pub fn euler_path(
    g: &ReachGraph,
    q: usize,
    q_prime: usize,
    mu: &[BigInt],
) -> Result<Option<Vec<usize>>, MrgsError> {
    if mu.len() != g.edges().len() {
        return Err(MrgsError::Internal(format!(
            "{} counts for {} edges",
            mu.len(),
            g.edges().len()
        )));
    }
    let mut remaining = Vec::with_capacity(mu.len());
    for (t, m) in mu.iter().enumerate() {
        if *m <= BigInt::zero() {
            return Err(MrgsError::ZeroCount(t));
        }
        let v = m
            .to_u64()
            .ok_or_else(|| MrgsError::Internal(format!("count {m} too large")))?;
        remaining.push(v);
    }
    if !kirchhoff_check(g, q, q_prime, mu) {
        return Ok(None);
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); g.nodes().len()];
    for (t, e) in g.edges().iter().enumerate() {
        out[e.from].push(t);
    }
    let mut cursor = vec![0usize; g.nodes().len()];
    // Hierholzer: walk until stuck, emit edges while backtracking.
    let mut stack: Vec<(usize, Option<usize>)> = vec![(q, None)];
    let mut path = Vec::new();
    while let Some(&(v, via)) = stack.last() {
        while cursor[v] < out[v].len() && remaining[out[v][cursor[v]]] == 0 {
            cursor[v] += 1;
        }
        if let Some(&t) = out[v].get(cursor[v]) {
            remaining[t] -= 1;
            stack.push((g.edges()[t].to, Some(t)));
        } else {
            stack.pop();
            if let Some(t) = via {
                path.push(t);
            }
        }
    }
    path.reverse();
    debug_assert!(remaining.iter().all(|&r| r == 0));
    Ok(Some(path))
}
