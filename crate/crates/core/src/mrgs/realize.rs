//! Accepted sequences, their mechanical validation, and the construction of
//! accepted sequences with arbitrarily large witnesses from a perfect MRGS.

use num_bigint::BigInt;
use num_traits::Zero;

use super::charsys::{homogeneous_witness, integer_solution};
use super::{
    build_characteristic, euler_path, input_loop_witness, is_perfect, output_loop_witness,
    MarkedGraph, Mrgs, MrgsError, ReachGraph,
};
use crate::diophantine::{scale_to_integers, IntVector};
use crate::vas::{ExtConfig, ExtNat};

/// `(s, π, s')`: a path `π` (edge indices) from the input to the output
/// state, run from `s` to `s'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptedTuple {
    pub start: IntVector,
    pub path: Vec<usize>,
    pub end: IntVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptedSequence {
    pub blocks: Vec<AcceptedTuple>,
}

impl AcceptedSequence {
    /// The full action word `π0 a1 π1 … ak πk`.
    pub fn word(&self, u: &Mrgs) -> Vec<String> {
        let vas = u.vas();
        let mut out = Vec::new();
        for (j, (t, b)) in self.blocks.iter().zip(u.blocks()).enumerate() {
            if j > 0 {
                out.push(vas.action_name(u.joins()[j - 1]).to_string());
            }
            out.extend(
                t.path
                    .iter()
                    .map(|&e| vas.action_name(b.graph.edges()[e].action).to_string()),
            );
        }
        out
    }
}

fn conforms(cfg: &[BigInt], constraint: &ExtConfig) -> bool {
    cfg.len() == constraint.dim()
        && cfg.iter().zip(&constraint.0).all(|(v, c)| match c {
            ExtNat::Fin(f) => v == f,
            ExtNat::Top => *v >= BigInt::zero(),
        })
}

/// Checks that `seq` is accepted by `u`: each tuple conforms to its
/// constraints and replays along its graph, and the joining actions connect
/// consecutive tuples.
pub fn check_accepted(u: &Mrgs, seq: &AcceptedSequence) -> Result<(), String> {
    if seq.blocks.len() != u.blocks().len() {
        return Err(format!(
            "{} tuples for {} marked graphs",
            seq.blocks.len(),
            u.blocks().len()
        ));
    }
    let vas = u.vas();
    for (j, (t, b)) in seq.blocks.iter().zip(u.blocks()).enumerate() {
        if !conforms(&t.start, &b.input_constraint) {
            return Err(format!("block {j}: start does not match the input constraint"));
        }
        if !conforms(&t.end, &b.output_constraint) {
            return Err(format!("block {j}: end does not match the output constraint"));
        }
        match b.graph.replay(b.input_state, &t.start, &t.path) {
            Some((q, end)) if q == b.output_state && end == t.end => {}
            Some(_) => return Err(format!("block {j}: path ends at the wrong state or configuration")),
            None => return Err(format!("block {j}: path is not a run of the graph")),
        }
        if j > 0 {
            let prev = &seq.blocks[j - 1].end;
            let delta = vas.displacement(u.joins()[j - 1]);
            let joined: IntVector = prev.iter().zip(delta).map(|(a, d)| a + d).collect();
            if joined != t.start {
                return Err(format!("block {j}: joining action does not lead to its start"));
            }
        }
    }
    if !conforms(&seq.blocks[0].start, &u.outer().0) {
        return Err("source does not match the outer input constraint".into());
    }
    if !conforms(&seq.blocks.last().expect("nonempty").end, &u.outer().1) {
        return Err("target does not match the outer output constraint".into());
    }
    Ok(())
}

fn large_on_tops(cfg: &[BigInt], x: &ExtConfig, c: &BigInt) -> bool {
    cfg.iter().zip(&x.0).all(|(v, xi)| !xi.is_top() || v >= c)
}

fn check_tuple(b: &MarkedGraph, t: &AcceptedTuple, c: &BigInt) -> Result<(), String> {
    let vas = b.graph.vas();
    if !large_on_tops(&t.start, &b.input_constraint, c) {
        return Err("start is below the level on a ⊤ input coordinate".into());
    }
    if !large_on_tops(&t.end, &b.output_constraint, c) {
        return Err("end is below the level on a ⊤ output coordinate".into());
    }
    let mut uses = vec![0u64; b.graph.edges().len()];
    for &e in &t.path {
        uses[e] += 1;
    }
    if let Some(e) = uses.iter().position(|&k| BigInt::from(k) < *c) {
        return Err(format!("edge {e} is used fewer than {c} times"));
    }
    // Smallest valid prefix cycle and largest valid suffix cycle.
    let mut cur = t.start.clone();
    let mut node = b.input_state;
    let mut first_prefix = None;
    let mut last_suffix = None;
    for k in 0..=t.path.len() {
        if first_prefix.is_none() && node == b.input_state && large_on_tops(&cur, b.input_node(), c) {
            first_prefix = Some(k);
        }
        if node == b.output_state && large_on_tops(&cur, b.output_node(), c) {
            last_suffix = Some(k);
        }
        if let Some(&e) = t.path.get(k) {
            let edge = &b.graph.edges()[e];
            for (v, d) in cur.iter_mut().zip(vas.displacement(edge.action)) {
                *v += d;
            }
            node = edge.to;
        }
    }
    match (first_prefix, last_suffix) {
        (Some(p), Some(s)) if p <= s => Ok(()),
        (None, _) => Err("no prefix cycle on the input state reaches the level".into()),
        (_, None) => Err("no suffix cycle on the output state reaches the level".into()),
        _ => Err("prefix and suffix cycles overlap".into()),
    }
}

/// Checks that `seq` is accepted and that every tuple witnesses level `c`:
/// large ⊤-constrained start and end coordinates, every edge used at least
/// `c` times, and a prefix cycle on the input state and a suffix cycle on
/// the output state whose boundary configurations are large wherever the
/// state is ⊤. The prefix and suffix must not overlap.
pub fn check_large_acceptance(u: &Mrgs, seq: &AcceptedSequence, c: u64) -> Result<(), String> {
    check_accepted(u, seq)?;
    let c = BigInt::from(c);
    for (j, (t, b)) in seq.blocks.iter().zip(u.blocks()).enumerate() {
        check_tuple(b, t, &c).map_err(|e| format!("block {j}: {e}"))?;
    }
    Ok(())
}

fn edge_displacement(g: &ReachGraph, path: &[usize]) -> IntVector {
    let actions: Vec<usize> = path.iter().map(|&e| g.edges()[e].action).collect();
    g.vas().word_displacement(&actions)
}

fn counts(g: &ReachGraph, path: &[usize]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); g.edges().len()];
    for &e in path {
        out[e] += 1;
    }
    out
}

fn scaled(v: &[BigInt], k: &BigInt) -> IntVector {
    v.iter().map(|x| x * k).collect()
}

fn plus(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn minus(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn repeat(path: &[usize], times: usize) -> impl Iterator<Item = usize> + '_ {
    std::iter::repeat_n(path, times).flatten().copied()
}

const MAX_DOUBLINGS: usize = 48;
const MAX_LEVEL_DOUBLINGS: usize = 16;

/// Loop witnesses of one marked graph and their data.
struct Pumps {
    theta: Vec<usize>,
    theta_out: Vec<usize>,
    d_theta: IntVector,
    d_theta_out: IntVector,
    used: Vec<BigInt>,
}

/// For a perfect `u`, an accepted sequence satisfying the level-`c`
/// conditions of [`check_large_acceptance`]; `None` if `u` is not perfect.
///
/// From an integer solution `ξ`, a strictly positive homogeneous solution
/// `ξ0` and loop witnesses `θj`, `θj'`, block `j` of the result is
/// `θj^d σ0j^d σj θj'^d` started at `sj + d·s0j`, where `σj` is an Euler
/// path of `μj` and `σ0j` an Euler cycle of `μ0j − ψ(θj) − ψ(θj')`. The
/// multiplier `d` starts at `max(c, 1)` and doubles until the result
/// validates.
pub fn realize_accepted(u: &Mrgs, c: u64) -> Result<Option<AcceptedSequence>, MrgsError> {
    if !is_perfect(u)? {
        return Ok(None);
    }
    let internal = |m: &str| MrgsError::Internal(m.to_string());
    let sys = build_characteristic(u);
    let xi_int = integer_solution(&sys).ok_or_else(|| internal("no integer solution"))?;
    let xi0 = scale_to_integers(
        &homogeneous_witness(&sys, u).ok_or_else(|| internal("no homogeneous solution"))?,
    );

    let mut pumps = Vec::new();
    for b in u.blocks() {
        let theta = input_loop_witness(b)?.ok_or_else(|| internal("input loop witness"))?;
        let theta_out = output_loop_witness(b)?.ok_or_else(|| internal("output loop witness"))?;
        let used = plus(&counts(&b.graph, &theta), &counts(&b.graph, &theta_out));
        pumps.push(Pumps {
            d_theta: edge_displacement(&b.graph, &theta),
            d_theta_out: edge_displacement(&b.graph, &theta_out),
            theta,
            theta_out,
            used,
        });
    }

    // Scale ξ0 so that the pumps keep exactly the ⊤ coordinates positive and
    // leave room for an Euler cycle of μ0 − ψ(θ) − ψ(θ').
    let pump_ok = |xi0: &[BigInt]| {
        sys.layout.iter().zip(u.blocks()).zip(&pumps).all(|((l, b), p)| {
            let after_in = plus(&xi0[l.s.clone()], &p.d_theta);
            let before_out = minus(&xi0[l.s_prime.clone()], &p.d_theta_out);
            let shape = |v: &[BigInt], x: &ExtConfig| {
                v.iter().zip(&x.0).all(|(vi, xi)| {
                    if xi.is_top() {
                        *vi > BigInt::zero()
                    } else {
                        vi.is_zero()
                    }
                })
            };
            shape(&after_in, b.input_node())
                && shape(&before_out, b.output_node())
                && xi0[l.mu.clone()].iter().zip(&p.used).all(|(m, k)| m > k)
        })
    };
    let mut f = BigInt::from(1);
    let mut found = false;
    for _ in 0..MAX_DOUBLINGS {
        if pump_ok(&scaled(&xi0, &f)) {
            found = true;
            break;
        }
        f *= 2;
    }
    if !found {
        return Err(internal("could not scale the homogeneous solution"));
    }
    let xi0 = scaled(&xi0, &f);

    let mut sigma0 = Vec::new();
    for ((l, b), p) in sys.layout.iter().zip(u.blocks()).zip(&pumps) {
        let rest = minus(&xi0[l.mu.clone()], &p.used);
        let cycle = euler_path(&b.graph, b.input_state, b.input_state, &rest)?
            .ok_or_else(|| internal("homogeneous counts are unbalanced"))?;
        sigma0.push(cycle);
    }

    // ξ = ξint + e·ξ0 with e large enough that ξ is natural, every edge is
    // used, θ fires from s and θ' fires into s'.
    let xi_ok = |xi: &[BigInt]| {
        xi.iter().all(|v| *v >= BigInt::zero())
            && sys.layout.iter().zip(u.blocks()).zip(&pumps).all(|((l, b), p)| {
                let s = &xi[l.s.clone()];
                let sp = &xi[l.s_prime.clone()];
                let before = minus(sp, &p.d_theta_out);
                xi[l.mu.clone()].iter().all(|m| *m >= BigInt::from(1))
                    && b.graph.replay(b.input_state, s, &p.theta).is_some()
                    && before.iter().all(|v| *v >= BigInt::zero())
                    && b.graph.replay(b.output_state, &before, &p.theta_out).is_some()
            })
    };
    let mut e = BigInt::zero();
    let mut xi = None;
    for _ in 0..MAX_DOUBLINGS {
        let cand = plus(&xi_int, &scaled(&xi0, &e));
        if xi_ok(&cand) {
            xi = Some(cand);
            break;
        }
        e = if e.is_zero() { BigInt::from(1) } else { e * 2 };
    }
    let xi = xi.ok_or_else(|| internal("could not shift the integer solution"))?;

    let mut sigma = Vec::new();
    for (l, b) in sys.layout.iter().zip(u.blocks()) {
        let path = euler_path(&b.graph, b.input_state, b.output_state, &xi[l.mu.clone()])?
            .ok_or_else(|| internal("integer counts are unbalanced"))?;
        sigma.push(path);
    }

    let mut d = c.max(1) as usize;
    let mut last_err = String::new();
    for _ in 0..MAX_LEVEL_DOUBLINGS {
        let dd = BigInt::from(d);
        let blocks = sys
            .layout
            .iter()
            .zip(&pumps)
            .zip(sigma0.iter().zip(&sigma))
            .map(|((l, p), (s0, s))| AcceptedTuple {
                start: plus(&xi[l.s.clone()], &scaled(&xi0[l.s.clone()], &dd)),
                path: repeat(&p.theta, d)
                    .chain(repeat(s0, d))
                    .chain(s.iter().copied())
                    .chain(repeat(&p.theta_out, d))
                    .collect(),
                end: plus(&xi[l.s_prime.clone()], &scaled(&xi0[l.s_prime.clone()], &dd)),
            })
            .collect();
        let seq = AcceptedSequence { blocks };
        match check_large_acceptance(u, &seq, c) {
            Ok(()) => return Ok(Some(seq)),
            Err(err) => last_err = err,
        }
        d *= 2;
    }
    Err(MrgsError::Internal(format!("construction did not validate: {last_err}")))
}
