use std::collections::{HashSet, VecDeque};

use super::{ExtConfig, ExtNat, VasError, VassSystem};

type Pair = (usize, ExtConfig);

struct KmNode {
    state: usize,
    cfg: ExtConfig,
    parent: Option<usize>,
}

/// `cfg` covers `target`: every finite target component is matched or exceeded.
/// ⊤ in the target means "unconstrained", ⊤ in `cfg` covers anything.
fn covers(cfg: &ExtConfig, target: &ExtConfig) -> bool {
    cfg.0.iter().zip(&target.0).all(|(c, t)| match (c, t) {
        (_, ExtNat::Top) | (ExtNat::Top, _) => true,
        (ExtNat::Fin(c), ExtNat::Fin(t)) => c >= t,
    })
}

fn check_pair(sys: &VassSystem, state: usize, cfg: &ExtConfig) -> Result<(), VasError> {
    if state >= sys.num_states() {
        return Err(VasError::UnknownState(state.to_string()));
    }
    if cfg.dim() != sys.dim() {
        return Err(VasError::DimensionMismatch {
            expected: sys.dim(),
            found: cfg.dim(),
        });
    }
    Ok(())
}

/// Decides whether some run from `init` reaches a pair `(target.0, c)` with
/// `c` covering `target.1`, using a Karp–Miller tree with ω-acceleration
/// (⊤ plays the role of ω) and subsumption pruning.
pub fn karp_miller_covers(
    sys: &VassSystem,
    init: (usize, ExtConfig),
    target: (usize, ExtConfig),
) -> Result<bool, VasError> {
    check_pair(sys, init.0, &init.1)?;
    check_pair(sys, target.0, &target.1)?;
    let mut nodes = vec![KmNode {
        state: init.0,
        cfg: init.1,
        parent: None,
    }];
    // Accepted (expanded) nodes per state, used for pruning.
    let mut accepted: Vec<Vec<usize>> = vec![Vec::new(); sys.num_states()];
    let mut work = vec![0usize];
    while let Some(id) = work.pop() {
        let (state, cfg) = (nodes[id].state, nodes[id].cfg.clone());
        if state == target.0 && covers(&cfg, &target.1) {
            return Ok(true);
        }
        if accepted[state].iter().any(|&o| cfg.le(&nodes[o].cfg)) {
            continue;
        }
        accepted[state].push(id);
        for &t in sys.outgoing(state) {
            let Some(mut next) = cfg.add_displacement(sys.transition_displacement(t)) else {
                continue;
            };
            let nstate = sys.transitions()[t].to;
            let mut anc = Some(id);
            while let Some(a) = anc {
                let an = &nodes[a];
                if an.state == nstate && an.cfg.le(&next) && an.cfg != next {
                    for (v, av) in next.0.iter_mut().zip(&an.cfg.0) {
                        if av != v {
                            *v = ExtNat::Top;
                        }
                    }
                }
                anc = an.parent;
            }
            nodes.push(KmNode {
                state: nstate,
                cfg: next,
                parent: Some(id),
            });
            work.push(nodes.len() - 1);
        }
    }
    Ok(false)
}

/// A shortest transition sequence from `init` to a pair covering `target`.
///
/// Plain breadth-first search over exact configurations; it terminates
/// whenever the target is coverable, so callers should establish that first
/// (e.g. with [`karp_miller_covers`]) or pass a finite `max_nodes`.
pub fn cover_witness(
    sys: &VassSystem,
    init: (usize, ExtConfig),
    target: (usize, ExtConfig),
    max_nodes: Option<usize>,
) -> Result<Option<Vec<usize>>, VasError> {
    check_pair(sys, init.0, &init.1)?;
    check_pair(sys, target.0, &target.1)?;
    // (pair, parent index and transition)
    let mut nodes: Vec<(Pair, Option<(usize, usize)>)> = vec![(init.clone(), None)];
    let mut seen: HashSet<(usize, ExtConfig)> = HashSet::from([init]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let (state, cfg) = nodes[id].0.clone();
        if state == target.0 && covers(&cfg, &target.1) {
            let mut path = Vec::new();
            let mut at = id;
            while let Some((p, t)) = nodes[at].1 {
                path.push(t);
                at = p;
            }
            path.reverse();
            return Ok(Some(path));
        }
        if max_nodes.is_some_and(|m| nodes.len() >= m) {
            continue;
        }
        for &t in sys.outgoing(state) {
            let Some(next) = cfg.add_displacement(sys.transition_displacement(t)) else {
                continue;
            };
            let node = (sys.transitions()[t].to, next);
            if seen.insert(node.clone()) {
                nodes.push((node, Some((id, t))));
                queue.push_back(nodes.len() - 1);
            }
        }
    }
    Ok(None)
}
