//! Characteristic system of an MRGS and the large solution condition.

use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Mrgs;
use crate::diophantine::{rational_feasible_strict, solve_integer, IntMatrix, IntVector, RatVector};
use crate::vas::ExtNat;

/// Where the variables of one marked graph live inside `ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    pub s: Range<usize>,
    /// One variable per edge, in edge order.
    pub mu: Range<usize>,
    pub s_prime: Range<usize>,
}

/// `A·ξ = b` over ξ = (s0, μ0, s0', s1, μ1, s1', …). The homogeneous form
/// is `A·ξ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSystem {
    pub layout: Vec<BlockLayout>,
    pub matrix: IntMatrix,
    pub rhs: IntVector,
}

impl CharSystem {
    pub fn num_vars(&self) -> usize {
        self.matrix.cols()
    }

    pub fn is_solution(&self, xi: &[BigInt]) -> bool {
        xi.len() == self.num_vars() && self.matrix.mul_vec(xi) == self.rhs
    }

    pub fn is_homogeneous_solution(&self, xi: &[BigInt]) -> bool {
        xi.len() == self.num_vars() && self.matrix.mul_vec(xi).iter().all(Zero::is_zero)
    }

    /// Indices that must be strictly positive in a homogeneous witness:
    /// `s0j[i]` where `mj[i] = ⊤`, every `μ0j(t)`, and `s0j'[i]` where `mj'[i] = ⊤`.
    pub fn strict_indices(&self, u: &Mrgs) -> Vec<usize> {
        let mut out = Vec::new();
        for (l, b) in self.layout.iter().zip(u.blocks()) {
            out.extend(top_coords(&b.input_constraint.0).map(|i| l.s.start + i));
            out.extend(l.mu.clone());
            out.extend(top_coords(&b.output_constraint.0).map(|i| l.s_prime.start + i));
        }
        out
    }
}

fn top_coords(c: &[ExtNat]) -> impl Iterator<Item = usize> + '_ {
    c.iter().enumerate().filter(|(_, v)| v.is_top()).map(|(i, _)| i)
}

/// Builds the characteristic system: joining steps, one flow equation per
/// marked graph, constraint pins on finite coordinates, and Kirchhoff
/// equations between input and output states.
pub fn build_characteristic(u: &Mrgs) -> CharSystem {
    let vas = u.vas();
    let n = vas.dim();
    let mut layout = Vec::new();
    let mut next = 0;
    for b in u.blocks() {
        let e = b.graph.edges().len();
        layout.push(BlockLayout {
            s: next..next + n,
            mu: next + n..next + n + e,
            s_prime: next + n + e..next + 2 * n + e,
        });
        next += 2 * n + e;
    }
    let width = next;
    let mut rows: Vec<IntVector> = Vec::new();
    let mut rhs: IntVector = Vec::new();
    let mut push = |row: IntVector, b: BigInt| {
        rows.push(row);
        rhs.push(b);
    };
    let unit = |k: usize, v: BigInt| {
        let mut r = vec![BigInt::zero(); width];
        r[k] = v;
        r
    };

    for (j, (l, b)) in layout.iter().zip(u.blocks()).enumerate() {
        if j > 0 {
            // s'_{j-1} + δ(a_j) = s_j
            let prev = &layout[j - 1];
            let delta = vas.displacement(u.joins()[j - 1]);
            for i in 0..n {
                let mut r = unit(prev.s_prime.start + i, BigInt::one());
                r[l.s.start + i] = -BigInt::one();
                push(r, -delta[i].clone());
            }
        }
        // s_j + Σ μ(t)·δ(t) = s'_j
        for i in 0..n {
            let mut r = unit(l.s.start + i, BigInt::one());
            for (k, edge) in b.graph.edges().iter().enumerate() {
                r[l.mu.start + k] = vas.displacement(edge.action)[i].clone();
            }
            r[l.s_prime.start + i] = -BigInt::one();
            push(r, BigInt::zero());
        }
        for (c, range) in [(&b.input_constraint, &l.s), (&b.output_constraint, &l.s_prime)] {
            for (i, v) in c.0.iter().enumerate() {
                if let ExtNat::Fin(v) = v {
                    push(unit(range.start + i, BigInt::one()), v.clone());
                }
            }
        }
        // Kirchhoff: in(p) − out(p) = e(p, x') − e(x, p)
        for p in 0..b.graph.nodes().len() {
            let mut r = vec![BigInt::zero(); width];
            for (k, edge) in b.graph.edges().iter().enumerate() {
                if edge.to == p {
                    r[l.mu.start + k] += 1;
                }
                if edge.from == p {
                    r[l.mu.start + k] -= 1;
                }
            }
            let rhs = i64::from(p == b.output_state) - i64::from(p == b.input_state);
            push(r, BigInt::from(rhs));
        }
    }
    CharSystem {
        layout,
        matrix: IntMatrix::from_rows(width, rows),
        rhs,
    }
}

/// An integer solution of the characteristic system, if one exists.
pub(crate) fn integer_solution(sys: &CharSystem) -> Option<IntVector> {
    solve_integer(&sys.matrix, &sys.rhs)
}

/// A rational solution of the homogeneous system that is strictly positive
/// on [`CharSystem::strict_indices`].
pub(crate) fn homogeneous_witness(sys: &CharSystem, u: &Mrgs) -> Option<RatVector> {
    rational_feasible_strict(&sys.matrix, &sys.strict_indices(u), &[])
}

/// The characteristic system has an integer solution and its homogeneous
/// form has a rational solution positive on the ⊤-constrained
/// configuration coordinates and on every edge count.
pub fn large_solution_condition(u: &Mrgs) -> bool {
    let sys = build_characteristic(u);
    integer_solution(&sys).is_some() && homogeneous_witness(&sys, u).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::{int_vec, scale_to_integers};
    use crate::mrgs::tests::{all_top_fig1, fig1};
    use crate::mrgs::{trivial_mrgs, MarkedGraph, ReachGraph};
    use crate::vas::{ExtConfig, Transition, VasSystem};

    #[test]
    fn all_top_fig1_homogeneous_witness() {
        let u = all_top_fig1();
        let sys = build_characteristic(&u);
        assert_eq!(sys.num_vars(), 6);
        let w = scale_to_integers(&homogeneous_witness(&sys, &u).unwrap());
        assert!(sys.is_homogeneous_solution(&w));
        assert!(w.iter().all(|v| *v > BigInt::zero()));
        // the hand-computed witness s0 = (2,2), μ = (2,1), s0' = (3,2)
        assert!(sys.is_homogeneous_solution(&int_vec(&[2, 2, 2, 1, 3, 2])));
        assert!(large_solution_condition(&u));
    }

    #[test]
    fn trivial_fig1_has_no_large_solution() {
        let u = trivial_mrgs(&fig1(), &int_vec(&[0, 2]), &int_vec(&[1, 0])).unwrap();
        let sys = build_characteristic(&u);
        // the integer system is solvable (a^4 b^3) but μ cannot be positive
        // in the homogeneous one: μa·(1,1) + μb·(−1,−2) = 0 forces μ = 0
        assert!(integer_solution(&sys).is_some());
        assert!(sys.is_solution(&int_vec(&[0, 2, 4, 3, 1, 0])));
        assert!(homogeneous_witness(&sys, &u).is_none());
        assert!(!large_solution_condition(&u));
    }

    #[test]
    fn parity_blocks_integer_solution() {
        let v = VasSystem::from_i64(1, &[("two", &[2])]).unwrap();
        let u = trivial_mrgs(&v, &int_vec(&[0]), &int_vec(&[3])).unwrap();
        let sys = build_characteristic(&u);
        assert!(integer_solution(&sys).is_none());
        assert!(!large_solution_condition(&u));
    }

    #[test]
    fn two_blocks_with_join() {
        // inc then a join by dec
        let v = VasSystem::from_i64(1, &[("i", &[1]), ("d", &[-1])]).unwrap();
        let top = ExtConfig::top(1);
        let g = ReachGraph::new(
            v.clone(),
            vec![top.clone()],
            vec![Transition { from: 0, action: 0, to: 0 }],
        )
        .unwrap();
        let b0 = MarkedGraph::new(ExtConfig::from_i64(&[0]), 0, g.clone(), 0, top.clone()).unwrap();
        let b1 = MarkedGraph::new(top.clone(), 0, g, 0, top.clone()).unwrap();
        let u = Mrgs::new(vec![b0, b1], vec![1], (ExtConfig::from_i64(&[0]), top)).unwrap();
        let sys = build_characteristic(&u);
        assert_eq!(sys.layout[1].s, 3..4);
        // s0 = 0, μ0 = 3, s0' = 3, (d) s1 = 2, μ1 = 1, s1' = 3
        assert!(sys.is_solution(&int_vec(&[0, 3, 3, 2, 1, 3])));
        assert!(!sys.is_solution(&int_vec(&[0, 3, 3, 3, 1, 4])));
        assert!(large_solution_condition(&u));
    }
}
