//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, RatVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: RatVector, value: BigRational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// Constraint rows, each of width `width + 1` (last entry = rhs).
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize, objective: &mut [BigRational]) {
        let p = self.rows[r][e].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let f = row[e].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        if !objective[e].is_zero() {
            let f = objective[e].clone();
            for (v, pv) in objective.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        self.basis[r] = e;
    }

    /// Runs simplex on a reduced-cost row (`objective[j] > 0` means entering
    /// `j` improves a maximisation). Only columns `< allowed` may enter.
    /// Returns false when unbounded.
    fn optimize(&mut self, objective: &mut [BigRational], allowed: usize) -> bool {
        loop {
            let Some(e) = (0..allowed).find(|&j| objective[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[e];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, e, objective),
            }
        }
    }
}

/// Maximises `c·x` subject to `A·x = b`, `x ≥ 0`.
pub fn maximize(c: &[BigRational], a: &[RatVector], b: &[BigRational]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    assert_eq!(b.len(), m);
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(ai.len(), n);
        let flip = bi.is_negative();
        let mut row: Vec<BigRational> = ai
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        row.extend((0..m).map(|k| {
            if k == i {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }));
        row.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        width,
    };

    // Phase 1: maximise −Σ artificials. Reduced costs = column sums over rows.
    let mut phase1 = vec![BigRational::zero(); width + 1];
    for row in &t.rows {
        for j in 0..n {
            phase1[j] += &row[j];
        }
        phase1[width] += &row[width];
    }
    t.optimize(&mut phase1, n);
    let infeasibility: BigRational = t
        .rows
        .iter()
        .zip(&t.basis)
        .filter(|(_, &bv)| bv >= n)
        .map(|(row, _)| row[width].clone())
        .sum();
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }

    // Drive artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(e) => {
                    let mut dummy = vec![BigRational::zero(); width + 1];
                    t.pivot(i, e, &mut dummy);
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase 2 reduced costs: c_j − c_B·B⁻¹A_j.
    let mut objective: Vec<BigRational> = c.to_vec();
    objective.resize(width + 1, BigRational::zero());
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        let cb = c[bv].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..=width {
            objective[j] -= &cb * &row[j];
        }
    }
    if !t.optimize(&mut objective, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if bv < n {
            x[bv] = row[width].clone();
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { x, value }
}

/// Finds a rational `x` with `A·x = 0`, `x[i] > 0` for `i ∈ strict` and
/// `x[i] ≥ 0` for `i ∈ nonneg`; other coordinates are free.
///
/// Solved as: maximise `t` subject to `x[i] ≥ t` on strict coordinates and
/// `t ≤ 1`. A strict solution exists iff the optimum is positive.
pub fn rational_feasible_strict(
    a: &IntMatrix,
    strict: &[usize],
    nonneg: &[usize],
) -> Option<RatVector> {
    let n = a.cols();
    if strict.is_empty() {
        return Some(vec![BigRational::zero(); n]);
    }
    let mut signed = vec![false; n];
    for &i in strict.iter().chain(nonneg) {
        assert!(i < n, "constraint index out of range");
        signed[i] = true;
    }
    // LP columns: one per signed variable, two (x⁺, x⁻) per free variable,
    // then t, then one slack per strict index, then the slack of t ≤ 1.
    let mut column_of = Vec::with_capacity(n);
    let mut cols = 0;
    for &s in &signed {
        column_of.push(cols);
        cols += if s { 1 } else { 2 };
    }
    let t_col = cols;
    let slack0 = t_col + 1;
    let cap_slack = slack0 + strict.len();
    let width = cap_slack + 1;

    let zero = BigRational::zero;
    let mut rows: Vec<RatVector> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for r in 0..a.rows() {
        let mut row = vec![zero(); width];
        for j in 0..n {
            let v = BigRational::from_integer(a[(r, j)].clone());
            if signed[j] {
                row[column_of[j]] = v;
            } else {
                row[column_of[j] + 1] = -v.clone();
                row[column_of[j]] = v;
            }
        }
        rows.push(row);
        rhs.push(zero());
    }
    for (k, &i) in strict.iter().enumerate() {
        // x_i − t − s_k = 0
        let mut row = vec![zero(); width];
        row[column_of[i]] = BigRational::one();
        row[t_col] = -BigRational::one();
        row[slack0 + k] = -BigRational::one();
        rows.push(row);
        rhs.push(zero());
    }
    let mut cap = vec![zero(); width];
    cap[t_col] = BigRational::one();
    cap[cap_slack] = BigRational::one();
    rows.push(cap);
    rhs.push(BigRational::one());

    let mut c = vec![zero(); width];
    c[t_col] = BigRational::one();
    match maximize(&c, &rows, &rhs) {
        LpOutcome::Optimal { x, value } if value.is_positive() => Some(
            (0..n)
                .map(|j| {
                    if signed[j] {
                        x[column_of[j]].clone()
                    } else {
                        &x[column_of[j]] - &x[column_of[j] + 1]
                    }
                })
                .collect(),
        ),
        _ => None,
    }
}

/// Smallest positive integer multiple of a rational vector that is integral.
pub fn scale_to_integers(x: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = x
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    x.iter()
        .map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer())
        .collect()
}
