use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{dot, IntMatrix, IntVector};

/// `x ≤ y` component-wise.
pub(crate) fn leq(x: &[BigInt], y: &[BigInt]) -> bool {
    x.iter().zip(y).all(|(a, b)| a <= b)
}

/// The ≤-minimal elements of a finite set of vectors, deduplicated and sorted.
pub fn min_elements(set: &[IntVector]) -> Vec<IntVector> {
    let unique: BTreeSet<IntVector> = set.iter().cloned().collect();
    let unique: Vec<IntVector> = unique.into_iter().collect();
    unique
        .iter()
        .filter(|x| !unique.iter().any(|y| y != *x && leq(y, x)))
        .cloned()
        .collect()
}

/// Minimal nonzero solutions over ℕ of `A·x = 0` (the Hilbert basis),
/// computed by the Contejean–Devie completion procedure.
///
/// A candidate `x` with `A·x ≠ 0` is only extended along unit vectors `eⱼ`
/// with `⟨A·x, A·eⱼ⟩ < 0`, and candidates dominating an already found
/// solution are discarded. Candidates of round `r` all have size `r`, so a
/// solution found in round `r` cannot dominate another from the same round.
pub fn hilbert_basis(a: &IntMatrix) -> Vec<IntVector> {
    let q = a.cols();
    let columns: Vec<IntVector> = (0..q).map(|j| a.column(j)).collect();
    let mut basis: Vec<IntVector> = Vec::new();
    // (x, A·x)
    let mut frontier: Vec<(IntVector, IntVector)> = (0..q)
        .map(|j| (unit(q, j), columns[j].clone()))
        .collect();
    while !frontier.is_empty() {
        let mut pending = Vec::new();
        for (x, ax) in frontier {
            if ax.iter().all(Zero::is_zero) {
                basis.push(x);
            } else {
                pending.push((x, ax));
            }
        }
        let mut next: BTreeSet<(IntVector, IntVector)> = BTreeSet::new();
        for (x, ax) in &pending {
            for (j, col) in columns.iter().enumerate() {
                if !dot(ax, col).is_negative() {
                    continue;
                }
                let mut y = x.clone();
                y[j] += BigInt::one();
                if basis.iter().any(|b| leq(b, &y)) {
                    continue;
                }
                let ay: IntVector = ax.iter().zip(col).map(|(u, v)| u + v).collect();
                next.insert((y, ay));
            }
        }
        frontier = next.into_iter().collect();
    }
    basis.sort();
    basis
}

/// Minimal solutions over ℕ of the inhomogeneous system `A·x = b`, together
/// with the Hilbert basis of the homogeneous part.
///
/// Uses the standard homogenisation `A·x − b·z = 0`: basis elements with
/// `z = 1` are exactly the minimal inhomogeneous solutions, those with `z = 0`
/// the homogeneous basis.
pub fn inhomogeneous_minimal_solutions(
    a: &IntMatrix,
    b: &[BigInt],
) -> (Vec<IntVector>, Vec<IntVector>) {
    assert_eq!(a.rows(), b.len());
    let q = a.cols();
    let rows: Vec<IntVector> = (0..a.rows())
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(-b[i].clone());
            row
        })
        .collect();
    let extended = IntMatrix::from_rows(q + 1, rows);
    let mut particular = Vec::new();
    let mut homogeneous = Vec::new();
    for mut v in hilbert_basis(&extended) {
        let z = v.pop().expect("extended vector");
        if z.is_zero() {
            homogeneous.push(v);
        } else if z.is_one() {
            particular.push(v);
        }
    }
    (particular, homogeneous)
}

fn unit(n: usize, j: usize) -> IntVector {
    let mut v = vec![BigInt::zero(); n];
    v[j] = BigInt::one();
    v
}
