use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, IntVector};

/// Column-style Hermite normal form.
///
/// Returns `(H, U)` with `U` unimodular and `H = A·U`. `H` is lower
/// triangular in echelon profile: each pivot is positive, nothing lies to the
/// right of a pivot, and the entries left of a pivot in its row lie in
/// `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(n);
    let mut r = 0;
    for i in 0..m {
        if r == n {
            break;
        }
        for j in r + 1..n {
            if h[(i, j)].is_zero() {
                continue;
            }
            let p = h[(i, r)].clone();
            let q = h[(i, j)].clone();
            let eg = p.extended_gcd(&q);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let pg = &p / &g;
            let qg = &q / &g;
            // [col_r, col_j] <- [col_r, col_j] * [[x, -q/g], [y, p/g]], det = 1.
            mix_columns(&mut h, r, j, &x, &y, &(-&qg), &pg);
            mix_columns(&mut u, r, j, &x, &y, &(-&qg), &pg);
        }
        if h[(i, r)].is_zero() {
            continue;
        }
        if h[(i, r)].is_negative() {
            negate_column(&mut h, r);
            negate_column(&mut u, r);
        }
        for j in 0..r {
            let f = h[(i, j)].div_floor(&h[(i, r)]);
            if !f.is_zero() {
                sub_column_multiple(&mut h, j, r, &f);
                sub_column_multiple(&mut u, j, r, &f);
            }
        }
        r += 1;
    }
    (h, u)
}

fn mix_columns(
    m: &mut IntMatrix,
    r: usize,
    j: usize,
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    d: &BigInt,
) {
    for i in 0..m.rows() {
        let vr = m[(i, r)].clone();
        let vj = m[(i, j)].clone();
        m[(i, r)] = a * &vr + b * &vj;
        m[(i, j)] = c * &vr + d * &vj;
    }
}

fn negate_column(m: &mut IntMatrix, c: usize) {
    for i in 0..m.rows() {
        let v = -&m[(i, c)];
        m[(i, c)] = v;
    }
}

/// col_target -= f * col_src
fn sub_column_multiple(m: &mut IntMatrix, target: usize, src: usize, f: &BigInt) {
    for i in 0..m.rows() {
        let delta = f * &m[(i, src)];
        m[(i, target)] -= delta;
    }
}

/// General integer solution of `A·x = b`: every solution is
/// `particular + Σ yᵢ·kernel[i]` for integers `yᵢ`, and the kernel vectors
/// form a lattice basis of `{x ∈ ℤⁿ | A·x = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolutions {
    pub particular: IntVector,
    pub kernel: Vec<IntVector>,
}

pub fn integer_solutions(a: &IntMatrix, b: &[BigInt]) -> Option<IntegerSolutions> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let n = a.cols();
    let (h, u) = hermite_normal_form(a);
    let mut z: Vec<BigInt> = vec![BigInt::zero(); n];
    let mut r = 0;
    for (i, bi) in b.iter().enumerate() {
        let partial: BigInt = (0..r).map(|j| &h[(i, j)] * &z[j]).sum();
        let rest = bi - partial;
        if r < n && !h[(i, r)].is_zero() {
            let (q, rem) = rest.div_rem(&h[(i, r)]);
            if !rem.is_zero() {
                return None;
            }
            z[r] = q;
            r += 1;
        } else if !rest.is_zero() {
            return None;
        }
    }
    let particular = u.mul_vec(&z);
    let kernel = (r..n).map(|j| u.column(j)).collect();
    Some(IntegerSolutions { particular, kernel })
}

/// Some integer solution of `A·x = b`, or `None` iff none exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<IntVector> {
    integer_solutions(a, b).map(|s| s.particular)
}

#[allow(dead_code)]
pub(crate) fn is_unimodular(u: &IntMatrix) -> bool {
    u.determinant().abs().is_one()
}
