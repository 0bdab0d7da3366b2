//! Integer feasibility of conjunctions of linear constraints (Omega test).
//!
//! Equalities are eliminated exactly (unit-coefficient substitution, or the
//! Hermite parametrisation of the solution lattice). Inequalities are
//! eliminated by Fourier–Motzkin; when an elimination is not exact the dark
//! shadow is tried first, then the real shadow, then the finitely many
//! splinters. Every step recovers a concrete model on the way back out.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{dot, integer_solutions, IntMatrix, IntVector};

/// `coeffs·x + constant`, read as `= 0` or `≥ 0` depending on where it sits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearConstraint {
    pub coeffs: IntVector,
    pub constant: BigInt,
}

impl LinearConstraint {
    pub fn new(coeffs: IntVector, constant: BigInt) -> Self {
        LinearConstraint { coeffs, constant }
    }

    fn value(&self, x: &[BigInt]) -> BigInt {
        dot(&self.coeffs, x) + &self.constant
    }
}

#[derive(Clone, Debug, Default)]
pub struct IntegerProblem {
    pub num_vars: usize,
    pub equalities: Vec<LinearConstraint>,
    pub inequalities: Vec<LinearConstraint>,
}

impl IntegerProblem {
    pub fn new(num_vars: usize) -> Self {
        IntegerProblem {
            num_vars,
            ..Default::default()
        }
    }

    pub fn add_eq(&mut self, coeffs: IntVector, constant: BigInt) {
        self.equalities.push(self.padded(coeffs, constant));
    }

    pub fn add_ge(&mut self, coeffs: IntVector, constant: BigInt) {
        self.inequalities.push(self.padded(coeffs, constant));
    }

    fn padded(&self, mut coeffs: IntVector, constant: BigInt) -> LinearConstraint {
        assert!(coeffs.len() <= self.num_vars, "constraint wider than problem");
        coeffs.resize(self.num_vars, BigInt::zero());
        LinearConstraint { coeffs, constant }
    }

    /// True iff `x` satisfies every constraint.
    pub fn satisfied_by(&self, x: &[BigInt]) -> bool {
        self.equalities.iter().all(|c| c.value(x).is_zero())
            && self.inequalities.iter().all(|c| !c.value(x).is_negative())
    }
}

/// Some integer point satisfying the problem, or `None` iff there is none.
pub fn find_integer_point(problem: &IntegerProblem) -> Option<IntVector> {
    let model = solve(
        problem.num_vars,
        problem.equalities.clone(),
        problem.inequalities.clone(),
    )?;
    debug_assert!(problem.satisfied_by(&model), "omega produced a non-model");
    Some(model)
}

fn solve(
    n: usize,
    eqs: Vec<LinearConstraint>,
    ineqs: Vec<LinearConstraint>,
) -> Option<IntVector> {
    let mut live_eqs = Vec::new();
    for e in eqs {
        if let Some(e) = normalize_eq(e)? {
            live_eqs.push(e);
        }
    }
    if !live_eqs.is_empty() {
        return solve_with_equalities(n, live_eqs, ineqs);
    }

    // Tightest constant per coefficient vector.
    let mut table: BTreeMap<IntVector, BigInt> = BTreeMap::new();
    for c in ineqs {
        let Some(c) = normalize_ineq(c)? else {
            continue;
        };
        table
            .entry(c.coeffs)
            .and_modify(|k| {
                if c.constant < *k {
                    *k = c.constant.clone()
                }
            })
            .or_insert(c.constant);
    }
    let mut implied = Vec::new();
    for (coeffs, k) in &table {
        let neg: IntVector = coeffs.iter().map(|v| -v).collect();
        if let Some(k2) = table.get(&neg) {
            let slack = k + k2;
            if slack.is_negative() {
                return None;
            }
            if slack.is_zero() && coeffs > &neg {
                implied.push(LinearConstraint::new(coeffs.clone(), k.clone()));
            }
        }
    }
    let rows: Vec<LinearConstraint> = table
        .into_iter()
        .map(|(coeffs, constant)| LinearConstraint { coeffs, constant })
        .collect();
    if !implied.is_empty() {
        return solve(n, implied, rows);
    }
    if rows.is_empty() {
        return Some(vec![BigInt::zero(); n]);
    }

    let mut lowers = vec![0usize; n];
    let mut uppers = vec![0usize; n];
    let mut exact_lower = vec![true; n];
    let mut exact_upper = vec![true; n];
    for r in &rows {
        for (k, a) in r.coeffs.iter().enumerate() {
            if a.is_positive() {
                lowers[k] += 1;
                exact_lower[k] &= a.is_one();
            } else if a.is_negative() {
                uppers[k] += 1;
                exact_upper[k] &= (-a).is_one();
            }
        }
    }

    // A variable bounded on one side only can always be satisfied last.
    if let Some(k) = (0..n).find(|&k| (lowers[k] == 0) != (uppers[k] == 0)) {
        let (with, without): (Vec<_>, Vec<_>) =
            rows.into_iter().partition(|r| !r.coeffs[k].is_zero());
        let mut model = solve(n, Vec::new(), without)?;
        model[k] = pick_value(k, &with, &model);
        return Some(model);
    }

    let present: Vec<usize> = (0..n).filter(|&k| lowers[k] > 0).collect();
    let cost = |k: &usize| lowers[*k] * uppers[*k];
    let exact = present
        .iter()
        .copied()
        .filter(|&k| exact_lower[k] || exact_upper[k])
        .min_by_key(cost);
    let k = exact.unwrap_or_else(|| {
        present
            .iter()
            .copied()
            .min_by_key(cost)
            .expect("a constrained variable")
    });

    let (lower_rows, upper_rows, others) = split_on(&rows, k);
    if exact.is_some() {
        let shadow = shadow_rows(&lower_rows, &upper_rows, &others, k, false);
        let mut model = solve(n, Vec::new(), shadow)?;
        model[k] = pick_value(k, &rows, &model);
        return Some(model);
    }

    let dark = shadow_rows(&lower_rows, &upper_rows, &others, k, true);
    if let Some(mut model) = solve(n, Vec::new(), dark) {
        model[k] = pick_value(k, &rows, &model);
        return Some(model);
    }
    let real = shadow_rows(&lower_rows, &upper_rows, &others, k, false);
    solve(n, Vec::new(), real)?;

    // Splinters: some lower bound is nearly tight.
    let max_upper = upper_rows
        .iter()
        .map(|r| -&r.coeffs[k])
        .max()
        .expect("upper bound");
    for low in &lower_rows {
        let a = &low.coeffs[k];
        let limit = (a * &max_upper - a - &max_upper).div_floor(&max_upper);
        let mut i = BigInt::zero();
        while i <= limit {
            let eq = LinearConstraint::new(low.coeffs.clone(), &low.constant - &i);
            if let Some(model) = solve(n, vec![eq], rows.clone()) {
                return Some(model);
            }
            i += 1;
        }
    }
    None
}

fn solve_with_equalities(
    n: usize,
    eqs: Vec<LinearConstraint>,
    ineqs: Vec<LinearConstraint>,
) -> Option<IntVector> {
    // Unit coefficient: substitute x_k directly.
    let unit = eqs.iter().enumerate().find_map(|(ei, e)| {
        e.coeffs
            .iter()
            .position(|a| a.abs().is_one())
            .map(|k| (ei, k))
    });
    if let Some((ei, k)) = unit {
        let e = &eqs[ei];
        // a_k·x_k + rest = 0 with a_k = ±1  ⇒  x_k = −a_k·rest
        let sign = e.coeffs[k].clone();
        let mut expr = LinearConstraint::new(
            e.coeffs.iter().map(|v| -(&sign * v)).collect(),
            -(&sign * &e.constant),
        );
        expr.coeffs[k] = BigInt::zero();
        let subst = |c: &LinearConstraint| substitute(c, k, &expr);
        let rest_eqs: Vec<_> = eqs
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != ei)
            .map(|(_, c)| subst(c))
            .collect();
        let rest_ineqs: Vec<_> = ineqs.iter().map(subst).collect();
        let mut model = solve(n, rest_eqs, rest_ineqs)?;
        model[k] = expr.value(&model);
        return Some(model);
    }

    // General case: x = x0 + K·y over the solution lattice.
    let a = IntMatrix::from_rows(n, eqs.iter().map(|e| e.coeffs.clone()).collect());
    let b: IntVector = eqs.iter().map(|e| -&e.constant).collect();
    let lattice = integer_solutions(&a, &b)?;
    let f = lattice.kernel.len();
    let reduced: Vec<LinearConstraint> = ineqs
        .iter()
        .map(|c| LinearConstraint {
            coeffs: lattice.kernel.iter().map(|kv| dot(&c.coeffs, kv)).collect(),
            constant: c.value(&lattice.particular),
        })
        .collect();
    let y = solve(f, Vec::new(), reduced)?;
    let mut x = lattice.particular.clone();
    for (yi, kv) in y.iter().zip(&lattice.kernel) {
        for (xj, kj) in x.iter_mut().zip(kv) {
            *xj += yi * kj;
        }
    }
    Some(x)
}

fn substitute(c: &LinearConstraint, k: usize, expr: &LinearConstraint) -> LinearConstraint {
    let f = &c.coeffs[k];
    if f.is_zero() {
        return c.clone();
    }
    let mut coeffs: IntVector = c
        .coeffs
        .iter()
        .zip(&expr.coeffs)
        .map(|(ci, ei)| ci + f * ei)
        .collect();
    coeffs[k] = BigInt::zero();
    LinearConstraint {
        coeffs,
        constant: &c.constant + f * &expr.constant,
    }
}

/// Returns `None` on a contradiction, `Some(None)` for a trivially true row.
fn normalize_eq(mut c: LinearConstraint) -> Option<Option<LinearConstraint>> {
    let g = content(&c.coeffs);
    if g.is_zero() {
        return if c.constant.is_zero() { Some(None) } else { None };
    }
    if !c.constant.is_multiple_of(&g) {
        return None;
    }
    for v in c.coeffs.iter_mut() {
        *v = &*v / &g;
    }
    c.constant = &c.constant / &g;
    Some(Some(c))
}

fn normalize_ineq(mut c: LinearConstraint) -> Option<Option<LinearConstraint>> {
    let g = content(&c.coeffs);
    if g.is_zero() {
        return if c.constant.is_negative() { None } else { Some(None) };
    }
    for v in c.coeffs.iter_mut() {
        *v = &*v / &g;
    }
    c.constant = c.constant.div_floor(&g);
    Some(Some(c))
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

type Split = (
    Vec<LinearConstraint>,
    Vec<LinearConstraint>,
    Vec<LinearConstraint>,
);

fn split_on(rows: &[LinearConstraint], k: usize) -> Split {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut other = Vec::new();
    for r in rows {
        if r.coeffs[k].is_positive() {
            lower.push(r.clone());
        } else if r.coeffs[k].is_negative() {
            upper.push(r.clone());
        } else {
            other.push(r.clone());
        }
    }
    (lower, upper, other)
}

fn shadow_rows(
    lower: &[LinearConstraint],
    upper: &[LinearConstraint],
    others: &[LinearConstraint],
    k: usize,
    dark: bool,
) -> Vec<LinearConstraint> {
    let mut out = others.to_vec();
    for lo in lower {
        let a = &lo.coeffs[k];
        for up in upper {
            let b = -&up.coeffs[k];
            // b·(a·x + L) + a·(−b·x + U) ≥ 0, tightened by (a−1)(b−1) for the dark shadow.
            let coeffs: IntVector = lo
                .coeffs
                .iter()
                .zip(&up.coeffs)
                .map(|(l, u)| &b * l + a * u)
                .collect();
            let mut constant = &b * &lo.constant + a * &up.constant;
            if dark {
                constant -= (a - BigInt::one()) * (&b - BigInt::one());
            }
            out.push(LinearConstraint { coeffs, constant });
        }
    }
    out
}

/// A value for `x_k` satisfying every row mentioning it, given the other
/// coordinates of `model`. Prefers the least feasible value.
fn pick_value(k: usize, rows: &[LinearConstraint], model: &[BigInt]) -> BigInt {
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for r in rows {
        let a = &r.coeffs[k];
        if a.is_zero() {
            continue;
        }
        let rest = r.value(model) - a * &model[k];
        if a.is_positive() {
            // a·x ≥ −rest
            let bound = (-rest).div_ceil(a);
            if lo.as_ref().is_none_or(|l| bound > *l) {
                lo = Some(bound);
            }
        } else {
            let b = -a;
            let bound = rest.div_floor(&b);
            if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        debug_assert!(l <= h, "empty integer interval during model recovery");
    }
    lo.or(hi).unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::int_vec;
    use proptest::prelude::*;

    fn problem(n: usize, eqs: &[(&[i64], i64)], ges: &[(&[i64], i64)]) -> IntegerProblem {
        let mut p = IntegerProblem::new(n);
        for (c, k) in eqs {
            p.add_eq(int_vec(c), BigInt::from(*k));
        }
        for (c, k) in ges {
            p.add_ge(int_vec(c), BigInt::from(*k));
        }
        p
    }

    #[test]
    fn empty_interval() {
        // x ≥ 0 ∧ x ≤ −1
        let p = problem(1, &[], &[(&[1], 0), (&[-1], -1)]);
        assert_eq!(find_integer_point(&p), None);
    }

    #[test]
    fn parity_gap() {
        // 2x = 2y + 1 has no integer solution
        let p = problem(2, &[(&[2, -2], -1)], &[]);
        assert_eq!(find_integer_point(&p), None);
    }

    #[test]
    fn dark_shadow_gap() {
        // 3 ≤ 2x ≤ 3 has a real but no integer solution.
        let p = problem(1, &[], &[(&[2], -3), (&[-2], 3)]);
        assert_eq!(find_integer_point(&p), None);
        // 27 ≤ 11x + 13y ≤ 45, −10 ≤ 7x − 9y ≤ 4  (Pugh's example: no integer point)
        let p = problem(
            2,
            &[],
            &[
                (&[11, 13], -27),
                (&[-11, -13], 45),
                (&[7, -9], 10),
                (&[-7, 9], 4),
            ],
        );
        assert_eq!(find_integer_point(&p), None);
    }

    #[test]
    fn models_satisfy() {
        let p = problem(
            3,
            &[(&[3, 5, -7], -1)],
            &[(&[1, 0, 0], 0), (&[0, 1, 0], 0), (&[0, 0, 1], -4)],
        );
        let m = find_integer_point(&p).expect("feasible");
        assert!(p.satisfied_by(&m));
    }

    fn brute(p: &IntegerProblem, bound: i64) -> bool {
        let n = p.num_vars;
        let mut x = vec![-bound; n];
        loop {
            if p.satisfied_by(&int_vec(&x)) {
                return true;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return false;
                }
                x[k] += 1;
                if x[k] <= bound {
                    break;
                }
                x[k] = -bound;
                k += 1;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        /// Boxed problems (every variable within [−6, 6]) so brute force is exact.
        #[test]
        fn agrees_with_brute_force(
            n in 1usize..=3,
            rows in proptest::collection::vec((proptest::collection::vec(-5i64..=5, 3), -12i64..=12, any::<bool>()), 1..=4),
        ) {
            let mut p = IntegerProblem::new(n);
            for k in 0..n {
                let mut e = vec![0i64; n];
                e[k] = 1;
                p.add_ge(int_vec(&e), BigInt::from(6));
                e[k] = -1;
                p.add_ge(int_vec(&e), BigInt::from(6));
            }
            for (c, k, is_eq) in rows {
                let c = int_vec(&c[..n]);
                if is_eq { p.add_eq(c, BigInt::from(k)) } else { p.add_ge(c, BigInt::from(k)) }
            }
            match find_integer_point(&p) {
                Some(m) => prop_assert!(p.satisfied_by(&m)),
                None => prop_assert!(!brute(&p, 6)),
            }
        }
    }
}
