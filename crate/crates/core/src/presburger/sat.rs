//! Satisfiability of quantifier-free formulas: negation normal form, lazy
//! expansion into cubes, and an exact integer solver per cube.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CmpOp, Formula, PresburgerError};
use crate::diophantine::{find_integer_point, IntVector, IntegerProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Variables range over ℕ.
    NonNeg,
    /// Variables range over ℤ.
    AllInt,
}

/// Literals after normalisation.
#[derive(Clone, Debug)]
enum Lit {
    /// `Σ c·x + k ≥ 0`
    Ge(IntVector, BigInt),
    /// `Σ c·x + k = 0`
    Eq(IntVector, BigInt),
    /// `Σ c·x ≡ r (mod m)`
    Div(IntVector, BigInt, BigInt),
    /// `Σ c·x ≢ r (mod m)`
    NotDiv(IntVector, BigInt, BigInt),
}

enum Nnf {
    True,
    False,
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn neg(v: &[BigInt]) -> IntVector {
    v.iter().map(|c| -c).collect()
}

fn lin_nnf(coeffs: &IntVector, op: CmpOp, bound: &BigInt) -> Nnf {
    let one = BigInt::one();
    match op {
        CmpOp::Le => Nnf::Lit(Lit::Ge(neg(coeffs), bound.clone())),
        CmpOp::Lt => Nnf::Lit(Lit::Ge(neg(coeffs), bound - &one)),
        CmpOp::Ge => Nnf::Lit(Lit::Ge(coeffs.clone(), -bound)),
        CmpOp::Gt => Nnf::Lit(Lit::Ge(coeffs.clone(), -bound - &one)),
        CmpOp::Eq => Nnf::Lit(Lit::Eq(coeffs.clone(), -bound)),
        CmpOp::Ne => Nnf::Or(vec![
            lin_nnf(coeffs, CmpOp::Lt, bound),
            lin_nnf(coeffs, CmpOp::Gt, bound),
        ]),
    }
}

fn to_nnf(f: &Formula, positive: bool) -> Nnf {
    match (f, positive) {
        (Formula::True, true) | (Formula::False, false) => Nnf::True,
        (Formula::True, false) | (Formula::False, true) => Nnf::False,
        (Formula::Lin(a), _) => {
            let op = if positive { a.op } else { a.op.negate() };
            lin_nnf(&a.coeffs, op, &a.bound)
        }
        (Formula::Mod(a), true) => Nnf::Lit(Lit::Div(
            a.coeffs.clone(),
            a.modulus.clone(),
            a.residue.clone(),
        )),
        (Formula::Mod(a), false) => Nnf::Lit(Lit::NotDiv(
            a.coeffs.clone(),
            a.modulus.clone(),
            a.residue.clone(),
        )),
        (Formula::Not(g), p) => to_nnf(g, !p),
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            Nnf::And(vec![to_nnf(a, positive), to_nnf(b, positive)])
        }
        (Formula::Or(a, b), true) | (Formula::And(a, b), false) => {
            Nnf::Or(vec![to_nnf(a, positive), to_nnf(b, positive)])
        }
    }
}

/// Depth-first expansion of the NNF into cubes; each complete cube is
/// handed to the integer solver. Only one cube is materialised at a time.
fn search<'a>(
    pending: &mut Vec<&'a Nnf>,
    cube: &mut Vec<&'a Lit>,
    dim: usize,
    domain: Domain,
) -> Option<IntVector> {
    let Some(next) = pending.pop() else {
        return solve_cube(cube, dim, domain);
    };
    let result = match next {
        Nnf::True => search(pending, cube, dim, domain),
        Nnf::False => None,
        Nnf::Lit(l) => {
            cube.push(l);
            let r = search(pending, cube, dim, domain);
            cube.pop();
            r
        }
        Nnf::And(items) => {
            let before = pending.len();
            pending.extend(items.iter().rev());
            let r = search(pending, cube, dim, domain);
            pending.truncate(before);
            r
        }
        Nnf::Or(items) => items.iter().find_map(|item| {
            pending.push(item);
            let r = search(pending, cube, dim, domain);
            pending.pop();
            r
        }),
    };
    pending.push(next);
    result
}

fn padded(coeffs: &[BigInt], width: usize) -> IntVector {
    let mut v = coeffs.to_vec();
    v.resize(width, BigInt::zero());
    v
}

fn solve_cube(cube: &[&Lit], dim: usize, domain: Domain) -> Option<IntVector> {
    // Fresh variables: one quotient per divisibility literal, plus a
    // remainder for each negated one.
    let extra: usize = cube
        .iter()
        .map(|l| match l {
            Lit::Div(..) => 1,
            Lit::NotDiv(..) => 2,
            _ => 0,
        })
        .sum();
    let width = dim + extra;
    let mut prob = IntegerProblem::new(width);
    let mut fresh = dim;
    for lit in cube {
        match lit {
            Lit::Ge(c, k) => prob.add_ge(padded(c, width), k.clone()),
            Lit::Eq(c, k) => prob.add_eq(padded(c, width), k.clone()),
            Lit::Div(c, m, r) => {
                // Σc·x − m·q − r = 0
                let mut row = padded(c, width);
                row[fresh] = -m.clone();
                fresh += 1;
                prob.add_eq(row, -r.clone());
            }
            Lit::NotDiv(c, m, r) => {
                // Σc·x − m·q − r − j = 0 with 1 ≤ j ≤ m − 1
                let mut row = padded(c, width);
                row[fresh] = -m.clone();
                row[fresh + 1] = -BigInt::one();
                prob.add_eq(row, -r.clone());
                let mut lo = vec![BigInt::zero(); width];
                lo[fresh + 1] = BigInt::one();
                prob.add_ge(lo, -BigInt::one());
                let mut hi = vec![BigInt::zero(); width];
                hi[fresh + 1] = -BigInt::one();
                prob.add_ge(hi, m - BigInt::one());
                fresh += 2;
            }
        }
    }
    if domain == Domain::NonNeg {
        for i in 0..dim {
            let mut row = vec![BigInt::zero(); width];
            row[i] = BigInt::one();
            prob.add_ge(row, BigInt::zero());
        }
    }
    let mut model = find_integer_point(&prob)?;
    model.truncate(dim);
    Some(model)
}

/// A model of `f` over `dim` variables (`dim ≥ f.num_vars()`), or `None` if
/// there is none. Complete for the quantifier-free fragment.
pub fn satisfiable_in(
    f: &Formula,
    dim: usize,
    domain: Domain,
) -> Result<Option<IntVector>, PresburgerError> {
    if f.num_vars() > dim {
        return Err(PresburgerError::DimensionMismatch {
            needed: f.num_vars(),
            found: dim,
        });
    }
    let nnf = to_nnf(f, true);
    let model = search(&mut vec![&nnf], &mut Vec::new(), dim, domain);
    if let Some(m) = &model {
        debug_assert!(f.eval(m).unwrap_or(false), "solver returned a non-model");
    }
    Ok(model)
}

/// [`satisfiable_in`] with the dimension taken from the formula itself.
pub fn satisfiable(f: &Formula, domain: Domain) -> Option<IntVector> {
    satisfiable_in(f, f.num_vars(), domain).expect("dimension from formula")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::int_vec;
    use crate::presburger::parse;

    #[test]
    fn examples() {
        let f = parse("x1 >= 0 && x1 <= -1").unwrap();
        assert_eq!(satisfiable(&f, Domain::AllInt), None);
        let g = parse("x2 <= x1 + 2 && x1 >= 1 && x2 >= 2 && !(x2 - 2 <= x1 + 1)").unwrap();
        assert_eq!(satisfiable(&g, Domain::NonNeg), None);
        let h = parse("(x1 mod 2 = 1) && x1 >= 10").unwrap();
        let m = satisfiable(&h, Domain::NonNeg).unwrap();
        assert!(h.eval(&m).unwrap());
    }

    #[test]
    fn invariance_query_matches_exhaustive_search() {
        let g = parse("x2 <= x1 + 2 && x1 >= 1 && x2 >= 2 && !(x2 - 2 <= x1 + 1)").unwrap();
        for x in 0..=100 {
            for y in 0..=100 {
                assert!(!g.eval(&int_vec(&[x, y])).unwrap());
            }
        }
    }

    #[test]
    fn negated_divisibility() {
        let f = parse("!((x1) mod 3 = 0) && x1 >= 6 && x1 <= 6").unwrap();
        assert_eq!(satisfiable(&f, Domain::NonNeg), None);
        let f = parse("!((x1) mod 3 = 0) && x1 >= 6 && x1 <= 7").unwrap();
        assert_eq!(satisfiable(&f, Domain::NonNeg), Some(int_vec(&[7])));
    }

    #[test]
    fn domains_differ() {
        let f = parse("x1 + x2 <= -1").unwrap();
        assert_eq!(satisfiable(&f, Domain::NonNeg), None);
        assert!(satisfiable(&f, Domain::AllInt).is_some());
    }

    #[test]
    fn disequalities_and_constants() {
        let f = parse("x1 != 0 && x1 <= 0 && true").unwrap();
        assert!(satisfiable(&f, Domain::NonNeg).is_none());
        assert_eq!(satisfiable(&f, Domain::AllInt).map(|m| m[0] < BigInt::zero()), Some(true));
        assert!(satisfiable(&Formula::False, Domain::AllInt).is_none());
        assert_eq!(satisfiable(&Formula::True, Domain::AllInt), Some(vec![]));
        assert!(satisfiable_in(&f, 0, Domain::AllInt).is_err());
    }
}
