//! Quantifier-free Presburger formulas over integer vectors `x1..xn`.

mod enumerate;
mod parse;
mod sat;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::diophantine::IntVector;

pub use enumerate::{enumerate_formulas, FormulaEnumerator};
pub use parse::parse;
pub use sat::{satisfiable, satisfiable_in, Domain};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresburgerError {
    #[error("syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("formula mentions x{needed} but the point has dimension {found}")]
    DimensionMismatch { needed: usize, found: usize },
    #[error("modulus must be at least 2 and the residue in [0, modulus)")]
    InvalidModulus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Le,
    Lt,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Gt => CmpOp::Le,
        }
    }

    pub fn holds(self, lhs: &BigInt, rhs: &BigInt) -> bool {
        match self {
            CmpOp::Le => lhs <= rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }
}

fn trim(mut coeffs: IntVector) -> IntVector {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

fn linear_value(coeffs: &[BigInt], point: &[BigInt]) -> BigInt {
    coeffs.iter().zip(point).map(|(c, x)| c * x).sum()
}

/// `Σ coeffs[i]·x(i+1) op bound`. Trailing zero coefficients are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinAtom {
    pub coeffs: IntVector,
    pub op: CmpOp,
    pub bound: BigInt,
}

impl LinAtom {
    pub fn new(coeffs: IntVector, op: CmpOp, bound: BigInt) -> Self {
        LinAtom {
            coeffs: trim(coeffs),
            op,
            bound,
        }
    }
}

/// `Σ coeffs[i]·x(i+1) ≡ residue (mod modulus)` with `modulus ≥ 2`, `0 ≤ residue < modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModAtom {
    pub coeffs: IntVector,
    pub modulus: BigInt,
    pub residue: BigInt,
}

impl ModAtom {
    pub fn new(coeffs: IntVector, modulus: BigInt, residue: BigInt) -> Result<Self, PresburgerError> {
        if modulus < BigInt::from(2) || residue.is_negative() || residue >= modulus {
            return Err(PresburgerError::InvalidModulus);
        }
        Ok(ModAtom {
            coeffs: trim(coeffs),
            modulus,
            residue,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Lin(LinAtom),
    Mod(ModAtom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Linear atom from machine integers.
    pub fn lin(coeffs: &[i64], op: CmpOp, bound: i64) -> Formula {
        Formula::Lin(LinAtom::new(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            op,
            BigInt::from(bound),
        ))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Conjunction of all items; `True` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Largest variable index mentioned (1-based), 0 if none.
    pub fn num_vars(&self) -> usize {
        match self {
            Formula::True | Formula::False => 0,
            Formula::Lin(a) => a.coeffs.len(),
            Formula::Mod(a) => a.coeffs.len(),
            Formula::Not(f) => f.num_vars(),
            Formula::And(a, b) | Formula::Or(a, b) => a.num_vars().max(b.num_vars()),
        }
    }

    pub fn eval(&self, point: &[BigInt]) -> Result<bool, PresburgerError> {
        let needed = self.num_vars();
        if point.len() < needed {
            return Err(PresburgerError::DimensionMismatch {
                needed,
                found: point.len(),
            });
        }
        Ok(self.eval_unchecked(point))
    }

    fn eval_unchecked(&self, point: &[BigInt]) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Lin(a) => a.op.holds(&linear_value(&a.coeffs, point), &a.bound),
            Formula::Mod(a) => {
                (linear_value(&a.coeffs, point) - &a.residue)
                    .mod_floor(&a.modulus)
                    .is_zero()
            }
            Formula::Not(f) => !f.eval_unchecked(point),
            Formula::And(a, b) => a.eval_unchecked(point) && b.eval_unchecked(point),
            Formula::Or(a, b) => a.eval_unchecked(point) || b.eval_unchecked(point),
        }
    }

    /// The formula `ψ(x + delta)`. Variables beyond `delta.len()` are not shifted.
    pub fn shift(&self, delta: &[BigInt]) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Lin(a) => Formula::Lin(LinAtom {
                coeffs: a.coeffs.clone(),
                op: a.op,
                bound: &a.bound - linear_value(&a.coeffs, delta),
            }),
            Formula::Mod(a) => Formula::Mod(ModAtom {
                coeffs: a.coeffs.clone(),
                modulus: a.modulus.clone(),
                residue: (&a.residue - linear_value(&a.coeffs, delta)).mod_floor(&a.modulus),
            }),
            Formula::Not(f) => Formula::not(f.shift(delta)),
            Formula::And(a, b) => Formula::and(a.shift(delta), b.shift(delta)),
            Formula::Or(a, b) => Formula::or(a.shift(delta), b.shift(delta)),
        }
    }

    /// Enumeration size: constants 0; a linear atom `1 + Σ|c| + |bound|`; a
    /// divisibility atom `1 + Σ|c| + modulus`; each connective 1 plus its children.
    pub fn size(&self) -> usize {
        fn mag(v: &BigInt) -> usize {
            v.abs().to_usize().unwrap_or(usize::MAX)
        }
        fn sum(cs: &[BigInt]) -> usize {
            cs.iter().map(mag).fold(0, usize::saturating_add)
        }
        match self {
            Formula::True | Formula::False => 0,
            Formula::Lin(a) => 1usize.saturating_add(sum(&a.coeffs)).saturating_add(mag(&a.bound)),
            Formula::Mod(a) => 1usize.saturating_add(sum(&a.coeffs)).saturating_add(mag(&a.modulus)),
            Formula::Not(f) => 1usize.saturating_add(f.size()),
            Formula::And(a, b) | Formula::Or(a, b) => {
                1usize.saturating_add(a.size()).saturating_add(b.size())
            }
        }
    }
}

fn write_linear(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt]) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let var = i + 1;
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if mag.is_one() {
            write!(f, "x{var}")?;
        } else {
            write!(f, "{mag}*x{var}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Lin(a) => {
                write_linear(f, &a.coeffs)?;
                write!(f, " {} {}", a.op.symbol(), a.bound)
            }
            Formula::Mod(a) => {
                write!(f, "(")?;
                write_linear(f, &a.coeffs)?;
                write!(f, ") mod {} = {}", a.modulus, a.residue)
            }
            Formula::Not(inner) => write!(f, "!({inner})"),
            Formula::And(a, b) => {
                let left_paren = matches!(**a, Formula::Or(..));
                let right_paren = matches!(**b, Formula::Or(..) | Formula::And(..));
                write_child(f, a, left_paren)?;
                write!(f, " && ")?;
                write_child(f, b, right_paren)
            }
            Formula::Or(a, b) => {
                let left_paren = matches!(**a, Formula::And(..));
                let right_paren = matches!(**b, Formula::Or(..) | Formula::And(..));
                write_child(f, a, left_paren)?;
                write!(f, " || ")?;
                write_child(f, b, right_paren)
            }
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Formula, paren: bool) -> fmt::Result {
    if paren {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::int_vec;

    #[test]
    fn eval_examples() {
        let f = parse("x2 <= x1 + 2").unwrap();
        assert!(f.eval(&int_vec(&[0, 2])).unwrap());
        assert!(!f.eval(&int_vec(&[0, 3])).unwrap());
        assert!(Formula::True.eval(&int_vec(&[7])).unwrap());
        assert!(matches!(
            f.eval(&int_vec(&[1])),
            Err(PresburgerError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn shift_substitutes() {
        let f = parse("x2 <= x1 + 2 && (x1 mod 3 = 1)").unwrap();
        let delta = int_vec(&[-1, -2]);
        let g = f.shift(&delta);
        for x in 0..8 {
            for y in 0..8 {
                let p = int_vec(&[x, y]);
                let moved: IntVector = p.iter().zip(&delta).map(|(a, b)| a + b).collect();
                assert_eq!(g.eval(&p).unwrap(), f.eval(&moved).unwrap());
            }
        }
    }

    #[test]
    fn sizes() {
        assert_eq!(Formula::True.size(), 0);
        assert_eq!(parse("x2 <= x1 + 2").unwrap().size(), 5);
        assert_eq!(parse("(x1 mod 2 = 1)").unwrap().size(), 4);
        assert_eq!(parse("!(x1 = 0)").unwrap().size(), 3);
    }

    #[test]
    fn modulus_validation() {
        assert!(ModAtom::new(int_vec(&[1]), BigInt::from(1), BigInt::zero()).is_err());
        assert!(ModAtom::new(int_vec(&[1]), BigInt::from(3), BigInt::from(3)).is_err());
        assert!(ModAtom::new(int_vec(&[1]), BigInt::from(3), BigInt::from(2)).is_ok());
    }
}
