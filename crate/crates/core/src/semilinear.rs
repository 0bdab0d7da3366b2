//! Linear and semilinear subsets of ℤⁿ: membership, intersection, monoid
//! interior and dimension.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::diophantine::{
    find_integer_point, hilbert_basis, inhomogeneous_minimal_solutions, rank,
    rational_feasible_strict, IntMatrix, IntVector, IntegerProblem,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemilinearError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// `base + periods*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSet {
    pub base: IntVector,
    pub periods: Vec<IntVector>,
}

impl LinearSet {
    pub fn new(base: IntVector, periods: Vec<IntVector>) -> Result<Self, SemilinearError> {
        for p in &periods {
            check_dim(base.len(), p.len())?;
        }
        Ok(LinearSet { base, periods })
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }
}

impl fmt::Display for LinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "base {} periods {{", fmt_vec(&self.base))?;
        for (i, p) in self.periods.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", fmt_vec(p))?;
        }
        write!(f, "}}")
    }
}

/// A finite union of linear sets; no components means ∅.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SemilinearSet {
    pub components: Vec<LinearSet>,
}

impl SemilinearSet {
    pub fn empty() -> Self {
        SemilinearSet::default()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.components
            .iter()
            .any(|l| l.dim() == v.len() && member_linear(l, v).unwrap_or(false))
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "empty");
        }
        for (i, l) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Dimension of a semilinear set; the empty set has dimension −∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    NegInfinity,
    Finite(usize),
}

impl PartialOrd for Dim {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dim {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Dim::NegInfinity, Dim::NegInfinity) => Ordering::Equal,
            (Dim::NegInfinity, _) => Ordering::Less,
            (_, Dim::NegInfinity) => Ordering::Greater,
            (Dim::Finite(a), Dim::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::NegInfinity => write!(f, "-inf"),
            Dim::Finite(d) => write!(f, "{d}"),
        }
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), SemilinearError> {
    if expected != found {
        return Err(SemilinearError::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn fmt_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Matrix whose columns are the given vectors (`n` rows).
fn columns_matrix(n: usize, cols: &[&IntVector]) -> IntMatrix {
    let rows = (0..n)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    IntMatrix::from_rows(cols.len(), rows)
}

/// Decides `v ∈ base + periods*` by integer feasibility of `Σ λᵢ·pᵢ = v − base`, `λ ≥ 0`.
pub fn member_linear(l: &LinearSet, v: &[BigInt]) -> Result<bool, SemilinearError> {
    check_dim(l.dim(), v.len())?;
    let k = l.periods.len();
    let mut prob = IntegerProblem::new(k);
    for i in 0..l.dim() {
        // Σ λ p[i] + (b[i] − v[i]) = 0
        prob.add_eq(
            l.periods.iter().map(|p| p[i].clone()).collect(),
            &l.base[i] - &v[i],
        );
    }
    for j in 0..k {
        let mut unit = vec![BigInt::zero(); k];
        unit[j] = BigInt::from(1);
        prob.add_ge(unit, BigInt::zero());
    }
    Ok(find_integer_point(&prob).is_some())
}

/// Decides `v ∈ att(periods*)`: `v` lies in the monoid and is a combination
/// of all periods with strictly positive rational coefficients.
pub fn interior_contains(periods: &[IntVector], v: &[BigInt]) -> Result<bool, SemilinearError> {
    for p in periods {
        check_dim(v.len(), p.len())?;
    }
    if periods.is_empty() {
        return Ok(v.iter().all(Zero::is_zero));
    }
    let zero_base = LinearSet {
        base: vec![BigInt::zero(); v.len()],
        periods: periods.to_vec(),
    };
    if !member_linear(&zero_base, v)? {
        return Ok(false);
    }
    // Σ λᵢ pᵢ − τ·v = 0 with λ, τ > 0, i.e. v = Σ (λᵢ/τ) pᵢ.
    let neg_v: IntVector = v.iter().map(|x| -x).collect();
    let mut cols: Vec<&IntVector> = periods.iter().collect();
    cols.push(&neg_v);
    let a = columns_matrix(v.len(), &cols);
    let strict: Vec<usize> = (0..cols.len()).collect();
    Ok(rational_feasible_strict(&a, &strict, &[]).is_some())
}

/// A finite `P` with `P* = P1* ∩ P2*`, read off the Hilbert basis of
/// `Σ λ1ⱼ·p1ⱼ − Σ λ2ⱼ·p2ⱼ = 0`.
pub fn intersect_monoids(
    p1: &[IntVector],
    p2: &[IntVector],
) -> Result<Vec<IntVector>, SemilinearError> {
    let n = match p1.first().or(p2.first()) {
        Some(v) => v.len(),
        None => return Ok(Vec::new()),
    };
    for p in p1.iter().chain(p2) {
        check_dim(n, p.len())?;
    }
    let a = difference_matrix(n, p1, p2);
    Ok(project_periods(n, p1, &hilbert_basis(&a)))
}

fn difference_matrix(n: usize, p1: &[IntVector], p2: &[IntVector]) -> IntMatrix {
    let negated: Vec<IntVector> = p2.iter().map(|p| p.iter().map(|x| -x).collect()).collect();
    let cols: Vec<&IntVector> = p1.iter().chain(&negated).collect();
    columns_matrix(n, &cols)
}

fn combine(n: usize, vectors: &[IntVector], lambda: &[BigInt]) -> IntVector {
    let mut out = vec![BigInt::zero(); n];
    for (p, l) in vectors.iter().zip(lambda) {
        if l.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(p) {
            *o += l * x;
        }
    }
    out
}

fn project_periods(n: usize, p1: &[IntVector], basis: &[IntVector]) -> Vec<IntVector> {
    let set: BTreeSet<IntVector> = basis
        .iter()
        .map(|z| combine(n, p1, &z[..p1.len()]))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    set.into_iter().collect()
}

/// `L1 ∩ L2` as `B + P*`, one linear component per base vector in `B`.
pub fn intersect_linear(
    l1: &LinearSet,
    l2: &LinearSet,
) -> Result<SemilinearSet, SemilinearError> {
    let n = l1.dim();
    check_dim(n, l2.dim())?;
    let a = difference_matrix(n, &l1.periods, &l2.periods);
    let rhs: IntVector = l2.base.iter().zip(&l1.base).map(|(x, y)| x - y).collect();
    let (particular, homogeneous) = inhomogeneous_minimal_solutions(&a, &rhs);
    let periods = project_periods(n, &l1.periods, &homogeneous);
    let bases: BTreeSet<IntVector> = particular
        .iter()
        .map(|z| {
            let off = combine(n, &l1.periods, &z[..l1.periods.len()]);
            l1.base.iter().zip(&off).map(|(b, o)| b + o).collect()
        })
        .collect();
    Ok(SemilinearSet {
        components: bases
            .into_iter()
            .map(|base| LinearSet {
                base,
                periods: periods.clone(),
            })
            .collect(),
    })
}

/// Rank of the period vectors.
pub fn dim_linear(l: &LinearSet) -> usize {
    rank(&l.periods)
}

pub fn dim_semilinear(s: &SemilinearSet) -> Dim {
    s.components
        .iter()
        .map(|l| Dim::Finite(dim_linear(l)))
        .max()
        .unwrap_or(Dim::NegInfinity)
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, SemilinearError> {
        Err(SemilinearError::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), SemilinearError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn int(&mut self) -> Result<BigInt, SemilinearError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+')))
            .count();
        match rest[..len].parse::<BigInt>() {
            Ok(v) => {
                self.pos += len;
                Ok(v)
            }
            Err(_) => self.err("expected an integer"),
        }
    }

    fn vector(&mut self) -> Result<IntVector, SemilinearError> {
        self.expect("(")?;
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            if self.eat(")") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn linear(&mut self) -> Result<LinearSet, SemilinearError> {
        self.expect("base")?;
        let base = self.vector()?;
        let mut periods = Vec::new();
        if self.eat("periods") {
            self.expect("{")?;
            if !self.eat("}") {
                loop {
                    let at = self.pos;
                    let p = self.vector()?;
                    if p.len() != base.len() {
                        self.pos = at;
                        return self.err("period dimension differs from base");
                    }
                    periods.push(p);
                    if self.eat("}") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
        }
        Ok(LinearSet { base, periods })
    }
}

/// Parses `base (0,0) periods {(1,0),(1,1)}`; the `periods` part may be omitted.
pub fn parse_linear(src: &str) -> Result<LinearSet, SemilinearError> {
    let mut c = Cursor { src, pos: 0 };
    let l = c.linear()?;
    c.skip_ws();
    if c.pos != src.len() {
        return c.err("trailing input");
    }
    Ok(l)
}

/// Parses `empty` or linear sets separated by `|`.
pub fn parse_semilinear(src: &str) -> Result<SemilinearSet, SemilinearError> {
    let mut c = Cursor { src, pos: 0 };
    if c.eat("empty") {
        c.skip_ws();
        if c.pos != src.len() {
            return c.err("trailing input");
        }
        return Ok(SemilinearSet::empty());
    }
    let mut components = vec![c.linear()?];
    while c.eat("|") {
        let at = c.pos;
        let l = c.linear()?;
        if l.dim() != components[0].dim() {
            c.pos = at;
            return c.err("components have different dimensions");
        }
        components.push(l);
    }
    c.skip_ws();
    if c.pos != src.len() {
        return c.err("trailing input");
    }
    Ok(SemilinearSet { components })
}
