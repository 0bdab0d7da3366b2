//! Inductive invariants, non-reachability certificates and separators, plus
//! the extension of a VAS by period letters.
//!
//! A VASS with more than one control state is handled by an extra variable
//! `x(n+1)` holding the state index; a transition `p -a-> q` then acts as the
//! guarded step `x(n+1) = p` with displacement `(δ(a), q − p)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::diophantine::IntVector;
use crate::presburger::{satisfiable_in, CmpOp, Domain, Formula, LinAtom, PresburgerError};
use crate::vas::{VasError, VasSystem, VassSystem};

/// Number of formula variables used for `sys`: its dimension, plus one for
/// the control state when there are several states.
pub fn embedding_dim(sys: &VassSystem) -> usize {
    if sys.num_states() > 1 {
        sys.dim() + 1
    } else {
        sys.dim()
    }
}

/// The point representing `(state, cfg)` for formulas over `sys`.
pub fn embed(sys: &VassSystem, state: usize, cfg: &[BigInt]) -> IntVector {
    let mut v = cfg.to_vec();
    if sys.num_states() > 1 {
        v.push(BigInt::from(state));
    }
    v
}

struct Step {
    label: String,
    guard: Option<(usize, BigInt)>,
    delta: IntVector,
}

fn steps(sys: &VassSystem) -> Vec<Step> {
    let multi = sys.num_states() > 1;
    let n = sys.dim();
    sys.transitions()
        .iter()
        .enumerate()
        .map(|(t, tr)| {
            let mut delta = sys.transition_displacement(t).clone();
            let name = sys.vas().action_name(tr.action);
            if multi {
                delta.push(BigInt::from(tr.to as i64 - tr.from as i64));
                Step {
                    label: format!("{} ({} -> {})", name, sys.states()[tr.from], sys.states()[tr.to]),
                    guard: Some((n, BigInt::from(tr.from))),
                    delta,
                }
            } else {
                Step {
                    label: name.to_string(),
                    guard: None,
                    delta,
                }
            }
        })
        .collect()
}

/// Outcome of an invariance check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invariance {
    Holds,
    /// `step` leaves (or, for backward checks, enters) the set from `witness`.
    Violated { step: String, witness: IntVector },
}

impl Invariance {
    pub fn holds(&self) -> bool {
        matches!(self, Invariance::Holds)
    }
}

fn unit_atom(dim: usize, var: usize, op: CmpOp, bound: BigInt) -> Formula {
    let mut c = vec![BigInt::zero(); dim];
    c[var] = BigInt::from(1);
    Formula::Lin(LinAtom::new(c, op, bound))
}

fn check_steps(psi: &Formula, sys: &VassSystem, forward: bool) -> Result<Invariance, PresburgerError> {
    let dim = embedding_dim(sys);
    if psi.num_vars() > dim {
        return Err(PresburgerError::DimensionMismatch {
            needed: psi.num_vars(),
            found: dim,
        });
    }
    for step in steps(sys) {
        let mut parts = Vec::new();
        // x + δ ≥ 0; x ≥ 0 comes from the domain
        for (i, d) in step.delta.iter().enumerate() {
            if *d < BigInt::zero() {
                parts.push(unit_atom(dim, i, CmpOp::Ge, -d));
            }
        }
        if let Some((var, value)) = &step.guard {
            parts.push(unit_atom(dim, *var, CmpOp::Eq, value.clone()));
        }
        let shifted = psi.shift(&step.delta);
        if forward {
            parts.push(psi.clone());
            parts.push(Formula::not(shifted));
        } else {
            parts.push(shifted);
            parts.push(Formula::not(psi.clone()));
        }
        if let Some(witness) = satisfiable_in(&Formula::and_all(parts), dim, Domain::NonNeg)? {
            return Ok(Invariance::Violated {
                step: step.label,
                witness,
            });
        }
    }
    Ok(Invariance::Holds)
}

/// Is `{x ∈ ℕⁿ | ψ(x)}` closed under every step that stays in ℕⁿ?
pub fn is_forward_invariant(psi: &Formula, sys: &VasSystem) -> Result<Invariance, PresburgerError> {
    check_steps(psi, &VassSystem::single_state(sys.clone()), true)
}

/// Closure under predecessors: no step leads from outside the set into it.
pub fn is_backward_invariant(psi: &Formula, sys: &VasSystem) -> Result<Invariance, PresburgerError> {
    check_steps(psi, &VassSystem::single_state(sys.clone()), false)
}

/// Forward invariance over the state-embedded space of a VASS.
pub fn is_forward_invariant_vass(psi: &Formula, sys: &VassSystem) -> Result<Invariance, PresburgerError> {
    check_steps(psi, sys, true)
}

pub fn is_backward_invariant_vass(psi: &Formula, sys: &VassSystem) -> Result<Invariance, PresburgerError> {
    check_steps(psi, sys, false)
}

/// A forward invariant containing `source` but not `target`. Points are in
/// the embedding of [`embed`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub formula: Formula,
    pub source: IntVector,
    pub target: IntVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateFailure {
    SourceNotIn,
    TargetIn,
    NotInvariant { step: String, witness: IntVector },
    Dimension { needed: usize, found: usize },
}

impl fmt::Display for CertificateFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateFailure::SourceNotIn => write!(f, "source is not in the invariant"),
            CertificateFailure::TargetIn => write!(f, "target is in the invariant"),
            CertificateFailure::NotInvariant { step, witness } => {
                let w: Vec<String> = witness.iter().map(|v| v.to_string()).collect();
                write!(f, "not invariant: {step} leaves the set from ({})", w.join(","))
            }
            CertificateFailure::Dimension { needed, found } => {
                write!(f, "formula uses {needed} variables but the system has {found}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateCheck {
    Valid,
    /// Every clause that failed, in the order source, target, invariance.
    Invalid(Vec<CertificateFailure>),
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, CertificateCheck::Valid)
    }
}

pub fn check_certificate(cert: &Certificate, sys: &VassSystem) -> CertificateCheck {
    let dim = embedding_dim(sys);
    let needed = cert.formula.num_vars();
    if needed > dim || cert.source.len() != dim || cert.target.len() != dim {
        return CertificateCheck::Invalid(vec![CertificateFailure::Dimension {
            needed: needed.max(cert.source.len()).max(cert.target.len()),
            found: dim,
        }]);
    }
    let mut failures = Vec::new();
    if !cert.formula.eval(&cert.source).expect("dimension checked") {
        failures.push(CertificateFailure::SourceNotIn);
    }
    if cert.formula.eval(&cert.target).expect("dimension checked") {
        failures.push(CertificateFailure::TargetIn);
    }
    if let Invariance::Violated { step, witness } =
        check_steps(&cert.formula, sys, true).expect("dimension checked")
    {
        failures.push(CertificateFailure::NotInvariant { step, witness });
    }
    if failures.is_empty() {
        CertificateCheck::Valid
    } else {
        CertificateCheck::Invalid(failures)
    }
}

/// `(S, S')` partitions ℕⁿ, `S` is a forward invariant and `S'` a backward one.
pub fn is_complete_separator(s: &Formula, s_prime: &Formula, sys: &VasSystem) -> Result<bool, PresburgerError> {
    let n = sys.dim();
    let both = Formula::and(s.clone(), s_prime.clone());
    let neither = Formula::and(Formula::not(s.clone()), Formula::not(s_prime.clone()));
    for f in [&both, &neither] {
        if satisfiable_in(f, n, Domain::NonNeg)?.is_some() {
            return Ok(false);
        }
    }
    Ok(is_forward_invariant(s, sys)?.holds() && is_backward_invariant(s_prime, sys)?.holds())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LetterClass {
    /// Adds a period of the source set.
    Period,
    Original,
    /// Subtracts a period of the target set.
    CoPeriod,
}

/// A VAS extended with one letter per period of `P` (displacement `+p`) and
/// per period of `P'` (displacement `−p'`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedVas {
    pub vas: VasSystem,
    pub classes: Vec<LetterClass>,
}

impl ExtendedVas {
    fn sum_of(&self, word: &[usize], class: LetterClass, sign: i64) -> IntVector {
        let mut out = vec![BigInt::zero(); self.vas.dim()];
        for &a in word {
            if self.classes[a] == class {
                for (o, d) in out.iter_mut().zip(self.vas.displacement(a)) {
                    *o += d * sign;
                }
            }
        }
        out
    }

    /// `f(w)`: total displacement of the period letters of `w`.
    pub fn f(&self, word: &[usize]) -> IntVector {
        self.sum_of(word, LetterClass::Period, 1)
    }

    /// `f'(w)`: the negated total displacement of the co-period letters.
    pub fn f_prime(&self, word: &[usize]) -> IntVector {
        self.sum_of(word, LetterClass::CoPeriod, -1)
    }
}

fn fresh_name(taken: &[String], stem: &str, k: usize) -> String {
    let mut name = format!("{stem}{k}");
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

pub fn extend_vas_with_periods(
    sys: &VasSystem,
    periods: &[IntVector],
    co_periods: &[IntVector],
) -> Result<ExtendedVas, VasError> {
    let n = sys.dim();
    let mut actions: Vec<(String, IntVector)> = (0..sys.num_actions())
        .map(|a| (sys.action_name(a).to_string(), sys.displacement(a).clone()))
        .collect();
    let mut classes = vec![LetterClass::Original; actions.len()];
    for (stem, set, class, sign) in [
        ("p", periods, LetterClass::Period, 1),
        ("q", co_periods, LetterClass::CoPeriod, -1),
    ] {
        for (k, p) in set.iter().enumerate() {
            if p.len() != n {
                return Err(VasError::DimensionMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
            if p.iter().any(|v| *v < BigInt::zero()) {
                return Err(VasError::NegativeComponent);
            }
            let taken: Vec<String> = actions.iter().map(|(s, _)| s.clone()).collect();
            let name = fresh_name(&taken, stem, k + 1);
            actions.push((name, p.iter().map(|v| v * sign).collect()));
            classes.push(class);
        }
    }
    Ok(ExtendedVas {
        vas: VasSystem::new(n, actions)?,
        classes,
    })
}

/// Moves period letters to the front and co-period letters to the back,
/// keeping the relative order within each class. Fireability from the same
/// source to the same target is preserved.
pub fn reorder_canonical(word: &[usize], ext: &ExtendedVas) -> Vec<usize> {
    let of = |class: LetterClass| word.iter().copied().filter(move |&a| ext.classes[a] == class);
    of(LetterClass::Period)
        .chain(of(LetterClass::Original))
        .chain(of(LetterClass::CoPeriod))
        .collect()
}
