//! Python bindings for `vasreach-core`.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use vasreach_core::decider::{decide_reach, DeciderConfig, Verdict};
use vasreach_core::diophantine::{hilbert_basis as core_hilbert_basis, IntMatrix};
use vasreach_core::format::{format_vass, parse_mrgs, parse_system};
use vasreach_core::invariant::{check_certificate as core_check, embed, Certificate, CertificateCheck};
use vasreach_core::mrgs::{
    check_large_acceptance, input_loop_condition, is_perfect, large_solution_condition,
    output_loop_condition, realize_accepted, Mrgs as CoreMrgs,
};
use vasreach_core::presburger::{self, Domain};
use vasreach_core::semilinear::{self as sl, LinearSet};
use vasreach_core::vas::{karp_miller_covers, ExtConfig, ExtNat, VasSystem, VassSystem};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// `None` entries stand for ⊤.
fn ext(values: Vec<Option<BigInt>>) -> PyResult<ExtConfig> {
    values
        .into_iter()
        .map(|v| match v {
            None => Ok(ExtNat::Top),
            Some(x) if x >= BigInt::from(0) => Ok(ExtNat::Fin(x)),
            Some(x) => Err(err(format!("negative entry {x}"))),
        })
        .collect::<PyResult<Vec<_>>>()
        .map(ExtConfig)
}

fn unext(c: &ExtConfig) -> Vec<Option<BigInt>> {
    c.0.iter().map(|v| v.as_fin().cloned()).collect()
}

/// A VAS or VASS. Points are lists of naturals; states default to the first.
#[pyclass(name = "System", frozen)]
struct PySystem {
    inner: VassSystem,
}

impl PySystem {
    fn state(&self, name: Option<&str>) -> PyResult<usize> {
        name.map_or(Ok(0), |n| self.inner.state_index(n).map_err(err))
    }

    fn point(&self, state: Option<&str>, cfg: Vec<BigInt>) -> PyResult<(usize, Vec<BigInt>)> {
        if cfg.len() != self.inner.dim() {
            return Err(err(format!("expected {} entries, got {}", self.inner.dim(), cfg.len())));
        }
        Ok((self.state(state)?, cfg))
    }
}

#[pymethods]
impl PySystem {
    /// A single-state VAS from `(name, displacement)` pairs.
    #[new]
    fn new(dim: usize, actions: Vec<(String, Vec<BigInt>)>) -> PyResult<Self> {
        let vas = VasSystem::new(dim, actions).map_err(err)?;
        Ok(PySystem {
            inner: VassSystem::single_state(vas),
        })
    }

    /// Parses the `vas` or `vass` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PySystem {
            inner: parse_system(text).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        self.inner.states().to_vec()
    }

    #[getter]
    fn actions(&self) -> Vec<String> {
        self.inner.vas().action_names().to_vec()
    }

    /// Runs a word of action names; `None` if some step is disabled.
    fn run(&self, cfg: Vec<Option<BigInt>>, word: Vec<String>) -> PyResult<Option<Vec<Option<BigInt>>>> {
        let out = self.inner.vas().run(&ext(cfg)?, &word).map_err(err)?;
        Ok(out.as_ref().map(unext))
    }

    /// Karp–Miller coverability; `None` entries are ⊤.
    #[pyo3(signature = (source, target, source_state=None, target_state=None))]
    fn covers(
        &self,
        source: Vec<Option<BigInt>>,
        target: Vec<Option<BigInt>>,
        source_state: Option<&str>,
        target_state: Option<&str>,
    ) -> PyResult<bool> {
        let init = (self.state(source_state)?, ext(source)?);
        let goal = (self.state(target_state)?, ext(target)?);
        karp_miller_covers(&self.inner, init, goal).map_err(err)
    }

    /// Returns `("reachable", word)`, `("unreachable", formula)` or
    /// `("budget_exhausted", None)`.
    #[pyo3(signature = (source, target, source_state=None, target_state=None,
                        rounds=12, steps=10_000, formulas=20_000, templates=false))]
    #[allow(clippy::too_many_arguments)]
    fn decide(
        &self,
        py: Python<'_>,
        source: Vec<BigInt>,
        target: Vec<BigInt>,
        source_state: Option<&str>,
        target_state: Option<&str>,
        rounds: u64,
        steps: u64,
        formulas: u64,
        templates: bool,
    ) -> PyResult<(String, Py<PyAny>)> {
        let s = self.point(source_state, source)?;
        let t = self.point(target_state, target)?;
        let cfg = DeciderConfig {
            max_rounds: Some(rounds),
            step_budget: steps,
            formula_budget: formulas,
            templates,
            ..DeciderConfig::default()
        };
        let verdict = py.detach(|| decide_reach(&self.inner, s, t, &cfg)).map_err(err)?;
        Ok(match verdict {
            Verdict::Reachable(w) => ("reachable".into(), w.word.into_pyobject(py)?.into_any().unbind()),
            Verdict::Unreachable(c) => (
                "unreachable".into(),
                c.formula.to_string().into_pyobject(py)?.into_any().unbind(),
            ),
            Verdict::BudgetExhausted(_) => ("budget_exhausted".into(), py.None()),
        })
    }

    /// Failure messages of a candidate certificate; empty when it is valid.
    #[pyo3(signature = (formula, source, target, source_state=None, target_state=None))]
    fn check_certificate(
        &self,
        formula: &str,
        source: Vec<BigInt>,
        target: Vec<BigInt>,
        source_state: Option<&str>,
        target_state: Option<&str>,
    ) -> PyResult<Vec<String>> {
        let (p, s) = self.point(source_state, source)?;
        let (q, t) = self.point(target_state, target)?;
        let cert = Certificate {
            formula: presburger::parse(formula).map_err(err)?,
            source: embed(&self.inner, p, &s),
            target: embed(&self.inner, q, &t),
        };
        Ok(match core_check(&cert, &self.inner) {
            CertificateCheck::Valid => Vec::new(),
            CertificateCheck::Invalid(f) => f.iter().map(ToString::to_string).collect(),
        })
    }

    fn __str__(&self) -> String {
        format_vass(&self.inner)
    }
}

/// A parsed MRGS.
#[pyclass(name = "Mrgs", frozen)]
struct PyMrgs {
    inner: CoreMrgs,
}

#[pymethods]
impl PyMrgs {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyMrgs {
            inner: parse_mrgs(text).map_err(err)?,
        })
    }

    fn large_solution_condition(&self) -> bool {
        large_solution_condition(&self.inner)
    }

    /// `(input, output)` loop conditions per marked graph.
    fn loop_conditions(&self) -> PyResult<Vec<(bool, bool)>> {
        self.inner
            .blocks()
            .iter()
            .map(|b| Ok((input_loop_condition(b).map_err(err)?, output_loop_condition(b).map_err(err)?)))
            .collect()
    }

    fn is_perfect(&self) -> PyResult<bool> {
        is_perfect(&self.inner).map_err(err)
    }

    /// The action word of an accepted sequence at level `c`, validated, or
    /// `None` when the MRGS is not perfect.
    fn realize(&self, c: u64) -> PyResult<Option<Vec<String>>> {
        let Some(seq) = realize_accepted(&self.inner, c).map_err(err)? else {
            return Ok(None);
        };
        check_large_acceptance(&self.inner, &seq, c).map_err(err)?;
        Ok(Some(seq.word(&self.inner)))
    }
}

/// A model over ℕ (or ℤ with `nonneg=False`), or `None`.
#[pyfunction]
#[pyo3(signature = (formula, nonneg=true))]
fn satisfiable(formula: &str, nonneg: bool) -> PyResult<Option<Vec<BigInt>>> {
    let f = presburger::parse(formula).map_err(err)?;
    let domain = if nonneg { Domain::NonNeg } else { Domain::AllInt };
    Ok(presburger::satisfiable(&f, domain))
}

fn linear(base: Vec<BigInt>, periods: Vec<Vec<BigInt>>) -> PyResult<LinearSet> {
    LinearSet::new(base, periods).map_err(err)
}

/// `L1 ∩ L2` as a list of `(base, periods)` pairs.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn intersect_linear(
    base1: Vec<BigInt>,
    periods1: Vec<Vec<BigInt>>,
    base2: Vec<BigInt>,
    periods2: Vec<Vec<BigInt>>,
) -> PyResult<Vec<(Vec<BigInt>, Vec<Vec<BigInt>>)>> {
    let s = sl::intersect_linear(&linear(base1, periods1)?, &linear(base2, periods2)?).map_err(err)?;
    Ok(s.components.into_iter().map(|c| (c.base, c.periods)).collect())
}

#[pyfunction]
fn member_linear(base: Vec<BigInt>, periods: Vec<Vec<BigInt>>, v: Vec<BigInt>) -> PyResult<bool> {
    sl::member_linear(&linear(base, periods)?, &v).map_err(err)
}

#[pyfunction]
fn interior_contains(periods: Vec<Vec<BigInt>>, v: Vec<BigInt>) -> PyResult<bool> {
    sl::interior_contains(&periods, &v).map_err(err)
}

#[pyfunction]
fn dim_linear(base: Vec<BigInt>, periods: Vec<Vec<BigInt>>) -> PyResult<usize> {
    Ok(sl::dim_linear(&linear(base, periods)?))
}

/// Minimal nonzero natural solutions of `A·x = 0`, `A` given by rows.
#[pyfunction]
fn hilbert_basis(rows: Vec<Vec<BigInt>>) -> PyResult<Vec<Vec<BigInt>>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(err("rows have different lengths"));
    }
    Ok(core_hilbert_basis(&IntMatrix::from_rows(cols, rows)))
}

#[pymodule]
fn vasreach(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystem>()?;
    m.add_class::<PyMrgs>()?;
    m.add_function(wrap_pyfunction!(satisfiable, m)?)?;
    m.add_function(wrap_pyfunction!(intersect_linear, m)?)?;
    m.add_function(wrap_pyfunction!(member_linear, m)?)?;
    m.add_function(wrap_pyfunction!(interior_contains, m)?)?;
    m.add_function(wrap_pyfunction!(dim_linear, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_basis, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
