//! Python bindings: formulas, sequents, bases, ND derivations, and the
//! decision, derivability, support and lemma operations.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use ::mall_bes::base::{self as b, DeriveOutcome};
use ::mall_bes::completeness::{self as c, DecideOutcome};
use ::mall_bes::nd::{self as nd, CheckOptions, NdRule};
use ::mall_bes::oracle::{self, Verdict};
use ::mall_bes::support::{self as s, LemmaId, LemmaParams, SupportVerdict};
use ::mall_bes::syntax as syn;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(frozen, skip_from_py_object, eq, hash, module = "mall_bes")]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Formula(syn::Formula);

#[pymethods]
impl Formula {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        syn::parse_formula(text).map(Formula).map_err(value_err)
    }

    fn size(&self) -> usize {
        self.0.size()
    }

    fn negate(&self) -> Formula {
        Formula(syn::negate(&self.0))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula('{}')", self.0)
    }
}

#[pyclass(frozen, skip_from_py_object, eq, hash, module = "mall_bes")]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sequent(syn::Sequent);

#[pymethods]
impl Sequent {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        syn::parse_sequent(text).map(Sequent).map_err(value_err)
    }

    #[getter]
    fn context(&self) -> Vec<Formula> {
        self.0.context.iter().cloned().map(Formula).collect()
    }

    #[getter]
    fn conclusion(&self) -> Formula {
        Formula(self.0.conclusion.clone())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Sequent('{}')", self.0)
    }
}

#[pyclass(frozen, skip_from_py_object, module = "mall_bes")]
#[derive(Clone)]
pub struct Base(b::Base);

#[pymethods]
impl Base {
    /// Parses the base file format.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        b::parse_base(text).map(Base).map_err(value_err)
    }

    #[staticmethod]
    fn counterexample(atom: &str) -> PyResult<Self> {
        let a = syn::Atom::new(atom);
        if a.is_bottom() {
            return Err(value_err("the dropped atom must differ from bot"));
        }
        Ok(Base(s::counterexample_base(&a)))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }

    /// Returns `(verdict, derivation_text)` with verdict one of
    /// "derivable", "not-derivable", "inconclusive".
    #[pyo3(signature = (sequent, depth=24, nodes=200_000))]
    fn derive(&self, sequent: &str, depth: usize, nodes: usize) -> PyResult<(String, Option<String>)> {
        let goal = b::parse_atomic_sequent(sequent).map_err(value_err)?;
        Ok(match b::derive_atomic(&self.0, &goal, b::Budget { depth, nodes }) {
            DeriveOutcome::Found(d) => ("derivable".into(), Some(d.to_text())),
            DeriveOutcome::NotFound { saturated: true } => ("not-derivable".into(), None),
            DeriveOutcome::NotFound { saturated: false } => ("inconclusive".into(), None),
        })
    }

    /// Evaluates a support judgment over a family generated from this base.
    /// Returns `(verdict, witness_text)`.
    #[pyo3(signature = (judgment, seed=0, fam_size=4, ext_rules=2, ctx_bound=3))]
    fn support(
        &self,
        judgment: &str,
        seed: u64,
        fam_size: usize,
        ext_rules: usize,
        ctx_bound: usize,
    ) -> PyResult<(String, Option<String>)> {
        let j = s::parse_judgment(judgment, self.0.clone()).map_err(value_err)?;
        let params = s::FamilyParams {
            size: fam_size,
            ext_rules,
            ..s::FamilyParams::default()
        };
        let fam = s::ExtensionFamily::generate(self.0.clone(), params, seed);
        let limits = s::EvalLimits {
            ctx_bound,
            ..s::EvalLimits::default()
        };
        let e = s::eval_clause(&j, &fam, limits).map_err(value_err)?;
        Ok(match e.verdict {
            SupportVerdict::HoldsRelativeToFamily => ("holds-relative-to-family".into(), None),
            SupportVerdict::Refuted(w) => ("refuted".into(), Some(w.to_string())),
        })
    }
}

#[pyclass(frozen, skip_from_py_object, module = "mall_bes")]
#[derive(Clone)]
pub struct NdDerivation(nd::NdDerivation);

#[pymethods]
impl NdDerivation {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        nd::NdDerivation::from_text(text).map(NdDerivation).map_err(value_err)
    }

    #[getter]
    fn conclusion(&self) -> Sequent {
        Sequent(self.0.conclusion.clone())
    }

    fn count_rule(&self, rule: &str) -> PyResult<usize> {
        let r = NdRule::from_name(rule).ok_or_else(|| PyKeyError::new_err(rule.to_string()))?;
        Ok(self.0.count_rule(r))
    }

    fn height(&self) -> usize {
        self.0.height()
    }

    /// `None` if valid, else the violation message.
    #[pyo3(signature = (allow_raa=true, allow_subs=true))]
    fn check(&self, allow_raa: bool, allow_subs: bool) -> Option<String> {
        nd::check_nd(&self.0, CheckOptions { allow_raa, allow_subs })
            .err()
            .map(|v| v.to_string())
    }

    fn is_normal(&self) -> bool {
        nd::normal_form_check(&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }
}

/// Decides a sequent through its simulation base. Returns
/// `(verdict, atomic_derivation_text, nd_derivation)`.
#[pyfunction]
#[pyo3(signature = (sequent, depth=24, nodes=200_000))]
fn prove(sequent: &Sequent, depth: usize, nodes: usize) -> PyResult<(String, Option<String>, Option<NdDerivation>)> {
    Ok(match c::decide(&sequent.0, b::Budget { depth, nodes }) {
        DecideOutcome::Provable { derivation, simulation } => {
            let d = c::translate(&derivation, &simulation.mapping).map_err(value_err)?;
            ("provable".into(), Some(derivation.to_text()), Some(NdDerivation(d)))
        }
        DecideOutcome::Refuted => ("refuted".into(), None, None),
        DecideOutcome::NotFoundWithinBudget => ("inconclusive".into(), None, None),
    })
}

/// The sequent-calculus oracle's verdict.
#[pyfunction]
fn oracle_prove(sequent: &Sequent) -> String {
    match oracle::prove_sequent(&sequent.0) {
        Ok(Verdict::Provable) => "provable",
        Ok(Verdict::Refuted) => "refuted",
        Err(_) => "inconclusive",
    }
    .into()
}

/// Runs the seeded lemma harness; returns `(passed, report_text)`.
#[pyfunction]
#[pyo3(signature = (lemma, trials=200, seed=7))]
fn check_lemma(py: Python<'_>, lemma: &str, trials: usize, seed: u64) -> PyResult<(bool, String)> {
    let id = LemmaId::from_id(lemma).ok_or_else(|| PyKeyError::new_err(lemma.to_string()))?;
    let rep = py.detach(|| s::check_lemma(id, trials, seed, &LemmaParams::default()));
    Ok((rep.passed(), rep.to_string()))
}

#[pyfunction]
fn lemma_ids() -> Vec<&'static str> {
    LemmaId::ALL.iter().map(|l| l.id()).collect()
}

#[pymodule]
#[pyo3(name = "mall_bes")]
fn mall_bes_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Formula>()?;
    m.add_class::<Sequent>()?;
    m.add_class::<Base>()?;
    m.add_class::<NdDerivation>()?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_prove, m)?)?;
    m.add_function(wrap_pyfunction!(check_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_ids, m)?)?;
    Ok(())
}
