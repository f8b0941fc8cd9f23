//! Python bindings.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use parcohom_core::coeff::SymPower;
use parcohom_core::cohom::{build_cohomology, CohomPresentation};
use parcohom_core::fflin::{Matrix, PrimeField};
use parcohom_core::hecke::{
    algebra_closure, eigen_systems, shapiro_hecke_check, twist_check as core_twist_check, HeckeEngine, HeckeOp,
};
use parcohom_core::modgrp::GroupTag;
use parcohom_core::wt1::{
    eigenspace_structure_check, sturm_bound as core_sturm, weight_one_algebra, weight_one_with_character,
    CharacterData, SturmKind, WeightOneOptions,
};
use parcohom_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::CocycleCheck(_) | Error::MissingOperator(_) | Error::Overflow => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<T: serde::Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn group_of(s: &str) -> PyResult<GroupTag> {
    match s {
        "gamma1" => Ok(GroupTag::Gamma1),
        "gamma0" => Ok(GroupTag::Gamma0),
        _ => Err(PyValueError::new_err(format!("unknown group `{s}`"))),
    }
}

/// `H^1` and `H^1_par` of `Gamma_0(N)` or `Gamma_1(N)` with coefficients `V_{k-2}` over `F_p`.
#[pyclass(frozen, module = "parcohom")]
struct Cohomology {
    pres: CohomPresentation,
    #[pyo3(get)]
    level: u64,
    #[pyo3(get)]
    prime: u64,
    #[pyo3(get)]
    weight: u32,
}

impl Cohomology {
    fn op(&self, n: u64) -> PyResult<HeckeOp> {
        if n == 0 {
            return Err(PyValueError::new_err("T_0 is undefined"));
        }
        HeckeEngine::new(&self.pres).t(n).map_err(py_err)
    }
}

fn pick(op: &HeckeOp, parabolic: bool) -> &Matrix<PrimeField> {
    if parabolic {
        &op.par_matrix
    } else {
        &op.matrix
    }
}

#[pymethods]
impl Cohomology {
    #[new]
    #[pyo3(signature = (level, prime, weight = 2, group = "gamma1"))]
    fn new(level: u64, prime: u64, weight: u32, group: &str) -> PyResult<Self> {
        if weight < 2 {
            return Err(PyValueError::new_err("weight must be at least 2"));
        }
        let f = PrimeField::new(prime).map_err(py_err)?;
        let pres = build_cohomology(group_of(group)?, level, Arc::new(SymPower::new(weight - 2, f))).map_err(py_err)?;
        Ok(Cohomology {
            pres,
            level,
            prime,
            weight,
        })
    }

    #[getter]
    fn dim_h1(&self) -> usize {
        self.pres.dim_h1()
    }

    #[getter]
    fn dim_par(&self) -> usize {
        self.pres.dim_par()
    }

    /// Matrix of `T_n` as a list of rows.
    #[pyo3(signature = (n, parabolic = true))]
    fn hecke(&self, n: u64, parabolic: bool) -> PyResult<Vec<Vec<u64>>> {
        Ok(pick(&self.op(n)?, parabolic).to_rows())
    }

    #[pyo3(signature = (d, parabolic = true))]
    fn diamond(&self, d: u64, parabolic: bool) -> PyResult<Vec<Vec<u64>>> {
        let mut e = HeckeEngine::new(&self.pres);
        Ok(pick(e.diamond(d).map_err(py_err)?, parabolic).to_rows())
    }

    /// Characteristic polynomial of `T_n`, low to high.
    #[pyo3(signature = (n, parabolic = true))]
    fn charpoly(&self, n: u64, parabolic: bool) -> PyResult<Vec<u64>> {
        let cp = pick(&self.op(n)?, parabolic).charpoly().map_err(py_err)?;
        Ok(cp.coeffs().to_vec())
    }

    /// Eigenvalue systems of `T_1..T_bound`.
    #[pyo3(signature = (bound, parabolic = true, seed = 0))]
    fn eigen_systems(&self, py: Python<'_>, bound: u64, parabolic: bool, seed: u64) -> PyResult<Py<PyAny>> {
        let mut e = HeckeEngine::new(&self.pres);
        let mut ops = Vec::new();
        for n in 1..=bound {
            ops.push((n, pick(&e.t(n).map_err(py_err)?, parabolic).clone()));
        }
        let alg = algebra_closure(&ops, seed).map_err(py_err)?;
        to_py(py, &eigen_systems(&alg, bound, seed).map_err(py_err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "Cohomology({:?}, level={}, weight={}, p={}, dim_h1={}, dim_par={})",
            self.pres.table().group(),
            self.level,
            self.weight,
            self.prime,
            self.pres.dim_h1(),
            self.pres.dim_par()
        )
    }
}

/// `(numerator, denominator)` of the bound; `with_character` selects the smaller one.
#[pyfunction]
#[pyo3(signature = (level, with_character = true))]
fn sturm_bound(level: u64, with_character: bool) -> PyResult<(u64, u64)> {
    let kind = if with_character { SturmKind::WithCharacter } else { SturmKind::WithoutCharacter };
    let s = core_sturm(level, kind).map_err(py_err)?;
    Ok((*s.value.numer(), *s.value.denom()))
}

fn character(level: u64, prime: u64, spec: &Bound<'_, PyAny>) -> PyResult<CharacterData> {
    if let Ok(s) = spec.extract::<String>() {
        return match s.as_str() {
            "quadratic" => CharacterData::quadratic(level, prime),
            "trivial" => CharacterData::trivial(level, prime),
            _ => return Err(PyValueError::new_err(format!("unknown character `{s}`"))),
        }
        .map_err(py_err);
    }
    let vals: Vec<i64> = spec.extract()?;
    CharacterData::from_fp_values(level, prime, &vals).map_err(py_err)
}

/// Weight-one eigenforms mod `p` of level `N`, as a dict.
#[pyfunction]
#[pyo3(signature = (level, prime, character = None, bound = None, output_bound = None, seed = 0))]
fn weight_one(
    py: Python<'_>,
    level: u64,
    prime: u64,
    character: Option<&Bound<'_, PyAny>>,
    bound: Option<u64>,
    output_bound: Option<u64>,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let opts = WeightOneOptions {
        operator_bound: bound,
        extra_operators: 0,
        output_bound,
        seed,
    };
    let res = match character {
        Some(spec) => {
            let chi = self::character(level, prime, spec)?;
            py.detach(|| weight_one_with_character(level, prime, &chi, &opts))
        }
        None => py.detach(|| weight_one_algebra(level, prime, &opts)),
    }
    .map_err(py_err)?;
    let report = eigenspace_structure_check(&res);
    let out = serde_json::json!({ "result": res, "structure_check": report, "structure_passed": report.passed() });
    to_py(py, &out)
}

#[pyfunction]
#[pyo3(signature = (level, modulus, prime, n = 2, d = 3, mult = 2, weight = 2))]
fn verify_shapiro(
    py: Python<'_>,
    level: u64,
    modulus: u64,
    prime: u64,
    n: u64,
    d: u64,
    mult: u64,
    weight: u32,
) -> PyResult<Py<PyAny>> {
    let f = PrimeField::new(prime).map_err(py_err)?;
    let r = shapiro_hecke_check(level, modulus, Arc::new(SymPower::new(weight.saturating_sub(2), f)), n, d, mult)
        .map_err(py_err)?;
    to_py(py, &serde_json::json!({ "report": r, "passed": r.passed() }))
}

#[pyfunction]
#[pyo3(signature = (level, prime, d, primes = vec![2, 3]))]
fn twist_check(py: Python<'_>, level: u64, prime: u64, d: u32, primes: Vec<u64>) -> PyResult<Py<PyAny>> {
    let r = core_twist_check(level, prime, d, &primes).map_err(py_err)?;
    to_py(py, &serde_json::json!({ "report": r, "passed": r.passed() }))
}

#[pymodule]
fn parcohom(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Cohomology>()?;
    m.add_function(wrap_pyfunction!(sturm_bound, m)?)?;
    m.add_function(wrap_pyfunction!(weight_one, m)?)?;
    m.add_function(wrap_pyfunction!(verify_shapiro, m)?)?;
    m.add_function(wrap_pyfunction!(twist_check, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
