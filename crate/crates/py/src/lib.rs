//! Python bindings for knotstat.

use std::collections::BTreeMap;

use num_rational::BigRational;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use knotstat::catalog::{parse_catalog, Catalog, Filter};
use knotstat::crossed::{self, BcSymbol};
use knotstat::kms::{self, AdelicUnit};
use knotstat::knotgroups::{self, Branch};
use knotstat::partition::{self, PrimeSource};
use knotstat::semigroup;
use knotstat::Error;

const BUNDLED_CATALOG: &str = include_str!("../../core/data/knots.csv");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Divergent { .. } | Error::Pole { .. } => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn bundled() -> PyResult<Catalog> {
    parse_catalog(BUNDLED_CATALOG, Filter::All, None).map_err(py_err)
}

/// Element of ℚ/ℤ.
#[pyclass(frozen, eq, hash, str, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct QmodZ(knotstat::QmodZ);

impl std::fmt::Display for QmodZ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl QmodZ {
    #[new]
    fn new(a: i64, b: i64) -> PyResult<Self> {
        if b == 0 {
            return Err(PyValueError::new_err("denominator must be non-zero"));
        }
        Ok(QmodZ(knotstat::QmodZ::new(a, b)))
    }

    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        s.parse().map(QmodZ).map_err(py_err)
    }

    fn __add__(&self, o: &QmodZ) -> QmodZ {
        QmodZ(self.0.add(&o.0))
    }

    fn __repr__(&self) -> String {
        format!("QmodZ('{}')", self.0)
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn times(&self, n: u64) -> QmodZ {
        QmodZ(self.0.mul_u64(n))
    }

    fn preimages(&self, n: u64) -> Vec<QmodZ> {
        self.0.preimages(n).into_iter().map(QmodZ).collect()
    }
}

/// A knot as a multiset of prime factors.
#[pyclass(frozen, eq, hash, str, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Knot(semigroup::Knot);

impl std::fmt::Display for Knot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl Knot {
    /// Parses "3_1 # 4_1" or "unknot".
    #[new]
    fn new(s: &str) -> PyResult<Self> {
        s.parse().map(Knot).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Knot('{}')", self.0)
    }

    fn connected_sum(&self, o: &Knot) -> Knot {
        Knot(self.0.connected_sum(&o.0))
    }

    fn divides(&self, o: &Knot) -> bool {
        self.0.divides(&o.0)
    }

    fn omega(&self) -> usize {
        self.0.omega()
    }

    fn factors(&self) -> BTreeMap<String, u32> {
        self.0.factors().clone()
    }

    /// Σ aᵢ(Cr + g) over the bundled catalog.
    fn weight(&self) -> PyResult<u64> {
        self.0.weight(&bundled()?).map_err(py_err)
    }
}

/// K ⊖ K′ in the Grothendieck group.
#[pyclass(frozen, eq, hash, str, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct GroupElement(semigroup::GroupElement);

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl GroupElement {
    /// Parses "3_1 -- 4_1".
    #[new]
    fn new(s: &str) -> PyResult<Self> {
        s.parse().map(GroupElement).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("GroupElement('{}')", self.0)
    }

    fn __mul__(&self, o: &GroupElement) -> GroupElement {
        GroupElement(self.0.compose(&o.0))
    }

    fn inverse(&self) -> GroupElement {
        GroupElement(self.0.inverse())
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    fn weight(&self) -> PyResult<u64> {
        self.0.weight(&bundled()?).map_err(py_err)
    }
}

/// A finite group presentation.
#[pyclass(frozen, str, skip_from_py_object)]
#[derive(Clone)]
struct Presentation(knotgroups::Presentation);

impl std::fmt::Display for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[pymethods]
impl Presentation {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        knotgroups::Presentation::parse(text).map(Presentation).map_err(py_err)
    }

    #[staticmethod]
    fn from_braid(word: Vec<i32>) -> PyResult<Self> {
        knotgroups::Presentation::from_braid(&word).map(Presentation).map_err(py_err)
    }

    /// Presentation of a catalog knot.
    #[staticmethod]
    fn for_knot(name: &str) -> PyResult<Self> {
        let cat = bundled()?;
        let rec = cat.require(name).map_err(py_err)?;
        knotgroups::presentation_for(rec).map(Presentation).map_err(py_err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn generators(&self) -> Vec<String> {
        self.0.generators().to_vec()
    }

    fn relators(&self) -> Vec<Vec<i32>> {
        self.0.relators().to_vec()
    }

    fn amalgamate(&self, o: &Presentation) -> PyResult<Presentation> {
        knotgroups::amalgamate(&self.0, &o.0).map(Presentation).map_err(py_err)
    }

    /// (free rank, torsion coefficients).
    fn abelianization(&self) -> (usize, Vec<String>) {
        let a = knotgroups::abelianization(&self.0);
        (a.free_rank, a.torsion.iter().map(ToString::to_string).collect())
    }

    /// Normalized Alexander coefficients from t⁰ upward.
    fn alexander(&self) -> PyResult<Vec<i64>> {
        knotgroups::alexander_poly_fox(&self.0).map(|p| p.normalized_coeffs()).map_err(py_err)
    }

    /// Largest relator residual of the de Rham representation at `root`.
    #[pyo3(signature = (root, negative_branch = false))]
    fn derham_residual(&self, root: (f64, f64), negative_branch: bool) -> PyResult<f64> {
        let b = if negative_branch { Branch::Negative } else { Branch::Principal };
        let r = num_complex::Complex64::new(root.0, root.1);
        knotgroups::derham_solve(&self.0, r, b).map(|r| r.max_residual).map_err(py_err)
    }
}

/// Threshold report for base q.
#[pyfunction]
fn thresholds(q: u64) -> PyResult<BTreeMap<String, f64>> {
    let r = partition::thresholds(q).map_err(py_err)?;
    Ok(BTreeMap::from([
        ("beta_plus".into(), r.beta_plus),
        ("beta_minus".into(), r.beta_minus),
        ("beta_tilde_minus".into(), r.beta_tilde_minus),
        ("rhs_constant".into(), r.rhs_constant),
        ("capital_f".into(), r.capital_f),
        ("crossover_x".into(), r.crossover_x),
    ]))
}

/// Z_a(β) over the bundled catalog, or over primes with the given weights.
#[pyfunction]
#[pyo3(signature = (beta, q = 2, weights = None, tol = 1e-12))]
fn z_alternating(beta: f64, q: u64, weights: Option<Vec<u32>>, tol: f64) -> PyResult<f64> {
    let src = match weights {
        Some(w) => PrimeSource::from_weights(&w),
        None => PrimeSource::from_catalog(&bundled()?),
    };
    partition::z_alternating(beta, q, &src, tol).map(|r| r.value).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (beta, q = 2, weights = None, tol = 1e-12))]
fn z_grothendieck(beta: f64, q: u64, weights: Option<Vec<u32>>, tol: f64) -> PyResult<f64> {
    let src = match weights {
        Some(w) => PrimeSource::from_weights(&w),
        None => PrimeSource::from_catalog(&bundled()?),
    };
    partition::z_grothendieck(beta, q, &src, tol).map(|r| r.value).map_err(py_err)
}

/// (closed form, partial sum, tail bound) for the ℚ*₊ system.
#[pyfunction]
#[pyo3(signature = (beta, n_max = 100_000))]
fn z_qstar(beta: f64, n_max: u64) -> PyResult<(f64, f64, f64)> {
    let r = partition::qstar_partition(beta, n_max).map_err(py_err)?;
    Ok((r.value, r.partial_sum, r.tail_bound))
}

/// φ_β(e(r)) as (re, im); high temperature for β ≤ 1.
#[pyfunction]
#[pyo3(signature = (r, beta, unit = Vec::new()))]
fn bc_state(r: &QmodZ, beta: f64, unit: Vec<(u64, u64)>) -> PyResult<(f64, f64)> {
    if beta <= 1.0 {
        return kms::bc_high_temperature(&r.0, beta).map(|v| (v, 0.0)).map_err(py_err);
    }
    let u = AdelicUnit::new(&unit).map_err(py_err)?;
    kms::bc_low_temperature(&r.0, beta, &u).map(|z| (z.re, z.im)).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (beta, q = 2, n = 1, big_n = 20))]
fn ratio_witness(beta: f64, q: u64, n: u32, big_n: u32) -> PyResult<f64> {
    let model = knotstat::catalog::MultiplicityModel::asymptotic(knotstat::catalog::C_UPPER, 1, 1).map_err(py_err)?;
    kms::ratio_witness(n, big_n, beta, q, &model).map(|r| r.ratio).map_err(py_err)
}

/// σₙ on a ℚ[ℚ/ℤ] element given as {"a/b": "coefficient"}.
#[pyfunction]
fn sigma_n(x: BTreeMap<String, String>, n: u64) -> PyResult<BTreeMap<String, String>> {
    Ok(to_py_ring(&crossed::sigma_n(&from_py_ring(x)?, n)))
}

/// αₙ on a ℚ[ℚ/ℤ] element given as {"a/b": "coefficient"}.
#[pyfunction]
fn alpha_n(x: BTreeMap<String, String>, n: u64) -> PyResult<BTreeMap<String, String>> {
    Ok(to_py_ring(&crossed::alpha_n(&from_py_ring(x)?, n)))
}

fn from_py_ring(x: BTreeMap<String, String>) -> PyResult<crossed::QQZ> {
    let mut out = crossed::QQZ::zero();
    for (r, c) in x {
        let c: BigRational = c.trim().parse().map_err(|e| PyValueError::new_err(format!("coefficient {c:?}: {e}")))?;
        out.add_term(r.parse().map_err(py_err)?, c);
    }
    Ok(out)
}

fn to_py_ring(x: &crossed::QQZ) -> BTreeMap<String, String> {
    x.terms().iter().map(|(r, c)| (r.to_string(), c.to_string())).collect()
}

/// Normal form of a word such as "mu:2 e:1/3 mu*:2".
#[pyfunction]
fn bc_normalize(word: &str) -> PyResult<String> {
    let w: Vec<BcSymbol> = crossed::parse_word(word).map_err(py_err)?;
    Ok(crossed::normalize(&w).to_string())
}

#[pyfunction]
fn bc_equal(a: &str, b: &str) -> PyResult<bool> {
    let wa = crossed::parse_word(a).map_err(py_err)?;
    let wb = crossed::parse_word(b).map_err(py_err)?;
    Ok(crossed::bc_relation_check(&wa, &wb).equal)
}

#[pymodule]
fn knotstat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<QmodZ>()?;
    m.add_class::<Knot>()?;
    m.add_class::<GroupElement>()?;
    m.add_class::<Presentation>()?;
    m.add_function(wrap_pyfunction!(thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(z_alternating, m)?)?;
    m.add_function(wrap_pyfunction!(z_grothendieck, m)?)?;
    m.add_function(wrap_pyfunction!(z_qstar, m)?)?;
    m.add_function(wrap_pyfunction!(bc_state, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_witness, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_n, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_n, m)?)?;
    m.add_function(wrap_pyfunction!(bc_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(bc_equal, m)?)?;
    Ok(())
}
