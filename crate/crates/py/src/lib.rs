//! Python bindings: `import superspecial`.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use superspecial::arith::{self, ResidueMatrix};
use superspecial::modclass::{self, DecompInvariants};
use superspecial::qform::{self, Disc};
use superspecial::{count, hecke, Error};

create_exception!(superspecial, InvalidModuleError, PyValueError);
create_exception!(superspecial, PrecisionError, PyRuntimeError);
create_exception!(superspecial, InvariantError, PyRuntimeError);

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::InvalidModule(_) => InvalidModuleError::new_err(msg),
        Error::Precision(_) => PrecisionError::new_err(msg),
        Error::Invariant(_) => InvariantError::new_err(msg),
        _ => PyValueError::new_err(msg),
    }
}

trait PyResultExt<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> PyResultExt<T> for superspecial::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn disc(d: i64) -> PyResult<Disc> {
    Disc::new(d).py()
}

#[pyfunction]
fn kronecker(d: i64, n: u64) -> i8 {
    arith::kronecker(d, n)
}

#[pyfunction]
fn is_prime(n: u64) -> bool {
    arith::is_prime(n)
}

#[pyfunction]
fn hensel_alpha_roots(p: u64, k: u32) -> PyResult<(u64, u64)> {
    let r = arith::hensel_alpha_roots(p, k).py()?;
    Ok((r.alpha1, r.alpha2))
}

fn matrix_from_rows(k: u32, rows: Vec<Vec<i64>>) -> PyResult<ResidueMatrix> {
    ResidueMatrix::from_rows(k, &rows).py()
}

#[pyfunction]
fn rank_mod2(rows: Vec<Vec<i64>>) -> PyResult<usize> {
    Ok(arith::rank_mod2(&matrix_from_rows(arith::MIN_PRECISION, rows)?))
}

/// Valuations of the Smith normal form over `Z/2^k`; `None` stands for a zero pivot.
#[pyfunction]
fn snf_mod2k(rows: Vec<Vec<i64>>, k: u32) -> PyResult<Vec<Option<u32>>> {
    let m = matrix_from_rows(k, rows)?;
    Ok(arith::snf_mod2k(&m)
        .into_iter()
        .map(|v| match v {
            arith::Valuation::Finite(e) => Some(e),
            arith::Valuation::Infinite => None,
        })
        .collect())
}

#[pyclass(frozen, eq, hash, from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct QuadForm(qform::QuadForm);

#[pymethods]
impl QuadForm {
    #[new]
    fn new(a: i64, b: i64, c: i64) -> PyResult<Self> {
        Ok(QuadForm(qform::QuadForm::new(a, b, c).py()?))
    }

    #[staticmethod]
    fn principal(d: i64) -> PyResult<Self> {
        disc(d)?;
        Ok(QuadForm(qform::QuadForm::principal(d)))
    }

    #[getter]
    fn a(&self) -> i64 {
        self.0.a
    }

    #[getter]
    fn b(&self) -> i64 {
        self.0.b
    }

    #[getter]
    fn c(&self) -> i64 {
        self.0.c
    }

    fn discriminant(&self) -> i64 {
        self.0.discriminant()
    }

    fn is_reduced(&self) -> bool {
        self.0.is_reduced()
    }

    fn reduce(&self) -> PyResult<Self> {
        Ok(QuadForm(qform::reduce(&self.0).py()?))
    }

    fn compose(&self, other: &QuadForm) -> PyResult<Self> {
        Ok(QuadForm(qform::compose(&self.0, &other.0).py()?))
    }

    fn __mul__(&self, other: &QuadForm) -> PyResult<Self> {
        self.compose(other)
    }

    fn inverse(&self) -> Self {
        QuadForm(self.0.inverse())
    }

    fn order(&self) -> PyResult<u64> {
        qform::class_order(&self.0).py()
    }

    fn as_tuple(&self) -> (i64, i64, i64) {
        (self.0.a, self.0.b, self.0.c)
    }

    fn __repr__(&self) -> String {
        format!("QuadForm{}", self.0)
    }
}

#[pyfunction]
fn class_number(d: i64) -> PyResult<u64> {
    qform::class_number(&disc(d)?).py()
}

#[pyfunction]
fn class_number_dirichlet(d: i64) -> PyResult<u64> {
    qform::class_number_dirichlet(&disc(d)?).py()
}

#[pyfunction]
fn reduced_forms(d: i64) -> PyResult<Vec<QuadForm>> {
    Ok(qform::reduced_forms(&disc(d)?)
        .py()?
        .into_iter()
        .map(QuadForm)
        .collect())
}

#[pyfunction]
fn pic_localized(d: i64, ell: u64) -> PyResult<u64> {
    qform::pic_localized(&disc(d)?, ell).py()
}

#[pyclass(frozen)]
struct ClassGroup(qform::FormClassGroup);

#[pymethods]
impl ClassGroup {
    #[new]
    fn new(d: i64) -> PyResult<Self> {
        Ok(ClassGroup(qform::FormClassGroup::new(&disc(d)?).py()?))
    }

    fn __len__(&self) -> usize {
        self.0.size()
    }

    fn elements(&self) -> Vec<QuadForm> {
        self.0.elements().iter().copied().map(QuadForm).collect()
    }

    fn orders(&self) -> Vec<u64> {
        self.0.orders().to_vec()
    }

    fn identity(&self) -> usize {
        self.0.identity()
    }

    fn compose(&self, i: usize, j: usize) -> PyResult<usize> {
        let n = self.0.size();
        if i >= n || j >= n {
            return Err(PyValueError::new_err("class index out of range"));
        }
        Ok(self.0.compose(i, j))
    }

    fn inverse(&self, i: usize) -> PyResult<usize> {
        if i >= self.0.size() {
            return Err(PyValueError::new_err("class index out of range"));
        }
        Ok(self.0.inverse(i))
    }

    fn exponent(&self) -> u64 {
        self.0.exponent()
    }

    fn is_cyclic(&self) -> bool {
        self.0.is_cyclic()
    }
}

#[pyclass(frozen, eq, from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct Invariants(DecompInvariants);

impl From<DecompInvariants> for Invariants {
    fn from(inv: DecompInvariants) -> Self {
        Invariants(inv)
    }
}

#[pymethods]
impl Invariants {
    #[getter]
    fn case(&self) -> String {
        self.0.case.to_string()
    }

    #[getter]
    fn r(&self) -> usize {
        self.0.r
    }

    #[getter]
    fn s(&self) -> usize {
        self.0.s
    }

    #[getter]
    fn t(&self) -> Option<usize> {
        self.0.t
    }

    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn is_tate_like(&self) -> bool {
        self.0.is_tate_like()
    }

    fn __repr__(&self) -> String {
        match self.0.t {
            Some(t) => format!("Invariants(case='b', r={}, s={}, t={t})", self.0.r, self.0.s),
            None => format!("Invariants(case='a', r={}, s={})", self.0.r, self.0.s),
        }
    }
}

#[pyclass(frozen)]
struct TwoAdicModule(modclass::TwoAdicModule);

#[pymethods]
impl TwoAdicModule {
    /// `rows` is the matrix of ω; entries may be signed and are reduced mod 2^k.
    #[new]
    fn new(p: u64, k: u32, rows: Vec<Vec<i64>>) -> PyResult<Self> {
        Ok(TwoAdicModule(modclass::TwoAdicModule::new(p, matrix_from_rows(k, rows)?)))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(TwoAdicModule(modclass::TwoAdicModule::from_json(text).py()?))
    }

    #[staticmethod]
    #[pyo3(signature = (p, k, r, s, t=None))]
    fn canonical(p: u64, k: u32, r: usize, s: usize, t: Option<usize>) -> PyResult<Self> {
        Ok(TwoAdicModule(modclass::canonical_module(p, k, r, s, t).py()?))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0.to_document()).expect("serializable")
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.0.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn matrix(&self) -> Vec<Vec<u64>> {
        self.0.matrix().rows()
    }

    /// `(True, None)` or `(False, diagnostic)`.
    fn validate(&self) -> (bool, Option<String>) {
        let v = modclass::validate(&self.0);
        (v.is_valid(), v.diagnostic().map(str::to_string))
    }

    fn decompose(&self) -> PyResult<Invariants> {
        Ok(modclass::decompose(&self.0).py()?.into())
    }

    /// Splitting basis (as rows of the change-of-basis matrix) and invariants.
    fn split(&self) -> PyResult<(Vec<Vec<u64>>, Invariants)> {
        let sp = modclass::split(&self.0).py()?;
        Ok((sp.basis.rows(), sp.invariants.into()))
    }

    fn random_conjugate(&self, seed: u64) -> PyResult<Self> {
        Ok(TwoAdicModule(modclass::random_conjugate(&self.0, seed).py()?))
    }

    fn __eq__(&self, other: &TwoAdicModule) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("TwoAdicModule(p={}, k={}, n={})", self.0.p(), self.0.k(), self.0.n())
    }
}

#[pyclass(frozen, get_all)]
struct CountReport {
    p: u64,
    g: u32,
    branch: String,
    h_field: u64,
    h_order: u64,
    unit_index: u64,
    per_genus: Vec<u64>,
    total: u64,
    json: String,
}

#[pymethods]
impl CountReport {
    fn __repr__(&self) -> String {
        format!("CountReport({})", self.json)
    }
}

#[pyfunction]
fn count_superspecial(p: u64, g: u32) -> PyResult<CountReport> {
    let r = count::count_superspecial(p, g).py()?;
    Ok(CountReport {
        json: serde_json::to_string(&r).expect("serializable"),
        p: r.p,
        g: r.g,
        branch: r.branch.label().to_string(),
        h_field: r.h_field,
        h_order: r.h_order,
        unit_index: r.unit_index,
        per_genus: r.per_genus,
        total: r.total,
    })
}

/// `(per_genus, total)`.
#[pyfunction]
fn count_via_genus_sum(p: u64, g: u32) -> PyResult<(Vec<u64>, u64)> {
    let r = count::count_via_genus_sum(p, g).py()?;
    Ok((r.per_genus, r.total))
}

#[pyfunction]
fn unit_index(p: u64) -> PyResult<u64> {
    count::unit_index(p).py()
}

#[pyfunction]
fn deuring_hprime(p: u64) -> PyResult<u64> {
    count::deuring_hprime(p).py()
}

#[pyfunction]
fn eichler_h(p: u64) -> PyResult<u64> {
    count::eichler_h(p).py()
}

#[pyfunction]
fn type_number_check(p: u64) -> PyResult<u64> {
    count::type_number_check(p).py()
}

#[pyfunction]
fn sprime_small(p: u64) -> PyResult<u64> {
    count::sprime_small(p).py()
}

#[pyclass(frozen, get_all)]
struct HeckeReport {
    p: u64,
    g: u32,
    ell: u64,
    pic_o_loc: u64,
    pic_r_loc: u64,
    guarantee: bool,
    orbit_total_guaranteed: Option<u64>,
    per_genus_quotients: Vec<u64>,
    json: String,
}

#[pymethods]
impl HeckeReport {
    fn __repr__(&self) -> String {
        format!("HeckeReport({})", self.json)
    }
}

#[pyfunction]
fn hecke_orbit_report(p: u64, g: u32, ell: u64) -> PyResult<HeckeReport> {
    let r = hecke::hecke_orbit_report(p, g, ell).py()?;
    Ok(HeckeReport {
        json: serde_json::to_string(&r).expect("serializable"),
        p: r.p,
        g: r.g,
        ell: r.ell,
        pic_o_loc: r.pic_o_loc,
        pic_r_loc: r.pic_r_loc,
        guarantee: r.guarantee,
        orbit_total_guaranteed: r.orbit_total_guaranteed,
        per_genus_quotients: r.per_genus_quotients,
    })
}

#[pymodule]
#[pyo3(name = "superspecial")]
fn superspecial_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("InvalidModuleError", py.get_type::<InvalidModuleError>())?;
    m.add("PrecisionError", py.get_type::<PrecisionError>())?;
    m.add("InvariantError", py.get_type::<InvariantError>())?;
    m.add_class::<QuadForm>()?;
    m.add_class::<ClassGroup>()?;
    m.add_class::<Invariants>()?;
    m.add_class::<TwoAdicModule>()?;
    m.add_class::<CountReport>()?;
    m.add_class::<HeckeReport>()?;
    m.add_function(wrap_pyfunction!(kronecker, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(hensel_alpha_roots, m)?)?;
    m.add_function(wrap_pyfunction!(rank_mod2, m)?)?;
    m.add_function(wrap_pyfunction!(snf_mod2k, m)?)?;
    m.add_function(wrap_pyfunction!(class_number, m)?)?;
    m.add_function(wrap_pyfunction!(class_number_dirichlet, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_forms, m)?)?;
    m.add_function(wrap_pyfunction!(pic_localized, m)?)?;
    m.add_function(wrap_pyfunction!(count_superspecial, m)?)?;
    m.add_function(wrap_pyfunction!(count_via_genus_sum, m)?)?;
    m.add_function(wrap_pyfunction!(unit_index, m)?)?;
    m.add_function(wrap_pyfunction!(deuring_hprime, m)?)?;
    m.add_function(wrap_pyfunction!(eichler_h, m)?)?;
    m.add_function(wrap_pyfunction!(type_number_check, m)?)?;
    m.add_function(wrap_pyfunction!(sprime_small, m)?)?;
    m.add_function(wrap_pyfunction!(hecke_orbit_report, m)?)?;
    Ok(())
}
