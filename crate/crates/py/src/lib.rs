//! Python bindings: the algebra, its elements, diagrams and the 3-manifold invariants.

use std::sync::Arc;

use pyo3::exceptions::{PyArithmeticError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use ::gcoalg::diagrams::GDiagram;
use ::gcoalg::manifolds::SurgeryPresentation;
use ::gcoalg::{AlgElem as CoreElem, Backend, Color, Error, GaussQ, RootData, Scalar as CoreScalar, TensorElem, Uq as CoreUq};

fn err(e: Error) -> PyErr {
    match e {
        Error::DivisionByZero(_) => PyZeroDivisionError::new_err(e.to_string()),
        Error::NotComputable(_) | Error::Verification(_) => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn color(s: &str) -> PyResult<Color> {
    s.parse::<GaussQ>().map(Color::new).map_err(|e| PyValueError::new_err(format!("color {s:?}: {e}")))
}

fn gauss(s: &str) -> PyResult<GaussQ> {
    s.parse::<GaussQ>().map_err(|e| PyValueError::new_err(format!("{s:?}: {e}")))
}

/// An exact cyclotomic number or a floating point approximation.
#[pyclass(frozen)]
struct Scalar(CoreScalar);

#[pymethods]
impl Scalar {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Scalar).map_err(err)
    }

    fn __complex__(&self) -> num_complex::Complex64 {
        self.0.to_complex()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Scalar({:?})", self.0.to_string())
    }

    fn __eq__(&self, o: &Scalar) -> bool {
        self.0 == o.0
    }

    fn is_exact(&self) -> bool {
        self.0.is_exact()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Unrolled quantum sl2 at the root of unity of order `ell`.
#[pyclass(frozen)]
struct Uq(Arc<CoreUq>);

/// An element of the algebra in one grade.
#[pyclass(frozen)]
struct Elem {
    uq: Arc<CoreUq>,
    x: CoreElem,
}

/// An element of a tensor product of graded pieces.
#[pyclass(frozen)]
struct Tensor(TensorElem);

impl Uq {
    fn wrap(&self, x: CoreElem) -> Elem {
        Elem { uq: self.0.clone(), x }
    }
}

#[pymethods]
impl Uq {
    #[new]
    #[pyo3(signature = (ell, eta = "1", backend = "exact"))]
    fn new(ell: u32, eta: &str, backend: &str) -> PyResult<Self> {
        let backend = match backend {
            "exact" => Backend::Exact,
            "approx" => Backend::Approx,
            _ => return Err(PyValueError::new_err(format!("backend must be exact or approx, got {backend:?}"))),
        };
        let eta: CoreScalar = eta.parse().map_err(err)?;
        let root = RootData::new(ell, eta.to_backend(backend), backend).map_err(err)?;
        Ok(Uq(Arc::new(CoreUq::new(root).map_err(err)?)))
    }

    #[getter]
    fn ell(&self) -> u32 {
        self.0.ell()
    }

    #[getter]
    fn ellp(&self) -> u32 {
        self.0.ellp()
    }

    fn one(&self, a: &str) -> PyResult<Elem> {
        Ok(self.wrap(self.0.one(color(a)?)))
    }

    fn e(&self, a: &str) -> PyResult<Elem> {
        Ok(self.wrap(self.0.e(color(a)?)))
    }

    fn f(&self, a: &str) -> PyResult<Elem> {
        Ok(self.wrap(self.0.f(color(a)?)))
    }

    fn k(&self, a: &str, q: &str) -> PyResult<Elem> {
        Ok(self.wrap(self.0.k(color(a)?, gauss(q)?)))
    }

    fn pivot(&self, a: &str) -> PyResult<Elem> {
        Ok(self.wrap(self.0.pivot(color(a)?)))
    }

    fn pivot_inv(&self, a: &str) -> PyResult<Elem> {
        Ok(self.wrap(self.0.pivot_inv(color(a)?)))
    }

    fn twist(&self, a: &str) -> PyResult<Elem> {
        Ok(self.wrap(self.0.twist(color(a)?).map_err(err)?))
    }

    fn coproduct(&self, x: &Elem, a: &str, b: &str) -> PyResult<Tensor> {
        Ok(Tensor(self.0.coproduct(&x.x, color(a)?, color(b)?).map_err(err)?))
    }

    fn antipode(&self, x: &Elem) -> Elem {
        self.wrap(self.0.antipode(&x.x))
    }

    fn counit(&self, x: &Elem) -> PyResult<Scalar> {
        self.0.counit(&x.x).map(Scalar).map_err(err)
    }

    fn r_matrix(&self, a: &str, b: &str) -> PyResult<Tensor> {
        Ok(Tensor((*self.0.r_matrix(color(a)?, color(b)?).map_err(err)?).clone()))
    }

    /// The right integral `mu`.
    fn mu(&self, x: &Elem) -> Scalar {
        Scalar(self.0.mu(&x.x))
    }

    /// The modified integral `mu'`, defined in admissible grades.
    fn mu_mod(&self, x: &Elem) -> PyResult<Scalar> {
        self.0.mu_mod(&x.x).map(Scalar).map_err(err)
    }

    fn solve_z(&self, a: &str) -> PyResult<Elem> {
        Ok(self.wrap((*self.0.solve_z(color(a)?).map_err(err)?).clone()))
    }

    /// `(delta_+, delta_-)`.
    fn deltas(&self) -> PyResult<(Scalar, Scalar)> {
        let d = self.0.deltas().map_err(err)?;
        Ok((Scalar(d.plus), Scalar(d.minus)))
    }

    fn modified_dimension(&self, a: &str, k: u32) -> PyResult<Scalar> {
        self.0.modified_dimension(color(a)?, k).map(Scalar).map_err(err)
    }

    fn universal_invariant(&self, d: &Diagram) -> PyResult<Tensor> {
        self.0.universal_invariant(&d.0).map(Tensor).map_err(err)
    }

    fn hv(&self, d: &Diagram) -> PyResult<Scalar> {
        let p = SurgeryPresentation::new(d.0.clone()).map_err(err)?;
        Ok(Scalar(p.hv(&self.0).map_err(err)?.value))
    }

    fn hv_mod(&self, d: &Diagram, cut: usize) -> PyResult<Scalar> {
        let p = SurgeryPresentation::new(d.0.clone()).map_err(err)?;
        Ok(Scalar(p.hv_mod(&self.0, cut).map_err(err)?.value))
    }
}

#[pymethods]
impl Elem {
    #[getter]
    fn grade(&self) -> String {
        self.x.grade.to_string()
    }

    fn __str__(&self) -> String {
        self.x.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Elem({})", self.x)
    }

    fn __add__(&self, o: &Elem) -> PyResult<Elem> {
        Ok(Elem { uq: self.uq.clone(), x: self.x.add(&o.x).map_err(err)? })
    }

    fn __sub__(&self, o: &Elem) -> PyResult<Elem> {
        Ok(Elem { uq: self.uq.clone(), x: self.x.sub(&o.x).map_err(err)? })
    }

    fn __mul__(&self, o: &Elem) -> PyResult<Elem> {
        Ok(Elem { uq: self.uq.clone(), x: self.uq.mul(&self.x, &o.x).map_err(err)? })
    }

    fn scale(&self, s: &Scalar) -> Elem {
        Elem { uq: self.uq.clone(), x: self.x.scale(&s.0) }
    }

    fn __eq__(&self, o: &Elem) -> bool {
        self.x.equals(&o.x)
    }

    fn is_zero(&self) -> bool {
        self.x.is_zero()
    }
}

#[pymethods]
impl Tensor {
    #[getter]
    fn grades(&self) -> Vec<String> {
        self.0.grades.iter().map(ToString::to_string).collect()
    }

    fn __len__(&self) -> usize {
        self.0.terms.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __eq__(&self, o: &Tensor) -> bool {
        self.0.equals(&o.0)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("tensors serialize")
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Tensor> {
        serde_json::from_str(text).map(Tensor).map_err(|e| PyValueError::new_err(e.to_string()))
    }
}

/// A colored, oriented tangle diagram.
#[pyclass(frozen)]
struct Diagram(GDiagram);

#[pymethods]
impl Diagram {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Diagram> {
        GDiagram::parse(text).map(Diagram).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Diagram> {
        GDiagram::from_json(text).map(Diagram).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn num_components(&self) -> usize {
        self.0.num_components()
    }

    #[getter]
    fn colors(&self) -> Vec<String> {
        self.0.colors().iter().map(ToString::to_string).collect()
    }
}

#[pyfunction]
fn set_tolerance(tol: f64) -> PyResult<()> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(PyValueError::new_err("tolerance must be positive"));
    }
    ::gcoalg::scalar::set_tolerance(tol);
    Ok(())
}

#[pymodule]
fn gcoalg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scalar>()?;
    m.add_class::<Uq>()?;
    m.add_class::<Elem>()?;
    m.add_class::<Tensor>()?;
    m.add_class::<Diagram>()?;
    m.add_function(wrap_pyfunction!(set_tolerance, m)?)?;
    Ok(())
}
