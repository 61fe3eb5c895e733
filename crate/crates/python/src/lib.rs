//! Python bindings. Signals are lists of floats, images are lists of rows.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use orpt::filterbank::{self, Cascade, Subbands, WaveletDecomposition};
use orpt::image2d::{self, BandLayout, ImagePlane, Transform2d};
use orpt::orpt::{Normalization, DEFAULT_PERIOD_THRESHOLD};
use orpt::{io, number_theory, ors};

fn value_err(e: orpt::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn io_err(e: io::FormatError) -> PyErr {
    PyIOError::new_err(e.to_string())
}

type Rows = Vec<Vec<f64>>;

fn plane(rows: Rows) -> PyResult<ImagePlane> {
    let height = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(PyValueError::new_err("rows must all have the same length"));
    }
    ImagePlane::new(height, width, 255, rows.concat()).map_err(value_err)
}

fn rows(img: &ImagePlane) -> Rows {
    (0..img.height).map(|r| img.row(r).to_vec()).collect()
}

fn normalization(normalized: bool) -> Normalization {
    if normalized {
        Normalization::Orthonormal
    } else {
        Normalization::Integer
    }
}

/// `[(prime, exponent), ...]`
#[pyfunction]
fn factorize(n: usize) -> PyResult<Vec<(usize, u32)>> {
    Ok(number_theory::factorize(n).map_err(value_err)?.factors().to_vec())
}

#[pyfunction]
fn totient(n: usize) -> PyResult<usize> {
    number_theory::totient(n).map_err(value_err)
}

#[pyfunction]
fn divisors(n: usize) -> PyResult<Vec<usize>> {
    number_theory::divisors(n).map_err(value_err)
}

#[pyfunction]
fn mobius(n: usize) -> PyResult<i64> {
    number_theory::mobius(n).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (q, length=None))]
fn ramanujan_sum(q: usize, length: Option<usize>) -> PyResult<Vec<i64>> {
    ors::ramanujan_sum(q, length.unwrap_or(q)).map_err(value_err)
}

#[pyfunction]
fn ors_prime(q: usize, k: usize) -> PyResult<Vec<i64>> {
    ors::ors_prime(q, k).map_err(value_err)
}

/// ORS of period `d`; one phase and one shift per prime factor of `d`.
#[pyfunction]
#[pyo3(signature = (d, phases, shifts, length=None))]
fn ors_divisor(d: usize, phases: Vec<usize>, shifts: Vec<usize>, length: Option<usize>) -> PyResult<Vec<i64>> {
    let v = ors::ors_divisor(d, &phases, &shifts, length.unwrap_or(d)).map_err(value_err)?;
    Ok(v.into_samples())
}

#[pyclass(name = "OrptBasis")]
struct OrptBasis {
    inner: orpt::orpt::OrptBasis,
}

#[pymethods]
impl OrptBasis {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        Ok(OrptBasis {
            inner: orpt::orpt::OrptBasis::new(n).map_err(value_err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("OrptBasis({})", self.inner.len())
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().map(|l| l.to_string()).collect()
    }

    fn divisors(&self) -> Vec<usize> {
        self.inner.columns().iter().map(|c| c.period()).collect()
    }

    fn sq_norms(&self) -> Vec<i64> {
        self.inner.sq_norms()
    }

    /// Row-major `R_N`.
    fn matrix(&self) -> Vec<Vec<i64>> {
        self.inner.matrix()
    }

    #[pyo3(signature = (x, normalized=false))]
    fn forward(&self, x: Vec<f64>, normalized: bool) -> PyResult<Vec<f64>> {
        Ok(self.inner.forward(&x, normalization(normalized)).map_err(value_err)?.beta)
    }

    #[pyo3(signature = (beta, normalized=false))]
    fn inverse(&self, beta: Vec<f64>, normalized: bool) -> PyResult<Vec<f64>> {
        self.inner.synthesize(&beta, normalization(normalized)).map_err(value_err)
    }

    fn period_energies(&self, x: Vec<f64>) -> PyResult<BTreeMap<usize, f64>> {
        self.inner.period_energies(&x).map_err(value_err)
    }

    /// `(detected divisors, lcm period or None)`
    #[pyo3(signature = (x, threshold=DEFAULT_PERIOD_THRESHOLD))]
    fn detect_periods(&self, x: Vec<f64>, threshold: f64) -> PyResult<(Vec<usize>, Option<usize>)> {
        let r = self.inner.detect_periods(&x, threshold).map_err(value_err)?;
        Ok((r.divisors, r.period))
    }
}

#[pyclass(name = "FilterBank")]
struct FilterBank {
    inner: filterbank::FilterBank,
}

#[pymethods]
impl FilterBank {
    #[new]
    fn new(q: usize, n: usize) -> PyResult<Self> {
        Ok(FilterBank {
            inner: filterbank::FilterBank::from_orpt(q, n).map_err(value_err)?,
        })
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.q()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn analysis_filters(&self) -> Rows {
        self.inner.analysis_filters().to_vec()
    }

    fn synthesis_filters(&self) -> Rows {
        self.inner.synthesis_filters()
    }

    /// `(passed, max deviation)`
    fn verify_unitary(&self) -> (bool, f64) {
        let r = self.inner.verify_unitary();
        (r.passed, r.max_deviation)
    }

    fn reconstruction_deviation(&self) -> f64 {
        self.inner.reconstruction_deviation()
    }

    /// `(smooth, [detail_2, ..., detail_q])`
    fn analyze(&self, z: Vec<f64>) -> PyResult<(Vec<f64>, Rows)> {
        let s = self.inner.analyze(&z).map_err(value_err)?;
        Ok((s.smooth, s.details))
    }

    fn synthesize(&self, smooth: Vec<f64>, details: Rows) -> PyResult<Vec<f64>> {
        self.inner.synthesize(&Subbands { smooth, details }).map_err(value_err)
    }
}

/// `p`-stage analysis. Returns `(details, smooth)` with `details[l-1][i-2] = y_i^l`.
#[pyfunction]
#[pyo3(signature = (z, q, stages, nonrecursive=false))]
fn dwt_analyze(z: Vec<f64>, q: usize, stages: u32, nonrecursive: bool) -> PyResult<(Vec<Rows>, Vec<f64>)> {
    let dec = if nonrecursive {
        filterbank::equivalent_filters(q, z.len(), stages).and_then(|f| f.analyze(&z))
    } else {
        Cascade::new(q, z.len(), stages).and_then(|c| c.analyze(&z))
    }
    .map_err(value_err)?;
    Ok((dec.details, dec.smooth))
}

#[pyfunction]
#[pyo3(signature = (details, smooth, q, nonrecursive=false))]
fn dwt_synthesize(details: Vec<Rows>, smooth: Vec<f64>, q: usize, nonrecursive: bool) -> PyResult<Vec<f64>> {
    let stages = details.len() as u32;
    let len = smooth.len() * q.checked_pow(stages).unwrap_or(0);
    let dec = WaveletDecomposition {
        q,
        len,
        details,
        smooth,
    };
    if nonrecursive {
        filterbank::equivalent_filters(q, len, stages).and_then(|f| f.synthesize(&dec))
    } else {
        Cascade::new(q, len, stages).and_then(|c| c.synthesize(&dec))
    }
    .map_err(value_err)
}

#[pyfunction]
fn image_forward(image: Rows, q: usize, stages: u32) -> PyResult<Rows> {
    let t = image2d::forward2d(&plane(image)?, q, stages).map_err(value_err)?;
    Ok(rows(&t.coeffs))
}

#[pyfunction]
fn image_inverse(coeffs: Rows, q: usize, stages: u32) -> PyResult<Rows> {
    let coeffs = plane(coeffs)?;
    let layout = BandLayout {
        height: coeffs.height,
        width: coeffs.width,
        q_rows: q,
        q_cols: q,
        stages,
    };
    let img = image2d::inverse2d(&Transform2d { coeffs, layout }).map_err(value_err)?;
    Ok(rows(&img))
}

/// Sorted-magnitude cumulative energy fraction; the last entry is 1.
#[pyfunction]
fn cumulative_energy(values: Vec<f64>) -> PyResult<Vec<f64>> {
    image2d::cumulative_energy(&values).map_err(value_err)
}

/// `(reconstruction, psnr)` keeping the `k` largest coefficients.
#[pyfunction]
fn topk_reconstruct(image: Rows, q: usize, stages: u32, k: usize) -> PyResult<(Rows, f64)> {
    let t = image2d::topk_reconstruct(&plane(image)?, q, stages, k).map_err(value_err)?;
    Ok((rows(&t.image), t.psnr))
}

#[pyfunction]
fn synthetic_image(height: usize, width: usize) -> Rows {
    rows(&image2d::synthetic_gradient_image(height, width))
}

#[pyfunction]
fn read_pgm(path: PathBuf) -> PyResult<Rows> {
    Ok(rows(&io::read_pgm(&path).map_err(io_err)?))
}

#[pyfunction]
fn write_pgm(image: Rows, path: PathBuf) -> PyResult<()> {
    io::write_pgm(&plane(image)?, &path).map_err(io_err)
}

#[pymodule]
#[pyo3(name = "orpt")]
fn orpt_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(totient, m)?)?;
    m.add_function(wrap_pyfunction!(divisors, m)?)?;
    m.add_function(wrap_pyfunction!(mobius, m)?)?;
    m.add_function(wrap_pyfunction!(ramanujan_sum, m)?)?;
    m.add_function(wrap_pyfunction!(ors_prime, m)?)?;
    m.add_function(wrap_pyfunction!(ors_divisor, m)?)?;
    m.add_function(wrap_pyfunction!(dwt_analyze, m)?)?;
    m.add_function(wrap_pyfunction!(dwt_synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(image_forward, m)?)?;
    m.add_function(wrap_pyfunction!(image_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(cumulative_energy, m)?)?;
    m.add_function(wrap_pyfunction!(topk_reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(synthetic_image, m)?)?;
    m.add_function(wrap_pyfunction!(read_pgm, m)?)?;
    m.add_function(wrap_pyfunction!(write_pgm, m)?)?;
    m.add_class::<OrptBasis>()?;
    m.add_class::<FilterBank>()?;
    Ok(())
}
