//! Python bindings: images, noise, filters, detectors, scoring, plates and
//! the benchmark runner.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use platebench::bench::{self, BenchConfig, ReportFormat};
use platebench::detectors::{self, Detector, DetectorParams};
use platebench::filters::{self, EnhanceConfig};
use platebench::morphology::{self, StructuringElement};
use platebench::noise::{NoiseKind, NoiseSpec};
use platebench::plate::{PlateSpec, PlateStyle};
use platebench::{pnm, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Grayscale image with real-valued pixels, row-major.
#[pyclass(name = "GrayImage", module = "pyplatebench", from_py_object)]
#[derive(Clone)]
struct PyGrayImage(platebench::GrayImage);

#[pymethods]
impl PyGrayImage {
    #[new]
    fn new(width: usize, height: usize, pixels: Vec<f64>) -> PyResult<Self> {
        platebench::GrayImage::new(width, height, pixels)
            .map(Self)
            .map_err(py_err)
    }

    #[staticmethod]
    fn filled(width: usize, height: usize, value: f64) -> Self {
        Self(platebench::GrayImage::filled(width, height, value))
    }

    #[getter]
    fn width(&self) -> usize {
        self.0.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.0.height()
    }

    fn pixels(&self) -> Vec<f64> {
        self.0.pixels().to_vec()
    }

    fn get(&self, x: usize, y: usize) -> PyResult<f64> {
        if x >= self.0.width() || y >= self.0.height() {
            return Err(PyValueError::new_err(format!(
                "pixel ({x}, {y}) out of bounds"
            )));
        }
        Ok(self.0.get(x, y))
    }

    fn quantize(&self) -> Self {
        Self(platebench::quantize(&self.0))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("GrayImage({}x{})", self.0.width(), self.0.height())
    }
}

/// Binary edge map, row-major.
#[pyclass(name = "EdgeMap", module = "pyplatebench", from_py_object)]
#[derive(Clone)]
struct PyEdgeMap(platebench::EdgeMap);

#[pymethods]
impl PyEdgeMap {
    #[new]
    fn new(width: usize, height: usize, bits: Vec<bool>) -> PyResult<Self> {
        platebench::EdgeMap::new(width, height, bits)
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn width(&self) -> usize {
        self.0.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.0.height()
    }

    fn bits(&self) -> Vec<bool> {
        self.0.bits().to_vec()
    }

    fn count(&self) -> usize {
        self.0.count()
    }

    fn to_gray(&self) -> PyGrayImage {
        PyGrayImage(self.0.to_gray())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!(
            "EdgeMap({}x{}, {} edges)",
            self.0.width(),
            self.0.height(),
            self.0.count()
        )
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(py_err)
}

/// Decode PGM/PPM bytes; colour images are converted to gray.
#[pyfunction]
fn load_pnm(data: &[u8]) -> PyResult<PyGrayImage> {
    pnm::load_pnm(data)
        .map(|img| PyGrayImage(img.into_gray()))
        .map_err(|e| py_err(e.into()))
}

/// Encode a quantized image as binary PGM.
#[pyfunction]
fn save_pgm<'py>(py: Python<'py>, img: &PyGrayImage) -> PyResult<Bound<'py, PyBytes>> {
    let bytes = pnm::save_pgm(&img.0).map_err(py_err)?;
    Ok(PyBytes::new(py, &bytes))
}

/// Corrupt an image with `impulse` or `speckle` noise.
#[pyfunction]
#[pyo3(signature = (img, kind, level, seed = 0))]
fn add_noise(img: &PyGrayImage, kind: &str, level: f64, seed: u64) -> PyResult<PyGrayImage> {
    let kind: NoiseKind = parse(kind)?;
    let spec = NoiseSpec::new(kind, level, seed).map_err(py_err)?;
    platebench::noise::add_noise(&img.0, &spec)
        .map(PyGrayImage)
        .map_err(py_err)
}

#[pyfunction]
fn box_average(img: &PyGrayImage) -> PyGrayImage {
    PyGrayImage(filters::box_average(&img.0))
}

#[pyfunction]
#[pyo3(signature = (img, window = 3))]
fn median_filter(img: &PyGrayImage, window: usize) -> PyResult<PyGrayImage> {
    filters::median_filter(&img.0, window)
        .map(PyGrayImage)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (img, m = 1.0, sigma = 0.2))]
fn enhance_power(img: &PyGrayImage, m: f64, sigma: f64) -> PyResult<PyGrayImage> {
    filters::enhance_power(&img.0, &EnhanceConfig { m, sigma })
        .map(PyGrayImage)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (img, size = 3))]
fn dilate(img: &PyGrayImage, size: usize) -> PyResult<PyGrayImage> {
    let se = StructuringElement::rect(size, size).map_err(py_err)?;
    Ok(PyGrayImage(morphology::dilate(&img.0, &se)))
}

#[pyfunction]
#[pyo3(signature = (img, size = 3))]
fn erode(img: &PyGrayImage, size: usize) -> PyResult<PyGrayImage> {
    let se = StructuringElement::rect(size, size).map_err(py_err)?;
    Ok(PyGrayImage(morphology::erode(&img.0, &se)))
}

/// Run one detector. `threshold` is "auto" or a number and applies to
/// sobel, prewitt, roberts, laplacian and morph.
#[pyfunction]
#[pyo3(signature = (img, detector, threshold = "auto"))]
fn detect(img: &PyGrayImage, detector: &str, threshold: &str) -> PyResult<PyEdgeMap> {
    let detector: Detector = parse(detector)?;
    let t = parse(threshold)?;
    let params = DetectorParams {
        gradient_threshold: t,
        laplacian_threshold: t,
        morph_threshold: t,
        ..DetectorParams::default()
    };
    detectors::detect(&img.0, detector, &params)
        .map(PyEdgeMap)
        .map_err(py_err)
}

/// Pratt Figure of Merit: `(score, k_actual, k_detected)`.
#[pyfunction]
#[pyo3(signature = (detected, truth, n = platebench::PRATT_SCALE))]
fn pfom(detected: &PyEdgeMap, truth: &PyEdgeMap, n: f64) -> PyResult<(f64, usize, usize)> {
    let r = platebench::pfom(&detected.0, &truth.0, n).map_err(py_err)?;
    Ok((r.score, r.k_actual, r.k_detected))
}

/// Render a synthetic plate and its ground truth.
#[pyfunction]
#[pyo3(signature = (text, style = "clean", seed = 0, width = 240, height = 80, blur = 0.0))]
fn render_plate(
    text: &str,
    style: &str,
    seed: u64,
    width: usize,
    height: usize,
    blur: f64,
) -> PyResult<(PyGrayImage, PyEdgeMap)> {
    let style: PlateStyle = parse(style)?;
    let spec = PlateSpec {
        width,
        height,
        text: text.to_string(),
        style,
        seed,
        blur_sigma: blur,
        ..PlateSpec::default()
    };
    let (img, truth) = platebench::plate::render_plate(&spec).map_err(py_err)?;
    Ok((PyGrayImage(img), PyEdgeMap(truth)))
}

/// Run a sweep described by config text; returns one dict per row.
#[pyfunction]
fn run_benchmark(py: Python<'_>, config: &str) -> PyResult<Vec<Py<PyAny>>> {
    let cfg = BenchConfig::parse(config).map_err(py_err)?;
    let rows = py.detach(|| bench::run_benchmark(&cfg)).map_err(py_err)?;
    rows.into_iter()
        .map(|r| {
            let d = pyo3::types::PyDict::new(py);
            d.set_item("plate_id", r.plate_id)?;
            d.set_item("detector", r.detector)?;
            d.set_item("noise_kind", r.noise_kind.as_str())?;
            d.set_item("level", r.level)?;
            d.set_item("seed", r.seed)?;
            d.set_item("pfom", r.pfom_score)?;
            d.set_item("k_actual", r.k_actual)?;
            d.set_item("k_detected", r.k_detected)?;
            d.set_item("wall_time_ms", r.wall_time_ms)?;
            Ok(d.into_any().unbind())
        })
        .collect()
}

/// Run a sweep and render it as `csv` or `markdown`.
#[pyfunction]
#[pyo3(signature = (config, format = "csv"))]
fn benchmark_report(py: Python<'_>, config: &str, format: &str) -> PyResult<String> {
    let cfg = BenchConfig::parse(config).map_err(py_err)?;
    let format: ReportFormat = parse(format)?;
    let rows = py.detach(|| bench::run_benchmark(&cfg)).map_err(py_err)?;
    let bytes = bench::write_report(&rows, format).map_err(py_err)?;
    Ok(String::from_utf8(bytes).expect("reports are ascii"))
}

#[pymodule]
fn pyplatebench(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrayImage>()?;
    m.add_class::<PyEdgeMap>()?;
    m.add_function(wrap_pyfunction!(load_pnm, m)?)?;
    m.add_function(wrap_pyfunction!(save_pgm, m)?)?;
    m.add_function(wrap_pyfunction!(add_noise, m)?)?;
    m.add_function(wrap_pyfunction!(box_average, m)?)?;
    m.add_function(wrap_pyfunction!(median_filter, m)?)?;
    m.add_function(wrap_pyfunction!(enhance_power, m)?)?;
    m.add_function(wrap_pyfunction!(dilate, m)?)?;
    m.add_function(wrap_pyfunction!(erode, m)?)?;
    m.add_function(wrap_pyfunction!(detect, m)?)?;
    m.add_function(wrap_pyfunction!(pfom, m)?)?;
    m.add_function(wrap_pyfunction!(render_plate, m)?)?;
    m.add_function(wrap_pyfunction!(run_benchmark, m)?)?;
    m.add_function(wrap_pyfunction!(benchmark_report, m)?)?;
    m.add("PRATT_SCALE", platebench::PRATT_SCALE)?;
    Ok(())
}
