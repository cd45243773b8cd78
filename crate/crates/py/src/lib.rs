//! Python bindings: frames, bodies of evidence, the three measures, Dempster's
//! rule, evidence files and Markov-tree marginals.

use std::collections::BTreeMap;

use evtree::cli::{self, CliError, EvidenceFile, FileBody};
use evtree::{
    bel_brute, bel_partition, bel_via_complement, build_partition, choose_strategy, combine, normalize,
    pl_brute, pl_partition, pl_via_complement, q_brute, q_partition, q_via_tree, Body, BodyOfEvidence,
    FocalSet, Measure, OpCounter, Phase, ProductFrame, Space, Strategy,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(pyevtree, EvidenceError, PyException, "Invalid evidence or a refused operation.");

fn to_py(e: evtree::EvidenceError) -> PyErr {
    EvidenceError::new_err(e.to_string())
}

fn cli_to_py(e: CliError) -> PyErr {
    match e {
        CliError::Evidence(e) => to_py(e),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn counters(c: &OpCounter) -> BTreeMap<String, u64> {
    let mut out: BTreeMap<String, u64> = Phase::ALL.iter().map(|p| (p.name().to_string(), c.phase(*p))).collect();
    out.insert("mass_transfers".into(), c.mass_transfers());
    out.insert("root_designations".into(), c.root_designations());
    out.insert("total".into(), c.total());
    out
}

fn parse_strategy(name: &str) -> PyResult<Option<Strategy>> {
    if name == "auto" {
        return Ok(None);
    }
    name.parse().map(Some).map_err(PyValueError::new_err)
}

fn parse_measure(name: &str) -> PyResult<Measure> {
    match name {
        "bel" => Ok(Measure::Bel),
        "pl" => Ok(Measure::Pl),
        "q" => Ok(Measure::Q),
        other => Err(PyValueError::new_err(format!("unknown measure {other}"))),
    }
}

type LabelledMass = (Vec<String>, f64);

fn labelled<F: Space>(body: &Body<F>) -> Vec<LabelledMass> {
    body.iter().map(|(s, m)| (body.frame().atom_labels(s), m)).collect()
}

/// A frame of discernment: up to 64 distinct labels.
#[pyclass(name = "Frame", module = "pyevtree", frozen, from_py_object)]
#[derive(Clone)]
struct PyFrame {
    inner: evtree::Frame,
}

#[pymethods]
impl PyFrame {
    #[new]
    fn new(labels: Vec<String>) -> PyResult<Self> {
        evtree::Frame::new(labels).map(|inner| PyFrame { inner }).map_err(to_py)
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __repr__(&self) -> String {
        format!("Frame({:?})", self.inner.labels())
    }
}

impl PyFrame {
    fn set(&self, labels: &[String]) -> PyResult<FocalSet> {
        self.inner.set(labels.iter().map(String::as_str)).map_err(to_py)
    }
}

/// A mass assignment over a frame. Masses must sum to 1; the empty list of
/// labels stands for the empty set.
#[pyclass(name = "Body", module = "pyevtree", frozen, from_py_object)]
#[derive(Clone)]
struct PyBody {
    inner: BodyOfEvidence,
}

#[pymethods]
impl PyBody {
    #[new]
    fn new(frame: PyFrame, masses: Vec<(Vec<String>, f64)>) -> PyResult<Self> {
        let entries = masses
            .iter()
            .map(|(labels, m)| Ok((frame.set(labels)?, *m)))
            .collect::<PyResult<Vec<_>>>()?;
        Body::new(frame.inner, entries).map(|inner| PyBody { inner }).map_err(to_py)
    }

    /// Uniform masses over every non-empty subset of `frame`.
    #[staticmethod]
    fn complete(frame: PyFrame) -> PyResult<Self> {
        BodyOfEvidence::complete(frame.inner).map(|inner| PyBody { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn vacuous(frame: PyFrame) -> Self {
        PyBody {
            inner: Body::vacuous(frame.inner),
        }
    }

    #[getter]
    fn frame(&self) -> PyFrame {
        PyFrame {
            inner: self.inner.frame().clone(),
        }
    }

    /// Focal sets as `(labels, mass)` pairs in canonical order.
    fn focal_sets(&self) -> Vec<(Vec<String>, f64)> {
        labelled(&self.inner)
    }

    fn mass(&self, labels: Vec<String>) -> PyResult<f64> {
        Ok(self.inner.mass(&self.frame().set(&labels)?))
    }

    #[getter]
    fn conflict(&self) -> f64 {
        self.inner.empty_mass()
    }

    /// `(value, counters)` for `measure` in {"bel", "pl", "q"} using
    /// `strategy` in {"brute", "partition", "tree"}.
    #[pyo3(signature = (measure, labels, strategy = "brute"))]
    fn measure(&self, measure: &str, labels: Vec<String>, strategy: &str) -> PyResult<(f64, BTreeMap<String, u64>)> {
        let a = self.frame().set(&labels)?;
        let measure = parse_measure(measure)?;
        let body = &self.inner;
        let c = &mut OpCounter::new();
        let value = match strategy {
            "brute" => match measure {
                Measure::Bel => bel_brute(body, &a, c),
                Measure::Pl => pl_brute(body, &a, c),
                Measure::Q => q_brute(body, &a, c),
            },
            "partition" => {
                let p = build_partition(body, c);
                match measure {
                    Measure::Bel => bel_partition(&p, &a, c),
                    Measure::Pl => pl_partition(&p, &a, c),
                    Measure::Q => q_partition(&p, &a, c),
                }
            }
            "tree" => match measure {
                Measure::Bel => bel_via_complement(body, &a, c),
                Measure::Pl => pl_via_complement(body, &a, c),
                Measure::Q => q_via_tree(body, &a, c),
            },
            other => return Err(PyValueError::new_err(format!("unknown measure strategy {other}"))),
        }
        .map_err(to_py)?;
        Ok((value, counters(c)))
    }

    #[pyo3(signature = (labels, strategy = "brute"))]
    fn bel(&self, labels: Vec<String>, strategy: &str) -> PyResult<f64> {
        Ok(self.measure("bel", labels, strategy)?.0)
    }

    #[pyo3(signature = (labels, strategy = "brute"))]
    fn pl(&self, labels: Vec<String>, strategy: &str) -> PyResult<f64> {
        Ok(self.measure("pl", labels, strategy)?.0)
    }

    #[pyo3(signature = (labels, strategy = "brute"))]
    fn q(&self, labels: Vec<String>, strategy: &str) -> PyResult<f64> {
        Ok(self.measure("q", labels, strategy)?.0)
    }

    /// Drops the empty set and rescales; returns `(body, K)`.
    fn normalized(&self) -> PyResult<(PyBody, f64)> {
        let (inner, k) = normalize(&self.inner).map_err(to_py)?;
        Ok((PyBody { inner }, k))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        let parts: Vec<String> = self
            .inner
            .iter()
            .map(|(s, m)| format!("{} {m}", self.inner.frame().render_set(s)))
            .collect();
        format!("Body({})", parts.join(", "))
    }
}

/// Output of [`combine_bodies`].
#[pyclass(name = "Combination", module = "pyevtree", frozen, get_all)]
struct PyCombination {
    body: PyBody,
    conflict: f64,
    strategy: String,
    counters: BTreeMap<String, u64>,
}

/// Dempster's rule (unnormalized). `strategy` is "brute", "q", "tree" or
/// "auto".
#[pyfunction(name = "combine")]
#[pyo3(signature = (b1, b2, strategy = "auto"))]
fn combine_bodies(b1: &PyBody, b2: &PyBody, strategy: &str) -> PyResult<PyCombination> {
    let s = parse_strategy(strategy)?.unwrap_or_else(|| choose_strategy(&b1.inner, &b2.inner));
    let r = combine(&b1.inner, &b2.inner, s).map_err(to_py)?;
    Ok(PyCombination {
        conflict: r.conflict,
        strategy: r.strategy.name().to_string(),
        counters: counters(&r.counter),
        body: PyBody { inner: r.body },
    })
}

/// The strategy "auto" would pick for these two bodies.
#[pyfunction]
fn choose(b1: &PyBody, b2: &PyBody) -> String {
    choose_strategy(&b1.inner, &b2.inner).name().to_string()
}

/// Measured against predicted counters on the complete body over `omega`
/// elements, as printed by `evtree bench`.
#[pyfunction(name = "bench")]
#[pyo3(signature = (omega, measure = "q"))]
fn bench_report(omega: u32, measure: &str) -> PyResult<String> {
    use cli::BenchStrategy::*;
    cli::cmd_bench(omega, true, parse_measure(measure)?, &[Brute, Partition, Tree, Q]).map_err(cli_to_py)
}

/// A parsed evidence file.
#[pyclass(name = "EvidenceFile", module = "pyevtree", frozen)]
struct PyEvidenceFile {
    inner: EvidenceFile,
}

#[pymethods]
impl PyEvidenceFile {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        cli::parse(text).map(|inner| PyEvidenceFile { inner }).map_err(cli_to_py)
    }

    fn body_names(&self) -> Vec<String> {
        self.inner.body_names().map(str::to_string).collect()
    }

    /// A single-frame body by name.
    fn body(&self, name: &str) -> PyResult<PyBody> {
        match self.inner.body(name).map_err(cli_to_py)? {
            FileBody::Single(b) => Ok(PyBody { inner: b.clone() }),
            FileBody::Product(_) => Err(PyValueError::new_err(format!("{name} is defined over several frames"))),
        }
    }

    /// Marginal of the markov block on `variables` as `(focal sets, conflict)`;
    /// elements of multi-variable sets are rendered as tuples like "(a,0)".
    #[pyo3(signature = (variables, strategy = "auto"))]
    fn marginal(&self, variables: Vec<String>, strategy: &str) -> PyResult<(Vec<LabelledMass>, f64)> {
        let tree = self
            .inner
            .markov()
            .ok_or_else(|| PyValueError::new_err("file has no markov block"))?;
        let body: Body<ProductFrame> = evtree::marginal(tree, &variables, parse_strategy(strategy)?).map_err(to_py)?;
        let sets = labelled(&body).into_iter().filter(|(s, _)| !s.is_empty()).collect();
        Ok((sets, body.empty_mass()))
    }
}

#[pymodule]
fn pyevtree(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFrame>()?;
    m.add_class::<PyBody>()?;
    m.add_class::<PyCombination>()?;
    m.add_class::<PyEvidenceFile>()?;
    m.add_function(wrap_pyfunction!(combine_bodies, m)?)?;
    m.add_function(wrap_pyfunction!(choose, m)?)?;
    m.add_function(wrap_pyfunction!(bench_report, m)?)?;
    m.add("EvidenceError", m.py().get_type::<EvidenceError>())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_names() {
        assert_eq!(parse_strategy("auto").unwrap(), None);
        assert_eq!(parse_strategy("tree").unwrap(), Some(Strategy::Tree));
        assert!(parse_measure("q").is_ok());
    }

    #[test]
    fn counter_keys() {
        let keys: Vec<String> = counters(&OpCounter::new()).into_keys().collect();
        assert!(keys.contains(&"construction".to_string()));
        assert!(keys.contains(&"total".to_string()));
    }
}
