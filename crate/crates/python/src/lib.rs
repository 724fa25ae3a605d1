//! Python module `gdi`: exact joints and measures, agency quantities, the
//! Monte Carlo estimator, and the sweeps. Agents and environments are named
//! by zoo spec strings such as `"qlearn(eps=0.1,q0=0)"`.
//!
//! Interval arguments follow the command line: `[a:b]` is the source (for
//! agency calls, the observation interval) and `[c:d]` the target.

// Keyword arguments on the Python side map one to one onto Rust parameters.
#![allow(clippy::too_many_arguments)]

use std::collections::HashMap;
use std::sync::Arc;

use gdi_core::agency::{self, AgencyQuery};
use gdi_core::experiments::{self, CorridorConfig, Method, SweepConfig};
use gdi_core::interface::{Agent, Environment, Interface, Role};
use gdi_core::joint::{Coord, CoordSet, Enumerator, JointDist, DEFAULT_CELL_CAP};
use gdi_core::laws::{self, Law, LawSuiteConfig};
use gdi_core::mc::{self, BootstrapConfig, CiMethod};
use gdi_core::measures::{Arrow, InfoMeasures, Interval, MeasureQuery};
use gdi_core::zoo::{build_agent, build_env, implied_interface, ZooSpec};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(gdi, GdiError, PyValueError, "Raised for any gdi-core failure.");

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for gdi_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(|e| GdiError::new_err(e.to_string()))
    }
}

fn parse<T: std::str::FromStr<Err = gdi_core::Error>>(s: &str) -> PyResult<T> {
    s.parse().py()
}

fn interval(lo: usize, hi: usize) -> PyResult<Interval> {
    Interval::new(lo, hi).py()
}

fn coords(list: &[(String, usize)]) -> PyResult<Vec<Coord>> {
    list.iter()
        .map(|(role, step)| Ok(Coord::new(parse::<Role>(role)?, *step)))
        .collect()
}

fn coord_set(list: &[(String, usize)]) -> PyResult<CoordSet> {
    Ok(CoordSet::from_coords(coords(list)?))
}

/// Interface from explicit sizes, else the one a spec implies, else 2x2.
fn resolve_interface(specs: &[&ZooSpec], na: Option<usize>, no: Option<usize>) -> PyResult<Interface> {
    let implied = specs
        .iter()
        .find_map(|s| implied_interface(s))
        .unwrap_or(Interface::new(2, 2).py()?);
    Interface::new(
        na.unwrap_or(implied.num_actions()),
        no.unwrap_or(implied.num_observations()),
    )
    .py()
}

struct Pair {
    agent: Arc<dyn Agent>,
    env: Arc<dyn Environment>,
}

fn pair(agent: &str, env: &str, horizon: usize, na: Option<usize>, no: Option<usize>) -> PyResult<Pair> {
    let a: ZooSpec = parse(agent)?;
    let e: ZooSpec = parse(env)?;
    let interface = resolve_interface(&[&a, &e], na, no)?;
    Ok(Pair {
        agent: build_agent(&a, interface, horizon).py()?,
        env: build_env(&e, interface).py()?,
    })
}

fn agency_query(a: usize, b: usize, c: usize, d: usize, arrow: &str) -> PyResult<AgencyQuery> {
    Ok(AgencyQuery::new(interval(c, d)?, interval(a, b)?).with_plasticity_arrow(parse(arrow)?))
}

/// Exact joint law of an interaction, with every information measure.
#[pyclass(frozen, module = "gdi")]
struct Joint {
    inner: JointDist,
}

#[pymethods]
impl Joint {
    #[staticmethod]
    #[pyo3(signature = (agent, env, horizon, na=None, no=None, cap=DEFAULT_CELL_CAP))]
    fn enumerate(
        py: Python<'_>,
        agent: &str,
        env: &str,
        horizon: usize,
        na: Option<usize>,
        no: Option<usize>,
        cap: u64,
    ) -> PyResult<Self> {
        let p = pair(agent, env, horizon, na, no)?;
        let inner = py
            .detach(|| Enumerator::with_cap(cap).enumerate(&*p.agent, &*p.env, horizon))
            .py()?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: JointDist::from_text(text).py()?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn swap_roles(&self) -> Self {
        Self {
            inner: self.inner.swap_roles(),
        }
    }

    #[getter]
    fn horizon(&self) -> usize {
        self.inner.horizon()
    }

    #[getter]
    fn num_actions(&self) -> usize {
        self.inner.interface().num_actions()
    }

    #[getter]
    fn num_observations(&self) -> usize {
        self.inner.interface().num_observations()
    }

    #[getter]
    fn probs(&self) -> Vec<f64> {
        self.inner.probs().to_vec()
    }

    fn total(&self) -> f64 {
        self.inner.total()
    }

    /// Marginal over `[(role, step), ...]`, first coordinate most significant.
    fn marginal(&self, coords: Vec<(String, usize)>) -> PyResult<Vec<f64>> {
        gdi_core::joint::marginal(&self.inner, &self::coords(&coords)?).py()
    }

    fn entropy(&self, coords: Vec<(String, usize)>) -> PyResult<f64> {
        InfoMeasures::new(&self.inner).entropy(coord_set(&coords)?).py()
    }

    #[pyo3(signature = (u, v, w=Vec::new()))]
    fn cmi(&self, u: Vec<(String, usize)>, v: Vec<(String, usize)>, w: Vec<(String, usize)>) -> PyResult<f64> {
        InfoMeasures::new(&self.inner)
            .cmi(coord_set(&u)?, coord_set(&v)?, coord_set(&w)?)
            .py()
    }

    /// GDI of `source[a:b]` into the other role over `[c:d]`: `(value, [(i, bits), ...])`.
    #[pyo3(signature = (source, a, b, c, d, arrow="forward"))]
    fn gdi(&self, source: &str, a: usize, b: usize, c: usize, d: usize, arrow: &str) -> PyResult<(f64, Vec<(usize, f64)>)> {
        let q = MeasureQuery::new(parse(source)?, interval(a, b)?, interval(c, d)?, parse(arrow)?);
        let r = InfoMeasures::new(&self.inner).gdi(&q).py()?;
        Ok((r.value, r.terms))
    }

    #[pyo3(signature = (source, arrow="forward"))]
    fn directed_information(&self, source: &str, arrow: &str) -> PyResult<f64> {
        let r = InfoMeasures::new(&self.inner)
            .directed_information(parse(source)?, parse(arrow)?)
            .py()?;
        Ok(r.value)
    }

    /// Causal entropy of `target[c:d]` given the other role over `[a:b]`.
    fn causal_entropy(&self, target: &str, c: usize, d: usize, a: usize, b: usize) -> PyResult<f64> {
        InfoMeasures::new(&self.inner)
            .causal_entropy(parse(target)?, interval(c, d)?, interval(a, b)?)
            .py()
    }

    /// `(entropy_term, causal_entropy_term)` of a forward query.
    fn kramer_decompose(&self, source: &str, a: usize, b: usize, c: usize, d: usize) -> PyResult<(f64, f64)> {
        let q = MeasureQuery::new(parse(source)?, interval(a, b)?, interval(c, d)?, Arrow::Forward);
        InfoMeasures::new(&self.inner).kramer_decompose(&q).py()
    }

    fn __repr__(&self) -> String {
        format!(
            "Joint(|A|={}, |O|={}, n={})",
            self.num_actions(),
            self.num_observations(),
            self.horizon()
        )
    }
}

/// Plasticity `O[a:b] → A[c:d]` (Delayed), empowerment back, bound and slack.
#[pyfunction]
#[pyo3(signature = (agent, env, a, b, c, d, na=None, no=None))]
fn tension(
    agent: &str,
    env: &str,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    na: Option<usize>,
    no: Option<usize>,
) -> PyResult<HashMap<&'static str, f64>> {
    let q = agency_query(a, b, c, d, "delayed")?;
    let p = pair(agent, env, q.horizon(), na, no)?;
    let r = agency::check_tension(&*p.agent, &*p.env, &q).py()?;
    Ok(HashMap::from([
        ("plasticity", r.plasticity),
        ("empowerment", r.empowerment),
        ("bound", r.bound),
        ("slack", r.slack),
    ]))
}

/// Maximal plasticity over `envs`, with the index of the first maximizer.
#[pyfunction]
#[pyo3(signature = (agent, envs, a, b, c, d, arrow="delayed", na=None, no=None))]
fn plasticity(
    agent: &str,
    envs: Vec<String>,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    arrow: &str,
    na: Option<usize>,
    no: Option<usize>,
) -> PyResult<(f64, usize)> {
    let q = agency_query(a, b, c, d, arrow)?;
    let agent_spec: ZooSpec = parse(agent)?;
    let env_specs = envs.iter().map(|e| parse::<ZooSpec>(e)).collect::<PyResult<Vec<_>>>()?;
    let mut all = vec![&agent_spec];
    all.extend(env_specs.iter());
    let interface = resolve_interface(&all, na, no)?;
    let agent = build_agent(&agent_spec, interface, q.horizon()).py()?;
    let envs = env_specs
        .iter()
        .map(|e| build_env(e, interface))
        .collect::<gdi_core::Result<Vec<_>>>()
        .py()?;
    agency::plasticity(&*agent, &envs, &q).py()
}

/// Maximal empowerment `A[c:d] → O[a:b]` over `agents`, with the argmax.
#[pyfunction]
#[pyo3(signature = (agents, env, a, b, c, d, na=None, no=None))]
fn empowerment(
    agents: Vec<String>,
    env: &str,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    na: Option<usize>,
    no: Option<usize>,
) -> PyResult<(f64, usize)> {
    let q = agency_query(a, b, c, d, "delayed")?;
    let env_spec: ZooSpec = parse(env)?;
    let agent_specs = agents.iter().map(|s| parse::<ZooSpec>(s)).collect::<PyResult<Vec<_>>>()?;
    let mut all = vec![&env_spec];
    all.extend(agent_specs.iter());
    let interface = resolve_interface(&all, na, no)?;
    let env = build_env(&env_spec, interface).py()?;
    let agents = agent_specs
        .iter()
        .map(|s| build_agent(s, interface, q.horizon()))
        .collect::<gdi_core::Result<Vec<_>>>()
        .py()?;
    agency::empowerment(&agents, &*env, &q).py()
}

/// Residuals `(empowerment side, plasticity side)` of the mirror identities.
#[pyfunction]
#[pyo3(signature = (agent, env, a, b, c, d, na=None, no=None))]
fn mirror_check(
    agent: &str,
    env: &str,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    na: Option<usize>,
    no: Option<usize>,
) -> PyResult<(f64, f64)> {
    let q = agency_query(a, b, c, d, "delayed")?;
    let p = pair(agent, env, q.horizon(), na, no)?;
    let r = agency::mirror_check(p.agent, p.env, &q).py()?;
    Ok((r.empowerment, r.plasticity))
}

/// Plug-in GDI estimate with a bootstrap interval from `samples` rollouts.
#[pyfunction]
#[pyo3(signature = (
    agent, env, source, a, b, c, d, arrow="forward", samples=100_000, replicates=1000,
    level=0.95, ci="basic", seed=0, na=None, no=None
))]
fn estimate(
    py: Python<'_>,
    agent: &str,
    env: &str,
    source: &str,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    arrow: &str,
    samples: usize,
    replicates: usize,
    level: f64,
    ci: &str,
    seed: u64,
    na: Option<usize>,
    no: Option<usize>,
) -> PyResult<HashMap<&'static str, f64>> {
    let q = MeasureQuery::new(parse(source)?, interval(a, b)?, interval(c, d)?, parse(arrow)?);
    let p = pair(agent, env, q.horizon(), na, no)?;
    let config = BootstrapConfig {
        replicates,
        level,
        method: parse::<CiMethod>(ci)?,
    };
    let r = py
        .detach(|| {
            let s = mc::sample_trajectories(&*p.agent, &*p.env, q.horizon(), samples, seed)?;
            mc::bootstrap_ci_with(&s, &q, &config)
        })
        .py()?;
    Ok(HashMap::from([
        ("estimate", r.estimate),
        ("ci_low", r.ci_low),
        ("ci_high", r.ci_high),
    ]))
}

fn sweep_config(points: usize, method: &str, samples: usize, seed: u64) -> PyResult<SweepConfig> {
    Ok(SweepConfig {
        points,
        method: parse::<Method>(method)?,
        samples,
        seed,
        ..SweepConfig::default()
    })
}

/// Q-learning plasticity over an epsilon grid, both arrows.
#[pyfunction]
#[pyo3(signature = (points=21, method="exact", samples=100_000, seed=0))]
fn sweep_epsilon<'py>(
    py: Python<'py>,
    points: usize,
    method: &str,
    samples: usize,
    seed: u64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let config = sweep_config(points, method, samples, seed)?;
    let rows = py.detach(|| experiments::sweep_epsilon(&config)).py()?;
    rows.iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("epsilon", r.epsilon)?;
            d.set_item("arrow", r.arrow.name())?;
            d.set_item("plasticity", r.plasticity)?;
            d.set_item("ci_low", r.ci_low)?;
            d.set_item("ci_high", r.ci_high)?;
            Ok(d)
        })
        .collect()
}

/// Greedy Q-learning plasticity, empowerment, sum and bound over q_init.
#[pyfunction]
#[pyo3(signature = (points=21, method="exact", samples=100_000, seed=0))]
fn sweep_qinit<'py>(
    py: Python<'py>,
    points: usize,
    method: &str,
    samples: usize,
    seed: u64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let config = sweep_config(points, method, samples, seed)?;
    let rows = py.detach(|| experiments::sweep_qinit(&config)).py()?;
    rows.iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("q_init", r.q_init)?;
            d.set_item("plasticity", r.plasticity)?;
            d.set_item("empowerment", r.empowerment)?;
            d.set_item("sum", r.sum)?;
            d.set_item("bound", r.bound)?;
            Ok(d)
        })
        .collect()
}

/// `[(room, plasticity, empowerment), ...]` for the stay-in-room policies.
#[pyfunction]
#[pyo3(signature = (rooms=5, theta=0.5, horizon=4))]
fn corridor(rooms: usize, theta: f64, horizon: usize) -> PyResult<Vec<(usize, f64, f64)>> {
    let config = CorridorConfig {
        rooms,
        theta,
        horizon,
        ..CorridorConfig::default()
    };
    let rows = experiments::corridor_table(&config).py()?;
    Ok(rows.iter().map(|r| (r.room, r.plasticity, r.empowerment)).collect())
}

/// Law-suite CSV over every (seed, horizon, interface) combination.
#[pyfunction]
#[pyo3(signature = (seeds, horizons, interfaces, laws=None))]
fn law_suite(
    py: Python<'_>,
    seeds: Vec<u64>,
    horizons: Vec<usize>,
    interfaces: Vec<(usize, usize)>,
    laws: Option<Vec<String>>,
) -> PyResult<String> {
    let laws = match laws {
        None => Law::ALL.to_vec(),
        Some(names) => names.iter().map(|n| parse::<Law>(n)).collect::<PyResult<_>>()?,
    };
    let config = LawSuiteConfig::new(seeds, horizons, interfaces).with_laws(laws);
    let reports = py.detach(|| laws::run_law_suite(&config)).py()?;
    Ok(laws::to_csv(&reports))
}

#[pymodule]
fn gdi(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GdiError", m.py().get_type::<GdiError>())?;
    m.add_class::<Joint>()?;
    m.add_function(wrap_pyfunction!(tension, m)?)?;
    m.add_function(wrap_pyfunction!(plasticity, m)?)?;
    m.add_function(wrap_pyfunction!(empowerment, m)?)?;
    m.add_function(wrap_pyfunction!(mirror_check, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_qinit, m)?)?;
    m.add_function(wrap_pyfunction!(corridor, m)?)?;
    m.add_function(wrap_pyfunction!(law_suite, m)?)?;
    Ok(())
}
