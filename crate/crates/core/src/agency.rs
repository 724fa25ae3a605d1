//! Plasticity and empowerment of agent–environment pairs.
//!
//! Plasticity is the largest O→A generalized directed information an agent
//! exhibits over a finite set of environments; empowerment is the largest
//! A→O value an environment admits over a finite set of agents. Under the
//! default arrows (Delayed for plasticity, Forward for empowerment) the two
//! sum to `I(A_{act}; O_{obs} | A before act, O before obs)` for a fixed pair,
//! which caps the sum at [`tension_bound`].

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interface::{swap_agent, swap_env, Agent, Environment, Interface, Role};
use crate::joint::{CoordSet, Enumerator, JointDist};
use crate::measures::{Arrow, InfoMeasures, Interval, MeasureQuery};
use crate::zoo::{MirrorAgent, MirrorEnv, PhasedUniformAgent, PhasedUniformEnv};

/// Values at or below this are treated as zero plasticity.
pub const POSITIVITY_THRESHOLD: f64 = 1e-12;

/// Tolerance on `plasticity + empowerment = conserved CMI`.
pub const CONSERVATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AgencyQuery {
    pub action_interval: Interval,
    pub observation_interval: Interval,
    pub plasticity_arrow: Arrow,
    pub empowerment_arrow: Arrow,
}

impl AgencyQuery {
    pub fn new(action_interval: Interval, observation_interval: Interval) -> Self {
        Self {
            action_interval,
            observation_interval,
            plasticity_arrow: Arrow::Delayed,
            empowerment_arrow: Arrow::Forward,
        }
    }

    pub fn with_plasticity_arrow(self, arrow: Arrow) -> Self {
        Self {
            plasticity_arrow: arrow,
            ..self
        }
    }

    /// Enumeration horizon: the last step either interval touches.
    pub fn horizon(&self) -> usize {
        self.action_interval.hi().max(self.observation_interval.hi())
    }

    /// `O_{obs} → A_{act}` under the plasticity arrow.
    pub fn plasticity_query(&self) -> MeasureQuery {
        MeasureQuery::new(
            Role::Observation,
            self.observation_interval,
            self.action_interval,
            self.plasticity_arrow,
        )
    }

    /// `A_{act} → O_{obs}` under the empowerment arrow.
    pub fn empowerment_query(&self) -> MeasureQuery {
        MeasureQuery::new(
            Role::Action,
            self.action_interval,
            self.observation_interval,
            self.empowerment_arrow,
        )
    }

    /// The query that measures the same variables after a role swap: the
    /// intervals trade places and so do the arrows.
    pub fn swapped(&self) -> AgencyQuery {
        AgencyQuery {
            action_interval: self.observation_interval,
            observation_interval: self.action_interval,
            plasticity_arrow: self.empowerment_arrow,
            empowerment_arrow: self.plasticity_arrow,
        }
    }
}

impl fmt::Display for AgencyQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A{} O{} plasticity={} empowerment={}",
            self.action_interval,
            self.observation_interval,
            self.plasticity_arrow,
            self.empowerment_arrow
        )
    }
}

fn enumerate(agent: &dyn Agent, env: &dyn Environment, horizon: usize) -> Result<JointDist> {
    Enumerator::default().enumerate(agent, env, horizon)
}

fn measure(agent: &dyn Agent, env: &dyn Environment, q: &MeasureQuery) -> Result<f64> {
    let joint = enumerate(agent, env, q.horizon())?;
    Ok(InfoMeasures::new(&joint).gdi(q)?.value)
}

/// First index attaining the maximum; later ties lose.
fn argmax_in_order(values: Vec<Result<f64>>) -> Result<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (i, v) in values.into_iter().enumerate() {
        let v = v?;
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, i));
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("empty set".into()))
}

/// Maximal O→A GDI of `agent` over `envs`, with the argmax index.
pub fn plasticity(
    agent: &dyn Agent,
    envs: &[Arc<dyn Environment>],
    query: &AgencyQuery,
) -> Result<(f64, usize)> {
    if envs.is_empty() {
        return Err(Error::InvalidArgument(
            "plasticity needs a nonempty environment set".into(),
        ));
    }
    let q = query.plasticity_query();
    let values: Vec<Result<f64>> = envs.par_iter().map(|e| measure(agent, &**e, &q)).collect();
    argmax_in_order(values)
}

/// Maximal A→O GDI into `env` over `agents`, with the argmax index.
pub fn empowerment(
    agents: &[Arc<dyn Agent>],
    env: &dyn Environment,
    query: &AgencyQuery,
) -> Result<(f64, usize)> {
    if agents.is_empty() {
        return Err(Error::InvalidArgument(
            "empowerment needs a nonempty agent set".into(),
        ));
    }
    let q = query.empowerment_query();
    let values: Vec<Result<f64>> = agents.par_iter().map(|a| measure(&**a, env, &q)).collect();
    argmax_in_order(values)
}

/// Least step `i` at which observations in the interval reduce the
/// uncertainty of `A_i`:
/// `H(A_i | O_{1:a-1}, A_{1:i-1}) - H(A_i | O_{a:k}, O_{1:a-1}, A_{1:i-1}) > 1e-12`
/// with `k = min(b, i)` (Forward) or `min(b, i-1)` (Delayed).
///
/// The result is cross-checked against the plasticity value; a disagreement
/// is a numerical-integrity error.
pub fn positive_plasticity_witness(
    agent: &dyn Agent,
    env: &dyn Environment,
    query: &AgencyQuery,
) -> Result<Option<usize>> {
    let q = query.plasticity_query();
    let joint = enumerate(agent, env, q.horizon())?;
    let m = InfoMeasures::new(&joint);
    let (a, b) = (q.source.lo(), q.source.hi());
    let (c, d) = (q.target.lo(), q.target.hi());
    let (start, lag) = match q.arrow {
        Arrow::Forward => (a.max(c), 0),
        Arrow::Delayed => ((a + 1).max(c), 1),
    };
    let o_past = CoordSet::range(Role::Observation, 1, a - 1);
    let mut witness = None;
    for i in start..=d {
        let target = CoordSet::range(Role::Action, i, i);
        let past = o_past.union(CoordSet::range(Role::Action, 1, i - 1));
        let with_interval = past.union(CoordSet::range(Role::Observation, a, b.min(i - lag)));
        let gap = m.conditional_entropy(target, past)? - m.conditional_entropy(target, with_interval)?;
        if gap > POSITIVITY_THRESHOLD {
            witness = Some(i);
            break;
        }
    }
    let value = m.gdi(&q)?.value;
    if witness.is_some() != (value > POSITIVITY_THRESHOLD) {
        return Err(Error::NumericalIntegrity(format!(
            "positivity witness {witness:?} disagrees with plasticity {value:e} for {q}"
        )));
    }
    Ok(witness)
}

/// `min(|obs|·log2|O|, |act|·log2|A|)`.
pub fn tension_bound(interface: Interface, query: &AgencyQuery) -> f64 {
    let obs = query.observation_interval.len() as f64 * (interface.num_observations() as f64).log2();
    let act = query.action_interval.len() as f64 * (interface.num_actions() as f64).log2();
    obs.min(act)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensionReport {
    pub plasticity: f64,
    pub empowerment: f64,
    pub bound: f64,
    pub slack: f64,
}

impl TensionReport {
    pub const CSV_HEADER: &'static str = "plasticity_bits,empowerment_bits,bound_bits,slack_bits";

    pub fn csv_row(&self) -> String {
        format!(
            "{:.17e},{:.17e},{:.17e},{:.17e}",
            self.plasticity, self.empowerment, self.bound, self.slack
        )
    }
}

/// Plasticity (Delayed O→A) and empowerment (Forward A→O) of one pair
/// against the bound. The query's arrow fields are ignored so that the two
/// values always sum to the conserved CMI.
pub fn check_tension(
    agent: &dyn Agent,
    env: &dyn Environment,
    query: &AgencyQuery,
) -> Result<TensionReport> {
    let q = AgencyQuery::new(query.action_interval, query.observation_interval);
    let joint = enumerate(agent, env, q.horizon())?;
    let m = InfoMeasures::new(&joint);
    let plasticity = m.gdi(&q.plasticity_query())?.value;
    let empowerment = m.gdi(&q.empowerment_query())?.value;
    let conserved = m.interval_cmi(&q.empowerment_query())?;
    let residual = (plasticity + empowerment - conserved).abs();
    if residual > CONSERVATION_TOLERANCE {
        return Err(Error::NumericalIntegrity(format!(
            "plasticity + empowerment misses the conserved CMI by {residual:e}"
        )));
    }
    let bound = tension_bound(agent.interface(), &q);
    Ok(TensionReport {
        plasticity,
        empowerment,
        bound,
        slack: bound - plasticity - empowerment,
    })
}

/// Residuals of the two mirror identities, both evaluated by enumerating
/// the role-swapped pair from scratch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorResidual {
    /// `|E(agent, env) − P(swapped env as agent, swapped agent as env)|`.
    pub empowerment: f64,
    /// `|P(agent, env) − E(swapped env as agent, swapped agent as env)|`.
    pub plasticity: f64,
}

impl MirrorResidual {
    pub fn max(&self) -> f64 {
        self.empowerment.max(self.plasticity)
    }
}

pub fn mirror_check(
    agent: Arc<dyn Agent>,
    env: Arc<dyn Environment>,
    query: &AgencyQuery,
) -> Result<MirrorResidual> {
    let horizon = query.horizon();
    let joint = enumerate(&*agent, &*env, horizon)?;
    let m = InfoMeasures::new(&joint);
    let e = m.gdi(&query.empowerment_query())?.value;
    let p = m.gdi(&query.plasticity_query())?.value;

    let swapped_agent = swap_env(env);
    let swapped_env = swap_agent(agent);
    let sq = query.swapped();
    let joint_s = enumerate(&*swapped_agent, &*swapped_env, horizon)?;
    let ms = InfoMeasures::new(&joint_s);
    let p_s = ms.gdi(&sq.plasticity_query())?.value;
    let e_s = ms.gdi(&sq.empowerment_query())?.value;
    Ok(MirrorResidual {
        empowerment: (e - p_s).abs(),
        plasticity: (p - e_s).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremalKind {
    PlasticityMax,
    EmpowermentMax,
}

impl std::str::FromStr for ExtremalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plasticity-max" => Ok(Self::PlasticityMax),
            "empowerment-max" => Ok(Self::EmpowermentMax),
            _ => Err(Error::Parse(format!("unknown extremal kind `{s}`"))),
        }
    }
}

/// A pair whose [`check_tension`] report puts the whole bound on one side.
///
/// Plasticity-max: observations are uniform over the first `|A|` symbols from
/// the start of the observation interval, and the agent copies each one into
/// its action `lag = act.lo − obs.lo` steps later. Needs `|A| ≤ |O|`,
/// `|act| ≤ |obs|`, and `obs.lo < act.lo`.
///
/// Empowerment-max: the agent plays uniformly over the first `|O|` actions
/// from the start of the action interval, and the environment echoes each
/// action `lag = obs.lo − act.lo` steps later. Needs `|O| ≤ |A|`,
/// `|obs| ≤ |act|`, and `act.lo ≤ obs.lo`.
pub fn build_extremal_pair(
    interface: Interface,
    query: &AgencyQuery,
    kind: ExtremalKind,
) -> Result<(Arc<dyn Agent>, Arc<dyn Environment>)> {
    let (na, no) = (interface.num_actions(), interface.num_observations());
    let act = query.action_interval;
    let obs = query.observation_interval;
    let unsupported = |why: String| Err(Error::UnsupportedConfiguration(why));
    match kind {
        ExtremalKind::PlasticityMax => {
            if na > no {
                return unsupported(format!("plasticity-max needs |A| <= |O|, got {na} > {no}"));
            }
            if act.len() > obs.len() {
                return unsupported(format!(
                    "plasticity-max needs the action interval {act} no longer than the observation interval {obs}"
                ));
            }
            if obs.lo() >= act.lo() {
                return unsupported(format!(
                    "plasticity-max needs the observation interval {obs} to start before the action interval {act}"
                ));
            }
            let env = PhasedUniformEnv::new(interface, na, obs.lo())?;
            let agent = MirrorAgent::with_lag(interface, act.lo(), act.lo() - obs.lo())?;
            Ok((Arc::new(agent), Arc::new(env)))
        }
        ExtremalKind::EmpowermentMax => {
            if no > na {
                return unsupported(format!("empowerment-max needs |O| <= |A|, got {no} > {na}"));
            }
            if obs.len() > act.len() {
                return unsupported(format!(
                    "empowerment-max needs the observation interval {obs} no longer than the action interval {act}"
                ));
            }
            if act.lo() > obs.lo() {
                return unsupported(format!(
                    "empowerment-max needs the action interval {act} to start no later than the observation interval {obs}"
                ));
            }
            let agent = PhasedUniformAgent::new(interface, no, act.lo())?;
            let env = MirrorEnv::new(interface, obs.lo(), obs.lo() - act.lo())?;
            Ok((Arc::new(agent), Arc::new(env)))
        }
    }
}
