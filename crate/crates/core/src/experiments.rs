//! The bandit sweeps and the corridor table.
//!
//! Both sweeps pit tabular Q-learning against a two-armed Bernoulli bandit
//! at horizon 5, measuring O[1:3] → A[2:5] plasticity; the q-init sweep adds
//! A[2:5] → O[1:3] empowerment so the pair sums to the conserved CMI.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::agency::{check_tension, tension_bound, AgencyQuery};
use crate::error::{Error, Result};
use crate::interface::{Agent, Environment, Interface};
use crate::joint::enumerate_joint;
use crate::mc::{bootstrap_ci_with, estimate_gdi, sample_trajectories, BootstrapConfig};
use crate::measures::{Arrow, InfoMeasures, Interval, MeasureQuery};
use crate::zoo::{BernoulliBandit, CorridorEnv, CorridorSpec, QLearnerSpec, QLearningAgent, StayAgent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::MonteCarlo => "mc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "mc" => Ok(Method::MonteCarlo),
            _ => Err(Error::Parse(format!("unknown method `{s}` (expected exact or mc)"))),
        }
    }
}

/// `points` evenly spaced values from `lo` to `hi`, both included.
pub fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    match points {
        0 => Err(Error::InvalidArgument("grid needs at least one point".into())),
        1 => Ok(vec![lo]),
        _ => Ok((0..points)
            .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
            .collect()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub points: usize,
    pub method: Method,
    pub samples: usize,
    pub bootstrap: BootstrapConfig,
    pub seed: u64,
    pub alpha: f64,
    pub arms: Vec<f64>,
    pub horizon: usize,
    pub action_interval: Interval,
    pub observation_interval: Interval,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            points: 21,
            method: Method::Exact,
            samples: 100_000,
            bootstrap: BootstrapConfig::default(),
            seed: 0,
            alpha: QLearnerSpec::DEFAULT_ALPHA,
            arms: vec![0.4, 0.7],
            horizon: 5,
            action_interval: Interval::new(2, 5).expect("valid"),
            observation_interval: Interval::new(1, 3).expect("valid"),
        }
    }
}

impl SweepConfig {
    pub fn interface(&self) -> Result<Interface> {
        Interface::new(self.arms.len(), 2)
    }

    pub fn agency_query(&self) -> AgencyQuery {
        AgencyQuery::new(self.action_interval, self.observation_interval)
    }

    fn check(&self) -> Result<()> {
        let q = self.agency_query();
        if q.horizon() > self.horizon {
            return Err(Error::InvalidInterval(format!(
                "intervals reach step {} beyond horizon {}",
                q.horizon(),
                self.horizon
            )));
        }
        Ok(())
    }

    fn pair(&self, epsilon: f64, q_init: f64) -> Result<(QLearningAgent, BernoulliBandit)> {
        let interface = self.interface()?;
        let agent = QLearningAgent::new(interface, QLearnerSpec::new(epsilon, q_init, self.alpha)?)?;
        let env = BernoulliBandit::new(interface, self.arms.clone())?;
        Ok((agent, env))
    }

    /// Point value and interval of one query; the interval collapses to the
    /// value under exact evaluation.
    fn evaluate(
        &self,
        agent: &dyn Agent,
        env: &dyn Environment,
        queries: &[MeasureQuery],
        seed: u64,
    ) -> Result<Vec<(f64, f64, f64)>> {
        match self.method {
            Method::Exact => {
                let joint = enumerate_joint(agent, env, self.horizon)?;
                let m = InfoMeasures::new(&joint);
                queries
                    .iter()
                    .map(|q| m.gdi(q).map(|r| (r.value, r.value, r.value)))
                    .collect()
            }
            Method::MonteCarlo => {
                let s = sample_trajectories(agent, env, self.horizon, self.samples, seed)?;
                queries
                    .iter()
                    .map(|q| {
                        let r = bootstrap_ci_with(&s, q, &self.bootstrap)?;
                        Ok((r.estimate, r.ci_low, r.ci_high))
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonRow {
    pub epsilon: f64,
    pub arrow: Arrow,
    pub plasticity: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub method: Method,
    pub seed: u64,
}

impl EpsilonRow {
    pub const CSV_HEADER: &'static str = "epsilon,arrow,plasticity_bits,ci_low,ci_high,method,seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.16e},{:.16e},{:.16e},{},{}",
            self.epsilon, self.arrow, self.plasticity, self.ci_low, self.ci_high, self.method, self.seed
        )
    }
}

/// Plasticity of ε-greedy Q-learning (`q_init = 0`) across an ε grid on
/// [0,1], under both arrows. Rows are ordered by ε, Forward before Delayed.
pub fn sweep_epsilon(config: &SweepConfig) -> Result<Vec<EpsilonRow>> {
    config.check()?;
    let base = config.agency_query();
    let queries = [
        base.with_plasticity_arrow(Arrow::Forward).plasticity_query(),
        base.with_plasticity_arrow(Arrow::Delayed).plasticity_query(),
    ];
    let eps = grid(0.0, 1.0, config.points)?;
    let rows: Vec<Result<Vec<EpsilonRow>>> = eps
        .par_iter()
        .enumerate()
        .map(|(k, &epsilon)| {
            let (agent, env) = config.pair(epsilon, 0.0)?;
            let seed = config.seed.wrapping_add(k as u64);
            let values = config.evaluate(&agent, &env, &queries, seed)?;
            Ok(queries
                .iter()
                .zip(values)
                .map(|(q, (v, lo, hi))| EpsilonRow {
                    epsilon,
                    arrow: q.arrow,
                    plasticity: v,
                    ci_low: lo,
                    ci_high: hi,
                    method: config.method,
                    seed,
                })
                .collect())
        })
        .collect();
    Ok(rows.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

#[derive(Debug, Clone, PartialEq)]
pub struct QinitRow {
    pub q_init: f64,
    pub plasticity: f64,
    pub empowerment: f64,
    pub sum: f64,
    pub bound: f64,
    pub method: Method,
    pub seed: u64,
}

impl QinitRow {
    pub const CSV_HEADER: &'static str =
        "q_init,plasticity_bits,empowerment_bits,sum_bits,bound_bits,method,seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
            self.q_init, self.plasticity, self.empowerment, self.sum, self.bound, self.method, self.seed
        )
    }
}

/// Greedy Q-learning (ε = 0) across a q_init grid on [−1,1]: Delayed
/// plasticity, Forward empowerment, their sum, and the bound.
pub fn sweep_qinit(config: &SweepConfig) -> Result<Vec<QinitRow>> {
    config.check()?;
    let q = config.agency_query();
    let queries = [q.plasticity_query(), q.empowerment_query()];
    let bound = tension_bound(config.interface()?, &q);
    let inits = grid(-1.0, 1.0, config.points)?;
    inits
        .par_iter()
        .enumerate()
        .map(|(k, &q_init)| {
            let (agent, env) = config.pair(0.0, q_init)?;
            let seed = config.seed.wrapping_add(k as u64);
            let (plasticity, empowerment) = match config.method {
                Method::Exact => {
                    let r = check_tension(&agent, &env, &q)?;
                    (r.plasticity, r.empowerment)
                }
                Method::MonteCarlo => {
                    let s = sample_trajectories(&agent, &env, config.horizon, config.samples, seed)?;
                    (estimate_gdi(&s, &queries[0])?, estimate_gdi(&s, &queries[1])?)
                }
            };
            Ok(QinitRow {
                q_init,
                plasticity,
                empowerment,
                sum: plasticity + empowerment,
                bound,
                method: config.method,
                seed,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorridorRow {
    pub room: usize,
    pub plasticity: f64,
    pub empowerment: f64,
}

impl CorridorRow {
    pub const CSV_HEADER: &'static str = "room,plasticity_bits,empowerment_bits";

    pub fn csv_row(&self) -> String {
        format!("{},{:.16e},{:.16e}", self.room, self.plasticity, self.empowerment)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorridorConfig {
    pub rooms: usize,
    pub theta: f64,
    pub horizon: usize,
    pub p_on: f64,
    pub p_off: f64,
}

impl Default for CorridorConfig {
    fn default() -> Self {
        Self {
            rooms: 5,
            theta: 0.5,
            horizon: 4,
            p_on: StayAgent::DEFAULT_P_ON,
            p_off: StayAgent::DEFAULT_P_OFF,
        }
    }
}

/// Plasticity (Delayed O→A) and empowerment (Forward A→O) over the full
/// window for the mouse that stays in each room in turn.
pub fn corridor_table(config: &CorridorConfig) -> Result<Vec<CorridorRow>> {
    let full = Interval::full(config.horizon)?;
    let q = AgencyQuery::new(full, full);
    (0..config.rooms)
        .into_par_iter()
        .map(|room| {
            let spec = CorridorSpec::starting_in(config.rooms, config.theta, room)?;
            let agent = StayAgent::new(spec, config.p_on, config.p_off)?;
            let r = check_tension(&agent, &CorridorEnv::new(spec), &q)?;
            Ok(CorridorRow {
                room,
                plasticity: r.plasticity,
                empowerment: r.empowerment,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_both_ends() {
        let g = grid(0.0, 1.0, 21).unwrap();
        assert_eq!((g[0], g[20], g.len()), (0.0, 1.0, 21));
        assert_eq!(grid(-1.0, 1.0, 21).unwrap()[20], 1.0);
        assert_eq!(grid(0.3, 1.0, 1).unwrap(), vec![0.3]);
        assert!(grid(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn full_exploration_has_no_plasticity() {
        let cfg = SweepConfig {
            points: 2,
            ..SweepConfig::default()
        };
        let rows = sweep_epsilon(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        for r in rows.iter().filter(|r| r.epsilon == 1.0 && r.arrow == Arrow::Delayed) {
            assert!(r.plasticity < 1e-12);
        }
    }
}
