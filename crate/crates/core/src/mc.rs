//! Monte Carlo plug-in estimation of GDI with bootstrap intervals.
//!
//! Rollouts are drawn in fixed-size chunks; chunk `k` uses ChaCha8 substream
//! `k` of the sampling seed, so the sample set does not depend on how chunks
//! are scheduled across threads. Bootstrap replicate `r` likewise uses
//! substream `r` of a seed derived from the sample seed.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Binomial;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interface::{Agent, Environment, History, Interface, Role};
use crate::joint::{cell_count, check_policy_output, JointDist, Trajectory, DEFAULT_CELL_CAP};
use crate::measures::{InfoMeasures, MeasureQuery};
use crate::random::{substream_rng, GENERATOR_NAME};

/// Rollouts per substream.
pub const CHUNK: usize = 4096;
pub const DEFAULT_REPLICATES: usize = 1000;
pub const MIN_REPLICATES: usize = 100;
pub const DEFAULT_LEVEL: f64 = 0.95;
/// Mixed into the sample seed to obtain the bootstrap seed.
const BOOTSTRAP_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// I.i.d. trajectories of one agent–environment pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    interface: Interface,
    horizon: usize,
    lead: Role,
    /// Dense trajectory indices in the [`JointDist`] layout.
    indices: Vec<u64>,
    seed: u64,
}

impl SampleSet {
    pub fn interface(&self) -> Interface {
        self.interface
    }
    pub fn horizon(&self) -> usize {
        self.horizon
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn generator(&self) -> &'static str {
        GENERATOR_NAME
    }
    pub fn len(&self) -> usize {
        self.indices.len()
    }
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn trajectories(&self) -> impl Iterator<Item = Trajectory> + '_ {
        self.indices
            .iter()
            .map(|&i| Trajectory::from_index(self.interface, self.horizon, i as usize))
    }

    /// Occurrence count per distinct trajectory index, in index order.
    pub fn counts(&self) -> Vec<(u64, u64)> {
        let mut m: BTreeMap<u64, u64> = BTreeMap::new();
        for &i in &self.indices {
            *m.entry(i).or_default() += 1;
        }
        m.into_iter().collect()
    }
}

fn draw<R: Rng + ?Sized>(dist: &[f64], rng: &mut R) -> Result<usize> {
    WeightedIndex::new(dist)
        .map(|w| w.sample(rng))
        .map_err(|e| Error::NumericalIntegrity(format!("cannot sample from {dist:?}: {e}")))
}

fn rollout<R: Rng + ?Sized>(
    agent: &dyn Agent,
    env: &dyn Environment,
    horizon: usize,
    rng: &mut R,
) -> Result<u64> {
    let interface = agent.interface();
    let (na, no) = (interface.num_actions(), interface.num_observations());
    let mut h = History::empty_with_lead(interface, agent.lead());
    let mut idx = 0u64;
    for _ in 0..horizon {
        let (lead_dist, lead_n) = match h.lead() {
            Role::Action => (agent.act(&h), na),
            Role::Observation => (env.respond(&h), no),
        };
        check_policy_output(&lead_dist, lead_n, &h)?;
        let x = draw(&lead_dist, rng)?;
        h.push_pending(x);
        let (follow_dist, follow_n) = match h.lead() {
            Role::Action => (env.respond(&h), no),
            Role::Observation => (agent.act(&h), na),
        };
        check_policy_output(&follow_dist, follow_n, &h)?;
        let y = draw(&follow_dist, rng)?;
        h.complete_step(y);
        let (a, o) = match h.lead() {
            Role::Action => (x, y),
            Role::Observation => (y, x),
        };
        idx = idx * (na * no) as u64 + (a * no + o) as u64;
    }
    Ok(idx)
}

/// Draws `count` rollouts of `horizon` steps.
pub fn sample_trajectories(
    agent: &dyn Agent,
    env: &dyn Environment,
    horizon: usize,
    count: usize,
    seed: u64,
) -> Result<SampleSet> {
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let interface = agent.interface();
    if env.interface() != interface || agent.lead() != env.lead() {
        return Err(Error::InvalidArgument(
            "agent and environment do not share an interface and ordering".into(),
        ));
    }
    let cells = cell_count(interface, horizon);
    if cells > u64::MAX as u128 {
        return Err(Error::CapExceeded {
            cells,
            cap: u64::MAX,
        });
    }
    let chunks = count.div_ceil(CHUNK);
    let parts: Vec<Result<Vec<u64>>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream_rng(seed, k as u64);
            let n = CHUNK.min(count - k * CHUNK);
            (0..n).map(|_| rollout(agent, env, horizon, &mut rng)).collect()
        })
        .collect();
    let mut indices = Vec::with_capacity(count);
    for p in parts {
        indices.extend(p?);
    }
    Ok(SampleSet {
        interface,
        horizon,
        lead: agent.lead(),
        indices,
        seed,
    })
}

/// Empirical law of the first `horizon` steps from weighted trajectory
/// indices of a longer horizon `full`.
fn empirical_joint(
    interface: Interface,
    full: usize,
    horizon: usize,
    lead: Role,
    weighted: impl Iterator<Item = (u64, f64)>,
) -> Result<JointDist> {
    let cells = cell_count(interface, horizon);
    if cells > DEFAULT_CELL_CAP as u128 {
        return Err(Error::CapExceeded {
            cells,
            cap: DEFAULT_CELL_CAP,
        });
    }
    let drop = (interface.step_cardinality() as u64).pow((full - horizon) as u32);
    let mut probs = vec![0.0; cells as usize];
    let mut total = 0.0;
    for (idx, w) in weighted {
        probs[(idx / drop) as usize] += w;
        total += w;
    }
    if total.is_nan() || total <= 0.0 {
        return Err(Error::InvalidArgument("no sample mass".into()));
    }
    probs.iter_mut().for_each(|p| *p /= total);
    JointDist::from_table(interface, horizon, lead, probs)
}

fn estimate_from_counts(
    samples: &SampleSet,
    counts: impl Iterator<Item = (u64, f64)>,
    query: &MeasureQuery,
) -> Result<f64> {
    query.check(samples.horizon)?;
    let joint = empirical_joint(
        samples.interface,
        samples.horizon,
        query.horizon(),
        samples.lead,
        counts,
    )?;
    Ok(InfoMeasures::new(&joint).gdi(query)?.value)
}

/// Plug-in estimate: the exact GDI of the empirical distribution.
pub fn estimate_gdi(samples: &SampleSet, query: &MeasureQuery) -> Result<f64> {
    let counts = samples.counts();
    estimate_from_counts(samples, counts.iter().map(|&(i, c)| (i, c as f64)), query)
}

/// Plug-in estimate from explicitly weighted trajectories of one horizon.
/// Weights need not be normalized.
pub fn estimate_gdi_weighted(
    interface: Interface,
    weighted: &[(Trajectory, f64)],
    query: &MeasureQuery,
) -> Result<f64> {
    let horizon = weighted
        .first()
        .map(|(t, _)| t.horizon())
        .ok_or_else(|| Error::InvalidArgument("no weighted trajectories".into()))?;
    query.check(horizon)?;
    let mut items = Vec::with_capacity(weighted.len());
    for (t, w) in weighted {
        if t.horizon() != horizon {
            return Err(Error::InvalidArgument(
                "weighted trajectories must share a horizon".into(),
            ));
        }
        if !(w.is_finite() && *w >= 0.0) {
            return Err(Error::InvalidArgument(format!("invalid weight {w}")));
        }
        items.push((t.index(interface)? as u64, *w));
    }
    let joint = empirical_joint(interface, horizon, query.horizon(), Role::Action, items.into_iter())?;
    Ok(InfoMeasures::new(&joint).gdi(query)?.value)
}

/// How bootstrap replicates become an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiMethod {
    /// `[q_lo, q_hi]` of the replicate estimates.
    Percentile,
    /// `[2θ̂ − q_hi, 2θ̂ − q_lo]`, clamped at 0: reflects the replicate spread
    /// around the point estimate, which corrects for the plug-in bias.
    Basic,
}

impl std::str::FromStr for CiMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "percentile" => Ok(Self::Percentile),
            "basic" => Ok(Self::Basic),
            _ => Err(Error::Parse(format!("unknown interval method `{s}`"))),
        }
    }
}

impl CiMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::Percentile => "percentile",
            Self::Basic => "basic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub level: f64,
    pub method: CiMethod,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            replicates: DEFAULT_REPLICATES,
            level: DEFAULT_LEVEL,
            method: CiMethod::Basic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_samples: usize,
    pub replicates: usize,
    pub seed: u64,
}

impl EstimateReport {
    pub const CSV_HEADER: &'static str = "estimate_bits,ci_low,ci_high,n_samples,replicates,seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{},{},{}",
            self.estimate, self.ci_low, self.ci_high, self.n_samples, self.replicates, self.seed
        )
    }

    pub fn contains(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// One multinomial resample of `counts`, as sequential binomials.
fn resample<R: Rng + ?Sized>(counts: &[(u64, u64)], total: u64, rng: &mut R) -> Vec<(u64, f64)> {
    let mut left = total;
    let mut mass_left = total;
    let mut out = Vec::with_capacity(counts.len());
    for (k, &(idx, c)) in counts.iter().enumerate() {
        if left == 0 {
            break;
        }
        let draw = if k + 1 == counts.len() {
            left
        } else {
            let p = (c as f64 / mass_left as f64).min(1.0);
            Binomial::new(left, p).expect("valid binomial").sample(rng)
        };
        mass_left -= c;
        left -= draw;
        if draw > 0 {
            out.push((idx, draw as f64));
        }
    }
    out
}

/// Bootstrap interval with the default method (basic) at `level`.
pub fn bootstrap_ci(
    samples: &SampleSet,
    query: &MeasureQuery,
    replicates: usize,
    level: f64,
) -> Result<EstimateReport> {
    bootstrap_ci_with(
        samples,
        query,
        &BootstrapConfig {
            replicates,
            level,
            ..BootstrapConfig::default()
        },
    )
}

pub fn bootstrap_ci_with(
    samples: &SampleSet,
    query: &MeasureQuery,
    config: &BootstrapConfig,
) -> Result<EstimateReport> {
    if config.replicates < MIN_REPLICATES {
        return Err(Error::InvalidArgument(format!(
            "bootstrap needs at least {MIN_REPLICATES} replicates, got {}",
            config.replicates
        )));
    }
    if !(config.level > 0.0 && config.level < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence level {} outside (0,1)",
            config.level
        )));
    }
    let counts = samples.counts();
    let total = samples.len() as u64;
    let estimate = estimate_from_counts(samples, counts.iter().map(|&(i, c)| (i, c as f64)), query)?;
    let seed = samples.seed ^ BOOTSTRAP_SALT;
    let reps: Vec<Result<f64>> = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = substream_rng(seed, r as u64);
            let drawn = resample(&counts, total, &mut rng);
            estimate_from_counts(samples, drawn.into_iter(), query)
        })
        .collect();
    let mut reps = reps.into_iter().collect::<Result<Vec<f64>>>()?;
    reps.sort_by(f64::total_cmp);
    let alpha = (1.0 - config.level) / 2.0;
    let q_lo = quantile(&reps, alpha);
    let q_hi = quantile(&reps, 1.0 - alpha);
    let (ci_low, ci_high) = match config.method {
        CiMethod::Percentile => (q_lo, q_hi),
        CiMethod::Basic => ((2.0 * estimate - q_hi).max(0.0), (2.0 * estimate - q_lo).max(0.0)),
    };
    Ok(EstimateReport {
        estimate,
        ci_low,
        ci_high,
        n_samples: samples.len(),
        replicates: config.replicates,
        seed: samples.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::joint::enumerate_joint;
    use crate::measures::{Arrow, Interval};
    use crate::zoo::{ConstantAgent, CopyEnv, MirrorAgent, UniformEnv};

    fn bin() -> Interface {
        Interface::new(2, 2).unwrap()
    }

    fn mirror_query() -> MeasureQuery {
        MeasureQuery::new(
            Role::Observation,
            Interval::new(1, 2).unwrap(),
            Interval::new(2, 3).unwrap(),
            Arrow::Delayed,
        )
    }

    #[test]
    fn deterministic_pair_repeats_one_trajectory() {
        let agent = ConstantAgent::new(bin(), vec![0.0, 1.0]).unwrap();
        let env = CopyEnv::new(bin()).unwrap();
        let s = sample_trajectories(&agent, &env, 3, 50, 1).unwrap();
        let first = s.trajectories().next().unwrap();
        assert!(s.trajectories().all(|t| t == first));
        assert_eq!(first.actions, vec![1, 1, 1]);
        let r = bootstrap_ci(&s, &mirror_query(), 100, 0.95).unwrap();
        assert_eq!((r.estimate, r.ci_low, r.ci_high), (0.0, 0.0, 0.0));
    }

    #[test]
    fn uniform_frequencies_and_reproducibility() {
        let agent = ConstantAgent::uniform(bin());
        let env = UniformEnv::new(bin());
        let s = sample_trajectories(&agent, &env, 1, 100_000, 7).unwrap();
        for (_, c) in s.counts() {
            assert!((c as f64 / 1e5 - 0.25).abs() < 0.01);
        }
        assert_eq!(s, sample_trajectories(&agent, &env, 1, 100_000, 7).unwrap());
        assert!(sample_trajectories(&agent, &env, 1, 0, 7).is_err());
    }

    #[test]
    fn weighted_exact_law_reproduces_the_exact_value() {
        let agent = MirrorAgent::new(bin(), 2).unwrap();
        let env = UniformEnv::new(bin());
        let joint = enumerate_joint(&agent, &env, 3).unwrap();
        let weighted: Vec<_> = joint.support().collect();
        let q = mirror_query();
        let exact = InfoMeasures::new(&joint).gdi(&q).unwrap().value;
        let est = estimate_gdi_weighted(bin(), &weighted, &q).unwrap();
        assert!((est - exact).abs() < 1e-12);
    }

    #[test]
    fn mirror_pair_estimate_is_close_to_two_bits() {
        let agent = MirrorAgent::new(bin(), 2).unwrap();
        let env = UniformEnv::new(bin());
        let s = sample_trajectories(&agent, &env, 3, 100_000, 11).unwrap();
        let est = estimate_gdi(&s, &mirror_query()).unwrap();
        assert!((est - 2.0).abs() < 0.02, "{est}");
    }

    #[test]
    fn bootstrap_preconditions() {
        let s = sample_trajectories(&ConstantAgent::uniform(bin()), &UniformEnv::new(bin()), 3, 100, 1)
            .unwrap();
        assert!(bootstrap_ci(&s, &mirror_query(), 1, 0.95).is_err());
        assert!(bootstrap_ci(&s, &mirror_query(), 100, 1.0).is_err());
    }

    #[test]
    fn resampling_preserves_the_total() {
        let counts = vec![(0, 5), (3, 10), (9, 1)];
        let mut rng = substream_rng(3, 0);
        for _ in 0..50 {
            let r = resample(&counts, 16, &mut rng);
            assert_eq!(r.iter().map(|x| x.1).sum::<f64>(), 16.0);
        }
    }

    #[test]
    fn quantiles_interpolate() {
        let v = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(quantile(&v, 0.0), 0.0);
        assert_eq!(quantile(&v, 1.0), 3.0);
        assert!((quantile(&v, 0.5) - 1.5).abs() < 1e-15);
    }
}
