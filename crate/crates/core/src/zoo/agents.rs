use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interface::{Agent, History, Interface};

/// Checks a probability vector of length `k` (entries ≥ 0, sum within 1e-12).
pub fn validate_dist(dist: &[f64], k: usize, what: &str) -> Result<()> {
    if dist.len() != k {
        return Err(Error::InvalidArgument(format!(
            "{what}: expected {k} probabilities, got {}",
            dist.len()
        )));
    }
    if dist.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "{what}: negative or non-finite probability"
        )));
    }
    let sum: f64 = dist.iter().sum();
    if (sum - 1.0).abs() > crate::joint::POLICY_TOLERANCE {
        return Err(Error::InvalidArgument(format!(
            "{what}: probabilities sum to {sum}"
        )));
    }
    Ok(())
}

pub(crate) fn point_mass(k: usize, at: usize) -> Vec<f64> {
    let mut v = vec![0.0; k];
    v[at] = 1.0;
    v
}

pub(crate) fn uniform(k: usize) -> Vec<f64> {
    vec![1.0 / k as f64; k]
}

/// Always emits the same action distribution.
#[derive(Debug, Clone)]
pub struct ConstantAgent {
    interface: Interface,
    dist: Vec<f64>,
}

impl ConstantAgent {
    pub fn new(interface: Interface, dist: Vec<f64>) -> Result<Self> {
        validate_dist(&dist, interface.num_actions(), "constant agent")?;
        Ok(Self { interface, dist })
    }

    pub fn uniform(interface: Interface) -> Self {
        Self {
            interface,
            dist: uniform(interface.num_actions()),
        }
    }
}

impl Agent for ConstantAgent {
    fn interface(&self) -> Interface {
        self.interface
    }
    fn act(&self, _history: &History) -> Vec<f64> {
        self.dist.clone()
    }
}

/// Samples a whole action sequence up front from a fixed distribution over
/// `A^n`; step `t` is the conditional of `a_t` given `a_{1:t-1}`.
#[derive(Debug, Clone)]
pub struct OpenLoopAgent {
    interface: Interface,
    horizon: usize,
    /// Dense over `A^n`, first action most significant.
    sequences: Vec<f64>,
}

impl OpenLoopAgent {
    pub fn new(interface: Interface, horizon: usize, sequences: Vec<f64>) -> Result<Self> {
        let expected = interface
            .num_actions()
            .checked_pow(horizon as u32)
            .ok_or_else(|| Error::InvalidArgument("open-loop table too large".into()))?;
        validate_dist(&sequences, expected, "open-loop sequence distribution")?;
        Ok(Self {
            interface,
            horizon,
            sequences,
        })
    }

    /// Uniform first action, then repeats it: a maximally correlated sequence.
    pub fn repeat_first(interface: Interface, horizon: usize) -> Self {
        let na = interface.num_actions();
        let mut sequences = vec![0.0; na.pow(horizon as u32)];
        for a in 0..na {
            let idx = (0..horizon).fold(0, |i, _| i * na + a);
            sequences[idx] = 1.0 / na as f64;
        }
        Self {
            interface,
            horizon,
            sequences,
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
}

impl Agent for OpenLoopAgent {
    fn interface(&self) -> Interface {
        self.interface
    }

    fn act(&self, history: &History) -> Vec<f64> {
        let na = self.interface.num_actions();
        let t = history.num_steps();
        if t >= self.horizon {
            return uniform(na);
        }
        let prefix = history.actions();
        let prefix_idx = prefix.iter().fold(0, |i, &a| i * na + a);
        let block = na.pow((self.horizon - t - 1) as u32);
        let mut out = vec![0.0; na];
        for (a, slot) in out.iter_mut().enumerate() {
            let start = (prefix_idx * na + a) * block;
            *slot = self.sequences[start..start + block].iter().sum();
        }
        let mass: f64 = out.iter().sum();
        if mass <= 0.0 {
            return uniform(na);
        }
        out.iter_mut().for_each(|p| *p /= mass);
        out
    }
}

/// Action distribution depends only on the number of completed steps.
#[derive(Debug, Clone)]
pub struct LengthAgent {
    interface: Interface,
    per_length: Vec<Vec<f64>>,
    /// Index by `t mod len` instead of saturating at the last entry.
    cyclic: bool,
}

impl LengthAgent {
    /// `per_length[t]` applies at history length `t`; the last entry repeats.
    pub fn new(interface: Interface, per_length: Vec<Vec<f64>>) -> Result<Self> {
        if per_length.is_empty() {
            return Err(Error::InvalidArgument(
                "length agent needs at least one distribution".into(),
            ));
        }
        for d in &per_length {
            validate_dist(d, interface.num_actions(), "length agent")?;
        }
        Ok(Self {
            interface,
            per_length,
            cyclic: false,
        })
    }

    /// Plays action `t mod |A|` at history length `t`.
    pub fn cycling(interface: Interface) -> Self {
        let na = interface.num_actions();
        Self {
            interface,
            per_length: (0..na).map(|t| point_mass(na, t)).collect(),
            cyclic: true,
        }
    }
}

impl Agent for LengthAgent {
    fn interface(&self) -> Interface {
        self.interface
    }
    fn act(&self, history: &History) -> Vec<f64> {
        let t = history.num_steps();
        let n = self.per_length.len();
        let idx = if self.cyclic { t % n } else { t.min(n - 1) };
        self.per_length[idx].clone()
    }
}

type PastActionFn = dyn Fn(&[usize]) -> Vec<f64> + Send + Sync;

/// Action distribution is a function of past actions only.
#[derive(Clone)]
pub struct PastActionAgent {
    interface: Interface,
    policy: Arc<PastActionFn>,
}

impl fmt::Debug for PastActionAgent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PastActionAgent")
            .field("interface", &self.interface)
            .finish_non_exhaustive()
    }
}

impl PastActionAgent {
    pub fn new<F>(interface: Interface, policy: F) -> Self
    where
        F: Fn(&[usize]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            interface,
            policy: Arc::new(policy),
        }
    }

    /// Repeats the previous action with probability `stay`, otherwise picks
    /// uniformly among the others; uniform on the first step.
    pub fn sticky(interface: Interface, stay: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&stay) {
            return Err(Error::InvalidArgument(format!(
                "stay probability {stay} outside [0,1]"
            )));
        }
        let na = interface.num_actions();
        Ok(Self::new(interface, move |past: &[usize]| match past.last() {
            None => uniform(na),
            Some(&last) => (0..na)
                .map(|a| {
                    if a == last {
                        stay
                    } else {
                        (1.0 - stay) / (na - 1) as f64
                    }
                })
                .collect(),
        }))
    }
}

impl Agent for PastActionAgent {
    fn interface(&self) -> Interface {
        self.interface
    }
    fn act(&self, history: &History) -> Vec<f64> {
        (self.policy)(&history.actions())
    }
}

/// Parameters of the tabular ε-greedy Q-learner.
#[derive(Debug, Clone, PartialEq)]
pub struct QLearnerSpec {
    pub epsilon: f64,
    pub q_init: f64,
    pub alpha: f64,
    /// Reward per observation index; `None` means reward = index.
    pub rewards: Option<Vec<f64>>,
}

impl QLearnerSpec {
    pub const DEFAULT_ALPHA: f64 = 0.1;

    pub fn new(epsilon: f64, q_init: f64, alpha: f64) -> Result<Self> {
        let spec = Self {
            epsilon,
            q_init,
            alpha,
            rewards: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::InvalidArgument(format!(
                "epsilon {} outside [0,1]",
                self.epsilon
            )));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha {} outside (0,1]",
                self.alpha
            )));
        }
        if !self.q_init.is_finite() {
            return Err(Error::InvalidArgument("q_init must be finite".into()));
        }
        Ok(())
    }

    fn reward(&self, observation: usize) -> f64 {
        match &self.rewards {
            Some(r) => r[observation],
            None => observation as f64,
        }
    }
}

/// ε-greedy tabular Q-learning, expressed as a pure function of the
/// history: each call replays the incremental updates from scratch.
#[derive(Debug, Clone)]
pub struct QLearningAgent {
    interface: Interface,
    spec: QLearnerSpec,
}

impl QLearningAgent {
    /// Greedy ties within this gap are treated as equal.
    const TIE_TOLERANCE: f64 = 1e-12;

    pub fn new(interface: Interface, spec: QLearnerSpec) -> Result<Self> {
        spec.validate()?;
        if let Some(r) = &spec.rewards {
            if r.len() != interface.num_observations() {
                return Err(Error::InvalidArgument(format!(
                    "reward map has {} entries for {} observations",
                    r.len(),
                    interface.num_observations()
                )));
            }
        }
        Ok(Self { interface, spec })
    }

    pub fn spec(&self) -> &QLearnerSpec {
        &self.spec
    }

    /// Action values after replaying `history`.
    pub fn q_values(&self, history: &History) -> Vec<f64> {
        let mut q = vec![self.spec.q_init; self.interface.num_actions()];
        for &(a, o) in history.steps() {
            q[a] += self.spec.alpha * (self.spec.reward(o) - q[a]);
        }
        q
    }
}

impl Agent for QLearningAgent {
    fn interface(&self) -> Interface {
        self.interface
    }

    fn act(&self, history: &History) -> Vec<f64> {
        let na = self.interface.num_actions();
        let q = self.q_values(history);
        let best = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let greedy: Vec<bool> = q
            .iter()
            .map(|&v| best - v <= Self::TIE_TOLERANCE)
            .collect();
        let n_greedy = greedy.iter().filter(|g| **g).count() as f64;
        let eps = self.spec.epsilon;
        greedy
            .iter()
            .map(|&g| eps / na as f64 + if g { (1.0 - eps) / n_greedy } else { 0.0 })
            .collect()
    }
}

/// Deterministic agent that copies an earlier observation into its action.
///
/// From step `start` on, the action at step `t` is the observation emitted
/// at step `t - lag` when that index is a valid action; otherwise action 0.
#[derive(Debug, Clone)]
pub struct MirrorAgent {
    interface: Interface,
    start: usize,
    lag: usize,
}

impl MirrorAgent {
    pub fn new(interface: Interface, start: usize) -> Result<Self> {
        Self::with_lag(interface, start, 1)
    }

    pub fn with_lag(interface: Interface, start: usize, lag: usize) -> Result<Self> {
        if interface.num_actions() > interface.num_observations() {
            return Err(Error::InvalidArgument(format!(
                "mirror agent needs |A| <= |O|, got |A|={} |O|={}",
                interface.num_actions(),
                interface.num_observations()
            )));
        }
        if lag == 0 {
            return Err(Error::InvalidArgument(
                "mirror agent lag must be at least 1".into(),
            ));
        }
        Ok(Self {
            interface,
            start,
            lag,
        })
    }
}

impl Agent for MirrorAgent {
    fn interface(&self) -> Interface {
        self.interface
    }

    fn act(&self, history: &History) -> Vec<f64> {
        let na = self.interface.num_actions();
        let t = history.current_step();
        if t < self.start || t <= self.lag {
            return point_mass(na, 0);
        }
        let o = history.observations()[t - self.lag - 1];
        point_mass(na, if o < na { o } else { 0 })
    }
}

/// Action 0 before step `from`, then uniform over the first `k` actions.
#[derive(Debug, Clone)]
pub struct PhasedUniformAgent {
    interface: Interface,
    k: usize,
    from: usize,
}

impl PhasedUniformAgent {
    pub fn new(interface: Interface, k: usize, from: usize) -> Result<Self> {
        if k == 0 || k > interface.num_actions() {
            return Err(Error::InvalidArgument(format!(
                "support size {k} outside 1..={}",
                interface.num_actions()
            )));
        }
        Ok(Self { interface, k, from })
    }
}

impl Agent for PhasedUniformAgent {
    fn interface(&self) -> Interface {
        self.interface
    }
    fn act(&self, history: &History) -> Vec<f64> {
        let na = self.interface.num_actions();
        if history.current_step() < self.from {
            return point_mass(na, 0);
        }
        let mut v = vec![0.0; na];
        v[..self.k].fill(1.0 / self.k as f64);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin() -> Interface {
        Interface::new(2, 2).unwrap()
    }

    #[test]
    fn constant_agent_ignores_observations() {
        let agent = ConstantAgent::uniform(bin());
        let h1 = History::new(bin(), vec![(0, 0)], None).unwrap();
        let h2 = History::new(bin(), vec![(0, 1)], None).unwrap();
        assert_eq!(agent.act(&h1), agent.act(&h2));
        assert!(ConstantAgent::new(bin(), vec![0.5, 0.6]).is_err());
    }

    #[test]
    fn open_loop_conditionals_follow_the_sequence_table() {
        let agent = OpenLoopAgent::repeat_first(bin(), 3);
        let empty = History::empty(bin());
        assert_eq!(agent.act(&empty), vec![0.5, 0.5]);
        let h = History::new(bin(), vec![(1, 0)], None).unwrap();
        assert_eq!(agent.act(&h), vec![0.0, 1.0]);
        let h = History::new(bin(), vec![(1, 1)], None).unwrap();
        assert_eq!(agent.act(&h), vec![0.0, 1.0]);
    }

    #[test]
    fn qlearning_examples() {
        let i = bin();
        // epsilon = 1 is uniform everywhere
        let agent = QLearningAgent::new(i, QLearnerSpec::new(1.0, 0.3, 0.1).unwrap()).unwrap();
        let h = History::new(i, vec![(0, 1), (1, 0)], None).unwrap();
        assert_eq!(agent.act(&h), vec![0.5, 0.5]);
        // symmetric init: empty history is a tie
        let agent = QLearningAgent::new(i, QLearnerSpec::new(0.0, 0.0, 0.1).unwrap()).unwrap();
        assert_eq!(agent.act(&History::empty(i)), vec![0.5, 0.5]);
        // one rewarded pull of arm 0: Q = (0.1, 0)
        let h = History::new(i, vec![(0, 1)], None).unwrap();
        assert_eq!(agent.q_values(&h), vec![0.1, 0.0]);
        assert_eq!(agent.act(&h), vec![1.0, 0.0]);
        assert!(QLearnerSpec::new(1.5, 0.0, 0.1).is_err());
        assert!(QLearnerSpec::new(0.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn mirror_agent_copies_the_last_observation() {
        let i = Interface::new(2, 3).unwrap();
        let agent = MirrorAgent::new(i, 2).unwrap();
        assert_eq!(agent.act(&History::empty(i)), vec![1.0, 0.0]);
        let h = History::new(i, vec![(0, 1)], None).unwrap();
        assert_eq!(agent.act(&h), vec![0.0, 1.0]);
        let h = History::new(i, vec![(0, 2)], None).unwrap();
        assert_eq!(agent.act(&h), vec![1.0, 0.0]);
        assert!(MirrorAgent::new(Interface::new(3, 2).unwrap(), 1).is_err());
        // before start
        let late = MirrorAgent::new(i, 3).unwrap();
        let h = History::new(i, vec![(0, 1)], None).unwrap();
        assert_eq!(late.act(&h), vec![1.0, 0.0]);
    }

    #[test]
    fn sticky_agent_depends_on_past_actions_only() {
        let agent = PastActionAgent::sticky(bin(), 0.8).unwrap();
        let h1 = History::new(bin(), vec![(1, 0)], None).unwrap();
        let h2 = History::new(bin(), vec![(1, 1)], None).unwrap();
        assert_eq!(agent.act(&h1), agent.act(&h2));
        assert!((agent.act(&h1)[1] - 0.8).abs() < 1e-15);
    }
}
