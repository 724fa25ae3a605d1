use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::agents::{point_mass, uniform, validate_dist};
use crate::error::{Error, Result};
use crate::interface::{Environment, History, Interface};

/// Emits the uniform observation distribution regardless of history.
#[derive(Debug, Clone)]
pub struct UniformEnv {
    interface: Interface,
}

impl UniformEnv {
    pub fn new(interface: Interface) -> Self {
        Self { interface }
    }
}

impl Environment for UniformEnv {
    fn interface(&self) -> Interface {
        self.interface
    }
    fn respond(&self, _history: &History) -> Vec<f64> {
        uniform(self.interface.num_observations())
    }
}

/// Observation 0 before step `from`, then uniform over the first `k`
/// observations.
#[derive(Debug, Clone)]
pub struct PhasedUniformEnv {
    interface: Interface,
    k: usize,
    from: usize,
}

impl PhasedUniformEnv {
    pub fn new(interface: Interface, k: usize, from: usize) -> Result<Self> {
        if k == 0 || k > interface.num_observations() {
            return Err(Error::InvalidArgument(format!(
                "support size {k} outside 1..={}",
                interface.num_observations()
            )));
        }
        Ok(Self { interface, k, from })
    }
}

impl Environment for PhasedUniformEnv {
    fn interface(&self) -> Interface {
        self.interface
    }
    fn respond(&self, history: &History) -> Vec<f64> {
        let no = self.interface.num_observations();
        if history.current_step() < self.from {
            return point_mass(no, 0);
        }
        let mut v = vec![0.0; no];
        v[..self.k].fill(1.0 / self.k as f64);
        v
    }
}

type DetFn = dyn Fn(&History) -> usize + Send + Sync;

/// Observation is a deterministic function of the history.
#[derive(Clone)]
pub struct DeterministicEnv {
    interface: Interface,
    map: Arc<DetFn>,
}

impl fmt::Debug for DeterministicEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DeterministicEnv")
            .field("interface", &self.interface)
            .finish_non_exhaustive()
    }
}

impl DeterministicEnv {
    /// Out-of-range outputs surface as a contract violation at enumeration.
    pub fn new<F>(interface: Interface, map: F) -> Self
    where
        F: Fn(&History) -> usize + Send + Sync + 'static,
    {
        Self {
            interface,
            map: Arc::new(map),
        }
    }

    /// Lookup table keyed by the full history symbol sequence
    /// `a1 o1 … ak` (ending in the pending action); missing keys emit 0.
    pub fn from_table(interface: Interface, table: HashMap<Vec<usize>, usize>) -> Result<Self> {
        for (key, &o) in &table {
            if key.len() % 2 == 0 {
                return Err(Error::InvalidArgument(format!(
                    "deterministic table key {key:?} must end in an action"
                )));
            }
            let bad_symbol = key.iter().enumerate().any(|(i, &s)| {
                s >= if i % 2 == 0 {
                    interface.num_actions()
                } else {
                    interface.num_observations()
                }
            });
            if bad_symbol || o >= interface.num_observations() {
                return Err(Error::InvalidArgument(format!(
                    "deterministic table entry {key:?} -> {o} out of range"
                )));
            }
        }
        Ok(Self::new(interface, move |h: &History| {
            let mut key: Vec<usize> = h.steps().iter().flat_map(|&(a, o)| [a, o]).collect();
            key.extend(h.pending());
            table.get(&key).copied().unwrap_or(0)
        }))
    }

    /// Parses lines `a1 o1 … ak : o`; blank lines and `#` comments are skipped.
    pub fn parse_table(interface: Interface, text: &str) -> Result<Self> {
        let mut table = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = line.split_once(':').ok_or_else(|| {
                Error::Parse(format!("line {}: expected `history : observation`", n + 1))
            })?;
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad symbol `{s}`", n + 1)))
            };
            let key = lhs
                .split_whitespace()
                .map(parse)
                .collect::<Result<Vec<_>>>()?;
            let o = parse(rhs.trim())?;
            if table.insert(key, o).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate history", n + 1)));
            }
        }
        Self::from_table(interface, table)
    }

    /// Always emits observation 0.
    pub fn constant(interface: Interface) -> Self {
        Self::new(interface, |_| 0)
    }
}

impl Environment for DeterministicEnv {
    fn interface(&self) -> Interface {
        self.interface
    }
    fn respond(&self, history: &History) -> Vec<f64> {
        let o = (self.map)(history);
        let no = self.interface.num_observations();
        if o >= no {
            // Not a distribution of the right support; the enumerator
            // reports it against the offending history.
            let mut v = vec![0.0; no];
            v[0] = f64::NAN;
            return v;
        }
        point_mass(no, o)
    }
}

/// Observation equals the pending action's index.
#[derive(Debug, Clone)]
pub struct CopyEnv {
    interface: Interface,
}

impl CopyEnv {
    pub fn new(interface: Interface) -> Result<Self> {
        if interface.num_observations() < interface.num_actions() {
            return Err(Error::InvalidArgument(format!(
                "copy environment needs |O| >= |A|, got |A|={} |O|={}",
                interface.num_actions(),
                interface.num_observations()
            )));
        }
        Ok(Self { interface })
    }
}

impl Environment for CopyEnv {
    fn interface(&self) -> Interface {
        self.interface
    }
    fn respond(&self, history: &History) -> Vec<f64> {
        point_mass(
            self.interface.num_observations(),
            history.pending().unwrap_or(0),
        )
    }
}

/// Output distribution depends only on the number of completed steps.
#[derive(Debug, Clone)]
pub struct IgnoreEnv {
    interface: Interface,
    per_length: Vec<Vec<f64>>,
}

impl IgnoreEnv {
    /// `per_length[t]` applies at history length `t`; the last entry repeats.
    pub fn new(interface: Interface, per_length: Vec<Vec<f64>>) -> Result<Self> {
        if per_length.is_empty() {
            return Err(Error::InvalidArgument(
                "ignore environment needs at least one distribution".into(),
            ));
        }
        for d in &per_length {
            validate_dist(d, interface.num_observations(), "ignore environment")?;
        }
        Ok(Self {
            interface,
            per_length,
        })
    }

    /// Observation 0 with probability `p` at every step, the rest spread
    /// uniformly.
    pub fn biased(interface: Interface, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("p={p} outside [0,1]")));
        }
        let no = interface.num_observations();
        let mut d = vec![(1.0 - p) / (no - 1) as f64; no];
        d[0] = p;
        Self::new(interface, vec![d])
    }
}

impl Environment for IgnoreEnv {
    fn interface(&self) -> Interface {
        self.interface
    }
    fn respond(&self, history: &History) -> Vec<f64> {
        let t = history.num_steps();
        self.per_length[t.min(self.per_length.len() - 1)].clone()
    }
}

/// Observation 1 with probability `p[a]` after action `a`.
#[derive(Debug, Clone)]
pub struct BernoulliBandit {
    interface: Interface,
    p: Vec<f64>,
}

impl BernoulliBandit {
    pub fn new(interface: Interface, p: Vec<f64>) -> Result<Self> {
        if interface.num_observations() != 2 {
            return Err(Error::InvalidArgument(format!(
                "bandit needs |O| = 2, got {}",
                interface.num_observations()
            )));
        }
        if p.len() != interface.num_actions() {
            return Err(Error::InvalidArgument(format!(
                "bandit has {} arms for {} actions",
                p.len(),
                interface.num_actions()
            )));
        }
        if p.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidArgument(
                "bandit probabilities must lie in [0,1]".into(),
            ));
        }
        Ok(Self { interface, p })
    }

    pub fn arms(&self) -> &[f64] {
        &self.p
    }
}

impl Environment for BernoulliBandit {
    fn interface(&self) -> Interface {
        self.interface
    }
    fn respond(&self, history: &History) -> Vec<f64> {
        let p = self.p[history.pending().unwrap_or(0)];
        vec![1.0 - p, p]
    }
}

/// Deterministic environment that copies an earlier action.
///
/// From step `start` on, the observation at step `t` is the action taken at
/// step `t - lag` when that index is a valid observation; otherwise 0. With
/// `lag = 0` the pending action itself is copied.
#[derive(Debug, Clone)]
pub struct MirrorEnv {
    interface: Interface,
    start: usize,
    lag: usize,
}

impl MirrorEnv {
    pub fn new(interface: Interface, start: usize, lag: usize) -> Result<Self> {
        if interface.num_observations() > interface.num_actions() {
            return Err(Error::InvalidArgument(format!(
                "mirror environment needs |O| <= |A|, got |A|={} |O|={}",
                interface.num_actions(),
                interface.num_observations()
            )));
        }
        Ok(Self {
            interface,
            start,
            lag,
        })
    }
}

impl Environment for MirrorEnv {
    fn interface(&self) -> Interface {
        self.interface
    }
    fn respond(&self, history: &History) -> Vec<f64> {
        let no = self.interface.num_observations();
        let t = history.current_step();
        if t < self.start || t <= self.lag {
            return point_mass(no, 0);
        }
        let a = if self.lag == 0 {
            history.pending().unwrap_or(0)
        } else {
            history.steps()[t - self.lag - 1].0
        };
        point_mass(no, if a < no { a } else { 0 })
    }
}
