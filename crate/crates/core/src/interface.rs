//! Interfaces, histories, and the agent/environment contracts.
//!
//! Interaction is step-structured: each step carries one action and one
//! observation. The canonical ordering emits the action first
//! (`A1 O1 A2 O2 ...`). Role-swapped policies live in a world where the
//! observation leads each step; that is the only place the other ordering
//! appears.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Which side of the interface a symbol belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Action,
    Observation,
}

impl Role {
    pub fn opposite(self) -> Role {
        match self {
            Role::Action => Role::Observation,
            Role::Observation => Role::Action,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Role::Action => "action",
            Role::Observation => "observation",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Action => "A",
            Role::Observation => "O",
        })
    }
}

impl FromStr for Role {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "action" | "A" => Ok(Role::Action),
            "observation" | "O" => Ok(Role::Observation),
            _ => Err(Error::Parse(format!("unknown role `{s}` (expected action or observation)"))),
        }
    }
}

/// The pair of finite alphabets shared by an agent and its environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interface {
    num_actions: usize,
    num_observations: usize,
}

impl Interface {
    pub fn new(num_actions: usize, num_observations: usize) -> Result<Self> {
        if num_actions < 2 || num_observations < 2 {
            return Err(Error::InvalidInterface {
                actions: num_actions,
                observations: num_observations,
            });
        }
        Ok(Self {
            num_actions,
            num_observations,
        })
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn num_observations(&self) -> usize {
        self.num_observations
    }

    pub fn alphabet(&self, role: Role) -> usize {
        match role {
            Role::Action => self.num_actions,
            Role::Observation => self.num_observations,
        }
    }

    /// Number of (action, observation) pairs per step.
    pub fn step_cardinality(&self) -> usize {
        self.num_actions * self.num_observations
    }

    /// The interface with actions and observations exchanged.
    pub fn swapped(&self) -> Interface {
        Interface {
            num_actions: self.num_observations,
            num_observations: self.num_actions,
        }
    }
}

/// Where a history stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Empty,
    EndsInAction,
    EndsInObservation,
}

/// A finite interaction prefix.
///
/// `steps` holds completed `(action, observation)` pairs; `pending` holds the
/// symbol already emitted by the leading party of the current step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct History {
    interface: Interface,
    lead: Role,
    steps: Vec<(usize, usize)>,
    pending: Option<usize>,
}

impl History {
    pub fn empty(interface: Interface) -> Self {
        Self::empty_with_lead(interface, Role::Action)
    }

    pub fn empty_with_lead(interface: Interface, lead: Role) -> Self {
        Self {
            interface,
            lead,
            steps: Vec::new(),
            pending: None,
        }
    }

    /// Builds an actions-first history from completed steps and an optional
    /// trailing action.
    pub fn new(
        interface: Interface,
        steps: Vec<(usize, usize)>,
        pending_action: Option<usize>,
    ) -> Result<Self> {
        Self::with_lead(interface, Role::Action, steps, pending_action)
    }

    pub fn with_lead(
        interface: Interface,
        lead: Role,
        steps: Vec<(usize, usize)>,
        pending: Option<usize>,
    ) -> Result<Self> {
        for (i, &(a, o)) in steps.iter().enumerate() {
            if a >= interface.num_actions || o >= interface.num_observations {
                return Err(Error::IndexOutOfRange(format!(
                    "step {} = ({a}, {o}) outside interface |A|={} |O|={}",
                    i + 1,
                    interface.num_actions,
                    interface.num_observations
                )));
            }
        }
        if let Some(p) = pending {
            if p >= interface.alphabet(lead) {
                return Err(Error::IndexOutOfRange(format!(
                    "pending {} symbol {p} outside alphabet of size {}",
                    lead.name(),
                    interface.alphabet(lead)
                )));
            }
        }
        Ok(Self {
            interface,
            lead,
            steps,
            pending,
        })
    }

    pub fn interface(&self) -> Interface {
        self.interface
    }

    pub fn lead(&self) -> Role {
        self.lead
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.steps
    }

    pub fn pending(&self) -> Option<usize> {
        self.pending
    }

    /// Number of completed steps.
    pub fn num_steps(&self) -> usize {
        self.steps.len()
    }

    /// Index (1-based) of the step currently being produced.
    pub fn current_step(&self) -> usize {
        self.steps.len() + 1
    }

    pub fn parity(&self) -> Parity {
        match (self.pending, self.steps.is_empty(), self.lead) {
            (Some(_), _, Role::Action) => Parity::EndsInAction,
            (Some(_), _, Role::Observation) => Parity::EndsInObservation,
            (None, true, _) => Parity::Empty,
            (None, false, Role::Action) => Parity::EndsInObservation,
            (None, false, Role::Observation) => Parity::EndsInAction,
        }
    }

    /// All actions emitted so far, in time order.
    pub fn actions(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.steps.iter().map(|s| s.0).collect();
        if let (Some(p), Role::Action) = (self.pending, self.lead) {
            out.push(p);
        }
        out
    }

    /// All observations emitted so far, in time order.
    pub fn observations(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.steps.iter().map(|s| s.1).collect();
        if let (Some(p), Role::Observation) = (self.pending, self.lead) {
            out.push(p);
        }
        out
    }

    pub fn last_action(&self) -> Option<usize> {
        match (self.pending, self.lead) {
            (Some(p), Role::Action) => Some(p),
            _ => self.steps.last().map(|s| s.0),
        }
    }

    pub fn last_observation(&self) -> Option<usize> {
        match (self.pending, self.lead) {
            (Some(p), Role::Observation) => Some(p),
            _ => self.steps.last().map(|s| s.1),
        }
    }

    /// The same symbols seen from the other side of the interface.
    pub fn swap_roles(&self) -> History {
        History {
            interface: self.interface.swapped(),
            lead: self.lead.opposite(),
            steps: self.steps.iter().map(|&(a, o)| (o, a)).collect(),
            pending: self.pending,
        }
    }

    pub(crate) fn push_pending(&mut self, symbol: usize) {
        debug_assert!(self.pending.is_none());
        self.pending = Some(symbol);
    }

    /// Completes the current step with the follower's symbol.
    pub(crate) fn complete_step(&mut self, follower_symbol: usize) {
        let lead_symbol = self.pending.take().expect("no pending symbol");
        let pair = match self.lead {
            Role::Action => (lead_symbol, follower_symbol),
            Role::Observation => (follower_symbol, lead_symbol),
        };
        self.steps.push(pair);
    }

    pub(crate) fn pop_step(&mut self) {
        let (a, o) = self.steps.pop().expect("empty history");
        self.pending = Some(match self.lead {
            Role::Action => a,
            Role::Observation => o,
        });
    }

    pub(crate) fn clear_pending(&mut self) {
        self.pending = None;
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut emit = |f: &mut fmt::Formatter<'_>, role: Role, sym: usize| -> fmt::Result {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{role}{sym}")
        };
        for &(a, o) in &self.steps {
            match self.lead {
                Role::Action => {
                    emit(f, Role::Action, a)?;
                    emit(f, Role::Observation, o)?;
                }
                Role::Observation => {
                    emit(f, Role::Observation, o)?;
                    emit(f, Role::Action, a)?;
                }
            }
        }
        if let Some(p) = self.pending {
            emit(f, self.lead, p)?;
        }
        if first {
            f.write_str("<empty>")?;
        }
        Ok(())
    }
}

/// A stochastic policy from histories ending in an observation (or empty)
/// to a distribution over actions.
///
/// Implementations must be pure functions of the history.
pub trait Agent: Send + Sync {
    fn interface(&self) -> Interface;

    fn act(&self, history: &History) -> Vec<f64>;

    /// Which role emits first in this agent's world.
    fn lead(&self) -> Role {
        Role::Action
    }
}

/// A stochastic map from histories ending in an action to a distribution
/// over observations. Same purity contract as [`Agent`].
pub trait Environment: Send + Sync {
    fn interface(&self) -> Interface;

    fn respond(&self, history: &History) -> Vec<f64>;

    fn lead(&self) -> Role {
        Role::Action
    }
}

impl<T: Agent + ?Sized> Agent for Arc<T> {
    fn interface(&self) -> Interface {
        (**self).interface()
    }
    fn act(&self, history: &History) -> Vec<f64> {
        (**self).act(history)
    }
    fn lead(&self) -> Role {
        (**self).lead()
    }
}

impl<T: Environment + ?Sized> Environment for Arc<T> {
    fn interface(&self) -> Interface {
        (**self).interface()
    }
    fn respond(&self, history: &History) -> Vec<f64> {
        (**self).respond(history)
    }
    fn lead(&self) -> Role {
        (**self).lead()
    }
}

/// An environment viewed as an agent over the swapped interface.
#[derive(Debug, Clone)]
pub struct EnvAsAgent<E>(pub E);

/// An agent viewed as an environment over the swapped interface.
#[derive(Debug, Clone)]
pub struct AgentAsEnv<A>(pub A);

impl<E: Environment> Agent for EnvAsAgent<E> {
    fn interface(&self) -> Interface {
        self.0.interface().swapped()
    }
    fn act(&self, history: &History) -> Vec<f64> {
        self.0.respond(&history.swap_roles())
    }
    fn lead(&self) -> Role {
        self.0.lead().opposite()
    }
}

impl<A: Agent> Environment for AgentAsEnv<A> {
    fn interface(&self) -> Interface {
        self.0.interface().swapped()
    }
    fn respond(&self, history: &History) -> Vec<f64> {
        self.0.act(&history.swap_roles())
    }
    fn lead(&self) -> Role {
        self.0.lead().opposite()
    }
}

/// Converts an environment into an agent by exchanging the alphabets.
pub fn swap_env(env: Arc<dyn Environment>) -> Arc<dyn Agent> {
    Arc::new(EnvAsAgent(env))
}

/// Converts an agent into an environment by exchanging the alphabets.
pub fn swap_agent(agent: Arc<dyn Agent>) -> Arc<dyn Environment> {
    Arc::new(AgentAsEnv(agent))
}
