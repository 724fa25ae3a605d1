//! Reference agents and environments.

pub mod agents;
pub mod corridor;
pub mod envs;
pub mod registry;

pub use agents::{
    validate_dist, ConstantAgent, LengthAgent, MirrorAgent, OpenLoopAgent, PastActionAgent,
    PhasedUniformAgent, QLearnerSpec, QLearningAgent,
};
pub use corridor::{CorridorEnv, CorridorSpec, StayAgent};
pub use envs::{
    BernoulliBandit, CopyEnv, DeterministicEnv, IgnoreEnv, MirrorEnv, PhasedUniformEnv, UniformEnv,
};
pub use registry::{build_agent, build_env, implied_interface, ZooSpec};
