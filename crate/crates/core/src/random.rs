//! Seeded random agents, environments, and channels.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`. Every conditional distribution is drawn from a symmetric
//! Dirichlet(1), i.e. uniformly on the simplex, as `k` independent Exp(1)
//! draws divided by their sum. Conditionals are tabulated eagerly in a fixed
//! order (step by step; histories in dense-index order) so a seed always
//! yields the same policy on every platform.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::interface::{Agent, Environment, History, Interface};

pub type SeededRng = ChaCha8Rng;

/// Name of the generator algorithm, recorded in sample sets and reports.
pub const GENERATOR_NAME: &str = "chacha8";

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seeded generator for substream `stream` of `seed`.
pub fn substream_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A point uniformly distributed on the `k`-simplex.
pub fn dirichlet_uniform<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    loop {
        let draws: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let sum: f64 = draws.iter().sum();
        if sum > 0.0 {
            return draws.into_iter().map(|x| x / sum).collect();
        }
    }
}

fn uniform(k: usize) -> Vec<f64> {
    vec![1.0 / k as f64; k]
}

fn steps_index(interface: Interface, steps: &[(usize, usize)]) -> usize {
    steps.iter().fold(0, |idx, &(a, o)| {
        idx * interface.step_cardinality() + a * interface.num_observations() + o
    })
}

/// Agent with independently drawn conditionals for every history up to a
/// horizon; uniform beyond it.
#[derive(Debug, Clone)]
pub struct RandomAgent {
    interface: Interface,
    table: Vec<Vec<Vec<f64>>>,
}

impl RandomAgent {
    pub fn generate<R: Rng + ?Sized>(interface: Interface, horizon: usize, rng: &mut R) -> Self {
        let mut table = Vec::with_capacity(horizon);
        let mut count = 1usize;
        for _ in 0..horizon {
            table.push(
                (0..count)
                    .map(|_| dirichlet_uniform(rng, interface.num_actions()))
                    .collect(),
            );
            count *= interface.step_cardinality();
        }
        Self { interface, table }
    }
}

impl Agent for RandomAgent {
    fn interface(&self) -> Interface {
        self.interface
    }

    fn act(&self, history: &History) -> Vec<f64> {
        match self.table.get(history.num_steps()) {
            Some(row) => row[steps_index(self.interface, history.steps())].clone(),
            None => uniform(self.interface.num_actions()),
        }
    }
}

/// Environment with independently drawn conditionals for every history up
/// to a horizon; uniform beyond it.
#[derive(Debug, Clone)]
pub struct RandomEnv {
    interface: Interface,
    table: Vec<Vec<Vec<f64>>>,
}

impl RandomEnv {
    pub fn generate<R: Rng + ?Sized>(interface: Interface, horizon: usize, rng: &mut R) -> Self {
        let mut table = Vec::with_capacity(horizon);
        let mut count = interface.num_actions();
        for _ in 0..horizon {
            table.push(
                (0..count)
                    .map(|_| dirichlet_uniform(rng, interface.num_observations()))
                    .collect(),
            );
            count *= interface.step_cardinality();
        }
        Self { interface, table }
    }
}

impl Environment for RandomEnv {
    fn interface(&self) -> Interface {
        self.interface
    }

    fn respond(&self, history: &History) -> Vec<f64> {
        let action = history.pending().unwrap_or(0);
        match self.table.get(history.num_steps()) {
            Some(row) => {
                let idx = steps_index(self.interface, history.steps())
                    * self.interface.num_actions()
                    + action;
                row[idx].clone()
            }
            None => uniform(self.interface.num_observations()),
        }
    }
}

/// Row-stochastic matrix `inputs × outputs` with Dirichlet(1) rows.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, inputs: usize, outputs: usize) -> Vec<Vec<f64>> {
    (0..inputs).map(|_| dirichlet_uniform(rng, outputs)).collect()
}
