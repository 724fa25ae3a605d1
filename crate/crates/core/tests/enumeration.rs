//! Enumerated joints against an independent step-by-step simulator, and the
//! role-swap relabeling checked cell by cell.

use std::sync::Arc;

use gdi_core::interface::{swap_agent, swap_env, Agent, Environment, Interface, Role};
use gdi_core::joint::{enumerate_joint, marginal, Coord, Trajectory};
use gdi_core::measures::entropy_of;
use gdi_core::random::{seeded_rng, RandomAgent, RandomEnv};
use gdi_core::zoo::{BernoulliBandit, QLearnerSpec, QLearningAgent};
use rand::Rng;

const ROLLOUTS: usize = 1_000_000;
const ARMS: [f64; 2] = [0.4, 0.7];

/// ε-greedy Q-learning against the bandit, written out from the update rule
/// with no library code involved. Returns the dense index of each rollout.
fn simulate(epsilon: f64, q0: f64, alpha: f64, horizon: usize, seed: u64) -> Vec<usize> {
    let mut rng = seeded_rng(seed);
    let mut counts = vec![0usize; 4usize.pow(horizon as u32)];
    for _ in 0..ROLLOUTS {
        let mut q = [q0, q0];
        let mut idx = 0;
        for _ in 0..horizon {
            let explore = rng.random::<f64>() < epsilon;
            let a = if explore || (q[0] - q[1]).abs() <= 1e-12 {
                rng.random_range(0..2)
            } else if q[0] > q[1] {
                0
            } else {
                1
            };
            let o = usize::from(rng.random::<f64>() < ARMS[a]);
            q[a] += alpha * (o as f64 - q[a]);
            idx = idx * 4 + a * 2 + o;
        }
        counts[idx] += 1;
    }
    counts
}

fn bandit_pair(epsilon: f64) -> (QLearningAgent, BernoulliBandit) {
    let i = Interface::new(2, 2).unwrap();
    let agent = QLearningAgent::new(i, QLearnerSpec::new(epsilon, 0.0, 0.1).unwrap()).unwrap();
    (agent, BernoulliBandit::new(i, ARMS.to_vec()).unwrap())
}

fn within_three_se(p: f64, count: usize) -> bool {
    let freq = count as f64 / ROLLOUTS as f64;
    let se = (p * (1.0 - p) / ROLLOUTS as f64).sqrt();
    (freq - p).abs() <= 3.0 * se + 1e-12
}

#[test]
fn qlearning_bandit_joint_matches_rollout_frequencies() {
    let (agent, env) = bandit_pair(0.5);
    let joint = enumerate_joint(&agent, &env, 3).unwrap();
    assert_eq!(joint.probs().len(), 64);
    assert!((joint.total() - 1.0).abs() < 1e-10);
    let counts = simulate(0.5, 0.0, 0.1, 3, 1);
    let misses: Vec<usize> = (0..64)
        .filter(|&k| !within_three_se(joint.probs()[k], counts[k]))
        .collect();
    assert!(misses.is_empty(), "cells outside 3 SE: {misses:?}");
    // Pearson statistic over 63 degrees of freedom; 103.4 is its 0.999 quantile.
    let chi2: f64 = (0..64)
        .map(|k| {
            let expected = joint.probs()[k] * ROLLOUTS as f64;
            (counts[k] as f64 - expected).powi(2) / expected
        })
        .sum();
    assert!(chi2 < 103.4, "chi-square {chi2}");

    let a2 = marginal(&joint, &[Coord::action(2)]).unwrap();
    let mut a2_counts = [0usize; 2];
    for (k, &c) in counts.iter().enumerate() {
        a2_counts[Trajectory::from_index(joint.interface(), 3, k).actions[1]] += c;
    }
    for a in 0..2 {
        assert!(within_three_se(a2[a], a2_counts[a]));
    }
}

#[test]
fn first_action_entropy_matches_plug_in() {
    let (agent, env) = bandit_pair(0.5);
    let joint = enumerate_joint(&agent, &env, 1).unwrap();
    let exact = entropy_of(&marginal(&joint, &[Coord::action(1)]).unwrap());
    let counts = simulate(0.5, 0.0, 0.1, 1, 99);
    let a1 = [
        (counts[0] + counts[1]) as f64 / ROLLOUTS as f64,
        (counts[2] + counts[3]) as f64 / ROLLOUTS as f64,
    ];
    assert!((exact - entropy_of(&a1)).abs() < 1e-2);
    assert!((exact - 1.0).abs() < 1e-15);
}

#[test]
fn swapped_pair_enumerates_the_relabeled_table() {
    for (na, no) in [(2, 2), (2, 3), (3, 2)] {
        let i = Interface::new(na, no).unwrap();
        for n in 1..=3 {
            let mut rng = seeded_rng(n as u64 * 31 + na as u64);
            let agent: Arc<dyn Agent> = Arc::new(RandomAgent::generate(i, n, &mut rng));
            let env: Arc<dyn Environment> = Arc::new(RandomEnv::generate(i, n, &mut rng));
            let joint = enumerate_joint(&*agent, &*env, n).unwrap();
            let sa = swap_env(env);
            let se = swap_agent(agent);
            assert_eq!(sa.lead(), Role::Observation);
            let swapped = enumerate_joint(&*sa, &*se, n).unwrap();
            assert_eq!(swapped.interface(), i.swapped());
            for (k, &p) in joint.probs().iter().enumerate() {
                let t = Trajectory::from_index(i, n, k);
                let s = Trajectory::new(t.observations.clone(), t.actions.clone()).unwrap();
                assert_eq!(swapped.prob(&s).unwrap(), p, "cell {k} at n={n}");
            }
            assert_eq!(swapped, joint.swap_roles());
        }
    }
}
