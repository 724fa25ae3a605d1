//! A row of rooms, each with a light and a lever.
//!
//! Rooms are numbered `0..=n`. Actions are [`LEFT`], [`RIGHT`], [`PULL`];
//! observations are [`OFF`], [`ON`] and report the light of the room the
//! mouse occupies after acting. Position is a deterministic function of the
//! action history. Each room's light starts off and only evolves while the
//! mouse is in it: a pull in room `i` flips the light with probability
//! `i/n + (1 - i/n)·theta`; a move (including a bump into a wall) flips the
//! destination room's light with probability `theta`. The light state a room
//! was last seen in is the last observation emitted while the mouse was there.

use crate::error::{Error, Result};
use crate::interface::{Agent, Environment, History, Interface};

pub const LEFT: usize = 0;
pub const RIGHT: usize = 1;
pub const PULL: usize = 2;
pub const OFF: usize = 0;
pub const ON: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorridorSpec {
    /// Number of rooms, `n + 1`.
    pub rooms: usize,
    pub theta: f64,
    /// Room the mouse occupies before its first action.
    pub start: usize,
}

impl CorridorSpec {
    pub fn new(rooms: usize, theta: f64) -> Result<Self> {
        Self::starting_in(rooms, theta, 0)
    }

    pub fn starting_in(rooms: usize, theta: f64, start: usize) -> Result<Self> {
        if rooms < 2 {
            return Err(Error::InvalidArgument(format!(
                "corridor needs at least 2 rooms, got {rooms}"
            )));
        }
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "theta={theta} outside [0,1]"
            )));
        }
        if start >= rooms {
            return Err(Error::InvalidArgument(format!(
                "start room {start} outside 0..{rooms}"
            )));
        }
        Ok(Self {
            rooms,
            theta,
            start,
        })
    }

    pub fn interface() -> Interface {
        Interface::new(3, 2).expect("valid corridor interface")
    }

    /// Index of the last room, `n`.
    pub fn last_room(&self) -> usize {
        self.rooms - 1
    }

    pub fn step(&self, position: usize, action: usize) -> usize {
        match action {
            LEFT => position.saturating_sub(1),
            RIGHT => (position + 1).min(self.last_room()),
            _ => position,
        }
    }

    /// Positions after each action, starting from `start`.
    pub fn positions(&self, actions: &[usize]) -> Vec<usize> {
        actions
            .iter()
            .scan(self.start, |pos, &a| {
                *pos = self.step(*pos, a);
                Some(*pos)
            })
            .collect()
    }

    /// Probability that `action` flips the light of the room it lands in,
    /// when taken from `position`.
    pub fn flip_probability(&self, position: usize, action: usize) -> f64 {
        if action == PULL {
            let lever = position as f64 / self.last_room() as f64;
            lever + (1.0 - lever) * self.theta
        } else {
            self.theta
        }
    }
}

fn check_interface(interface: Interface) -> Result<()> {
    if interface != CorridorSpec::interface() {
        return Err(Error::InvalidArgument(format!(
            "corridor needs |A|=3 (left, right, pull) and |O|=2 (off, on), got |A|={} |O|={}",
            interface.num_actions(),
            interface.num_observations()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct CorridorEnv {
    spec: CorridorSpec,
}

impl CorridorEnv {
    pub fn new(spec: CorridorSpec) -> Self {
        Self { spec }
    }

    pub fn with_interface(interface: Interface, spec: CorridorSpec) -> Result<Self> {
        check_interface(interface)?;
        Ok(Self::new(spec))
    }

    pub fn spec(&self) -> &CorridorSpec {
        &self.spec
    }
}

impl Environment for CorridorEnv {
    fn interface(&self) -> Interface {
        CorridorSpec::interface()
    }

    fn respond(&self, history: &History) -> Vec<f64> {
        let actions = history.actions();
        let Some(&action) = actions.last() else {
            return vec![1.0, 0.0];
        };
        let positions = self.spec.positions(&actions);
        let t = positions.len() - 1;
        let room = positions[t];
        let before = if t == 0 { self.spec.start } else { positions[t - 1] };
        let observations = history.observations();
        let prior = (0..t)
            .rev()
            .find(|&s| positions[s] == room)
            .map_or(OFF, |s| observations[s]);
        let flip = self.spec.flip_probability(before, action);
        if prior == ON {
            vec![flip, 1.0 - flip]
        } else {
            vec![1.0 - flip, flip]
        }
    }
}

/// A mouse that keeps returning to its home room and works the lever there.
///
/// At home it pulls with probability `p_on` when the light was last seen on
/// and `p_off` when off (no observation yet counts as off); otherwise it
/// idles by stepping away: into the wall at either end, leftwards from an
/// interior room. Away from home it walks straight back.
#[derive(Debug, Clone)]
pub struct StayAgent {
    spec: CorridorSpec,
    home: usize,
    p_on: f64,
    p_off: f64,
}

impl StayAgent {
    pub const DEFAULT_P_ON: f64 = 0.75;
    pub const DEFAULT_P_OFF: f64 = 0.25;

    /// The spec's start room is the home room.
    pub fn new(spec: CorridorSpec, p_on: f64, p_off: f64) -> Result<Self> {
        for p in [p_on, p_off] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "pull probability {p} outside [0,1]"
                )));
            }
        }
        Ok(Self {
            spec,
            home: spec.start,
            p_on,
            p_off,
        })
    }

    pub fn home(&self) -> usize {
        self.home
    }

    fn idle_move(&self) -> usize {
        if self.home == self.spec.last_room() {
            RIGHT
        } else {
            LEFT
        }
    }
}

impl Agent for StayAgent {
    fn interface(&self) -> Interface {
        CorridorSpec::interface()
    }

    fn act(&self, history: &History) -> Vec<f64> {
        let actions = history.actions();
        let position = self
            .spec
            .positions(&actions)
            .last()
            .copied()
            .unwrap_or(self.spec.start);
        let mut out = vec![0.0; 3];
        if position < self.home {
            out[RIGHT] = 1.0;
        } else if position > self.home {
            out[LEFT] = 1.0;
        } else {
            let pull = match history.last_observation() {
                Some(ON) => self.p_on,
                _ => self.p_off,
            };
            out[PULL] = pull;
            out[self.idle_move()] += 1.0 - pull;
        }
        out
    }
}
