//! Exact joint distributions over finite-horizon trajectories.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::interface::{Agent, Environment, History, Interface, Role};

/// Default cap on the number of dense cells, `(|A|·|O|)^n ≤ 2^24`.
pub const DEFAULT_CELL_CAP: u64 = 1 << 24;

/// Tolerance on the normalization of a single policy output.
pub const POLICY_TOLERANCE: f64 = 1e-12;

/// Tolerance on the total mass of a joint table.
pub const JOINT_TOLERANCE: f64 = 1e-10;

/// One random variable of the process: the action or observation at a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub role: Role,
    /// 1-based timestep.
    pub step: usize,
}

impl Coord {
    pub fn new(role: Role, step: usize) -> Self {
        Self { role, step }
    }

    pub fn action(step: usize) -> Self {
        Self::new(Role::Action, step)
    }

    pub fn observation(step: usize) -> Self {
        Self::new(Role::Observation, step)
    }

    fn bit(self) -> u32 {
        2 * (self.step as u32 - 1) + u32::from(self.role == Role::Observation)
    }
}

/// A set of coordinates, stored as a bitmask in layout order
/// (`A1, O1, A2, O2, ...`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CoordSet(u64);

impl CoordSet {
    pub const EMPTY: CoordSet = CoordSet(0);

    pub fn single(coord: Coord) -> Self {
        assert!(coord.step >= 1 && coord.step <= 32, "step out of range");
        CoordSet(1u64 << coord.bit())
    }

    /// All coordinates of `role` at steps `lo..=hi`; empty when `lo > hi`.
    pub fn range(role: Role, lo: usize, hi: usize) -> Self {
        let mut s = CoordSet::EMPTY;
        for t in lo.max(1)..=hi {
            s = s.union(CoordSet::single(Coord::new(role, t)));
        }
        s
    }

    pub fn from_coords<I: IntoIterator<Item = Coord>>(coords: I) -> Self {
        coords
            .into_iter()
            .fold(CoordSet::EMPTY, |s, c| s.union(CoordSet::single(c)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn union(self, other: CoordSet) -> CoordSet {
        CoordSet(self.0 | other.0)
    }

    pub fn intersects(self, other: CoordSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, coord: Coord) -> bool {
        self.intersects(CoordSet::single(coord))
    }

    /// Highest step mentioned, or 0 for the empty set.
    pub fn max_step(self) -> usize {
        if self.0 == 0 {
            0
        } else {
            (63 - self.0.leading_zeros() as usize) / 2 + 1
        }
    }

    /// Coordinates in layout order.
    pub fn coords(self) -> Vec<Coord> {
        (0..64)
            .filter(|b| self.0 & (1u64 << b) != 0)
            .map(|b| Coord {
                role: if b % 2 == 0 {
                    Role::Action
                } else {
                    Role::Observation
                },
                step: b as usize / 2 + 1,
            })
            .collect()
    }

    /// The same variables with action and observation labels exchanged.
    pub fn swap_roles(self) -> CoordSet {
        let even = self.0 & 0x5555_5555_5555_5555;
        let odd = self.0 & 0xAAAA_AAAA_AAAA_AAAA;
        CoordSet((even << 1) | (odd >> 1))
    }
}

/// A complete interaction of horizon `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trajectory {
    pub actions: Vec<usize>,
    pub observations: Vec<usize>,
}

impl Trajectory {
    pub fn new(actions: Vec<usize>, observations: Vec<usize>) -> Result<Self> {
        if actions.is_empty() || actions.len() != observations.len() {
            return Err(Error::InvalidArgument(format!(
                "trajectory needs equal non-zero lengths, got {} actions and {} observations",
                actions.len(),
                observations.len()
            )));
        }
        Ok(Self {
            actions,
            observations,
        })
    }

    pub fn horizon(&self) -> usize {
        self.actions.len()
    }

    /// Dense index in the layout used by [`JointDist`].
    pub fn index(&self, interface: Interface) -> Result<usize> {
        let (na, no) = (interface.num_actions(), interface.num_observations());
        let mut idx = 0usize;
        for (&a, &o) in self.actions.iter().zip(&self.observations) {
            if a >= na || o >= no {
                return Err(Error::IndexOutOfRange(format!(
                    "symbol pair ({a}, {o}) outside |A|={na} |O|={no}"
                )));
            }
            idx = idx * na * no + a * no + o;
        }
        Ok(idx)
    }

    pub fn from_index(interface: Interface, horizon: usize, mut index: usize) -> Self {
        let (na, no) = (interface.num_actions(), interface.num_observations());
        let mut actions = vec![0; horizon];
        let mut observations = vec![0; horizon];
        for t in (0..horizon).rev() {
            observations[t] = index % no;
            index /= no;
            actions[t] = index % na;
            index /= na;
        }
        Self {
            actions,
            observations,
        }
    }
}

/// Exact probability table over all trajectories of a fixed horizon.
///
/// The table is dense: cell `idx` holds the trajectory whose symbols read
/// `a1 o1 a2 o2 ...` as mixed-radix digits, most significant first.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    interface: Interface,
    horizon: usize,
    lead: Role,
    probs: Vec<f64>,
}

pub(crate) fn cell_count(interface: Interface, horizon: usize) -> u128 {
    (interface.step_cardinality() as u128).saturating_pow(horizon as u32)
}

impl JointDist {
    /// Wraps a dense table, checking non-negativity and total mass.
    pub fn from_table(
        interface: Interface,
        horizon: usize,
        lead: Role,
        probs: Vec<f64>,
    ) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be at least 1".into()));
        }
        let cells = cell_count(interface, horizon);
        if probs.len() as u128 != cells {
            return Err(Error::InvalidArgument(format!(
                "table has {} cells, expected {cells}",
                probs.len()
            )));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && **p >= 0.0))
        {
            return Err(Error::InvalidArgument(format!(
                "cell {i} has invalid probability {p}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > JOINT_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "table mass {total} differs from 1"
            )));
        }
        Ok(Self {
            interface,
            horizon,
            lead,
            probs,
        })
    }

    pub fn interface(&self) -> Interface {
        self.interface
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Which role emitted first at every step of the generating process.
    pub fn lead(&self) -> Role {
        self.lead
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn prob(&self, trajectory: &Trajectory) -> Result<f64> {
        if trajectory.horizon() != self.horizon {
            return Err(Error::InvalidArgument(format!(
                "trajectory horizon {} differs from joint horizon {}",
                trajectory.horizon(),
                self.horizon
            )));
        }
        Ok(self.probs[trajectory.index(self.interface)?])
    }

    /// Non-zero cells with their trajectories, in layout order.
    pub fn support(&self) -> impl Iterator<Item = (Trajectory, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(i, &p)| (Trajectory::from_index(self.interface, self.horizon, i), p))
    }

    /// Checks that every coordinate lies within the horizon.
    pub fn check_coords(&self, set: CoordSet) -> Result<()> {
        if set.max_step() > self.horizon {
            return Err(Error::IndexOutOfRange(format!(
                "coordinate step {} exceeds horizon {}",
                set.max_step(),
                self.horizon
            )));
        }
        Ok(())
    }

    /// Marginal table over `set`, laid out in coordinate order (first
    /// coordinate most significant). The empty set gives `[total]`.
    pub fn marginal_table(&self, set: CoordSet) -> Result<Vec<f64>> {
        self.check_coords(set)?;
        let positions = 2 * self.horizon;
        let radix: Vec<usize> = (0..positions)
            .map(|p| {
                if p % 2 == 0 {
                    self.interface.num_actions()
                } else {
                    self.interface.num_observations()
                }
            })
            .collect();
        let mut mstride = vec![0usize; positions];
        let mut size = 1usize;
        for p in (0..positions).rev() {
            if set.bits() & (1u64 << p) != 0 {
                mstride[p] = size;
                size *= radix[p];
            }
        }
        let mut out = vec![0.0; size];
        let mut digits = vec![0usize; positions];
        let mut m = 0usize;
        let last = self.probs.len() - 1;
        for (idx, &p) in self.probs.iter().enumerate() {
            if p != 0.0 {
                out[m] += p;
            }
            if idx == last {
                break;
            }
            let mut pos = positions - 1;
            loop {
                digits[pos] += 1;
                m += mstride[pos];
                if digits[pos] < radix[pos] {
                    break;
                }
                m -= radix[pos] * mstride[pos];
                digits[pos] = 0;
                pos -= 1;
            }
        }
        Ok(out)
    }

    /// The same process with action and observation labels exchanged.
    pub fn swap_roles(&self) -> JointDist {
        let swapped = self.interface.swapped();
        let mut probs = vec![0.0; self.probs.len()];
        for (i, &p) in self.probs.iter().enumerate() {
            let t = Trajectory::from_index(self.interface, self.horizon, i);
            let s = Trajectory {
                actions: t.observations,
                observations: t.actions,
            };
            probs[s.index(swapped).expect("relabeled symbols are in range")] = p;
        }
        JointDist {
            interface: swapped,
            horizon: self.horizon,
            lead: self.lead.opposite(),
            probs,
        }
    }

    /// Text form: a header line, then one `a1 o1 ... : p` line per non-zero
    /// trajectory with `p` to 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "gdi-joint v1 |A|={} |O|={} n={}",
            self.interface.num_actions(),
            self.interface.num_observations(),
            self.horizon
        );
        if self.lead == Role::Observation {
            out.push_str(" lead=observation");
        }
        out.push('\n');
        for (t, p) in self.support() {
            for (a, o) in t.actions.iter().zip(&t.observations) {
                let _ = write!(out, "{a} {o} ");
            }
            let _ = writeln!(out, ": {p:.16e}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("gdi-joint") || fields.next() != Some("v1") {
            return Err(Error::Parse(format!("bad header: {header}")));
        }
        let mut na = None;
        let mut no = None;
        let mut n = None;
        let mut lead = Role::Action;
        for f in fields {
            let (k, v) = f
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field: {f}")))?;
            let parse = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad header value: {f}")))
            };
            match k {
                "|A|" => na = Some(parse(v)?),
                "|O|" => no = Some(parse(v)?),
                "n" => n = Some(parse(v)?),
                "lead" if v == "observation" => lead = Role::Observation,
                "lead" if v == "action" => lead = Role::Action,
                _ => return Err(Error::Parse(format!("unknown header field: {f}"))),
            }
        }
        let (na, no, n) = match (na, no, n) {
            (Some(a), Some(o), Some(n)) => (a, o, n),
            _ => return Err(Error::Parse(format!("incomplete header: {header}"))),
        };
        let interface = Interface::new(na, no)?;
        let cells = cell_count(interface, n);
        if cells > DEFAULT_CELL_CAP as u128 {
            return Err(Error::CapExceeded {
                cells,
                cap: DEFAULT_CELL_CAP,
            });
        }
        let mut probs = vec![0.0; cells as usize];
        for line in lines {
            let (syms, p) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("missing ':' in line: {line}")))?;
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad probability in line: {line}")))?;
            let syms: Vec<usize> = syms
                .split_whitespace()
                .map(|s| {
                    s.parse()
                        .map_err(|_| Error::Parse(format!("bad symbol {s:?} in line: {line}")))
                })
                .collect::<Result<_>>()?;
            if syms.len() != 2 * n {
                return Err(Error::Parse(format!(
                    "expected {} symbols, got {} in line: {line}",
                    2 * n,
                    syms.len()
                )));
            }
            let t = Trajectory {
                actions: syms.iter().step_by(2).copied().collect(),
                observations: syms.iter().skip(1).step_by(2).copied().collect(),
            };
            probs[t.index(interface)?] = p;
        }
        JointDist::from_table(interface, n, lead, probs)
    }
}

/// Exact enumeration of the interaction process with a configurable cap.
#[derive(Debug, Clone, Copy)]
pub struct Enumerator {
    pub cell_cap: u64,
}

impl Default for Enumerator {
    fn default() -> Self {
        Self {
            cell_cap: DEFAULT_CELL_CAP,
        }
    }
}

pub(crate) fn check_policy_output(dist: &[f64], expected: usize, history: &History) -> Result<()> {
    let violation = |reason: String| Error::ContractViolation {
        history: history.to_string(),
        reason,
    };
    if dist.len() != expected {
        return Err(violation(format!(
            "returned {} probabilities, expected {expected}",
            dist.len()
        )));
    }
    if let Some(p) = dist.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(violation(format!("invalid probability {p}")));
    }
    let sum: f64 = dist.iter().sum();
    if (sum - 1.0).abs() > POLICY_TOLERANCE {
        return Err(violation(format!("probabilities sum to {sum}")));
    }
    Ok(())
}

struct Walk<'a> {
    agent: &'a dyn Agent,
    env: &'a dyn Environment,
    interface: Interface,
    horizon: usize,
    probs: Vec<f64>,
}

impl Walk<'_> {
    /// Leader symbols come from the agent when actions lead, from the
    /// environment otherwise.
    fn leader(&self, h: &History) -> (Vec<f64>, usize) {
        match h.lead() {
            Role::Action => (self.agent.act(h), self.interface.num_actions()),
            Role::Observation => (self.env.respond(h), self.interface.num_observations()),
        }
    }

    fn follower(&self, h: &History) -> (Vec<f64>, usize) {
        match h.lead() {
            Role::Action => (self.env.respond(h), self.interface.num_observations()),
            Role::Observation => (self.agent.act(h), self.interface.num_actions()),
        }
    }

    fn visit(&mut self, h: &mut History, prob: f64, idx: usize) -> Result<()> {
        if h.num_steps() == self.horizon {
            self.probs[idx] = prob;
            return Ok(());
        }
        let (lead_dist, lead_n) = self.leader(h);
        check_policy_output(&lead_dist, lead_n, h)?;
        let no = self.interface.num_observations();
        let na = self.interface.num_actions();
        for (x, &px) in lead_dist.iter().enumerate() {
            if px == 0.0 {
                continue;
            }
            h.push_pending(x);
            let (follow_dist, follow_n) = self.follower(h);
            if let Err(e) = check_policy_output(&follow_dist, follow_n, h) {
                h.clear_pending();
                return Err(e);
            }
            let p_lead = prob * px;
            for (y, &py) in follow_dist.iter().enumerate() {
                if py == 0.0 {
                    continue;
                }
                let (a, o) = match h.lead() {
                    Role::Action => (x, y),
                    Role::Observation => (y, x),
                };
                h.complete_step(y);
                let r = self.visit(h, p_lead * py, idx * na * no + a * no + o);
                h.pop_step();
                r?;
            }
            h.clear_pending();
        }
        Ok(())
    }
}

impl Enumerator {
    pub fn with_cap(cell_cap: u64) -> Self {
        Self { cell_cap }
    }

    pub fn enumerate(
        &self,
        agent: &dyn Agent,
        env: &dyn Environment,
        horizon: usize,
    ) -> Result<JointDist> {
        if horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be at least 1".into()));
        }
        let interface = agent.interface();
        if env.interface() != interface {
            return Err(Error::InvalidArgument(format!(
                "agent interface {:?} differs from environment interface {:?}",
                interface,
                env.interface()
            )));
        }
        if agent.lead() != env.lead() {
            return Err(Error::InvalidArgument(
                "agent and environment disagree on which role emits first".into(),
            ));
        }
        let cells = cell_count(interface, horizon);
        if cells > self.cell_cap as u128 {
            return Err(Error::CapExceeded {
                cells,
                cap: self.cell_cap,
            });
        }
        let mut walk = Walk {
            agent,
            env,
            interface,
            horizon,
            probs: vec![0.0; cells as usize],
        };
        let mut h = History::empty_with_lead(interface, agent.lead());
        walk.visit(&mut h, 1.0, 0)?;
        JointDist::from_table(interface, horizon, agent.lead(), walk.probs)
    }
}

/// Enumerates the joint law of `(agent, env)` up to `horizon` with the
/// default cell cap.
pub fn enumerate_joint(
    agent: &dyn Agent,
    env: &dyn Environment,
    horizon: usize,
) -> Result<JointDist> {
    Enumerator::default().enumerate(agent, env, horizon)
}

/// Marginal over an explicit list of coordinates, in the order given.
pub fn marginal(dist: &JointDist, coords: &[Coord]) -> Result<Vec<f64>> {
    for c in coords {
        if c.step == 0 || c.step > dist.horizon() {
            return Err(Error::IndexOutOfRange(format!(
                "coordinate {}{} outside horizon {}",
                c.role,
                c.step,
                dist.horizon()
            )));
        }
    }
    let set = CoordSet::from_coords(coords.iter().copied());
    if set.len() != coords.len() {
        return Err(Error::InvalidArgument("duplicate coordinate".into()));
    }
    let table = dist.marginal_table(set)?;
    let sorted = set.coords();
    if sorted.as_slice() == coords {
        return Ok(table);
    }
    // Reorder axes to follow the caller's order.
    let radix: Vec<usize> = sorted
        .iter()
        .map(|c| dist.interface().alphabet(c.role))
        .collect();
    let mut out = vec![0.0; table.len()];
    let perm: Vec<usize> = coords
        .iter()
        .map(|c| sorted.iter().position(|s| s == c).unwrap())
        .collect();
    for (i, &p) in table.iter().enumerate() {
        let mut digits = vec![0usize; sorted.len()];
        let mut rem = i;
        for k in (0..sorted.len()).rev() {
            digits[k] = rem % radix[k];
            rem /= radix[k];
        }
        let mut j = 0usize;
        for &k in &perm {
            j = j * radix[k] + digits[k];
        }
        out[j] = p;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{seeded_rng, RandomAgent, RandomEnv};
    use crate::zoo::{ConstantAgent, CopyEnv, DeterministicEnv, UniformEnv};

    fn bin() -> Interface {
        Interface::new(2, 2).unwrap()
    }

    #[test]
    fn uniform_pair_spreads_mass_evenly() {
        let j = enumerate_joint(&ConstantAgent::uniform(bin()), &UniformEnv::new(bin()), 1).unwrap();
        assert_eq!(j.probs(), &[0.25; 4]);
    }

    #[test]
    fn deterministic_chain_is_a_point_mass() {
        let agent = ConstantAgent::new(bin(), vec![1.0, 0.0]).unwrap();
        let j = enumerate_joint(&agent, &CopyEnv::new(bin()).unwrap(), 2).unwrap();
        let t = Trajectory::new(vec![0, 0], vec![0, 0]).unwrap();
        assert_eq!(j.prob(&t).unwrap(), 1.0);
        assert_eq!(j.support().count(), 1);
    }

    #[test]
    fn table_is_the_product_of_conditionals() {
        let i = Interface::new(2, 3).unwrap();
        let mut rng = seeded_rng(7);
        let agent = RandomAgent::generate(i, 3, &mut rng);
        let env = RandomEnv::generate(i, 3, &mut rng);
        let j = enumerate_joint(&agent, &env, 3).unwrap();
        for (idx, &p) in j.probs().iter().enumerate() {
            let t = Trajectory::from_index(i, 3, idx);
            let mut h = History::empty(i);
            let mut prod = 1.0;
            for (&a, &o) in t.actions.iter().zip(&t.observations) {
                prod *= agent.act(&h)[a];
                h.push_pending(a);
                prod *= env.respond(&h)[o];
                h.complete_step(o);
            }
            assert!((p - prod).abs() < 1e-12);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let a = ConstantAgent::uniform(bin());
        let e = UniformEnv::new(bin());
        let err = Enumerator::with_cap(255).enumerate(&a, &e, 4).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cells: 256, cap: 255 }));
        assert!(Enumerator::with_cap(256).enumerate(&a, &e, 4).is_ok());
    }

    #[test]
    fn bad_policy_output_names_the_history() {
        let env = DeterministicEnv::new(bin(), |h: &History| h.num_steps() + 5);
        let err = enumerate_joint(&ConstantAgent::uniform(bin()), &env, 1).unwrap_err();
        assert!(matches!(err, Error::ContractViolation { .. }), "{err}");
    }

    #[test]
    fn marginals() {
        let j = enumerate_joint(&ConstantAgent::uniform(bin()), &UniformEnv::new(bin()), 1).unwrap();
        assert_eq!(marginal(&j, &[]).unwrap(), vec![1.0]);
        assert_eq!(marginal(&j, &[Coord::action(1)]).unwrap(), vec![0.5, 0.5]);
        assert!(matches!(
            marginal(&j, &[Coord::observation(2)]),
            Err(Error::IndexOutOfRange(_))
        ));
        assert!(marginal(&j, &[Coord::action(1), Coord::action(1)]).is_err());
    }

    #[test]
    fn marginal_follows_caller_order() {
        let i = Interface::new(2, 3).unwrap();
        let mut rng = seeded_rng(3);
        let j = enumerate_joint(
            &RandomAgent::generate(i, 2, &mut rng),
            &RandomEnv::generate(i, 2, &mut rng),
            2,
        )
        .unwrap();
        let ao = marginal(&j, &[Coord::action(2), Coord::observation(1)]).unwrap();
        let oa = marginal(&j, &[Coord::observation(1), Coord::action(2)]).unwrap();
        for a in 0..2 {
            for o in 0..3 {
                let direct: f64 = j
                    .support()
                    .filter(|(t, _)| t.actions[1] == a && t.observations[0] == o)
                    .map(|(_, p)| p)
                    .sum();
                assert!((ao[a * 3 + o] - direct).abs() < 1e-15);
                assert!((oa[o * 2 + a] - direct).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn text_round_trip_is_exact() {
        let i = Interface::new(3, 2).unwrap();
        let mut rng = seeded_rng(11);
        let j = enumerate_joint(
            &RandomAgent::generate(i, 2, &mut rng),
            &RandomEnv::generate(i, 2, &mut rng),
            2,
        )
        .unwrap();
        let text = j.to_text();
        assert!(text.starts_with("gdi-joint v1 |A|=3 |O|=2 n=2\n"));
        assert_eq!(JointDist::from_text(&text).unwrap(), j);
        let swapped = j.swap_roles();
        assert_eq!(JointDist::from_text(&swapped.to_text()).unwrap(), swapped);
    }

    #[test]
    fn malformed_text_is_rejected() {
        for bad in [
            "",
            "gdi-joint v2 |A|=2 |O|=2 n=1",
            "gdi-joint v1 |A|=2 |O|=2",
            "gdi-joint v1 |A|=2 |O|=2 n=1\n0 0 0.5",
            "gdi-joint v1 |A|=2 |O|=2 n=1\n0 : 1",
            "gdi-joint v1 |A|=2 |O|=2 n=1\n0 0 : 0.5",
        ] {
            assert!(JointDist::from_text(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn swapping_twice_is_the_identity() {
        let i = Interface::new(2, 3).unwrap();
        let mut rng = seeded_rng(5);
        let j = enumerate_joint(
            &RandomAgent::generate(i, 2, &mut rng),
            &RandomEnv::generate(i, 2, &mut rng),
            2,
        )
        .unwrap();
        let s = j.swap_roles();
        assert_eq!(s.interface(), Interface::new(3, 2).unwrap());
        assert_eq!(s.lead(), Role::Observation);
        assert_eq!(s.swap_roles(), j);
    }

    #[test]
    fn coord_sets() {
        let s = CoordSet::range(Role::Action, 2, 3).union(CoordSet::single(Coord::observation(1)));
        assert_eq!(s.len(), 3);
        assert_eq!(s.max_step(), 3);
        assert_eq!(
            s.coords(),
            vec![Coord::observation(1), Coord::action(2), Coord::action(3)]
        );
        assert_eq!(s.swap_roles().swap_roles(), s);
        assert!(CoordSet::range(Role::Action, 3, 2).is_empty());
    }
}
