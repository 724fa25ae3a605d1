//! Randomized verification of the identities and inequalities satisfied by
//! generalized directed information.
//!
//! Every check returns a [`LawReport`] whose residual is an absolute error
//! for identities and the size of the violation for inequalities.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interface::{Interface, Role};
use crate::joint::{enumerate_joint, CoordSet, JointDist, Trajectory};
use crate::measures::{Arrow, InfoMeasures, Interval, MeasureQuery};
use crate::random::{random_channel, seeded_rng, RandomAgent, RandomEnv};

/// Tolerance for identities and inequalities.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
/// Tolerance for quantities that must vanish.
pub const ZERO_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Law {
    Conservation,
    DiConservation,
    DiSpecialization,
    Temporal,
    Summation,
    Dpi,
    Bounds,
    Kramer,
}

impl Law {
    pub const ALL: [Law; 8] = [
        Law::Conservation,
        Law::DiConservation,
        Law::DiSpecialization,
        Law::Temporal,
        Law::Summation,
        Law::Dpi,
        Law::Bounds,
        Law::Kramer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Conservation => "conservation",
            Law::DiConservation => "di-conservation",
            Law::DiSpecialization => "di-specialization",
            Law::Temporal => "temporal",
            Law::Summation => "summation",
            Law::Dpi => "dpi",
            Law::Bounds => "bounds",
            Law::Kramer => "kramer",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown law `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawReport {
    pub law: Law,
    pub seed: u64,
    pub horizon: usize,
    pub interface: Interface,
    /// Source role of the checked query.
    pub source_role: Role,
    pub source: Interval,
    pub target: Interval,
    /// `None` when the check spans both arrows.
    pub arrow: Option<Arrow>,
    pub residual: f64,
    pub pass: bool,
}

impl LawReport {
    pub const CSV_HEADER: &'static str = "law,seed,horizon,na,no,a,b,c,d,arrow,residual_bits,pass";

    fn new(law: Law, dist: &JointDist, q: &MeasureQuery, arrow: Option<Arrow>, residual: f64, tol: f64) -> Self {
        Self {
            law,
            seed: 0,
            horizon: dist.horizon(),
            interface: dist.interface(),
            source_role: q.source_role,
            source: q.source,
            target: q.target,
            arrow,
            residual,
            pass: residual < tol,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// One CSV row; floats carry 17 significant digits.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.16e},{}",
            self.law,
            self.seed,
            self.horizon,
            self.interface.num_actions(),
            self.interface.num_observations(),
            self.source.lo(),
            self.source.hi(),
            self.target.lo(),
            self.target.hi(),
            self.arrow.map_or("both", Arrow::name),
            self.residual,
            self.pass
        )
    }
}

fn gdi(m: &InfoMeasures<'_>, q: &MeasureQuery) -> Result<f64> {
    Ok(m.gdi(q)?.value)
}

/// `|I(X_{a:b}; Y_{c:d} | X_{1:a-1}, Y_{1:c-1}) − gdi→(X→Y) − gdi↪(Y→X)|`.
pub fn check_conservation(m: &InfoMeasures<'_>, q: &MeasureQuery) -> Result<LawReport> {
    let forward = q.with_arrow(Arrow::Forward);
    let total = m.interval_cmi(&forward)?;
    let fwd = gdi(m, &forward)?;
    let back = gdi(m, &forward.reversed())?;
    let residual = (total - fwd - back).abs();
    Ok(LawReport::new(Law::Conservation, m.joint(), &forward, None, residual, IDENTITY_TOLERANCE))
}

/// Directed information written out term by term, independently of the
/// interval machinery: `Σ_i I(X_{1:i-lag}; Y_i | Y_{1:i-1})`.
pub fn directed_information_direct(m: &InfoMeasures<'_>, x: Role, arrow: Arrow) -> Result<f64> {
    let n = m.joint().horizon();
    let y = x.opposite();
    let lag = usize::from(arrow == Arrow::Delayed);
    let mut total = 0.0;
    for i in 1..=n {
        if i <= lag {
            continue;
        }
        let xs = CoordSet::range(x, 1, i - lag);
        let yi = CoordSet::range(y, i, i);
        let past = CoordSet::range(y, 1, i - 1);
        total += m.entropy(xs.union(past))? + m.entropy(yi.union(past))?
            - m.entropy(xs.union(yi).union(past))?
            - m.entropy(past)?;
    }
    Ok(total)
}

/// `|I(X_{1:n}; Y_{1:n}) − DI→(X→Y) − DI↪(Y→X)|` with both DI terms
/// computed by [`directed_information_direct`].
pub fn check_di_conservation(m: &InfoMeasures<'_>, x: Role) -> Result<LawReport> {
    let n = m.joint().horizon();
    let full = Interval::full(n)?;
    let q = MeasureQuery::new(x, full, full, Arrow::Forward);
    let total = m.interval_cmi(&q)?;
    let fwd = directed_information_direct(m, x, Arrow::Forward)?;
    let back = directed_information_direct(m, x.opposite(), Arrow::Delayed)?;
    let residual = (total - fwd - back).abs();
    Ok(LawReport::new(Law::DiConservation, m.joint(), &q, None, residual, IDENTITY_TOLERANCE))
}

/// Full-interval GDI against the term-by-term directed information.
pub fn check_di_specialization(m: &InfoMeasures<'_>, x: Role, arrow: Arrow) -> Result<LawReport> {
    let full = Interval::full(m.joint().horizon())?;
    let q = MeasureQuery::new(x, full, full, arrow);
    let residual = (gdi(m, &q)? - directed_information_direct(m, x, arrow)?).abs();
    Ok(LawReport::new(Law::DiSpecialization, m.joint(), &q, Some(arrow), residual, IDENTITY_TOLERANCE))
}

/// A source interval starting after the target ends carries no information:
/// `a > d` (Forward) or `a ≥ d` (Delayed).
pub fn check_temporal_consistency(m: &InfoMeasures<'_>, q: &MeasureQuery) -> Result<LawReport> {
    let late = match q.arrow {
        Arrow::Forward => q.source.lo() > q.target.hi(),
        Arrow::Delayed => q.source.lo() >= q.target.hi(),
    };
    if !late {
        return Err(Error::InvalidArgument(format!(
            "temporal consistency needs a late source, got {q}"
        )));
    }
    let value = gdi(m, q)?;
    Ok(LawReport::new(Law::Temporal, m.joint(), q, Some(q.arrow), value, ZERO_TOLERANCE))
}

/// Where to cut an interval for the summation identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    /// `[a:k] ∪ [k+1:b]` on the source.
    Source(usize),
    /// `[c:ℓ] ∪ [ℓ+1:d]` on the target.
    Target(usize),
}

fn split_interval(iv: Interval, at: usize) -> Result<(Interval, Interval)> {
    if at < iv.lo() || at >= iv.hi() {
        return Err(Error::InvalidArgument(format!(
            "split point {at} not strictly inside {iv}"
        )));
    }
    Ok((Interval::new(iv.lo(), at)?, Interval::new(at + 1, iv.hi())?))
}

/// Residual of one summation identity.
pub fn summation_residual(m: &InfoMeasures<'_>, q: &MeasureQuery, split: Split) -> Result<f64> {
    let (left, right) = match split {
        Split::Source(k) => {
            let (l, r) = split_interval(q.source, k)?;
            (MeasureQuery { source: l, ..*q }, MeasureQuery { source: r, ..*q })
        }
        Split::Target(l) => {
            let (lo, hi) = split_interval(q.target, l)?;
            (MeasureQuery { target: lo, ..*q }, MeasureQuery { target: hi, ..*q })
        }
    };
    Ok((gdi(m, q)? - gdi(m, &left)? - gdi(m, &right)?).abs())
}

/// Largest residual over every source and target split of `q`. Queries
/// with two unit intervals have no split and report 0.
pub fn check_interval_summation(m: &InfoMeasures<'_>, q: &MeasureQuery) -> Result<LawReport> {
    let mut residual: f64 = 0.0;
    for k in q.source.lo()..q.source.hi() {
        residual = residual.max(summation_residual(m, q, Split::Source(k))?);
    }
    for l in q.target.lo()..q.target.hi() {
        residual = residual.max(summation_residual(m, q, Split::Target(l))?);
    }
    Ok(LawReport::new(Law::Summation, m.joint(), q, Some(q.arrow), residual, IDENTITY_TOLERANCE))
}

/// `0 ≤ gdi(X_{a:b} → Y_{c:d}) ≤ I(X_{a:b}; Y_{c:d} | X_{1:a-1}, Y_{1:c-1})`;
/// the residual is the size of the worse violation (0 when both hold).
pub fn check_bounds(m: &InfoMeasures<'_>, q: &MeasureQuery) -> Result<LawReport> {
    let below = (-m.gdi_min_raw_term(q)?).max(0.0);
    let above = (gdi(m, q)? - m.interval_cmi(q)?).max(0.0);
    let residual = below.max(above);
    Ok(LawReport::new(Law::Bounds, m.joint(), q, Some(q.arrow), residual, IDENTITY_TOLERANCE))
}

/// `|entropy term − causal entropy term − gdi|` for a Forward query.
pub fn check_kramer(m: &InfoMeasures<'_>, q: &MeasureQuery) -> Result<LawReport> {
    let (h, causal) = m.kramer_decompose(q)?;
    let residual = (h - causal - gdi(m, q)?).abs();
    Ok(LawReport::new(Law::Kramer, m.joint(), q, Some(q.arrow), residual, IDENTITY_TOLERANCE))
}

/// A joint law extended by passing each symbol of one role through its own
/// memoryless channel. Each `Z_i` depends on `Y_i` only, so `Z_i` is
/// conditionally independent of everything else given `Y_i`.
#[derive(Debug, Clone)]
pub struct ChannelExtension {
    joint: JointDist,
    role: Role,
    /// `channels[i][y][z]`, one row-stochastic matrix per step.
    channels: Vec<Vec<Vec<f64>>>,
    outputs: usize,
}

impl ChannelExtension {
    pub fn new(joint: JointDist, role: Role, channels: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if channels.len() != joint.horizon() {
            return Err(Error::InvalidArgument(format!(
                "{} channels for horizon {}",
                channels.len(),
                joint.horizon()
            )));
        }
        let inputs = joint.interface().alphabet(role);
        let outputs = channels[0].first().map_or(0, Vec::len);
        if outputs < 2 {
            return Err(Error::InvalidArgument(
                "channel output alphabet needs at least 2 symbols".into(),
            ));
        }
        for (i, c) in channels.iter().enumerate() {
            if c.len() != inputs {
                return Err(Error::InvalidArgument(format!(
                    "channel {} has {} rows for {inputs} inputs",
                    i + 1,
                    c.len()
                )));
            }
            for row in c {
                crate::zoo::validate_dist(row, outputs, "channel row")?;
            }
        }
        Ok(Self {
            joint,
            role,
            channels,
            outputs,
        })
    }

    /// Same channel at every step.
    pub fn stationary(joint: JointDist, role: Role, channel: Vec<Vec<f64>>) -> Result<Self> {
        let n = joint.horizon();
        Self::new(joint, role, vec![channel; n])
    }

    pub fn joint(&self) -> &JointDist {
        &self.joint
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// The joint law of the untouched role and the channel outputs, with the
    /// outputs in place of the processed role.
    pub fn project(&self) -> Result<JointDist> {
        let base = self.joint.interface();
        let interface = match self.role {
            Role::Action => Interface::new(self.outputs, base.num_observations())?,
            Role::Observation => Interface::new(base.num_actions(), self.outputs)?,
        };
        let n = self.joint.horizon();
        let mut probs = vec![0.0; interface.step_cardinality().pow(n as u32)];
        for (traj, p) in self.joint.support() {
            let processed = match self.role {
                Role::Action => &traj.actions,
                Role::Observation => &traj.observations,
            };
            let mut z = vec![0usize; n];
            self.spread(&traj, processed, 0, p, &mut z, interface, &mut probs)?;
        }
        JointDist::from_table(interface, n, self.joint.lead(), probs)
    }

    #[allow(clippy::too_many_arguments)]
    fn spread(
        &self,
        traj: &Trajectory,
        processed: &[usize],
        step: usize,
        mass: f64,
        z: &mut Vec<usize>,
        interface: Interface,
        probs: &mut [f64],
    ) -> Result<()> {
        if step == processed.len() {
            let t = match self.role {
                Role::Action => Trajectory::new(z.clone(), traj.observations.clone())?,
                Role::Observation => Trajectory::new(traj.actions.clone(), z.clone())?,
            };
            probs[t.index(interface)?] += mass;
            return Ok(());
        }
        for (out, &w) in self.channels[step][processed[step]].iter().enumerate() {
            if w > 0.0 {
                z[step] = out;
                self.spread(traj, processed, step + 1, mass * w, z, interface, probs)?;
            }
        }
        Ok(())
    }
}

/// Compares `gdi(X→Y)` on the base law with `gdi(X→Z)` on the projected
/// law, where `Z` is the channel output of the target role `Y`. Residual is
/// `max(0, gdi(X→Z) − gdi(X→Y))`.
pub fn check_dpi(extension: &ChannelExtension, q: &MeasureQuery) -> Result<LawReport> {
    if q.target_role() != extension.role() {
        return Err(Error::InvalidArgument(format!(
            "query target role {} is not the processed role {}",
            q.target_role(),
            extension.role()
        )));
    }
    let through_y = gdi(&InfoMeasures::new(extension.joint()), q)?;
    let projected = extension.project()?;
    let through_z = gdi(&InfoMeasures::new(&projected), q)?;
    let residual = (through_z - through_y).max(0.0);
    Ok(LawReport::new(Law::Dpi, extension.joint(), q, Some(q.arrow), residual, IDENTITY_TOLERANCE))
}

/// Every `[lo:hi]` with `1 ≤ lo ≤ hi ≤ n`, in lexicographic order.
pub fn all_intervals(n: usize) -> Vec<Interval> {
    (1..=n)
        .flat_map(|lo| (lo..=n).map(move |hi| Interval::new(lo, hi).expect("valid interval")))
        .collect()
}

/// Every query at horizon `n` for both source roles, in a fixed order.
pub fn all_queries(n: usize, arrow: Arrow) -> Vec<MeasureQuery> {
    let intervals = all_intervals(n);
    let mut out = Vec::new();
    for role in [Role::Action, Role::Observation] {
        for &s in &intervals {
            for &t in &intervals {
                out.push(MeasureQuery::new(role, s, t, arrow));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawSuiteConfig {
    pub seeds: Vec<u64>,
    pub horizons: Vec<usize>,
    /// `(|A|, |O|)` pairs.
    pub interfaces: Vec<(usize, usize)>,
    pub laws: Vec<Law>,
}

impl LawSuiteConfig {
    pub fn new(seeds: Vec<u64>, horizons: Vec<usize>, interfaces: Vec<(usize, usize)>) -> Self {
        Self {
            seeds,
            horizons,
            interfaces,
            laws: Law::ALL.to_vec(),
        }
    }

    pub fn with_laws(self, laws: Vec<Law>) -> Self {
        Self { laws, ..self }
    }
}

/// A random agent–environment pair enumerated at a horizon.
#[derive(Debug, Clone)]
pub struct LawInstance {
    pub seed: u64,
    pub joint: JointDist,
    /// Generator state after drawing the pair, for further randomness.
    rng: crate::random::SeededRng,
}

impl LawInstance {
    pub fn generate(seed: u64, horizon: usize, interface: Interface) -> Result<Self> {
        let mut rng = seeded_rng(seed);
        let agent = RandomAgent::generate(interface, horizon, &mut rng);
        let env = RandomEnv::generate(interface, horizon, &mut rng);
        let joint = enumerate_joint(&agent, &env, horizon)?;
        Ok(Self { seed, joint, rng })
    }

    /// Runs the selected laws over every applicable query, in a fixed order.
    pub fn check(&mut self, laws: &[Law]) -> Result<Vec<LawReport>> {
        let n = self.joint.horizon();
        let joint = self.joint.clone();
        let m = InfoMeasures::new(&joint);
        let mut out = Vec::new();
        let arrows = [Arrow::Forward, Arrow::Delayed];
        for &law in laws {
            match law {
                Law::Conservation => {
                    for q in all_queries(n, Arrow::Forward) {
                        out.push(check_conservation(&m, &q)?);
                    }
                }
                Law::DiConservation => {
                    for x in [Role::Action, Role::Observation] {
                        out.push(check_di_conservation(&m, x)?);
                    }
                }
                Law::DiSpecialization => {
                    for x in [Role::Action, Role::Observation] {
                        for arrow in arrows {
                            out.push(check_di_specialization(&m, x, arrow)?);
                        }
                    }
                }
                Law::Temporal => {
                    for arrow in arrows {
                        for q in all_queries(n, arrow) {
                            let late = match arrow {
                                Arrow::Forward => q.source.lo() > q.target.hi(),
                                Arrow::Delayed => q.source.lo() >= q.target.hi(),
                            };
                            if late {
                                out.push(check_temporal_consistency(&m, &q)?);
                            }
                        }
                    }
                }
                Law::Summation => {
                    for arrow in arrows {
                        for q in all_queries(n, arrow) {
                            if q.source.len() > 1 || q.target.len() > 1 {
                                out.push(check_interval_summation(&m, &q)?);
                            }
                        }
                    }
                }
                Law::Bounds => {
                    for arrow in arrows {
                        for q in all_queries(n, arrow) {
                            out.push(check_bounds(&m, &q)?);
                        }
                    }
                }
                Law::Kramer => {
                    for q in all_queries(n, Arrow::Forward) {
                        out.push(check_kramer(&m, &q)?);
                    }
                }
                Law::Dpi => {
                    for target in [Role::Observation, Role::Action] {
                        let k = joint.interface().alphabet(target);
                        let outputs = self.rng.random_range(2..=k);
                        let channel = random_channel(&mut self.rng, k, outputs);
                        let ext = ChannelExtension::stationary(joint.clone(), target, channel)?;
                        let projected = ext.project()?;
                        let mz = InfoMeasures::new(&projected);
                        for arrow in arrows {
                            for q in all_queries(n, arrow) {
                                if q.target_role() != target {
                                    continue;
                                }
                                let y = gdi(&m, &q)?;
                                let z = gdi(&mz, &q)?;
                                out.push(LawReport::new(
                                    Law::Dpi,
                                    &joint,
                                    &q,
                                    Some(arrow),
                                    (z - y).max(0.0),
                                    IDENTITY_TOLERANCE,
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(out.into_iter().map(|r| r.with_seed(self.seed)).collect())
    }
}

/// Runs every law on every (seed, horizon, interface) combination.
/// Instances run in parallel; reports come back in configuration order.
pub fn run_law_suite(config: &LawSuiteConfig) -> Result<Vec<LawReport>> {
    let mut jobs = Vec::new();
    for &seed in &config.seeds {
        for &horizon in &config.horizons {
            for &(na, no) in &config.interfaces {
                jobs.push((seed, horizon, Interface::new(na, no)?));
            }
        }
    }
    let results: Vec<Result<Vec<LawReport>>> = jobs
        .par_iter()
        .map(|&(seed, horizon, interface)| {
            LawInstance::generate(seed, horizon, interface)?.check(&config.laws)
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Header plus one row per report.
pub fn to_csv(reports: &[LawReport]) -> String {
    let mut s = String::from(LawReport::CSV_HEADER);
    s.push('\n');
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}
