//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Built with `harness = false` so the lines always reach stdout. The process
//! exits nonzero if any criterion fails other than those listed in
//! `KNOWN_FAILURES`, whose analysis lives in the README.

use std::collections::HashSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gdi_core::agency::{
    build_extremal_pair, check_tension, mirror_check, plasticity, positive_plasticity_witness,
    AgencyQuery, ExtremalKind,
};
use gdi_core::experiments::{corridor_table, sweep_epsilon, sweep_qinit, CorridorConfig, SweepConfig};
use gdi_core::interface::{Agent, Environment, History, Interface, Role};
use gdi_core::joint::{enumerate_joint, marginal, Coord};
use gdi_core::laws::{all_intervals, run_law_suite, Law, LawReport, LawSuiteConfig};
use gdi_core::mc::{bootstrap_ci_with, estimate_gdi, sample_trajectories, BootstrapConfig};
use gdi_core::measures::{entropy_of, Arrow, InfoMeasures, Interval, MeasureQuery};
use gdi_core::random::{dirichlet_uniform, seeded_rng, RandomAgent, RandomEnv};
use gdi_core::zoo::{
    BernoulliBandit, ConstantAgent, CopyEnv, DeterministicEnv, IgnoreEnv, LengthAgent, MirrorAgent,
    MirrorEnv, OpenLoopAgent, PastActionAgent, PhasedUniformEnv, UniformEnv,
};
use gdi_core::Result;
use rand::Rng;

/// Criteria that fail by a documented counterexample rather than a bug.
const KNOWN_FAILURES: &[&str] = &["dpi"];

const INTERFACES: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 2), (3, 3)];

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = fn() -> Result<Outcome>;

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn iv(lo: usize, hi: usize) -> Interval {
    Interval::new(lo, hi).expect("valid interval")
}

fn within(elapsed: Duration, budget_secs: u64) -> bool {
    elapsed <= Duration::from_secs(budget_secs)
}

fn law_rows(seeds: u64, horizon: usize, laws: Vec<Law>) -> Result<Vec<LawReport>> {
    let seeds: Vec<u64> = (0..seeds).collect();
    run_law_suite(&LawSuiteConfig::new(seeds, vec![horizon], INTERFACES.to_vec()).with_laws(laws))
}

fn summarize(rows: &[LawReport]) -> (usize, f64) {
    let failed = rows.iter().filter(|r| !r.pass).count();
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    (failed, worst)
}

fn conservation() -> Result<Outcome> {
    let start = Instant::now();
    let rows = law_rows(25, 4, vec![Law::Conservation])?;
    let (failed, worst) = summarize(&rows);
    let t = start.elapsed();
    outcome(
        failed == 0 && within(t, 60),
        format!("100 pairs, {} checks, max residual {worst:.2e}, {t:.1?}", rows.len()),
    )
}

fn identities_and_bounds() -> Result<Outcome> {
    let start = Instant::now();
    let laws = vec![
        Law::DiConservation,
        Law::DiSpecialization,
        Law::Temporal,
        Law::Summation,
        Law::Bounds,
    ];
    // 13 seeds over four interfaces: 52 pairs.
    let rows = law_rows(13, 4, laws.clone())?;
    let pairs = rows.iter().map(|r| (r.seed, r.interface)).collect::<HashSet<_>>();
    let (failed, _) = summarize(&rows);
    let per_law: Vec<String> = laws
        .iter()
        .map(|&law| {
            let worst = rows
                .iter()
                .filter(|r| r.law == law)
                .map(|r| r.residual.abs())
                .fold(0.0, f64::max);
            format!("{law} {worst:.1e}")
        })
        .collect();
    let t = start.elapsed();
    outcome(
        failed == 0 && pairs.len() >= 50 && within(t, 120),
        format!("{} pairs, {} checks, worst: {}, {t:.1?}", pairs.len(), rows.len(), per_law.join(", ")),
    )
}

fn dpi() -> Result<Outcome> {
    let start = Instant::now();
    let rows = law_rows(50, 3, vec![Law::Dpi])?;
    let (failed, worst) = summarize(&rows);
    let instances = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| (r.seed, r.interface))
        .collect::<HashSet<_>>();
    let t = start.elapsed();
    outcome(
        failed == 0 && within(t, 60),
        format!(
            "200 instances, {} checks, {failed} violations on {} instances, largest {worst:.4} bits, {t:.1?}",
            rows.len(),
            instances.len()
        ),
    )
}

fn kramer() -> Result<Outcome> {
    let rows = law_rows(25, 3, vec![Law::Kramer])?;
    let (failed, worst) = summarize(&rows);
    // Full intervals: H(Y_{1:n}) and the classical causal entropy.
    let mut corollary = 0.0f64;
    for seed in 0..20u64 {
        let (na, no) = INTERFACES[seed as usize % 4];
        let i = Interface::new(na, no)?;
        let mut rng = seeded_rng(seed);
        let j = enumerate_joint(
            &RandomAgent::generate(i, 3, &mut rng),
            &RandomEnv::generate(i, 3, &mut rng),
            3,
        )?;
        let m = InfoMeasures::new(&j);
        let full = Interval::full(3)?;
        for x in [Role::Action, Role::Observation] {
            let y = x.opposite();
            let (h, ce) = m.kramer_decompose(&MeasureQuery::new(x, full, full, Arrow::Forward))?;
            let h_direct = entropy_of(&marginal(
                &j,
                &(1..=3).map(|t| Coord::new(y, t)).collect::<Vec<_>>(),
            )?);
            let ce_classic = m.causal_entropy(y, full, full)?;
            corollary = corollary.max((h - h_direct).abs()).max((ce - ce_classic).abs());
        }
    }
    outcome(
        failed == 0 && corollary < 1e-10,
        format!(
            "100 instances, {} checks, max residual {worst:.2e}; full-interval corollary residual {corollary:.2e}",
            rows.len()
        ),
    )
}

fn agency_queries(n: usize) -> Vec<AgencyQuery> {
    let ivs = all_intervals(n);
    let mut out = Vec::new();
    for &act in &ivs {
        for &obs in &ivs {
            for arrow in [Arrow::Delayed, Arrow::Forward] {
                out.push(AgencyQuery::new(act, obs).with_plasticity_arrow(arrow));
            }
        }
    }
    out
}

fn battery(i: Interface) -> Result<Vec<Arc<dyn Environment>>> {
    let mut rng = seeded_rng(4242);
    Ok(vec![
        Arc::new(UniformEnv::new(i)),
        Arc::new(CopyEnv::new(i)?),
        Arc::new(IgnoreEnv::biased(i, 0.7)?),
        Arc::new(BernoulliBandit::new(i, vec![0.4, 0.7])?),
        Arc::new(DeterministicEnv::constant(i)),
        Arc::new(DeterministicEnv::new(i, |h: &History| {
            h.actions().iter().sum::<usize>() % 2
        })),
        Arc::new(MirrorEnv::new(i, 1, 1)?),
        Arc::new(PhasedUniformEnv::new(i, 2, 2)?),
        Arc::new(RandomEnv::generate(i, 4, &mut rng)),
        Arc::new(RandomEnv::generate(i, 4, &mut rng)),
    ])
}

fn zero_plasticity_battery() -> Result<Outcome> {
    let i = Interface::new(2, 2)?;
    let envs = battery(i)?;
    let mut rng = seeded_rng(17);
    let agents: Vec<Box<dyn Agent>> = vec![
        Box::new(ConstantAgent::new(i, vec![0.3, 0.7])?),
        Box::new(OpenLoopAgent::new(i, 4, dirichlet_uniform(&mut rng, 16))?),
        Box::new(LengthAgent::new(
            i,
            vec![vec![0.5, 0.5], vec![0.9, 0.1], vec![0.2, 0.8], vec![0.6, 0.4]],
        )?),
        Box::new(PastActionAgent::sticky(i, 0.8)?),
    ];
    // The claim is about the default (Delayed) arrow; the Forward maximum is
    // reported because the same-step pairing lets A_i "explain" O_i.
    let queries = agency_queries(4);
    let mut worst = 0.0f64;
    let mut worst_forward = 0.0f64;
    for agent in &agents {
        for q in &queries {
            let p = plasticity(agent.as_ref(), &envs, q)?.0;
            match q.plasticity_arrow {
                Arrow::Delayed => worst = worst.max(p),
                Arrow::Forward => worst_forward = worst_forward.max(p),
            }
        }
    }
    let mirror = MirrorAgent::new(i, 2)?;
    let mq = AgencyQuery::new(iv(2, 3), iv(1, 2));
    let (p_mirror, _) = plasticity(&mirror, &[Arc::new(UniformEnv::new(i)) as Arc<dyn Environment>], &mq)?;
    outcome(
        worst < 1e-12 && p_mirror >= 1.0,
        format!(
            "{} agents x {} envs x {} Delayed queries: max plasticity {worst:.1e} (Forward: {worst_forward:.3}); mirror vs uniform {p_mirror:.6} bits",
            agents.len(),
            envs.len(),
            queries.len() / 2
        ),
    )
}

fn witness_biconditional() -> Result<Outcome> {
    let mut positive = 0;
    let mut agree = 0;
    for seed in 0..200u64 {
        let (na, no) = INTERFACES[seed as usize % 4];
        let i = Interface::new(na, no)?;
        let mut rng = seeded_rng(1000 + seed);
        let n = rng.random_range(2..=3);
        let ivs = all_intervals(n);
        let act = ivs[rng.random_range(0..ivs.len())];
        let obs = ivs[rng.random_range(0..ivs.len())];
        let q = AgencyQuery::new(act, obs);
        // Half the agents ignore observations, so both outcomes occur.
        let agent: Box<dyn Agent> = if seed % 2 == 0 {
            Box::new(RandomAgent::generate(i, n, &mut rng))
        } else {
            let k = na.pow(n as u32);
            Box::new(OpenLoopAgent::new(i, n, dirichlet_uniform(&mut rng, k))?)
        };
        let env = RandomEnv::generate(i, n, &mut rng);
        let witness = positive_plasticity_witness(agent.as_ref(), &env, &q)?;
        let envs: [Arc<dyn Environment>; 1] = [Arc::new(env)];
        let (p, _) = plasticity(agent.as_ref(), &envs, &q)?;
        if witness.is_some() == (p > 1e-12) {
            agree += 1;
        }
        positive += usize::from(witness.is_some());
    }
    outcome(
        agree == 200,
        format!("200 pairs (Delayed): {agree} agree, {positive} with a witness"),
    )
}

fn mirror() -> Result<Outcome> {
    let queries: Vec<AgencyQuery> = agency_queries(3)
        .into_iter()
        .filter(|q| q.plasticity_arrow == Arrow::Delayed)
        .collect();
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let (na, no) = INTERFACES[seed as usize % 4];
        let i = Interface::new(na, no)?;
        let mut rng = seeded_rng(5000 + seed);
        let agent: Arc<dyn Agent> = Arc::new(RandomAgent::generate(i, 3, &mut rng));
        let env: Arc<dyn Environment> = Arc::new(RandomEnv::generate(i, 3, &mut rng));
        for q in &queries {
            worst = worst.max(mirror_check(agent.clone(), env.clone(), q)?.max());
        }
    }
    outcome(
        worst < 1e-12,
        format!("100 pairs x {} queries, both identities: max residual {worst:.1e}", queries.len()),
    )
}

fn tension() -> Result<Outcome> {
    let i = Interface::new(2, 2)?;
    let pq = AgencyQuery::new(iv(2, 3), iv(1, 2));
    let (a, e) = build_extremal_pair(i, &pq, ExtremalKind::PlasticityMax)?;
    let pmax = check_tension(&*a, &*e, &pq)?;
    // Empowerment needs the actions to lead, so the swapped interval pair.
    let eq = AgencyQuery::new(iv(1, 2), iv(2, 3));
    let (a, e) = build_extremal_pair(i, &eq, ExtremalKind::EmpowermentMax)?;
    let emax = check_tension(&*a, &*e, &eq)?;
    let extremal = (pmax.plasticity - 2.0).abs() < 1e-10
        && pmax.empowerment.abs() < 1e-10
        && emax.plasticity.abs() < 1e-10
        && (emax.empowerment - 2.0).abs() < 1e-10;

    let mut min_slack = f64::INFINITY;
    for seed in 0..100u64 {
        let (na, no) = INTERFACES[seed as usize % 4];
        let i = Interface::new(na, no)?;
        let mut rng = seeded_rng(9000 + seed);
        let n = rng.random_range(2..=4);
        let ivs = all_intervals(n);
        let q = AgencyQuery::new(
            ivs[rng.random_range(0..ivs.len())],
            ivs[rng.random_range(0..ivs.len())],
        );
        let agent = RandomAgent::generate(i, n, &mut rng);
        let env = RandomEnv::generate(i, n, &mut rng);
        min_slack = min_slack.min(check_tension(&agent, &env, &q)?.slack);
    }
    outcome(
        extremal && min_slack >= -1e-10,
        format!(
            "plasticity-max O[1:2]/A[2:3] ({:.12}, {:.1e}); empowerment-max A[1:2]/O[2:3] ({:.1e}, {:.12}); 100 random pairs min slack {min_slack:.3e}",
            pmax.plasticity, pmax.empowerment.abs(), emax.plasticity.abs(), emax.empowerment
        ),
    )
}

/// Observations are 0 before the last step; the last one is drawn from a
/// fixed channel of the whole action sequence.
struct LastStepChannel {
    interface: Interface,
    horizon: usize,
    channel: Vec<Vec<f64>>,
}

impl Environment for LastStepChannel {
    fn interface(&self) -> Interface {
        self.interface
    }
    fn respond(&self, history: &History) -> Vec<f64> {
        let no = self.interface.num_observations();
        if history.current_step() < self.horizon {
            let mut v = vec![0.0; no];
            v[0] = 1.0;
            return v;
        }
        let na = self.interface.num_actions();
        let idx = history.actions().iter().fold(0, |acc, &a| acc * na + a);
        self.channel[idx].clone()
    }
}

fn open_loop_specialization() -> Result<Outcome> {
    let rows = law_rows(5, 4, vec![Law::DiSpecialization])?;
    let (failed, worst_di) = summarize(&rows);
    let mut worst = 0.0f64;
    for k in 0..20u64 {
        let (na, no) = INTERFACES[k as usize % 4];
        let i = Interface::new(na, no)?;
        let n = 2 + (k as usize / 4) % 2;
        let mut rng = seeded_rng(7000 + k);
        let sequences = na.pow(n as u32);
        let agent = OpenLoopAgent::new(i, n, dirichlet_uniform(&mut rng, sequences))?;
        let env = LastStepChannel {
            interface: i,
            horizon: n,
            channel: (0..sequences).map(|_| dirichlet_uniform(&mut rng, no)).collect(),
        };
        let j = enumerate_joint(&agent, &env, n)?;
        let q = MeasureQuery::new(Role::Action, iv(1, n), iv(n, n), Arrow::Forward);
        let g = InfoMeasures::new(&j).gdi(&q)?.value;
        let acts: Vec<Coord> = (1..=n).map(Coord::action).collect();
        let mut all = acts.clone();
        all.push(Coord::observation(n));
        let mi = entropy_of(&marginal(&j, &acts)?) + entropy_of(&marginal(&j, &[Coord::observation(n)])?)
            - entropy_of(&marginal(&j, &all)?);
        worst = worst.max((g - mi).abs());
    }
    outcome(
        failed == 0 && worst < 1e-10,
        format!("full-interval gdi vs DI: max {worst_di:.1e}; 20 open-loop agents: max |gdi - I(A;O_n)| {worst:.1e}"),
    )
}

fn epsilon_sweep() -> Result<Outcome> {
    let start = Instant::now();
    let rows = sweep_epsilon(&SweepConfig::default())?;
    let t = start.elapsed();
    let delayed: Vec<f64> = rows
        .iter()
        .filter(|r| r.arrow == Arrow::Delayed)
        .map(|r| r.plasticity)
        .collect();
    let first = delayed[0];
    let last = *delayed.last().expect("nonempty grid");
    let worst_rise = delayed.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    outcome(
        delayed.len() == 21 && last < 1e-12 && first > last && worst_rise <= 1e-6 && within(t, 30),
        format!("Delayed: eps=0 {first:.6}, eps=1 {last:.1e}, largest step up {worst_rise:.1e}, {t:.1?}"),
    )
}

fn qinit_sweep() -> Result<Outcome> {
    let start = Instant::now();
    let rows = sweep_qinit(&SweepConfig::default())?;
    let t = start.elapsed();
    let worst = rows.iter().map(|r| r.sum - r.bound).fold(f64::NEG_INFINITY, f64::max);
    let low = rows.first().expect("nonempty grid");
    let high = rows.last().expect("nonempty grid");
    outcome(
        worst <= 1e-10 && high.empowerment >= low.empowerment && within(t, 60),
        format!(
            "max(sum - m) {worst:.3}, m {:.1}; empowerment q0=-1 {:.6}, q0=+1 {:.6}, {t:.1?}",
            low.bound, low.empowerment, high.empowerment
        ),
    )
}

fn monte_carlo() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let (na, no) = INTERFACES[seed as usize % 4];
        let i = Interface::new(na, no)?;
        let mut rng = seeded_rng(3000 + seed);
        let agent = RandomAgent::generate(i, 3, &mut rng);
        let env = RandomEnv::generate(i, 3, &mut rng);
        let j = enumerate_joint(&agent, &env, 3)?;
        let m = InfoMeasures::new(&j);
        let samples = sample_trajectories(&agent, &env, 3, 1_000_000, seed)?;
        let full = Interval::full(3)?;
        for q in [
            MeasureQuery::new(Role::Action, full, full, Arrow::Forward),
            MeasureQuery::new(Role::Observation, full, full, Arrow::Delayed),
            MeasureQuery::new(Role::Observation, iv(1, 2), iv(2, 3), Arrow::Delayed),
        ] {
            worst = worst.max((estimate_gdi(&samples, &q)? - m.gdi(&q)?.value).abs());
        }
    }

    let i = Interface::new(2, 2)?;
    let agent = MirrorAgent::new(i, 2)?;
    let env = UniformEnv::new(i);
    let q = MeasureQuery::new(Role::Observation, iv(1, 2), iv(2, 3), Arrow::Delayed);
    let exact = gdi_core::measures::gdi(&enumerate_joint(&agent, &env, 3)?, &q)?.value;
    let config = BootstrapConfig::default();
    let mut covered = 0;
    for seed in 0..100u64 {
        let samples = sample_trajectories(&agent, &env, 3, 10_000, 100 + seed)?;
        covered += usize::from(bootstrap_ci_with(&samples, &q, &config)?.contains(exact));
    }
    let t = start.elapsed();
    outcome(
        worst < 0.02 && covered >= 90 && within(t, 600),
        format!(
            "20 pairs at 1e6 samples: max error {worst:.4} bits; {} CI covers {exact:.1} on {covered}/100 runs, {t:.1?}",
            config.method.name()
        ),
    )
}

fn corridor() -> Result<Outcome> {
    let rows = corridor_table(&CorridorConfig::default())?;
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    outcome(
        first.plasticity > last.plasticity && first.empowerment < last.empowerment,
        format!(
            "room 0 (P {:.4}, E {:.4}) vs room {} (P {:.4}, E {:.4})",
            first.plasticity, first.empowerment, last.room, last.plasticity, last.empowerment
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 13] = [
        ("conservation", conservation),
        ("identities-and-bounds", identities_and_bounds),
        ("dpi", dpi),
        ("kramer", kramer),
        ("zero-plasticity-battery", zero_plasticity_battery),
        ("positivity-witness", witness_biconditional),
        ("mirror", mirror),
        ("tension", tension),
        ("open-loop-specialization", open_loop_specialization),
        ("epsilon-sweep", epsilon_sweep),
        ("qinit-sweep", qinit_sweep),
        ("monte-carlo", monte_carlo),
        ("corridor", corridor),
    ];
    let mut unexpected = Vec::new();
    for (name, run) in criteria {
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let known = KNOWN_FAILURES.contains(&name);
        let note = if !pass && known { " [known failure]" } else { "" };
        println!("{} {name}: {detail}{note}", if pass { "PASS" } else { "FAIL" });
        if !pass && !known {
            unexpected.push(name);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("unexpected failures: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
