//! Each command turns resolved settings into CSV text (header included).

use std::fmt::Write;

use gdi_core::agency::{tension_bound, AgencyQuery};
use gdi_core::experiments::{
    corridor_table, sweep_epsilon, sweep_qinit, CorridorConfig, CorridorRow, EpsilonRow, Method,
    QinitRow, SweepConfig,
};
use gdi_core::interface::Interface;
use gdi_core::joint::Enumerator;
use gdi_core::laws::{run_law_suite, to_csv, Law, LawSuiteConfig};
use gdi_core::mc::{bootstrap_ci_with, sample_trajectories, BootstrapConfig, CiMethod};
use gdi_core::measures::{Arrow, InfoMeasures, Interval};
use gdi_core::zoo::{build_agent, build_env, implied_interface, ZooSpec};

use crate::config::{Command, Settings};
use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub fn run(settings: &mut Settings) -> Result<String> {
    match settings.command {
        Command::Laws => laws(settings),
        Command::Measure => measure(settings),
        Command::SweepEpsilon => {
            let rows = sweep_epsilon(&sweep_config(settings)?)?;
            Ok(table(EpsilonRow::CSV_HEADER, rows.iter().map(EpsilonRow::csv_row)))
        }
        Command::SweepQinit => {
            let rows = sweep_qinit(&sweep_config(settings)?)?;
            Ok(table(QinitRow::CSV_HEADER, rows.iter().map(QinitRow::csv_row)))
        }
        Command::Corridor => {
            let config = CorridorConfig {
                rooms: settings.get("rooms")?,
                theta: settings.get("theta")?,
                horizon: settings.get("horizon")?,
                p_on: settings.get("p-on")?,
                p_off: settings.get("p-off")?,
            };
            let rows = corridor_table(&config)?;
            Ok(table(CorridorRow::CSV_HEADER, rows.iter().map(CorridorRow::csv_row)))
        }
    }
}

fn table(header: &str, rows: impl Iterator<Item = String>) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

fn parse_interface(key: &str, raw: &str) -> Result<Interface> {
    let invalid = |reason: String| CliError::InvalidValue {
        key: key.to_string(),
        value: raw.to_string(),
        reason,
    };
    let (na, no) = raw
        .split_once('x')
        .ok_or_else(|| invalid("expected `<|A|>x<|O|>`".into()))?;
    let na = na.trim().parse().map_err(|e| invalid(format!("{e}")))?;
    let no = no.trim().parse().map_err(|e| invalid(format!("{e}")))?;
    Ok(Interface::new(na, no)?)
}

fn laws(s: &Settings) -> Result<String> {
    let laws = if s.raw("laws") == "all" {
        Law::ALL.to_vec()
    } else {
        s.list::<Law>("laws")?
    };
    let first: u64 = s.get("seed")?;
    let count: u64 = s.get("instances")?;
    let interfaces = s
        .raw("interfaces")
        .split(',')
        .map(|i| parse_interface("interfaces", i.trim()))
        .map(|i| i.map(|i| (i.num_actions(), i.num_observations())))
        .collect::<Result<Vec<_>>>()?;
    let config = LawSuiteConfig::new((first..first + count).collect(), s.list("horizons")?, interfaces)
        .with_laws(laws);
    Ok(to_csv(&run_law_suite(&config)?))
}

/// `[a:b]` is the observation interval and `[c:d]` the action interval, so
/// plasticity reads `O[a:b] → A[c:d]` and empowerment runs the other way.
fn agency_query(s: &Settings) -> Result<AgencyQuery> {
    let observations = Interval::new(s.get("a")?, s.get("b")?)?;
    let actions = Interval::new(s.get("c")?, s.get("d")?)?;
    Ok(AgencyQuery::new(actions, observations))
}

fn bootstrap(s: &Settings) -> Result<BootstrapConfig> {
    Ok(BootstrapConfig {
        replicates: s.get("replicates")?,
        level: s.get("level")?,
        method: s.get::<CiMethod>("ci")?,
    })
}

fn sweep_config(s: &Settings) -> Result<SweepConfig> {
    let q = agency_query(s)?;
    Ok(SweepConfig {
        points: s.get("grid-points")?,
        method: s.get::<Method>("method")?,
        samples: s.get("samples")?,
        bootstrap: bootstrap(s)?,
        seed: s.get("seed")?,
        alpha: s.get("alpha")?,
        arms: s.list("arms")?,
        horizon: s.get("horizon")?,
        action_interval: q.action_interval,
        observation_interval: q.observation_interval,
    })
}

pub const MEASURE_HEADER: &str = "plasticity_bits,plasticity_ci_low,plasticity_ci_high,\
empowerment_bits,empowerment_ci_low,empowerment_ci_high,bound_bits,slack_bits,method,seed";

fn measure(s: &mut Settings) -> Result<String> {
    let agent_spec: ZooSpec = s.get("agent")?;
    let env_spec: ZooSpec = s.get("env")?;
    let implied = implied_interface(&agent_spec)
        .or_else(|| implied_interface(&env_spec))
        .unwrap_or(Interface::new(2, 2)?);
    for (key, size) in [("na", implied.num_actions()), ("no", implied.num_observations())] {
        if s.raw(key) == "auto" {
            s.set(key, size.to_string())?;
        }
    }
    let interface = Interface::new(s.get("na")?, s.get("no")?)?;
    let q = agency_query(s)?.with_plasticity_arrow(s.get::<Arrow>("arrow")?);
    if s.raw("horizon") == "auto" {
        s.set("horizon", q.horizon().to_string())?;
    }
    let horizon: usize = s.get("horizon")?;
    let (pq, eq) = (q.plasticity_query(), q.empowerment_query());
    pq.check(horizon)?;
    let agent = build_agent(&agent_spec, interface, horizon)?;
    let env = build_env(&env_spec, interface)?;
    let method: Method = s.get("method")?;
    let seed: u64 = s.get("seed")?;
    let [p, e] = match method {
        Method::Exact => {
            let joint = Enumerator::with_cap(s.get("cap")?).enumerate(&*agent, &*env, horizon)?;
            let m = InfoMeasures::new(&joint);
            let p = m.gdi(&pq)?.value;
            let e = m.gdi(&eq)?.value;
            [(p, p, p), (e, e, e)]
        }
        Method::MonteCarlo => {
            let samples = sample_trajectories(&*agent, &*env, horizon, s.get("samples")?, seed)?;
            let config = bootstrap(s)?;
            let p = bootstrap_ci_with(&samples, &pq, &config)?;
            let e = bootstrap_ci_with(&samples, &eq, &config)?;
            [(p.estimate, p.ci_low, p.ci_high), (e.estimate, e.ci_low, e.ci_high)]
        }
    };
    let bound = tension_bound(interface, &q);
    let mut out = format!("{MEASURE_HEADER}\n");
    let _ = writeln!(
        out,
        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{method},{seed}",
        p.0,
        p.1,
        p.2,
        e.0,
        e.1,
        e.2,
        bound,
        bound - p.0 - e.0
    );
    Ok(out)
}
