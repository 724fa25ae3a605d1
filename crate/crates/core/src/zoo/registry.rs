//! Textual zoo specs such as `qlearn(eps=0.1,q0=1)` or `bandit(p0=0.4,p1=0.7)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::agents::{
    ConstantAgent, LengthAgent, MirrorAgent, OpenLoopAgent, PastActionAgent, QLearnerSpec,
    QLearningAgent,
};
use super::corridor::{CorridorEnv, CorridorSpec, StayAgent};
use super::envs::{BernoulliBandit, CopyEnv, DeterministicEnv, IgnoreEnv, UniformEnv};
use crate::error::{Error, Result};
use crate::interface::{Agent, Environment, Interface};

pub const AGENT_NAMES: &[&str] = &[
    "constant",
    "uniform",
    "open-loop",
    "length",
    "past-action",
    "qlearn",
    "mirror",
    "stay",
];

pub const ENV_NAMES: &[&str] = &["uniform", "bandit", "copy", "ignore", "det", "corridor"];

/// A parsed `name(key=value,…)` spec. Parameters are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZooSpec {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl FromStr for ZooSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = match s.find('(') {
            None => (s, None),
            Some(i) => {
                let inner = s[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{s}`")))?;
                (&s[..i], Some(inner))
            }
        };
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::Parse(format!("missing zoo name in `{s}`")));
        }
        let mut params = BTreeMap::new();
        for pair in rest.into_iter().flat_map(|r| r.split(',')) {
            let pair = pair.trim();
            if pair.is_empty() {
                continue;
            }
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{pair}`")))?;
            if params
                .insert(k.trim().to_string(), v.trim().to_string())
                .is_some()
            {
                return Err(Error::Parse(format!("duplicate parameter `{}`", k.trim())));
            }
        }
        Ok(Self {
            name: name.to_string(),
            params,
        })
    }
}

impl fmt::Display for ZooSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            let body: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", body.join(","))?;
        }
        Ok(())
    }
}

struct Params<'a> {
    spec: &'a ZooSpec,
    allowed: &'a [&'a str],
}

impl<'a> Params<'a> {
    fn new(spec: &'a ZooSpec, allowed: &'a [&'a str]) -> Result<Self> {
        if let Some(k) = spec.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidArgument(format!(
                "`{}` does not take parameter `{k}` (allowed: {})",
                spec.name,
                if allowed.is_empty() {
                    "none".to_string()
                } else {
                    allowed.join(", ")
                }
            )));
        }
        Ok(Self { spec, allowed })
    }

    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        debug_assert!(self.allowed.contains(&key));
        match self.spec.params.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| {
                Error::Parse(format!("`{}`: bad value `{v}` for `{key}`", self.spec.name))
            }),
        }
    }

    fn required(&self, key: &str) -> Result<&'a str> {
        self.spec
            .params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("`{}` requires `{key}=…`", self.spec.name))
            })
    }
}

/// Interface implied by a spec, if it fixes one.
pub fn implied_interface(spec: &ZooSpec) -> Option<Interface> {
    matches!(spec.name.as_str(), "corridor" | "stay").then(CorridorSpec::interface)
}

/// Builds an agent. `horizon` sizes open-loop sequence tables.
pub fn build_agent(spec: &ZooSpec, interface: Interface, horizon: usize) -> Result<Arc<dyn Agent>> {
    let agent: Arc<dyn Agent> = match spec.name.as_str() {
        "constant" => {
            let p = Params::new(spec, &["action"])?;
            match p.spec.params.get("action") {
                None => Arc::new(ConstantAgent::uniform(interface)),
                Some(_) => {
                    let a: usize = p.get("action", 0)?;
                    if a >= interface.num_actions() {
                        return Err(Error::InvalidArgument(format!(
                            "action {a} outside alphabet of size {}",
                            interface.num_actions()
                        )));
                    }
                    Arc::new(ConstantAgent::new(
                        interface,
                        super::agents::point_mass(interface.num_actions(), a),
                    )?)
                }
            }
        }
        "uniform" => {
            Params::new(spec, &[])?;
            Arc::new(ConstantAgent::uniform(interface))
        }
        "open-loop" => {
            Params::new(spec, &[])?;
            Arc::new(OpenLoopAgent::repeat_first(interface, horizon))
        }
        "length" => {
            Params::new(spec, &[])?;
            Arc::new(LengthAgent::cycling(interface))
        }
        "past-action" => {
            let p = Params::new(spec, &["stay"])?;
            Arc::new(PastActionAgent::sticky(interface, p.get("stay", 0.8)?)?)
        }
        "qlearn" => {
            let p = Params::new(spec, &["eps", "q0", "alpha"])?;
            let q = QLearnerSpec::new(
                p.get("eps", 0.1)?,
                p.get("q0", 0.0)?,
                p.get("alpha", QLearnerSpec::DEFAULT_ALPHA)?,
            )?;
            Arc::new(QLearningAgent::new(interface, q)?)
        }
        "mirror" => {
            let p = Params::new(spec, &["start"])?;
            Arc::new(MirrorAgent::new(interface, p.get("start", 1)?)?)
        }
        "stay" => {
            let p = Params::new(spec, &["room", "rooms", "theta", "p_on", "p_off"])?;
            require_interface(interface, "stay")?;
            let corridor =
                CorridorSpec::starting_in(p.get("rooms", 5)?, p.get("theta", 0.5)?, p.get("room", 0)?)?;
            Arc::new(StayAgent::new(
                corridor,
                p.get("p_on", StayAgent::DEFAULT_P_ON)?,
                p.get("p_off", StayAgent::DEFAULT_P_OFF)?,
            )?)
        }
        other => return Err(Error::UnknownName(other.to_string())),
    };
    Ok(agent)
}

fn require_interface(interface: Interface, name: &str) -> Result<()> {
    if interface != CorridorSpec::interface() {
        return Err(Error::InvalidArgument(format!(
            "`{name}` needs |A|=3 and |O|=2, got |A|={} |O|={}",
            interface.num_actions(),
            interface.num_observations()
        )));
    }
    Ok(())
}

pub fn build_env(spec: &ZooSpec, interface: Interface) -> Result<Arc<dyn Environment>> {
    let env: Arc<dyn Environment> = match spec.name.as_str() {
        "uniform" => {
            Params::new(spec, &[])?;
            Arc::new(UniformEnv::new(interface))
        }
        "bandit" => {
            let keys: Vec<String> = (0..interface.num_actions()).map(|a| format!("p{a}")).collect();
            let key_refs: Vec<&str> = keys.iter().map(String::as_str).collect();
            let p = Params::new(spec, &key_refs)?;
            let defaults = [0.4, 0.7];
            let arms = keys
                .iter()
                .enumerate()
                .map(|(a, k)| p.get(k, defaults.get(a).copied().unwrap_or(0.5)))
                .collect::<Result<Vec<f64>>>()?;
            Arc::new(BernoulliBandit::new(interface, arms)?)
        }
        "copy" => {
            Params::new(spec, &[])?;
            Arc::new(CopyEnv::new(interface)?)
        }
        "ignore" => {
            let p = Params::new(spec, &["p"])?;
            Arc::new(IgnoreEnv::biased(interface, p.get("p", 0.7)?)?)
        }
        "det" => {
            let p = Params::new(spec, &["file"])?;
            let path = p.required("file")?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("cannot read `{path}`: {e}")))?;
            Arc::new(DeterministicEnv::parse_table(interface, &text)?)
        }
        "corridor" => {
            let p = Params::new(spec, &["rooms", "theta", "start"])?;
            let corridor = CorridorSpec::starting_in(
                p.get("rooms", 5)?,
                p.get("theta", 0.5)?,
                p.get("start", 0)?,
            )?;
            Arc::new(CorridorEnv::with_interface(interface, corridor)?)
        }
        other => return Err(Error::UnknownName(other.to_string())),
    };
    Ok(env)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names_and_parameters() {
        let s: ZooSpec = "qlearn(eps=0.5, q0=-1,alpha=0.2)".parse().unwrap();
        assert_eq!(s.name, "qlearn");
        assert_eq!(s.params["q0"], "-1");
        assert_eq!(s.to_string(), "qlearn(alpha=0.2,eps=0.5,q0=-1)");
        let s: ZooSpec = "copy".parse().unwrap();
        assert!(s.params.is_empty());
        assert!("qlearn(eps=0.5".parse::<ZooSpec>().is_err());
        assert!("qlearn(eps)".parse::<ZooSpec>().is_err());
        assert!("x(a=1,a=2)".parse::<ZooSpec>().is_err());
    }

    #[test]
    fn builds_every_registered_name() {
        let bin = Interface::new(2, 2).unwrap();
        for name in AGENT_NAMES {
            let spec: ZooSpec = name.parse().unwrap();
            let i = implied_interface(&spec).unwrap_or(bin);
            build_agent(&spec, i, 3).unwrap();
        }
        for name in ENV_NAMES.iter().filter(|n| **n != "det") {
            let spec: ZooSpec = name.parse().unwrap();
            let i = implied_interface(&spec).unwrap_or(bin);
            build_env(&spec, i).unwrap();
        }
    }

    #[test]
    fn reports_unknown_names_and_parameters() {
        let bin = Interface::new(2, 2).unwrap();
        let e = build_agent(&"bogus".parse().unwrap(), bin, 2).err().unwrap();
        assert_eq!(e, Error::UnknownName("bogus".into()));
        assert!(build_env(&"copy(x=1)".parse().unwrap(), bin).is_err());
        assert!(build_env(&"det".parse().unwrap(), bin).is_err());
        assert!(build_agent(&"qlearn(eps=2)".parse().unwrap(), bin, 2).is_err());
    }
}
