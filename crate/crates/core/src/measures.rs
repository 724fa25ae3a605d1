//! Exact information measures over a [`JointDist`].
//!
//! All quantities are in bits. Conditional mutual information is evaluated
//! as `H(UW) + H(VW) - H(UVW) - H(W)` from marginal entropies; entropies are
//! memoized per coordinate set inside an [`InfoMeasures`] so that sweeps over
//! many intervals of one joint share their marginals. Sums run sequentially
//! in increasing timestep order, so results are bit-reproducible.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::interface::Role;
use crate::joint::{CoordSet, JointDist};

/// Per-term values in `[-CLAMP_TOLERANCE, 0)` are roundoff and clamp to zero.
pub const CLAMP_TOLERANCE: f64 = 1e-10;

/// Inclusive interval of timesteps, `1 ≤ lo ≤ hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: usize,
    hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo < 1 || hi < lo {
            return Err(Error::InvalidInterval(format!(
                "[{lo}:{hi}] (need 1 <= lo <= hi)"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// `[1:n]`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(1, n)
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn check_horizon(&self, horizon: usize) -> Result<()> {
        if self.hi > horizon {
            return Err(Error::InvalidInterval(format!(
                "[{}:{}] exceeds horizon {horizon}",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.lo, self.hi)
    }
}

/// Interleaving convention between source and target.
///
/// `Forward`: the source symbol at step `i` precedes the target symbol at
/// step `i`. `Delayed`: it follows, so only source symbols up to `i-1` can
/// inform the target at `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arrow {
    Forward,
    Delayed,
}

impl Arrow {
    pub fn name(self) -> &'static str {
        match self {
            Arrow::Forward => "forward",
            Arrow::Delayed => "delayed",
        }
    }

    pub fn other(self) -> Arrow {
        match self {
            Arrow::Forward => Arrow::Delayed,
            Arrow::Delayed => Arrow::Forward,
        }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Arrow {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(Arrow::Forward),
            "delayed" => Ok(Arrow::Delayed),
            _ => Err(Error::Parse(format!(
                "unknown arrow {s:?} (expected forward or delayed)"
            ))),
        }
    }
}

/// Arguments of every GDI-family measure: `X_{a:b} → Y_{c:d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeasureQuery {
    pub source_role: Role,
    pub source: Interval,
    pub target: Interval,
    pub arrow: Arrow,
}

impl MeasureQuery {
    pub fn new(source_role: Role, source: Interval, target: Interval, arrow: Arrow) -> Self {
        Self {
            source_role,
            source,
            target,
            arrow,
        }
    }

    pub fn target_role(&self) -> Role {
        self.source_role.opposite()
    }

    /// The reverse-direction query with the other arrow, as paired by the
    /// conservation law.
    pub fn reversed(&self) -> MeasureQuery {
        MeasureQuery {
            source_role: self.target_role(),
            source: self.target,
            target: self.source,
            arrow: self.arrow.other(),
        }
    }

    pub fn with_arrow(&self, arrow: Arrow) -> MeasureQuery {
        MeasureQuery { arrow, ..*self }
    }

    /// The same variables seen with action and observation labels exchanged.
    pub fn swap_roles(&self) -> MeasureQuery {
        MeasureQuery {
            source_role: self.target_role(),
            ..*self
        }
    }

    pub fn horizon(&self) -> usize {
        self.source.hi().max(self.target.hi())
    }

    pub fn check(&self, horizon: usize) -> Result<()> {
        self.source.check_horizon(horizon)?;
        self.target.check_horizon(horizon)
    }
}

impl fmt::Display for MeasureQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.arrow {
            Arrow::Forward => "->",
            Arrow::Delayed => "~>",
        };
        write!(
            f,
            "{}{} {arrow} {}{}",
            self.source_role,
            self.source,
            self.target_role(),
            self.target
        )
    }
}

/// A measure value with its per-timestep breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub value: f64,
    /// `(timestep, bits)` in increasing timestep order.
    pub terms: Vec<(usize, f64)>,
}

impl MeasureReport {
    fn from_terms(terms: Vec<(usize, f64)>) -> Self {
        let value = terms.iter().map(|t| t.1).sum();
        Self { value, terms }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("value_bits={:.16e}\n", self.value);
        for (i, bits) in &self.terms {
            let _ = writeln!(out, "term i={i} bits={bits:.16e}");
        }
        out
    }
}

/// Clamps roundoff-level negatives to zero; rejects anything more negative.
pub fn clamp_nonnegative(value: f64, what: &dyn fmt::Display) -> Result<f64> {
    if value.is_nan() {
        return Err(Error::NumericalIntegrity(format!("{what} is NaN")));
    }
    if value >= 0.0 {
        Ok(value)
    } else if value >= -CLAMP_TOLERANCE {
        Ok(0.0)
    } else {
        Err(Error::NumericalIntegrity(format!(
            "{what} = {value:e} bits is below -{CLAMP_TOLERANCE:e}"
        )))
    }
}

/// Entropy in bits of a probability vector; zero cells are skipped.
pub fn entropy_of(probs: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in probs {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

/// Memoizing evaluator bound to one joint distribution.
pub struct InfoMeasures<'a> {
    joint: &'a JointDist,
    cache: RefCell<HashMap<u64, f64>>,
}

impl<'a> InfoMeasures<'a> {
    pub fn new(joint: &'a JointDist) -> Self {
        Self {
            joint,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn joint(&self) -> &JointDist {
        self.joint
    }

    /// Joint entropy of the coordinates in `set`.
    pub fn entropy(&self, set: CoordSet) -> Result<f64> {
        if set.is_empty() {
            return Ok(0.0);
        }
        if let Some(&h) = self.cache.borrow().get(&set.bits()) {
            return Ok(h);
        }
        let h = entropy_of(&self.joint.marginal_table(set)?);
        self.cache.borrow_mut().insert(set.bits(), h);
        Ok(h)
    }

    /// `H(U | W)`.
    pub fn conditional_entropy(&self, u: CoordSet, w: CoordSet) -> Result<f64> {
        Ok(self.entropy(u.union(w))? - self.entropy(w)?)
    }

    /// `I(U; V | W)` without clamping.
    pub fn raw_cmi(&self, u: CoordSet, v: CoordSet, w: CoordSet) -> Result<f64> {
        if u.intersects(v) || u.intersects(w) || v.intersects(w) {
            return Err(Error::InvalidArgument(
                "conditional mutual information needs pairwise disjoint sets".into(),
            ));
        }
        if u.is_empty() || v.is_empty() {
            self.joint.check_coords(u.union(v).union(w))?;
            return Ok(0.0);
        }
        Ok(self.entropy(u.union(w))? + self.entropy(v.union(w))?
            - self.entropy(u.union(v).union(w))?
            - self.entropy(w)?)
    }

    /// `I(U; V | W)`, clamped at zero within tolerance.
    pub fn cmi(&self, u: CoordSet, v: CoordSet, w: CoordSet) -> Result<f64> {
        let raw = self.raw_cmi(u, v, w)?;
        clamp_nonnegative(raw, &"conditional mutual information")
    }

    fn gdi_raw_terms(&self, q: &MeasureQuery) -> Result<Vec<(usize, f64)>> {
        q.check(self.joint.horizon())?;
        let x = q.source_role;
        let y = q.target_role();
        let (a, b) = (q.source.lo(), q.source.hi());
        let (c, d) = (q.target.lo(), q.target.hi());
        let x_past = CoordSet::range(x, 1, a - 1);
        let (start, lag) = match q.arrow {
            Arrow::Forward => (a.max(c), 0),
            Arrow::Delayed => ((a + 1).max(c), 1),
        };
        let mut terms = Vec::new();
        for i in start..=d {
            let src = CoordSet::range(x, a, b.min(i - lag));
            let tgt = CoordSet::range(y, i, i);
            let cond = x_past.union(CoordSet::range(y, 1, i - 1));
            terms.push((i, self.raw_cmi(src, tgt, cond)?));
        }
        Ok(terms)
    }

    /// Generalized directed information for either arrow.
    pub fn gdi(&self, q: &MeasureQuery) -> Result<MeasureReport> {
        let terms = self
            .gdi_raw_terms(q)?
            .into_iter()
            .map(|(i, v)| {
                clamp_nonnegative(v, &format_args!("term i={i} of {q}")).map(|v| (i, v))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MeasureReport::from_terms(terms))
    }

    /// Smallest per-term value before clamping; used by the law suite.
    pub fn gdi_min_raw_term(&self, q: &MeasureQuery) -> Result<f64> {
        Ok(self
            .gdi_raw_terms(q)?
            .into_iter()
            .map(|t| t.1)
            .fold(f64::INFINITY, f64::min))
    }

    /// Directed information over the full horizon.
    pub fn directed_information(&self, x: Role, arrow: Arrow) -> Result<MeasureReport> {
        let full = Interval::full(self.joint.horizon())?;
        self.gdi(&MeasureQuery::new(x, full, full, arrow))
    }

    /// `I(X_{a:b}; Y_{c:d} | X_{1:a-1}, Y_{1:c-1})`: the quantity split by the
    /// conservation law.
    pub fn interval_cmi(&self, q: &MeasureQuery) -> Result<f64> {
        q.check(self.joint.horizon())?;
        let x = q.source_role;
        let y = q.target_role();
        self.cmi(
            CoordSet::range(x, q.source.lo(), q.source.hi()),
            CoordSet::range(y, q.target.lo(), q.target.hi()),
            CoordSet::range(x, 1, q.source.lo() - 1)
                .union(CoordSet::range(y, 1, q.target.lo() - 1)),
        )
    }

    /// Generalized causal entropy
    /// `Σ_{i=max(a,c)}^{d} H(Y_i | Y_{1:i-1}, X_{a:min(b,i)})`.
    pub fn causal_entropy(
        &self,
        target_role: Role,
        target: Interval,
        source: Interval,
    ) -> Result<f64> {
        let horizon = self.joint.horizon();
        target.check_horizon(horizon)?;
        source.check_horizon(horizon)?;
        let x = target_role.opposite();
        let (a, b, c, d) = (source.lo(), source.hi(), target.lo(), target.hi());
        let mut total = 0.0;
        for i in a.max(c)..=d {
            let h = self.conditional_entropy(
                CoordSet::range(target_role, i, i),
                CoordSet::range(target_role, 1, i - 1).union(CoordSet::range(x, a, b.min(i))),
            )?;
            total += clamp_nonnegative(h, &format_args!("causal entropy term i={i}"))?;
        }
        Ok(total)
    }

    /// Splits a forward GDI into an entropy term minus a causal-entropy term.
    ///
    /// With `s = max(a,c)`, the entropy term is `H(Y_{s:d} | X_{1:a-1}, Y_{1:s-1})`
    /// and the causal term is `Σ_{i=s}^{d} H(Y_i | Y_{1:i-1}, X_{1:min(b,i)})`.
    /// For `a = c = 1` these are `H(Y_{1:n'})` and the causal entropy above.
    pub fn kramer_decompose(&self, q: &MeasureQuery) -> Result<(f64, f64)> {
        if q.arrow != Arrow::Forward {
            return Err(Error::UnsupportedVariant(
                "the Kramer decomposition is defined for the forward arrow only".into(),
            ));
        }
        q.check(self.joint.horizon())?;
        let x = q.source_role;
        let y = q.target_role();
        let (a, b, c, d) = (q.source.lo(), q.source.hi(), q.target.lo(), q.target.hi());
        let s = a.max(c);
        let x_past = CoordSet::range(x, 1, a - 1);
        let entropy_term = clamp_nonnegative(
            self.conditional_entropy(
                CoordSet::range(y, s, d),
                x_past.union(CoordSet::range(y, 1, s - 1)),
            )?,
            &"kramer entropy term",
        )?;
        let mut causal = 0.0;
        for i in s..=d {
            let h = self.conditional_entropy(
                CoordSet::range(y, i, i),
                CoordSet::range(y, 1, i - 1).union(CoordSet::range(x, 1, b.min(i))),
            )?;
            causal += clamp_nonnegative(h, &format_args!("kramer causal term i={i}"))?;
        }
        Ok((entropy_term, causal))
    }
}

/// Joint entropy of `set` under `dist`.
pub fn entropy(dist: &JointDist, set: CoordSet) -> Result<f64> {
    InfoMeasures::new(dist).entropy(set)
}

/// `I(U; V | W)` under `dist`.
pub fn cmi(dist: &JointDist, u: CoordSet, v: CoordSet, w: CoordSet) -> Result<f64> {
    InfoMeasures::new(dist).cmi(u, v, w)
}

pub fn gdi(dist: &JointDist, query: &MeasureQuery) -> Result<MeasureReport> {
    InfoMeasures::new(dist).gdi(query)
}

pub fn directed_information(dist: &JointDist, x: Role, arrow: Arrow) -> Result<MeasureReport> {
    InfoMeasures::new(dist).directed_information(x, arrow)
}

pub fn causal_entropy(
    dist: &JointDist,
    target_role: Role,
    target: Interval,
    source: Interval,
) -> Result<f64> {
    InfoMeasures::new(dist).causal_entropy(target_role, target, source)
}

pub fn kramer_decompose(dist: &JointDist, query: &MeasureQuery) -> Result<(f64, f64)> {
    InfoMeasures::new(dist).kramer_decompose(query)
}
