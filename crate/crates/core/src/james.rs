//! James-type norms over a pluggable base norm.
//!
//! The norm of a vector `a` is the supremum over systems of successive
//! intervals `s_1 < ... < s_n` of the base norm of
//! `sum_i (sum_{j in s_i} a_j) u_{p_i}` with `p_i = min s_i`. Only
//! finitely many systems produce distinct assembled vectors, so the
//! supremum is attained by exhaustive enumeration.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::engine::{check_support, NormEngine};
use crate::error::Error;
use crate::scalar::Scalar;
use crate::tsirelson::Interval;
use crate::value::NormValue;
use crate::vector::FiniteVector;
use crate::Result;

/// A nonempty sequence of successive intervals `s_1 < s_2 < ... < s_n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntervalSystem {
    intervals: Vec<Interval>,
}

impl IntervalSystem {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::parse("interval system", "must be nonempty"));
        }
        for w in intervals.windows(2) {
            if w[0].hi() >= w[1].lo() {
                return Err(Error::parse(
                    "interval system",
                    format!("intervals must be successive ({} then {})", w[0], w[1]),
                ));
            }
        }
        Ok(IntervalSystem { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// The recorded left endpoints `p_i = min s_i`.
    pub fn anchors(&self) -> impl Iterator<Item = u32> + '_ {
        self.intervals.iter().map(|s| s.lo())
    }
}

/// Every sequence of successive intervals inside `span`, exactly once.
///
/// Canonical order: lexicographic in the flattened endpoint sequence
/// `(lo_1, hi_1, lo_2, hi_2, ...)`, shorter prefixes first.
pub fn enumerate_interval_systems(span: Interval) -> Vec<IntervalSystem> {
    let mut out = Vec::new();
    let mut acc: Vec<Interval> = Vec::new();
    fn rec(from: u32, hi: u32, acc: &mut Vec<Interval>, out: &mut Vec<IntervalSystem>) {
        for lo in from..=hi {
            for end in lo..=hi {
                acc.push(Interval::new(lo, end).unwrap());
                out.push(IntervalSystem {
                    intervals: acc.clone(),
                });
                if end + 1 <= hi {
                    rec(end + 1, hi, acc, out);
                }
                acc.pop();
            }
        }
    }
    rec(span.lo(), span.hi(), &mut acc, &mut out);
    out.sort_by(|a, b| {
        let fa: Vec<u32> = a.intervals.iter().flat_map(|s| [s.lo(), s.hi()]).collect();
        let fb: Vec<u32> = b.intervals.iter().flat_map(|s| [s.lo(), s.hi()]).collect();
        fa.cmp(&fb)
    });
    out
}

/// Independent count of interval systems over `n` points: with `g(0)=1`,
/// `g(n) = g(n-1) + sum_{m<n} g(m)` counts systems including the empty
/// one, so the number of nonempty systems is `g(n) - 1`.
pub fn interval_system_count(n: u32) -> u64 {
    let n = n as usize;
    let mut g = vec![0u64; n + 1];
    g[0] = 1;
    let mut prefix = 1u64; // sum of g[0..=0]
    for i in 1..=n {
        g[i] = g[i - 1] + prefix;
        prefix += g[i];
    }
    g[n] - 1
}

/// Assembles `sum_i (sum_{j in s_i} a_j) u_{p_i}` for one system.
fn assemble(a: &FiniteVector, system: &IntervalSystem) -> FiniteVector {
    let mut out = FiniteVector::zero();
    for s in system.intervals() {
        let mut sum = Scalar::zero();
        for (_, c) in a.restrict(s.lo(), s.hi()).iter() {
            sum = sum + c;
        }
        if !sum.is_zero() {
            out.set(s.lo(), sum);
        }
    }
    out
}

/// The James-type norm of `a` over `base`.
///
/// Interval systems are restricted to `[1..max supp(a)]`: intervals past
/// the support contribute zero sums and overhanging intervals are
/// equivalent to their truncations (checked against unrestricted
/// enumeration in the tests).
pub fn james_norm(a: &FiniteVector, base: &dyn NormEngine) -> Result<NormValue> {
    james_norm_cached(a, base, None)
}

fn james_norm_cached(
    a: &FiniteVector,
    base: &dyn NormEngine,
    cache: Option<&RwLock<HashMap<FiniteVector, NormValue>>>,
) -> Result<NormValue> {
    check_support("james", a, base.dim_bound())?;
    let hi = match a.max_index() {
        Some(hi) => hi,
        None => return Ok(NormValue::zero()),
    };
    let span = Interval::new(1, hi).expect("nonempty span");
    let mut best = NormValue::zero();
    let mut evaluated: HashMap<FiniteVector, ()> = HashMap::new();
    for system in enumerate_interval_systems(span) {
        let w = assemble(a, &system);
        if evaluated.insert(w.clone(), ()).is_some() {
            continue;
        }
        if let Some(shared) = cache {
            if let Some(hit) = shared.read().unwrap().get(&w) {
                best = best.max(hit.clone());
                continue;
            }
        }
        let val = base.evaluate(&w)?;
        if let Some(shared) = cache {
            shared.write().unwrap().insert(w, val.clone());
        }
        best = best.max(val);
    }
    Ok(best)
}

/// Norm engine for `J[base]`. Base evaluations are memoized per
/// assembled vector across calls.
pub struct JamesEngine {
    base: Arc<dyn NormEngine>,
    name: String,
    cache: RwLock<HashMap<FiniteVector, NormValue>>,
}

impl JamesEngine {
    pub fn new(base: Arc<dyn NormEngine>) -> Self {
        let name = format!("james:{}", base.name());
        JamesEngine {
            base,
            name,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn base(&self) -> &Arc<dyn NormEngine> {
        &self.base
    }
}

impl NormEngine for JamesEngine {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim_bound(&self) -> u32 {
        self.base.dim_bound()
    }

    fn evaluate(&self, v: &FiniteVector) -> Result<NormValue> {
        james_norm_cached(v, self.base.as_ref(), Some(&self.cache))
    }
}
