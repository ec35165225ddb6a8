//! The uniform norm-engine interface and the `l1`/`l2`/`linf` baselines.

use std::sync::Arc;

use crate::error::Error;
use crate::scalar::Scalar;
use crate::value::NormValue;
use crate::vector::FiniteVector;
use crate::Result;

/// A named computable norm on vectors supported in `{1..dim_bound}`.
///
/// `evaluate` must be a norm on that range: positive definite, absolutely
/// homogeneous, and subadditive (property-tested in `tests/`). Engines are
/// immutable and safe to share across threads; internal caches are
/// synchronized.
pub trait NormEngine: Send + Sync {
    fn name(&self) -> &str;

    fn dim_bound(&self) -> u32;

    fn evaluate(&self, v: &FiniteVector) -> Result<NormValue>;
}

pub(crate) fn check_support(engine: &str, v: &FiniteVector, bound: u32) -> Result<()> {
    if let Some(max) = v.max_index() {
        if max > bound {
            return Err(Error::DimensionExceeded {
                engine: engine.to_string(),
                support_max: max,
                bound,
            });
        }
    }
    Ok(())
}

/// Exact `l_p` norm for `p` in `{1, infinity}`; `l_2` is reported through
/// [`FiniteVector::l2_norm_squared`] / [`FiniteVector::l2_norm_interval`]
/// and, as an engine, through the exact square-root representation of
/// [`NormValue`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LpKind {
    L1,
    L2,
    Linf,
}

pub struct LpEngine {
    kind: LpKind,
    bound: u32,
}

impl LpEngine {
    pub fn new(kind: LpKind, bound: u32) -> Self {
        LpEngine { kind, bound }
    }
}

impl NormEngine for LpEngine {
    fn name(&self) -> &str {
        match self.kind {
            LpKind::L1 => "l1",
            LpKind::L2 => "l2",
            LpKind::Linf => "linf",
        }
    }

    fn dim_bound(&self) -> u32 {
        self.bound
    }

    fn evaluate(&self, v: &FiniteVector) -> Result<NormValue> {
        check_support(self.name(), v, self.bound)?;
        Ok(match self.kind {
            LpKind::L1 => NormValue::exact(v.l1_norm()),
            LpKind::L2 => NormValue::sqrt_of(v.l2_norm_squared()),
            LpKind::Linf => NormValue::exact(v.linf_norm()),
        })
    }
}

/// Tunable resource guards. These are configuration, not constants: every
/// CLI entry point can override them.
#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Largest dimension for which the dual norming set may be generated.
    pub max_norming_dim: u32,
    /// Support bound for James-type norms over the `tstar` base.
    pub max_james_tstar_dim: u32,
    /// Support bound for James-type norms over `l_p` bases.
    pub max_james_lp_dim: u32,
    /// Maximum number of subset evaluations in exhaustive searches.
    pub max_subset_evaluations: u64,
    /// Generate the norming set with domination pruning.
    pub prune: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            max_norming_dim: 10,
            max_james_tstar_dim: 10,
            max_james_lp_dim: 16,
            max_subset_evaluations: 1_000_000,
            prune: true,
        }
    }
}

/// Resolves an engine specification string.
///
/// Accepted names: `t`, `tstar`, `l1`, `l2`, `linf`, and `james:<base>`
/// where `<base>` is any of the former.
pub fn engine_by_name(spec: &str, dim: u32, opts: &EngineOptions) -> Result<Arc<dyn NormEngine>> {
    match spec {
        "l1" => Ok(Arc::new(LpEngine::new(LpKind::L1, dim))),
        "l2" => Ok(Arc::new(LpEngine::new(LpKind::L2, dim))),
        "linf" => Ok(Arc::new(LpEngine::new(LpKind::Linf, dim))),
        "t" => Ok(Arc::new(crate::tsirelson::TsirelsonEngine::new(dim))),
        "tstar" => {
            if dim > opts.max_norming_dim {
                return Err(Error::ResourceLimit(format!(
                    "tstar dimension {dim} exceeds the norming-set generation limit \
                     {} (raise it explicitly to proceed)",
                    opts.max_norming_dim
                )));
            }
            Ok(Arc::new(crate::dualnorm::TStarEngine::generate(dim, opts.prune)?))
        }
        _ => match spec.strip_prefix("james:") {
            Some(base_spec) => {
                let limit = if base_spec == "tstar" {
                    opts.max_james_tstar_dim
                } else {
                    opts.max_james_lp_dim
                };
                if dim > limit {
                    return Err(Error::ResourceLimit(format!(
                        "james:{base_spec} dimension {dim} exceeds the default bound {limit}"
                    )));
                }
                let base = engine_by_name(base_spec, dim, opts)?;
                Ok(Arc::new(crate::james::JamesEngine::new(base)))
            }
            None => Err(Error::parse(
                format!("space `{spec}`"),
                "expected one of t, tstar, l1, l2, linf, james:<base>",
            )),
        },
    }
}

/// The `lp_norm` operation: exact for `p` in `{1, inf}`; for `p = 2` the
/// squared value is exact and the norm itself is reported as an enclosing
/// rational interval of the requested width.
pub enum LpNorm {
    Exact(Scalar),
    Enclosure {
        squared: Scalar,
        lo: Scalar,
        hi: Scalar,
    },
}

pub fn lp_norm(v: &FiniteVector, kind: LpKind, l2_width: &Scalar) -> LpNorm {
    match kind {
        LpKind::L1 => LpNorm::Exact(v.l1_norm()),
        LpKind::Linf => LpNorm::Exact(v.linf_norm()),
        LpKind::L2 => {
            let squared = v.l2_norm_squared();
            let (lo, hi) = v.l2_norm_interval(l2_width);
            LpNorm::Enclosure { squared, lo, hi }
        }
    }
}
