//! Desk-scale concentration experiments: how small can the image
//! diameter of a Lipschitz map on k-subsets get when restricted to the
//! best subset of the ground set, and how large the image spread is over
//! interlaced pairs.
//!
//! The infinite statements these experiments shadow quantify over
//! infinite subsets of the naturals; no finite computation verifies
//! them. Every report therefore records its mode and sizes, so outputs
//! are never mislabeled as more than finite-subset searches.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::combinatorics::{enumerate_interlaced_pairs, enumerate_ksubsets, GroundSet, KSubset};
use crate::dualnorm::TStarEngine;
use crate::engine::{EngineOptions, LpEngine, LpKind, NormEngine};
use crate::error::Error;
use crate::james::JamesEngine;
use crate::lipmaps::{basis_summing_map, FiniteLipschitzMap, Metric};
use crate::value::NormValue;
use crate::Result;

/// Caps the worker threads used by parallel subset scans. Results do not
/// depend on the thread count (reductions tie-break deterministically);
/// only wall time does. Effective once per process.
pub fn configure_threads(jobs: usize) {
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build_global();
}

/// Search mode of a report.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchMode {
    Exact,
    GreedyOscillation,
    GreedyDiameter,
    Interlaced,
}

impl SearchMode {
    pub fn name(&self) -> &'static str {
        match self {
            SearchMode::Exact => "exact",
            SearchMode::GreedyOscillation => "greedy:oscillation",
            SearchMode::GreedyDiameter => "greedy:diameter",
            SearchMode::Interlaced => "interlaced",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "exact" => Ok(SearchMode::Exact),
            "greedy:oscillation" => Ok(SearchMode::GreedyOscillation),
            "greedy:diameter" => Ok(SearchMode::GreedyDiameter),
            other => Err(Error::parse(
                format!("mode `{other}`"),
                "expected exact, greedy:oscillation or greedy:diameter",
            )),
        }
    }
}

/// Outcome of a subset search or interlaced scan.
#[derive(Clone, Debug)]
pub struct ConcentrationReport {
    pub space: String,
    pub k: usize,
    pub ground: GroundSet,
    pub subset_size: usize,
    pub mode: SearchMode,
    pub lipschitz: NormValue,
    pub min_diameter: NormValue,
    /// Witness subset (searches) or pair text (interlaced scans).
    pub witness: String,
    pub elapsed_ms: Option<u128>,
}

impl ConcentrationReport {
    /// `min_diameter / lipschitz`; undefined for constant maps.
    pub fn ratio(&self) -> Option<NormValue> {
        if self.lipschitz.is_zero() {
            None
        } else {
            Some(self.min_diameter.div(&self.lipschitz))
        }
    }
}

/// Exact image diameter of `f` restricted to `[L]^k`.
pub fn diam_image(f: &FiniteLipschitzMap, subset: &GroundSet) -> Result<NormValue> {
    if subset.len() < f.k() {
        return Err(Error::GroundTooSmall {
            ground: subset.len(),
            k: f.k(),
        });
    }
    for x in subset.elements() {
        if !f.ground().contains(*x) {
            return Err(Error::parse(
                format!("subset element {x}"),
                "not in the map's ground set",
            ));
        }
    }
    let points = enumerate_ksubsets(subset, f.k())?;
    let mut best = NormValue::zero();
    for (i, a) in points.iter().enumerate() {
        for b in points.iter().skip(i + 1) {
            best = best.max(f.image_distance(a, b)?);
        }
    }
    Ok(best)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Exhaustive minimum of the image diameter over all size-`l` subsets of
/// the ground set. Deterministic: the witness is the first minimizer in
/// colexicographic order, independent of the parallel schedule.
pub fn exact_min_diameter(
    f: &FiniteLipschitzMap,
    subset_size: usize,
    max_evaluations: u64,
) -> Result<ConcentrationReport> {
    let start = Instant::now();
    let m = f.ground().len();
    if subset_size < f.k() || subset_size > m {
        return Err(Error::parse(
            format!("subset size {subset_size}"),
            format!("need k = {} <= l <= |M| = {m}", f.k()),
        ));
    }
    let count = binomial(m, subset_size);
    if count > max_evaluations as u128 {
        return Err(Error::ResourceLimit(format!(
            "exact search over C({m},{subset_size}) = {count} subsets exceeds the limit {max_evaluations}"
        )));
    }
    let subsets = enumerate_ksubsets(f.ground(), subset_size)?;
    let evaluated: Vec<(usize, NormValue)> = subsets
        .par_iter()
        .enumerate()
        .map(|(idx, s)| {
            let g = GroundSet::new(s.elements().to_vec()).expect("valid subset");
            let d = diam_image(f, &g).expect("subset within ground");
            (idx, d)
        })
        .collect();
    let (best_idx, best) = evaluated
        .into_iter()
        .min_by(|(i, a), (j, b)| a.cmp(b).then(i.cmp(j)))
        .expect("at least one subset");
    let lip = f.lip_constant()?;
    Ok(ConcentrationReport {
        space: f.codomain().name().to_string(),
        k: f.k(),
        ground: f.ground().clone(),
        subset_size,
        mode: SearchMode::Exact,
        lipschitz: lip,
        min_diameter: best,
        witness: subsets[best_idx].to_string(),
        elapsed_ms: Some(start.elapsed().as_millis()),
    })
}

/// Greedy subset extraction: grows the subset one element at a time,
/// picking the candidate that minimizes the strategy score over the
/// partial selection (ties broken by the smallest element). Always an
/// upper bound for the exact search.
///
/// The `oscillation` score of a candidate is the largest image change it
/// induces among extensions of the already-selected points: the max
/// codomain distance over pairs from the extended selection that involve
/// the candidate. The `diameter` score is the image diameter of the
/// extended selection.
pub fn greedy_extraction(
    f: &FiniteLipschitzMap,
    subset_size: usize,
    mode: SearchMode,
) -> Result<ConcentrationReport> {
    let start = Instant::now();
    let m = f.ground().len();
    if subset_size < f.k() || subset_size > m {
        return Err(Error::parse(
            format!("subset size {subset_size}"),
            format!("need k = {} <= l <= |M| = {m}", f.k()),
        ));
    }
    let strategy_is_oscillation = match mode {
        SearchMode::GreedyOscillation => true,
        SearchMode::GreedyDiameter => false,
        other => {
            return Err(Error::parse(
                format!("mode {}", other.name()),
                "greedy extraction needs a greedy strategy",
            ))
        }
    };
    let mut chosen: Vec<u32> = Vec::with_capacity(subset_size);
    while chosen.len() < subset_size {
        let mut best: Option<(NormValue, u32)> = None;
        for &c in f.ground().elements() {
            if chosen.contains(&c) {
                continue;
            }
            let mut extended = chosen.clone();
            extended.push(c);
            extended.sort_unstable();
            let score = if extended.len() < f.k() {
                NormValue::zero()
            } else {
                let g = GroundSet::new(extended.clone())?;
                let points = enumerate_ksubsets(&g, f.k())?;
                let mut acc = NormValue::zero();
                for (i, a) in points.iter().enumerate() {
                    for b in points.iter().skip(i + 1) {
                        if strategy_is_oscillation && !(a.contains(c) || b.contains(c)) {
                            continue;
                        }
                        acc = acc.max(f.image_distance(a, b)?);
                    }
                }
                acc
            };
            let better = match &best {
                None => true,
                Some((s, e)) => score < *s || (score == *s && c < *e),
            };
            if better {
                best = Some((score, c));
            }
        }
        let (_, pick) = best.expect("ground has spare elements");
        chosen.push(pick);
        chosen.sort_unstable();
    }
    let subset = GroundSet::new(chosen)?;
    // Recompute the final diameter independently of the scores.
    let diameter = diam_image(f, &subset)?;
    let lip = f.lip_constant()?;
    let witness = KSubset::new(subset.elements().to_vec())?.to_string();
    Ok(ConcentrationReport {
        space: f.codomain().name().to_string(),
        k: f.k(),
        ground: f.ground().clone(),
        subset_size,
        mode,
        lipschitz: lip,
        min_diameter: diameter,
        witness,
        elapsed_ms: Some(start.elapsed().as_millis()),
    })
}

/// Exact maximum of the codomain distance over strictly interlaced pairs.
pub fn interlaced_diameter(f: &FiniteLipschitzMap) -> Result<(NormValue, String)> {
    if f.ground().len() < 2 * f.k() {
        return Err(Error::NoInterlacedPairs);
    }
    let pairs = enumerate_interlaced_pairs(f.ground(), f.k())?;
    let mut best = NormValue::zero();
    let mut witness = String::new();
    for (a, b) in &pairs {
        let d = f.image_distance(a, b)?;
        if witness.is_empty() || d > best {
            best = d;
            witness = format!("{a}|{b}");
        }
    }
    Ok((best, witness))
}

/// Interlaced scan packaged as a report (`subset_size` records `2k`, the
/// number of elements a pair uses).
pub fn interlaced_report(f: &FiniteLipschitzMap, space: &str) -> Result<ConcentrationReport> {
    let start = Instant::now();
    let (diameter, witness) = interlaced_diameter(f)?;
    let lip = f.lip_constant()?;
    Ok(ConcentrationReport {
        space: space.to_string(),
        k: f.k(),
        ground: f.ground().clone(),
        subset_size: 2 * f.k(),
        mode: SearchMode::Interlaced,
        lipschitz: lip,
        min_diameter: diameter,
        witness,
        elapsed_ms: Some(start.elapsed().as_millis()),
    })
}

// ---------------------------------------------------------------------------
// Experiment configuration and sweeps
// ---------------------------------------------------------------------------

/// Ground-set choice: an explicit range or the per-space defaults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundChoice {
    Range(u32, u32),
    Auto,
}

/// Subset-size choice: explicit or `2k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetSizeChoice {
    Fixed(usize),
    TwiceK,
}

/// Parsed `key = value` experiment configuration.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub spaces: Vec<String>,
    pub k_range: (usize, usize),
    pub ground: GroundChoice,
    pub subset_size: SubsetSizeChoice,
    pub mode: SearchMode,
    pub metric: Metric,
    pub limit_subsets: u64,
    pub output: String,
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    /// Parses the line-oriented `key = value` format. `#` starts a
    /// comment; unknown keys and malformed values are errors with their
    /// line number.
    pub fn parse(text: &str) -> Result<Self> {
        let mut spaces: Option<Vec<String>> = None;
        let mut k_range: Option<(usize, usize)> = None;
        let mut ground: Option<GroundChoice> = None;
        let mut subset_size = SubsetSizeChoice::TwiceK;
        let mut mode = SearchMode::Exact;
        let mut metric = Metric::Hamming;
        let mut limit_subsets = 1_000_000u64;
        let mut output = "-".to_string();
        let mut seed = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = match raw.split_once('#') {
                Some((before, _)) => before,
                None => raw,
            };
            let content = content.trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(Error::Config {
                line,
                message: "expected `key = value`".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |message: String| Error::Config { line, message };
            match key {
                "spaces" => {
                    let list: Vec<String> = value
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect();
                    if list.is_empty() {
                        return Err(bad("spaces list is empty".into()));
                    }
                    for s in &list {
                        if !matches!(s.as_str(), "l1" | "l2" | "linf" | "tstar" | "jtstar") {
                            return Err(bad(format!(
                                "unknown space `{s}` (expected l1, l2, linf, tstar, jtstar)"
                            )));
                        }
                    }
                    spaces = Some(list);
                }
                "k_range" => {
                    k_range = Some(parse_range(value).map_err(|m| bad(m))?);
                }
                "ground" => {
                    ground = Some(if value == "auto" {
                        GroundChoice::Auto
                    } else {
                        let (lo, hi) = parse_range(value).map_err(|m| bad(m))?;
                        if lo == 0 {
                            return Err(bad("ground indices are 1-based".into()));
                        }
                        if lo > hi {
                            return Err(bad(format!("empty ground range {lo}..{hi}")));
                        }
                        GroundChoice::Range(lo as u32, hi as u32)
                    });
                }
                "subset_size" => {
                    subset_size = if value == "2k" {
                        SubsetSizeChoice::TwiceK
                    } else {
                        SubsetSizeChoice::Fixed(
                            value.parse().map_err(|e| bad(format!("bad subset_size: {e}")))?,
                        )
                    };
                }
                "mode" => mode = SearchMode::parse(value).map_err(|e| bad(e.to_string()))?,
                "metric" => metric = Metric::parse(value).map_err(|e| bad(e.to_string()))?,
                "limit_subsets" => {
                    limit_subsets = value
                        .parse()
                        .map_err(|e| bad(format!("bad limit_subsets: {e}")))?;
                }
                "output" => output = value.to_string(),
                "seed" => {
                    seed = Some(value.parse().map_err(|e| bad(format!("bad seed: {e}")))?)
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        let spaces = spaces.ok_or(Error::Config {
            line: 0,
            message: "missing `spaces`".into(),
        })?;
        let k_range = k_range.ok_or(Error::Config {
            line: 0,
            message: "missing `k_range`".into(),
        })?;
        let ground = ground.unwrap_or(GroundChoice::Auto);
        Ok(ExperimentConfig {
            spaces,
            k_range,
            ground,
            subset_size,
            mode,
            metric,
            limit_subsets,
            output,
            seed,
        })
    }

    fn ground_for(&self, space: &str, k: usize, interlaced: bool) -> Result<GroundSet> {
        match &self.ground {
            GroundChoice::Range(lo, hi) => GroundSet::range(*lo, *hi),
            GroundChoice::Auto => {
                let k = k as u32;
                if interlaced {
                    // The interlaced experiments compare spaces on one
                    // instance per k.
                    GroundSet::range(1, 2 * k + 2)
                } else {
                    match space {
                        "tstar" => GroundSet::range(k, k + 9),
                        "jtstar" => GroundSet::range(1, 2 * k + 2),
                        _ => GroundSet::range(1, 2 * k + 4),
                    }
                }
            }
        }
    }

    fn subset_size_for(&self, k: usize) -> usize {
        match self.subset_size {
            SubsetSizeChoice::Fixed(l) => l,
            SubsetSizeChoice::TwiceK => 2 * k,
        }
    }
}

/// Parses `a..b` or a single value. An inverted range is allowed for
/// `k_range` (an empty sweep yields a header-only CSV); ground ranges
/// reject it separately.
fn parse_range(value: &str) -> std::result::Result<(usize, usize), String> {
    if let Some((lo, hi)) = value.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|e| format!("bad range start: {e}"))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|e| format!("bad range end: {e}"))?;
        Ok((lo, hi))
    } else {
        let v: usize = value.trim().parse().map_err(|e| format!("bad value: {e}"))?;
        Ok((v, v))
    }
}

/// Builds the named experiment map for one space and instance. All
/// spaces use the canonical-basis summing map `m -> 1/2 sum e_{m_i}`
/// into the space.
pub fn space_map(
    space: &str,
    ground: GroundSet,
    k: usize,
    metric: Metric,
    opts: &EngineOptions,
) -> Result<FiniteLipschitzMap> {
    let dim = ground.max().ok_or(Error::GroundTooSmall { ground: 0, k })?;
    let codomain: Arc<dyn NormEngine> = match space {
        "l1" => Arc::new(LpEngine::new(LpKind::L1, dim)),
        "l2" => Arc::new(LpEngine::new(LpKind::L2, dim)),
        "linf" => Arc::new(LpEngine::new(LpKind::Linf, dim)),
        "tstar" => {
            let lo = ground.min().unwrap_or(1);
            if dim > opts.max_norming_dim && dim - lo + 1 > opts.max_norming_dim {
                return Err(Error::ResourceLimit(format!(
                    "tstar ground span {lo}..{dim} exceeds the norming-set limit {}",
                    opts.max_norming_dim
                )));
            }
            Arc::new(TStarEngine::generate_range(lo, dim, opts.prune)?)
        }
        "jtstar" => {
            if dim > opts.max_james_tstar_dim {
                return Err(Error::ResourceLimit(format!(
                    "james:tstar dimension {dim} exceeds the bound {}",
                    opts.max_james_tstar_dim
                )));
            }
            let base = Arc::new(TStarEngine::generate(dim, opts.prune)?);
            Arc::new(JamesEngine::new(base))
        }
        other => {
            return Err(Error::parse(
                format!("space `{other}`"),
                "expected l1, l2, linf, tstar, jtstar",
            ))
        }
    };
    basis_summing_map(ground, k, metric, codomain)
}

/// One CSV row per `(space, k)`; schema
/// `space,k,ground,l,mode,lipschitz,min_diameter,ratio,witness,elapsed_ms`
/// with rationals printed as `num/den`. With `include_timing = false` the
/// elapsed cell is left empty so reruns are byte-identical.
pub fn concentration_sweep(
    config: &ExperimentConfig,
    opts: &EngineOptions,
    include_timing: bool,
) -> Result<String> {
    run_sweep(config, opts, include_timing, false)
}

/// Interlaced-pair sweep over the same configuration grammar.
pub fn interlaced_sweep(
    config: &ExperimentConfig,
    opts: &EngineOptions,
    include_timing: bool,
) -> Result<String> {
    run_sweep(config, opts, include_timing, true)
}

fn run_sweep(
    config: &ExperimentConfig,
    opts: &EngineOptions,
    include_timing: bool,
    interlaced: bool,
) -> Result<String> {
    let mut rows = Vec::new();
    for space in &config.spaces {
        for k in config.k_range.0..=config.k_range.1 {
            if k == 0 {
                return Err(Error::Config {
                    line: 0,
                    message: "k must be at least 1".into(),
                });
            }
            let ground = config.ground_for(space, k, interlaced)?;
            let map = space_map(space, ground, k, config.metric, opts)?;
            let report = if interlaced {
                interlaced_report(&map, space)?
            } else {
                let l = config.subset_size_for(k);
                if l < k {
                    return Err(Error::Config {
                        line: 0,
                        message: format!("subset_size {l} is smaller than k = {k}"),
                    });
                }
                let mut r = match config.mode {
                    SearchMode::Exact => exact_min_diameter(&map, l, config.limit_subsets)?,
                    SearchMode::GreedyOscillation | SearchMode::GreedyDiameter => {
                        greedy_extraction(&map, l, config.mode)?
                    }
                    SearchMode::Interlaced => unreachable!("handled above"),
                };
                r.space = space.clone();
                r
            };
            rows.push(report);
        }
    }
    Ok(render_csv(&rows, include_timing))
}

fn csv_field(text: &str) -> String {
    if text.contains(',') || text.contains('"') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// Renders reports in the sweep CSV schema.
pub fn render_csv(rows: &[ConcentrationReport], include_timing: bool) -> String {
    let mut out =
        String::from("space,k,ground,l,mode,lipschitz,min_diameter,ratio,witness,elapsed_ms\n");
    for r in rows {
        let ratio = match r.ratio() {
            Some(v) => v.to_string(),
            None => "-".to_string(),
        };
        let elapsed = if include_timing {
            r.elapsed_ms.map(|e| e.to_string()).unwrap_or_default()
        } else {
            String::new()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            csv_field(&r.space),
            r.k,
            csv_field(&r.ground.to_string()),
            r.subset_size,
            r.mode.name(),
            r.lipschitz,
            r.min_diameter,
            ratio,
            csv_field(&r.witness),
            elapsed,
        ));
    }
    out
}

/// Shared empty-sweep shape: header only.
pub fn empty_csv() -> String {
    String::from("space,k,ground,l,mode,lipschitz,min_diameter,ratio,witness,elapsed_ms\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lipmaps::constant_map;
    use crate::scalar::Scalar;
    use crate::vector::FiniteVector;

    fn l1_map(k: usize, hi: u32) -> FiniteLipschitzMap {
        let ground = GroundSet::range(1, hi).unwrap();
        space_map(
            "l1",
            ground,
            k,
            Metric::Hamming,
            &EngineOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn diam_of_constant_map_is_zero() {
        let ground = GroundSet::range(1, 6).unwrap();
        let map = constant_map(
            ground.clone(),
            2,
            Metric::Hamming,
            FiniteVector::unit(1),
            Arc::new(LpEngine::new(LpKind::L1, 6)),
        )
        .unwrap();
        assert_eq!(diam_image(&map, &ground).unwrap(), NormValue::zero());
        let report = exact_min_diameter(&map, 3, 1_000_000).unwrap();
        assert!(report.min_diameter.is_zero());
        assert_eq!(report.witness, "{1,2,3}");
        assert_eq!(report.ratio(), None);
    }

    #[test]
    fn l1_summing_map_diameter_is_k() {
        for k in 1..=3usize {
            let map = l1_map(k, (2 * k + 2) as u32);
            let full = GroundSet::range(1, (2 * k + 2) as u32).unwrap();
            assert_eq!(
                diam_image(&map, &full).unwrap(),
                NormValue::exact(Scalar::from_int(k as i64))
            );
            // No subset of size 2k does better: disjoint pairs survive.
            let report = exact_min_diameter(&map, 2 * k, 1_000_000).unwrap();
            assert_eq!(
                report.min_diameter,
                NormValue::exact(Scalar::from_int(k as i64))
            );
        }
    }

    #[test]
    fn greedy_never_beats_exact() {
        let map = l1_map(2, 7);
        let exact = exact_min_diameter(&map, 4, 1_000_000).unwrap();
        for mode in [SearchMode::GreedyOscillation, SearchMode::GreedyDiameter] {
            let greedy = greedy_extraction(&map, 4, mode).unwrap();
            assert!(greedy.min_diameter >= exact.min_diameter);
        }
    }

    #[test]
    fn monotone_in_subset_size() {
        let map = l1_map(2, 7);
        let mut last: Option<NormValue> = None;
        for l in 2..=7 {
            let r = exact_min_diameter(&map, l, 1_000_000).unwrap();
            if let Some(prev) = last {
                assert!(prev <= r.min_diameter, "smaller subsets give more freedom");
            }
            last = Some(r.min_diameter);
        }
    }

    #[test]
    fn resource_guard_refuses_large_searches() {
        let map = l1_map(2, 8);
        assert!(matches!(
            exact_min_diameter(&map, 4, 10),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn interlaced_diameter_of_l1_summing_is_k() {
        for k in 2..=4usize {
            let map = l1_map(k, (2 * k + 2) as u32);
            let (d, witness) = interlaced_diameter(&map).unwrap();
            assert_eq!(d, NormValue::exact(Scalar::from_int(k as i64)));
            assert!(witness.contains('|'));
        }
    }

    #[test]
    fn interlaced_needs_room() {
        let map = l1_map(3, 5);
        assert!(matches!(
            interlaced_diameter(&map),
            Err(Error::NoInterlacedPairs)
        ));
    }

    #[test]
    fn config_parsing_and_validation() {
        let cfg = ExperimentConfig::parse(
            "# contrast experiment\nspaces = l1, tstar\nk_range = 2..3\nground = auto\n\
             subset_size = 2k\nmode = exact\nmetric = hamming\nlimit_subsets = 500000\noutput = out.csv\n",
        )
        .unwrap();
        assert_eq!(cfg.spaces, vec!["l1".to_string(), "tstar".to_string()]);
        assert_eq!(cfg.k_range, (2, 3));
        assert_eq!(cfg.ground, GroundChoice::Auto);
        assert_eq!(cfg.mode, SearchMode::Exact);
        assert_eq!(cfg.output, "out.csv");

        let err = ExperimentConfig::parse("spaces = l1\nk_range = 2..3\nbogus = 1\n");
        match err {
            Err(Error::Config { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected config error, got {other:?}"),
        }

        let err = ExperimentConfig::parse("spaces = warp\nk_range = 2..3\n");
        assert!(matches!(err, Err(Error::Config { line: 1, .. })));
    }

    #[test]
    fn subset_size_below_k_is_rejected() {
        let cfg = ExperimentConfig::parse(
            "spaces = l1\nk_range = 3..3\nground = 1..8\nsubset_size = 2\n",
        )
        .unwrap();
        let err = concentration_sweep(&cfg, &EngineOptions::default(), false);
        assert!(matches!(err, Err(Error::Config { .. })));
    }

    #[test]
    fn empty_k_range_gives_header_only_csv() {
        let cfg =
            ExperimentConfig::parse("spaces = l1\nk_range = 3..2\nground = 1..6\n").unwrap();
        let csv = concentration_sweep(&cfg, &EngineOptions::default(), false).unwrap();
        assert_eq!(csv, empty_csv());
        // Ground ranges must still be nonempty.
        assert!(matches!(
            ExperimentConfig::parse("spaces = l1\nk_range = 2..2\nground = 6..1\n"),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn exact_witness_diameter_recomputes() {
        // The spec instance: l1 summing map, k=3, M={1..8}, l=6.
        let map = l1_map(3, 8);
        let report = exact_min_diameter(&map, 6, 1_000_000).unwrap();
        assert_eq!(
            report.min_diameter,
            NormValue::exact(Scalar::from_int(3))
        );
        let witness = KSubset::parse(&report.witness).unwrap();
        let subset = GroundSet::new(witness.elements().to_vec()).unwrap();
        assert_eq!(diam_image(&map, &subset).unwrap(), report.min_diameter);
    }

    #[test]
    fn greedy_on_the_dual_instance_stays_small() {
        let ground = GroundSet::range(2, 11).unwrap();
        let map = space_map(
            "tstar",
            ground,
            2,
            Metric::Hamming,
            &EngineOptions::default(),
        )
        .unwrap();
        let exact = exact_min_diameter(&map, 4, 1_000_000).unwrap();
        for mode in [SearchMode::GreedyOscillation, SearchMode::GreedyDiameter] {
            let greedy = greedy_extraction(&map, 4, mode).unwrap();
            assert!(greedy.min_diameter >= exact.min_diameter);
            assert!(greedy.min_diameter <= NormValue::exact(Scalar::from_int(2)));
        }
    }

    #[test]
    fn interlaced_of_constant_map_is_zero() {
        let ground = GroundSet::range(1, 6).unwrap();
        let map = constant_map(
            ground,
            2,
            Metric::Hamming,
            FiniteVector::unit(1),
            Arc::new(LpEngine::new(LpKind::L1, 6)),
        )
        .unwrap();
        let (d, _) = interlaced_diameter(&map).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn sweeps_are_deterministic() {
        let cfg = ExperimentConfig::parse(
            "spaces = l1\nk_range = 2..2\nground = 1..6\nsubset_size = 4\nmode = exact\n",
        )
        .unwrap();
        let a = concentration_sweep(&cfg, &EngineOptions::default(), false).unwrap();
        let b = concentration_sweep(&cfg, &EngineOptions::default(), false).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("space,k,ground,l,mode,"));
        let row = a.lines().nth(1).unwrap();
        assert!(row.ends_with(','), "timing cell empty under no-timing: {row}");
    }
}
