//! Finite Lipschitz maps from k-subsets into a norm engine codomain:
//! Lipschitz constants, compression/expansion moduli, coarse-Lipschitz
//! fits, and the canonical witness map constructors.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::combinatorics::{
    enumerate_ksubsets, hamming_distance, johnson_distance, GroundSet, KSubset,
};
use crate::engine::NormEngine;
use crate::error::Error;
use crate::scalar::Scalar;
use crate::value::NormValue;
use crate::vector::FiniteVector;
use crate::Result;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Metric {
    Hamming,
    Johnson,
}

impl Metric {
    pub fn distance(&self, a: &KSubset, b: &KSubset) -> Result<u32> {
        match self {
            Metric::Hamming => hamming_distance(a, b),
            Metric::Johnson => johnson_distance(a, b),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Hamming => "hamming",
            Metric::Johnson => "johnson",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "hamming" => Ok(Metric::Hamming),
            "johnson" => Ok(Metric::Johnson),
            other => Err(Error::parse(
                format!("metric `{other}`"),
                "expected hamming or johnson",
            )),
        }
    }
}

/// A total table from `[ground]^k` into a norm engine codomain.
pub struct FiniteLipschitzMap {
    ground: GroundSet,
    k: usize,
    metric: Metric,
    table: BTreeMap<KSubset, FiniteVector>,
    codomain: Arc<dyn NormEngine>,
}

impl FiniteLipschitzMap {
    /// Builds a map from an explicit table; the table must cover all of
    /// `[ground]^k` and every image must fit the codomain bound.
    pub fn new(
        ground: GroundSet,
        k: usize,
        metric: Metric,
        table: BTreeMap<KSubset, FiniteVector>,
        codomain: Arc<dyn NormEngine>,
    ) -> Result<Self> {
        let points = enumerate_ksubsets(&ground, k)?;
        for p in &points {
            let image = table
                .get(p)
                .ok_or_else(|| Error::parse(format!("map table at {p}"), "missing point"))?;
            if let Some(max) = image.max_index() {
                if max > codomain.dim_bound() {
                    return Err(Error::DimensionExceeded {
                        engine: codomain.name().to_string(),
                        support_max: max,
                        bound: codomain.dim_bound(),
                    });
                }
            }
        }
        if table.len() != points.len() {
            return Err(Error::parse(
                "map table",
                format!("{} entries for {} points", table.len(), points.len()),
            ));
        }
        Ok(FiniteLipschitzMap {
            ground,
            k,
            metric,
            table,
            codomain,
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn codomain(&self) -> &Arc<dyn NormEngine> {
        &self.codomain
    }

    pub fn image(&self, p: &KSubset) -> Option<&FiniteVector> {
        self.table.get(p)
    }

    pub fn points(&self) -> impl Iterator<Item = &KSubset> + '_ {
        self.table.keys()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Codomain distance between the images of two points.
    pub fn image_distance(&self, a: &KSubset, b: &KSubset) -> Result<NormValue> {
        let fa = self
            .table
            .get(a)
            .ok_or_else(|| Error::parse(format!("map point {a}"), "not in table"))?;
        let fb = self
            .table
            .get(b)
            .ok_or_else(|| Error::parse(format!("map point {b}"), "not in table"))?;
        self.codomain.evaluate(&fa.sub(fb))
    }

    /// Iterates all unordered pairs with their domain and codomain
    /// distances.
    pub fn for_each_pair<F>(&self, mut visit: F) -> Result<()>
    where
        F: FnMut(&KSubset, &KSubset, u32, &NormValue) -> Result<()>,
    {
        let points: Vec<&KSubset> = self.table.keys().collect();
        for (i, a) in points.iter().enumerate() {
            for b in points.iter().skip(i + 1) {
                let d = self.metric.distance(a, b)?;
                let dist = self.image_distance(a, b)?;
                visit(a, b, d, &dist)?;
            }
        }
        Ok(())
    }

    /// Exact Lipschitz constant: max over all pairs (not only adjacent
    /// ones) of codomain distance divided by domain distance.
    pub fn lip_constant(&self) -> Result<NormValue> {
        if self.table.len() < 2 {
            return Err(Error::DomainTooSmall {
                found: self.table.len(),
            });
        }
        let mut best = NormValue::zero();
        self.for_each_pair(|_, _, d, dist| {
            if d > 0 {
                let ratio = dist.div(&NormValue::exact(Scalar::from_int(d as i64)));
                best = best.clone().max(ratio);
            }
            Ok(())
        })?;
        Ok(best)
    }

    /// Compression modulus at `t`: the infimum of codomain distances over
    /// pairs at domain distance `>= t`; infimum over the empty set is
    /// plus infinity, kept as a distinguished value.
    pub fn compression_modulus(&self, t: &Scalar) -> Result<ModulusValue> {
        let mut best: Option<NormValue> = None;
        self.for_each_pair(|_, _, d, dist| {
            if &Scalar::from_int(d as i64) >= t {
                best = Some(match best.take() {
                    None => dist.clone(),
                    Some(b) => b.min(dist.clone()),
                });
            }
            Ok(())
        })?;
        // Pairs at distance 0 are only the identical diagonal ones, which
        // `for_each_pair` does not emit; the diagonal realizes distance 0.
        if !t.is_positive() {
            return Ok(ModulusValue::Finite(NormValue::zero()));
        }
        Ok(match best {
            Some(v) => ModulusValue::Finite(v),
            None => ModulusValue::Infinite,
        })
    }

    /// Expansion modulus at `t`: the supremum of codomain distances over
    /// pairs at domain distance `<= t`; supremum over the empty set is 0,
    /// and the diagonal always contributes 0.
    pub fn expansion_modulus(&self, t: &Scalar) -> Result<NormValue> {
        let mut best = NormValue::zero();
        self.for_each_pair(|_, _, d, dist| {
            if &Scalar::from_int(d as i64) <= t {
                best = best.clone().max(dist.clone());
            }
            Ok(())
        })?;
        Ok(best)
    }

    /// Moduli sampled at the given thresholds.
    pub fn moduli_profile(&self, thresholds: &[Scalar]) -> Result<ModuliProfile> {
        let mut rows = Vec::with_capacity(thresholds.len());
        for t in thresholds {
            rows.push(ModuliRow {
                threshold: t.clone(),
                compression: self.compression_modulus(t)?,
                expansion: self.expansion_modulus(t)?,
            });
        }
        Ok(ModuliProfile { rows })
    }

    /// The tightest coarse-Lipschitz constants over pairs at distance
    /// `>= theta` (and `> 0`): the min and max of the distance ratios.
    pub fn coarse_lipschitz_fit(&self, theta: &Scalar) -> Result<(NormValue, NormValue)> {
        let mut lo: Option<NormValue> = None;
        let mut hi: Option<NormValue> = None;
        self.for_each_pair(|_, _, d, dist| {
            if d > 0 && &Scalar::from_int(d as i64) >= theta {
                let ratio = dist.div(&NormValue::exact(Scalar::from_int(d as i64)));
                lo = Some(match lo.take() {
                    None => ratio.clone(),
                    Some(v) => v.min(ratio.clone()),
                });
                hi = Some(match hi.take() {
                    None => ratio,
                    Some(v) => v.max(ratio),
                });
            }
            Ok(())
        })?;
        match (lo, hi) {
            (Some(lo), Some(hi)) => Ok((lo, hi)),
            _ => Err(Error::NoQualifyingPairs {
                threshold: theta.to_string(),
            }),
        }
    }

    /// CSV rows of all pairwise distances:
    /// `pair,d_domain,d_codomain,ratio`.
    pub fn distances_csv(&self) -> Result<String> {
        let mut out = String::from("pair,d_domain,d_codomain,ratio\n");
        self.for_each_pair(|a, b, d, dist| {
            let ratio = if d > 0 {
                dist.div(&NormValue::exact(Scalar::from_int(d as i64)))
                    .to_string()
            } else {
                "-".to_string()
            };
            out.push_str(&format!("{a}|{b},{d},{dist},{ratio}\n"));
            Ok(())
        })?;
        Ok(out)
    }
}

/// Modulus value with a distinguished plus-infinity (the `inf` of an
/// empty set), never a sentinel number.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ModulusValue {
    Finite(NormValue),
    Infinite,
}

impl fmt::Display for ModulusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModulusValue::Finite(v) => write!(f, "{v}"),
            ModulusValue::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModuliRow {
    pub threshold: Scalar,
    pub compression: ModulusValue,
    pub expansion: NormValue,
}

#[derive(Clone, Debug)]
pub struct ModuliProfile {
    pub rows: Vec<ModuliRow>,
}

impl ModuliProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,rho,omega\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.threshold, r.compression, r.expansion));
        }
        out
    }
}

/// `f(m) = 1/2 (x_{m_1} + ... + x_{m_k})` for per-element images `x_n`.
/// With images in the codomain unit ball the map is 1-Lipschitz.
pub fn summing_map(
    ground: GroundSet,
    k: usize,
    metric: Metric,
    images: &BTreeMap<u32, FiniteVector>,
    codomain: Arc<dyn NormEngine>,
) -> Result<FiniteLipschitzMap> {
    for &g in ground.elements() {
        if !images.contains_key(&g) {
            return Err(Error::parse(
                format!("summing map image for {g}"),
                "missing basis image",
            ));
        }
    }
    let half = Scalar::new(1, 2);
    let mut table = BTreeMap::new();
    for p in enumerate_ksubsets(&ground, k)? {
        let mut acc = FiniteVector::zero();
        for &m in p.elements() {
            acc = acc.add(&images[&m]);
        }
        table.insert(p, acc.scale(&half));
    }
    FiniteLipschitzMap::new(ground, k, metric, table, codomain)
}

/// `f(m) = 1/2 (x^(1)_{m_1} + ... + x^(k)_{m_k})`: row `i` of the array
/// is evaluated at the i-th element.
pub fn array_map(
    ground: GroundSet,
    k: usize,
    metric: Metric,
    rows: &[BTreeMap<u32, FiniteVector>],
    codomain: Arc<dyn NormEngine>,
) -> Result<FiniteLipschitzMap> {
    if rows.len() != k {
        return Err(Error::parse(
            "array map",
            format!("{} rows for k = {k}", rows.len()),
        ));
    }
    for (i, row) in rows.iter().enumerate() {
        for &g in ground.elements() {
            if !row.contains_key(&g) {
                return Err(Error::parse(
                    format!("array map row {} at {g}", i + 1),
                    "missing entry",
                ));
            }
        }
    }
    let half = Scalar::new(1, 2);
    let mut table = BTreeMap::new();
    for p in enumerate_ksubsets(&ground, k)? {
        let mut acc = FiniteVector::zero();
        for (i, &m) in p.elements().iter().enumerate() {
            acc = acc.add(&rows[i][&m]);
        }
        table.insert(p, acc.scale(&half));
    }
    FiniteLipschitzMap::new(ground, k, metric, table, codomain)
}

/// The canonical basis images `x_n = e_n`.
pub fn basis_images(ground: &GroundSet) -> BTreeMap<u32, FiniteVector> {
    ground
        .elements()
        .iter()
        .map(|&n| (n, FiniteVector::unit(n)))
        .collect()
}

/// Named summing map over the canonical basis of the codomain.
pub fn basis_summing_map(
    ground: GroundSet,
    k: usize,
    metric: Metric,
    codomain: Arc<dyn NormEngine>,
) -> Result<FiniteLipschitzMap> {
    let images = basis_images(&ground);
    summing_map(ground, k, metric, &images, codomain)
}

/// A constant map (image diameter zero), useful as a degenerate witness.
pub fn constant_map(
    ground: GroundSet,
    k: usize,
    metric: Metric,
    value: FiniteVector,
    codomain: Arc<dyn NormEngine>,
) -> Result<FiniteLipschitzMap> {
    let mut table = BTreeMap::new();
    for p in enumerate_ksubsets(&ground, k)? {
        table.insert(p, value.clone());
    }
    FiniteLipschitzMap::new(ground, k, metric, table, codomain)
}

// ---------------------------------------------------------------------------
// Map file format
// ---------------------------------------------------------------------------

/// Writes the map file format: a header line
/// `k=<k> metric=<hamming|johnson> codomain=<name> ground={...}` followed
/// by one `{m1,...,mk} -> i1:num/den i2:num/den ...` line per point.
pub fn write_map<W: Write>(mut w: W, map: &FiniteLipschitzMap) -> Result<()> {
    writeln!(
        w,
        "k={} metric={} codomain={} ground={}",
        map.k,
        map.metric.name(),
        map.codomain.name(),
        map.ground
    )?;
    for (p, image) in &map.table {
        let entries: Vec<String> = image.iter().map(|(i, s)| format!("{i}:{s}")).collect();
        writeln!(w, "{p} -> {}", entries.join(" "))?;
    }
    Ok(())
}

/// Reads the map file format back; the codomain engine is rebuilt from
/// its recorded name with the dimension inferred from the images and the
/// ground set.
pub fn read_map<R: BufRead>(r: R, opts: &crate::engine::EngineOptions) -> Result<FiniteLipschitzMap> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse("map file", "empty file"))?;
    let header = header?;
    let mut k: Option<usize> = None;
    let mut metric: Option<Metric> = None;
    let mut codomain_name: Option<String> = None;
    let mut ground: Option<GroundSet> = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::parse("map header", format!("bad field `{field}`")))?;
        match key {
            "k" => {
                k = Some(value.parse().map_err(|e| {
                    Error::parse("map header", format!("bad k `{value}`: {e}"))
                })?)
            }
            "metric" => metric = Some(Metric::parse(value)?),
            "codomain" => codomain_name = Some(value.to_string()),
            "ground" => {
                let parsed = KSubset::parse(value)?;
                ground = Some(GroundSet::new(parsed.elements().to_vec())?);
            }
            other => {
                return Err(Error::parse(
                    "map header",
                    format!("unknown field `{other}`"),
                ))
            }
        }
    }
    let k = k.ok_or_else(|| Error::parse("map header", "missing k"))?;
    let metric = metric.ok_or_else(|| Error::parse("map header", "missing metric"))?;
    let codomain_name =
        codomain_name.ok_or_else(|| Error::parse("map header", "missing codomain"))?;
    let ground = ground.ok_or_else(|| Error::parse("map header", "missing ground"))?;

    let mut table = BTreeMap::new();
    let mut max_support = ground.max().unwrap_or(1);
    for (lineno, line) in lines {
        let line = line?;
        let loc = format!("line {}", lineno + 1);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (point_txt, entries_txt) = trimmed
            .split_once("->")
            .ok_or_else(|| Error::parse(&loc, "expected `{...} -> entries`"))?;
        let point = KSubset::parse(point_txt.trim())?;
        let mut image = FiniteVector::zero();
        for tok in entries_txt.split_whitespace() {
            let (i, v) = tok
                .split_once(':')
                .ok_or_else(|| Error::parse(&loc, format!("bad entry `{tok}`")))?;
            let index: u32 = i
                .parse()
                .map_err(|e| Error::parse(&loc, format!("bad index `{i}`: {e}")))?;
            image.add_entry(index, &v.parse()?)?;
        }
        if let Some(max) = image.max_index() {
            max_support = max_support.max(max);
        }
        table.insert(point, image);
    }
    let codomain = crate::engine::engine_by_name(&codomain_name, max_support, opts)?;
    FiniteLipschitzMap::new(ground, k, metric, table, codomain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{LpEngine, LpKind};

    fn l1(dim: u32) -> Arc<dyn NormEngine> {
        Arc::new(LpEngine::new(LpKind::L1, dim))
    }

    fn ks(xs: &[u32]) -> KSubset {
        KSubset::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn constant_map_has_zero_lip() {
        let ground = GroundSet::range(1, 5).unwrap();
        let map = constant_map(
            ground,
            2,
            Metric::Hamming,
            FiniteVector::unit(1),
            l1(5),
        )
        .unwrap();
        assert_eq!(map.lip_constant().unwrap(), NormValue::zero());
        let (c1, c2) = map.coarse_lipschitz_fit(&Scalar::one()).unwrap();
        assert_eq!(c1, NormValue::zero());
        assert_eq!(c2, NormValue::zero());
    }

    #[test]
    fn summing_map_into_l1_is_sharp() {
        let ground = GroundSet::range(1, 6).unwrap();
        let map = basis_summing_map(ground, 2, Metric::Hamming, l1(6)).unwrap();
        assert_eq!(
            map.lip_constant().unwrap(),
            NormValue::exact(Scalar::one())
        );
        let (c1, c2) = map.coarse_lipschitz_fit(&Scalar::one()).unwrap();
        // Moving one element changes the half-sum by exactly 1 in l1 only
        // when the sets stay otherwise equal; overlapping shifts divide it.
        assert_eq!(c2, NormValue::exact(Scalar::one()));
        assert!(c1 <= c2);
    }

    #[test]
    fn disjoint_pairs_realize_hamming_distance_in_l1() {
        let ground = GroundSet::range(1, 8).unwrap();
        for k in 1..=3usize {
            let map = basis_summing_map(ground.clone(), k, Metric::Hamming, l1(8)).unwrap();
            map.for_each_pair(|a, b, _, dist| {
                let disjoint = a.elements().iter().all(|x| !b.contains(*x));
                if disjoint {
                    assert_eq!(*dist, NormValue::exact(Scalar::from_int(k as i64)));
                }
                Ok(())
            })
            .unwrap();
        }
    }

    #[test]
    fn summing_map_image_distance_is_the_johnson_distance() {
        // Half-sums of basis vectors cancel on the overlap, so the l1
        // image distance equals the Johnson distance identically; it
        // matches the Hamming distance exactly on disjoint pairs. Under
        // the Johnson metric the map is therefore an isometry and its
        // coarse fit is (1, 1) at every threshold.
        use crate::combinatorics::johnson_distance;
        let ground = GroundSet::range(1, 8).unwrap();
        for k in 1..=3usize {
            let map = basis_summing_map(ground.clone(), k, Metric::Johnson, l1(8)).unwrap();
            map.for_each_pair(|a, b, d, dist| {
                assert_eq!(d, johnson_distance(a, b).unwrap());
                assert_eq!(*dist, NormValue::exact(Scalar::from_int(d as i64)));
                Ok(())
            })
            .unwrap();
            let (c1, c2) = map.coarse_lipschitz_fit(&Scalar::one()).unwrap();
            assert_eq!(c1, NormValue::exact(Scalar::one()));
            assert_eq!(c2, NormValue::exact(Scalar::one()));
            let (c1, c2) = map.coarse_lipschitz_fit(&Scalar::zero()).unwrap();
            assert_eq!((c1, c2), (NormValue::exact(Scalar::one()), NormValue::exact(Scalar::one())));
        }
    }

    #[test]
    fn identity_style_map_moduli() {
        // f({i}) = i * e_1 on k = 1: domain and codomain distances agree.
        let ground = GroundSet::range(1, 5).unwrap();
        let mut table = BTreeMap::new();
        for p in enumerate_ksubsets(&ground, 1).unwrap() {
            let i = p.elements()[0];
            table.insert(p, FiniteVector::unit(1).scale(&Scalar::from_int(i as i64)));
        }
        let map = FiniteLipschitzMap::new(ground, 1, Metric::Hamming, table, l1(1)).unwrap();
        // On k=1 every distinct pair has Hamming distance exactly 1, but
        // image distances range over |i-j|.
        assert_eq!(
            map.compression_modulus(&Scalar::one()).unwrap(),
            ModulusValue::Finite(NormValue::exact(Scalar::one()))
        );
        assert_eq!(
            map.expansion_modulus(&Scalar::one()).unwrap(),
            NormValue::exact(Scalar::from_int(4))
        );
        let (c1, c2) = map.coarse_lipschitz_fit(&Scalar::zero()).unwrap();
        assert_eq!(c1, NormValue::exact(Scalar::one()));
        assert_eq!(c2, NormValue::exact(Scalar::from_int(4)));
    }

    #[test]
    fn moduli_empty_set_conventions() {
        let ground = GroundSet::range(1, 5).unwrap();
        let map = basis_summing_map(ground, 2, Metric::Hamming, l1(5)).unwrap();
        // t > k: no pairs at distance >= t.
        assert_eq!(
            map.compression_modulus(&Scalar::from_int(3)).unwrap(),
            ModulusValue::Infinite
        );
        // t = 0: only the diagonal qualifies.
        assert_eq!(
            map.expansion_modulus(&Scalar::zero()).unwrap(),
            NormValue::zero()
        );
        assert_eq!(
            map.compression_modulus(&Scalar::zero()).unwrap(),
            ModulusValue::Finite(NormValue::zero())
        );
    }

    #[test]
    fn sandwich_inequality_everywhere() {
        let ground = GroundSet::range(1, 6).unwrap();
        let map = basis_summing_map(ground, 2, Metric::Hamming, l1(6)).unwrap();
        map.for_each_pair(|_, _, d, dist| {
            let t = Scalar::from_int(d as i64);
            match map.compression_modulus(&t).unwrap() {
                ModulusValue::Finite(rho) => assert!(&rho <= dist),
                ModulusValue::Infinite => panic!("realized distance cannot be empty"),
            }
            let omega = map.expansion_modulus(&t).unwrap();
            assert!(dist <= &omega);
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn array_map_with_identical_rows_is_the_summing_map() {
        let ground = GroundSet::range(1, 5).unwrap();
        let images = basis_images(&ground);
        let rows = vec![images.clone(), images.clone()];
        let a = array_map(ground.clone(), 2, Metric::Hamming, &rows, l1(5)).unwrap();
        let s = summing_map(ground, 2, Metric::Hamming, &images, l1(5)).unwrap();
        for p in s.points() {
            assert_eq!(a.image(p), s.image(p));
        }
    }

    #[test]
    fn array_map_with_disjoint_blocks_realizes_hamming_exactly() {
        // Row i maps column j to e_{(i-1)|M| + j}: all rows disjointly
        // supported, so image distances count differing positions.
        for k in 1..=3usize {
            let m = 6u32;
            let ground = GroundSet::range(1, m).unwrap();
            let rows: Vec<BTreeMap<u32, FiniteVector>> = (0..k)
                .map(|i| {
                    ground
                        .elements()
                        .iter()
                        .map(|&j| (j, FiniteVector::unit(i as u32 * m + j)))
                        .collect()
                })
                .collect();
            let map = array_map(
                ground,
                k,
                Metric::Hamming,
                &rows,
                l1(k as u32 * m),
            )
            .unwrap();
            map.for_each_pair(|_, _, d, dist| {
                assert_eq!(*dist, NormValue::exact(Scalar::from_int(d as i64)));
                Ok(())
            })
            .unwrap();
            assert_eq!(map.lip_constant().unwrap(), NormValue::exact(Scalar::one()));
        }
    }

    #[test]
    fn array_map_with_constant_first_row() {
        let ground = GroundSet::range(1, 4).unwrap();
        let constant_row: BTreeMap<u32, FiniteVector> = ground
            .elements()
            .iter()
            .map(|&j| (j, FiniteVector::unit(1)))
            .collect();
        let second_row: BTreeMap<u32, FiniteVector> = ground
            .elements()
            .iter()
            .map(|&j| (j, FiniteVector::unit(1 + j)))
            .collect();
        let map = array_map(
            ground,
            2,
            Metric::Hamming,
            &[constant_row, second_row],
            l1(5),
        )
        .unwrap();
        // Distances depend only on the second coordinate.
        map.for_each_pair(|a, b, _, dist| {
            let same_second = a.elements()[1] == b.elements()[1];
            if same_second {
                assert!(dist.is_zero());
            } else {
                assert_eq!(*dist, NormValue::exact(Scalar::one()));
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn map_file_round_trip() {
        let ground = GroundSet::range(1, 5).unwrap();
        let map = basis_summing_map(ground, 2, Metric::Hamming, l1(5)).unwrap();
        let mut buf = Vec::new();
        write_map(&mut buf, &map).unwrap();
        let opts = crate::engine::EngineOptions::default();
        let loaded = read_map(&buf[..], &opts).unwrap();
        assert_eq!(loaded.k(), 2);
        assert_eq!(loaded.metric(), Metric::Hamming);
        assert_eq!(loaded.codomain().name(), "l1");
        for p in map.points() {
            assert_eq!(loaded.image(p), map.image(p));
        }
        let mut buf2 = Vec::new();
        write_map(&mut buf2, &loaded).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn distances_csv_has_ratio_column() {
        let ground = GroundSet::range(1, 4).unwrap();
        let map = basis_summing_map(ground, 2, Metric::Hamming, l1(4)).unwrap();
        let csv = map.distances_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "pair,d_domain,d_codomain,ratio");
        let first = lines.next().unwrap();
        assert!(first.starts_with("{1,2}|{1,3},1,"), "line was {first}");
    }

    #[test]
    fn lip_constant_requires_two_points() {
        let ground = GroundSet::range(1, 2).unwrap();
        let map = constant_map(
            ground,
            2,
            Metric::Hamming,
            FiniteVector::zero(),
            l1(2),
        )
        .unwrap();
        assert!(matches!(
            map.lip_constant(),
            Err(Error::DomainTooSmall { .. })
        ));
        let _ = ks(&[1, 2]);
    }
}
