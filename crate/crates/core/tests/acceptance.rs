//! Acceptance suite. One test per criterion; each prints a single
//! `criterion N: PASS/FAIL` line with its headline numbers and enforces
//! its runtime budget. Criterion 8 (CLI determinism) lives in the CLI
//! crate's acceptance target.

mod common;

use std::collections::HashMap;
use std::sync::OnceLock;
use std::time::Instant;

use combanach::combinatorics::{
    enumerate_interlaced_pairs, enumerate_ksubsets, hamming_distance, is_interlaced,
    johnson_distance, GroundSet, KSubset,
};
use combanach::concentration::{exact_min_diameter, interlaced_report, space_map};
use combanach::dualnorm::{gauge_norm_verified, PolyhedralNormDescription};
use combanach::engine::EngineOptions;
use combanach::lipmaps::{basis_summing_map, FiniteLipschitzMap, Metric, ModulusValue};
use combanach::scalar::Scalar;
use combanach::tsirelson::{generate_norming_set, t_norm, NormingSet};
use combanach::value::NormValue;
use combanach::vector::FiniteVector;
use common::{brute, VectorSampler};

fn norming_set_10() -> &'static NormingSet {
    static SET: OnceLock<NormingSet> = OnceLock::new();
    SET.get_or_init(|| generate_norming_set(10, true, 10_000_000).unwrap())
}

fn tstar_cached(mask: u16, cache: &mut HashMap<u16, Scalar>, desc: &PolyhedralNormDescription) -> Scalar {
    if let Some(hit) = cache.get(&mask) {
        return hit.clone();
    }
    let mut v = FiniteVector::zero();
    for i in 0..10u16 {
        if mask & (1 << i) != 0 {
            v.set(i as u32 + 1, Scalar::one());
        }
    }
    let value = combanach::dualnorm::gauge_norm(&v, desc).unwrap().0;
    cache.insert(mask, value.clone());
    value
}

struct Budget {
    criterion: u32,
    start: Instant,
    limit_s: u64,
}

impl Budget {
    fn new(criterion: u32, limit_s: u64) -> Self {
        Budget {
            criterion,
            start: Instant::now(),
            limit_s,
        }
    }

    fn pass(self, detail: &str) {
        let elapsed = self.start.elapsed();
        println!(
            "criterion {}: PASS ({detail}; {:.2}s of {}s budget)",
            self.criterion,
            elapsed.as_secs_f64(),
            self.limit_s
        );
        assert!(
            elapsed.as_secs() < self.limit_s,
            "criterion {} exceeded its {}s budget",
            self.criterion,
            self.limit_s
        );
    }
}

/// Criterion 1: the interval DP equals the brute-force evaluator over
/// admissible families of arbitrary subsets, for all 4^6 vectors with
/// entries in {-1, 0, 1/2, 1} supported in {1..6}.
#[test]
fn criterion_1_oracle_equivalence() {
    let budget = Budget::new(1, 60);
    let mut oracle_memo: HashMap<[u32; brute::N], u32> = HashMap::new();
    let mut count = 0u32;
    let entries = [0i32, 2, 1, -2]; // halves: 0, 1, 1/2, -1
    let mut choice = [0usize; brute::N];
    loop {
        let mut v = FiniteVector::zero();
        let mut scaled = [0u32; brute::N];
        for i in 0..brute::N {
            let halves = entries[choice[i]];
            if halves != 0 {
                v.set(i as u32 + 1, Scalar::new(halves as i64, 2));
                scaled[i] = (halves.unsigned_abs() * brute::SCALE / 2) as u32;
            }
        }
        let expected = *oracle_memo
            .entry(scaled)
            .or_insert_with(|| brute::t_norm_scaled(scaled));
        assert_eq!(
            t_norm(&v),
            Scalar::new(expected as i64, brute::SCALE as i64),
            "vector {v:?}"
        );
        count += 1;
        // Advance the mixed-radix counter.
        let mut pos = 0;
        loop {
            if pos == brute::N {
                assert_eq!(count, 4096);
                budget.pass(&format!("{count} vectors, {} oracle patterns", oracle_memo.len()));
                return;
            }
            choice[pos] += 1;
            if choice[pos] < entries.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Criterion 2: normalization of the basis vectors up to index 12, and
/// exact sign-invariance on 200 random rational vectors in {1..10}.
#[test]
fn criterion_2_normalization_and_unconditionality() {
    let budget = Budget::new(2, 30);
    for i in 1..=12 {
        assert_eq!(t_norm(&FiniteVector::unit(i)), Scalar::one());
    }
    let mut sampler = VectorSampler::new(2024);
    for _ in 0..200 {
        let v = sampler.vector(10);
        let flipped = sampler.flip_signs(&v);
        assert_eq!(t_norm(&v), t_norm(&flipped), "{v:?}");
    }
    budget.pass("12 basis vectors, 200 sign-flipped samples");
}

/// Criterion 3: the dual block estimate at finite scale, exhaustively
/// over block decompositions of 0/1 vectors supported in {1..10} with
/// n <= min supp(x_1): ||sum x_j|| <= 2 max_j ||x_j||.
#[test]
fn criterion_3_block_estimate() {
    let desc = PolyhedralNormDescription::from_norming_set(norming_set_10());
    let budget = Budget::new(3, 600);
    let mut cache: HashMap<u16, Scalar> = HashMap::new();
    let full: u16 = (1 << 10) - 1;
    let two = Scalar::from_int(2);
    let mut families = 0u64;

    // Enumerate families of successive nonempty subsets (as sets) with
    // n <= min of the first part, 1-based.
    fn rec(
        parts: &mut Vec<u16>,
        union: u16,
        max_so_far: u16,
        cap: usize,
        full: u16,
        visit: &mut dyn FnMut(&[u16], u16),
    ) {
        if !parts.is_empty() {
            visit(parts, union);
        }
        if parts.len() == cap {
            return;
        }
        // Next part: any nonempty submask of the indices above max_so_far.
        let above = full & !((1u32 << (max_so_far + 1)) as u16).wrapping_sub(1);
        let mut sub = above;
        while sub != 0 {
            let hi = 15 - sub.leading_zeros() as u16;
            parts.push(sub);
            rec(parts, union | sub, hi, cap, full, visit);
            parts.pop();
            sub = (sub - 1) & above;
        }
    }

    let mut first = full;
    while first != 0 {
        let min_index = first.trailing_zeros() as usize + 1; // 1-based
        let hi = 15 - first.leading_zeros() as u16;
        let mut parts = vec![first];
        rec(
            &mut parts,
            first,
            hi,
            min_index,
            full,
            &mut |parts: &[u16], union: u16| {
                families += 1;
                let lhs = tstar_cached(union, &mut cache, &desc);
                let mut max_part = Scalar::zero();
                for &p in parts {
                    max_part = max_part.max(tstar_cached(p, &mut cache, &desc));
                }
                assert!(
                    lhs <= &two * &max_part,
                    "block estimate fails for parts {parts:?}: {lhs} > 2 * {max_part}"
                );
            },
        );
        first = (first - 1) & full;
    }
    budget.pass(&format!(
        "{families} block families, {} distinct dual norms",
        cache.len()
    ));
}

/// Criterion 4: the duality pairing bound on 200 random pairs at N <= 8,
/// with exact strong duality checked on every dual solve.
#[test]
fn criterion_4_duality() {
    static SET8: OnceLock<NormingSet> = OnceLock::new();
    let set = SET8.get_or_init(|| generate_norming_set(8, true, 10_000_000).unwrap());
    let desc = PolyhedralNormDescription::from_norming_set(set);
    let budget = Budget::new(4, 300);
    let mut sampler = VectorSampler::new(4242);
    for round in 0..200 {
        let x = sampler.vector(8);
        let y = sampler.vector(8);
        // Verified solve: certificate reproduces |y| and sums to the
        // value; dual witness has t_norm <= 1 and pairing equal to the
        // value. That is exact primal = dual on every solve.
        let solved = gauge_norm_verified(&y, &desc).unwrap();
        let pairing = x.inner_product(&y);
        let bound = &t_norm(&x) * &solved.value;
        assert!(
            pairing <= bound,
            "round {round}: <x,y> = {pairing} > {bound}"
        );
    }
    budget.pass("200 random pairs, every solve verified primal = dual");
}

/// Criterion 5: concentration contrast. (a) The l1 summing map on
/// M = {1..2k+4} has exact min diameter k over l = 2k subsets; (b) the
/// basis map into the dual space on M = {k..k+9} has exact min diameter
/// <= 2 <= 8 = 2(B+2) Lip with B = 2 and Lip = 1.
#[test]
fn criterion_5_concentration_contrast() {
    let opts = EngineOptions::default();
    let budget = Budget::new(5, 900);
    let mut summary = Vec::new();
    for k in 2usize..=4 {
        let ground = GroundSet::range(1, 2 * k as u32 + 4).unwrap();
        let map = space_map("l1", ground, k, Metric::Hamming, &opts).unwrap();
        let report = exact_min_diameter(&map, 2 * k, 1_000_000).unwrap();
        assert_eq!(
            report.min_diameter,
            NormValue::exact(Scalar::from_int(k as i64)),
            "l1 k={k}"
        );
        assert_eq!(report.lipschitz, NormValue::exact(Scalar::one()), "l1 k={k}");
        summary.push(format!("l1 k={k}: {}", report.min_diameter));
    }
    let two = NormValue::exact(Scalar::from_int(2));
    for k in 2usize..=4 {
        let ground = GroundSet::range(k as u32, k as u32 + 9).unwrap();
        let map = space_map("tstar", ground, k, Metric::Hamming, &opts).unwrap();
        let report = exact_min_diameter(&map, 2 * k, 1_000_000).unwrap();
        assert_eq!(
            report.lipschitz,
            NormValue::exact(Scalar::one()),
            "tstar k={k} Lipschitz"
        );
        // min diameter <= 2 <= 8 = 2(B+2) * Lip with B = 2.
        assert!(
            report.min_diameter <= two,
            "tstar k={k}: min diameter {} > 2",
            report.min_diameter
        );
        summary.push(format!("tstar k={k}: {}", report.min_diameter));
    }
    budget.pass(&summary.join(", "));
}

/// Criterion 6: the interlaced-pair contrast on M = {1..2k+2}. The l1
/// half (ratio exactly k) holds; the James-over-dual half pins
/// ratio(k=3) <= ratio(k=2), which the exact values refute, so this
/// criterion fails and is expected to fail. The computed ratios are
/// recorded either way; see the verification notes in the repository
/// history for the analysis.
#[test]
fn criterion_6_interlaced_bound() {
    let opts = EngineOptions::default();
    let budget = Budget::new(6, 1200);
    let mut ratios: Vec<NormValue> = Vec::new();
    let mut recorded = Vec::new();
    for k in 2usize..=3 {
        let ground = GroundSet::range(1, 2 * k as u32 + 2).unwrap();
        let l1_map = space_map("l1", ground.clone(), k, Metric::Hamming, &opts).unwrap();
        let l1_report = interlaced_report(&l1_map, "l1").unwrap();
        let l1_ratio = l1_report.ratio().expect("nonconstant map");
        assert_eq!(
            l1_ratio,
            NormValue::exact(Scalar::from_int(k as i64)),
            "l1 interlaced ratio at k={k}"
        );

        let j_map = space_map("jtstar", ground, k, Metric::Hamming, &opts).unwrap();
        let j_report = interlaced_report(&j_map, "jtstar").unwrap();
        let j_ratio = j_report.ratio().expect("nonconstant map");
        recorded.push(format!("jtstar k={k}: {j_ratio}, l1 k={k}: {l1_ratio}"));
        ratios.push(j_ratio);
    }
    let detail = recorded.join("; ");
    if ratios[1] <= ratios[0] {
        budget.pass(&detail);
    } else {
        println!(
            "criterion 6: FAIL ({detail}; k=3 ratio exceeds k=2 ratio; {:.2}s)",
            budget.start.elapsed().as_secs_f64()
        );
        panic!(
            "interlaced ratio grows at the pinned instance: k=3 gives {} > {} at k=2 \
             (the l1 half of the criterion holds; both values recorded above)",
            ratios[1], ratios[0]
        );
    }
}

/// Criterion 7: metric axioms for both graph metrics, exhaustively for
/// k <= 3 and |M| <= 8, plus the moduli sandwich on every constructed
/// map, exhaustively over pairs.
#[test]
fn criterion_7_metrics_and_moduli() {
    let budget = Budget::new(7, 120);
    let mut checked_triples = 0u64;
    for m in 2u32..=8 {
        let ground = GroundSet::range(1, m).unwrap();
        for k in 1usize..=3.min(m as usize) {
            let points = enumerate_ksubsets(&ground, k).unwrap();
            for a in &points {
                for b in &points {
                    let dh = hamming_distance(a, b).unwrap();
                    let dj = johnson_distance(a, b).unwrap();
                    assert_eq!(dh == 0, a == b);
                    assert_eq!(dj == 0, a == b);
                    assert_eq!(dh, hamming_distance(b, a).unwrap());
                    assert_eq!(dj, johnson_distance(b, a).unwrap());
                    assert!(dj <= dh && dh <= k as u32);
                    if is_interlaced(a, b).unwrap() {
                        assert_eq!(dh, k as u32);
                        assert_eq!(dj, k as u32);
                    }
                    for c in &points {
                        let ac = hamming_distance(a, c).unwrap();
                        let cb = hamming_distance(c, b).unwrap();
                        assert!(dh <= ac + cb, "hamming triangle");
                        let jac = johnson_distance(a, c).unwrap();
                        let jcb = johnson_distance(c, b).unwrap();
                        assert!(dj <= jac + jcb, "johnson triangle");
                        checked_triples += 1;
                    }
                }
            }
            if 2 * k <= m as usize {
                // Interlaced pairs enumerate exactly the filter set.
                let pairs = enumerate_interlaced_pairs(&ground, k).unwrap();
                let filtered: usize = points
                    .iter()
                    .flat_map(|a| points.iter().map(move |b| (a, b)))
                    .filter(|(a, b)| is_interlaced(a, b).unwrap())
                    .count();
                assert_eq!(pairs.len(), filtered);
            }
        }
    }

    // Moduli sandwich on every constructed map shape.
    let opts = EngineOptions::default();
    let maps: Vec<FiniteLipschitzMap> = vec![
        space_map("l1", GroundSet::range(1, 6).unwrap(), 2, Metric::Hamming, &opts).unwrap(),
        space_map("linf", GroundSet::range(1, 6).unwrap(), 2, Metric::Johnson, &opts).unwrap(),
        space_map("l2", GroundSet::range(1, 5).unwrap(), 2, Metric::Hamming, &opts).unwrap(),
        space_map("tstar", GroundSet::range(2, 7).unwrap(), 2, Metric::Hamming, &opts).unwrap(),
        basis_summing_map(
            GroundSet::range(1, 5).unwrap(),
            2,
            Metric::Johnson,
            std::sync::Arc::new(combanach::engine::LpEngine::new(
                combanach::engine::LpKind::L1,
                5,
            )),
        )
        .unwrap(),
    ];
    let mut checked_pairs = 0u64;
    for map in &maps {
        map.for_each_pair(|_, _, d, dist| {
            let t = Scalar::from_int(d as i64);
            match map.compression_modulus(&t).unwrap() {
                ModulusValue::Finite(rho) => assert!(&rho <= dist, "compression sandwich"),
                ModulusValue::Infinite => panic!("realized distance declared unreachable"),
            }
            let omega = map.expansion_modulus(&t).unwrap();
            assert!(dist <= &omega, "expansion sandwich");
            checked_pairs += 1;
            Ok(())
        })
        .unwrap();
    }
    budget.pass(&format!(
        "{checked_triples} metric triples, {checked_pairs} sandwich pairs over {} maps",
        maps.len()
    ));
}
