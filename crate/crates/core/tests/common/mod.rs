//! Shared test oracles, all independent of the implementation paths they
//! check.

use combanach::scalar::Scalar;
use combanach::vector::FiniteVector;

/// Brute-force fixed-point evaluator of the implicit norm over
/// admissible families of ARBITRARY finite subsets (not just intervals),
/// for nonnegative dyadic vectors supported in `{1..6}` with entries in
/// `{0, 1/2, 1}`.
///
/// Values are exact dyadic rationals scaled by 2^SCALE in u32 (depth of
/// halving is bounded by the support size, so the scale never runs out).
/// The iteration starts from the sup-norm on every subset and applies
/// the defining recursion until it stabilizes; the fixed point is the
/// norm. Independent of the interval DP: different state space (masks),
/// different family enumeration (arbitrary subsets), different
/// arithmetic (scaled integers).
pub mod brute {
    pub const N: usize = 6;
    pub const SCALE: u32 = 1 << 10;

    /// Input: scaled coefficients for indices 1..=6 (0, SCALE/2, SCALE).
    /// Output: scaled norm.
    pub fn t_norm_scaled(coeffs: [u32; N]) -> u32 {
        let full: usize = (1 << N) - 1;
        // Sup-norm start.
        let mut value = vec![0u32; full + 1];
        for mask in 1..=full {
            let mut best = 0;
            for (i, &c) in coeffs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    best = best.max(c);
                }
            }
            value[mask] = best;
        }
        let mut iterations = 0;
        loop {
            iterations += 1;
            assert!(iterations <= N + 2, "fixed point not reached");
            let mut changed = false;
            let mut next = value.clone();
            for mask in 1..=full {
                let split = best_family_sum(&value, mask);
                let cand = value[mask].max(split / 2);
                if cand > next[mask] {
                    next[mask] = cand;
                    changed = true;
                }
            }
            value = next;
            if !changed {
                return value[full];
            }
        }
    }

    /// Max over admissible families of arbitrary nonempty subsets
    /// `E_1 < E_2 < ... < E_n` inside `mask` (successive as sets,
    /// `n <= min E_1`, 1-based indices) of the sum of subset values.
    fn best_family_sum(value: &[u32], mask: usize) -> u32 {
        let mut best = 0;
        // First part: any nonempty submask; its 1-based min bounds the
        // total number of parts.
        let mut first = mask;
        while first != 0 {
            let min_index = first.trailing_zeros() as usize + 1;
            let above = mask & !lower_mask(highest_bit(first) + 1);
            let sum = value[first] + extend(value, above, min_index - 1);
            best = best.max(sum);
            first = (first - 1) & mask;
        }
        best
    }

    /// Best continuation: up to `parts_left` more successive parts drawn
    /// from `allowed` (all indices above the previous part).
    fn extend(value: &[u32], allowed: usize, parts_left: usize) -> u32 {
        if parts_left == 0 || allowed == 0 {
            return 0;
        }
        let mut best = 0;
        let mut part = allowed;
        while part != 0 {
            let above = allowed & !lower_mask(highest_bit(part) + 1);
            let sum = value[part] + extend(value, above, parts_left - 1);
            best = best.max(sum);
            part = (part - 1) & allowed;
        }
        best
    }

    fn highest_bit(mask: usize) -> usize {
        usize::BITS as usize - 1 - mask.leading_zeros() as usize
    }

    fn lower_mask(bits: usize) -> usize {
        (1 << bits) - 1
    }
}

/// The same fixed-point evaluator over arbitrary subsets, in exact
/// rational arithmetic, for any nonnegative vector supported in
/// `{1..max_n}` (small `max_n` only; used on random rational inputs).
pub fn brute_t_norm_rational(v: &FiniteVector, max_n: usize) -> Scalar {
    assert!(max_n <= 8);
    let a = v.abs();
    let full: usize = (1 << max_n) - 1;
    let coeff = |i: usize| a.coeff(i as u32 + 1);
    let mut value = vec![Scalar::zero(); full + 1];
    for mask in 1..=full {
        let mut best = Scalar::zero();
        for i in 0..max_n {
            if mask & (1 << i) != 0 {
                best = best.max(coeff(i));
            }
        }
        value[mask] = best;
    }
    let mut iterations = 0;
    loop {
        iterations += 1;
        assert!(iterations <= max_n + 2, "fixed point not reached");
        let mut changed = false;
        let mut next = value.clone();
        for mask in 1..=full {
            let split = rational_best_family(&value, mask);
            let cand = next[mask].clone().max(split.half());
            if cand > next[mask] {
                next[mask] = cand;
                changed = true;
            }
        }
        value = next;
        if !changed {
            return value[full].clone();
        }
    }
}

fn rational_best_family(value: &[Scalar], mask: usize) -> Scalar {
    fn highest_bit(mask: usize) -> usize {
        usize::BITS as usize - 1 - mask.leading_zeros() as usize
    }
    fn extend(value: &[Scalar], allowed: usize, parts_left: usize) -> Scalar {
        if parts_left == 0 || allowed == 0 {
            return Scalar::zero();
        }
        let mut best = Scalar::zero();
        let mut part = allowed;
        while part != 0 {
            let above = allowed & !((1 << (highest_bit(part) + 1)) - 1);
            let sum = &value[part] + &extend(value, above, parts_left - 1);
            best = best.max(sum);
            part = (part - 1) & allowed;
        }
        best
    }
    let mut best = Scalar::zero();
    let mut first = mask;
    while first != 0 {
        let min_index = first.trailing_zeros() as usize + 1;
        let above = mask & !((1 << (highest_bit(first) + 1)) - 1);
        let sum = &value[first] + &extend(value, above, min_index - 1);
        best = best.max(sum);
        first = (first - 1) & mask;
    }
    best
}

/// Seeded random rational vectors for property-style checks.
pub struct VectorSampler {
    state: u64,
}

impl VectorSampler {
    pub fn new(seed: u64) -> Self {
        VectorSampler { state: seed }
    }

    fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    /// Random vector supported in `{1..max_n}` with numerators in
    /// `[-4, 4]` and denominators in `{1..4}`.
    pub fn vector(&mut self, max_n: u32) -> FiniteVector {
        let mut v = FiniteVector::zero();
        for i in 1..=max_n {
            if self.below(2) == 0 {
                continue;
            }
            let num = self.below(9) as i64 - 4;
            let den = self.below(4) as i64 + 1;
            v.set(i, Scalar::new(num, den));
        }
        v
    }

    /// Random sign pattern applied to the vector's support.
    pub fn flip_signs(&mut self, v: &FiniteVector) -> FiniteVector {
        let mut out = FiniteVector::zero();
        for (i, s) in v.iter() {
            let flipped = if self.below(2) == 0 { s.clone() } else { -s };
            out.set(i, flipped);
        }
        out
    }
}
