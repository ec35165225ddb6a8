//! The implicitly defined norm of the space `T` and its finite norming
//! sets.
//!
//! The norm satisfies
//! `||x|| = max(||x||_inf, 1/2 sup sum_j ||E_j x||)` with the supremum
//! over admissible families `E_1 < ... < E_n`, `n <= min(E_1)`. The
//! evaluator restricts the `E_j` to intervals and runs a memoized dynamic
//! program over contiguous runs of support points; the reduction to
//! intervals is justified by suppression-unconditionality (enlarging a
//! set `E_j` inside its surrounding gap never decreases `||E_j x||` and
//! preserves admissibility) and is cross-checked in the test suite
//! against a brute-force evaluator that ranges over admissible families
//! of arbitrary finite subsets.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::RwLock;

use sha2::{Digest, Sha256};

use crate::engine::{check_support, NormEngine};
use crate::error::Error;
use crate::scalar::Scalar;
use crate::value::NormValue;
use crate::vector::FiniteVector;
use crate::Result;

/// A closed index interval `{lo, lo+1, ..., hi}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    lo: u32,
    hi: u32,
}

impl Interval {
    pub fn new(lo: u32, hi: u32) -> Result<Self> {
        if lo == 0 {
            return Err(Error::InvalidIndex);
        }
        if lo > hi {
            return Err(Error::parse(
                format!("interval [{lo},{hi}]"),
                "need lo <= hi",
            ));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> u32 {
        self.lo
    }

    pub fn hi(&self) -> u32 {
        self.hi
    }

    pub fn len(&self) -> u32 {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, i: u32) -> bool {
        self.lo <= i && i <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{{{}}}", self.lo)
        } else {
            write!(f, "{{{}..{}}}", self.lo, self.hi)
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// True iff the intervals are successive (`max E_j < min E_{j+1}`) and
/// admissible (`n <= min E_1`).
pub fn is_admissible(parts: &[Interval]) -> bool {
    if parts.is_empty() {
        return false;
    }
    let n = parts.len() as u32;
    if n > parts[0].lo {
        return false;
    }
    parts.windows(2).all(|w| w[0].hi < w[1].lo)
}

/// A sequence of successive intervals forming an admissible family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdmissibleFamily {
    parts: Vec<Interval>,
}

impl AdmissibleFamily {
    pub fn new(parts: Vec<Interval>) -> Result<Self> {
        if !is_admissible(&parts) {
            return Err(Error::parse(
                "admissible family",
                "intervals must be successive with n <= min of the first",
            ));
        }
        Ok(AdmissibleFamily { parts })
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }
}

/// How the norm of a vector is attained at the top level: either by a
/// single coordinate or by an admissible interval family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TNormWitness {
    SupCoordinate(u32),
    Family(Vec<Interval>),
}

struct Dp<'a> {
    points: &'a [u32],
    coeffs: &'a [Scalar],
    value: HashMap<(usize, usize), Scalar>,
    group: HashMap<(usize, usize, usize), Scalar>,
}

impl<'a> Dp<'a> {
    fn new(points: &'a [u32], coeffs: &'a [Scalar]) -> Self {
        Dp {
            points,
            coeffs,
            value: HashMap::new(),
            group: HashMap::new(),
        }
    }

    /// Norm of the restriction to support positions `i..=j`.
    fn value(&mut self, i: usize, j: usize) -> Scalar {
        if let Some(v) = self.value.get(&(i, j)) {
            return v.clone();
        }
        let mut best = Scalar::zero();
        for c in &self.coeffs[i..=j] {
            best = best.max(c.clone());
        }
        for (n, t) in split_starts(self.points, i, j) {
            let sum = self.best_grouping(t, j, n);
            best = best.max(sum.half());
        }
        self.value.insert((i, j), best.clone());
        best
    }

    /// Max over groupings of positions `t..=j` into `n` nonempty
    /// consecutive groups of the sum of group norms.
    fn best_grouping(&mut self, t: usize, j: usize, n: usize) -> Scalar {
        if n == 1 {
            return self.value(t, j);
        }
        if let Some(v) = self.group.get(&(t, j, n)) {
            return v.clone();
        }
        let mut best: Option<Scalar> = None;
        for c in t..=(j + 1 - n) {
            let s = self.value(t, c) + self.best_grouping(c + 1, j, n - 1);
            best = Some(match best {
                None => s,
                Some(b) => b.max(s),
            });
        }
        let best = best.expect("n <= j - t + 1");
        self.group.insert((t, j, n), best.clone());
        best
    }
}

/// For each admissible part count `n >= 2`, the first support position
/// `t >= i` whose index is `>= n`, provided at least `n` points remain.
fn split_starts(points: &[u32], i: usize, j: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in 2.. {
        let t = (i..=j).find(|&t| points[t] as usize >= n);
        match t {
            Some(t) if j - t + 1 >= n => out.push((n, t)),
            _ => break,
        }
    }
    out
}

/// The exact norm of `v` in `T`. The basis is 1-unconditional, so the
/// evaluation replaces `v` with its coordinatewise absolute value.
pub fn t_norm(v: &FiniteVector) -> Scalar {
    let a = v.abs();
    if a.is_zero() {
        return Scalar::zero();
    }
    let points: Vec<u32> = a.support().collect();
    let coeffs: Vec<Scalar> = points.iter().map(|i| a.coeff(*i)).collect();
    let m = points.len();
    Dp::new(&points, &coeffs).value(0, m - 1)
}

/// Like [`t_norm`], also returning how the top-level maximum is attained.
/// Among optimal interval families the support-minimal representative
/// with the lexicographically smallest flattened bound sequence is
/// returned; when a single coordinate already attains the norm, that
/// coordinate wins.
pub fn t_norm_with_witness(v: &FiniteVector) -> (Scalar, Option<TNormWitness>) {
    let a = v.abs();
    if a.is_zero() {
        return (Scalar::zero(), None);
    }
    let points: Vec<u32> = a.support().collect();
    let coeffs: Vec<Scalar> = points.iter().map(|i| a.coeff(*i)).collect();
    let m = points.len();
    let mut dp = Dp::new(&points, &coeffs);
    let norm = dp.value(0, m - 1);

    for (pos, c) in coeffs.iter().enumerate() {
        if *c == norm {
            return (norm, Some(TNormWitness::SupCoordinate(points[pos])));
        }
    }

    let mut best_family: Option<Vec<Interval>> = None;
    for (n, t) in split_starts(&points, 0, m - 1) {
        if dp.best_grouping(t, m - 1, n).half() != norm {
            continue;
        }
        // Reconstruct the lexicographically smallest optimal cut sequence.
        let mut cuts = Vec::new();
        let mut start = t;
        let mut remaining = n;
        while remaining > 1 {
            let target = dp.best_grouping(start, m - 1, remaining);
            for c in start..=(m - remaining) {
                let s = dp.value(start, c) + dp.best_grouping(c + 1, m - 1, remaining - 1);
                if s == target {
                    cuts.push(c);
                    start = c + 1;
                    break;
                }
            }
            remaining -= 1;
        }
        let mut family = Vec::with_capacity(n);
        let mut lo_pos = t;
        for &c in &cuts {
            family.push(Interval::new(points[lo_pos], points[c]).unwrap());
            lo_pos = c + 1;
        }
        family.push(Interval::new(points[lo_pos], points[m - 1]).unwrap());
        let better = match &best_family {
            None => true,
            Some(b) => flatten(&family) < flatten(b),
        };
        if better {
            best_family = Some(family);
        }
    }
    debug_assert!(best_family.is_some());
    (norm, best_family.map(TNormWitness::Family))
}

fn flatten(parts: &[Interval]) -> Vec<u32> {
    parts.iter().flat_map(|p| [p.lo, p.hi]).collect()
}

/// Norm engine for `T` with a synchronized cross-call cache keyed by the
/// absolute value of the input.
pub struct TsirelsonEngine {
    bound: u32,
    cache: RwLock<HashMap<FiniteVector, Scalar>>,
}

impl TsirelsonEngine {
    pub fn new(bound: u32) -> Self {
        TsirelsonEngine {
            bound,
            cache: RwLock::new(HashMap::new()),
        }
    }
}

impl NormEngine for TsirelsonEngine {
    fn name(&self) -> &str {
        "t"
    }

    fn dim_bound(&self) -> u32 {
        self.bound
    }

    fn evaluate(&self, v: &FiniteVector) -> Result<NormValue> {
        check_support("t", v, self.bound)?;
        let key = v.abs();
        if let Some(hit) = self.cache.read().unwrap().get(&key) {
            return Ok(NormValue::exact(hit.clone()));
        }
        let val = t_norm(&key);
        self.cache.write().unwrap().insert(key, val.clone());
        Ok(NormValue::exact(val))
    }
}

// ---------------------------------------------------------------------------
// Norming set generation
// ---------------------------------------------------------------------------

/// A nonnegative representative of a norming functional of `T`: dyadic
/// coefficients, together with the number of averaging steps used to
/// build it. Signed functionals are recovered by arbitrary sign patterns
/// and are never materialized.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Functional {
    coeffs: FiniteVector,
    depth: u32,
}

impl Functional {
    pub fn new(coeffs: FiniteVector, depth: u32) -> Self {
        Functional { coeffs, depth }
    }

    pub fn coeffs(&self) -> &FiniteVector {
        &self.coeffs
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn apply(&self, v: &FiniteVector) -> Scalar {
        self.coeffs.inner_product(v)
    }

    /// Canonical text form: sorted `(index:num/den)` pairs.
    pub fn to_line(&self) -> String {
        let mut line = String::new();
        for (n, (i, s)) in self.coeffs.iter().enumerate() {
            if n > 0 {
                line.push(' ');
            }
            line.push_str(&format!("({i}:{s})"));
        }
        line
    }

    pub fn parse_line(line: &str, loc: &str) -> Result<Self> {
        let mut coeffs = FiniteVector::zero();
        let mut max_den_log2 = 0u32;
        for tok in line.split_whitespace() {
            let inner = tok
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| Error::parse(loc, format!("bad pair `{tok}`")))?;
            let (idx, val) = inner
                .split_once(':')
                .ok_or_else(|| Error::parse(loc, format!("bad pair `{tok}`")))?;
            let index: u32 = idx
                .parse()
                .map_err(|e| Error::parse(loc, format!("bad index `{idx}`: {e}")))?;
            let value: Scalar = val.parse()?;
            if value.is_negative() || value.is_zero() {
                return Err(Error::parse(loc, "coefficients must be positive"));
            }
            if !value.is_dyadic() {
                return Err(Error::parse(loc, "coefficients must be dyadic"));
            }
            let bits = value.denom().bits().saturating_sub(1) as u32;
            max_den_log2 = max_den_log2.max(bits);
            if coeffs.get(index).is_some() {
                return Err(Error::parse(loc, format!("duplicate index {index}")));
            }
            coeffs.set(index, value);
        }
        if coeffs.is_zero() {
            return Err(Error::parse(loc, "empty functional"));
        }
        // Depth is not stored in the file; the number of halvings of the
        // finest coefficient reproduces it for generated sets.
        Ok(Functional::new(coeffs, max_den_log2))
    }
}

/// Total order used for canonical set output.
fn functional_cmp(a: &Functional, b: &Functional) -> std::cmp::Ordering {
    let av: Vec<(u32, &Scalar)> = a.coeffs.iter().collect();
    let bv: Vec<(u32, &Scalar)> = b.coeffs.iter().collect();
    av.cmp(&bv)
}

/// The norming set of `T` on supports inside `[lo..hi]`: the closure of
/// the coordinate functionals under admissible halved sums, optionally
/// reduced to its coordinatewise-maximal elements.
#[derive(Clone)]
pub struct NormingSet {
    lo: u32,
    dim: u32,
    prune: bool,
    functionals: Vec<Functional>,
}

impl NormingSet {
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn min_index(&self) -> u32 {
        self.lo
    }

    pub fn prune(&self) -> bool {
        self.prune
    }

    pub fn functionals(&self) -> &[Functional] {
        &self.functionals
    }

    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    /// `max_f <f, |x|>` over the set; equals [`t_norm`] for vectors
    /// supported in the generation range.
    pub fn support_norm(&self, x: &FiniteVector) -> Result<Scalar> {
        check_support("norming-set", x, self.dim)?;
        if let Some(min) = x.min_index() {
            if min < self.lo {
                return Err(Error::DimensionExceeded {
                    engine: "norming-set".into(),
                    support_max: min,
                    bound: self.lo,
                });
            }
        }
        let a = x.abs();
        let mut best = Scalar::zero();
        for f in &self.functionals {
            best = best.max(f.apply(&a));
        }
        Ok(best)
    }

    pub fn depth_histogram(&self) -> Vec<(u32, usize)> {
        let mut map: std::collections::BTreeMap<u32, usize> = Default::default();
        for f in &self.functionals {
            *map.entry(f.depth).or_default() += 1;
        }
        map.into_iter().collect()
    }
}

// Coefficients are dyadic with denominator at most 2^depth and depth is
// bounded by the generation span, so a fixed scale of 2^SHIFT in u32
// keeps all generation arithmetic in integers.
const SHIFT: u32 = 20;
const SCALE_ONE: u32 = 1 << SHIFT;

/// Dense scaled coefficients over the generation range, plus the build
/// depth. Offset 0 corresponds to index `lo`.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Packed {
    coeffs: Box<[u32]>,
}

impl Packed {
    fn unit(span: usize, offset: usize) -> Self {
        let mut coeffs = vec![0u32; span].into_boxed_slice();
        coeffs[offset] = SCALE_ONE;
        Packed { coeffs }
    }

    fn dominated_by(&self, other: &Packed) -> bool {
        self != other
            && self
                .coeffs
                .iter()
                .zip(other.coeffs.iter())
                .all(|(a, b)| a <= b)
    }
}

/// Keeps only maximal elements. Input lists that are already antichains
/// make this near linear in practice.
fn pareto(mut cands: Vec<Packed>) -> Vec<Packed> {
    cands.sort_by(|a, b| b.coeffs.cmp(&a.coeffs));
    cands.dedup();
    let mut keep: Vec<Packed> = Vec::with_capacity(cands.len());
    'outer: for c in cands {
        for k in &keep {
            if c.dominated_by(k) {
                continue 'outer;
            }
        }
        keep.retain(|k| !k.dominated_by(&c));
        keep.push(c);
    }
    keep
}

struct Generator {
    lo: u32,
    hi: u32,
    span: usize,
    prune: bool,
    limit: usize,
    /// roots[(a,b)] = functionals produced by a combination whose parts
    /// partition [a..b]; pruned per span when `prune`.
    roots: HashMap<(u32, u32), Vec<Packed>>,
    /// sub[(a,b)] = all functionals with support inside [a..b], pruned
    /// per interval when `prune`.
    sub: HashMap<(u32, u32), Vec<Packed>>,
    depths: HashMap<Packed, u32>,
    total: usize,
}

impl Generator {
    fn new(lo: u32, hi: u32, prune: bool, limit: usize) -> Self {
        Generator {
            lo,
            hi,
            span: (hi - lo + 1) as usize,
            prune,
            limit,
            roots: HashMap::new(),
            sub: HashMap::new(),
            depths: HashMap::new(),
            total: 0,
        }
    }

    fn record_depth(&mut self, f: &Packed, depth: u32) {
        match self.depths.get_mut(f) {
            Some(d) => {
                if depth < *d {
                    *d = depth;
                }
            }
            None => {
                self.depths.insert(f.clone(), depth);
                self.total += 1;
            }
        }
    }

    fn run(&mut self) -> Result<()> {
        // Length-1 sub lists: coordinate functionals.
        for i in self.lo..=self.hi {
            let f = Packed::unit(self.span, (i - self.lo) as usize);
            self.record_depth(&f, 0);
            self.sub.insert((i, i), vec![f]);
        }
        for len in 2..=(self.span as u32) {
            for a in self.lo..=(self.hi - len + 1) {
                let b = a + len - 1;
                self.build_roots(a, b)?;
            }
            for a in self.lo..=(self.hi - len + 1) {
                let b = a + len - 1;
                let mut cands: Vec<Packed> = Vec::new();
                cands.extend(self.sub[&(a, b - 1)].iter().cloned());
                cands.extend(self.sub[&(a + 1, b)].iter().cloned());
                if let Some(r) = self.roots.get(&(a, b)) {
                    cands.extend(r.iter().cloned());
                }
                let list = if self.prune {
                    pareto(cands)
                } else {
                    let mut c = cands;
                    c.sort_by(|x, y| x.coeffs.cmp(&y.coeffs));
                    c.dedup();
                    c
                };
                self.sub.insert((a, b), list);
            }
        }
        Ok(())
    }

    /// Combinations whose parts tile `[a..b]` into `n >= 2` consecutive
    /// intervals with `n <= a`.
    fn build_roots(&mut self, a: u32, b: u32) -> Result<()> {
        let len = b - a + 1;
        let max_n = (a.min(len)) as usize;
        if max_n < 2 {
            self.roots.insert((a, b), Vec::new());
            return Ok(());
        }
        let mut got: Vec<(Packed, u32)> = Vec::new();
        let mut parts: Vec<(u32, u32)> = Vec::new();
        for n in 2..=max_n {
            self.enumerate_partitions(a, b, n as u32, &mut parts, &mut got)?;
        }
        for (f, depth) in &got {
            self.record_depth(f, *depth);
        }
        let produced: Vec<Packed> = got.into_iter().map(|(f, _)| f).collect();
        let list = if self.prune {
            pareto(produced)
        } else {
            let mut p = produced;
            p.sort_by(|x, y| x.coeffs.cmp(&y.coeffs));
            p.dedup();
            p
        };
        self.roots.insert((a, b), list);
        Ok(())
    }

    fn enumerate_partitions(
        &self,
        from: u32,
        to: u32,
        n: u32,
        parts: &mut Vec<(u32, u32)>,
        got: &mut Vec<(Packed, u32)>,
    ) -> Result<()> {
        if n == 1 {
            parts.push((from, to));
            let lists: Vec<&Vec<Packed>> = parts.iter().map(|p| &self.sub[p]).collect();
            let mut acc = vec![0u32; self.span];
            let mut depth_acc = vec![0u32; parts.len()];
            let r = self.product_rec(&lists, 0, &mut acc, &mut depth_acc, got);
            parts.pop();
            return r;
        }
        // First part [from..c], leaving at least n-1 positions.
        for c in from..=(to - (n - 1)) {
            parts.push((from, c));
            self.enumerate_partitions(c + 1, to, n - 1, parts, got)?;
            parts.pop();
        }
        Ok(())
    }

    fn product_rec(
        &self,
        lists: &[&Vec<Packed>],
        idx: usize,
        acc: &mut Vec<u32>,
        depth_acc: &mut Vec<u32>,
        got: &mut Vec<(Packed, u32)>,
    ) -> Result<()> {
        if idx == lists.len() {
            if self.total + got.len() >= self.limit {
                return Err(Error::ResourceLimit(format!(
                    "norming-set generation exceeded {} functionals",
                    self.limit
                )));
            }
            let coeffs: Box<[u32]> = acc
                .iter()
                .map(|&c| {
                    debug_assert!(c % 2 == 0, "coefficient scale exhausted");
                    c / 2
                })
                .collect();
            let f = Packed { coeffs };
            let depth = 1 + depth_acc.iter().copied().max().unwrap_or(0);
            got.push((f, depth));
            return Ok(());
        }
        for g in lists[idx] {
            for (slot, c) in acc.iter_mut().zip(g.coeffs.iter()) {
                *slot += c;
            }
            depth_acc[idx] = self.depths[g];
            self.product_rec(lists, idx + 1, acc, depth_acc, got)?;
            for (slot, c) in acc.iter_mut().zip(g.coeffs.iter()) {
                *slot -= c;
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Vec<(Packed, u32)> {
        let final_list = self.sub.remove(&(self.lo, self.hi)).expect("built");
        let final_list = if self.prune {
            final_list
        } else {
            // Unpruned: the answer is everything ever produced.
            let mut all: Vec<Packed> = self.depths.keys().cloned().collect();
            all.sort_by(|x, y| x.coeffs.cmp(&y.coeffs));
            all
        };
        final_list
            .into_iter()
            .map(|f| {
                let d = self.depths[&f];
                (f, d)
            })
            .collect()
    }
}

fn unpack(f: &Packed, lo: u32, depth: u32) -> Functional {
    let mut coeffs = FiniteVector::zero();
    for (off, &c) in f.coeffs.iter().enumerate() {
        if c > 0 {
            coeffs.set(lo + off as u32, Scalar::new(c as i64, SCALE_ONE as i64));
        }
    }
    Functional::new(coeffs, depth)
}

/// Generates the norming set for supports inside `[1..dim]`.
///
/// With `prune` the result is the set of coordinatewise-maximal elements
/// of the closure (dominated functionals never attain the pointwise max
/// on nonnegative vectors); without it, the full deduplicated closure.
/// `max_functionals` is a resource guard on the generation.
pub fn generate_norming_set(dim: u32, prune: bool, max_functionals: usize) -> Result<NormingSet> {
    generate_norming_set_range(1, dim, prune, max_functionals)
}

/// Norming set for supports inside `[lo..hi]`; admissibility stays
/// absolute, only the supports are restricted. Sufficient (and much
/// smaller) when every vector of interest is supported in `[lo..hi]`.
pub fn generate_norming_set_range(
    lo: u32,
    hi: u32,
    prune: bool,
    max_functionals: usize,
) -> Result<NormingSet> {
    if lo == 0 {
        return Err(Error::InvalidIndex);
    }
    if lo > hi {
        return Err(Error::parse(
            format!("norming set range {lo}..{hi}"),
            "need lo <= hi",
        ));
    }
    if (hi - lo) as usize >= SHIFT as usize {
        return Err(Error::ResourceLimit(format!(
            "norming-set span {} exceeds the coefficient scale ({} bits)",
            hi - lo + 1,
            SHIFT
        )));
    }
    let mut gen = Generator::new(lo, hi, prune, max_functionals);
    gen.run()?;
    let mut functionals: Vec<Functional> = gen
        .finish()
        .into_iter()
        .map(|(f, d)| unpack(&f, lo, d))
        .collect();
    functionals.sort_by(functional_cmp);
    Ok(NormingSet {
        lo,
        dim: hi,
        prune,
        functionals,
    })
}

// ---------------------------------------------------------------------------
// Cache file format
// ---------------------------------------------------------------------------

const FORMAT_VERSION: &str = "1";

fn body_and_checksum(set: &NormingSet) -> (String, String) {
    let mut body = String::new();
    for f in &set.functionals {
        body.push_str(&f.to_line());
        body.push('\n');
    }
    let mut hasher = Sha256::new();
    hasher.update(body.as_bytes());
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    (body, hex)
}

/// Writes the versioned cache format: a text header (`format-version`,
/// `N`, `prune`, `count`, `checksum`) followed by one functional per
/// line. Round-trips bit-exactly.
pub fn save_norming_set<W: Write>(mut w: W, set: &NormingSet) -> Result<()> {
    if set.lo != 1 {
        return Err(Error::Internal(
            "only norming sets generated from index 1 can be saved".into(),
        ));
    }
    let (body, checksum) = body_and_checksum(set);
    writeln!(w, "format-version {FORMAT_VERSION}")?;
    writeln!(w, "N {}", set.dim)?;
    writeln!(w, "prune {}", set.prune)?;
    writeln!(w, "count {}", set.functionals.len())?;
    writeln!(w, "checksum {checksum}")?;
    w.write_all(body.as_bytes())?;
    Ok(())
}

pub fn save_norming_set_file(path: &std::path::Path, set: &NormingSet) -> Result<()> {
    let mut buf = Vec::new();
    save_norming_set(&mut buf, set)?;
    std::fs::write(path, buf)?;
    Ok(())
}

fn header_line<'l>(
    lines: &mut std::iter::Enumerate<std::io::Lines<impl BufRead>>,
    key: &str,
) -> Result<(usize, String)> {
    let (lineno, line) = lines
        .next()
        .ok_or_else(|| Error::parse("cache header", format!("missing `{key}` line")))?;
    let line = line?;
    let loc = format!("line {}", lineno + 1);
    match line.split_once(' ') {
        Some((k, v)) if k == key => Ok((lineno, v.trim().to_string())),
        _ => Err(Error::parse(loc, format!("expected `{key} <value>`"))),
    }
}

/// Reads a cache file, verifying version and checksum. The recorded
/// `prune` flag is kept on the returned set; callers that expected a
/// different flag should surface [`NormingSet::prune`] as a warning
/// rather than reject the file.
pub fn load_norming_set<R: BufRead>(r: R) -> Result<NormingSet> {
    let mut lines = r.lines().enumerate();
    let (_, version) = header_line(&mut lines, "format-version")?;
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: FORMAT_VERSION.into(),
        });
    }
    let (_, dim_txt) = header_line(&mut lines, "N")?;
    let dim: u32 = dim_txt
        .parse()
        .map_err(|e| Error::parse("header N", format!("{e}")))?;
    let (_, prune_txt) = header_line(&mut lines, "prune")?;
    let prune: bool = prune_txt
        .parse()
        .map_err(|e| Error::parse("header prune", format!("{e}")))?;
    let (_, count_txt) = header_line(&mut lines, "count")?;
    let count: usize = count_txt
        .parse()
        .map_err(|e| Error::parse("header count", format!("{e}")))?;
    let (_, checksum) = header_line(&mut lines, "checksum")?;

    let mut body = String::new();
    let mut functionals = Vec::with_capacity(count);
    for (lineno, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        body.push_str(&line);
        body.push('\n');
        let f = Functional::parse_line(&line, &format!("line {}", lineno + 1))?;
        if let Some(max) = f.coeffs.max_index() {
            if max > dim {
                return Err(Error::parse(
                    format!("line {}", lineno + 1),
                    format!("index {max} exceeds declared N {dim}"),
                ));
            }
        }
        functionals.push(f);
    }
    if functionals.len() != count {
        return Err(Error::parse(
            "cache body",
            format!("declared count {count}, found {}", functionals.len()),
        ));
    }
    let mut hasher = Sha256::new();
    hasher.update(body.as_bytes());
    let digest = hasher.finalize();
    let mut computed = String::with_capacity(64);
    for byte in digest {
        computed.push_str(&format!("{byte:02x}"));
    }
    if computed != checksum {
        return Err(Error::ChecksumMismatch {
            expected: checksum,
            computed,
        });
    }
    functionals.sort_by(functional_cmp);
    Ok(NormingSet {
        lo: 1,
        dim,
        prune,
        functionals,
    })
}

pub fn load_norming_set_file(path: &std::path::Path) -> Result<NormingSet> {
    let file = std::fs::File::open(path)?;
    load_norming_set(std::io::BufReader::new(file))
}
