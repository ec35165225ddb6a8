//! k-subsets of the naturals, the Hamming and Johnson metrics on them,
//! interlaced pairs, plegma families, and enumeration utilities.

use std::fmt;

use crate::error::Error;
use crate::Result;

/// A strictly increasing k-tuple of naturals; a point of the Hamming or
/// Johnson graph of height k.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KSubset {
    elements: Vec<u32>,
}

impl KSubset {
    /// Accepts only strictly increasing nonempty tuples of indices >= 1.
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::parse("k-subset", "must be nonempty"));
        }
        if elements[0] == 0 {
            return Err(Error::InvalidIndex);
        }
        for w in elements.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::parse(
                    "k-subset",
                    format!("elements must strictly increase ({} then {})", w[0], w[1]),
                ));
            }
        }
        Ok(KSubset { elements })
    }

    pub fn k(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Text form `{m1,m2,...,mk}`.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::parse(format!("k-subset `{text}`"), "expected {a,b,...}"))?;
        let elements = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::parse(format!("k-subset `{text}`"), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        KSubset::new(elements)
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, x) in self.elements.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finite strictly increasing ground set `M`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroundSet {
    elements: Vec<u32>,
}

impl GroundSet {
    pub fn new(mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() == Some(&0) {
            return Err(Error::InvalidIndex);
        }
        Ok(GroundSet { elements })
    }

    pub fn range(lo: u32, hi: u32) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::parse(
                format!("ground set {lo}..{hi}"),
                "need 1 <= lo <= hi",
            ));
        }
        Ok(GroundSet {
            elements: (lo..=hi).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn min(&self) -> Option<u32> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<u32> {
        self.elements.last().copied()
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, x) in self.elements.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

fn check_sizes(a: &KSubset, b: &KSubset) -> Result<()> {
    if a.k() != b.k() {
        return Err(Error::SizeMismatch {
            left: a.k(),
            right: b.k(),
        });
    }
    Ok(())
}

/// Number of positions where the sorted representatives differ.
pub fn hamming_distance(a: &KSubset, b: &KSubset) -> Result<u32> {
    check_sizes(a, b)?;
    Ok(a.elements()
        .iter()
        .zip(b.elements())
        .filter(|(x, y)| x != y)
        .count() as u32)
}

/// Half the cardinality of the symmetric difference.
pub fn johnson_distance(a: &KSubset, b: &KSubset) -> Result<u32> {
    check_sizes(a, b)?;
    let mut sym = 0u32;
    let (mut i, mut j) = (0usize, 0usize);
    let (xs, ys) = (a.elements(), b.elements());
    while i < xs.len() || j < ys.len() {
        match (xs.get(i), ys.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                sym += 1;
                i += 1;
            }
            (Some(_), Some(_)) => {
                sym += 1;
                j += 1;
            }
            (Some(_), None) => {
                sym += 1;
                i += 1;
            }
            (None, Some(_)) => {
                sym += 1;
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    debug_assert!(sym % 2 == 0);
    Ok(sym / 2)
}

/// The ordered predicate `m_1 < n_1 < m_2 < n_2 < ... < m_k < n_k`. Note
/// the asymmetry: `is_interlaced(a, b)` and `is_interlaced(b, a)` differ
/// in general.
pub fn is_interlaced(a: &KSubset, b: &KSubset) -> Result<bool> {
    check_sizes(a, b)?;
    let mut prev: Option<u32> = None;
    for (m, n) in a.elements().iter().zip(b.elements()) {
        if let Some(p) = prev {
            if *m <= p {
                return Ok(false);
            }
        }
        if n <= m {
            return Ok(false);
        }
        prev = Some(*n);
    }
    Ok(true)
}

/// The plegma predicate on a family of k tuples of equal length m:
/// `s^(1)_1 < s^(2)_1 < ... < s^(k)_1 < s^(1)_2 < ... < s^(k)_m`.
pub fn is_plegma(family: &[Vec<u32>]) -> Result<bool> {
    let k = family.len();
    if k == 0 {
        return Err(Error::parse("plegma", "family must be nonempty"));
    }
    let m = family[0].len();
    if m == 0 {
        return Err(Error::parse("plegma", "tuples must be nonempty"));
    }
    for (idx, row) in family.iter().enumerate() {
        if row.len() != m {
            return Err(Error::RaggedFamily {
                index: idx,
                len: row.len(),
                expected: m,
            });
        }
    }
    let mut prev: Option<u32> = None;
    for col in 0..m {
        for row in family {
            let x = row[col];
            if let Some(p) = prev {
                if x <= p {
                    return Ok(false);
                }
            }
            prev = Some(x);
        }
    }
    Ok(true)
}

/// All k-subsets of the ground set, in colexicographic order (sorted by
/// largest element, then recursively on the rest). The order is stable
/// and platform independent.
pub fn enumerate_ksubsets(ground: &GroundSet, k: usize) -> Result<Vec<KSubset>> {
    if k == 0 || ground.len() < k {
        return Err(Error::GroundTooSmall {
            ground: ground.len(),
            k,
        });
    }
    let elems = ground.elements();
    let mut out = Vec::new();
    // Positions into `elems`; colex = increasing final element outermost.
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(KSubset {
            elements: idx.iter().map(|&i| elems[i]).collect(),
        });
        // Advance in colex order: find leftmost position that can move.
        let mut pos = 0;
        loop {
            if pos == k {
                out.sort_by(colex_cmp);
                return Ok(out);
            }
            let limit = if pos + 1 < k { idx[pos + 1] } else { elems.len() };
            if idx[pos] + 1 < limit {
                idx[pos] += 1;
                for (j, slot) in idx.iter_mut().enumerate().take(pos) {
                    *slot = j;
                }
                break;
            }
            pos += 1;
        }
    }
}

/// Colexicographic comparison: by largest element first.
pub fn colex_cmp(a: &KSubset, b: &KSubset) -> std::cmp::Ordering {
    let xs = a.elements();
    let ys = b.elements();
    for (x, y) in xs.iter().rev().zip(ys.iter().rev()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    xs.len().cmp(&ys.len())
}

/// All ordered interlaced pairs in `[ground]^k`, each exactly once, in
/// colexicographic order of the merged 2k-tuple. A pair is determined by
/// its 2k merged values: the alternation forces which elements belong to
/// each side.
pub fn enumerate_interlaced_pairs(
    ground: &GroundSet,
    k: usize,
) -> Result<Vec<(KSubset, KSubset)>> {
    if k == 0 || ground.len() < 2 * k {
        return Err(Error::GroundTooSmall {
            ground: ground.len(),
            k: 2 * k,
        });
    }
    let merged = enumerate_ksubsets(ground, 2 * k)?;
    let mut out = Vec::with_capacity(merged.len());
    for m in merged {
        let elems = m.elements();
        let a: Vec<u32> = elems.iter().step_by(2).copied().collect();
        let b: Vec<u32> = elems.iter().skip(1).step_by(2).copied().collect();
        out.push((KSubset { elements: a }, KSubset { elements: b }));
    }
    Ok(out)
}
