//! Finitely supported coefficient vectors over a 1-based basis.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use crate::error::Error;
use crate::scalar::Scalar;
use crate::Result;

/// A finitely supported vector: only nonzero entries are stored, keyed by
/// 1-based basis index. Equality is entrywise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteVector {
    entries: BTreeMap<u32, Scalar>,
}

impl FiniteVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector `e_i`.
    pub fn unit(index: u32) -> Self {
        let mut v = Self::zero();
        v.set(index, Scalar::one());
        v
    }

    /// Accumulates `(index, value)` pairs; duplicate indices are summed,
    /// zero results are dropped. Index 0 is rejected.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Scalar)>,
    {
        let mut v = Self::zero();
        for (i, s) in pairs {
            v.add_entry(i, &s)?;
        }
        Ok(v)
    }

    /// Sets entry `index` to `value` (removing it when zero).
    /// Panics on index 0; use `add_entry` for fallible accumulation.
    pub fn set(&mut self, index: u32, value: Scalar) {
        assert!(index >= 1, "indices are 1-based");
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    pub fn add_entry(&mut self, index: u32, value: &Scalar) -> Result<()> {
        if index == 0 {
            return Err(Error::InvalidIndex);
        }
        let new = match self.entries.get(&index) {
            Some(old) => old + value,
            None => value.clone(),
        };
        self.set(index, new);
        Ok(())
    }

    pub fn coeff(&self, index: u32) -> Scalar {
        self.entries.get(&index).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn get(&self, index: u32) -> Option<&Scalar> {
        self.entries.get(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Scalar)> + '_ {
        self.entries.iter().map(|(i, s)| (*i, s))
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min_index(&self) -> Option<u32> {
        self.entries.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.keys().next_back().copied()
    }

    /// Coordinatewise absolute value; same support.
    pub fn abs(&self) -> Self {
        FiniteVector {
            entries: self
                .entries
                .iter()
                .map(|(i, s)| (*i, s.abs()))
                .collect(),
        }
    }

    pub fn negate(&self) -> Self {
        FiniteVector {
            entries: self.entries.iter().map(|(i, s)| (*i, -s)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FiniteVector {
            entries: self.entries.iter().map(|(i, s)| (*i, s * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, s) in other.iter() {
            out.add_entry(i, s).expect("valid index");
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, s) in other.iter() {
            out.add_entry(i, &-s).expect("valid index");
        }
        out
    }

    /// Restriction to the closed index interval `[lo, hi]`.
    pub fn restrict(&self, lo: u32, hi: u32) -> Self {
        FiniteVector {
            entries: self
                .entries
                .range(lo..=hi)
                .map(|(i, s)| (*i, s.clone()))
                .collect(),
        }
    }

    /// Restriction to an arbitrary index set.
    pub fn restrict_to<F: Fn(u32) -> bool>(&self, keep: F) -> Self {
        FiniteVector {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| keep(**i))
                .map(|(i, s)| (*i, s.clone()))
                .collect(),
        }
    }

    /// Exact dot product.
    pub fn inner_product(&self, other: &Self) -> Scalar {
        let (small, big) = if self.support_len() <= other.support_len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Scalar::zero();
        for (i, s) in small.iter() {
            if let Some(t) = big.get(i) {
                acc = acc + s * t;
            }
        }
        acc
    }

    pub fn l1_norm(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for (_, s) in self.iter() {
            acc = acc + s.abs();
        }
        acc
    }

    pub fn linf_norm(&self) -> Scalar {
        let mut best = Scalar::zero();
        for (_, s) in self.iter() {
            best = best.max(s.abs());
        }
        best
    }

    /// Exact squared Euclidean norm.
    pub fn l2_norm_squared(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for (_, s) in self.iter() {
            acc = acc + s.square();
        }
        acc
    }

    /// Rational enclosure `[lo, hi]` of the Euclidean norm with
    /// `hi - lo <= width`, computed by exact bisection. `width` must be
    /// positive.
    pub fn l2_norm_interval(&self, width: &Scalar) -> (Scalar, Scalar) {
        assert!(width.is_positive(), "interval width must be positive");
        let sq = self.l2_norm_squared();
        if sq.is_zero() {
            return (Scalar::zero(), Scalar::zero());
        }
        if let Some(root) = sq.exact_sqrt() {
            return (root.clone(), root);
        }
        let mut lo = Scalar::zero();
        let mut hi = Scalar::one().max(sq.clone());
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi).half();
            if mid.square() <= sq {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }
}

impl fmt::Debug for FiniteVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (n, (i, s)) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}:{s}")?;
        }
        write!(f, "]")
    }
}

/// Reads the vector text format: one `<index> <num>/<den>` entry per line
/// (denominator `1` may be omitted), `#` starts a comment, lines strictly
/// sorted by index.
pub fn read_vector<R: BufRead>(reader: R) -> Result<FiniteVector> {
    let mut v = FiniteVector::zero();
    let mut last_index: Option<u32> = None;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let content = match line.split_once('#') {
            Some((before, _)) => before,
            None => line.as_str(),
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let loc = format!("line {}", lineno + 1);
        let mut parts = content.split_whitespace();
        let idx_txt = parts.next().unwrap();
        let val_txt = parts
            .next()
            .ok_or_else(|| Error::parse(&loc, "missing value after index"))?;
        if let Some(extra) = parts.next() {
            return Err(Error::parse(&loc, format!("unexpected token `{extra}`")));
        }
        let index: u32 = idx_txt
            .parse()
            .map_err(|e| Error::parse(&loc, format!("bad index `{idx_txt}`: {e}")))?;
        if index == 0 {
            return Err(Error::parse(&loc, "index 0 is invalid (1-based)"));
        }
        if let Some(prev) = last_index {
            if index <= prev {
                return Err(Error::parse(
                    &loc,
                    format!("indices must be strictly increasing ({prev} then {index})"),
                ));
            }
        }
        last_index = Some(index);
        let value: Scalar = val_txt.parse()?;
        v.set(index, value);
    }
    Ok(v)
}

/// Writes the canonical form of the vector text format: entries sorted by
/// index, denominator always present. `read_vector(write_vector(v)) == v`
/// bit-exactly.
pub fn write_vector<W: Write>(mut writer: W, v: &FiniteVector) -> Result<()> {
    for (i, s) in v.iter() {
        writeln!(writer, "{i} {s}")?;
    }
    Ok(())
}

pub fn read_vector_file(path: &std::path::Path) -> Result<FiniteVector> {
    let file = std::fs::File::open(path)?;
    read_vector(std::io::BufReader::new(file))
}

pub fn write_vector_file(path: &std::path::Path, v: &FiniteVector) -> Result<()> {
    let mut buf = Vec::new();
    write_vector(&mut buf, v)?;
    std::fs::write(path, buf)?;
    Ok(())
}
