//! Exact norm values.
//!
//! Norms in this crate are either rational (every engine except the
//! Euclidean one) or the square root of a rational. `NormValue` keeps
//! both cases exact, so comparisons, maxima, scaling and ratios of norm
//! values never round. Sums of square roots are not representable; the
//! one place they are needed (triangle-inequality checks) goes through
//! [`NormValue::le_sum`], which decides `c <= a + b` exactly by squaring.

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum NormValue {
    /// An exact rational value.
    Exact(Scalar),
    /// The positive square root of a rational that is not a perfect
    /// square (perfect squares are canonicalized to `Exact`).
    Sqrt(Scalar),
}

impl NormValue {
    pub fn zero() -> Self {
        NormValue::Exact(Scalar::zero())
    }

    pub fn exact(s: Scalar) -> Self {
        NormValue::Exact(s)
    }

    /// The nonnegative square root of `q` (requires `q >= 0`).
    pub fn sqrt_of(q: Scalar) -> Self {
        assert!(!q.is_negative(), "sqrt of negative rational");
        match q.exact_sqrt() {
            Some(r) => NormValue::Exact(r),
            None => NormValue::Sqrt(q),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            NormValue::Exact(s) => s.is_zero(),
            NormValue::Sqrt(_) => false,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            NormValue::Exact(s) => s.is_negative(),
            NormValue::Sqrt(_) => false,
        }
    }

    /// Exact square of the value.
    pub fn square(&self) -> Scalar {
        match self {
            NormValue::Exact(s) => s.square(),
            NormValue::Sqrt(q) => q.clone(),
        }
    }

    /// The rational value if this is exact.
    pub fn as_exact(&self) -> Option<&Scalar> {
        match self {
            NormValue::Exact(s) => Some(s),
            NormValue::Sqrt(_) => None,
        }
    }

    /// Multiplication by `|c|` for rational `c`.
    pub fn scale_abs(&self, c: &Scalar) -> Self {
        match self {
            NormValue::Exact(s) => NormValue::Exact(s * &c.abs()),
            NormValue::Sqrt(q) => NormValue::sqrt_of(q * &c.square()),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (NormValue::Exact(a), NormValue::Exact(b)) => NormValue::Exact(a * b),
            _ => {
                let sign_neg = self.is_negative() ^ other.is_negative();
                assert!(!sign_neg, "product of mixed-sign sqrt values");
                NormValue::sqrt_of(&self.square() * &other.square())
            }
        }
    }

    /// Exact ratio `self / other`; requires `other != 0` and both
    /// nonnegative when square roots are involved.
    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero norm value");
        match (self, other) {
            (NormValue::Exact(a), NormValue::Exact(b)) => NormValue::Exact(a / b),
            _ => {
                assert!(
                    !self.is_negative() && !other.is_negative(),
                    "ratio of negative values with sqrt parts"
                );
                NormValue::sqrt_of(&self.square() / &other.square())
            }
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Decides `self <= a + b` exactly. All three values must be
    /// nonnegative.
    pub fn le_sum(&self, a: &NormValue, b: &NormValue) -> bool {
        assert!(
            !self.is_negative() && !a.is_negative() && !b.is_negative(),
            "le_sum requires nonnegative values"
        );
        // c <= a + b  <=>  c^2 - a^2 - b^2 <= 2 sqrt(a^2 b^2)
        let c2 = self.square();
        let a2 = a.square();
        let b2 = b.square();
        let t = &(&c2 - &a2) - &b2;
        if !t.is_positive() {
            return true;
        }
        let four: Scalar = Scalar::from_int(4);
        t.square() <= &four * &(&a2 * &b2)
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NormValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let sign = |v: &NormValue| -> i8 {
            if v.is_zero() {
                0
            } else if v.is_negative() {
                -1
            } else {
                1
            }
        };
        let (sa, sb) = (sign(self), sign(other));
        if sa != sb {
            return sa.cmp(&sb);
        }
        // Same sign: compare squares, flipping for negatives.
        let ord = self.square().cmp_ref(&other.square());
        if sa < 0 {
            ord.reverse()
        } else {
            ord
        }
    }
}

impl From<Scalar> for NormValue {
    fn from(s: Scalar) -> Self {
        NormValue::Exact(s)
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Exact(s) => write!(f, "{s}"),
            NormValue::Sqrt(q) => write!(f, "sqrt({q})"),
        }
    }
}
