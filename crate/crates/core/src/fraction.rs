//! Extended rational invariant of a fully resolved rational tangle word.
//!
//! The value starts at `1/0` (two vertical strands) and each syllable applies
//! a Möbius map: bottom twists `f -> 1/(n + 1/f)`, right twists `f -> f + n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::word::PseudoTangleWord;

/// `p/q` in lowest terms with `q >= 0`; `q == 0` encodes infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TangleFraction {
    p: i128,
    q: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl TangleFraction {
    pub const INFINITY: TangleFraction = TangleFraction { p: 1, q: 0 };
    pub const ZERO: TangleFraction = TangleFraction { p: 0, q: 1 };

    /// Panics on `0/0`.
    pub fn new(p: i128, q: i128) -> Self {
        assert!(p != 0 || q != 0, "0/0 is not an extended rational");
        let (mut p, mut q) = if q < 0 { (-p, -q) } else { (p, q) };
        if q == 0 {
            p = 1;
        }
        let g = gcd(p, q);
        if g > 1 {
            p /= g;
            q /= g;
        }
        TangleFraction { p, q }
    }

    pub fn numerator(&self) -> i128 {
        self.p
    }

    pub fn denominator(&self) -> i128 {
        self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0
    }

    /// Fractions of split two-component closures.
    pub fn is_trivial(&self) -> bool {
        self.is_zero() || self.is_infinite()
    }

    pub fn reciprocal(&self) -> Self {
        TangleFraction::new(self.q, self.p)
    }

    pub fn negate(&self) -> Self {
        TangleFraction::new(-self.p, self.q)
    }

    fn add_integer(self, n: i128) -> Self {
        let p = self.p.checked_add(n.checked_mul(self.q).expect("fraction overflow")).expect("fraction overflow");
        TangleFraction::new(p, self.q)
    }

    /// `1/(n + 1/f)` written without division: `p / (n p + q)`.
    fn bottom_twist(self, n: i128) -> Self {
        let q = n.checked_mul(self.p).and_then(|v| v.checked_add(self.q)).expect("fraction overflow");
        TangleFraction::new(self.p, q)
    }
}

impl fmt::Display for TangleFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            write!(f, "∞")
        } else if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

/// Fraction of a word, reading only the nets (unresolved crossings are
/// ignored; callers check resolution where it matters).
pub fn tangle_fraction(word: &PseudoTangleWord) -> TangleFraction {
    fraction_of_nets(&word.nets())
}

pub fn fraction_of_nets(nets: &[i32]) -> TangleFraction {
    nets.iter().enumerate().fold(TangleFraction::INFINITY, |f, (i, &n)| {
        if i % 2 == 0 {
            f.bottom_twist(n as i128)
        } else {
            f.add_integer(n as i128)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(nets: &[i32]) -> TangleFraction {
        fraction_of_nets(nets)
    }

    #[test]
    fn identity_word_is_infinite() {
        assert_eq!(frac(&[0]), TangleFraction::INFINITY);
        assert_eq!(frac(&[]), TangleFraction::INFINITY);
    }

    #[test]
    fn hand_iterated_values() {
        // 1/(2 + 1/inf) = 1/2
        assert_eq!(frac(&[2]), TangleFraction::new(1, 2));
        // 1/2 -> 1/2 - 3 = -5/2 -> 1/(-2 - 2/5) = -5/12 -> -5/12 + 1 = 7/12
        assert_eq!(frac(&[2, -3, -2, 1]), TangleFraction::new(7, 12));
        assert_eq!(frac(&[1, 1]), TangleFraction::new(2, 1));
        assert_eq!(frac(&[1, -1]), TangleFraction::ZERO);
        assert_eq!(frac(&[2, 1, 2]), TangleFraction::new(3, 8));
    }

    #[test]
    fn normalization() {
        assert_eq!(TangleFraction::new(4, -6), TangleFraction::new(-2, 3));
        assert_eq!(TangleFraction::new(-5, 0), TangleFraction::INFINITY);
        assert_eq!(TangleFraction::new(0, -7), TangleFraction::ZERO);
        assert_eq!(TangleFraction::new(3, 8).to_string(), "3/8");
        assert_eq!(TangleFraction::INFINITY.to_string(), "∞");
    }
}
