use std::fmt;
use std::ops::{Add, Neg};

use serde::{Deserialize, Serialize};

use crate::fraction::TangleFraction;
use crate::simplify::Step;

/// Exact half-integer, stored doubled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt(pub i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_halves(halves: i32) -> Self {
        HalfInt(halves)
    }

    pub fn halves(self) -> i32 {
        self.0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;

    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;

    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitEvidence {
    TrivialFraction(TangleFraction),
    /// Reidemeister moves ending in a diagram whose components do not cross.
    Simplification(Vec<Step>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    LinkingNumber(HalfInt),
    Fraction(TangleFraction),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub budget: usize,
    pub explored: usize,
    /// True when the reachable set was exhausted before the budget ran out.
    pub exhausted: bool,
    pub min_nsi: usize,
    pub min_crossings: usize,
    pub linking_number: HalfInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Splittable(SplitEvidence),
    Unsplittable(Certificate),
    Unknown(BudgetReport),
}

impl Verdict {
    pub fn is_splittable(&self) -> bool {
        matches!(self, Verdict::Splittable(_))
    }

    pub fn is_unsplittable(&self) -> bool {
        matches!(self, Verdict::Unsplittable(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    /// `Some(true)` for split, `Some(false)` for non-split.
    pub fn definite(&self) -> Option<bool> {
        match self {
            Verdict::Splittable(_) => Some(true),
            Verdict::Unsplittable(_) => Some(false),
            Verdict::Unknown(_) => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Splittable(_) => "splittable",
            Verdict::Unsplittable(_) => "unsplittable",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn summary(&self) -> String {
        match self {
            Verdict::Splittable(SplitEvidence::TrivialFraction(f)) => format!("splittable (fraction {f})"),
            Verdict::Splittable(SplitEvidence::Simplification(t)) => {
                format!("splittable ({} simplification steps)", t.len())
            }
            Verdict::Unsplittable(Certificate::LinkingNumber(lk)) => format!("unsplittable (linking number {lk})"),
            Verdict::Unsplittable(Certificate::Fraction(f)) => format!("unsplittable (fraction {f})"),
            Verdict::Unknown(r) => format!(
                "unknown (linking number {}, explored {} of budget {}, best {} NSI)",
                r.linking_number, r.explored, r.budget, r.min_nsi
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_int_display() {
        assert_eq!(HalfInt(-2).to_string(), "-1");
        assert_eq!(HalfInt(1).to_string(), "1/2");
        assert_eq!(HalfInt(-3).to_string(), "-3/2");
        assert_eq!((HalfInt(1) + HalfInt(1)).abs(), HalfInt(2));
    }
}
