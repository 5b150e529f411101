//! One-variable integer feasibility over rational bounds.

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// A fraction kept exactly as presented; `4/6` and `2/3` are different
/// presentations of the same value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Presented {
    pub num: i64,
    pub den: i64,
}

impl Presented {
    /// Panics if `den <= 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "bound denominators must be positive, got {den}");
        Presented { num, den }
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.num, self.den)
    }
}

impl From<i64> for Presented {
    fn from(n: i64) -> Self {
        Presented::new(n, 1)
    }
}

/// `max(lowers) <= n <= min(uppers)`; either side may be empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSystem {
    pub lowers: Vec<Presented>,
    pub uppers: Vec<Presented>,
}

impl BoundSystem {
    pub fn new(lowers: Vec<Presented>, uppers: Vec<Presented>) -> Self {
        BoundSystem { lowers, uppers }
    }
}

/// Least integer satisfying every bound. With no lower bound the smallest
/// integer does not exist, so the answer is `floor(min uppers)`; with no
/// bounds at all it is 0.
pub fn integer_in_interval(s: &BoundSystem) -> Option<i64> {
    let lo = s
        .lowers
        .iter()
        .map(Presented::value)
        .max()
        .map(|q| q.ceil().to_integer());
    let hi = s
        .uppers
        .iter()
        .map(Presented::value)
        .min()
        .map(|q| q.floor().to_integer());
    match (lo, hi) {
        (Some(lo), Some(hi)) => (lo <= hi).then_some(lo),
        (Some(lo), None) => Some(lo),
        (None, Some(hi)) => Some(hi),
        (None, None) => Some(0),
    }
}

/// Sufficient criterion for an integer between every pair of bounds:
/// `a/b <= c/d - (b - 1)(d - 1)/(bd)` for each lower `a/b` and upper `c/d`,
/// i.e. `ad + (b - 1)(d - 1) <= bc`.
pub fn eliminate_sufficient(s: &BoundSystem) -> bool {
    s.lowers.iter().all(|l| {
        s.uppers.iter().all(|u| {
            let (a, b, c, d) = (l.num as i128, l.den as i128, u.num as i128, u.den as i128);
            a * d + (b - 1) * (d - 1) <= b * c
        })
    })
}
