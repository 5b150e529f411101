//! Tuple arithmetic: the Brill-Noether number, the slope defect `delta`,
//! reduced residues, the goodness predicate and the closed-form verdicts.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::constants;
use crate::error::DomainError;
use crate::rational::Rational;

/// Index `(d, g, r, l, m)` of the inductive hypothesis: degree, genus,
/// ambient dimension, number of point-pair modifications and number of
/// rational-curve modifications.
///
/// No validity is implied by construction; see [`is_good`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 5]", into = "[i64; 5]")]
pub struct Tuple {
    pub d: i64,
    pub g: i64,
    pub r: i64,
    pub ell: i64,
    pub m: i64,
}

impl Tuple {
    pub const fn new(d: i64, g: i64, r: i64, ell: i64, m: i64) -> Self {
        Tuple { d, g, r, ell, m }
    }

    pub fn triple(&self) -> (i64, i64, i64) {
        (self.d, self.g, self.r)
    }

    /// Well-founded measure: lexicographic `(r, d, m)`.
    pub fn measure(&self) -> (i64, i64, i64) {
        (self.r, self.d, self.m)
    }

    pub fn rho(&self) -> i64 {
        rho(self.d, self.g, self.r)
    }

    pub fn delta(&self) -> Result<Rational, DomainError> {
        delta(self)
    }

    /// `2d + 2g - 2r + 2l + (r + 1)m`, i.e. `delta * (r - 1)`.
    pub fn delta_numerator(&self) -> i64 {
        2 * self.d + 2 * self.g - 2 * self.r + 2 * self.ell + (self.r + 1) * self.m
    }
}

impl From<[i64; 5]> for Tuple {
    fn from(a: [i64; 5]) -> Self {
        Tuple::new(a[0], a[1], a[2], a[3], a[4])
    }
}

impl From<Tuple> for [i64; 5] {
    fn from(t: Tuple) -> Self {
        [t.d, t.g, t.r, t.ell, t.m]
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {})",
            self.d, self.g, self.r, self.ell, self.m
        )
    }
}

/// Brill-Noether number `(r + 1)d - rg - r(r + 1)`.
pub fn rho(d: i64, g: i64, r: i64) -> i64 {
    (r + 1) * d - r * g - r * (r + 1)
}

/// Exact slope defect `(2d + 2g - 2r + 2l + (r + 1)m) / (r - 1)`.
pub fn delta(t: &Tuple) -> Result<Rational, DomainError> {
    if t.r <= 1 {
        return Err(DomainError::DeltaUndefined(t.r));
    }
    Ok(Rational::new(t.delta_numerator(), t.r - 1))
}

/// The representative of `a` modulo `b` lying in `[0, b)`.
pub fn reduced_residue(a: i64, b: i64) -> Result<i64, DomainError> {
    if b <= 0 {
        return Err(DomainError::NonPositiveModulus(b));
    }
    Ok(a.mod_floor(&b))
}

/// Why a tuple is not good.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GoodnessFailure {
    DegreeBelowGPlusR,
    EllTooLarge,
    MExceedsRho,
    RationalResidue,
    InXExList,
    NegativeField,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodnessVerdict {
    pub is_good: bool,
    pub failures: Vec<GoodnessFailure>,
}

/// Residue condition `2l >= (1 - d) % (r - 1)` for tuples with `g = m = 0`.
///
/// For `r = 1` the modulus vanishes; the only rational curve in `P^1` that
/// is considered is the isomorphism, so the condition becomes `d = 1`.
fn residue_condition(t: &Tuple) -> bool {
    if t.r == 1 {
        return t.d == 1;
    }
    let res = (1 - t.d).mod_floor(&(t.r - 1));
    2 * t.ell >= res
}

/// Full goodness verdict with every failed condition.
pub fn is_good(t: &Tuple) -> GoodnessVerdict {
    let mut failures = Vec::new();
    if t.g < 0 || t.r < 1 || t.ell < 0 || t.m < 0 {
        failures.push(GoodnessFailure::NegativeField);
    }
    if t.d < t.g + t.r {
        failures.push(GoodnessFailure::DegreeBelowGPlusR);
    }
    if 2 * t.ell > t.r {
        failures.push(GoodnessFailure::EllTooLarge);
    }
    if t.m > t.rho() {
        failures.push(GoodnessFailure::MExceedsRho);
    }
    if t.g == 0 && t.m == 0 && t.r >= 1 && !residue_condition(t) {
        failures.push(GoodnessFailure::RationalResidue);
    }
    if constants::XEX.contains(t) {
        failures.push(GoodnessFailure::InXExList);
    }
    failures.sort();
    GoodnessVerdict {
        is_good: failures.is_empty(),
        failures,
    }
}

/// Boolean shortcut for [`is_good`] used on the hot search paths.
pub fn good(t: &Tuple) -> bool {
    t.g >= 0
        && t.r >= 1
        && t.ell >= 0
        && t.m >= 0
        && t.d >= t.g + t.r
        && 2 * t.ell <= t.r
        && t.m <= t.rho()
        && (t.g != 0 || t.m != 0 || residue_condition(t))
        && !constants::XEX.contains(t)
}

/// Ground-field characteristic. Only `p = 2` changes any verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Characteristic {
    Zero,
    Prime(u64),
}

impl Characteristic {
    /// `0` means characteristic zero; anything else must be prime.
    pub fn from_int(p: u64) -> Result<Self, DomainError> {
        match p {
            0 => Ok(Characteristic::Zero),
            p if is_prime(p) => Ok(Characteristic::Prime(p)),
            p => Err(DomainError::OutOfRange(format!(
                "characteristic {p} is not prime"
            ))),
        }
    }

    pub fn is_two(&self) -> bool {
        matches!(self, Characteristic::Prime(2))
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|k| k * k <= p)
            .all(|k| !p.is_multiple_of(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerdictReason {
    Generic,
    SporadicException { d: i64, g: i64, r: i64 },
    Char2Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpolationVerdict {
    pub holds: bool,
    pub reason: VerdictReason,
}

fn require_bn_curve(d: i64, g: i64, r: i64) -> Result<(), DomainError> {
    let rho = rho(d, g, r);
    if rho < 0 {
        return Err(DomainError::NegativeRho { d, g, r, rho });
    }
    Ok(())
}

/// Does the normal bundle of a general BN-curve of degree `d` and genus `g`
/// in `P^r` satisfy interpolation?
pub fn bn_interpolation(
    d: i64,
    g: i64,
    r: i64,
    char: Characteristic,
) -> Result<InterpolationVerdict, DomainError> {
    if r < 1 || d < 1 || g < 0 {
        return Err(DomainError::OutOfRange(format!(
            "need r >= 1, d >= 1, g >= 0; got (d, g, r) = ({d}, {g}, {r})"
        )));
    }
    require_bn_curve(d, g, r)?;
    if constants::COUNTEREXAMPLES.contains(&(d, g, r)) {
        return Ok(InterpolationVerdict {
            holds: false,
            reason: VerdictReason::SporadicException { d, g, r },
        });
    }
    // r = 1: the modulus r - 1 vanishes and the congruence means equality.
    let congruent = if r == 1 {
        d == 1
    } else {
        (d - 1).mod_floor(&(r - 1)) == 0
    };
    if char.is_two() && g == 0 && !congruent {
        return Ok(InterpolationVerdict {
            holds: false,
            reason: VerdictReason::Char2Rational,
        });
    }
    Ok(InterpolationVerdict {
        holds: true,
        reason: VerdictReason::Generic,
    })
}

/// Answer to "through how many general points does a BN-curve pass?".
///
/// `exception_upper_bound` is the upper bound established for the four
/// exceptional triples; it is not claimed to be sharp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCountAnswer {
    pub predicted_n: i64,
    pub is_exception: bool,
    pub exception_upper_bound: Option<i64>,
}

pub fn max_points(d: i64, g: i64, r: i64) -> Result<PointCountAnswer, DomainError> {
    if r < 3 {
        return Err(DomainError::OutOfRange(format!(
            "max_points needs r >= 3, got {r}"
        )));
    }
    require_bn_curve(d, g, r)?;
    let predicted_n = num_integer::Integer::div_floor(&((r + 1) * d - (r - 3) * (g - 1)), &(r - 1));
    let bound = constants::COR_MAIN_EXCEPTIONS
        .iter()
        .position(|&x| x == (d, g, r))
        .map(|i| constants::COR_MAIN_EXCEPTION_BOUNDS[i]);
    Ok(PointCountAnswer {
        predicted_n,
        is_exception: bound.is_some(),
        exception_upper_bound: bound,
    })
}

/// Interpolation for a bundle on `P^1` with splitting type `e`: all entries
/// within one of each other and none below `-1`.
pub fn splitting_type_interpolation(e: &[i64]) -> Result<bool, DomainError> {
    let (Some(&lo), Some(&hi)) = (e.iter().min(), e.iter().max()) else {
        return Err(DomainError::EmptySplittingType);
    };
    Ok(hi - lo <= 1 && lo >= -1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: i64, g: i64, r: i64, l: i64, m: i64) -> Tuple {
        Tuple::new(d, g, r, l, m)
    }

    #[test]
    fn rho_examples() {
        for r in 1..20 {
            assert_eq!(rho(r, 0, r), 0);
        }
        for g in 2..20 {
            assert_eq!(rho(2 * g - 2, g, g - 1), 0);
        }
        assert_eq!(rho(5, 2, 3), 2);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(
            delta(&t(11, 5, 6, 0, 0)).unwrap(),
            Rational::from_integer(4)
        );
        assert_eq!(delta(&t(8, 1, 7, 1, 1)).unwrap(), Rational::new(7, 3));
        assert_eq!(delta(&t(6, 2, 4, 3, 0)).unwrap(), Rational::new(14, 3));
        assert_eq!(delta(&t(8, 1, 7, 0, 1)).unwrap(), Rational::from_integer(2));
        assert_eq!(
            delta(&t(5, 0, 1, 0, 0)),
            Err(DomainError::DeltaUndefined(1))
        );
    }

    #[test]
    fn residue_examples() {
        assert_eq!(reduced_residue(0, 5), Ok(0));
        assert_eq!(reduced_residue(-5, 4), Ok(3));
        for r in 3..30 {
            assert_eq!(reduced_residue(1 - (r + 1), r - 1), Ok(r - 2));
        }
        assert!(reduced_residue(3, 0).is_err());
        assert!(reduced_residue(3, -2).is_err());
    }

    #[test]
    fn goodness_examples() {
        let v = is_good(&t(5, 2, 3, 0, 0));
        assert!(!v.is_good);
        assert_eq!(v.failures, vec![GoodnessFailure::InXExList]);
        assert!(is_good(&t(4, 0, 4, 0, 0)).is_good);
        let v = is_good(&t(6, 1, 5, 3, 0));
        assert_eq!(v.failures, vec![GoodnessFailure::EllTooLarge]);
        // l = r/2 is allowed for even r
        assert!(is_good(&t(8, 0, 4, 2, 0)).is_good);
        // (1 - 6) % 3 = 1 > 0 = 2l
        assert_eq!(
            is_good(&t(6, 0, 4, 0, 0)).failures,
            vec![GoodnessFailure::RationalResidue]
        );
        assert!(is_good(&t(6, 0, 4, 1, 0)).is_good);
        assert_eq!(
            is_good(&t(4, -1, 3, 0, 0)).failures,
            vec![GoodnessFailure::NegativeField]
        );
    }

    #[test]
    fn good_agrees_with_verdict() {
        for r in 1..7 {
            for d in 0..16 {
                for g in 0..6 {
                    for l in 0..4 {
                        for m in 0..5 {
                            let x = t(d, g, r, l, m);
                            assert_eq!(good(&x), is_good(&x).is_good, "{x}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn interpolation_examples() {
        let v = bn_interpolation(6, 2, 4, Characteristic::Zero).unwrap();
        assert_eq!(
            v.reason,
            VerdictReason::SporadicException { d: 6, g: 2, r: 4 }
        );
        let two = Characteristic::from_int(2).unwrap();
        let v = bn_interpolation(6, 0, 4, two).unwrap();
        assert_eq!((v.holds, v.reason), (false, VerdictReason::Char2Rational));
        assert!(bn_interpolation(7, 0, 4, two).unwrap().holds);
        assert!(
            bn_interpolation(6, 0, 4, Characteristic::Zero)
                .unwrap()
                .holds
        );
        assert!(matches!(
            bn_interpolation(3, 0, 7, Characteristic::Zero),
            Err(DomainError::NegativeRho { .. })
        ));
        assert!(Characteristic::from_int(4).is_err());
    }

    #[test]
    fn point_counts() {
        let a = max_points(5, 2, 3).unwrap();
        assert_eq!((a.predicted_n, a.exception_upper_bound), (10, Some(9)));
        let a = max_points(6, 4, 3).unwrap();
        assert_eq!((a.predicted_n, a.exception_upper_bound), (12, Some(9)));
        let a = max_points(10, 6, 5).unwrap();
        assert_eq!((a.predicted_n, a.exception_upper_bound), (12, Some(11)));
        let a = max_points(7, 2, 5).unwrap();
        assert_eq!((a.predicted_n, a.exception_upper_bound), (10, Some(9)));
        let a = max_points(6, 2, 4).unwrap();
        assert!(!a.is_exception && a.exception_upper_bound.is_none());
    }

    #[test]
    fn splitting_types() {
        assert_eq!(splitting_type_interpolation(&[1, 1, 1]), Ok(true));
        assert_eq!(splitting_type_interpolation(&[2, 0]), Ok(false));
        assert_eq!(splitting_type_interpolation(&[-1, -1]), Ok(true));
        assert_eq!(splitting_type_interpolation(&[-2, -1]), Ok(false));
        assert!(splitting_type_interpolation(&[]).is_err());
    }

    #[test]
    fn serde_as_array() {
        let x = t(9, 2, 5, 0, 0);
        assert_eq!(serde_json::to_string(&x).unwrap(), "[9,2,5,0,0]");
        assert_eq!(serde_json::from_str::<Tuple>("[9,2,5,0,0]").unwrap(), x);
    }
}
