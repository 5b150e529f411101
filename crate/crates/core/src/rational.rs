//! Exact rationals. Everything that could be fractional (delta, the bounds
//! of interval systems) is carried as a reduced `i64` ratio; nothing in the
//! crate uses floating point.

pub type Rational = num_rational::Ratio<i64>;

/// `|value - center| <= 1 - k/(r - 1)` where `value = numer / (r - 1)`.
///
/// Cross-multiplied: `|numer - center (r - 1)| <= (r - 1) - k`.
pub fn within_window(numer: i64, r: i64, center: i64, k: i64) -> bool {
    debug_assert!(r >= 2);
    let den = r - 1;
    (numer - center * den).abs() <= den - k
}

/// Integers `x` with `|numer/(r-1) - x| <= 1 - k/(r-1)`, as an inclusive
/// range (possibly empty).
pub fn window_integers(numer: i64, r: i64, k: i64) -> (i64, i64) {
    let den = r - 1;
    let slack = den - k;
    // numer - slack <= x den <= numer + slack
    let lo = num_integer::Integer::div_ceil(&(numer - slack), &den);
    let hi = num_integer::Integer::div_floor(&(numer + slack), &den);
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let q = Rational::new(6, -4);
        assert_eq!((*q.numer(), *q.denom()), (-3, 2));
        assert_eq!(q.floor(), Rational::from_integer(-2));
        assert_eq!(q.ceil(), Rational::from_integer(-1));
    }

    #[test]
    fn window_matches_rational_form() {
        for r in 2..12 {
            for numer in -40..40 {
                for k in 0..3 {
                    let value = Rational::new(numer, r - 1);
                    let slack = Rational::from_integer(1) - Rational::new(k, r - 1);
                    let (lo, hi) = window_integers(numer, r, k);
                    for x in -50..50 {
                        let diff = value - Rational::from_integer(x);
                        let exact = -slack <= diff && diff <= slack;
                        assert_eq!(within_window(numer, r, x, k), exact);
                        assert_eq!(lo <= x && x <= hi, exact);
                    }
                }
            }
        }
    }
}
