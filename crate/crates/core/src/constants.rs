//! Literal tables: the excluded tuples, the exceptional triples and the
//! 30 irreducible sporadic cases.

use serde::{Deserialize, Serialize};

use crate::tuple::Tuple;

const fn t(d: i64, g: i64, r: i64, ell: i64, m: i64) -> Tuple {
    Tuple::new(d, g, r, ell, m)
}

/// Tuples excluded from goodness even though they meet the inequalities.
pub struct XexList([Tuple; 12]);

impl XexList {
    pub fn contains(&self, x: &Tuple) -> bool {
        x.r <= 5 && self.0.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tuple> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub static XEX: XexList = XexList([
    t(5, 2, 3, 0, 0),
    t(4, 1, 3, 1, 0),
    t(4, 1, 3, 0, 1),
    t(4, 1, 3, 1, 1),
    t(6, 2, 4, 0, 0),
    t(5, 1, 4, 1, 0),
    t(5, 1, 4, 1, 1),
    t(5, 1, 4, 2, 1),
    t(6, 2, 4, 1, 1),
    t(7, 2, 5, 0, 0),
    t(6, 1, 5, 0, 1),
    t(6, 1, 5, 1, 1),
]);

/// `(d, g, r)` for which the normal bundle of a general BN-curve fails
/// interpolation in every characteristic.
pub const COUNTEREXAMPLES: [(i64, i64, i64); 5] =
    [(5, 2, 3), (6, 4, 3), (6, 2, 4), (7, 2, 5), (10, 6, 5)];

/// The subset of [`COUNTEREXAMPLES`] where the point count itself fails.
pub const COR_MAIN_EXCEPTIONS: [(i64, i64, i64); 4] = [(5, 2, 3), (6, 4, 3), (7, 2, 5), (10, 6, 5)];

/// Upper bounds on the number of general points, aligned with
/// [`COR_MAIN_EXCEPTIONS`].
pub const COR_MAIN_EXCEPTION_BOUNDS: [i64; 4] = [9, 9, 9, 11];

/// Good tuples with `r <= 13` that none of the reduction rules handle.
pub const SPORADIC30: [Tuple; 30] = [
    t(4, 0, 3, 0, 1),
    t(4, 0, 3, 0, 2),
    t(4, 0, 3, 1, 1),
    t(5, 0, 3, 0, 1),
    t(5, 1, 3, 0, 1),
    t(5, 1, 3, 1, 1),
    t(5, 2, 3, 0, 1),
    t(5, 2, 3, 0, 2),
    t(5, 2, 3, 1, 1),
    t(6, 2, 3, 0, 1),
    t(5, 0, 4, 0, 1),
    t(5, 0, 4, 2, 0),
    t(6, 2, 4, 0, 2),
    t(7, 3, 4, 0, 1),
    t(7, 3, 4, 1, 1),
    t(7, 1, 5, 0, 1),
    t(7, 2, 5, 0, 1),
    t(7, 2, 5, 2, 2),
    t(9, 2, 5, 0, 0),
    t(8, 3, 5, 2, 0),
    t(9, 4, 5, 0, 0),
    t(9, 4, 5, 1, 0),
    t(7, 0, 6, 0, 1),
    t(7, 1, 6, 2, 1),
    t(7, 1, 6, 3, 1),
    t(8, 2, 6, 2, 0),
    t(11, 5, 6, 0, 0),
    t(8, 1, 7, 0, 1),
    t(8, 1, 7, 1, 1),
    t(11, 4, 7, 1, 0),
];

/// JSON shape of `constants.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantTables {
    pub xex: Vec<Vec<i64>>,
    pub counterexamples: Vec<Vec<i64>>,
    pub cor_main_exceptions: Vec<Vec<i64>>,
    pub sporadic30: Vec<Vec<i64>>,
}

impl ConstantTables {
    pub fn embedded() -> Self {
        let tuples = |it: &mut dyn Iterator<Item = &Tuple>| {
            it.map(|x| <[i64; 5]>::from(*x).to_vec()).collect()
        };
        let triples = |xs: &[(i64, i64, i64)]| xs.iter().map(|&(d, g, r)| vec![d, g, r]).collect();
        ConstantTables {
            xex: tuples(&mut XEX.iter()),
            counterexamples: triples(&COUNTEREXAMPLES),
            cor_main_exceptions: triples(&COR_MAIN_EXCEPTIONS),
            sporadic30: tuples(&mut SPORADIC30.iter()),
        }
    }

    /// The `sporadic30` entries as tuples; malformed rows are rejected.
    pub fn sporadic_tuples(&self) -> Result<Vec<Tuple>, String> {
        self.sporadic30
            .iter()
            .map(|row| {
                <[i64; 5]>::try_from(row.as_slice())
                    .map(Tuple::from)
                    .map_err(|_| format!("sporadic30 row {row:?} does not have 5 entries"))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::tuple::is_good;

    #[test]
    fn sizes() {
        assert_eq!(XEX.len(), 12);
        assert_eq!(COUNTEREXAMPLES.len(), 5);
        assert_eq!(COR_MAIN_EXCEPTIONS.len(), 4);
        let uniq: BTreeSet<_> = SPORADIC30.iter().collect();
        assert_eq!(uniq.len(), 30);
        let uniq: BTreeSet<_> = XEX.iter().collect();
        assert_eq!(uniq.len(), 12);
        assert!(COR_MAIN_EXCEPTIONS
            .iter()
            .all(|x| COUNTEREXAMPLES.contains(x)));
    }

    #[test]
    fn xex_members_are_not_good() {
        for x in XEX.iter() {
            assert!(is_good(x)
                .failures
                .contains(&crate::tuple::GoodnessFailure::InXExList));
        }
    }

    #[test]
    fn sporadic_members_are_good() {
        for x in &SPORADIC30 {
            assert!(is_good(x).is_good, "{x}");
        }
    }

    #[test]
    fn json_round_trip() {
        let c = ConstantTables::embedded();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"xex\":[[5,2,3,0,0]"));
        let back: ConstantTables = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.sporadic_tuples().unwrap(), SPORADIC30.to_vec());
    }
}
