//! The modification calculus at a single point.
//!
//! A modification limiting into the projection point `p` is summarised by
//! the ranks `t1 >= t2` of its two subspaces and whether the larger one is
//! strongly or only weakly general. Points are limited into `p` one at a
//! time; each step must fall into one of five combination cases. A
//! collection is *erasable* when some order ends with `t2 = 0` and a
//! strongly general `t1`-space.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::CalculusError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strength {
    Strong,
    Weak,
}

impl Strength {
    fn and(self, other: Strength) -> Strength {
        if self == Strength::Strong && other == Strength::Strong {
            Strength::Strong
        } else {
            Strength::Weak
        }
    }
}

/// Rank data `(t1, t2, strength)` of one marked point's modification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModType {
    pub t1: u32,
    pub t2: u32,
    pub strength: Strength,
}

impl ModType {
    pub const fn new(t1: u32, t2: u32, strength: Strength) -> Self {
        ModType { t1, t2, strength }
    }

    /// Peeled 1-secant line limited into `p`.
    pub const ONE_SECANT: ModType = ModType::new(1, 1, Strength::Strong);
    /// Peeled 2-secant line limited into `p`.
    pub const TWO_SECANT: ModType = ModType::new(2, 1, Strength::Strong);
    /// Rational curve degenerated to lines and conics through `p`.
    pub const ONION: ModType = ModType::new(2, 0, Strength::Strong);
    /// A point-pair endpoint, or a rational curve routed through `p`.
    pub const POINT: ModType = ModType::new(1, 0, Strength::Strong);
    /// Rational curve split off a line before projecting.
    pub const WEAK_POINT: ModType = ModType::new(1, 0, Strength::Weak);

    /// Stable name, e.g. `s2,1` or `w1,0`.
    pub fn name(&self) -> String {
        let tag = match self.strength {
            Strength::Strong => 's',
            Strength::Weak => 'w',
        };
        format!("{tag}{},{}", self.t1, self.t2)
    }

    pub fn parse_name(s: &str) -> Option<ModType> {
        let strength = match s.chars().next()? {
            's' => Strength::Strong,
            'w' => Strength::Weak,
            _ => return None,
        };
        let (a, b) = s[1..].split_once(',')?;
        Some(ModType::new(
            a.trim().parse().ok()?,
            b.trim().parse().ok()?,
            strength,
        ))
    }
}

impl fmt::Display for ModType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Accumulated transformation `(np)[p -> L1][p -> L2]` at the projection point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AccState {
    pub t1: u32,
    pub t2: u32,
    pub strength: Strength,
    pub twist: u32,
}

impl AccState {
    pub fn from_type(m: ModType) -> Self {
        AccState {
            t1: m.t1,
            t2: m.t2,
            strength: m.strength,
            twist: 0,
        }
    }

    /// `(r - 1) n + t1 + t2`, conserved by every combination.
    pub fn euler_weight(&self, r: u32) -> u32 {
        (r - 1) * self.twist + self.t1 + self.t2
    }

    pub fn is_final(&self) -> bool {
        self.t2 == 0 && self.strength == Strength::Strong
    }
}

/// A full-rank first subspace is a twist: `(t1, t2) = (r-1, t2)` becomes
/// `(t2, 0)`, strongly general, with one more twist.
pub fn normalize(s: AccState, r: u32) -> Result<AccState, CalculusError> {
    let mut s = s;
    if s.t1 > r - 1 {
        return Err(CalculusError::RankTooLarge {
            t1: s.t1,
            max: r - 1,
        });
    }
    while s.t1 == r - 1 && (s.t1 > 0 || s.t2 > 0) {
        s = AccState {
            t1: s.t2,
            t2: 0,
            strength: Strength::Strong,
            twist: s.twist + 1,
        };
    }
    Ok(s)
}

/// The five combination cases, labelled as in the calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CombineCase {
    A,
    B,
    C,
    D,
    E,
}

/// Whether the asymmetric cases may also be read with the roles of the
/// accumulated state and the incoming point exchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum RoleMode {
    /// Accumulated state unprimed, incoming point primed.
    Strict,
    /// Try both assignments.
    #[default]
    Symmetric,
}

/// Every case whose guard holds with `acc` unprimed and `inc` primed.
fn cases(acc: AccState, inc: AccState, r: u32) -> Vec<(CombineCase, AccState)> {
    let full = r - 1;
    let (t1, t2, t1p, t2p) = (acc.t1, acc.t2, inc.t1, inc.t2);
    let twist = acc.twist + inc.twist;
    let mut out = Vec::with_capacity(2);
    if t1 + t1p < full {
        out.push((
            CombineCase::A,
            AccState {
                t1: t1 + t1p,
                t2: t2 + t2p,
                strength: acc.strength.and(inc.strength),
                twist,
            },
        ));
    }
    if t2 + t2p < full && t1 + t1p == full {
        out.push((
            CombineCase::B,
            AccState {
                t1: t2 + t2p,
                t2: 0,
                strength: Strength::Strong,
                twist: twist + 1,
            },
        ));
    }
    if t2p == 0 && t1p + t2 <= full && full <= t1p + t1 {
        out.push((
            CombineCase::C,
            AccState {
                t1: t2 + t1 + t1p - full,
                t2: 0,
                strength: acc.strength.and(inc.strength),
                twist: twist + 1,
            },
        ));
    }
    if t1p + t2 < full && t1 + t2p == full {
        out.push((
            CombineCase::D,
            AccState {
                t1: t2 + t1p,
                t2: 0,
                strength: inc.strength,
                twist: twist + 1,
            },
        ));
    }
    if t1 + t2p == full && t1p + t2 == full {
        out.push((
            CombineCase::E,
            AccState {
                t1: 0,
                t2: 0,
                strength: Strength::Strong,
                twist: twist + 2,
            },
        ));
    }
    out
}

/// All states reachable by limiting `incoming` into `state`.
pub fn combine_all(
    state: AccState,
    incoming: ModType,
    r: u32,
    mode: RoleMode,
) -> Result<Vec<(CombineCase, AccState)>, CalculusError> {
    let inc = normalize(AccState::from_type(incoming), r)?;
    let mut out = cases(state, inc, r);
    if mode == RoleMode::Symmetric {
        out.extend(cases(inc, state, r));
    }
    let mut seen = Vec::with_capacity(out.len());
    for (case, s) in out {
        let s = normalize(s, r)?;
        debug_assert_eq!(
            s.euler_weight(r),
            state.euler_weight(r) + inc.euler_weight(r),
            "combination must conserve (r-1)n + t1 + t2"
        );
        if !seen.iter().any(|&(_, x)| x == s) {
            seen.push((case, s));
        }
    }
    Ok(seen)
}

/// First applicable case, preferring the direct role assignment and then
/// cases (a) through (e). `None` means the ordering dies here.
pub fn combine(state: AccState, incoming: ModType, r: u32) -> Option<AccState> {
    combine_all(state, incoming, r, RoleMode::default())
        .ok()?
        .first()
        .map(|&(_, s)| s)
}

/// Multiset of modification types.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModCollection {
    pub counts: std::collections::BTreeMap<ModType, u32>,
}

impl ModCollection {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, m: ModType, count: u32) -> &mut Self {
        if count > 0 {
            *self.counts.entry(m).or_insert(0) += count;
        }
        self
    }

    /// Collection assembled from the five source counts
    /// `(s10, s11, s20, s21, w10)`.
    pub fn from_sources(s10: u32, s11: u32, s20: u32, s21: u32, w10: u32) -> Self {
        let mut c = ModCollection::new();
        c.add(ModType::POINT, s10)
            .add(ModType::ONE_SECANT, s11)
            .add(ModType::ONION, s20)
            .add(ModType::TWO_SECANT, s21)
            .add(ModType::WEAK_POINT, w10);
        c
    }

    pub fn total(&self) -> u32 {
        self.counts.values().sum()
    }

    /// Flattened, sorted list of points.
    pub fn items(&self) -> Vec<ModType> {
        self.counts
            .iter()
            .flat_map(|(&m, &c)| std::iter::repeat_n(m, c as usize))
            .collect()
    }
}

/// JSON form `{"r": .., "s": {"i,j": c}, "w": {"i,j": c}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionJson {
    pub r: u32,
    #[serde(default)]
    pub s: std::collections::BTreeMap<String, u32>,
    #[serde(default)]
    pub w: std::collections::BTreeMap<String, u32>,
}

impl CollectionJson {
    pub fn from_collection(c: &ModCollection, r: u32) -> Self {
        let mut out = CollectionJson {
            r,
            s: Default::default(),
            w: Default::default(),
        };
        for (m, &n) in &c.counts {
            let key = format!("{},{}", m.t1, m.t2);
            match m.strength {
                Strength::Strong => out.s.insert(key, n),
                Strength::Weak => out.w.insert(key, n),
            };
        }
        out
    }

    pub fn to_collection(&self) -> Result<ModCollection, String> {
        let mut c = ModCollection::new();
        for (map, strength) in [(&self.s, Strength::Strong), (&self.w, Strength::Weak)] {
            for (k, &n) in map {
                let (a, b) = k
                    .split_once(',')
                    .ok_or_else(|| format!("bad type key `{k}`"))?;
                let t1 = a
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad type key `{k}`"))?;
                let t2 = b
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad type key `{k}`"))?;
                if t2 > t1 {
                    return Err(format!("type `{k}` has t2 > t1"));
                }
                c.add(ModType::new(t1, t2, strength), n);
            }
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct MemoKey {
    t1: u32,
    t2: u32,
    strength: Strength,
    remaining: Vec<u32>,
}

struct Search<'a> {
    types: &'a [ModType],
    r: u32,
    mode: RoleMode,
    memo: HashMap<MemoKey, bool>,
}

impl Search<'_> {
    fn run(&mut self, state: AccState, remaining: &mut Vec<u32>, order: &mut Vec<ModType>) -> bool {
        if remaining.iter().all(|&c| c == 0) {
            return state.is_final();
        }
        // twist never influences a guard, so it is left out of the key
        let key = MemoKey {
            t1: state.t1,
            t2: state.t2,
            strength: state.strength,
            remaining: remaining.clone(),
        };
        if let Some(&known) = self.memo.get(&key) {
            if !known {
                return false;
            }
        }
        for i in 0..self.types.len() {
            if remaining[i] == 0 {
                continue;
            }
            let Ok(next) = combine_all(state, self.types[i], self.r, self.mode) else {
                continue;
            };
            remaining[i] -= 1;
            order.push(self.types[i]);
            for (_, s) in next {
                if self.run(s, remaining, order) {
                    remaining[i] += 1;
                    self.memo.insert(key, true);
                    return true;
                }
            }
            order.pop();
            remaining[i] += 1;
        }
        self.memo.insert(key, false);
        false
    }
}

/// Memoized existential search over limiting orders. Returns a witness
/// order when the collection is erasable.
pub fn is_erasable_with(
    c: &ModCollection,
    r: u32,
    mode: RoleMode,
) -> Result<(bool, Option<Vec<ModType>>), CalculusError> {
    if r < 3 {
        return Err(CalculusError::SmallR(r as i64));
    }
    if c.total() == 0 {
        return Ok((true, Some(Vec::new())));
    }
    let types: Vec<ModType> = c.counts.keys().copied().collect();
    let mut remaining: Vec<u32> = c.counts.values().copied().collect();
    let mut search = Search {
        types: &types,
        r,
        mode,
        memo: HashMap::new(),
    };
    for i in 0..types.len() {
        let first = normalize(AccState::from_type(types[i]), r)?;
        remaining[i] -= 1;
        let mut order = vec![types[i]];
        let found = search.run(first, &mut remaining, &mut order);
        remaining[i] += 1;
        if found {
            return Ok((true, Some(order)));
        }
    }
    Ok((false, None))
}

pub fn is_erasable(c: &ModCollection, r: u32) -> (bool, Option<Vec<ModType>>) {
    is_erasable_with(c, r, RoleMode::default()).unwrap_or((false, None))
}

/// Folds one fixed ordering through every applicable case.
pub fn order_is_erasable(order: &[ModType], r: u32, mode: RoleMode) -> Result<bool, CalculusError> {
    let Some((&first, rest)) = order.split_first() else {
        return Ok(true);
    };
    let mut frontier = vec![normalize(AccState::from_type(first), r)?];
    for &m in rest {
        let mut next = Vec::new();
        for &s in &frontier {
            for (_, x) in combine_all(s, m, r, mode)? {
                if !next.contains(&x) {
                    next.push(x);
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            return Ok(false);
        }
    }
    Ok(frontier.iter().any(AccState::is_final))
}

/// Permutation-by-permutation oracle with no memoization.
pub fn brute_force_erasable_with(
    c: &ModCollection,
    r: u32,
    mode: RoleMode,
) -> Result<bool, CalculusError> {
    if r < 3 {
        return Err(CalculusError::SmallR(r as i64));
    }
    let n = c.total();
    if n > 9 {
        return Err(CalculusError::TooLarge(n));
    }
    let mut items = c.items();
    loop {
        if order_is_erasable(&items, r, mode)? {
            return Ok(true);
        }
        if !next_permutation(&mut items) {
            return Ok(false);
        }
    }
}

pub fn brute_force_erasable(c: &ModCollection, r: u32) -> Result<bool, CalculusError> {
    brute_force_erasable_with(c, r, RoleMode::default())
}

/// Lexicographic successor; `false` once the last permutation is reached.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

type SourceMemo = HashMap<(u32, [u32; 5]), bool>;

/// Shared verdict cache for source-catalogue collections, keyed by
/// `(r, s10, s11, s20, s21, w10)`. Concurrent inserts of the same key are
/// idempotent.
#[derive(Clone, Default)]
pub struct ErasabilityCache {
    mode: RoleMode,
    map: Arc<RwLock<SourceMemo>>,
}

impl ErasabilityCache {
    pub fn new(mode: RoleMode) -> Self {
        ErasabilityCache {
            mode,
            map: Default::default(),
        }
    }

    pub fn mode(&self) -> RoleMode {
        self.mode
    }

    pub fn sources_erasable(&self, r: u32, sources: [u32; 5]) -> bool {
        if let Some(&v) = self.map.read().expect("cache poisoned").get(&(r, sources)) {
            return v;
        }
        let [s10, s11, s20, s21, w10] = sources;
        let c = ModCollection::from_sources(s10, s11, s20, s21, w10);
        let v = is_erasable_with(&c, r, self.mode)
            .map(|x| x.0)
            .unwrap_or(false);
        self.map
            .write()
            .expect("cache poisoned")
            .insert((r, sources), v);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Strength::*;

    fn st(t1: u32, t2: u32, strength: Strength, twist: u32) -> AccState {
        AccState {
            t1,
            t2,
            strength,
            twist,
        }
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            normalize(st(2, 1, Strong, 0), 3).unwrap(),
            st(1, 0, Strong, 1)
        );
        assert_eq!(
            normalize(st(1, 0, Strong, 0), 5).unwrap(),
            st(1, 0, Strong, 0)
        );
        assert_eq!(
            normalize(st(0, 0, Strong, 3), 4).unwrap(),
            st(0, 0, Strong, 3)
        );
        assert!(normalize(st(4, 0, Strong, 0), 4).is_err());
    }

    #[test]
    fn combine_examples() {
        let s = combine(st(1, 1, Strong, 0), ModType::new(1, 1, Strong), 7).unwrap();
        assert_eq!(s, st(2, 2, Strong, 0));

        let s = combine(st(3, 0, Strong, 0), ModType::new(3, 0, Strong), 7).unwrap();
        assert_eq!(s, st(0, 0, Strong, 1));

        let all = combine_all(
            st(4, 1, Strong, 0),
            ModType::new(3, 0, Weak),
            7,
            RoleMode::Strict,
        )
        .unwrap();
        assert_eq!(all, vec![(CombineCase::C, st(2, 0, Weak, 1))]);
    }

    #[test]
    fn case_e_and_d() {
        // t1 + t2' = t1' + t2 = r - 1
        let all = combine_all(
            st(3, 1, Strong, 0),
            ModType::new(3, 1, Strong),
            5,
            RoleMode::Strict,
        )
        .unwrap();
        assert!(all.contains(&(CombineCase::E, st(0, 0, Strong, 2))));
        // t1' + t2 < t1 + t2' = r - 1
        let all = combine_all(
            st(3, 0, Weak, 0),
            ModType::new(1, 1, Weak),
            5,
            RoleMode::Strict,
        )
        .unwrap();
        assert!(all.contains(&(CombineCase::D, st(1, 0, Weak, 1))));
    }

    #[test]
    fn erasable_examples() {
        assert!(is_erasable(&ModCollection::new(), 4).0);
        let c = ModCollection::from_sources(0, 0, 0, 0, 1);
        assert!(!is_erasable(&c, 5).0);
        assert!(!brute_force_erasable(&c, 5).unwrap());

        let c = ModCollection::from_sources(1, 0, 0, 2, 0);
        let (ok, witness) = is_erasable(&c, 3);
        assert!(ok);
        assert_eq!(witness.unwrap().len(), 3);
        for mode in [RoleMode::Strict, RoleMode::Symmetric] {
            for order in [
                [ModType::POINT, ModType::TWO_SECANT, ModType::TWO_SECANT],
                [ModType::TWO_SECANT, ModType::POINT, ModType::TWO_SECANT],
                [ModType::TWO_SECANT, ModType::TWO_SECANT, ModType::POINT],
            ] {
                assert!(order_is_erasable(&order, 3, mode).unwrap());
            }
        }

        let mut c = ModCollection::new();
        c.add(ModType::ONION, 2);
        assert!(is_erasable(&c, 5).0);
        assert!(brute_force_erasable(&c, 5).unwrap());

        let mut c = ModCollection::new();
        c.add(ModType::ONE_SECANT, 1);
        assert!(!is_erasable(&c, 4).0);
        assert!(!brute_force_erasable(&c, 4).unwrap());
    }

    #[test]
    fn brute_force_size_limit() {
        let c = ModCollection::from_sources(10, 0, 0, 0, 0);
        assert_eq!(
            brute_force_erasable(&c, 5),
            Err(CalculusError::TooLarge(10))
        );
    }

    #[test]
    fn names_round_trip() {
        for m in [ModType::POINT, ModType::WEAK_POINT, ModType::TWO_SECANT] {
            assert_eq!(ModType::parse_name(&m.name()), Some(m));
        }
        let c = ModCollection::from_sources(1, 2, 0, 1, 3);
        let j = CollectionJson::from_collection(&c, 6);
        assert_eq!(j.to_collection().unwrap(), c);
    }

    #[test]
    fn permutations_are_distinct() {
        let mut v = vec![1, 1, 2];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 3);
    }
}
