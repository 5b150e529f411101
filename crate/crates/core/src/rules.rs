//! Reduction rules as checked implications.
//!
//! Each rule takes a tuple and an explicit parameter choice, validates every
//! hypothesis exactly and returns the subgoal tuples whose hypotheses imply
//! the source's. [`enumerate_instances`] walks every valid parameter choice
//! in canonical (lexicographically sorted parameter vector) order.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::erasability::{ErasabilityCache, RoleMode};
use crate::error::RuleError;
use crate::rational::{window_integers, within_window};
use crate::tuple::{good, Tuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleId {
    GatherLines,
    PeelOnion,
    PancakeOnions,
    M0Delta2,
    M0Delta4,
    M0Delta35,
    TwoProj,
    Delta5,
    Delta1Step,
    Master,
    Master111,
    MasterErasable,
}

impl RuleId {
    /// Search order: cheap guards first, the erasability search last.
    pub const ALL: [RuleId; 12] = [
        RuleId::GatherLines,
        RuleId::PeelOnion,
        RuleId::PancakeOnions,
        RuleId::M0Delta2,
        RuleId::M0Delta4,
        RuleId::M0Delta35,
        RuleId::TwoProj,
        RuleId::Delta5,
        RuleId::Delta1Step,
        RuleId::Master,
        RuleId::Master111,
        RuleId::MasterErasable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::GatherLines => "gather-lines",
            RuleId::PeelOnion => "peel-onion",
            RuleId::PancakeOnions => "pancake-onions",
            RuleId::M0Delta2 => "m0-delta2",
            RuleId::M0Delta4 => "m0-delta4",
            RuleId::M0Delta35 => "m0-delta35",
            RuleId::TwoProj => "two-proj",
            RuleId::Delta5 => "delta5",
            RuleId::Delta1Step => "delta1-step",
            RuleId::Master => "master",
            RuleId::Master111 => "master111",
            RuleId::MasterErasable => "master-erasable",
        }
    }

    /// Rules from the inductive-arguments family (everything except the
    /// erasability variant and the delta = 1 recursion).
    pub fn is_basic(self) -> bool {
        !matches!(self, RuleId::MasterErasable | RuleId::Delta1Step)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// Integer parameters of a rule instance. Only the fields a rule reads are
/// set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RuleParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell_prime: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_prime: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_dprime: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_prime: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_prime: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_in: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_out: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sum_n: Option<i64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub any_ni_is_2: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
}

impl fmt::Display for RuleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fields = [
            ("l'", self.ell_prime),
            ("m'", self.m_prime),
            ("m''", self.m_dprime),
            ("d'", self.d_prime),
            ("g'", self.g_prime),
            ("eps_in", self.eps_in),
            ("eps_out", self.eps_out),
            ("sum_n", self.sum_n),
            ("eps", self.eps),
            ("k", self.k),
        ];
        let mut first = true;
        for (name, v) in fields {
            if let Some(v) = v {
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{name}={v}")?;
                first = false;
            }
        }
        if self.any_ni_is_2 {
            if !first {
                f.write_str(" ")?;
            }
            f.write_str("some_n=2")?;
        }
        Ok(())
    }
}

/// A rule plus its parameters; the serialized form used in certificates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub params: RuleParams,
}

pub type Subgoals = Vec<Tuple>;

fn default_cache() -> &'static ErasabilityCache {
    static CACHE: OnceLock<ErasabilityCache> = OnceLock::new();
    CACHE.get_or_init(|| ErasabilityCache::new(RoleMode::default()))
}

macro_rules! require {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(RuleError::PreconditionViolated(format!($($msg)+)));
        }
    };
}

fn get(v: Option<i64>, name: &'static str) -> Result<i64, RuleError> {
    v.ok_or(RuleError::MissingParam(name))
}

/// Inclusive range of feasible `sum n_i` for `m'` integers with
/// `n_i = r - 1 mod 2`, `2 <= n_i <= r - 1`, and `n_i != 2` when
/// `forbid_two`. Values in the range with the parity of `m'(r - 1)` are
/// exactly the achievable sums.
pub fn sum_n_range(m_prime: i64, r: i64, forbid_two: bool) -> Option<(i64, i64)> {
    if m_prime == 0 {
        return Some((0, 0));
    }
    let n_min = match (r % 2 == 1, forbid_two) {
        (true, false) => 2,
        (true, true) => 4,
        (false, _) => 3,
    };
    if n_min > r - 1 {
        return None;
    }
    Some((m_prime * n_min, m_prime * (r - 1)))
}

/// Whether every multiset realising `sum` must contain a 2.
fn sum_needs_two(sum: i64, m_prime: i64, r: i64) -> bool {
    r % 2 == 1 && m_prime > 0 && sum < 4 * m_prime
}

/// Whether some multiset realising `sum` contains a 2.
fn sum_allows_two(sum: i64, m_prime: i64, r: i64) -> bool {
    r % 2 == 1 && m_prime > 0 && 2 * (m_prime - 1) <= sum - 2 && sum - 2 <= (m_prime - 1) * (r - 1)
}

fn check_ni(
    r: i64,
    m_prime: i64,
    sum: i64,
    any_two: bool,
    forbid_two: bool,
) -> Result<(), RuleError> {
    let (lo, hi) = sum_n_range(m_prime, r, false).ok_or_else(|| {
        RuleError::PreconditionViolated(format!(
            "no n_i with 2 <= n_i <= r - 1 = {} of parity r - 1",
            r - 1
        ))
    })?;
    require!(
        lo <= sum && sum <= hi && (sum - lo) % 2 == 0,
        "sum n_i = {sum} is not a sum of {m_prime} integers n_i = r - 1 mod 2 with 2 <= n_i <= {}",
        r - 1
    );
    if any_two {
        require!(
            sum_allows_two(sum, m_prime, r),
            "no realisation of sum n_i = {sum} contains n_i = 2"
        );
    } else {
        require!(
            !sum_needs_two(sum, m_prime, r),
            "sum n_i = {sum} forces some n_i = 2"
        );
    }
    if forbid_two {
        require!(!any_two, "n_i = 2 is excluded when (d', g) = (r + 1, 1)");
    }
    Ok(())
}

fn bar_ell(t: &Tuple, ell_prime: i64, m_prime: i64, sum: i64) -> Result<i64, RuleError> {
    let excess = (t.r - 1) * m_prime - sum;
    if excess % 2 != 0 {
        return Err(RuleError::NonIntegralBarEll(excess));
    }
    Ok(t.ell - ell_prime + excess / 2)
}

/// Hypotheses shared by the two master arguments.
fn check_master_common(
    t: &Tuple,
    ell_p: i64,
    m_p: i64,
    d_p: i64,
    sum: i64,
    any_two: bool,
) -> Result<(), RuleError> {
    let (d, g, r, ell, m) = (t.d, t.g, t.r, t.ell, t.m);
    require!(0 <= ell_p && ell_p <= ell, "0 <= l' <= l");
    require!(0 <= m_p && m_p <= m, "0 <= m' <= m");
    require!(r != 3 || m_p == 0, "m' = 0 when r = 3");
    require!(g + r <= d_p && d_p <= d, "g + r <= d' <= d");
    require!(
        !(g == 0 && m != 0) || d_p > g + r,
        "d' > g + r when g = 0 and m != 0"
    );
    check_ni(r, m_p, sum, any_two, (d_p, g) == (r + 1, 1))
}

fn apply_master(t: &Tuple, p: &RuleParams) -> Result<Subgoals, RuleError> {
    let (ell_p, m_p, d_p, sum) = (
        get(p.ell_prime, "ell_prime")?,
        get(p.m_prime, "m_prime")?,
        get(p.d_prime, "d_prime")?,
        get(p.sum_n, "sum_n")?,
    );
    check_master_common(t, ell_p, m_p, d_p, sum, p.any_ni_is_2)?;
    require!(2 * m_p + ell_p <= t.r - 2, "2m' + l' <= r - 2");
    let center = ell_p + 2 * (t.d - d_p) + sum;
    require!(
        within_window(t.delta_numerator(), t.r, center, 1),
        "|delta - {center}| <= 1 - 1/(r - 1)"
    );
    let lb = bar_ell(t, ell_p, m_p, sum)?;
    Ok(vec![Tuple::new(d_p - 1, t.g, t.r - 1, lb, t.m - m_p)])
}

fn apply_master111(t: &Tuple, p: &RuleParams) -> Result<Subgoals, RuleError> {
    let (ell_p, m_p, d_p, sum) = (
        get(p.ell_prime, "ell_prime")?,
        get(p.m_prime, "m_prime")?,
        get(p.d_prime, "d_prime")?,
        get(p.sum_n, "sum_n")?,
    );
    check_master_common(t, ell_p, m_p, d_p, sum, p.any_ni_is_2)?;
    require!(m_p < t.m, "m' < m");
    require!(2 * m_p + ell_p < t.r - 2, "2m' + l' < r - 2");
    let center = 1 + ell_p + 2 * (t.d - d_p) + sum;
    require!(
        within_window(t.delta_numerator(), t.r, center, 1),
        "|delta - {center}| <= 1 - 1/(r - 1)"
    );
    let lb = bar_ell(t, ell_p, m_p, sum)?;
    let mb = t.m - m_p;
    Ok(vec![
        Tuple::new(d_p - 1, t.g, t.r - 1, lb, mb),
        Tuple::new(d_p - 1, t.g, t.r - 1, lb, mb - 1),
        Tuple::new(d_p - 2, t.g, t.r - 2, lb, mb),
    ])
}

/// Centre of the delta window for the erasability argument, without the
/// `sum n_i` term.
fn erasable_center_base(
    t: &Tuple,
    ell_p: i64,
    m_p: i64,
    m_pp: i64,
    g_p: i64,
    eps_in: i64,
    eps_out: i64,
) -> i64 {
    let dg = t.g - g_p;
    let twists = (2 * eps_out + 3 * dg + t.m + m_p + ell_p).div_euclid(t.r - 1);
    2 * eps_in + dg + m_pp + ell_p + twists
}

fn erasable_sources(
    t: &Tuple,
    ell_p: i64,
    m_p: i64,
    m_pp: i64,
    g_p: i64,
    eps_out: i64,
) -> [u32; 5] {
    [
        (ell_p + t.m - m_p - m_pp) as u32,
        eps_out as u32,
        m_p as u32,
        (t.g - g_p) as u32,
        m_pp as u32,
    ]
}

fn apply_master_erasable(
    t: &Tuple,
    p: &RuleParams,
    cache: &ErasabilityCache,
) -> Result<Subgoals, RuleError> {
    let (d, g, r, ell, m) = (t.d, t.g, t.r, t.ell, t.m);
    let ell_p = get(p.ell_prime, "ell_prime")?;
    let m_p = get(p.m_prime, "m_prime")?;
    let m_pp = get(p.m_dprime, "m_dprime")?;
    let d_p = get(p.d_prime, "d_prime")?;
    let g_p = get(p.g_prime, "g_prime")?;
    let eps_in = get(p.eps_in, "eps_in")?;
    let eps_out = get(p.eps_out, "eps_out")?;
    let sum = get(p.sum_n, "sum_n")?;
    require!(0 <= ell_p && ell_p <= ell, "0 <= l' <= l");
    require!(
        m_p >= 0 && m_pp >= 0 && m_p + m_pp <= m,
        "m', m'' >= 0 and m' + m'' <= m"
    );
    require!(r != 3 || m_p == 0, "m' = 0 when r = 3");
    require!(0 <= g_p && g_p <= g, "0 <= g' <= g");
    require!(
        g_p + r <= d_p && d_p <= d - g + g_p,
        "g' + r <= d' <= d - g + g'"
    );
    require!(
        !(g_p == 0 && m != 0) || d_p > g_p + r,
        "d' > g' + r when g' = 0 and m != 0"
    );
    require!(
        eps_in >= 0 && eps_out >= 0 && eps_in + eps_out == d - g - d_p + g_p,
        "eps_in, eps_out >= 0 with eps_in + eps_out = d - g - d' + g'"
    );
    check_ni(r, m_p, sum, p.any_ni_is_2, (d_p, g_p) == (r + 1, 1))?;
    let center = erasable_center_base(t, ell_p, m_p, m_pp, g_p, eps_in, eps_out) + sum;
    require!(
        within_window(t.delta_numerator(), r, center, 1),
        "|delta - {center}| <= 1 - 1/(r - 1)"
    );
    let sources = erasable_sources(t, ell_p, m_p, m_pp, g_p, eps_out);
    require!(
        cache.sources_erasable(r as u32, sources),
        "collection (s10, s11, s20, s21, w10) = {sources:?} is not erasable"
    );
    let lb = bar_ell(t, ell_p, m_p, sum)?;
    Ok(((m - m_p - m_pp)..=(m - m_p))
        .map(|mb| Tuple::new(d_p - 1, g_p, r - 1, lb, mb))
        .collect())
}

/// Applies `rule` to `t` with parameters `p`, checking every hypothesis.
pub fn apply(rule: RuleId, t: &Tuple, p: &RuleParams) -> Result<Subgoals, RuleError> {
    apply_with(rule, t, p, default_cache())
}

/// As [`apply`], with an explicit erasability cache (and hence combination
/// semantics).
pub fn apply_with(
    rule: RuleId,
    t: &Tuple,
    p: &RuleParams,
    cache: &ErasabilityCache,
) -> Result<Subgoals, RuleError> {
    let (d, g, r, ell, m) = (t.d, t.g, t.r, t.ell, t.m);
    require!(r >= 3, "r >= 3");
    require!(g >= 0 && ell >= 0 && m >= 0, "g, l, m >= 0");
    let n = t.delta_numerator();
    match rule {
        RuleId::Master => apply_master(t, p),
        RuleId::Master111 => apply_master111(t, p),
        RuleId::MasterErasable => apply_master_erasable(t, p, cache),
        RuleId::GatherLines => {
            require!(d >= g + 2 * r - 1, "d >= g + 2r - 1");
            Ok(vec![Tuple::new(d - (r - 1), g, r, ell, m)])
        }
        RuleId::PeelOnion => {
            require!(g >= r, "g >= r");
            require!(good(t), "source tuple is good");
            Ok(vec![Tuple::new(d - (r - 1), g - r, r, ell, m + 1)])
        }
        RuleId::PancakeOnions => {
            require!(m >= r - 1, "m >= r - 1");
            Ok(vec![Tuple::new(d, g, r, ell, m - (r - 1))])
        }
        RuleId::TwoProj => {
            let eps = get(p.eps, "eps")?;
            require!(ell == 0 && m == 1, "l = 0 and m = 1");
            require!(
                eps >= 0 && 2 * eps <= d - g - r,
                "0 <= eps <= (d - g - r)/2"
            );
            require!(
                g != 0 || 2 * eps < d - g - r,
                "eps < (d - g - r)/2 when g = 0"
            );
            require!(
                within_window(n, r, 2 * eps + 1, 2),
                "|delta - (2eps + 1)| <= 1 - 2/(r - 1)"
            );
            Ok(vec![Tuple::new(d - 2 * eps - 2, g, r - 2, 0, 1)])
        }
        RuleId::Delta5 => {
            let k = get(p.k, "k")?;
            require!(k >= 3, "k >= 3");
            require!(
                *t == Tuple::new(4 * k + 1, 2 * k - 1, 2 * k + 1, 0, 1),
                "tuple is (4k + 1, 2k - 1, 2k + 1, 0, 1)"
            );
            Ok(vec![Tuple::new(4 * k - 3, 2 * k - 2, 2 * k - 1, k - 3, 0)])
        }
        RuleId::M0Delta2 => {
            require!(m == 0 && g >= 1, "m = 0 and g >= 1");
            require!(within_window(n, r, 2, 1), "|delta - 2| <= 1 - 1/(r - 1)");
            Ok(vec![Tuple::new(d - 2, g - 1, r - 1, ell + 1, 0)])
        }
        RuleId::M0Delta35 => {
            let eps = get(p.eps, "eps")?;
            require!(m == 0 && g >= 3 && r >= 6, "m = 0, g >= 3 and r >= 6");
            require!(
                eps >= 0 && 3 * eps <= d - g - r,
                "0 <= eps <= (d - g - r)/3"
            );
            require!(
                within_window(n, r, 2 * eps + 3, 3),
                "|delta - (2eps + 3)| <= 1 - 3/(r - 1)"
            );
            let d2 = d - 3 * eps - 6;
            Ok(vec![
                Tuple::new(d2, g - 3, r - 3, ell + 1, 0),
                Tuple::new(d2, g - 3, r - 3, ell, 0),
            ])
        }
        RuleId::M0Delta4 => {
            require!(m == 0 && g >= 3 && r >= 6, "m = 0, g >= 3 and r >= 6");
            require!(within_window(n, r, 4, 2), "|delta - 4| <= 1 - 2/(r - 1)");
            Ok(vec![
                Tuple::new(d - 5, g - 3, r - 2, ell + 1, 0),
                Tuple::new(d - 5, g - 3, r - 2, ell, 0),
            ])
        }
        RuleId::Delta1Step => {
            require!(ell == 0 && m == 0, "l = m = 0");
            require!(2 * d + 2 * g == 3 * r - 1, "2d + 2g = 3r - 1");
            require!(d > g + r, "d > g + r");
            Ok(vec![Tuple::new(d - 3, g, r - 2, 0, 0)])
        }
    }
}

/// One enumerated instance with its subgoals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub rule: RuleId,
    pub params: RuleParams,
    pub subgoals: Subgoals,
}

/// Walks every valid instance of `rule` on `t` whose subgoals all satisfy
/// `accept`, in canonical order, until `visit` breaks.
pub fn for_each_instance<B>(
    rule: RuleId,
    t: &Tuple,
    cache: &ErasabilityCache,
    accept: &dyn Fn(&Tuple) -> bool,
    visit: &mut dyn FnMut(Instance) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if t.r < 3 || t.g < 0 || t.ell < 0 || t.m < 0 {
        return ControlFlow::Continue(());
    }
    let mut emit = |params: RuleParams| -> ControlFlow<B> {
        match apply_with(rule, t, &params, cache) {
            Ok(subgoals) if subgoals.iter().all(accept) => visit(Instance {
                rule,
                params,
                subgoals,
            }),
            _ => ControlFlow::Continue(()),
        }
    };
    let (d, g, r, ell, m) = (t.d, t.g, t.r, t.ell, t.m);
    match rule {
        RuleId::GatherLines
        | RuleId::PeelOnion
        | RuleId::PancakeOnions
        | RuleId::M0Delta2
        | RuleId::M0Delta4
        | RuleId::Delta1Step => emit(RuleParams::default()),
        RuleId::TwoProj | RuleId::M0Delta35 => {
            let step = if rule == RuleId::TwoProj { 2 } else { 3 };
            let mut eps = 0;
            while step * eps <= d - g - r {
                emit(RuleParams {
                    eps: Some(eps),
                    ..Default::default()
                })?;
                eps += 1;
            }
            ControlFlow::Continue(())
        }
        RuleId::Delta5 => {
            if r % 2 == 1 {
                emit(RuleParams {
                    k: Some((r - 1) / 2),
                    ..Default::default()
                })
            } else {
                ControlFlow::Continue(())
            }
        }
        RuleId::Master | RuleId::Master111 => {
            let extra = i64::from(rule == RuleId::Master111);
            let (wlo, whi) = window_integers(t.delta_numerator(), r, 1);
            for ell_p in 0..=ell {
                let m_max = if r == 3 { 0 } else { m };
                for m_p in 0..=m_max {
                    for d_p in (g + r)..=d {
                        let forbid = (d_p, g) == (r + 1, 1);
                        let Some((slo, shi)) = sum_n_range(m_p, r, forbid) else {
                            continue;
                        };
                        let base = extra + ell_p + 2 * (d - d_p);
                        for_each_sum(slo.max(wlo - base), shi.min(whi - base), slo, |sum| {
                            emit(RuleParams {
                                ell_prime: Some(ell_p),
                                m_prime: Some(m_p),
                                d_prime: Some(d_p),
                                sum_n: Some(sum),
                                any_ni_is_2: sum_needs_two(sum, m_p, r),
                                ..Default::default()
                            })
                        })?;
                    }
                }
            }
            ControlFlow::Continue(())
        }
        RuleId::MasterErasable => {
            let (wlo, whi) = window_integers(t.delta_numerator(), r, 1);
            for ell_p in 0..=ell {
                let m_max = if r == 3 { 0 } else { m };
                for m_p in 0..=m_max {
                    for m_pp in 0..=(m - m_p) {
                        for d_p in r..=d {
                            for g_p in 0..=g {
                                if d_p < g_p + r || d_p > d - g + g_p {
                                    continue;
                                }
                                if g_p == 0 && m != 0 && d_p == r {
                                    continue;
                                }
                                let forbid = (d_p, g_p) == (r + 1, 1);
                                let Some((slo, shi)) = sum_n_range(m_p, r, forbid) else {
                                    continue;
                                };
                                let total = d - g - d_p + g_p;
                                for eps_in in 0..=total {
                                    let eps_out = total - eps_in;
                                    let base = erasable_center_base(
                                        t, ell_p, m_p, m_pp, g_p, eps_in, eps_out,
                                    );
                                    let (lo, hi) = (slo.max(wlo - base), shi.min(whi - base));
                                    if lo > hi {
                                        continue;
                                    }
                                    let sources =
                                        erasable_sources(t, ell_p, m_p, m_pp, g_p, eps_out);
                                    if !cache.sources_erasable(r as u32, sources) {
                                        continue;
                                    }
                                    for_each_sum(lo, hi, slo, |sum| {
                                        emit(RuleParams {
                                            ell_prime: Some(ell_p),
                                            m_prime: Some(m_p),
                                            m_dprime: Some(m_pp),
                                            d_prime: Some(d_p),
                                            g_prime: Some(g_p),
                                            eps_in: Some(eps_in),
                                            eps_out: Some(eps_out),
                                            sum_n: Some(sum),
                                            any_ni_is_2: sum_needs_two(sum, m_p, r),
                                            ..Default::default()
                                        })
                                    })?;
                                }
                            }
                        }
                    }
                }
            }
            ControlFlow::Continue(())
        }
    }
}

/// Sums in `[lo, hi]` with the parity of `anchor`.
fn for_each_sum<B>(
    lo: i64,
    hi: i64,
    anchor: i64,
    mut f: impl FnMut(i64) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let mut s = lo + (lo - anchor).rem_euclid(2);
    while s <= hi {
        f(s)?;
        s += 2;
    }
    ControlFlow::Continue(())
}

/// Every valid instance of `rule` on `t` whose subgoals satisfy `accept`.
pub fn enumerate_instances(
    rule: RuleId,
    t: &Tuple,
    accept: &dyn Fn(&Tuple) -> bool,
) -> Vec<Instance> {
    enumerate_instances_with(rule, t, default_cache(), accept)
}

pub fn enumerate_instances_with(
    rule: RuleId,
    t: &Tuple,
    cache: &ErasabilityCache,
    accept: &dyn Fn(&Tuple) -> bool,
) -> Vec<Instance> {
    let mut out = Vec::new();
    let _ = for_each_instance::<()>(rule, t, cache, accept, &mut |i| {
        out.push(i);
        ControlFlow::Continue(())
    });
    out
}

/// First instance in canonical order, if any.
pub fn first_instance(
    rule: RuleId,
    t: &Tuple,
    cache: &ErasabilityCache,
    accept: &dyn Fn(&Tuple) -> bool,
) -> Option<Instance> {
    match for_each_instance(rule, t, cache, accept, &mut |i| ControlFlow::Break(i)) {
        ControlFlow::Break(i) => Some(i),
        ControlFlow::Continue(()) => None,
    }
}
