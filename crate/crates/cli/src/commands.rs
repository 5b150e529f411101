use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use bnint::erasability::{is_erasable_with, CollectionJson};
use bnint::tuple::{GoodnessFailure, VerdictReason};
use bnint::{
    bn_interpolation, is_good, max_points, run_sporadic_search, verify_certificate, verify_thm14,
    Certificate, ConstantTables, Justification, ModCollection, ModType, ProveError, Prover, RuleId,
    SearchConfig, Strength, Tuple,
};
use serde::Serialize;

use crate::config::{Format, Settings};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_EXCEPTION: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
pub const EXIT_IRREDUCIBLE: u8 = 4;

/// Rendered report and the exit code it implies.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Outcome {
    fn new(text: String, code: u8) -> Self {
        Outcome { text, code }
    }
}

/// An error that maps to a specific exit code; the message goes to stderr.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn no_csv(what: &str) -> Result<String> {
    bail!("`{what}` has no CSV form; use --format plain or json")
}

fn triple(d: i64, g: i64, r: i64) -> String {
    format!("({d},{g},{r})")
}

fn compact(t: &Tuple) -> String {
    format!("({},{},{},{},{})", t.d, t.g, t.r, t.ell, t.m)
}

#[derive(Serialize)]
struct CheckReport {
    d: i64,
    g: i64,
    r: i64,
    characteristic: u64,
    holds: bool,
    reason: VerdictReason,
}

pub fn check(s: &Settings, d: i64, g: i64, r: i64) -> Result<Outcome> {
    let v = bn_interpolation(d, g, r, s.characteristic)?;
    let characteristic = match s.characteristic {
        bnint::Characteristic::Zero => 0,
        bnint::Characteristic::Prime(p) => p,
    };
    let text = match s.format {
        Format::Json => json(&CheckReport {
            d,
            g,
            r,
            characteristic,
            holds: v.holds,
            reason: v.reason,
        })?,
        Format::Csv => format!(
            "d,g,r,char,holds\n{d},{g},{r},{characteristic},{}\n",
            v.holds
        ),
        Format::Plain => match v.reason {
            VerdictReason::Generic => "holds\n".into(),
            VerdictReason::SporadicException { d, g, r } => {
                format!("exception: {}\n", triple(d, g, r))
            }
            VerdictReason::Char2Rational => {
                format!(
                    "exception: {} in characteristic 2 (rational, d != 1 mod r - 1)\n",
                    triple(d, g, r)
                )
            }
        },
    };
    Ok(Outcome::new(
        text,
        if v.holds { EXIT_OK } else { EXIT_EXCEPTION },
    ))
}

#[derive(Serialize)]
struct PointsReport {
    d: i64,
    g: i64,
    r: i64,
    #[serde(flatten)]
    answer: bnint::tuple::PointCountAnswer,
}

pub fn max_points_cmd(s: &Settings, d: i64, g: i64, r: i64) -> Result<Outcome> {
    let a = max_points(d, g, r)?;
    let text = match s.format {
        Format::Json => json(&PointsReport { d, g, r, answer: a })?,
        Format::Csv => format!(
            "d,g,r,predicted_n,is_exception,exception_upper_bound\n{d},{g},{r},{},{},{}\n",
            a.predicted_n,
            a.is_exception,
            a.exception_upper_bound
                .map(|b| b.to_string())
                .unwrap_or_default()
        ),
        Format::Plain => match a.exception_upper_bound {
            None => format!("{}\n", a.predicted_n),
            Some(b) => format!(
                "exception: {} passes through at most {b} points (expected {})\n",
                triple(d, g, r),
                a.predicted_n
            ),
        },
    };
    Ok(Outcome::new(
        text,
        if a.is_exception {
            EXIT_EXCEPTION
        } else {
            EXIT_OK
        },
    ))
}

pub fn failure_label(f: GoodnessFailure) -> &'static str {
    match f {
        GoodnessFailure::DegreeBelowGPlusR => "d < g + r",
        GoodnessFailure::EllTooLarge => "2l > r",
        GoodnessFailure::MExceedsRho => "m > rho",
        GoodnessFailure::RationalResidue => "rational residue",
        GoodnessFailure::InXExList => "XEx",
        GoodnessFailure::NegativeField => "negative entry",
    }
}

fn not_good_message(t: &Tuple) -> String {
    let v = is_good(t);
    let labels: Vec<&str> = v.failures.iter().map(|&f| failure_label(f)).collect();
    format!("not good ({})", labels.join(", "))
}

#[derive(Serialize)]
struct GoodReport {
    tuple: Tuple,
    #[serde(flatten)]
    verdict: bnint::GoodnessVerdict,
}

pub fn good_cmd(s: &Settings, t: Tuple) -> Result<Outcome> {
    let v = is_good(&t);
    let text = match s.format {
        Format::Json => json(&GoodReport {
            tuple: t,
            verdict: v.clone(),
        })?,
        Format::Csv => no_csv("good")?,
        Format::Plain if v.is_good => "good\n".into(),
        Format::Plain => not_good_message(&t) + "\n",
    };
    Ok(Outcome::new(
        text,
        if v.is_good { EXIT_OK } else { EXIT_EXCEPTION },
    ))
}

#[derive(Serialize)]
struct DeltaReport {
    tuple: Tuple,
    numerator: i64,
    denominator: i64,
    delta: String,
}

pub fn delta_cmd(s: &Settings, t: Tuple) -> Result<Outcome> {
    let q = t.delta()?;
    let text = match s.format {
        Format::Json => json(&DeltaReport {
            tuple: t,
            numerator: *q.numer(),
            denominator: *q.denom(),
            delta: q.to_string(),
        })?,
        Format::Csv => format!(
            "d,g,r,l,m,delta\n{},{},{},{},{},{q}\n",
            t.d, t.g, t.r, t.ell, t.m
        ),
        Format::Plain => format!("{q}\n"),
    };
    Ok(Outcome::new(text, EXIT_OK))
}

pub struct SporadicArgs<'a> {
    pub expected: Option<&'a Path>,
    pub disabled: &'a [RuleId],
    pub r_max: i64,
    pub csv: Option<&'a Path>,
}

#[derive(Serialize)]
struct SporadicSummary<'a> {
    examined: usize,
    reducible: usize,
    irreducible: &'a [Tuple],
    unexpected: Vec<Tuple>,
    missing: Vec<Tuple>,
    rows: &'a [bnint::prover::SporadicRow],
}

#[derive(Serialize)]
struct CsvRow {
    d: i64,
    g: i64,
    r: i64,
    l: i64,
    m: i64,
    reducible: bool,
    rule: String,
    params: String,
    subgoals: String,
}

fn examined_csv(report: &bnint::SporadicReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &report.rows {
        let t = row.tuple;
        let (rule, params, subgoals) = match &row.witness {
            Some(i) => (
                i.rule.to_string(),
                i.params.to_string(),
                i.subgoals.iter().map(compact).collect::<Vec<_>>().join(" "),
            ),
            None => Default::default(),
        };
        w.serialize(CsvRow {
            d: t.d,
            g: t.g,
            r: t.r,
            l: t.ell,
            m: t.m,
            reducible: row.reducible,
            rule,
            params,
            subgoals,
        })?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Irreducible tuples as an aligned table, one block per `r`.
fn irreducible_table(ts: &[Tuple]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>3} {:>3} {:>3} {:>3} {:>3}",
        "r", "d", "g", "l", "m"
    );
    let mut last_r = None;
    for t in ts {
        if last_r.is_some() && last_r != Some(t.r) {
            out.push('\n');
        }
        last_r = Some(t.r);
        let _ = writeln!(
            out,
            "{:>3} {:>3} {:>3} {:>3} {:>3}",
            t.r, t.d, t.g, t.ell, t.m
        );
    }
    out
}

fn sorted_by_r(ts: &[Tuple]) -> Vec<Tuple> {
    let mut v = ts.to_vec();
    v.sort_by_key(|t| (t.r, t.d, t.g, t.ell, t.m));
    v
}

pub fn sporadic(s: &Settings, a: SporadicArgs) -> Result<Outcome> {
    let constants = match a.expected {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str::<ConstantTables>(&text)
                .with_context(|| format!("parsing {}", p.display()))?
        }
        None => ConstantTables::embedded(),
    };
    let expected = constants.sporadic_tuples().map_err(anyhow::Error::msg)?;
    if a.r_max < 3 {
        bail!("--rmax must be at least 3");
    }
    let mut cfg = SearchConfig {
        accept: s.accept,
        axioms: s.axioms.clone(),
        role_mode: s.roles,
        r_max: a.r_max,
        ..SearchConfig::default()
    };
    for &rule in a.disabled {
        cfg = cfg.without_rule(rule);
    }
    let report = run_sporadic_search(cfg);
    let want: BTreeSet<Tuple> = expected.into_iter().filter(|t| t.r <= a.r_max).collect();
    let got: BTreeSet<Tuple> = report.irreducible.iter().copied().collect();
    let unexpected: Vec<Tuple> = got.difference(&want).copied().collect();
    let missing: Vec<Tuple> = want.difference(&got).copied().collect();
    let matches = unexpected.is_empty() && missing.is_empty();

    if let Some(path) = a.csv {
        std::fs::write(path, examined_csv(&report)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let text = match s.format {
        Format::Json => json(&SporadicSummary {
            examined: report.examined,
            reducible: report.reducible,
            irreducible: &report.irreducible,
            unexpected: unexpected.clone(),
            missing: missing.clone(),
            rows: &report.rows,
        })?,
        Format::Csv => examined_csv(&report)?,
        Format::Plain => {
            let mut out = irreducible_table(&sorted_by_r(&report.irreducible));
            let _ = writeln!(
                out,
                "\n{} irreducible / {} examined",
                report.irreducible.len(),
                report.examined
            );
            for t in &unexpected {
                let _ = writeln!(out, "unexpected: {}", compact(t));
            }
            for t in &missing {
                let _ = writeln!(out, "missing: {}", compact(t));
            }
            out
        }
    };
    if !matches && s.format != Format::Plain {
        eprintln!("{} unexpected, {} missing", unexpected.len(), missing.len());
    }
    Ok(Outcome::new(
        text,
        if matches { EXIT_OK } else { EXIT_MISMATCH },
    ))
}

pub fn thm14(s: &Settings, r_min: i64, r_max: i64) -> Result<Outcome> {
    if r_min < 14 || r_max < r_min {
        bail!("need 14 <= rmin <= rmax, got rmin = {r_min}, rmax = {r_max}");
    }
    let report = verify_thm14(r_min, r_max);
    let violators = report.violators();
    let text = match s.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut out =
                String::from("r,box_examined,box_uncovered,outside_examined,outside_uncovered\n");
            for row in &report.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    row.r,
                    row.box_examined,
                    row.box_uncovered.len(),
                    row.outside_examined,
                    row.outside_uncovered.len()
                );
            }
            out
        }
        Format::Plain => {
            let mut out = format!(
                "{:>4} {:>10} {:>10} {:>10} {:>10}\n",
                "r", "box", "uncovered", "outside", "uncovered"
            );
            for row in &report.rows {
                let _ = writeln!(
                    out,
                    "{:>4} {:>10} {:>10} {:>10} {:>10}",
                    row.r,
                    row.box_examined,
                    row.box_uncovered.len(),
                    row.outside_examined,
                    row.outside_uncovered.len()
                );
            }
            for t in &violators {
                let _ = writeln!(out, "uncovered: {}", compact(t));
            }
            let _ = writeln!(out, "{} uncovered", violators.len());
            out
        }
    };
    Ok(Outcome::new(
        text,
        if violators.is_empty() {
            EXIT_OK
        } else {
            EXIT_MISMATCH
        },
    ))
}

fn render_certificate(c: &Certificate, stats: &bnint::certificate::CertStats) -> String {
    let mut out = String::new();
    for n in &c.nodes {
        let _ = match &n.justification {
            Justification::Axiom { tag, citation } => match citation {
                Some(cite) => writeln!(out, "{}  axiom {tag} [{cite}]", compact(&n.tuple)),
                None => writeln!(out, "{}  axiom {tag}", compact(&n.tuple)),
            },
            Justification::Rule {
                rule,
                params,
                children,
                proviso,
            } => {
                let kids: Vec<String> = children.iter().map(compact).collect();
                let _ = write!(
                    out,
                    "{}  {rule} {params} -> {}",
                    compact(&n.tuple),
                    kids.join(" ")
                );
                match proviso {
                    Some(p) => writeln!(out, "  (assuming {p})"),
                    None => writeln!(out),
                }
            }
        };
    }
    let _ = writeln!(
        out,
        "{} nodes ({} rules, {} axioms), depth {}",
        stats.nodes, stats.rule_nodes, stats.axiom_nodes, stats.depth
    );
    out
}

pub fn certify(s: &Settings, t: Tuple, json_out: Option<&Path>) -> Result<Outcome> {
    let cfg = SearchConfig {
        accept: s.accept,
        axioms: s.axioms.clone(),
        role_mode: s.roles,
        ..SearchConfig::default()
    };
    let prover = Prover::new(cfg);
    let c = match prover.certify(&t) {
        Ok(c) => c,
        Err(ProveError::NotGood(_)) => {
            return Err(Exit {
                code: EXIT_INPUT,
                message: not_good_message(&t),
            }
            .into());
        }
        Err(ProveError::Irreducible(b)) => {
            return Err(Exit {
                code: EXIT_IRREDUCIBLE,
                message: format!("irreducible: no rule or axiom applies to {}", compact(&b)),
            }
            .into());
        }
        Err(e) => return Err(e.into()),
    };
    let stats = verify_certificate(&c, &s.axioms)
        .context("internal error: fresh certificate fails verification")?;
    if let Some(p) = json_out {
        std::fs::write(p, c.to_json() + "\n")
            .with_context(|| format!("writing {}", p.display()))?;
    }
    let text = match s.format {
        Format::Json => c.to_json() + "\n",
        Format::Csv => no_csv("certify")?,
        Format::Plain => render_certificate(&c, &stats),
    };
    Ok(Outcome::new(text, EXIT_OK))
}

pub fn verify(s: &Settings, path: &Path) -> Result<Outcome> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let c = Certificate::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let stats = verify_certificate(&c, &s.axioms).map_err(|e| Exit {
        code: EXIT_INPUT,
        message: format!("certificate rejected: {e}"),
    })?;
    let text = match s.format {
        Format::Json => json(&stats)?,
        Format::Csv => format!(
            "nodes,rule_nodes,axiom_nodes,depth\n{},{},{},{}\n",
            stats.nodes, stats.rule_nodes, stats.axiom_nodes, stats.depth
        ),
        Format::Plain => format!(
            "valid certificate for {}: {} nodes, depth {}\n",
            compact(&c.root),
            stats.nodes,
            stats.depth
        ),
    };
    Ok(Outcome::new(text, EXIT_OK))
}

/// `i,j=c`: `c` copies of type `(i, j)`.
pub fn parse_type_count(s: &str) -> Result<(u32, u32, u32), String> {
    let (ty, count) = s
        .split_once('=')
        .ok_or_else(|| format!("expected `i,j=c`, got `{s}`"))?;
    let (i, j) = ty
        .split_once(',')
        .ok_or_else(|| format!("expected `i,j=c`, got `{s}`"))?;
    let num = |x: &str| {
        x.trim()
            .parse::<u32>()
            .map_err(|_| format!("`{x}` is not a nonnegative integer"))
    };
    let (i, j, c) = (num(i)?, num(j)?, num(count)?);
    if j > i {
        return Err(format!("type ({i},{j}) has t2 > t1"));
    }
    Ok((i, j, c))
}

#[derive(Serialize)]
struct ErasableReport {
    collection: CollectionJson,
    erasable: bool,
    order: Option<Vec<String>>,
}

pub fn erasable(
    s: &Settings,
    r: u32,
    strong: &[(u32, u32, u32)],
    weak: &[(u32, u32, u32)],
) -> Result<Outcome> {
    if r < 3 {
        bail!("--r must be at least 3");
    }
    let mut c = ModCollection::new();
    for (list, strength) in [(strong, Strength::Strong), (weak, Strength::Weak)] {
        for &(i, j, n) in list {
            if i > r - 1 {
                bail!("type ({i},{j}) has rank above r - 1 = {}", r - 1);
            }
            c.add(ModType::new(i, j, strength), n);
        }
    }
    let (ok, order) = is_erasable_with(&c, r, s.roles)?;
    let names = order.map(|o| o.iter().map(ModType::name).collect::<Vec<_>>());
    let text = match s.format {
        Format::Json => json(&ErasableReport {
            collection: CollectionJson::from_collection(&c, r),
            erasable: ok,
            order: names,
        })?,
        Format::Csv => no_csv("erasable")?,
        Format::Plain => match names {
            Some(o) => format!("erasable: {}\n", o.join(" ")),
            None => "not erasable\n".into(),
        },
    };
    Ok(Outcome::new(
        text,
        if ok { EXIT_OK } else { EXIT_EXCEPTION },
    ))
}

pub fn dump_constants(s: &Settings) -> Result<Outcome> {
    let text = match s.format {
        Format::Csv => no_csv("dump-constants")?,
        _ => json(&ConstantTables::embedded())?,
    };
    Ok(Outcome::new(text, EXIT_OK))
}
