//! Global options, optionally read from a `key = value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bnint::prover::AcceptMode;
use bnint::{AxiomSet, Characteristic, RoleMode};
use clap::{Args, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Accept {
    Good,
    Recursive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Roles {
    Strict,
    Symmetric,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// JSON array of extra axioms: [{"tuple": [d, g, r, l, m], "citation": "..."}].
    #[arg(long, global = true)]
    pub axioms: Option<PathBuf>,
    /// Worker threads for the searches.
    #[arg(long, global = true, env = "BNINT_WORKERS")]
    pub workers: Option<usize>,
    /// Ground-field characteristic (0 or a prime).
    #[arg(long = "char", global = true)]
    pub characteristic: Option<u64>,
    /// What counts as an acceptable subgoal.
    #[arg(long, global = true, value_enum)]
    pub accept: Option<Accept>,
    /// Role assignment in the erasability case table.
    #[arg(long, global = true, value_enum)]
    pub roles: Option<Roles>,
    /// `key = value` file with defaults for the options above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Options after merging the config file under the command line.
#[derive(Debug, Clone)]
pub struct Settings {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub axioms: AxiomSet,
    pub workers: Option<usize>,
    pub characteristic: Characteristic,
    pub accept: AcceptMode,
    pub roles: RoleMode,
}

fn parse_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("{}:{}: expected `key = value`", path.display(), i + 1);
        };
        out.insert(k.trim().to_owned(), v.trim().trim_matches('"').to_owned());
    }
    Ok(out)
}

fn enum_value<T: ValueEnum>(key: &str, v: &str) -> Result<T> {
    T::from_str(v, true).map_err(|_| anyhow::anyhow!("config key `{key}`: invalid value `{v}`"))
}

impl GlobalOpts {
    /// Fills unset options from the config file; flags win.
    pub fn merge_file(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        for (k, v) in parse_file(&path)? {
            match k.as_str() {
                "format" => {
                    self.format.get_or_insert(enum_value(&k, &v)?);
                }
                "output" => {
                    self.output.get_or_insert_with(|| v.into());
                }
                "axioms" => {
                    self.axioms.get_or_insert_with(|| v.into());
                }
                "workers" => {
                    self.workers
                        .get_or_insert(v.parse().context("config key `workers`")?);
                }
                "char" => {
                    self.characteristic
                        .get_or_insert(v.parse().context("config key `char`")?);
                }
                "accept" => {
                    self.accept.get_or_insert(enum_value(&k, &v)?);
                }
                "roles" => {
                    self.roles.get_or_insert(enum_value(&k, &v)?);
                }
                _ => bail!("{}: unknown config key `{k}`", path.display()),
            }
        }
        Ok(self)
    }

    pub fn settings(self) -> Result<Settings> {
        let opts = self.merge_file()?;
        let mut axioms = AxiomSet::default();
        if let Some(path) = &opts.axioms {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let extra = AxiomSet::extra_from_json(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            axioms = axioms.with_extra(extra);
        }
        if opts.workers == Some(0) {
            bail!("--workers must be positive");
        }
        let characteristic = Characteristic::from_int(opts.characteristic.unwrap_or(0))?;
        Ok(Settings {
            format: opts.format.unwrap_or(Format::Plain),
            output: opts.output,
            axioms,
            workers: opts.workers,
            characteristic,
            accept: match opts.accept.unwrap_or(Accept::Good) {
                Accept::Good => AcceptMode::Good,
                Accept::Recursive => AcceptMode::Recursive,
            },
            roles: match opts.roles.unwrap_or(Roles::Symmetric) {
                Roles::Strict => RoleMode::Strict,
                Roles::Symmetric => RoleMode::Symmetric,
            },
        })
    }
}
