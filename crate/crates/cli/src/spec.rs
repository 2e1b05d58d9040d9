//! Experiment specifications: a kind plus string parameters, validated into
//! a typed [`Plan`] before anything is computed.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use chebias_core::dirichlet::DirichletCharacter;
use chebias_core::function_field::PolyFq;
use chebias_core::quadratic::FundamentalDiscriminant;
use chebias_core::sieve::DEFAULT_SEGMENT_SIZE;
use chebias_core::{make_grid, CheckpointGrid, SieveConfig};
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    DirichletBias,
    EulerProduct,
    SplitBias,
    ClassBias,
    FfBias,
    FfEuler,
    TauBias,
    Density,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::DirichletBias,
        Kind::EulerProduct,
        Kind::SplitBias,
        Kind::ClassBias,
        Kind::FfBias,
        Kind::FfEuler,
        Kind::TauBias,
        Kind::Density,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Kind::DirichletBias => "dirichlet-bias",
            Kind::EulerProduct => "euler-product",
            Kind::SplitBias => "split-bias",
            Kind::ClassBias => "class-bias",
            Kind::FfBias => "ff-bias",
            Kind::FfEuler => "ff-euler",
            Kind::TauBias => "tau-bias",
            Kind::Density => "density",
        }
    }

    /// Whether the kind streams rational primes from the sieve.
    pub fn uses_sieve(&self) -> bool {
        !matches!(self, Kind::FfBias | Kind::FfEuler)
    }

    fn keys(&self) -> &'static [&'static str] {
        match self {
            Kind::DirichletBias => &["q", "classes", "pair"],
            Kind::EulerProduct => &["character"],
            Kind::SplitBias | Kind::ClassBias => &["d"],
            Kind::FfBias => &["q", "modulus", "n-max"],
            Kind::FfEuler => &["q", "modulus", "character", "n-max"],
            Kind::TauBias => &["tau-cache"],
            Kind::Density => &["q", "groups"],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CliError::param("kind", format!("unknown experiment kind {s:?}")))
    }
}

/// Keys shared by every kind.
pub const COMMON_KEYS: [&str; 7] = [
    "limit",
    "x-min",
    "grid-ratio",
    "threads",
    "segment-size",
    "out",
    "resume",
];

/// Keys that do not change the computed numbers.
const EXECUTION_KEYS: [&str; 4] = ["threads", "out", "resume", "tau-cache"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub kind: Kind,
    pub parameters: BTreeMap<String, String>,
}

impl ExperimentSpec {
    /// Config-file values overlaid by explicitly given flags.
    pub fn new(kind: Kind, config: BTreeMap<String, String>, flags: Vec<(&str, Option<String>)>) -> CliResult<Self> {
        let mut parameters = config;
        for (key, value) in flags {
            if let Some(v) = value {
                parameters.insert(key.to_string(), v);
            }
        }
        let spec = ExperimentSpec { kind, parameters };
        for key in spec.parameters.keys() {
            if !COMMON_KEYS.contains(&key.as_str()) && !kind.keys().contains(&key.as_str()) {
                return Err(CliError::UnknownKey {
                    key: key.clone(),
                    kind: kind.name().into(),
                });
            }
        }
        Ok(spec)
    }

    fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.parameters.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .trim()
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::param(key, format!("{raw:?}: {e}"))),
        }
    }

    fn get_or<T: FromStr>(&self, key: &str, default: T) -> CliResult<T>
    where
        T::Err: fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn require<T: FromStr>(&self, key: &str) -> CliResult<T>
    where
        T::Err: fmt::Display,
    {
        self.get(key)?.ok_or_else(|| CliError::param(key, "required"))
    }

    /// Integer with optional `1e9` or `10^9` notation.
    fn count(&self, key: &str) -> CliResult<Option<u64>> {
        self.parameters
            .get(key)
            .map(|raw| parse_count(raw).map_err(|m| CliError::param(key, m)))
            .transpose()
    }

    /// Parameters that determine the numbers, for matching resume state.
    pub fn fingerprint(&self) -> String {
        let mut parts = vec![self.kind.name().to_string()];
        for (k, v) in &self.parameters {
            if !EXECUTION_KEYS.contains(&k.as_str()) {
                parts.push(format!("{k}={v}"));
            }
        }
        parts.join(";")
    }

    /// Validates every parameter.
    pub fn plan(&self) -> CliResult<Plan> {
        let kind = self.kind;
        let default_limit = match kind {
            Kind::TauBias => 100_000,
            _ => 10_000_000,
        };
        let limit = self.count("limit")?.unwrap_or(default_limit);
        let x_min = self.count("x-min")?.unwrap_or(100);
        let ratio: f64 = self.get_or("grid-ratio", 1.1)?;
        let threads: usize = self.get_or("threads", 1)?;
        let segment_size: usize = self.get_or("segment-size", DEFAULT_SEGMENT_SIZE)?;
        let out = PathBuf::from(self.parameters.get("out").map(String::as_str).unwrap_or("out"));
        let resume: bool = self.get_or("resume", false)?;
        let sieve = SieveConfig::new(limit)
            .map_err(|e| CliError::param("limit", e.to_string()))?
            .with_segment_size(segment_size)
            .map_err(|e| CliError::param("segment-size", e.to_string()))?
            .with_threads(threads)
            .map_err(|e| CliError::param("threads", e.to_string()))?;
        let grid = if kind.uses_sieve() {
            if x_min < 16 {
                return Err(CliError::param(
                    "x-min",
                    "must be at least 16 for log log x predictions",
                ));
            }
            let grid = make_grid(x_min, limit, ratio).map_err(|e| {
                let key = if ratio.is_finite() && ratio > 1.0 {
                    "x-min"
                } else {
                    "grid-ratio"
                };
                CliError::param(key, e.to_string())
            })?;
            Some(grid)
        } else {
            None
        };

        let task = match kind {
            Kind::DirichletBias => {
                let q: u64 = self.require("q")?;
                let units = units_mod(q).map_err(|m| CliError::param("q", m))?;
                let classes = self.get::<String>("classes")?;
                let pair = self.get::<String>("pair")?;
                let mode = match (classes, pair) {
                    (Some(_), Some(_)) => return Err(CliError::param("pair", "give either classes or pair, not both")),
                    (Some(c), None) => DirichletMode::Classes(parse_residues("classes", &c, q, &units)?),
                    (None, Some(p)) => {
                        let r = parse_residues("pair", &p, q, &units)?;
                        if r.len() != 2 || r[0] == r[1] {
                            return Err(CliError::param("pair", "expected two distinct residues `a,b`"));
                        }
                        DirichletMode::Pair(r[0], r[1])
                    }
                    (None, None) if units.len() == 2 => DirichletMode::Pair(units[0], units[1]),
                    (None, None) => DirichletMode::Classes(units),
                };
                Task::DirichletBias { q, mode }
            }
            Kind::EulerProduct => {
                let label: String = self.require("character")?;
                parse_character(&label).map_err(|e| CliError::param("character", e.to_string()))?;
                Task::EulerProduct { character: label }
            }
            Kind::SplitBias | Kind::ClassBias => {
                let d: i64 = self.require("d")?;
                let disc = FundamentalDiscriminant::new(d).map_err(|e| CliError::param("d", e.to_string()))?;
                if kind == Kind::ClassBias && disc.d > 0 {
                    return Err(CliError::param(
                        "d",
                        "class bias needs an imaginary quadratic field (d < 0)",
                    ));
                }
                if kind == Kind::SplitBias {
                    Task::SplitBias { d }
                } else {
                    Task::ClassBias { d }
                }
            }
            Kind::FfBias | Kind::FfEuler => {
                let q: u64 = self.require("q")?;
                let raw: String = self.require("modulus")?;
                let modulus = PolyFq::parse_coefficients(q, &raw.replace(',', " "))
                    .map_err(|e| CliError::param("modulus", e.to_string()))?;
                if modulus.degree().is_none_or(|d| d == 0) {
                    return Err(CliError::param("modulus", "needs degree at least 1"));
                }
                let budget = chebias_core::function_field::ENUMERATION_BUDGET;
                let reachable = (1..)
                    .take_while(|&n| q.checked_pow(n).is_some_and(|v| v <= budget))
                    .count() as u64;
                let default_n = reachable.min(if kind == Kind::FfBias { 20 } else { 13 });
                let n_max = self.count("n-max")?.unwrap_or(default_n);
                if n_max == 0 {
                    return Err(CliError::param("n-max", "must be at least 1"));
                }
                if n_max > reachable {
                    return Err(CliError::param(
                        "n-max",
                        format!("{q}^{n_max} polynomials exceed the enumeration budget; at most {reachable}"),
                    ));
                }
                if kind == Kind::FfBias {
                    Task::FfBias { modulus, n_max }
                } else {
                    Task::FfEuler {
                        modulus,
                        character: self.get("character")?,
                        n_max,
                    }
                }
            }
            Kind::TauBias => {
                if limit > chebias_core::tau::MAX_ORDER as u64 {
                    return Err(CliError::param(
                        "limit",
                        format!("tau table order is capped at {}", chebias_core::tau::MAX_ORDER),
                    ));
                }
                Task::TauBias {
                    cache: self.get::<String>("tau-cache")?.map(PathBuf::from),
                }
            }
            Kind::Density => {
                let q: u64 = self.require("q")?;
                let units = units_mod(q).map_err(|m| CliError::param("q", m))?;
                let groups = match self.get::<String>("groups")? {
                    None => units.iter().map(|&a| vec![a]).collect(),
                    Some(g) => g
                        .split(';')
                        .map(|part| parse_residues("groups", part, q, &units))
                        .collect::<CliResult<Vec<_>>>()?,
                };
                Task::Density { q, groups }
            }
        };
        Ok(Plan {
            kind,
            sieve,
            grid,
            out,
            resume,
            task,
        })
    }
}

/// Accepts `1000000`, `1e6`, `10^6` and `1_000_000`.
/// A character label `q:e1,e2,..`, or a fundamental discriminant `D` for
/// the Kronecker character modulo `|D|`.
pub fn parse_character(label: &str) -> chebias_core::Result<DirichletCharacter> {
    match label.trim().parse::<i64>() {
        Ok(d) => FundamentalDiscriminant::new(d)?.character(),
        Err(_) => DirichletCharacter::parse(label),
    }
}

pub fn parse_count(raw: &str) -> Result<u64, String> {
    let s = raw.trim().replace('_', "");
    let bad = || format!("{raw:?} is not a nonnegative integer");
    if let Some((b, e)) = s.split_once('^') {
        let b: u64 = b.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return b.checked_pow(e).ok_or_else(|| format!("{raw:?} overflows"));
    }
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return 10u64
            .checked_pow(e)
            .and_then(|p| p.checked_mul(m))
            .ok_or_else(|| format!("{raw:?} overflows"));
    }
    s.parse().map_err(|_| bad())
}

fn units_mod(q: u64) -> Result<Vec<u64>, String> {
    if q < 3 {
        return Err(format!("modulus must be at least 3, got {q}"));
    }
    if q > chebias_core::dirichlet::MAX_MODULUS {
        return Err(format!("modulus {q} is above the supported maximum"));
    }
    Ok((1..q).filter(|&a| chebias_core::arith::gcd(a, q) == 1).collect())
}

fn parse_residues(key: &str, raw: &str, q: u64, units: &[u64]) -> CliResult<Vec<u64>> {
    let mut out = Vec::new();
    for part in raw.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let a: u64 = part
            .parse()
            .map_err(|_| CliError::param(key, format!("{part:?} is not a residue")))?;
        if !units.contains(&(a % q)) {
            return Err(CliError::param(key, format!("{a} is not a unit modulo {q}")));
        }
        out.push(a % q);
    }
    if out.is_empty() {
        return Err(CliError::param(key, "empty residue list"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum DirichletMode {
    /// `S(x; q, a) = π_{1/2}(x) − φ(q) π_{1/2}(x; q, a)` per class.
    Classes(Vec<u64>),
    /// `π_{1/2}(x; q, b) − π_{1/2}(x; q, a)`.
    Pair(u64, u64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    DirichletBias {
        q: u64,
        mode: DirichletMode,
    },
    EulerProduct {
        character: String,
    },
    SplitBias {
        d: i64,
    },
    ClassBias {
        d: i64,
    },
    FfBias {
        modulus: PolyFq,
        n_max: u64,
    },
    FfEuler {
        modulus: PolyFq,
        character: Option<usize>,
        n_max: u64,
    },
    TauBias {
        cache: Option<PathBuf>,
    },
    Density {
        q: u64,
        groups: Vec<Vec<u64>>,
    },
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct Plan {
    pub kind: Kind,
    pub sieve: SieveConfig,
    /// Checkpoints for the sieved kinds.
    pub grid: Option<CheckpointGrid>,
    pub out: PathBuf,
    pub resume: bool,
    pub task: Task,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: Kind, kv: &[(&str, &str)]) -> CliResult<ExperimentSpec> {
        let config = kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        ExperimentSpec::new(kind, config, vec![])
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("10^9"), Ok(1_000_000_000));
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert!(parse_count("ten").is_err());
    }

    #[test]
    fn flags_override_config() {
        let config = [("q".to_string(), "8".to_string())].into_iter().collect();
        let s = ExperimentSpec::new(
            Kind::DirichletBias,
            config,
            vec![("q", Some("4".into())), ("pair", None)],
        )
        .unwrap();
        assert_eq!(s.parameters["q"], "4");
        assert!(!s.parameters.contains_key("pair"));
    }

    #[test]
    fn diagnostics_name_the_key() {
        let e = spec(Kind::DirichletBias, &[("q", "4"), ("classes", "1,2")])
            .unwrap()
            .plan()
            .unwrap_err();
        assert_eq!(e.to_string(), "invalid value for `classes`: 2 is not a unit modulo 4");
        let e = spec(Kind::SplitBias, &[("d", "-3"), ("q", "5")]).unwrap_err();
        assert_eq!(e.to_string(), "unknown key `q` for split-bias");
        let e = spec(Kind::SplitBias, &[("d", "-12")]).unwrap().plan().unwrap_err();
        assert!(e.to_string().starts_with("invalid value for `d`"));
        let e = spec(Kind::DirichletBias, &[("q", "4"), ("threads", "0")])
            .unwrap()
            .plan()
            .unwrap_err();
        assert!(e.to_string().starts_with("invalid value for `threads`"));
        let e = spec(Kind::EulerProduct, &[]).unwrap().plan().unwrap_err();
        assert_eq!(e.to_string(), "invalid value for `character`: required");
    }

    #[test]
    fn default_modes() {
        let p = spec(Kind::DirichletBias, &[("q", "4")]).unwrap().plan().unwrap();
        assert_eq!(
            p.task,
            Task::DirichletBias {
                q: 4,
                mode: DirichletMode::Pair(1, 3)
            }
        );
        let p = spec(Kind::Density, &[("q", "7"), ("groups", "1,6;2,5;3,4")])
            .unwrap()
            .plan()
            .unwrap();
        assert_eq!(
            p.task,
            Task::Density {
                q: 7,
                groups: vec![vec![1, 6], vec![2, 5], vec![3, 4]]
            }
        );
    }

    #[test]
    fn fingerprint_ignores_execution_keys() {
        let a = spec(Kind::DirichletBias, &[("q", "4"), ("threads", "1")]).unwrap();
        let b = spec(Kind::DirichletBias, &[("q", "4"), ("threads", "8"), ("out", "x")]).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
    }
}
