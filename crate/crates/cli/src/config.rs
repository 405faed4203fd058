//! Run configuration: built-in baseline defaults, overridden by a JSON config
//! file, overridden by flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use cnlse_verify::{AnsatzParams, DiffConfig, Sign};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchSel {
    Pp,
    Pm,
    Mp,
    Mm,
    All,
}

impl BranchSel {
    /// Branches in output order `++, +−, −+, −−`.
    pub fn branches(self) -> Vec<(Sign, Sign)> {
        use Sign::{Minus, Plus};
        match self {
            Self::Pp => vec![(Plus, Plus)],
            Self::Pm => vec![(Plus, Minus)],
            Self::Mp => vec![(Minus, Plus)],
            Self::Mm => vec![(Minus, Minus)],
            Self::All => vec![(Plus, Plus), (Plus, Minus), (Minus, Plus), (Minus, Minus)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `X0:X1:NX,T0:T1:NT`, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub x1: f64,
    pub nx: usize,
    pub t0: f64,
    pub t1: f64,
    pub nt: usize,
}

fn parse_axis(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(format!("expected LO:HI:N, got {s:?}"));
    };
    let num = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("bad number {v:?} in {s:?}"))
    };
    let (lo, hi) = (num(lo)?, num(hi)?);
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(format!("bounds must be finite in {s:?}"));
    }
    let n = n
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("bad count {n:?} in {s:?}"))?;
    Ok((lo, hi, n))
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (x, t) = s
            .split_once(',')
            .ok_or_else(|| format!("expected X0:X1:NX,T0:T1:NT, got {s:?}"))?;
        let (x0, x1, nx) = parse_axis(x)?;
        let (t0, t1, nt) = parse_axis(t)?;
        Ok(Self {
            x0,
            x1,
            nx,
            t0,
            t1,
            nt,
        })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{},{}:{}:{}",
            self.x0, self.x1, self.nx, self.t0, self.t1, self.nt
        )
    }
}

impl Serialize for GridSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GridSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

impl GridSpec {
    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x0, self.x1, self.nx)
    }

    pub fn ts(&self) -> Vec<f64> {
        linspace(self.t0, self.t1, self.nt)
    }

    pub fn is_empty(&self) -> bool {
        self.nx == 0 || self.nt == 0
    }
}

/// `NAME=VALUE`, or a bare `VALUE` that applies to every tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct TolOverride {
    pub name: Option<String>,
    pub value: f64,
}

impl FromStr for TolOverride {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, value) = match s.split_once('=') {
            Some((n, v)) => (Some(n.trim().to_string()), v),
            None => (None, s),
        };
        let value = value
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad tolerance value in {s:?}"))?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(format!("tolerances must be positive, got {s:?}"));
        }
        if let Some(n) = &name {
            if !Tolerances::NAMES.contains(&n.as_str()) {
                return Err(format!(
                    "unknown tolerance {n:?}; known: {}",
                    Tolerances::NAMES.join(", ")
                ));
            }
        }
        Ok(Self { name, value })
    }
}

/// Every threshold a subcommand compares against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Algebraic residual of the `z` ODE.
    pub r1: f64,
    /// Algebraic residual of the `Q` ODE.
    pub r2: f64,
    /// Absolute distance from the target `0.113`.
    pub target: f64,
    /// Smallest `|P|` counted as nonzero.
    pub nonzero: f64,
    /// `P(0, 0)` against its closed form.
    pub pole: f64,
    pub wp: f64,
    pub invariants: f64,
    pub quartic: f64,
    pub equilibrium: f64,
    /// Soliton PDE residual at `h = 1e−3`.
    pub residual: f64,
    /// Allowed `|order − 2|`.
    pub order: f64,
    pub mass: f64,
    /// Split-step soliton `L∞` error at `t = 1`.
    pub soliton: f64,
    pub reversal: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            r1: 1e-8,
            r2: 1e-8,
            target: 2e-3,
            nonzero: 0.05,
            pole: 1e-9,
            wp: 1e-10,
            invariants: 1e-12,
            quartic: 1e-6,
            equilibrium: 1e-10,
            residual: 1e-5,
            order: 0.1,
            mass: 1e-10,
            soliton: 1e-6,
            reversal: 1e-8,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 14] = [
        "r1",
        "r2",
        "target",
        "nonzero",
        "pole",
        "wp",
        "invariants",
        "quartic",
        "equilibrium",
        "residual",
        "order",
        "mass",
        "soliton",
        "reversal",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "r1" => &mut self.r1,
            "r2" => &mut self.r2,
            "target" => &mut self.target,
            "nonzero" => &mut self.nonzero,
            "pole" => &mut self.pole,
            "wp" => &mut self.wp,
            "invariants" => &mut self.invariants,
            "quartic" => &mut self.quartic,
            "equilibrium" => &mut self.equilibrium,
            "residual" => &mut self.residual,
            "order" => &mut self.order,
            "mass" => &mut self.mass,
            "soliton" => &mut self.soliton,
            "reversal" => &mut self.reversal,
            _ => return None,
        })
    }

    pub fn apply(&mut self, o: &TolOverride) -> Result<(), CliError> {
        match &o.name {
            None => {
                for n in Self::NAMES {
                    *self.slot(n).expect("listed name") = o.value;
                }
            }
            Some(n) => {
                *self
                    .slot(n)
                    .ok_or_else(|| CliError::new(format!("unknown tolerance {n:?}")))? = o.value;
            }
        }
        Ok(())
    }
}

/// Tolerances as written in a config file: a bare number, a list of
/// `NAME=VALUE` strings, or a map.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum TolSpec {
    All(f64),
    List(Vec<String>),
    Map(BTreeMap<String, f64>),
}

impl TolSpec {
    fn overrides(&self) -> Result<Vec<TolOverride>, CliError> {
        let parse = |s: &str| s.parse::<TolOverride>().map_err(CliError::new);
        match self {
            Self::All(v) => Ok(vec![parse(&v.to_string())?]),
            Self::List(items) => items.iter().map(|s| parse(s)).collect(),
            Self::Map(m) => m.iter().map(|(k, v)| parse(&format!("{k}={v}"))).collect(),
        }
    }
}

/// Config file contents; keys mirror the flag names.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub q: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
    pub z0: Option<f64>,
    pub q0: Option<f64>,
    pub phi0: Option<f64>,
    pub x: Option<f64>,
    pub t: Option<f64>,
    pub branch: Option<BranchSel>,
    pub grid: Option<GridSpec>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub tol: Option<TolSpec>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::new(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::new(format!("invalid config {}: {e}", path.display())))
    }
}

/// Flag values; `None` means "not given".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlagValues {
    pub file: ConfigFile,
    pub tol: Vec<TolOverride>,
    pub config: Option<PathBuf>,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: AnsatzParams,
    pub x: f64,
    pub t: f64,
    pub branch: Option<BranchSel>,
    pub grid: Option<GridSpec>,
    pub format: Format,
    /// True when `--format` or the config file chose the format.
    pub format_given: bool,
    pub out: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub diff: DiffConfig,
}

macro_rules! layer {
    ($target:expr, $($src:expr),+) => {
        $( if let Some(v) = $src { $target = v; } )+
    };
}

impl RunConfig {
    pub fn resolve(flags: &FlagValues) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let cli = &flags.file;
        let mut params = AnsatzParams::baseline();
        layer!(params.q, file.q, cli.q);
        layer!(params.c1, file.c1, cli.c1);
        layer!(params.c2, file.c2, cli.c2);
        layer!(params.c3, file.c3, cli.c3);
        layer!(params.z0, file.z0, cli.z0);
        layer!(params.q0, file.q0, cli.q0);
        layer!(params.phi0, file.phi0, cli.phi0);
        params.validate()?;

        let (mut x, mut t) = (1.0, 1.0);
        layer!(x, file.x, cli.x);
        layer!(t, file.t, cli.t);
        if !(x.is_finite() && t.is_finite()) {
            return Err(CliError::new("x and t must be finite"));
        }

        let mut tolerances = Tolerances::default();
        if let Some(spec) = &file.tol {
            for o in spec.overrides()? {
                tolerances.apply(&o)?;
            }
        }
        for o in &flags.tol {
            tolerances.apply(o)?;
        }

        let format_given = cli.format.is_some() || file.format.is_some();
        Ok(Self {
            params,
            x,
            t,
            branch: cli.branch.or(file.branch),
            grid: cli.grid.or(file.grid),
            format: cli.format.or(file.format).unwrap_or_default(),
            format_given,
            out: cli.out.clone().or(file.out),
            tolerances,
            diff: DiffConfig::default(),
        })
    }

    pub fn branches_or(&self, default: BranchSel) -> Vec<(Sign, Sign)> {
        self.branch.unwrap_or(default).branches()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: GridSpec = "0.2:1.2:10,-1:1:3".parse().unwrap();
        assert_eq!(
            (g.x0, g.x1, g.nx, g.t0, g.t1, g.nt),
            (0.2, 1.2, 10, -1.0, 1.0, 3)
        );
        assert_eq!(g.ts(), vec![-1.0, 0.0, 1.0]);
        assert!("0:1:10".parse::<GridSpec>().is_err());
        assert!("0:1:x,0:1:2".parse::<GridSpec>().is_err());
        assert!("0:1:0,0:1:2".parse::<GridSpec>().unwrap().is_empty());
    }

    #[test]
    fn tolerance_overrides() {
        let mut t = Tolerances::default();
        t.apply(&"r1=1e-3".parse().unwrap()).unwrap();
        assert_eq!(t.r1, 1e-3);
        assert_eq!(t.r2, 1e-8);
        t.apply(&"1e-20".parse().unwrap()).unwrap();
        assert!(Tolerances::NAMES
            .iter()
            .all(|n| *t.slot(n).unwrap() == 1e-20));
        assert!("bogus=1".parse::<TolOverride>().is_err());
        assert!("r1=-1".parse::<TolOverride>().is_err());
    }

    #[test]
    fn config_tol_forms() {
        let c: ConfigFile = serde_json::from_str(r#"{"tol": {"r1": 0.5}}"#).unwrap();
        assert_eq!(c.tol, Some(TolSpec::Map([("r1".to_string(), 0.5)].into())));
        let c: ConfigFile =
            serde_json::from_str(r#"{"tol": ["r2=0.25"], "branch": "mp"}"#).unwrap();
        assert_eq!(c.branch, Some(BranchSel::Mp));
        let c: ConfigFile =
            serde_json::from_str(r#"{"tol": 0.1, "grid": "0:1:2,0.5:1:2"}"#).unwrap();
        assert_eq!(c.grid.unwrap().nx, 2);
        assert!(serde_json::from_str::<ConfigFile>(r#"{"qq": 1}"#).is_err());
    }

    #[test]
    fn defaults_are_baseline_values() {
        let rc = RunConfig::resolve(&FlagValues::default()).unwrap();
        assert_eq!(rc.params, AnsatzParams::baseline());
        assert_eq!((rc.x, rc.t), (1.0, 1.0));
        assert_eq!(rc.format, Format::Csv);
    }
}
