//! Flat `key = value` run configuration shared by the config file and the
//! command-line flags. Every key is also a `--key` flag; flags win.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use checkerboard::lattice::{Boundary, Direction};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandName {
    Simulate,
    Verify,
    Converge,
    PathSum,
    Chain,
}

impl CommandName {
    pub const ALL: [CommandName; 5] = [
        CommandName::Simulate,
        CommandName::Verify,
        CommandName::Converge,
        CommandName::PathSum,
        CommandName::Chain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Simulate => "simulate",
            CommandName::Verify => "verify",
            CommandName::Converge => "converge",
            CommandName::PathSum => "path-sum",
            CommandName::Chain => "chain",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            CommandName::Simulate => "Iterate the simple or causal lattice and write field snapshots",
            CommandName::Verify => "Run the invariant suites and write a JSON pass/fail report",
            CommandName::Converge => "Measure residual convergence over a time-step ladder",
            CommandName::PathSum => "Evaluate one path-sum amplitude by exact enumeration",
            CommandName::Chain => "Print the momentum-space matrices for given momenta and masses",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Simple,
    Causal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Real,
    Imaginary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    PathOracle,
    Conservation,
    Causality,
    Continuum,
    Chain,
    Bilinearization,
    Involutions,
    Dispersion,
    Gauge,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::PathOracle,
        Check::Conservation,
        Check::Causality,
        Check::Continuum,
        Check::Chain,
        Check::Bilinearization,
        Check::Involutions,
        Check::Dispersion,
        Check::Gauge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::PathOracle => "path-oracle",
            Check::Conservation => "conservation",
            Check::Causality => "causality",
            Check::Continuum => "continuum",
            Check::Chain => "chain",
            Check::Bilinearization => "bilinearization",
            Check::Involutions => "involutions",
            Check::Dispersion => "dispersion",
            Check::Gauge => "gauge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    Transport,
    FreeStreaming,
    Lattice,
    LatticeFree,
}

impl Case {
    pub fn as_str(self) -> &'static str {
        match self {
            Case::Transport => "transport",
            Case::FreeStreaming => "free-streaming",
            Case::Lattice => "lattice",
            Case::LatticeFree => "lattice-free",
        }
    }
}

/// Everything a run needs. Defaults are listed in `--help`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandName,
    pub dt: f64,
    pub sites: usize,
    pub steps: usize,
    pub boundary: Boundary,
    pub mode: Mode,
    pub weight: Weight,
    pub epsilon: f64,
    pub unit_straight: bool,
    pub a: f64,
    pub zeta_plus: f64,
    pub zeta_minus: f64,
    pub source_site: Option<usize>,
    pub source_dir: Direction,
    pub momenta: Vec<[f64; 3]>,
    pub masses: Vec<f64>,
    pub charge: f64,
    pub a0: f64,
    pub a_vec: [f64; 3],
    pub checks: Vec<Check>,
    pub n: u32,
    pub seed: u64,
    pub trials: usize,
    pub case: Case,
    pub ladder: Vec<f64>,
    pub floor: f64,
    pub start_dir: Direction,
    pub end_dir: Direction,
    pub displacement: i64,
    pub reversals: Option<u32>,
    pub output: Option<PathBuf>,
    pub log: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: CommandName::Verify,
            dt: 0.1,
            sites: 64,
            steps: 10,
            boundary: Boundary::Periodic,
            mode: Mode::Simple,
            weight: Weight::Real,
            epsilon: 0.05,
            unit_straight: false,
            a: 0.5,
            zeta_plus: 0.3,
            zeta_minus: 0.1,
            source_site: None,
            source_dir: Direction::Plus,
            momenta: vec![[1.0, 2.0, 2.0]],
            masses: vec![4.0],
            charge: 0.0,
            a0: 0.0,
            a_vec: [0.0; 3],
            checks: Check::ALL.to_vec(),
            n: 12,
            seed: 0x5EED,
            trials: 1000,
            case: Case::Transport,
            ladder: vec![0.1, 0.05, 0.025, 0.0125],
            floor: 1e-12,
            start_dir: Direction::Plus,
            end_dir: Direction::Plus,
            displacement: 0,
            reversals: None,
            output: None,
            log: None,
        }
    }
}

/// One configuration key, which is also the long flag name.
pub struct Key {
    pub name: &'static str,
    pub help: &'static str,
}

pub const KEYS: &[Key] = &[
    Key { name: "dt", help: "time step Δt (Δz = Δt)" },
    Key { name: "sites", help: "number of lattice sites" },
    Key { name: "steps", help: "number of time steps to simulate" },
    Key { name: "boundary", help: "periodic | absorbing" },
    Key { name: "mode", help: "simulate mode: simple | causal" },
    Key { name: "weight", help: "simple-lattice weights: real | imaginary" },
    Key { name: "epsilon", help: "ε in the imaginary weight aΔt = iε" },
    Key { name: "unit-straight", help: "replace the straight weight by exactly 1" },
    Key { name: "a", help: "reversal rate of the simple lattice" },
    Key { name: "zeta-plus", help: "rate ζ₊ toward larger z" },
    Key { name: "zeta-minus", help: "rate ζ₋ toward smaller z" },
    Key { name: "source-site", help: "point-source site (default: sites/2)" },
    Key { name: "source-dir", help: "point-source direction: + | -" },
    Key { name: "p", help: "momenta px,py,pz; several separated by ';'" },
    Key { name: "m", help: "masses, comma separated" },
    Key { name: "charge", help: "coupling constant e" },
    Key { name: "a0", help: "scalar potential A⁰" },
    Key { name: "a-vec", help: "vector potential Ax,Ay,Az" },
    Key { name: "check", help: "verify suites, comma separated, or all" },
    Key { name: "n", help: "path-sum step count" },
    Key { name: "seed", help: "seed for randomized checks" },
    Key { name: "trials", help: "random samples per randomized check" },
    Key { name: "case", help: "converge case: transport | free-streaming | lattice | lattice-free" },
    Key { name: "ladder", help: "converge time steps, comma separated, decreasing" },
    Key { name: "floor", help: "residuals at or below this count as exact" },
    Key { name: "start-dir", help: "path-sum start direction: + | -" },
    Key { name: "end-dir", help: "path-sum end direction: + | -" },
    Key { name: "displacement", help: "path-sum displacement in cells" },
    Key { name: "reversals", help: "keep only paths with this many reversals" },
    Key { name: "output", help: "output file (default: stdout)" },
    Key { name: "log", help: "simulate log file (default: none)" },
];

fn bad(key: &str, value: &str, expected: &str) -> CliError {
    CliError::Config(format!("invalid value {value:?} for {key}: expected {expected}"))
}

fn parse_num<T: FromStr>(key: &str, value: &str, expected: &str) -> Result<T, CliError> {
    value.trim().parse().map_err(|_| bad(key, value, expected))
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    let x: f64 = parse_num(key, value, "a number")?;
    if !x.is_finite() {
        return Err(bad(key, value, "a finite number"));
    }
    Ok(x)
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value
        .split(',')
        .map(|part| parse_f64(key, part))
        .collect()
}

fn parse_triple(key: &str, value: &str) -> Result<[f64; 3], CliError> {
    let parts = parse_list(key, value)?;
    <[f64; 3]>::try_from(parts).map_err(|_| bad(key, value, "three comma-separated numbers"))
}

fn parse_dir(key: &str, value: &str) -> Result<Direction, CliError> {
    match value.trim() {
        "+" | "plus" => Ok(Direction::Plus),
        "-" | "minus" => Ok(Direction::Minus),
        _ => Err(bad(key, value, "+ or -")),
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(bad(key, value, "true or false")),
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn dir_str(dir: Direction) -> &'static str {
    match dir {
        Direction::Plus => "+",
        Direction::Minus => "-",
    }
}

impl RunConfig {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let v = value.trim();
        match key {
            "command" => {
                self.command = CommandName::ALL
                    .into_iter()
                    .find(|c| c.as_str() == v)
                    .ok_or_else(|| bad(key, value, "a command name"))?
            }
            "dt" => self.dt = parse_f64(key, v)?,
            "sites" => self.sites = parse_num(key, v, "a non-negative integer")?,
            "steps" => self.steps = parse_num(key, v, "a non-negative integer")?,
            "boundary" => {
                self.boundary = match v {
                    "periodic" => Boundary::Periodic,
                    "absorbing" => Boundary::Absorbing,
                    _ => return Err(bad(key, value, "periodic or absorbing")),
                }
            }
            "mode" => {
                self.mode = match v {
                    "simple" => Mode::Simple,
                    "causal" => Mode::Causal,
                    _ => return Err(bad(key, value, "simple or causal")),
                }
            }
            "weight" => {
                self.weight = match v {
                    "real" => Weight::Real,
                    "imaginary" => Weight::Imaginary,
                    _ => return Err(bad(key, value, "real or imaginary")),
                }
            }
            "epsilon" => self.epsilon = parse_f64(key, v)?,
            "unit-straight" => self.unit_straight = parse_bool(key, v)?,
            "a" => self.a = parse_f64(key, v)?,
            "zeta-plus" => self.zeta_plus = parse_f64(key, v)?,
            "zeta-minus" => self.zeta_minus = parse_f64(key, v)?,
            "source-site" => self.source_site = Some(parse_num(key, v, "a site index")?),
            "source-dir" => self.source_dir = parse_dir(key, v)?,
            "p" => {
                self.momenta = v
                    .split(';')
                    .map(|part| parse_triple(key, part))
                    .collect::<Result<_, _>>()?
            }
            "m" => self.masses = parse_list(key, v)?,
            "charge" => self.charge = parse_f64(key, v)?,
            "a0" => self.a0 = parse_f64(key, v)?,
            "a-vec" => self.a_vec = parse_triple(key, v)?,
            "check" => {
                self.checks = if v == "all" {
                    Check::ALL.to_vec()
                } else {
                    v.split(',')
                        .map(|name| {
                            Check::ALL
                                .into_iter()
                                .find(|c| c.as_str() == name.trim())
                                .ok_or_else(|| bad(key, name, "a check name or all"))
                        })
                        .collect::<Result<_, _>>()?
                }
            }
            "n" => self.n = parse_num(key, v, "a non-negative integer")?,
            "seed" => self.seed = parse_num(key, v, "an unsigned integer")?,
            "trials" => self.trials = parse_num(key, v, "a non-negative integer")?,
            "case" => {
                self.case = [Case::Transport, Case::FreeStreaming, Case::Lattice, Case::LatticeFree]
                    .into_iter()
                    .find(|c| c.as_str() == v)
                    .ok_or_else(|| bad(key, value, "a converge case"))?
            }
            "ladder" => self.ladder = parse_list(key, v)?,
            "floor" => self.floor = parse_f64(key, v)?,
            "start-dir" => self.start_dir = parse_dir(key, v)?,
            "end-dir" => self.end_dir = parse_dir(key, v)?,
            "displacement" => self.displacement = parse_num(key, v, "an integer")?,
            "reversals" => self.reversals = Some(parse_num(key, v, "a non-negative integer")?),
            "output" => self.output = Some(PathBuf::from(v)),
            "log" => self.log = Some(PathBuf::from(v)),
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Textual value of a key, or `None` for an unset optional key.
    pub fn get(&self, key: &str) -> Option<String> {
        let s = match key {
            "command" => self.command.as_str().to_string(),
            "dt" => self.dt.to_string(),
            "sites" => self.sites.to_string(),
            "steps" => self.steps.to_string(),
            "boundary" => match self.boundary {
                Boundary::Periodic => "periodic".into(),
                Boundary::Absorbing => "absorbing".into(),
            },
            "mode" => match self.mode {
                Mode::Simple => "simple".into(),
                Mode::Causal => "causal".into(),
            },
            "weight" => match self.weight {
                Weight::Real => "real".into(),
                Weight::Imaginary => "imaginary".into(),
            },
            "epsilon" => self.epsilon.to_string(),
            "unit-straight" => self.unit_straight.to_string(),
            "a" => self.a.to_string(),
            "zeta-plus" => self.zeta_plus.to_string(),
            "zeta-minus" => self.zeta_minus.to_string(),
            "source-site" => return self.source_site.map(|s| s.to_string()),
            "source-dir" => dir_str(self.source_dir).into(),
            "p" => self
                .momenta
                .iter()
                .map(|p| join(p, ","))
                .collect::<Vec<_>>()
                .join(";"),
            "m" => join(&self.masses, ","),
            "charge" => self.charge.to_string(),
            "a0" => self.a0.to_string(),
            "a-vec" => join(&self.a_vec, ","),
            "check" => self
                .checks
                .iter()
                .map(|c| c.as_str())
                .collect::<Vec<_>>()
                .join(","),
            "n" => self.n.to_string(),
            "seed" => self.seed.to_string(),
            "trials" => self.trials.to_string(),
            "case" => self.case.as_str().into(),
            "ladder" => join(&self.ladder, ","),
            "floor" => self.floor.to_string(),
            "start-dir" => dir_str(self.start_dir).into(),
            "end-dir" => dir_str(self.end_dir).into(),
            "displacement" => self.displacement.to_string(),
            "reversals" => return self.reversals.map(|r| r.to_string()),
            "output" => return self.output.as_ref().map(|p| p.display().to_string()),
            "log" => return self.log.as_ref().map(|p| p.display().to_string()),
            _ => return None,
        };
        Some(s)
    }

    /// Applies a config file's text on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            self.set(key.trim(), value)
                .map_err(|e| CliError::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut config = Self::default();
        config.apply_text(text)?;
        Ok(config)
    }

    /// Every set key as `key = value` lines, readable by [`Self::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = format!("command = {}\n", self.command.as_str());
        for key in KEYS {
            if let Some(value) = self.get(key.name) {
                out.push_str(&format!("{} = {value}\n", key.name));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_key_round_trips() {
        let mut config = RunConfig::default();
        for (key, value) in [
            ("dt", "0.012345678901234567"),
            ("p", "1,2,2;-0.3,0.1,1e-7"),
            ("m", "4,0.5"),
            ("check", "chain,gauge"),
            ("source-site", "3"),
            ("reversals", "2"),
            ("output", "out.csv"),
            ("boundary", "absorbing"),
            ("weight", "imaginary"),
            ("source-dir", "-"),
            ("unit-straight", "true"),
        ] {
            config.set(key, value).unwrap();
        }
        let text = config.to_text();
        assert_eq!(RunConfig::from_text(&text).unwrap(), config);
        assert_eq!(RunConfig::from_text(&text).unwrap().to_text(), text);
    }

    #[test]
    fn comments_and_blank_lines() {
        let config = RunConfig::from_text("# run\n\ndt = 0.2 # coarse\nsites=8\n").unwrap();
        assert_eq!(config.dt, 0.2);
        assert_eq!(config.sites, 8);
    }

    #[test]
    fn errors_name_the_key() {
        let err = RunConfig::from_text("dt = fast").unwrap_err().to_string();
        assert!(err.contains("dt"), "{err}");
        let err = RunConfig::from_text("colour = red").unwrap_err().to_string();
        assert!(err.contains("colour"), "{err}");
        assert!(RunConfig::from_text("dt 0.1").is_err());
        assert!(RunConfig::from_text("a-vec = 1,2").is_err());
        assert!(RunConfig::from_text("dt = inf").is_err());
    }

    #[test]
    fn keys_table_covers_getters() {
        let config = RunConfig::default();
        for key in KEYS {
            let optional = ["source-site", "reversals", "output", "log"].contains(&key.name);
            assert_eq!(config.get(key.name).is_none(), optional, "{}", key.name);
        }
    }
}
