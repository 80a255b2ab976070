use std::path::{Path, PathBuf};

use reality_domain::{BoundaryBand, RealityTolerance};
use serde::Serialize;

pub const CONFIG_ENV: &str = "REALITY_DOMAIN_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Effective settings after layering defaults, config file and flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub band: f64,
    pub res: usize,
    pub rays: usize,
    pub tol: f64,
    pub steps: usize,
    pub window: [f64; 4],
    pub range: [f64; 2],
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = RealityTolerance::default();
        Self {
            abs_tol: t.abs_tol,
            rel_tol: t.rel_tol,
            band: BoundaryBand::default().0,
            res: 101,
            rays: 64,
            tol: 1e-8,
            steps: 400,
            window: [0.0, 4.0, 0.0, 4.0],
            range: [-4.0, 4.0],
            format: Format::Csv,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn tolerance(&self) -> RealityTolerance {
        RealityTolerance { abs_tol: self.abs_tol, rel_tol: self.rel_tol }
    }

    pub fn boundary_band(&self) -> BoundaryBand {
        BoundaryBand(self.band)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [("abs_tol", self.abs_tol), ("rel_tol", self.rel_tol), ("band", self.band), ("tol", self.tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{name} must be a positive number, got {v}"));
            }
        }
        for (name, v) in [("res", self.res), ("steps", self.steps)] {
            if v < 2 {
                return Err(format!("{name} must be at least 2, got {v}"));
            }
        }
        let [alo, ahi, clo, chi] = self.window;
        if !(alo < ahi && clo < chi) {
            return Err(format!("window needs lo < hi on both axes, got {:?}", self.window));
        }
        if !(self.range[0] < self.range[1]) {
            return Err(format!("range needs lo < hi, got {:?}", self.range));
        }
        Ok(())
    }

    /// Apply `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{}:{}: expected key = value", path.display(), n + 1))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| format!("{}:{}: {e}", path.display(), n + 1))?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "abs_tol" => self.abs_tol = parse_num(value)?,
            "rel_tol" => self.rel_tol = parse_num(value)?,
            "band" | "boundary_band" => self.band = parse_num(value)?,
            "res" => self.res = parse_count(value)?,
            "rays" => self.rays = parse_count(value)?,
            "tol" => self.tol = parse_num(value)?,
            "steps" => self.steps = parse_count(value)?,
            "window" => self.window = parse_list(value)?,
            "range" => self.range = parse_list(value)?,
            "format" => {
                self.format = match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(format!("format must be csv or json, got {value:?}")),
                }
            }
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }
}

fn parse_num(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("not a number: {s:?}"))
}

fn parse_count(s: &str) -> Result<usize, String> {
    s.parse::<usize>().map_err(|_| format!("not a count: {s:?}"))
}

/// Comma-separated list of exactly `N` numbers.
pub fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<f64> = s.split(',').map(|p| parse_num(p.trim())).collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}
