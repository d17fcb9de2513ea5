use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypiso::bounds::TheoremId;
use hypiso::optimize::ObjectiveKind;
use hypiso::polygon::PolygonKind;
use hypiso::sampling::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "hypiso", version, about = "Perimeter and area bounds for hyperbolic cyclic and tangential polygons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate bound values over a parameter sweep.
    Bounds(BoundsArgs),
    /// Check bounds against random polygons.
    Verify(VerifyArgs),
    /// Emit random polygons with closed-form and measured metrics.
    Sample(SampleArgs),
    /// Solve an equal-sum separable problem and compare with the grid oracle.
    Optimize(OptimizeArgs),
    /// Run the full check battery and render the report.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Random seed (decimal or 0x-prefixed hex).
    #[arg(long, value_parser = parse_seed, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Read angle-valued flags in degrees.
    #[arg(long)]
    pub degrees: bool,
}

/// A theorem id or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThmSelector {
    All,
    One(TheoremId),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub steps: Option<usize>,
}

impl Range {
    /// `steps` evenly spaced points from `lo` to `hi` inclusive.
    pub fn points(&self, default_steps: usize) -> Vec<f64> {
        let steps = self.steps.unwrap_or(default_steps);
        if steps == 1 {
            return vec![self.lo];
        }
        (0..steps)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (steps - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[arg(long, value_parser = parse_thm)]
    pub thm: ThmSelector,
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    /// Polygon count for the multi-polygon bounds.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Parameter sweep `lo:hi:steps` (radius, or total for multi-polygon bounds).
    #[arg(long, value_parser = parse_range, conflicts_with = "param")]
    pub range: Option<Range>,
    /// Single parameter value.
    #[arg(long, alias = "radius", alias = "total")]
    pub param: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_thm)]
    pub thm: ThmSelector,
    /// Fixed side count; drawn from 3..=12 per trial when absent.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Window `lo:hi` for the radius or per-polygon share.
    #[arg(long, value_parser = parse_range)]
    pub range: Option<Range>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Inequality tolerance, relative to max(1, |bound|).
    #[arg(long, default_value_t = hypiso::tol::INEQUALITY)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Cyclic,
    Tangential,
}

impl From<KindArg> for PolygonKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Cyclic => PolygonKind::Cyclic,
            KindArg::Tangential => PolygonKind::Tangential,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Cyclic)]
    pub kind: KindArg,
    /// Fixed side count; drawn from 3..=12 when absent.
    #[arg(long)]
    pub n: Option<u32>,
    /// Radius window `lo:hi`.
    #[arg(long, value_parser = parse_range)]
    pub range: Option<Range>,
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    /// Emit regular polygons only.
    #[arg(long)]
    pub regular: bool,
    /// Evaluate one given polygon: comma-separated central angles.
    #[arg(long, value_delimiter = ',', requires = "radius")]
    pub thetas: Option<Vec<f64>>,
    /// Radius of the polygon given by `--thetas`.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    /// Registered objective; defaults to the one behind `--thm`.
    #[arg(long, value_parser = parse_objective)]
    pub objective: Option<ObjectiveKind>,
    #[arg(long, value_parser = parse_thm, required_unless_present = "objective")]
    pub thm: Option<ThmSelector>,
    #[arg(long, default_value_t = 4)]
    pub n: u32,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Polygon radius for the sector objectives.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Equal-split coordinate c/k.
    #[arg(long)]
    pub center: Option<f64>,
    /// Feasibility interval `lo:hi`.
    #[arg(long, value_parser = parse_range)]
    pub range: Option<Range>,
    /// Grid oracle resolution; 200 for k = 2, 60 for k = 3.
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Reduced sample sizes (1000 polygons and trials, 200 per split campaign).
    #[arg(long)]
    pub quick: bool,
    /// Markdown (default) or the JSON report.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    pub common: Common,
}

pub fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let r = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(&h.replace('_', ""), 16),
        None => t.replace('_', "").parse(),
    };
    r.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

pub fn parse_thm(s: &str) -> Result<ThmSelector, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(ThmSelector::All);
    }
    s.parse::<TheoremId>().map(ThmSelector::One).map_err(|e| e.to_string())
}

pub fn parse_objective(s: &str) -> Result<ObjectiveKind, String> {
    s.parse::<ObjectiveKind>().map_err(|e| e.to_string())
}

/// `lo:hi` or `lo:hi:steps` with `lo < hi` and `steps >= 1`.
pub fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(format!("range {s:?} is not lo:hi or lo:hi:steps"));
    }
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("range {s:?}: {e}"));
    let (lo, hi) = (num(parts[0])?, num(parts[1])?);
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(format!("range {s:?} needs finite lo < hi"));
    }
    let steps = match parts.get(2) {
        Some(p) => {
            let v: usize = p.trim().parse().map_err(|e| format!("range {s:?}: {e}"))?;
            if v < 1 {
                return Err(format!("range {s:?} needs steps >= 1"));
            }
            Some(v)
        }
        None => None,
    };
    Ok(Range { lo, hi, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r = parse_range("0.1:3:30").unwrap();
        let p = r.points(10);
        assert_eq!(p.len(), 30);
        assert_eq!(p[0], 0.1);
        assert_eq!(p[29], 3.0);
        assert_eq!(parse_range("1:2").unwrap().steps, None);
        assert!(parse_range("2:1:3").is_err());
        assert!(parse_range("1:2:0").is_err());
        assert!(parse_range("1").is_err());
        assert!(parse_range("a:2").is_err());
    }

    #[test]
    fn seeds() {
        assert_eq!(parse_seed("0x1509_0001").unwrap(), 0x1509_0001);
        assert_eq!(parse_seed("7").unwrap(), 7);
        assert!(parse_seed("-1").is_err());
    }

    #[test]
    fn theorem_selectors() {
        assert_eq!(parse_thm("all").unwrap(), ThmSelector::All);
        assert_eq!(parse_thm("1.10").unwrap(), ThmSelector::One(TheoremId::T10));
        assert!(parse_thm("2.1").is_err());
    }
}
