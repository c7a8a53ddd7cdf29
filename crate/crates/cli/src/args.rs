use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mhz_core::{c64, ComplexValue};

use crate::config::CONFIG_ENV;

#[derive(Debug, Parser)]
#[command(name = "mhz", version, about = "Numerical laboratory for multiple Hurwitz zeta-functions")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    /// Overrides the configured RNG seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides the configured thread count.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate ζ_n(s; α) with one method.
    Eval(EvalArgs),
    /// Scan vertical shifts against a target on a box.
    Scan(ScanArgs),
    /// Mean square on the critical hyperplane.
    Meansquare(MeanSquareArgs),
    /// Locate zeros in a box.
    Zeros(ZerosArgs),
    /// Decompose a polynomial into a monomial tableau and verify it.
    Decomp(DecompArgs),
    /// Diagnostics of a type-(N₀, χ) twist.
    Twist(TwistArgs),
    /// Monte Carlo density of a Weyl target set.
    Weyl(WeylArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Trunc,
    Smoothed,
    Afe,
    Mb,
    Diag,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub n: usize,
    /// Coordinates as re,im.
    #[arg(long, num_args = 1.., required = true, value_parser = parse_complex)]
    pub s: Vec<ComplexValue>,
    /// Parameters as r:c/d or t:x.
    #[arg(long, num_args = 1.., required = true)]
    pub alpha: Vec<String>,
    #[arg(long, value_enum, default_value = "afe")]
    pub method: Method,
    /// Truncation point of the trunc method.
    #[arg(long = "N", default_value_t = 1000)]
    pub n_max: usize,
    /// Smoothing scale of the smoothed method; defaults to the evaluator's.
    #[arg(long = "T")]
    pub t_scale: Option<f64>,
    /// Contour recursion depth of the mb method; defaults to n − 1.
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Continuous,
    Discrete,
    Line,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// A complete scan specification in JSON; the other scan flags are ignored.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, num_args = 1..)]
    pub alpha: Vec<String>,
    #[arg(long, value_enum, default_value = "continuous")]
    pub mode: Mode,
    /// Step per axis (continuous), or the single line step.
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = parse_real)]
    pub step: Vec<f64>,
    /// Lattice spacing per axis (discrete).
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = parse_real)]
    pub delta: Vec<f64>,
    /// Line direction (line).
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = parse_real)]
    pub direction: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Polynomial target in s1..sn.
    #[arg(long, conflicts_with = "constant")]
    pub target: Option<String>,
    /// Constant target re,im.
    #[arg(long, value_parser = parse_complex)]
    pub constant: Option<ComplexValue>,
    /// Box centre per coordinate as re,im.
    #[arg(long, num_args = 1.., value_parser = parse_complex)]
    pub center: Vec<ComplexValue>,
    #[arg(long, default_value_t = 0.02)]
    pub half_width: f64,
    /// Grid points per axis of each coordinate square.
    #[arg(long, default_value_t = 9)]
    pub grid: usize,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Further ε at which to report the density of the same records.
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = parse_real)]
    pub also_epsilon: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct MeanSquareArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub alpha: Vec<String>,
    #[arg(long = "T")]
    pub t_max: f64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Overrides the configured ξ.
    #[arg(long)]
    pub xi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub alpha: Vec<String>,
    /// One rectangle per coordinate as re_lo,re_hi,im_lo,im_hi.
    #[arg(long, num_args = 1.., required = true, value_parser = parse_rect)]
    pub rect: Vec<[f64; 4]>,
    #[arg(long, default_value_t = 21)]
    pub grid_re: usize,
    #[arg(long, default_value_t = 2001)]
    pub grid_im: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub refine_tol: f64,
    #[arg(long, default_value_t = 0.5)]
    pub seed_threshold: f64,
}

#[derive(Debug, Args)]
pub struct DecompArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(long = "C")]
    pub c: f64,
    /// Real parts of the strip box, lo,hi.
    #[arg(long, value_parser = parse_complex, default_value = "0.6,0.9")]
    pub sigma: ComplexValue,
    /// Half-height of the strip box.
    #[arg(long, default_value_t = 1.0)]
    pub height: f64,
    #[arg(long, default_value_t = 9)]
    pub grid: usize,
    /// Number of variables; defaults to the largest index in the polynomial.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TwistArgs {
    #[arg(long)]
    pub alpha: String,
    /// Character modulus.
    #[arg(long)]
    pub q: u64,
    /// Index into the character table mod q (0 is principal).
    #[arg(long, default_value_t = 1)]
    pub index: usize,
    #[arg(long)]
    pub n0: u64,
    /// Free values as key=re,im.
    #[arg(long, num_args = 1.., value_parser = parse_free)]
    pub free: Vec<(u64, ComplexValue)>,
    #[arg(long, default_value_t = 1000)]
    pub indices: u64,
    #[arg(long, default_value_t = 100_000)]
    pub n_max: u64,
    #[arg(long, default_value_t = 16)]
    pub window: u64,
    #[arg(long, default_value_t = 2.5)]
    pub series_s: f64,
}

impl TwistArgs {
    pub fn free_map(&self) -> BTreeMap<u64, ComplexValue> {
        self.free.iter().copied().collect()
    }
}

#[derive(Debug, Args)]
pub struct WeylArgs {
    #[arg(long)]
    pub alpha: String,
    /// N: the constrained points are k + α ≤ N, or the primes ≤ N.
    #[arg(long = "N")]
    pub cutoff: u64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long = "T")]
    pub t_max: f64,
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = parse_real)]
    pub targets: Vec<f64>,
    #[arg(long)]
    pub displayed_form: bool,
}

pub fn parse_real(text: &str) -> Result<f64, String> {
    text.trim().parse().map_err(|_| format!("{text:?} is not a number"))
}

pub fn parse_complex(text: &str) -> Result<ComplexValue, String> {
    let (re, im) = text.split_once(',').unwrap_or((text, "0"));
    let re: f64 = re.trim().parse().map_err(|_| format!("{text:?} is not re,im"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("{text:?} is not re,im"))?;
    Ok(c64(re, im))
}

pub fn parse_rect(text: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = text
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("{text:?} is not re_lo,re_hi,im_lo,im_hi"))?;
    v.try_into().map_err(|_| format!("{text:?} needs four numbers"))
}

pub fn parse_free(text: &str) -> Result<(u64, ComplexValue), String> {
    let (k, v) = text.split_once('=').ok_or_else(|| format!("{text:?} is not key=re,im"))?;
    let k: u64 = k.trim().parse().map_err(|_| format!("{text:?}: bad key"))?;
    Ok((k, parse_complex(v)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_parsers() {
        assert_eq!(parse_complex("2,-0.5").unwrap(), c64(2.0, -0.5));
        assert_eq!(parse_real(" -1.5").unwrap(), -1.5);
        assert_eq!(parse_complex("3").unwrap(), c64(3.0, 0.0));
        assert!(parse_complex("2;0").is_err());
        assert_eq!(parse_rect("0.5,1,0,20").unwrap(), [0.5, 1.0, 0.0, 20.0]);
        assert!(parse_rect("0.5,1,0").is_err());
        assert_eq!(parse_free("2=0,1").unwrap(), (2, c64(0.0, 1.0)));
        assert!(parse_free("2:0,1").is_err());
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
