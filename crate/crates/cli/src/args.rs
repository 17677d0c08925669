use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "weylks",
    version,
    about = "Verify, check, and search for Weyl-algebra contextuality certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a certificate admits a value assignment.
    Verify(VerifyArgs),
    /// Re-check the algebraic claims of a certificate numerically.
    Oracle(OracleArgs),
    /// Search for an obstruction certificate within bounds.
    Search(SearchArgs),
    /// Pretty-print a certificate with its constraint trace.
    Print(PrintArgs),
}

#[derive(Debug, Args)]
pub struct Source {
    /// Certificate file (JSON).
    #[arg(conflicts_with = "builtin", required_unless_present = "builtin")]
    pub path: Option<PathBuf>,
    /// Built-in certificate: peres2 or mermin3.
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the JSON report to this path.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PrintArgs {
    #[command(flatten)]
    pub source: Source,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Matrix,
    Grid,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(value_enum)]
    pub target: Target,
    /// Certificate file (JSON).
    #[arg(conflicts_with = "builtin")]
    pub path: Option<PathBuf>,
    /// Built-in certificate: peres2 or mermin3.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Use the smallest dimension realizing every ratio (the default).
    #[arg(long, conflicts_with = "dim")]
    pub dim_auto: bool,
    /// Per-dof matrix dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Grid points per dof.
    #[arg(long = "grid-N", default_value_t = 8)]
    pub grid_n: usize,
    /// Grid period per dof.
    #[arg(long, default_value_t = std::f64::consts::TAU)]
    pub period: f64,
    /// Seed for random states and diagonalization.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random grid states per claim.
    #[arg(long, default_value_t = 100)]
    pub states: usize,
    /// Check the two-dof delta state against both four-fold operators.
    #[arg(long, conflicts_with_all = ["path", "builtin", "ghz"])]
    pub epr: bool,
    /// Offset of the delta state.
    #[arg(long, default_value_t = 0.0, requires = "epr")]
    pub x0: f64,
    /// List joint eigenstates of the three-dof triple products.
    #[arg(long, conflicts_with_all = ["path", "builtin"])]
    pub ghz: bool,
    /// Write joint eigenstates as JSON arrays of [re, im] pairs.
    #[arg(long, value_name = "PATH")]
    pub dump_states: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Number of position-momentum degrees of freedom.
    #[arg(long)]
    pub dofs: usize,
    /// Largest absolute exponent per generator.
    #[arg(long, default_value_t = 1)]
    pub max_exp: i64,
    /// Largest number of members in one context.
    #[arg(long, default_value_t = 4)]
    pub max_context_size: usize,
    /// Largest number of contexts in a certificate.
    #[arg(long, default_value_t = 8)]
    pub max_contexts: usize,
    /// Node budget, e.g. 1000000, 1e6, or 10^6.
    #[arg(long, value_parser = parse_count)]
    pub nodes: Option<u64>,
    /// Wall-clock budget in seconds; results are then not reproducible.
    #[arg(long, value_name = "SECONDS")]
    pub time_budget: Option<f64>,
    /// Symplectic ratios, comma separated (default all 1).
    #[arg(long, value_delimiter = ',')]
    pub theta: Option<Vec<String>>,
    /// Only U generators.
    #[arg(long)]
    pub u_only: bool,
    /// Disable symmetry reduction.
    #[arg(long)]
    pub no_symmetry: bool,
    /// Write a found certificate to this path.
    #[arg(long, value_name = "PATH")]
    pub emit: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

/// Parses `N`, `AeB`, or `A^B`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let bad = || format!("invalid count {s:?}");
    let s = s.trim().replace('_', "");
    if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.parse().map_err(|_| bad())?;
        let exp: u32 = exp.parse().map_err(|_| bad())?;
        return base.checked_pow(exp).ok_or_else(bad);
    }
    if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        let mant: u64 = mant.parse().map_err(|_| bad())?;
        let exp: u32 = exp.parse().map_err(|_| bad())?;
        return 10u64
            .checked_pow(exp)
            .and_then(|p| p.checked_mul(mant))
            .ok_or_else(bad);
    }
    s.parse().map_err(|_| bad())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("10^6"), Ok(1_000_000));
        assert_eq!(parse_count("2e3"), Ok(2000));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert!(parse_count("10^99").is_err());
        assert!(parse_count("x").is_err());
    }
}
