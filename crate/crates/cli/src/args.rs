use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const GRAMMAR: &str = "\
Polynomial input grammar (docs/grammar.md has the full reference):
  expr   := term (('+' | '-') term)*
  term   := factor ('*' factor)*
  factor := ('-' | '+') factor | atom ('^' exp)?
  exp    := ['-' | '+'] int | '(' ['-' | '+'] int ')'
  atom   := int | int/int | 'i' | var | '(' expr ')'
A literal written against i (2i, 3/4i) is imaginary; p/q is one literal.
Variables match [A-Za-z][A-Za-z0-9_]* and may not be named i.
Exponential sums: [coef ['*']] int '^' 'n' items joined by + and -,
e.g. \"8^n + 27^n + 3*12^n + 3*18^n\".";

#[derive(Parser, Debug)]
#[command(name = "lacunary", version, about = "Exact tools for lacunary polynomial compositions", after_help = GRAMMAR)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for searches (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=1024))]
    pub threads: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a polynomial and print it (optionally raised to a power) in canonical form.
    Expand(ExpandArgs),
    /// Expand f(g) for a univariate f and a multivariate g.
    Compose(ComposeArgs),
    /// Check the classification rows and the closed-form compositions.
    VerifyTables(VerifyTablesArgs),
    /// Rediscover sparse powers P^d by exhaustive search over a coefficient grid.
    OracleSearch(OracleArgs),
    /// Evaluate the alternating binomial sum that vanishes identically.
    Vandermonde(VandermondeArgs),
    /// Multiplicative independence certificate for positive integers.
    Indep(IndepArgs),
    /// Universal Hilbert Set verdict for an exponential sum.
    UhsCheck(UhsArgs),
    /// W, C and k for f(g); or the sharpness witness; or the sumset bound.
    GapReport(GapArgs),
    /// Bounded search for the fewest terms of f(g) with sigma independent variables.
    KminSearch(KminArgs),
    /// Enumerate factorizations of an exponent vector over a generator set.
    Vecfact(VecfactArgs),
    /// Instantiate and check a perfect-power digit family.
    DigitsVerify(DigitsVerifyArgs),
    /// Exhaustive search for perfect powers with few nonzero digits.
    DigitsSearch(DigitsSearchArgs),
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    /// Polynomial expression.
    #[arg(required_unless_present = "file", allow_hyphen_values = true)]
    pub expr: Option<String>,
    /// Read the expression from a file instead.
    #[arg(long, conflicts_with = "expr")]
    pub file: Option<PathBuf>,
    /// Comma-separated variable order (default: order of appearance).
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    /// Raise to this power before printing.
    #[arg(long, default_value_t = 1)]
    pub power: u32,
}

#[derive(Args, Debug)]
pub struct ComposeArgs {
    /// Outer polynomial in one variable.
    #[arg(allow_hyphen_values = true)]
    pub f: String,
    /// Inner polynomial.
    #[arg(allow_hyphen_values = true)]
    pub g: String,
    /// Comma-separated variable order for g.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct VerifyTablesArgs {
    /// Row data file (default: the built-in rows).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Print the row data as JSON and exit.
    #[arg(long)]
    pub dump_data: bool,
    /// Check a single row instead of the full sweep.
    #[arg(long, requires = "xi1")]
    pub row: Option<String>,
    #[arg(long, requires = "row")]
    pub xi1: Option<String>,
    #[arg(long, requires = "row")]
    pub xi2: Option<String>,
    #[arg(long, default_value_t = 1, requires = "row")]
    pub l1: i64,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub d: u32,
    /// Keep powers with at most this many terms.
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub max_deg: u32,
    /// Comma-separated coefficient grid (zero is always included).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,-1,1/2,-1/2,1/4,-1/4")]
    pub grid: Vec<String>,
}

#[derive(Args, Debug)]
pub struct VandermondeArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub n: u32,
}

#[derive(Args, Debug)]
pub struct IndepArgs {
    /// Integers to test.
    #[arg(required = true)]
    pub bases: Vec<String>,
    /// Trial-division bound for factoring.
    #[arg(long, default_value_t = lacunary_core::lattice::DEFAULT_TRIAL_BOUND)]
    pub bound: u64,
}

#[derive(Args, Debug)]
pub struct UhsArgs {
    /// Exponential sum such as "2^n + 3^n".
    #[arg(required_unless_present = "file", allow_hyphen_values = true)]
    pub expr: Option<String>,
    #[arg(long, conflicts_with = "expr")]
    pub file: Option<PathBuf>,
    /// Trial-division bound for factoring the bases.
    #[arg(long, default_value_t = lacunary_core::lattice::DEFAULT_TRIAL_BOUND)]
    pub bound: u64,
}

#[derive(Args, Debug)]
pub struct GapArgs {
    /// Outer polynomial in one variable.
    #[arg(requires = "g", conflicts_with_all = ["witness", "set_a"], allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Inner polynomial.
    #[arg(allow_hyphen_values = true)]
    pub g: Option<String>,
    /// Comma-separated variable order for g.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    /// Sharpness witness for "sigma,h".
    #[arg(long, value_delimiter = ',', num_args = 1, conflicts_with = "set_a")]
    pub witness: Option<Vec<usize>>,
    /// Sumset bound: point set A as "x,y;x,y;...".
    #[arg(long, requires = "set_b", allow_hyphen_values = true)]
    pub set_a: Option<String>,
    /// Point set B, same format.
    #[arg(long, requires = "set_a", allow_hyphen_values = true)]
    pub set_b: Option<String>,
}

#[derive(Args, Debug)]
pub struct KminArgs {
    /// JSON configuration file (overrides the other search flags).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, required_unless_present = "config")]
    pub sigma: Option<usize>,
    /// Inclusive exponent range "lo,hi".
    #[arg(long = "box", value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    pub exp_box: Option<Vec<i64>>,
    #[arg(long)]
    pub h_max: Option<usize>,
    /// Outer polynomial (repeatable).
    #[arg(long)]
    pub f: Vec<String>,
    /// Comma-separated coefficients tried per monomial of g.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct VecfactArgs {
    /// Target vector "a,b,...".
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    /// Generators "a,b;c,d;...".
    #[arg(long, allow_hyphen_values = true)]
    pub gens: String,
    /// Allowed totals of the multiplicities.
    #[arg(long, value_delimiter = ',', required = true)]
    pub j: Vec<u32>,
    /// Largest multiplicity per generator (default: max of J).
    #[arg(long)]
    pub c_max: Option<u32>,
}

#[derive(Args, Debug)]
pub struct DigitsVerifyArgs {
    /// Family id (5last-1, ..., 5first-3) or "all".
    #[arg(long)]
    pub family: String,
    /// Parameter value; with --up-to, the first value checked.
    #[arg(long)]
    pub param: Option<i64>,
    /// Check every parameter from --param (or the family minimum) up to this value.
    #[arg(long)]
    pub up_to: Option<i64>,
}

#[derive(Args, Debug)]
pub struct DigitsSearchArgs {
    #[arg(long)]
    pub x: u64,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Number of nonzero digits, units digit included.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// Exponents stay strictly below this.
    #[arg(long)]
    pub m_max: i64,
    /// Allowed nonzero digits.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub digits: Vec<u64>,
    /// Leftmost gap constant for the last-digits families.
    #[arg(long, default_value = "3/4")]
    pub c_left: String,
    /// Rightmost gap constant for the first-digits families.
    #[arg(long, default_value = "1/3")]
    pub c_right: String,
    /// Resumable checkpoint file.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many shards (resume later with --checkpoint).
    #[arg(long)]
    pub max_shards: Option<usize>,
}
