use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cbct", version, about = "c-differential and c-boomerang tables of x^d over F_{p^n}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a field and print its parameters.
    FieldInfo(FieldInfoArgs),
    /// c-differential table of x^d.
    Ddt(TableArgs),
    /// c-boomerang table of x^d.
    Bct(TableArgs),
    /// One Weil sum with its branch tag.
    Weil(WeilArgs),
    /// Compare every applicable engine on row a = 1.
    Verify(VerifyArgs),
    /// Boomerang uniformity for each selected c.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub n: u32,
    /// Defining polynomial, constant coefficient first, comma separated (e.g. 1,0,1).
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
    /// Raise the field-size cap.
    #[arg(long)]
    pub max_q_override: Option<u64>,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct FunctionArgs {
    /// Monomial exponent.
    #[arg(long)]
    pub d: Option<u64>,
    /// Gold exponent p^k + 1.
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Brute,
    CharDirect,
    CharGold,
    Case,
}

#[derive(Debug, Args)]
pub struct FieldInfoArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Encoding of c.
    #[arg(long, default_value_t = 1)]
    pub c: u64,
    /// Restrict to the single entry (1, b).
    #[arg(long)]
    pub b: Option<u64>,
    #[arg(long, value_enum, default_value_t = Engine::Brute)]
    pub engine: Engine,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeilSum {
    /// S_k(A, B) = sum chi_1(A x^(p^k+1) + B x); needs --k.
    Sk,
    /// S_{alpha,beta} = sum chi_1(alpha x^d + beta (x+1)^d).
    Pair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeilMethod {
    Closed,
    Direct,
}

#[derive(Debug, Args)]
pub struct WeilArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, value_enum, default_value_t = WeilSum::Sk)]
    pub sum: WeilSum,
    /// First coefficient (A or alpha).
    #[arg(long)]
    pub alpha: u64,
    /// Second coefficient (B or beta).
    #[arg(long)]
    pub beta: u64,
    #[arg(long, value_enum, default_value_t = WeilMethod::Closed)]
    pub method: WeilMethod,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub function: FunctionArgs,
    /// c selector: an encoding, `all`, or `unit-norm`.
    #[arg(long, default_value = "all")]
    pub c: String,
    /// b selector: an encoding or `all`.
    #[arg(long, default_value = "all")]
    pub b: String,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub function: FunctionArgs,
    /// c selector: an encoding, `all`, or `unit-norm`.
    #[arg(long, default_value = "all")]
    pub c: String,
    #[arg(long, value_enum, default_value_t = Engine::Brute)]
    pub engine: Engine,
    #[command(flatten)]
    pub output: OutputArgs,
}
