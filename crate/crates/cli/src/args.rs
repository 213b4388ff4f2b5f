use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "fermionic", version, about = "Fermionic p-adic integrals and measures on Z_p")]
pub struct Cli {
    /// Emit a JSON record instead of human-readable text.
    #[arg(long, global = true)]
    pub structured: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Field {
    /// Odd prime p.
    #[arg(long)]
    pub p: u64,

    /// Relative precision N (digits of p kept per value).
    #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..=4096))]
    pub prec: u32,
}

#[derive(Args, Debug, Clone)]
pub struct MeasureSource {
    /// Function literal inducing the measure, e.g. `poly:0,1` or `mahler:1,3,9`.
    #[arg(long)]
    pub f: Option<String>,

    /// Measure table file ("p N L kind" header, then "a n value" lines).
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the Euler numbers E_0..E_K.
    Euler {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        upto: usize,
    },
    /// Evaluate the fermionic integral of f in closed form.
    Integrate {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        f: String,
    },
    /// Alternating partial sum over x < p^m.
    Sum {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        f: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=64))]
        m: u32,
        /// Maximum number of summed terms.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Value of the induced measure on a cylinder a + p^n Z_p.
    Measure {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        f: String,
        /// Cylinder as "a,n".
        #[arg(long)]
        cyl: String,
    },
    /// Tabulate the induced measure on every cylinder up to a depth.
    Tabulate {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        f: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=16))]
        depth: u32,
    },
    /// Level-n approximation of the derivative at a point, with its error bound.
    Derivative {
        #[command(flatten)]
        field: Field,
        #[command(flatten)]
        source: MeasureSource,
        #[arg(long)]
        point: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=32))]
        level: u32,
    },
    /// Run a verification and print its report.
    Check {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Subcommand, Debug)]
pub enum Check {
    /// Integration against the measure of P equals integration of g P.
    Theorem1 {
        #[command(flatten)]
        field: Field,
        /// Polynomial P inducing the measure.
        #[arg(long)]
        f: String,
        /// Integrand g.
        #[arg(long)]
        g: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
        level: u32,
        #[arg(long, default_value_t = 1)]
        slack: u32,
    },
    /// mu(a + p^n Z_p) = (-1)^a P(a) (mod p^n).
    Congruence {
        #[command(flatten)]
        field: Field,
        #[arg(long)]
        f: String,
        #[arg(long)]
        cyl: String,
    },
    /// A cylinder's value equals the sum over its children. With both
    /// --f and --table the measure checked is their sum.
    Additivity {
        #[command(flatten)]
        field: Field,
        #[command(flatten)]
        source: MeasureSource,
        #[arg(long)]
        cyl: String,
    },
    /// Fit delta_n <= c p^-n over levels 0..=level.
    Strong {
        #[command(flatten)]
        field: Field,
        #[command(flatten)]
        source: MeasureSource,
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=16))]
        level: u32,
    },
    /// Split the measure into a function-induced part and a remainder.
    Decompose {
        #[command(flatten)]
        field: Field,
        #[command(flatten)]
        source: MeasureSource,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
        level: u32,
    },
}
