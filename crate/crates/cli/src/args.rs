use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "frobsoc", version, about = "Frobenius-power invariants of graded quotient rings over F_p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Compare the report with a golden file; exit 2 on mismatch.
    #[arg(long, global = true, value_name = "GOLDEN")]
    pub check: Option<PathBuf>,

    /// Worker threads for sweeps over q.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    /// Memory budget per graded piece, in megabytes.
    #[arg(long, global = true, value_name = "MB")]
    pub memory_budget: Option<usize>,

    /// Per-q timings on stderr.
    #[arg(long, short, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

/// Where the ring comes from: a ring file, or an inline Fermat curve.
#[derive(Debug, Clone, Args)]
pub struct RingArgs {
    /// Ring file (TOML); looked up in ./rings and the bundled rings too.
    #[arg(long)]
    pub ring: Option<String>,

    /// Fermat curve x^n + y^n + z^n over F_p, ideal (x^d, y^d, z^d).
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,

    /// Ideal generators, comma separated, or `m`.
    #[arg(long)]
    pub ideal: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct QArgs {
    /// Explicit powers of p.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,

    /// All of p, p^2, ... up to this bound.
    #[arg(long)]
    pub q_max: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Top socle degree of R/I^[q].
    Tsd {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        q: QArgs,
    },
    /// Socle dimensions of R/I^[q].
    Socle {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        q: QArgs,
    },
    /// Hilbert function and length of R/I^[q].
    Hk {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        q: QArgs,
    },
    /// Diagonal F-threshold estimate from t.s.d samples.
    Cthreshold {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        q: QArgs,
    },
    /// m(q), L(q) and the predicted socle length of a minimal-HK hypersurface.
    Bc {
        /// Embedding dimension minus one.
        #[arg(long)]
        n: u32,
        /// Degree of the hypersurface.
        #[arg(long)]
        d: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        /// Also compute on this ring file and check attainment.
        #[arg(long)]
        ring: Option<String>,
    },
    /// Stirling-number identities for n = 2..n_max.
    Identities {
        #[arg(long, default_value_t = 30)]
        n_max: u32,
    },
    /// Strong semistability on a Fermat curve.
    Fermat {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        /// Largest probe; 128 for p = 2 and p^3 otherwise.
        #[arg(long)]
        q_max: Option<u64>,
    },
    /// Syzygy gap of (x^a, y^a, (x+y)^a).
    SyzygyGap {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        a_min: u32,
        #[arg(long)]
        a_max: u32,
    },
    /// Hom length, Tor_1 length and beta_2 side by side.
    Betti {
        #[arg(long)]
        ring: String,
        /// Generators of J.
        #[arg(long)]
        j: String,
        /// Element u acting on R/J.
        #[arg(long)]
        u: String,
        /// The ideal a; defaults to m.
        #[arg(long, default_value = "m")]
        a: String,
        #[command(flatten)]
        q: QArgs,
    },
}
