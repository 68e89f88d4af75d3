use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "hankel", version, about = "Exact u-expansions of Drinfeld quasi-modular forms and their Hankel determinants")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct GlobalOpts {
    /// TOML file with defaults for q, e, modulus, precision, cache_dir, jobs
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel checks
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, env = "HANKEL_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct FieldOpts {
    /// Field order q = p^e (or p, together with --e)
    #[arg(long)]
    pub q: Option<u32>,
    /// Extension degree; with a prime --q builds F_{q^e}
    #[arg(long)]
    pub e: Option<u32>,
    /// Irreducible modulus in w for extension fields, e.g. "w^2 + w + 1"
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the u-expansion of a form: E, g, h, Delta, d, Ebold, hbold, E[j,k], F[m], powersum[m]
    Compute {
        form: String,
        #[command(flatten)]
        field: FieldOpts,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Run a verification suite (theorem1, theorem2, identities, lemmas, moore, all) or the golden check
    Verify {
        suite: String,
        /// Comma-separated field orders
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        prec: Option<i64>,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long)]
        jmax: Option<u32>,
        /// Random Moore tuples per field
        #[arg(long)]
        samples: Option<usize>,
        /// Random series per field for the divisibility check
        #[arg(long)]
        random_series: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory of golden files for `verify golden`
        #[arg(long)]
        golden_dir: Option<PathBuf>,
    },
    /// Write a form as an isobaric polynomial in E, g, h
    Decompose {
        form: String,
        #[command(flatten)]
        field: FieldOpts,
        #[arg(long)]
        w: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Find the normalised form of largest vanishing order in a space
    Extremal {
        #[command(flatten)]
        field: FieldOpts,
        #[arg(long)]
        w: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Inspect or empty the result cache
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum CacheAction {
    List,
    Clear,
}
