use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Desk-scale experiments on growth in SL_n(F_q).
///
/// Every run writes CSV: a `# config:` comment with the full configuration,
/// a timestamp comment unless `--deterministic` is given, then a header row
/// and one observation per row.
#[derive(Debug, Parser, Serialize)]
#[command(name = "growthlab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,

    /// Suppress the timestamp comment so repeated runs are byte-identical.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub deterministic: bool,
}

/// Which groups a run covers: `--groups n:p[:k],…`, or `--primes`/`--p`
/// together with `--n` and `--k`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Target {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    pub groups: Vec<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Gens {
    /// `elementary`, `random:SEED[:COUNT]`, or matrices as
    /// `a,b,c,d;e,f,g,h` (row-major; extension entries as `a+bt`).
    #[arg(long, default_value = "elementary")]
    pub gens: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SetArg {
    /// `full-group`, `gens`, `ball:R`, `random:SIZE` or `split-torus`.
    #[arg(long, default_value = "ball:1")]
    pub set: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Seed {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarietyArg {
    SplitTorus,
    Singular,
    Centralizer,
    Class,
    Group,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToriMode {
    Census,
    Centralizers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenMode {
    Dickson,
    Corpus,
    FiniteIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupArg {
    /// The quaternion subgroup of SL_2(F_3): elements of order dividing 4.
    Q8,
    Center,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Group order from the product formula, optionally checked by enumeration.
    Order {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        enumerate: bool,
    },
    /// Sizes of S^{3^i} until they pass |G|^{1-delta} or stall.
    Growth {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        gens: Gens,
        #[command(flatten)]
        set: SetArg,
        #[command(flatten)]
        seed: Seed,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Run every generation-corpus set instead of `--set`.
        #[arg(long)]
        corpus: bool,
    },
    /// Greedy K-approximate-subgroup certificate.
    ApproxCert {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        gens: Gens,
        #[command(flatten)]
        set: SetArg,
        #[command(flatten)]
        seed: Seed,
    },
    /// Whether B (`--by`) K-controls A (`--set`).
    Control {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        gens: Gens,
        #[command(flatten)]
        set: SetArg,
        #[arg(long, default_value = "ball:2")]
        by: String,
        #[command(flatten)]
        seed: Seed,
        #[arg(long, default_value_t = 64)]
        k_max: usize,
    },
    /// Exact Cayley diameter and the counting lower bound.
    Diameter {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        gens: Gens,
        /// Also emit the ball profile, one row per radius.
        #[arg(long)]
        profile: bool,
    },
    /// Girth of a two-element generating set.
    Girth {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        gens: Gens,
    },
    /// Generation, diameter and girth of seeded random pairs.
    RandomStats {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        seed: Seed,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        /// One row per group instead of one per trial.
        #[arg(long)]
        summary: bool,
    },
    /// |A^m ∩ V| against the exponent dim V / dim G.
    Lp {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        gens: Gens,
        #[arg(long, default_value = "full-group")]
        set: String,
        #[command(flatten)]
        seed: Seed,
        #[arg(long, value_enum, default_value_t = VarietyArg::SplitTorus)]
        variety: VarietyArg,
        /// Element for `centralizer` and `class`; defaults to the first
        /// non-central diagonal element.
        #[arg(long)]
        at: Option<String>,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Involved-tori census of A^2, or the centralizer dichotomy.
    Tori {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        gens: Gens,
        #[arg(long, default_value = "full-group")]
        set: String,
        #[command(flatten)]
        seed: Seed,
        #[arg(long, value_enum, default_value_t = ToriMode::Census)]
        mode: ToriMode,
    },
    /// Fraction of all tori that are involved, against conjugation density.
    Invariance {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        gens: Gens,
        #[arg(long, default_value = "ball:2")]
        set: String,
        #[command(flatten)]
        seed: Seed,
    },
    /// |T^a · T| for generic and normalizing a.
    ConjProduct {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        seed: Seed,
    },
    /// Slope of log |V(F_p)| against log p.
    DimFit {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = VarietyArg::Group)]
        variety: VarietyArg,
    },
    /// Sum and product set sizes by family, or rational images with `--psi`.
    Sumprod {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        seed: Seed,
        #[arg(long, value_delimiter = ',', default_value = "ap,gp,random")]
        family: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "50")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 2.0)]
        k_thresh: f64,
        /// Rational expression in x1, x2, x3.
        #[arg(long)]
        psi: Option<String>,
    },
    /// Size and tripling of the SL_2 lift of a scalar set.
    Lift {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        seed: Seed,
        #[arg(long, value_delimiter = ',', default_value = "ap")]
        family: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "10")]
        sizes: Vec<usize>,
    },
    /// Generation tests: Dickson's criterion, the corpus comparison, or the
    /// finite-index check.
    GenTest {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        gens: Gens,
        #[command(flatten)]
        seed: Seed,
        #[arg(long, value_enum, default_value_t = GenMode::Dickson)]
        mode: GenMode,
        #[arg(long, value_enum, default_value_t = SubgroupArg::Center)]
        subgroup: SubgroupArg,
        #[arg(long)]
        d: Option<usize>,
    },
    /// A^3 = G for random symmetric sets just above |G| / d_min^{1/3}.
    Gowers {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        seed: Seed,
        #[arg(long, default_value_t = 20)]
        trials: u64,
    },
    /// diam ≈ C1 (log|G|)^{C2} over a family of groups.
    Fit {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        gens: Gens,
    },
}
