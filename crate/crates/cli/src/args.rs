//! Command-line configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pickone_core::world::{Variant, WorldParams};

use crate::report::Format;

#[derive(Parser, Debug, Clone)]
#[command(name = "pickone-lab", version, about = "Seeded experiments on the pick-one oracle world")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Master seed; every trial seed is derived from it.
    #[arg(long)]
    pub seed: u64,
    /// Monte-Carlo trials (or ensemble size); each command has its own default.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Report path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads. Results do not depend on this value.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

impl Common {
    pub fn trials_or(&self, default: u64) -> u64 {
        self.trials.unwrap_or(default)
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Sample a protocol world, check its tables and optionally write it as JSON.
    WorldDump(WorldDumpArgs),
    /// One-element search on two-values instances, its rotation algebra and naive collision strategies.
    Pickone(PickoneArgs),
    /// Equivocation attack on the bitwise commitment.
    CommitAttack(CommitArgs),
    /// Sigma-protocol attack paired with the naive extractor.
    SigmaAttack(SigmaArgs),
    /// Fiat-Shamir attack against single-run failure.
    FsAttack(FsArgs),
    /// Fischlin attack against its acceptance bound.
    FischlinAttack(FischlinArgs),
    /// State-creation oracle emulation and the symmetric-subspace reflection.
    OpsiEmulation(EmulationArgs),
    /// Johnson-scheme identity sweep and the initial-state weight check.
    JohnsonCheck(JohnsonArgs),
    /// Exact statistical distances and tails against their bounds.
    StatLemmas(StatArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::WorldDump(_) => "world-dump",
            Command::Pickone(_) => "pickone",
            Command::CommitAttack(_) => "commit-attack",
            Command::SigmaAttack(_) => "sigma-attack",
            Command::FsAttack(_) => "fs-attack",
            Command::FischlinAttack(_) => "fischlin-attack",
            Command::OpsiEmulation(_) => "opsi-emulation",
            Command::JohnsonCheck(_) => "johnson-check",
            Command::StatLemmas(_) => "stat-lemmas",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::WorldDump(a) => &a.common,
            Command::Pickone(a) => &a.common,
            Command::CommitAttack(a) => &a.common,
            Command::SigmaAttack(a) => &a.common,
            Command::FsAttack(a) => &a.common,
            Command::FischlinAttack(a) => &a.common,
            Command::OpsiEmulation(a) => &a.common,
            Command::JohnsonCheck(a) => &a.common,
            Command::StatLemmas(a) => &a.common,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum VariantArg {
    #[default]
    Statistical,
    Computational,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Statistical => Variant::Statistical,
            VariantArg::Computational => Variant::Computational,
        }
    }
}

/// Bit lengths of the protocol world.
#[derive(Args, Debug, Clone)]
pub struct WorldArgs {
    #[arg(long, default_value_t = 4)]
    pub l_com: u32,
    #[arg(long, default_value_t = 2)]
    pub l_ch: u32,
    #[arg(long, default_value_t = 9)]
    pub l_resp: u32,
    #[arg(long, value_enum, default_value_t = VariantArg::Statistical)]
    pub variant: VariantArg,
}

impl WorldArgs {
    pub fn params(&self) -> pickone_core::Result<WorldParams> {
        WorldParams::new(self.l_com, self.l_ch, self.l_resp)
    }

    pub fn echo(&self) -> serde_json::Value {
        serde_json::json!({
            "l_com": self.l_com,
            "l_ch": self.l_ch,
            "l_resp": self.l_resp,
            "variant": Variant::from(self.variant),
        })
    }
}

#[derive(Args, Debug, Clone)]
pub struct WorldDumpArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 4)]
    pub l_com: u32,
    #[arg(long, default_value_t = 2)]
    pub l_ch: u32,
    #[arg(long, default_value_t = 6)]
    pub l_resp: u32,
    #[arg(long, value_enum, default_value_t = VariantArg::Statistical)]
    pub variant: VariantArg,
    /// Simulation-sample queries made before dumping, so the lazy table is populated.
    #[arg(long, default_value_t = 16)]
    pub queries: u64,
    /// Where to write the world as JSON.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct PickoneArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of hidden subsets `M`.
    #[arg(long, default_value_t = 1)]
    pub y_size: usize,
    /// Size `N` of the element space.
    #[arg(long, default_value_t = 256)]
    pub x_size: usize,
    /// Subset size `k`.
    #[arg(long, default_value_t = 16)]
    pub k: usize,
    /// Repetition budget; the failure target is `2^-n`.
    #[arg(long, default_value_t = 10)]
    pub n: u32,
    /// Promised lower bounds on the marked fraction, as decimals or `p/q`.
    #[arg(long, value_delimiter = ',', value_parser = parse_fraction, default_values = ["1/3", "1/2"])]
    pub delta_min: Vec<f64>,
    /// Random instances per promise.
    #[arg(long, default_value_t = 100)]
    pub instances: u64,
    /// Largest inner-round index checked by the rotation identity.
    #[arg(long, default_value_t = 4)]
    pub max_j: u32,
    /// Query budget of the naive collision strategies.
    #[arg(long, default_value_t = 4)]
    pub q_budget: u32,
    #[arg(long, default_value_t = 500)]
    pub collision_trials: u64,
}

#[derive(Args, Debug, Clone)]
pub struct CommitArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub world: WorldArgs,
    /// Message length in bits.
    #[arg(long, default_value_t = 8)]
    pub msg_len: u32,
    /// Required success rate.
    #[arg(long, default_value_t = 0.9)]
    pub threshold: f64,
}

#[derive(Args, Debug, Clone)]
pub struct SigmaArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub world: WorldArgs,
    /// Membership probes of the naive extractor.
    #[arg(long, default_value_t = 100)]
    pub q_v: u32,
    /// Simulation-sample queries of the naive extractor.
    #[arg(long, default_value_t = 0)]
    pub q_s: u32,
    /// Required adversary success rate.
    #[arg(long, default_value_t = 0.9)]
    pub adversary_threshold: f64,
    /// Largest tolerated extractor success rate.
    #[arg(long, default_value_t = 0.02)]
    pub extractor_threshold: f64,
    /// World used for the exhaustive special-soundness check.
    #[arg(long, default_value_t = 3)]
    pub soundness_l_com: u32,
    #[arg(long, default_value_t = 2)]
    pub soundness_l_ch: u32,
    #[arg(long, default_value_t = 4)]
    pub soundness_l_resp: u32,
    #[arg(long, default_value_t = 3)]
    pub soundness_worlds: u64,
}

#[derive(Args, Debug, Clone)]
pub struct FsArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub world: WorldArgs,
    /// Parallel repetitions.
    #[arg(long, default_value_t = 3)]
    pub r: usize,
}

#[derive(Args, Debug, Clone)]
pub struct FischlinArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub world: WorldArgs,
    /// Hash output bits.
    #[arg(long, default_value_t = 2)]
    pub b: u32,
    /// Repetitions.
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    /// Largest accepted hash sum.
    #[arg(long, default_value_t = 0)]
    pub s_bound: u64,
    /// Challenge bits per repetition.
    #[arg(long, default_value_t = 2)]
    pub t: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum RefModeArg {
    /// Reflection about the symmetric subspace of the work register and the copies.
    #[default]
    SymmetricTest,
    /// Exact reflection about `Ψ`.
    ExactRef,
}

#[derive(Args, Debug, Clone)]
pub struct EmulationArgs {
    #[command(flatten)]
    pub common: Common,
    /// Single-copy dimension.
    #[arg(long, default_value_t = 5)]
    pub d: usize,
    /// Number of oracle queries.
    #[arg(long, default_value_t = 3)]
    pub q: usize,
    /// Interpolant counts.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 4, 8])]
    pub n: Vec<usize>,
    /// Reference copy counts.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 4, 8])]
    pub m: Vec<usize>,
    #[arg(long, value_enum, default_value_t = RefModeArg::SymmetricTest)]
    pub mode: RefModeArg,
    /// Copy counts for the standalone reflection check.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 4])]
    pub ref_m: Vec<usize>,
    /// Random inputs orthogonal to `Ψ` per copy count.
    #[arg(long, default_value_t = 100)]
    pub ref_inputs: u64,
}

#[derive(Args, Debug, Clone)]
pub struct JohnsonArgs {
    #[command(flatten)]
    pub common: Common,
    /// Largest `N` of the sweep; the sweep starts at 5.
    #[arg(long, default_value_t = 12)]
    pub nmax: usize,
    /// Initial-state weight check as `M,N,k,h`.
    #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [2usize, 4, 2, 2])]
    pub initial: Vec<usize>,
    /// Also write the raw identity table `(N, k, identity, computed, closed_form, abs_err)` as CSV.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct StatArgs {
    #[command(flatten)]
    pub common: Common,
    /// Largest `log2 |X|` on every enumerated grid.
    #[arg(long, default_value_t = 10)]
    pub max_x_bits: u32,
}

/// Parses `0.5` or `1/3`.
pub fn parse_fraction(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) =
                (a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?);
            a / b
        }
        None => s.trim().parse().map_err(|e| format!("{e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not a finite number: {s}"))
    }
}
